"""Exception types shared across the package."""


class GraphFormatError(ValueError):
    """A graph document failed validation; the message names the location."""


class ContractError(ValueError):
    """An operation was called outside its documented preconditions."""


class ResourceError(RuntimeError):
    """A configured size cap (LP columns, copy count) was exceeded."""
