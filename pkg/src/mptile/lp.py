"""Exact revised simplex for the two LP shapes used by the package.

Columns are sparse with a shared coefficient pattern: column j has value
``coef[t]`` in row ``idx[j, t]``.  That covers rooted cliques (root first,
coefficients a, b, ..., b) and H-copies (all ones).  Right-hand side is the
all-ones vector.

Arithmetic is ``Fraction`` throughout.  Pricing scales the duals to a common
denominator and evaluates reduced-cost signs in integer arithmetic, vectorised
with numpy (int64 when the magnitudes provably fit, Python ints otherwise).
Pricing is Dantzig's rule; after a run of degenerate pivots it switches to
Bland's rule until the objective moves again, which rules out cycling.
The leaving variable is always chosen by Bland's lowest-index tie-break.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

_INT64_SAFE = 2**62
# consecutive degenerate pivots after which pricing falls back to Bland's rule
DEGENERATE_STREAK = 20


@dataclass
class LPResult:
    feasible: bool
    objective: Fraction
    weights: dict[int, Fraction]  # structural column -> positive value
    duals: list[Fraction]
    pivots: int


def _lcm_denominators(values) -> int:
    d = 1
    for v in values:
        d = d * v.denominator // math.gcd(d, v.denominator)
    return d


class _Simplex:
    def __init__(self, idx: np.ndarray, coef: Sequence[Fraction], m: int, struct_cost: int, aux_cost: int):
        self.idx = np.ascontiguousarray(idx, dtype=np.int64)
        self.N = self.idx.shape[0]
        self.k = self.idx.shape[1] if self.idx.ndim == 2 else 0
        self.coef = [Fraction(c) for c in coef]
        self.m = m
        self.struct_cost = struct_cost
        self.aux_cost = aux_cost
        q = _lcm_denominators(self.coef) if self.coef else 1
        self.coef_den = q
        self.coef_int = [int(c * q) for c in self.coef]
        self.basis = [self.N + i for i in range(m)]
        self.binv = [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
        self.xb = [Fraction(1)] * m
        self.pivots = 0

    def cost(self, col: int) -> int:
        return self.struct_cost if col < self.N else self.aux_cost

    def duals(self) -> list[Fraction]:
        cb = [self.cost(c) for c in self.basis]
        y = [Fraction(0)] * self.m
        for k, ck in enumerate(cb):
            if ck:
                row = self.binv[k]
                for i in range(self.m):
                    if row[i]:
                        y[i] += ck * row[i]
        return y

    def _entering(self, y: list[Fraction], bland: bool) -> int | None:
        """Entering column: most negative reduced cost, or lowest index if ``bland``."""
        D = _lcm_denominators(y)
        Y = [int(v * D) for v in y]
        q = self.coef_den
        # reduced costs scaled by D*q, aux columns after structural ones
        aux = [self.aux_cost * D * q - Yi * q for Yi in Y]
        best_col, best_val = None, 0
        if self.N and self.k:
            scale = self.struct_cost * D * q
            bound = max((abs(v) for v in Y), default=0) * max(abs(c) for c in self.coef_int) * self.k
            if bound < _INT64_SAFE and abs(scale) < _INT64_SAFE:
                Yarr = np.array(Y, dtype=np.int64)
                K = np.array(self.coef_int, dtype=np.int64)
            else:
                Yarr = np.array(Y, dtype=object)
                K = np.array(self.coef_int, dtype=object)
            red = scale - (Yarr[self.idx] * K).sum(axis=1)
            if bland:
                neg = np.flatnonzero(red < 0)
                if neg.size:
                    return int(neg[0])
            else:
                j = int(np.argmin(red))
                if red[j] < 0:
                    best_col, best_val = j, red[j]
        for i, d in enumerate(aux):
            if d < best_val:
                if bland:
                    return self.N + i
                best_col, best_val = self.N + i, d
        return best_col

    def column(self, col: int) -> list[Fraction]:
        if col >= self.N:
            i = col - self.N
            return [self.binv[r][i] for r in range(self.m)]
        rows = self.idx[col]
        out = []
        for r in range(self.m):
            brow = self.binv[r]
            acc = Fraction(0)
            for t in range(self.k):
                v = brow[rows[t]]
                if v:
                    acc += self.coef[t] * v
            out.append(acc)
        return out

    def pivot(self, p: int, col: int, u: list[Fraction]) -> None:
        piv = u[p]
        prow = [v / piv for v in self.binv[p]]
        self.binv[p] = prow
        xp = self.xb[p] / piv
        self.xb[p] = xp
        for r in range(self.m):
            if r == p or not u[r]:
                continue
            f = u[r]
            row = self.binv[r]
            self.binv[r] = [row[i] - f * prow[i] if prow[i] else row[i] for i in range(self.m)]
            self.xb[r] -= f * xp
        self.basis[p] = col
        self.pivots += 1

    def run(self, max_pivots: int | None = None) -> list[Fraction]:
        degenerate = 0
        while True:
            y = self.duals()
            col = self._entering(y, bland=degenerate >= DEGENERATE_STREAK)
            if col is None:
                return y
            u = self.column(col)
            best = None
            for r in range(self.m):
                if u[r] > 0:
                    ratio = self.xb[r] / u[r]
                    key = (ratio, self.basis[r])
                    if best is None or key < best[0]:
                        best = (key, r)
            if best is None:
                raise ArithmeticError("LP is unbounded; not expected for these problem shapes")
            degenerate = degenerate + 1 if best[0][0] == 0 else 0
            self.pivot(best[1], col, u)
            if max_pivots is not None and self.pivots > max_pivots:
                raise RuntimeError(f"simplex exceeded {max_pivots} pivots")

    def structural_values(self) -> dict[int, Fraction]:
        return {c: x for c, x in zip(self.basis, self.xb) if c < self.N and x != 0}


def solve_equality_feasibility(idx: np.ndarray, coef: Sequence[Fraction], m: int) -> LPResult:
    """Phase 1 for {A w = 1, w >= 0}.

    On infeasibility the returned duals ``y`` satisfy ``y . A_j <= 0`` for every
    column and ``y . 1 > 0``.
    """
    sx = _Simplex(np.asarray(idx).reshape(len(idx), -1) if len(idx) else np.zeros((0, 0), dtype=np.int64),
                  coef, m, struct_cost=0, aux_cost=1)
    y = sx.run()
    residual = sum((x for c, x in zip(sx.basis, sx.xb) if c >= sx.N), Fraction(0))
    return LPResult(residual == 0, residual, sx.structural_values(), y, sx.pivots)


def solve_packing(idx: np.ndarray, coef: Sequence[Fraction], m: int) -> LPResult:
    """max sum(w) subject to A w <= 1, w >= 0."""
    sx = _Simplex(np.asarray(idx).reshape(len(idx), -1) if len(idx) else np.zeros((0, 0), dtype=np.int64),
                  coef, m, struct_cost=-1, aux_cost=0)
    y = sx.run()
    weights = sx.structural_values()
    return LPResult(True, sum(weights.values(), Fraction(0)), weights, y, sx.pivots)
