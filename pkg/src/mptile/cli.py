"""Command-line entry point.

Exit codes: 0 success, 1 negative verdict or failed assertion, 2 usage error,
3 resource or budget exhaustion.  stdout carries only JSON or CSV.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .constructions import (ConstructionSpec, build_block_construction, build_U, gcd_lower_bound_spec,
                            sigma_lower_bound_spec)
from .errors import ContractError, GraphFormatError, ResourceError
from .fractional import (DEFAULT_COLUMN_CAP, FarkasCertificate, solve_perfect_weighted_tiling,
                         verify_farkas_certificate, verify_fractional_tiling)
from .graph import MultipartiteGraph, parse_block_structure, parse_graph, parse_multipartite
from .harness import certify_lower_bound, load_config, sweep_threshold, verify_lemma_campaign
from .params import chromatic_profile
from .rational import format_rational, parse_rational
from .tiling import (DEFAULT_BUDGET, Status, max_H_tiling, pattern_solution_to_tiling,
                     pattern_tiling_complete_multipartite, perfect_H_tiling)

EXIT_OK, EXIT_VERDICT, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3

log = logging.getLogger("mptile")


def _read(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text()


def _emit(doc, out) -> None:
    out.write(json.dumps(doc) + "\n")


def cmd_params(args, out) -> int:
    prof = chromatic_profile(parse_graph(_read(args.h_file)))
    doc = prof.to_json()
    if args.field:
        out.write(f"{doc[args.field]}\n")
    else:
        _emit(doc, out)
    return EXIT_OK


def cmd_fractile(args, out) -> int:
    G = parse_multipartite(_read(args.g_file))
    if args.h_file:
        prof = chromatic_profile(parse_graph(_read(args.h_file)))
        a, b = prof.a, prof.b
    elif args.a is not None and args.b is not None:
        a, b = parse_rational(args.a), parse_rational(args.b)
    else:
        raise ContractError("give --a and --b, or --h-file")
    res = solve_perfect_weighted_tiling(G, a, b, args.columns_cap)
    if isinstance(res, FarkasCertificate):
        ok = verify_farkas_certificate(G, a, b, res)
    else:
        ok = verify_fractional_tiling(G, a, b, res)
    if not ok:
        log.error("solver output failed verification")
        return EXIT_VERDICT
    doc = res.to_json()
    doc.update(a=format_rational(a), b=format_rational(b), pivots=res.pivots)
    _emit(doc, out)
    return EXIT_OK if doc["status"] == "feasible" else EXIT_VERDICT


def cmd_tile(args, out) -> int:
    if args.complete:
        if len(args.files) != 1:
            raise ContractError("tile --complete takes exactly one H file")
        H = parse_graph(_read(args.files[0]))
        sizes = [int(s) for s in args.complete.split(",")]
        sol = pattern_tiling_complete_multipartite(sizes, H)
        if sol is None:
            _emit({"status": "none", "tiling": [], "nodes": 0}, out)
            return EXIT_VERDICT
        _, tiling = pattern_solution_to_tiling(sol, sizes, H)
        doc = sol.to_json()
        doc.update(tiling=tiling.to_json(), nodes=0)
        _emit(doc, out)
        return EXIT_OK
    if len(args.files) != 2:
        raise ContractError("tile needs a host file and an H file")
    text = _read(args.files[0])
    G = parse_multipartite(text)
    blocks = parse_block_structure(json.loads(text), G)
    H = parse_graph(_read(args.files[1]))
    if args.mode == "perfect":
        res = perfect_H_tiling(G, H, args.budget, blocks=blocks)
        _emit(res.to_json(), out)
        return {Status.FOUND: EXIT_OK, Status.NONE: EXIT_VERDICT, Status.UNKNOWN: EXIT_RESOURCE}[res.status]
    res = max_H_tiling(G, H, args.budget, blocks=blocks)
    _emit(res.to_json(), out)
    return EXIT_OK if res.optimal else EXIT_RESOURCE


def cmd_construct(args, out) -> int:
    sidecar: dict = {"family": args.family, "blocks": None}
    if args.family == "blocks":
        if not args.blocks:
            raise ContractError("--family blocks needs --blocks '[[...],...]'")
        blocks = json.loads(args.blocks)
        spec = ConstructionSpec(len(blocks), sum(blocks[0]), tuple(tuple(c) for c in blocks))
        G, B = build_block_construction(spec)
        sidecar["blocks"] = B.to_json()
    else:
        if not args.h_file:
            raise ContractError(f"--family {args.family} needs --h-file")
        H = parse_graph(_read(args.h_file))
        if args.family == "U":
            sizes = build_U(H, args.s)
            G = MultipartiteGraph.complete(sizes)
            sidecar["sizes"] = list(sizes)
        else:
            if args.n is None:
                raise ContractError("--n is required")
            spec = gcd_lower_bound_spec(H, args.n) if args.family == "gcd" else sigma_lower_bound_spec(H, args.n)
            G, B = build_block_construction(spec)
            sidecar["blocks"] = B.to_json()
    doc = G.to_json()
    doc["sidecar"] = sidecar
    if args.out:
        Path(args.out).write_text(json.dumps(doc) + "\n")
        Path(args.out + ".sidecar.json").write_text(json.dumps(sidecar) + "\n")
    else:
        _emit(doc, out)
    return EXIT_OK


def _campaign_output(report, cfg, out) -> int:
    if cfg.output:
        Path(cfg.output).write_text(report.csv(), newline="")
        _emit(report.summary, out)
    else:
        out.write(report.csv())
        sys.stderr.write(json.dumps(report.summary) + "\n")
    return EXIT_OK if report.passed else EXIT_VERDICT


def _apply_globals(cfg, args):
    if args.seed is not None:
        cfg.seed = args.seed
    if args.budget is not None:
        cfg.budget = args.budget
    if args.columns_cap is not None:
        cfg.column_cap = args.columns_cap
    return cfg


def cmd_sweep(args, out) -> int:
    cfg = _apply_globals(load_config(args.config), args)
    return _campaign_output(sweep_threshold(cfg), cfg, out)


def cmd_lemma(args, out) -> int:
    cfg = _apply_globals(load_config(args.config), args)
    return _campaign_output(verify_lemma_campaign(cfg), cfg, out)


def cmd_certify(args, out) -> int:
    H = parse_graph(_read(args.h_file))
    report = certify_lower_bound(H, args.n, args.budget)
    _emit(report, out)
    if report["certified"]:
        return EXIT_OK
    return EXIT_RESOURCE if report["inconclusive"] else EXIT_VERDICT


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--budget", type=int, default=None, help="search node budget")
    common.add_argument("--columns-cap", type=int, default=None, help="max rooted cliques in the LP")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="mptile", description="Multipartite H-tiling toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("params", parents=[common], help="chromatic profile of H")
    s.add_argument("h_file")
    s.add_argument("--field", choices=["sigma", "chi_cr", "gcd", "chi_star", "a", "b", "h", "r"])
    s.set_defaults(func=cmd_params)

    s = sub.add_parser("fractile", parents=[common], help="perfect (a,b)-weighted fractional K_r-tiling")
    s.add_argument("g_file")
    s.add_argument("--a")
    s.add_argument("--b")
    s.add_argument("--h-file")
    s.set_defaults(func=cmd_fractile)

    s = sub.add_parser("tile", parents=[common], help="exact H-tilings")
    s.add_argument("files", nargs="+", help="G-file H-file, or just H-file with --complete")
    s.add_argument("--mode", choices=["perfect", "max"], default="perfect")
    s.add_argument("--complete", help="class sizes s1,...,sr of a complete multipartite host")
    s.set_defaults(func=cmd_tile)

    s = sub.add_parser("construct", parents=[common], help="extremal and auxiliary hosts")
    s.add_argument("--family", choices=["gcd", "sigma", "U", "blocks"], required=True)
    s.add_argument("--h-file")
    s.add_argument("--n", type=int)
    s.add_argument("--s", type=int, default=1)
    s.add_argument("--blocks", help="JSON block matrix for --family blocks, indexed [column][row]")
    s.add_argument("--out")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("sweep", parents=[common], help="threshold sweep campaign")
    s.add_argument("--config", required=True)
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("certify", parents=[common], help="certify a lower-bound construction")
    s.add_argument("--h-file", required=True)
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("lemma", parents=[common], help="fractional tiling lemma campaign")
    s.add_argument("--config", required=True)
    s.set_defaults(func=cmd_lemma)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.columns_cap is None:
        args.columns_cap = DEFAULT_COLUMN_CAP
    if args.budget is None and args.command in ("tile", "certify"):
        args.budget = DEFAULT_BUDGET
    try:
        return args.func(args, out)
    except ResourceError as exc:
        log.error("%s", exc)
        return EXIT_RESOURCE
    except (GraphFormatError, ContractError, FileNotFoundError, json.JSONDecodeError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
