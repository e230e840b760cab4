"""Seeded experiment campaigns with CSV output.

Every trial draws from its own ``random.Random`` seeded with the string
``"<seed>:<campaign>:<trial>"``, so a campaign is a pure function of its
config: serial and parallel runs give the same rows, merged in trial order.
Wall-clock times are left out of the CSV unless asked for, since they would
break byte-for-byte reproducibility.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from .constructions import (build_block_construction, gcd_lower_bound_spec, random_partite_graph,
                            sigma_lower_bound_spec)
from .errors import ContractError
from .fractional import (DEFAULT_COLUMN_CAP, FarkasCertificate, solve_perfect_weighted_tiling,
                         verify_farkas_certificate, verify_fractional_tiling)
from .graph import Graph, min_multipartite_degree, parse_graph
from .params import chromatic_profile
from .rational import ceil_fraction, format_rational, parse_rational
from .tiling import DEFAULT_BUDGET, Status, max_H_tiling, perfect_H_tiling, row_tiling_upper_bound

log = logging.getLogger(__name__)

OUTCOMES = ("feasible", "infeasible", "tiled", "untiled", "unknown")


@dataclass
class CampaignConfig:
    patterns: list[tuple[str, Graph]]
    n_values: list[int]
    r_values: list[int] = field(default_factory=lambda: [3])
    alphas: list[Fraction] = field(default_factory=lambda: [Fraction(0)])
    trials: int = 10
    seed: int = 0
    p_extra: float = 0.3
    budget: int = DEFAULT_BUDGET
    column_cap: int = DEFAULT_COLUMN_CAP
    time_limit: float | None = 30.0
    output: str | None = None
    workers: int = 1
    timing: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ContractError("trials must be at least 1")
        if not self.patterns:
            raise ContractError("a campaign needs at least one pattern graph H")
        self.alphas = [parse_rational(a) for a in self.alphas]


def _n_values(spec) -> list[int]:
    if isinstance(spec, int):
        return [spec]
    if isinstance(spec, dict):
        return list(range(int(spec["min"]), int(spec["max"]) + 1))
    return [int(x) for x in spec]


def load_config(source, base: Path | None = None) -> CampaignConfig:
    """Build a config from a JSON file path or an already-parsed dict.

    Pattern graphs come from ``h_files`` (paths, relative to the config file)
    and/or ``graphs`` (inline ``{"name": {"n":..., "edges":...}}``).
    """
    if isinstance(source, (str, Path)):
        path = Path(source)
        doc = json.loads(path.read_text())
        base = path.parent
    else:
        doc = source
    base = base or Path(".")
    patterns = []
    files = doc.get("h_files", [])
    if "h_file" in doc:
        files = [doc["h_file"]] + list(files)
    for f in files:
        p = Path(f) if Path(f).is_absolute() else base / f
        patterns.append((p.stem, parse_graph(p.read_text())))
    for name, g in doc.get("graphs", {}).items():
        patterns.append((name, parse_graph(g)))
    known = {"h_file", "h_files", "graphs", "n", "r", "alpha", "trials", "seed", "p_extra", "budget",
             "columns_cap", "time_limit", "output", "workers", "timing"}
    unknown = set(doc) - known
    if unknown:
        raise ContractError(f"unknown config keys {sorted(unknown)}")
    r = doc.get("r", [3])
    return CampaignConfig(
        patterns=patterns,
        n_values=_n_values(doc.get("n", [5])),
        r_values=[r] if isinstance(r, int) else list(r),
        alphas=list(doc.get("alpha", ["0"])),
        trials=int(doc.get("trials", 10)),
        seed=int(doc.get("seed", 0)),
        p_extra=float(doc.get("p_extra", 0.3)),
        budget=int(doc.get("budget", DEFAULT_BUDGET)),
        column_cap=int(doc.get("columns_cap", DEFAULT_COLUMN_CAP)),
        time_limit=doc.get("time_limit", 30.0),
        output=doc.get("output"),
        workers=int(doc.get("workers", 1)),
        timing=bool(doc.get("timing", False)),
    )


def _map(fn: Callable, args: Sequence, workers: int) -> list:
    if workers <= 1 or len(args) <= 1:
        return [fn(a) for a in args]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, args))


def _rng(seed: int, campaign: str, trial: int):
    import random

    return random.Random(f"{seed}:{campaign}:{trial}")


def _csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)  # RFC 4180: minimal quoting, CRLF line ends
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Lemma validation


@dataclass
class TrialRecord:
    trial: int
    instance: str
    delta_star: int
    threshold: Fraction
    outcome: str
    work: int
    wall_time: float = 0.0

    def __post_init__(self):
        if self.outcome not in OUTCOMES:
            raise ValueError(f"unknown outcome {self.outcome!r}")


@dataclass
class CampaignReport:
    name: str
    header: list[str]
    rows: list[list]
    passed: bool
    summary: dict

    def csv(self) -> str:
        return _csv(self.header, self.rows)


def lemma_threshold(a: Fraction, b: Fraction, r: int, n: int) -> tuple[Fraction, int]:
    """(1 - b/h) n with h = a + (r-1) b, and its ceiling."""
    h = a + (r - 1) * b
    t = (1 - b / h) * n
    return t, ceil_fraction(t)


def _lemma_trial(job):
    cfg, i, profiles = job
    rng = _rng(cfg.seed, "lemma", i)
    name, H = cfg.patterns[i % len(cfg.patterns)]
    prof = profiles[name]
    a, b = prof.a, prof.b
    if a > b:
        raise ContractError(f"profile of {name} has a > b")
    r = rng.choice(cfg.r_values)
    n = rng.choice(cfg.n_values)
    exact, threshold = lemma_threshold(a, b, r, n)
    delta = rng.randint(threshold, n)
    G = random_partite_graph(r, n, delta, rng.getrandbits(64), p_extra=rng.random() * cfg.p_extra)
    t0 = time.perf_counter()
    res = solve_perfect_weighted_tiling(G, a, b, cfg.column_cap)
    elapsed = time.perf_counter() - t0
    if isinstance(res, FarkasCertificate):
        if not verify_farkas_certificate(G, a, b, res):
            raise AssertionError(f"trial {i}: unverifiable certificate")
        outcome = "infeasible"
    else:
        if not verify_fractional_tiling(G, a, b, res):
            raise AssertionError(f"trial {i}: unverifiable tiling")
        outcome = "feasible"
    ds = min_multipartite_degree(G)
    row = [i, name, r, n, format_rational(a), format_rational(b), ds, format_rational(exact), threshold,
           outcome, res.pivots]
    if cfg.timing:
        row.append(f"{elapsed:.3f}")
    return row, (G.to_json() if outcome == "infeasible" else None)


def verify_lemma_campaign(cfg: CampaignConfig) -> CampaignReport:
    """Random hosts meeting the Lemma's degree bound must all be LP-feasible."""
    profiles = {name: chromatic_profile(H) for name, H in cfg.patterns}
    for name, p in profiles.items():
        if p.a > p.b:
            raise ContractError(f"profile of {name} has a > b")
    results = _map(_lemma_trial, [(cfg, i, profiles) for i in range(cfg.trials)], cfg.workers)
    header = ["trial", "pattern", "r", "n", "a", "b", "delta_star", "threshold", "threshold_int", "outcome",
              "pivots"] + (["seconds"] if cfg.timing else [])
    rows = [row for row, _ in results]
    offenders = [{"trial": row[0], "graph": g, "a": row[4], "b": row[5]} for row, g in results if g is not None]
    summary = {
        "campaign": "lemma",
        "trials": cfg.trials,
        "feasible": sum(1 for r in rows if r[9] == "feasible"),
        "infeasible": len(offenders),
        "offenders": offenders,
        "passed": not offenders,
    }
    return CampaignReport("lemma", header, rows, not offenders, summary)


# ---------------------------------------------------------------------------
# Lower-bound certification


def certify_lower_bound(H: Graph, n: int, budget: int = DEFAULT_BUDGET, time_limit: float | None = None) -> dict:
    """Build the matching extremal host and try to prove it has no perfect H-tiling."""
    prof = chromatic_profile(H)
    r, h = prof.r, prof.h
    if r < 3:
        raise ContractError(f"chi(H) = {r}; need chi(H) >= 3")
    if math.isinf(prof.gcd):
        raise ContractError("gcd(H) is infinite; neither lower-bound family applies")
    if (r * n) % h:
        raise ContractError(f"h = {h} does not divide rn = {r * n}")
    family = "gcd" if prof.gcd > 1 else "sigma"
    spec = gcd_lower_bound_spec(H, n) if family == "gcd" else sigma_lower_bound_spec(H, n)
    G, B = build_block_construction(spec)
    ds = min_multipartite_degree(G)
    bound = (1 - 1 / prof.chi_star) * n - 1
    report = {
        "family": family,
        "h": h,
        "r": r,
        "n": n,
        "gcd": format_rational(prof.gcd),
        "chi_star": format_rational(prof.chi_star),
        "blocks": [list(c) for c in spec.block_sizes],
        "row_sizes": list(B.row_sizes),
        "delta_star": ds,
        "threshold": format_rational(bound),
        "threshold_int": ceil_fraction((1 - 1 / prof.chi_star) * n) - 1,
        "perfect_size": r * n // h,
    }
    if family == "gcd":
        rows = B.row_sizes
        report["row_difference"] = rows[0] - rows[1]
        if n % h:
            report["divisibility_note"] = (f"h = {h} divides rn but not n; with gcd(H) > 1 the degree "
                                           f"threshold statement assumes h | n")
        res = perfect_H_tiling(G, H, budget, blocks=B, time_limit=time_limit)
        report.update(search=res.status.value, nodes=res.nodes)
        report["certified"] = res.status == Status.NONE
        report["inconclusive"] = res.status == Status.UNKNOWN
    else:
        rb = row_tiling_upper_bound(B, H)
        res = max_H_tiling(G, H, budget, blocks=B, time_limit=time_limit)
        report.update(row_bound=rb, max_tiling=len(res.tiling), optimal=res.optimal, nodes=res.nodes,
                      search="optimal" if res.optimal else "unknown")
        report["certified"] = res.optimal and len(res.tiling) < r * n // h
        report["inconclusive"] = not res.optimal
    return report


# ---------------------------------------------------------------------------
# Threshold sweep


def _sweep_trial(job):
    cfg, H, prof, n, alpha, target, i = job
    rng = _rng(cfg.seed, f"sweep:{n}:{alpha}", i)
    G = random_partite_graph(prof.r, n, target, rng.getrandbits(64), p_extra=rng.random() * cfg.p_extra)
    res = perfect_H_tiling(G, H, cfg.budget, time_limit=cfg.time_limit)
    outcome = {Status.FOUND: "tiled", Status.NONE: "untiled", Status.UNKNOWN: "unknown"}[res.status]
    return outcome, res.nodes


def sweep_threshold(cfg: CampaignConfig) -> CampaignReport:
    """Tiled/untiled/unknown fractions of random hosts just above the threshold."""
    name, H = cfg.patterns[0]
    prof = chromatic_profile(H)
    r, h = prof.r, prof.h
    header = ["n", "alpha", "trials", "tiled", "untiled", "unknown", "mean_nodes"]
    rows = []
    skipped = []
    for n in cfg.n_values:
        if (r * n) % h:
            skipped.append({"n": n, "reason": f"h = {h} does not divide rn = {r * n}"})
            continue
        if prof.gcd > 1 and n % h:
            skipped.append({"n": n, "reason": f"gcd(H) > 1 needs h | n; h = {h} divides rn but not n"})
            continue
        for alpha in cfg.alphas:
            target = ceil_fraction((1 - 1 / prof.chi_star + alpha) * n)
            if target > n:
                skipped.append({"n": n, "alpha": format_rational(alpha),
                                "reason": f"degree target {target} exceeds n"})
                continue
            target = max(target, 0)
            jobs = [(cfg, H, prof, n, alpha, target, i) for i in range(cfg.trials)]
            results = _map(_sweep_trial, jobs, cfg.workers)
            tally = {o: sum(1 for out, _ in results if out == o) for o in ("tiled", "untiled", "unknown")}
            mean = sum(nodes for _, nodes in results) / cfg.trials
            rows.append([n, format_rational(alpha), cfg.trials, tally["tiled"], tally["untiled"], tally["unknown"],
                         f"{mean:.2f}"])
    for s in skipped:
        log.warning("skipped cell: %s", s)
    summary = {"campaign": "sweep", "pattern": name, "cells": len(rows), "skipped": skipped, "passed": True}
    return CampaignReport("sweep", header, rows, True, summary)
