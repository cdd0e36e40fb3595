"""Experiment harness: generate random NFAs, filter, minimize, aggregate.

A campaign fixes a model and a list of state counts; for each n it keeps
generating NFAs until the requested number pass the defined-everywhere
filter, runs the minimal-length search on each of those, and aggregates the
results into per-n histograms and a least-squares fit of the mean length.

Campaigns are deterministic under a fixed seed: attempt i for state count n
uses the derived seed SeedSequence([seed, n, i]), and records are emitted in
attempt order regardless of worker scheduling.
"""

from __future__ import annotations

import csv
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .oracle import BFS_STATE_LIMIT, shortest_d3_bfs
from .randomnfa import ModelSpec, derive_seed, generate, passes_filter
from .search import find_min_length
from .solver import ConflictBudgetExceeded
from .solver.external import solve_external


@dataclass
class CampaignConfig:
    model: str  # "uniform" | "poisson"
    n_list: list[int]
    count_per_n: int
    lam: Optional[float] = None
    variant: str = "basic"
    mode: str = "binary"
    seed: int = 0
    workers: int = 1
    solver: Optional[str] = None  # external solver command; None = internal
    l0: Optional[int] = None
    cap: Optional[int] = None
    oracle_check: bool = False  # cross-check lengths against subset BFS (small n)

    @classmethod
    def from_json(cls, obj: dict) -> "CampaignConfig":
        known = dict(obj)
        if "lambda" in known:
            known["lam"] = known.pop("lambda")
        return cls(**known)


@dataclass
class ExperimentRecord:
    model: str
    lam: Optional[float]
    n: int
    attempt: int  # generation attempt index within this n
    nfa_seed: int
    filter_passed: bool
    length: Optional[int] = None
    witness: Optional[str] = None
    not_sync_up_to: Optional[int] = None
    queries: int = 0
    conflicts: int = 0
    wall_time: float = 0.0
    error: Optional[str] = None
    oracle_agrees: Optional[bool] = None

    @property
    def synchronizing(self) -> bool:
        return self.length is not None


def _model_spec(config: CampaignConfig, n: int, attempt: int) -> ModelSpec:
    return ModelSpec(
        kind=config.model,
        n=n,
        seed=derive_seed(config.seed, n, attempt),
        lam=config.lam if config.model == "poisson" else None,
    )


def _measure_one(args) -> ExperimentRecord:
    config, n, attempt = args
    spec = _model_spec(config, n, attempt)
    nfa = generate(spec)
    record = ExperimentRecord(
        model=config.model, lam=config.lam, n=n, attempt=attempt,
        nfa_seed=spec.seed, filter_passed=True,
    )
    solve = None
    if config.solver:
        solve = lambda cnf: solve_external(cnf, config.solver)
    start = time.perf_counter()
    try:
        out = find_min_length(
            nfa, l0=config.l0, variant=config.variant, mode=config.mode,
            solve=solve, cap=config.cap,
        )
    except ConflictBudgetExceeded as exc:
        record.error = str(exc)
        record.wall_time = time.perf_counter() - start
        return record
    record.wall_time = time.perf_counter() - start
    record.length = out.length
    record.not_sync_up_to = out.not_sync_up_to
    record.queries = out.queries + out.witness_queries
    if out.witness is not None:
        record.witness = "".join(str(s) for s in out.witness)
    if config.oracle_check and n <= BFS_STATE_LIMIT:
        answer = shortest_d3_bfs(nfa)
        record.oracle_agrees = (
            (answer is None and out.length is None)
            or (answer is not None and out.length == answer[0])
        )
    return record


def run_campaign(config: CampaignConfig) -> list[ExperimentRecord]:
    """Run the full pipeline; returns records for the filter-passing NFAs in
    deterministic (n, attempt) order."""
    tasks: list[tuple[CampaignConfig, int, int]] = []
    for n in config.n_list:
        kept = 0
        attempt = 0
        while kept < config.count_per_n:
            if passes_filter(generate(_model_spec(config, n, attempt))):
                tasks.append((config, n, attempt))
                kept += 1
            attempt += 1
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            records = list(pool.map(_measure_one, tasks))
    else:
        records = [_measure_one(t) for t in tasks]
    return records


def histogram(records: list[ExperimentRecord]) -> dict:
    """Counts per observed minimal length; non-synchronizing records are
    bucketed under "not_synchronizing"."""
    counts: dict[int, int] = {}
    not_sync = 0
    for rec in records:
        if rec.length is None:
            not_sync += 1
        else:
            counts[rec.length] = counts.get(rec.length, 0) + 1
    out: dict = {str(k): counts[k] for k in sorted(counts)}
    if not_sync:
        out["not_synchronizing"] = not_sync
    return out


@dataclass(frozen=True)
class FitResult:
    a: float
    b: float
    rss: float  # residual sum of squares in the sqrt(E) space


def fit_log_square(points: list[tuple[float, float]]) -> FitResult:
    """Least-squares fit of E(n) ~ (a + b ln n)^2.

    The fit is linear in transformed coordinates: sqrt(E) regressed on ln n.
    Needs at least two points with distinct n.
    """
    if len(points) < 2:
        raise ValueError("need at least two points to fit")
    xs = np.log([float(n) for n, _ in points])
    ys = np.sqrt([float(e) for _, e in points])
    if np.ptp(xs) == 0:
        raise ValueError("degenerate fit: all state counts equal")
    design = np.column_stack([np.ones_like(xs), xs])
    coeffs, *_ = np.linalg.lstsq(design, ys, rcond=None)
    a, b = float(coeffs[0]), float(coeffs[1])
    rss = float(np.sum((design @ coeffs - ys) ** 2))
    return FitResult(a, b, rss)


def mean_lengths(records: list[ExperimentRecord]) -> list[tuple[int, float]]:
    """(n, mean minimal length) over the synchronizing records, sorted by n."""
    by_n: dict[int, list[int]] = {}
    for rec in records:
        if rec.length is not None:
            by_n.setdefault(rec.n, []).append(rec.length)
    return [(n, sum(v) / len(v)) for n, v in sorted(by_n.items())]


RECORD_FIELDS = [f for f in ExperimentRecord.__dataclass_fields__]


def write_outputs(records: list[ExperimentRecord], out_dir) -> dict:
    """Write records.csv, histograms.json, and fits.json under out_dir."""
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "records.csv"), "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=RECORD_FIELDS)
        writer.writeheader()
        for rec in records:
            writer.writerow(asdict(rec))

    grouped: dict[int, list[ExperimentRecord]] = {}
    for rec in records:
        grouped.setdefault(rec.n, []).append(rec)
    histograms = {str(n): histogram(rs) for n, rs in sorted(grouped.items())}
    with open(os.path.join(out_dir, "histograms.json"), "w") as fh:
        json.dump(histograms, fh, indent=2)

    fits: dict = {"points": [[n, e] for n, e in mean_lengths(records)]}
    try:
        fit = fit_log_square(mean_lengths(records))
        fits["sqrt_linear_in_log_n"] = {"a": fit.a, "b": fit.b, "rss": fit.rss}
    except ValueError as exc:
        fits["sqrt_linear_in_log_n"] = None
        fits["note"] = str(exc)
    with open(os.path.join(out_dir, "fits.json"), "w") as fh:
        json.dump(fits, fh, indent=2)
    return {"records": len(records), "histograms": histograms, "fits": fits}
