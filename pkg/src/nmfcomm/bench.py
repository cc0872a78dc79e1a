"""Experiment harness: multi-restart fits, planted-partition sweeps, and
file-based scoring runs, with machine-readable reports.

Reports are a pure function of (inputs, base_seed): per-run wall-clock
fields are the only nondeterministic content, and
:func:`deterministic_payload` strips them so repeated runs can be compared
byte for byte.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace

import numpy as np

from . import membership as membership_mod
from . import nmf
from .errors import ParameterError
from .graph import (
    Graph,
    InteractionMatrix,
    NgParams,
    generate_ng_graph,
    load_edge_list,
    load_partition,
    solver_input,
)
from .metrics import HardPartition, modularity, nmi

WALL_KEYS = ("wall_ms", "wall_ms_total")


@dataclass
class RunRecord:
    """One fit reduced to its report row."""

    seed: object
    q: float
    k_effective: int
    iterations: int
    converged: bool
    wall_ms: float
    nmi: float | None = None
    mean_entropy_bits: float | None = None


@dataclass
class BestRun:
    index: int
    seed: object
    q: float
    membership: membership_mod.Membership
    result: nmf.FitResult


@dataclass
class RestartReport:
    runs: int
    records: list[RunRecord]
    q_mean: float
    q_std: float
    k_eff_mean: float
    k_eff_std: float
    best_run: BestRun
    wall_ms_total: float
    nmi_mean: float | None = None
    nmi_std: float | None = None

    def to_json_dict(self, meta: dict | None = None) -> dict:
        aggregates = {
            "q_mean": self.q_mean,
            "q_std": self.q_std,
            "k_eff_mean": self.k_eff_mean,
            "k_eff_std": self.k_eff_std,
            "q_best": self.best_run.q,
            "best_run_index": self.best_run.index,
            "wall_ms_total": self.wall_ms_total,
        }
        if self.nmi_mean is not None:
            aggregates["nmi_mean"] = self.nmi_mean
            aggregates["nmi_std"] = self.nmi_std
        return {
            "meta": meta or {},
            "runs": [_strip_none(asdict(r)) for r in self.records],
            "aggregates": aggregates,
        }


@dataclass
class SweepCell:
    k_out: float
    realizations: int
    records: list[RunRecord]
    nmi_mean: float
    nmi_std: float
    q_mean: float
    mean_entropy_bits_mean: float

    def to_json_dict(self) -> dict:
        return {
            "k_out": self.k_out,
            "realizations": self.realizations,
            "nmi_mean": self.nmi_mean,
            "nmi_std": self.nmi_std,
            "q_mean": self.q_mean,
            "mean_entropy_bits_mean": self.mean_entropy_bits_mean,
            "records": [_strip_none(asdict(r)) for r in self.records],
        }


@dataclass
class SweepReport:
    params: NgParams
    cells: list[SweepCell]

    def to_json_dict(self, meta: dict | None = None) -> dict:
        return {
            "meta": meta or {},
            "params": asdict(self.params),
            "cells": [c.to_json_dict() for c in self.cells],
        }

    def to_csv(self) -> str:
        """One row per (k_out, realization); plot-ready, no timing columns."""
        lines = ["k_out,realization,nmi,q,mean_entropy_bits,k_effective,iterations,converged"]
        for cell in self.cells:
            for r_idx, rec in enumerate(cell.records):
                lines.append(
                    f"{cell.k_out},{r_idx},{rec.nmi},{rec.q},"
                    f"{rec.mean_entropy_bits},{rec.k_effective},"
                    f"{rec.iterations},{str(rec.converged).lower()}"
                )
        return "\n".join(lines) + "\n"


def _strip_none(d: dict) -> dict:
    return {k: v for k, v in d.items() if v is not None}


def _sample_std(values) -> float:
    values = np.asarray(values, dtype=np.float64)
    if values.size <= 1:
        return 0.0
    return float(values.std(ddof=1))


def _score_fit(
    result: nmf.FitResult,
    graph: Graph,
    reference: HardPartition | None,
    eps: float,
):
    memb = membership_mod.memberships(result.factorization.w, eps=eps)
    part = HardPartition.from_labels(memb.labels)
    q = modularity(graph, part)
    score = nmi(part, reference) if reference is not None else None
    return memb, part, q, score


def restart_experiment(
    v: InteractionMatrix,
    graph: Graph,
    config: nmf.SolverConfig | None = None,
    runs: int = 20,
    base_seed: int = 0,
    reference: HardPartition | None = None,
    workers: int = 1,
) -> RestartReport:
    """Fit ``runs`` times with seeds base_seed..base_seed+runs-1 and
    aggregate modularity and community-count statistics.

    Unassigned nodes count as singleton communities for modularity. The
    best run is the one with the highest modularity (ties to the lowest
    run index). With ``workers > 1`` the fits run concurrently; aggregation
    folds in seed order either way, so reports are identical.
    """
    config = config or nmf.SolverConfig()
    if runs < 1:
        raise ParameterError("runs must be >= 1")
    seeds = [base_seed + r for r in range(runs)]

    def one(seed):
        t0 = time.perf_counter()
        result = nmf.fit(v, config.with_seed(seed))
        wall_ms = (time.perf_counter() - t0) * 1e3
        return result, wall_ms

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            fits = list(pool.map(one, seeds))
    else:
        fits = [one(s) for s in seeds]

    records: list[RunRecord] = []
    best: BestRun | None = None
    for idx, (seed, (result, wall_ms)) in enumerate(zip(seeds, fits)):
        memb, part, q, score = _score_fit(result, graph, reference, config.eps)
        _, mean_ent = membership_mod.entropy_bits(memb)
        records.append(
            RunRecord(
                seed=seed,
                q=q,
                k_effective=memb.k_effective,
                iterations=result.iterations_run,
                converged=result.converged,
                wall_ms=wall_ms,
                nmi=score,
                mean_entropy_bits=mean_ent,
            )
        )
        if best is None or q > best.q:
            best = BestRun(index=idx, seed=seed, q=q, membership=memb, result=result)

    qs = [r.q for r in records]
    ks = [r.k_effective for r in records]
    scores = [r.nmi for r in records if r.nmi is not None]
    return RestartReport(
        runs=runs,
        records=records,
        q_mean=float(np.mean(qs)),
        q_std=_sample_std(qs),
        k_eff_mean=float(np.mean(ks)),
        k_eff_std=_sample_std(ks),
        best_run=best,
        wall_ms_total=float(sum(r.wall_ms for r in records)),
        nmi_mean=float(np.mean(scores)) if scores else None,
        nmi_std=_sample_std(scores) if scores else None,
    )


def ng_sweep(
    params_base: NgParams,
    kout_values,
    realizations: int = 20,
    config: nmf.SolverConfig | None = None,
    base_seed: int = 0,
    workers: int = 1,
) -> SweepReport:
    """Planted-partition cohesion sweep.

    For each inter-community degree in ``kout_values``, generate
    ``realizations`` graphs and fit each once, recording NMI against the
    planted partition, modularity of the greedy labels, and mean membership
    entropy. Graph and fit seeds derive deterministically from
    ``(base_seed, cell index, realization index)``, so the report is a pure
    function of its arguments.
    """
    config = config or default_bench_config(params_base.n)
    if realizations < 1:
        raise ParameterError("realizations must be >= 1")
    cells_params = [replace(params_base, k_out=float(k)) for k in kout_values]

    def one(args):
        ki, r = args
        graph, planted = generate_ng_graph(cells_params[ki], seed=[base_seed, ki, r, 0])
        v = solver_input(graph, "zero")
        t0 = time.perf_counter()
        result = nmf.fit(v, config.with_seed([base_seed, ki, r, 1]))
        wall_ms = (time.perf_counter() - t0) * 1e3
        reference = HardPartition.from_labels(planted.labels)
        memb, part, q, score = _score_fit(result, graph, reference, config.eps)
        _, mean_ent = membership_mod.entropy_bits(memb)
        return RunRecord(
            seed=[base_seed, ki, r, 1],
            q=q,
            k_effective=memb.k_effective,
            iterations=result.iterations_run,
            converged=result.converged,
            wall_ms=wall_ms,
            nmi=score,
            mean_entropy_bits=mean_ent,
        )

    jobs = [(ki, r) for ki in range(len(cells_params)) for r in range(realizations)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            all_records = list(pool.map(one, jobs))
    else:
        all_records = [one(j) for j in jobs]

    cells = []
    for ki, params in enumerate(cells_params):
        records = all_records[ki * realizations : (ki + 1) * realizations]
        cells.append(
            SweepCell(
                k_out=params.k_out,
                realizations=realizations,
                records=records,
                nmi_mean=float(np.mean([r.nmi for r in records])),
                nmi_std=_sample_std([r.nmi for r in records]),
                q_mean=float(np.mean([r.q for r in records])),
                mean_entropy_bits_mean=float(
                    np.mean([r.mean_entropy_bits for r in records])
                ),
            )
        )
    return SweepReport(params=params_base, cells=cells)


def ingest_and_score(
    graph_source,
    partition_source=None,
    config: nmf.SolverConfig | None = None,
    runs: int = 20,
    base_seed: int = 0,
    diagonal: str = "zero",
    workers: int = 1,
) -> tuple[RestartReport, "LoadReport"]:
    """Load an edge-list file (path or file-like), run restarts, and score.

    When a partition file is supplied, its node ids are translated through
    the graph's id remap and NMI against it is added per run and in the
    aggregates. Returns the report plus the graph load report (for
    restoring original node ids).
    """
    graph, load_report = _load_graph(graph_source)
    reference = None
    if partition_source is not None:
        planted = _load_partition(partition_source, load_report.id_map)
        reference = HardPartition.from_labels(planted.labels)
    config = config or default_bench_config(graph.n)
    v = solver_input(graph, diagonal)
    report = restart_experiment(
        v, graph, config, runs=runs, base_seed=base_seed,
        reference=reference, workers=workers,
    )
    return report, load_report


def default_bench_config(n: int, full_k: bool = False, **overrides) -> nmf.SolverConfig:
    """Benchmark solver defaults: at most min(n, 64) components for speed;
    ``full_k=True`` restores one component per node."""
    k_max = n if full_k else min(n, 64)
    return nmf.SolverConfig(k_max=k_max, **overrides)


def _load_graph(source):
    if hasattr(source, "read") or isinstance(source, (bytes,)):
        return load_edge_list(source)
    with open(source, "r", encoding="utf-8") as fh:
        return load_edge_list(fh)


def _load_partition(source, id_map):
    if hasattr(source, "read") or isinstance(source, (bytes,)):
        return load_partition(source, id_map=id_map)
    with open(source, "r", encoding="utf-8") as fh:
        return load_partition(fh, id_map=id_map)


def _strip_wall(obj):
    if isinstance(obj, dict):
        return {k: _strip_wall(v) for k, v in obj.items() if k not in WALL_KEYS}
    if isinstance(obj, list):
        return [_strip_wall(x) for x in obj]
    return obj


def deterministic_payload(report_dict: dict) -> bytes:
    """Canonical JSON bytes with wall-clock fields removed; two runs with
    the same seed must agree on this byte for byte."""
    return json.dumps(
        _strip_wall(report_dict), sort_keys=True, separators=(",", ":")
    ).encode("utf-8")
