"""Command-line front end.

Subcommands
-----------
detect     fit a graph file and write a JSON community report
bench ng   planted-partition cohesion sweep (JSON or CSV report)
metrics    nmi / modularity between files, printed to standard output

Exit codes: 0 success, 1 parse/validation/parameter/file error, 2 numerical
failure. Errors are one machine-parsable line on standard error:
``nmfcomm: error: <kind>: <detail>``. All subcommands take ``--seed`` and
are reproducible under it; report files are deterministic apart from
wall-clock fields. ``NMFCOMM_OUTPUT_DIR`` overrides the default output
directory (the working directory).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict
from pathlib import Path

from . import bench, kernels, membership as membership_mod, nmf
from .errors import (
    NmfcommError,
    NumericalError,
    ParameterError,
    ParseError,
    UndefinedMetricError,
    ValidationError,
)
from .graph import (
    NgParams,
    load_edge_list,
    load_partition,
    parse_partition_pairs,
    solver_input,
)
from .metrics import HardPartition, modularity, nmi

DEFAULT_SEED = 20210       # fixed so default runs are reproducible


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; our contract reserves 2 for
    numerical failures, so remap to 1."""

    def error(self, message):
        _fail("usage", message, code=1)


def _fail(kind: str, detail: str, code: int):
    detail = " ".join(str(detail).split())
    sys.stderr.write(f"nmfcomm: error: {kind}: {detail}\n")
    sys.exit(code)


def _output_path(explicit, default_name: str) -> Path:
    if explicit:
        return Path(explicit)
    out_dir = Path(os.environ.get("NMFCOMM_OUTPUT_DIR", "."))
    return out_dir / default_name


def _write_json(path: Path, payload: dict):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    sys.stderr.write(f"nmfcomm: wrote {path}\n")


def _solver_args(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                   help=f"base RNG seed (default {DEFAULT_SEED})")
    p.add_argument("--k-max", type=int, default=None,
                   help="max components (default: min(n, 64))")
    p.add_argument("--full-k", action="store_true",
                   help="use one component per node instead of min(n, 64)")
    p.add_argument("--a", type=float, default=1.0, help="precision prior shape")
    p.add_argument("--b", type=float, default=2.0, help="precision prior rate")
    p.add_argument("--tol", type=float, default=1e-6,
                   help="relative energy-change convergence threshold")
    p.add_argument("--max-iters", type=int, default=500)
    p.add_argument("--eps", type=float, default=1e-12, help="numerical floor")
    p.add_argument("--workers", type=int, default=1,
                   help="concurrent fits (restarts/realizations)")


def _config_for(args, n: int) -> nmf.SolverConfig:
    if args.k_max is not None:
        k_max = args.k_max
    elif args.full_k:
        k_max = n
    else:
        k_max = min(n, 64)
    return nmf.SolverConfig(
        k_max=k_max, a=args.a, b=args.b, tol=args.tol,
        max_iters=args.max_iters, eps=args.eps, seed=args.seed,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nmfcomm", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_detect = sub.add_parser("detect",
                              help="detect communities in an edge-list file")
    p_detect.add_argument("graph", help="edge-list file ('i j' or 'i j w' lines)")
    p_detect.add_argument("-o", "--output", default=None, help="report path")
    p_detect.add_argument("--restarts", type=int, default=1,
                          help="independent fits; the best-Q run is reported")
    p_detect.add_argument("--reference", default=None,
                          help="partition file to score NMI against")
    p_detect.add_argument("--diagonal", choices=("zero", "strength"),
                          default="zero",
                          help="solver input diagonal (strength biases runs "
                               "toward more, smaller communities)")
    _solver_args(p_detect)

    p_bench = sub.add_parser("bench",
                             help="benchmark experiments")
    bench_sub = p_bench.add_subparsers(dest="bench_command", required=True, parser_class=_Parser)
    p_ng = bench_sub.add_parser("ng",
                                help="planted-partition cohesion sweep")
    p_ng.add_argument("--kout", default="0,2,4,6,8",
                      help="comma-separated inter-community degrees")
    p_ng.add_argument("--realizations", type=int, default=20)
    p_ng.add_argument("--n", type=int, default=128)
    p_ng.add_argument("--c", type=int, default=4)
    p_ng.add_argument("--k-mean", type=float, default=16.0)
    p_ng.add_argument("--format", choices=("json", "csv"), default="json")
    p_ng.add_argument("-o", "--output", default=None, help="report path")
    _solver_args(p_ng)

    p_metrics = sub.add_parser("metrics",
                               help="partition quality metrics")
    metrics_sub = p_metrics.add_subparsers(dest="metrics_command", required=True, parser_class=_Parser)
    p_nmi = metrics_sub.add_parser("nmi",
                                   help="NMI between two partition files")
    p_nmi.add_argument("partition_a")
    p_nmi.add_argument("partition_b")
    p_mod = metrics_sub.add_parser("modularity",
                                   help="modularity of a partition on a graph")
    p_mod.add_argument("graph")
    p_mod.add_argument("partition")
    return parser


def cmd_detect(args) -> int:
    with open(args.graph, "r", encoding="utf-8") as fh:
        graph, load_report = load_edge_list(fh)
    config = _config_for(args, graph.n)
    reference = None
    if args.reference:
        with open(args.reference, "r", encoding="utf-8") as fh:
            planted = load_partition(fh, id_map=load_report.id_map)
        reference = HardPartition.from_labels(planted.labels)

    v = solver_input(graph, args.diagonal)
    report = bench.restart_experiment(
        v, graph, config, runs=args.restarts, base_seed=args.seed,
        reference=reference, workers=args.workers,
    )

    best = report.best_run
    compacted = membership_mod.compact(best.membership)
    per_node_ent, mean_ent = membership_mod.entropy_bits(compacted)
    original_ids = load_report.original_ids()
    trace = best.result.energy_trace

    payload = report.to_json_dict(meta={
        "command": "detect",
        "input": str(args.graph),
        "backend": kernels.backend_name(),
        "config": asdict(config),
        "base_seed": args.seed,
        "restarts": args.restarts,
        "diagonal": args.diagonal,
        "merged_duplicate_edges": load_report.merged_duplicates,
        "unassigned_label": membership_mod.UNASSIGNED,
        "unassigned_as_singletons_for_q": True,
    })
    payload["best_run"] = {
        "index": best.index,
        "seed": best.seed,
        "q": best.q,
        "k_effective": compacted.k_effective,
        "nodes": original_ids,
        "labels": {
            str(orig): int(lab)
            for orig, lab in zip(original_ids, compacted.labels.tolist())
        },
        "pi": [[float(x) for x in row] for row in compacted.pi.tolist()],
        "entropy_bits": [float(x) for x in per_node_ent.tolist()],
        "mean_entropy_bits": mean_ent,
        "energy": {
            "initial": float(trace[0]),
            "final": float(trace[-1]),
            "iterations": best.result.iterations_run,
            "converged": best.result.converged,
        },
    }

    out = _output_path(args.output, Path(args.graph).stem + ".detect.json")
    _write_json(out, payload)
    return 0


def cmd_bench_ng(args) -> int:
    try:
        kout_values = [float(tok) for tok in args.kout.split(",") if tok.strip()]
    except ValueError:
        raise ParameterError(f"--kout must be comma-separated numbers, got {args.kout!r}")
    if not kout_values:
        raise ParameterError("--kout requires at least one value")
    params = NgParams(n=args.n, c=args.c, k_mean=args.k_mean, k_out=kout_values[0])
    for k in kout_values:
        NgParams(n=args.n, c=args.c, k_mean=args.k_mean, k_out=k)

    config = _config_for(args, args.n)
    report = bench.ng_sweep(
        params, kout_values, realizations=args.realizations,
        config=config, base_seed=args.seed, workers=args.workers,
    )
    meta = {
        "command": "bench ng",
        "backend": kernels.backend_name(),
        "config": asdict(config),
        "base_seed": args.seed,
        "kout_values": kout_values,
        "realizations": args.realizations,
    }
    if args.format == "csv":
        out = _output_path(args.output, "ng_sweep.csv")
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(report.to_csv(), encoding="utf-8")
        sys.stderr.write(f"nmfcomm: wrote {out}\n")
    else:
        out = _output_path(args.output, "ng_sweep.json")
        _write_json(out, report.to_json_dict(meta=meta))
    return 0


def cmd_metrics(args) -> int:
    if args.metrics_command == "nmi":
        with open(args.partition_a, "r", encoding="utf-8") as fh:
            pairs_a = parse_partition_pairs(fh)
        with open(args.partition_b, "r", encoding="utf-8") as fh:
            pairs_b = parse_partition_pairs(fh)
        if not pairs_a or not pairs_b:
            raise ValidationError("partition files must be non-empty")
        if set(pairs_a) != set(pairs_b):
            raise ValidationError("partition files cover different node sets")
        order = sorted(pairs_a)
        pa = HardPartition.from_labels([pairs_a[i] for i in order])
        pb = HardPartition.from_labels([pairs_b[i] for i in order])
        value = nmi(pa, pb)
    else:
        with open(args.graph, "r", encoding="utf-8") as fh:
            graph, load_report = load_edge_list(fh)
        with open(args.partition, "r", encoding="utf-8") as fh:
            planted = load_partition(fh, id_map=load_report.id_map)
        value = modularity(graph, HardPartition.from_labels(planted.labels))
    sys.stdout.write(f"{value:.6f}\n")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "detect":
            return cmd_detect(args)
        if args.command == "bench":
            return cmd_bench_ng(args)
        if args.command == "metrics":
            return cmd_metrics(args)
        _fail("usage", f"unknown command {args.command!r}", code=1)
    except ParseError as exc:
        _fail("parse", exc, code=1)
    except (ValidationError, UndefinedMetricError) as exc:
        _fail("validation", exc, code=1)
    except ParameterError as exc:
        _fail("parameter", exc, code=1)
    except NumericalError as exc:
        _fail("numerical", exc, code=2)
    except NmfcommError as exc:
        _fail("error", exc, code=1)
    except OSError as exc:
        _fail("io", exc, code=1)
    return 0


if __name__ == "__main__":
    sys.exit(main())
