"""Command-line front end: generate clouds, run the sampling pipeline,
check bases for annulus/figure-8 structure, and benchmark the baselines.

Exit codes: 0 success, 1 a pipeline stage failed at runtime, 2 bad usage
or unreadable/malformed input.  Every command is deterministic given its
arguments; pipeline reruns write byte-identical JSON (per-replicate wall
times are stripped from the ensemble artifact for exactly that reason).
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .bench import run_benchmark, save_benchmark_csv, save_benchmark_summary
from .constructions import check_annulus, check_figure8, load_matrix
from .field import DEFAULT_P, _check_prime
from .induced import induced_map_ensemble, save_ensemble
from .matroid import estimate_from_basis, form_weights, greedy_basis, save_basis
from .pointcloud import (PointCloud, SampleSchedule, ThresholdRule,
                         generate_annulus, generate_figure8, load_cloud_csv,
                         save_cloud_csv)

__all__ = ["RunConfig", "main"]


@dataclass(frozen=True)
class RunConfig:
    """Validated knobs shared by the pipeline and bench commands."""

    sizes: tuple[int, ...]
    replicates: int = 10
    seed: int = 0
    p: int = DEFAULT_P
    rule: ThresholdRule = ThresholdRule()
    max_dim: int = 2
    threads: int = 1
    out: Path = Path(".")

    def __post_init__(self):
        _check_prime(self.p)
        if not self.sizes:
            raise ValueError("need at least one sub-sample size")
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if self.max_dim != 2:
            raise ValueError("only --max-dim 2 is supported: the estimator "
                             "needs triangles to present H_1")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")

    @property
    def schedule(self) -> SampleSchedule:
        return SampleSchedule(sizes=self.sizes, replicates=self.replicates,
                              seed=self.seed)


def _add_common(sub: argparse.ArgumentParser) -> None:
    src = sub.add_mutually_exclusive_group(required=True)
    src.add_argument("--cloud", type=Path, help="point cloud CSV to analyze")
    src.add_argument("--shape", choices=("figure8", "annulus"),
                     help="generate the cloud in-process instead")
    sub.add_argument("--n", type=int, default=1000,
                     help="points for --shape (default 1000)")
    sub.add_argument("--noise", type=float, default=None,
                     help="noise level for --shape (default: shape's own)")
    sub.add_argument("--cloud-seed", type=int, default=0,
                     help="seed for --shape generation (default 0)")
    sub.add_argument("--sizes", type=int, nargs="+", required=True,
                     help="sub-sample sizes")
    sub.add_argument("--replicates", type=int, default=10)
    sub.add_argument("--seed", type=int, default=0,
                     help="base seed for drawing sub-samples")
    sub.add_argument("--p", type=int, default=DEFAULT_P,
                     help=f"field modulus (default {DEFAULT_P})")
    sub.add_argument("--threshold-base", type=float, default=0.25,
                     help="threshold = base + 2 * Hausdorff distance")
    sub.add_argument("--threshold-fixed", type=float, default=None,
                     help="override: use this fixed threshold everywhere")
    sub.add_argument("--max-dim", type=int, default=2)
    sub.add_argument("--threads", type=int, default=1,
                     help="worker cap (stages currently run sequentially)")
    sub.add_argument("--out", type=Path, required=True,
                     help="output directory")


def _config(args: argparse.Namespace) -> RunConfig:
    rule = ThresholdRule(base=args.threshold_base, fixed=args.threshold_fixed)
    return RunConfig(sizes=tuple(args.sizes), replicates=args.replicates,
                     seed=args.seed, p=args.p, rule=rule,
                     max_dim=args.max_dim, threads=args.threads, out=args.out)


def _input_cloud(args: argparse.Namespace) -> PointCloud:
    if args.cloud is not None:
        return load_cloud_csv(args.cloud)
    if args.shape == "figure8":
        noise = 0.1 if args.noise is None else args.noise
        return generate_figure8(args.n, noise=noise, seed=args.cloud_seed)
    noise = 0.05 if args.noise is None else args.noise
    return generate_annulus(args.n, noise=noise, seed=args.cloud_seed)


def cmd_generate(args: argparse.Namespace) -> int:
    if args.shape == "figure8":
        noise = 0.1 if args.noise is None else args.noise
        cloud = generate_figure8(args.n, noise=noise, seed=args.seed)
    else:
        noise = 0.05 if args.noise is None else args.noise
        cloud = generate_annulus(args.n, noise=noise, seed=args.seed)
    save_cloud_csv(cloud, args.out)
    print(f"wrote {len(cloud)} points to {args.out}")
    return 0


def cmd_pipeline(args: argparse.Namespace) -> int:
    cloud = _input_cloud(args)
    config = _config(args)
    config.out.mkdir(parents=True, exist_ok=True)
    stage = "ensemble"
    try:
        ensemble = induced_map_ensemble(cloud, config.schedule,
                                        rule=config.rule, p=config.p)
        stage = "write-ensemble"
        stripped = [dataclasses.replace(m, timing_ms=None)
                    for m in ensemble.maps]
        save_ensemble(stripped, str(config.out / "ensemble.json"))
        for size in config.sizes:
            maps = [m for m in ensemble.maps if m.size == size]
            stage = f"weights[{size}]"
            weighted = form_weights(maps,
                                    ignore_zero_columns=args.ignore_zero_columns)
            stage = f"greedy[{size}]"
            est = greedy_basis(weighted)
            stage = f"estimate[{size}]"
            estimate = estimate_from_basis(
                est, ensemble.full[size].betti.beta0)
            stage = f"write-basis[{size}]"
            save_basis(est, estimate, str(config.out / f"basis_{size}.json"))
            print(f"size {size}: homology estimate = "
                  f"{estimate.as_tuple()}  (basis rank {est.rank}, "
                  f"full-complex threshold "
                  f"{ensemble.full[size].threshold:.4f})")
    except Exception as exc:
        print(f"pipeline failed at stage {stage}: {exc}", file=sys.stderr)
        return 1
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    matrix = load_matrix(args.matrix)
    if args.transpose:
        matrix = matrix.transpose()
    checker = check_figure8 if args.kind == "figure8" else check_annulus
    report = checker(matrix, max_subset=args.max_subset)
    payload = json.dumps(report.to_json(), indent=1)
    print(payload)
    if args.out is not None:
        args.out.write_text(payload + "\n")
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    cloud = _input_cloud(args)
    config = _config(args)
    config.out.mkdir(parents=True, exist_ok=True)
    try:
        records = run_benchmark(cloud, config.schedule, rule=config.rule,
                                p=config.p)
        save_benchmark_csv(records, str(config.out / "benchmark.csv"))
        save_benchmark_summary(records, str(config.out / "summary.json"))
    except Exception as exc:
        print(f"bench failed: {exc}", file=sys.stderr)
        return 1
    for r in records:
        print(f"{r.method:>3} size {r.size:>5}: {r.wall_time_s:.4f} s, "
              f"homology {r.homology.as_tuple()}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="homsample",
        description="Homology of a point cloud from sub-samples: induced "
                    "maps, greedy basis assembly, and structure checks.")
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("generate", help="write a synthetic cloud CSV")
    gen.add_argument("--shape", choices=("figure8", "annulus"), required=True)
    gen.add_argument("--n", type=int, default=1000)
    gen.add_argument("--noise", type=float, default=None)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", type=Path, required=True,
                     help="output CSV path")
    gen.set_defaults(func=cmd_generate)

    pipe = commands.add_parser(
        "pipeline", help="induced maps -> weights -> greedy basis -> estimate")
    _add_common(pipe)
    pipe.add_argument("--ignore-zero-columns", action="store_true",
                      help="drop all-zero induced-map columns from the "
                           "weighting instead of counting them as a pattern")
    pipe.set_defaults(func=cmd_pipeline)

    chk = commands.add_parser(
        "check", help="test a basis matrix for annulus/figure-8 structure")
    chk.add_argument("--kind", choices=("figure8", "annulus"), required=True)
    chk.add_argument("--matrix", type=Path, required=True,
                     help="matrix JSON file (rows/cols/p/entries)")
    chk.add_argument("--transpose", action="store_true",
                     help="transpose first (published bases list one "
                          "element per ROW; the checks want columns)")
    chk.add_argument("--max-subset", type=int, default=6)
    chk.add_argument("--out", type=Path, default=None,
                     help="also write the report JSON here")
    chk.set_defaults(func=cmd_check)

    ben = commands.add_parser(
        "bench", help="paired RC/GMA/TB timing and homology records")
    _add_common(ben)
    ben.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
