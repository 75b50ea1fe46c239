"""Baselines and the paired speed harness.

Three methods answer "what is the homology of the cloud" from the same
sub-samples: RC runs the persistence diagram over every replicate, TB
(topological bootstrapping) reduces each replicate directly and adds the
feature counts up without correlating them across replicates, and GMA
correlates them through the induced maps and the greedy basis.

Timed regions are deliberately narrow so the comparison is the published
one: the GMA clock covers only weight formation plus the greedy pass --
the induced-map ensemble is precomputed, shared input.  RC and TB each
pay for their own homology computations.  All methods consume identical
sub-samples per (size, seed), so records are paired.
"""
from __future__ import annotations

import csv
import json
import time
from collections import Counter
from dataclasses import dataclass

from .field import DEFAULT_P
from .homology import (BettiVector, betti_at_scale, persistence_baseline,
                       reduce_complex)
from .induced import induced_map_ensemble
from .matroid import estimate_from_basis, form_weights, greedy_basis
from .pointcloud import PointCloud, SampleSchedule, ThresholdRule, subsample
from .rips import build_rips

__all__ = [
    "BenchmarkRecord",
    "bootstrap_baseline",
    "run_benchmark",
    "save_benchmark_csv",
    "save_benchmark_summary",
    "summarize_benchmark",
]


@dataclass(frozen=True)
class BenchmarkRecord:
    """One method's timing and homology answer at one sub-sample size."""

    method: str              # "RC" | "GMA" | "TB"
    size: int
    wall_time_s: float
    homology: BettiVector
    seed: int


def _draws(full: PointCloud, schedule: SampleSchedule, size_index: int,
           rule: ThresholdRule) -> list[tuple[PointCloud, float]]:
    """The exact (sub-sample, threshold) pairs the ensemble pipeline uses
    for one size, re-derived from the schedule's per-replicate seeds."""
    size = schedule.sizes[size_index]
    out = []
    for rep in range(schedule.replicates):
        sub = subsample(full, size, schedule.replicate_seed(size_index, rep))
        out.append((sub, rule(full, sub)))
    return out


def bootstrap_baseline(full: PointCloud, schedule: SampleSchedule,
                       rule: ThresholdRule | None = None,
                       p: int = DEFAULT_P) -> dict[int, BettiVector]:
    """Uncorrelated feature counting: per size, each replicate's Betti
    vector is computed in isolation and the counts are summed.  Features
    seen by several replicates are counted several times -- the
    ambiguity the induced-map pipeline exists to remove."""
    rule = rule or ThresholdRule()
    out: dict[int, BettiVector] = {}
    for si, size in enumerate(schedule.sizes):
        b0 = b1 = 0
        for sub, thr in _draws(full, schedule, si, rule):
            betti = reduce_complex(build_rips(sub, thr), p).betti()
            b0 += betti.beta0
            b1 += betti.beta1
        out[size] = BettiVector(b0, b1)
    return out


def run_benchmark(full: PointCloud, schedule: SampleSchedule,
                  rule: ThresholdRule | None = None, p: int = DEFAULT_P,
                  steps: int = 50) -> list[BenchmarkRecord]:
    """Paired RC / GMA / TB records, one triple per size.

    RC's answer is the modal Betti vector over the replicates' diagrams
    read at their own thresholds; GMA's is the greedy-basis estimate;
    TB's is the uncorrelated sum.
    """
    rule = rule or ThresholdRule()
    ensemble = induced_map_ensemble(full, schedule, rule=rule, p=p)
    records = []
    for si, size in enumerate(schedule.sizes):
        draws = _draws(full, schedule, si, rule)

        rc_time = 0.0
        rc_answers = []
        for sub, thr in draws:
            t0 = time.perf_counter()
            pairs = persistence_baseline(sub, r_max=thr, steps=steps, p=p)
            rc_answers.append(betti_at_scale(pairs, thr).as_tuple())
            rc_time += time.perf_counter() - t0
        rc_mode = Counter(rc_answers).most_common(1)[0][0]
        records.append(BenchmarkRecord(
            "RC", size, rc_time, BettiVector(*rc_mode), schedule.seed))

        maps = [m for m in ensemble.maps if m.size == size]
        t0 = time.perf_counter()
        est = greedy_basis(form_weights(maps))
        gma_time = time.perf_counter() - t0
        gma = estimate_from_basis(est, ensemble.full[size].betti.beta0)
        records.append(BenchmarkRecord(
            "GMA", size, gma_time, gma, schedule.seed))

        t0 = time.perf_counter()
        b0 = b1 = 0
        for sub, thr in draws:
            betti = reduce_complex(build_rips(sub, thr), p).betti()
            b0 += betti.beta0
            b1 += betti.beta1
        tb_time = time.perf_counter() - t0
        records.append(BenchmarkRecord(
            "TB", size, tb_time, BettiVector(b0, b1), schedule.seed))
    return records


def save_benchmark_csv(records: list[BenchmarkRecord], path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["method", "size", "seed", "wall_time_s",
                         "beta0", "beta1"])
        for r in records:
            writer.writerow([r.method, r.size, r.seed, f"{r.wall_time_s:.6f}",
                             r.homology.beta0, r.homology.beta1])


def summarize_benchmark(records: list[BenchmarkRecord]) -> dict:
    """Per-(size, method) mean wall time and homology answers, the shape
    of the published comparison tables."""
    grouped: dict[tuple[int, str], list[BenchmarkRecord]] = {}
    for r in records:
        grouped.setdefault((r.size, r.method), []).append(r)
    rows = []
    for (size, method) in sorted(grouped):
        rs = grouped[(size, method)]
        rows.append({
            "size": size,
            "method": method,
            "runs": len(rs),
            "mean_wall_time_s": sum(r.wall_time_s for r in rs) / len(rs),
            "homology": [list(r.homology.as_tuple()) for r in rs],
        })
    return {"per_size": rows}


def save_benchmark_summary(records: list[BenchmarkRecord], path: str) -> None:
    with open(path, "w") as fh:
        json.dump(summarize_benchmark(records), fh, indent=1)
        fh.write("\n")
