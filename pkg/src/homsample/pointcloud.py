"""Point clouds, benchmark shape generators, and sub-sampling.

All randomness flows through numpy's default PCG64 generator seeded with
an explicit integer, so every cloud and every sub-sample is reproducible
across platforms from its seed alone.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.spatial.distance import cdist


@dataclass(frozen=True)
class PointCloud:
    """Finite point set in R^d with optional provenance metadata."""
    points: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2:
            raise ValueError(f"points must be an (n, dim) array, got ndim={pts.ndim}")
        object.__setattr__(self, "points", pts)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class SampleSchedule:
    """Sub-sample sizes, replicates per size, and the base seed for drawing them."""
    sizes: tuple[int, ...]
    replicates: int
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        if not self.sizes or any(s < 1 for s in self.sizes):
            raise ValueError(f"sizes must be positive, got {self.sizes}")
        if self.replicates < 1:
            raise ValueError(f"replicates must be >= 1, got {self.replicates}")

    def replicate_seed(self, size_index: int, replicate: int) -> int:
        """Deterministic per-replicate seed derived from the base seed."""
        ss = np.random.SeedSequence(entropy=self.seed,
                                    spawn_key=(size_index, replicate))
        return int(ss.generate_state(1, dtype=np.uint64)[0])


def generate_figure8(n: int, noise: float = 0.1, seed: int = 0) -> PointCloud:
    """Noisy figure-8: two unit circles tangent at the origin.

    Points are drawn arc-length uniform along the two circles (centers
    (0, 1) and (0, -1)), then perturbed with isotropic Gaussian noise.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if noise < 0:
        raise ValueError(f"noise must be >= 0, got {noise}")
    rng = np.random.default_rng(seed)
    t = rng.uniform(0.0, 4.0 * np.pi, size=n)
    upper = t < 2.0 * np.pi
    theta = np.mod(t, 2.0 * np.pi)
    x = np.sin(theta)
    y = np.where(upper, 1.0 - np.cos(theta), np.cos(theta) - 1.0)
    pts = np.column_stack([x, y])
    if noise > 0:
        pts = pts + rng.normal(0.0, noise, size=pts.shape)
    return PointCloud(pts, {"shape": "figure8", "n": n, "noise": noise, "seed": seed})


def generate_annulus(n: int, r_inner: float = 0.5, r_outer: float = 1.0,
                     noise: float = 0.05, seed: int = 0) -> PointCloud:
    """Points uniform in area over the annulus r_inner <= |p| <= r_outer, plus noise."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0 < r_inner < r_outer:
        raise ValueError(f"need 0 < r_inner < r_outer, got {r_inner}, {r_outer}")
    if noise < 0:
        raise ValueError(f"noise must be >= 0, got {noise}")
    rng = np.random.default_rng(seed)
    radius = np.sqrt(rng.uniform(r_inner**2, r_outer**2, size=n))
    angle = rng.uniform(0.0, 2.0 * np.pi, size=n)
    pts = np.column_stack([radius * np.cos(angle), radius * np.sin(angle)])
    if noise > 0:
        pts = pts + rng.normal(0.0, noise, size=pts.shape)
    return PointCloud(pts, {"shape": "annulus", "n": n, "r_inner": r_inner,
                            "r_outer": r_outer, "noise": noise, "seed": seed})


def subsample(cloud: PointCloud, n: int, seed: int = 0) -> PointCloud:
    """Draw n points without replacement; indices are kept sorted so the
    sample preserves the parent's point order."""
    total = len(cloud)
    if not 1 <= n <= total:
        raise ValueError(f"sample size {n} out of range 1..{total}")
    rng = np.random.default_rng(seed)
    idx = np.sort(rng.choice(total, size=n, replace=False))
    meta = dict(cloud.meta)
    meta.update({"parent_indices": idx.tolist(), "sample_size": n, "sample_seed": seed})
    return PointCloud(cloud.points[idx].copy(), meta)


def hausdorff_distance(a: PointCloud, b: PointCloud) -> float:
    """Symmetric Hausdorff distance under the Euclidean metric, brute force O(nm)."""
    if len(a) == 0 or len(b) == 0:
        raise ValueError("hausdorff_distance needs non-empty clouds")
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    d = cdist(a.points, b.points)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def rips_threshold(full: PointCloud, sample: PointCloud, base: float = 0.25) -> float:
    """Complex-building threshold for a sample drawn from `full`:
    base + 2 * Hausdorff distance between sample and full cloud."""
    return base + 2.0 * hausdorff_distance(sample, full)


@dataclass(frozen=True)
class ThresholdRule:
    """Per-sample threshold policy: adaptive base + 2*d_H, or a fixed constant."""
    base: float = 0.25
    fixed: Optional[float] = None

    def __call__(self, full: PointCloud, sample: PointCloud) -> float:
        if self.fixed is not None:
            return float(self.fixed)
        return rips_threshold(full, sample, self.base)


def save_cloud_csv(cloud: PointCloud, path) -> None:
    """One point per line, comma-separated coordinates, no header."""
    np.savetxt(path, cloud.points, delimiter=",", fmt="%.17g")


def load_cloud_csv(path) -> PointCloud:
    with warnings.catch_warnings():
        # emptiness is reported as a ValueError below, not a warning
        warnings.simplefilter("ignore", UserWarning)
        pts = np.loadtxt(path, delimiter=",", ndmin=2, dtype=np.float64)
    if pts.size == 0:
        raise ValueError(f"no points in {path}")
    return PointCloud(pts, {"source": str(path)})
