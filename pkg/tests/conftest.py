"""Shared fixtures: hand-crafted complexes with known homology, random
complex generators, and the bundled reference-data directory."""
from __future__ import annotations

from importlib import resources

import numpy as np
import pytest

from homsample import PointCloud, SimplicialComplex, build_rips


def make_complex(n_vertices: int, edges, triangles=()) -> SimplicialComplex:
    """Assemble a complex from explicit simplex lists (point positions are
    irrelevant to the chain complex, so a dummy cloud suffices)."""
    cloud = PointCloud(np.zeros((n_vertices, 2)))
    e = np.array(sorted(tuple(x) for x in edges), dtype=np.int32).reshape(-1, 2)
    t = np.array(sorted(tuple(x) for x in triangles), dtype=np.int32).reshape(-1, 3)
    return SimplicialComplex(cloud=cloud, threshold=0.0, max_dim=2,
                             edges=e, triangles=t)


def wedge_of_circles() -> SimplicialComplex:
    """Two hollow triangles glued at vertex 0: connected, two independent
    loops -- Betti (1, 2)."""
    return make_complex(5, [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)])


def triangulated_ring() -> SimplicialComplex:
    """Six-vertex triangulation of an annulus (outer cycle 0-1-2, inner
    cycle 3-4-5, six triangles): Betti (1, 1), Euler characteristic 0."""
    edges = [(0, 1), (0, 2), (0, 3), (0, 5), (1, 2), (1, 3),
             (1, 4), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5)]
    triangles = [(0, 1, 3), (0, 2, 5), (0, 3, 5),
                 (1, 2, 4), (1, 3, 4), (2, 4, 5)]
    return make_complex(6, edges, triangles)


def random_cloud(rng: np.random.Generator, n: int, dim: int = 2) -> PointCloud:
    return PointCloud(rng.uniform(-1.0, 1.0, size=(n, dim)))


def random_complex(rng: np.random.Generator, max_vertices: int = 12,
                   max_dim: int = 2) -> SimplicialComplex:
    """A Rips complex on a small random cloud at a random scale."""
    n = int(rng.integers(3, max_vertices + 1))
    r = float(rng.uniform(0.3, 1.2))
    return build_rips(random_cloud(rng, n), r, max_dim=max_dim)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)


@pytest.fixture(scope="session")
def reference_dir():
    """Directory with the bundled induced-map ensembles and greedy bases."""
    return resources.files("homsample") / "fixtures"
