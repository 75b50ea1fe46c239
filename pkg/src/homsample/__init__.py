"""Homology of a point cloud estimated from sub-sample ensembles.

The pipeline: draw sub-samples, build Vietoris-Rips complexes, reduce
their boundary matrices exactly over a prime field, push each sample's
loop classes into the full cloud through the inclusion-induced map on
H_1, then assemble one basis for the full cloud's loops with a greedy
independence pass over the ensemble.  Construction checks interrogate
the resulting basis for annulus- or figure-8-like structure, and the
bench module compares the estimator against persistence-diagram and
bootstrapping baselines on identical sub-samples.
"""
from .bench import (BenchmarkRecord, bootstrap_baseline, run_benchmark,
                    save_benchmark_csv, save_benchmark_summary,
                    summarize_benchmark)
from .constructions import (ConstructionReport, check_annulus, check_figure8,
                            dependent_subset, kernel_vector, load_matrix)
from .field import (DEFAULT_P, FieldMatrix, LUFactorization, binarize,
                    lu_full_pivot, rank, solve_in_span)
from .homology import (BettiVector, PersistencePair, ReducedChainComplex,
                       betti_at_scale, persistence_baseline, reduce,
                       reduce_complex)
from .induced import (EnsembleResult, FullComplexSummary, InducedMap,
                      induced_map_ensemble, induced_on_homology,
                      inclusion_chain_map, load_ensemble, save_ensemble,
                      vertex_injection)
from .matroid import (HomologyBasisEstimate, WeightedMap, WeightedMapSet,
                      estimate_from_basis, form_weights, greedy_basis,
                      load_basis, rank_statistics, save_basis)
from .pointcloud import (PointCloud, SampleSchedule, ThresholdRule,
                         generate_annulus, generate_figure8,
                         hausdorff_distance, load_cloud_csv, rips_threshold,
                         save_cloud_csv, subsample)
from .rips import BoundaryMatrix, SimplicialComplex, boundary_matrices, build_rips

__version__ = "0.1.0"

__all__ = [
    "BenchmarkRecord",
    "BettiVector",
    "BoundaryMatrix",
    "ConstructionReport",
    "DEFAULT_P",
    "EnsembleResult",
    "FieldMatrix",
    "FullComplexSummary",
    "HomologyBasisEstimate",
    "InducedMap",
    "LUFactorization",
    "PersistencePair",
    "PointCloud",
    "ReducedChainComplex",
    "SampleSchedule",
    "SimplicialComplex",
    "ThresholdRule",
    "WeightedMap",
    "WeightedMapSet",
    "betti_at_scale",
    "binarize",
    "boundary_matrices",
    "bootstrap_baseline",
    "build_rips",
    "check_annulus",
    "check_figure8",
    "dependent_subset",
    "estimate_from_basis",
    "form_weights",
    "generate_annulus",
    "generate_figure8",
    "greedy_basis",
    "hausdorff_distance",
    "inclusion_chain_map",
    "induced_map_ensemble",
    "induced_on_homology",
    "kernel_vector",
    "load_basis",
    "load_cloud_csv",
    "load_ensemble",
    "load_matrix",
    "lu_full_pivot",
    "persistence_baseline",
    "rank",
    "rank_statistics",
    "reduce",
    "reduce_complex",
    "rips_threshold",
    "run_benchmark",
    "save_basis",
    "save_benchmark_csv",
    "save_benchmark_summary",
    "save_cloud_csv",
    "save_ensemble",
    "solve_in_span",
    "subsample",
    "summarize_benchmark",
    "vertex_injection",
]
