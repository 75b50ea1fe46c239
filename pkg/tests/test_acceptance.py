"""Acceptance gate: one test per shipped criterion.

Each test prints a single `ACCEPTANCE <n> <name>: PASS/FAIL (...)` line on
the live console before asserting, so a full run reads as a checklist.
Heavy artifacts (the statistical reproduction runs and the benchmark
records) are computed once in module-scoped fixtures and shared.
"""
import itertools
import json
import time
from importlib import resources

import numpy as np
import pytest

from homsample import (FieldMatrix, InducedMap, SampleSchedule,
                       boundary_matrices, build_rips, check_annulus,
                       check_figure8, estimate_from_basis, form_weights,
                       generate_annulus, generate_figure8, greedy_basis,
                       inclusion_chain_map, induced_map_ensemble,
                       induced_on_homology, load_ensemble, lu_full_pivot,
                       rank, reduce, reduce_complex, run_benchmark,
                       solve_in_span, subsample, vertex_injection)
from homsample.induced import _edge_positions, _induced_sparse
from conftest import random_cloud, triangulated_ring, wedge_of_circles
from oracles import (betti_rank_nullity, exhaustive_in_span,
                     exhaustive_kernel_vector, row_reduce_rank)

REFERENCE = resources.files("homsample") / "fixtures"


def report(capsys, num, name, ok, detail):
    with capsys.disabled():
        verdict = "PASS" if ok else "FAIL"
        print(f"ACCEPTANCE {num:02d} {name}: {verdict} ({detail})",
              flush=True)


def replay_reported(shape, size):
    maps = load_ensemble(str(REFERENCE / f"{shape}_maps_{size}.json"))
    est = greedy_basis(form_weights(maps))
    with open(str(REFERENCE / f"{shape}_basis_{size}.json")) as fh:
        reported = FieldMatrix.from_json(json.load(fh))
    return est, reported.transpose()


@pytest.fixture(scope="module")
def fig8_runs():
    """Full pipeline on the noisy figure-8, size 300, sampling seeds 0-9."""
    cloud = generate_figure8(1000, noise=0.1, seed=42)
    t0 = time.perf_counter()
    runs = []
    for seed in range(10):
        schedule = SampleSchedule(sizes=(300,), replicates=10, seed=seed)
        result = induced_map_ensemble(cloud, schedule)
        est = greedy_basis(form_weights(result.maps))
        estimate = estimate_from_basis(est, result.full[300].betti.beta0)
        runs.append({
            "seed": seed,
            "estimate": estimate.as_tuple(),
            "tb": (sum(m.betti_sub[0] for m in result.maps),
                   sum(m.betti_sub[1] for m in result.maps)),
        })
    return {"runs": runs, "elapsed": time.perf_counter() - t0}


@pytest.fixture(scope="module")
def annulus_runs():
    """Full pipeline on the noisy annulus, size 800, sampling seeds 0-9."""
    cloud = generate_annulus(1000, noise=0.05, seed=42)
    t0 = time.perf_counter()
    runs = []
    for seed in range(10):
        schedule = SampleSchedule(sizes=(800,), replicates=10, seed=seed)
        result = induced_map_ensemble(cloud, schedule)
        est = greedy_basis(form_weights(result.maps))
        estimate = estimate_from_basis(est, result.full[800].betti.beta0)
        runs.append({"seed": seed, "estimate": estimate.as_tuple()})
    return {"runs": runs, "elapsed": time.perf_counter() - t0}


@pytest.fixture(scope="module")
def bench_records():
    """Paired RC/GMA/TB records at desk scale, two sampling seeds."""
    cloud = generate_figure8(400, noise=0.1, seed=42)
    records = []
    for seed in (0, 1):
        schedule = SampleSchedule(sizes=(100, 150), replicates=10, seed=seed)
        records.extend(run_benchmark(cloud, schedule))
    return records


def test_01_chain_complex_axiom(capsys):
    rng = np.random.default_rng(101)
    t0 = time.perf_counter()
    for _ in range(200):
        cloud = random_cloud(rng, int(rng.integers(5, 21)))
        cx = build_rips(cloud, float(rng.uniform(0.3, 1.0)))
        d1, d2 = boundary_matrices(cx, p=3)
        assert (d1.matrix @ d2.matrix).is_zero()
    elapsed = time.perf_counter() - t0
    ok = elapsed < 30.0
    report(capsys, 1, "chain-complex axiom", ok,
           f"200 complexes, d1@d2 = 0, {elapsed:.1f}s")
    assert ok


def test_02_exact_solver_oracle(capsys):
    t0 = time.perf_counter()
    checked = 0
    for m, n in itertools.product((1, 2, 3), repeat=2):
        targets = np.array(list(itertools.product(range(3), repeat=m)),
                           dtype=np.int64)
        combos = np.array(list(itertools.product(range(3), repeat=n)),
                          dtype=np.int64)
        for entries in itertools.product(range(3), repeat=m * n):
            data = np.array(entries, dtype=np.int64).reshape(m, n)
            a = FieldMatrix(data, 3)
            assert rank(a) == row_reduce_rank(data, 3)
            reachable = {v.tobytes() for v in combos @ data.T % 3}
            for b in targets:
                in_span = solve_in_span(a, b) is not None
                assert in_span == (b.tobytes() in reachable)
            checked += 1

    rng = np.random.default_rng(102)
    for _ in range(10_000):
        m = int(rng.integers(1, 7))
        n = int(rng.integers(1, 7))
        data = rng.integers(0, 3, size=(m, n))
        a = FieldMatrix(data, 3)
        assert rank(a) == row_reduce_rank(data, 3)
        inside = data @ rng.integers(0, 3, size=n) % 3
        assert solve_in_span(a, inside) is not None
        b = rng.integers(0, 3, size=m)
        got = solve_in_span(a, b)
        assert (got is not None) == \
            (exhaustive_in_span(data, b, 3) is not None)
        checked += 1
    elapsed = time.perf_counter() - t0
    ok = elapsed < 60.0
    report(capsys, 2, "exact-solver oracle", ok,
           f"{checked} matrices (21297 exhaustive + 10000 random), "
           f"{elapsed:.1f}s")
    assert ok


def test_03_lu_invariant(capsys):
    rng = np.random.default_rng(103)
    t0 = time.perf_counter()
    for _ in range(10_000):
        m = int(rng.integers(1, 13))
        n = int(rng.integers(1, 13))
        a = FieldMatrix(rng.integers(0, 3, size=(m, n)), 3)
        fac = lu_full_pivot(a)
        permuted = a.data[np.ix_(fac.row_perm, fac.col_perm)]
        assert np.array_equal(permuted, (fac.L @ fac.U).data)
    hazards = [([[0, 0, 0], [0, 1, 0], [1, 0, 0]], 2),
               ([[0, 1, 0], [0, 1, 0], [0, 0, 0]], 1)]
    for rows, expected in hazards:
        fac = lu_full_pivot(FieldMatrix(rows, 3))
        assert fac.rank == expected
        assert fac.reassemble() == FieldMatrix(rows, 3)
    elapsed = time.perf_counter() - t0
    report(capsys, 3, "LU invariant", True,
           f"10000 random matrices + 2 hazard cases, {elapsed:.1f}s")


def test_04_homology_oracle(capsys):
    rng = np.random.default_rng(104)
    done = 0
    while done < 100:
        cloud = random_cloud(rng, int(rng.integers(4, 10)))
        cx = build_rips(cloud, float(rng.uniform(0.35, 1.0)))
        if sum(cx.simplex_counts()) > 40:
            continue
        got = reduce(boundary_matrices(cx)).betti().as_tuple()
        assert got == betti_rank_nullity(cx.n_vertices, cx.edges,
                                         cx.triangles, 3)
        done += 1
    wedge = reduce_complex(wedge_of_circles()).betti().as_tuple()
    ring = reduce_complex(triangulated_ring()).betti().as_tuple()
    assert wedge == (1, 2)
    assert ring == (1, 1)
    report(capsys, 4, "homology oracle", True,
           f"100 random complexes <= 40 simplices; wedge {wedge}, "
           f"ring {ring}")


def test_05_induced_functoriality(capsys):
    identity_cases = route_cases = composition_cases = nontrivial = 0

    for seed in (0, 2, 3, 4, 7):
        cloud = generate_figure8(120, noise=0.05, seed=seed)
        cx = build_rips(cloud, 0.45)
        rcc = reduce_complex(cx)
        cmap = inclusion_chain_map(cx, cx, k=1)
        m = induced_on_homology(rcc, rcc, cmap).matrix
        beta1 = rcc.betti().beta1
        assert beta1 >= 1
        assert np.array_equal(m.data, np.eye(beta1))
        identity_cases += 1
        nontrivial += 1

    for seed in range(10):
        full = generate_annulus(70, noise=0.04, seed=seed)
        sub = subsample(full, 40, seed=seed + 100)
        sub_cx, full_cx = build_rips(sub, 0.55), build_rips(full, 0.7)
        sub_rcc, full_rcc = reduce_complex(sub_cx), reduce_complex(full_cx)
        dense = induced_on_homology(
            sub_rcc, full_rcc, inclusion_chain_map(sub_cx, full_cx)).matrix
        emap = _edge_positions(sub_cx, full_cx,
                               vertex_injection(sub, full))
        assert _induced_sparse(sub_rcc, full_rcc, emap, {}) == dense
        route_cases += 1
        nontrivial += int(dense.rows > 0 and dense.cols > 0)

    for seed in range(7):
        c = generate_annulus(80, noise=0.04, seed=seed)
        b = subsample(c, 50, seed=seed + 50)
        a = subsample(b, 32, seed=seed + 200)
        cx_a, cx_b, cx_c = (build_rips(a, 0.55), build_rips(b, 0.62),
                            build_rips(c, 0.7))
        rcc_a, rcc_b, rcc_c = (reduce_complex(cx_a), reduce_complex(cx_b),
                               reduce_complex(cx_c))
        f_ab = induced_on_homology(
            rcc_a, rcc_b, inclusion_chain_map(cx_a, cx_b)).matrix
        f_bc = induced_on_homology(
            rcc_b, rcc_c, inclusion_chain_map(cx_b, cx_c)).matrix
        f_ac = induced_on_homology(
            rcc_a, rcc_c, inclusion_chain_map(cx_a, cx_c)).matrix
        assert f_bc @ f_ab == f_ac
        composition_cases += 1
        nontrivial += int(f_ac.cols > 0 and f_ac.rows > 0)

    total = identity_cases + route_cases + composition_cases
    ok = total >= 20 and nontrivial >= 10
    report(capsys, 5, "induced-map functoriality", ok,
           f"{total} nested cases ({identity_cases} identity, "
           f"{route_cases} route-equality, {composition_cases} composition; "
           f"{nontrivial} with nontrivial H_1)")
    assert ok


def test_06_reference_replay_rank(capsys):
    ranks = {}
    for size in (300, 500, 800):
        est, _ = replay_reported("figure8", size)
        ranks[size] = est.rank
    ok = all(r == 2 for r in ranks.values())
    report(capsys, 6, "figure-8 replay rank", ok,
           f"greedy replay ranks {ranks}, required 2 at every size")
    assert ok, (
        f"replaying the recorded figure-8 ensembles gives basis ranks "
        f"{ranks}; the published runs report rank 2. The recorded maps "
        f"support a higher rank, so the greedy pass accepts more columns; "
        f"see the repository notes for the full analysis.")


def test_07_construction_checks_on_reported_bases(capsys):
    verdicts = {}
    for size in (300, 800):
        _, reported_t = replay_reported("figure8", size)
        verdicts[f"figure8-{size}"] = check_figure8(reported_t).found
    for size in (100, 300, 500):
        _, reported_t = replay_reported("annulus", size)
        verdicts[f"annulus-{size}"] = check_annulus(reported_t).found
    eye = FieldMatrix.identity(4)
    verdicts["identity-f8"] = check_figure8(eye).found
    verdicts["identity-ann"] = check_annulus(eye).found
    expected = {"figure8-300": True, "figure8-800": True,
                "annulus-100": True, "annulus-300": False,
                "annulus-500": False, "identity-f8": False,
                "identity-ann": False}
    ok = verdicts == expected
    report(capsys, 7, "construction checks", ok, f"verdicts {verdicts}")
    assert ok


def test_08_statistical_reproduction(capsys, fig8_runs, annulus_runs):
    fig_hits = sum(1 for r in fig8_runs["runs"] if r["estimate"] == (1, 2))
    ann_hits = sum(1 for r in annulus_runs["runs"]
                   if r["estimate"][1] == 1)
    elapsed = fig8_runs["elapsed"] + annulus_runs["elapsed"]
    ok = fig_hits >= 7 and ann_hits >= 7 and elapsed < 600.0
    report(capsys, 8, "statistical reproduction", ok,
           f"figure8 (1,2) on {fig_hits}/10 seeds, annulus beta1=1 on "
           f"{ann_hits}/10 seeds, {elapsed:.0f}s")
    assert ok


def test_09_speed_relation(capsys, bench_records):
    by_key = {}
    for r in bench_records:
        by_key.setdefault((r.size, r.seed), {})[r.method] = r.wall_time_s
    ratios = {k: v["RC"] / v["GMA"] for k, v in by_key.items()
              if k[0] >= 100}
    ok = len(ratios) == 4 and all(v >= 10.0 for v in ratios.values())
    pretty = {f"size{k[0]}/seed{k[1]}": round(v, 1)
              for k, v in sorted(ratios.items())}
    report(capsys, 9, "speed relation", ok,
           f"RC/GMA wall-time ratios {pretty}, required >= 10x")
    assert ok


def test_10_tb_overcounting(capsys, fig8_runs):
    target = (1, 2)
    overcounting = []
    gma_clean = True
    for r in fig8_runs["runs"]:
        tb = r["tb"]
        dominates = tb[0] >= target[0] and tb[1] >= target[1]
        strict = tb[0] > target[0] or tb[1] > target[1]
        if dominates and strict:
            overcounting.append(r["seed"])
            est = r["estimate"]
            if est[0] > target[0] or est[1] > target[1]:
                gma_clean = False
    ok = len(overcounting) >= 5 and gma_clean
    report(capsys, 10, "TB overcounting", ok,
           f"TB strictly overcounts on {len(overcounting)}/10 seeds, "
           f"GMA within target on those: {gma_clean}")
    assert ok


def test_11_matroid_properties(capsys):
    rng = np.random.default_rng(111)
    for _ in range(1000):
        n_rows = int(rng.integers(2, 5))
        maps = []
        for i in range(int(rng.integers(1, 5))):
            n_cols = int(rng.integers(0, 4))
            maps.append(InducedMap(
                matrix=FieldMatrix(rng.integers(0, 3, size=(n_rows, n_cols)),
                                   3),
                sample_id=str(i)))
        est = greedy_basis(form_weights(maps))
        assert exhaustive_kernel_vector(est.basis.data, 3) is None
        union = np.column_stack(
            [np.zeros((n_rows, 0), dtype=np.int64)]
            + [(m.matrix.data != 0).astype(np.int64) for m in maps])
        assert est.rank == row_reduce_rank(union, 3)
    report(capsys, 11, "matroid properties", True,
           "1000 random ensembles: greedy columns independent, "
           "rank equals the concatenated ensemble's rank")
