"""Acceptance suite.

Each test implements one acceptance criterion at its stated tolerance (all
equalities are exact; the only tolerances are the runtime budgets) and prints
one PASS/FAIL line.  Run with ``pytest tests/test_acceptance.py -v -s``.
"""

import functools
import random
import time

import pytest

from blockdec import (
    Decomposer,
    Grid,
    LimitCache,
    check_strong_exactness,
    counterexample,
    decompose,
    enumerate_blocks,
    perturb,
    random_block_sum,
    square_exact,
    square_pullback_surjective,
    square_pushout_injective,
)
from blockdec.cli import main as cli_main
from blockdec.files import write_module
from blockdec.generator import PerturbBudgetError

from .helpers import (
    FIELD,
    all_cuboids,
    check_kernel_image_inclusions,
    check_section_transport,
    check_single_axis_laws,
    check_transport_all_signs,
    cuboid_points,
    random_commuting_square,
    random_grid,
    stacked_residual_split_ok,
    twisted_ground_truth,
)


def criterion(number, label):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"CRITERION {number:2d} FAIL: {label}")
                raise
            print(f"CRITERION {number:2d} PASS: {label}")

        return wrapper

    return deco


@pytest.fixture(scope="module")
def corpus():
    """200 seeded ground-truth runs (criterion 2) shared by criteria 2/3/8/9."""
    rng = random.Random(20_240_601)
    runs = []
    start = time.perf_counter()
    for seed in range(200):
        grid = random_grid(rng, max_cells=4)
        truth, module = twisted_ground_truth(FIELD, grid, seed=seed, max_blocks=3, max_mult=2)
        decomposer = Decomposer(module)
        report = decomposer.decompose() if decomposer.strongly_exact else None
        runs.append((truth, module, decomposer, report))
    elapsed = time.perf_counter() - start
    return {"runs": runs, "elapsed": elapsed}


@pytest.fixture(scope="module")
def law_corpus():
    """50 strongly exact block sums on small grids (criteria 4 and 7)."""
    pool = [
        Grid((2, 2, 2)),
        Grid((3, 2, 1)),
        Grid((2, 1, 2)),
        Grid((3, 2, 2)),
        Grid((1, 3, 2)),
        Grid((2, 2, 1)),
    ]
    modules = []
    for seed in range(50):
        grid = pool[seed % len(pool)]
        _, module = twisted_ground_truth(FIELD, grid, seed=1000 + seed)
        modules.append(module)
    return modules


@criterion(1, "counterexample signature and cmd_check exit code, under 1 s")
def test_criterion_01_counterexample(tmp_path):
    start = time.perf_counter()
    module = counterexample(FIELD)
    assert module.validate().ok
    report = check_strong_exactness(module)
    assert report.slice_failures == []
    assert [f.condition for f in report.cube_failures] == ["colimit-injective"]
    assert (report.cube_failures[0].s, report.cube_failures[0].t) == ((1, 1, 1), (2, 2, 2))
    path = tmp_path / "example.json"
    write_module(module, path)
    assert cli_main(["check", "--input", str(path)]) == 1
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"criterion 1 took {elapsed:.3f}s"


@criterion(2, "200 seeded round trips recover the exact multiset, under 60 s")
def test_criterion_02_round_trip(corpus):
    assert len(corpus["runs"]) == 200
    for truth, _module, decomposer, report in corpus["runs"]:
        assert decomposer.strongly_exact
        assert report is not None
        assert report.multiset() == {b.intervals: k for b, k in truth.multiset}
    assert corpus["elapsed"] < 60.0, f"200 runs took {corpus['elapsed']:.1f}s"


@criterion(3, "conservation holds exactly at every grid point of every run")
def test_criterion_03_conservation(corpus):
    for _truth, module, _decomposer, report in corpus["runs"]:
        for row in report.conservation:
            assert row.ok
            assert row.dim == module.dim(row.at)
        assert report.verified


@criterion(4, "transport and inclusion laws hold at every (s, t, cut) tuple")
def test_criterion_04_law_suites(law_corpus):
    assert len(law_corpus) >= 50
    for module in law_corpus:
        for s, t in module.grid.pairs():
            check_single_axis_laws(module, s, t)
        cache = LimitCache(module)
        for cuboid in all_cuboids(module.grid):
            pts = list(cuboid_points(module.grid, cuboid))
            for t in pts:
                check_kernel_image_inclusions(module, cache, cuboid, t)
            for s in pts:
                for t in pts:
                    if all(si <= ti for si, ti in zip(s, t)):
                        check_transport_all_signs(module, cache, cuboid, s, t)
                        check_section_transport(module, cache, cuboid, s, t)


@criterion(5, "the three square predicates agree on 200 mixed random squares")
def test_criterion_05_square_equivalence():
    rng = random.Random(555)
    outcomes = {True: 0, False: 0}
    for _ in range(200):
        square = random_commuting_square(FIELD, rng)
        a = square_exact(square)
        b = square_pullback_surjective(square)
        c = square_pushout_injective(square)
        assert a == b == c
        outcomes[a] += 1
    assert outcomes[True] > 0 and outcomes[False] > 0


@criterion(6, "counting laws: identity on block pairs, additivity, twist invariance")
def test_criterion_06_counting_laws():
    from blockdec import block_module, direct_sum

    grid = Grid((3, 3, 3))
    blocks = enumerate_blocks(grid)
    for inner in blocks:
        d = Decomposer(block_module(FIELD, grid, inner))
        for probe in blocks:
            assert d.multiplicity(probe) == (1 if probe == inner else 0)

    rng = random.Random(66)
    for pair in range(50):
        small = random_grid(rng, max_cells=3, max_points=12)
        a = random_block_sum(FIELD, small, seed=2000 + pair).module
        b = random_block_sum(FIELD, small, seed=3000 + pair).module
        ab = direct_sum(a, b)
        da, db, dab = Decomposer(a), Decomposer(b), Decomposer(ab)
        dtw = Decomposer(ab.basis_twist(pair))
        for blk in enumerate_blocks(small):
            total = dab.multiplicity(blk)
            assert total == da.multiplicity(blk) + db.multiplicity(blk)
            assert dtw.multiplicity(blk) == total


@criterion(7, "counting dimension is constant across every block's points")
def test_criterion_07_counting_constancy(law_corpus):
    for module in law_corpus:
        decomposer = Decomposer(module)
        assert decomposer.strongly_exact
        for blk in enumerate_blocks(module.grid):
            values = {decomposer.sections(blk, t).counting for t in blk.points()}
            assert len(values) == 1


@criterion(8, "explicit direct sums verify and the residual split has full rank")
def test_criterion_08_direct_sum(corpus):
    for _truth, _module, decomposer, report in corpus["runs"]:
        assert decomposer.verify(report)
        assert stacked_residual_split_ok(decomposer, report)


@criterion(9, "decomposition commutes with duality; dualize is an involution")
def test_criterion_09_duality(corpus):
    checked = 0
    for _truth, module, _decomposer, report in corpus["runs"][:30]:
        double = module.dualize().dualize()
        assert double.dims == module.dims
        for key in module.step_keys():
            assert double.step(*key) == module.step(*key)
        dual_report = decompose(module.dualize())
        assert dual_report.multiset() == {
            b.reversed().intervals: k for b, k in report.entries
        }
        checked += 1
    assert checked >= 30


@criterion(10, "500 perturbed modules: exactness never passes with broken conservation")
def test_criterion_10_fuzz():
    rng = random.Random(717)
    produced = 0
    passing = 0
    seed = 0
    while produced < 500:
        seed += 1
        assert seed < 5000, "fuzz generation stalled"
        grid = random_grid(rng, max_cells=4, max_points=18)
        truth = random_block_sum(FIELD, grid, seed=seed)
        if truth.module.total_dim() == 0:
            continue
        module = truth.module.basis_twist(seed)
        try:
            mutated = perturb(module, seed)
        except PerturbBudgetError:
            continue
        produced += 1
        decomposer = Decomposer(mutated)
        if decomposer.strongly_exact:
            passing += 1
            report = decomposer.decompose()
            assert report.verified, (
                f"seed {seed}: exactness passed but conservation failed"
            )
    assert produced >= 500
    assert passing > 0  # the fuzz actually exercises the passing branch
