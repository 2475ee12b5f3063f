from concurrent.futures import ThreadPoolExecutor

import pytest

from src import oracle
from src.field import ambient_ctx, enumerate_subfield, make_ctx, sample_subfield, tmap
from src.gf2_linalg import Gf2Matrix
from src.oracle import (
    LawReport,
    LawResult,
    brute_solve,
    brute_solve_all,
    check_laws,
    check_solvers,
    coordinate_system,
    half_trace_solve,
    linalg_solve,
    operator_matrix,
    preimage_of_subfield,
    trace_one_element,
)
from src.solver import kernel_tlk, solve_quadratic
from src.utils import ParameterError, divisors


def _values(solutions):
    return [x.value for x in solutions.elements()]


@pytest.mark.order(65)
def test_brute_solve_examples():
    # Given
    ctx = ambient_ctx(2, 2)

    # Then
    assert [x.value for x in brute_solve(2, 2, 1, ctx.zero)] == [0x0, 0x1]
    gf8 = ambient_ctx(3, 1)
    for a in enumerate_subfield(gf8, 3):
        assert brute_solve(3, 1, 1, a) == [a]
    # x^2 + x = 1 over GF(8)
    assert brute_solve(3, 2, 1, ambient_ctx(3, 2).one) == []


@pytest.mark.order(66)
def test_brute_solve_guards():
    with pytest.raises(ParameterError):
        brute_solve(21, 1, 1, make_ctx(21).zero)
    with pytest.raises(ParameterError):
        brute_solve(2, 3, 2, ambient_ctx(2, 3).zero)
    with pytest.raises(ParameterError):
        brute_solve(2, 2, 1, ambient_ctx(2, 2).gen)


@pytest.mark.order(67)
def test_brute_solve_all_partitions_the_field():
    ctx = ambient_ctx(4, 2)
    table = brute_solve_all(4, 2, 1, ctx)
    assert sum(len(v) for v in table.values()) == 16
    for value, solutions in table.items():
        assert solutions == brute_solve(4, 2, 1, ctx.element(value))


@pytest.mark.order(68)
def test_operator_matrix():
    # Given
    ctx = ambient_ctx(3, 2)

    # Then
    assert operator_matrix(ambient_ctx(3, 1), 3, 1, 1) == Gf2Matrix.identity(3)
    # x + x^2 on GF(8) is 2-to-1
    matrix = operator_matrix(ctx, 3, 2, 1)
    assert matrix.rank() == 2
    assert len(matrix.nullspace()) == 1


@pytest.mark.order(69)
def test_coordinates_round_trip():
    ctx = ambient_ctx(4, 3)
    system = coordinate_system(ctx, 4)
    for x in enumerate_subfield(ctx, 4):
        assert system.element(system.coordinates(x)) == x
    with pytest.raises(ParameterError):
        system.coordinates(ctx.gen)


@pytest.mark.order(70)
def test_coordinate_system_is_built_once():
    # Given
    oracle.clear_caches()
    ctx = ambient_ctx(6, 4)

    # When
    with ThreadPoolExecutor(max_workers=8) as pool:
        systems = list(pool.map(lambda _: coordinate_system(ctx, 6), range(32)))

    # Then
    assert all(system is systems[0] for system in systems)


@pytest.mark.order(71)
def test_linalg_beyond_n():
    # T_4 on GF(4) is the zero map
    ctx = ambient_ctx(2, 4)
    zero = linalg_solve(2, 4, 1, ctx.zero)
    assert zero.count == 4
    assert not linalg_solve(2, 4, 1, ctx.one).solvable
    # T_3 on GF(4) is a permutation
    ctx = ambient_ctx(2, 3)
    for a in enumerate_subfield(ctx, 2):
        assert _values(linalg_solve(2, 3, 1, a)) == [x.value for x in brute_solve(2, 3, 1, a)]
        assert linalg_solve(2, 3, 1, a).count == 1


@pytest.mark.order(72)
@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_linalg_matches_brute_force(n):
    for k in range(1, n + 3):
        for l in divisors(k):
            ctx = ambient_ctx(n, k)
            table = brute_solve_all(n, k, l, ctx)
            if k <= n:
                assert len(linalg_solve(n, k, l, ctx.zero).kernel_basis) == len(kernel_tlk(n, k, l, ctx))
            for a in enumerate_subfield(ctx, n):
                assert _values(linalg_solve(n, k, l, a)) == [x.value for x in table.get(a.value, [])]


@pytest.mark.order(73)
def test_half_trace_examples():
    # Given GF(4) inside GF(16): the trace-one element is found by scanning the basis
    ctx = ambient_ctx(2, 1)
    assert trace_one_element(ctx, 2).value == 0x7
    assert trace_one_element(ambient_ctx(3, 1), 3).value == 0x1

    # Then
    assert _values(half_trace_solve(2, ctx.zero)) == [0, 1]
    assert _values(half_trace_solve(2, ctx.one)) == [0x6, 0x7]
    assert not half_trace_solve(3, ambient_ctx(3, 1).one).solvable


@pytest.mark.order(74)
@pytest.mark.parametrize("n", range(1, 8))
def test_half_trace_matches_quadratic_formula(n):
    ctx = ambient_ctx(n, 2)
    for a in enumerate_subfield(ctx, n):
        classical = half_trace_solve(n, a)
        assert _values(classical) == _values(solve_quadratic(n, a))
        assert all(tmap(x, 1, 2) == a for x in classical.elements())


@pytest.mark.order(75)
def test_preimage_of_subfield_example():
    # {x : T_2(x) in GF(4)} inside GF(2^8)
    ctx = make_ctx(8)
    members = preimage_of_subfield(ctx, 2, 2)
    assert len(members) == 8
    assert {0x0, 0x1} <= members


@pytest.mark.order(76)
def test_law_result_records_first_counterexample():
    # Given
    ctx = ambient_ctx(1, 1)
    result = LawResult("demo", "x = x")

    # When
    result.record(True, x=ctx.one)
    result.record(False, x=ctx.zero, n=3)
    result.record(False, x=ctx.one)

    # Then
    assert (result.trials, result.failures) == (3, 2)
    assert result.counterexample == {"x": "0x0", "n": "3"}
    assert not result.passed
    assert result.line().startswith("FAIL  demo")
    report = LawReport([result, LawResult("ok", "1 = 1", trials=1)])
    assert report.failures == 2 and not report.passed
    assert report.get("ok").passed
    assert report.to_dict()["laws"][1]["name"] == "ok"


@pytest.mark.order(77)
def test_check_laws_small():
    # When
    report = check_laws(max_n=3, max_k=3, samples=40, seed=1)

    # Then
    failing = [r.line() for r in report.results if not r.passed]
    assert failing == []
    names = {r.name for r in report.results}
    assert {"transitivity", "membership-duality", "coset-proposition", "example-n2-k2", "xi-independence"} <= names
    assert all(r.trials > 0 for r in report.results)


@pytest.mark.order(78)
def test_check_laws_degenerate_scope():
    report = check_laws(max_n=1, max_k=1, samples=5)
    assert report.passed
    with pytest.raises(ParameterError):
        check_laws(max_n=0, max_k=1, samples=5)


@pytest.mark.order(79)
def test_check_solvers_small():
    # When
    report = check_solvers(max_n=4, samples=10, seed=2)

    # Then
    assert [r.line() for r in report.results if not r.passed] == []
    assert report.get("solver-equivalence").trials > 0
    assert report.get("classification-beyond-n").trials > 0
    assert report.get("quadratic-cross-check").trials > 0


@pytest.mark.order(80)
def test_check_solvers_parallel_report_is_deterministic():
    serial = check_solvers(max_n=3, samples=5, seed=3, jobs=1)
    parallel = check_solvers(max_n=3, samples=5, seed=3, jobs=2)
    assert serial.to_dict() == parallel.to_dict()


@pytest.mark.order(81)
@pytest.mark.slow
def test_acceptance_solver_grid():
    report = check_solvers(max_n=8, samples=100, seed=0, jobs=4)
    assert [r.line() for r in report.results if not r.passed] == []


@pytest.mark.order(82)
@pytest.mark.slow
def test_acceptance_law_suite():
    report = check_laws(max_n=8, max_k=8, samples=1000, seed=0)
    assert [r.line() for r in report.results if not r.passed] == []


@pytest.mark.order(83)
@pytest.mark.slow
def test_acceptance_quadratics_up_to_twelve():
    for n in range(2, 13):
        ctx = ambient_ctx(n, 2)
        for seed in range(100):
            x = sample_subfield(ctx, n, seed)
            a = x * x + x
            formula = solve_quadratic(n, a)
            assert _values(formula) == _values(half_trace_solve(n, a))
            assert x in formula and formula.count == 2
