from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from src.field import ambient_ctx, enumerate_subfield, frob, in_subfield, make_ctx, sample_subfield, tmap
from src.oracle import brute_solve, brute_solve_all
from src.solver import (
    Instance,
    SolutionSet,
    Tag,
    classify,
    kernel_tlk,
    solvable_tlk,
    solve_artin_schreier,
    solve_closure,
    solve_quadratic,
    solve_tk,
    solve_tlk,
)
from src.utils import ParameterError, UnsupportedInstanceError, divisors, is_odd, lcm


def _values(solutions):
    return [x.value for x in solutions.elements()]


def _triples(max_n):
    return [(n, k, l) for n in range(1, max_n + 1) for k in range(1, n + 1) for l in divisors(k)]


@st.composite
def instances(draw, max_n=6):
    n, k, l = draw(st.sampled_from(_triples(max_n)))
    ctx = ambient_ctx(n, k)
    seed = draw(st.integers(min_value=0, max_value=1 << 30))
    return Instance(n, k, l, sample_subfield(ctx, n, seed))


@pytest.mark.order(45)
def test_instance_validation():
    ctx = ambient_ctx(3, 2)
    with pytest.raises(ParameterError):
        Instance(3, 2, 3, ctx.zero)
    with pytest.raises(ParameterError):
        Instance(0, 2, 1, ctx.zero)
    # X is not in GF(2^3)
    with pytest.raises(ParameterError, match="not in GF"):
        Instance(3, 2, 1, ctx.gen)
    # the ambient degree must be a multiple of 2*lcm(n, k) = 12
    with pytest.raises(ParameterError):
        Instance(3, 2, 1, make_ctx(6).zero)
    inst = Instance.from_value(3, 2, 1, 0)
    assert (inst.d, inst.g, inst.lnk) == (1, 1, 6)
    assert inst.to_dict() == {"n": 3, "k": 2, "l": 1, "a": "0x0"}


@pytest.mark.order(46)
def test_kernel_examples():
    # T_1^2(x) = x + x^2 vanishes on GF(2)
    assert [e.value for e in kernel_tlk(3, 2, 1)] == [0x1]
    assert [e.value for e in kernel_tlk(2, 2, 1)] == [0x1]
    # T_2^2 is the identity
    assert kernel_tlk(4, 2, 2) == []
    # T_1^4 on GF(2^4) vanishes exactly on the trace-zero hyperplane of GF(2^4)
    assert len(kernel_tlk(4, 4, 1)) == 3
    with pytest.raises(UnsupportedInstanceError, match="linalg"):
        kernel_tlk(2, 3, 1)
    with pytest.raises(ParameterError):
        kernel_tlk(4, 3, 2)


@pytest.mark.order(47)
@pytest.mark.parametrize("n,k,l", _triples(5))
def test_kernel_matches_brute_force(n, k, l):
    # Given
    ctx = ambient_ctx(n, k)

    # When
    kernel = kernel_tlk(n, k, l, ctx)
    zeros = brute_solve(n, k, l, ctx.zero)

    # Then
    d, g = gcd(n, k), gcd(gcd(n, k), l)
    expected_dim = d - g if is_odd(k // lcm(d, l)) else d
    assert len(kernel) == expected_dim
    assert 1 << len(kernel) == len(zeros)
    assert all(tmap(e, l, k) == ctx.zero and in_subfield(e, n) for e in kernel)


@pytest.mark.order(48)
def test_identity_equation():
    ctx = ambient_ctx(3, 1)
    for a in enumerate_subfield(ctx, 3):
        result = solve_tlk(Instance(3, 1, 1, a))
        assert _values(result) == [a.value]


@pytest.mark.order(49)
def test_small_quadratics():
    # x^2 + x = 1 has no root in GF(8) since T_3(1) = 1
    ctx = ambient_ctx(3, 1)
    assert not solve_quadratic(3, ctx.one).solvable
    assert _values(solve_quadratic(3, ctx.zero)) == [0, 1]
    # in GF(4) its roots are the two elements outside GF(2)
    gf16 = ambient_ctx(2, 1)
    assert _values(solve_quadratic(2, gf16.one)) == [0x6, 0x7]


@pytest.mark.order(50)
@pytest.mark.parametrize("n,k,l", _triples(5))
def test_solve_tlk_matches_brute_force(n, k, l):
    # Given
    ctx = ambient_ctx(n, k)
    table = brute_solve_all(n, k, l, ctx)

    for a in enumerate_subfield(ctx, n):
        # When
        inst = Instance(n, k, l, a)
        result = solve_tlk(inst)
        brute = [x.value for x in table.get(a.value, [])]

        # Then
        assert _values(result) == brute
        assert solvable_tlk(inst) == bool(brute)
        if brute:
            d, g = inst.d, inst.g
            expected = 1 << (d - g) if is_odd(k // lcm(d, l)) else 1 << d
            assert result.count == expected


@pytest.mark.order(51)
@pytest.mark.parametrize("n,k", [(n, k) for n in range(2, 6) for k in range(1, n)])
def test_artin_schreier(n, k):
    ctx = ambient_ctx(n, k)
    d = gcd(n, k)
    for a in enumerate_subfield(ctx, n):
        # When
        result = solve_artin_schreier(n, k, a)
        brute = [x.value for x in enumerate_subfield(ctx, n) if frob(x, k) + x == a]

        # Then
        assert _values(result) == sorted(brute)
        assert result.count in (0, 1 << d)
        assert result.solvable == (tmap(a, d, n).value == 0)


@pytest.mark.order(52)
def test_artin_schreier_rejects_degenerate_exponent():
    ctx = ambient_ctx(3, 3)
    with pytest.raises(ParameterError):
        solve_artin_schreier(3, 3, ctx.zero)
    with pytest.raises(UnsupportedInstanceError):
        solve_artin_schreier(3, 4, ambient_ctx(3, 4).zero)


@pytest.mark.order(53)
@pytest.mark.parametrize("n,k", [(n, k) for n in range(1, 6) for k in range(1, n + 1)])
def test_solve_tk_counts(n, k):
    ctx = ambient_ctx(n, k)
    d = gcd(n, k)
    expected = 1 << (d - 1) if is_odd(k // d) else 1 << d
    table = brute_solve_all(n, k, 1, ctx)
    for a in enumerate_subfield(ctx, n):
        result = solve_tk(n, k, a)
        brute = [x.value for x in table.get(a.value, [])]
        assert _values(result) == brute
        if brute:
            assert result.count == expected


@pytest.mark.order(54)
@pytest.mark.parametrize("n,k,l", [(1, 1, 1), (2, 2, 1), (2, 3, 1), (3, 2, 1), (2, 4, 2), (3, 3, 3), (2, 6, 2)])
def test_closure_solutions(n, k, l):
    # Given
    ctx = ambient_ctx(n, k)
    for seed in range(4):
        a = sample_subfield(ctx, n, seed)

        # When
        result = solve_closure(n, k, l, a)

        # Then
        elements = result.elements()
        assert result.count == 1 << (k - l)
        assert len({x.value for x in elements}) == result.count
        assert all(tmap(x, l, k) == a for x in elements)
        assert all(in_subfield(x, 2 * lcm(n, k)) for x in elements)


@pytest.mark.order(55)
@settings(max_examples=60, deadline=None)
@given(instances())
def test_solutions_do_not_depend_on_xi(inst):
    reference = solve_tlk(inst, 0)
    closure = solve_closure(inst.n, inst.k, inst.l, inst.a, 0)
    for choice in (1, 2, 5):
        assert solve_tlk(inst, choice).same_set(reference)
        assert solve_closure(inst.n, inst.k, inst.l, inst.a, choice).same_set(closure)


@pytest.mark.order(56)
@settings(max_examples=60, deadline=None)
@given(instances())
def test_closure_restricted_to_the_field(inst):
    inside = [x.value for x in solve_closure(inst.n, inst.k, inst.l, inst.a).elements() if in_subfield(x, inst.n)]
    assert inside == _values(solve_tlk(inst))


@pytest.mark.order(57)
def test_closed_form_rejects_long_traces():
    inst = Instance.from_value(2, 3, 1, 0)
    with pytest.raises(UnsupportedInstanceError):
        solve_tlk(inst)
    with pytest.raises(UnsupportedInstanceError):
        solve_tk(2, 3, inst.a)


@pytest.mark.order(58)
def test_classify_examples():
    assert classify(3, 2, 1).tag is Tag.TWO_TO_ONE
    assert classify(3, 1, 1).tag is Tag.PERMUTATION
    assert classify(2, 2, 1).tag is Tag.TWO_TO_ONE
    assert classify(6, 2, 2).tag is Tag.PERMUTATION
    assert classify(2, 3, 1).tag is Tag.PERMUTATION
    assert classify(2, 4, 1).tag is Tag.OTHER
    result = classify(4, 4, 1)
    assert (result.tag, result.kernel_dim) == (Tag.OTHER, 3)
    assert Tag.TWO_TO_ONE.value == "2-to-1"
    with pytest.raises(ParameterError):
        classify(4, 3, 2)


@pytest.mark.order(59)
@pytest.mark.parametrize("n,k,l", _triples(5))
def test_classify_matches_image_size(n, k, l):
    image = len(brute_solve_all(n, k, l, ambient_ctx(n, k)))
    tag = classify(n, k, l).tag
    assert (tag is Tag.PERMUTATION) == (image == 1 << n)
    assert (tag is Tag.TWO_TO_ONE) == (image == 1 << (n - 1))


@pytest.mark.order(60)
def test_solution_set_operations():
    # Given the solutions {0x6, 0x7} of x + x^2 = 1 in GF(4)
    ctx = ambient_ctx(2, 2)
    result = solve_tlk(Instance(2, 2, 1, ctx.one))
    rebuilt = SolutionSet.from_coset(ctx.element(0x7), [ctx.one, ctx.one])

    # Then
    assert result.count == 2 and result.dimension == 1
    assert ctx.element(0x6) in result and ctx.element(0x1) not in result
    assert rebuilt.kernel_basis == (ctx.one,)
    assert result.same_set(rebuilt)
    assert not result.same_set(SolutionSet.unsolvable(ctx))
    assert SolutionSet.unsolvable(ctx).same_set(SolutionSet.unsolvable(ctx))
    assert SolutionSet.unsolvable(ctx).elements() == []
    assert result.to_dict() == {
        "solvable": True,
        "particular": result.particular.to_hex(),
        "kernel_basis": ["0x1"],
        "count": 2,
        "ambient": {"m": 4, "modulus": "0x13"},
    }
    with pytest.raises(ParameterError):
        result.elements(cap=1)
