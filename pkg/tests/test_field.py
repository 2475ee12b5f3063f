import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.field import (
    Elt,
    FieldCtx,
    ambient_ctx,
    clear_caches,
    enumerate_subfield,
    frob,
    in_subfield,
    make_ctx,
    mu_xi,
    random_element,
    rel_trace,
    sample_subfield,
    subfield_basis,
    tmap,
)
from src.poly2 import BitPoly
from src.utils import FieldError, ParameterError


GF16 = make_ctx(4)
GF256 = make_ctx(8)

gf256_elements = st.integers(min_value=0, max_value=255).map(GF256.element)
frobenius_powers = st.integers(min_value=0, max_value=20)


@pytest.mark.order(30)
def test_context_basics():
    # Then
    assert GF16.modulus == BitPoly(0x13)
    assert GF16.order == 16
    assert GF16.gen.value == 0x2
    assert GF16.to_dict() == {"m": 4, "modulus": "0x13"}
    assert make_ctx(4) == GF16 and hash(make_ctx(4)) == hash(GF16)
    assert ambient_ctx(2, 3).m == 12
    assert ambient_ctx(4, 2).m == 8


@pytest.mark.order(31)
def test_context_validation():
    with pytest.raises(FieldError):
        make_ctx(4, BitPoly(0xB))
    with pytest.raises(FieldError):
        make_ctx(4, BitPoly(0x15))
    with pytest.raises(ParameterError):
        GF16.element(16)
    with pytest.raises(ParameterError):
        GF16.from_hex("0x1f")
    assert make_ctx(4, BitPoly(0x19)).modulus == BitPoly(0x19)


@pytest.mark.order(32)
def test_arithmetic_examples():
    # Given X and X^3 in GF(2^4) = GF(2)[X] / (X^4 + X + 1)
    x, x3 = GF16.element(0x2), GF16.element(0x8)

    # Then
    assert (x * x3).value == 0x3
    assert x + x == GF16.zero
    assert -x == x
    assert x ** 0 == GF16.one
    assert x ** 4 == GF16.element(0x3)
    assert x ** 15 == GF16.one
    assert repr(x) == "Elt(0x2, m=4)"
    assert x.coeffs == [0, 1, 0, 0]


@pytest.mark.order(33)
def test_inverse_and_errors():
    for value in range(1, 16):
        a = GF16.element(value)
        assert a * (GF16.one / a) == GF16.one
    with pytest.raises(FieldError):
        GF16.one / GF16.zero
    with pytest.raises(ParameterError):
        GF16.gen ** -1
    with pytest.raises(FieldError):
        GF16.one + make_ctx(3).one


@pytest.mark.order(34)
@settings(max_examples=150, deadline=None)
@given(gf256_elements, gf256_elements, gf256_elements)
def test_field_laws(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    if b:
        assert (a / b) * b == a


@pytest.mark.order(35)
@settings(max_examples=150, deadline=None)
@given(gf256_elements, gf256_elements, frobenius_powers)
def test_frobenius_is_an_automorphism(a, b, j):
    assert frob(a + b, j) == frob(a, j) + frob(b, j)
    assert frob(a * b, j) == frob(a, j) * frob(b, j)
    assert frob(a, 8) == a
    assert frob(a, 1) == a * a


@pytest.mark.order(36)
def test_tmap():
    # Given
    rng = np.random.default_rng(5)
    x = random_element(GF256, rng)

    # Then
    assert tmap(x, 3, 3) == x
    assert tmap(x, 1, 2) == x + x * x
    assert tmap(x, 2, 4) == x + frob(x, 2)
    with pytest.raises(ParameterError):
        tmap(x, 3, 4)
    # absolute trace lands in GF(2)
    assert tmap(x, 1, 8).value in (0, 1)


@pytest.mark.order(37)
def test_subfields_of_gf16():
    # GF(4) inside GF(16) is {0, 1, X^5, X^10} = {0x0, 0x1, 0x6, 0x7}
    assert {x.value for x in enumerate_subfield(GF16, 2)} == {0x0, 0x1, 0x6, 0x7}
    assert subfield_basis(GF16, 2).values == [0x1, 0x7]
    assert subfield_basis(GF16, 1).values == [0x1]
    assert in_subfield(GF16.element(0x6), 2)
    assert not in_subfield(GF16.element(0x2), 2)
    with pytest.raises(ParameterError):
        subfield_basis(GF16, 3)
    with pytest.raises(ParameterError):
        in_subfield(GF16.one, 3)


@pytest.mark.order(38)
@pytest.mark.parametrize("m", [1, 2, 4, 6, 8, 12])
def test_subfield_basis_properties(m):
    ctx = make_ctx(m)
    for n in [d for d in range(1, m + 1) if m % d == 0]:
        # Given
        basis = subfield_basis(ctx, n)

        # Then
        assert len(basis) == n
        assert basis.elems[0] == ctx.one
        assert all(in_subfield(b, n) for b in basis)
        elements = {x.value for x in enumerate_subfield(ctx, n)}
        assert len(elements) == 1 << n
        assert all(in_subfield(ctx.element(v), n) for v in elements)


@pytest.mark.order(39)
def test_relative_trace_lands_in_subfield():
    rng = np.random.default_rng(1)
    for _ in range(50):
        x = random_element(GF256, rng)
        for n in (1, 2, 4, 8):
            assert in_subfield(rel_trace(x, n), n)


@pytest.mark.order(40)
@pytest.mark.parametrize("m,big", [(2, 1), (4, 2), (4, 1), (8, 4), (12, 3), (12, 6)])
def test_mu_xi(m, big):
    ctx = make_ctx(m)
    for choice in range(4):
        # When
        xi = mu_xi(ctx, big, choice)

        # Then
        assert xi != ctx.one
        assert xi ** ((1 << big) + 1) == ctx.one
    with pytest.raises(ParameterError):
        mu_xi(make_ctx(6), 2)


@pytest.mark.order(41)
def test_sample_subfield_is_reproducible():
    ctx = ambient_ctx(3, 2)
    first = [sample_subfield(ctx, 3, seed) for seed in range(10)]
    again = [sample_subfield(ctx, 3, seed) for seed in range(10)]
    assert first == again
    assert all(in_subfield(x, 3) for x in first)
    assert len({x.value for x in first}) > 1


@pytest.mark.order(41)
def test_sample_subfield_covers_small_subfield():
    # Given GF(8) inside GF(2^12)
    ctx = make_ctx(12)

    # When
    seen = {sample_subfield(ctx, 3, seed).value for seed in range(1000)}

    # Then
    assert len(seen) >= 7
    assert all(in_subfield(ctx.element(value), 3) for value in seen)


@pytest.mark.order(42)
def test_clear_caches_keeps_results():
    # Given
    before = subfield_basis(ambient_ctx(4, 2), 4).values

    # When
    clear_caches()

    # Then
    assert subfield_basis(ambient_ctx(4, 2), 4).values == before
    assert isinstance(ambient_ctx(4, 2), FieldCtx)
    assert isinstance(ambient_ctx(4, 2).one, Elt)
