"""
The ambient field GF(2^m), its Frobenius structure, subfields and the partial-trace maps.

Every element lives in one ambient context; a subfield GF(2^n) with n | m is the set of
ambient elements fixed by the n-th power of Frobenius, so no embedding machinery exists.
"""
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

try:
    from src.gf2_linalg import Gf2Span, enumerate_span
    from src.poly2 import BitPoly, canonical_irreducible, clmul, clsquare, int_divmod, int_mod, is_irreducible
    from src.utils import FieldError, ParameterError, lcm, parse_hex, require_divides, require_positive, to_hex
except ImportError:
    from gf2_linalg import Gf2Span, enumerate_span
    from poly2 import BitPoly, canonical_irreducible, clmul, clsquare, int_divmod, int_mod, is_irreducible
    from utils import FieldError, ParameterError, lcm, parse_hex, require_divides, require_positive, to_hex


class FieldCtx:
    """
    The field GF(2^m) = GF(2)[X] / (modulus).

    Attributes:
        m (int): Extension degree.
        modulus (BitPoly): Irreducible polynomial of degree m.
    """

    def __init__(self, m: int, modulus: Optional[BitPoly] = None):
        require_positive(m=m)
        if modulus is None:
            modulus = canonical_irreducible(m)
        elif modulus.deg != m:
            raise FieldError(f"modulus {modulus.to_hex()} has degree {modulus.deg}, expected {m}")
        elif not is_irreducible(modulus):
            raise FieldError(f"modulus {modulus.to_hex()} is reducible over GF(2)")
        self._m = m
        self._modulus = modulus
        self._poly = modulus.value

    @property
    def m(self) -> int:
        return self._m

    @property
    def modulus(self) -> BitPoly:
        return self._modulus

    @property
    def order(self) -> int:
        return 1 << self._m

    @property
    def zero(self) -> "Elt":
        return Elt(self, 0)

    @property
    def one(self) -> "Elt":
        return Elt(self, 1)

    @property
    def gen(self) -> "Elt":
        """The class of X."""
        return Elt(self, int_mod(2, self._poly))

    def element(self, value: int) -> "Elt":
        """
        Wraps an integer coefficient encoding as an element of this field.

        Raises:
            ParameterError: If the encoding has degree m or more.
        """
        if value < 0 or value >> self._m:
            raise ParameterError(f"{to_hex(value)} is not a coefficient vector of GF(2^{self._m})")
        return Elt(self, value)

    def from_hex(self, text: str) -> "Elt":
        return self.element(parse_hex(text))

    def to_dict(self) -> Dict[str, object]:
        return {"m": self._m, "modulus": self._modulus.to_hex()}

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldCtx):
            return NotImplemented
        return self._m == other._m and self._poly == other._poly

    def __hash__(self) -> int:
        return hash(("FieldCtx", self._m, self._poly))

    def __repr__(self) -> str:
        return f"FieldCtx(m={self._m}, modulus={self._modulus.to_hex()})"


class Elt:
    """
    An element of a FieldCtx, stored as its coefficient bits in the basis 1, X, ..., X^(m-1).

    Arithmetic operators map to f_add, f_mul, f_inv and f_pow.
    """

    __slots__ = ("_ctx", "_value")

    def __init__(self, ctx: FieldCtx, value: int):
        self._ctx = ctx
        self._value = value

    @property
    def ctx(self) -> FieldCtx:
        return self._ctx

    @property
    def value(self) -> int:
        return self._value

    @property
    def coeffs(self) -> List[int]:
        return [(self._value >> i) & 1 for i in range(self._ctx.m)]

    def to_hex(self) -> str:
        return to_hex(self._value)

    def __add__(self, other: "Elt") -> "Elt":
        return f_add(self, other)

    __sub__ = __add__

    def __neg__(self) -> "Elt":
        return self

    def __mul__(self, other: "Elt") -> "Elt":
        return f_mul(self, other)

    def __truediv__(self, other: "Elt") -> "Elt":
        return f_mul(self, f_inv(other))

    def __pow__(self, exponent: int) -> "Elt":
        return f_pow(self, exponent)

    def __bool__(self) -> bool:
        return self._value != 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, Elt):
            return NotImplemented
        return self._value == other._value and self._ctx == other._ctx

    def __hash__(self) -> int:
        return hash((self._ctx, self._value))

    def __lt__(self, other: "Elt") -> bool:
        return self._value < other._value

    def __repr__(self) -> str:
        return f"Elt({self.to_hex()}, m={self._ctx.m})"


class SubfieldBasis:
    """
    GF(2)-basis of the subfield GF(2^n) inside an ambient field.

    Attributes:
        n (int): Subfield degree.
        elems (Tuple[Elt, ...]): n independent elements fixed by frob(., n), the first being 1.
    """

    def __init__(self, n: int, elems: Tuple[Elt, ...]):
        self._n = n
        self._elems = elems

    @property
    def n(self) -> int:
        return self._n

    @property
    def elems(self) -> Tuple[Elt, ...]:
        return self._elems

    @property
    def values(self) -> List[int]:
        return [e.value for e in self._elems]

    def combine(self, coords: int) -> Elt:
        """The element whose coordinate bit i selects basis element i."""
        total = 0
        for index, elem in enumerate(self._elems):
            if (coords >> index) & 1:
                total ^= elem.value
        return Elt(self._elems[0].ctx, total)

    def __iter__(self) -> Iterator[Elt]:
        return iter(self._elems)

    def __len__(self) -> int:
        return self._n

    def __repr__(self) -> str:
        return f"SubfieldBasis(n={self._n}, elems=[{', '.join(e.to_hex() for e in self._elems)}])"


def make_ctx(m: int, modulus: Optional[BitPoly] = None) -> FieldCtx:
    """
    Builds a validated context for GF(2^m).

    Args:
        m: Extension degree.
        modulus: Irreducible polynomial of degree m; the canonical one when omitted.

    Returns:
        FieldCtx: The context.

    Raises:
        FieldError: If the modulus is reducible or has the wrong degree.
    """
    return FieldCtx(m, modulus)


@lru_cache(maxsize=None)
def ambient_ctx(n: int, k: int, modulus: Optional[BitPoly] = None) -> FieldCtx:
    """Context of degree 2*lcm(n, k), large enough for every object a solve instance touches."""
    require_positive(n=n, k=k)
    return make_ctx(2 * lcm(n, k), modulus)


def _same_ctx(x: Elt, y: Elt) -> FieldCtx:
    if x._ctx is not y._ctx and x._ctx != y._ctx:
        raise FieldError(f"cannot combine elements of {x._ctx!r} and {y._ctx!r}")
    return x._ctx


def f_add(x: Elt, y: Elt) -> Elt:
    return Elt(_same_ctx(x, y), x._value ^ y._value)


def f_mul(x: Elt, y: Elt) -> Elt:
    ctx = _same_ctx(x, y)
    return Elt(ctx, int_mod(clmul(x._value, y._value), ctx._poly))


def f_inv(x: Elt) -> Elt:
    """
    Multiplicative inverse by the extended Euclidean algorithm.

    Raises:
        FieldError: If x is zero.
    """
    if x._value == 0:
        raise FieldError("zero has no multiplicative inverse")
    ctx = x._ctx
    # invariant: s_i * x = r_i (mod modulus)
    r0, r1 = ctx._poly, x._value
    s0, s1 = 0, 1
    while r1:
        quotient, remainder = int_divmod(r0, r1)
        r0, r1 = r1, remainder
        s0, s1 = s1, s0 ^ clmul(quotient, s1)
    return Elt(ctx, int_mod(s0, ctx._poly))


def f_pow(x: Elt, e: int) -> Elt:
    """Square-and-multiply exponentiation; x^0 = 1 for every x."""
    if e < 0:
        raise ParameterError(f"exponent must be non-negative, got {e}")
    poly = x._ctx._poly
    result, base = 1, x._value
    while e:
        if e & 1:
            result = int_mod(clmul(result, base), poly)
        base = int_mod(clsquare(base), poly)
        e >>= 1
    return Elt(x._ctx, result)


def frob(x: Elt, j: int) -> Elt:
    """x^(2^j), by j mod m successive squarings."""
    if j < 0:
        raise ParameterError(f"Frobenius power must be non-negative, got {j}")
    poly = x._ctx._poly
    value = x._value
    for _ in range(j % x._ctx._m):
        value = int_mod(clsquare(value), poly)
    return Elt(x._ctx, value)


def tmap(x: Elt, l: int, k: int) -> Elt:
    """
    The partial trace T_l^k(x) = x + x^(2^l) + ... + x^(2^(l(k/l - 1))).

    Args:
        x: The argument.
        l: Step, a positive divisor of k.
        k: Length.

    Returns:
        Elt: The sum of the k/l Frobenius conjugates.

    Raises:
        ParameterError: If l does not divide k.
    """
    require_positive(l=l, k=k)
    require_divides(l, k, "tmap needs l | k")
    total = term = x
    for _ in range(k // l - 1):
        term = frob(term, l)
        total = Elt(x._ctx, total._value ^ term._value)
    return total


def in_subfield(x: Elt, n: int) -> bool:
    """True iff x lies in GF(2^n), i.e. frob(x, n) = x."""
    require_positive(n=n)
    require_divides(n, x._ctx.m, "subfield degree must divide the ambient degree")
    return frob(x, n)._value == x._value


def rel_trace(x: Elt, n: int) -> Elt:
    """Relative trace T_n^m onto GF(2^n)."""
    require_positive(n=n)
    require_divides(n, x._ctx.m, "subfield degree must divide the ambient degree")
    return tmap(x, n, x._ctx.m)


@lru_cache(maxsize=None)
def subfield_basis(ctx: FieldCtx, n: int) -> SubfieldBasis:
    """
    Deterministic basis of GF(2^n): 1 first, then the rank-increasing relative traces of X^0, X^1, ...

    Args:
        ctx: The ambient context.
        n: Subfield degree dividing ctx.m.

    Returns:
        SubfieldBasis: n independent elements of GF(2^n).

    Raises:
        ParameterError: If n does not divide m.
    """
    require_positive(n=n)
    require_divides(n, ctx.m, "subfield degree must divide the ambient degree")
    span = Gf2Span([1])
    elems = [ctx.one]
    for degree in range(ctx.m):
        if len(elems) == n:
            break
        image = rel_trace(ctx.element(1 << degree), n)
        if span.add(image.value):
            elems.append(image)
    if len(elems) != n:
        raise RuntimeError(f"subfield basis for GF(2^{n}) in {ctx!r} stopped at rank {len(elems)}")
    return SubfieldBasis(n, tuple(elems))


def enumerate_subfield(ctx: FieldCtx, n: int) -> Iterator[Elt]:
    """All 2^n elements of GF(2^n), in Gray-code order over subfield_basis."""
    for value in enumerate_span(subfield_basis(ctx, n).values):
        yield Elt(ctx, value)


def random_bits(rng: np.random.Generator, count: int) -> int:
    value = 0
    for index, bit in enumerate(rng.integers(0, 2, size=count)):
        if bit:
            value |= 1 << index
    return value


def random_element(ctx: FieldCtx, rng: np.random.Generator) -> Elt:
    return Elt(ctx, random_bits(rng, ctx.m))


def sample_subfield(ctx: FieldCtx, n: int, seed: int) -> Elt:
    """
    Pseudorandom element of GF(2^n), reproducible from the seed.

    Args:
        ctx: The ambient context.
        n: Subfield degree dividing ctx.m.
        seed: Seed for numpy's default generator.

    Returns:
        Elt: A random GF(2)-combination of the subfield basis.
    """
    basis = subfield_basis(ctx, n)
    return basis.combine(random_bits(np.random.default_rng(seed), n))


@lru_cache(maxsize=None)
def mu_xi(ctx: FieldCtx, M: int, choice: int = 0) -> Elt:
    """
    An element xi of the (2^M + 1)-th roots of unity other than 1.

    xi = s^(2^M - 1) for s in GF(2^(2M)) outside GF(2^M). Candidates s are the basis elements of
    GF(2^(2M)) in order (the monomials when m = 2M), then seeded combinations of them.

    Args:
        ctx: The ambient context, with 2M | m.
        M: Half the degree of the field holding the roots of unity.
        choice: Index of the candidate s to use.

    Returns:
        Elt: xi with xi^(2^M + 1) = 1 and xi != 1.

    Raises:
        ParameterError: If 2M does not divide m.
    """
    require_positive(M=M)
    require_divides(2 * M, ctx.m, "mu_xi needs 2M | m")
    if choice < 0:
        raise ParameterError(f"choice must be non-negative, got {choice}")
    basis = subfield_basis(ctx, 2 * M)
    candidates = [e for e in basis.elems if not in_subfield(e, M)]
    if choice < len(candidates):
        s = candidates[choice]
    else:
        rng = np.random.default_rng(choice)
        while True:
            s = basis.combine(random_bits(rng, 2 * M))
            if not in_subfield(s, M):
                break
    # s^(2^M - 1) = s^(2^M) / s
    return f_mul(frob(s, M), f_inv(s))


def clear_caches() -> None:
    """Drops every memoised context, basis and modulus so setup work can be timed again."""
    canonical_irreducible.cache_clear()
    ambient_ctx.cache_clear()
    subfield_basis.cache_clear()
    mu_xi.cache_clear()
