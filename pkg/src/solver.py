"""
Closed-form solving of T_l^k(x) = a over the algebraic closure and inside GF(2^n).

Every solution set is returned as a coset: one particular solution plus a GF(2)-basis of
the kernel of the operator. xi parameters come from field.mu_xi and the solution sets do
not depend on which xi is used.
"""
from dataclasses import dataclass
from enum import Enum
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

try:
    from src.field import (
        Elt,
        FieldCtx,
        ambient_ctx,
        frob,
        in_subfield,
        mu_xi,
        subfield_basis,
        tmap,
    )
    from src.gf2_linalg import Gf2Span, enumerate_span, independent_subset
    from src.utils import (
        DEFAULT_ENUMERATION_CAP,
        ParameterError,
        UnsupportedInstanceError,
        is_odd,
        lcm,
        require_divides,
        require_positive,
    )
except ImportError:
    from field import (
        Elt,
        FieldCtx,
        ambient_ctx,
        frob,
        in_subfield,
        mu_xi,
        subfield_basis,
        tmap,
    )
    from gf2_linalg import Gf2Span, enumerate_span, independent_subset
    from utils import (
        DEFAULT_ENUMERATION_CAP,
        ParameterError,
        UnsupportedInstanceError,
        is_odd,
        lcm,
        require_divides,
        require_positive,
    )


@dataclass(frozen=True)
class Instance:
    """
    A request to solve T_l^k(x) = a with a in GF(2^n).

    Attributes:
        n (int): Degree of the field the solutions are wanted in.
        k (int): Length of the partial trace.
        l (int): Step of the partial trace, l | k.
        a (Elt): Right-hand side, an element of GF(2^n) inside an ambient field of degree divisible by 2*lcm(n, k).
    """

    n: int
    k: int
    l: int
    a: Elt

    def __post_init__(self):
        require_positive(n=self.n, k=self.k, l=self.l)
        require_divides(self.l, self.k, "T_l^k needs l | k")
        _check_rhs(self.n, self.k, self.a)

    @classmethod
    def from_value(cls, n: int, k: int, l: int, value: int, ctx: Optional[FieldCtx] = None) -> "Instance":
        """Builds an instance from the ambient coefficient encoding of a."""
        require_positive(n=n, k=k)
        ctx = ctx or ambient_ctx(n, k)
        return cls(n, k, l, ctx.element(value))

    @property
    def ctx(self) -> FieldCtx:
        return self.a.ctx

    @property
    def d(self) -> int:
        return gcd(self.n, self.k)

    @property
    def g(self) -> int:
        return gcd(self.d, self.l)

    @property
    def lnk(self) -> int:
        return lcm(self.n, self.k)

    def to_dict(self) -> Dict[str, object]:
        return {"n": self.n, "k": self.k, "l": self.l, "a": self.a.to_hex()}


class Tag(Enum):
    PERMUTATION = "permutation"
    TWO_TO_ONE = "2-to-1"
    OTHER = "other"


@dataclass(frozen=True)
class Classification:
    tag: Tag
    kernel_dim: int


@dataclass(frozen=True)
class SolutionSet:
    """
    The solutions of an affine equation as particular + span(kernel_basis).

    Attributes:
        ctx (FieldCtx): Ambient context of every element.
        solvable (bool): Whether any solution exists.
        particular (Optional[Elt]): One solution, present iff solvable.
        kernel_basis (Tuple[Elt, ...]): Independent kernel elements.
    """

    ctx: FieldCtx
    solvable: bool
    particular: Optional[Elt]
    kernel_basis: Tuple[Elt, ...]

    @classmethod
    def unsolvable(cls, ctx: FieldCtx) -> "SolutionSet":
        return cls(ctx, False, None, ())

    @classmethod
    def from_coset(cls, particular: Elt, generators: Sequence[Elt]) -> "SolutionSet":
        """Coset with the kernel basis extracted as an independent subset of the generators."""
        keep = independent_subset([g.value for g in generators])
        return cls(particular.ctx, True, particular, tuple(generators[i] for i in keep))

    @property
    def dimension(self) -> int:
        return len(self.kernel_basis)

    @property
    def count(self) -> int:
        return 1 << len(self.kernel_basis) if self.solvable else 0

    def elements(self, cap: int = DEFAULT_ENUMERATION_CAP) -> List[Elt]:
        """
        Every solution, sorted by coefficient bits.

        Args:
            cap: Largest set that may be enumerated.

        Returns:
            List[Elt]: The count solutions in canonical order.

        Raises:
            ParameterError: If count exceeds cap.
        """
        if not self.solvable or self.particular is None:
            return []
        if self.count > cap:
            raise ParameterError(f"refusing to enumerate {self.count} solutions (cap {cap})")
        values = enumerate_span([e.value for e in self.kernel_basis], self.particular.value)
        return [Elt(self.ctx, v) for v in sorted(values)]

    def __contains__(self, x: Elt) -> bool:
        if not self.solvable or self.particular is None:
            return False
        return (x.value ^ self.particular.value) in Gf2Span([e.value for e in self.kernel_basis])

    def same_set(self, other: "SolutionSet") -> bool:
        """Set equality of two cosets, decided by GF(2) rank instead of enumeration."""
        if self.solvable != other.solvable:
            return False
        if not self.solvable:
            return True
        if self.ctx != other.ctx or self.dimension != other.dimension:
            return False
        span = Gf2Span([e.value for e in self.kernel_basis])
        if any(e.value not in span for e in other.kernel_basis):
            return False
        return other.particular in self

    def to_dict(self) -> Dict[str, object]:
        return {
            "solvable": self.solvable,
            "particular": self.particular.to_hex() if self.particular is not None else None,
            "kernel_basis": [e.to_hex() for e in self.kernel_basis],
            "count": self.count,
            "ambient": self.ctx.to_dict(),
        }


def _check_rhs(n: int, k: int, a: Elt) -> None:
    require_divides(2 * lcm(n, k), a.ctx.m, "ambient degree must be a multiple of 2*lcm(n, k)")
    if not in_subfield(a, n):
        raise ParameterError(
            f"a = {a.to_hex()} is not in GF(2^{n}) inside GF(2^{a.ctx.m}) "
            f"with modulus {a.ctx.modulus.to_hex()}"
        )


def _require_closed_form(n: int, k: int) -> None:
    if k > n:
        raise UnsupportedInstanceError(
            f"closed-form solving in GF(2^n) needs k <= n (got n={n}, k={k}); "
            "use oracle.linalg_solve (solve --method linalg) instead"
        )


def _t(x: Elt, k: int) -> Elt:
    """T_k = T_1^k."""
    return tmap(x, 1, k)


def _odd_core(n: int, k: int, a: Elt, xi: Elt) -> Elt:
    """T_k^[n,k](a / (xi + 1)): solves x^(2^k) + x = a when k/d is odd and T_d^n(a) = 0."""
    return tmap(a / (xi + a.ctx.one), k, lcm(n, k))


def _even_core(n: int, k: int, a: Elt, xi: Elt) -> Elt:
    """T_(n-k)^[n,n-k](a^(2^(n-k)) / (xi + 1)): the k/d even counterpart through x^(2^(n-k)) + x."""
    shifted = frob(a, n - k)
    return tmap(shifted / (xi + a.ctx.one), n - k, lcm(n, n - k))


def kernel_tlk(n: int, k: int, l: int, ctx: Optional[FieldCtx] = None) -> List[Elt]:
    """
    GF(2)-basis of {x in GF(2^n) : T_l^k(x) = 0}.

    The kernel is GF(2^d) when k/[d,l] is even and T_(d,l)(T_2(GF(2^d))) when it is odd,
    with d = gcd(n, k).

    Args:
        n: Degree of the field the kernel is taken in.
        k: Length of the partial trace, k <= n.
        l: Step, l | k.
        ctx: Ambient context; the canonical one of degree 2*lcm(n, k) by default.

    Returns:
        List[Elt]: Independent kernel elements (d or d - gcd(d, l) of them).

    Raises:
        ParameterError: If l does not divide k.
        UnsupportedInstanceError: If k > n.
    """
    require_positive(n=n, k=k, l=l)
    require_divides(l, k, "T_l^k needs l | k")
    _require_closed_form(n, k)
    ctx = ctx or ambient_ctx(n, k)
    require_divides(2 * lcm(n, k), ctx.m, "ambient degree must be a multiple of 2*lcm(n, k)")
    d = gcd(n, k)
    g = gcd(d, l)
    basis = subfield_basis(ctx, d)
    if not is_odd(k // lcm(d, l)):
        return list(basis.elems)
    images = [_t(_t(b, 2), g) for b in basis.elems]
    return [images[i] for i in independent_subset([e.value for e in images])]


def solvable_tlk(inst: Instance) -> bool:
    """T_d^n(a) in GF(2^(d,l)) when k/[d,l] is odd, T_d^n(a) = 0 when it is even."""
    reduced = tmap(inst.a, inst.d, inst.n)
    if is_odd(inst.k // lcm(inst.d, inst.l)):
        return in_subfield(reduced, inst.g)
    return not reduced


def solve_artin_schreier(n: int, k: int, a: Elt, xi_choice: int = 0) -> SolutionSet:
    """
    Solutions in GF(2^n) of x^(2^k) + x = a.

    Args:
        n: Degree of the solution field.
        k: Frobenius exponent, 1 <= k < n.
        a: Right-hand side in GF(2^n).
        xi_choice: Which element of mu_(2^n+1) to use.

    Returns:
        SolutionSet: Empty unless T_d^n(a) = 0, otherwise a coset of GF(2^d).
    """
    require_positive(n=n, k=k)
    _require_closed_form(n, k)
    if k == n:
        raise ParameterError("x^(2^n) + x vanishes on all of GF(2^n); use 1 <= k < n")
    _check_rhs(n, k, a)
    ctx = a.ctx
    d = gcd(n, k)
    kernel = subfield_basis(ctx, d).elems
    if not a:
        return SolutionSet.from_coset(ctx.zero, kernel)
    if tmap(a, d, n):
        return SolutionSet.unsolvable(ctx)
    xi = mu_xi(ctx, n, xi_choice)
    if is_odd(k // d):
        particular = _odd_core(n, k, a, xi)
    else:
        particular = _even_core(n, k, a, xi)
    return SolutionSet.from_coset(particular, kernel)


def solve_quadratic(n: int, a: Elt, xi_choice: int = 0) -> SolutionSet:
    """
    Solutions in GF(2^n) of x^2 + x + a = 0: x0 = T_n(a / (xi + 1)) and x0 + 1.

    Solvable iff T_n(a) = 0.
    """
    require_positive(n=n)
    _check_rhs(n, 1, a)
    ctx = a.ctx
    if not a:
        return SolutionSet.from_coset(ctx.zero, [ctx.one])
    if _t(a, n):
        return SolutionSet.unsolvable(ctx)
    xi = mu_xi(ctx, n, xi_choice)
    return SolutionSet.from_coset(_t(a / (xi + ctx.one), n), [ctx.one])


def solve_tk(n: int, k: int, a: Elt, xi_choice: int = 0) -> SolutionSet:
    """
    Solutions in GF(2^n) of T_k(x) = a.

    If k/d is odd the equation is solvable iff T_d^n(a) is in GF(2) and has 2^(d-1) solutions
    T_2(T_k^[n,k](a/(xi+1))) + T_2(GF(2^d)); if k/d is even it is solvable iff T_d^n(a) = 0 and
    has 2^d solutions T_2(T_(n-k)^[n,n-k](a^(2^(n-k))/(xi+1))) + GF(2^d).

    Args:
        n: Degree of the solution field.
        k: Length of the trace, 1 <= k <= n.
        a: Right-hand side in GF(2^n).
        xi_choice: Which element of mu_(2^n+1) to use.

    Returns:
        SolutionSet: The solutions in GF(2^n).

    Raises:
        UnsupportedInstanceError: If k > n.
    """
    require_positive(n=n, k=k)
    _require_closed_form(n, k)
    _check_rhs(n, k, a)
    ctx = a.ctx
    d = gcd(n, k)
    basis = subfield_basis(ctx, d).elems
    odd = is_odd(k // d)
    kernel = [_t(b, 2) for b in basis] if odd else list(basis)
    if not a:
        return SolutionSet.from_coset(ctx.zero, kernel)
    reduced = tmap(a, d, n)
    if (odd and not in_subfield(reduced, 1)) or (not odd and reduced):
        return SolutionSet.unsolvable(ctx)
    xi = mu_xi(ctx, n, xi_choice)
    core = _odd_core(n, k, a, xi) if odd else _even_core(n, k, a, xi)
    return SolutionSet.from_coset(_t(core, 2), kernel)


def solve_tlk(inst: Instance, xi_choice: int = 0) -> SolutionSet:
    """
    Solutions in GF(2^n) of T_l^k(x) = a.

    Three branches, on the parities of k/[d,l] and k/d:
      * both odd: T_l(T_2(T_k^[n,k](a/(xi+1)))) with xi in mu_(2^n+1);
      * k/[d,l] odd, k/d even: T_l(T_2(T_(n-k)^[n,n-k](a^(2^(n-k))/(xi+1))))
        + T_(d,l)(T_2(T_d^n(a)/(xi+1))) with xi in mu_(2^d+1);
      * k/[d,l] even: T_l(T_2(T_(n-k)^[n,n-k](a^(2^(n-k))/(xi+1)))) with xi in mu_(2^d+1).

    Args:
        inst: The instance, with k <= n.
        xi_choice: Which root of unity to use.

    Returns:
        SolutionSet: Empty, or a coset of the kernel of T_l^k on GF(2^n).

    Raises:
        UnsupportedInstanceError: If k > n.
    """
    n, k, l, a = inst.n, inst.k, inst.l, inst.a
    _require_closed_form(n, k)
    ctx = inst.ctx
    d, g = inst.d, inst.g
    kernel = kernel_tlk(n, k, l, ctx)
    if not a:
        return SolutionSet.from_coset(ctx.zero, kernel)
    if not solvable_tlk(inst):
        return SolutionSet.unsolvable(ctx)
    if is_odd(k // lcm(d, l)) and is_odd(k // d):
        xi = mu_xi(ctx, n, xi_choice)
        particular = _t(_t(_odd_core(n, k, a, xi), 2), l)
    elif is_odd(k // lcm(d, l)):
        xi = mu_xi(ctx, d, xi_choice)
        head = _t(_t(_even_core(n, k, a, xi), 2), l)
        tail = _t(_t(tmap(a, d, n) / (xi + ctx.one), 2), g)
        particular = head + tail
    else:
        xi = mu_xi(ctx, d, xi_choice)
        particular = _t(_t(_even_core(n, k, a, xi), 2), l)
    return SolutionSet.from_coset(particular, kernel)


def solve_closure(n: int, k: int, l: int, a: Elt, xi_choice: int = 0) -> SolutionSet:
    """
    All solutions of T_l^k(x) = a in the algebraic closure.

    They form T_l(T_k^L(T_2(a/(xi+1)))) + T_l(T_2(GF(2^k))) with L = lcm(n, k) and xi in
    mu_(2^L+1), all inside GF(2^(2L)).

    Args:
        n: Degree of the field holding a.
        k: Length of the partial trace (any positive value).
        l: Step, l | k.
        a: Right-hand side in GF(2^n).
        xi_choice: Which root of unity to use.

    Returns:
        SolutionSet: 2^(k-l) solutions in the ambient field.
    """
    require_positive(n=n, k=k, l=l)
    require_divides(l, k, "T_l^k needs l | k")
    _check_rhs(n, k, a)
    ctx = a.ctx
    big = lcm(n, k)
    generators = [_t(_t(b, 2), l) for b in subfield_basis(ctx, k).elems]
    if not a:
        return SolutionSet.from_coset(ctx.zero, generators)
    xi = mu_xi(ctx, big, xi_choice)
    particular = _t(tmap(_t(a / (xi + ctx.one), 2), k, big), l)
    return SolutionSet.from_coset(particular, generators)


def classify(n: int, k: int, l: int) -> Classification:
    """
    Permutation / 2-to-1 classification of T_l^k on GF(2^n).

    Permutation iff k/l is odd and d | l; 2-to-1 iff d = 1 and k/l is even, or d = 2 and both l
    and k/(2l) are odd. k may exceed n.

    Raises:
        ParameterError: If l does not divide k.
    """
    require_positive(n=n, k=k, l=l)
    require_divides(l, k, "T_l^k needs l | k")
    d = gcd(n, k)
    g = gcd(d, l)
    kernel_dim = d if not is_odd(k // lcm(d, l)) else d - g
    if is_odd(k // l) and l % d == 0:
        tag = Tag.PERMUTATION
    elif (d == 1 and not is_odd(k // l)) or (d == 2 and is_odd(l) and is_odd(k // (2 * l))):
        tag = Tag.TWO_TO_ONE
    else:
        tag = Tag.OTHER
    if (tag is Tag.PERMUTATION) != (kernel_dim == 0) or (tag is Tag.TWO_TO_ONE) != (kernel_dim == 1):
        raise RuntimeError(f"classification of (n={n}, k={k}, l={l}) disagrees with kernel dimension {kernel_dim}")
    return Classification(tag, kernel_dim)
