"""
Independent ground truth for the closed-form solvers.

brute_solve scans GF(2^n); linalg_solve is the classical method (the matrix of T_l^k in
subfield coordinates, then Gaussian elimination); half_trace_solve is the classical quadratic
solver with an auxiliary delta of trace 1. check_laws and check_solvers turn every identity and
counting claim into trials and return failures as data.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dataclass_field
from math import gcd
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple
import threading

import numpy as np

try:
    from src.field import (
        Elt,
        FieldCtx,
        SubfieldBasis,
        ambient_ctx,
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
    from src.gf2_linalg import Gf2Matrix, Gf2Span, enumerate_span
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
    from src.utils import (
        BRUTE_FORCE_MAX_N,
        ParameterError,
        divisors,
        is_odd,
        lcm,
        progress,
        require_divides,
        require_positive,
    )
except ImportError:
    from field import (
        Elt,
        FieldCtx,
        SubfieldBasis,
        ambient_ctx,
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
    from gf2_linalg import Gf2Matrix, Gf2Span, enumerate_span
    from solver import (
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
    from utils import (
        BRUTE_FORCE_MAX_N,
        ParameterError,
        divisors,
        is_odd,
        lcm,
        progress,
        require_divides,
        require_positive,
    )


EXHAUSTIVE_MAX_DEGREE: int = 16
QUADRATIC_MAX_N: int = 12


def _check_subfield_rhs(n: int, k: int, l: int, a: Elt) -> None:
    require_positive(n=n, k=k, l=l)
    require_divides(l, k, "T_l^k needs l | k")
    require_divides(n, a.ctx.m, "subfield degree must divide the ambient degree")
    if not in_subfield(a, n):
        raise ParameterError(f"a = {a.to_hex()} is not in GF(2^{n})")


def brute_solve(n: int, k: int, l: int, a: Elt) -> List[Elt]:
    """
    Every x in GF(2^n) with T_l^k(x) = a, by evaluating T_l^k on all 2^n elements.

    Args:
        n: Degree of the searched field, at most BRUTE_FORCE_MAX_N.
        k: Length of the partial trace (may exceed n).
        l: Step, l | k.
        a: Right-hand side in GF(2^n).

    Returns:
        List[Elt]: The solutions sorted by coefficient bits.
    """
    _check_subfield_rhs(n, k, l, a)
    if n > BRUTE_FORCE_MAX_N:
        raise ParameterError(f"brute force is limited to n <= {BRUTE_FORCE_MAX_N}, got {n}")
    return sorted(x for x in enumerate_subfield(a.ctx, n) if tmap(x, l, k) == a)


def brute_solve_all(n: int, k: int, l: int, ctx: FieldCtx) -> Dict[int, List[Elt]]:
    """One scan of GF(2^n) grouping every x by the value of T_l^k(x)."""
    require_positive(n=n, k=k, l=l)
    require_divides(l, k, "T_l^k needs l | k")
    if n > BRUTE_FORCE_MAX_N:
        raise ParameterError(f"brute force is limited to n <= {BRUTE_FORCE_MAX_N}, got {n}")
    table: Dict[int, List[Elt]] = {}
    for x in enumerate_subfield(ctx, n):
        table.setdefault(tmap(x, l, k).value, []).append(x)
    for solutions in table.values():
        solutions.sort()
    return table


class SubfieldCoordinates:
    """
    Basis-change system between ambient coefficient vectors and subfield_basis coordinates.

    The basis vectors are row-reduced once, each reduced row remembering which basis
    elements it combines, so coordinates of any subfield element follow by one reduction.
    """

    def __init__(self, basis: SubfieldBasis):
        self._basis = basis
        # leading bit -> (reduced vector, combination of basis indices)
        self._rows: Dict[int, Tuple[int, int]] = {}
        for index, elem in enumerate(basis.elems):
            vector, combination = elem.value, 1 << index
            while vector:
                lead = vector.bit_length() - 1
                row = self._rows.get(lead)
                if row is None:
                    break
                vector ^= row[0]
                combination ^= row[1]
            if vector == 0:
                raise RuntimeError("subfield basis is linearly dependent")
            self._rows[vector.bit_length() - 1] = (vector, combination)

    @property
    def basis(self) -> SubfieldBasis:
        return self._basis

    def coordinates(self, x: Elt) -> int:
        vector, combination = x.value, 0
        while vector:
            row = self._rows.get(vector.bit_length() - 1)
            if row is None:
                raise ParameterError(f"{x.to_hex()} is not in GF(2^{self._basis.n})")
            vector ^= row[0]
            combination ^= row[1]
        return combination

    def element(self, coords: int) -> Elt:
        return self._basis.combine(coords)


_COORDINATES: Dict[Tuple[FieldCtx, int], SubfieldCoordinates] = {}
_COORDINATES_LOCK = threading.Lock()


def coordinate_system(ctx: FieldCtx, n: int) -> SubfieldCoordinates:
    """The cached basis-change system of GF(2^n) in ctx, built once even under concurrent callers."""
    key = (ctx, n)
    with _COORDINATES_LOCK:
        system = _COORDINATES.get(key)
        if system is None:
            system = SubfieldCoordinates(subfield_basis(ctx, n))
            _COORDINATES[key] = system
    return system


def clear_caches() -> None:
    with _COORDINATES_LOCK:
        _COORDINATES.clear()


def operator_matrix(ctx: FieldCtx, n: int, k: int, l: int) -> Gf2Matrix:
    """n x n matrix of x -> T_l^k(x) on GF(2^n), column j being the image of basis element j."""
    system = coordinate_system(ctx, n)
    columns = [system.coordinates(tmap(b, l, k)) for b in system.basis]
    return Gf2Matrix.from_column_ints(columns, n)


def linalg_solve(n: int, k: int, l: int, a: Elt) -> SolutionSet:
    """
    Solutions in GF(2^n) of T_l^k(x) = a by Gaussian elimination; k may exceed n.

    Args:
        n: Degree of the solution field.
        k: Length of the partial trace.
        l: Step, l | k.
        a: Right-hand side in GF(2^n).

    Returns:
        SolutionSet: particular solution and nullspace basis, mapped back to ambient elements.
    """
    _check_subfield_rhs(n, k, l, a)
    ctx = a.ctx
    system = coordinate_system(ctx, n)
    matrix = operator_matrix(ctx, n, k, l)
    particular = matrix.solve(system.coordinates(a))
    if particular is None:
        return SolutionSet.unsolvable(ctx)
    kernel = tuple(system.element(v) for v in matrix.nullspace())
    return SolutionSet(ctx, True, system.element(particular), kernel)


def trace_one_element(ctx: FieldCtx, n: int) -> Elt:
    """delta in GF(2^n) with T_n(delta) = 1: 1 itself for odd n, else the first such basis element."""
    if is_odd(n):
        return ctx.one
    for elem in subfield_basis(ctx, n):
        if tmap(elem, 1, n) == ctx.one:
            return elem
    raise RuntimeError(f"no basis element of GF(2^{n}) has trace 1")


def half_trace_solve(n: int, a: Elt) -> SolutionSet:
    """
    Solutions in GF(2^n) of x^2 + x + a = 0 by the classical double-sum formula
    x0 = sum_{i=0}^{n-2} (sum_{j=i+1}^{n-1} delta^(2^j)) a^(2^i).

    Args:
        n: Degree of the solution field.
        a: Right-hand side in GF(2^n).

    Returns:
        SolutionSet: {x0, x0 + 1}, or unsolvable when T_n(a) != 0.
    """
    _check_subfield_rhs(n, 1, 1, a)
    ctx = a.ctx
    if tmap(a, 1, n):
        return SolutionSet.unsolvable(ctx)
    delta = trace_one_element(ctx, n)
    delta_powers = [frob(delta, j) for j in range(n)]
    x0 = ctx.zero
    inner = ctx.zero
    a_power = frob(a, n - 2) if n >= 2 else a
    # walk i downwards so the inner sum over j > i grows by one term per step
    for i in range(n - 2, -1, -1):
        inner = inner + delta_powers[i + 1]
        x0 = x0 + inner * a_power
        a_power = frob(a_power, ctx.m - 1)
    return SolutionSet.from_coset(x0, [ctx.one])


@dataclass
class LawResult:
    """
    Outcome of one checked identity.

    Attributes:
        name (str): Short identifier.
        statement (str): The identity or claim being checked.
        trials (int): Number of checked cases.
        failures (int): Number of cases that did not hold.
        counterexample (Optional[Dict[str, str]]): The first failing case, as hex values.
    """

    name: str
    statement: str
    trials: int = 0
    failures: int = 0
    counterexample: Optional[Dict[str, str]] = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, ok: bool, **case: object) -> None:
        self.trials += 1
        if not ok:
            self.failures += 1
            if self.counterexample is None:
                self.counterexample = {
                    key: value.to_hex() if isinstance(value, Elt) else str(value) for key, value in case.items()
                }

    def merge(self, other: "LawResult") -> None:
        self.trials += other.trials
        self.failures += other.failures
        if self.counterexample is None:
            self.counterexample = other.counterexample

    def to_dict(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "statement": self.statement,
            "trials": self.trials,
            "failures": self.failures,
            "counterexample": self.counterexample,
        }

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status}  {self.name}: {self.statement}  [{self.trials} trials, {self.failures} failures]"
        if self.counterexample:
            text += "  first counterexample: " + ", ".join(f"{k}={v}" for k, v in self.counterexample.items())
        return text


@dataclass
class LawReport:
    results: List[LawResult] = dataclass_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> int:
        return sum(r.failures for r in self.results)

    def get(self, name: str) -> LawResult:
        for result in self.results:
            if result.name == name:
                return result
        raise KeyError(name)

    def extend(self, other: "LawReport") -> None:
        self.results.extend(other.results)

    def to_dict(self) -> Dict[str, object]:
        return {"passed": self.passed, "failures": self.failures, "laws": [r.to_dict() for r in self.results]}


def _merge_reports(reports: Iterable[LawReport]) -> LawReport:
    merged: Dict[str, LawResult] = {}
    for report in reports:
        for result in report.results:
            if result.name in merged:
                merged[result.name].merge(result)
            else:
                merged[result.name] = LawResult(
                    result.name, result.statement, result.trials, result.failures, result.counterexample
                )
    return LawReport(list(merged.values()))


def _pick(rng: np.random.Generator, options: Sequence[int]) -> int:
    return int(options[int(rng.integers(0, len(options)))])


def _t(x: Elt, k: int) -> Elt:
    return tmap(x, 1, k)


def preimage_of_subfield(ctx: FieldCtx, n: int, k: int) -> Set[int]:
    """
    {x in ctx : T_k(x) in GF(2^n)}, by testing every element of the ambient field.

    x -> T_k(x) + T_k(x)^(2^n) is GF(2)-linear, so the images of the monomials are computed
    directly and every other value follows along a Gray-code walk.
    """
    monomial_images = []
    for degree in range(ctx.m):
        y = _t(ctx.element(1 << degree), k)
        monomial_images.append((y + frob(y, n)).value)
    members = set()
    x, image = 0, 0
    members.add(0)
    for step in range(1, ctx.order):
        bit = (step & -step).bit_length() - 1
        x ^= 1 << bit
        image ^= monomial_images[bit]
        if image == 0:
            members.add(x)
    return members


def _span_values(vectors: Sequence[int]) -> Set[int]:
    span = Gf2Span()
    basis = [v for v in vectors if span.add(v)]
    return set(enumerate_span(basis))


def _law_frobenius(rng, max_n, max_k, samples) -> LawResult:
    result = LawResult("frobenius-automorphism", "frob(x+y,j) = frob(x,j)+frob(y,j) and frob(xy,j) = frob(x,j)frob(y,j)")
    for _ in range(samples):
        ctx = make_ctx(int(rng.integers(1, 2 * max(max_n, max_k) + 1)))
        x, y = random_element(ctx, rng), random_element(ctx, rng)
        j = int(rng.integers(0, 2 * ctx.m + 1))
        ok = frob(x + y, j) == frob(x, j) + frob(y, j) and frob(x * y, j) == frob(x, j) * frob(y, j)
        result.record(ok, m=ctx.m, x=x, y=y, j=j)
    return result


def _law_linearity(rng, max_n, max_k, samples) -> LawResult:
    result = LawResult("tmap-linearity", "T_l^k(x+y) = T_l^k(x) + T_l^k(y)")
    for _ in range(samples):
        k = int(rng.integers(1, max_k + 1))
        l = _pick(rng, divisors(k))
        ctx = make_ctx(int(rng.integers(1, 2 * max(max_n, max_k) + 1)))
        x, y = random_element(ctx, rng), random_element(ctx, rng)
        result.record(tmap(x + y, l, k) == tmap(x, l, k) + tmap(y, l, k), m=ctx.m, k=k, l=l, x=x, y=y)
    return result


def _law_commutativity(rng, max_n, max_k, samples) -> LawResult:
    result = LawResult("commutativity", "T_l^k o T_l'^k' = T_l'^k' o T_l^k")
    for _ in range(samples):
        k, k2 = int(rng.integers(1, max_k + 1)), int(rng.integers(1, max_k + 1))
        l, l2 = _pick(rng, divisors(k)), _pick(rng, divisors(k2))
        ctx = make_ctx(int(rng.integers(1, 2 * max(max_n, max_k) + 1)))
        x = random_element(ctx, rng)
        ok = tmap(tmap(x, l, k), l2, k2) == tmap(tmap(x, l2, k2), l, k)
        result.record(ok, m=ctx.m, k=k, l=l, k2=k2, l2=l2, x=x)
    return result


def _law_transitivity(rng, max_n, max_k, samples) -> LawResult:
    result = LawResult("transitivity", "T_l^k o T_s^l = T_s^k for s | l | k")
    for _ in range(samples):
        k = int(rng.integers(1, max_k + 1))
        l = _pick(rng, divisors(k))
        s = _pick(rng, divisors(l))
        ctx = make_ctx(int(rng.integers(1, 2 * max(max_n, max_k) + 1)))
        x = random_element(ctx, rng)
        result.record(tmap(tmap(x, s, l), l, k) == tmap(x, s, k), m=ctx.m, s=s, l=l, k=k, x=x)
    return result


def _law_artin_schreier_composition(rng, max_n, max_k, samples) -> LawResult:
    result = LawResult("trace-of-t2", "T_k o T_2(x) = T_k^2k(x) = x + x^(2^k)")
    for _ in range(samples):
        k = int(rng.integers(1, max_k + 1))
        ctx = make_ctx(int(rng.integers(1, 2 * max(max_n, max_k) + 1)))
        x = random_element(ctx, rng)
        ok = _t(_t(x, 2), k) == x + frob(x, k) == tmap(x, k, 2 * k)
        result.record(ok, m=ctx.m, k=k, x=x)
    return result


def _law_double_trace(rng, max_n, max_k, samples) -> LawResult:
    result = LawResult("double-trace", "T_k o T_k o T_2 = T_2k")
    for _ in range(samples):
        k = int(rng.integers(1, max_k + 1))
        ctx = make_ctx(int(rng.integers(1, 2 * max(max_n, max_k) + 1)))
        x = random_element(ctx, rng)
        result.record(_t(_t(_t(x, 2), k), k) == _t(x, 2 * k), m=ctx.m, k=k, x=x)
    return result


def _law_membership_duality(rng, max_n, max_k, samples) -> LawResult:
    result = LawResult("membership-duality", "T_k(x) in GF(2^n) <=> T_n(x) in GF(2^k)")
    for _ in range(samples):
        n, k = int(rng.integers(1, max_n + 1)), int(rng.integers(1, max_k + 1))
        ctx = ambient_ctx(n, k)
        # a random x rarely satisfies either side; half the trials use a member of the preimage
        if rng.integers(0, 2):
            x = _member_of_preimage(ctx, n, k, rng)
        else:
            x = random_element(ctx, rng)
        ok = in_subfield(_t(x, k), n) == in_subfield(_t(x, n), k)
        result.record(ok, n=n, k=k, x=x)
    return result


def _member_of_preimage(ctx: FieldCtx, n: int, k: int, rng: np.random.Generator) -> Elt:
    """u + v with u in GF(2^n) and v in T_n^L(T_k^L(T_2(GF(2^2L)))), so T_k(u + v) lies in GF(2^n)."""
    big = lcm(n, k)
    y = _t(random_element(ctx, rng), 2)
    v = tmap(tmap(y, k, big), n, big)
    u = sample_subfield(ctx, n, int(rng.integers(0, 1 << 30)))
    return u + v


def _law_trace_image(max_n, max_k) -> LawResult:
    result = LawResult("trace-image", "T_n^m(GF(2^m)) = GF(2^n) for n | m")
    top = min(EXHAUSTIVE_MAX_DEGREE, 2 * max(max_n, max_k))
    for m in range(1, top + 1):
        ctx = make_ctx(m)
        for n in divisors(m):
            # the image is the span of the monomial images
            span = Gf2Span()
            generators = [v for v in (rel_trace(ctx.element(1 << i), n).value for i in range(m)) if span.add(v)]
            ok = span.rank == n and all(in_subfield(ctx.element(v), n) for v in generators)
            result.record(ok, m=m, n=n, image_rank=span.rank)
    return result


def _law_trace_proposition(rng, max_n, max_k, samples) -> LawResult:
    result = LawResult("trace-proposition", "T_k^[n,k](a) = T_d^n(a) = T_(n-k)^[n,n-k](a) for a in GF(2^n)")
    pairs = [(n, k) for n in range(2, max_n + 1) for k in range(1, min(n - 1, max_k) + 1)]
    if not pairs:
        return result
    for _ in range(samples):
        n, k = pairs[int(rng.integers(0, len(pairs)))]
        ctx = ambient_ctx(n, k)
        a = sample_subfield(ctx, n, int(rng.integers(0, 1 << 30)))
        first = tmap(a, k, lcm(n, k))
        second = tmap(a, gcd(n, k), n)
        third = tmap(a, n - k, lcm(n, n - k))
        result.record(first == second == third, n=n, k=k, a=a)
    return result


def _law_coset(rng, max_n, samples) -> LawResult:
    result = LawResult("coset-proposition", "a/(xi+1) + GF(2^L) = {a/(xi'+1) : xi' in mu_(2^L+1) minus 1}")
    for big in range(1, min(max_n, EXHAUSTIVE_MAX_DEGREE // 2) + 1):
        ctx = make_ctx(2 * big)
        one = ctx.one
        xi = mu_xi(ctx, big)
        subfield = list(enumerate_subfield(ctx, big))
        nonzero = [v for v in subfield if v]
        count = min(len(nonzero), max(1, samples // (1 << big)))
        for index in rng.choice(len(nonzero), size=count, replace=False):
            a = nonzero[int(index)]
            base = a / (xi + one)
            seen = set()
            for eta in subfield:
                w = base + eta
                # w = a/(xi'+1) forces xi' = 1 + a/w
                xi_prime = one + a / w if w else one
                ok = bool(w) and xi_prime != one and frob(xi_prime, big) * xi_prime == one
                ok = ok and xi_prime.value not in seen
                seen.add(xi_prime.value)
                result.record(ok, L=big, a=a, eta=eta)
            # 2^L distinct xi' out of the 2^L elements of mu_(2^L+1) minus 1 exhaust it
            result.record(len(seen) == 1 << big, L=big, a=a, distinct=len(seen))
    return result


def _law_membership_gcd_one(max_n, max_k) -> LawResult:
    result = LawResult("membership-gcd-one", "gcd(n,k)=1: T_k(x) in GF(2^n) <=> x in GF(2^n)+GF(2^k), 2^(n+k-1) elements")
    for n in range(1, max_n + 1):
        for k in range(1, max_k + 1):
            if gcd(n, k) != 1 or 2 * lcm(n, k) > EXHAUSTIVE_MAX_DEGREE:
                continue
            ctx = ambient_ctx(n, k)
            members = preimage_of_subfield(ctx, n, k)
            sums = {u.value ^ v.value for u in enumerate_subfield(ctx, n) for v in enumerate_subfield(ctx, k)}
            ok = members == sums and len(members) == 1 << (n + k - 1)
            result.record(ok, n=n, k=k, preimage=len(members), sumset=len(sums))
    return result


def _law_membership_lcm(max_n, max_k) -> LawResult:
    result = LawResult(
        "membership-lcm",
        "{x : T_k(x) in GF(2^n)} = T_n^[n,k] o T_k^[n,k] o T_2(GF(2^2[n,k])), 2^(n+k-1) elements",
    )
    for n in range(1, max_n + 1):
        for k in range(1, max_k + 1):
            big = lcm(n, k)
            if 2 * big > EXHAUSTIVE_MAX_DEGREE:
                continue
            ctx = ambient_ctx(n, k)
            members = preimage_of_subfield(ctx, n, k)
            images = _span_values(
                [tmap(tmap(_t(ctx.element(1 << i), 2), k, big), n, big).value for i in range(ctx.m)]
            )
            ok = members == images and len(members) == 1 << (n + k - 1)
            result.record(ok, n=n, k=k, preimage=len(members), image=len(images))
    return result


def _law_small_example() -> LawResult:
    result = LawResult(
        "example-n2-k2",
        "n=k=2: {x : T_2(x) in GF(4)} has 8 elements, lies in GF(2^4) and not in GF(2^2)",
    )
    # a degree-8 ambient field, so containment in GF(2^4) is a real condition
    ctx = make_ctx(8)
    members = [ctx.element(v) for v in sorted(preimage_of_subfield(ctx, 2, 2))]
    result.record(len(members) == 8, size=len(members))
    result.record(all(in_subfield(x, 4) for x in members), field="GF(2^4)")
    result.record(not all(in_subfield(x, 2) for x in members), field="GF(2^2)")
    one = ctx.one
    for x in members:
        # roots of (x + x^2)(1 + x + x^2)(1 + x + x^4)
        product = (x + x * x) * (one + x + x * x) * (one + x + x ** 4)
        result.record(not product, x=x)
    return result


def _law_xi_independence(rng, max_n, samples) -> LawResult:
    result = LawResult("xi-independence", "solution sets do not depend on the choice of xi")
    triples = [(n, k, l) for n in range(1, max_n + 1) for k in range(1, n + 1) for l in divisors(k)]
    for _ in range(samples):
        n, k, l = triples[int(rng.integers(0, len(triples)))]
        ctx = ambient_ctx(n, k)
        a = sample_subfield(ctx, n, int(rng.integers(0, 1 << 30)))
        inst = Instance(n, k, l, a)
        reference = solve_tlk(inst, 0)
        closure = solve_closure(n, k, l, a, 0)
        ok = all(
            solve_tlk(inst, choice).same_set(reference) and solve_closure(n, k, l, a, choice).same_set(closure)
            for choice in (1, 2)
        )
        result.record(ok, n=n, k=k, l=l, a=a)
    return result


def check_laws(max_n: int, max_k: int, samples: int, seed: int = 0, show_progress: bool = False) -> LawReport:
    """
    Runs every identity of the partial-trace calculus as randomised or exhaustive trials.

    Args:
        max_n: Largest subfield degree n used.
        max_k: Largest trace length k used.
        samples: Random trials per randomised law.
        seed: Seed for numpy's default generator.
        show_progress: Draw a progress bar on stderr.

    Returns:
        LawReport: One LawResult per law; failures are data, not exceptions.
    """
    require_positive(max_n=max_n, max_k=max_k, samples=samples)
    rng = np.random.default_rng(seed)
    steps: List[Callable[[], LawResult]] = [
        lambda: _law_frobenius(rng, max_n, max_k, samples),
        lambda: _law_linearity(rng, max_n, max_k, samples),
        lambda: _law_commutativity(rng, max_n, max_k, samples),
        lambda: _law_transitivity(rng, max_n, max_k, samples),
        lambda: _law_artin_schreier_composition(rng, max_n, max_k, samples),
        lambda: _law_double_trace(rng, max_n, max_k, samples),
        lambda: _law_membership_duality(rng, max_n, max_k, samples),
        lambda: _law_trace_image(max_n, max_k),
        lambda: _law_trace_proposition(rng, max_n, max_k, samples),
        lambda: _law_coset(rng, max_n, samples),
        lambda: _law_membership_gcd_one(max_n, max_k),
        lambda: _law_membership_lcm(max_n, max_k),
        _law_small_example,
        lambda: _law_xi_independence(rng, max_n, samples),
    ]
    return LawReport([step() for step in progress(steps, "laws", show_progress)])


def _solver_report_for_n(n: int, samples: int, seed: int) -> LawReport:
    """Exhaustive solver-versus-oracle checks for one n (every k <= n, l | k, a in GF(2^n))."""
    rng = np.random.default_rng([seed, n])
    equivalence = LawResult("solver-equivalence", "solve_tlk = linalg_solve = brute_solve as sets, every a")
    counts = LawResult("count-law", "2^(d-(d,l)) solutions if k/[d,l] odd, 2^d if even")
    solvability = LawResult("solvability", "T_d^n(a) in GF(2^(d,l)) (odd) / = 0 (even) <=> brute force finds a solution")
    kernel_dim = LawResult("kernel-dimension", "linalg nullspace dimension = kernel_tlk dimension")
    closure = LawResult("closure-consistency", "GF(2^n)-solutions = closure solutions lying in GF(2^n)")
    artin = LawResult("artin-schreier", "x^(2^k)+x=a has 0 or exactly 2^d solutions, matching brute force")
    tk_count = LawResult("tk-count", "T_k(x)=a: 2^(d-1) solutions (k/d odd) or 2^d (k/d even), matching brute force")
    classification = LawResult("classification", "classify tag matches the image size of T_l^k on GF(2^n)")
    for k in range(1, n + 1):
        for l in divisors(k):
            ctx = ambient_ctx(n, k)
            d, g = gcd(n, k), gcd(gcd(n, k), l)
            expected = 1 << (d - g) if is_odd(k // lcm(d, l)) else 1 << d
            table = brute_solve_all(n, k, l, ctx)
            kernel = kernel_tlk(n, k, l, ctx)
            linalg_kernel = len(linalg_solve(n, k, l, ctx.zero).kernel_basis)
            kernel_dim.record(linalg_kernel == len(kernel), n=n, k=k, l=l)
            image_size = len(table)
            tag = classify(n, k, l).tag
            empirical = (
                Tag.PERMUTATION if image_size == 1 << n else Tag.TWO_TO_ONE if image_size == 1 << (n - 1) else Tag.OTHER
            )
            classification.record(tag == empirical, n=n, k=k, l=l, image_size=image_size)
            for a in enumerate_subfield(ctx, n):
                brute = [x.value for x in table.get(a.value, [])]
                inst = Instance(n, k, l, a)
                formula = solve_tlk(inst)
                classical = linalg_solve(n, k, l, a)
                ok = [x.value for x in formula.elements()] == brute == [x.value for x in classical.elements()]
                equivalence.record(ok, n=n, k=k, l=l, a=a)
                solvability.record(solvable_tlk(inst) == bool(brute), n=n, k=k, l=l, a=a)
                if brute:
                    counts.record(formula.count == expected == len(brute), n=n, k=k, l=l, a=a)
                if rng.random() < samples / max(samples, 1 << n):
                    in_field = sorted(
                        x.value for x in solve_closure(n, k, l, a).elements() if in_subfield(x, n)
                    )
                    closure.record(in_field == brute, n=n, k=k, l=l, a=a)
                if l == 1:
                    tk = solve_tk(n, k, a)
                    tk_expected = 1 << (d - 1) if is_odd(k // d) else 1 << d
                    tk_ok = [x.value for x in tk.elements()] == brute and (not brute or tk.count == tk_expected)
                    tk_count.record(tk_ok, n=n, k=k, a=a)
        if k < n:
            ctx = ambient_ctx(n, k)
            table = brute_solve_all(n, 2 * k, k, ctx)
            for a in enumerate_subfield(ctx, n):
                brute = [x.value for x in table.get(a.value, [])]
                solutions = solve_artin_schreier(n, k, a)
                ok = [x.value for x in solutions.elements()] == brute and len(brute) in (0, 1 << gcd(n, k))
                artin.record(ok, n=n, k=k, a=a)
    return LawReport([equivalence, counts, solvability, kernel_dim, closure, artin, tk_count, classification])


def _beyond_n_report(max_n: int) -> LawReport:
    """Oracles agree when k > n, and the classification holds there too."""
    agreement = LawResult("oracles-beyond-n", "brute_solve = linalg_solve for k > n")
    spot = LawResult("classification-beyond-n", "(2,3,1) is a permutation, (2,4,1) is not; tags match image sizes")
    for n in range(1, max_n + 1):
        for k in range(n + 1, n + 3):
            for l in divisors(k):
                ctx = ambient_ctx(n, k)
                table = brute_solve_all(n, k, l, ctx)
                for a in enumerate_subfield(ctx, n):
                    brute = [x.value for x in table.get(a.value, [])]
                    classical = [x.value for x in linalg_solve(n, k, l, a).elements()]
                    agreement.record(brute == classical, n=n, k=k, l=l, a=a)
                image_size = len(table)
                tag = classify(n, k, l).tag
                spot.record((tag is Tag.PERMUTATION) == (image_size == 1 << n), n=n, k=k, l=l)
    spot.record(classify(2, 3, 1).tag is Tag.PERMUTATION, n=2, k=3, l=1)
    spot.record(classify(2, 4, 1).tag is not Tag.PERMUTATION, n=2, k=4, l=1)
    return LawReport([agreement, spot])


def _quadratic_report(max_n: int, samples: int, seed: int) -> LawReport:
    result = LawResult("quadratic-cross-check", "T_n(a/(xi+1)) formula = half-trace formula, both roots of x^2 + x = a")
    rng = np.random.default_rng([seed, 7])
    for n in range(2, max_n + 1):
        ctx = ambient_ctx(n, 1)
        for _ in range(samples):
            # a = x^2 + x is always solvable
            x = sample_subfield(ctx, n, int(rng.integers(0, 1 << 30)))
            a = x * x + x
            formula = [e.value for e in solve_quadratic(n, a).elements()]
            classical = [e.value for e in half_trace_solve(n, a).elements()]
            ok = formula == classical and x.value in formula
            ok = ok and all(tmap(ctx.element(v), 1, 2) == a for v in formula)
            result.record(ok, n=n, a=a)
            # T_n(b) = 1 makes b unsolvable; both must agree
            b = a + trace_one_element(ctx, n)
            result.record(
                not solve_quadratic(n, b).solvable and not half_trace_solve(n, b).solvable, n=n, a=b
            )
    return LawReport([result])


def check_solvers(max_n: int, samples: int, seed: int = 0, jobs: int = 1, show_progress: bool = False) -> LawReport:
    """
    Solver-versus-oracle checks over every (n <= max_n, k <= n, l | k) and every a in GF(2^n).

    Args:
        max_n: Largest n checked exhaustively.
        samples: Random trials for the sampled checks (closure consistency, quadratics).
        seed: Seed for numpy's default generator.
        jobs: Worker processes for the per-n checks; reports are merged in n order.
        show_progress: Draw a progress bar on stderr.

    Returns:
        LawReport: Merged results.
    """
    require_positive(max_n=max_n, samples=samples, jobs=jobs)
    sizes = list(range(1, max_n + 1))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_solver_report_for_n, n, samples, seed) for n in sizes]
            reports = [f.result() for f in progress(futures, "solvers", show_progress)]
    else:
        reports = [_solver_report_for_n(n, samples, seed) for n in progress(sizes, "solvers", show_progress)]
    merged = _merge_reports(reports)
    merged.extend(_beyond_n_report(min(max_n, 4)))
    merged.extend(_quadratic_report(max(2, min(2 * max_n, QUADRATIC_MAX_N)), samples, seed))
    return merged
