"""
Timing harness: closed-form solving against the classical linear-algebra method (and brute force
on small fields), with a correctness gate that runs before any timing.
"""
from dataclasses import dataclass, asdict
from time import perf_counter_ns
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

try:
    from src import field, oracle
    from src.field import Elt, FieldCtx, ambient_ctx, sample_subfield, tmap
    from src.poly2 import BitPoly
    from src.solver import Instance, SolutionSet, solve_tlk
    from src.utils import (
        BenchmarkMismatchError,
        ParameterError,
        log,
        progress,
        require_divides,
        require_positive,
    )
except ImportError:
    import field  # type: ignore[no-redef]
    import oracle  # type: ignore[no-redef]
    from field import Elt, FieldCtx, ambient_ctx, sample_subfield, tmap
    from poly2 import BitPoly
    from solver import Instance, SolutionSet, solve_tlk
    from utils import (
        BenchmarkMismatchError,
        ParameterError,
        log,
        progress,
        require_divides,
        require_positive,
    )


BRUTE_BENCH_MAX_N: int = 16
# element evaluations allowed per grid point for brute force
BRUTE_BENCH_BUDGET: int = 1 << 18
DEFAULT_ITERATIONS: int = 100
DEFAULT_INSTANCES: int = 4
METHODS: Tuple[str, ...] = ("closed-form", "linalg", "brute")
COLUMNS: List[str] = ["n", "k", "l", "method", "median_ns", "iterations", "amortized"]

GridPoint = Tuple[int, int, int]


@dataclass(frozen=True)
class BenchRow:
    """
    Median timing of one method on one grid point.

    Attributes:
        n (int): Degree of the solution field.
        k (int): Length of the partial trace.
        l (int): Step of the partial trace.
        method (str): One of METHODS.
        median_ns (int): Median wall time of one solve, in nanoseconds.
        iterations (int): Timed passes over the instance set.
        amortized (bool): Whether per-context setup (modulus search, bases, caches) is inside the timed region.
    """

    n: int
    k: int
    l: int
    method: str
    median_ns: int
    iterations: int
    amortized: bool

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if self.median_ns <= 0:
            raise ValueError("median time must be strictly positive")


def parse_grid(text: str) -> List[GridPoint]:
    """
    Parses "n,k,l;n,k,l;..." into grid points; an empty string is the empty grid.

    Raises:
        ParameterError: If a point does not have three integer fields.
    """
    grid: List[GridPoint] = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        fields = [f.strip() for f in chunk.split(",")]
        if len(fields) != 3:
            raise ParameterError(f"grid point {chunk!r} must be n,k,l")
        try:
            n, k, l = (int(f) for f in fields)
        except ValueError as err:
            raise ParameterError(f"grid point {chunk!r} is not three integers") from err
        grid.append((n, k, l))
    return grid


def _methods_for(n: int, methods: Sequence[str]) -> List[str]:
    return [m for m in methods if m != "brute" or n <= BRUTE_BENCH_MAX_N]


def validate_grid(grid: Sequence[GridPoint], methods: Sequence[str]) -> None:
    """Rejects the whole grid before anything is timed."""
    unknown = [m for m in methods if m not in METHODS]
    if unknown or not methods:
        raise ParameterError(f"methods must be a non-empty subset of {list(METHODS)}, got {list(methods)}")
    for n, k, l in grid:
        require_positive(n=n, k=k, l=l)
        require_divides(l, k, f"grid point ({n},{k},{l}) needs l | k")
        if "closed-form" in methods and k > n:
            raise ParameterError(f"grid point ({n},{k},{l}): closed-form solving needs k <= n")


def solvable_instances(n: int, k: int, l: int, count: int, seed: int, ctx: Optional[FieldCtx] = None) -> List[Elt]:
    """count right-hand sides a = T_l^k(x) for seeded random x in GF(2^n); each is solvable."""
    ctx = ctx or ambient_ctx(n, k)
    rng = np.random.default_rng([seed, n, k, l])
    return [tmap(sample_subfield(ctx, n, int(rng.integers(0, 1 << 62))), l, k) for _ in range(count)]


def _solvers(n: int, k: int, l: int) -> Dict[str, Callable[[Elt], object]]:
    return {
        "closed-form": lambda a: solve_tlk(Instance(n, k, l, a)),
        "linalg": lambda a: oracle.linalg_solve(n, k, l, a),
        "brute": lambda a: oracle.brute_solve(n, k, l, a),
    }


def _gate_methods(n: int, k: int, methods: Sequence[str]) -> List[str]:
    gate = list(methods)
    if len(gate) == 1:
        if gate[0] != "linalg":
            gate.append("linalg")
        elif n <= BRUTE_BENCH_MAX_N:
            gate.append("brute")
        elif k <= n:
            gate.append("closed-form")
    return gate


def check_agreement(n: int, k: int, l: int, rhs: Sequence[Elt], methods: Sequence[str]) -> None:
    """
    Solves every instance with every method and compares the sets.

    A single method is checked against an independent one: linalg, or brute force when linalg is the method.

    Raises:
        BenchmarkMismatchError: On the first instance where two methods disagree.
    """
    methods = _gate_methods(n, k, methods)
    for a in rhs:
        sets = [(method, _solvers(n, k, l)[method](a)) for method in methods if method != "brute"]
        reference_name, reference = sets[0] if sets else ("", None)
        for method, other in sets[1:]:
            if not reference.same_set(other):  # type: ignore[union-attr]
                raise BenchmarkMismatchError(f"({n},{k},{l}) a={a.to_hex()}: {method} disagrees with {reference_name}")
        if "brute" in methods and isinstance(reference, SolutionSet):
            found = [x.value for x in oracle.brute_solve(n, k, l, a)]
            if [x.value for x in reference.elements()] != found:
                raise BenchmarkMismatchError(f"({n},{k},{l}) a={a.to_hex()}: brute disagrees with {reference_name}")


def _clear_all_caches() -> None:
    field.clear_caches()
    oracle.clear_caches()


def _time_method(
    n: int,
    k: int,
    l: int,
    method: str,
    rhs: Sequence[Elt],
    iterations: int,
    with_setup: bool,
    modulus: Optional[BitPoly],
) -> int:
    samples = []
    for _ in range(iterations):
        for a in rhs:
            if with_setup:
                _clear_all_caches()
                start = perf_counter_ns()
                ctx = ambient_ctx(n, k, modulus)
                _solvers(n, k, l)[method](ctx.element(a.value))
            else:
                solve = _solvers(n, k, l)[method]
                start = perf_counter_ns()
                solve(a)
            samples.append(perf_counter_ns() - start)
    return max(1, int(np.median(samples)))


def run_bench(
    grid: Sequence[GridPoint],
    iterations: int = DEFAULT_ITERATIONS,
    include_setup: bool = False,
    methods: Sequence[str] = METHODS,
    instances: int = DEFAULT_INSTANCES,
    seed: int = 0,
    modulus: Optional[BitPoly] = None,
    show_progress: bool = False,
) -> List[BenchRow]:
    """
    Times every method on every grid point, after checking that the methods agree.

    Args:
        grid: (n, k, l) points, timed in order.
        iterations: Timed passes over the instance set.
        include_setup: Also time each solve with context construction and cleared caches; both
            modes are reported.
        methods: Subset of METHODS, reported in this order; brute is skipped above BRUTE_BENCH_MAX_N.
        instances: Seeded solvable instances per grid point.
        seed: Seed of the instance generator.
        modulus: Ambient modulus override.
        show_progress: Draw a progress bar on stderr.

    Returns:
        List[BenchRow]: Rows in grid order, then method order, then amortization mode.

    Raises:
        ParameterError: If the grid or the methods are invalid (nothing is timed).
        BenchmarkMismatchError: If two methods disagree on some instance.
    """
    require_positive(iterations=iterations, instances=instances)
    validate_grid(grid, methods)
    rows: List[BenchRow] = []
    for n, k, l in progress(grid, "bench", show_progress):
        ctx = ambient_ctx(n, k, modulus)
        point_methods = _methods_for(n, methods)
        if len(point_methods) < len(methods):
            log(f"({n},{k},{l}): brute force skipped above n = {BRUTE_BENCH_MAX_N}")
        rhs = solvable_instances(n, k, l, instances, seed, ctx)
        check_agreement(n, k, l, rhs, point_methods)
        for method in point_methods:
            passes = iterations
            if method == "brute":
                passes = max(1, min(iterations, BRUTE_BENCH_BUDGET // (instances << n)))
            median = _time_method(n, k, l, method, rhs, passes, False, modulus)
            rows.append(BenchRow(n, k, l, method, median, passes, False))
            if include_setup:
                median = _time_method(n, k, l, method, rhs, passes, True, modulus)
                rows.append(BenchRow(n, k, l, method, median, passes, True))
    return rows


def rows_to_frame(rows: Sequence[BenchRow]) -> pd.DataFrame:
    return pd.DataFrame([asdict(row) for row in rows], columns=COLUMNS)


def write_csv(rows: Sequence[BenchRow], path: Optional[str] = None) -> str:
    """Writes the CSV to path (if given) and returns its text."""
    text = rows_to_frame(rows).to_csv(index=False, lineterminator="\n")
    if path is not None:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
    return text


def plot_bench(rows: Sequence[BenchRow], path: str) -> None:
    """Median time against n, one line per method and amortization mode, log scale."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    frame = rows_to_frame(rows)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for (method, amortized), group in frame.groupby(["method", "amortized"], sort=False):
        label = f"{method} (with setup)" if amortized else method
        ax.plot(group["n"], group["median_ns"], marker="o", label=label)
    ax.set_xlabel("n")
    ax.set_ylabel("median time per solve [ns]")
    ax.set_yscale("log")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
