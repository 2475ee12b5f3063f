"""
Command-line front end: solve, kernel, classify, verify, sample, field-info and bench.

Elements are read and printed as 0x-prefixed hex coefficient vectors of the ambient field
GF(2^m), m = 2*lcm(n, K) where T_l^K is the map of the equation; `field-info` prints the
modulus and the GF(2^n) basis needed to write inputs by hand.

Exit codes: 0 success, 1 unsolvable equation / failed verification / benchmark mismatch,
2 usage or parameter errors.
"""
import argparse
import json
import sys
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

try:
    from src import bench, oracle
    from src.field import Elt, FieldCtx, ambient_ctx, sample_subfield, subfield_basis, tmap
    from src.poly2 import BitPoly
    from src.solver import (
        Instance,
        SolutionSet,
        classify,
        kernel_tlk,
        solve_artin_schreier,
        solve_closure,
        solve_quadratic,
        solve_tlk,
    )
    from src.utils import BenchmarkMismatchError, FieldError, ParameterError, log, parse_hex, require_positive
except ImportError:
    import bench  # type: ignore[no-redef]
    import oracle  # type: ignore[no-redef]
    from field import Elt, FieldCtx, ambient_ctx, sample_subfield, subfield_basis, tmap
    from poly2 import BitPoly
    from solver import (
        Instance,
        SolutionSet,
        classify,
        kernel_tlk,
        solve_artin_schreier,
        solve_closure,
        solve_quadratic,
        solve_tlk,
    )
    from utils import BenchmarkMismatchError, FieldError, ParameterError, log, parse_hex, require_positive


EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

# solution lists longer than this are summarised by count, particular and kernel basis
SOLUTION_LIST_CAP = 1 << 12

FORMS = ("tlk", "artin-schreier", "quadratic")
SOLVE_METHODS = ("formula", "closure", "linalg", "brute")


class _ArgumentParser(argparse.ArgumentParser):
    """argparse parser that raises instead of exiting, so run() owns the exit code."""

    def error(self, message: str):
        raise ParameterError(message)


def _modulus(args: argparse.Namespace) -> Optional[BitPoly]:
    return BitPoly.from_hex(args.modulus) if args.modulus else None


def _equation(form: str, k: Optional[int], l: int) -> Tuple[int, int]:
    """(K, L) such that the equation of the form is T_L^K(x) = a."""
    if form == "quadratic":
        return 2, 1
    if k is None:
        raise ParameterError(f"--k is required for --form {form}")
    if form == "artin-schreier":
        # x^(2^k) + x = T_k^2k(x)
        return 2 * k, k
    return k, l


def _read_element(ctx: FieldCtx, n: int, text: str, coords: str) -> Elt:
    value = parse_hex(text)
    if coords == "subfield":
        if value >> n:
            raise ParameterError(f"{text} has more than {n} subfield coordinates")
        return subfield_basis(ctx, n).combine(value)
    return ctx.element(value)


def _brute_set(ctx: FieldCtx, solutions: Sequence[Elt]) -> SolutionSet:
    if not solutions:
        return SolutionSet.unsolvable(ctx)
    first = solutions[0]
    return SolutionSet.from_coset(first, [x + first for x in solutions[1:]])


def _emit(args: argparse.Namespace, payload: Dict[str, object], lines: List[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(lines))


def _solve(args: argparse.Namespace) -> int:
    require_positive(n=args.n, l=args.l)
    n = args.n
    big_k, step = _equation(args.form, args.k, args.l)
    ctx = ambient_ctx(n, big_k, _modulus(args))
    a = _read_element(ctx, n, args.a, args.coords)
    solvers: Dict[str, Callable[[], SolutionSet]] = {
        "closure": lambda: solve_closure(n, big_k, step, a),
        "linalg": lambda: oracle.linalg_solve(n, big_k, step, a),
        "brute": lambda: _brute_set(ctx, oracle.brute_solve(n, big_k, step, a)),
    }
    if args.form == "quadratic":
        solvers["formula"] = lambda: solve_quadratic(n, a)
    elif args.form == "artin-schreier":
        solvers["formula"] = lambda: solve_artin_schreier(n, args.k, a)
    else:
        solvers["formula"] = lambda: solve_tlk(Instance(n, big_k, step, a))
    result = solvers[args.method]()

    solutions = result.elements() if result.count <= SOLUTION_LIST_CAP else None
    equation = {"form": args.form, "n": n, "k": big_k, "l": step}
    payload: Dict[str, object] = {"equation": equation, "a": a.to_hex(), "method": args.method}
    payload.update(result.to_dict())
    payload["solutions"] = [x.to_hex() for x in solutions] if solutions is not None else None

    field = "the algebraic closure" if args.method == "closure" else f"GF(2^{n})"
    lines = [
        f"equation: T_{step}^{big_k}(x) = {a.to_hex()} in {field} ({args.form}, {args.method})",
        f"ambient: GF(2^{ctx.m}) modulo {ctx.modulus.to_hex()}",
        f"solvable: {'yes' if result.solvable else 'no'}",
    ]
    if result.solvable and result.particular is not None:
        lines.append(f"count: {result.count}")
        lines.append(f"particular: {result.particular.to_hex()}")
        lines.append("kernel basis: " + (" ".join(e.to_hex() for e in result.kernel_basis) or "(none)"))
        if solutions is not None:
            lines.append("solutions: " + " ".join(x.to_hex() for x in solutions))
    _emit(args, payload, lines)
    return EXIT_OK if result.solvable else EXIT_FAILURE


def _kernel(args: argparse.Namespace) -> int:
    require_positive(n=args.n, k=args.k, l=args.l)
    ctx = ambient_ctx(args.n, args.k, _modulus(args))
    if args.method == "linalg":
        basis = list(oracle.linalg_solve(args.n, args.k, args.l, ctx.zero).kernel_basis)
    else:
        basis = kernel_tlk(args.n, args.k, args.l, ctx)
    payload = {
        "equation": {"n": args.n, "k": args.k, "l": args.l},
        "ambient": ctx.to_dict(),
        "dimension": len(basis),
        "kernel_basis": [e.to_hex() for e in basis],
    }
    lines = [
        f"kernel of T_{args.l}^{args.k} on GF(2^{args.n}): dimension {len(basis)}",
        "basis: " + (" ".join(e.to_hex() for e in basis) or "(none)"),
    ]
    _emit(args, payload, lines)
    return EXIT_OK


def _classify(args: argparse.Namespace) -> int:
    result = classify(args.n, args.k, args.l)
    payload = {"n": args.n, "k": args.k, "l": args.l, "tag": result.tag.value, "kernel_dim": result.kernel_dim}
    lines = [result.tag.value, f"T_{args.l}^{args.k} on GF(2^{args.n}), kernel dimension {result.kernel_dim}"]
    _emit(args, payload, lines)
    return EXIT_OK


def _verify(args: argparse.Namespace) -> int:
    max_k = args.max_k if args.max_k is not None else args.max_n
    require_positive(max_n=args.max_n, max_k=max_k, samples=args.samples, jobs=args.jobs)
    log(f"checking laws up to n={args.max_n}, k={max_k} with {args.samples} samples", args.progress)
    report = oracle.check_laws(args.max_n, max_k, args.samples, args.seed, args.progress)
    log("checking solvers against the oracles", args.progress)
    report.extend(oracle.check_solvers(args.max_n, args.samples, args.seed, args.jobs, args.progress))
    lines = [result.line() for result in report.results]
    lines.append(f"{len(report.results)} checks, {report.failures} failures")
    _emit(args, report.to_dict(), lines)
    return EXIT_OK if report.passed else EXIT_FAILURE


def _sample(args: argparse.Namespace) -> int:
    require_positive(n=args.n, k=args.k, count=args.count)
    ctx = ambient_ctx(args.n, args.k, _modulus(args))
    rng = np.random.default_rng(args.seed)
    values = [sample_subfield(ctx, args.n, int(rng.integers(0, 1 << 62))) for _ in range(args.count)]
    if args.solvable:
        if args.l < 1 or args.k % args.l:
            raise ParameterError("--solvable needs --l dividing --k")
        values = [tmap(x, args.l, args.k) for x in values]
    payload = {"ambient": ctx.to_dict(), "n": args.n, "samples": [x.to_hex() for x in values]}
    _emit(args, payload, [x.to_hex() for x in values])
    return EXIT_OK


def _field_info(args: argparse.Namespace) -> int:
    require_positive(n=args.n, k=args.k)
    ctx = ambient_ctx(args.n, args.k, _modulus(args))
    basis = subfield_basis(ctx, args.n)
    payload = {
        "m": ctx.m,
        "modulus": ctx.modulus.to_hex(),
        "modulus_polynomial": str(ctx.modulus),
        "subfield": args.n,
        "subfield_basis": [e.to_hex() for e in basis],
    }
    lines = [
        f"m: {ctx.m}",
        f"modulus: {ctx.modulus.to_hex()} ({ctx.modulus})",
        f"GF(2^{args.n}) basis: " + " ".join(e.to_hex() for e in basis),
    ]
    _emit(args, payload, lines)
    return EXIT_OK


def _bench(args: argparse.Namespace) -> int:
    grid = bench.parse_grid(args.grid)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    rows = bench.run_bench(
        grid,
        iterations=args.iters,
        include_setup=args.include_setup,
        methods=methods,
        instances=args.instances,
        seed=args.seed,
        show_progress=args.progress,
    )
    text = bench.write_csv(rows, args.out)
    if args.out is None:
        sys.stdout.write(text)
    else:
        log(f"wrote {len(rows)} rows to {args.out}")
    if args.plot:
        bench.plot_bench(rows, args.plot)
        log(f"wrote plot to {args.plot}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    output = _ArgumentParser(add_help=False)
    output.add_argument("--json", action="store_true", help="structured JSON output")
    field = _ArgumentParser(add_help=False)
    field.add_argument("--modulus", help="hex override of the ambient modulus")

    parser = _ArgumentParser(prog="ptrace", description="Solve T_l^k(x) = a over GF(2^n) and its closure.")
    verbs = parser.add_subparsers(dest="verb", parser_class=_ArgumentParser)
    verbs.required = True

    solve = verbs.add_parser("solve", parents=[output, field], help="solve one equation")
    solve.add_argument("--n", type=int, required=True)
    solve.add_argument("--k", type=int)
    solve.add_argument("--l", type=int, default=1)
    solve.add_argument("--a", required=True, help="right-hand side, 0x-prefixed hex")
    solve.add_argument("--form", choices=FORMS, default="tlk")
    solve.add_argument("--method", choices=SOLVE_METHODS, default="formula")
    solve.add_argument("--coords", choices=("ambient", "subfield"), default="ambient")
    solve.set_defaults(handler=_solve)

    kernel = verbs.add_parser("kernel", parents=[output, field], help="basis of the kernel of T_l^k on GF(2^n)")
    kernel.add_argument("--n", type=int, required=True)
    kernel.add_argument("--k", type=int, required=True)
    kernel.add_argument("--l", type=int, default=1)
    kernel.add_argument("--method", choices=("formula", "linalg"), default="formula")
    kernel.set_defaults(handler=_kernel)

    classify_verb = verbs.add_parser("classify", parents=[output], help="permutation / 2-to-1 tag")
    classify_verb.add_argument("--n", type=int, required=True)
    classify_verb.add_argument("--k", type=int, required=True)
    classify_verb.add_argument("--l", type=int, default=1)
    classify_verb.set_defaults(handler=_classify)

    verify = verbs.add_parser("verify", parents=[output], help="run the law and solver checks")
    verify.add_argument("--max-n", type=int, default=6)
    verify.add_argument("--max-k", type=int)
    verify.add_argument("--samples", type=int, default=200)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--jobs", type=int, default=1)
    verify.add_argument("--progress", action="store_true")
    verify.set_defaults(handler=_verify)

    sample = verbs.add_parser("sample", parents=[output, field], help="print valid GF(2^n) inputs")
    sample.add_argument("--n", type=int, required=True)
    sample.add_argument("--k", type=int, default=1)
    sample.add_argument("--l", type=int, default=1)
    sample.add_argument("--seed", type=int, default=0)
    sample.add_argument("--count", type=int, default=1)
    sample.add_argument("--solvable", action="store_true", help="print T_l^k images, which are always solvable")
    sample.set_defaults(handler=_sample)

    info = verbs.add_parser("field-info", parents=[output, field], help="ambient modulus and subfield basis")
    info.add_argument("--n", type=int, required=True)
    info.add_argument("--k", type=int, default=1)
    info.set_defaults(handler=_field_info)

    bench_verb = verbs.add_parser("bench", help="time closed-form against linear algebra")
    bench_verb.add_argument("--grid", default="8,4,1;16,8,1;32,16,1;64,32,1", help='"n,k,l;n,k,l;..."')
    bench_verb.add_argument("--iters", type=int, default=bench.DEFAULT_ITERATIONS)
    bench_verb.add_argument("--include-setup", action="store_true")
    bench_verb.add_argument("--methods", default=",".join(bench.METHODS))
    bench_verb.add_argument("--instances", type=int, default=bench.DEFAULT_INSTANCES)
    bench_verb.add_argument("--seed", type=int, default=0)
    bench_verb.add_argument("--out", help="CSV path; standard output when omitted")
    bench_verb.add_argument("--plot", help="PNG path for a log-scale plot")
    bench_verb.add_argument("--progress", action="store_true")
    bench_verb.set_defaults(handler=_bench)
    return parser


def run(argv: Sequence[str]) -> int:
    """
    Parses argv, dispatches to the verb and maps errors to exit codes.

    Args:
        argv: Arguments without the program name.

    Returns:
        int: 0 on success, 1 for unsolvable / failed checks / benchmark mismatch, 2 for usage errors.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
        return args.handler(args)
    except SystemExit as exit_request:
        # --help
        return int(exit_request.code or 0)
    except (ParameterError, FieldError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except BenchmarkMismatchError as err:
        print(f"benchmark aborted: {err}", file=sys.stderr)
        return EXIT_FAILURE
