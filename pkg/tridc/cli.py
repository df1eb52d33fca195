import argparse
import sys
from enum import Enum
from typing import List, Optional

import torch

from tridc.core.generators import glued_wilkinson, laplacian_2d, random_tridiag
from tridc.core.householder import householder_tridiagonalize
from tridc.core.io import Matrix, format_matrix, read_matrix
from tridc.core.matrix import DenseSym, SymTridiag
from tridc.errors import ParseError, SolverError, TridcError, ValidationError
from tridc.metrics.bench import OutputFormat, format_csv, format_table, run_benchmark
from tridc.metrics.measures import orthogonality_measure, residual_measure
from tridc.rank_two.plotdata import format_plot_csv, merge_problem, secular_plot_data
from tridc.solvers import SolverType, solve

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_SOLVER = 3
EXIT_IO = 4

VERIFY_THRESHOLD = 5.0


class MatrixKind(Enum):
    LAPLACIAN = "laplacian"
    RANDOM_TRIDIAG = "random-tridiag"
    GLUED = "glued"

    @classmethod
    def from_string(cls, s: str):
        for member in cls:
            if member.value == s:
                return member
        raise ValueError(f"'{s}' is not a valid {cls.__name__}")


def generate_matrix(kind: MatrixKind, size: int, seed: int = 0) -> Matrix:
    if size < 1:
        raise ValidationError(f"size must be positive, got {size}")
    if kind == MatrixKind.LAPLACIAN:
        return laplacian_2d(size)
    elif kind == MatrixKind.RANDOM_TRIDIAG:
        return random_tridiag(size, seed)
    elif kind == MatrixKind.GLUED:
        return glued_wilkinson(size, seed)
    else:
        raise ValueError(f"Unknown matrix kind: {kind}")


def load_tridiagonal(path: str) -> SymTridiag:
    matrix = read_matrix(path)
    if isinstance(matrix, DenseSym):
        matrix, _ = householder_tridiagonalize(matrix)
    return matrix


def _int_list(text: str) -> List[int]:
    try:
        values = [int(tok) for tok in text.split(",") if tok]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _solver_list(text: str) -> List[str]:
    names = [tok for tok in text.split(",") if tok]
    for name in names:
        try:
            SolverType.from_string(name)
        except ValueError as e:
            raise argparse.ArgumentTypeError(str(e))
    if not names:
        raise argparse.ArgumentTypeError("empty list")
    return names


def _solver_name(args) -> str:
    if args.naive_vectors and args.solver == SolverType.RTDC.value:
        return SolverType.RTDC_NAIVE.value
    return args.solver


def _add_solver_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--solver",
        type=str,
        default="rtdc",
        choices=[s.value for s in SolverType],
        help="eigensolver",
    )
    parser.add_argument(
        "--naive-vectors",
        action="store_true",
        default=False,
        help="rtdc eigenvectors from the direct formula instead of two rank-one merges",
    )
    parser.add_argument("--base-cutoff", type=int, default=25, help="order solved directly by QR")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tridc", description="symmetric tridiagonal eigensolvers")
    parser.add_argument("--threads", type=int, default=None, help="cap on torch intra-op threads")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write a test matrix")
    gen.add_argument("kind", type=str, choices=[k.value for k in MatrixKind])
    gen.add_argument("size", type=int, help="order, or grid side m for laplacian")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("-o", "--output", type=str, default=None, help="output path, stdout if omitted")

    solve_p = sub.add_parser("solve", help="print the eigenvalues of a matrix file")
    solve_p.add_argument("path", type=str)
    _add_solver_args(solve_p)
    solve_p.add_argument("--vectors-out", type=str, default=None, help="write eigenvectors, one row per line")

    verify = sub.add_parser("verify", help="residual and orthogonality check")
    verify.add_argument("path", type=str)
    _add_solver_args(verify)

    bench = sub.add_parser("bench", help="accuracy table on 2D Laplacians")
    bench.add_argument("--sizes", type=_int_list, default=[9, 25, 100])
    bench.add_argument("--solvers", type=_solver_list, default=["qr", "cdc", "rtdc"])
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--base-cutoff", type=int, default=25)
    bench.add_argument("--format", type=str, default="table", choices=[f.value for f in OutputFormat])

    plot = sub.add_parser("plotdata", help="samples of the top-level secular function")
    plot.add_argument("path", type=str)
    plot.add_argument("--samples", type=int, default=64, help="samples per interval")
    return parser


def cmd_gen(args) -> int:
    matrix = generate_matrix(MatrixKind.from_string(args.kind), args.size, args.seed)
    text = format_matrix(matrix)
    if args.output is None:
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as f:
            f.write(text)
    return EXIT_OK


def cmd_solve(args) -> int:
    t = load_tridiagonal(args.path)
    dec = solve(t, _solver_name(args), base_cutoff=args.base_cutoff)
    sys.stdout.write("".join("%.17g\n" % v for v in dec.eigenvalues.tolist()))
    if args.vectors_out is not None:
        with open(args.vectors_out, "w") as f:
            for row in dec.vectors.tolist():
                f.write(" ".join("%.17g" % v for v in row) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    t = load_tridiagonal(args.path)
    name = _solver_name(args)
    dec = solve(t, name, base_cutoff=args.base_cutoff)
    r = residual_measure(t, dec)
    o = orthogonality_measure(dec)
    ok = r <= VERIFY_THRESHOLD and o <= VERIFY_THRESHOLD
    print(f"solver {name} n {t.n}")
    print(f"residual {r:.6g}")
    print(f"orthogonality {o:.6g}")
    print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_bench(args) -> int:
    reports = run_benchmark(args.sizes, args.solvers, seed=args.seed, base_cutoff=args.base_cutoff)
    if OutputFormat.from_string(args.format) == OutputFormat.CSV:
        sys.stdout.write(format_csv(reports))
    else:
        sys.stdout.write(format_table(reports))
    return EXIT_OK


def cmd_plotdata(args) -> int:
    if args.samples < 2:
        raise ValidationError(f"--samples must be at least 2, got {args.samples}")
    p = merge_problem(load_tridiagonal(args.path))
    sys.stdout.write(format_plot_csv(secular_plot_data(p, args.samples)))
    return EXIT_OK


COMMAND_DICT = {
    "gen": cmd_gen,
    "solve": cmd_solve,
    "verify": cmd_verify,
    "bench": cmd_bench,
    "plotdata": cmd_plotdata,
}


def _error(message: str, code: int) -> int:
    print(f"tridc: error: {message}", file=sys.stderr)
    return code


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    if args.threads is not None:
        if args.threads < 1:
            return _error(f"--threads must be positive, got {args.threads}", EXIT_USAGE)
        torch.set_num_threads(args.threads)

    try:
        return COMMAND_DICT[args.command](args)
    except (ParseError, ValidationError) as e:
        return _error(str(e), EXIT_USAGE)
    except SolverError as e:
        return _error(f"{type(e).__name__}: {e}", EXIT_SOLVER)
    except TridcError as e:
        return _error(str(e), EXIT_USAGE)
    except OSError as e:
        return _error(str(e), EXIT_IO)


if __name__ == "__main__":
    sys.exit(main())
