import argparse

import torch

from tridc import FLOP_COUNTER
from tridc.globals import EIGENVALUE_PHASES
from tridc.metrics import format_table, run_benchmark

parser = argparse.ArgumentParser(description="args for benchmark.")

parser.add_argument(
    "--sizes",
    type=int,
    nargs="+",
    default=[9, 25, 100, 400],
    help="Laplacian orders, each a perfect square",
)
parser.add_argument(
    "--solvers",
    type=str,
    nargs="+",
    default=["qr", "cdc", "rtdc"],
    choices=["qr", "cdc", "rtdc", "rtdc-naive"],
    help="solvers to compare",
)
parser.add_argument("--seed", type=int, default=0, help="power iteration seed")
parser.add_argument("--base_cutoff", type=int, default=25, help="order solved directly by QR")
parser.add_argument("--threads", type=int, default=1, help="torch intra-op threads")
parser.add_argument(
    "--by_phase",
    action="store_true",
    default=False,
    help="print the flop breakdown of the last solve",
)

args = parser.parse_args()


def color_print(text):
    print("\033[91m {}\033[00m".format(text))


if __name__ == "__main__":
    torch.set_num_threads(args.threads)
    color_print(f"sizes {args.sizes} solvers {args.solvers} base_cutoff {args.base_cutoff}")
    reports = run_benchmark(args.sizes, args.solvers, seed=args.seed, base_cutoff=args.base_cutoff)
    print(format_table(reports))

    failed = [r for r in reports if r.error is not None]
    for r in failed:
        color_print(f"FAILED {r.solver} n={r.n}: {r.error}")
    worst = max((max(r.residual, r.orthogonality) for r in reports if r.error is None), default=float("nan"))
    color_print(f"worst measure {worst:.3f}")

    if args.by_phase:
        for phase, kinds in FLOP_COUNTER.by_phase().items():
            tag = "eig" if phase in EIGENVALUE_PHASES else "vec"
            print(f"{phase:>22} [{tag}] {kinds}")
