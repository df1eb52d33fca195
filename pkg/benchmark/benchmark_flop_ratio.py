import argparse
import time

import torch

from tridc.metrics import flop_ratio

parser = argparse.ArgumentParser(description="args for benchmark.")

parser.add_argument(
    "--sizes",
    type=int,
    nargs="+",
    default=[100, 400, 900],
    help="Laplacian orders, each a perfect square",
)
parser.add_argument(
    "--base_cutoff",
    type=int,
    default=None,
    help="order solved directly by QR, defaults to ceil(n/2)",
)
parser.add_argument("--threads", type=int, default=1, help="torch intra-op threads")

args = parser.parse_args()


def color_print(text):
    print("\033[91m {}\033[00m".format(text))


if __name__ == "__main__":
    torch.set_num_threads(args.threads)
    for n in args.sizes:
        start = time.perf_counter()
        ratio, rtdc_flops, cdc_flops = flop_ratio(n, base_cutoff=args.base_cutoff)
        elapsed = time.perf_counter() - start
        color_print(
            f"n {n} rtdc {rtdc_flops} cdc {cdc_flops} ratio {ratio:.3f} (4/9 = {4 / 9:.3f}) {elapsed:.2f} s"
        )
