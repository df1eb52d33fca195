import torch

from tridc.globals import EPS, FLOP_COUNTER
from tridc.kernels.rootfind import SecularRoots, find_root
from tridc.rank_one.problem import RankOneProblem


def rank_one_shifted(p: RankOneProblem):
    """f(lambda) = 1 + beta * sum_q v_q^2 / (d_q - lambda) around a chosen pole."""
    w = p.beta * p.v * p.v
    n = p.n

    def at(origin: int):
        delta = p.d - p.d[origin]
        FLOP_COUNTER.add(adds=n)

        def evaluate(tau: float, derivative: bool):
            r = 1.0 / (delta - tau)
            wr = w * r
            f = 1.0 + float(wr.sum())
            FLOP_COUNTER.add(adds=2 * n, muls=n, divs=n)
            if not derivative:
                return f, 0.0
            FLOP_COUNTER.add(adds=n, muls=n)
            return f, float((wr * r).sum())

        return evaluate

    return at


def cdc_secular_roots(p: RankOneProblem, return_offsets: bool = False):
    """Roots of 1 + beta v^T (D - lambda)^{-1} v for a deflated problem.

    One root lies strictly inside each gap of d, plus one on the right of d_n
    when beta > 0 (on the left of d_1 when beta < 0), within beta ||v||^2.
    """
    n = p.n
    if n == 0:
        roots = SecularRoots.empty()
        return roots if return_offsets else roots.values

    shifted = rank_one_shifted(p)
    sign_lo = -1.0 if p.beta > 0 else 1.0
    reach = abs(p.beta) * float(torch.dot(p.v, p.v)) * (1.0 + 8.0 * EPS)
    pairs = []
    if p.beta < 0:
        pairs.append(find_root(shifted, p.d, float(p.d[0]) - reach, float(p.d[0]), sign_lo, hi_pole=0))
    for j in range(n - 1):
        pairs.append(find_root(shifted, p.d, float(p.d[j]), float(p.d[j + 1]), sign_lo, lo_pole=j, hi_pole=j + 1))
    if p.beta > 0:
        pairs.append(find_root(shifted, p.d, float(p.d[-1]), float(p.d[-1]) + reach, sign_lo, lo_pole=n - 1))

    roots = SecularRoots.from_pairs(p.d, pairs)
    return roots if return_offsets else roots.values


def rank_one_secular_value(p: RankOneProblem, lam: float) -> float:
    return 1.0 + p.beta * float((p.v * p.v / (p.d - lam)).sum())
