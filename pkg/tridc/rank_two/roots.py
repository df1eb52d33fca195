from typing import List, Tuple

import torch

from tridc.errors import RootExtractionError
from tridc.globals import DTYPE
from tridc.kernels.rootfind import SecularRoots, find_root
from tridc.logger import init_logger
from tridc.rank_two.intervals import IntervalClassification
from tridc.rank_two.problem import RankTwoProblem
from tridc.rank_two.secular import RankTwoSecular

logger = init_logger(__name__)


def _nearest(cls: IntervalClassification, value: float) -> int:
    return int(torch.argmin((cls.poles - value).abs()))


def secular_roots(p: RankTwoProblem, cls: IntervalClassification, return_offsets: bool = False):
    """Extract the roots of the rank-two secular function, interval by interval.

    A one-root interval is a single bracket between its ends. A two-root
    interval is cut at its split point and each half holds one sign change;
    a split point flagged as coalesced is returned twice.

    Returns:
        * roots (Tensor or SecularRoots): ascending; with ``return_offsets`` every
          root also carries the reduced coordinate it is measured from
    """
    if sum(cls.counts) != p.n - len(p.silent):
        raise RootExtractionError(
            f"classification predicts {sum(cls.counts)} roots, problem needs {p.n - len(p.silent)}"
        )
    ev = RankTwoSecular(p)
    poles = cls.poles
    m = cls.m

    def shifted(j: int):
        return ev.shifted(float(poles[j]))

    pairs: List[Tuple[int, float]] = []
    for j, count in enumerate(cls.counts):
        if count == 0:
            continue
        lo, hi = cls.interval(j)
        lo_pole = j - 1 if j > 0 else None
        hi_pole = j if j < m else None
        sign_lo = cls.sign_right_of(j)
        try:
            if count == 1:
                pairs.append(find_root(shifted, poles, lo, hi, sign_lo, lo_pole, hi_pole))
                continue

            sigma = cls.split_points[j]
            if sigma is None:
                raise RootExtractionError("two-root interval without a split point")
            if cls.coalesced[j]:
                origin = _nearest(cls, sigma)
                tau = sigma - float(poles[origin])
                pairs.extend([(origin, tau), (origin, tau)])
                continue
            anchor = _nearest(cls, sigma)
            pairs.append(find_root(shifted, poles, lo, sigma, sign_lo, lo_pole, None, anchor=anchor))
            f_sigma = ev.evaluate(sigma, derivative=False).value
            sign_mid = 1.0 if f_sigma > 0 else -1.0
            pairs.append(find_root(shifted, poles, sigma, hi, sign_mid, None, hi_pole, anchor=anchor))
        except RootExtractionError as e:
            raise RootExtractionError(f"interval {j} ({lo!r}, {hi!r}) with {count} root(s): {e}") from e

    if not pairs:
        roots = SecularRoots.empty()
        return roots if return_offsets else roots.values
    origins = torch.tensor([o for o, _ in pairs], dtype=torch.long)
    offsets = torch.tensor([t for _, t in pairs], dtype=DTYPE)
    values = poles[origins] + offsets
    roots = SecularRoots(values, cls.representatives[origins], offsets)
    logger.debug(f"rank-two secular roots: {len(pairs)} in {m + 1} intervals")
    return roots if return_offsets else roots.values
