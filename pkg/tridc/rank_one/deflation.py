import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import torch

from tridc.globals import DTYPE, FLOP_COUNTER
from tridc.kernels.basis import DeflationBasis
from tridc.logger import init_logger
from tridc.rank_one.problem import RankOneProblem

logger = init_logger(__name__)


@dataclass
class RankOneDeflation:
    """Outcome of deflating D + beta v v^T.

    ``keep`` lists the surviving coordinates of the deflated basis (d strictly
    increasing); ``resolved_positions`` the coordinates whose eigenpair is read off
    directly, with eigenvalue ``resolved_values``.
    """

    keep: torch.Tensor
    resolved_positions: torch.Tensor
    resolved_values: torch.Tensor
    basis: DeflationBasis

    @property
    def perm(self) -> torch.Tensor:
        return self.basis.perm

    @property
    def givens(self):
        return self.basis.rotations

    def resolved_vectors(self) -> torch.Tensor:
        k = self.resolved_positions.numel()
        return self.basis.embed(self.resolved_positions, torch.eye(k, dtype=DTYPE))

    @property
    def resolved(self) -> List[Tuple[float, torch.Tensor]]:
        vectors = self.resolved_vectors()
        return [(float(lam), vectors[:, j]) for j, lam in enumerate(self.resolved_values)]


def cdc_deflate(p: RankOneProblem, tol: Optional[float] = None) -> Tuple[RankOneDeflation, RankOneProblem]:
    """Remove zero components of v and collapse (nearly) equal entries of d.

    A component deflates when |beta| ||v|| |v_i| <= tol. Neighbouring survivors
    i < j are merged by a Givens rotation that zeroes v_i whenever the dropped
    coupling |c s (d_j - d_i)| is at most tol.
    """
    if tol is None:
        tol = p.default_tol()
    n = p.n
    order = torch.sort(p.d, stable=True).indices
    basis = DeflationBasis(order)
    d = p.d[order].tolist()
    v = p.v[order].tolist()
    vnorm = math.sqrt(sum(x * x for x in v))
    weight = abs(p.beta) * vnorm

    deflated = [weight * abs(x) <= tol for x in v]
    rotated = 0
    prev = None
    for j in range(n):
        if deflated[j]:
            continue
        if prev is None:
            prev = j
            continue
        r = math.hypot(v[prev], v[j])
        c, s = v[j] / r, v[prev] / r
        if abs(c * s * (d[j] - d[prev])) <= tol:
            d_prev, d_j = d[prev], d[j]
            d[prev] = c * c * d_prev + s * s * d_j
            d[j] = s * s * d_prev + c * c * d_j
            v[prev], v[j] = 0.0, r
            basis.rotate([prev, j], torch.tensor(((c, s), (-s, c)), dtype=DTYPE))
            deflated[prev] = True
            rotated += 1
        prev = j
    FLOP_COUNTER.add(adds=3 * n + 2 * rotated, muls=5 * n + 8 * rotated, divs=2 * n, sqrts=n + 1)

    keep = [j for j in range(n) if not deflated[j]]
    keep.sort(key=lambda j: d[j])
    gone = [j for j in range(n) if deflated[j]]
    d_t = torch.tensor(d, dtype=DTYPE)
    v_t = torch.tensor(v, dtype=DTYPE)
    keep_t = torch.tensor(keep, dtype=torch.long)
    gone_t = torch.tensor(gone, dtype=torch.long)

    logger.debug(f"rank-one deflation: n={n}, zero components={len(gone) - rotated}, rotations={rotated}")
    deflation = RankOneDeflation(keep_t, gone_t, d_t[gone_t], basis)
    return deflation, RankOneProblem(d_t[keep_t], v_t[keep_t], p.beta)
