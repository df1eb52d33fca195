"""The rank-two secular function

    f(lambda) = beta1 beta2 (c1 c2 - c3^2) - beta1 c1 - beta2 c2 + 1,
    c1 = v1^T u1, c2 = v2^T u2, c3 = v1^T u2, u_k = (lambda I - D)^{-1} v_k,

whose roots are the eigenvalues of D + beta1 v1 v1^T + beta2 v2 v2^T that are
not diagonal entries. Sums only run over the supports of v1, v2 and v1 * v2,
which after a three-way split are two thirds, two thirds and one third of the
coordinates.
"""
import math
from dataclasses import dataclass
from typing import Tuple

import torch
from einops import rearrange

from tridc.errors import PoleError
from tridc.globals import EPS, FLOP_COUNTER
from tridc.kernels.rootfind import Evaluator
from tridc.rank_two.problem import RankTwoProblem


@dataclass(frozen=True)
class SecularEvaluation:
    value: float
    derivative: float


def _combine(beta1, beta2, c1, c2, c3, dc1=0.0, dc2=0.0, dc3=0.0) -> Tuple[float, float]:
    f = beta1 * beta2 * (c1 * c2 - c3 * c3) - beta1 * c1 - beta2 * c2 + 1.0
    fp = beta1 * beta2 * (dc1 * c2 + c1 * dc2 - 2.0 * c3 * dc3) - beta1 * dc1 - beta2 * dc2
    return f, fp


class RankTwoSecular:
    """Evaluator of f and f' restricted to the supports of the vectors."""

    def __init__(self, p: RankTwoProblem):
        self.p = p
        nz1 = p.v1 != 0
        nz2 = p.v2 != 0
        union = nz1 | nz2
        self.index = torch.nonzero(union).reshape(-1)
        self.d = p.d[self.index]
        v1 = p.v1[self.index]
        v2 = p.v2[self.index]
        self.pos1 = torch.nonzero(nz1[self.index]).reshape(-1)
        self.pos2 = torch.nonzero(nz2[self.index]).reshape(-1)
        self.pos12 = torch.nonzero((nz1 & nz2)[self.index]).reshape(-1)
        self.w1 = v1[self.pos1] ** 2
        self.w2 = v2[self.pos2] ** 2
        self.w3 = v1[self.pos12] * v2[self.pos12]
        self._sizes = (self.index.numel(), self.pos1.numel(), self.pos2.numel(), self.pos12.numel())
        FLOP_COUNTER.add(muls=sum(self._sizes[1:]))

    def _sums(self, r: torch.Tensor, derivative: bool):
        _, n1, n2, n12 = self._sizes
        r1, r2, r3 = r[self.pos1], r[self.pos2], r[self.pos12]
        c1 = float(torch.dot(self.w1, r1))
        c2 = float(torch.dot(self.w2, r2))
        c3 = float(torch.dot(self.w3, r3))
        FLOP_COUNTER.add(adds=n1 + n2 + n12 + 6, muls=n1 + n2 + n12 + 5)
        if not derivative:
            return c1, c2, c3, 0.0, 0.0, 0.0
        dc1 = -float(torch.dot(self.w1, r1 * r1))
        dc2 = -float(torch.dot(self.w2, r2 * r2))
        dc3 = -float(torch.dot(self.w3, r3 * r3))
        FLOP_COUNTER.add(adds=n1 + n2 + n12 + 5, muls=2 * (n1 + n2 + n12) + 6)
        return c1, c2, c3, dc1, dc2, dc3

    def shifted(self, origin_value: float) -> Evaluator:
        """Evaluator in the offset tau = lambda - origin_value."""
        delta = self.d - origin_value
        nu = self._sizes[0]
        FLOP_COUNTER.add(adds=nu)
        beta1, beta2 = self.p.beta1, self.p.beta2

        def evaluate(tau: float, derivative: bool):
            r = 1.0 / (tau - delta)
            FLOP_COUNTER.add(adds=nu, divs=nu)
            return _combine(beta1, beta2, *self._sums(r, derivative))

        return evaluate

    def evaluate(self, lam: float, derivative: bool = True) -> SecularEvaluation:
        r = 1.0 / (lam - self.d)
        FLOP_COUNTER.add(adds=self._sizes[0], divs=self._sizes[0])
        f, fp = _combine(self.p.beta1, self.p.beta2, *self._sums(r, derivative))
        return SecularEvaluation(f, fp)

    @property
    def support_size(self) -> int:
        return self._sizes[0]

    def sums(self, lam: float) -> Tuple[float, float, float]:
        r = 1.0 / (lam - self.d)
        return self._sums(r, False)[:3]


def _check_pole(p: RankTwoProblem, lam: float) -> None:
    if p.n == 0:
        return
    gap = (p.d - lam).abs()
    near = gap <= EPS * torch.clamp(p.d.abs(), min=abs(lam))
    if bool(near.any()):
        i = int(torch.nonzero(near)[0])
        raise PoleError(f"lambda={lam!r} coincides with the pole d[{i}]={float(p.d[i])!r}")


def secular_eval(p: RankTwoProblem, lam: float) -> SecularEvaluation:
    """f(lambda) and f'(lambda) for lambda off the poles."""
    lam = float(lam)
    _check_pole(p, lam)
    return RankTwoSecular(p).evaluate(lam)


def secular_determinant(p: RankTwoProblem, mu: float) -> float:
    """det(D - mu I + beta1 v1 v1^T + beta2 v2 v2^T) through the product identity
    prod_i (d_i - mu) f(mu), with the pairwise sum formed explicitly."""
    mu = float(mu)
    _check_pole(p, mu)
    gap = p.d - mu
    single = ((p.beta1 * p.v1 ** 2 + p.beta2 * p.v2 ** 2) / gap).sum()
    cross = (
        rearrange(p.v1, "n -> n 1") * rearrange(p.v2, "n -> 1 n")
        - rearrange(p.v1, "n -> 1 n") * rearrange(p.v2, "n -> n 1")
    ) ** 2 / (rearrange(gap, "n -> n 1") * rearrange(gap, "n -> 1 n"))
    pairs = 0.5 * cross.sum()
    return float(torch.prod(gap) * (1.0 + single + p.beta1 * p.beta2 * pairs))


def _negative_eigenvalues(a: float, b: float, c: float) -> int:
    mean = 0.5 * (a + c)
    radius = math.hypot(0.5 * (a - c), b)
    return int(mean - radius < 0) + int(mean + radius < 0)


def eigenvalue_count(p: RankTwoProblem, sigma: float, evaluator: RankTwoSecular = None) -> int:
    """Number of eigenvalues of D + beta1 v1 v1^T + beta2 v2 v2^T below sigma.

    Sylvester inertia on [[D - sigma, V], [V^T, -B^{-1}]] gives
    #{d < sigma} + neg(T(sigma)) - #{beta > 0} with
    T = [[c1 - 1/beta1, c3], [c3, c2 - 1/beta2]].
    """
    sigma = float(sigma)
    _check_pole(p, sigma)
    if evaluator is None:
        evaluator = RankTwoSecular(p)
    c1, c2, c3 = evaluator.sums(sigma)
    below = int((p.d < sigma).sum())
    FLOP_COUNTER.add(adds=p.n + evaluator.support_size + 6, divs=evaluator.support_size + 2, muls=4, sqrts=1)
    neg = _negative_eigenvalues(c1 - 1.0 / p.beta1, c3, c2 - 1.0 / p.beta2)
    return below + neg - p.positive_betas
