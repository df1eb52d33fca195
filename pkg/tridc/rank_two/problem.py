from dataclasses import dataclass, field
from typing import Optional, Tuple

import torch

from tridc.core.matrix import as_vector
from tridc.core.split import ThreeWaySplit
from tridc.errors import ValidationError
from tridc.globals import DTYPE, EPS, FLOP_COUNTER
from tridc.kernels.spectral import SpectralDecomposition


@dataclass(frozen=True)
class RankTwoProblem:
    """D + beta1 v1 v1^T + beta2 v2 v2^T.

    ``silent`` lists coordinates whose pole cancels in the secular function:
    the eigenpair they carry was resolved during deflation, so root finding
    skips them. ``blocks`` holds the orders (k1, k2, k3) when the problem
    comes straight from a three-way split.
    """

    d: torch.Tensor
    v1: torch.Tensor
    v2: torch.Tensor
    beta1: float
    beta2: float
    silent: Tuple[int, ...] = ()
    blocks: Optional[Tuple[int, int, int]] = None

    def __post_init__(self):
        object.__setattr__(self, "d", as_vector(self.d))
        object.__setattr__(self, "v1", as_vector(self.v1))
        object.__setattr__(self, "v2", as_vector(self.v2))
        object.__setattr__(self, "beta1", float(self.beta1))
        object.__setattr__(self, "beta2", float(self.beta2))
        object.__setattr__(self, "silent", tuple(int(i) for i in self.silent))
        n = self.d.numel()
        assert (
            self.v1.numel() == n and self.v2.numel() == n
        ), f"d has {n} entries, v1 has {self.v1.numel()}, v2 has {self.v2.numel()}"
        if self.blocks is not None:
            assert sum(self.blocks) == n, f"blocks {self.blocks} do not add up to {n}"

    @property
    def n(self) -> int:
        return self.d.numel()

    @property
    def betas(self) -> Tuple[float, float]:
        return self.beta1, self.beta2

    @property
    def positive_betas(self) -> int:
        return int(self.beta1 > 0) + int(self.beta2 > 0)

    def to_dense(self) -> torch.Tensor:
        return (
            torch.diag(self.d)
            + self.beta1 * torch.outer(self.v1, self.v1)
            + self.beta2 * torch.outer(self.v2, self.v2)
        )

    def scale(self) -> float:
        if self.n == 0:
            return 0.0
        return max(
            float(self.d.abs().max()),
            abs(self.beta1) * float(torch.dot(self.v1, self.v1)),
            abs(self.beta2) * float(torch.dot(self.v2, self.v2)),
        )

    def default_tol(self) -> float:
        return 8.0 * EPS * self.scale()

    def weyl_bounds(self) -> Tuple[float, float]:
        """Interval containing the whole spectrum."""
        if self.n == 0:
            return 0.0, 0.0
        lo, hi = float(self.d.min()), float(self.d.max())
        for beta, v in ((self.beta1, self.v1), (self.beta2, self.v2)):
            w = beta * float(torch.dot(v, v)) * (1.0 + 8.0 * EPS)
            if w > 0:
                hi += w
            else:
                lo += w
        return lo, hi


@dataclass(frozen=True)
class BlockOrthogonal:
    """diag(Q1, Q2, Q3) kept as its blocks."""

    blocks: Tuple[torch.Tensor, ...] = field(default_factory=tuple)

    @property
    def n(self) -> int:
        return sum(q.shape[0] for q in self.blocks)

    def to_dense(self) -> torch.Tensor:
        return torch.block_diag(*self.blocks)

    def matmul(self, x: torch.Tensor) -> torch.Tensor:
        out = []
        start = 0
        for q in self.blocks:
            k = q.shape[0]
            out.append(q @ x[start : start + k])
            FLOP_COUNTER.add_matmul(k, k, x.shape[1])
            start += k
        return torch.cat(out)


def form_rank_two(
    split: ThreeWaySplit,
    dec1: SpectralDecomposition,
    dec2: SpectralDecomposition,
    dec3: SpectralDecomposition,
) -> Tuple[RankTwoProblem, BlockOrthogonal]:
    """Q^T A Q = D + beta1 v1 v1^T + beta2 v2 v2^T for Q = diag(Q1, Q2, Q3).

    v1 stacks the last row of Q1 and the first row of Q2; v2 the last row of Q2
    and the first row of Q3.
    """
    sizes = split.sizes
    for i, (dec, k) in enumerate(zip((dec1, dec2, dec3), sizes)):
        if dec.n != k or dec.vectors is None or tuple(dec.vectors.shape) != (k, k):
            raise ValidationError(f"decomposition {i + 1} does not match a block of order {k}")

    k1, k2, k3 = sizes
    zeros1 = torch.zeros(k1, dtype=DTYPE)
    zeros3 = torch.zeros(k3, dtype=DTYPE)
    d = torch.cat([dec1.eigenvalues, dec2.eigenvalues, dec3.eigenvalues])
    v1 = torch.cat([dec1.vectors[-1, :], dec2.vectors[0, :], zeros3])
    v2 = torch.cat([zeros1, dec2.vectors[-1, :], dec3.vectors[0, :]])
    problem = RankTwoProblem(d, v1, v2, split.beta1, split.beta2, blocks=sizes)
    return problem, BlockOrthogonal((dec1.vectors, dec2.vectors, dec3.vectors))
