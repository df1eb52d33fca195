from dataclasses import dataclass

import torch

from tridc.core.matrix import as_vector
from tridc.globals import EPS


@dataclass(frozen=True)
class RankOneProblem:
    """D + beta v v^T."""

    d: torch.Tensor
    v: torch.Tensor
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "d", as_vector(self.d))
        object.__setattr__(self, "v", as_vector(self.v))
        object.__setattr__(self, "beta", float(self.beta))
        assert self.d.numel() == self.v.numel(), f"d has {self.d.numel()} entries, v has {self.v.numel()}"

    @property
    def n(self) -> int:
        return self.d.numel()

    def to_dense(self) -> torch.Tensor:
        return torch.diag(self.d) + self.beta * torch.outer(self.v, self.v)

    def scale(self) -> float:
        if self.n == 0:
            return 0.0
        return max(float(self.d.abs().max()), abs(self.beta) * float(torch.dot(self.v, self.v)))

    def default_tol(self) -> float:
        return 8.0 * EPS * self.scale()
