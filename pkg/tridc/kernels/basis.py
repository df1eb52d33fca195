from dataclasses import dataclass, field
from typing import List, Tuple

import torch

from tridc.globals import DTYPE, FLOP_COUNTER


@dataclass
class DeflationBasis:
    """Orthogonal change of coordinates built up during deflation.

    Deflated coordinates y relate to the original ones by
    x[perm] = H_1 H_2 ... H_r y, every H_i acting on a handful of
    coordinates only, so mapping k vectors back costs O(sum p_i^2 k).
    """

    perm: torch.Tensor
    rotations: List[Tuple[torch.Tensor, torch.Tensor]] = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.perm.numel()

    def rotate(self, index, matrix: torch.Tensor) -> None:
        self.rotations.append((torch.as_tensor(index, dtype=torch.long), matrix.to(DTYPE)))

    def apply(self, y: torch.Tensor) -> torch.Tensor:
        z = y.clone()
        for index, matrix in reversed(self.rotations):
            z[index] = matrix @ z[index]
            FLOP_COUNTER.add_matmul(matrix.shape[0], matrix.shape[1], z.shape[1] if z.dim() > 1 else 1)
        x = torch.empty_like(z)
        x[self.perm] = z
        return x

    def embed(self, positions: torch.Tensor, columns: torch.Tensor) -> torch.Tensor:
        """Map vectors given on the coordinates ``positions`` back to the original basis."""
        y = torch.zeros(self.n, columns.shape[1], dtype=DTYPE)
        y[positions] = columns
        return self.apply(y)
