from dataclasses import dataclass

import torch

from tridc.errors import ValidationError
from tridc.globals import DTYPE


def as_vector(values) -> torch.Tensor:
    return torch.as_tensor(values, dtype=DTYPE).reshape(-1)


@dataclass(frozen=True)
class SymTridiag:
    """Symmetric tridiagonal matrix stored as its diagonal and off-diagonal.

    Arguments:
        diag (Tensor): the n diagonal entries
        offdiag (Tensor): the n-1 entries of the sub/super-diagonal
    """

    diag: torch.Tensor
    offdiag: torch.Tensor

    def __post_init__(self):
        object.__setattr__(self, "diag", as_vector(self.diag))
        object.__setattr__(self, "offdiag", as_vector(self.offdiag))
        if self.diag.numel() < 1:
            raise ValidationError("a SymTridiag needs order n >= 1")
        if self.offdiag.numel() != self.diag.numel() - 1:
            raise ValidationError(
                f"offdiag has {self.offdiag.numel()} entries, expected {self.diag.numel() - 1}"
            )

    @property
    def n(self) -> int:
        return self.diag.numel()

    def to_dense(self) -> torch.Tensor:
        a = torch.diag(self.diag)
        if self.n > 1:
            a = a + torch.diag(self.offdiag, 1) + torch.diag(self.offdiag, -1)
        return a

    def block(self, start: int, stop: int) -> "SymTridiag":
        return SymTridiag(self.diag[start:stop].clone(), self.offdiag[start : stop - 1].clone())

    @classmethod
    def from_dense(cls, a: torch.Tensor) -> "SymTridiag":
        a = torch.as_tensor(a, dtype=DTYPE)
        return cls(torch.diagonal(a).clone(), torch.diagonal(a, -1).clone())


@dataclass(frozen=True)
class DenseSym:
    entries: torch.Tensor

    def __post_init__(self):
        a = torch.as_tensor(self.entries, dtype=DTYPE)
        if a.dim() != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise ValidationError(f"expected a non-empty square matrix, got shape {tuple(a.shape)}")
        if not torch.equal(a, a.transpose(0, 1)):
            i, j = torch.nonzero(a != a.transpose(0, 1))[0].tolist()
            raise ValidationError(f"matrix is not symmetric: entries[{i}][{j}] != entries[{j}][{i}]")
        object.__setattr__(self, "entries", a)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def to_dense(self) -> torch.Tensor:
        return self.entries
