from dataclasses import dataclass
from typing import Optional

import torch

from tridc.core.split import decoupled_blocks
from tridc.globals import DTYPE, EPS


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in ascending order and, optionally, the matching
    orthonormal eigenvector columns."""

    eigenvalues: torch.Tensor
    vectors: Optional[torch.Tensor] = None

    @property
    def n(self) -> int:
        return self.eigenvalues.numel()

    def reconstruct(self) -> torch.Tensor:
        assert self.vectors is not None, "decomposition holds no eigenvectors"
        return (self.vectors * self.eigenvalues) @ self.vectors.transpose(0, 1)


def normalize_signs(vectors: torch.Tensor) -> torch.Tensor:
    """Make the first significant component of every column positive."""
    if vectors.numel() == 0:
        return vectors
    n = vectors.shape[0]
    mag = vectors.abs()
    thresh = n * EPS * mag.max(dim=0, keepdim=True).values
    first = torch.argmax((mag > thresh).to(torch.int8), dim=0)
    lead = vectors.gather(0, first.reshape(1, -1))
    signs = 1.0 - 2.0 * (lead < 0).to(DTYPE)
    return vectors * signs


def sorted_decomposition(eigenvalues: torch.Tensor, vectors: Optional[torch.Tensor]) -> SpectralDecomposition:
    order = torch.sort(eigenvalues, stable=True).indices
    values = eigenvalues[order]
    if vectors is None:
        return SpectralDecomposition(values)
    return SpectralDecomposition(values, normalize_signs(vectors[:, order]))


def solve_decoupled(t, solve_block) -> SpectralDecomposition:
    """Decompose a matrix with exactly zero off-diagonals block by block.

    Arguments:
        t (SymTridiag): matrix with at least one zero off-diagonal entry
        solve_block (Callable): SymTridiag -> SpectralDecomposition for one block

    Returns:
        * decomposition (SpectralDecomposition): blocks merged by sorting
    """
    n = t.n
    values = []
    vectors = torch.zeros(n, n, dtype=DTYPE)
    col = 0
    for offset, block in decoupled_blocks(t):
        dec = solve_block(block)
        values.append(dec.eigenvalues)
        vectors[offset : offset + block.n, col : col + block.n] = dec.vectors
        col += block.n
    return sorted_decomposition(torch.cat(values), vectors)
