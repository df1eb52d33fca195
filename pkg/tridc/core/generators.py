"""Test matrices: the 2D Poisson Laplacian and random / glued tridiagonals."""
import math

import torch
from einops import rearrange

from tridc.core.matrix import DenseSym, SymTridiag
from tridc.globals import DTYPE

__all__ = [
    "laplacian_2d",
    "laplacian_eigenvalues",
    "random_tridiag",
    "wilkinson_plus",
    "glued_wilkinson",
]


def _second_difference(m: int, diag: float) -> torch.Tensor:
    a = diag * torch.eye(m, dtype=DTYPE)
    if m > 1:
        off = -torch.ones(m - 1, dtype=DTYPE)
        a = a + torch.diag(off, 1) + torch.diag(off, -1)
    return a


def laplacian_2d(m: int) -> DenseSym:
    """Five-point Laplacian on an m x m interior grid, scaled by 1/h^2 with h = 1/(m+1).

    Row blocks are B = tridiag(-1, 4, -1) coupled to their neighbours by -I,
    giving an SPD matrix of order m^2.
    """
    if m < 1:
        raise ValueError(f"invalid grid size: {m}")
    h = 1.0 / (m + 1)
    eye = torch.eye(m, dtype=DTYPE)
    a = torch.kron(eye, _second_difference(m, 4.0)) + torch.kron(_second_difference(m, 0.0), eye)
    return DenseSym(a / (h * h))


def laplacian_eigenvalues(m: int) -> torch.Tensor:
    h = 1.0 / (m + 1)
    k = torch.arange(1, m + 1, dtype=DTYPE)
    c = 2.0 - 2.0 * torch.cos(k * math.pi * h)
    lam = rearrange(rearrange(c, "i -> i 1") + rearrange(c, "j -> 1 j"), "i j -> (i j)") / (h * h)
    return torch.sort(lam).values


def random_tridiag(n: int, seed: int = 0) -> SymTridiag:
    """Entries uniform in [-1, 1]."""
    gen = torch.Generator().manual_seed(seed)
    diag = torch.rand(n, generator=gen, dtype=DTYPE) * 2 - 1
    off = torch.rand(max(n - 1, 0), generator=gen, dtype=DTYPE) * 2 - 1
    return SymTridiag(diag, off)


def wilkinson_plus(order: int) -> SymTridiag:
    half = (order - 1) / 2.0
    diag = (torch.arange(order, dtype=DTYPE) - half).abs()
    return SymTridiag(diag, torch.ones(order - 1, dtype=DTYPE))


def glued_wilkinson(n: int, seed: int = 0, glue: float = 1e-12, block: int = 21) -> SymTridiag:
    """Copies of W+ of order ``block`` joined by off-diagonal entries of size ~``glue``.

    The last copy is truncated to fit n. Each W+ already carries eigenvalue
    pairs separated by far less than 1e-10 of its norm, and the glue couples
    copies with near-identical spectra.
    """
    if n < 1:
        raise ValueError(f"invalid order: {n}")
    gen = torch.Generator().manual_seed(seed)
    w = wilkinson_plus(block)
    reps = -(-n // block)
    diag = w.diag.repeat(reps)[:n]
    off = torch.cat([torch.cat([w.offdiag, torch.zeros(1, dtype=DTYPE)])] * reps)[: n - 1]
    joints = torch.arange(block - 1, n - 1, block)
    off[joints] = glue * (1.0 + torch.rand(joints.numel(), generator=gen, dtype=DTYPE))
    return SymTridiag(diag, off)
