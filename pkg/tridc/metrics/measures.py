from typing import Union

import torch

from tridc.core.matrix import DenseSym, SymTridiag
from tridc.globals import DTYPE, EPS
from tridc.kernels.spectral import SpectralDecomposition

POWER_ITERS = 200
POWER_RTOL = 1e-6


def _dense(a) -> torch.Tensor:
    if isinstance(a, (SymTridiag, DenseSym)):
        return a.to_dense()
    return torch.as_tensor(a, dtype=DTYPE)


def spectral_norm(a, iters: int = POWER_ITERS, rtol: float = POWER_RTOL, seed: int = 0) -> float:
    """||a||_2 by power iteration on a^T a from a seeded random start."""
    a = _dense(a)
    if a.numel() == 0:
        return 0.0
    gen = torch.Generator().manual_seed(seed)
    x = torch.rand(a.shape[1], generator=gen, dtype=DTYPE) - 0.5
    x = x / torch.linalg.vector_norm(x)
    estimate = 0.0
    for _ in range(iters):
        y = a.transpose(0, 1) @ (a @ x)
        norm = float(torch.linalg.vector_norm(y))
        if norm == 0.0:
            return 0.0
        x = y / norm
        previous, estimate = estimate, norm ** 0.5
        if abs(estimate - previous) <= rtol * estimate:
            break
    return estimate


def residual_measure(a: Union[SymTridiag, DenseSym, torch.Tensor], dec: SpectralDecomposition, seed: int = 0) -> float:
    """||A Q - Q L||_2 / (n eps ||A||_2)."""
    a = _dense(a)
    n = a.shape[0]
    assert dec.vectors is not None and tuple(dec.vectors.shape) == (n, n), "decomposition does not match the matrix"
    q = dec.vectors
    residual = spectral_norm(a @ q - q * dec.eigenvalues, seed=seed)
    norm = spectral_norm(a, seed=seed)
    if norm == 0.0:
        return 0.0 if residual == 0.0 else float("inf")
    return residual / (n * EPS * norm)


def orthogonality_measure(dec: Union[SpectralDecomposition, torch.Tensor], seed: int = 0) -> float:
    """||I - Q^T Q||_2 / (n eps)."""
    q = dec.vectors if isinstance(dec, SpectralDecomposition) else torch.as_tensor(dec, dtype=DTYPE)
    n = q.shape[1]
    if n == 0:
        return 0.0
    return spectral_norm(torch.eye(n, dtype=DTYPE) - q.transpose(0, 1) @ q, seed=seed) / (n * EPS)
