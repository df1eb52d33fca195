from einops import rearrange, repeat
import math

import torch

from tridc.core.matrix import SymTridiag
from tridc.globals import DTYPE, EPS
from tridc.rank_one.problem import RankOneProblem
from tridc.rank_two.problem import RankTwoProblem

BETA_SIGNS = {
    "++": (1.0, 1.0),
    "--": (-1.0, -1.0),
    "+-": (1.0, -1.0),
}


def oracle_eigvalsh(a) -> torch.Tensor:
    a = a.to_dense() if hasattr(a, "to_dense") else a
    return torch.linalg.eigvalsh(a.to(DTYPE))


def oracle_eigh(a):
    a = a.to_dense() if hasattr(a, "to_dense") else a
    return torch.linalg.eigh(a.to(DTYPE))


def two_norm(a) -> float:
    a = a.to_dense() if hasattr(a, "to_dense") else a
    return float(torch.linalg.matrix_norm(a, ord=2))


def spectrum_tolerance(a) -> float:
    """n eps ||A||_2, the per-eigenvalue agreement required between solvers."""
    a = a.to_dense() if hasattr(a, "to_dense") else a
    return a.shape[0] * EPS * max(two_norm(a), 1.0)


def max_residual(a, values: torch.Tensor, vectors: torch.Tensor) -> float:
    a = a.to_dense() if hasattr(a, "to_dense") else a
    if vectors.numel() == 0:
        return 0.0
    r = a @ vectors - vectors * rearrange(values, "k -> 1 k")
    return float(torch.linalg.vector_norm(r, dim=0).max())


def orthogonality_defect(vectors: torch.Tensor) -> float:
    k = vectors.shape[1]
    return float(torch.linalg.matrix_norm(torch.eye(k, dtype=DTYPE) - vectors.T @ vectors, ord=2))


def columns_match_up_to_sign(x: torch.Tensor, y: torch.Tensor, atol: float) -> bool:
    dots = (x * y).sum(dim=0)
    signs = torch.where(dots < 0, -1.0, 1.0).to(DTYPE)
    return bool(((x - y * rearrange(signs, "k -> 1 k")).abs() <= atol).all())


def bucket_counts(eigenvalues: torch.Tensor, poles: torch.Tensor) -> list:
    """Number of eigenvalues in each of the m + 1 intervals cut by ``poles``."""
    index = torch.bucketize(eigenvalues, poles.contiguous())
    return torch.bincount(index, minlength=poles.numel() + 1).tolist()


def random_generator(seed: int) -> torch.Generator:
    return torch.Generator().manual_seed(seed)


def uniform(n: int, gen: torch.Generator, lo: float = -1.0, hi: float = 1.0) -> torch.Tensor:
    return lo + (hi - lo) * torch.rand(n, generator=gen, dtype=DTYPE)


def random_symtridiag(n: int, seed: int) -> SymTridiag:
    gen = random_generator(seed)
    return SymTridiag(uniform(n, gen), uniform(n - 1, gen))


def integer_symtridiag(n: int, seed: int) -> SymTridiag:
    """Small integers, so every split and reassembly is exact."""
    gen = random_generator(seed)
    diag = torch.randint(-8, 9, (n,), generator=gen).to(DTYPE)
    off = torch.randint(1, 9, (n - 1,), generator=gen).to(DTYPE)
    signs = torch.where(torch.rand(n - 1, generator=gen) < 0.5, -1.0, 1.0).to(DTYPE)
    return SymTridiag(diag, off * signs)


def random_rank_one(n: int, seed: int, beta: float = 1.0, gap: float = 0.0) -> RankOneProblem:
    """Sorted distinct d; with ``gap`` > 0 the entries come in pairs that far apart."""
    gen = random_generator(seed)
    if gap > 0:
        base = torch.sort(uniform(-(-n // 2), gen)).values
        d = (repeat(base, "k -> k r", r=2) + rearrange(torch.tensor([0.0, gap], dtype=DTYPE), "r -> 1 r"))
        d = rearrange(d, "k r -> (k r)")[:n]
    else:
        d = torch.sort(uniform(n, gen)).values
    v = uniform(n, gen)
    v = v / torch.linalg.vector_norm(v)
    return RankOneProblem(d, v, beta)


def random_rank_two(
    n: int,
    seed: int,
    signs: str = "++",
    duplicates: int = 0,
    magnitude: float = 1.0,
) -> RankTwoProblem:
    """Random D + b1 v1 v1^T + b2 v2 v2^T with ``duplicates`` planted pairs of equal d.

    Planted pairs keep generic v1, v2 entries, so their 2 x 2 block has rank two
    and both copies stay in a reduced problem.
    """
    gen = random_generator(seed)
    d = torch.sort(uniform(n, gen, -2.0, 2.0)).values
    for k in range(duplicates):
        i = 2 * k
        if i + 1 < n:
            d[i + 1] = d[i]
    d = torch.sort(d).values
    v1 = uniform(n, gen)
    v2 = uniform(n, gen)
    s1, s2 = BETA_SIGNS[signs]
    b1 = s1 * magnitude * (0.25 + float(torch.rand(1, generator=gen, dtype=DTYPE)))
    b2 = s2 * magnitude * (0.25 + float(torch.rand(1, generator=gen, dtype=DTYPE)))
    return RankTwoProblem(d, v1, v2, b1, b2)


def planted_deflation_problem(seed: int, n: int = 15) -> RankTwoProblem:
    """Zero components, a cluster of 2 to 4 equal d with a rank-one block and
    a triple with a rank-two block, the rest generic. The rank-one cluster
    size cycles with the seed."""
    gen = random_generator(seed)
    d = torch.sort(uniform(n, gen, -3.0, 3.0)).values
    v1 = uniform(n, gen)
    v2 = uniform(n, gen)
    # both components zero
    v1[0] = v2[0] = 0.0
    # one component zero
    v1[1] = 0.0
    v2[2] = 0.0
    # rank-one cluster
    size = 2 + seed % 3
    d[3 : 3 + size] = float(d[3])
    v2[3 : 3 + size] = 0.5 * v1[3 : 3 + size]
    # rank-two triple
    d[9] = d[10] = d[8]
    b1 = 0.5 + float(torch.rand(1, generator=gen, dtype=DTYPE))
    b2 = -(0.5 + float(torch.rand(1, generator=gen, dtype=DTYPE)))
    return RankTwoProblem(d, v1, v2, b1, b2)


def relative_gap_below(values: torch.Tensor, threshold: float) -> bool:
    values = torch.sort(values).values
    gaps = values[1:] - values[:-1]
    return bool((gaps < threshold * float(values.abs().max())).any())


def laplacian_entry(m: int, i: int, j: int) -> float:
    h = 1.0 / (m + 1)
    return (4.0 - 2.0 * math.cos(i * math.pi * h) - 2.0 * math.cos(j * math.pi * h)) / (h * h)
