from dataclasses import dataclass
from typing import List, Tuple

import torch

from tridc.core.matrix import SymTridiag
from tridc.errors import DecoupledMatrixError

__all__ = [
    "ThreeWaySplit",
    "TwoWaySplit",
    "split_three",
    "split_two",
    "default_split_three",
    "default_split_two",
    "decoupled_blocks",
]


@dataclass(frozen=True)
class ThreeWaySplit:
    """A = diag(T1, T2, T3) + beta1 w1 w1^T + beta2 w2 w2^T.

    k1 and k2 are the orders of T1 and T2, so the cuts sit after rows k1 and
    k1 + k2 (1-based).
    """

    t1: SymTridiag
    t2: SymTridiag
    t3: SymTridiag
    beta1: float
    beta2: float
    k1: int
    k2: int

    @property
    def n(self) -> int:
        return self.t1.n + self.t2.n + self.t3.n

    @property
    def sizes(self) -> Tuple[int, int, int]:
        return self.t1.n, self.t2.n, self.t3.n

    def reassemble(self) -> torch.Tensor:
        a = torch.block_diag(self.t1.to_dense(), self.t2.to_dense(), self.t3.to_dense())
        c1, c2 = self.k1, self.k1 + self.k2
        a[c1 - 1 : c1 + 1, c1 - 1 : c1 + 1] += self.beta1
        a[c2 - 1 : c2 + 1, c2 - 1 : c2 + 1] += self.beta2
        return a


@dataclass(frozen=True)
class TwoWaySplit:
    t1: SymTridiag
    t2: SymTridiag
    beta: float
    k: int

    @property
    def n(self) -> int:
        return self.t1.n + self.t2.n

    def reassemble(self) -> torch.Tensor:
        a = torch.block_diag(self.t1.to_dense(), self.t2.to_dense())
        a[self.k - 1 : self.k + 1, self.k - 1 : self.k + 1] += self.beta
        return a


def default_split_three(n: int) -> Tuple[int, int]:
    k1 = -(-n // 3)
    k2 = -(-(n - k1) // 2)
    return k1, k2


def default_split_two(n: int) -> int:
    return -(-n // 2)


def _cut_beta(a: SymTridiag, k: int, allow_zero: bool = False) -> float:
    beta = float(a.offdiag[k - 1])
    if beta == 0.0 and not allow_zero:
        raise DecoupledMatrixError(k)
    return beta


def split_three(a: SymTridiag, k1: int, k2: int, allow_zero: bool = False) -> ThreeWaySplit:
    """Cut ``a`` after rows k1 and k1 + k2. A zero coupling raises
    DecoupledMatrixError unless ``allow_zero`` is set."""
    n = a.n
    if not (1 <= k1 and k1 + 1 <= k1 + k2 <= n - 1):
        raise ValueError(f"invalid split k1={k1}, k2={k2} for n={n}")
    beta1 = _cut_beta(a, k1, allow_zero)
    beta2 = _cut_beta(a, k1 + k2, allow_zero)

    d = a.diag.clone()
    d[k1 - 1] -= beta1
    d[k1] -= beta1
    d[k1 + k2 - 1] -= beta2
    d[k1 + k2] -= beta2
    off = a.offdiag
    t1 = SymTridiag(d[:k1].clone(), off[: k1 - 1].clone())
    t2 = SymTridiag(d[k1 : k1 + k2].clone(), off[k1 : k1 + k2 - 1].clone())
    t3 = SymTridiag(d[k1 + k2 :].clone(), off[k1 + k2 :].clone())
    return ThreeWaySplit(t1, t2, t3, beta1, beta2, k1, k2)


def split_two(a: SymTridiag, k: int) -> TwoWaySplit:
    n = a.n
    if not 1 <= k <= n - 1:
        raise ValueError(f"invalid split k={k} for n={n}")
    beta = _cut_beta(a, k)
    d = a.diag.clone()
    d[k - 1] -= beta
    d[k] -= beta
    t1 = SymTridiag(d[:k].clone(), a.offdiag[: k - 1].clone())
    t2 = SymTridiag(d[k:].clone(), a.offdiag[k:].clone())
    return TwoWaySplit(t1, t2, beta, k)


def decoupled_blocks(a: SymTridiag) -> List[Tuple[int, SymTridiag]]:
    """Independent diagonal blocks of ``a`` separated by exactly zero off-diagonals."""
    cuts = [0] + [i + 1 for i in torch.nonzero(a.offdiag == 0).reshape(-1).tolist()] + [a.n]
    return [(lo, a.block(lo, hi)) for lo, hi in zip(cuts[:-1], cuts[1:])]
