from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional

import torch
from einops import rearrange

from tridc.globals import DTYPE, EPS, FLOP_COUNTER
from tridc.kernels.basis import DeflationBasis
from tridc.logger import init_logger
from tridc.rank_two.problem import RankTwoProblem

logger = init_logger(__name__)

# resolved vectors must satisfy ||M x - d x|| <= RESIDUAL_FACTOR * n * eps * scale
RESIDUAL_FACTOR = 64.0
DISCRIMINANT_FACTOR = 8.0


class DeflationCase(Enum):
    NULL_BOTH = "null-both"
    NULL_V1 = "null-v1"
    NULL_V2 = "null-v2"
    REPEATED_RANK2 = "repeated-rank2"
    REPEATED_RANK1_ORTHOGONAL = "repeated-rank1-orthogonal"
    REPEATED_RANK1_DISCRIMINANT = "repeated-rank1-discriminant"
    NOT_DEFLATED = "not-deflated"

    @classmethod
    def from_string(cls, s: str):
        for member in cls:
            if member.value == s:
                return member
        raise ValueError(f"'{s}' is not a valid {cls.__name__}")


@dataclass(frozen=True)
class ResolvedPair:
    value: float
    vector: torch.Tensor
    case: DeflationCase
    # position in the reduced problem when the pair came from a discriminant test
    silent_index: Optional[int] = None


@dataclass
class RankTwoDeflation:
    """Outcome of deflating D + beta1 v1 v1^T + beta2 v2 v2^T.

    ``keep`` lists the coordinates of the deflated basis that make up the
    reduced problem, ``cases`` labels every coordinate of that basis.
    """

    resolved: List[ResolvedPair]
    reduced: RankTwoProblem
    keep: torch.Tensor
    basis: DeflationBasis
    cases: List[DeflationCase]

    @property
    def perm(self) -> torch.Tensor:
        return self.basis.perm

    @property
    def n(self) -> int:
        return self.basis.n

    @property
    def resolved_values(self) -> torch.Tensor:
        return torch.tensor([pair.value for pair in self.resolved], dtype=DTYPE)

    def resolved_vectors(self) -> torch.Tensor:
        if not self.resolved:
            return torch.zeros(self.n, 0, dtype=DTYPE)
        return torch.stack([pair.vector for pair in self.resolved], dim=1)

    def case_counts(self) -> Dict[str, int]:
        counts = {}
        for case in self.cases:
            counts[case.value] = counts.get(case.value, 0) + 1
        return counts


def _cluster(d: torch.Tensor, alive: List[int], tol: float) -> List[List[int]]:
    groups = []
    for i in alive:
        if groups and float(d[i]) - float(d[groups[-1][0]]) <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def _discriminant(terms: torch.Tensor, lead: torch.Tensor, n: int) -> torch.Tensor:
    """Rows of terms summed into lead - sum; True where the sum cancels to roundoff."""
    value = lead - terms.sum(dim=1)
    magnitude = lead.abs() + terms.abs().sum(dim=1)
    return value.abs() <= DISCRIMINANT_FACTOR * n * EPS * magnitude


def _null_component_vector(i, d, coupled, other, alive):
    """Eigenvector for d_i when the coordinate misses the ``coupled`` direction.

    x_q = coupled_q / (d_i - d_q) off i; x_i makes x orthogonal to ``other``.
    """
    at = alive.index(i)
    idx = torch.tensor(alive, dtype=torch.long)
    gap = d[i] - d[idx]
    gap[at] = 1.0
    x = coupled[idx] / gap
    x[at] = 0.0
    x[at] = -torch.dot(other[idx], x) / other[i]
    return x


def _rank_one_cluster_vector(e, d, v1, v2, beta1, beta2, alive):
    idx = torch.tensor(alive, dtype=torch.long)
    at = alive.index(e)
    gap = d[e] - d[idx]
    gap[at] = 1.0
    x = (beta2 / v1[e]) * (v1[e] * v2[idx] - v2[e] * v1[idx]) / gap
    x[at] = 0.0
    x[at] = -beta2 * v2[e] / (beta1 * v1[e] * v1[e]) - torch.dot(v1[idx], x) / v1[e]
    return x


def deflate_rank_two(p: RankTwoProblem, tol: Optional[float] = None) -> RankTwoDeflation:
    """Read off every eigenpair of D + beta1 v1 v1^T + beta2 v2 v2^T that needs no
    secular solve.

    Coordinates are processed in ascending order of d:

    * a coordinate with both components negligible is an eigenvector;
    * a cluster of equal d is rotated by a column-pivoted QR of its p x 2 block
      of (v1, v2) entries, leaving p - rank coordinates free of both vectors;
    * a lone coordinate missing one of the two vectors, and the survivor of a
      rank-one cluster, are kept but marked silent when their discriminant
      vanishes; the matching eigenvector is built explicitly and checked.

    A component is negligible when |beta| ||v|| |v_i| <= tol.
    """
    if tol is None:
        tol = p.default_tol()
    n = p.n
    order = torch.sort(p.d, stable=True).indices
    basis = DeflationBasis(order)
    d = p.d[order].clone()
    v1 = p.v1[order].clone()
    v2 = p.v2[order].clone()
    beta1, beta2 = p.beta1, p.beta2
    w1 = abs(beta1) * float(torch.linalg.vector_norm(v1))
    w2 = abs(beta2) * float(torch.linalg.vector_norm(v2))

    small1 = w1 * v1.abs() <= tol
    small2 = w2 * v2.abs() <= tol
    v1[small1] = 0.0
    v2[small2] = 0.0
    cases = [DeflationCase.NOT_DEFLATED] * n
    gone = (small1 & small2).tolist()
    for i in range(n):
        if gone[i]:
            cases[i] = DeflationCase.NULL_BOTH
    FLOP_COUNTER.add(adds=2 * n, muls=4 * n, sqrts=2)

    alive = [i for i in range(n) if not gone[i]]
    rank_one_survivors = []
    for group in _cluster(d, alive, tol):
        if len(group) < 2:
            continue
        size = len(group)
        idx = torch.tensor(group, dtype=torch.long)
        d[idx] = d[idx].mean()
        block = torch.stack([v1[idx], v2[idx]], dim=1)
        weights = (w1, w2)
        norms = [weights[k] * float(torch.linalg.vector_norm(block[:, k])) for k in range(2)]
        pivot = 0 if norms[0] >= norms[1] else 1
        other = 1 - pivot
        q, r = torch.linalg.qr(block[:, [pivot, other]], mode="complete")
        FLOP_COUNTER.add(adds=4 * size * size, muls=4 * size * size, divs=2, sqrts=2)
        basis.rotate(idx, q)

        pivot_col = torch.zeros(size, dtype=DTYPE)
        other_col = torch.zeros(size, dtype=DTYPE)
        pivot_col[0] = r[0, 0]
        other_col[0] = r[0, 1]
        other_col[1] = r[1, 1]
        rank = 2 if weights[other] * abs(float(other_col[1])) > tol else 1
        if rank == 1:
            other_col[1] = 0.0
            if weights[other] * abs(float(other_col[0])) <= tol:
                other_col[0] = 0.0
                case = DeflationCase.NULL_V1 if other == 0 else DeflationCase.NULL_V2
            else:
                case = DeflationCase.REPEATED_RANK1_ORTHOGONAL
                rank_one_survivors.append(group[0])
        else:
            case = DeflationCase.REPEATED_RANK2
        cols = (pivot_col, other_col) if pivot == 0 else (other_col, pivot_col)
        v1[idx], v2[idx] = cols
        for i in group[rank:]:
            gone[i] = True
            cases[i] = case

    alive = [i for i in range(n) if not gone[i]]
    counts = {}
    for i in alive:
        key = float(d[i])
        counts[key] = counts.get(key, 0) + 1
    lone = [i for i in alive if counts[float(d[i])] == 1]
    scale = p.scale()
    silent = {}

    def accept(i, x, case):
        idx = torch.tensor(alive, dtype=torch.long)
        x = x / torch.linalg.vector_norm(x)
        residual = (
            d[idx] * x
            + beta1 * v1[idx] * torch.dot(v1[idx], x)
            + beta2 * v2[idx] * torch.dot(v2[idx], x)
            - d[i] * x
        )
        FLOP_COUNTER.add(adds=6 * len(alive), muls=8 * len(alive), divs=len(alive), sqrts=2)
        if float(torch.linalg.vector_norm(residual)) > RESIDUAL_FACTOR * len(alive) * EPS * scale:
            logger.debug(f"discriminant vector for d={float(d[i])!r} failed its residual check")
            return
        silent[i] = (x, case)

    alive_t = torch.tensor(alive, dtype=torch.long)
    for target, coupled, beta, case in (
        ([i for i in lone if v1[i] == 0.0 and v2[i] != 0.0], v1, beta1, DeflationCase.NULL_V1),
        ([i for i in lone if v2[i] == 0.0 and v1[i] != 0.0], v2, beta2, DeflationCase.NULL_V2),
    ):
        if not target:
            continue
        rows = torch.tensor(target, dtype=torch.long)
        gap = rearrange(d[rows], "k -> k 1") - rearrange(d[alive_t], "m -> 1 m")
        own = rearrange(rows, "k -> k 1") == rearrange(alive_t, "m -> 1 m")
        gap[own] = 1.0
        terms = beta * rearrange(coupled[alive_t] ** 2, "m -> 1 m") / gap
        terms[own] = 0.0
        FLOP_COUNTER.add(adds=3 * terms.numel(), muls=2 * terms.numel(), divs=terms.numel())
        hits = _discriminant(terms, torch.ones(len(target), dtype=DTYPE), len(alive))
        other_vec = v2 if coupled is v1 else v1
        for i, hit in zip(target, hits.tolist()):
            if hit:
                accept(i, _null_component_vector(i, d, coupled, other_vec, alive), case)

    for e in rank_one_survivors:
        if counts[float(d[e])] != 1 or v1[e] == 0.0 or v2[e] == 0.0:
            continue
        idx = alive_t[alive_t != e]
        # the residue of the secular function at d_e
        terms = torch.cat(
            [
                beta1 * beta2 * (v1[idx] * v2[e] - v1[e] * v2[idx]) ** 2 / (d[idx] - d[e]),
                (beta1 * v1[e] ** 2).reshape(1),
                (beta2 * v2[e] ** 2).reshape(1),
            ]
        )
        FLOP_COUNTER.add(adds=3 * idx.numel(), muls=5 * idx.numel(), divs=idx.numel())
        hit = _discriminant(rearrange(terms, "m -> 1 m"), torch.zeros(1, dtype=DTYPE), len(alive))
        if bool(hit[0]):
            vector = _rank_one_cluster_vector(e, d, v1, v2, beta1, beta2, alive)
            accept(e, vector, DeflationCase.REPEATED_RANK1_DISCRIMINANT)

    resolved = []
    gone_positions = [i for i in range(n) if gone[i]]
    if gone_positions:
        k = len(gone_positions)
        vectors = basis.embed(torch.tensor(gone_positions, dtype=torch.long), torch.eye(k, dtype=DTYPE))
        for j, i in enumerate(gone_positions):
            resolved.append(ResolvedPair(float(d[i]), vectors[:, j], cases[i]))
    silent_positions = []
    for i in sorted(silent):
        x, case = silent[i]
        at = alive.index(i)
        cases[i] = case
        silent_positions.append(at)
        vector = basis.embed(alive_t, rearrange(x, "m -> m 1"))[:, 0]
        resolved.append(ResolvedPair(float(d[i]), vector, case, silent_index=at))

    reduced = RankTwoProblem(d[alive_t], v1[alive_t], v2[alive_t], beta1, beta2, silent=tuple(silent_positions))
    deflation = RankTwoDeflation(resolved, reduced, alive_t, basis, cases)
    logger.debug(f"rank-two deflation: n={n}, reduced={reduced.n}, cases={deflation.case_counts()}")
    return deflation
