import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import List, Optional, Tuple

import torch
from einops import rearrange

from tridc.errors import ClassificationError, PoleError
from tridc.globals import DTYPE, EPS, FLOP_COUNTER
from tridc.logger import init_logger
from tridc.rank_two.problem import RankTwoProblem
from tridc.rank_two.secular import RankTwoSecular, eigenvalue_count

logger = init_logger(__name__)

GRID_POINTS = 8
ESCALATION = 4
ESCALATIONS = 2
MAX_BISECT = 200


class IntervalLabel(Enum):
    S_PLUS = "S+"
    S_MINUS = "S-"
    EXTERIOR = "exterior"

    @classmethod
    def from_string(cls, s: str):
        for member in cls:
            if member.value == s:
                return member
        raise ValueError(f"'{s}' is not a valid {cls.__name__}")


class CountStrategy(Enum):
    INERTIA = "inertia"
    STATIONARY = "stationary"

    @classmethod
    def from_string(cls, s: str):
        for member in cls:
            if member.value == s:
                return member
        raise ValueError(f"'{s}' is not a valid {cls.__name__}")


@dataclass(frozen=True)
class IntervalClassification:
    """Poles of the secular function and the number of roots between them.

    ``poles`` are the distinct non-silent diagonal values P_0 < ... < P_{m-1};
    interval j runs from P_{j-1} to P_j, interval 0 and interval m being the
    exterior ones, cut at ``bounds``. ``gplus``/``gminus`` hold the coefficients
    of the one-sided limits of f at each pole.
    """

    poles: torch.Tensor
    multiplicity: torch.Tensor
    representatives: torch.Tensor
    gplus: torch.Tensor
    gminus: torch.Tensor
    bounds: Tuple[float, float]
    labels: Tuple[IntervalLabel, ...] = ()
    counts: Tuple[int, ...] = ()
    split_points: Tuple[Optional[float], ...] = ()
    coalesced: Tuple[bool, ...] = ()
    strategy: Optional[CountStrategy] = None

    @property
    def m(self) -> int:
        return self.poles.numel()

    @property
    def predicted_counts(self) -> Tuple[int, ...]:
        return self.counts

    @property
    def total(self) -> int:
        return sum(self.counts)

    def is_multiple(self, j: int) -> bool:
        return int(self.multiplicity[j]) > 1

    def interval(self, j: int) -> Tuple[float, float]:
        lo = float(self.poles[j - 1]) if j > 0 else self.bounds[0]
        hi = float(self.poles[j]) if j < self.m else self.bounds[1]
        return lo, hi

    def sign_right_of(self, j: int) -> float:
        """Sign of f just above the lower end of interval j."""
        if j == 0:
            return 1.0
        return 1.0 if float(self.gplus[j - 1]) > 0 else -1.0


def g_signs(p: RankTwoProblem) -> IntervalClassification:
    """One-sided limit coefficients of f at every non-silent pole.

    For a simple pole d_i, g+ is the residue
    -beta1 beta2 sum_{q != i} (v1_q v2_i - v1_i v2_q)^2 / (d_q - d_i) - beta1 v1_i^2 - beta2 v2_i^2
    and g- = -g+; for a double pole g+ = g- = beta1 beta2.
    """
    silent = set(p.silent)
    poles, mult, reps = [], [], []
    for i in range(p.n):
        if i in silent:
            continue
        value = float(p.d[i])
        if poles and value == poles[-1]:
            mult[-1] += 1
            if mult[-1] > 2:
                raise ClassificationError(f"pole {value!r} appears {mult[-1]} times, at most two allowed")
        else:
            poles.append(value)
            mult.append(1)
            reps.append(i)

    m = len(poles)
    mult_t = torch.tensor(mult, dtype=torch.long)
    reps_t = torch.tensor(reps, dtype=torch.long)
    beta12 = p.beta1 * p.beta2
    gplus = torch.full((m,), beta12, dtype=DTYPE)
    gminus = torch.full((m,), beta12, dtype=DTYPE)

    simple = torch.nonzero(mult_t == 1).reshape(-1)
    if simple.numel():
        rows = reps_t[simple]
        gap = rearrange(p.d, "n -> 1 n") - rearrange(p.d[rows], "k -> k 1")
        skip = gap == 0
        gap[skip] = 1.0
        cross = (
            rearrange(p.v1, "n -> 1 n") * rearrange(p.v2[rows], "k -> k 1")
            - rearrange(p.v1[rows], "k -> k 1") * rearrange(p.v2, "n -> 1 n")
        ) ** 2 / gap
        cross[skip] = 0.0
        value = -beta12 * cross.sum(dim=1) - p.beta1 * p.v1[rows] ** 2 - p.beta2 * p.v2[rows] ** 2
        gplus[simple] = value
        gminus[simple] = -value
        FLOP_COUNTER.add(adds=4 * cross.numel() + 3 * rows.numel(), muls=3 * cross.numel() + 5 * rows.numel(), divs=cross.numel())

    return IntervalClassification(
        torch.tensor(poles, dtype=DTYPE), mult_t, reps_t, gplus, gminus, p.weyl_bounds()
    )


def _labels(cls: IntervalClassification) -> Tuple[IntervalLabel, ...]:
    m = cls.m
    labels = [IntervalLabel.EXTERIOR]
    for j in range(1, m):
        if float(cls.gplus[j - 1]) * float(cls.gminus[j]) < 0:
            labels.append(IntervalLabel.S_MINUS)
        else:
            labels.append(IntervalLabel.S_PLUS)
    if m > 0:
        labels.append(IntervalLabel.EXTERIOR)
    return tuple(labels)


def _valid(counts, target: int) -> bool:
    return counts is not None and all(c in (0, 1, 2) for c in counts) and sum(counts) == target


def inertia_counts(p: RankTwoProblem, cls: IntervalClassification) -> List[int]:
    """Per-interval root counts from the limits of the eigenvalue count at each pole."""
    m = cls.m
    if m == 0:
        return [0]
    sign12 = 1.0 if p.beta1 * p.beta2 > 0 else -1.0
    above = [int(sign12 * float(g) > 0) for g in cls.gminus]
    below = [int(sign12 * float(g) < 0) for g in cls.gplus]
    pos = p.positive_betas
    counts = [1 + above[0] - pos]
    counts += [1 + above[j] - below[j - 1] for j in range(1, m)]
    counts.append(pos - below[m - 1])
    return counts


def _inertia_split(p: RankTwoProblem, ev: RankTwoSecular, cls: IntervalClassification, j: int):
    """Point separating the two roots of interval j, by bisection on the eigenvalue count."""
    lo, hi = cls.interval(j)
    start = lo
    if j == 0:
        base = 0
    else:
        sign12 = 1.0 if p.beta1 * p.beta2 > 0 else -1.0
        base = int((p.d <= lo).sum()) + int(sign12 * float(cls.gplus[j - 1]) < 0) - p.positive_betas
    silent = p.d[list(p.silent)] if p.silent else torch.zeros(0, dtype=DTYPE)

    for _ in range(MAX_BISECT):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi or hi - lo <= 4.0 * EPS * (1.0 + abs(mid)):
            break
        try:
            found = eigenvalue_count(p, mid, ev) - base - int(((silent > start) & (silent < mid)).sum())
        except PoleError as e:
            raise ClassificationError(f"interval {j} ({start!r}, {cls.interval(j)[1]!r}): {e}") from e
        if found == 1:
            return mid, False
        if found < 1:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), True


def _sign(x: float) -> float:
    return 1.0 if x > 0 else (-1.0 if x < 0 else 0.0)


def _chebyshev(lo: float, hi: float, k: int) -> List[float]:
    theta = torch.arange(1, k + 1, dtype=DTYPE).mul(2.0).sub(1.0).mul(math.pi / (2 * k))
    return (lo + (hi - lo) * 0.5 * (1.0 - torch.cos(theta))).tolist()


def _stationary_split(ev: RankTwoSecular, lo: float, hi: float, left: float, right: float, s: float, grid_points: int, n: int):
    """Look for a stationary point of f in (lo, hi) where f has the sign opposite to s.

    ``left``/``right`` are the signs of f' next to the ends.
    """
    xs = [lo] + _chebyshev(lo, hi, grid_points) + [hi]
    signs = [left] + [_sign(ev.evaluate(x).derivative) for x in xs[1:-1]] + [right]
    for k in range(len(xs) - 1):
        if signs[k] * signs[k + 1] >= 0 and signs[k] != 0:
            continue
        a, b, sa = xs[k], xs[k + 1], signs[k]
        if sa == 0:
            a = b = xs[k]
        for _ in range(MAX_BISECT):
            mid = 0.5 * (a + b)
            if mid <= a or mid >= b:
                break
            sm = _sign(ev.evaluate(mid).derivative)
            if sm == 0:
                a = b = mid
                break
            if sm == sa:
                a = mid
            else:
                b = mid
        lam0 = 0.5 * (a + b)
        if lam0 <= lo or lam0 >= hi:
            continue
        f = ev.evaluate(lam0, derivative=False).value
        if s * f < 0:
            return lam0, False
        c1, c2, c3 = ev.sums(lam0)
        p = ev.p
        magnitude = 1.0 + abs(p.beta1 * c1) + abs(p.beta2 * c2) + abs(p.beta1 * p.beta2) * (abs(c1 * c2) + c3 * c3)
        if abs(f) <= 8.0 * n * EPS * magnitude:
            return lam0, True
    return None, False


def _exterior_table(cls: IntervalClassification, pos: int) -> Optional[Tuple[int, int]]:
    a = -float(cls.gminus[0])
    b = -float(cls.gplus[cls.m - 1])
    if a > 0 and b > 0:
        return 1, 1
    if a < 0 and b > 0:
        return 0, 1
    if a > 0 and b < 0:
        return 1, 0
    if a < 0 and b < 0:
        if pos == 2:
            return 0, 2
        if pos == 0:
            return 2, 0
        return 0, 0
    return None


def stationary_counts(p: RankTwoProblem, ev: RankTwoSecular, cls: IntervalClassification, labels, grid_points: int):
    m = cls.m
    if m == 0:
        return [0], [None], [False]
    counts = [0] * (m + 1)
    splits: List[Optional[float]] = [None] * (m + 1)
    coalesced = [False] * (m + 1)
    for j in range(1, m):
        if labels[j] == IntervalLabel.S_MINUS:
            counts[j] = 1
            continue
        s = _sign(float(cls.gplus[j - 1]))
        lo, hi = cls.interval(j)
        lam0, double = _stationary_split(ev, lo, hi, -s, s, s, grid_points, p.n)
        if lam0 is not None:
            counts[j], splits[j], coalesced[j] = 2, lam0, double

    table = _exterior_table(cls, p.positive_betas)
    if table is None:
        return None, None, None
    counts[0], counts[m] = table
    if counts[0] == 2:
        lo, hi = cls.interval(0)
        left = _sign(ev.evaluate(lo).derivative)
        lam0, double = _stationary_split(ev, lo, hi, left, _sign(float(cls.gminus[0])), 1.0, grid_points, p.n)
        if lam0 is None:
            return None, None, None
        splits[0], coalesced[0] = lam0, double
    if counts[m] == 2:
        lo, hi = cls.interval(m)
        right = _sign(ev.evaluate(hi).derivative)
        lam0, double = _stationary_split(ev, lo, hi, -_sign(float(cls.gplus[m - 1])), right, 1.0, grid_points, p.n)
        if lam0 is None:
            return None, None, None
        splits[m], coalesced[m] = lam0, double
    return counts, splits, coalesced


def classify_intervals(
    p: RankTwoProblem,
    strategy: CountStrategy = CountStrategy.INERTIA,
    grid_points: int = GRID_POINTS,
) -> IntervalClassification:
    """Count the roots of the secular function in every interval between its poles.

    Interior intervals whose limits have opposite signs (S-) hold exactly one
    root, the others (S+) hold none or two. With ``CountStrategy.INERTIA`` the
    counts follow from the eigenvalue count on either side of every pole and
    two-root intervals are split by bisection on that count. With
    ``CountStrategy.STATIONARY`` the two-root S+ intervals are found by the sign
    of f at a stationary point located on a Chebyshev grid and the
    exterior intervals by the signs of their limits and of beta1, beta2.
    """
    cls = g_signs(p)
    labels = _labels(cls)
    target = p.n - len(p.silent)
    ev = RankTwoSecular(p)

    counts = splits = coalesced = None
    if strategy == CountStrategy.STATIONARY:
        k = grid_points
        for attempt in range(ESCALATIONS + 1):
            counts, splits, coalesced = stationary_counts(p, ev, cls, labels, k)
            if _valid(counts, target):
                break
            k *= ESCALATION
        else:
            logger.warning(
                f"stationary-point classification inconsistent after {ESCALATIONS} escalations "
                f"(m={cls.m}, target={target}), falling back to inertia counts"
            )
            counts = None

    if counts is None:
        counts = inertia_counts(p, cls)
        if not _valid(counts, target):
            raise ClassificationError(
                f"interval counts {counts} do not add up to {target} roots "
                f"(poles={cls.poles.tolist()}, g+={cls.gplus.tolist()})"
            )
        splits = [None] * len(counts)
        coalesced = [False] * len(counts)
        for j, count in enumerate(counts):
            if count == 2:
                splits[j], coalesced[j] = _inertia_split(p, ev, cls, j)

    return replace(
        cls,
        labels=labels,
        counts=tuple(counts),
        split_points=tuple(splits),
        coalesced=tuple(coalesced),
        strategy=strategy,
    )
