"""Safeguarded root extraction for secular functions.

A root is carried as an origin pole plus an offset, lambda = d[origin] + tau.
Evaluators receive tau, so every difference lambda - d_q is formed as
(d_q - d[origin]) - tau without cancellation near the origin. Stable
eigenvector formulas rely on that accuracy.
"""
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import torch
from einops import rearrange

from tridc.errors import RootExtractionError
from tridc.globals import DTYPE, EPS

# tau -> (f, f'); f' may be 0.0 when the derivative is not requested
Evaluator = Callable[[float, bool], Tuple[float, float]]
# origin pole index -> evaluator in coordinates relative to that pole
ShiftedSecular = Callable[[int], Evaluator]

MAX_ITER = 256
# absolute floor on the bracket width, relative to the scale of the poles
FLOOR_FACTOR = EPS * EPS


@dataclass(frozen=True)
class SecularRoots:
    values: torch.Tensor
    origins: torch.Tensor
    offsets: torch.Tensor

    def __len__(self) -> int:
        return self.values.numel()

    @classmethod
    def empty(cls) -> "SecularRoots":
        return cls(
            torch.zeros(0, dtype=DTYPE), torch.zeros(0, dtype=torch.long), torch.zeros(0, dtype=DTYPE)
        )

    @classmethod
    def from_pairs(cls, poles: torch.Tensor, pairs) -> "SecularRoots":
        if not pairs:
            return cls.empty()
        origins = torch.tensor([o for o, _ in pairs], dtype=torch.long)
        offsets = torch.tensor([t for _, t in pairs], dtype=DTYPE)
        return cls(poles[origins] + offsets, origins, offsets)

    def differences(self, poles: torch.Tensor) -> torch.Tensor:
        """(n_poles x n_roots) matrix of lambda_j - d_i."""
        anchor = rearrange(poles[self.origins], "k -> 1 k") - rearrange(poles, "n -> n 1")
        return anchor + rearrange(self.offsets, "k -> 1 k")


def as_secular_roots(roots, poles: torch.Tensor) -> SecularRoots:
    """Accept plain root values and attach the nearest pole as origin."""
    if isinstance(roots, SecularRoots):
        return roots
    values = torch.as_tensor(roots, dtype=DTYPE).reshape(-1)
    if values.numel() == 0 or poles.numel() == 0:
        return SecularRoots(values, torch.zeros(values.numel(), dtype=torch.long), values.clone())
    origins = torch.argmin((rearrange(values, "k -> 1 k") - rearrange(poles, "n -> n 1")).abs(), dim=0)
    return SecularRoots(values, origins, values - poles[origins])


def _converged(lo: float, hi: float, origin_value: float, floor: float = 0.0) -> bool:
    width = hi - lo
    mid = 0.5 * (lo + hi)
    if mid <= lo or mid >= hi:
        return True
    if width <= floor:
        return True
    return width <= 2.0 * EPS * min(abs(lo) + abs(hi), 1.0 + abs(origin_value + mid))


def _rational_step(tau: float, f: float, fp: float, poles) -> Optional[float]:
    """Zero of the model C + S / (tau - delta) that matches f and f' at tau,
    delta being the nearest pole offset; Newton when no pole is given."""
    near = [p for p in poles if p is not None]
    if not fp or not math.isfinite(fp):
        return None
    if not near:
        return tau - f / fp
    delta = min(near, key=lambda p: abs(tau - p))
    gap = tau - delta
    denom = f + fp * gap
    if denom == 0.0:
        return None
    return delta + fp * gap * gap / denom


def solve_in_bracket(
    evaluate: Evaluator,
    lo: float,
    hi: float,
    sign_lo: float,
    origin_value: float,
    poles=(None, None),
    floor: float = 0.0,
) -> float:
    """Offset of the single sign change of f inside (lo, hi).

    ``sign_lo`` is the sign of f just right of ``lo``; ``poles`` are pole offsets
    the rational model may use (or None). Every iterate tightens the bracket;
    rational steps that leave it, or that failed to halve it on the previous
    iterate, are replaced by bisection. ``floor`` is an absolute width at which
    the bracket counts as converged even if the offset is not resolved to
    relative precision, as happens for a root sitting on its origin pole.
    """
    tau = 0.5 * (lo + hi)
    for _ in range(MAX_ITER):
        width = hi - lo
        f, fp = evaluate(tau, True)
        if f == 0.0:
            return tau
        if (f > 0) == (sign_lo > 0):
            lo = tau
        else:
            hi = tau
        if _converged(lo, hi, origin_value, floor):
            return 0.5 * (lo + hi)

        new = _rational_step(tau, f, fp, poles)
        if new is None or not lo < new < hi or hi - lo > 0.5 * width:
            tau = 0.5 * (lo + hi)
            continue
        step = new - tau
        if abs(step) <= 4.0 * EPS * abs(new):
            # close the bracket on the far side of the predicted root
            nudge = new + math.copysign(4.0 * EPS * max(abs(new), EPS), step)
            if lo < nudge < hi:
                fnudge, _ = evaluate(nudge, False)
                if fnudge == 0.0:
                    return nudge
                if (fnudge > 0) == (sign_lo > 0):
                    lo = nudge
                else:
                    hi = nudge
                if _converged(lo, hi, origin_value, floor):
                    return 0.5 * (lo + hi)
            if not lo < new < hi:
                new = 0.5 * (lo + hi)
        tau = new

    raise RootExtractionError(
        f"no convergence in bracket [{origin_value + lo!r}, {origin_value + hi!r}] "
        f"after {MAX_ITER} iterations"
    )


def find_root(
    shifted: ShiftedSecular,
    poles: torch.Tensor,
    lo_value: float,
    hi_value: float,
    sign_lo: float,
    lo_pole: Optional[int] = None,
    hi_pole: Optional[int] = None,
    anchor: Optional[int] = None,
) -> Tuple[int, float]:
    """Locate the root in (lo_value, hi_value), where f has exactly one sign change.

    ``lo_pole``/``hi_pole`` name the poles sitting at the bracket ends; an end
    that is not a pole (the split point of a two-root interval) is represented
    by ``anchor``, the pole nearest to it. The origin is the candidate on the
    side of the midpoint that holds the sign change.

    Returns:
        * origin (int): index of the origin pole
        * tau (float): offset of the root from poles[origin]
    """
    near_lo = lo_pole if lo_pole is not None else anchor
    near_hi = hi_pole if hi_pole is not None else anchor
    if near_lo is None and near_hi is None:
        raise RootExtractionError("no pole available as origin")
    if near_lo is None:
        near_lo = near_hi
    if near_hi is None:
        near_hi = near_lo

    half = 0.5 * (hi_value - lo_value)
    if near_lo == near_hi:
        origin = near_lo
        base = float(poles[origin])
        lo, hi = lo_value - base, hi_value - base
    else:
        base_lo, base_hi = float(poles[near_lo]), float(poles[near_hi])
        tau_mid = (lo_value - base_lo) + half
        fmid, _ = shifted(near_lo)(tau_mid, False)
        if fmid == 0.0:
            return near_lo, tau_mid
        if (fmid > 0) == (sign_lo > 0):
            origin, base = near_hi, base_hi
            lo, hi = (hi_value - base) - half, hi_value - base
        else:
            origin, base = near_lo, base_lo
            lo, hi = lo_value - base, tau_mid

    model_poles = tuple(float(poles[k]) - base for k in (lo_pole, hi_pole, anchor) if k is not None)
    scale = max(float(poles.abs().max()), abs(lo_value), abs(hi_value))
    tau = solve_in_bracket(shifted(origin), lo, hi, sign_lo, base, model_poles or (None, None), FLOOR_FACTOR * scale)
    return origin, tau
