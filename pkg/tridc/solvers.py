from enum import Enum
from functools import partial

from tridc.core.matrix import SymTridiag
from tridc.kernels.qr import qr_eigensolve
from tridc.kernels.spectral import SpectralDecomposition
from tridc.rank_one.cdc import cdc_solve
from tridc.rank_two.intervals import CountStrategy
from tridc.rank_two.rtdc import rtdc_solve


class SolverType(Enum):
    QR = "qr"
    CDC = "cdc"
    RTDC = "rtdc"
    RTDC_NAIVE = "rtdc-naive"

    @classmethod
    def from_string(cls, s: str):
        for member in cls:
            if member.value == s:
                return member
        raise ValueError(f"'{s}' is not a valid {cls.__name__}")


def _qr(t: SymTridiag, base_cutoff: int = 25, count_strategy: CountStrategy = CountStrategy.INERTIA):
    return qr_eigensolve(t)


def _cdc(t: SymTridiag, base_cutoff: int = 25, count_strategy: CountStrategy = CountStrategy.INERTIA):
    return cdc_solve(t, base_cutoff)


def _rtdc(t: SymTridiag, base_cutoff: int = 25, count_strategy: CountStrategy = CountStrategy.INERTIA, stable: bool = True):
    return rtdc_solve(t, base_cutoff, stable=stable, count_strategy=count_strategy)


SOLVER_DICT = {
    "qr": _qr,
    "cdc": _cdc,
    "rtdc": _rtdc,
    "rtdc-naive": partial(_rtdc, stable=False),
}


def select_solver_impl(solver_type: SolverType):
    if solver_type == SolverType.QR:
        return _qr
    elif solver_type == SolverType.CDC:
        return _cdc
    elif solver_type == SolverType.RTDC:
        return _rtdc
    elif solver_type == SolverType.RTDC_NAIVE:
        return SOLVER_DICT["rtdc-naive"]
    else:
        raise ValueError(f"Unknown solver type: {solver_type}")


def solve(
    t: SymTridiag,
    solver="rtdc",
    base_cutoff: int = 25,
    count_strategy: CountStrategy = CountStrategy.INERTIA,
) -> SpectralDecomposition:
    """Decompose ``t`` with the named solver (a SolverType or its string value)."""
    if isinstance(solver, str):
        solver = SolverType.from_string(solver)
    return select_solver_impl(solver)(t, base_cutoff=base_cutoff, count_strategy=count_strategy)
