import math
import time
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

from tridc.core.generators import laplacian_2d
from tridc.core.householder import householder_tridiagonalize
from tridc.errors import SolverError, ValidationError
from tridc.globals import EIGENVALUE_PHASES, FLOP_COUNTER
from tridc.logger import init_logger
from tridc.metrics.measures import orthogonality_measure, residual_measure
from tridc.rank_one.cdc import cdc_solve
from tridc.rank_two.rtdc import rtdc_solve
from tridc.solvers import SolverType, solve

logger = init_logger(__name__)

CSV_COLUMNS = ("n", "solver", "residual", "orthogonality", "flops_eigenvalues", "flops_total", "wall_ms")


class OutputFormat(Enum):
    TABLE = "table"
    CSV = "csv"

    @classmethod
    def from_string(cls, s: str):
        for member in cls:
            if member.value == s:
                return member
        raise ValueError(f"'{s}' is not a valid {cls.__name__}")


@dataclass(frozen=True)
class AccuracyReport:
    n: int
    solver: str
    residual: float
    orthogonality: float
    flops_eigenvalues: int
    flops_total: int
    wall_time: float
    error: Optional[str] = None

    @property
    def wall_ms(self) -> float:
        return 1000.0 * self.wall_time

    @property
    def flops(self) -> Tuple[int, int]:
        return self.flops_eigenvalues, self.flops_total


def _grid(n: int) -> int:
    m = math.isqrt(n)
    if m < 1 or m * m != n:
        raise ValidationError(f"benchmark sizes are Laplacian orders m^2, got {n}")
    return m


def laplacian_tridiagonal(n: int):
    t, _ = householder_tridiagonalize(laplacian_2d(_grid(n)))
    return t


def run_benchmark(
    sizes: Sequence[int],
    solvers: Sequence[str],
    seed: int = 0,
    base_cutoff: int = 25,
) -> List[AccuracyReport]:
    """Accuracy and flop counts of each solver on the tridiagonalized Laplacians.

    Arguments:
        sizes (list): matrix orders, each a perfect square m^2
        solvers (list): names from SolverType
        seed (int): seed of the power iterations behind the measures

    Returns:
        * reports (list): one AccuracyReport per (size, solver), sizes outermost
    """
    kinds = [SolverType.from_string(s) for s in solvers]
    reports = []
    for n in sizes:
        t = laplacian_tridiagonal(n)
        for kind in kinds:
            start = time.perf_counter()
            try:
                with FLOP_COUNTER.recording():
                    dec = solve(t, kind, base_cutoff=base_cutoff)
                    flops = FLOP_COUNTER.snapshot()
            except SolverError as e:
                logger.error(f"{kind.value} failed on n={n}: {e}")
                reports.append(
                    AccuracyReport(n, kind.value, math.nan, math.nan, 0, 0, time.perf_counter() - start, str(e))
                )
                continue
            wall = time.perf_counter() - start
            reports.append(
                AccuracyReport(
                    n,
                    kind.value,
                    residual_measure(t, dec, seed=seed),
                    orthogonality_measure(dec, seed=seed),
                    flops["eigenvalues"],
                    flops["total"],
                    wall,
                )
            )
    return reports


def flop_ratio(n: int, seed: int = 0, base_cutoff: Optional[int] = None) -> Tuple[float, int, int]:
    """Eigenvalue-phase flops of RTDC over CDC on the n-point Laplacian.

    The default cutoff ceil(n/2) makes both solvers split once and solve their
    blocks by implicit QR.
    """
    t = laplacian_tridiagonal(n)
    if base_cutoff is None:
        base_cutoff = -(-n // 2)
    with FLOP_COUNTER.recording():
        rtdc_solve(t, base_cutoff)
        rtdc_flops = FLOP_COUNTER.total(EIGENVALUE_PHASES)
    with FLOP_COUNTER.recording():
        cdc_solve(t, base_cutoff)
        cdc_flops = FLOP_COUNTER.total(EIGENVALUE_PHASES)
    logger.info(f"flop ratio n={n}: rtdc={rtdc_flops} cdc={cdc_flops}")
    return rtdc_flops / cdc_flops, rtdc_flops, cdc_flops


def format_csv(reports: Sequence[AccuracyReport]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for r in reports:
        lines.append(
            f"{r.n},{r.solver},{r.residual:.17g},{r.orthogonality:.17g},"
            f"{r.flops_eigenvalues},{r.flops_total},{r.wall_ms:.3f}"
        )
    return "\n".join(lines) + "\n"


def format_table(reports: Sequence[AccuracyReport]) -> str:
    header = ("n", "solver", "R", "O", "flops(eig)", "flops(total)", "wall ms")
    rows = [
        (
            str(r.n),
            r.solver,
            f"{r.residual:.3f}",
            f"{r.orthogonality:.3f}",
            str(r.flops_eigenvalues),
            str(r.flops_total),
            f"{r.wall_ms:.1f}",
        )
        for r in reports
    ]
    widths = [max(len(row[i]) for row in [header] + rows) for i in range(len(header))]
    lines = ["  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in [header] + rows]
    return "\n".join(lines) + "\n"
