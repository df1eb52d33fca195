from dataclasses import dataclass, replace
from typing import List

import torch

from tridc.core.matrix import SymTridiag
from tridc.core.split import default_split_three, split_three
from tridc.errors import ValidationError
from tridc.globals import DTYPE, EPS
from tridc.kernels.qr import qr_eigensolve
from tridc.rank_two.deflation import deflate_rank_two
from tridc.rank_two.intervals import CountStrategy, classify_intervals
from tridc.rank_two.problem import RankTwoProblem, form_rank_two
from tridc.rank_two.roots import secular_roots
from tridc.rank_two.secular import RankTwoSecular

POLE_MARGIN = 64.0
MAX_PLOT_ORDER = 500

CSV_HEADER = "interval_index,lambda,f,fprime,kind"


@dataclass(frozen=True)
class PlotRow:
    interval: int
    lam: float
    f: float
    fprime: float
    kind: str = "sample"

    def to_csv(self) -> str:
        return f"{self.interval},{self.lam:.17g},{self.f:.17g},{self.fprime:.17g},{self.kind}"


def merge_problem(t: SymTridiag) -> RankTwoProblem:
    """The top-level rank-two merge of ``t`` with its three blocks solved by QR."""
    if t.n < 3:
        raise ValidationError(f"a three-way split needs n >= 3, got n={t.n}")
    if t.n > MAX_PLOT_ORDER:
        raise ValidationError(f"plot data is limited to n <= {MAX_PLOT_ORDER}, got n={t.n}")
    split = split_three(t, *default_split_three(t.n), allow_zero=True)
    p, _ = form_rank_two(split, qr_eigensolve(split.t1), qr_eigensolve(split.t2), qr_eigensolve(split.t3))
    # a zero coupling contributes nothing: keep the term with a zero vector and unit weight
    if p.beta1 == 0.0:
        p = replace(p, v1=torch.zeros_like(p.v1), beta1=1.0)
    if p.beta2 == 0.0:
        p = replace(p, v2=torch.zeros_like(p.v2), beta2=1.0)
    return p


def secular_plot_data(p: RankTwoProblem, samples: int = 64) -> List[PlotRow]:
    """Samples of the reduced secular function on every interval between its poles,
    followed in each interval by one row per root."""
    assert samples >= 2, f"need at least two samples per interval, got {samples}"
    reduced = deflate_rank_two(p).reduced
    if reduced.n == 0:
        return []
    cls = classify_intervals(reduced, CountStrategy.INERTIA)
    roots = secular_roots(reduced, cls).tolist()
    ev = RankTwoSecular(reduced)

    rows = []
    for j in range(cls.m + 1):
        lo, hi = cls.interval(j)
        if j > 0:
            lo += POLE_MARGIN * EPS * max(1.0, abs(lo))
        if j < cls.m:
            hi -= POLE_MARGIN * EPS * max(1.0, abs(hi))
        if not lo < hi:
            continue
        for lam in torch.linspace(lo, hi, samples, dtype=DTYPE).tolist():
            e = ev.evaluate(lam)
            rows.append(PlotRow(j, lam, e.value, e.derivative))
        for lam in roots:
            if lo <= lam <= hi:
                e = ev.evaluate(lam)
                rows.append(PlotRow(j, lam, e.value, e.derivative, "root"))
    return rows


def format_plot_csv(rows: List[PlotRow]) -> str:
    return "\n".join([CSV_HEADER] + [row.to_csv() for row in rows]) + "\n"
