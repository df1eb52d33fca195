from collections import defaultdict
from contextlib import contextmanager
from typing import Dict, Iterable, Optional

import torch

DTYPE = torch.float64
EPS = torch.finfo(DTYPE).eps

PHASE_DECOMPOSE = "decompose-subproblems"
PHASE_DEFLATE = "deflate"
PHASE_SECULAR = "secular"
PHASE_VECTORS = "vectors"
PHASE_OTHER = "other"

EIGENVALUE_PHASES = (PHASE_DECOMPOSE, PHASE_DEFLATE, PHASE_SECULAR)
ALL_PHASES = EIGENVALUE_PHASES + (PHASE_VECTORS, PHASE_OTHER)

FLOP_KINDS = ("adds", "muls", "divs", "sqrts")


class Singleton:
    _instance = None

    def __new__(cls, *args, **kwargs):
        if not cls._instance:
            cls._instance = super(Singleton, cls).__new__(cls, *args, **kwargs)
        return cls._instance


class FlopCounter(Singleton):
    """Operation counts of the solvers, tagged by merge phase.

    Counting is switched on by ``recording()``. Phases nest; a count is
    charged to the outermost open phase, so a child solve run inside the
    ``decompose-subproblems`` phase of a merge is charged to that phase in
    full, whatever phases the child opens itself.
    """

    def __init__(self):
        self._counts: Dict[str, Dict[str, int]] = defaultdict(lambda: dict.fromkeys(FLOP_KINDS, 0))
        self._stack = []
        self._depth = 0

    @property
    def enabled(self) -> bool:
        return self._depth > 0

    def reset(self) -> None:
        self._counts.clear()

    def add(self, adds: int = 0, muls: int = 0, divs: int = 0, sqrts: int = 0) -> None:
        if not self._depth:
            return
        bucket = self._counts[self._stack[0] if self._stack else PHASE_OTHER]
        bucket["adds"] += int(adds)
        bucket["muls"] += int(muls)
        bucket["divs"] += int(divs)
        bucket["sqrts"] += int(sqrts)

    def add_matmul(self, m: int, k: int, n: int) -> None:
        """Charge an (m x k) @ (k x n) product."""
        self.add(adds=m * n * max(k - 1, 0), muls=m * k * n)

    @contextmanager
    def phase(self, name: str):
        assert name in ALL_PHASES, f"unknown phase {name}"
        self._stack.append(name)
        try:
            yield self
        finally:
            self._stack.pop()

    @contextmanager
    def recording(self, reset: bool = True):
        if reset and not self._depth:
            self.reset()
        self._depth += 1
        try:
            yield self
        finally:
            self._depth -= 1

    def total(self, phases: Optional[Iterable[str]] = None) -> int:
        names = ALL_PHASES if phases is None else tuple(phases)
        return sum(sum(self._counts[p].values()) for p in names if p in self._counts)

    def by_phase(self) -> Dict[str, Dict[str, int]]:
        return {p: dict(kinds) for p, kinds in self._counts.items()}

    def snapshot(self) -> Dict[str, int]:
        return {
            "eigenvalues": self.total(EIGENVALUE_PHASES),
            "total": self.total(),
        }


FLOP_COUNTER = FlopCounter()
