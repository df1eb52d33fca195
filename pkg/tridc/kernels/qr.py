import math

import torch

from tridc.core.matrix import SymTridiag
from tridc.errors import ConvergenceError
from tridc.globals import DTYPE, EPS, FLOP_COUNTER
from tridc.kernels.spectral import SpectralDecomposition, sorted_decomposition

SWEEPS_PER_ROW = 30


def _wilkinson_shift(a: float, b: float, c: float) -> float:
    """Eigenvalue of [[a, c], [c, b]] closer to b."""
    delta = (a - b) / 2.0
    sign = 1.0 if delta >= 0 else -1.0
    return b - c * c / (delta + sign * math.hypot(delta, c))


def qr_eigensolve(t: SymTridiag, want_vectors: bool = True) -> SpectralDecomposition:
    """Implicit symmetric QR with Wilkinson shifts.

    The bulge chase runs on Python floats; when vectors are wanted the same
    rotations are applied to the rows of the accumulated transpose, so the
    eigenvalues do not depend on ``want_vectors``.
    """
    n = t.n
    d = t.diag.tolist()
    e = t.offdiag.tolist()
    zt = torch.eye(n, dtype=DTYPE) if want_vectors else None

    sweeps = 0
    hi = n - 1
    while hi > 0:
        for i in range(hi):
            if e[i] != 0.0 and abs(e[i]) <= EPS * (abs(d[i]) + abs(d[i + 1])):
                e[i] = 0.0
        while hi > 0 and e[hi - 1] == 0.0:
            hi -= 1
        if hi == 0:
            break
        lo = hi - 1
        while lo > 0 and e[lo - 1] != 0.0:
            lo -= 1

        sweeps += 1
        if sweeps > SWEEPS_PER_ROW * n:
            raise ConvergenceError(f"implicit QR did not converge after {sweeps - 1} sweeps (n={n})")

        mu = _wilkinson_shift(d[hi - 1], d[hi], e[hi - 1])
        x = d[lo] - mu
        z = e[lo]
        for k in range(lo, hi):
            r = math.hypot(x, z)
            if r == 0.0:
                c, s = 1.0, 0.0
            else:
                c, s = x / r, z / r
            if k > lo:
                e[k - 1] = r
            a, b, f = d[k], d[k + 1], e[k]
            cs = c * s
            d[k] = c * c * a + 2.0 * cs * f + s * s * b
            d[k + 1] = s * s * a - 2.0 * cs * f + c * c * b
            e[k] = cs * (b - a) + (c * c - s * s) * f
            if k < hi - 1:
                z = s * e[k + 1]
                e[k + 1] = c * e[k + 1]
                x = e[k]
            if zt is not None:
                g = torch.tensor(((c, s), (-s, c)), dtype=DTYPE)
                zt[k : k + 2] = g @ zt[k : k + 2]

        rotations = hi - lo
        FLOP_COUNTER.add(adds=9 * rotations + 3, muls=16 * rotations + 2, divs=2 * rotations + 1, sqrts=rotations + 1)
        if zt is not None:
            FLOP_COUNTER.add(adds=2 * n * rotations, muls=4 * n * rotations)

    eigenvalues = torch.tensor(d, dtype=DTYPE)
    vectors = zt.transpose(0, 1).contiguous() if zt is not None else None
    return sorted_decomposition(eigenvalues, vectors)
