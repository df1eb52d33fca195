from tridc.core.householder import householder_tridiagonalize
from tridc.core.matrix import DenseSym
from tridc.kernels.qr import qr_eigensolve
from tridc.kernels.spectral import SpectralDecomposition, normalize_signs


def dense_eigensolve(a: DenseSym, want_vectors: bool = True) -> SpectralDecomposition:
    """Householder reduction, implicit QR, back-transformation."""
    t, q = householder_tridiagonalize(a)
    dec = qr_eigensolve(t, want_vectors=want_vectors)
    if not want_vectors:
        return dec
    return SpectralDecomposition(dec.eigenvalues, normalize_signs(q @ dec.vectors))
