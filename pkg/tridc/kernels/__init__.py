from .spectral import SpectralDecomposition, normalize_signs, sorted_decomposition, solve_decoupled
from .qr import qr_eigensolve
from .dense import dense_eigensolve
from .rootfind import SecularRoots, as_secular_roots, find_root, solve_in_bracket
from .basis import DeflationBasis

__all__ = [
    "SpectralDecomposition",
    "normalize_signs",
    "sorted_decomposition",
    "solve_decoupled",
    "qr_eigensolve",
    "dense_eigensolve",
    "SecularRoots",
    "as_secular_roots",
    "find_root",
    "solve_in_bracket",
    "DeflationBasis",
]
