from .matrix import SymTridiag, DenseSym
from .split import (
    ThreeWaySplit,
    TwoWaySplit,
    split_three,
    split_two,
    default_split_three,
    default_split_two,
    decoupled_blocks,
)
from .generators import (
    laplacian_2d,
    laplacian_eigenvalues,
    random_tridiag,
    wilkinson_plus,
    glued_wilkinson,
)
from .householder import householder_tridiagonalize
from .io import read_matrix, write_matrix, parse_matrix, format_matrix

__all__ = [
    "SymTridiag",
    "DenseSym",
    "ThreeWaySplit",
    "TwoWaySplit",
    "split_three",
    "split_two",
    "default_split_three",
    "default_split_two",
    "decoupled_blocks",
    "laplacian_2d",
    "laplacian_eigenvalues",
    "random_tridiag",
    "wilkinson_plus",
    "glued_wilkinson",
    "householder_tridiagonalize",
    "read_matrix",
    "write_matrix",
    "parse_matrix",
    "format_matrix",
]
