from .measures import spectral_norm, residual_measure, orthogonality_measure
from .bench import (
    AccuracyReport,
    OutputFormat,
    CSV_COLUMNS,
    run_benchmark,
    flop_ratio,
    format_csv,
    format_table,
    laplacian_tridiagonal,
)

__all__ = [
    "spectral_norm",
    "residual_measure",
    "orthogonality_measure",
    "AccuracyReport",
    "OutputFormat",
    "CSV_COLUMNS",
    "run_benchmark",
    "flop_ratio",
    "format_csv",
    "format_table",
    "laplacian_tridiagonal",
]
