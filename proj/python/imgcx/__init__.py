"""Image complexity measures for computational aesthetics."""

from ._imgcx import (
    MEASURES,
    DataError,
    InvalidInput,
    InvalidParameter,
    UndefinedValue,
    __version__,
    adaptive_binarize,
    algorithmic_complexity,
    coarse_grain,
    contours,
    correlation_matrix,
    energy,
    entropy,
    euler,
    fractal_aesthetic,
    fractal_dimension,
    load_image,
    lossy_roundtrip,
    lzw_compress,
    lzw_decompress,
    mc_complexity,
    mc_complexity_edges,
    measure_all,
    measure_details,
    morphological_binarize,
    p_value,
    pearson,
    physical_complexity,
    physical_complexity_file,
    skew,
    sobel_edges,
    structural_complexity,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
