"""Discrete Radon transforms (periodic, reversible, interpolated) with exact
statevector verification, Haar-threshold denoising, and line detection."""

from .errors import (
    ConsistencyError,
    DimensionError,
    InfiniteSnrError,
    NormalizationError,
    ParseError,
    QradonError,
    SizeError,
)
from .grid import (
    Image,
    NoiseSpec,
    QuantumImage,
    add_gaussian_noise,
    empirical_risk,
    load_image,
    make_test_image,
    normalize,
    save_image,
    snr,
)
from .pdrt import DiscreteLine, PdrtTable, line_points, pdrt_fft, pdrt_inverse_prime, pdrt_naive
from .qrt import ExtendedImage, QrtTable, extend_image, qrt_direct, qrt_fft, qrt_inverse
from .sidrt import (
    LineDetection,
    SidrtTable,
    SlopeSpec,
    detect_line,
    image_state,
    interp_weights,
    location_state,
    min_expectation_check,
    sidrt,
    swap_test_estimate,
)
from .denoise import (
    DenoiseReport,
    HaarCoeffs,
    dwt_denoise_2d,
    haar_forward,
    haar_inverse,
    hard_threshold,
    pdrt_denoise,
    qrt_denoise,
    success_probability,
)
from .bench import BenchResult, bench
from .report import RunReport, parse_report

__version__ = "0.1.0"
