"""Haar-threshold denoising through the plain 2-D wavelet, the periodic Radon
transform, and the sign-alternating (reversible) Radon transform.

The Radon pipelines threshold detail coefficients of each slope's intercept
profile, so noise spread over many lines is removed while energy
concentrated on a few lines survives.  The reversible-transform pipeline is
exactly the deterministic effect of the measurement-based circuit: a
Hadamard on the intercept LSB, postselection of 0, and the inverse
transform; its postselection success probability is reported, never sampled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import qsim
from .errors import ConsistencyError, NormalizationError
from .grid import Image, normalize
from .pdrt import PdrtTable, is_prime, pdrt_fft, pdrt_inverse_prime
from .qrt import QrtTable, qrt_fft, qrt_inverse

__all__ = [
    "HaarCoeffs",
    "DenoiseReport",
    "haar_forward",
    "haar_inverse",
    "hard_threshold",
    "dwt_denoise_2d",
    "pdrt_denoise",
    "success_probability",
    "qrt_denoise",
]

_SQRT2 = math.sqrt(2.0)


@dataclass
class HaarCoeffs:
    """One level of scaling (c) and detail (d) coefficients."""

    c: np.ndarray
    d: np.ndarray


def haar_forward(signal) -> HaarCoeffs:
    """c_i = (s_2i + s_2i+1)/sqrt(2), d_i = (s_2i - s_2i+1)/sqrt(2)."""
    s = np.asarray(signal, dtype=float)
    if s.ndim != 1 or s.size % 2:
        raise ValueError(f"signal must be 1-D of even length, got shape {s.shape}")
    a, b = s[0::2], s[1::2]
    return HaarCoeffs(c=(a + b) / _SQRT2, d=(a - b) / _SQRT2)


def haar_inverse(coeffs: HaarCoeffs) -> np.ndarray:
    c = np.asarray(coeffs.c, dtype=float)
    d = np.asarray(coeffs.d, dtype=float)
    if c.shape != d.shape:
        raise ValueError("scaling and detail parts must have equal length")
    out = np.empty(2 * c.size)
    out[0::2] = (c + d) / _SQRT2
    out[1::2] = (c - d) / _SQRT2
    return out


def hard_threshold(d, threshold: float) -> np.ndarray:
    """Zero every coefficient with |d_i| <= threshold (inf zeroes everything)."""
    if threshold < 0:
        raise ValueError("threshold must be >= 0 (or inf)")
    d = np.asarray(d, dtype=float)
    return np.where(np.abs(d) > threshold, d, 0.0)


def _haar_denoise_rows(arr: np.ndarray, threshold: float) -> np.ndarray:
    """Single-level Haar + hard threshold along axis 1 of a 2-D array.

    Odd row length: the trailing sample has no pair partner and passes
    through unchanged.
    """
    out = np.array(arr, dtype=float)
    length = out.shape[1]
    ne = length - (length % 2)
    a, b = out[:, 0:ne:2], out[:, 1:ne:2]
    c = (a + b) / _SQRT2
    d = (a - b) / _SQRT2
    d = np.where(np.abs(d) > threshold, d, 0.0)
    out[:, 0:ne:2] = (c + d) / _SQRT2
    out[:, 1:ne:2] = (c - d) / _SQRT2
    return out


def dwt_denoise_2d(image: Image, threshold: float) -> Image:
    """Single-level Haar thresholding applied row-wise, then column-wise."""
    if image.n % 2:
        raise ValueError(f"side must be even, got {image.n}")
    data = _haar_denoise_rows(image.data, threshold)
    data = _haar_denoise_rows(data.T, threshold).T
    return Image(image.n, data)


def pdrt_denoise(image: Image, threshold: float, p: int) -> Image:
    """Periodic-transform pipeline: forward, per-slope 1-D threshold, exact inverse."""
    if not is_prime(p):
        raise ValueError(f"pipeline requires a prime side, got {p}")
    if image.n != p:
        raise ValueError(f"image side {image.n} does not match p={p}")
    table = pdrt_fft(image)
    cleaned = _haar_denoise_rows(table.values, threshold)
    return pdrt_inverse_prime(PdrtTable(p, cleaned), p)


def success_probability(table: QrtTable) -> float:
    """Probability of the favorable measurement in the circuit pipeline.

    Equals (1/2) * sum over intercept pairs of odd slopes of |pair sum|^2 for
    a unit-energy table -- i.e. 1 minus the normalized detail energy.
    """
    total = float(np.sum(table.values**2))
    if abs(total - 1.0) > 1e-6:
        raise NormalizationError(
            f"table energy {total!r} is not 1; transform a normalized image"
        )
    pair_sums = table.values[0::2, 1::2] + table.values[1::2, 1::2]
    return 0.5 * float(np.sum(pair_sums**2))


def qrt_denoise(image: Image, cross_check: bool = False) -> tuple[Image, float]:
    """Average every intercept pair of the reversible transform, then invert.

    This is the deterministic effect of Hadamard + postselect-0 + inverse
    Hadamard on the intercept LSB; the returned probability is that of the
    postselection for the normalized input.  ``cross_check`` replays the
    pipeline gate by gate on the statevector and verifies agreement.
    """
    table = qrt_fft(image)
    total = float(np.sum(table.values**2))
    if total == 0.0:
        raise NormalizationError("cannot denoise an all-zero image")
    prob = success_probability(QrtTable(table.n, table.values / math.sqrt(total)))
    averaged = np.empty_like(table.values)
    pair_mean = 0.5 * (table.values[0::2, :] + table.values[1::2, :])
    averaged[0::2, :] = pair_mean
    averaged[1::2, :] = pair_mean
    denoised = qrt_inverse(QrtTable(table.n, averaged))
    if cross_check:
        _gate_pipeline_check(image, denoised, prob)
    return denoised, prob


def _gate_pipeline_check(image: Image, denoised: Image, prob: float) -> None:
    """Run the measurement-based pipeline on the statevector and compare."""
    state = qsim.run_algorithm1(normalize(image))
    lsb = state.layout["x_anc"].lsb  # intercept register LSB
    qsim.hadamard(state, lsb)
    result = qsim.measure(state, lsb)
    p0 = result.probabilities[0]
    if abs(p0 - prob) > 1e-9:
        raise ConsistencyError(f"gate probability {p0} != classical {prob}")
    branch = result.states[0]
    qsim.hadamard(branch, lsb)
    qsim.invert_algorithm1(branch)
    # undo the postselection normalization to compare raw pipelines
    gate_image = qsim.embedded_image(branch).real * math.sqrt(p0)
    expected = denoised.data / image.norm()
    dev = float(np.abs(gate_image - expected).max())
    if dev > 1e-9:
        raise ConsistencyError(f"gate pipeline deviates from classical path by {dev:.3e}")


@dataclass
class DenoiseReport:
    """Key=value record of one denoising run."""

    method: str
    threshold: float
    snr_before: float | None = None
    snr_after: float | None = None
    success_probability: float | None = None
    seeds: dict = field(default_factory=dict)

    def to_text(self) -> str:
        lines = [f"method={self.method}"]
        thr = "inf" if math.isinf(self.threshold) else f"{self.threshold:.17g}"
        lines.append(f"threshold={thr}")
        for name in ("snr_before", "snr_after", "success_probability"):
            value = getattr(self, name)
            if value is not None:
                lines.append(f"{name}={value:.17g}")
        for key in sorted(self.seeds):
            lines.append(f"seed.{key}={self.seeds[key]}")
        return "\n".join(lines) + "\n"
