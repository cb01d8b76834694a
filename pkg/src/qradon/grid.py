"""Images on the integer grid: I/O, normalization, noise, and quality metrics.

Pixel convention used by every module in this package: an image value
``f(x, y)`` has ``x`` as the horizontal (column) index and ``y`` as the
vertical (row) index, origin at the top-left.  The backing array is
row-major, so ``Image.data[y, x] == f(x, y)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    DimensionError,
    InfiniteSnrError,
    NormalizationError,
    ParseError,
    SizeError,
)

__all__ = [
    "Image",
    "QuantumImage",
    "NoiseSpec",
    "RiskEstimate",
    "load_image",
    "save_image",
    "normalize",
    "add_gaussian_noise",
    "snr",
    "empirical_risk",
    "make_test_image",
    "trial_rng",
]

NORM_TOL = 1e-12


def _is_power_of_two(n: int) -> bool:
    return n >= 2 and (n & (n - 1)) == 0


@dataclass
class Image:
    """Square n-by-n real image; ``data[y, x]`` holds f(x, y)."""

    n: int
    data: np.ndarray

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=float)
        if self.data.shape != (self.n, self.n):
            raise DimensionError(
                f"expected {self.n}x{self.n} data, got shape {self.data.shape}"
            )
        if not np.all(np.isfinite(self.data)):
            raise ValueError("image contains non-finite values")

    @classmethod
    def from_array(cls, data) -> "Image":
        data = np.asarray(data, dtype=float)
        if data.ndim != 2 or data.shape[0] != data.shape[1]:
            raise DimensionError(f"expected a square 2-D array, got shape {data.shape}")
        return cls(n=data.shape[0], data=data)

    def at(self, x: int, y: int) -> float:
        """Value f(x, y)."""
        return float(self.data[y, x])

    def norm(self) -> float:
        return float(np.linalg.norm(self.data))


@dataclass
class QuantumImage:
    """Unit-L2-norm image over a power-of-two grid (amplitude encoding)."""

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=float)
        if not _is_power_of_two(self.n):
            raise SizeError(f"side length must be a power of two >= 2, got {self.n}")
        if self.amplitudes.shape != (self.n, self.n):
            raise DimensionError(
                f"expected {self.n}x{self.n} amplitudes, got {self.amplitudes.shape}"
            )
        total = float(np.sum(self.amplitudes**2))
        if abs(total - 1.0) > NORM_TOL:
            raise NormalizationError(f"squared amplitudes sum to {total!r}, not 1")

    def as_image(self) -> Image:
        return Image(self.n, self.amplitudes.copy())


@dataclass(frozen=True)
class NoiseSpec:
    """Additive Gaussian noise: h = f + epsilon * e with e ~ Normal(0, sigma^2)."""

    sigma: float
    epsilon: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")
        if self.epsilon < 0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")


def trial_rng(seed: int, trial: int = 0) -> np.random.Generator:
    """Deterministic per-trial generator split off a master seed."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(trial,)))


# ---------------------------------------------------------------------------
# File I/O: CSV (exact) and PGM P2/P5 (8-bit, with sidecar for rescaled data)
# ---------------------------------------------------------------------------


def _infer_format(path: Path, fmt: str | None) -> str:
    if fmt is not None:
        return fmt
    suffix = path.suffix.lower().lstrip(".")
    if suffix in ("pgm", "csv"):
        return suffix
    raise ValueError(f"cannot infer format from {path.name!r}; pass format explicitly")


def load_image(path, fmt: str | None = None) -> Image:
    """Read an image from ``path`` in the named format ("pgm" or "csv").

    PGM grayscale is mapped to [0, 1] by value/maxval.  CSV is read exactly,
    one row of comma-separated values per y.
    """
    path = Path(path)
    fmt = _infer_format(path, fmt)
    if fmt == "csv":
        return _load_csv(path)
    if fmt == "pgm":
        return _load_pgm(path)
    raise ValueError(f"unknown format {fmt!r}")


def _load_csv(path: Path) -> Image:
    rows = []
    with open(path, "r") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rows.append([float(tok) for tok in line.split(",")])
            except ValueError as exc:
                raise ParseError(f"{path}: line {lineno}: {exc}") from None
    if not rows:
        raise ParseError(f"{path}: no data rows")
    n = len(rows)
    for lineno, row in enumerate(rows, start=1):
        if len(row) != n:
            raise DimensionError(
                f"{path}: row {lineno} has {len(row)} values, expected {n} (square grid)"
            )
    return Image(n, np.array(rows, dtype=float))


def _load_pgm(path: Path) -> Image:
    raw = path.read_bytes()
    # Tokenize the header: magic, width, height, maxval.  '#' starts a comment.
    tokens: list[bytes] = []
    pos = 0
    while len(tokens) < 4 and pos < len(raw):
        ch = raw[pos : pos + 1]
        if ch == b"#":
            while pos < len(raw) and raw[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif ch.isspace():
            pos += 1
        else:
            start = pos
            while pos < len(raw) and not raw[pos : pos + 1].isspace():
                pos += 1
            tokens.append(raw[start:pos])
    if len(tokens) < 4:
        raise ParseError(f"{path}: truncated PGM header at byte {pos}")
    magic = tokens[0]
    if magic not in (b"P2", b"P5"):
        raise ParseError(f"{path}: byte 0: unsupported magic {magic!r}")
    try:
        width, height, maxval = (int(t) for t in tokens[1:4])
    except ValueError:
        raise ParseError(f"{path}: non-integer header field near byte {pos}") from None
    if width != height:
        raise DimensionError(f"{path}: {width}x{height} grid is not square")
    if maxval <= 0 or maxval > 255:
        raise ParseError(f"{path}: unsupported maxval {maxval}")
    if magic == b"P5":
        pos += 1  # single whitespace byte after maxval
        if len(raw) - pos < width * height:
            raise ParseError(f"{path}: pixel data truncated at byte {len(raw)}")
        pixels = np.frombuffer(raw, dtype=np.uint8, count=width * height, offset=pos)
    else:
        try:
            values = [int(t) for t in raw[pos:].split()]
        except ValueError as exc:
            raise ParseError(f"{path}: bad ASCII pixel near byte {pos}: {exc}") from None
        if len(values) != width * height:
            raise ParseError(
                f"{path}: expected {width * height} pixels, found {len(values)}"
            )
        pixels = np.array(values)
    data = pixels.reshape(height, width).astype(float) / maxval
    return Image(width, data)


def save_image(image: Image, path, fmt: str | None = None) -> None:
    """Write ``image`` to ``path``.

    CSV round-trips exactly (17 significant digits).  PGM is 8-bit; data
    outside [0, 1] is min-max rescaled and the applied rescale is recorded in
    a plain-text sidecar ``<path>.meta``.
    """
    path = Path(path)
    fmt = _infer_format(path, fmt)
    if fmt == "csv":
        with open(path, "w") as fh:
            for row in image.data:
                fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
        return
    if fmt != "pgm":
        raise ValueError(f"unknown format {fmt!r}")
    data = image.data
    lo, hi = float(data.min()), float(data.max())
    if lo < 0.0 or hi > 1.0:
        span = hi - lo
        scaled = (data - lo) / span if span > 0 else np.zeros_like(data)
        sidecar = Path(str(path) + ".meta")
        sidecar.write_text(f"rescale=minmax\nmin={lo:.17g}\nmax={hi:.17g}\n")
    else:
        scaled = data
    pixels = np.rint(scaled * 255).astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{image.n} {image.n}\n255\n".encode())
        fh.write(pixels.tobytes())


# ---------------------------------------------------------------------------
# Normalization, noise, metrics
# ---------------------------------------------------------------------------


def normalize(image: Image) -> QuantumImage:
    """L2-normalize an image into its amplitude-encoded (unit-norm) view."""
    if not _is_power_of_two(image.n):
        raise SizeError(f"side length must be a power of two, got {image.n}")
    norm = np.linalg.norm(image.data)
    if norm == 0.0:
        raise NormalizationError("cannot normalize an all-zero image")
    return QuantumImage(image.n, image.data / norm)


def add_gaussian_noise(image: Image, spec: NoiseSpec) -> Image:
    """Return h = f + epsilon * e with e ~ i.i.d. Normal(0, sigma^2), seeded."""
    rng = np.random.default_rng(spec.seed)
    e = rng.normal(0.0, spec.sigma, size=image.data.shape)
    return Image(image.n, image.data + spec.epsilon * e)


def snr(h: Image, f: Image) -> float:
    """10*log10(||h||^2 / ||h - f||^2) in decibels.

    Note the numerator is ||h||^2 (the processed signal), not ||f||^2; this
    follows the formula used throughout the experiments here and differs from
    the more common convention.  Identical inputs raise InfiniteSnrError.
    """
    if h.data.shape != f.data.shape:
        raise DimensionError(f"shape mismatch: {h.data.shape} vs {f.data.shape}")
    diff = float(np.sum((h.data - f.data) ** 2))
    if diff == 0.0:
        raise InfiniteSnrError("h equals f; SNR is infinite")
    return 10.0 * math.log10(float(np.sum(h.data**2)) / diff)


@dataclass(frozen=True)
class RiskEstimate:
    """Monte-Carlo estimate of per-pixel expected squared error."""

    mean: float
    stderr: float
    trials: int


def empirical_risk(f: Image, spec: NoiseSpec, denoiser, trials: int) -> RiskEstimate:
    """Estimate (1/n_pixels) * E ||denoiser(f + noise) - f||^2 over fresh draws.

    The 1/n factor divides by the vector length, i.e. the pixel count.
    Each trial draws noise from a generator split deterministically off
    ``spec.seed``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    n_pixels = f.n * f.n
    samples = np.empty(trials)
    for t in range(trials):
        rng = trial_rng(spec.seed, t)
        h = Image(f.n, f.data + spec.epsilon * rng.normal(0.0, spec.sigma, f.data.shape))
        try:
            out = denoiser(h)
        except Exception as exc:
            raise RuntimeError(f"denoiser failed on trial {t}: {exc}") from exc
        samples[t] = np.sum((out.data - f.data) ** 2) / n_pixels
    stderr = float(samples.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return RiskEstimate(mean=float(samples.mean()), stderr=stderr, trials=trials)


# ---------------------------------------------------------------------------
# Synthetic test images
# ---------------------------------------------------------------------------


def make_test_image(kind: str, n: int, params: dict | None = None, seed: int = 0) -> Image:
    """Deterministic synthetic test images.

    kinds:
      half_plane_gaussian -- 1_{x1 > x2} * exp(-((x1-c)^2 + (x2-c)^2) / (2 s^2))
                             with c = n/2 and width s (default n/8)
      line_segment        -- unit-intensity segment between params["start"] and
                             params["end"] on a dark background
      random_uniform      -- i.i.d. Uniform[0, 1] pixels from ``seed``
      solids              -- geometric solids (square, disk, triangle) with
                             straight and curved edges, distinct gray levels
    """
    if not _is_power_of_two(n):
        raise SizeError(f"side length must be a power of two, got {n}")
    params = dict(params or {})
    if kind == "half_plane_gaussian":
        c = float(params.pop("center", n / 2))
        s = float(params.pop("width", n / 8))
        _reject_extras(kind, params)
        if s <= 0:
            raise ValueError("width must be positive")
        x = np.arange(n, dtype=float)
        xx, yy = np.meshgrid(x, x)  # xx[y, x] = x, yy[y, x] = y
        bump = np.exp(-((xx - c) ** 2 + (yy - c) ** 2) / (2.0 * s * s))
        return Image(n, np.where(xx > yy, bump, 0.0))
    if kind == "line_segment":
        try:
            x0, y0 = (int(v) for v in params.pop("start"))
            x1, y1 = (int(v) for v in params.pop("end"))
        except KeyError as exc:
            raise ValueError(f"line_segment requires param {exc}") from None
        _reject_extras(kind, params)
        for v in (x0, y0, x1, y1):
            if not 0 <= v < n:
                raise ValueError(f"endpoint coordinate {v} outside [0, {n})")
        data = np.zeros((n, n))
        _rasterize_segment(data, x0, y0, x1, y1)
        return Image(n, data)
    if kind == "random_uniform":
        _reject_extras(kind, params)
        rng = np.random.default_rng(seed)
        return Image(n, rng.uniform(0.0, 1.0, size=(n, n)))
    if kind == "solids":
        _reject_extras(kind, params)
        return _solids_image(n)
    raise ValueError(f"unknown test image kind {kind!r}")


def _reject_extras(kind: str, leftovers: dict) -> None:
    if leftovers:
        raise ValueError(f"unexpected params for {kind!r}: {sorted(leftovers)}")


def _rasterize_segment(data: np.ndarray, x0: int, y0: int, x1: int, y1: int) -> None:
    """Major-axis stepping with rounded minor coordinate; endpoints exact."""
    dx, dy = x1 - x0, y1 - y0
    if dx == 0 and dy == 0:
        data[y0, x0] = 1.0
        return
    if abs(dy) >= abs(dx):
        step = 1 if dy > 0 else -1
        for y in range(y0, y1 + step, step):
            x = round(x0 + (y - y0) * dx / dy)
            data[y, x] = 1.0
    else:
        step = 1 if dx > 0 else -1
        for x in range(x0, x1 + step, step):
            y = round(y0 + (x - x0) * dy / dx)
            data[y, x] = 1.0


def _solids_image(n: int) -> Image:
    data = np.zeros((n, n))
    q = n // 8
    # filled square, upper left
    data[q : 3 * q, q : 3 * q] = 0.9
    # filled disk, right half
    x = np.arange(n, dtype=float)
    xx, yy = np.meshgrid(x, x)
    cx, cy, r = 5.5 * q, 2.5 * q, 1.4 * q
    data[(xx - cx) ** 2 + (yy - cy) ** 2 <= r * r] = 0.6
    # filled right triangle, bottom
    tri = (yy >= 4.5 * q) & (yy <= 7 * q) & (xx >= q) & (xx - q <= yy - 4.5 * q)
    data[tri] = 1.0
    return Image(n, data)
