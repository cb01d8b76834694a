"""Wall-clock scaling measurements for the transform implementations."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .grid import Image
from .pdrt import pdrt_fft, pdrt_naive
from .qrt import qrt_direct, qrt_fft

__all__ = ["BenchResult", "bench", "TRANSFORMS"]

TRANSFORMS = {
    "pdrt_naive": pdrt_naive,
    "pdrt_fft": pdrt_fft,
    "qrt_direct": qrt_direct,
    "qrt_fft": qrt_fft,
}

_POW2_ONLY = {"pdrt_fft", "qrt_fft"}


@dataclass(frozen=True)
class BenchResult:
    """Median wall time per size plus the fitted log-log slope."""

    transform: str
    sizes: tuple[int, ...]
    median_seconds: tuple[float, ...]
    slope: float


def bench(transform: str, sizes, repeats: int = 5, seed: int = 0) -> BenchResult:
    """Time one transform over increasing sizes; median of ``repeats`` runs each."""
    if transform not in TRANSFORMS:
        raise ValueError(f"unknown transform {transform!r}; choose from {sorted(TRANSFORMS)}")
    sizes = tuple(int(s) for s in sizes)
    if len(sizes) < 2 or any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("sizes must be strictly increasing with at least two entries")
    if repeats < 5:
        raise ValueError("repeats must be >= 5")
    if transform in _POW2_ONLY and any(s & (s - 1) for s in sizes):
        raise ValueError(f"{transform} requires power-of-two sizes")
    fn = TRANSFORMS[transform]
    rng = np.random.default_rng(seed)
    medians = []
    for n in sizes:
        image = Image(n, rng.uniform(0.0, 1.0, size=(n, n)))
        medians.append(_time_one(fn, image, repeats))
    slope = float(np.polyfit(np.log(sizes), np.log(medians), 1)[0])
    return BenchResult(transform, sizes, tuple(medians), slope)


_MIN_SAMPLE_SECONDS = 10e-3
_MAX_BATCH_CALLS = 1000


def _time_one(fn, image, repeats: int) -> float:
    """Median per-call time over ``repeats`` samples.

    Fast calls are batched so every timed sample spans at least ~10 ms;
    short scheduler stalls then average out within a sample instead of
    poisoning it.  The batch size comes from the best of three probe calls
    (a single slow probe must not collapse the batches).
    """
    probe = math.inf
    deadline = time.perf_counter() + 0.2
    for _ in range(3):
        t0 = time.perf_counter()
        fn(image)
        probe = min(probe, time.perf_counter() - t0)
        if time.perf_counter() > deadline:
            break
    calls = max(1, min(_MAX_BATCH_CALLS, int(_MIN_SAMPLE_SECONDS / max(probe, 1e-9))))
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        for _ in range(calls):
            fn(image)
        samples.append((time.perf_counter() - t0) / calls)
    return float(np.median(samples))
