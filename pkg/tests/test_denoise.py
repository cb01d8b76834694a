import math

import numpy as np
import pytest

from qradon.denoise import (
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
from qradon.errors import NormalizationError
from qradon.grid import Image, NoiseSpec, add_gaussian_noise, empirical_risk, make_test_image, normalize, snr
from qradon.qrt import QrtTable, qrt_fft

from conftest import random_image


# --------------------------------------------------------------------- Haar


def test_haar_constant_pair():
    coeffs = haar_forward([1.0, 1.0])
    assert np.allclose(coeffs.c, [math.sqrt(2)])
    assert np.allclose(coeffs.d, [0.0])


def test_haar_step_pair():
    coeffs = haar_forward([1.0, 0.0])
    assert np.allclose(coeffs.c, [1 / math.sqrt(2)])
    assert np.allclose(coeffs.d, [1 / math.sqrt(2)])


def test_haar_round_trip(rng):
    x = rng.normal(size=16)
    back = haar_inverse(haar_forward(x))
    assert np.abs(back - x).max() < 1e-12


def test_haar_energy_preserved(rng):
    x = rng.normal(size=32)
    coeffs = haar_forward(x)
    energy = np.sum(coeffs.c**2) + np.sum(coeffs.d**2)
    assert abs(energy - np.sum(x**2)) < 1e-10


def test_haar_rejects_odd_length():
    with pytest.raises(ValueError):
        haar_forward([1.0, 2.0, 3.0])


# ---------------------------------------------------------------- threshold


def test_threshold_infinite_zeroes_everything():
    assert np.array_equal(hard_threshold([3.0, -9.0], math.inf), [0.0, 0.0])


def test_threshold_zero_keeps_nonzeros():
    d = np.array([0.5, -0.25, 0.0])
    assert np.array_equal(hard_threshold(d, 0.0), d)


def test_threshold_strict_inequality():
    assert np.array_equal(hard_threshold([3.0, -1.0, 0.5], 1.0), [3.0, 0.0, 0.0])


def test_threshold_never_increases_energy(rng):
    d = rng.normal(size=64)
    for t in (0.0, 0.3, 1.0, math.inf):
        assert np.sum(hard_threshold(d, t) ** 2) <= np.sum(d**2) + 1e-12


# ---------------------------------------------------------------- 2-D Haar


def test_dwt2d_constant_unchanged():
    img = Image(8, np.full((8, 8), 0.4))
    for t in (0.0, 1.0, math.inf):
        out = dwt_denoise_2d(img, t)
        assert np.abs(out.data - img.data).max() < 1e-12


def test_dwt2d_zero_threshold_is_identity(rng):
    img = random_image(8, rng)
    out = dwt_denoise_2d(img, 0.0)
    assert np.abs(out.data - img.data).max() < 1e-12


def test_dwt2d_quarters_noise_risk():
    # variance halves per pass; two passes -> 1/4 of the raw noise risk
    f = Image(16, np.ones((16, 16)))
    spec = NoiseSpec(1.0, 1.0, 99)
    denoised = empirical_risk(f, spec, lambda h: dwt_denoise_2d(h, math.inf), 100)
    raw = empirical_risk(f, spec, lambda h: h, 100)
    assert abs(denoised.mean / raw.mean - 0.25) < 0.04


# ------------------------------------------------------------ PDRT pipeline


def test_pdrt_denoise_zero_threshold_round_trip(rng):
    img = random_image(7, rng)
    out = pdrt_denoise(img, 0.0, 7)
    assert np.abs(out.data - img.data).max() < 1e-9


def test_pdrt_denoise_constant_infinite_threshold():
    img = Image(5, np.full((5, 5), 0.3))
    out = pdrt_denoise(img, math.inf, 5)
    assert np.abs(out.data - 0.3).max() < 1e-10


def test_pdrt_denoise_rejects_composite():
    with pytest.raises(ValueError, match="prime"):
        pdrt_denoise(Image(8, np.ones((8, 8))), 1.0, 8)


def test_pdrt_denoise_improves_noisy_half_plane():
    clean = make_test_image("half_plane_gaussian", 128)
    crop = Image(127, clean.data[:127, :127])
    noisy = add_gaussian_noise(crop, NoiseSpec(sigma=0.05, epsilon=1.0, seed=8))
    out = pdrt_denoise(noisy, math.inf, 127)
    assert snr(out, crop) > snr(noisy, crop)


# ------------------------------------------------------- success probability


def test_success_probability_pair_constant_table(rng):
    img = random_image(4, rng)
    once, _ = qrt_denoise(img)  # its table is constant along intercept pairs
    table = qrt_fft(normalize(once))
    assert success_probability(table) == pytest.approx(1.0, abs=1e-10)


def test_success_probability_requires_unit_energy(rng):
    table = qrt_fft(random_image(4, rng))  # unnormalized image
    with pytest.raises(NormalizationError):
        success_probability(table)


def test_success_probability_complements_detail_energy(rng):
    for _ in range(10):
        table = qrt_fft(normalize(random_image(8, rng)))
        p = success_probability(table)
        diffs = table.values[0::2, 1::2] - table.values[1::2, 1::2]
        detail = 0.5 * float(np.sum(diffs**2))
        assert 0.0 <= p <= 1.0
        assert abs(p + detail - 1.0) < 1e-10


def test_success_probability_random_images_mean_above_half(rng):
    probs = []
    for _ in range(50):
        noisy = Image(16, rng.uniform(0, 1, (16, 16)) + rng.normal(0, 1, (16, 16)))
        probs.append(success_probability(qrt_fft(normalize(noisy))))
    mean = float(np.mean(probs))
    se = float(np.std(probs, ddof=1) / math.sqrt(len(probs)))
    assert mean - 2.576 * se > 0.5


# -------------------------------------------------------------- QRT pipeline


def test_qrt_denoise_idempotent(rng):
    img = random_image(8, rng)
    once, p1 = qrt_denoise(img)
    twice, p2 = qrt_denoise(once)
    assert np.abs(twice.data - once.data).max() < 1e-10
    assert p2 == pytest.approx(1.0, abs=1e-9)


def test_qrt_denoise_matches_gate_pipeline(rng):
    # cross_check raises ConsistencyError on any >1e-9 deviation
    for _ in range(3):
        qrt_denoise(random_image(8, rng), cross_check=True)


def test_qrt_denoise_probability_in_range(rng):
    _, p = qrt_denoise(random_image(16, rng))
    assert 0.0 < p <= 1.0


def test_qrt_denoise_improves_noisy_half_plane():
    clean = make_test_image("half_plane_gaussian", 128)
    noisy = add_gaussian_noise(clean, NoiseSpec(sigma=0.05, epsilon=1.0, seed=8))
    out, p = qrt_denoise(noisy)
    assert snr(out, clean) > snr(noisy, clean)
    assert p > 0.5


def test_denoise_report_text():
    rep = DenoiseReport(
        method="qrt", threshold=math.inf, snr_before=10.0, snr_after=12.5,
        success_probability=0.97, seeds={"noise": 3},
    )
    text = rep.to_text()
    assert "method=qrt" in text
    assert "threshold=inf" in text
    assert "seed.noise=3" in text
    for line in text.strip().splitlines():
        assert "=" in line
