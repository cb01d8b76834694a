import math

import numpy as np
import pytest

from qradon.errors import SizeError
from qradon.grid import Image, QuantumImage, normalize
from qradon.sidrt import (
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

from conftest import random_image


# ------------------------------------------------------------------ weights


def test_interp_weights_integer_product():
    assert interp_weights(0.0, 5) == (0, 1.0, 0.0)


def test_interp_weights_half():
    base, w0, w1 = interp_weights(0.5, 1)
    assert base == 0 and w1 == 0.5
    assert math.isclose(w0, math.sqrt(0.75), rel_tol=1e-15)


def test_interp_weights_negative_floor_convention():
    base, w0, w1 = interp_weights(-1.25, 3)
    assert base == -4 and math.isclose(w1, 0.25, abs_tol=1e-12)
    assert math.isclose(w0, math.sqrt(1 - 0.0625), rel_tol=1e-12)


def test_interp_weights_unit_norm(rng):
    for _ in range(50):
        k = rng.uniform(-3, 3)
        i = int(rng.integers(0, 16))
        _, w0, w1 = interp_weights(k, i)
        assert math.isclose(w0 * w0 + w1 * w1, 1.0, abs_tol=1e-12)
        assert 0.0 <= w1 < 1.0


def test_slope_spec_branches():
    n = 16
    for theta in range(n):
        spec = SlopeSpec(theta, n)
        if theta < n // 2:
            assert spec.branch == "horizontal"
            assert abs(spec.k) <= 1.0 + 1e-12
        else:
            assert spec.branch == "vertical"
            assert math.isinf(spec.k) or abs(spec.k) >= 1.0 - 1e-12
    assert math.isinf(SlopeSpec(12, 16).k)  # theta = 3N/4
    assert SlopeSpec(12, 16).step == 0.0
    assert SlopeSpec(4, 16).k == pytest.approx(0.0, abs=1e-15)


# ------------------------------------------------------------------- table


def test_row_sums_at_quarter_turn(rng):
    img = random_image(8, rng)
    table = sidrt(img)
    expected = img.data.sum(axis=1) / math.sqrt(8)  # row sums over x at fixed y=l
    assert np.abs(table.values[2] - expected).max() < 1e-12


def test_column_sums_at_three_quarter_turn(rng):
    img = random_image(8, rng)
    table = sidrt(img)
    expected = img.data.sum(axis=0) / math.sqrt(8)  # column sums
    assert np.abs(table.values[6] - expected).max() < 1e-12


def test_theta_zero_diagonal_exact(rng):
    # k = tan(-pi/4) = -1 steps integer cells: pure unweighted sums
    img = random_image(8, rng)
    table = sidrt(img)
    expected = np.array(
        [sum(img.at(i, (l - i) % 8) for i in range(8)) for l in range(8)]
    ) / math.sqrt(8)
    assert np.abs(table.values[0] - expected).max() < 1e-9


def test_constant_image_row_branch_value():
    qn = normalize(Image(8, np.ones((8, 8))))
    table = sidrt(qn)
    assert np.abs(table.values[2] - 1 / math.sqrt(8)).max() < 1e-12


def test_linearity(rng):
    f = random_image(8, rng, -1, 1)
    g = random_image(8, rng, -1, 1)
    combo = Image(8, 1.5 * f.data + 0.25 * g.data)
    lhs = sidrt(combo).values
    rhs = 1.5 * sidrt(f).values + 0.25 * sidrt(g).values
    assert np.abs(lhs - rhs).max() < 1e-12


def test_size_guard():
    with pytest.raises(SizeError):
        sidrt(Image(6, np.ones((6, 6))))


def test_table_csv_round_trip(tmp_path, rng):
    table = sidrt(random_image(8, rng))
    path = tmp_path / "p.csv"
    table.save(path)
    back = SidrtTable.load(path)
    assert back.n == 8 and np.array_equal(back.values, table.values)


# ------------------------------------------------------- inner-product form


@pytest.mark.parametrize("n", [4, 8])
def test_inner_product_identity_everywhere(n, rng):
    qn = normalize(random_image(n, rng))
    table = sidrt(qn)
    img_state = image_state(qn)
    for theta in range(n):
        for l in range(n):
            loc = location_state(theta, l, n)
            assert math.isclose(loc.norm(), 1.0, abs_tol=1e-13)
            overlap = float(np.vdot(loc.amps, img_state.amps).real)
            assert abs(math.sqrt(2) * overlap - table.values[theta, l]) < 1e-10


def test_location_state_zero_slope_form():
    n = 8
    loc = location_state(n // 4, 3, n)  # k = 0
    grid = loc.amps.reshape(n, n, 2)
    assert np.allclose(grid[:, 3, 0], 1 / math.sqrt(n))
    assert np.count_nonzero(grid) == n


def test_location_state_delta_overlap(rng):
    n = 8
    theta, l, i0 = 3, 2, 5
    spec = SlopeSpec(theta, n)
    base, w0, _ = interp_weights(spec.step, i0)
    data = np.zeros((n, n))
    data[(l + base) % n, i0] = 1.0  # delta at (x=i0, y=l+base)
    qn = QuantumImage(n, data)
    overlap = float(np.vdot(location_state(theta, l, n).amps, image_state(qn).amps).real)
    assert math.isclose(overlap, w0 / math.sqrt(2 * n), abs_tol=1e-12)


def test_image_state_delta():
    data = np.zeros((4, 4))
    data[1, 2] = 1.0
    st = image_state(QuantumImage(4, data))
    nonzero = st.amps[np.abs(st.amps) > 0]
    assert len(nonzero) == 2
    assert np.allclose(np.abs(nonzero), 1 / math.sqrt(2))
    assert math.isclose(st.norm(), 1.0, abs_tol=1e-13)


# ------------------------------------------------------------ swap estimate


def test_swap_estimate_exact_at_zero_eps(rng):
    qn = normalize(random_image(8, rng))
    table = sidrt(qn)
    assert swap_test_estimate(qn, 5, 1, 0.0) == pytest.approx(table.values[5, 1], abs=1e-14)


def test_swap_estimate_respects_bound(rng):
    qn = normalize(random_image(8, rng))
    exact = sidrt(qn).values[3, 2]
    eps = 0.01
    for seed in range(1000):
        est = swap_test_estimate(qn, 3, 2, eps, seed=seed)
        assert abs(est - exact) <= eps + 1e-15


def test_swap_estimate_seed_determinism(rng):
    qn = normalize(random_image(8, rng))
    a = swap_test_estimate(qn, 1, 1, 0.05, seed=42)
    b = swap_test_estimate(qn, 1, 1, 0.05, seed=42)
    assert a == b


# ---------------------------------------------------------------- detection


def test_detect_bright_row():
    n = 16
    data = np.zeros((n, n))
    data[5, :] = 1.0  # row y = 5
    det = detect_line(Image(n, data))
    assert det.theta == n // 4 and det.l == 5
    assert det.slope == pytest.approx(0.0, abs=1e-15)
    assert det.intercept == 5.0


def test_detect_bright_column_vertical_marker():
    n = 16
    data = np.zeros((n, n))
    data[:, 9] = 1.0
    det = detect_line(Image(n, data))
    assert det.theta == 3 * n // 4 and det.l == 9
    assert math.isinf(det.slope)
    assert "vertical" in det.to_record()


def test_detect_scaling_invariance(rng):
    img = random_image(16, rng)
    det1 = detect_line(img)
    det2 = detect_line(Image(16, 7.5 * img.data))
    assert (det1.theta, det1.l) == (det2.theta, det2.l)


def test_detect_perturbed_guarantee(rng):
    # the detection-level bound: score >= (1 - 2 eps / sqrt(3)) * max P
    n = 16
    data = np.zeros((n, n))
    data[3, :] = 1.0
    img = Image(n, data)
    table = sidrt(normalize(img)).values
    max_p = table.max()
    assert max_p >= math.sqrt(3) / (2 * math.sqrt(n))
    for eps in (0.01, 0.05):
        for seed in range(20):
            det = detect_line(img, eps=eps, seed=seed)
            assert det.score >= (1 - 2 * eps / math.sqrt(3)) * max_p - 1e-12


def test_detect_record_fields(rng):
    det = detect_line(random_image(8, rng))
    rec = det.to_record()
    for key in ("theta", "l", "slope", "intercept", "score"):
        assert f'"{key}"' in rec


# ------------------------------------------------------------- min statistic


def test_min_check_reproducible():
    a = min_expectation_check(8, 30, seed=4)
    b = min_expectation_check(8, 30, seed=4)
    assert a == b
    assert a.bound == pytest.approx(math.sqrt(3) / (2 * math.sqrt(8)))
    assert a.stderr_min > 0
    assert a.mean_point > a.mean_min > 0


def test_min_check_validates_trials():
    with pytest.raises(ValueError):
        min_expectation_check(8, 10, seed=1)
