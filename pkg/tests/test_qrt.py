import math

import numpy as np
import pytest

from qradon.errors import ConsistencyError, SizeError
from qradon.grid import Image, normalize
from qradon.pdrt import line_points
from qradon.qrt import QrtTable, extend_image, qrt_direct, qrt_fft, qrt_inverse

from conftest import random_image


# ---------------------------------------------------------------- extension


def test_extend_delta():
    data = np.zeros((2, 2))
    data[0, 0] = 1.0
    ext = extend_image(Image(2, data)).data
    expected = np.zeros((4, 4))
    expected[0, 0] = expected[2, 2] = 0.5
    expected[2, 0] = expected[0, 2] = -0.5
    assert np.array_equal(ext, expected)


def test_extend_sign_symmetry(rng):
    img = random_image(4, rng, -1, 1)
    ext = extend_image(img).data
    n = 4
    for x in range(n):
        for y in range(n):
            assert ext[y, x] + ext[y, x + n] == 0.0
            assert ext[y, x] + ext[y + n, x] == 0.0
            assert ext[y, x] == ext[y + n, x + n]
            assert abs(ext[y, x]) == abs(img.at(x, y)) / 2


def test_extend_constant_checkerboard():
    ext = extend_image(Image(2, np.ones((2, 2)))).data
    assert np.array_equal(np.sign(ext), np.kron([[1, -1], [-1, 1]], np.ones((2, 2))))
    assert np.all(np.abs(ext) == 0.5)


# ------------------------------------------------------------------ forward


def test_direct_even_slopes_vanish(rng):
    table = qrt_direct(random_image(4, rng))
    assert np.abs(table.values[:, 0::2]).max() < 1e-12


def test_direct_delta_hand_summation():
    # independent oracle: enumerate each 4-point line of the extension and sum
    data = np.zeros((2, 2))
    data[0, 0] = 1.0
    img = Image(2, data)
    ext = extend_image(img).data
    table = qrt_direct(img)
    for k in range(4):
        for l in range(4):
            oracle = sum(ext[y, x] for x, y in line_points(4, l, k)) / 2.0
            assert math.isclose(table.values[l, k], oracle, abs_tol=1e-15)


def test_energy_identity(rng):
    img = random_image(4, rng, -1, 1)
    table = qrt_direct(img)
    assert abs(np.sum(table.values**2) - np.sum(img.data**2)) < 1e-10


@pytest.mark.parametrize("n", [4, 8])
def test_fft_equals_direct(n, rng):
    img = random_image(n, rng, -1, 1)
    assert np.abs(qrt_fft(img).values - qrt_direct(img).values).max() < 1e-9


def test_fft_delta():
    data = np.zeros((4, 4))
    data[1, 2] = 1.0
    img = Image(4, data)
    assert np.abs(qrt_fft(img).values - qrt_direct(img).values).max() < 1e-12


def test_fft_rejects_non_power_of_two():
    with pytest.raises(SizeError):
        qrt_fft(Image(6, np.ones((6, 6))))


def test_accepts_quantum_image(rng):
    img = random_image(4, rng)
    qn = normalize(img)
    assert np.allclose(
        qrt_fft(qn).values, qrt_fft(img).values / img.norm(), atol=1e-12
    )


def test_linearity(rng):
    f = random_image(4, rng, -1, 1)
    g = random_image(4, rng, -1, 1)
    combo = Image(4, 2.0 * f.data - 3.0 * g.data)
    lhs = qrt_direct(combo).values
    rhs = 2.0 * qrt_direct(f).values - 3.0 * qrt_direct(g).values
    assert np.abs(lhs - rhs).max() < 1e-10


@pytest.mark.parametrize("n", [2, 4, 8])
def test_slice_identity_pointwise(n, rng):
    # explicit-kernel check of the slice property on the extension
    img = random_image(n, rng, -1, 1)
    m = 2 * n
    ext = extend_image(img).data
    table = qrt_direct(img).values
    grid = np.arange(m)
    kernel = np.exp(-2j * np.pi * np.outer(grid, grid) / m)
    f1 = kernel @ table / math.sqrt(m)  # f1[i', k]
    f2 = np.empty((m, m), dtype=complex)
    for u in range(m):
        for v in range(m):
            phases = np.exp(-2j * np.pi * (u * grid[None, :] + v * grid[:, None]) / m)
            f2[u, v] = (ext * phases).sum() / m
    for k in range(m):
        for ip in range(m):
            assert abs(f1[ip, k] - f2[ip, (ip * k) % m]) < 1e-9


# ------------------------------------------------------------------ inverse


@pytest.mark.parametrize("n", [2, 4, 8])
def test_inverse_round_trip(n, rng):
    img = random_image(n, rng, -1, 1)
    back = qrt_inverse(qrt_direct(img))
    assert np.abs(back.data - img.data).max() < 1e-10


def test_forward_of_inverse_round_trip(rng):
    img = random_image(4, rng)
    table = qrt_direct(img)
    again = qrt_direct(qrt_inverse(table))
    assert np.abs(again.values - table.values).max() < 1e-10


def test_inverse_zero_table():
    out = qrt_inverse(QrtTable(4, np.zeros((8, 8))))
    assert np.array_equal(out.data, np.zeros((4, 4)))


def test_inverse_rejects_even_slope_energy():
    values = np.zeros((8, 8))
    values[3, 2] = 0.5  # energy in an even-slope column
    with pytest.raises(ConsistencyError):
        qrt_inverse(QrtTable(4, values))


def test_table_csv_round_trip(tmp_path, rng):
    table = qrt_direct(random_image(4, rng))
    path = tmp_path / "qr.csv"
    table.save(path)
    back = QrtTable.load(path)
    assert back.n == 4
    assert np.array_equal(back.values, table.values)
