"""Dense statevector simulation of the transform circuit and its subroutines.

Qubit 0 is the most significant bit of the global basis index; a register
lists its qubits most-significant first, so ``Register.qubits[-1]`` is the
explicit least-significant bit.  Gates are plain matrices or basis
permutations applied over named registers; everything is exact (complex128),
with no noise model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NormalizationError, SizeError
from .grid import QuantumImage

__all__ = [
    "MAX_QUBITS",
    "Register",
    "RegisterLayout",
    "StateVector",
    "FixedPoint",
    "PermutationGate",
    "MeasureResult",
    "from_image",
    "apply_cond_phase",
    "apply_qft",
    "apply_gate",
    "mul_direct",
    "mul_recursive",
    "controlled_add",
    "run_algorithm1",
    "invert_algorithm1",
    "algorithm1_amplitudes",
    "embedded_image",
    "hadamard",
    "measure",
    "conditional_rotation",
    "amplitude_encode_sim",
    "dump_state",
]

MAX_QUBITS = 24
MAX_MUL_BITS = 12


@dataclass(frozen=True)
class Register:
    """Named span of qubits, most significant first."""

    name: str
    qubits: tuple[int, ...]

    @property
    def width(self) -> int:
        return len(self.qubits)

    @property
    def lsb(self) -> int:
        return self.qubits[-1]


class RegisterLayout:
    """Disjoint named registers covering qubits 0..num_qubits-1."""

    def __init__(self, *registers: Register):
        seen: set[int] = set()
        for reg in registers:
            overlap = seen.intersection(reg.qubits)
            if overlap:
                raise ValueError(f"register {reg.name!r} reuses qubits {sorted(overlap)}")
            seen.update(reg.qubits)
        if seen != set(range(len(seen))):
            raise ValueError("registers must cover qubits 0..n-1 without gaps")
        self._regs = {reg.name: reg for reg in registers}
        self.num_qubits = len(seen)

    def __getitem__(self, name: str) -> Register:
        return self._regs[name]

    def __contains__(self, name: str) -> bool:
        return name in self._regs

    def qubits_of(self, *names: str) -> tuple[int, ...]:
        out: tuple[int, ...] = ()
        for name in names:
            out += self._regs[name].qubits
        return out

    @property
    def registers(self) -> tuple[Register, ...]:
        return tuple(self._regs.values())


@dataclass
class StateVector:
    """Dense amplitudes over an explicit register layout."""

    layout: RegisterLayout
    amps: np.ndarray

    def __post_init__(self):
        if self.layout.num_qubits > MAX_QUBITS:
            raise SizeError(
                f"{self.layout.num_qubits} qubits exceeds the {MAX_QUBITS}-qubit cap"
            )
        self.amps = np.asarray(self.amps, dtype=complex)
        if self.amps.shape != (1 << self.layout.num_qubits,):
            raise ValueError(
                f"expected {1 << self.layout.num_qubits} amplitudes, got {self.amps.shape}"
            )

    @property
    def num_qubits(self) -> int:
        return self.layout.num_qubits

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def copy(self) -> "StateVector":
        return StateVector(self.layout, self.amps.copy())


@dataclass(frozen=True)
class FixedPoint:
    """Value in [0, 1) stored as ``raw / 2**bits``; exact by construction."""

    bits: int
    raw: int

    def __post_init__(self):
        if not 0 <= self.raw < (1 << self.bits):
            raise ValueError(f"raw={self.raw} outside [0, 2^{self.bits})")

    @property
    def value(self) -> float:
        return self.raw / (1 << self.bits)

    @classmethod
    def from_value(cls, a: float, bits: int) -> "FixedPoint":
        if not 0.0 <= a < 1.0:
            raise ValueError(f"fixed-point value must lie in [0, 1), got {a}")
        return cls(bits, min(int(round(a * (1 << bits))), (1 << bits) - 1))


# ---------------------------------------------------------------------------
# Gate plumbing
# ---------------------------------------------------------------------------


def _resolve_qubits(state: StateVector, target) -> tuple[int, ...]:
    if isinstance(target, Register):
        return target.qubits
    if isinstance(target, str):
        return state.layout[target].qubits
    return tuple(target)


def _apply_matrix(state: StateVector, qubits: tuple[int, ...], matrix: np.ndarray) -> None:
    k = len(qubits)
    arr = state.amps.reshape([2] * state.num_qubits)
    arr = np.moveaxis(arr, qubits, range(k))
    rest = arr.shape[k:]
    block = arr.reshape(1 << k, -1)
    block = matrix @ block
    arr = block.reshape((2,) * k + rest)
    arr = np.moveaxis(arr, range(k), qubits)
    state.amps = np.ascontiguousarray(arr).reshape(-1)


def _apply_permutation(state: StateVector, qubits: tuple[int, ...], perm: np.ndarray) -> None:
    k = len(qubits)
    arr = state.amps.reshape([2] * state.num_qubits)
    arr = np.moveaxis(arr, qubits, range(k))
    rest = arr.shape[k:]
    block = arr.reshape(1 << k, -1)
    out = np.empty_like(block)
    out[perm] = block
    arr = out.reshape((2,) * k + rest)
    arr = np.moveaxis(arr, range(k), qubits)
    state.amps = np.ascontiguousarray(arr).reshape(-1)


@dataclass(frozen=True)
class PermutationGate:
    """Unitary that permutes computational basis states: |i> -> |perm[i]>."""

    name: str
    num_qubits: int
    perm: np.ndarray
    adder_levels: int = 0

    def validate(self) -> None:
        if not np.array_equal(np.sort(self.perm), np.arange(1 << self.num_qubits)):
            raise ValueError(f"{self.name}: not a permutation")

    def inverse(self) -> "PermutationGate":
        inv = np.empty_like(self.perm)
        inv[self.perm] = np.arange(self.perm.size)
        return PermutationGate(self.name + "_inv", self.num_qubits, inv, self.adder_levels)

    def apply_to_basis(self, index):
        return self.perm[index]


def apply_gate(state: StateVector, gate: PermutationGate, qubits) -> StateVector:
    qubits = _resolve_qubits(state, qubits)
    if len(qubits) != gate.num_qubits:
        raise ValueError(f"{gate.name} needs {gate.num_qubits} qubits, got {len(qubits)}")
    _apply_permutation(state, qubits, gate.perm)
    return state


# ---------------------------------------------------------------------------
# Reversible modular arithmetic
# ---------------------------------------------------------------------------


def _check_mul_width(k: int) -> None:
    if not 1 <= k <= MAX_MUL_BITS:
        raise ValueError(f"register width k={k} outside [1, {MAX_MUL_BITS}]")


def controlled_add(k: int) -> PermutationGate:
    """(a, b, c) -> (a, b + c*a mod 2^k, c) on 2k+1 qubits (c is the LSB)."""
    _check_mul_width(k)
    mask = (1 << k) - 1
    idx = np.arange(1 << (2 * k + 1))
    c = idx & 1
    b = (idx >> 1) & mask
    a = idx >> (k + 1)
    b2 = np.where(c == 1, (b + a) & mask, b)
    perm = (a << (k + 1)) | (b2 << 1) | c
    return PermutationGate(f"cadd_{k}", 2 * k + 1, perm)


def mul_direct(k: int) -> PermutationGate:
    """(a, b) -> (a, a*b mod 2^k) for odd a; identity on b for even a.

    The even-a extension keeps the gate a total permutation; the transform
    circuit only ever presents odd a (its LSB is pinned to 1).
    """
    _check_mul_width(k)
    mask = (1 << k) - 1
    idx = np.arange(1 << (2 * k))
    b = idx & mask
    a = idx >> k
    b2 = np.where(a & 1 == 1, (a * b) & mask, b)
    perm = (a << k) | b2
    return PermutationGate(f"mul_{k}", 2 * k, perm)


def _mul_recursive_values(a: np.ndarray, b: np.ndarray, k: int, adders: dict) -> np.ndarray:
    # a odd throughout the recursion (its LSB is 1 at every level).
    if k == 1:
        return b
    j0 = b & 1
    low_mask = (1 << (k - 1)) - 1
    hi = _mul_recursive_values(a & low_mask, b >> 1, k - 1, adders)
    # ladder level k-1: add the shifted multiplicand, controlled on j0
    gate = adders[k - 1]
    basis = ((a >> 1) << k) | (hi << 1) | j0
    hi = (gate.perm[basis] >> 1) & low_mask
    return (hi << 1) | j0


def mul_recursive(k: int) -> PermutationGate:
    """Multiplier assembled from the k-1 controlled-adder ladder levels.

    Equals ``mul_direct(k)`` as a permutation; ``adder_levels`` records the
    ladder depth.
    """
    _check_mul_width(k)
    adders = {j: controlled_add(j) for j in range(1, k)}
    mask = (1 << k) - 1
    idx = np.arange(1 << (2 * k))
    b = idx & mask
    a = idx >> k
    odd = (a & 1) == 1
    b2 = b.copy()
    if k > 1 and odd.any():
        b2[odd] = _mul_recursive_values(a[odd], b[odd], k, adders)
    perm = (a << k) | b2
    return PermutationGate(f"mul_rec_{k}", 2 * k, perm, adder_levels=k - 1)


# ---------------------------------------------------------------------------
# The transform circuit (embed, phase, Fourier, multiply)
# ---------------------------------------------------------------------------


def _algorithm_layout(m: int) -> RegisterLayout:
    return RegisterLayout(
        Register("x", tuple(range(m))),
        Register("x_anc", (m,)),
        Register("y", tuple(range(m + 1, 2 * m + 1))),
        Register("y_anc", (2 * m + 1,)),
    )


def from_image(qimage: QuantumImage) -> StateVector:
    """Embed a unit-norm image as amplitudes at |x>|1>|y>|1>."""
    n = qimage.n
    m = n.bit_length() - 1
    layout = _algorithm_layout(m)
    if layout.num_qubits > MAX_QUBITS:
        raise SizeError(f"image side {n} needs {layout.num_qubits} qubits")
    grid = np.zeros((2 * n, 2 * n), dtype=complex)
    # grid[X', Y'] with X' = 2x+1, Y' = 2y+1
    grid[1::2, 1::2] = qimage.amplitudes.T  # amplitude f(x, y) = data[y, x]
    return StateVector(layout, grid.reshape(-1))


def apply_cond_phase(state: StateVector, n: int) -> StateVector:
    """Multiply the |x>|.>|y>|.> component by exp(-2*pi*i*(x+y)/(2n))."""
    grid = state.amps.reshape(n, 2, n, 2)
    x = np.arange(n)
    phase = np.exp(-2j * np.pi * (x[:, None] + x[None, :]) / (2 * n))
    grid *= phase[:, None, :, None]
    state.amps = grid.reshape(-1)
    return state


def _qft_matrix(size: int, direction: str) -> np.ndarray:
    jk = np.outer(np.arange(size), np.arange(size))
    if direction == "paper_forward":
        return np.exp(-2j * np.pi * jk / size) / math.sqrt(size)
    if direction == "paper_inverse":
        return np.exp(2j * np.pi * jk / size) / math.sqrt(size)
    raise ValueError(f"direction must be paper_forward or paper_inverse, got {direction!r}")


def apply_qft(state: StateVector, register, direction: str = "paper_forward") -> StateVector:
    """Fourier transform on one register.

    ``paper_forward`` uses the e^{-2*pi*i*jk/M} kernel (the adjoint of the
    textbook transform); ``paper_inverse`` is its adjoint.
    """
    qubits = _resolve_qubits(state, register)
    _apply_matrix(state, qubits, _qft_matrix(1 << len(qubits), direction))
    return state


def run_algorithm1(qimage: QuantumImage) -> StateVector:
    """Execute the five-step transform circuit on an embedded image.

    Final amplitudes on the (l, k) grid equal the sign-alternating Radon
    transform of the image (``qrt.qrt_direct``).
    """
    n = qimage.n
    m = n.bit_length() - 1
    if m > 8:
        raise SizeError(f"side {n} exceeds the simulator scale (max 256)")
    state = from_image(qimage)
    apply_cond_phase(state, n)
    apply_qft(state, "x", "paper_forward")
    apply_qft(state, "y", "paper_forward")
    xp = state.layout.qubits_of("x", "x_anc")
    yp = state.layout.qubits_of("y", "y_anc")
    apply_gate(state, mul_direct(m + 1).inverse(), xp + yp)
    apply_qft(state, xp, "paper_inverse")
    return state


def invert_algorithm1(state: StateVector) -> StateVector:
    """Adjoint circuit: maps a valid transform state back to the embedded image."""
    m = state.layout["x"].width
    n = 1 << m
    xp = state.layout.qubits_of("x", "x_anc")
    yp = state.layout.qubits_of("y", "y_anc")
    apply_qft(state, xp, "paper_forward")
    apply_gate(state, mul_direct(m + 1), xp + yp)
    apply_qft(state, "x", "paper_inverse")
    apply_qft(state, "y", "paper_inverse")
    grid = state.amps.reshape(n, 2, n, 2)
    x = np.arange(n)
    grid *= np.exp(2j * np.pi * (x[:, None] + x[None, :]) / (2 * n))[:, None, :, None]
    state.amps = grid.reshape(-1)
    return state


def algorithm1_amplitudes(state: StateVector) -> np.ndarray:
    """Output amplitudes arranged as a (2n, 2n) grid indexed (l, k)."""
    m = state.layout["x"].width
    size = 1 << (m + 1)
    return state.amps.reshape(size, size).copy()


def embedded_image(state: StateVector) -> np.ndarray:
    """Extract the f(x, y) grid (data[y, x]) from an embedded-image state."""
    m = state.layout["x"].width
    size = 1 << (m + 1)
    return state.amps.reshape(size, size)[1::2, 1::2].T.copy()


# ---------------------------------------------------------------------------
# Single-qubit operations and measurement
# ---------------------------------------------------------------------------

_HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / math.sqrt(2.0)


def hadamard(state: StateVector, qubit: int) -> StateVector:
    _apply_matrix(state, (qubit,), _HADAMARD)
    return state


@dataclass
class MeasureResult:
    """Both branches of a single-qubit measurement.

    ``states`` holds the normalized post-measurement states (None for an
    outcome of probability ~0).  ``outcome`` is set only in sampling mode.
    """

    probabilities: tuple[float, float]
    states: tuple[StateVector | None, StateVector | None]
    outcome: int | None = None


def measure(state: StateVector, qubit: int, seed: int | None = None) -> MeasureResult:
    """Project on one qubit; deterministic postselection interface by default."""
    nq = state.num_qubits
    arr = state.amps.reshape([2] * nq)
    arr = np.moveaxis(arr, qubit, 0).reshape(2, -1)
    probs = (np.abs(arr) ** 2).sum(axis=1)
    total = probs.sum()
    probs = probs / total
    branches: list[StateVector | None] = [None, None]
    for out in (0, 1):
        if probs[out] <= 1e-300:
            continue
        collapsed = np.zeros_like(arr)
        collapsed[out] = arr[out] / math.sqrt(probs[out] * total)
        grid = np.moveaxis(collapsed.reshape([2] * nq), 0, qubit)
        branches[out] = StateVector(state.layout, np.ascontiguousarray(grid).reshape(-1))
    outcome = None
    if seed is not None:
        outcome = int(np.random.default_rng(seed).random() < probs[1])
    return MeasureResult((float(probs[0]), float(probs[1])), (branches[0], branches[1]), outcome)


def conditional_rotation(state: StateVector, source_register, target_qubit: int) -> StateVector:
    """Rotate the target to a|0> + sqrt(1-a^2)|1>, a read from the source register.

    The register value v on w qubits is interpreted as the fixed-point
    fraction a = v / 2^w in [0, 1); the rotation is applied exactly rather
    than through an arccos gate ladder.
    """
    qubits = _resolve_qubits(state, source_register)
    w = len(qubits)
    nq = state.num_qubits
    arr = state.amps.reshape([2] * nq)
    arr = np.moveaxis(arr, qubits + (target_qubit,), range(w + 1))
    rest = arr.shape[w + 1 :]
    block = arr.reshape(1 << w, 2, -1)
    a = np.array([FixedPoint(w, v).value for v in range(1 << w)])[:, None]
    s = np.sqrt(1.0 - a * a)
    top = a * block[:, 0, :] - s * block[:, 1, :]
    bot = s * block[:, 0, :] + a * block[:, 1, :]
    block = np.stack([top, bot], axis=1)
    arr = block.reshape((2,) * (w + 1) + rest)
    arr = np.moveaxis(arr, range(w + 1), qubits + (target_qubit,))
    state.amps = np.ascontiguousarray(arr).reshape(-1)
    return state


def amplitude_encode_sim(values, bits: int = 16) -> tuple[StateVector, float]:
    """Postselected amplitude encoding of a real vector.

    Returns the normalized state sum_i (a_i/||a||)|i> together with the
    success probability sum(a^2) / (N * a_max^2) = cos^2(theta) of the
    postselection; cos(theta) is never below the condition number
    min|a| / max|a|.
    """
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or values.size < 2 or values.size & (values.size - 1):
        raise ValueError("values must be a 1-D array of power-of-two length >= 2")
    if bits < 1:
        raise ValueError("bits must be >= 1")
    a_max = float(np.abs(values).max())
    if a_max == 0.0:
        raise NormalizationError("cannot encode an all-zero vector")
    success = float(np.sum(values**2) / (values.size * a_max**2))
    kappa = float(np.abs(values).min() / a_max)
    assert math.sqrt(success) >= kappa - 1e-12
    w = values.size.bit_length() - 1
    layout = RegisterLayout(Register("index", tuple(range(w))))
    amps = (values / np.linalg.norm(values)).astype(complex)
    return StateVector(layout, amps), success


def dump_state(state: StateVector, path) -> None:
    """Debug dump: one CSV row (basis index, real, imag) per amplitude."""
    with open(path, "w") as fh:
        for idx, amp in enumerate(state.amps):
            fh.write(f"{idx},{amp.real:.17g},{amp.imag:.17g}\n")
