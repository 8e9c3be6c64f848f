"""
n-qubit Pauli operators in symplectic form with exact phase tracking.

An operator is stored as

    i^phase_exp * X(x_bits) Z(z_bits)

with X factors to the left of Z factors.  ``X(a)`` is the tensor product of
``sigma_x^{a_i}`` and likewise for ``Z``.  A ``Y`` on a single qubit is
``i * sigma_x sigma_z``, so it contributes one unit to ``phase_exp``.

Qubit 0 is the leftmost tensor factor, which is also the most significant bit
of a computational basis index.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Iterator, Sequence

import numpy as np

__all__ = [
    "PauliOperator",
    "PauliParseError",
    "pauli_from_string",
    "mul",
    "commutes",
    "weight",
    "enumerate_up_to_weight",
    "enumerate_weight",
    "count_up_to_weight",
]

_SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
_SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_BITS_LETTER = {v: k for k, v in _LETTER_BITS.items()}


class PauliParseError(ValueError):
    """Malformed Pauli string.  ``column`` is the 0-based offending index."""

    def __init__(self, message: str, column: int):
        super().__init__(f"{message} (column {column})")
        self.column = column


@dataclass(frozen=True)
class PauliOperator:
    phase_exp: int
    x_bits: tuple[int, ...]
    z_bits: tuple[int, ...]

    def __post_init__(self):
        x = tuple(int(b) for b in self.x_bits)
        z = tuple(int(b) for b in self.z_bits)
        if len(x) != len(z):
            raise ValueError(f"x and z parts differ in length: {len(x)} != {len(z)}")
        if len(x) < 1:
            raise ValueError("Pauli operator needs at least one qubit")
        if any(b not in (0, 1) for b in x + z):
            raise ValueError("bit vectors must be 0/1")
        object.__setattr__(self, "x_bits", x)
        object.__setattr__(self, "z_bits", z)
        object.__setattr__(self, "phase_exp", int(self.phase_exp) % 4)

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(0, (0,) * n, (0,) * n)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "PauliOperator":
        """Hermitian single-qubit Pauli ``letter`` acting on ``qubit`` of ``n``."""
        s = ["I"] * n
        s[qubit] = letter
        return pauli_from_string("".join(s))

    @property
    def n(self) -> int:
        return len(self.x_bits)

    @property
    def weight(self) -> int:
        return sum(1 for a, b in zip(self.x_bits, self.z_bits) if a or b)

    @property
    def key(self) -> int:
        """x||z read as a binary integer, x_0 most significant."""
        k = 0
        for b in self.x_bits + self.z_bits:
            k = (k << 1) | b
        return k

    @property
    def x_mask(self) -> int:
        """x bits as a basis-index mask (qubit 0 is the most significant bit)."""
        return _mask(self.x_bits)

    @property
    def z_mask(self) -> int:
        return _mask(self.z_bits)

    @property
    def bits(self) -> tuple[int, ...]:
        return self.x_bits + self.z_bits

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return mul(self, other)

    def __neg__(self) -> "PauliOperator":
        return PauliOperator(self.phase_exp + 2, self.x_bits, self.z_bits)

    def adjoint(self) -> "PauliOperator":
        """Inverse (= conjugate transpose) of the operator."""
        # (X Z)^dagger = Z X = (-1)^{x.z} X Z
        overlap = sum(a & b for a, b in zip(self.x_bits, self.z_bits))
        return PauliOperator(-self.phase_exp + 2 * overlap, self.x_bits, self.z_bits)

    inverse = adjoint

    def commutes(self, other: "PauliOperator") -> bool:
        return commutes(self, other)

    def strip_phase(self) -> "PauliOperator":
        return PauliOperator(0, self.x_bits, self.z_bits)

    def is_hermitian(self) -> bool:
        overlap = sum(a & b for a, b in zip(self.x_bits, self.z_bits))
        return (self.phase_exp + overlap) % 2 == 0

    def to_matrix(self) -> np.ndarray:
        """Dense ``2^n x 2^n`` matrix; intended for small n."""
        m = np.array([[1j**self.phase_exp]], dtype=complex)
        for a, b in zip(self.x_bits, self.z_bits):
            f = np.eye(2, dtype=complex)
            if a:
                f = f @ _SIGMA_X
            if b:
                f = f @ _SIGMA_Z
            m = np.kron(m, f)
        return m

    def to_string(self) -> str:
        """Signed string over {I,X,Y,Z}.

        Raises ValueError for operators whose phase is +-i once the Y letters
        are accounted for (these have no signed letter form).
        """
        n_y = sum(a & b for a, b in zip(self.x_bits, self.z_bits))
        rest = (self.phase_exp - n_y) % 4
        if rest % 2:
            raise ValueError("operator carries an overall +-i phase; no signed string form")
        return ("+" if rest == 0 else "-") + self.pattern()

    def pattern(self) -> str:
        """Letters only, phase dropped (``XZ`` pattern prints as ``Y``)."""
        return "".join(_BITS_LETTER[ab] for ab in zip(self.x_bits, self.z_bits))

    def __str__(self) -> str:
        n_y = sum(a & b for a, b in zip(self.x_bits, self.z_bits))
        rest = (self.phase_exp - n_y) % 4
        return ("+", "+i", "-", "-i")[rest] + self.pattern()

    def apply(self, states: np.ndarray, axis: int = 0) -> np.ndarray:
        """Apply the operator along ``axis`` of ``states`` without forming the matrix.

        ``states`` has length ``2^n`` along ``axis``; columns of a density
        matrix are transformed with ``axis=0``.
        """
        states = np.asarray(states)
        dim = 1 << self.n
        if states.shape[axis] != dim:
            raise ValueError(f"dimension {states.shape[axis]} does not match 2^{self.n}")
        idx = np.arange(dim)
        zsign = _parity_signs(idx, self.z_mask)
        # (X Z v)[j] = (Z v)[j ^ x]
        src = idx ^ self.x_mask
        coeff = (1j**self.phase_exp) * zsign[src]
        shape = [1] * states.ndim
        shape[axis] = dim
        return np.take(states, src, axis=axis) * coeff.reshape(shape)


def _mask(bits: Sequence[int]) -> int:
    m = 0
    for b in bits:
        m = (m << 1) | b
    return m


def _parity_signs(idx: np.ndarray, mask: int) -> np.ndarray:
    v = idx & mask
    parity = np.zeros_like(v)
    while np.any(v):
        parity ^= v & 1
        v = v >> 1
    return 1 - 2 * parity


def pauli_from_string(s: str) -> PauliOperator:
    """Parse a signed Pauli string such as ``"+XZZXI"`` or ``"-Y"``."""
    if not s:
        raise PauliParseError("empty Pauli string", 0)
    phase = 0
    start = 0
    if s[0] in "+-":
        phase = 0 if s[0] == "+" else 2
        start = 1
    if start == len(s):
        raise PauliParseError("sign without Pauli letters", start)
    x, z = [], []
    for col in range(start, len(s)):
        ch = s[col]
        if ch not in _LETTER_BITS:
            raise PauliParseError(f"illegal character {ch!r}", col)
        a, b = _LETTER_BITS[ch]
        x.append(a)
        z.append(b)
        if ch == "Y":
            phase += 1
    return PauliOperator(phase, tuple(x), tuple(z))


def _check_len(p: PauliOperator, q: PauliOperator) -> None:
    if p.n != q.n:
        raise ValueError(f"length mismatch: {p.n} != {q.n}")


def mul(p: PauliOperator, q: PauliOperator) -> PauliOperator:
    """Product ``p @ q`` with exact phase."""
    _check_len(p, q)
    # Z(b) X(c) = (-1)^{b.c} X(c) Z(b)
    swap = sum(a & b for a, b in zip(p.z_bits, q.x_bits)) % 2
    return PauliOperator(
        p.phase_exp + q.phase_exp + 2 * swap,
        tuple(a ^ b for a, b in zip(p.x_bits, q.x_bits)),
        tuple(a ^ b for a, b in zip(p.z_bits, q.z_bits)),
    )


def commutes(p: PauliOperator, q: PauliOperator) -> bool:
    _check_len(p, q)
    s = sum(a & b for a, b in zip(p.x_bits, q.z_bits)) + sum(a & b for a, b in zip(p.z_bits, q.x_bits))
    return s % 2 == 0


def weight(p: PauliOperator) -> int:
    return p.weight


def count_up_to_weight(n: int, w: int) -> int:
    return sum(comb(n, i) * 3**i for i in range(w + 1))


def enumerate_weight(n: int, w: int) -> list[PauliOperator]:
    """Phase-0 operators of weight exactly w, ascending by key."""
    ops = []
    for support in itertools.combinations(range(n), w):
        for letters in itertools.product(((1, 0), (0, 1), (1, 1)), repeat=w):
            x = [0] * n
            z = [0] * n
            for q, (a, b) in zip(support, letters):
                x[q], z[q] = a, b
            ops.append(PauliOperator(0, tuple(x), tuple(z)))
    ops.sort(key=lambda p: p.key)
    return ops


def enumerate_up_to_weight(n: int, w: int) -> Iterator[PauliOperator]:
    """Every phase-0 operator of weight <= w, ordered by (weight, key)."""
    if not 0 <= w <= n:
        raise ValueError(f"weight bound {w} outside [0, {n}]")
    for level in range(w + 1):
        yield from enumerate_weight(n, level)
