"""
Single-site channels in Kraus form and their generalized-Pauli mass.

For local dimension q the operator basis is ``B_ij = C^i D^j`` with ``C`` the
cyclic shift ``|a> -> |a+1 mod q>`` and ``D`` the clock ``|a> -> w^a |a>``,
``w = exp(2 pi i / q)``.  For q = 2 this is {I, sigma_x, sigma_z,
sigma_x sigma_z}.

Expanding each Kraus operator as ``K_m = sum_ij c_{m,ij} B_ij`` gives, for the
canonical dilation ``U|psi,0_E> = sum_m K_m|psi> |m>``, environment vectors
``L_ij|0_E> = sum_m c_{m,ij} |m>``.  The mass of ``B_ij`` is the squared norm
of that vector and the total off-identity mass is the error parameter ``p``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

__all__ = [
    "TOL",
    "ChannelError",
    "Channel",
    "ValidationReport",
    "PauliMass",
    "pauli_basis",
    "validate",
    "pauli_mass",
    "make_channel",
    "parse_channel_kind",
    "random_channel",
    "remix",
    "dilation",
    "dilation_masses",
    "product_masses",
    "load_channel",
    "dump_channel",
    "channel_to_json",
    "channel_from_json",
]

TOL = 1e-10


class ChannelError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Channel:
    q: int
    kraus: tuple[np.ndarray, ...]
    label: str = ""

    def __post_init__(self):
        mats = tuple(np.array(k, dtype=complex) for k in self.kraus)
        if not mats:
            raise ChannelError("a channel needs at least one Kraus operator")
        if self.q < 2:
            raise ChannelError(f"local dimension must be >= 2, got {self.q}")
        for m, k in enumerate(mats):
            if k.shape != (self.q, self.q):
                raise ChannelError(f"Kraus operator {m} has shape {k.shape}, expected ({self.q}, {self.q})")
            k.setflags(write=False)
        object.__setattr__(self, "kraus", mats)

    @property
    def rank(self) -> int:
        return len(self.kraus)

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        return sum(k @ rho @ k.conj().T for k in self.kraus)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    deviation: float
    tolerance: float

    def __bool__(self) -> bool:
        return self.ok


def validate(ch: Channel, tol: float = TOL) -> ValidationReport:
    """Check completeness sum_m K_m^dag K_m = I in the max-abs norm."""
    s = sum(k.conj().T @ k for k in ch.kraus)
    dev = float(np.max(np.abs(s - np.eye(ch.q))))
    return ValidationReport(ok=dev <= tol, deviation=dev, tolerance=tol)


def _shift(q: int) -> np.ndarray:
    return np.roll(np.eye(q, dtype=complex), 1, axis=0)


def _clock(q: int) -> np.ndarray:
    return np.diag(np.exp(2j * np.pi * np.arange(q) / q))


def pauli_basis(q: int) -> np.ndarray:
    """Array ``B[i, j] = C^i D^j`` of shape (q, q, q, q).

    For q = 2 the clock root is -1, so ``B[0, 1]`` is exactly sigma_z.
    """
    c, d = _shift(q), _clock(q)
    if q == 2:
        d = np.diag([1.0, -1.0]).astype(complex)
    out = np.empty((q, q, q, q), dtype=complex)
    ci = np.eye(q, dtype=complex)
    for i in range(q):
        dj = np.eye(q, dtype=complex)
        for j in range(q):
            out[i, j] = ci @ dj
            dj = dj @ d
        ci = ci @ c
    return out


@dataclass(frozen=True)
class PauliMass:
    q: int
    masses: np.ndarray  # masses[i, j] = mass of C^i D^j

    @property
    def ell0(self) -> float:
        return float(self.masses[0, 0])

    @property
    def p(self) -> float:
        return float(self.masses.sum() - self.masses[0, 0])

    @property
    def ell1(self) -> float:
        return self.p

    @property
    def total(self) -> float:
        return float(self.masses.sum())


def _coefficients(ch: Channel) -> np.ndarray:
    """c[m, i, j] = Tr(B_ij^dag K_m) / q."""
    basis = pauli_basis(ch.q)
    kraus = np.stack(ch.kraus)
    return np.einsum("ijab,mab->mij", basis.conj(), kraus) / ch.q


def pauli_mass(ch: Channel, tol: float = TOL) -> PauliMass:
    report = validate(ch, tol)
    if not report.ok:
        raise ChannelError(f"channel is not trace preserving (deviation {report.deviation:.3e})")
    c = _coefficients(ch)
    return PauliMass(q=ch.q, masses=np.sum(np.abs(c) ** 2, axis=0))


_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)
_I2 = np.eye(2, dtype=complex)


def _in_range(name: str, value: float, lo: float, hi: float) -> None:
    if not lo <= value <= hi:
        raise ChannelError(f"{name}={value} outside [{lo}, {hi}]")


def random_channel(seed: int, r: int, q: int = 2) -> Channel:
    """r-Kraus channel cut from a Haar-random isometry C^q -> C^q (x) C^r."""
    if r < 1:
        raise ChannelError(f"Kraus rank must be >= 1, got {r}")
    rng = np.random.default_rng(seed)
    dim = q * r
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    u, tri = np.linalg.qr(z)
    u = u * (np.diag(tri) / np.abs(np.diag(tri)))
    iso = u[:, :q]
    return Channel(q, tuple(iso[m * q : (m + 1) * q, :] for m in range(r)), label=f"random(seed={seed}, r={r})")


def make_channel(kind: str, *args: float, **params: float) -> Channel:
    """Standard channels by name.

    kinds: identity, depolarizing(lam), bit_flip(f), phase_damping(gamma),
    amplitude_damping(gamma), x_rotation(theta), random(seed, r).
    """
    kind = kind.replace("-", "_")
    vals = list(args) + list(params.values())

    def arg(i: int = 0) -> float:
        if len(vals) <= i:
            raise ChannelError(f"channel {kind!r} needs {i + 1} parameter(s)")
        return float(vals[i])

    if kind == "identity":
        return Channel(2, (_I2,), label="identity")
    if kind == "depolarizing":
        lam = arg()
        _in_range("lambda", lam, 0.0, 4.0 / 3.0)
        a = np.sqrt(1 - 3 * lam / 4)
        b = np.sqrt(lam / 4)
        return Channel(2, (a * _I2, b * _SX, b * _SY, b * _SZ), label=f"depolarizing({lam:g})")
    if kind == "bit_flip":
        f = arg()
        _in_range("f", f, 0.0, 1.0)
        return Channel(2, (np.sqrt(1 - f) * _I2, np.sqrt(f) * _SX), label=f"bit_flip({f:g})")
    if kind == "phase_damping":
        g = arg()
        _in_range("gamma", g, 0.0, 1.0)
        k0 = np.diag([1.0, np.sqrt(1 - g)])
        k1 = np.diag([0.0, np.sqrt(g)])
        return Channel(2, (k0, k1), label=f"phase_damping({g:g})")
    if kind == "amplitude_damping":
        g = arg()
        _in_range("gamma", g, 0.0, 1.0)
        k0 = np.diag([1.0, np.sqrt(1 - g)])
        k1 = np.array([[0.0, np.sqrt(g)], [0.0, 0.0]])
        return Channel(2, (k0, k1), label=f"amplitude_damping({g:g})")
    if kind == "x_rotation":
        th = arg()
        return Channel(2, (np.cos(th) * _I2 + 1j * np.sin(th) * _SX,), label=f"x_rotation({th:g})")
    if kind == "random":
        seed = int(arg(0))
        r = int(arg(1)) if len(vals) > 1 else 2
        q = int(arg(2)) if len(vals) > 2 else 2
        return random_channel(seed, r, q)
    raise ChannelError(f"unknown channel kind {kind!r}")


def parse_channel_kind(text: str) -> Channel:
    """``"depolarizing:0.04"`` -> make_channel("depolarizing", 0.04)."""
    name, *rest = text.split(":")
    try:
        vals = [float(v) for v in rest]
    except ValueError as exc:
        raise ChannelError(f"bad channel parameters in {text!r}") from exc
    return make_channel(name, *vals)


def remix(ch: Channel, v: np.ndarray, tol: float = TOL) -> Channel:
    """Kraus operators ``K'_m = sum_n V[m, n] K_n`` for an isometry V."""
    v = np.asarray(v, dtype=complex)
    if v.ndim != 2 or v.shape[1] != ch.rank or v.shape[0] < v.shape[1]:
        raise ChannelError(f"remixing matrix has shape {v.shape}; need (>= {ch.rank}, {ch.rank})")
    dev = np.max(np.abs(v.conj().T @ v - np.eye(ch.rank)))
    if dev > tol:
        raise ChannelError(f"remixing matrix is not an isometry (deviation {dev:.3e})")
    kraus = np.einsum("mn,nab->mab", v, np.stack(ch.kraus))
    return Channel(ch.q, tuple(kraus), label=ch.label)


def dilation(ch: Channel, tol: float = TOL) -> np.ndarray:
    """Unitary on system (x) environment with U|psi>|0_E> = sum_m K_m|psi>|m>.

    The environment dimension is the Kraus rank, padded to at least 2.  Index
    order is ``system * dim_E + env``.
    """
    report = validate(ch, tol)
    if not report.ok:
        raise ChannelError(f"channel is not trace preserving (deviation {report.deviation:.3e})")
    q, r = ch.q, max(ch.rank, 2)
    dim = q * r
    u = np.zeros((dim, dim), dtype=complex)
    # columns |s>|0_E>
    for s in range(q):
        col = np.zeros((q, r), dtype=complex)
        for m, k in enumerate(ch.kraus):
            col[:, m] = k[:, s]
        u[:, s * r] = col.reshape(dim)
    fixed = [s * r for s in range(q)]
    free = [c for c in range(dim) if c not in fixed]
    # orthonormal completion from the complement of the fixed columns
    _, _, vh = np.linalg.svd(u[:, fixed].conj().T)
    complement = vh[q:].conj().T
    u[:, free] = complement
    return u


def dilation_masses(u: np.ndarray, q: int) -> np.ndarray:
    """Squared norms ``||L_ij 0_E||^2`` read back from a dilation unitary.

    Uses ``L_ij = Tr_sys[(B_ij^dag (x) I) U] / q``.
    """
    r = u.shape[0] // q
    basis = pauli_basis(q)
    blocks = u.reshape(q, r, q, r)  # (sys_out, env_out, sys_in, env_in)
    ell = np.einsum("ijba,beaf->ijef", basis.conj(), blocks) / q
    vec0 = ell[:, :, :, 0]
    return np.sum(np.abs(vec0) ** 2, axis=2)


def channel_to_json(ch: Channel) -> str:
    """Serialize with 17 significant digits per component."""

    def num(x: float) -> str:
        s = f"{x:.17g}"
        return s if any(c in s for c in ".eni") else s + ".0"

    mats = []
    for k in ch.kraus:
        rows = []
        for row in k:
            rows.append("[" + ", ".join(f"[{num(z.real)}, {num(z.imag)}]" for z in row) + "]")
        mats.append("    [\n      " + ",\n      ".join(rows) + "\n    ]")
    return '{\n  "q": %d,\n  "kraus": [\n%s\n  ]\n}\n' % (ch.q, ",\n".join(mats))


def channel_from_json(text: str, label: str = "") -> Channel:
    try:
        obj = json.loads(text)
        q = int(obj["q"])
        kraus = []
        for m, mat in enumerate(obj["kraus"]):
            arr = np.array(mat, dtype=float)
            if arr.shape != (q, q, 2):
                raise ChannelError(f"Kraus matrix {m} has shape {arr.shape[:2]}, expected ({q}, {q}) of [re, im]")
            kraus.append(arr[..., 0] + 1j * arr[..., 1])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ChannelError):
            raise
        raise ChannelError(f"malformed channel JSON: {exc}") from exc
    return Channel(q, tuple(kraus), label=label)


def load_channel(path: str | Path) -> Channel:
    p = Path(path)
    return channel_from_json(p.read_text(), label=p.stem)


def dump_channel(ch: Channel, path: str | Path) -> None:
    Path(path).write_text(channel_to_json(ch))


def product_masses(chs: Sequence[Channel], tol: float = TOL) -> list[PauliMass]:
    return [pauli_mass(c, tol) for c in chs]
