"""
Exact density-matrix simulation of encode -> noise -> syndrome measurement -> recovery.

The environment is never built: each position's channel acts through its
Kraus operators, which is the same map as the dilation after the partial
trace over the environment.  States live on 2^n dimensions, so n is capped.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .bound import BoundReport, binomial_bound, bounded_distance_bound, product_bound
from .channel import TOL, Channel, ChannelError, pauli_mass, validate
from .pauli import PauliOperator
from .stabilizer import DecodingTable, StabilizerCode, Syndrome, code_params, decoding_table

__all__ = [
    "MAX_QUBITS",
    "ZERO_BRANCH",
    "SimulationError",
    "BranchRecord",
    "SimulationReport",
    "parse_state_spec",
    "parse_mode",
    "codeword",
    "apply_product_channel",
    "syndrome_projectors",
    "error_correct",
    "fidelity",
    "average_fidelity",
    "is_density_matrix",
]

MAX_QUBITS = 12
ZERO_BRANCH = 1e-14
DOMINANCE_SLACK = 1e-9


class SimulationError(ValueError):
    pass


def parse_state_spec(spec: str | int | tuple) -> tuple[str, int]:
    """``"basis:3"`` -> ("basis", 3); ``"random:7"`` -> ("random", 7)."""
    if isinstance(spec, tuple):
        kind, val = spec
    elif isinstance(spec, int):
        kind, val = "basis", spec
    else:
        kind, _, val = spec.partition(":")
    if kind not in ("basis", "random"):
        raise SimulationError(f"state spec must be basis:<i> or random:<seed>, got {spec!r}")
    try:
        return kind, int(val)
    except ValueError:
        raise SimulationError(f"state spec needs an integer, got {spec!r}") from None


def parse_mode(mode: str | None) -> int | None:
    """``"full"`` -> None; ``"bounded:1"`` -> 1."""
    if mode is None or mode == "full":
        return None
    kind, _, val = str(mode).partition(":")
    if kind != "bounded" or not val.lstrip("-").isdigit():
        raise SimulationError(f"mode must be full or bounded:<t'>, got {mode!r}")
    return int(val)


def _cap(code: StabilizerCode) -> None:
    if code.n > MAX_QUBITS:
        raise SimulationError(f"{code.n} qubits exceeds the dense simulation cap of {MAX_QUBITS}")


def _project_code(code: StabilizerCode, v: np.ndarray) -> np.ndarray:
    for g in code.generators:
        v = 0.5 * (v + g.apply(v))
    return v


def codeword(code: StabilizerCode, spec: str | int | tuple = "basis:0") -> np.ndarray:
    """Normalized vector of the code space built from a seed vector.

    ``basis:i`` projects the computational basis vector |i>; ``random:s``
    projects a seeded complex Gaussian vector.
    """
    _cap(code)
    kind, val = parse_state_spec(spec)
    dim = 1 << code.n
    if kind == "basis":
        if not 0 <= val < dim:
            raise SimulationError(f"basis index {val} outside [0, {dim})")
        v = np.zeros(dim, dtype=complex)
        v[val] = 1.0
    else:
        rng = np.random.default_rng(val)
        v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    v = _project_code(code, v)
    norm = np.linalg.norm(v)
    if norm < 1e-8:
        raise SimulationError(f"{spec!r} is orthogonal to the code space; choose another basis index or seed")
    return v / norm


def is_density_matrix(rho: np.ndarray, tol: float = TOL) -> bool:
    rho = np.asarray(rho)
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        return False
    if abs(np.trace(rho) - 1) > tol:
        return False
    return np.linalg.eigvalsh(rho).min() >= -1e-9


def apply_product_channel(rho: np.ndarray, chs: Sequence[Channel], tol: float = TOL) -> np.ndarray:
    """Apply ``chs[i]`` to qubit i in sequence."""
    rho = np.asarray(rho, dtype=complex)
    n = len(chs)
    dim = 1 << n
    if rho.shape != (dim, dim):
        raise SimulationError(f"state of shape {rho.shape} does not match {n} channels")
    if n > MAX_QUBITS:
        raise SimulationError(f"{n} qubits exceeds the dense simulation cap of {MAX_QUBITS}")
    for i, ch in enumerate(chs):
        if ch.q != 2:
            raise ChannelError(f"channel {i} has local dimension {ch.q}; only qubits are simulated")
        report = validate(ch, tol)
        if not report.ok:
            raise ChannelError(f"channel {i} is not trace preserving (deviation {report.deviation:.3e})")
    for i, ch in enumerate(chs):
        left, right = 1 << i, 1 << (n - i - 1)
        t = rho.reshape(left, 2, right, left, 2, right)
        kraus = np.stack(ch.kraus)
        t = np.einsum("mab,xbyucv,mdc->xayudv", kraus, t, kraus.conj(), optimize=True)
        rho = t.reshape(dim, dim)
    return rho


@lru_cache(maxsize=8)
def _projectors(code: StabilizerCode) -> dict[Syndrome, np.ndarray]:
    dim = 1 << code.n
    out = {}
    for s in range(1 << code.r):
        bits = tuple((s >> (code.r - 1 - j)) & 1 for j in range(code.r))
        proj = np.eye(dim, dtype=complex)
        for b, g in zip(bits, code.generators):
            gp = g.apply(proj, axis=0)
            proj = 0.5 * (proj - gp if b else proj + gp)
        proj.setflags(write=False)
        out[bits] = proj
    return out


def syndrome_projectors(code: StabilizerCode) -> dict[Syndrome, np.ndarray]:
    """Pi_s = prod_j (I + (-1)^{s_j} g_j) / 2 for every syndrome s."""
    _cap(code)
    if code.r > MAX_QUBITS:
        raise SimulationError(f"{code.r} syndrome bits exceed the cap of {MAX_QUBITS}")
    return _projectors(code)


@dataclass(frozen=True)
class BranchRecord:
    syndrome: Syndrome
    probability: float
    fidelity: float | None  # None for branches below ZERO_BRANCH
    leader: PauliOperator
    ambiguous: bool
    beyond_radius: bool  # leader weight exceeds t' in bounded mode

    @property
    def leader_weight(self) -> int:
        return self.leader.weight

    def as_dict(self) -> dict:
        return {
            "syndrome": "".join(map(str, self.syndrome)),
            "probability": self.probability,
            "fidelity": self.fidelity,
            "leader": self.leader.pattern(),
            "leader_weight": self.leader_weight,
            "ambiguous": self.ambiguous,
            "skipped_by_bounded_mode": self.beyond_radius,
        }


def fidelity(phi: np.ndarray, rho: np.ndarray) -> float:
    """<phi| rho |phi>."""
    phi = np.asarray(phi)
    rho = np.asarray(rho)
    if rho.shape != (phi.size, phi.size):
        raise SimulationError(f"state of size {phi.size} does not match density matrix {rho.shape}")
    return float(np.real(np.vdot(phi, rho @ phi)))


def error_correct(
    rho: np.ndarray,
    code: StabilizerCode,
    table: DecodingTable,
    t_prime: int | None = None,
    phi: np.ndarray | None = None,
) -> list[tuple[BranchRecord, np.ndarray | None]]:
    """Measure the syndrome and apply the inverse leader on every branch.

    Returns ``(record, recovered_state)`` per syndrome; the recovered state is
    None for negligible branches.  Fidelities are filled in when ``phi`` is
    given.  With ``t_prime`` set, leaders heavier than t' are still applied
    and the branch is flagged.
    """
    if table.code != code:
        raise SimulationError("decoding table belongs to a different code")
    out = []
    for s, proj in syndrome_projectors(code).items():
        leader, ambiguous = table[s]
        prob = float(np.real(np.trace(proj @ rho)))
        beyond = t_prime is not None and leader.weight > t_prime
        if prob < ZERO_BRANCH:
            out.append((BranchRecord(s, max(prob, 0.0), None, leader, ambiguous, beyond), None))
            continue
        branch = proj @ rho @ proj / prob
        inv = leader.adjoint()
        # M^-1 rho (M^-1)^dag
        recovered = inv.apply(inv.apply(branch, axis=0).conj(), axis=1).conj()
        f = fidelity(phi, recovered) if phi is not None else None
        out.append((BranchRecord(s, prob, f, leader, ambiguous, beyond), recovered))
    return out


@dataclass
class SimulationReport:
    code: StabilizerCode
    n: int
    t: int
    t_prime: int | None
    state: str
    channels: list[str]
    branches: list[BranchRecord]
    average_fidelity: float
    p_values: list[float]
    bounds: dict[str, BoundReport | float] = field(default_factory=dict)

    @property
    def total_probability(self) -> float:
        return sum(b.probability for b in self.branches)

    @property
    def infidelity(self) -> float:
        return 1.0 - self.average_fidelity

    @property
    def epsilons(self) -> dict[str, float]:
        return {k: (v.epsilon if isinstance(v, BoundReport) else v) for k, v in self.bounds.items()}

    @property
    def slack(self) -> dict[str, float]:
        """average_fidelity - (1 - epsilon) per bound; negative means violated."""
        return {k: self.average_fidelity - (1.0 - e) for k, e in self.epsilons.items()}

    @property
    def dominance(self) -> dict[str, bool]:
        return {k: v >= -DOMINANCE_SLACK for k, v in self.slack.items()}

    @property
    def bounds_hold(self) -> bool:
        return all(self.dominance.values())

    def as_dict(self) -> dict:
        return {
            "code": str(self.code),
            "n": self.n,
            "t": self.t,
            "t_prime": self.t_prime,
            "state": self.state,
            "channels": self.channels,
            "p": self.p_values,
            "average_fidelity": self.average_fidelity,
            "infidelity": self.infidelity,
            "total_probability": self.total_probability,
            "bounds": {
                k: (v.as_dict() if isinstance(v, BoundReport) else {"label": k, "epsilon": v}) for k, v in self.bounds.items()
            },
            "slack": self.slack,
            "dominance": self.dominance,
            "bounds_hold": self.bounds_hold,
            "branches": [b.as_dict() for b in self.branches],
        }


def average_fidelity(
    code: StabilizerCode,
    chs: Channel | Sequence[Channel],
    phi_spec: str | int | tuple = "basis:0",
    mode: str | int | None = None,
    t: int | None = None,
    tol: float = TOL,
) -> SimulationReport:
    """Run the full pipeline and compare the syndrome-averaged fidelity with every bound.

    ``chs`` is a single channel (used on every qubit) or one per qubit.
    ``mode`` is ``"full"``/None or ``"bounded:<t'>"`` (an int is taken as t').
    """
    _cap(code)
    if isinstance(chs, Channel):
        chs = [chs] * code.n
    chs = list(chs)
    if len(chs) != code.n:
        raise SimulationError(f"{len(chs)} channels given for {code.n} qubits")
    t_prime = mode if isinstance(mode, int) else parse_mode(mode)
    if t is None:
        t = code_params(code).t
    if t_prime is not None and not 0 <= t_prime <= t:
        raise SimulationError(f"bounded-distance radius t'={t_prime} must lie in [0, t={t}]")
    masses = [pauli_mass(c, tol) for c in chs]
    ps = [min(max(m.p, 0.0), 1.0) for m in masses]

    phi = codeword(code, phi_spec)
    rho = np.outer(phi, phi.conj())
    rho = apply_product_channel(rho, chs, tol)
    table = decoding_table(code)
    results = error_correct(rho, code, table, t_prime, phi)

    records = [r for r, _ in results]
    avg = sum(r.probability * r.fidelity for r in records if r.fidelity is not None)

    p_max = max(ps)
    bounds: dict[str, BoundReport | float] = {
        "binomial": binomial_bound(code.n, t, p_max),
        "product": product_bound([(1.0 - p, p) for p in ps], t),
    }
    if t_prime is not None:
        bounds["bounded-distance"] = bounded_distance_bound(code.n, t_prime, p_max)
    kind, val = parse_state_spec(phi_spec)
    return SimulationReport(
        code=code,
        n=code.n,
        t=t,
        t_prime=t_prime,
        state=f"{kind}:{val}",
        channels=[c.label or "custom" for c in chs],
        branches=records,
        average_fidelity=float(avg),
        p_values=ps,
        bounds=bounds,
    )
