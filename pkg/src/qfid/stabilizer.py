"""
Stabilizer codes: construction, syndromes, distances and coset-leader decoding.

The code space is the joint +1 eigenspace of the generators *as signed*, so a
generator ``-ZZ`` selects the odd-parity subspace.  Everything that only
depends on the group "up to sign" works on the (x|z) bit patterns.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .pauli import (
    PauliOperator,
    PauliParseError,
    commutes,
    enumerate_up_to_weight,
    enumerate_weight,
    mul,
    pauli_from_string,
)

__all__ = [
    "CodeError",
    "StabilizerCode",
    "CodeParams",
    "DecodingTable",
    "build_code",
    "parse_code",
    "load_code",
    "bundled_codes",
    "syndrome",
    "in_stabilizer_mod_phase",
    "in_normalizer",
    "code_params",
    "coset_leader",
    "decoding_table",
    "verify_unique_correction",
]

MAX_TABLE_CHECKS = 20

Syndrome = tuple[int, ...]


class CodeError(ValueError):
    pass


class _GF2Basis:
    """Reduced echelon basis over GF(2), rows packed into Python ints."""

    def __init__(self):
        self.rows: dict[int, int] = {}  # pivot bit -> row

    def reduce(self, v: int) -> int:
        while v:
            top = v.bit_length() - 1
            row = self.rows.get(top)
            if row is None:
                return v
            v ^= row
        return 0

    def add(self, v: int) -> bool:
        r = self.reduce(v)
        if r == 0:
            return False
        self.rows[r.bit_length() - 1] = r
        return True


@dataclass(frozen=True)
class StabilizerCode:
    n: int
    k: int
    generators: tuple[PauliOperator, ...]
    name: str = field(default="", compare=False)

    @property
    def r(self) -> int:
        """Number of generators (= syndrome length)."""
        return len(self.generators)

    def _basis(self) -> _GF2Basis:
        return _stabilizer_basis(self)

    def __str__(self) -> str:
        label = self.name or "code"
        return f"{label} [[{self.n},{self.k}]]"


@lru_cache(maxsize=None)
def _stabilizer_basis(code: StabilizerCode) -> _GF2Basis:
    basis = _GF2Basis()
    for g in code.generators:
        basis.add(g.key)
    return basis


def build_code(gens: Sequence[PauliOperator], name: str = "") -> StabilizerCode:
    """Validate signed generators and return the code they stabilize."""
    gens = tuple(gens)
    if not gens:
        raise CodeError("at least one generator is required")
    n = gens[0].n
    for j, g in enumerate(gens):
        if g.n != n:
            raise CodeError(f"generator {j} has length {g.n}, expected {n}")
        if not g.is_hermitian():
            raise CodeError(f"generator {j} is not Hermitian (phase i^{g.phase_exp})")
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if not commutes(gens[i], gens[j]):
                raise CodeError(f"generators {i} and {j} do not commute")
    if len(gens) > n:
        raise CodeError(f"{len(gens)} generators on {n} qubits cannot be independent")
    basis = _GF2Basis()
    for j, g in enumerate(gens):
        if not basis.add(g.key):
            raise CodeError(f"generator {j} is GF(2)-dependent on the preceding generators")
    return StabilizerCode(n=n, k=n - len(gens), generators=gens, name=name)


def parse_code(text: str, name: str = "") -> StabilizerCode:
    """Parse the text code format: '#' comments, one signed Pauli string per line.

    Errors name the 1-based line and column.
    """
    gens = []
    width = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            g = pauli_from_string(line)
        except PauliParseError as exc:
            col = raw.index(line) + exc.column + 1
            raise CodeError(f"line {lineno}, column {col}: {exc.args[0].rsplit(' (', 1)[0]}") from None
        if width is None:
            width = g.n
        elif g.n != width:
            raise CodeError(f"line {lineno}: length {g.n} differs from {width}")
        gens.append(g)
    return build_code(gens, name=name)


def bundled_codes() -> list[str]:
    return sorted(p.name for p in resources.files("qfid.data").iterdir() if p.name.endswith(".stab"))


def load_code(path: str | Path) -> StabilizerCode:
    """Load a code file; a bare bundled name such as ``steane.stab`` also works."""
    p = Path(path)
    if p.exists():
        return parse_code(p.read_text(), name=p.stem)
    name = p.name if p.name.endswith(".stab") else p.name + ".stab"
    res = resources.files("qfid.data") / name
    if res.is_file():
        return parse_code(res.read_text(), name=Path(name).stem)
    raise FileNotFoundError(f"no code file {path!s} (bundled: {', '.join(bundled_codes())})")


def _check(code: StabilizerCode, p: PauliOperator) -> None:
    if p.n != code.n:
        raise ValueError(f"operator length {p.n} does not match code length {code.n}")


def syndrome(code: StabilizerCode, p: PauliOperator) -> Syndrome:
    _check(code, p)
    return tuple(0 if commutes(p, g) else 1 for g in code.generators)


def in_stabilizer_mod_phase(code: StabilizerCode, p: PauliOperator) -> bool:
    _check(code, p)
    return code._basis().reduce(p.key) == 0


def in_normalizer(code: StabilizerCode, p: PauliOperator) -> bool:
    return not any(syndrome(code, p))


@dataclass(frozen=True)
class CodeParams:
    """Distances of a code.

    When ``complete`` is false the search ran out of weight budget and any
    missing minimum is reported as ``budget + 1``, i.e. a lower bound.
    """

    d: int
    d_prime: int
    t: int
    pure: bool
    complete: bool = True


def code_params(code: StabilizerCode, weight_budget: int | None = None) -> CodeParams:
    budget = code.n if weight_budget is None else weight_budget
    if not 0 <= budget <= code.n:
        raise ValueError(f"weight budget {budget} outside [0, {code.n}]")
    d = d_prime = None
    for p in enumerate_up_to_weight(code.n, budget):
        if p.weight == 0 or not in_normalizer(code, p):
            continue
        if d_prime is None:
            d_prime = p.weight
        if d is None and not in_stabilizer_mod_phase(code, p):
            d = p.weight
        if d is not None:
            break
    complete = d is not None and d_prime is not None
    if d is None:
        if code.k == 0:
            raise CodeError("distance undefined for zero-dimensional logical space")
        d = budget + 1
    if d_prime is None:
        d_prime = budget + 1
    return CodeParams(d=d, d_prime=d_prime, t=(d - 1) // 2, pure=complete and d == d_prime, complete=complete)


@dataclass(frozen=True)
class DecodingTable:
    """Syndrome -> (minimum-weight leader, ambiguous)."""

    code: StabilizerCode
    entries: Mapping[Syndrome, tuple[PauliOperator, bool]]

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, s: Syndrome) -> tuple[PauliOperator, bool]:
        return self.entries[tuple(s)]

    def leader(self, s: Syndrome) -> PauliOperator:
        return self.entries[tuple(s)][0]

    def items(self):
        return self.entries.items()


def _search(code: StabilizerCode, wanted: Iterable[Syndrome] | None) -> dict[Syndrome, tuple[PauliOperator, bool]]:
    target = None if wanted is None else set(wanted)
    total = 1 << code.r if target is None else len(target)
    found: dict[Syndrome, list] = {}
    for w in range(code.n + 1):
        level_hits: dict[Syndrome, list] = {}
        for p in enumerate_weight(code.n, w):
            s = syndrome(code, p)
            if s in found or (target is not None and s not in target):
                continue
            hit = level_hits.get(s)
            if hit is None:
                level_hits[s] = [p, False]
            elif not hit[1] and not in_stabilizer_mod_phase(code, mul(hit[0], p)):
                hit[1] = True
        found.update(level_hits)
        if len(found) == total:
            break
    return {s: (v[0], v[1]) for s, v in found.items()}


def coset_leader(code: StabilizerCode, s: Sequence[int]) -> tuple[PauliOperator, bool]:
    s = tuple(int(b) for b in s)
    if len(s) != code.r:
        raise ValueError(f"syndrome length {len(s)} does not match {code.r} generators")
    hit = _search(code, [s])
    if s not in hit:
        raise RuntimeError(f"no operator with syndrome {s}; the code is malformed")
    return hit[s]


@lru_cache(maxsize=32)
def decoding_table(code: StabilizerCode) -> DecodingTable:
    if code.r > MAX_TABLE_CHECKS:
        raise CodeError(f"{code.r} syndrome bits exceed the table cap of {MAX_TABLE_CHECKS}")
    entries = _search(code, None)
    if len(entries) != 1 << code.r:
        raise RuntimeError("decoding table incomplete; the code is malformed")
    return DecodingTable(code=code, entries=dict(sorted(entries.items())))


def verify_unique_correction(code: StabilizerCode, params: CodeParams, table: DecodingTable) -> bool:
    """Exhaustively confirm that every error of weight <= t is undone by its leader up to S."""
    if not params.complete:
        raise ValueError("exact code parameters are required")
    for p in enumerate_up_to_weight(code.n, params.t):
        leader = table.leader(syndrome(code, p))
        if not in_stabilizer_mod_phase(code, mul(leader.adjoint(), p)):
            return False
    return True
