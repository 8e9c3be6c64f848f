import pytest

from qfid.stabilizer import load_code

FIVE = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]
STEANE = ["IIIXXXX", "IXXIIXX", "XIXIXIX", "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ"]
FOUR_TWO_TWO = ["XXXX", "ZZZZ"]


@pytest.fixture(scope="session")
def five_qubit():
    return load_code("five_qubit.stab")


@pytest.fixture(scope="session")
def steane():
    return load_code("steane.stab")


@pytest.fixture(scope="session")
def four_two_two():
    return load_code("four_two_two.stab")


# Channel grid shared by the dominance tests and the acceptance suite.
GRID = {
    "depolarizing": [("depolarizing", lam) for lam in (0.004, 0.01, 0.04, 0.1)],
    "bit_flip": [("bit_flip", f) for f in (0.01, 0.05)],
    "amplitude_damping": [("amplitude_damping", g) for g in (0.01, 0.1)],
    "phase_damping": [("phase_damping", g) for g in (0.01, 0.1)],
    "x_rotation": [("x_rotation", th) for th in (0.05, 0.1, 0.3)],
    "random": [("random", seed, 3) for seed in range(20)],
}


def grid_states(code, n_basis=2, seeds=(1, 2)):
    """Two basis codewords that are not parallel, plus two seeded random ones."""
    import numpy as np

    from qfid.simulator import SimulationError, codeword

    picked, vecs = [], []
    for i in range(1 << code.n):
        try:
            v = codeword(code, f"basis:{i}")
        except SimulationError:
            continue
        if all(abs(np.vdot(u, v)) < 1 - 1e-9 for u in vecs):
            picked.append(f"basis:{i}")
            vecs.append(v)
        if len(picked) == n_basis:
            break
    return picked + [f"random:{s}" for s in seeds]


ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = []


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line per acceptance criterion and assert it."""

    def record(number, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
        request.config.stash[ACCEPTANCE].append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
