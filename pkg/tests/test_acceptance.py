"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""
import time
from math import floor

import numpy as np
from scipy.stats import unitary_group

from qfid.bound import asymptotic_bound, binomial_bound, bounded_distance_bound, iid_product_bound, sweep_asymptotic
from qfid.channel import Channel, make_channel, pauli_mass, random_channel, remix
from qfid.simulator import average_fidelity
from qfid.stabilizer import code_params, decoding_table, load_code, verify_unique_correction

from conftest import GRID, grid_states

SLACK = 1e-9


def _best_time(fn, repeats=20):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def _dominance_suite(code_name, families):
    """Worst slack of F - (1 - binomial eps) over families x grid codewords."""
    code = load_code(code_name)
    states = grid_states(code)
    worst = (float("inf"), None)
    for family in families:
        for spec in GRID[family]:
            ch = make_channel(*spec)
            p = pauli_mass(ch).p
            for state in states:
                report = average_fidelity(code, ch, state)
                slack = report.average_fidelity - (1 - binomial_bound(code.n, 1, p).epsilon)
                if slack < worst[0]:
                    worst = (slack, (spec, state))
    return worst, len(states)


def test_criterion_1_example_reproduction(criterion):
    e1 = binomial_bound(25, 3, 0.01).epsilon
    e2 = binomial_bound(25, 3, 0.001).epsilon
    r1, r2 = abs(e1 / 1.32e-4 - 1), abs(e2 / 1.27e-8 - 1)
    t1 = _best_time(lambda: binomial_bound(25, 3, 0.01))
    t2 = _best_time(lambda: binomial_bound(25, 3, 0.001))
    ok = r1 <= 0.01 and r2 <= 0.01 and t1 < 1e-3 and t2 < 1e-3
    criterion(1, ok, f"eps={e1:.6g} (rel {r1:.2g}), eps={e2:.6g} (rel {r2:.2g}); {t1 * 1e3:.3f} ms, {t2 * 1e3:.3f} ms")


def test_criterion_2_five_qubit_dominance(criterion):
    start = time.perf_counter()
    (worst, where), n_states = _dominance_suite("five_qubit", list(GRID))
    elapsed = time.perf_counter() - start
    ok = worst >= -SLACK and elapsed < 60 and n_states == 4
    criterion(2, ok, f"[[5,1,3]] worst slack {worst:.3e} at {where}; {elapsed:.1f} s")


def test_criterion_3_steane_dominance(criterion):
    start = time.perf_counter()
    (worst, where), n_states = _dominance_suite("steane", ["depolarizing", "x_rotation"])
    elapsed = time.perf_counter() - start
    ok = worst >= -SLACK and elapsed < 300 and n_states == 4
    criterion(3, ok, f"Steane worst slack {worst:.3e} at {where}; {elapsed:.1f} s")


def test_criterion_4_mass_conservation(criterion):
    dev = 0.0
    for seed in range(100):
        dev = max(dev, abs(pauli_mass(random_channel(seed, 1 + seed % 4, 2)).total - 1))
    for seed in range(20):
        dev = max(dev, abs(pauli_mass(random_channel(1000 + seed, 1 + seed % 4, 3)).total - 1))
    drift = 0.0
    for seed in range(100):
        ch = random_channel(2000 + seed, 3)
        v = unitary_group.rvs(3 + seed % 3, random_state=seed)[:, :3]
        drift = max(drift, np.max(np.abs(pauli_mass(remix(ch, v)).masses - pauli_mass(ch).masses)))
    ok = dev <= 1e-10 and drift <= 1e-10
    criterion(4, ok, f"max |sum m - 1| = {dev:.2e}, max remix drift = {drift:.2e}")


def test_criterion_5_code_parameters(criterion):
    expected = {"five_qubit": (3, 3), "steane": (3, 3), "four_two_two": (2, 2)}
    parts, ok = [], True
    for name, want in expected.items():
        code = load_code(name)
        start = time.perf_counter()
        params = code_params(code)
        elapsed = time.perf_counter() - start
        ok &= (params.d, params.d_prime) == want and params.complete and elapsed < 10
        parts.append(f"{name} ({params.d},{params.d_prime}) {elapsed:.2f}s")
    table = decoding_table(load_code("five_qubit"))
    weights = sorted(m.weight for m, _ in table.entries.values())
    patterns = {m.pattern() for m, _ in table.entries.values()}
    ok &= weights == [0] + [1] * 15 and len(patterns) == 16
    criterion(5, ok, "; ".join(parts) + f"; five-qubit table weights {weights.count(0)}x0 + {weights.count(1)}x1")


def test_criterion_6_unique_correction(criterion):
    results = {}
    for name in ("five_qubit", "steane", "four_two_two"):
        code = load_code(name)
        results[name] = verify_unique_correction(code, code_params(code), decoding_table(code))
    criterion(6, all(results.values()), ", ".join(f"{k}={v}" for k, v in results.items()))


def test_criterion_7_dominance_chain(criterion):
    rng = np.random.default_rng(7)
    worst = float("inf")
    for _ in range(1000):
        n = int(rng.integers(1, 31))
        t = int(rng.integers(0, n + 1))
        p = float(rng.uniform(0.0, 1.0))
        prod = iid_product_bound(n, t, p)
        eps = binomial_bound(n, t, p).epsilon
        asym = asymptotic_bound(n, t, p)
        worst = min(worst, eps - prod, asym - eps)
    criterion(7, worst >= -1e-12, f"1000 triples, worst slack {worst:.3e}")


def test_criterion_8_asymptotic_sweep(criterion):
    alpha, p = 0.2, 0.01
    points = sweep_asymptotic(alpha, p, range(10, 201, 10))
    checked = [pt for pt in points if pt.t / pt.n >= alpha]
    chain_ok = all(pt.epsilon <= pt.chain for pt in checked)
    at100 = next(pt for pt in points if pt.n == 100)
    ok = chain_ok and at100.epsilon < 1e-6 and all(pt.t == floor(alpha * pt.n) for pt in points)
    criterion(8, ok, f"{len(checked)}/{len(points)} points checked against chain; eps(n=100)={at100.epsilon:.3e}")


def test_criterion_9_bounded_distance(criterion):
    code = load_code("five_qubit")
    ch = make_channel("depolarizing", 0.04)
    p = pauli_mass(ch).p
    worst = float("inf")
    for t_prime in (0, 1):
        eps = bounded_distance_bound(5, t_prime, p).epsilon
        for state in grid_states(code):
            report = average_fidelity(code, ch, state, mode=f"bounded:{t_prime}")
            worst = min(worst, report.average_fidelity - (1 - eps))
    criterion(9, worst >= 0, f"p={p:.4g}, worst slack {worst:.3e} over t' in {{0, 1}}")


def test_criterion_10_exact_correctability(criterion):
    paulis = {
        "X": np.array([[0, 1], [1, 0]], dtype=complex),
        "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
        "Z": np.diag([1.0, -1.0]).astype(complex),
    }
    ident = make_channel("identity")
    worst, runs = 0.0, 0
    for name in ("five_qubit", "steane"):
        code = load_code(name)
        for q in range(code.n):
            for m in paulis.values():
                chs = [ident] * code.n
                chs[q] = Channel(2, (m,))
                for state in ("basis:0", "random:1"):
                    worst = max(worst, abs(1 - average_fidelity(code, chs, state).average_fidelity))
                    runs += 1
    criterion(10, worst <= 1e-9, f"{runs} runs, max |1 - F| = {worst:.2e}")
