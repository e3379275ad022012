"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``criterion N: PASS`` or ``criterion N: FAIL``
line with the measured numbers; run with ``pytest tests/test_acceptance.py -s``
to see them.
"""

import math
import time

import numpy as np
import pytest

from conftest import e0_e1_reference, random_state
from vacdistill.distill import TwirlConfig, distillation, run_distillation, theta_for, twirl_round
from vacdistill.evolve import Schedule, adiabatic_trajectory, evolve_constant, run_adiabatic
from vacdistill.hamlib import eig_hermitian, expm_exact, to_dense
from vacdistill.harness import ExperimentConfig, distilled_states, run_table
from vacdistill.models import (
    ONE_QUBIT,
    SCHWINGER,
    ModelSpec,
    analytic_ground,
    measurement_variance,
    observable,
    target_hamiltonian,
)
from vacdistill.statevec import RegisterLayout, StateVector, apply_unitary, basis_state, expectation

SQ2 = math.sqrt(2)
W = 2 * SQ2
ONE = ModelSpec(ONE_QUBIT, 1.0)
TWO_J1 = ModelSpec(SCHWINGER, 1.0)
TWO_J2 = ModelSpec(SCHWINGER, 2.0)
TABLE_SPECS = (ONE, TWO_J1, TWO_J2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0]).astype(complex)


def verdict(n: int, ok: bool, detail: str):
    print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def test_criterion_1_analytic_ground_truths():
    start = time.perf_counter()
    worst = 0.0
    cases = [ModelSpec(ONE_QUBIT, j) for j in (0.0, 0.5, 1.0, 2.0, 5.0)]
    cases += [ModelSpec(SCHWINGER, j) for j in (0.5, 1.0, 2.0)]
    for spec in cases:
        es = eig_hermitian(to_dense(target_hamiltonian(spec)))
        e0, vev = analytic_ground(spec)
        got_vev = expectation(StateVector(es.ground_state), observable(spec))
        worst = max(worst, abs(es.ground_energy - e0), abs(es.ground_energy + math.sqrt(1 + spec.j**2)),
                    abs(got_vev - vev))
    # closed-form VEVs quoted for the two-site model
    worst = max(worst, abs(analytic_ground(TWO_J1)[1] + 1 / SQ2), abs(analytic_ground(TWO_J2)[1] + 2 / math.sqrt(5)))
    elapsed = time.perf_counter() - start
    verdict(1, worst < 1e-10 and elapsed < 1.0, f"max error {worst:.2e} (tol 1e-10), {elapsed:.3f} s (limit 1 s)")


def test_criterion_2_adiabatic_preparation():
    start = time.perf_counter()
    psi0 = run_adiabatic(ONE, Schedule.build(36.0, 1 / 24))
    z = expectation(psi0, observable(ONE))
    elapsed = time.perf_counter() - start
    verdict(2, abs(z + 0.7124) <= 0.005 and elapsed < 5.0,
            f"<Z> = {z:.6f} (target -0.7124 +/- 0.005), {elapsed:.3f} s (limit 5 s)")


def _round_one(spec):
    psi0 = run_adiabatic(spec, Schedule.build(36.0, 1 / 24))
    return run_distillation(psi0, spec, TwirlConfig(1, "trotter", 100), observable(spec))[1]


def test_criterion_3_one_twirl_restores_vev():
    start = time.perf_counter()
    targets = {ONE: -SQ2 / 2, TWO_J1: -SQ2 / 2, TWO_J2: -2 / math.sqrt(5)}
    errs = {spec: abs(_round_one(spec).cond_expect - v) for spec, v in targets.items()}
    elapsed = time.perf_counter() - start
    detail = ", ".join(f"{s.kind} J={s.j:g}: {e:.2e}" for s, e in errs.items())
    verdict(3, max(errs.values()) <= 2e-4 and elapsed < 10.0, f"{detail} (tol 2e-4), {elapsed:.3f} s (limit 10 s)")


def test_criterion_4_exclusion_fraction():
    excluded = {spec: 1.0 - _round_one(spec).active_prob for spec in TABLE_SPECS}
    detail = ", ".join(f"{s.kind} J={s.j:g}: {e:.3e}" for s, e in excluded.items())
    verdict(4, all(1e-6 <= e <= 1e-4 for e in excluded.values()), f"{detail} (range [1e-6, 1e-4])")


def _seed_sweep(variances, shots=10**6, n_seeds=20):
    """Fraction of seeds whose round-one sampled mean lies within 4 sigma/sqrt(n) of the exact value."""
    rates = {}
    for spec in TABLE_SPECS:
        hits = 0
        for seed in range(n_seeds):
            row = run_table(ExperimentConfig(model=spec, rounds=1, shots=shots, seed=seed))[1]
            bound = 4 * math.sqrt(variances[spec] / row.active_count)
            hits += abs(row.mean - row.exact_cond_expect) <= bound
        rates[spec] = hits / n_seeds
    return rates


def test_criterion_5_statistical_reproduction():
    start = time.perf_counter()
    quoted = {ONE: 0.5, TWO_J1: (2 + SQ2) / 4, TWO_J2: 0.2}
    rates = _seed_sweep(quoted)
    elapsed = time.perf_counter() - start
    detail = ", ".join(f"{s.kind} J={s.j:g}: {r:.0%}" for s, r in rates.items())
    verdict(5, min(rates.values()) >= 0.95 and elapsed < 120.0,
            f"seeds within 4 sigma/sqrt(n): {detail} (need 95%), {elapsed:.1f} s (limit 120 s)")


def test_criterion_5_with_state_variances():
    # the quoted two-site J=1 variance exceeds the true one (1/2); repeat with variances computed from the states
    true = {spec: measurement_variance(spec) for spec in TABLE_SPECS}
    rates = _seed_sweep(true)
    detail = ", ".join(f"{s.kind} J={s.j:g}: sigma^2={true[s]:.4f} {r:.0%}" for s, r in rates.items())
    verdict(5, min(rates.values()) >= 0.95, f"(state-derived variances) {detail}")


def test_criterion_6_closed_forms():
    rng = np.random.default_rng(2024)
    h = target_hamiltonian(ONE)
    worst = 0.0
    for _ in range(20):
        psi = StateVector(random_state(rng, 1))
        t = rng.uniform(0, 10)
        lhs = expectation(apply_unitary(psi, [0], expm_exact(h, t)), observable(ONE))
        op = 0.5 * (X + Z) + Y * np.sin(W * t) / SQ2 + 0.5 * (Z - X) * np.cos(W * t)
        worst = max(worst, abs(lhs - (psi.amps.conj() @ op @ psi.amps).real))
        e0, e1 = e0_e1_reference()
        a = math.sqrt(rng.uniform(0.5, 1)) * np.exp(1j * rng.uniform(0, 2 * math.pi))
        b = math.sqrt(1 - abs(a) ** 2) * np.exp(1j * rng.uniform(0, 2 * math.pi))
        mixed = StateVector(a * e0 + b * e1)
        lhs = expectation(apply_unitary(mixed, [0], expm_exact(h, t)), observable(ONE))
        rhs = -(1 - 2 * abs(b) ** 2) / SQ2 + SQ2 * abs(a * b) * math.cos(W * t + np.angle(a * np.conj(b)))
        worst = max(worst, abs(lhs - rhs))

    opt = pytest.importorskip("scipy.optimize")
    psi0 = run_adiabatic(ONE, Schedule.build(36.0, 1 / 24))
    tail = evolve_constant(psi0, h, 36.0, 1 / 24, t0=36.0)
    t = np.array([p[0] for p in tail])
    z = np.array([expectation(s, observable(ONE)) for _, s in tail])
    model = lambda t, c, amp, w, ph: c + amp * np.cos(w * (t - 36.0) + ph)
    popt, _ = opt.curve_fit(model, t, z, p0=[z.mean(), (z.max() - z.min()) / 2, W, 0.0])
    rel = abs(abs(popt[2]) - W) / W
    verdict(6, worst < 1e-9 and rel < 0.01,
            f"identity error {worst:.2e} (tol 1e-9), fitted frequency {abs(popt[2]):.6f} vs {W:.6f} (rel {rel:.2e}, tol 1%)")


def _ratio(state, n_phys, e0, e1):
    block = state.amps[: 2**n_phys]
    return abs(np.vdot(e1, block)) ** 2 / abs(np.vdot(e0, block)) ** 2


def test_criterion_7_protocol_invariants():
    problems = []
    for spec in TABLE_SPECS:
        psi0 = run_adiabatic(spec, Schedule.build(36.0, 1 / 24))
        recs = run_distillation(psi0, spec, TwirlConfig(6, "exact"), observable(spec))
        probs = [r.active_prob for r in recs]
        if any(b > a + 1e-12 for a, b in zip(probs, probs[1:])):
            problems.append(f"active probability rose for {spec}: {probs}")

    es = eig_hermitian(to_dense(target_hamiltonian(ONE)))
    e0, e1 = es.vectors[:, 0], es.vectors[:, 1]
    contraction = []
    for beta_sq in (1e-1, 1e-2, 1e-4):
        psi = StateVector(math.sqrt(1 - beta_sq) * e0 + math.sqrt(beta_sq) * np.exp(0.7j) * e1)
        ratios = [_ratio(s, 1, e0, e1) for _, s in distillation(psi, ONE, TwirlConfig(3, "exact"), observable(ONE))]
        contraction.append(ratios[1] / ratios[0])
        if not all(b < a or a < 1e-24 for a, b in zip(ratios, ratios[1:])):
            problems.append(f"no contraction at |beta|^2={beta_sq}: {ratios}")

    residual = 0.0
    for spec in TABLE_SPECS:
        es = eig_hermitian(to_dense(target_hamiltonian(spec)))
        g, top = es.vectors[:, 0], es.vectors[:, -1]  # top eigenvalue is -E0
        psi = StateVector(math.sqrt(0.8) * g + math.sqrt(0.2) * top).tensor(basis_state(1, "0"))
        layout = RegisterLayout(spec.n_physical, 1)
        out = twirl_round(psi, layout, target_hamiltonian(spec), theta_for(es.values[0]), 0, TwirlConfig(1, "exact"))
        residual = max(residual, abs(np.vdot(top, out.amps[: 2**spec.n_physical])))
    if residual >= 1e-10:
        problems.append(f"annihilation residual {residual:.2e}")
    verdict(7, not problems,
            "; ".join(problems) or f"first-round ratio contraction {', '.join(f'{c:.2e}' for c in contraction)}, "
            f"annihilation residual {residual:.2e}")


def _final_state_error(spec, dt):
    sched = Schedule.build(36.0, dt)
    trotter = run_adiabatic(spec, sched)
    exact = run_adiabatic(spec, sched, method="exact")
    return float(np.linalg.norm(trotter.amps - exact.amps))


def test_criterion_8_trotter_order():
    ratios = {spec: _final_state_error(spec, 1 / 24) / _final_state_error(spec, 1 / 48) for spec in TABLE_SPECS}
    detail = ", ".join(f"{s.kind} J={s.j:g}: {r:.3f}" for s, r in ratios.items())
    verdict(8, all(3.5 <= r <= 4.5 for r in ratios.values()), f"error ratio {detail} (range [3.5, 4.5])")
