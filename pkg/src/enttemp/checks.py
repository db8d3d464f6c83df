"""Named reference-value check suites, runnable from the CLI.

Each suite compares implementation output against closed-form or small-dense
reference values and reports one record per check: measured value, expected
value, tolerance (or lower bound) and a pass flag.
"""

from __future__ import annotations

import numpy as np

from . import closedform as cf
from . import models, oneshot


def _equals(name: str, measured: float, expected: float, tol: float) -> dict:
    return {
        "name": name,
        "kind": "equals",
        "measured": measured,
        "expected": expected,
        "tolerance": tol,
        "pass": bool(abs(measured - expected) <= tol),
    }


def _at_least(name: str, measured: float, bound: float) -> dict:
    return {
        "name": name,
        "kind": "at_least",
        "measured": measured,
        "expected": bound,
        "tolerance": 0.0,
        "pass": bool(measured >= bound),
    }


def check_method1() -> list[dict]:
    checks = []
    _, _, de0 = cf.asymptotic_pair_cost(4, 0)
    checks.append(_equals("zero_extraction_cost", de0, 0.0, 1e-12))
    _, _, den = cf.asymptotic_pair_cost(4, 4)
    checks.append(_equals("full_extraction_cost", den, 2.0, 1e-12))
    alpha, _, deh = cf.asymptotic_pair_cost(4, 2)
    checks.append(_equals("half_extraction_cost_per_pair", deh / 2.0, 0.3745, 5e-3))
    residual = abs(cf.binary_entropy_bits(alpha**2) - 0.5)
    checks.append(_equals("entropy_equation_residual", residual, 0.0, 1e-10))
    return checks


def check_method2() -> list[dict]:
    checks = [
        _equals("cost(1)", cf.projector_extraction_cost(1), 0.5, 1e-12),
        _equals("bound(1)", cf.rank_limited_overlap_bound(1), 2.0**-0.5, 1e-12),
        _equals("ascent_overlap(n=3,m=1)", cf.optimize_rank_limited_overlap(3, 1, seed=0),
                2.0**-0.5, 1e-6),
        _equals("ascent_overlap(n=3,m=2)", cf.optimize_rank_limited_overlap(3, 2, seed=0),
                0.5, 1e-6),
    ]
    return checks


def check_toy() -> list[dict]:
    h = models.toy_model(4)
    checks = []
    for m in range(1, 5):
        res = oneshot.min_energy_at_rank(h, 2 ** (4 - m), restarts=20, seed=0)
        checks.append(_equals(f"rank_constrained_cost(m={m})", res.delta_e, 0.5 * m, 1e-6))
    return checks


def check_channel() -> list[dict]:
    eye = np.eye(2, dtype=complex)
    identity = cf.KrausChannel((eye,))
    paulis = (eye, models.PAULI_X.astype(complex), models.PAULI_Y, models.PAULI_Z.astype(complex))
    depolarize = cf.KrausChannel(tuple(p / 2 for p in paulis))
    h3 = np.diag([0.0, 0.7, 2.0]).astype(complex)
    basis = np.eye(3, dtype=complex)
    replace = cf.KrausChannel(tuple(np.outer(basis[0], basis[i]) for i in range(3)))
    return [
        _equals("identity_cost", cf.channel_energy_cost(identity, models.PAULI_Z.astype(complex)), 0.0, 1e-12),
        _equals("depolarizing_sz_cost", cf.channel_energy_cost(depolarize, models.PAULI_Z.astype(complex)), 1.0, 1e-10),
        _equals("replace_with_ground_cost", cf.channel_energy_cost(replace, h3), 2.0, 1e-10),
    ]


def check_naive() -> list[dict]:
    checks = [
        _equals("haf4_bound", cf.naive_protocol_bound(models.heisenberg_af(4)), 6.0, 1e-10),
        _equals("tfi4_bound", cf.naive_protocol_bound(models.tfi_critical(4)), 2.0, 1e-10),
    ]
    toy2 = models.toy_model(2)
    bound = cf.naive_protocol_bound(toy2)
    checks.append(_at_least("toy2_bound_covers_full_extraction", bound, oneshot.toy_cost(2, 2)))
    return checks


def check_fermion() -> list[dict]:
    checks = []
    for n in (4, 6, 8):
        spec = models.FermionChainSpec(n, 1.0)
        h = models.staggered_fermion_spin(spec)
        e_dense = float(np.linalg.eigvalsh(models.dense_matrix(h))[0])
        checks.append(_equals(f"ground_energy(N={n})", cf.fermion_ground_energy(spec), e_dense, 1e-8))
    spec8 = models.FermionChainSpec(8, 1.0)
    observed = cf.fermion_product_bound(spec8, samples=200, seed=0)
    checks.append(_at_least("product_cut_bound(N=8,a=1)", observed, 1.0 - 1e-9))
    return checks


def check_qft() -> list[dict]:
    p1 = cf.QftScalingParams(1, central_charge=1.0)
    de1, _ = cf.qft_scaling_curve(p1, [0.0, 1.0, 2.0])
    p2 = cf.QftScalingParams(2)
    de2, t2 = cf.qft_scaling_curve(p2, [1.0, 2.0])
    p3 = cf.QftScalingParams(3)
    de3, _ = cf.qft_scaling_curve(p3, [1.0, 2.0])
    return [
        _equals("d1_unit_entropy_ratio", de1[1] / de1[0], 64.0, 1e-9),
        _equals("d1_ratio_constant", de1[2] / de1[1], 64.0, 1e-9),
        _equals("d2_doubling_exponent", de2[1] / de2[0], 4.0, 1e-12),
        _equals("d2_temperature_sqrt", t2[1] / t2[0], 2.0, 1e-12),
        _equals("d3_doubling_exponent", de3[1] / de3[0], 2.0 ** 1.5, 1e-12),
    ]


SUITES = {
    "method1": check_method1,
    "method2": check_method2,
    "toy": check_toy,
    "channel": check_channel,
    "naive": check_naive,
    "fermion": check_fermion,
    "qft": check_qft,
}


def run_suite(name: str) -> dict:
    """Run one named suite (or 'all') and return its JSON-ready report."""
    if name == "all":
        suites = {key: fn() for key, fn in SUITES.items()}
        ok = all(c["pass"] for checks in suites.values() for c in checks)
        return {"suite": "all", "suites": suites, "pass": ok}
    if name not in SUITES:
        raise KeyError(name)
    checks = SUITES[name]()
    return {"suite": name, "checks": checks, "pass": all(c["pass"] for c in checks)}
