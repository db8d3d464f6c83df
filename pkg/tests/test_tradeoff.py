"""Sampling engine: gate sweeps, sharpening, tradeoff points, fronts, expansions."""

import numpy as np
import pytest

from enttemp import models, mps, tradeoff
from enttemp.errors import ConvergenceError, DegeneracyError, InvalidInputError


# -- imaginary_step ----------------------------------------------------------

def test_single_bond_large_tau_projects_to_ground():
    h = models.tfi_critical(2)
    st = mps.random_mps(2, 2, 2, seed=3)
    out = tradeoff.imaginary_step(st, h, 50.0, chi_max=4)
    e_dense, _ = models.dense_ground_state(h)
    assert abs(mps.energy(out, h) - e_dense) < 1e-6


def test_zero_bond_term_leaves_state_unchanged():
    h = models.LocalHamiltonian(2, 2, (((0, 1), np.zeros((4, 4))),), ab_cut=1)
    st = mps.random_mps(2, 2, 2, seed=5)
    out = tradeoff.imaginary_step(st, h, 0.7, chi_max=4)
    assert abs(abs(mps.overlap(st, out)) - 1.0) < 1e-12


def test_tfi8_reaches_dense_ground():
    h = models.tfi_critical(8)
    e_dense, _ = models.dense_ground_state(h)
    st = mps.random_mps(8, 2, 16, seed=1)
    for _ in range(400):
        st = tradeoff.imaginary_step(st, h, 0.05, chi_max=16)
    assert abs(mps.energy(st, h) - e_dense) / abs(e_dense) < 1e-5


def test_imaginary_step_decreases_energy_small_tau():
    for h in (models.heisenberg_af(6), models.tfi_critical(6)):
        st = mps.random_mps(6, 2, 8, seed=2)
        e_prev = mps.energy(st, h)
        for _ in range(10):
            st = tradeoff.imaginary_step(st, h, 0.05, chi_max=8)
            e_new = mps.energy(st, h)
            assert e_new <= e_prev + 1e-10
            e_prev = e_new


def test_imaginary_step_rejects_long_range_terms():
    with pytest.raises(InvalidInputError):
        tradeoff.imaginary_step(mps.random_mps(4, 2, 2, seed=0), models.toy_model(2), 0.1, 4)


# -- find_ground --------------------------------------------------------------

def test_find_ground_two_site_singlet():
    st, e0 = tradeoff.find_ground(models.heisenberg_af(2), chi_max=4, seed=1)
    assert abs(e0 + 3.0) < 1e-8


def test_find_ground_haf12_matches_dense():
    h = models.heisenberg_af(12)
    e_dense, _ = models.dense_ground_state(h)
    _, e0 = tradeoff.find_ground(h, chi_max=32, seed=2)
    assert abs(e0 - e_dense) / abs(e_dense) < 1e-6


def test_find_ground_toy_dense_analogue():
    # ground of the paired chain is the Bell product at zero energy
    h = models.toy_model(3)
    e0, ground = models.dense_ground_state(h)
    bell = models.pair_product_state(h, np.array([1.0, 0, 0, 1.0]) / np.sqrt(2))
    assert abs(e0) < 1e-10
    assert abs(abs(np.vdot(ground, bell)) - 1.0) < 1e-8


def test_find_ground_nonconvergence_carries_iterate():
    h = models.heisenberg_af(8)
    with pytest.raises(ConvergenceError) as info:
        tradeoff.find_ground(h, chi_max=8, schedule=[(0.5, 3)], tol=1e-14, seed=0)
    assert info.value.state is not None
    assert info.value.energy is not None


def test_find_ground_rejects_bad_schedule():
    h = models.heisenberg_af(4)
    with pytest.raises(InvalidInputError):
        tradeoff.find_ground(h, chi_max=8, schedule=[(0.1, 10), (0.2, 10)])
    with pytest.raises(InvalidInputError):
        tradeoff.find_ground(h, chi_max=8, schedule=[])


# -- sharpen ------------------------------------------------------------------

def test_sharpen_flat_pair_fixed_point():
    st = mps.from_dense(np.array([1.0, 0, 0, 1.0]) / np.sqrt(2), 2)
    out = tradeoff.sharpen(st, 1, 0.8)
    assert abs(abs(mps.overlap(st, out)) - 1.0) < 1e-12


def test_sharpen_epsilon_zero_identity():
    st = mps.random_mps(6, 2, 6, seed=4)
    out = tradeoff.sharpen(st, 3, 0.0)
    assert abs(abs(mps.overlap(st, out)) - 1.0) < 1e-12


def test_sharpen_closed_form():
    st = mps.from_dense(np.array([np.sqrt(0.8), 0, 0, np.sqrt(0.2)]), 2)
    out = tradeoff.sharpen(st, 1, 1.0)
    spec = mps.schmidt(out, 1)
    assert np.allclose(spec.weights, [0.64 / 0.68, 0.04 / 0.68], atol=1e-12)
    assert abs(mps.entropy_bits(spec) - 0.32276) < 1e-4
    assert abs(mps.entropy_bits(mps.schmidt(st, 1)) - 0.72193) < 1e-4


def test_sharpen_preserves_schmidt_vectors():
    st = mps.random_mps(6, 2, 8, seed=8)
    out = tradeoff.sharpen(st, 3, 0.3)
    va = mps.to_dense(st).reshape(8, 8)
    vb = mps.to_dense(out).reshape(8, 8)
    ra = va @ va.conj().T
    rb = vb @ vb.conj().T
    # reduced density matrices share eigenvectors: they commute
    assert np.abs(ra @ rb - rb @ ra).max() < 1e-8


def test_sharpen_never_raises_entropy():
    rng = np.random.default_rng(0)
    for seed in range(10):
        st = mps.random_mps(6, 2, 8, seed=seed)
        eps = float(rng.uniform(0, 1.0))
        before = mps.entropy_bits(mps.schmidt(st, 3))
        after = mps.entropy_bits(mps.schmidt(tradeoff.sharpen(st, 3, eps), 3))
        assert after <= before + 1e-10


def test_sharpen_rejects_negative_epsilon():
    with pytest.raises(InvalidInputError):
        tradeoff.sharpen(mps.random_mps(4, 2, 4, seed=0), 2, -0.1)


# -- sampler ------------------------------------------------------------------

@pytest.fixture(scope="module")
def tfi8_ground():
    h = models.tfi_critical(8)
    ground, e0 = tradeoff.find_ground(h, chi_max=16, seed=2)
    return h, ground, e0


def test_sampler_zero_rounds(tfi8_ground):
    h, ground, e0 = tfi8_ground
    cfg = tradeoff.SamplerConfig(n_samples=4, rounds_per_sample=0, chi_max=16, seed=1)
    assert tradeoff.sample_tradeoff(h, ground, e0, cfg) == []


def test_sampler_ground_sharpening_gives_positive_point(tfi8_ground):
    h, ground, e0 = tfi8_ground
    cut = h.ab_cut
    s0 = mps.entropy_bits(mps.schmidt(ground, cut))
    sharpened = tradeoff.sharpen(ground, cut, 0.05)
    ds = s0 - mps.entropy_bits(mps.schmidt(sharpened, cut))
    de = mps.energy(sharpened, h) - e0
    assert ds > 0
    assert de > 0


def test_sampler_deterministic_and_thread_invariant(tfi8_ground):
    h, ground, e0 = tfi8_ground
    cfg = tradeoff.SamplerConfig(n_samples=12, rounds_per_sample=5, chi_max=16, seed=13)
    a = tradeoff.sample_tradeoff(h, ground, e0, cfg)
    b = tradeoff.sample_tradeoff(h, ground, e0, cfg)
    c = tradeoff.sample_tradeoff(h, ground, e0, cfg, n_threads=4)
    key = lambda pts: [(p.sample, p.moves_digest, p.delta_s, p.delta_e) for p in pts]
    assert key(a) == key(b) == key(c)
    assert all(p.delta_s > 0 and p.delta_e >= -1e-8 for p in a)


# -- pareto front -------------------------------------------------------------

def quadratic_front(points):
    def dominated(p, q):
        return (q.delta_s >= p.delta_s and q.delta_e <= p.delta_e
                and (q.delta_s > p.delta_s or q.delta_e < p.delta_e))
    keep = [p for p in points if not any(dominated(p, q) for q in points)]
    keep.sort(key=lambda p: p.delta_s)
    return keep


def test_pareto_dominance_examples():
    a = tradeoff.TradeoffPoint(1.0, 1.0, 0, "a")
    b = tradeoff.TradeoffPoint(2.0, 1.0, 0, "b")
    front = tradeoff.pareto_front([a, b])
    assert [p.moves_digest for p in front] == ["a"]
    c = tradeoff.TradeoffPoint(2.0, 2.0, 0, "c")
    front = tradeoff.pareto_front([a, c])
    assert len(front) == 2


def test_pareto_matches_quadratic_oracle():
    rng = np.random.default_rng(42)
    pts = [tradeoff.TradeoffPoint(float(e), float(s), i, "p")
           for i, (e, s) in enumerate(rng.uniform(0, 1, (1000, 2)))]
    fast = tradeoff.pareto_front(pts)
    slow = quadratic_front(pts)
    assert [(p.delta_s, p.delta_e) for p in fast] == [(p.delta_s, p.delta_e) for p in slow]


def test_pareto_idempotent_and_monotone():
    rng = np.random.default_rng(7)
    pts = [tradeoff.TradeoffPoint(float(e), float(s), i, "p")
           for i, (e, s) in enumerate(rng.uniform(0, 1, (300, 2)))]
    front = tradeoff.pareto_front(pts)
    again = tradeoff.pareto_front(front.points)
    assert [(p.delta_s, p.delta_e) for p in front] == [(p.delta_s, p.delta_e) for p in again]
    de = [p.delta_e for p in front]
    ds = [p.delta_s for p in front]
    assert all(x <= y for x, y in zip(de, de[1:]))
    assert all(x <= y for x, y in zip(ds, ds[1:]))


# -- entanglement temperature --------------------------------------------------

def test_ent_temperature_constant_on_linear_front():
    pts = [tradeoff.TradeoffPoint(0.5 * m, float(m), 0, "t") for m in range(1, 5)]
    temps = tradeoff.ent_temperature(tradeoff.pareto_front(pts))
    assert all(abs(t - 0.5) < 1e-12 for _, t in temps)


def test_ent_temperature_single_point():
    front = tradeoff.pareto_front([tradeoff.TradeoffPoint(0.2, 0.4, 0, "x")])
    assert tradeoff.ent_temperature(front) == [(0.4, 0.5)]


# -- near-ground expansion ------------------------------------------------------

def test_near_ground_degenerate_top_weight_raises():
    h = models.toy_model(1)
    e0, ground = models.dense_ground_state(h)
    with pytest.raises(DegeneracyError):
        tradeoff.near_ground_coefficients(ground, h, e0)


def test_near_ground_slope_and_curvature_tfi8():
    h = models.tfi_critical(8)
    e0, ground = models.dense_ground_state(h)
    c1, c2 = tradeoff.near_ground_coefficients(ground, h, e0)
    hd = models.dense_matrix(h)
    da = 2**h.ab_cut

    def entropy_energy(eps):
        vec = tradeoff.perturb_top_weight(ground, h, eps)
        s = np.linalg.svd(vec.reshape(da, -1), compute_uv=False)
        w = s**2
        w = w[w > 1e-30]
        return float(-(w * np.log2(w)).sum()), float(np.vdot(vec, hd @ vec).real)

    s_base, _ = entropy_energy(0.0)
    eps = 1e-6
    s_eps, _ = entropy_energy(eps)
    assert abs((s_eps - s_base) / eps - c1) < 1e-4
    grid = np.geomspace(1e-4, 1e-2, 7)
    ratios = []
    for e in grid:
        _, energy = entropy_energy(e)
        ratios.append((energy - e0) / e**2)
    # quadratic-law constancy across the grid
    assert (max(ratios) - min(ratios)) / abs(c2) < 0.05
    # extrapolate the cubic correction away: intercept of ratio vs eps
    coef = np.polyfit(grid, ratios, 2)
    assert abs(coef[-1] - c2) / abs(c2) < 1e-3
