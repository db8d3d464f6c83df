"""MPS operations against dense-vector oracles."""

import numpy as np
import pytest

from enttemp import models, mps
from enttemp.errors import InvalidInputError, ResourceLimitError

BELL = np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0)


def dense_schmidt(vec, left_sites, n_sites):
    return np.linalg.svd(vec.reshape(2**left_sites, 2 ** (n_sites - left_sites)),
                         compute_uv=False)


def test_random_mps_chi1_is_product():
    st = mps.random_mps(4, 2, 1, seed=0)
    for b in range(1, 4):
        assert mps.entropy_bits(mps.schmidt(st, b)) < 1e-12


def test_random_mps_deterministic():
    a = mps.random_mps(4, 2, 4, seed=7)
    b = mps.random_mps(4, 2, 4, seed=7)
    assert abs(abs(mps.overlap(a, b)) - 1.0) < 1e-12


def test_random_mps_dimensions_and_norm():
    st = mps.random_mps(6, 2, 8, seed=1)
    assert st.bond_dims() == [2, 4, 8, 4, 2]
    assert abs(np.linalg.norm(mps.to_dense(st)) - 1.0) < 1e-10


def test_random_mps_rejects_bad_args():
    with pytest.raises(InvalidInputError):
        mps.random_mps(1, 2, 4, seed=0)
    with pytest.raises(InvalidInputError):
        mps.random_mps(4, 2, 0, seed=0)


def test_schmidt_bell_state():
    st = mps.from_dense(BELL, 2)
    spec = mps.schmidt(st, 1)
    assert np.allclose(spec.coefficients, [1 / np.sqrt(2)] * 2, atol=1e-12)


def test_schmidt_product_state():
    st = mps.from_dense(np.kron([1.0, 0.0], [0.0, 1.0]), 2)
    assert len(mps.schmidt(st, 1)) == 1


def test_schmidt_two_site_heisenberg_singlet():
    _, ground = models.dense_ground_state(models.heisenberg_af(2))
    spec = mps.schmidt(mps.from_dense(ground, 2), 1)
    assert np.allclose(spec.coefficients, [1 / np.sqrt(2)] * 2, atol=1e-10)


def test_schmidt_bond_range():
    st = mps.random_mps(4, 2, 2, seed=0)
    with pytest.raises(InvalidInputError):
        mps.schmidt(st, 0)
    with pytest.raises(InvalidInputError):
        mps.schmidt(st, 4)


def test_schmidt_matches_dense_svd():
    for n, seed in [(6, 0), (9, 1), (12, 2)]:
        st = mps.random_mps(n, 2, 6, seed=seed)
        vec = mps.to_dense(st)
        for b in (1, n // 2, n - 1):
            spec = mps.schmidt(st, b).coefficients
            ref = dense_schmidt(vec, b, n)
            ref = ref[ref > 1e-12]
            assert np.allclose(spec[: len(ref)], ref, atol=1e-8)


def test_entropy_bits_values():
    assert abs(mps.entropy_bits(np.array([1.0, 1.0]) / np.sqrt(2)) - 1.0) < 1e-12
    assert mps.entropy_bits(np.array([1.0])) == 0.0


def test_entropy_bits_half_bit_spectrum():
    # independent oracle: bisect the binary entropy for h2(w) = 1/2 on [1/2, 1]
    lo, hi = 0.5, 1.0
    for _ in range(60):
        mid = (lo + hi) / 2
        h2 = -(mid * np.log2(mid) + (1 - mid) * np.log2(1 - mid))
        lo, hi = (mid, hi) if h2 > 0.5 else (lo, mid)
    w = (lo + hi) / 2
    assert abs(w - 0.8900) < 5e-4
    spec = mps.SchmidtSpectrum(np.sqrt([w, 1 - w]))
    assert abs(mps.entropy_bits(spec) - 0.5) < 1e-10


def test_entropy_bits_rejects_unnormalized():
    with pytest.raises(InvalidInputError):
        mps.entropy_bits(np.array([0.5, 0.5]))


def test_entropy_schur_concavity():
    # moving weight from a richer to a poorer entry is majorized by the original
    rng = np.random.default_rng(3)
    for _ in range(200):
        w = rng.dirichlet(np.ones(6))
        w = np.sort(w)[::-1]
        i, j = sorted(rng.choice(6, size=2, replace=False))
        delta = rng.uniform(0, (w[i] - w[j]) / 2)
        v = w.copy()
        v[i] -= delta
        v[j] += delta
        assert mps.entropy_bits(np.sqrt(w)) <= mps.entropy_bits(np.sqrt(v)) + 1e-12


def test_renyi0_values():
    assert mps.renyi0_bits(np.array([1.0, 1.0]) / np.sqrt(2), tol=1e-12) == 1.0
    assert mps.renyi0_bits(np.array([1.0]), tol=0.5) == 0.0


def test_renyi0_toy_ground_rank():
    h = models.toy_model(2)
    _, ground = models.dense_ground_state(h)
    spec = mps.schmidt(mps.from_dense(ground, 4), h.ab_cut)
    assert mps.renyi0_bits(spec, tol=1e-10) == 2.0


def test_truncate_bell_to_product():
    st = mps.from_dense(BELL, 2)
    tr = mps.truncate(st, 1)
    assert tr.bond_dims() == [1]
    assert abs(abs(mps.overlap(st, tr)) ** 2 - 0.5) < 1e-12


def test_truncate_noop_within_chi():
    st = mps.random_mps(6, 2, 4, seed=5)
    tr = mps.truncate(st, 8)
    assert abs(abs(mps.overlap(st, tr)) - 1.0) < 1e-12


def test_truncate_caps_bonds_and_normalizes():
    st = mps.random_mps(8, 2, 16, seed=3)
    tr = mps.truncate(st, 8)
    assert max(tr.bond_dims()) <= 8
    assert abs(np.linalg.norm(mps.to_dense(tr)) - 1.0) < 1e-10
    # optimal truncation: overlap equals kept weight of the strongest bond cut
    spec = mps.schmidt(st, 4).weights
    kept = spec[:8].sum()
    assert abs(mps.overlap(st, tr)) ** 2 <= kept + 1e-10


def test_truncate_never_raises_rank_or_entropy():
    rng = np.random.default_rng(11)
    for seed in range(5):
        st = mps.random_mps(8, 2, 12, seed=seed)
        chi = int(rng.integers(2, 10))
        tr = mps.truncate(st, chi)
        for b in (3, 4, 5):
            before = mps.schmidt(st, b)
            after = mps.schmidt(tr, b)
            assert mps.renyi0_bits(after, 1e-12) <= mps.renyi0_bits(before, 1e-12) + 1e-12
            assert mps.entropy_bits(after) <= mps.entropy_bits(before) + 1e-8


def test_energy_toy_ground_and_excited():
    h = models.toy_model(3)
    ground = models.pair_product_state(h, BELL)
    st = mps.from_dense(ground, 6)
    assert abs(mps.energy(st, h)) < 1e-10
    zeros = models.pair_product_state(h, np.array([1.0, 0, 0, 0]))
    assert abs(mps.energy(mps.from_dense(zeros, 6), h) - 1.5) < 1e-10


def test_energy_tfi2_ground():
    h = models.tfi_critical(2)
    e0, ground = models.dense_ground_state(h)
    assert abs(e0 + np.sqrt(5)) < 1e-10
    assert abs(mps.energy(mps.from_dense(ground, 2), h) - e0) < 1e-10


def test_energy_matches_dense_random_states():
    for n, mk in [(6, models.heisenberg_af), (9, models.tfi_critical), (12, models.tfi_critical)]:
        h = mk(n)
        hd = models.dense_matrix(h)
        st = mps.random_mps(n, 2, 6, seed=n)
        vec = mps.to_dense(st)
        ref = np.vdot(vec, hd @ vec).real
        assert abs(mps.energy(st, h) - ref) < 1e-8


def test_energy_shape_mismatch():
    with pytest.raises(InvalidInputError):
        mps.energy(mps.random_mps(4, 2, 2, seed=0), models.tfi_critical(6))


def test_overlap_self_and_orthogonal():
    st = mps.random_mps(5, 2, 4, seed=9)
    assert abs(mps.overlap(st, st) - 1.0) < 1e-12
    a = mps.from_dense(np.kron([1.0, 0.0], [1.0, 0.0]), 2)
    b = mps.from_dense(np.kron([0.0, 1.0], [0.0, 1.0]), 2)
    assert abs(mps.overlap(a, b)) < 1e-12


def test_overlap_rank_limited_optimum_with_flat_state():
    # a rank-2^{n-m} truncation of the flat state keeps overlap 2^{-m/2}
    n, m = 3, 1
    h = models.toy_model(n)
    omega = models.pair_product_state(h, BELL)
    st = mps.from_dense(omega, 2 * n)
    tr = mps.truncate(st, 2 ** (n - m))
    assert abs(abs(mps.overlap(st, tr)) - 2 ** (-m / 2)) < 1e-10


def test_to_dense_bell_and_basis():
    st = mps.from_dense(BELL, 2)
    assert np.allclose(np.abs(mps.to_dense(st)), np.abs(BELL))
    basis = np.zeros(4)
    basis[1] = 1.0
    assert np.allclose(np.abs(mps.to_dense(mps.from_dense(basis, 2))), basis)


def test_to_dense_norm_and_limit():
    st = mps.random_mps(10, 2, 8, seed=5)
    assert abs(np.linalg.norm(mps.to_dense(st)) - 1.0) < 1e-10
    with pytest.raises(ResourceLimitError):
        mps.to_dense(mps.random_mps(18, 2, 2, seed=0))


def test_public_operations_keep_unit_norm():
    st = mps.random_mps(7, 2, 10, seed=2)
    for out in (st, mps.truncate(st, 3), mps.canonicalize(st, 4)):
        assert abs(np.linalg.norm(mps.to_dense(out)) - 1.0) < 1e-10
