"""Closed-form and small-dense reference results.

Everything here has an answer that is either analytic or reachable by a
direct dense computation, so these functions double as the package's check
suite: asymptotic extraction cost of the paired toy chain, the projector
model's exact cost, channel energy costs, the swap-protocol bound, the
free-fermion chain, and the field-theory scaling curves.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import InvalidInputError, RegularizationWarning
from .models import LocalHamiltonian, dense_matrix, interaction_norm

LOG_FLOOR = 1e-12


def binary_entropy_bits(x: float) -> float:
    """h2(x) = -x log2 x - (1-x) log2 (1-x)."""
    if not 0.0 <= x <= 1.0:
        raise InvalidInputError("binary entropy argument must lie in [0, 1]")
    total = 0.0
    for p in (x, 1.0 - x):
        if p > 0.0:
            total -= p * math.log2(p)
    return total


def asymptotic_pair_cost(n: int, m: int) -> tuple[float, float, float]:
    """Cheapest uniform two-amplitude pair ansatz that sheds m of n bits.

    Solves h2(alpha^2) = (n - m)/n by bisection on alpha^2 in [1/2, 1] and
    returns (alpha, beta, delta_e) with delta_e = n (1 - (alpha + beta)^2 / 2),
    the energy of the ansatz in the paired toy chain.  Endpoints are exact:
    m = 0 costs nothing, m = n costs n/2.
    """
    if n < 1 or not 0 <= m <= n:
        raise InvalidInputError("need n >= 1 and 0 <= m <= n")
    target = (n - m) / n
    if target == 0.0:
        x = 1.0
    elif target == 1.0:
        x = 0.5
    else:
        lo, hi = 0.5, 1.0  # h2 decreases from 1 to 0 on this interval
        while hi - lo > 1e-13:
            mid = (lo + hi) / 2
            if binary_entropy_bits(mid) > target:
                lo = mid
            else:
                hi = mid
        x = (lo + hi) / 2
    alpha = math.sqrt(x)
    beta = math.sqrt(1.0 - x)
    delta_e = n * (1.0 - (alpha + beta) ** 2 / 2.0)
    return alpha, beta, delta_e


def _split_dims(h: LocalHamiltonian) -> tuple[int, int]:
    if h.ab_cut is None:
        raise InvalidInputError("Hamiltonian has no Alice/Bob cut")
    return h.phys_dim**h.ab_cut, h.phys_dim ** (h.n_sites - h.ab_cut)


def _log_rho_b(state: np.ndarray, da: int, db: int) -> np.ndarray:
    psi = state.reshape(da, db)
    rho_b = psi.T @ psi.conj()
    vals, vecs = linalg.eigh(rho_b)
    if vals.min() < LOG_FLOOR:
        warnings.warn("rank-deficient reduced state; flooring eigenvalues before log",
                      RegularizationWarning, stacklevel=3)
        vals = np.maximum(vals, LOG_FLOOR)
    return (vecs * np.log(vals)) @ vecs.conj().T


def stationarity_residual(state: np.ndarray, h: LocalHamiltonian, mu1: float, mu2: float) -> float:
    """Norm of [H - mu1 (1_A x log rho_B) - mu1 + mu2] |psi>.

    A vanishing residual marks |psi> as a stationary point of the energy at
    fixed cut entropy (natural log; rho_B floored at 1e-12 before the log).
    """
    state = np.asarray(state, dtype=complex)
    da, db = _split_dims(h)
    hd = dense_matrix(h)
    logr = _log_rho_b(state, da, db)
    op_state = hd @ state - mu1 * (np.kron(np.eye(da), logr) @ state) - mu1 * state + mu2 * state
    return float(np.linalg.norm(op_state))


def stationarity_best_fit(state: np.ndarray, h: LocalHamiltonian) -> tuple[float, float, float]:
    """Minimal stationarity residual over real (mu1, mu2), via least squares.

    Returns (residual, mu1, mu2).
    """
    state = np.asarray(state, dtype=complex)
    da, db = _split_dims(h)
    hd = dense_matrix(h)
    logr = _log_rho_b(state, da, db)
    a = hd @ state
    b = np.kron(np.eye(da), logr) @ state + state
    c = state
    # residual = a - mu1 b + mu2 c; solve in stacked real coordinates
    design = np.column_stack([np.concatenate([b.real, b.imag]),
                              np.concatenate([-c.real, -c.imag])])
    rhs = np.concatenate([a.real, a.imag])
    coef, *_ = np.linalg.lstsq(design, rhs, rcond=None)
    mu1, mu2 = float(coef[0]), float(coef[1])
    return stationarity_residual(state, h, mu1, mu2), mu1, mu2


def projector_extraction_cost(m: int) -> float:
    """Exact cost 1 - 2^-m of extracting m pairs when H = -|Omega><Omega|."""
    if m < 0:
        raise InvalidInputError("m must be nonnegative")
    return 1.0 - 2.0**-m


def rank_limited_overlap_bound(m: int) -> float:
    """Largest overlap 2^{-m/2} a rank-reduced state keeps with the flat state."""
    if m < 0:
        raise InvalidInputError("m must be nonnegative")
    return 2.0 ** (-m / 2.0)


def optimize_rank_limited_overlap(n: int, m: int, seed: int = 0, iters: int = 300,
                                  tol: float = 1e-12) -> float:
    """Maximize |<Omega|psi>| over rank-2^{n-m} states by projected ascent.

    Repeatedly steps toward the flat maximally entangled state, truncates to
    the allowed Schmidt rank and renormalizes; converges to the analytic
    bound 2^{-m/2}.
    """
    if n < 1 or not 0 <= m <= n:
        raise InvalidInputError("need n >= 1 and 0 <= m <= n")
    d = 2**n
    k = 2 ** (n - m)
    omega = np.eye(d, dtype=complex) / math.sqrt(d)
    rng = np.random.default_rng(seed)
    psi = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    psi /= np.linalg.norm(psi)
    last = 0.0
    for _ in range(iters):
        step = psi + omega * np.vdot(omega, psi).conjugate()
        u, s, vd = linalg.svd(step)
        psi = (u[:, :k] * s[:k]) @ vd[:k]
        psi /= np.linalg.norm(psi)
        val = abs(np.vdot(omega, psi))
        if abs(val - last) < tol:
            break
        last = val
    return float(abs(np.vdot(omega, psi)))


@dataclass(frozen=True)
class KrausChannel:
    """CPTP map given by a finite family of Kraus operators."""

    kraus_ops: tuple[np.ndarray, ...]

    def __post_init__(self):
        if not self.kraus_ops:
            raise InvalidInputError("channel needs at least one Kraus operator")
        dim = self.kraus_ops[0].shape[0]
        total = np.zeros((dim, dim), dtype=complex)
        for k in self.kraus_ops:
            if k.shape != (dim, dim):
                raise InvalidInputError("Kraus operators must be square and same-dimensional")
            total += k.conj().T @ k
        if np.abs(total - np.eye(dim)).max() > 1e-10:
            raise InvalidInputError("Kraus operators do not form a trace-preserving channel")

    @property
    def dim(self) -> int:
        return self.kraus_ops[0].shape[0]

    def heisenberg(self, obs: np.ndarray) -> np.ndarray:
        """Dual action sum_k K^dag obs K."""
        return sum(k.conj().T @ obs @ k for k in self.kraus_ops)


def channel_energy_cost(ch: KrausChannel, h: np.ndarray) -> float:
    """Worst-case energy change ||H - E*(H)||_inf a channel can cause."""
    h = linalg.require_hermitian(h)
    if h.shape[0] != ch.dim:
        raise InvalidInputError("Hamiltonian dimension does not match the channel")
    diff = h - ch.heisenberg(h)
    vals = np.linalg.eigvalsh(diff)
    return float(np.abs(vals).max())


def naive_protocol_bound(h: LocalHamiltonian) -> float:
    """Cost bound 2 ||V_AB|| for swapping out the state and preparing local
    ground states."""
    return 2.0 * interaction_norm(h)


def fermion_ground_energy(spec) -> float:
    """Filled-sea ground energy (N - cot(pi/N)) / a of the periodic hopping chain."""
    n, a = spec.n_sites, spec.lattice_spacing
    if n % 2 != 0:
        raise InvalidInputError("site count must be even")
    return (n - 1.0 / math.tan(math.pi / n)) / a


def _random_parity_state(rng: np.random.Generator, n_qubits: int, parity: int) -> np.ndarray:
    dim = 2**n_qubits
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    idx = np.arange(dim)
    popcount = np.array([bin(i).count("1") for i in idx])
    vec[popcount % 2 != parity] = 0.0
    return vec / np.linalg.norm(vec)


def fermion_product_bound(spec, samples: int, seed: int = 0) -> float:
    """Minimum cut-term energy over random states that are products across the
    middle cut with definite fermion parity on each half.

    Every such state satisfies the 1/a lower bound; a violation beyond 1e-9
    raises, and the observed minimum is returned.
    """
    n, a = spec.n_sites, spec.lattice_spacing
    if n > 12:
        raise InvalidInputError("dense sampling supports at most 12 sites")
    half = n // 2
    c = np.array([[0.0, 1.0], [0.0, 0.0]])
    cross = (1j / (2 * a)) * (np.kron(c.T, c) - np.kron(c, c.T)) + np.eye(4) / a
    rng = np.random.default_rng(seed)
    best = math.inf
    for _ in range(samples):
        va = _random_parity_state(rng, half, int(rng.integers(2)))
        vb = _random_parity_state(rng, half, int(rng.integers(2)))
        # single-site reduced states of the two sites flanking the cut
        ma = va.reshape(-1, 2)           # last site of Alice's half
        rho_a = ma.T @ ma.conj()
        mb = vb.reshape(2, -1)           # first site of Bob's half
        rho_b = mb @ mb.conj().T
        val = float(np.trace(np.kron(rho_a, rho_b) @ cross).real)
        if val < 1.0 / a - 1e-9:
            raise RuntimeError(f"cut-term bound violated: {val} < {1.0 / a}")
        best = min(best, val)
    return best


@dataclass(frozen=True)
class QftScalingParams:
    """Scaling-curve parameters: spatial dimension, central charge (d = 1 only),
    and an overall prefactor (only exponents are physical)."""

    dimension: int
    central_charge: float = 1.0
    prefactor: float = 1.0

    def __post_init__(self):
        if self.dimension < 1:
            raise InvalidInputError("dimension must be >= 1")
        if self.dimension == 1 and not self.central_charge > 0:
            raise InvalidInputError("central charge must be positive in d = 1")
        if not self.prefactor > 0:
            raise InvalidInputError("prefactor must be positive")


def qft_scaling_curve(p: QftScalingParams, delta_s) -> tuple[np.ndarray, np.ndarray]:
    """Extraction-cost scaling with extracted entropy for field vacua.

    d = 1: delta_e = prefactor * exp(6 ln2 / c * delta_s); above one dimension
    delta_e = prefactor * delta_s^(d/(d-1)).  The companion temperature curve
    is t = delta_e^(1/d).  Returns (delta_e, t_ent).
    """
    ds = np.asarray(delta_s, dtype=float)
    if np.any(ds < 0):
        raise InvalidInputError("delta_s must be nonnegative")
    if p.dimension == 1:
        de = p.prefactor * np.exp(6.0 * math.log(2.0) / p.central_charge * ds)
    else:
        de = p.prefactor * ds ** (p.dimension / (p.dimension - 1.0))
    t = de ** (1.0 / p.dimension)
    return de, t
