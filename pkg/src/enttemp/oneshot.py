"""One-shot LOCC feasibility and the rank-constrained energy minimum.

Pure-state LOCC conversion is governed by majorization of the squared Schmidt
coefficients; extracting m EPR pairs divides the available Schmidt rank by
2^m.  The cheapest state left behind is found by a variational minimization
over states with a capped Schmidt rank at the Alice/Bob cut.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import linalg
from .errors import InfeasibleError, InvalidInputError
from .models import LocalHamiltonian, dense_matrix


@dataclass(frozen=True)
class ExtractionBudget:
    """Request to extract m EPR pairs from a state of given Schmidt rank."""

    m: int
    initial_rank: int

    def __post_init__(self):
        if self.m < 0 or self.initial_rank < 1:
            raise InvalidInputError("m must be >= 0 and initial_rank >= 1")
        if 2**self.m > self.initial_rank:
            raise InfeasibleError(f"cannot extract {self.m} pairs from rank {self.initial_rank}")

    def final_rank(self) -> int:
        return feasible_final_rank(self.initial_rank, self.m)


def _sorted_weights(spec) -> np.ndarray:
    coeffs = spec.coefficients if hasattr(spec, "coefficients") else np.asarray(spec, dtype=float)
    w = np.sort(np.asarray(coeffs, dtype=float) ** 2)[::-1]
    return w


def majorizes(target, source) -> bool:
    """True iff the target spectrum's squared weights majorize the source's,
    i.e. the source state is LOCC-convertible into the target state."""
    a = _sorted_weights(target)
    b = _sorted_weights(source)
    size = max(a.size, b.size)
    a = np.pad(a, (0, size - a.size))
    b = np.pad(b, (0, size - b.size))
    return bool(np.all(np.cumsum(a) >= np.cumsum(b) - 1e-12))


def feasible_final_rank(initial_rank: int, m: int) -> int:
    """Largest Schmidt rank left after extracting m EPR pairs."""
    if m < 0 or initial_rank < 1:
        raise InvalidInputError("m must be >= 0 and initial_rank >= 1")
    if 2**m > initial_rank:
        raise InfeasibleError(f"cannot extract {m} pairs from rank {initial_rank}")
    return initial_rank // 2**m


def toy_cost(n: int, m: int) -> float:
    """Optimal one-shot cost of extracting m of the n pairs: half per pair."""
    if n < 1 or m < 0:
        raise InvalidInputError("need n >= 1 and m >= 0")
    if m > n:
        raise InfeasibleError(f"cannot extract {m} pairs from {n}")
    return m / 2.0


@dataclass(frozen=True)
class RankMinimumResult:
    """Outcome of the rank-constrained energy minimization."""

    delta_e: float
    delta_s0_bits: float
    converged: bool


def _ansatz_sweep(ht: np.ndarray, y0: np.ndarray, chi: int, max_iter: int, tol: float):
    """Alternate exact minimization over the two Schmidt factors of a rank-chi
    state psi[i,j] = sum_a X[i,a] conj(Y[j,a]), re-splitting by truncated SVD
    so the factor held fixed is always an isometry.  Monotone in energy."""
    da, db = ht.shape[0], ht.shape[1]
    y = y0  # orthonormal columns
    energy = math.inf
    for _ in range(max_iter):
        heff = np.einsum("ja,ijkl,lb->iakb", y, ht, y.conj(), optimize=True).reshape(da * chi, da * chi)
        vals, vecs = scipy.linalg.eigh(heff, subset_by_index=(0, 0))
        x = vecs[:, 0].reshape(da, chi)
        u, s, vd = linalg.svd(x @ y.conj().T)
        x = u[:, :chi]
        keff = np.einsum("ia,ijkl,kb->jalb", x.conj(), ht, x, optimize=True).reshape(db * chi, db * chi)
        vals, vecs = scipy.linalg.eigh(keff, subset_by_index=(0, 0))
        y = vecs[:, 0].reshape(db, chi).conj()
        u, s, vd = linalg.svd(x @ y.conj().T)
        y = vd[:chi].conj().T
        prev, energy = energy, float(vals[0])
        if abs(prev - energy) < tol:
            return energy, True
    return energy, False


def min_energy_at_rank(h: LocalHamiltonian, chi: int, restarts: int = 24, seed: int = 0,
                       max_iter: int = 200, tol: float = 1e-11,
                       n_threads: int | None = None) -> RankMinimumResult:
    """Minimum energy above ground over pure states with Schmidt rank <= chi
    at the Alice/Bob cut, by alternating eigensolves with multistart.

    Also reports the zero-entropy drop log2(initial rank) - log2(achieved
    rank cap).  ``converged`` is False when no restart met the energy
    tolerance; the best iterate is still returned.
    """
    if chi < 1:
        raise InvalidInputError("chi must be >= 1")
    if h.ab_cut is None:
        raise InvalidInputError("Hamiltonian has no Alice/Bob cut")
    if h.n_sites > 12:
        raise InvalidInputError("dense minimization supports at most 12 qubits")
    hd = dense_matrix(h).astype(complex)
    da = h.phys_dim**h.ab_cut
    db = h.phys_dim ** (h.n_sites - h.ab_cut)
    ht = hd.reshape(da, db, da, db)
    vals, vecs = scipy.linalg.eigh(hd, subset_by_index=(0, 0))
    e0 = float(vals[0])
    ground = vecs[:, 0]
    s_ground = linalg.svd(ground.reshape(da, db))[1]
    initial_rank = int(np.count_nonzero(s_ground**2 > 1e-12))
    chi_eff = min(chi, da, db)

    def one_restart(r: int):
        rng = np.random.default_rng([seed, r])
        y0 = np.linalg.qr(rng.standard_normal((db, chi_eff)) + 1j * rng.standard_normal((db, chi_eff)))[0]
        return _ansatz_sweep(ht, y0, chi_eff, max_iter, tol)

    if n_threads is None:
        n_threads = int(os.environ.get("ENTTEMP_THREADS", "1"))
    if n_threads > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            outcomes = list(pool.map(one_restart, range(restarts)))
    else:
        outcomes = [one_restart(r) for r in range(restarts)]
    best = math.inf
    any_converged = False
    for energy, conv in outcomes:
        any_converged = any_converged or conv
        if energy < best:
            best = energy
    delta_s0 = math.log2(initial_rank) - math.log2(chi_eff)
    return RankMinimumResult(delta_e=best - e0, delta_s0_bits=delta_s0, converged=any_converged)
