"""Energy-entanglement tradeoff engine.

Imaginary-time gate sweeps push an MPS toward the ground state; Schmidt
sharpening pushes its cut entropy down.  Interleaving both moves with random
parameters samples states that are cheap in energy *and* low in entanglement,
and the nondominated subset of the recorded (energy above ground, extracted
bits) pairs estimates the optimal tradeoff front.  The front's ratio
t = delta_e / delta_s is the entanglement temperature curve.
"""

from __future__ import annotations

import hashlib
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import linalg, mps
from .errors import ConvergenceError, DegeneracyError, InvalidInputError
from .models import LocalHamiltonian, dense_matrix


# ---------------------------------------------------------------------------
# imaginary-time evolution
# ---------------------------------------------------------------------------

# Default search schedule, ample for energy targets; the sampling variant digs
# deeper so that perturbing the ground stays quadratic in energy down to the
# smallest sharpenings the sampler draws.
GROUND_SCHEDULE = [(0.2, 300), (0.05, 400), (0.02, 400), (0.005, 600), (0.001, 800), (0.0003, 800)]
SAMPLING_GROUND_SCHEDULE = GROUND_SCHEDULE + [(1e-4, 800), (3e-5, 800)]


def bond_hamiltonians(h: LocalHamiltonian) -> list[np.ndarray]:
    """Per-bond two-site matrices: adjacent couplings plus evenly split fields.

    Interior one-site terms contribute half to each neighbouring bond; the
    chain ends fold their full field into the single bond they touch.  Raises
    for Hamiltonians with couplings that are not nearest-neighbour.
    """
    n, d = h.n_sites, h.phys_dim
    if n < 2:
        raise InvalidInputError("need at least two sites for bond gates")
    eye = np.eye(d)
    bonds = [np.zeros((d * d, d * d), dtype=complex) for _ in range(n - 1)]
    for sites, mat in h.terms:
        if len(sites) == 2 and sites[1] == sites[0] + 1:
            bonds[sites[0]] += mat
        elif len(sites) == 1:
            (i,) = sites
            pieces = []
            if i > 0:
                pieces.append(i - 1)
            if i < n - 1:
                pieces.append(i)
            for b in pieces:
                op = np.kron(mat, eye) if b == i else np.kron(eye, mat)
                bonds[b] += op / len(pieces)
        else:
            raise InvalidInputError(f"term on sites {sites} is not nearest-neighbour; cannot build gates")
    return bonds


def _apply_gate(ts: list, i: int, gate: np.ndarray, chi_max: int, tol: float) -> None:
    """Apply a two-site gate at bond (i, i+1); center must be at site i and
    moves to i+1.  Tensors are replaced, singular values renormalized."""
    d = ts[i].shape[1]
    theta = np.tensordot(ts[i], ts[i + 1], axes=(2, 0))      # (Dl, s, t, Dr)
    dl, _, _, dr = theta.shape
    theta = np.tensordot(gate.reshape(d, d, d, d), theta, axes=([2, 3], [1, 2]))
    theta = theta.transpose(2, 0, 1, 3).reshape(dl * d, d * dr)
    u, s, vd = linalg.svd(theta)
    k = mps._pick_rank(s, chi_max, tol)
    s_kept = s[:k] / np.linalg.norm(s[:k])
    ts[i] = u[:, :k].reshape(dl, d, k)
    ts[i + 1] = (s_kept[:, None] * vd[:k]).reshape(k, d, dr)


def _shift_center(ts: list, c: int, target: int) -> int:
    while c < target:
        q, r = mps._left_qr(ts[c])
        ts[c] = q
        ts[c + 1] = np.tensordot(r, ts[c + 1], axes=(1, 0))
        c += 1
    while c > target:
        lmat, q = mps._right_lq(ts[c])
        ts[c] = q
        ts[c - 1] = np.tensordot(ts[c - 1], lmat, axes=(2, 0))
        c -= 1
    return c


def imaginary_step(state: mps.MatrixProductState, h: LocalHamiltonian, tau: float,
                   chi_max: int, tol: float = 0.0) -> mps.MatrixProductState:
    """One second-order Trotter sweep of exp(-tau H): even bonds at tau/2,
    odd bonds at tau, even bonds at tau/2.  Renormalizes and truncates."""
    if tau <= 0:
        raise InvalidInputError("tau must be positive")
    if state.n_sites != h.n_sites or state.phys_dim != h.phys_dim:
        raise InvalidInputError("state and Hamiltonian shapes do not match")
    bonds = bond_hamiltonians(h)
    half = [linalg.hermitian_exp(b, -tau / 2) for b in bonds]
    full = [linalg.hermitian_exp(b, -tau) for b in bonds]
    st = mps.move_center(state, 0)
    ts = list(st.tensors)
    c = 0
    even = list(range(0, len(bonds), 2))
    odd = list(range(1, len(bonds), 2))
    for i in even:
        c = _shift_center(ts, c, i)
        _apply_gate(ts, i, half[i], chi_max, tol)
        c = i + 1
    for i in reversed(odd):
        c = _shift_center(ts, c, i)
        _apply_gate(ts, i, full[i], chi_max, tol)
        c = i + 1
    for i in even:
        c = _shift_center(ts, c, i)
        _apply_gate(ts, i, half[i], chi_max, tol)
        c = i + 1
    out = mps.MatrixProductState(tuple(ts), canonical_center=c)
    return mps.canonicalize(out, c)


def find_ground(h: LocalHamiltonian, chi_max: int,
                schedule: list[tuple[float, int]] | None = None,
                tol: float = 1e-10, seed: int = 7,
                start: mps.MatrixProductState | None = None,
                ) -> tuple[mps.MatrixProductState, float]:
    """Imaginary-time ground-state search over a decreasing-tau schedule.

    Each stage runs up to its step budget and advances early once the energy
    drift per step falls below tol.  If the final stage ends above tol, a
    ConvergenceError carrying the best iterate is raised.

    Returns (ground state, its energy).
    """
    if schedule is None:
        schedule = GROUND_SCHEDULE
    if not schedule:
        raise InvalidInputError("schedule must not be empty")
    taus = [t for t, _ in schedule]
    if any(b >= a for a, b in zip(taus, taus[1:])):
        raise InvalidInputError("schedule taus must decrease")
    state = start if start is not None else mps.random_mps(h.n_sites, h.phys_dim, min(chi_max, 8), seed)
    energy = mps.energy(state, h)
    check_every = 5
    drift = math.inf
    for tau, steps in schedule:
        done = 0
        while done < steps:
            burst = min(check_every, steps - done)
            for _ in range(burst):
                state = imaginary_step(state, h, tau, chi_max)
            done += burst
            new_energy = mps.energy(state, h)
            drift = abs(new_energy - energy) / burst
            energy = new_energy
            if drift < tol:
                break
    if drift >= tol:
        raise ConvergenceError(
            f"ground search did not converge (drift {drift:.3e} >= tol {tol:.3e})",
            state=state, energy=energy)
    return state, energy


def sharpen(state: mps.MatrixProductState, bond: int, epsilon: float) -> mps.MatrixProductState:
    """Replace the Schmidt coefficients at ``bond`` by their (1+epsilon) power,
    renormalized; Schmidt vectors are untouched."""
    if epsilon < 0:
        raise InvalidInputError("epsilon must be nonnegative")
    n = state.n_sites
    if not 1 <= bond <= n - 1:
        raise InvalidInputError(f"bond {bond} out of range [1, {n - 1}]")
    st = mps.move_center(state, bond)
    ts = list(st.tensors)
    m = ts[bond]
    dl, d, dr = m.shape
    u, s, vd = linalg.svd(m.reshape(dl, d * dr))
    k = int(np.count_nonzero(s > 0.0)) or 1
    s = s[:k] / np.linalg.norm(s[:k])
    sharp = s ** (1.0 + epsilon)
    sharp /= np.linalg.norm(sharp)
    ts[bond] = ((u[:, :k] * sharp) @ vd[:k]).reshape(dl, d, dr)
    return mps.MatrixProductState(tuple(ts), canonical_center=bond)


# ---------------------------------------------------------------------------
# tradeoff sampling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TradeoffPoint:
    """One sampled (energy above ground, extracted bits) pair."""

    delta_e: float
    delta_s: float
    sample: int
    moves_digest: str

    def __post_init__(self):
        if not (math.isfinite(self.delta_e) and math.isfinite(self.delta_s)):
            raise InvalidInputError("tradeoff point must be finite")
        if self.delta_e < -1e-8:
            raise InvalidInputError(f"delta_e {self.delta_e} below tolerance")


@dataclass(frozen=True)
class ParetoFront:
    """Nondominated tradeoff points, sorted by extracted bits ascending."""

    points: tuple[TradeoffPoint, ...]

    def __post_init__(self):
        ds = [p.delta_s for p in self.points]
        de = [p.delta_e for p in self.points]
        if any(b < a for a, b in zip(ds, ds[1:])):
            raise InvalidInputError("front must be sorted by delta_s")
        if any(b < a for a, b in zip(de, de[1:])):
            raise InvalidInputError("front delta_e must be nondecreasing")

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


@dataclass(frozen=True)
class SamplerConfig:
    """Random-move sampling parameters.

    tau is drawn log-uniformly from tau_range; the sharpening strength is
    drawn uniformly from (epsilon_range[0], epsilon_range[1]].  Every sample
    gets its own RNG stream derived from (seed, sample index), so results do
    not depend on execution order.
    """

    n_samples: int
    rounds_per_sample: int
    chi_max: int
    seed: int
    tau_range: tuple[float, float] = (1e-3, 1.0)
    epsilon_range: tuple[float, float] = (0.0, 0.5)

    def __post_init__(self):
        if self.n_samples < 0 or self.rounds_per_sample < 0:
            raise InvalidInputError("sample and round counts must be nonnegative")
        if self.chi_max < 1:
            raise InvalidInputError("chi_max must be >= 1")
        if self.seed < 0:
            raise InvalidInputError("seed must be nonnegative")
        lo, hi = self.tau_range
        if not 0 < lo < hi:
            raise InvalidInputError("tau_range must satisfy 0 < min < max")
        elo, ehi = self.epsilon_range
        if not 0 <= elo < ehi:
            raise InvalidInputError("epsilon_range must satisfy 0 <= min < max")


def _run_sample(index: int, h: LocalHamiltonian, ground: mps.MatrixProductState,
                e0: float, s_omega: float, cfg: SamplerConfig) -> list[TradeoffPoint]:
    rng = np.random.default_rng([cfg.seed, index])
    if index % 2 == 0:
        state = ground
    else:
        state = mps.random_mps(h.n_sites, h.phys_dim, cfg.chi_max, int(rng.integers(2**63)))
    cut = h.ab_cut
    digest = hashlib.sha1()
    points = []
    for _ in range(cfg.rounds_per_sample):
        if rng.integers(2) == 0:
            lo, hi = cfg.tau_range
            tau = float(np.exp(rng.uniform(np.log(lo), np.log(hi))))
            state = imaginary_step(state, h, tau, cfg.chi_max)
            digest.update(f"i{tau:.12e}".encode())
        else:
            elo, ehi = cfg.epsilon_range
            eps = float(ehi - rng.uniform() * (ehi - elo))  # in (elo, ehi]
            state = sharpen(state, cut, eps)
            digest.update(f"s{eps:.12e}".encode())
        ds = s_omega - mps.entropy_bits(mps.schmidt(state, cut))
        de = mps.energy(state, h) - e0
        if ds > 0.0 and de >= -1e-8:
            points.append(TradeoffPoint(de, ds, index, digest.hexdigest()[:12]))
    return points


def sample_tradeoff(h: LocalHamiltonian, ground: mps.MatrixProductState, e0: float,
                    cfg: SamplerConfig, n_threads: int | None = None) -> list[TradeoffPoint]:
    """Sample tradeoff points by random move sequences from the ground state
    (even sample indices) or from random states (odd indices).

    A point is recorded after every move; points that extract nothing
    (delta_s <= 0) are discarded.  Deterministic for a fixed config seed.
    """
    if h.ab_cut is None:
        raise InvalidInputError("Hamiltonian has no Alice/Bob cut")
    s_omega = mps.entropy_bits(mps.schmidt(ground, h.ab_cut))
    indices = range(cfg.n_samples)
    if n_threads is None:
        n_threads = int(os.environ.get("ENTTEMP_THREADS", "1"))
    results: dict[int, list[TradeoffPoint]] = {}
    if n_threads > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            futures = {i: pool.submit(_run_sample, i, h, ground, e0, s_omega, cfg) for i in indices}
            for i, fut in futures.items():
                try:
                    results[i] = fut.result()
                except Exception as exc:
                    raise RuntimeError(f"sample {i} failed: {exc}") from exc
    else:
        for i in indices:
            try:
                results[i] = _run_sample(i, h, ground, e0, s_omega, cfg)
            except Exception as exc:
                raise RuntimeError(f"sample {i} failed: {exc}") from exc
    merged = []
    for i in indices:
        merged.extend(results[i])
    return merged


def pareto_front(points) -> ParetoFront:
    """Maximal nondominated subset under (minimize delta_e, maximize delta_s).

    A point is dominated if some other point extracts at least as much for at
    most the same cost, strictly better in one of the two.
    """
    pts = list(points)
    for p in pts:
        if not (math.isfinite(p.delta_e) and math.isfinite(p.delta_s)):
            raise InvalidInputError("points must be finite")
    order = sorted(range(len(pts)), key=lambda k: (-pts[k].delta_s, pts[k].delta_e, k))
    survivors = []
    best_above = math.inf  # lowest cost among strictly larger delta_s
    i = 0
    while i < len(order):
        j = i
        group_s = pts[order[i]].delta_s
        group_min = math.inf
        while j < len(order) and pts[order[j]].delta_s == group_s:
            group_min = min(group_min, pts[order[j]].delta_e)
            j += 1
        if group_min < best_above:
            survivors.extend(k for k in order[i:j] if pts[k].delta_e == group_min)
            best_above = group_min
        i = j
    survivors.sort(key=lambda k: (pts[k].delta_s, k))
    return ParetoFront(tuple(pts[k] for k in survivors))


def ent_temperature(front: ParetoFront) -> list[tuple[float, float]]:
    """(delta_s, delta_e / delta_s) along the front; zero-extraction points are
    skipped with a warning."""
    out = []
    for p in front:
        if p.delta_s == 0.0:
            warnings.warn("skipping front point with delta_s = 0", stacklevel=2)
            continue
        out.append((p.delta_s, p.delta_e / p.delta_s))
    return out


# ---------------------------------------------------------------------------
# near-ground expansion of the tradeoff
# ---------------------------------------------------------------------------

def _schmidt_split(vec: np.ndarray, h: LocalHamiltonian):
    if h.ab_cut is None:
        raise InvalidInputError("Hamiltonian has no Alice/Bob cut")
    da = h.phys_dim**h.ab_cut
    db = h.phys_dim ** (h.n_sites - h.ab_cut)
    u, s, vd = linalg.svd(np.asarray(vec, dtype=complex).reshape(da, db))
    s = s / np.linalg.norm(s)
    return u, s, vd


def near_ground_coefficients(ground: np.ndarray, h: LocalHamiltonian, e0: float) -> tuple[float, float]:
    """Leading response of entropy and energy to a bump of the top Schmidt weight.

    Perturbing the ground state's largest Schmidt weight lambda0^2 by epsilon
    (renormalized) changes the cut entropy linearly and the energy
    quadratically; returns those two coefficients

        c1 = -(S + log2 lambda0^2)            [bits per unit epsilon]
        c2 = <l0 r0|(H - e0)|l0 r0> / (4 lambda0^2)

    so that dS = c1 epsilon + O(eps^2) and dE = c2 epsilon^2 + O(eps^3).
    Raises DegeneracyError when the top weight is degenerate, where the
    expansion is ill-defined.
    """
    u, s, vd = _schmidt_split(ground, h)
    if len(s) > 1 and s[0] - s[1] < 1e-10:
        raise DegeneracyError("top Schmidt value is degenerate; expansion undefined")
    w0 = float(s[0] ** 2)
    entropy = mps.entropy_bits(s)
    c1 = -(entropy + math.log2(w0))
    l0r0 = np.kron(u[:, 0], vd[0])
    hd = dense_matrix(h)
    c2 = float((np.vdot(l0r0, hd @ l0r0).real - e0) / (4.0 * w0))
    return c1, c2


def perturb_top_weight(ground: np.ndarray, h: LocalHamiltonian, epsilon: float) -> np.ndarray:
    """Dense state with the ground state's top Schmidt weight bumped by epsilon
    and the spectrum renormalized; Schmidt vectors unchanged."""
    u, s, vd = _schmidt_split(ground, h)
    w = s**2
    w[0] += epsilon
    w /= w.sum()
    return ((u * np.sqrt(w)) @ vd).reshape(-1)
