"""Matrix product states: canonical forms, Schmidt spectra, entropies, truncation, energy.

Site tensors have shape (left bond, physical, right bond); boundary bonds have
dimension 1.  Bond ``b`` (1 <= b <= n_sites - 1) cuts the chain into the first
``b`` sites versus the rest, so bond ``b`` sits between 0-based sites ``b - 1``
and ``b``.  All public operations return new states normalized to unit norm;
tensors are never mutated in place.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import InvalidInputError, ResourceLimitError

ENTROPY_NORM_TOL = 1e-8


@dataclass(frozen=True)
class SchmidtSpectrum:
    """Descending nonnegative Schmidt coefficients across one bipartition."""

    coefficients: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coefficients, dtype=float)
        if coeffs.ndim != 1 or coeffs.size == 0:
            raise InvalidInputError("Schmidt spectrum must be a nonempty 1d array")
        if not np.all(np.isfinite(coeffs)) or np.any(coeffs < -1e-15):
            raise InvalidInputError("Schmidt coefficients must be finite and nonnegative")
        coeffs = np.sort(np.clip(coeffs, 0.0, None))[::-1].copy()
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def weights(self) -> np.ndarray:
        """Squared coefficients (probability weights)."""
        return self.coefficients**2

    def __len__(self) -> int:
        return int(self.coefficients.size)


@dataclass(frozen=True)
class MatrixProductState:
    """Open-boundary MPS.  ``canonical_center=i`` means sites left of ``i`` are
    left isometries and sites right of ``i`` are right isometries; ``None``
    means the gauge is unknown."""

    tensors: tuple[np.ndarray, ...]
    canonical_center: int | None = field(default=None)

    def __post_init__(self):
        if len(self.tensors) < 2:
            raise InvalidInputError("an MPS needs at least 2 sites")
        if self.tensors[0].shape[0] != 1 or self.tensors[-1].shape[2] != 1:
            raise InvalidInputError("boundary bond dimensions must be 1")
        for a, b in zip(self.tensors[:-1], self.tensors[1:]):
            if a.shape[2] != b.shape[0]:
                raise InvalidInputError("adjacent bond dimensions are inconsistent")

    @property
    def n_sites(self) -> int:
        return len(self.tensors)

    @property
    def phys_dim(self) -> int:
        return self.tensors[0].shape[1]

    def bond_dims(self) -> list[int]:
        """Interior bond dimensions; entry b-1 belongs to bond b."""
        return [t.shape[2] for t in self.tensors[:-1]]


def _left_qr(t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    dl, d, dr = t.shape
    q, r = np.linalg.qr(t.reshape(dl * d, dr))
    return q.reshape(dl, d, -1), r


def _right_lq(t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    dl, d, dr = t.shape
    q, r = np.linalg.qr(t.reshape(dl, d * dr).conj().T)
    return r.conj().T, q.conj().T.reshape(-1, d, dr)


def canonicalize(state: MatrixProductState, center: int) -> MatrixProductState:
    """Gauge the state into mixed canonical form with the given center site,
    normalizing the center tensor to unit Frobenius norm."""
    n = state.n_sites
    if not 0 <= center < n:
        raise InvalidInputError(f"center {center} out of range for {n} sites")
    ts = list(state.tensors)
    for i in range(center):
        q, r = _left_qr(ts[i])
        ts[i] = q
        ts[i + 1] = np.tensordot(r, ts[i + 1], axes=(1, 0))
    for i in range(n - 1, center, -1):
        lmat, q = _right_lq(ts[i])
        ts[i] = q
        ts[i - 1] = np.tensordot(ts[i - 1], lmat, axes=(2, 0))
    nrm = np.linalg.norm(ts[center])
    if nrm == 0.0:
        raise InvalidInputError("cannot normalize the zero state")
    ts[center] = ts[center] / nrm
    return MatrixProductState(tuple(ts), canonical_center=center)


def move_center(state: MatrixProductState, target: int) -> MatrixProductState:
    """Shift the canonical center one QR step at a time (canonicalizing first
    if the gauge is unknown)."""
    if state.canonical_center is None:
        return canonicalize(state, target)
    ts = list(state.tensors)
    c = state.canonical_center
    while c < target:
        q, r = _left_qr(ts[c])
        ts[c] = q
        ts[c + 1] = np.tensordot(r, ts[c + 1], axes=(1, 0))
        c += 1
    while c > target:
        lmat, q = _right_lq(ts[c])
        ts[c] = q
        ts[c - 1] = np.tensordot(ts[c - 1], lmat, axes=(2, 0))
        c -= 1
    return MatrixProductState(tuple(ts), canonical_center=c)


def random_mps(n_sites: int, phys_dim: int, chi: int, seed: int) -> MatrixProductState:
    """Normalized random MPS with every bond at its maximal dimension up to chi.

    Deterministic for a fixed seed; Gaussian tensors make the bonds full rank
    almost surely.
    """
    if n_sites < 2:
        raise InvalidInputError("random_mps needs n_sites >= 2")
    if chi < 1 or phys_dim < 2:
        raise InvalidInputError("chi and phys_dim must be positive (chi >= 1, d >= 2)")
    rng = np.random.default_rng(seed)
    dims = [min(chi, phys_dim**k, phys_dim ** (n_sites - k)) for k in range(n_sites + 1)]
    ts = []
    for i in range(n_sites):
        shape = (dims[i], phys_dim, dims[i + 1])
        ts.append(rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    return canonicalize(MatrixProductState(tuple(ts)), 0)


def schmidt(state: MatrixProductState, bond: int) -> SchmidtSpectrum:
    """Schmidt spectrum across bond ``bond`` (first ``bond`` sites vs the rest)."""
    n = state.n_sites
    if not 1 <= bond <= n - 1:
        raise InvalidInputError(f"bond {bond} out of range [1, {n - 1}]")
    st = move_center(state, bond)
    m = st.tensors[bond]
    dl, d, dr = m.shape
    _, s, _ = linalg.svd(m.reshape(dl, d * dr))
    s = s[s > 0.0]
    s = s / np.linalg.norm(s)
    return SchmidtSpectrum(s)


def _weights_of(spec) -> np.ndarray:
    if isinstance(spec, SchmidtSpectrum):
        return spec.weights
    coeffs = np.asarray(spec, dtype=float)
    return coeffs**2


def entropy_bits(spec) -> float:
    """Entanglement entropy -sum(w log2 w) of the squared coefficients, in bits."""
    w = _weights_of(spec)
    if abs(w.sum() - 1.0) > ENTROPY_NORM_TOL:
        raise InvalidInputError("Schmidt spectrum is not normalized")
    w = w[w > 0.0]
    return float(-(w * np.log2(w)).sum())


def renyi0_bits(spec, tol: float = 1e-12) -> float:
    """log2 of the Schmidt rank, counting weights strictly above tol."""
    if tol < 0:
        raise InvalidInputError("tol must be nonnegative")
    count = int(np.count_nonzero(_weights_of(spec) > tol))
    if count == 0:
        return float("-inf")
    return float(np.log2(count))


def _pick_rank(s: np.ndarray, chi_max: int, tol: float) -> int:
    """Number of singular values to keep: drop the smallest tail with squared
    weight <= tol, then cap at chi_max (at least one kept either way)."""
    k = int(np.count_nonzero(s > 0.0)) or 1
    if tol > 0.0:
        w = s**2
        tail = np.cumsum(w[::-1])[::-1]  # tail[i] = sum of w[i:]
        while k > 1 and tail[k - 1] <= tol:
            k -= 1
    return max(1, min(k, chi_max))


def truncate(state: MatrixProductState, chi_max: int, tol: float = 0.0) -> MatrixProductState:
    """Cap every bond dimension at chi_max, discarding the smallest Schmidt
    weights first and renormalizing."""
    if chi_max < 1:
        raise InvalidInputError("chi_max must be >= 1")
    st = canonicalize(state, 0)
    ts = list(st.tensors)
    n = len(ts)
    for i in range(n - 1):
        dl, d, dr = ts[i].shape
        u, s, vd = linalg.svd(ts[i].reshape(dl * d, dr))
        k = _pick_rank(s, chi_max, tol)
        s_kept = s[:k] / np.linalg.norm(s[:k])
        ts[i] = u[:, :k].reshape(dl, d, k)
        carry = s_kept[:, None] * vd[:k]
        ts[i + 1] = np.tensordot(carry, ts[i + 1], axes=(1, 0))
    return MatrixProductState(tuple(ts), canonical_center=n - 1)


def overlap(a: MatrixProductState, b: MatrixProductState) -> complex:
    """Inner product <a|b>."""
    if a.n_sites != b.n_sites or a.phys_dim != b.phys_dim:
        raise InvalidInputError("overlap requires states of identical shape")
    env = np.ones((1, 1), dtype=complex)
    for ta, tb in zip(a.tensors, b.tensors):
        tmp = np.tensordot(env, tb, axes=(1, 0))  # (Da, d, Drb)
        env = np.tensordot(ta.conj(), tmp, axes=([0, 1], [0, 1]))
    return complex(env[0, 0])


def to_dense(state: MatrixProductState, max_sites: int = 16) -> np.ndarray:
    """Dense amplitude vector with site 0 as the most significant digit."""
    n = state.n_sites
    if n > max_sites:
        raise ResourceLimitError(f"dense conversion supports at most {max_sites} sites, got {n}")
    amp = state.tensors[0].reshape(state.phys_dim, -1)
    for t in state.tensors[1:]:
        amp = np.tensordot(amp, t, axes=(1, 0))
        amp = amp.reshape(-1, t.shape[2])
    return amp[:, 0]


def from_dense(vec: np.ndarray, n_sites: int, phys_dim: int = 2) -> MatrixProductState:
    """Exact MPS for a dense amplitude vector (site 0 most significant)."""
    vec = np.asarray(vec, dtype=complex)
    if vec.size != phys_dim**n_sites:
        raise InvalidInputError("amplitude count does not match the site count")
    nrm = np.linalg.norm(vec)
    if nrm == 0.0:
        raise InvalidInputError("cannot represent the zero vector")
    rest = vec.reshape(1, -1) / nrm
    ts = []
    dl = 1
    for _ in range(n_sites - 1):
        rest = rest.reshape(dl * phys_dim, -1)
        u, s, vd = linalg.svd(rest)
        k = int(np.count_nonzero(s > 0.0)) or 1
        ts.append(u[:, :k].reshape(dl, phys_dim, k))
        rest = s[:k, None] * vd[:k]
        dl = k
    ts.append(rest.reshape(dl, phys_dim, 1))
    return MatrixProductState(tuple(ts), canonical_center=n_sites - 1)


def _transfer(env: np.ndarray, t: np.ndarray) -> np.ndarray:
    tmp = np.tensordot(env, t, axes=(1, 0))
    return np.tensordot(t.conj(), tmp, axes=([0, 1], [0, 1]))


def _transfer_op(env: np.ndarray, t: np.ndarray, op: np.ndarray) -> np.ndarray:
    """Transfer step with a single-site operator inserted (op[s', s])."""
    tmp = np.tensordot(env, t, axes=(1, 0))          # (Dbra, s, Dr)
    tmp = np.tensordot(op, tmp, axes=(1, 1))          # (s', Dbra, Dr)
    return np.tensordot(t.conj(), tmp, axes=([0, 1], [1, 0]))


def _term_expectation(envs, ts, sites, mat, phys_dim):
    """<psi|term|psi> given left environments of a state whose tensors at and
    right of the support are right isometries."""
    d = phys_dim
    if len(sites) == 1:
        i = sites[0]
        f = _transfer_op(envs[i], ts[i], mat)
        return np.trace(f)
    i, j = sites
    if j == i + 1:
        theta = np.tensordot(ts[i], ts[j], axes=(2, 0))          # (Dl, s, t, Dr)
        ket = np.tensordot(envs[i], theta, axes=(1, 0))          # (Dbra, s, t, Dr)
        op4 = mat.reshape(d, d, d, d)                            # (s', t', s, t)
        ket = np.tensordot(op4, ket, axes=([2, 3], [1, 2]))      # (s', t', Dbra, Dr)
        f = np.tensordot(theta.conj(), ket, axes=([0, 1, 2], [2, 0, 1]))
        return np.trace(f)
    # distant pair: operator-Schmidt split into sums of single-site products
    op4 = mat.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)
    u, sig, vd = linalg.svd(op4)
    total = 0.0 + 0.0j
    for r in range(int(np.count_nonzero(sig > 0.0))):
        a_op = (u[:, r] * sig[r]).reshape(d, d)
        b_op = vd[r].reshape(d, d)
        f = _transfer_op(envs[i], ts[i], a_op)
        for k in range(i + 1, j):
            f = _transfer(f, ts[k])
        f = _transfer_op(f, ts[j], b_op)
        total += np.trace(f)
    return total


def energy(state: MatrixProductState, h) -> float:
    """Energy expectation <psi|H|psi> for a LocalHamiltonian.

    Terms on one or two sites are contracted directly on the MPS; wider terms
    (the periodic fermion chain's boundary string) fall back to the dense
    vector, which limits them to small systems.
    """
    if state.n_sites != h.n_sites or state.phys_dim != h.phys_dim:
        raise InvalidInputError("state and Hamiltonian shapes do not match")
    st = move_center(state, 0)
    ts = st.tensors
    envs = [np.ones((1, 1), dtype=complex)]
    for t in ts[:-1]:
        envs.append(_transfer(envs[-1], t))
    total = 0.0 + 0.0j
    dense_vec = None
    for sites, mat in h.terms:
        if len(sites) <= 2:
            total += _term_expectation(envs, ts, sites, mat, h.phys_dim)
        else:
            if dense_vec is None:
                dense_vec = to_dense(st, max_sites=12)
            from .models import embed_operator

            full = mat if len(sites) == h.n_sites else embed_operator(h.n_sites, sites, mat, h.phys_dim)
            total += np.vdot(dense_vec, full @ dense_vec)
    return float(total.real)
