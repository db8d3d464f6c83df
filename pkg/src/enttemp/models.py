"""Spin-chain Hamiltonians with a designated Alice/Bob cut.

A LocalHamiltonian is a sum of Hermitian terms, each acting on an explicit
tuple of sites.  Bond ``ab_cut`` splits the chain into Alice's block (the
first ``ab_cut`` sites) and Bob's block (the rest).  Dense matrices use
site 0 as the most significant tensor factor, matching mps.to_dense.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce

import numpy as np
import scipy.linalg

from .errors import InvalidInputError, ResourceLimitError

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]])
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]])

# |Phi+> = (|00> + |11>)/sqrt(2) and its projector
BELL_PLUS = np.array([1.0, 0.0, 0.0, 1.0]) / math.sqrt(2.0)
BELL_PROJECTOR = np.outer(BELL_PLUS, BELL_PLUS)

DENSE_SITE_LIMIT = 12


@dataclass(frozen=True)
class LocalHamiltonian:
    """Sum of local Hermitian terms on a chain with an Alice/Bob cut.

    ``terms`` is a tuple of (sites, matrix) pairs; sites are strictly
    ascending 0-based indices and the matrix acts on their joint space in
    that order.  Most terms touch one or two sites; the periodic fermion
    chain contributes one chain-wide parity-string term.
    """

    n_sites: int
    phys_dim: int
    terms: tuple[tuple[tuple[int, ...], np.ndarray], ...]
    ab_cut: int | None
    pair_layout: dict[int, tuple[int, int]] | None = None
    label: str = ""

    def __post_init__(self):
        if self.n_sites < 1:
            raise InvalidInputError("n_sites must be positive")
        if self.ab_cut is not None and not 1 <= self.ab_cut <= self.n_sites - 1:
            raise InvalidInputError(f"ab_cut {self.ab_cut} out of range")
        for sites, mat in self.terms:
            if list(sites) != sorted(set(sites)) or min(sites) < 0 or max(sites) >= self.n_sites:
                raise InvalidInputError(f"term support {sites} is not an ascending in-range site tuple")
            dim = self.phys_dim ** len(sites)
            if mat.shape != (dim, dim):
                raise InvalidInputError(f"term on {sites} has wrong shape {mat.shape}")
            scale = max(1.0, float(np.abs(mat).max()))
            if np.abs(mat - mat.conj().T).max() > 1e-12 * scale:
                raise InvalidInputError(f"term on {sites} is not Hermitian")
        if self.pair_layout is not None:
            used = [s for pair in self.pair_layout.values() for s in pair]
            if len(used) != len(set(used)):
                raise InvalidInputError("pair_layout sites must be disjoint")

    def crossing_terms(self) -> list[tuple[tuple[int, ...], np.ndarray]]:
        """Terms with support on both sides of the Alice/Bob cut."""
        if self.ab_cut is None:
            raise InvalidInputError("Hamiltonian has no Alice/Bob cut")
        cut = self.ab_cut
        return [(s, m) for s, m in self.terms if min(s) < cut <= max(s)]


@dataclass(frozen=True)
class FermionChainSpec:
    """Periodic staggered-fermion hopping chain: N sites, lattice spacing a."""

    n_sites: int
    lattice_spacing: float

    def __post_init__(self):
        if self.n_sites < 4 or self.n_sites % 2 != 0:
            raise InvalidInputError("fermion chain needs an even site count >= 4")
        if not self.lattice_spacing > 0:
            raise InvalidInputError("lattice spacing must be positive")


def toy_model(n_pairs: int) -> LocalHamiltonian:
    """Hamiltonian sum_j (1 - P_j) of Bell projectors on n nested qubit pairs.

    Sites run A_n..A_1 B_1..B_n so the Alice/Bob split is the single middle
    bond; pair j couples sites (n - j, n - 1 + j).  The ground state is a
    product of Bell pairs with energy 0.
    """
    if n_pairs < 1:
        raise InvalidInputError("need at least one pair")
    n = n_pairs
    term = np.eye(4) - BELL_PROJECTOR
    layout = {j: (n - j, n - 1 + j) for j in range(1, n + 1)}
    terms = tuple((layout[j], term) for j in range(1, n + 1))
    return LocalHamiltonian(2 * n, 2, terms, ab_cut=n, pair_layout=layout, label=f"toy:{n}")


def heisenberg_af(n_sites: int) -> LocalHamiltonian:
    """Critical Heisenberg antiferromagnet: sum of XX + YY + ZZ on an open chain."""
    if n_sites < 2:
        raise InvalidInputError("heisenberg_af needs at least 2 sites")
    bond = (np.kron(PAULI_X, PAULI_X) + np.kron(PAULI_Y, PAULI_Y) + np.kron(PAULI_Z, PAULI_Z)).real
    terms = tuple(((i, i + 1), bond) for i in range(n_sites - 1))
    return LocalHamiltonian(n_sites, 2, terms, ab_cut=n_sites // 2, label=f"haf:{n_sites}")


def tfi_critical(n_sites: int) -> LocalHamiltonian:
    """Transverse-field Ising chain at its critical point: -sum ZZ - sum X."""
    if n_sites < 1:
        raise InvalidInputError("tfi_critical needs at least 1 site")
    zz = -np.kron(PAULI_Z, PAULI_Z).real
    terms = [((i, i + 1), zz) for i in range(n_sites - 1)]
    terms += [((i,), -PAULI_X.real) for i in range(n_sites)]
    cut = n_sites // 2 if n_sites >= 2 else None
    return LocalHamiltonian(n_sites, 2, tuple(terms), ab_cut=cut, label=f"tfi:{n_sites}")


def _kron_chain(mats) -> np.ndarray:
    return reduce(np.kron, mats)


def staggered_fermion_spin(spec: FermionChainSpec) -> LocalHamiltonian:
    """Spin image of the periodic staggered-fermion hopping chain.

    Bulk hopping maps to two-site terms; the periodic bond picks up the
    parity string, stored as one chain-wide term.  Each summand carries its
    +1/a shift, so the full spectrum equals the fermionic mode-filling
    spectrum.  The chain-wide term keeps this constructor dense-scale only.
    """
    n, a = spec.n_sites, spec.lattice_spacing
    if n > DENSE_SITE_LIMIT:
        raise ResourceLimitError(f"spin image is materialized densely; supports at most {DENSE_SITE_LIMIT} sites")
    c = np.array([[0.0, 1.0], [0.0, 0.0]])  # site annihilator, |1> occupied
    cdag = c.T
    z = PAULI_Z.real
    hop = (1j / (2 * a)) * (np.kron(cdag, c) - np.kron(c, cdag)) + np.eye(4) / a
    terms = [((i, i + 1), hop) for i in range(n - 1)]
    string = _kron_chain([c] + [z] * (n - 2) + [cdag])
    boundary = (1j / (2 * a)) * (string - string.conj().T) + np.eye(2**n) / a
    terms.append((tuple(range(n)), boundary))
    return LocalHamiltonian(n, 2, tuple(terms), ab_cut=n // 2, label=f"fermion:{n}:{a:g}")


def embed_operator(n_sites: int, sites: tuple[int, ...], mat: np.ndarray, phys_dim: int = 2) -> np.ndarray:
    """Embed a joint operator on ``sites`` into the full chain space."""
    k = len(sites)
    rest = [s for s in range(n_sites) if s not in sites]
    if not rest:
        return mat
    full = np.kron(mat, np.eye(phys_dim ** len(rest), dtype=mat.dtype))
    order = list(sites) + rest
    perm = np.argsort(order)  # position of chain site s in the kron ordering
    tensor = full.reshape((phys_dim,) * (2 * n_sites))
    axes = list(perm) + [n_sites + p for p in perm]
    dim = phys_dim**n_sites
    return tensor.transpose(axes).reshape(dim, dim)


def dense_matrix(h: LocalHamiltonian) -> np.ndarray:
    """Full Hamiltonian matrix; limited to small chains."""
    if h.n_sites > DENSE_SITE_LIMIT:
        raise ResourceLimitError(f"dense matrix supports at most {DENSE_SITE_LIMIT} sites, got {h.n_sites}")
    d = h.phys_dim
    dim = d**h.n_sites
    real = all(np.isrealobj(m) or np.abs(m.imag).max() == 0.0 for _, m in h.terms)
    total = np.zeros((dim, dim), dtype=float if real else complex)
    for sites, mat in h.terms:
        contiguous = len(sites) == sites[-1] - sites[0] + 1
        if contiguous:
            left = np.eye(d ** sites[0])
            right = np.eye(d ** (h.n_sites - 1 - sites[-1]))
            total += _kron_chain([left, mat.real if real else mat, right])
        else:
            emb = embed_operator(h.n_sites, sites, mat, d)
            total += emb.real if real else emb
    return total


def dense_ground_state(h: LocalHamiltonian) -> tuple[float, np.ndarray]:
    """Lowest eigenpair of the dense Hamiltonian."""
    hd = dense_matrix(h)
    vals, vecs = scipy.linalg.eigh(hd, subset_by_index=(0, 0))
    return float(vals[0]), vecs[:, 0]


def interaction_norm(h: LocalHamiltonian) -> float:
    """Operator norm of the sum of terms crossing the Alice/Bob cut."""
    crossing = h.crossing_terms()
    if not crossing:
        return 0.0
    support = sorted({s for sites, _ in crossing for s in sites})
    if len(support) > 16:
        raise ResourceLimitError("crossing-term support exceeds 16 qubits")
    index = {s: k for k, s in enumerate(support)}
    m = len(support)
    total = np.zeros((h.phys_dim**m, h.phys_dim**m), dtype=complex)
    for sites, mat in crossing:
        local = tuple(index[s] for s in sites)
        total += embed_operator(m, local, mat.astype(complex), h.phys_dim)
    vals = np.linalg.eigvalsh(total)
    return float(np.abs(vals).max())


def pair_product_state(h: LocalHamiltonian, pair_vec: np.ndarray) -> np.ndarray:
    """Dense state placing the same two-qubit vector on every logical pair of a
    pair-layout Hamiltonian (amplitude index order follows the chain sites)."""
    if h.pair_layout is None:
        raise InvalidInputError("Hamiltonian has no pair layout")
    pair_vec = np.asarray(pair_vec, dtype=complex).reshape(2, 2)
    letters = "abcdefghijklmnopqrstuvwxyz"
    subs = []
    for j in sorted(h.pair_layout):
        sa, sb = h.pair_layout[j]
        subs.append(letters[sa] + letters[sb])
    spec = ",".join(subs) + "->" + letters[: h.n_sites]
    out = np.einsum(spec, *([pair_vec] * len(subs)))
    return out.reshape(-1)


def parse_model(spec_str: str) -> LocalHamiltonian:
    """Build a model from its CLI name: toy:<n>, haf:<N>, tfi:<N>, fermion:<N>:<a>."""
    parts = spec_str.strip().split(":")
    try:
        kind = parts[0]
        if kind == "toy" and len(parts) == 2:
            return toy_model(int(parts[1]))
        if kind == "haf" and len(parts) == 2:
            return heisenberg_af(int(parts[1]))
        if kind == "tfi" and len(parts) == 2:
            return tfi_critical(int(parts[1]))
        if kind == "fermion" and len(parts) == 3:
            return staggered_fermion_spin(FermionChainSpec(int(parts[1]), float(parts[2])))
    except (ValueError, TypeError) as exc:
        raise InvalidInputError(f"cannot parse model {spec_str!r}: {exc}") from exc
    raise InvalidInputError(f"unknown model {spec_str!r}")
