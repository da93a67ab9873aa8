"""Seeded random states, maps and channels for property suites.

Every function takes a caller-owned :class:`numpy.random.Generator`; nothing
here touches global random state.
"""

from __future__ import annotations

import numpy as np

from telesep.qstate import DensityMatrix, bloch_to_density

DEFAULT_SEED = 42


def make_rng(seed: int = DEFAULT_SEED) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_ket(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-random pure state: normalized vector of complex Gaussians."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_unitary(rng: np.random.Generator, dim: int = 2) -> np.ndarray:
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_bloch(rng: np.random.Generator) -> np.ndarray:
    """Uniform point in the unit ball."""
    direction = rng.standard_normal(3)
    direction /= np.linalg.norm(direction)
    return direction * rng.uniform() ** (1 / 3)


def random_qubit_state(rng: np.random.Generator) -> DensityMatrix:
    return bloch_to_density(random_bloch(rng))


def random_density(rng: np.random.Generator, n_qubits: int, rank: int | None = None) -> DensityMatrix:
    """Hilbert-Schmidt (Ginibre) random mixed state of the given rank."""
    dim = 2**n_qubits
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    m = g @ g.conj().T
    return DensityMatrix._trusted(m / np.trace(m).real)


def random_real_density(rng: np.random.Generator, n_qubits: int = 2) -> DensityMatrix:
    """Random real symmetric state; every sigma_2 expectation vanishes."""
    dim = 2**n_qubits
    g = rng.standard_normal((dim, dim))
    m = g @ g.T
    return DensityMatrix._trusted(m / np.trace(m))


def random_product_state(rng: np.random.Generator) -> DensityMatrix:
    a = random_density(rng, 1)
    b = random_density(rng, 1)
    return DensityMatrix._trusted(np.kron(a.mat, b.mat))


def random_entangled_pure(rng: np.random.Generator) -> DensityMatrix:
    """(U x V)(a|00> + b|11>) with Schmidt coefficient a in (0, 1) strictly."""
    a = rng.uniform(0.02, 0.98)
    ket = np.array([a, 0, 0, np.sqrt(1 - a * a)], dtype=complex)
    local = np.kron(random_unitary(rng), random_unitary(rng))
    return DensityMatrix.from_ket(local @ ket)


def random_schmidt_state(rng: np.random.Generator) -> DensityMatrix:
    """a|00> + b|11> with a uniform in [0, 1]."""
    a = rng.uniform()
    return schmidt_state(a)


def schmidt_state(a: float) -> DensityMatrix:
    b = np.sqrt(max(0.0, 1 - a * a))
    return DensityMatrix.from_ket(np.array([a, 0, 0, b], dtype=complex))


def random_diagonal_marginal_state(
    rng: np.random.Generator, party: int = 1, n_terms: int = 3
) -> DensityMatrix:
    """Random two-qubit state whose ``party`` marginal is diagonal.

    Mixes pure states sum_j c_j |j> x |v_j> with {v_j} orthonormal; each has
    a diagonal marginal on the |j> side, so the mixture does too.
    """
    weights = rng.dirichlet(np.ones(n_terms))
    total = np.zeros((4, 4), dtype=complex)
    for w in weights:
        c = random_ket(rng, 2)
        v = random_unitary(rng)
        ket = c[0] * np.kron([1, 0], v[:, 0]) + c[1] * np.kron([0, 1], v[:, 1])
        if party == 2:
            ket = ket.reshape(2, 2).T.ravel()
        total += w * np.outer(ket, ket.conj())
    return DensityMatrix._trusted(total)


def random_simplex(rng: np.random.Generator, k: int = 4) -> np.ndarray:
    """Uniform point on the probability simplex."""
    return rng.dirichlet(np.ones(k))


def random_separable_bell_weights(rng: np.random.Generator) -> np.ndarray:
    """Uniform simplex point conditioned on max weight <= 1/2 (rejection)."""
    while True:
        w = random_simplex(rng)
        if w.max() <= 0.5:
            return w
