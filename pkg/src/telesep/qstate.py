"""Dense density-matrix algebra for up to four qubits.

Conventions
-----------
* Qubits are big-endian: qubit 0 is the leftmost tensor factor, so the
  two-qubit basis order is |00>, |01>, |10>, |11>.
* Subsystem indices in this module are 0-based qubit indices.
* Every verdict (PSD, PPT) uses the floors in :mod:`telesep.tolerances`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from telesep import tolerances as tol
from telesep.errors import (
    BadSubsystemIndex,
    BlochNormExceeded,
    DimensionOverflow,
    NotADensityMatrix,
    NotAProjectorSet,
    NotHermitian,
    NotUnitary,
    WrongDimension,
)

MAX_QUBITS = 4

I2 = np.eye(2, dtype=complex)
SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (I2, SIGMA1, SIGMA2, SIGMA3)

_S = 1 / math.sqrt(2)
KET_PSI_PLUS = np.array([0, _S, _S, 0], dtype=complex)
KET_PSI_MINUS = np.array([0, _S, -_S, 0], dtype=complex)
KET_PHI_PLUS = np.array([_S, 0, 0, _S], dtype=complex)
KET_PHI_MINUS = np.array([_S, 0, 0, -_S], dtype=complex)

#: Bell kets in the channel weight order (w1, w2, w3, w4).
BELL_KETS = {
    "psi+": KET_PSI_PLUS,
    "psi-": KET_PSI_MINUS,
    "phi+": KET_PHI_PLUS,
    "phi-": KET_PHI_MINUS,
}
# built from unnormalized +-1 kets so the entries are exactly 0, +-1/2
BELL_PROJECTORS = {
    name: np.outer(np.sign(k.real), np.sign(k.real)).astype(complex) / 2 for name, k in BELL_KETS.items()
}

for _m in (*PAULIS, KET_PSI_PLUS, KET_PSI_MINUS, KET_PHI_PLUS, KET_PHI_MINUS):
    _m.flags.writeable = False
for _m in BELL_PROJECTORS.values():
    _m.flags.writeable = False


# ---------------------------------------------------------------------------
# Eigenvalues
# ---------------------------------------------------------------------------


def hermitian_eigenvalues(m) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix by cyclic Jacobi rotations.

    Each rotation first removes the phase of the pivot ``a[p, q]`` and then
    applies a real Givens rotation, so the iteration stays within the
    Hermitian matrices and converges quadratically once the off-diagonal
    mass is small. Works on Python scalars: for n <= 16 that beats numpy's
    per-call overhead by a wide margin.
    """
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise WrongDimension(f"expected a square matrix, got shape {arr.shape}")
    if arr.size and np.max(np.abs(arr - arr.conj().T)) > tol.EIG_HERMITIAN_ATOL:
        raise NotHermitian("matrix is not Hermitian within 1e-9")
    n = arr.shape[0]
    a = ((arr + arr.conj().T) / 2).tolist()
    threshold = tol.JACOBI_OFFDIAG_TOL * max(1.0, float(np.linalg.norm(arr)))
    threshold_sq = threshold * threshold
    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]

    for _ in range(100):
        off = 2 * sum(abs(a[p][q]) ** 2 for p, q in pairs)
        if off <= threshold_sq:
            break
        for p, q in pairs:
            apq = a[p][q]
            mag = abs(apq)
            if mag < 1e-300:
                continue
            dq = apq.conjugate() / mag
            theta = (a[q][q].real - a[p][p].real) / (2 * mag)
            t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1))
            c = 1 / math.sqrt(t * t + 1)
            s = t * c
            # columns: A <- A V with V = [[c, s], [-s dq, c dq]] on (p, q)
            sdq, cdq = s * dq, c * dq
            for row in a:
                xp, xq = row[p], row[q]
                row[p] = c * xp - sdq * xq
                row[q] = s * xp + cdq * xq
            # rows: A <- V^dagger A
            rp, rq = a[p], a[q]
            sdc, cdc = s * dq.conjugate(), c * dq.conjugate()
            for k in range(n):
                xp, xq = rp[k], rq[k]
                rp[k] = c * xp - sdc * xq
                rq[k] = s * xp + cdc * xq
            rp[q] = rq[p] = 0j
            rp[p] = complex(rp[p].real, 0.0)
            rq[q] = complex(rq[q].real, 0.0)
    else:
        raise RuntimeError("Jacobi iteration did not converge in 100 sweeps")
    return np.sort(np.array([a[k][k].real for k in range(n)]))


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlochVector:
    r1: float
    r2: float
    r3: float

    def __post_init__(self):
        if self.norm() > 1 + tol.BLOCH_NORM_ATOL:
            raise BlochNormExceeded(f"|r| = {self.norm():.17g} > 1")

    @classmethod
    def from_array(cls, r: Iterable[float]) -> "BlochVector":
        r1, r2, r3 = (float(x) for x in r)
        return cls(r1, r2, r3)

    def as_array(self) -> np.ndarray:
        return np.array([self.r1, self.r2, self.r3])

    def norm(self) -> float:
        return math.sqrt(self.r1**2 + self.r2**2 + self.r3**2)

    def __iter__(self):
        return iter((self.r1, self.r2, self.r3))


class DensityMatrix:
    """Immutable Hermitian, unit-trace, positive semidefinite matrix on 1-4 qubits.

    The constructor validates all three properties; internal operations that
    preserve them structurally go through :meth:`_trusted` to skip the
    eigenvalue check.
    """

    __slots__ = ("_mat", "n_qubits")

    def __init__(self, mat, *, check_psd: bool = True):
        arr = _as_square(mat)
        n = _n_qubits_of(arr.shape[0])
        if np.max(np.abs(arr - arr.conj().T)) > tol.HERMITIAN_ATOL:
            raise NotADensityMatrix("matrix is not Hermitian within 1e-12")
        trace = np.trace(arr)
        if abs(trace - 1) > tol.TRACE_ATOL:
            raise NotADensityMatrix(f"trace {trace.real:.17g} differs from 1")
        if check_psd:
            lowest = hermitian_eigenvalues(arr)[0]
            if lowest < tol.PSD_FLOOR:
                raise NotADensityMatrix(f"negative eigenvalue {lowest:.3e}")
        arr = arr.copy()
        arr.flags.writeable = False
        self._mat = arr
        self.n_qubits = n

    @classmethod
    def _trusted(cls, mat) -> "DensityMatrix":
        self = cls.__new__(cls)
        arr = np.array(mat, dtype=complex)
        arr = (arr + arr.conj().T) / 2
        arr.flags.writeable = False
        self._mat = arr
        self.n_qubits = _n_qubits_of(arr.shape[0])
        return self

    @classmethod
    def from_ket(cls, ket) -> "DensityMatrix":
        v = np.asarray(ket, dtype=complex).ravel()
        v = v / np.linalg.norm(v)
        return cls._trusted(np.outer(v, v.conj()))

    @property
    def mat(self) -> np.ndarray:
        return self._mat

    @property
    def dim(self) -> int:
        return self._mat.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return hermitian_eigenvalues(self._mat)

    def check(self) -> "DensityMatrix":
        """Re-run the full invariant check and return self."""
        DensityMatrix(self._mat)
        return self

    def allclose(self, other: "DensityMatrix | np.ndarray", atol: float = 1e-12) -> bool:
        o = other.mat if isinstance(other, DensityMatrix) else np.asarray(other)
        return o.shape == self._mat.shape and bool(np.allclose(self._mat, o, rtol=0, atol=atol))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self._mat, dtype=dtype)

    def __repr__(self):
        return f"DensityMatrix(n_qubits={self.n_qubits}, mat={self._mat!r})"


@dataclass(frozen=True)
class CorrelationDecomposition:
    """rho12 = 1/4 [I x I + r.sigma x I + I x s.sigma + sum_ij t_ij sigma_i x sigma_j]."""

    r: np.ndarray
    s: np.ndarray
    t: np.ndarray

    @classmethod
    def of(cls, rho12: "DensityMatrix | np.ndarray") -> "CorrelationDecomposition":
        m = np.asarray(rho12)
        if m.shape != (4, 4):
            raise WrongDimension("correlation decomposition needs a two-qubit matrix")
        coeff = pauli_coefficients(m)
        return cls(r=coeff[1:, 0].copy(), s=coeff[0, 1:].copy(), t=coeff[1:, 1:].copy())

    def coefficients(self) -> np.ndarray:
        c = np.zeros((4, 4))
        c[0, 0] = 1.0
        c[1:, 0] = self.r
        c[0, 1:] = self.s
        c[1:, 1:] = self.t
        return c

    def to_matrix(self) -> np.ndarray:
        return from_pauli_coefficients(self.coefficients())


def pauli_coefficients(m) -> np.ndarray:
    """c[a, b] = Re Tr(m (sigma_a x sigma_b)) for a two-qubit matrix."""
    m = np.asarray(m)
    # Tr(M (A x B)) = sum M[(i,k),(j,l)] A[j,i] B[l,k]
    t = m.reshape(2, 2, 2, 2)
    p = np.stack(PAULIS)
    return np.einsum("ikjl,aji,blk->ab", t, p, p).real


def from_pauli_coefficients(c) -> np.ndarray:
    p = np.stack(PAULIS)
    return np.einsum("ab,aij,bkl->ikjl", c, p, p).reshape(4, 4) / 4


# ---------------------------------------------------------------------------
# Single-qubit parametrization
# ---------------------------------------------------------------------------


def bloch_to_density(r: "BlochVector | Sequence[float]") -> DensityMatrix:
    r1, r2, r3 = r
    norm = math.sqrt(r1 * r1 + r2 * r2 + r3 * r3)
    if norm > 1 + tol.BLOCH_NORM_ATOL:
        raise BlochNormExceeded(f"|r| = {norm:.17g} > 1")
    return DensityMatrix._trusted((I2 + r1 * SIGMA1 + r2 * SIGMA2 + r3 * SIGMA3) / 2)


def density_to_bloch(rho: "DensityMatrix | np.ndarray") -> BlochVector:
    m = np.asarray(rho)
    if m.shape != (2, 2):
        raise WrongDimension(f"expected a 2x2 matrix, got {m.shape}")
    return BlochVector(*(float(np.trace(m @ s).real) for s in (SIGMA1, SIGMA2, SIGMA3)))


# ---------------------------------------------------------------------------
# Composition and reduction
# ---------------------------------------------------------------------------


def tensor(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    if a.n_qubits + b.n_qubits > MAX_QUBITS:
        raise DimensionOverflow(f"{a.n_qubits} + {b.n_qubits} qubits exceeds {MAX_QUBITS}")
    return DensityMatrix._trusted(np.kron(a.mat, b.mat))


def partial_trace(rho: DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    """Reduced state on ``keep``, with qubits ordered as listed in ``keep``."""
    n = rho.n_qubits
    keep = _check_indices(keep, n)
    if not keep:
        raise BadSubsystemIndex("keep must be non-empty")
    t = rho.mat.reshape((2,) * (2 * n))
    traced = [q for q in range(n) if q not in keep]
    # einsum subscripts: row index letters then column letters; traced qubits share a letter.
    letters = "abcdefghijklmnop"
    row = [letters[q] for q in range(n)]
    col = [letters[q] if q in traced else letters[n + q] for q in range(n)]
    out = [letters[q] for q in keep] + [letters[n + q] for q in keep]
    reduced = np.einsum("".join(row + col) + "->" + "".join(out), t)
    d = 2 ** len(keep)
    return DensityMatrix._trusted(reduced.reshape(d, d))


def embed_operator(op, targets: Sequence[int], n_qubits: int) -> np.ndarray:
    """Lift a k-qubit operator acting on ``targets`` (in that order) to n qubits."""
    targets = _check_indices(targets, n_qubits)
    op = np.asarray(op, dtype=complex)
    k = len(targets)
    if op.shape != (2**k, 2**k):
        raise WrongDimension(f"operator shape {op.shape} does not match {k} target qubit(s)")
    rest = [q for q in range(n_qubits) if q not in targets]
    full = np.kron(op, np.eye(2 ** len(rest)))
    order = list(targets) + rest
    # full acts on qubits in `order`; permute its tensor axes back to 0..n-1.
    perm = np.argsort(order)
    t = full.reshape((2,) * (2 * n_qubits))
    t = t.transpose(list(perm) + [n_qubits + p for p in perm])
    return t.reshape(2**n_qubits, 2**n_qubits)


def apply_unitary(rho: DensityMatrix, u, targets: Sequence[int]) -> DensityMatrix:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise WrongDimension(f"unitary must be square, got {u.shape}")
    if np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) > tol.OPERATOR_ATOL:
        raise NotUnitary("U^dagger U differs from identity by more than 1e-12")
    big = embed_operator(u, targets, rho.n_qubits)
    return DensityMatrix._trusted(big @ rho.mat @ big.conj().T)


def measure_projective(
    rho: DensityMatrix, projectors: Sequence, targets: Sequence[int]
) -> list[tuple[float, DensityMatrix | None]]:
    """Outcome probabilities and normalized post-measurement states.

    Branches with probability at or below 1e-12 carry ``None`` instead of a state.
    """
    projs = [np.asarray(p, dtype=complex) for p in projectors]
    if not projs:
        raise NotAProjectorSet("empty projector set")
    d = projs[0].shape[0]
    total = np.zeros((d, d), dtype=complex)
    for p in projs:
        if p.shape != (d, d):
            raise NotAProjectorSet("projectors have mismatched shapes")
        if np.max(np.abs(p - p.conj().T)) > tol.OPERATOR_ATOL:
            raise NotAProjectorSet("projector is not Hermitian")
        if np.max(np.abs(p @ p - p)) > tol.OPERATOR_ATOL:
            raise NotAProjectorSet("projector is not idempotent")
        total += p
    if np.max(np.abs(total - np.eye(d))) > tol.OPERATOR_ATOL:
        raise NotAProjectorSet("projectors do not sum to the identity")

    results = []
    for p in projs:
        big = embed_operator(p, targets, rho.n_qubits)
        unnorm = big @ rho.mat @ big
        prob = float(np.trace(unnorm).real)
        if prob <= tol.BRANCH_PROB_FLOOR:
            results.append((max(prob, 0.0), None))
        else:
            results.append((prob, DensityMatrix._trusted(unnorm / prob)))
    return results


# ---------------------------------------------------------------------------
# Separability
# ---------------------------------------------------------------------------


def partial_transpose(rho: "DensityMatrix | np.ndarray", party: int = 1) -> np.ndarray:
    """Partial transpose of a two-qubit matrix on qubit ``party`` (0 or 1)."""
    m = np.asarray(rho)
    if m.shape != (4, 4):
        raise WrongDimension(f"partial transpose needs a 4x4 matrix, got {m.shape}")
    if party not in (0, 1):
        raise BadSubsystemIndex(f"party must be 0 or 1, got {party}")
    t = m.reshape(2, 2, 2, 2)  # (i, k, j, l): rows (i,k), cols (j,l)
    t = t.transpose(2, 1, 0, 3) if party == 0 else t.transpose(0, 3, 2, 1)
    return t.reshape(4, 4)


def is_separable_2x2(rho: "DensityMatrix | np.ndarray") -> tuple[bool, float]:
    """Peres-Horodecki verdict for two qubits and the smallest PT eigenvalue."""
    lowest = float(hermitian_eigenvalues(partial_transpose(rho, 1))[0])
    return lowest >= tol.PSD_FLOOR, lowest


# ---------------------------------------------------------------------------
# Distances
# ---------------------------------------------------------------------------


def trace_distance(a, b) -> float:
    diff = np.asarray(a) - np.asarray(b)
    return 0.5 * float(np.sum(np.abs(hermitian_eigenvalues(diff))))


def _as_square(mat) -> np.ndarray:
    arr = np.array(mat, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise WrongDimension(f"expected a square matrix, got shape {arr.shape}")
    return arr


def _n_qubits_of(dim: int) -> int:
    if dim not in (2, 4, 8, 16):
        raise WrongDimension(f"dimension {dim} is not 2, 4, 8 or 16")
    return dim.bit_length() - 1


def _check_indices(indices: Sequence[int], n: int) -> list[int]:
    out = [int(q) for q in indices]
    if len(set(out)) != len(out):
        raise BadSubsystemIndex(f"repeated subsystem index in {out}")
    for q in out:
        if not 0 <= q < n:
            raise BadSubsystemIndex(f"qubit {q} out of range for {n} qubit(s)")
    return out
