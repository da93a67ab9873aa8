"""Unital qubit maps in the Bloch picture and their Bell-mixture realizations.

A unital map V is fixed by the real 3x3 matrix ``M`` with
``V(sigma_k) = sum_j M[j, k] sigma_j``; on Bloch vectors it acts as ``r -> M r``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from telesep import tolerances as tol
from telesep.errors import (
    InvalidBellMixture,
    LambdaOutOfRange,
    NotCompletelyPositive,
    PhysicalityWarning,
    WrongDimension,
)
from telesep.qstate import (
    BELL_PROJECTORS,
    PAULIS,
    CorrelationDecomposition,
    DensityMatrix,
    hermitian_eigenvalues,
)

BELL_ORDER = ("psi+", "psi-", "phi+", "phi-")


@dataclass(frozen=True, eq=False)
class AffineBlochMap:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.shape != (3, 3):
            raise WrongDimension(f"Bloch matrix must be 3x3, got {m.shape}")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    def apply_bloch(self, r) -> np.ndarray:
        return self.matrix @ np.asarray(r, dtype=float)

    def act(self, op) -> np.ndarray:
        """Image of an arbitrary 2x2 operator under the (linear) map."""
        op = np.asarray(op, dtype=complex)
        x = np.array([np.trace(op @ p) for p in PAULIS])
        y = np.concatenate([[x[0]], self.matrix @ x[1:]])
        return sum(c * p for c, p in zip(y, PAULIS)) / 2

    def to_json_dict(self) -> dict:
        return {"bloch_matrix": self.matrix.tolist()}

    @classmethod
    def from_json_dict(cls, d: dict) -> "AffineBlochMap":
        return cls(np.array(d["bloch_matrix"], dtype=float))

    def __eq__(self, other):
        return isinstance(other, AffineBlochMap) and np.array_equal(self.matrix, other.matrix)

    __hash__ = None


@dataclass(frozen=True)
class PauliDiagonalMap:
    """V(I) = I, V(sigma_j) = lambda_j sigma_j."""

    lambda1: float
    lambda2: float
    lambda3: float

    def __post_init__(self):
        for name in ("lambda1", "lambda2", "lambda3"):
            v = getattr(self, name)
            if not abs(v) <= 1 + tol.WEIGHT_ATOL:
                raise LambdaOutOfRange(f"|{name}| = {abs(v):.17g} > 1")

    @property
    def lambdas(self) -> tuple[float, float, float]:
        return (self.lambda1, self.lambda2, self.lambda3)

    def bloch_map(self) -> AffineBlochMap:
        return AffineBlochMap(np.diag(self.lambdas))


@dataclass(frozen=True)
class BellMixture:
    """w1 P[psi+] + w2 P[psi-] + w3 P[phi+] + w4 P[phi-]."""

    w1: float
    w2: float
    w3: float
    w4: float

    def __post_init__(self):
        w = self.weights
        if np.any(w < -tol.WEIGHT_ATOL) or np.any(w > 1 + tol.WEIGHT_ATOL):
            raise InvalidBellMixture(f"weights {w.tolist()} leave [0, 1]")
        if abs(w.sum() - 1) > tol.WEIGHT_ATOL:
            raise InvalidBellMixture(f"weights sum to {w.sum():.17g}, not 1")

    @classmethod
    def from_weights(cls, w) -> "BellMixture":
        w1, w2, w3, w4 = (float(x) for x in w)
        return cls(w1, w2, w3, w4)

    @property
    def weights(self) -> np.ndarray:
        return np.array([self.w1, self.w2, self.w3, self.w4])

    def density(self) -> DensityMatrix:
        m = sum(w * BELL_PROJECTORS[name] for w, name in zip(self.weights, BELL_ORDER))
        return DensityMatrix._trusted(m)

    def is_separable(self) -> bool:
        """A Bell mixture is separable iff every weight is at most 1/2."""
        return bool(self.weights.max() <= 0.5 + tol.WEIGHT_ATOL)

    def to_json_dict(self) -> dict:
        return {"w": self.weights.tolist()}

    @classmethod
    def from_json_dict(cls, d: dict) -> "BellMixture":
        return cls.from_weights(d["w"])


@dataclass(frozen=True)
class EquatorialMachineParams:
    lam: float
    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if not abs(self.lam) < 1:
            raise LambdaOutOfRange(f"equatorial shrink factor needs |lambda| < 1, got {self.lam}")


@dataclass(frozen=True)
class DilationParams:
    """Machine amplitudes of the unitary realization of a Pauli-diagonal map."""

    a0: float
    b0: float
    theta: float
    phi: float

    def weights(self) -> np.ndarray:
        a2, b2 = self.a0**2, self.b0**2
        return np.array(
            [
                a2 * math.cos(self.theta) ** 2,
                a2 * math.sin(self.theta) ** 2,
                b2 * math.cos(self.phi) ** 2,
                b2 * math.sin(self.phi) ** 2,
            ]
        )


# ---------------------------------------------------------------------------
# Map constructors
# ---------------------------------------------------------------------------


def pauli_map(lambda1: float, lambda2: float, lambda3: float) -> AffineBlochMap:
    return PauliDiagonalMap(lambda1, lambda2, lambda3).bloch_map()


def equatorial_map(p: EquatorialMachineParams) -> AffineBlochMap:
    """Isotropic shrink by ``lam`` on the x-z disc, sigma_2 sent off-axis by theta, phi."""
    return equatorial_map_from_overlaps(p.lam, math.cos(p.theta), math.sin(p.theta), math.sin(p.phi))


def equatorial_map_from_overlaps(lam: float, re_overlap: float, im_overlap: float, im_machine: float) -> AffineBlochMap:
    """Equatorial machine map written in terms of machine-state overlaps.

    ``re_overlap + 1j * im_overlap`` is an inner product of two machine states,
    so its modulus may be below one; the angle form is the unit-modulus case.
    ``im_machine`` is the imaginary part of the second overlap (``sin(phi)``).
    """
    if not abs(lam) < 1:
        raise LambdaOutOfRange(f"equatorial shrink factor needs |lambda| < 1, got {lam}")
    if math.hypot(re_overlap, im_overlap) > 1 + tol.WEIGHT_ATOL or abs(im_machine) > 1 + tol.WEIGHT_ATOL:
        raise ValueError("machine-state overlaps must have modulus at most 1")
    m = np.diag([lam, 0.0, lam])
    m[:, 1] = [
        (1 + lam) * im_overlap,
        (1 + lam) * re_overlap - lam,
        -math.sqrt(1 - lam * lam) * im_machine,
    ]
    return AffineBlochMap(m)


def general_map_lmn(lam: float, l: float, m: float, n: float) -> AffineBlochMap:
    """sigma_1 -> lam sigma_1, sigma_3 -> lam sigma_3, sigma_2 -> m sigma_1 + l sigma_2 + n sigma_3."""
    mat = np.diag([lam, 0.0, lam])
    mat[:, 1] = [m, l, n]
    return AffineBlochMap(mat)


# ---------------------------------------------------------------------------
# Complete positivity
# ---------------------------------------------------------------------------


def choi_matrix(bloch_map: AffineBlochMap) -> np.ndarray:
    """(V x I)(P[phi+]) built from the images of the matrix units |i><j|."""
    choi = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            unit = np.zeros((2, 2), dtype=complex)
            unit[i, j] = 1
            choi += np.kron(bloch_map.act(unit), unit)
    return choi / 2


def is_physical(bloch_map: AffineBlochMap) -> bool:
    return bool(hermitian_eigenvalues(choi_matrix(bloch_map))[0] >= tol.PSD_FLOOR)


# ---------------------------------------------------------------------------
# Application to bipartite states
# ---------------------------------------------------------------------------


def apply_one_side(
    bloch_map: AffineBlochMap, rho12: DensityMatrix, side: int, *, check_physical: bool = True
) -> DensityMatrix:
    """(V x I) or (I x V) on a two-qubit state, via its correlation decomposition.

    Non-physical maps are applied anyway (the output may then fail to be
    positive) and a :class:`PhysicalityWarning` is emitted. Callers that
    apply one known map many times can pass ``check_physical=False``.
    """
    if side not in (1, 2):
        raise ValueError(f"side must be 1 or 2, got {side}")
    if np.asarray(rho12).shape != (4, 4):
        raise WrongDimension("apply_one_side needs a two-qubit state")
    if check_physical and not is_physical(bloch_map):
        warnings.warn("applying a map that is not completely positive", PhysicalityWarning, stacklevel=2)
    dec = CorrelationDecomposition.of(rho12)
    m = bloch_map.matrix
    if side == 1:
        out = CorrelationDecomposition(r=m @ dec.r, s=dec.s, t=m @ dec.t)
    else:
        out = CorrelationDecomposition(r=dec.r, s=m @ dec.s, t=dec.t @ m.T)
    return DensityMatrix._trusted(out.to_matrix())


# ---------------------------------------------------------------------------
# Map <-> Bell mixture correspondence
# ---------------------------------------------------------------------------


def channel_to_map(ch: BellMixture) -> PauliDiagonalMap:
    w1, w2, w3, w4 = ch.w1, ch.w2, ch.w3, ch.w4
    return PauliDiagonalMap(
        w1 - w2 + w3 - w4,
        w1 - w2 - w3 + w4,
        w1 + w2 - w3 - w4,
    )


def bell_weights(m: PauliDiagonalMap) -> np.ndarray:
    l1, l2, l3 = m.lambdas
    return np.array(
        [
            (1 + l1 + l2 + l3) / 4,
            (1 - l1 - l2 + l3) / 4,
            (1 + l1 - l2 - l3) / 4,
            (1 - l1 + l2 - l3) / 4,
        ]
    )


def map_to_channel(m: PauliDiagonalMap) -> BellMixture:
    w = bell_weights(m)
    if np.any(w < -tol.WEIGHT_ATOL):
        raise NotCompletelyPositive(f"Bell weights {w.tolist()} include a negative entry")
    if np.any(w < 0):
        # rounding residue on a face of the simplex
        w = np.maximum(w, 0.0)
        w /= w.sum()
    return BellMixture.from_weights(w)


def dilation_params(m: PauliDiagonalMap) -> DilationParams:
    l1, l2, l3 = m.lambdas
    a2 = (1 + l3) / 2
    b2 = (1 - l3) / 2
    a0 = math.sqrt(max(a2, 0.0))
    b0 = math.sqrt(max(b2, 0.0))

    def half_angle(num: float, amp: float, label: str) -> float:
        if amp <= 1e-9:
            # the angle multiplies a vanishing amplitude; any value works, so fix 0
            if abs(num) > 2e-9:
                raise NotCompletelyPositive(f"lambda combination {num:.17g} needs a nonzero amplitude")
            return 0.0
        cos2 = num / (2 * amp * amp)
        if abs(cos2) > 1 + tol.WEIGHT_ATOL:
            raise NotCompletelyPositive(f"cos 2{label} = {cos2:.17g} outside [-1, 1]")
        return math.acos(min(1.0, max(-1.0, cos2))) / 2

    theta = half_angle(l1 + l2, a0, "theta")
    phi = half_angle(l1 - l2, b0, "phi")
    return DilationParams(a0=a0, b0=b0, theta=theta, phi=phi)
