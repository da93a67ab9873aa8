"""Disentanglement scenarios, the sum-of-lambdas verifier, and the equatorial optimizer."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from telesep import tolerances as tol
from telesep.channels import (
    PauliDiagonalMap,
    apply_one_side,
    bell_weights,
    choi_matrix,
    general_map_lmn,
    map_to_channel,
    pauli_map,
)
from telesep.errors import NoFeasiblePoint, PremiseViolation
from telesep.qstate import (
    KET_PHI_PLUS,
    DensityMatrix,
    hermitian_eigenvalues,
    is_separable_2x2,
    partial_trace,
    trace_distance,
)
from telesep.sampling import random_density, random_entangled_pure, schmidt_state
from telesep.teleport import teleport_party_of_bipartite

PHI_PLUS = DensityMatrix.from_ket(KET_PHI_PLUS)

#: Pauli-diagonal maps of the three named machines.
SCENARIO_MAPS = {
    "universal": PauliDiagonalMap(1 / 3, 1 / 3, 1 / 3),
    "equatorial": PauliDiagonalMap(0.5, 0.0, 0.5),
    "commuting": PauliDiagonalMap(0.0, 0.0, 1.0),
}


# ---------------------------------------------------------------------------
# Closed-form feasibility of the (lambda, l, m, n) family
# ---------------------------------------------------------------------------


def a14_physical_conditions(lam, l, m, n) -> np.ndarray:
    """Left-hand sides that must all be >= 0 for the map to send Schmidt states to states.

    Broadcasts over array arguments; the leading axis indexes the three conditions.
    """
    lam, l, m, n = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (lam, l, m, n)))
    q = 1 - l * l - m * m - n * n
    return np.stack(
        [
            1 - lam * lam - n * n,
            q - lam * (1 + l * l + m * m - 2 * l - n * n) - 2 * lam * lam * (1 - l),
            q * q - 4 * lam * lam * (1 - l) ** 2,
        ]
    )


def a15_disentangling_conditions(lam, l, m, n) -> np.ndarray:
    """Left-hand sides that must all be >= 0 for every Schmidt state to come out PPT."""
    lam, l, m, n = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (lam, l, m, n)))
    q = 1 - l * l - m * m - n * n
    return np.stack(
        [
            1 - lam * lam - n * n,
            q - lam * (1 + l * l + m * m + 2 * l - n * n) - 2 * lam * lam * (1 + l),
            q * q - 4 * lam * lam * (1 + l) ** 2,
        ]
    )


@dataclass(frozen=True)
class FeasibilityConditions:
    physical: tuple[float, float, float]
    disentangling: tuple[float, float, float]

    @classmethod
    def at(cls, lam, l, m, n) -> "FeasibilityConditions":
        return cls(
            physical=tuple(float(x) for x in a14_physical_conditions(lam, l, m, n)),
            disentangling=tuple(float(x) for x in a15_disentangling_conditions(lam, l, m, n)),
        )

    @property
    def is_physical(self) -> bool:
        return min(self.physical) >= tol.PSD_FLOOR

    @property
    def is_disentangling(self) -> bool:
        return min(self.disentangling) >= tol.PSD_FLOOR

    @property
    def feasible(self) -> bool:
        return self.is_physical and self.is_disentangling


@dataclass(frozen=True)
class OracleAgreement:
    params: tuple[float, float, float, float]
    closed_physical: bool
    closed_disentangling: bool
    oracle_physical: bool
    oracle_disentangling: bool
    #: Schmidt coefficients where the oracle found a negative (PT) eigenvalue.
    unphysical_a: tuple[float, ...]
    entangled_a: tuple[float, ...]
    #: True when a closed-form value sits within the 1e-9 band around zero.
    on_boundary: bool

    @property
    def agree(self) -> bool:
        return (
            self.closed_physical == self.oracle_physical
            and self.closed_disentangling == self.oracle_disentangling
        )


def conditions_vs_oracle(lam, l, m, n, samples: int, rng: np.random.Generator) -> OracleAgreement:
    """Compare the closed-form conditions with eigenvalue/PPT checks on Schmidt states.

    Each sampled ``a`` gives the state a|00> + b|11>; the general map acts on
    party 1 and the output is tested for positivity and for PPT.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    cond = FeasibilityConditions.at(lam, l, m, n)
    bloch_map = general_map_lmn(lam, l, m, n)
    unphysical, entangled = [], []
    for a in rng.uniform(0.0, 1.0, samples):
        out = apply_one_side(bloch_map, schmidt_state(a), side=1, check_physical=False)
        if hermitian_eigenvalues(out.mat)[0] < tol.PSD_FLOOR:
            unphysical.append(float(a))
        if not is_separable_2x2(out.mat)[0]:
            entangled.append(float(a))
    values = np.array(cond.physical + cond.disentangling)
    return OracleAgreement(
        params=(float(lam), float(l), float(m), float(n)),
        closed_physical=cond.is_physical,
        closed_disentangling=cond.is_disentangling,
        oracle_physical=not unphysical,
        oracle_disentangling=not entangled,
        unphysical_a=tuple(unphysical),
        entangled_a=tuple(entangled),
        on_boundary=bool(np.any(np.abs(values) <= tol.PREMISE_ATOL)),
    )


# ---------------------------------------------------------------------------
# Optimizer
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OptimizationResult:
    lambda_max: float
    l: float
    m: float
    n: float
    iterations: int
    certificate: FeasibilityConditions


def _margin(lam, l, m, n, use_a15: bool) -> np.ndarray:
    values = a14_physical_conditions(lam, l, m, n)
    if use_a15:
        values = np.concatenate([values, a15_disentangling_conditions(lam, l, m, n)])
    return values.min(axis=0)


def _best_witness(lam: float, grid: np.ndarray, refine_tol: float, use_a15: bool):
    """Maximize the smallest constraint value over (l, m, n) in [-1, 1]^3."""
    gl, gm, gn = np.meshgrid(grid, grid, grid, indexing="ij")
    margins = _margin(lam, gl, gm, gn, use_a15)
    k = np.unravel_index(np.argmax(margins), margins.shape)
    x = np.array([gl[k], gm[k], gn[k]])
    best = float(margins[k])

    step = float(grid[1] - grid[0])
    while step >= refine_tol:
        improved = False
        for axis in range(3):
            for sign in (1.0, -1.0):
                trial = x.copy()
                trial[axis] = np.clip(trial[axis] + sign * step, -1.0, 1.0)
                value = float(_margin(lam, *trial, use_a15))
                if value > best:
                    x, best, improved = trial, value, True
        if not improved:
            step /= 2
    return x, best


def optimize_equatorial(
    grid_step: float = 0.05, refine_tol: float = 1e-4, use_a15: bool = True
) -> OptimizationResult:
    """Largest shrink factor lambda admitting (l, m, n) that satisfy the constraints.

    Outer bisection on lambda in [0, 1]; feasibility at each lambda is decided
    by a coarse grid over (l, m, n) refined with coordinate ascent on the
    smallest constraint value.
    """
    if not 1e-6 <= refine_tol <= grid_step <= 0.1:
        raise ValueError("need 1e-6 <= refine_tol <= grid_step <= 0.1")
    grid = np.linspace(-1.0, 1.0, int(round(2 / grid_step)) + 1)

    def feasible(lam):
        x, best = _best_witness(lam, grid, refine_tol, use_a15)
        return best >= tol.PSD_FLOOR, x

    ok, witness = feasible(0.0)
    if not ok:
        raise NoFeasiblePoint("no (l, m, n) satisfies the constraints even at lambda = 0")
    lo, hi = 0.0, 1.0
    iterations = 0
    ok, x = feasible(hi)
    if ok:
        lo, witness = hi, x
    else:
        while hi - lo > refine_tol:
            mid = (lo + hi) / 2
            ok, x = feasible(mid)
            iterations += 1
            if ok:
                lo, witness = mid, x
            else:
                hi = mid
    l, m, n = (float(v) for v in witness)
    return OptimizationResult(
        lambda_max=lo,
        l=l,
        m=m,
        n=n,
        iterations=iterations,
        certificate=FeasibilityConditions.at(lo, l, m, n),
    )


SWEEP_HEADER = ["lambda", "l", "m", "n", "a14_1", "a14_2", "a14_3", "a15_1", "a15_2", "a15_3", "feasible"]


def feasibility_sweep(lambdas: Iterable[float], l: float = 0.0, m: float = 0.0, n: float = 0.0) -> list[list]:
    rows = []
    for lam in lambdas:
        c = FeasibilityConditions.at(lam, l, m, n)
        rows.append([float(lam), l, m, n, *c.physical, *c.disentangling, c.feasible])
    return rows


def sweep_to_csv(rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for row in rows:
        writer.writerow([format(v, ".17g") if isinstance(v, float) else str(v).lower() for v in row])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Sum-of-lambdas criterion
# ---------------------------------------------------------------------------


def theorem_verdicts(lambdas: Sequence[float]) -> tuple[bool, bool, float]:
    """(closed-form verdict, PPT verdict on the maximally entangled output, min PT eigenvalue)."""
    closed = sum(lambdas) <= 1
    # triples in [0, 1]^3 need not be completely positive; the PPT verdict is still defined
    out = apply_one_side(pauli_map(*lambdas), PHI_PLUS, side=2, check_physical=False)
    separable, lowest = is_separable_2x2(out.mat)
    return closed, separable, lowest


@dataclass
class TheoremReport:
    samples: int
    mismatches: list = field(default_factory=list)
    boundary_excluded: int = 0
    random_state_failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches and not self.random_state_failures


def verify_theorem(samples: int, rng: np.random.Generator, states_per_triple: int = 20) -> TheoremReport:
    """Check the sum-of-lambdas criterion on seeded triples in [0, 1]^3.

    For triples on the separable side, ``states_per_triple`` random states
    (alternating mixed and entangled pure) must also come out separable.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    report = TheoremReport(samples=samples)
    for _ in range(samples):
        lambdas = tuple(float(x) for x in rng.uniform(0.0, 1.0, 3))
        if abs(sum(lambdas) - 1) <= tol.PREMISE_ATOL:
            report.boundary_excluded += 1
            continue
        closed, separable, lowest = theorem_verdicts(lambdas)
        if closed != separable:
            report.mismatches.append({"lambdas": lambdas, "closed_form": closed, "ppt": separable, "min_pt": lowest})
        if closed:
            # sum <= 1 with every lambda >= 0 keeps all Bell weights nonnegative, so the map is CP
            bloch_map = pauli_map(*lambdas)
            for k in range(states_per_triple):
                rho = random_density(rng, 2) if k % 2 else random_entangled_pure(rng)
                out = apply_one_side(bloch_map, rho, side=2, check_physical=False)
                ok, lowest = is_separable_2x2(out.mat)
                if not ok:
                    report.random_state_failures.append({"lambdas": lambdas, "min_pt": lowest})
    return report


# ---------------------------------------------------------------------------
# Scenarios
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DisentanglementReport:
    scenario: str
    lambdas: tuple[float, float, float]
    input_state: DensityMatrix
    output_state: DensityMatrix
    separable: bool
    min_pt_eigenvalue: float
    eta1: float | None
    eta2: float | None
    marginal_fidelity1: float
    marginal_fidelity2: float


def _bloch_norm(rho1: DensityMatrix) -> float:
    m = rho1.mat
    return float(np.sqrt(abs(2 * m[0, 1]) ** 2 + (m[0, 0] - m[1, 1]).real ** 2))


def _eta(before: DensityMatrix, after: DensityMatrix) -> float | None:
    norm = _bloch_norm(before)
    return None if norm < 1e-12 else _bloch_norm(after) / norm


def run_scenario(
    scenario: str, rho12: DensityMatrix, custom_map: PauliDiagonalMap | None = None
) -> DisentanglementReport:
    """Disentangle party 2 of ``rho12`` by teleporting it through the scenario's Bell mixture."""
    if scenario == "custom":
        if custom_map is None:
            raise ValueError("custom scenario needs custom_map")
        pmap = custom_map
    elif scenario in SCENARIO_MAPS:
        pmap = SCENARIO_MAPS[scenario]
    else:
        raise ValueError(f"unknown scenario {scenario!r}")

    rho2 = partial_trace(rho12, [1]).mat
    s1, s2 = 2 * rho2[0, 1].real, -2 * rho2[0, 1].imag
    if scenario == "equatorial" and abs(s2) > tol.PREMISE_ATOL:
        raise PremiseViolation(f"party 2 Bloch vector has s2 = {s2:.3e}, not on the x-z disc")
    if scenario == "commuting" and max(abs(s1), abs(s2)) > tol.PREMISE_ATOL:
        raise PremiseViolation(f"party 2 marginal is not diagonal: s1 = {s1:.3e}, s2 = {s2:.3e}")

    out = teleport_party_of_bipartite(rho12, 2, map_to_channel(pmap))
    separable, lowest = is_separable_2x2(out.mat)
    marg_in = [partial_trace(rho12, [q]) for q in (0, 1)]
    marg_out = [partial_trace(out, [q]) for q in (0, 1)]
    return DisentanglementReport(
        scenario=scenario,
        lambdas=pmap.lambdas,
        input_state=rho12,
        output_state=out,
        separable=separable,
        min_pt_eigenvalue=lowest,
        eta1=_eta(marg_in[0], marg_out[0]),
        eta2=_eta(marg_in[1], marg_out[1]),
        marginal_fidelity1=1 - trace_distance(marg_in[0].mat, marg_out[0].mat),
        marginal_fidelity2=1 - trace_distance(marg_in[1].mat, marg_out[1].mat),
    )


# ---------------------------------------------------------------------------
# Applying the equatorial machine beyond its optimum
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BothSidesRow:
    eps: float
    w4: float
    choi_min_eigenvalue: float
    physical: bool


@dataclass(frozen=True)
class BothSidesReport:
    rows: tuple[BothSidesRow, ...]

    @property
    def claim_holds(self) -> bool:
        return all(row.physical == (row.eps == 0) for row in self.rows)


def check_both_sides_claim(eps_list: Iterable[float]) -> BothSidesReport:
    """Physicality of sigma_1, sigma_3 -> (1/2 + eps), sigma_2 -> 0.

    The eps = 0 baseline is always included.
    """
    eps_values = [0.0] + [float(e) for e in eps_list if e != 0]
    rows = []
    for eps in eps_values:
        if eps < 0:
            raise ValueError(f"eps must be >= 0, got {eps}")
        lam = 0.5 + eps
        pmap = PauliDiagonalMap(lam, 0.0, lam)
        lowest = float(hermitian_eigenvalues(choi_matrix(pmap.bloch_map()))[0])
        rows.append(
            BothSidesRow(
                eps=eps,
                w4=float(bell_weights(pmap)[3]),
                choi_min_eigenvalue=lowest,
                physical=lowest >= tol.PSD_FLOOR,
            )
        )
    return BothSidesReport(rows=tuple(rows))
