"""Operational simulators of the two teleportation protocols.

Bell-basis protocol
    The standard protocol tuned to the |psi+> channel: after a Bell
    measurement with outcome psi+, psi-, phi+, phi- the receiver applies
    I, sigma_3, sigma_1, sigma_1 sigma_3. It is run unchanged whatever Bell
    mixture actually connects the parties.

Parity protocol
    Teleports a qubit with diagonal reduced state through the classically
    correlated channel (|00><00| + |11><11|)/2 using the parity measurement
    {P1 = P[00] + P[11], P2 = P[01] + P[10]} and a sigma_x correction on P2.

In the four-qubit simulations the qubits are laid out as
(kept party, teleported party, channel A, channel B) = (0, 1, 2, 3).
Returned two-qubit states keep the caller's party order, with channel B
standing in for the teleported party.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from telesep import tolerances as tol
from telesep.channels import BELL_ORDER, BellMixture
from telesep.errors import NotCommutingPremise, WrongDimension
from telesep.qstate import (
    BELL_PROJECTORS,
    I2,
    SIGMA1,
    SIGMA3,
    DensityMatrix,
    apply_unitary,
    measure_projective,
    partial_trace,
    tensor,
)

#: Receiver corrections for the |psi+>-tuned protocol, keyed by Bell outcome.
BELL_CORRECTIONS = {
    "psi+": ("I", I2),
    "psi-": ("sigma3", SIGMA3),
    "phi+": ("sigma1", SIGMA1),
    "phi-": ("sigma1sigma3", SIGMA1 @ SIGMA3),
}

_P00 = np.diag([1, 0, 0, 0]).astype(complex)
_P01 = np.diag([0, 1, 0, 0]).astype(complex)
_P10 = np.diag([0, 0, 1, 0]).astype(complex)
_P11 = np.diag([0, 0, 0, 1]).astype(complex)
PARITY_PROJECTORS = {"P1": _P00 + _P11, "P2": _P01 + _P10}
PARITY_CORRECTIONS = {"P1": ("I", I2), "P2": ("sigma_x", SIGMA1)}

CLASSICAL_CHANNEL = DensityMatrix._trusted((_P00 + _P11) / 2)


@dataclass(frozen=True)
class ProtocolTrace:
    outcome_label: str
    probability: float
    correction: str
    post_state: DensityMatrix | None


def _run(
    state: DensityMatrix,
    measured: list[int],
    projectors: dict,
    corrections: dict,
    receiver: int,
    keep: list[int],
) -> tuple[DensityMatrix, list[ProtocolTrace]]:
    labels = list(projectors)
    branches = measure_projective(state, [projectors[k] for k in labels], measured)
    total = np.zeros((2 ** len(keep),) * 2, dtype=complex)
    traces = []
    for label, (prob, post) in zip(labels, branches):
        name, u = corrections[label]
        if post is None:
            traces.append(ProtocolTrace(label, prob, name, None))
            continue
        corrected = partial_trace(apply_unitary(post, u, [receiver]), keep)
        traces.append(ProtocolTrace(label, prob, name, corrected))
        total += prob * corrected.mat
    return DensityMatrix._trusted(total), traces


def bell_protocol_output(
    state: DensityMatrix, channel: BellMixture
) -> tuple[DensityMatrix, list[ProtocolTrace]]:
    """Teleport one qubit through a Bell mixture; returns the averaged output and per-outcome traces."""
    if state.n_qubits != 1:
        raise WrongDimension("bell_protocol_output teleports a single qubit")
    joint = tensor(state, channel.density())
    projectors = {k: BELL_PROJECTORS[k] for k in BELL_ORDER}
    return _run(joint, [0, 1], projectors, BELL_CORRECTIONS, receiver=2, keep=[2])


def _layout(rho12: DensityMatrix, party: int) -> tuple[DensityMatrix, list[int]]:
    """Reorder to (kept, teleported) and give the output qubit order."""
    if rho12.n_qubits != 2:
        raise WrongDimension("expected a two-qubit state")
    if party == 2:
        return rho12, [0, 3]
    if party == 1:
        swapped = rho12.mat.reshape(2, 2, 2, 2).transpose(1, 0, 3, 2).reshape(4, 4)
        return DensityMatrix._trusted(swapped), [3, 0]
    raise ValueError(f"party must be 1 or 2, got {party}")


def teleport_party_of_bipartite(rho12: DensityMatrix, party: int, channel: BellMixture) -> DensityMatrix:
    """Send one party of ``rho12`` through ``channel`` with the Bell-basis protocol."""
    ordered, keep = _layout(rho12, party)
    joint = tensor(ordered, channel.density())
    projectors = {k: BELL_PROJECTORS[k] for k in BELL_ORDER}
    out, _ = _run(joint, [1, 2], projectors, BELL_CORRECTIONS, receiver=3, keep=keep)
    return out


def run_classical_protocol(rho12: DensityMatrix, party: int) -> tuple[DensityMatrix, list[ProtocolTrace]]:
    """Exact teleportation of a party with diagonal marginal over a separable channel."""
    ordered, keep = _layout(rho12, party)
    marginal = partial_trace(ordered, [1]).mat
    if abs(marginal[0, 1]) > tol.PREMISE_ATOL:
        raise NotCommutingPremise(
            f"party {party} marginal has off-diagonal magnitude {abs(marginal[0, 1]):.3e}"
        )
    joint = tensor(ordered, CLASSICAL_CHANNEL)
    return _run(joint, [1, 2], PARITY_PROJECTORS, PARITY_CORRECTIONS, receiver=3, keep=keep)
