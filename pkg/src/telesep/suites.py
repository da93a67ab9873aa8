"""Seeded verification suites shared by the ``verify`` and ``reproduce`` commands.

Each suite returns a list of failure records; an empty list means the suite
passed. Samples are drawn in a fixed order from the caller's generator.
"""

from __future__ import annotations

import numpy as np

from telesep.channels import (
    BellMixture,
    channel_to_map,
    choi_matrix,
    dilation_params,
    map_to_channel,
)
from telesep.qstate import (
    bloch_to_density,
    density_to_bloch,
    hermitian_eigenvalues,
    is_separable_2x2,
    partial_trace,
    trace_distance,
)
from telesep.sampling import random_bloch, random_diagonal_marginal_state, random_simplex
from telesep.teleport import bell_protocol_output, run_classical_protocol


def lemma_round_trip(samples: int, rng: np.random.Generator) -> list[dict]:
    """Completely positive Pauli-diagonal maps -> Bell weights -> dilation -> weights."""
    failures = []
    for _ in range(samples):
        pmap = channel_to_map(BellMixture.from_weights(random_simplex(rng)))
        w = map_to_channel(pmap).weights
        problems = []
        if np.any(w < 0) or np.any(w > 1):
            problems.append("weight outside [0, 1]")
        if abs(w.sum() - 1) > 1e-12:
            problems.append("weights do not sum to 1")
        if np.max(np.abs(dilation_params(pmap).weights() - w)) > 1e-12:
            problems.append("dilation reconstruction differs")
        choi = hermitian_eigenvalues(choi_matrix(pmap.bloch_map()))
        if np.max(np.abs(choi - np.sort(w))) > 1e-10:
            problems.append("Choi spectrum differs from weights")
        if problems:
            failures.append({"lambdas": pmap.lambdas, "problems": problems})
    return failures


def protocol_equivalence(inputs: int, channels: int, rng: np.random.Generator, atol: float = 1e-12) -> list[dict]:
    """Full Bell-protocol simulation against the closed-form Pauli-diagonal action."""
    blochs = [random_bloch(rng) for _ in range(inputs)]
    mixtures = [BellMixture.from_weights(random_simplex(rng)) for _ in range(channels)]
    failures = []
    for ch in mixtures:
        lambdas = np.array(channel_to_map(ch).lambdas)
        for r in blochs:
            out, _ = bell_protocol_output(bloch_to_density(r), ch)
            expected = bloch_to_density(lambdas * r)
            dist = trace_distance(out.mat, expected.mat)
            if dist > atol:
                failures.append({"weights": ch.weights.tolist(), "bloch": r.tolist(), "trace_distance": dist})
    return failures


def exact_protocol(samples: int, rng: np.random.Generator) -> tuple[list[dict], float]:
    """Parity-protocol teleportation of party 1 for random diagonal-marginal inputs.

    Returns the failures and the largest marginal trace distance seen.
    """
    failures = []
    worst = 0.0
    for _ in range(samples):
        rho = random_diagonal_marginal_state(rng, party=1)
        out, traces = run_classical_protocol(rho, party=1)
        dists = [trace_distance(partial_trace(out, [q]).mat, partial_trace(rho, [q]).mat) for q in (0, 1)]
        worst = max(worst, *dists)
        separable, lowest = is_separable_2x2(out.mat)
        probs = [t.probability for t in traces]
        problems = []
        if max(dists) > 1e-12:
            problems.append("marginal changed")
        if not separable:
            problems.append("output not PPT")
        if max(abs(p - 0.5) for p in probs) > 1e-12:
            problems.append("outcome probability differs from 1/2")
        if problems:
            failures.append({"problems": problems, "trace_distances": dists, "min_pt": lowest, "probabilities": probs})
    return failures, worst


def werner_check() -> dict:
    werner = BellMixture(0.5, 1 / 6, 1 / 6, 1 / 6)
    lambdas = channel_to_map(werner).lambdas
    out, _ = bell_protocol_output(bloch_to_density((1.0, 0.0, 0.0)), werner)
    bloch = density_to_bloch(out.mat).as_array()
    return {
        "lambdas": lambdas,
        "output_bloch": bloch.tolist(),
        "lambda_error": float(np.max(np.abs(np.array(lambdas) - 1 / 3))),
        "bloch_error": float(np.max(np.abs(bloch - [1 / 3, 0, 0]))),
    }

