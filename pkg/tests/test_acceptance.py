"""Exit criteria, each run at its stated tolerance and time budget.

Every test records one PASS/FAIL line, printed in the terminal summary.
"""

import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from telesep.channels import BellMixture, channel_to_map, choi_matrix, is_physical, pauli_map
from telesep.disentangle import conditions_vs_oracle, optimize_equatorial, theorem_verdicts
from telesep.qstate import bloch_to_density, density_to_bloch, hermitian_eigenvalues
from telesep.sampling import make_rng
from telesep.suites import exact_protocol, lemma_round_trip, protocol_equivalence
from telesep.teleport import bell_protocol_output

pytestmark = pytest.mark.acceptance

SEED = 42


def record(number, title, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {number}. {title}: {detail}")
    print(ACCEPTANCE_LINES[-1])
    assert ok, detail


def test_1_werner_realization():
    t0 = time.perf_counter()
    lambdas = np.array(channel_to_map(BellMixture(0.5, 1 / 6, 1 / 6, 1 / 6)).lambdas)
    out, _ = bell_protocol_output(bloch_to_density((1.0, 0.0, 0.0)), BellMixture(0.5, 1 / 6, 1 / 6, 1 / 6))
    bloch = density_to_bloch(out.mat).as_array()
    elapsed = time.perf_counter() - t0
    lam_err = float(np.max(np.abs(lambdas - 1 / 3)))
    bloch_err = float(np.max(np.abs(bloch - [1 / 3, 0, 0])))
    ok = lam_err <= 1e-14 and bloch_err <= 1e-12 and elapsed < 1
    record(1, "Werner realization", ok, f"lambda err {lam_err:.2e}, Bloch err {bloch_err:.2e}, {elapsed:.3f} s")


def test_2_equatorial_optimum():
    t0 = time.perf_counter()
    res = optimize_equatorial()
    elapsed = time.perf_counter() - t0
    witness = max(abs(res.l), abs(res.m), abs(res.n))
    ok = 0.499 <= res.lambda_max <= 0.501 and witness <= 1e-3 and res.certificate.feasible and elapsed < 60
    record(2, "Equatorial optimum", ok, f"lambda_max {res.lambda_max:.6f}, max |l,m,n| {witness:.1e}, {elapsed:.2f} s")


def test_3_sum_of_lambdas_criterion():
    rng = make_rng(SEED)
    t0 = time.perf_counter()
    mismatches = excluded = 0
    for lambdas in rng.uniform(0.0, 1.0, (1000, 3)):
        if abs(lambdas.sum() - 1) <= 1e-9:
            excluded += 1
            continue
        closed, ppt, _ = theorem_verdicts(tuple(lambdas))
        mismatches += closed != ppt
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed < 10
    record(3, "Sum-of-lambdas criterion", ok, f"{mismatches} mismatches / 1000 ({excluded} in boundary band), {elapsed:.2f} s")


def test_4_exact_disentanglement():
    failures, worst = exact_protocol(100, make_rng(SEED))
    ok = not failures and worst <= 1e-12
    record(4, "Exact disentanglement", ok, f"{len(failures)} failing inputs / 100, max marginal distance {worst:.2e}")


def test_5_protocol_map_equivalence():
    failures = protocol_equivalence(100, 100, make_rng(SEED), atol=1e-12)
    worst = max((f["trace_distance"] for f in failures), default=0.0)
    record(5, "Protocol-map equivalence", not failures, f"{len(failures)} / 10000 pairs above 1e-12 (worst {worst:.2e})")


def test_6_map_mixture_round_trip():
    failures = lemma_round_trip(1000, make_rng(SEED))
    record(6, "Map-mixture round trip", not failures, f"{len(failures)} failing maps / 1000")


def test_7_both_sides_unphysical():
    lowest = float(hermitian_eigenvalues(choi_matrix(pauli_map(0.51, 0, 0.51)))[0])
    rejected = not is_physical(pauli_map(0.51, 0, 0.51))
    accepted = is_physical(pauli_map(0.5, 0, 0.5))
    ok = rejected and lowest <= -4e-3 and accepted
    record(7, "Both-sides unphysicality", ok, f"eps=0.01 min Choi eig {lowest:.4g} (rejected={rejected}), eps=0 accepted={accepted}")


def test_8_closed_forms_vs_oracle():
    rng = make_rng(SEED)
    t0 = time.perf_counter()
    disagreements = boundary = 0
    for params in rng.uniform(-1.0, 1.0, (500, 4)):
        rep = conditions_vs_oracle(*params, 25, rng)
        if not rep.agree:
            if rep.on_boundary:
                boundary += 1
            else:
                disagreements += 1
    elapsed = time.perf_counter() - t0
    ok = disagreements == 0 and elapsed < 30
    record(8, "Closed-form conditions vs oracle", ok, f"{disagreements} disagreements / 500 ({boundary} in boundary band), {elapsed:.2f} s")
