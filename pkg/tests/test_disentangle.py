import csv
import io

import numpy as np
import pytest

from conftest import proj
from telesep.channels import PauliDiagonalMap
from telesep.disentangle import (
    SWEEP_HEADER,
    FeasibilityConditions,
    a14_physical_conditions,
    a15_disentangling_conditions,
    check_both_sides_claim,
    conditions_vs_oracle,
    feasibility_sweep,
    optimize_equatorial,
    run_scenario,
    sweep_to_csv,
    theorem_verdicts,
    verify_theorem,
)
from telesep.errors import PremiseViolation
from telesep.qstate import (
    BELL_PROJECTORS,
    I2,
    SIGMA1,
    SIGMA2,
    CorrelationDecomposition,
    DensityMatrix,
    density_to_bloch,
    partial_trace,
    tensor,
)
from telesep.sampling import random_density, random_diagonal_marginal_state, schmidt_state

PHI_PLUS = DensityMatrix(BELL_PROJECTORS["phi+"])


def a14_by_hand(lam, l, m, n):
    q = 1 - l * l - m * m - n * n
    return [
        1 - lam * lam - n * n,
        q - lam * (1 + l * l + m * m - 2 * l - n * n) - 2 * lam * lam * (1 - l),
        q * q - 4 * lam * lam * (1 - l) ** 2,
    ]


def a15_by_hand(lam, l, m, n):
    q = 1 - l * l - m * m - n * n
    return [
        1 - lam * lam - n * n,
        q - lam * (1 + l * l + m * m + 2 * l - n * n) - 2 * lam * lam * (1 + l),
        q * q - 4 * lam * lam * (1 + l) ** 2,
    ]


class TestClosedForms:
    def test_a14_examples(self):
        assert np.allclose(a14_physical_conditions(0.5, 0, 0, 0), [0.75, 0, 0], atol=1e-15)
        assert np.allclose(a14_physical_conditions(0, 1, 0, 0), [1, 0, 0], atol=1e-15)
        # substituting lambda = 1 gives 1 - 1 - 2 = -2 in the middle entry
        assert np.allclose(a14_physical_conditions(1, 0, 0, 0), [0, -2, -3], atol=1e-15)
        assert not FeasibilityConditions.at(1, 0, 0, 0).is_physical

    def test_a15_examples(self):
        assert np.allclose(a15_disentangling_conditions(0.5, 0, 0, 0), [0.75, 0, 0], atol=1e-15)
        assert np.allclose(a15_disentangling_conditions(0, 0, 0, 0), [1, 1, 1], atol=1e-15)
        assert a15_disentangling_conditions(0.6, 0, 0, 0)[1] == pytest.approx(-0.32, abs=1e-15)

    def test_against_transcription(self, rng):
        pts = rng.uniform(-1, 1, (200, 4))
        for p in pts:
            assert np.allclose(a14_physical_conditions(*p), a14_by_hand(*p), atol=1e-14)
            assert np.allclose(a15_disentangling_conditions(*p), a15_by_hand(*p), atol=1e-14)

    def test_vectorized(self, rng):
        pts = rng.uniform(-1, 1, (4, 50))
        batch = a14_physical_conditions(*pts)
        assert batch.shape == (3, 50)
        assert np.allclose(batch[:, 7], a14_physical_conditions(*pts[:, 7]))

    def test_feasibility(self):
        c = FeasibilityConditions.at(0.5, 0, 0, 0)
        assert c.is_physical and c.is_disentangling and c.feasible
        assert not FeasibilityConditions.at(0.6, 0, 0, 0).feasible


class TestOracleAgreement:
    def test_optimum(self, rng):
        rep = conditions_vs_oracle(0.5, 0, 0, 0, 50, rng)
        assert rep.agree
        assert rep.closed_physical and rep.closed_disentangling
        assert rep.on_boundary

    def test_beyond_optimum(self, rng):
        rep = conditions_vs_oracle(0.6, 0, 0, 0, 50, rng)
        assert rep.agree
        assert not rep.closed_disentangling
        assert rep.entangled_a

    def test_identity(self, rng):
        rep = conditions_vs_oracle(1, 1, 0, 0, 50, rng)
        assert rep.agree
        assert rep.oracle_physical and rep.closed_physical
        assert not rep.oracle_disentangling and not rep.closed_disentangling
        assert len(rep.entangled_a) == 50

    def test_sigma2_only_map(self, rng):
        # lambda = 0, l = 1 keeps only sigma_2: a measure-and-prepare map, so it disentangles
        rep = conditions_vs_oracle(0, 1, 0, 0, 50, rng)
        assert rep.agree
        assert rep.oracle_physical and rep.oracle_disentangling
        assert rep.on_boundary

    def test_unphysical_point_reports_a(self, rng):
        rep = conditions_vs_oracle(1, 0, 0, 0, 50, rng)
        assert rep.agree and not rep.oracle_physical
        assert len(rep.unphysical_a) > 0

    def test_samples_positive(self, rng):
        with pytest.raises(ValueError):
            conditions_vs_oracle(0.5, 0, 0, 0, 0, rng)


class TestOptimizer:
    def test_default(self):
        res = optimize_equatorial()
        assert 0.499 <= res.lambda_max <= 0.501
        assert max(abs(res.l), abs(res.m), abs(res.n)) <= 1e-3
        assert res.certificate.feasible
        assert res.iterations > 0

    def test_coarse(self):
        res = optimize_equatorial(0.1, 1e-3)
        assert abs(res.lambda_max - 0.5) <= 1e-2

    def test_grid_without_origin(self):
        # 0.03 spacing puts no grid point at l = m = n = 0; the local ascent has to find it
        res = optimize_equatorial(0.03, 1e-4)
        assert abs(res.lambda_max - 0.5) <= 1e-3
        assert max(abs(res.l), abs(res.m), abs(res.n)) <= 1e-3

    def test_physicality_only(self):
        res = optimize_equatorial(use_a15=False)
        assert res.lambda_max == pytest.approx(1.0, abs=1e-3)
        assert res.certificate.is_physical

    def test_dropping_a15_never_lowers(self):
        for step, rtol in [(0.1, 1e-3), (0.05, 1e-3)]:
            assert optimize_equatorial(step, rtol, use_a15=False).lambda_max >= optimize_equatorial(step, rtol).lambda_max

    def test_just_above_optimum_is_infeasible(self):
        # dense independent probe of (l, m, n) at lambda slightly above the optimum
        rng = np.random.default_rng(3)
        res = optimize_equatorial()
        lam = res.lambda_max + 2e-4
        pts = np.concatenate([rng.uniform(-1, 1, (3, 200_000)), rng.normal(0, 0.01, (3, 200_000))], axis=1)
        margin = np.minimum(
            a14_physical_conditions(lam, *pts).min(axis=0), a15_disentangling_conditions(lam, *pts).min(axis=0)
        )
        assert margin.max() < 0

    @pytest.mark.parametrize("args", [(0.2, 1e-4), (0.05, 1e-7), (1e-3, 1e-2)])
    def test_bad_resolution(self, args):
        with pytest.raises(ValueError):
            optimize_equatorial(*args)


class TestSweep:
    def test_rows_and_csv(self):
        rows = feasibility_sweep([0.25, 0.5, 0.75])
        assert [r[-1] for r in rows] == [True, True, False]
        text = sweep_to_csv(rows)
        parsed = list(csv.reader(io.StringIO(text)))
        assert parsed[0] == SWEEP_HEADER
        assert parsed[1][0] == "0.25" and parsed[3][-1] == "false"
        assert float(parsed[2][5]) == 0.0


class TestSumCriterion:
    def test_examples(self):
        closed, ppt, _ = theorem_verdicts((1 / 3, 1 / 3, 1 / 3))
        assert closed and ppt
        closed, ppt, _ = theorem_verdicts((1, 1, 1))
        assert not closed and not ppt
        closed, ppt, lowest = theorem_verdicts((1, 0, 0))
        assert closed and ppt
        assert lowest == pytest.approx(0, abs=1e-12)

    def test_pt_spectrum_closed_form(self, rng):
        # PT eigenvalues: (1 - l3 +- (l1 + l2))/4 and (1 + l3 +- (l1 - l2))/4
        for lam in rng.uniform(0, 1, (200, 3)):
            _, _, lowest = theorem_verdicts(tuple(lam))
            assert lowest == pytest.approx(min((1 - lam.sum()) / 4, (1 + lam[2] - abs(lam[0] - lam[1])) / 4), abs=1e-12)

    def test_small_run(self, rng):
        rep = verify_theorem(100, rng)
        assert rep.passed and rep.samples == 100

    def test_samples_positive(self, rng):
        with pytest.raises(ValueError):
            verify_theorem(0, rng)


class TestScenarios:
    def test_universal_on_phi_plus(self):
        rep = run_scenario("universal", PHI_PLUS)
        assert rep.separable and rep.min_pt_eigenvalue >= -1e-9
        assert rep.eta1 is None and rep.eta2 is None
        t_in = CorrelationDecomposition.of(PHI_PLUS).t
        t_out = CorrelationDecomposition.of(rep.output_state).t
        assert np.allclose(t_out, t_in / 3, atol=1e-12)

    def test_universal_eta(self, rng):
        for _ in range(10):
            rho = random_density(rng, 2)
            rep = run_scenario("universal", rho)
            assert rep.eta1 == pytest.approx(1, abs=1e-12)
            assert rep.eta2 == pytest.approx(1 / 3, abs=1e-12)
            assert rep.marginal_fidelity1 == pytest.approx(1, abs=1e-12)

    def test_equatorial_schmidt(self):
        a = 0.9
        b = np.sqrt(1 - a * a)
        rep = run_scenario("equatorial", schmidt_state(a))
        assert rep.separable
        s_out = density_to_bloch(partial_trace(rep.output_state, [1]).mat).as_array()
        assert np.allclose(s_out, [0, 0, (a * a - b * b) / 2], atol=1e-12)
        assert rep.eta2 == pytest.approx(0.5, abs=1e-12)

    def test_commuting_on_phi_plus(self):
        rep = run_scenario("commuting", PHI_PLUS)
        assert rep.separable
        for q in (0, 1):
            assert partial_trace(rep.output_state, [q]).allclose(I2 / 2, atol=1e-12)

    def test_commuting_preserves_marginals(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            rep = run_scenario("commuting", random_diagonal_marginal_state(rng, party=2))
            assert rep.separable
            assert rep.marginal_fidelity1 >= 1 - 1e-12 and rep.marginal_fidelity2 >= 1 - 1e-12

    def test_premises(self):
        plus_x = DensityMatrix((I2 + SIGMA1) / 2)
        plus_y = DensityMatrix((I2 + SIGMA2) / 2)
        with pytest.raises(PremiseViolation):
            run_scenario("commuting", tensor(DensityMatrix(I2 / 2), plus_x))
        with pytest.raises(PremiseViolation):
            run_scenario("equatorial", tensor(DensityMatrix(I2 / 2), plus_y))
        assert run_scenario("equatorial", tensor(DensityMatrix(I2 / 2), plus_x)).separable

    def test_custom_and_unknown(self):
        rep = run_scenario("custom", PHI_PLUS, PauliDiagonalMap(1, 1, 1))
        assert not rep.separable and rep.min_pt_eigenvalue == pytest.approx(-0.5, abs=1e-12)
        with pytest.raises(ValueError):
            run_scenario("custom", PHI_PLUS)
        with pytest.raises(ValueError):
            run_scenario("bogus", PHI_PLUS)

    def test_verdict_follows_pt_sign(self, rng):
        for _ in range(20):
            rep = run_scenario("custom", random_density(rng, 2), PauliDiagonalMap(0.6, 0.6, 0.6))
            assert rep.separable == (rep.min_pt_eigenvalue >= -1e-9)

    def test_product_input_stays_product(self):
        rho = DensityMatrix(np.kron(proj(1, 0), proj(0, 1)))
        assert run_scenario("commuting", rho).output_state.allclose(rho, atol=1e-12)


class TestBothSides:
    def test_claim(self):
        rep = check_both_sides_claim([0.01, 0.1, 0.5])
        assert rep.claim_holds
        by_eps = {row.eps: row for row in rep.rows}
        assert by_eps[0.0].physical
        assert by_eps[0.01].w4 == pytest.approx(-0.005, abs=1e-15)
        assert by_eps[0.5].w4 == pytest.approx(-0.25, abs=1e-15)
        assert by_eps[0.01].choi_min_eigenvalue <= -4e-3
        assert not any(by_eps[e].physical for e in (0.01, 0.1, 0.5))

    def test_negative_eps(self):
        with pytest.raises(ValueError):
            check_both_sides_claim([-0.1])
