"""Numerical tolerance policy shared by every verdict in the package.

All thresholds live here so that a separability or physicality verdict
always means the same thing regardless of which module produced it.
"""

#: Max |M - M^dagger| entry for a matrix to count as Hermitian.
HERMITIAN_ATOL = 1e-12

#: Looser Hermiticity bound accepted by the eigenvalue solver.
EIG_HERMITIAN_ATOL = 1e-9

#: |Tr(rho) - 1| allowed for a density matrix.
TRACE_ATOL = 1e-12

#: Smallest eigenvalue still counted as non-negative (PSD, PPT, Choi positivity).
PSD_FLOOR = -1e-9

#: Bloch vectors may overshoot the unit sphere by this much.
BLOCH_NORM_ATOL = 1e-12

#: Unitarity and projector checks, max-entry norm.
OPERATOR_ATOL = 1e-12

#: Measurement branches at or below this probability are reported absent.
BRANCH_PROB_FLOOR = 1e-12

#: Jacobi sweeps stop once the off-diagonal Frobenius norm is below this
#: (scaled by max(1, ||A||_F)).
JACOBI_OFFDIAG_TOL = 1e-13

#: Premise checks on marginals (diagonal, equatorial) and the sum-of-lambdas boundary band.
PREMISE_ATOL = 1e-9

#: Simplex slack for Bell-mixture weights.
WEIGHT_ATOL = 1e-12
