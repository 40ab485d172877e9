"""Shared numerical tolerances.

Every threshold used for validation or testing lives here so that the
library, the claim checks, and the test suite agree on a single value.
"""

EPS_PSD = 1e-10        # eigenvalue clipping window for positive semidefiniteness
EPS_HERM = 1e-10       # Hermiticity residual (Frobenius, relative to matrix norm)
EPS_EIG = 1e-10        # eigendecomposition reconstruction error (relative Frobenius)
EPS_OPT = 1e-9         # optimizer convergence in the objective value
EPS_CPTP = 1e-10       # Kraus completeness residual (Frobenius)
EPS_QFI = 1e-12        # spectral-pair cutoff in the Fisher information sum

EPS_BALL = 1e-6        # slack on unit-ball membership
EPS_EXTREMAL = 1e-6    # anchor-point coordinate tolerance
EPS_TRAJ = 1e-6        # per-step drift slack for trajectories and conservation
EPS_Q1_MONO = 1e-6     # allowed q1 increase under channels (optimizer slack)
EPS_Q3_MONO = 1e-8     # allowed q3 increase under channels
EPS_MI = 1e-8          # mutual-information bound slack
