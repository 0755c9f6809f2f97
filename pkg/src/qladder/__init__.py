"""Semi-analytic solver and dynamics for a Lorentzian-coupled ladder model.

A single discrete level couples to an infinite uniform ladder of states
through a Lorentzian profile of dimensionless width a.  The eigenvalue
problem reduces to one transcendental equation per unit interval; this
package solves it, reconstructs eigenvector weights and survival dynamics,
implements the four limiting reference models (two-state Rabi,
Bixon-Jortner, Wigner-Weisskopf, Lorentzian/Fano continuum), and carries a
dense-matrix oracle for cross-validation.
"""

from .dynamics import TimeSeries, moment, survival_amplitude, survival_series
from .errors import (
    BracketError,
    ConvergenceError,
    DegenerateParameterError,
    PoleError,
    QLadderError,
)
from .limits import (
    LimitSpec,
    bj_spectrum,
    fano_F,
    fano_alpha_sq,
    fano_poles,
    fano_survival,
    limit_survival,
    rabi_eigenvalues,
    rabi_eigenvector,
    rabi_survival,
    ww_survival,
)
from .oracle import DenseSystem, build_hamiltonian, diagonalize, oracle_survival
from .params import ModelParams
from .solver import (
    EigenPair,
    Spectrum,
    bracket_roots,
    critical_width_a0,
    k_component,
    monotonicity_certificate,
    near_integer_shift,
    refine_root,
    residual_g,
    residual_g_truncated,
    solve_spectrum,
    solve_truncated_spectrum,
)
from .sums import (
    alpha,
    cot_rational,
    lorentz_sum,
    lorentz_sum_partial,
    s1_closed,
    s1_partial,
    s2_rational,
    s2_trig,
)
from .version import __version__

__all__ = [
    "BracketError",
    "ConvergenceError",
    "DegenerateParameterError",
    "DenseSystem",
    "EigenPair",
    "LimitSpec",
    "ModelParams",
    "PoleError",
    "QLadderError",
    "Spectrum",
    "TimeSeries",
    "__version__",
    "alpha",
    "bj_spectrum",
    "bracket_roots",
    "build_hamiltonian",
    "cot_rational",
    "critical_width_a0",
    "diagonalize",
    "fano_F",
    "fano_alpha_sq",
    "fano_poles",
    "fano_survival",
    "k_component",
    "limit_survival",
    "lorentz_sum",
    "lorentz_sum_partial",
    "moment",
    "monotonicity_certificate",
    "near_integer_shift",
    "oracle_survival",
    "rabi_eigenvalues",
    "rabi_eigenvector",
    "rabi_survival",
    "refine_root",
    "residual_g",
    "residual_g_truncated",
    "s1_closed",
    "s1_partial",
    "s2_rational",
    "s2_trig",
    "solve_spectrum",
    "solve_truncated_spectrum",
    "survival_amplitude",
    "survival_series",
    "ww_survival",
]
