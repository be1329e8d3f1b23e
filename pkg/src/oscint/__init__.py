"""Numerical laboratory for the L^4 decay of

    T f(x, y) = int exp(i lam (x^2 t + y t^2)) psi(x, y, t) f(t) dt.
"""
from .amplitude import (
    Characteristic, Chirp, GaussBump, ModulatedRescaled, One, Rescaled, Restricted,
    Sampled, SmoothBump, TrigPoly, Zero, eval_test, load_test_function, make_cutoff,
    modulated_rescaled_cutoff,
)
from .analytics import (
    AscentConfig, DecayFit, QEstimate, estimate_q4_lower, extremizer_lower_bound,
    fit_decay, recursion_report,
)
from .decomp import (
    bilinear_change_of_vars, broad_l4_report, broad_narrow, cap_decompose, rescale_cap,
)
from .errors import (
    BudgetExceeded, CapsTooClose, EmptyDomain, GridMismatch, InvalidProfile,
    NonPositiveValue, SingularMatrix, UnsupportedSupport,
)
from .kernels import BACKEND
from .operator import (
    Grid, GridField, OperatorSpec, evaluate_field, inner_integral, l2_norm_1d,
    l4_norm_1d, lp_norm,
)
from .phase import LinearChange, Phase, eval_phase, reduce_general
from .quadrature import (
    QuadratureConfig, brute_force_oracle, integrate_2d, integrate_oscillatory,
)

__version__ = "0.1.0"
