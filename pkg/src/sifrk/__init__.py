"""Stabilized integrating-factor Runge-Kutta schemes for Allen-Cahn type equations.

The pieces compose as: pick a tableau (``get_tableau``), build an operator
symbol on a grid, wrap a nonlinearity, bind all three with a step size in a
``SchemeInstance`` and ``integrate``.
"""

from .diagnostics import (MBPMonitor, RateTable, convergence_rates, discrete_energy, l2_error,
                          linf_error)
from .nonlinearity import NonlinearSpec, StabilizedNonlinearity, cubic, flory_huggins
from .spectral import BC, Field, Grid, OperatorSymbol, apply_exp, apply_laplacian, sup_norm
from .stepper import IntegrationResult, NonFiniteError, SchemeInstance, integrate, step
from .tableau import (ButcherTableau, CertificationReport, ShuOsherTableau, TableauError, Verdict,
                      certify, certify_mbp_butcher, certify_mbp_shu_osher, get_tableau)

__version__ = "0.1.0"

__all__ = [
    "BC", "ButcherTableau", "CertificationReport", "Field", "Grid", "IntegrationResult",
    "MBPMonitor", "NonFiniteError", "NonlinearSpec", "OperatorSymbol", "RateTable",
    "SchemeInstance", "ShuOsherTableau", "StabilizedNonlinearity", "TableauError", "Verdict",
    "apply_exp", "apply_laplacian", "certify", "certify_mbp_butcher", "certify_mbp_shu_osher",
    "convergence_rates", "cubic", "discrete_energy", "flory_huggins", "get_tableau", "integrate",
    "l2_error", "linf_error", "step", "sup_norm",
]
