"""Numerical laboratory for the cubic NLS equation with third-order dispersion.

The package provides a gauge-reduced spectral solver, modified-energy
bookkeeping built on symmetrized frequency multipliers, empirical verification
of the pointwise multiplier bounds, and a rescaling planner for the global
iteration argument, together with a batch CLI.
"""

from .grid import GridSpec, FieldSample, Spectrum, SpaceTimeField, to_spectrum, to_field
from .multiplier import MultiplierParams, apply_I
from .multilinear import (
    FrequencyTuple,
    delta4,
    delta6,
    lambda4,
    lambda6,
    lambda_n_unit,
    energy_E2,
    energy_series,
    ddt_energy_check,
)
from .solver import SolverConfig, Trajectory, solve, gaussian_bump, linear_propagate
from .gauge import (
    GaugeParams,
    reduction_params,
    snap_alpha,
    apply_gauge,
    invert_gauge,
    solve_reduced_backward,
)
from .bounds import (
    CaseLabel,
    classify_case,
    regime_example,
    verify_delta4_bounds,
    verify_dmvt,
    verify_strichartz,
    verify_trilinear,
)
from .planner import (
    FEASIBILITY_THRESHOLD,
    GwpPlan,
    SweepResult,
    choose_lambda,
    decay_sweep,
    iteration_exponent,
    plan,
    rescale,
    sweep_datum,
)

__version__ = "0.1.0"

__all__ = [
    "GridSpec",
    "FieldSample",
    "Spectrum",
    "SpaceTimeField",
    "to_spectrum",
    "to_field",
    "MultiplierParams",
    "apply_I",
    "FrequencyTuple",
    "delta4",
    "delta6",
    "lambda4",
    "lambda6",
    "lambda_n_unit",
    "energy_E2",
    "energy_series",
    "ddt_energy_check",
    "SolverConfig",
    "Trajectory",
    "solve",
    "gaussian_bump",
    "linear_propagate",
    "GaugeParams",
    "reduction_params",
    "snap_alpha",
    "apply_gauge",
    "invert_gauge",
    "solve_reduced_backward",
    "CaseLabel",
    "classify_case",
    "regime_example",
    "verify_delta4_bounds",
    "verify_dmvt",
    "verify_strichartz",
    "verify_trilinear",
    "FEASIBILITY_THRESHOLD",
    "GwpPlan",
    "SweepResult",
    "choose_lambda",
    "decay_sweep",
    "iteration_exponent",
    "plan",
    "rescale",
    "sweep_datum",
    "__version__",
]
