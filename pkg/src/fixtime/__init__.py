"""Fixed-time and predefined-time stabilization: gain catalogs, simulation, certificates."""

from .config import load_spec, shipped_specs, spec_from_dict, spec_to_dict
from .dynamics import (Base, SpecError, SystemSpec, converse_lyapunov, field, lyapunov_solve,
                       make_system, predict_settling)
from .gain_aut import (AutFamily, AutGain, GainValidationError, compose_from_density,
                       make_aut_gain, predict_settling_aut)
from .gain_nonaut import (NonAutFamily, NonAutGain, make_nonaut_gain, predict_settling_nonaut,
                          tbg_from_shape)
from .numerics import IntegratorConfig, Trajectory, Verdict, integrate
from .shapes import make_shape
from .verify import certify_settling, least_ubst_sweep, lyapunov_check

__version__ = "0.1.0"

__all__ = [
    "AutFamily", "AutGain", "Base", "GainValidationError", "IntegratorConfig", "NonAutFamily",
    "NonAutGain", "SpecError", "SystemSpec", "Trajectory", "Verdict", "certify_settling",
    "compose_from_density", "converse_lyapunov", "field", "integrate", "least_ubst_sweep",
    "load_spec", "lyapunov_check", "lyapunov_solve", "make_aut_gain", "make_nonaut_gain",
    "make_shape", "make_system", "predict_settling", "predict_settling_aut",
    "predict_settling_nonaut", "shipped_specs", "spec_from_dict", "spec_to_dict",
    "tbg_from_shape",
]
