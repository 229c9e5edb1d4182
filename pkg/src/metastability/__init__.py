from .bounds import fmcp_bound, phi_i, phi_km, psi_km
from .functions import PwlFunction
from .iterations import Scheme, run_iteration, sign_sequence, switching_sequence
from .numerics import CapExceededError, Caps
from .oracle import (
    least_metastable,
    needed_horizon,
    verify_fmcp,
    verify_ishikawa_theorem,
    verify_km_theorem,
    verify_lipschitz_theorem,
)
from .protocol import Scenario, ScenarioError, Theorem
from .runner import ScenarioRunner

__all__ = [
    "CapExceededError",
    "Caps",
    "PwlFunction",
    "Scenario",
    "ScenarioError",
    "ScenarioRunner",
    "Scheme",
    "Theorem",
    "fmcp_bound",
    "least_metastable",
    "needed_horizon",
    "phi_i",
    "phi_km",
    "psi_km",
    "run_iteration",
    "sign_sequence",
    "switching_sequence",
    "verify_fmcp",
    "verify_ishikawa_theorem",
    "verify_km_theorem",
    "verify_lipschitz_theorem",
]
