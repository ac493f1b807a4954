"""Structure of plane shock waves from the quasi-gasdynamic (QGD) and
Navier-Stokes equations, solved by explicit time marching."""

__version__ = "0.1.0"

from .gas import ARGON, HELIUM, NITROGEN, GasSpec, get_gas  # noqa: E402
from .jump import UniformState, downstream_state, upstream_state  # noqa: E402
from .operator import FlowField, Model  # noqa: E402
from .marcher import (  # noqa: E402
    DivergenceError,
    ShockSolution,
    SolverConfig,
    run_to_steady,
)
from .diagnostics import (  # noqa: E402
    normalized_profiles,
    oscillation_amplitude,
    reciprocal_thickness,
)
