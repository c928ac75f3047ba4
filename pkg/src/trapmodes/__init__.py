"""
Trapped modes for freely floating axisymmetric structures.

The package builds an explicit axisymmetric potential whose stream-function
level curves give the wetted surfaces of floating bodies, synthesizes
multi-body structures with ballast and hydrostatic matrices, and verifies
the coupled boundary-value problem numerically.
"""

from .errors import *  # noqa: F401,F403
from .potential import ModeParams, FieldPoint, evaluate, phi, psi, psi_heave, field_sample
from .specfun import bessel, bessel_zero
from .levelset import (free_surface_trace, find_trace_extrema, trace_level_curve,
                       trace_level_set, find_stagnation)
from .structure import synthesize, body_moments, plan_ballast, assemble_matrices
from .verify import verify_structure

__version__ = "0.1.0"
