"""
Checking a structure
====================

A trapped mode must satisfy the Neumann condition on every wetted surface,
the equations of motion of every body, energy equipartition and the absence
of an outgoing wave.  This script runs every check on a motionless mode-1
pair and prints the Green identity terms that tie the lateral flux to the
body pressure integrals.
"""

import numpy as np

from trapmodes import ModeParams, synthesize, verify_structure
from trapmodes.verify import (MOTION_LABELS, TruncationDomain, check_far_field,
                              check_green_identity, check_kinematic, perturb_body)

s = synthesize(ModeParams(1), [0.0, 0.0])

# %%
# Full report.  Residuals are dimensionless.
rep = verify_structure(s)
for k in range(len(s.bodies)):
    print("body %d: kinematic %.2e" % (k + 1, rep.bc_residuals[k]))
    for label, r in zip(MOTION_LABELS, rep.motion_eq_residuals[k]):
        print("    %-6s %+.3e" % (label, r))
for dom, (lhs, rhs, gap) in zip(rep.domains, rep.equipartition):
    print("cylinder b=%.1f d=%.1f: kinetic %.8f potential %.8f gap %.2e" % (dom.b, dom.d, lhs, rhs, gap))
print("far-field exponent %.3f" % rep.far_field_exponent)
print("passed:", rep.passed)

# %%
# A body scaled by one percent is no longer a level curve, and the kinematic
# check notices.
print("scaled body 1 residual %.3e" % check_kinematic(perturb_body(s, 0), 0))

# %%
# Off a J1 zero the outgoing wave comes back and the decay slows to the
# cylindrical rate rho^(-1/2).
print("radiating exponent %.3f" % check_far_field(ModeParams(1, rho_r=4.5)))

# %%
# Green identity with Y = eta + 1 on a cylinder of radius 10: the lateral
# term cancels the bottom disc, and both die out like d^-4.
g = check_green_identity(s, TruncationDomain(10.0, 20.0), [20.0, 40.0, 80.0, 160.0])
for d, lat, bot, idn in zip(g["depths"], g["lateral"], g["bottom"], g["identity"]):
    print("d=%5.0f lateral %+.4e bottom %+.4e sum %+.1e" % (d, lat, bot, idn))
print("bottom decay ratios", np.round(g["bottom"][1:] / g["bottom"][:-1], 4))
