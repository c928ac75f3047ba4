"""
Free-surface traces and level curves
====================================

The stream function of a trapped mode, sampled on the free surface, decides
where floating bodies can sit.  This script samples the trace for the first
two modes, locates its zeros, extrema and the stagnation point of the
heave-modified stream function, and draws the level curves through the
critical level.  Output goes to ``demo_output/``.
"""

import os

import numpy as np

from trapmodes import ModeParams, find_stagnation, find_trace_extrema, free_surface_trace
from trapmodes.io import svg_document, write_csv, atomic_write
from trapmodes.levelset import find_trace_zeros, trace_level_set

OUT = "demo_output"
os.makedirs(OUT, exist_ok=True)

# %%
# Mode 1 puts the source ring at the first zero of J1.  Inside the ring the
# trace starts at zero, dips to one negative minimum, crosses zero once and
# grows without bound towards the ring.
mp = ModeParams(1)
print("ring radius rho_r = %.10f" % mp.rho_r)
for H in (0.0, 0.1):
    ext = find_trace_extrema(mp, H)
    zeros = find_trace_zeros(mp, H)
    print("H=%.1f  minimum at rho=%.6f (value %.6f), zero at rho=%.6f"
          % (H, ext[0].rho, ext[0].value, zeros[0].rho))

tr = free_surface_trace(mp, 0.1, rho_max=12.0, n=600)
write_csv(os.path.join(OUT, "trace_m1_H0.1.csv"), ["rho", "value"], list(tr))

# %%
# With heave the stream function gains ``-H rho^2 / 2`` and acquires an
# interior stagnation point.  Its level separates bounded level curves from
# the ones that escape downwards.
st = find_stagnation(mp, 0.1)
print("stagnation point (%.6f, %.6f), critical level %.6f"
      % (st.location.rho, st.location.eta, st.level))

paths = []
for v, style in ((st.level - 1e-3, True), (st.level + 1e-3, True), (-2.0, False), (0.5, False)):
    for c in trace_level_set(mp, 0.1, v, 12.0):
        print("  v=%+.4f  %s -> %s  (%d vertices)" % (v, c.left_end, c.right_end, len(c.points)))
        paths.append({"points": c.points, "dash": style, "stroke": "#b03030" if style else "black"})
atomic_write(os.path.join(OUT, "levels_m1_H0.1.svg"),
             svg_document(paths, (0.0, 12.0, -8.0, 0.0), title="m=1, H=0.1"))

# %%
# For larger mode numbers the extrema inside the ring line up with the zeros
# of J0.
for m in (6, 10, 14):
    ext = find_trace_extrema(ModeParams(m), 0.0, (0.0, 10.17))
    print("m=%2d extrema at %s" % (m, np.round([e.rho for e in ext], 5)))
