"""From vortex to standing wave at N = 20, p = q = 1.

As theta goes from pi/2 to 0 the circulating current dies away and
interference fringes grow along the diagonal.
"""

import math

import numpy as np

from lissajous_cs import ComplexAmplitude, DegenerateSubspace, Grid2D, build_by_recurrence, classify
from lissajous_cs.fields import branch_overlap, current_density, current_magnitude_integral, eval_wavefunction

grid = Grid2D.square(8.0, 801)
print(f"{'theta/pi':>9} {'class':>13} {'visibility':>11} {'int |J|':>9}")
for theta in np.linspace(math.pi / 2, 0.0, 9):
    state = build_by_recurrence(DegenerateSubspace(20), ComplexAmplitude(1.0, theta))
    vis = branch_overlap(state, grid)
    jint = current_magnitude_integral(current_density(eval_wavefunction(state, grid)))
    print(f"{theta / math.pi:9.4f} {classify(state).tag.value:>13} {vis:11.4f} {jint:9.4f}")
