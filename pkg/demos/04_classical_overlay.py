"""How much probability sits near the matching classical orbit.

The orbit amplitudes come from <n_x>, <n_y> of the state, and its phase from
the phase of zeta.
"""

import math

import numpy as np

from lissajous_cs import ComplexAmplitude, DegenerateSubspace, Grid2D, build_by_recurrence, matched_trajectory
from lissajous_cs.fields import eval_wavefunction, localization_mass, probability_density

grid = Grid2D.square(8.0, 801)
cases = [(1, 1, math.pi / 2), (1, 2, 0.0), (1, 2, math.pi / 2), (2, 3, math.pi / 4), (1, 3, 0.0), (3, 5, 0.0)]
widths = (0.5, 1.0, 1.5, 2.0)
print("p q  theta  A_x   A_y   " + "  ".join(f"w={w}" for w in widths))
for p, q, theta in cases:
    state = build_by_recurrence(DegenerateSubspace(20, p, q), ComplexAmplitude(1.0, theta))
    rho = probability_density(eval_wavefunction(state, grid))
    traj = matched_trajectory(state)
    masses = [localization_mass(rho, traj, w) for w in widths]
    print(f"{p} {q}  {theta:.3f}  {traj.params['A_x']:.2f}  {traj.params['A_y']:.2f}  " + "  ".join(f"{m:.3f}" for m in masses))

# the orbit itself, sampled coarsely
traj = matched_trajectory(build_by_recurrence(DegenerateSubspace(20, 1, 2), ComplexAmplitude(1.0, math.pi / 4)), 33)
print(np.round(traj.samples[::4], 3))
