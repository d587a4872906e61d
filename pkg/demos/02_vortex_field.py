"""Density, current and phase of the isotropic vortex state.

At p = q = 1 and zeta = -i the state is (x + iy)^N e^{-r^2/2} / sqrt(pi N!),
a ring of radius ~sqrt(N) carrying a pure circulating current.
"""

import math

import numpy as np

from lissajous_cs import (
    ComplexAmplitude,
    DegenerateSubspace,
    Grid2D,
    build_by_recurrence,
    current_density,
    eval_wavefunction,
    phase_field,
    probability_density,
    winding_number,
)
from lissajous_cs.fields import total_mass

N = 20
grid = Grid2D.square(8.0, 401)

for theta in (-math.pi / 2, math.pi / 2):
    state = build_by_recurrence(DegenerateSubspace(N), ComplexAmplitude(1.0, theta))
    wf = eval_wavefunction(state, grid)
    rho = probability_density(wf).values
    J = current_density(wf).values
    chi = phase_field(wf).values

    X, Y = grid.mesh()
    r = np.hypot(X, Y)
    i, j = np.unravel_index(np.argmax(rho), rho.shape)
    # angular component of the current, r_hat x J
    j_phi = (X * J[..., 1] - Y * J[..., 0]) / np.where(r > 0, r, 1)
    print(f"theta={theta:+.4f}")
    print(f"  mass on grid       {total_mass(probability_density(wf)):.12f}")
    print(f"  ring radius        {r[i, j]:.3f}  (sqrt(N) = {math.sqrt(N):.3f})")
    print(f"  J_phi at the ring  {j_phi[i, j]:+.4f}  (N rho / r = {N * rho[i, j] / r[i, j]:.4f} in magnitude)")
    print(f"  chi undefined at   {np.isnan(chi).sum()} of {chi.size} points")
    print(f"  winding on r=sqrt(N): {winding_number(wf, radius=math.sqrt(N)):+d}")
