"""Resolution of the identity on a degenerate subspace.

The general relation integrates projected Glauber products over both
complex planes; the isotropic one uses the sphere measure of spin coherent
states.  Both come out as the identity to rounding once the quadrature is
exact for the polynomial degree involved.
"""

import numpy as np

from lissajous_cs import DegenerateSubspace, QuadratureSpec, completeness_general, completeness_su2
from lissajous_cs.verify import QuadraturePreconditionError

for N, p, q in [(1, 1, 1), (3, 2, 3), (10, 1, 2), (20, 1, 1), (8, 3, 5)]:
    sub = DegenerateSubspace(N, p, q)
    M = completeness_general(sub)
    print(f"general N={N:2d} p={p} q={q}: max|M - I| = {np.abs(M - np.eye(N + 1)).max():.1e}")

for N in (1, 5, 20):
    M = completeness_su2(N)
    print(f"sphere  N={N:2d}: max|M - I| = {np.abs(M - np.eye(N + 1)).max():.1e}, trace = {np.trace(M).real:.12f}")

try:
    completeness_general(DegenerateSubspace(10, 1, 2), QuadratureSpec(64, 30))
except QuadraturePreconditionError as exc:
    print("too few angular nodes:", exc)
