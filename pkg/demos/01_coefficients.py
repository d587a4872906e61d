"""Build a few states both ways and look at their coefficients.

The recurrence builder only needs zeta; the projection builder needs a
Glauber pair (alpha, beta).  Any pair with alpha^p / beta^q = zeta lands on
the same state up to a global phase.
"""

import math

import numpy as np

from lissajous_cs import (
    ComplexAmplitude,
    DegenerateSubspace,
    apply_weighted_number,
    build_by_projection,
    build_by_recurrence,
    classify,
    glauber_for_zeta,
)
from lissajous_cs.states import phase_aligned_distance

np.set_printoptions(precision=4, suppress=True)

for (N, p, q), theta in [((2, 1, 1), 0.0), ((5, 1, 2), math.pi / 4), ((4, 2, 3), math.pi / 2)]:
    sub = DegenerateSubspace(N, p, q)
    zeta = ComplexAmplitude(1.0, theta)
    a = build_by_recurrence(sub, zeta)
    b = build_by_projection(sub, glauber_for_zeta(sub, zeta, beta=0.8 * np.exp(0.3j)))
    print(f"N={N} p={p} q={q} theta={theta:.3f}")
    print("  levels (n_x, n_y):", [(int(a), int(b)) for a, b in zip(*sub.levels())])
    print("  |C_K|^2          :", np.abs(a.coeffs) ** 2)
    print("  arg C_K          :", np.angle(a.coeffs))
    print("  builders differ by", f"{phase_aligned_distance(a, b):.1e}")
    print("  q n_x + p n_y    =", apply_weighted_number(a), " class:", classify(a).tag.value)
    print()

# a large amplitude pushes weight towards K = N (all quanta in x)
sub = DegenerateSubspace(10, 1, 1)
for mod in (0.1, 1.0, 10.0):
    w = np.abs(build_by_recurrence(sub, ComplexAmplitude(mod, 0.0)).coeffs) ** 2
    print(f"|zeta|={mod:5.1f}  <K>={w @ np.arange(11):.3f}")
