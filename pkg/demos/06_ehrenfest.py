"""The Glauber product's centroid traces the classical Lissajous curve,
while the projected amplitude zeta stays fixed along the way."""

import math

import numpy as np

from lissajous_cs import GlauberProduct, ehrenfest_centroid, evolve_glauber, lissajous

p, q = 1, 2
g0 = GlauberProduct(1.2 * np.exp(0.4j), 0.9 * np.exp(-1.1j))
tr = ehrenfest_centroid(g0, p, q, 401)
prm = tr.params
ref = lissajous(prm["A_x"], prm["A_y"], p, q, prm["delta"], 401, phase_x=prm["phase_x"])
print("centroid vs lissajous:", max(np.abs(tr.x - ref.x).max(), np.abs(tr.y - ref.y).max()))

for t in np.linspace(0, 2 * math.pi, 5):
    g = evolve_glauber(g0, q, p, t)
    z = g.zeta(p, q)
    print(f"t={t:5.3f}  |zeta|={z.modulus:.12f}  arg zeta={z.phase:+.12f}")
