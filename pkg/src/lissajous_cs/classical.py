"""Classical Lissajous orbits and Ehrenfest centroids (omega = 1, period 2 pi).

x(t) = A_x cos(q t + phase_x),  y(t) = A_y cos(p t + phase_x - delta)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .states import GlauberProduct, LcsState, number_expectations

__all__ = ["ClassicalTrajectory", "lissajous", "ehrenfest_centroid", "matched_trajectory"]


@dataclass(frozen=True, eq=False)
class ClassicalTrajectory:
    t: np.ndarray = field(repr=False)
    x: np.ndarray = field(repr=False)
    y: np.ndarray = field(repr=False)
    period: float
    params: dict

    @property
    def samples(self) -> np.ndarray:
        return np.column_stack([self.x, self.y])


def _check(p: int, q: int, n_samples: int) -> None:
    if p < 1 or q < 1 or math.gcd(p, q) != 1:
        raise ValueError(f"p and q must be coprime positive integers, got p={p}, q={q}")
    if n_samples < 16 * max(p, q):
        raise ValueError(f"need at least {16 * max(p, q)} samples, got {n_samples}")


def lissajous(
    A_x: float,
    A_y: float,
    p: int,
    q: int,
    delta: float,
    n_samples: int = 2001,
    phase_x: float = 0.0,
) -> ClassicalTrajectory:
    """Sample one period of the orbit; the first and last samples coincide."""
    _check(p, q, n_samples)
    period = 2 * np.pi
    t = np.linspace(0.0, period, n_samples)
    x = A_x * np.cos(q * t + phase_x)
    y = A_y * np.cos(p * t + phase_x - delta)
    params = dict(A_x=A_x, A_y=A_y, p=p, q=q, delta=delta, phase_x=phase_x)
    return ClassicalTrajectory(t, x, y, period, params)


def ehrenfest_centroid(g: GlauberProduct, p: int, q: int, n_samples: int = 2001) -> ClassicalTrajectory:
    """<x>(t), <y>(t) of the freely evolving Glauber product, omega_x = q, omega_y = p.

    <x> = sqrt(2/q) Re(alpha e^{-iqt}), <y> = sqrt(2/p) Re(beta e^{-ipt}).
    """
    _check(p, q, n_samples)
    period = 2 * np.pi
    t = np.linspace(0.0, period, n_samples)
    x = np.sqrt(2.0 / q) * np.real(g.alpha * np.exp(-1j * q * t))
    y = np.sqrt(2.0 / p) * np.real(g.beta * np.exp(-1j * p * t))
    params = dict(
        A_x=np.sqrt(2.0 / q) * abs(g.alpha),
        A_y=np.sqrt(2.0 / p) * abs(g.beta),
        p=p,
        q=q,
        delta=float(np.angle(g.beta) - np.angle(g.alpha)),
        phase_x=float(-np.angle(g.alpha)),
    )
    return ClassicalTrajectory(t, x, y, period, params)


def matched_trajectory(state: LcsState, n_samples: int = 4001) -> ClassicalTrajectory:
    """Classical orbit energy-matched to ``state`` for overlays.

    Amplitudes A_x = sqrt(2<n_x>+1)/sqrt(q), A_y = sqrt(2<n_y>+1)/sqrt(p);
    phases taken from a Glauber product with beta real and p*arg(alpha) = theta.
    """
    nx, ny = number_expectations(state)
    A_x = math.sqrt(2 * nx + 1) / math.sqrt(state.q)
    A_y = math.sqrt(2 * ny + 1) / math.sqrt(state.p)
    theta_x = state.zeta.phase / state.p
    return lissajous(A_x, A_y, state.p, state.q, -theta_x, n_samples, phase_x=-theta_x)
