"""Samplers with exact densities for the configuration integrals."""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "sample_cyclic_legs",
    "cyclic_density",
    "cauchy_density",
    "sample_cauchy",
]


def cyclic_density(m: int) -> float:
    """Density of the cyclic-order sampler on the cyclically ordered region."""
    return float(math.factorial(m - 1)) if m >= 1 else 1.0


def sample_cyclic_legs(rng: np.random.Generator, legs: list[int], size: int) -> dict[int, np.ndarray]:
    """Parameters for legs that must appear in the given cyclic order.

    Sorted uniforms are assigned to the legs starting at a uniformly chosen
    rotation of the sequence; the density is (m-1)! on the admissible region.
    """
    m = len(legs)
    if m == 0:
        return {}
    s = np.sort(rng.random((size, m)), axis=1)
    shift = rng.integers(0, m, size=size)
    out = {}
    cols = (np.arange(m)[None, :] - shift[:, None]) % m
    for i, h in enumerate(legs):
        out[h] = s[np.arange(size), cols[:, i]]
    return out


def cauchy_density(x: np.ndarray, centre: np.ndarray, R: float) -> np.ndarray:
    """4 / (pi^2 R^3) * (1 + |x - c|^2 / R^2)^-3, a probability density on R^3."""
    r2 = np.sum((x - centre) ** 2, axis=-1) / (R * R)
    return 4.0 / (np.pi**2 * R**3) * (1.0 + r2) ** -3


def _radial_angle(v: np.ndarray) -> np.ndarray:
    """Invert F(phi) = (phi - sin(phi) cos(phi)) / pi on [0, pi]."""
    target = np.pi * v
    lo = np.zeros_like(v)
    hi = np.full_like(v, np.pi)
    # F is monotone with flat ends, so bisection is the safe choice
    for _ in range(56):
        mid = 0.5 * (lo + hi)
        below = mid - np.sin(mid) * np.cos(mid) < target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    phi = 0.5 * (lo + hi)
    return phi


def sample_cauchy(rng: np.random.Generator, size: int, centre: np.ndarray, R: float) -> np.ndarray:
    """Points with density ``cauchy_density``.

    With r = R tan(phi / 2) the radial law becomes proportional to sin^2(phi).
    """
    phi = _radial_angle(rng.random(size))
    r = R * np.tan(phi / 2.0)
    u = rng.normal(size=(size, 3))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    return centre + u * r[:, None]
