"""Directional-averaging oracles for the writhe functional.

The writhe of a curve is the average over viewing directions of the signed
self-crossing count of its projection.  ``polygon_writhe`` evaluates that
average exactly for an inscribed polygon, pair of segments by pair, through
the solid angle each pair subtends; ``direction_average`` samples directions.
"""

from __future__ import annotations

import math

import numpy as np

from ..linkcodes import writhe
from .geometry import ParamCurve, ParamLink
from .projection import NonRegularDirection, project

__all__ = ["polygon_writhe", "direction_average"]


def _unit(v):
    n = np.linalg.norm(v, axis=-1, keepdims=True)
    return v / np.where(n == 0, 1.0, n)


def polygon_writhe(points: np.ndarray, chunk: int = 1_000_000) -> float:
    """Exact writhe of a closed polygon (average over all directions)."""
    P = np.asarray(points, dtype=float)
    n = len(P)
    Q = np.roll(P, -1, axis=0)
    i, j = np.triu_indices(n, 2)
    keep = ~((i == 0) & (j == n - 1))
    i, j = i[keep], j[keep]
    total = []
    for s in range(0, len(i), chunk):
        a, b = i[s : s + chunk], j[s : s + chunk]
        p1, p2, p3, p4 = P[a], Q[a], P[b], Q[b]
        r13, r14, r23, r24 = p3 - p1, p4 - p1, p3 - p2, p4 - p2
        n1 = _unit(np.cross(r13, r14))
        n2 = _unit(np.cross(r14, r24))
        n3 = _unit(np.cross(r24, r23))
        n4 = _unit(np.cross(r23, r13))
        dots = [np.clip(np.einsum("ij,ij->i", x, y), -1, 1) for x, y in ((n1, n2), (n2, n3), (n3, n4), (n4, n1))]
        omega = sum(np.arcsin(dd) for dd in dots)
        sgn = np.sign(np.einsum("ij,ij->i", np.cross(p4 - p3, p2 - p1), r13))
        total.append(omega * sgn)
    return 2.0 * math.fsum(np.concatenate(total)) / (4 * np.pi)


def direction_average(
    curve: ParamCurve, n_dirs: int, seed: int, resolution: int | None = None
) -> tuple[float, float, np.ndarray]:
    """Mean and standard error of writhe(project(curve, d)) over seeded
    uniformly random directions; non-regular draws are redrawn."""
    rng = np.random.default_rng(seed)
    link = ParamLink([curve])
    vals = []
    while len(vals) < n_dirs:
        d = rng.normal(size=3)
        d /= np.linalg.norm(d)
        try:
            vals.append(writhe(project(link, d, resolution), 1))
        except NonRegularDirection:
            continue
    v = np.array(vals, dtype=float)
    return float(v.mean()), float(v.std(ddof=1) / np.sqrt(len(v))), v
