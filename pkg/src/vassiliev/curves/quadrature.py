"""Adaptive Gauss-Legendre quadrature of the Gauss kernel.

The parameter square is covered by dyadic cells.  Each cell is integrated
with a p x p Gauss-Legendre rule and again with the rule on its four
children; cells whose two estimates differ by more than their share of the
tolerance are split.  Accepted cells are summed in cell-index order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import CurveError, GeomTolerance, ParamCurve

__all__ = [
    "QuadResult",
    "adaptive_square",
    "gauss_kernel",
    "gauss_linking_integral",
    "self_linking_integral",
]

FOUR_PI = 4.0 * np.pi


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    cells: int
    evaluations: int
    converged: bool

    def __float__(self) -> float:
        return self.value


def gauss_kernel(P, dP, Q, dQ) -> np.ndarray:
    """det(dP, dQ, P - Q) / (4 pi |P - Q|^3), the pulled-back sphere form."""
    v = P - Q
    r = np.linalg.norm(v, axis=-1)
    return np.einsum("...k,...k->...", np.cross(dP, dQ), v) / (FOUR_PI * r**3)


def adaptive_square(f, tol: GeomTolerance, area: float = 1.0) -> QuadResult:
    """Integrate f(s, t) (vectorized) over [0, 1]^2."""
    x, w = np.polynomial.legendre.leggauss(tol.gl_order)
    x = 0.5 * (x + 1.0)
    w = 0.5 * w
    W = np.outer(w, w).ravel()
    X = np.repeat(x, len(x))
    Y = np.tile(x, len(x))

    def rule(x0, y0, h):
        s = x0[:, None] + h[:, None] * X[None]
        t = y0[:, None] + h[:, None] * Y[None]
        vals = f(s, t)
        return (vals * W).sum(axis=1) * h * h

    g = tol.initial_grid
    i, j = np.meshgrid(np.arange(g), np.arange(g), indexing="ij")
    x0 = (i.ravel() / g).astype(float)
    y0 = (j.ravel() / g).astype(float)
    h = np.full(x0.shape, 1.0 / g)
    coarse = rule(x0, y0, h)
    accepted: list[tuple[float, float, float, float]] = []  # (x0, y0, value, err)
    evals = len(x0) * len(W)
    converged = True
    level = 0
    while len(x0):
        hh = h / 2
        cx = np.concatenate([x0, x0 + hh, x0, x0 + hh])
        cy = np.concatenate([y0, y0, y0 + hh, y0 + hh])
        ch = np.concatenate([hh, hh, hh, hh])
        fine_children = rule(cx, cy, ch)
        evals += len(cx) * len(W)
        m = len(x0)
        fine = fine_children.reshape(4, m).sum(axis=0)
        err = np.abs(fine - coarse)
        share = tol.abs_tol * (h * h) / area
        ok = err <= np.maximum(share, tol.rel_tol * np.abs(fine))
        if level >= tol.max_subdivisions or len(accepted) + 4 * m > tol.max_cells:
            if not np.all(ok):
                converged = False
            ok[:] = True
        for k in np.nonzero(ok)[0]:
            accepted.append((x0[k], y0[k], fine[k], err[k]))
        split = np.nonzero(~ok)[0]
        idx = np.concatenate([split, split + m, split + 2 * m, split + 3 * m])
        x0, y0, h = cx[idx], cy[idx], ch[idx]
        coarse = fine_children[idx]
        level += 1
    accepted.sort(key=lambda c: (c[0], c[1]))
    value = math.fsum(c[2] for c in accepted)
    error = math.fsum(c[3] for c in accepted)
    return QuadResult(value, error, len(accepted), evals, converged)


def _min_distance(J: ParamCurve, K: ParamCurve, grid: int) -> float:
    P = J.sample(grid)
    Q = K.sample(grid)
    return float(np.linalg.norm(P[:, None] - Q[None], axis=-1).min())


def gauss_linking_integral(
    J: ParamCurve, K: ParamCurve, tol: GeomTolerance | None = None, delta: float = 0.0
) -> QuadResult:
    """Integral of det(J'(w), K'(z), J(w) - K(z)) / (4 pi |J - K|^3) over the torus."""
    tol = tol or GeomTolerance()
    if _min_distance(J, K, 512) <= delta:
        raise CurveError("curves violate the clearance bound")

    def f(s, t):
        P, dP = J.evaluate(s)
        Q, dQ = K.evaluate(t)
        return gauss_kernel(P, dP, Q, dQ)

    return adaptive_square(f, tol)


def self_linking_integral(K: ParamCurve, tol: GeomTolerance | None = None) -> QuadResult:
    """The writhe functional I_theta of a single curve.

    The off-diagonal torus is parametrized by (s, h) -> (s, s + h) with
    h in (0, 1); the diagonal sits on the boundary h in {0, 1} where the
    kernel tends to 0 like |h|, so no excision is needed.
    """
    tol = tol or GeomTolerance()

    def f(s, h):
        P, dP = K.evaluate(s)
        Q, dQ = K.evaluate(s + h)
        return gauss_kernel(P, dP, Q, dQ)

    return adaptive_square(f, tol)
