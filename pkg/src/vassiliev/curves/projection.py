"""Projection of a space link to a signed Gauss code."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..linkcodes import LinkCode, Visit
from .geometry import CurveError, FourierCurve, ParamCurve, ParamLink

__all__ = [
    "NonRegularDirection",
    "Crossing",
    "frame",
    "find_crossings",
    "project",
    "random_directions",
    "ANGLE_TOL",
    "HEIGHT_TOL",
]

ANGLE_TOL = 1e-4
HEIGHT_TOL = 1e-6


class NonRegularDirection(CurveError):
    """Projection direction with a cusp, tangency or coincident crossings."""


@dataclass(frozen=True)
class Crossing:
    over: tuple[int, float]  # (component, parameter)
    under: tuple[int, float]
    sign: int
    point: tuple[float, float]


def frame(d) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Orthonormal (e1, e2, d) with e1 x e2 = d."""
    d = np.asarray(d, dtype=float)
    d = d / np.linalg.norm(d)
    helper = np.array([1.0, 0.0, 0.0]) if abs(d[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(helper, d)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(d, e1)
    return e1, e2, d


def _resolution(c: ParamCurve) -> int:
    if isinstance(c, FourierCurve):
        return max(512, 128 * c.degree)
    return 2048


def _check_cusps(c: ParamCurve, d: np.ndarray, n: int) -> None:
    t = np.arange(n) / n
    _, T = c.evaluate(t)
    ratio = np.linalg.norm(T - np.outer(T @ d, d), axis=1) / np.linalg.norm(T, axis=1)
    cand = np.nonzero((ratio <= np.roll(ratio, 1)) & (ratio <= np.roll(ratio, -1)))[0]
    for k in cand[np.argsort(ratio[cand])][:8]:
        lo, hi = (k - 1) / n, (k + 1) / n
        for _ in range(60):
            m1 = lo + (hi - lo) / 3
            m2 = hi - (hi - lo) / 3
            r1 = _proj_ratio(c, d, m1)
            r2 = _proj_ratio(c, d, m2)
            if r1 < r2:
                hi = m2
            else:
                lo = m1
        if _proj_ratio(c, d, 0.5 * (lo + hi)) < ANGLE_TOL:
            raise NonRegularDirection("non-regular direction: the projected tangent vanishes (cusp)")


def _proj_ratio(c: ParamCurve, d: np.ndarray, t: float) -> float:
    _, T = c.evaluate(np.array([t]))
    T = T[0]
    return float(np.linalg.norm(T - (T @ d) * d) / np.linalg.norm(T))


def _refine(ca, cb, ta, tb, e1, e2):
    for _ in range(30):
        Pa, Ta = ca.evaluate(np.array([ta]))
        Pb, Tb = cb.evaluate(np.array([tb]))
        F = np.array([(Pa[0] - Pb[0]) @ e1, (Pa[0] - Pb[0]) @ e2])
        Jm = np.array([[Ta[0] @ e1, -(Tb[0] @ e1)], [Ta[0] @ e2, -(Tb[0] @ e2)]])
        try:
            step = np.linalg.solve(Jm, F)
        except np.linalg.LinAlgError:
            break
        ta -= step[0]
        tb -= step[1]
        if np.abs(step).max() < 1e-15:
            break
    return ta % 1.0, tb % 1.0


def find_crossings(link: ParamLink, direction, resolution: int | None = None) -> list[Crossing]:
    e1, e2, d = frame(direction)
    polys = []
    for ci, c in enumerate(link.curves):
        n = resolution or _resolution(c)
        _check_cusps(c, d, n)
        t = np.arange(n) / n
        P = c.position(t)
        polys.append((ci, c, t, P))
    centre, radius = link.bounding_radius()
    segs_a, segs_b, comp, tpar, npts = [], [], [], [], []
    for ci, c, t, P in polys:
        Q = np.roll(P, -1, axis=0)
        segs_a.append(P)
        segs_b.append(Q)
        comp.append(np.full(len(P), ci))
        tpar.append(t)
        npts.append(np.full(len(P), len(P)))
    A = np.concatenate(segs_a)
    B = np.concatenate(segs_b)
    C = np.concatenate(comp)
    Tp = np.concatenate(tpar)
    Np = np.concatenate(npts)
    idx = np.concatenate([np.arange(len(p[2])) for p in polys])
    A2 = np.stack([A @ e1, A @ e2], axis=1)
    R2 = np.stack([(B - A) @ e1, (B - A) @ e2], axis=1)
    M = len(A)
    hits = []
    chunk = max(1, 4_000_000 // max(M, 1))
    for s in range(0, M, chunk):
        i = np.arange(s, min(M, s + chunk))[:, None]
        j = np.arange(M)[None, :]
        den = R2[i, 0] * R2[j, 1] - R2[i, 1] * R2[j, 0]
        w0 = A2[j, 0] - A2[i, 0]
        w1 = A2[j, 1] - A2[i, 1]
        with np.errstate(divide="ignore", invalid="ignore"):
            u = (w0 * R2[j, 1] - w1 * R2[j, 0]) / den
            v = (w0 * R2[i, 1] - w1 * R2[i, 0]) / den
        ok = (j > i) & (u >= 0) & (u < 1) & (v >= 0) & (v < 1) & (den != 0)
        same = C[i] == C[j]
        gap = np.abs(idx[i] - idx[j])
        adjacent = same & ((gap <= 1) | (gap == Np[i] - 1))
        ok &= ~adjacent
        ii, jj = np.nonzero(ok)
        for a, b in zip(ii + s, jj):
            hits.append((a, b, u[a - s, b], v[a - s, b]))
    out: list[Crossing] = []
    for a, b, u, v in hits:
        ca, cb = link.curves[C[a]], link.curves[C[b]]
        na, nb = Np[a], Np[b]
        ta, tb = _refine(ca, cb, Tp[a] + u / na, Tp[b] + v / nb, e1, e2)
        Pa, Ta = ca.evaluate(np.array([ta]))
        Pb, Tb = cb.evaluate(np.array([tb]))
        Pa, Ta, Pb, Tb = Pa[0], Ta[0], Pb[0], Tb[0]
        ha, hb = Pa @ d, Pb @ d
        if abs(ha - hb) < HEIGHT_TOL * 2 * radius:
            raise NonRegularDirection("non-regular direction: double point with no height gap")
        ta2 = np.array([Ta @ e1, Ta @ e2])
        tb2 = np.array([Tb @ e1, Tb @ e2])
        sin_ang = abs(ta2[0] * tb2[1] - ta2[1] * tb2[0]) / (np.linalg.norm(ta2) * np.linalg.norm(tb2))
        if sin_ang < ANGLE_TOL:
            raise NonRegularDirection("non-regular direction: tangential double point")
        if ha > hb:
            over, under, To, Tu = (int(C[a]), ta), (int(C[b]), tb), Ta, Tb
        else:
            over, under, To, Tu = (int(C[b]), tb), (int(C[a]), ta), Tb, Ta
        sign = 1 if np.cross(To, Tu) @ d > 0 else -1
        out.append(Crossing(over, under, sign, (float(Pa @ e1), float(Pa @ e2))))
    pts = np.array([c.point for c in out]).reshape(-1, 2)
    if len(pts) > 1:
        dist = np.linalg.norm(pts[:, None] - pts[None], axis=-1)
        dist[np.diag_indices(len(pts))] = np.inf
        if dist.min() < HEIGHT_TOL * 2 * radius:
            raise NonRegularDirection("non-regular direction: coincident double points")
    return out


def project(link: ParamLink, direction, resolution: int | None = None) -> LinkCode:
    """Gauss code of the projection of ``link`` onto the plane normal to
    ``direction``; 'over' means larger height along ``direction``."""
    crossings = find_crossings(link, direction, resolution)
    visits: list[list[tuple[float, Visit]]] = [[] for _ in link.curves]
    for cid, c in enumerate(crossings, start=1):
        visits[c.over[0]].append((c.over[1], Visit(cid, "O", c.sign)))
        visits[c.under[0]].append((c.under[1], Visit(cid, "U", c.sign)))
    comps = []
    for vs in visits:
        vs.sort(key=lambda x: x[0])
        comps.append(tuple(v for _, v in vs))
    return LinkCode(tuple(comps))


def random_directions(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.normal(size=(n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)
