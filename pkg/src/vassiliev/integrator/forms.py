"""The configuration-space integrand of a numbered diagram.

Coordinates are indexed by half-edges: a leg half-edge h carries the
parameter of its univalent vertex on the support circle, and the half-edges
(a, b, c) of a trivalent vertex, in its cyclic order, carry the coordinates
(x1, x2, x3) of its point.  The configuration space is oriented by listing
the half-edges edge by edge, source first, in the order of ``base.pairs``.

Each edge contributes the pull-back of the unit-area sphere form through the
direction of (target point - source point):
``v . (J_a x J_b) / (4 pi |v|^3) dy_a ^ dy_b`` with ``J = dv/dy``.  The
wedge product over edges is expanded over bitmasks of used coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..diagrams import NumberedDiagram
from ..curves.geometry import ParamLink

__all__ = ["DiagramPlan", "ConfigPoint", "integrand", "CONVENTIONS"]

FOUR_PI = 4.0 * np.pi

CONVENTIONS = {
    "edge_form": "v.(J_a x J_b)/(4 pi |v|^3), v = target point - source point",
    "coordinates": "leg half-edge -> support parameter; trivalent (a,b,c) in cyclic order -> (x1,x2,x3)",
    "orientation": "half-edges listed edge by edge, source first",
    "kernel_check": "single chord between two components integrates to lk",
}


def _perm_parity(seq: Sequence[int]) -> int:
    seq = list(seq)
    sign = 1
    seen = [False] * len(seq)
    order = sorted(range(len(seq)), key=lambda i: seq[i])
    for i in range(len(seq)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass(frozen=True)
class ConfigPoint:
    """Leg parameters keyed by leg half-edge, and trivalent points (nT, 3)."""

    legs: dict
    points: np.ndarray = field(default_factory=lambda: np.zeros((0, 3)))


class DiagramPlan:
    """Precomputed index data for evaluating the integrand in batches."""

    def __init__(self, g: NumberedDiagram, n_components: int | None = None):
        d = g.base
        if d.support.kind != "circles":
            raise ValueError("configuration integrals need a circle support")
        if n_components is not None and d.support.k != n_components:
            raise ValueError(
                f"diagram lives on {d.support.k} circles but the link has {n_components} components"
            )
        self.g = g
        self.diagram = d
        self.H = d.n_half_edges
        self.leg_comp = {h: j for h, (j, _) in d.leg_position.items()}
        self.legs_by_comp = [list(s) for s in d.legs]
        self.n_tri = d.n_trivalent
        # coordinate -> (kind, index, axis)
        self.coord_owner = {}
        for h, j in self.leg_comp.items():
            self.coord_owner[h] = ("leg", h, 0)
        for v, t in enumerate(d.triples):
            for k, h in enumerate(t):
                self.coord_owner[h] = ("tri", v, k)
        self.edges = []
        for src, tgt in g.oriented_edges():
            ends = []
            for h, s in ((src, -1.0), (tgt, 1.0)):
                v = d.vertex_of[h]
                if v < 0:
                    ends.append(("leg", h, s, [h]))
                else:
                    ends.append(("tri", v, s, list(d.triples[v])))
            self.edges.append(ends)
        order = [h for e in g.oriented_edges() for h in e]
        self.orientation_sign = _perm_parity(order)
        self.full_mask = (1 << self.H) - 1

    def evaluate(
        self, link: ParamLink, legs: dict, points: np.ndarray, oriented: bool = True
    ) -> tuple[np.ndarray, np.ndarray]:
        """Integrand for a batch; returns (values, rejected mask).

        ``legs[h]`` is an array of parameters, ``points`` has shape (m, nT, 3).
        With ``oriented=False`` the product of edge forms is returned in the
        fixed half-edge coordinate order, without the configuration-space
        orientation sign.
        """
        m = points.shape[0] if self.n_tri else len(next(iter(legs.values())))
        pos, tan = {}, {}
        for h, j in self.leg_comp.items():
            P, T = link.curves[j].evaluate(legs[h])
            pos[("leg", h)] = P
            tan[h] = T
        for v in range(self.n_tri):
            pos[("tri", v)] = points[:, v, :]
        eye = np.eye(3)
        rejected = np.zeros(m, dtype=bool)
        states = {0: np.ones(m)}
        for ends in self.edges:
            (k0, i0, s0, c0), (k1, i1, s1, c1) = ends
            vec = pos[(k1, i1)] - pos[(k0, i0)]
            r = np.linalg.norm(vec, axis=1)
            bad = r == 0
            rejected |= bad
            inv = np.where(bad, 0.0, 1.0 / (FOUR_PI * np.where(bad, 1.0, r) ** 3))
            cols = []
            for kind, idx, s, coords in ends:
                if kind == "leg":
                    cols.append((coords[0], s * tan[idx]))
                else:
                    for k, h in enumerate(coords):
                        cols.append((h, np.broadcast_to(s * eye[k], (m, 3))))
            terms = []
            for a in range(len(cols)):
                for b in range(a + 1, len(cols)):
                    ha, Ja = cols[a]
                    hb, Jb = cols[b]
                    coef = np.einsum("ij,ij->i", vec, np.cross(Ja, Jb)) * inv
                    lo, hi = (ha, hb) if ha < hb else (hb, ha)
                    if ha > hb:
                        coef = -coef
                    terms.append((lo, hi, coef))
            new: dict[int, np.ndarray] = {}
            for mask, val in states.items():
                for lo, hi, coef in terms:
                    bits = (1 << lo) | (1 << hi)
                    if mask & bits:
                        continue
                    flips = bin(mask >> (lo + 1)).count("1") + bin(mask >> (hi + 1)).count("1")
                    contrib = val * coef
                    if flips % 2:
                        contrib = -contrib
                    nm = mask | bits
                    if nm in new:
                        new[nm] = new[nm] + contrib
                    else:
                        new[nm] = contrib
            states = new
        out = states.get(self.full_mask, np.zeros(m))
        if oriented:
            out = out * self.orientation_sign
        out = np.where(rejected, 0.0, out)
        return out, rejected


def integrand(g: NumberedDiagram, link: ParamLink, c: ConfigPoint, oriented: bool = True) -> float:
    """Integrand of g at a single configuration."""
    plan = DiagramPlan(g, len(link))
    legs = {h: np.array([float(t)]) for h, t in c.legs.items()}
    pts = np.asarray(c.points, dtype=float).reshape(1, plan.n_tri, 3)
    val, rej = plan.evaluate(link, legs, pts, oriented)
    if rej[0]:
        raise ValueError("coincident points: configuration rejected")
    return float(val[0])
