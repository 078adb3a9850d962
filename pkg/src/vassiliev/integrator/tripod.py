"""Variance-reduced estimator for diagrams with one trivalent vertex.

For a tripod the leg integrals can be carried out in closed form on an
inscribed polygon: each leg contributes the Biot-Savart field of the
segments it may occupy, and the ordered sum over segment triples is a
prefix/suffix scan.  Only the position of the trivalent point is sampled,
from a mixture of a heavy-tailed density and a tube around the polygon.
"""

from __future__ import annotations

import math

import numpy as np

from ..diagrams import NumberedDiagram
from ..curves.geometry import ParamLink
from .forms import DiagramPlan, _perm_parity
from .mc import DEFAULT_CHUNK, MCEstimate, run_chunks, stream_id
from .sampling import cauchy_density, sample_cauchy

__all__ = ["segment_fields", "tripod_sign", "TripodIntegrator", "is_tripod"]

TRIPOD_CHUNK = 512


def segment_fields(A: np.ndarray, B: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Field of each unit-current segment A->B at the points x; shape (m, s, 3)."""
    d = B - A
    ell = np.linalg.norm(d, axis=1)
    u = d / ell[:, None]
    rA = x[:, None, :] - A[None]
    rB = x[:, None, :] - B[None]
    c = np.cross(u[None], rA)
    rho2 = np.einsum("msi,msi->ms", c, c)
    nA = np.linalg.norm(rA, axis=2)
    nB = np.linalg.norm(rB, axis=2)
    f = (np.einsum("si,msi->ms", u, rA) / nA - np.einsum("si,msi->ms", u, rB) / nB) / (4 * np.pi * rho2)
    return c * f[..., None]


def _ordered_triple_sum(W: np.ndarray) -> np.ndarray:
    """sum over a<b<c of det(W_a, W_b, W_c) for W of shape (m, s, 3)."""
    P = np.cumsum(W, axis=1) - W
    S = W.sum(axis=1, keepdims=True) - np.cumsum(W, axis=1)
    return np.einsum("msi,msi->m", P, np.cross(W, S))


def is_tripod(g: NumberedDiagram) -> bool:
    d = g.base
    return d.n_trivalent == 1 and d.n_univalent == 3


def tripod_sign(g: NumberedDiagram, link: ParamLink, trials: int = 8, seed: int = 0) -> int:
    """The sign s with integrand = s * det(w_l0, w_l1, w_l2), where l_k is the
    leg joined to the k-th half-edge of the trivalent vertex."""
    plan = DiagramPlan(g, len(link))
    d = g.base
    rng = np.random.default_rng(seed)
    legs_h = [d.partner[h] for h in d.triples[0]]
    legs = {h: rng.random(trials) for h in legs_h}
    centre, R = link.bounding_radius()
    x = centre + R * rng.normal(size=(trials, 3))
    val, _ = plan.evaluate(link, legs, x[:, None, :])
    ws = []
    for h in legs_h:
        P, T = link.curves[plan.leg_comp[h]].evaluate(legs[h])
        r = x - P
        ws.append(np.cross(T, r) / (4 * np.pi * np.linalg.norm(r, axis=1)[:, None] ** 3))
    det = np.einsum("ij,ij->i", ws[0], np.cross(ws[1], ws[2]))
    k = int(np.argmax(np.abs(det)))
    ratio = val / np.where(det == 0, 1.0, det)
    s = int(round(ratio[k]))
    if s not in (1, -1) or not np.allclose(ratio[np.abs(det) > 1e-3 * abs(det[k])], s, rtol=1e-8):
        raise AssertionError("tripod integrand is not a signed determinant")
    return s


class TripodIntegrator:
    """Integral of a tripod over a link, sampling only the trivalent point."""

    def __init__(self, g: NumberedDiagram, link: ParamLink, segments: int = 384, tube_fraction: float = 0.5):
        if not is_tripod(g):
            raise ValueError("not a tripod diagram")
        self.g = g
        self.link = link
        d = g.base
        self.sign = tripod_sign(g, link)
        legs_h = [d.partner[h] for h in d.triples[0]]
        comps = [d.leg_position[h][0] for h in legs_h]
        t = np.arange(segments) / segments
        self.polys = [c.position(t) for c in link.curves]
        self.mode = "zero"
        if len(set(comps)) == 1:
            j = comps[0]
            order = [d.leg_position[h][1] for h in legs_h]
            self.mode = "same"
            self.comp = j
            self.factor = 3 * self.sign * _perm_parity(order)
        elif len(set(comps)) == 3:
            self.mode = "distinct"
            self.comps = comps
            self.factor = self.sign
        self.centre, self.R = link.bounding_radius()
        A = np.concatenate(self.polys)
        B = np.concatenate([np.roll(p, -1, axis=0) for p in self.polys])
        self.A, self.B = A, B
        seg = B - A
        self.seg_len = np.linalg.norm(seg, axis=1)
        self.seg_dir = seg / self.seg_len[:, None]
        self.L_tot = float(self.seg_len.sum())
        self.rho0 = 0.1 * self.R
        self.lam = tube_fraction

    def _fields(self, poly: np.ndarray, x: np.ndarray) -> np.ndarray:
        return segment_fields(poly, np.roll(poly, -1, axis=0), x)

    def value(self, x: np.ndarray) -> np.ndarray:
        """Leg-integrated integrand at trivalent points x, shape (m,)."""
        if self.mode == "zero":
            return np.zeros(len(x))
        if self.mode == "same":
            return self.factor * _ordered_triple_sum(self._fields(self.polys[self.comp], x))
        W = [self._fields(self.polys[j], x).sum(axis=1) for j in self.comps]
        return self.factor * np.einsum("mi,mi->m", W[0], np.cross(W[1], W[2]))

    def _tube_density(self, x: np.ndarray) -> np.ndarray:
        r = x[:, None, :] - self.A[None]
        p = np.einsum("msi,si->ms", r, self.seg_dir)
        perp = r - p[..., None] * self.seg_dir[None]
        rho = np.linalg.norm(perp, axis=2)
        inside = (p >= 0) & (p <= self.seg_len[None]) & (rho < self.rho0)
        dens = np.where(inside, 1.0 / (self.L_tot * 2 * np.pi * self.rho0 * np.where(rho > 0, rho, 1.0)), 0.0)
        return dens.sum(axis=1)

    def _sample_tube(self, rng: np.random.Generator, size: int) -> np.ndarray:
        s = rng.choice(len(self.A), size=size, p=self.seg_len / self.L_tot)
        base = self.A[s] + rng.random(size)[:, None] * (self.B[s] - self.A[s])
        u = self.seg_dir[s]
        helper = np.where(np.abs(u[:, :1]) < 0.9, np.array([[1.0, 0, 0]]), np.array([[0, 1.0, 0]]))
        e1 = np.cross(u, helper)
        e1 /= np.linalg.norm(e1, axis=1, keepdims=True)
        e2 = np.cross(u, e1)
        rho = self.rho0 * rng.random(size)
        phi = 2 * np.pi * rng.random(size)
        return base + rho[:, None] * (np.cos(phi)[:, None] * e1 + np.sin(phi)[:, None] * e2)

    def sampler(self, rng: np.random.Generator, size: int):
        if self.mode == "zero":
            return np.zeros(size), 0
        pick = rng.random(size) < self.lam
        x = np.where(
            pick[:, None],
            sample_cauchy(rng, size, self.centre, self.R),
            self._sample_tube(rng, size),
        )
        q = self.lam * cauchy_density(x, self.centre, self.R) + (1 - self.lam) * self._tube_density(x)
        return self.value(x) / q, 0

    def integrate(self, N: int, seed: int, threads: int = 1, stream: int | None = None) -> MCEstimate:
        key = self.g.base.to_text()
        if stream is None:
            stream = stream_id("tripod:" + key)
        if self.mode == "zero":
            return MCEstimate(0.0, 0.0, N, seed, key)
        mean, se, rej = run_chunks(self.sampler, N, seed, stream, TRIPOD_CHUNK, threads)
        est = MCEstimate(mean, se, N, seed, key, rejected=rej)
        est.conventions["tripod"] = "legs integrated on an inscribed polygon; trivalent point sampled"
        return est
