"""Closed parametrized space curves on the parameter circle t in [0, 1)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "CurveError",
    "GeomTolerance",
    "ParamCurve",
    "FourierCurve",
    "PolylineCurve",
    "ParamLink",
    "evaluate",
]

TWO_PI = 2.0 * np.pi


class CurveError(ValueError):
    """Invalid curve data or a violated geometric precondition."""


@dataclass(frozen=True)
class GeomTolerance:
    abs_tol: float = 1e-6
    rel_tol: float = 1e-9
    max_subdivisions: int = 14
    max_cells: int = 400_000
    initial_grid: int = 8
    gl_order: int = 8
    check_grid: int = 2048

    def __post_init__(self) -> None:
        for name in ("abs_tol", "max_subdivisions", "max_cells", "initial_grid", "gl_order", "check_grid"):
            if getattr(self, name) <= 0:
                raise CurveError(f"tolerance field {name} must be positive")
        if self.rel_tol < 0:
            raise CurveError("rel_tol must be nonnegative")


class ParamCurve:
    """Base class: subclasses implement ``_eval(t) -> (position, derivative)``."""

    def evaluate(self, t) -> tuple[np.ndarray, np.ndarray]:
        t = np.mod(np.asarray(t, dtype=float), 1.0)
        return self._eval(t)

    def position(self, t) -> np.ndarray:
        return self.evaluate(t)[0]

    def tangent(self, t) -> np.ndarray:
        return self.evaluate(t)[1]

    def _eval(self, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def second_derivative(self, t) -> np.ndarray:
        raise NotImplementedError

    def sample(self, n: int) -> np.ndarray:
        return self.position(np.arange(n) / n)

    def check_regular(self, grid: int = 2048, lower: float = 1e-9) -> float:
        """Minimum |tangent| on a grid, relative to the mean; raises if tiny."""
        _, d = self.evaluate(np.arange(grid) / grid)
        speed = np.linalg.norm(d, axis=-1)
        mean = speed.mean()
        ratio = float(speed.min() / mean) if mean > 0 else 0.0
        if not ratio > lower:
            raise CurveError(f"curve is not regular: min |K'| / mean |K'| = {ratio:.3g}")
        return ratio

    def transformed(self, rotation=None, shift=None) -> "ParamCurve":
        raise NotImplementedError

    def reparametrized(self, c: float) -> "ParamCurve":
        return _Shifted(self, c)

    def reversed(self) -> "ParamCurve":
        return _Reversed(self)

    def to_dict(self) -> dict:
        raise NotImplementedError


class FourierCurve(ParamCurve):
    """K(t) = center + sum_h a_h cos(2 pi h t) + b_h sin(2 pi h t).

    ``coeffs[h-1] = [ax, bx, ay, by, az, bz]`` for harmonic h.
    """

    def __init__(self, coeffs, center=(0.0, 0.0, 0.0), check: bool = True):
        c = np.asarray(coeffs, dtype=float)
        if c.ndim != 2 or c.shape[1] != 6 or c.shape[0] < 1:
            raise CurveError("fourier coefficients must be rows [ax,bx,ay,by,az,bz]")
        self.coeffs = c
        self.center = np.asarray(center, dtype=float).reshape(3)
        self.a = c[:, 0::2].copy()  # (H, 3) cosine parts
        self.b = c[:, 1::2].copy()  # (H, 3) sine parts
        self.h = np.arange(1, c.shape[0] + 1, dtype=float)
        if check:
            self.check_regular()

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0]

    def _eval(self, t):
        ang = TWO_PI * t[..., None] * self.h
        cs, sn = np.cos(ang), np.sin(ang)
        pos = self.center + cs @ self.a + sn @ self.b
        w = TWO_PI * self.h
        der = (-sn * w) @ self.a + (cs * w) @ self.b
        return pos, der

    def second_derivative(self, t):
        t = np.mod(np.asarray(t, dtype=float), 1.0)
        ang = TWO_PI * t[..., None] * self.h
        w2 = (TWO_PI * self.h) ** 2
        return (-np.cos(ang) * w2) @ self.a + (-np.sin(ang) * w2) @ self.b

    @classmethod
    def from_function(cls, f, harmonics: int, samples: int | None = None) -> "FourierCurve":
        """Fourier form of a closed curve given by samples of f(t)."""
        m = samples or 4 * (harmonics + 1)
        t = np.arange(m) / m
        P = np.asarray(f(t), dtype=float)
        F = np.fft.rfft(P, axis=0) / m
        center = F[0].real
        rows = []
        for h in range(1, harmonics + 1):
            a = 2 * F[h].real
            b = -2 * F[h].imag
            rows.append([a[0], b[0], a[1], b[1], a[2], b[2]])
        rows = np.where(np.abs(rows) < 1e-13, 0.0, rows)
        return cls(rows, center)

    def transformed(self, rotation=None, shift=None) -> "FourierCurve":
        R = np.eye(3) if rotation is None else np.asarray(rotation, dtype=float)
        s = np.zeros(3) if shift is None else np.asarray(shift, dtype=float)
        a = self.a @ R.T
        b = self.b @ R.T
        rows = np.stack([a[:, 0], b[:, 0], a[:, 1], b[:, 1], a[:, 2], b[:, 2]], axis=1)
        return FourierCurve(rows, R @ self.center + s)

    def to_dict(self) -> dict:
        d = {"type": "fourier", "coeffs": self.coeffs.tolist()}
        if np.any(self.center):
            d["center"] = self.center.tolist()
        return d


class PolylineCurve(ParamCurve):
    """Closed polygon with corners replaced by circular arcs of radius ``round``.

    The parameter is normalized arc length.  With ``round = 0`` the polygon is
    used as is (the tangent is then piecewise constant).
    """

    def __init__(self, points, round: float = 0.0, check: bool = True):
        P = np.asarray(points, dtype=float)
        if P.ndim != 2 or P.shape[1] != 3:
            raise CurveError("polyline points must be [x, y, z] triples")
        if len(P) > 1 and np.allclose(P[0], P[-1]):
            P = P[:-1]
        if len(P) < 3:
            raise CurveError("polyline needs at least 3 vertices")
        edges = np.roll(P, -1, axis=0) - P
        if np.any(np.linalg.norm(edges, axis=1) == 0):
            raise CurveError("polyline has repeated consecutive vertices")
        crosses = np.linalg.norm(np.cross(edges, np.roll(edges, -1, axis=0)), axis=1)
        if not np.any(crosses > 1e-12 * np.linalg.norm(edges, axis=1).max() ** 2):
            raise CurveError("polyline vertices are all collinear")
        if round < 0:
            raise CurveError("corner radius must be nonnegative")
        self.points = P
        self.round = float(round)
        self._build()
        if check:
            self.check_regular()

    def _build(self) -> None:
        P = self.points
        n = len(P)
        pieces = []  # (kind, data, length)
        cut_in = np.zeros(n)
        arcs = []
        for i in range(n):
            prev, cur, nxt = P[i - 1], P[i], P[(i + 1) % n]
            u = cur - prev
            v = nxt - cur
            lu, lv = np.linalg.norm(u), np.linalg.norm(v)
            u, v = u / lu, v / lv
            cosang = np.clip(u @ v, -1.0, 1.0)
            theta = np.arccos(cosang)
            if self.round == 0 or theta < 1e-12:
                arcs.append(None)
                continue
            if theta > np.pi - 1e-9:
                raise CurveError("polyline reverses direction at a vertex")
            c = self.round * np.tan(theta / 2)
            c = min(c, 0.5 * lu, 0.5 * lv)
            r = c / np.tan(theta / 2)
            nrm = v - cosang * u
            nrm /= np.linalg.norm(nrm)
            start = cur - c * u
            centre = start + r * nrm
            arcs.append((centre, r, u, nrm, theta, c))
            cut_in[i] = c
        for i in range(n):
            a = P[i]
            b = P[(i + 1) % n]
            d = b - a
            L = np.linalg.norm(d)
            u = d / L
            c0 = cut_in[i]
            c1 = cut_in[(i + 1) % n]
            pieces.append(("line", (a + c0 * u, u), L - c0 - c1))
            arc = arcs[(i + 1) % n]
            if arc is not None:
                centre, r, uu, nrm, theta, _ = arc
                pieces.append(("arc", (centre, r, uu, nrm), r * theta))
        self._pieces = [p for p in pieces if p[2] > 0]
        lengths = np.array([p[2] for p in self._pieces])
        self.length = float(lengths.sum())
        self._starts = np.concatenate([[0.0], np.cumsum(lengths)[:-1]])

    def _eval(self, t):
        s = t * self.length
        idx = np.clip(np.searchsorted(self._starts, s, side="right") - 1, 0, len(self._pieces) - 1)
        pos = np.empty(t.shape + (3,))
        der = np.empty(t.shape + (3,))
        for k, (kind, data, _) in enumerate(self._pieces):
            m = idx == k
            if not np.any(m):
                continue
            ds = (s[m] - self._starts[k])[..., None]
            if kind == "line":
                a, u = data
                pos[m] = a + ds * u
                der[m] = self.length * u
            else:
                centre, r, u, nrm = data
                phi = ds / r
                pos[m] = centre + r * (-nrm * np.cos(phi) + u * np.sin(phi))
                der[m] = self.length * (u * np.cos(phi) + nrm * np.sin(phi))
        return pos, der

    def second_derivative(self, t):
        t = np.mod(np.asarray(t, dtype=float), 1.0)
        s = t * self.length
        idx = np.clip(np.searchsorted(self._starts, s, side="right") - 1, 0, len(self._pieces) - 1)
        out = np.zeros(t.shape + (3,))
        for k, (kind, data, _) in enumerate(self._pieces):
            m = idx == k
            if kind != "arc" or not np.any(m):
                continue
            centre, r, u, nrm = data
            phi = ((s[m] - self._starts[k]) / r)[..., None]
            out[m] = self.length**2 * (nrm * np.cos(phi) - u * np.sin(phi)) / r
        return out

    def transformed(self, rotation=None, shift=None) -> "PolylineCurve":
        R = np.eye(3) if rotation is None else np.asarray(rotation, dtype=float)
        s = np.zeros(3) if shift is None else np.asarray(shift, dtype=float)
        return PolylineCurve(self.points @ R.T + s, self.round)

    def to_dict(self) -> dict:
        return {"type": "polyline", "points": self.points.tolist(), "round": self.round}


class _Shifted(ParamCurve):
    def __init__(self, base: ParamCurve, c: float):
        self.base, self.c = base, float(c)

    def _eval(self, t):
        return self.base.evaluate(t + self.c)

    def second_derivative(self, t):
        return self.base.second_derivative(np.asarray(t) + self.c)

    def transformed(self, rotation=None, shift=None):
        return _Shifted(self.base.transformed(rotation, shift), self.c)

    def to_dict(self):
        return self.base.to_dict()


class _Reversed(ParamCurve):
    def __init__(self, base: ParamCurve):
        self.base = base

    def _eval(self, t):
        p, d = self.base.evaluate(-t)
        return p, -d

    def second_derivative(self, t):
        return self.base.second_derivative(-np.asarray(t))

    def transformed(self, rotation=None, shift=None):
        return _Reversed(self.base.transformed(rotation, shift))


def evaluate(c: ParamCurve, t) -> tuple[np.ndarray, np.ndarray]:
    return c.evaluate(t)


@dataclass
class ParamLink:
    """Ordered components of a link with a checked clearance."""

    curves: list
    name: str = ""
    delta: float = field(default=0.0)

    def __post_init__(self) -> None:
        self.curves = list(self.curves)
        if not self.curves:
            raise CurveError("a link needs at least one component")
        if self.delta == 0.0:
            self.delta = self.clearance(check=True)

    def __len__(self) -> int:
        return len(self.curves)

    def __getitem__(self, i: int) -> ParamCurve:
        return self.curves[i]

    def bounding_radius(self, grid: int = 512) -> tuple[np.ndarray, float]:
        pts = np.concatenate([c.sample(grid) for c in self.curves])
        centre = 0.5 * (pts.max(axis=0) + pts.min(axis=0))
        return centre, float(np.linalg.norm(pts - centre, axis=1).max())

    def clearance(self, grid: int = 512, check: bool = False) -> float:
        """Smallest sampled distance between components (and within each,
        away from the parameter diagonal)."""
        samples = [c.sample(grid) for c in self.curves]
        best = np.inf
        for i in range(len(samples)):
            for j in range(i + 1, len(samples)):
                d = np.linalg.norm(samples[i][:, None] - samples[j][None], axis=-1)
                best = min(best, float(d.min()))
        for i, s in enumerate(samples):
            step = np.linalg.norm(np.diff(s, axis=0), axis=1).max()
            d = np.linalg.norm(s[:, None] - s[None], axis=-1)
            k = np.arange(grid)
            gap = np.abs(k[:, None] - k[None])
            gap = np.minimum(gap, grid - gap)
            arc = gap * step
            mask = gap > grid // 8
            if np.any(mask):
                ratio = float((d[mask] / np.maximum(arc[mask], 1e-300)).min())
                if check and ratio < 1e-4:
                    raise CurveError(f"component {i + 1} is not embedded (near self-contact)")
                best = min(best, float(d[mask].min()))
        if check and not best > 0:
            raise CurveError("components intersect")
        return best

    def transformed(self, rotation=None, shift=None) -> "ParamLink":
        return ParamLink([c.transformed(rotation, shift) for c in self.curves], self.name)

    def to_dict(self) -> dict:
        return {"name": self.name, "curves": [c.to_dict() for c in self.curves]}
