"""Named link models.

All angles below are a = 2 pi t.

* ``unknot``: unit circle in the xy-plane.
* ``hopf+`` / ``hopf-``: unit circle in the xy-plane and the unit circle
  in the xz-plane centred at (1, 0, 0), oriented so that lk = +1 / -1.
* ``whitehead``: the lemniscate (2 cos a, sin 2a, 0.3 sin a) and the loop
  (1.2 cos a, 0.5 sin a, 0.8 sin 2a); seen from above this is the reduced
  alternating 5-crossing diagram, lk = 0.
* ``torus(2,2m)``: two (1, m) curves on the torus of radii 2 and 1,
  phase-shifted by half a meridian, the second one run backwards; lk = m.
* ``trefoil``: (sin a + 2 sin 2a, cos a - 2 cos 2a, -sin 3a); ``trefoil-``
  is its mirror image (z negated).
* ``figure8``: ((2 + cos 2a) cos 3a, (2 + cos 2a) sin 3a, sin 4a).
* ``wiggly-unknot``: a non-planar unknot, (cos a, sin a, 0.4 sin 2a + 0.2 cos 3a).
"""

from __future__ import annotations

import re

import numpy as np

from .geometry import CurveError, FourierCurve, ParamLink

__all__ = ["builtin_links", "builtin_link", "BUILTIN_NAMES"]


def _row(h, **kw) -> tuple[int, list[float]]:
    keys = ["ax", "bx", "ay", "by", "az", "bz"]
    return h, [kw.get(k, 0.0) for k in keys]


def _fourier(rows, center=(0, 0, 0)) -> FourierCurve:
    H = max(h for h, _ in rows)
    c = np.zeros((H, 6))
    for h, r in rows:
        c[h - 1] += r
    return FourierCurve(c, center)


def _circle_xy() -> FourierCurve:
    return _fourier([_row(1, ax=1, by=1)])


def _torus_link(m: int) -> ParamLink:
    R, r = 2.0, 1.0
    curves = []
    for comp in range(2):
        def f(t, comp=comp):
            t = t if comp == 0 else -t
            th = 2 * np.pi * t
            ps = 2 * np.pi * m * t + np.pi * comp
            return np.stack(
                [(R + r * np.cos(ps)) * np.cos(th), (R + r * np.cos(ps)) * np.sin(th), r * np.sin(ps)],
                axis=-1,
            )
        curves.append(FourierCurve.from_function(f, m + 1))
    return ParamLink(curves, f"torus(2,{2 * m})")


def builtin_link(name: str) -> ParamLink:
    key = name.strip().lower()
    if key == "unknot":
        return ParamLink([_circle_xy()], "unknot")
    if key in ("hopf+", "hopf-"):
        a = _circle_xy()
        bz = -1.0 if key == "hopf+" else 1.0
        b = _fourier([_row(1, ax=1, bz=bz)], center=(1, 0, 0))
        return ParamLink([a, b], key)
    if key == "whitehead":
        a = _fourier([_row(1, ax=2, bz=0.3), _row(2, by=1)])
        b = _fourier([_row(1, ax=1.2, by=0.5), _row(2, bz=0.8)])
        return ParamLink([a, b], "whitehead")
    m = re.fullmatch(r"torus\(2,\s*(\d+)\)", key)
    if m:
        two_m = int(m.group(1))
        if two_m % 2 or two_m < 2:
            raise CurveError("torus(2,2m) needs an even second index >= 2")
        return _torus_link(two_m // 2)
    if key in ("trefoil", "trefoil-", "mirror-trefoil"):
        s = -1.0 if key != "trefoil" else 1.0
        k = _fourier([_row(1, bx=1, ay=1), _row(2, bx=2, ay=-2), _row(3, bz=-s)])
        return ParamLink([k], key)
    if key in ("figure8", "figure-eight"):
        k = _fourier(
            [_row(1, ax=0.5, by=0.5), _row(3, ax=2, by=2), _row(4, bz=1), _row(5, ax=0.5, by=0.5)]
        )
        return ParamLink([k], "figure8")
    if key == "wiggly-unknot":
        k = _fourier([_row(1, ax=1, by=1), _row(2, bz=0.4), _row(3, az=0.2)])
        return ParamLink([k], key)
    raise KeyError(f"unknown builtin link {name!r}")


BUILTIN_NAMES = (
    "unknot",
    "hopf+",
    "hopf-",
    "whitehead",
    "torus(2,4)",
    "trefoil",
    "trefoil-",
    "figure8",
    "wiggly-unknot",
)


def builtin_links() -> dict[str, ParamLink]:
    return {n: builtin_link(n) for n in BUILTIN_NAMES}
