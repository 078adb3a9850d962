"""JSON curve files.

``{"name": ..., "curves": [{"type": "fourier", "coeffs": [[ax,bx,ay,by,az,bz], ...],
"center": [x, y, z]} | {"type": "polyline", "points": [[x,y,z], ...], "round": r}]}``

``center`` is optional.  A link argument of the form ``builtin:NAME`` (or a
bare builtin name that is not an existing file) loads a named model.
"""

from __future__ import annotations

import json
from pathlib import Path

from .geometry import CurveError, FourierCurve, ParamLink, PolylineCurve
from .library import builtin_link

__all__ = ["link_from_dict", "load_link", "save_link"]


def link_from_dict(data: dict) -> ParamLink:
    curves = []
    for i, c in enumerate(data.get("curves", [])):
        kind = c.get("type")
        if kind == "fourier":
            curves.append(FourierCurve(c["coeffs"], c.get("center", (0.0, 0.0, 0.0))))
        elif kind == "polyline":
            curves.append(PolylineCurve(c["points"], c.get("round", 0.0)))
        else:
            raise CurveError(f"curve {i + 1}: unknown type {kind!r}")
    return ParamLink(curves, data.get("name", ""))


def load_link(spec: str | Path) -> ParamLink:
    s = str(spec)
    if s.startswith("builtin:"):
        return builtin_link(s[len("builtin:"):])
    p = Path(s)
    if not p.exists():
        try:
            return builtin_link(s)
        except KeyError:
            raise FileNotFoundError(f"no curve file or builtin link named {s!r}") from None
    return link_from_dict(json.loads(p.read_text(encoding="utf-8")))


def save_link(link: ParamLink, path: str | Path) -> None:
    Path(path).write_text(json.dumps(link.to_dict(), indent=2), encoding="utf-8")
