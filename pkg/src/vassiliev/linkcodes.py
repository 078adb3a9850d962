"""Gauss and PD codes of oriented link diagrams.

Gauss text lists each component's crossing visits in order, components
separated by ``/``: ``O1+ U2+ / U1+ O2+`` is the positive Hopf link.  ``O``
and ``U`` mark over and under passages and carry the crossing sign, ``D<id>``
marks a double point of a singular diagram.  Components are numbered from 1.

A crossing is positive when (over tangent, under tangent, viewing direction
towards the eye) is a positively oriented frame.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .diagrams import JacobiDiagram, chord_diagram

__all__ = [
    "GaussCodeError",
    "Visit",
    "LinkCode",
    "CrossingChange",
    "parse_gauss",
    "format_gauss",
    "parse_pd",
    "parse_code",
    "read_link_file",
    "linking_number",
    "linking_number_over",
    "writhe",
    "apply_crossing_changes",
    "make_singular",
    "chord_diagram_of_singular",
    "rotate_component",
    "random_code",
]


class GaussCodeError(ValueError):
    """Malformed code text or an ill-formed crossing table."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


@dataclass(frozen=True)
class Visit:
    crossing: int
    kind: str  # "O", "U" or "D"
    sign: int = 0

    def __str__(self) -> str:
        if self.kind == "D":
            return f"D{self.crossing}"
        return f"{self.kind}{self.crossing}{'+' if self.sign > 0 else '-'}"


@dataclass(frozen=True)
class CrossingChange:
    crossing: int
    direction: str  # "pos_to_neg" or "neg_to_pos"

    def __post_init__(self) -> None:
        if self.direction not in ("pos_to_neg", "neg_to_pos"):
            raise ValueError(f"unknown crossing change direction {self.direction!r}")

    @classmethod
    def at(cls, code: "LinkCode", crossing: int) -> "CrossingChange":
        """The change that is applicable at a crossing of ``code``."""
        s = code.crossing_sign(crossing)
        return cls(crossing, "pos_to_neg" if s > 0 else "neg_to_pos")

    def inverse(self) -> "CrossingChange":
        return CrossingChange(
            self.crossing, "neg_to_pos" if self.direction == "pos_to_neg" else "pos_to_neg"
        )


@dataclass(frozen=True)
class LinkCode:
    components: tuple[tuple[Visit, ...], ...]

    def __post_init__(self) -> None:
        comps = tuple(tuple(c) for c in self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise GaussCodeError("a link code needs at least one component")
        seen: dict[int, list[Visit]] = {}
        for comp in comps:
            for v in comp:
                if v.kind not in ("O", "U", "D"):
                    raise GaussCodeError(f"unknown visit kind {v.kind!r}")
                if v.kind != "D" and v.sign not in (1, -1):
                    raise GaussCodeError(f"crossing {v.crossing} needs a sign")
                seen.setdefault(v.crossing, []).append(v)
        for cid, vs in seen.items():
            if len(vs) != 2:
                raise GaussCodeError(f"crossing id {cid} appears {len(vs)} times (expected 2)")
            kinds = sorted(v.kind for v in vs)
            if "D" in kinds:
                if kinds != ["D", "D"]:
                    raise GaussCodeError(f"id {cid} is used both as a double point and a crossing")
                continue
            if kinds == ["O", "O"]:
                raise GaussCodeError(f"crossing {cid}: over/over conflict")
            if kinds == ["U", "U"]:
                raise GaussCodeError(f"crossing {cid}: under/under conflict")
            if vs[0].sign != vs[1].sign:
                raise GaussCodeError(f"crossing {cid}: sign conflict between its two visits")

    # tables ---------------------------------------------------------------

    @property
    def n_components(self) -> int:
        return len(self.components)

    def _table(self) -> dict[int, dict]:
        tab: dict[int, dict] = {}
        for ci, comp in enumerate(self.components, start=1):
            for v in comp:
                e = tab.setdefault(v.crossing, {"sign": v.sign, "double": v.kind == "D"})
                e[v.kind if v.kind != "D" else ("D1" if "D1" not in e else "D2")] = ci
        return tab

    @property
    def crossing_ids(self) -> list[int]:
        return sorted(cid for cid, e in self._table().items() if not e["double"])

    @property
    def double_points(self) -> list[int]:
        return sorted(cid for cid, e in self._table().items() if e["double"])

    def crossings(self) -> list[tuple[int, int, int, int]]:
        """(id, sign, over component, under component) for ordinary crossings."""
        return [
            (cid, e["sign"], e["O"], e["U"])
            for cid, e in sorted(self._table().items())
            if not e["double"]
        ]

    def crossing_sign(self, cid: int) -> int:
        e = self._table().get(cid)
        if e is None or e["double"]:
            raise GaussCodeError(f"no ordinary crossing with id {cid}")
        return e["sign"]

    def components_of(self, cid: int) -> tuple[int, int]:
        e = self._table()[cid]
        if e["double"]:
            return e["D1"], e["D2"]
        return e["O"], e["U"]

    def __str__(self) -> str:
        return format_gauss(self)


# ---------------------------------------------------------------------------
# parsing and printing

_TOKEN = re.compile(r"\s+|,|/|([OUDoud])(\d+)([+-]?)")


def parse_gauss(text: str) -> LinkCode:
    """Parse Gauss text such as ``O1+ U2+ / U1+ O2+``."""
    comps: list[list[Visit]] = [[]]
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise GaussCodeError(f"unexpected character {text[pos]!r}", pos)
        tok = m.group(0)
        if tok == "/":
            comps.append([])
        elif m.group(1):
            kind = m.group(1).upper()
            cid = int(m.group(2))
            sgn = m.group(3)
            if kind == "D":
                if sgn:
                    raise GaussCodeError("double points carry no sign", pos)
                comps[-1].append(Visit(cid, "D", 0))
            else:
                if not sgn:
                    raise GaussCodeError(f"crossing token {tok!r} needs a sign", pos)
                comps[-1].append(Visit(cid, kind, 1 if sgn == "+" else -1))
        pos = m.end()
    return LinkCode(tuple(tuple(c) for c in comps))


def format_gauss(code: LinkCode) -> str:
    return " / ".join(" ".join(str(v) for v in comp) for comp in code.components)


def parse_pd(text: str) -> LinkCode:
    """Parse PD text ``X[i,j,k,l] ...``.

    Labels go counterclockwise starting at the incoming under strand.  The
    sign is +1 when the over strand runs from l to j.  Strand directions are
    propagated along each component starting from an under passage.
    """
    xs = []
    for m in re.finditer(r"X\s*\[\s*([^\]]*)\]", text):
        parts = [p for p in re.split(r"[,\s]+", m.group(1).strip()) if p]
        if len(parts) != 4:
            raise GaussCodeError("PD tuple needs four labels", m.start())
        try:
            xs.append(tuple(int(p) for p in parts))
        except ValueError:
            raise GaussCodeError("PD labels must be integers", m.start()) from None
    rest = re.sub(r"X\s*\[[^\]]*\]", "", text)
    rest = re.sub(r"(PD|\[|\]|,|\s)", "", rest)
    if rest:
        raise GaussCodeError(f"unexpected text in PD code: {rest[:10]!r}")
    if not xs:
        return LinkCode(((),))
    occ: dict[int, list[tuple[int, int]]] = {}
    for c, x in enumerate(xs):
        for s, lab in enumerate(x):
            occ.setdefault(lab, []).append((c, s))
    for lab, o in occ.items():
        if len(o) != 2:
            raise GaussCodeError(f"PD edge label {lab} appears {len(o)} times (expected 2)")

    def next_slot(c: int, s: int) -> tuple[int, int]:
        """Leave crossing c through the slot opposite s; return arrival slot."""
        out = (s + 2) % 4
        lab = xs[c][out]
        a, b = occ[lab]
        return b if a == (c, out) else a

    visited: set[tuple[int, int]] = set()
    comps: list[tuple[int, list[tuple[int, int]]]] = []

    def walk(start: tuple[int, int]) -> list[tuple[int, int]]:
        seq = []
        cur = start
        while cur not in visited:
            visited.add(cur)
            visited.add((cur[0], (cur[1] + 2) % 4))
            seq.append(cur)
            cur = next_slot(*cur)
        if cur != start:
            raise GaussCodeError("inconsistent PD orientation")
        return seq

    starts = [(c, 0) for c in range(len(xs))]
    for st in starts:
        if st not in visited:
            comps.append((0, walk(st)))
    # components passing only over: orient by increasing labels
    for c in range(len(xs)):
        if (c, 1) in visited:
            continue
        start = (c, 1) if xs[c][3] == xs[c][1] + 1 else (c, 3)
        comps.append((0, walk(start)))
    out = []
    for _, seq in comps:
        labels = [xs[c][s] for c, s in seq]
        r = labels.index(min(labels))
        seq = seq[r:] + seq[:r]
        visits = []
        for c, s in seq:
            if s == 2:
                raise GaussCodeError("PD under strand traversed against its orientation")
            x = xs[c]
            if s == 0:
                kind = "U"
                # over direction decided by the other visit; sign fixed below
            else:
                kind = "O"
            visits.append((c, kind, s))
        out.append((min(labels), visits))
    out.sort(key=lambda t: t[0])
    signs: dict[int, int] = {}
    for _, visits in out:
        for c, kind, s in visits:
            if kind == "O":
                signs[c] = 1 if s == 3 else -1
    return LinkCode(
        tuple(
            tuple(Visit(c + 1, kind, signs[c]) for c, kind, _ in visits)
            for _, visits in out
        )
    )


def parse_code(text: str) -> LinkCode:
    """Gauss or PD, decided by the presence of ``X[``."""
    if re.search(r"X\s*\[", text):
        return parse_pd(text)
    return parse_gauss(text)


def read_link_file(path: str | Path) -> list[LinkCode]:
    """One link per line, ``#`` starts a comment."""
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse_code(line))
    return out


# ---------------------------------------------------------------------------
# counts


def _check_component(code: LinkCode, i: int) -> None:
    if not 1 <= i <= code.n_components:
        raise GaussCodeError(f"component {i} out of range 1..{code.n_components}")


def _no_double_points(code: LinkCode, comps: Iterable[int]) -> None:
    comps = set(comps)
    for cid in code.double_points:
        if set(code.components_of(cid)) & comps:
            raise GaussCodeError(f"double point D{cid} lies on a component in use")


def linking_number(code: LinkCode, i: int, j: int) -> int | Fraction:
    """Half the signed count of crossings between components i and j.

    Realizable codes always give an integer; a virtual code with an odd
    number of such crossings gives a half-integer Fraction.
    """
    _check_component(code, i)
    _check_component(code, j)
    if i == j:
        raise GaussCodeError("i = j: use writhe for self-crossings")
    _no_double_points(code, (i, j))
    total = sum(s for _, s, o, u in code.crossings() if {o, u} == {i, j})
    return total // 2 if total % 2 == 0 else Fraction(total, 2)


def linking_number_over(code: LinkCode, i: int, j: int) -> int:
    """Signed count of crossings where component j passes over component i."""
    _check_component(code, i)
    _check_component(code, j)
    if i == j:
        raise GaussCodeError("i = j: use writhe for self-crossings")
    _no_double_points(code, (i, j))
    return sum(s for _, s, o, u in code.crossings() if o == j and u == i)


def writhe(code: LinkCode, i: int = 1) -> int:
    _check_component(code, i)
    _no_double_points(code, (i,))
    return sum(s for _, s, o, u in code.crossings() if o == u == i)


# ---------------------------------------------------------------------------
# operations


def apply_crossing_changes(code: LinkCode, changes: Sequence[CrossingChange]) -> LinkCode:
    """Swap over/under and flip the sign at each listed crossing."""
    ids = [c.crossing for c in changes]
    dup = [k for k, n in Counter(ids).items() if n > 1]
    if dup:
        raise GaussCodeError(f"duplicate crossing change ids {dup}")
    known = set(code.crossing_ids)
    for ch in changes:
        if ch.crossing not in known:
            raise GaussCodeError(f"unknown crossing id {ch.crossing}")
        s = code.crossing_sign(ch.crossing)
        want = 1 if ch.direction == "pos_to_neg" else -1
        if s != want:
            raise GaussCodeError(
                f"crossing {ch.crossing} has sign {s:+d}; {ch.direction} does not apply"
            )
    flip = set(ids)
    comps = []
    for comp in code.components:
        new = []
        for v in comp:
            if v.crossing in flip and v.kind != "D":
                new.append(Visit(v.crossing, "U" if v.kind == "O" else "O", -v.sign))
            else:
                new.append(v)
        comps.append(tuple(new))
    return LinkCode(tuple(comps))


def make_singular(code: LinkCode, ids: Iterable[int]) -> LinkCode:
    """Replace the listed crossings by double points."""
    ids = set(ids)
    unknown = ids - set(code.crossing_ids)
    if unknown:
        raise GaussCodeError(f"unknown crossing ids {sorted(unknown)}")
    return LinkCode(
        tuple(
            tuple(Visit(v.crossing, "D", 0) if v.crossing in ids else v for v in comp)
            for comp in code.components
        )
    )


def chord_diagram_of_singular(code: LinkCode, i: int | None = None) -> JacobiDiagram:
    """Chord diagram recording the order of double points along component i."""
    dps = code.double_points
    if i is None:
        owners = {c for d in dps for c in code.components_of(d)}
        if len(owners) > 1:
            raise GaussCodeError("double points on several components: pass a component")
        i = owners.pop() if owners else 1
    _check_component(code, i)
    for d in dps:
        if set(code.components_of(d)) != {i}:
            raise GaussCodeError(f"double point D{d} touches another component: unsupported")
    word = [v.crossing for v in code.components[i - 1] if v.kind == "D"]
    return chord_diagram([word])


def rotate_component(code: LinkCode, i: int, r: int) -> LinkCode:
    """Move the base point of component i forward by r visits."""
    comps = list(code.components)
    c = comps[i - 1]
    if c:
        r %= len(c)
        comps[i - 1] = c[r:] + c[:r]
    return LinkCode(tuple(comps))


def random_code(
    rng: np.random.Generator, n_components: int, n_crossings: int, n_double: int = 0
) -> LinkCode:
    """A random (generally virtual) well-formed code."""
    slots = []
    for cid in range(1, n_crossings + 1):
        s = int(rng.choice([-1, 1]))
        slots += [Visit(cid, "O", s), Visit(cid, "U", s)]
    for cid in range(n_crossings + 1, n_crossings + n_double + 1):
        slots += [Visit(cid, "D", 0), Visit(cid, "D", 0)]
    order = rng.permutation(len(slots))
    slots = [slots[k] for k in order]
    if n_components == 1:
        return LinkCode((tuple(slots),))
    cuts = sorted(int(x) for x in rng.integers(0, len(slots) + 1, size=n_components - 1))
    comps = []
    prev = 0
    for c in cuts + [len(slots)]:
        comps.append(tuple(slots[prev:c]))
        prev = c
    return LinkCode(tuple(comps))
