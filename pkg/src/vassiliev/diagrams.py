"""Chord and Jacobi diagrams on oriented one-manifolds.

A diagram is stored on consecutive half-edge labels ``0..H-1``.  Edges pair
the half-edges, trivalent vertices are ordered triples (the tuple order is the
cyclic orientation) and univalent vertices are the half-edges listed in
``legs``, one sequence per support component.

Canonical forms are found by exhaustive breadth-first relabelling, which is
plenty for the degrees handled here (n <= 4).
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

__all__ = [
    "DiagramError",
    "CapExceeded",
    "Support",
    "JacobiDiagram",
    "NumberedDiagram",
    "CanonicalKey",
    "canonicalize",
    "automorphism_count",
    "is_as_zero",
    "decode_key",
    "chord_diagram",
    "enumerate_chord_diagrams",
    "enumerate_jacobi",
    "enumerate_numbered",
    "numbered_class_key",
    "beta_weight",
    "ENUMERATION_CAP",
    "NUMBERED_DEGREE_CAP",
]

ENUMERATION_CAP = 2_000_000
NUMBERED_DEGREE_CAP = 2


class DiagramError(ValueError):
    """A diagram violates one of its structural invariants."""


class CapExceeded(RuntimeError):
    """An enumeration would exceed the configured resource cap."""


# ---------------------------------------------------------------------------
# support


@dataclass(frozen=True)
class Support:
    kind: str
    k: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("circles", "interval", "line", "empty"):
            raise DiagramError(f"unknown support kind {self.kind!r}")
        if self.kind == "circles":
            if self.k < 1:
                raise DiagramError("support circles(k) needs k >= 1")
        elif self.kind == "empty":
            object.__setattr__(self, "k", 0)
        else:
            object.__setattr__(self, "k", 1)

    @classmethod
    def circles(cls, k: int = 1) -> "Support":
        return cls("circles", k)

    @classmethod
    def interval(cls) -> "Support":
        return cls("interval", 1)

    @classmethod
    def line(cls) -> "Support":
        return cls("line", 1)

    @classmethod
    def empty(cls) -> "Support":
        return cls("empty", 0)

    @property
    def n_components(self) -> int:
        return self.k

    @property
    def cyclic(self) -> bool:
        return self.kind == "circles"

    def __str__(self) -> str:
        if self.kind == "circles":
            return f"circles:{self.k}"
        return self.kind

    @classmethod
    def parse(cls, text: str) -> "Support":
        t = text.strip().lower()
        if t in ("s1", "circle"):
            return cls.circles(1)
        m = re.fullmatch(r"(?:circles|s1\^?)\s*:?\s*(\d+)", t)
        if m:
            return cls.circles(int(m.group(1)))
        if t in ("interval", "i"):
            return cls.interval()
        if t in ("line", "r"):
            return cls.line()
        if t in ("empty", "none", "0"):
            return cls.empty()
        raise DiagramError(f"cannot parse support {text!r}")


# ---------------------------------------------------------------------------
# diagrams


def _cyclic_sign(labels: Sequence[int]) -> int:
    """+1 if the cyclic triple is a rotation of its increasing order."""
    p, q, r = labels
    return 1 if (p < q < r) or (q < r < p) or (r < p < q) else -1


@dataclass(frozen=True)
class JacobiDiagram:
    """Uni-trivalent diagram on a support.

    ``pairs`` are the edges, ``triples`` the trivalent vertices with their
    cyclic order, ``legs[j]`` the univalent half-edges met along component j.
    """

    support: Support
    pairs: tuple[tuple[int, int], ...] = ()
    triples: tuple[tuple[int, int, int], ...] = ()
    legs: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self) -> None:
        pairs = tuple(tuple(int(x) for x in p) for p in self.pairs)
        triples = tuple(tuple(int(x) for x in t) for t in self.triples)
        legs = tuple(tuple(int(x) for x in s) for s in self.legs)
        if not legs and self.support.n_components:
            legs = ((),) * self.support.n_components
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "triples", triples)
        object.__setattr__(self, "legs", legs)
        self._validate()

    def _validate(self) -> None:
        H = 2 * len(self.pairs)
        seen = []
        for p in self.pairs:
            if len(p) != 2:
                raise DiagramError("edge pairing: every edge has two half-edges")
            seen.extend(p)
        if sorted(seen) != list(range(H)):
            raise DiagramError("edge pairing: half-edges must be 0..H-1, each in exactly one pair")
        verts = []
        for t in self.triples:
            if len(t) != 3:
                raise DiagramError("vertex partition: trivalent vertices have three half-edges")
            verts.extend(t)
        if len(self.legs) != self.support.n_components:
            raise DiagramError(
                f"leg placement: {len(self.legs)} sequences for {self.support.n_components} components"
            )
        for s in self.legs:
            verts.extend(s)
        if sorted(verts) != list(range(H)):
            raise DiagramError(
                "vertex partition: every half-edge lies in exactly one singleton or triple"
            )
        if (self.n_univalent + self.n_trivalent) % 2:
            raise DiagramError("degree: |U|+|T| must be even")

    # basic counts -----------------------------------------------------

    @property
    def n_half_edges(self) -> int:
        return 2 * len(self.pairs)

    @property
    def n_edges(self) -> int:
        return len(self.pairs)

    @property
    def n_univalent(self) -> int:
        return sum(len(s) for s in self.legs)

    @property
    def n_trivalent(self) -> int:
        return len(self.triples)

    @property
    def degree(self) -> int:
        return (self.n_univalent + self.n_trivalent) // 2

    @property
    def is_chord_diagram(self) -> bool:
        return not self.triples

    @cached_property
    def partner(self) -> tuple[int, ...]:
        out = [0] * self.n_half_edges
        for a, b in self.pairs:
            out[a], out[b] = b, a
        return tuple(out)

    @cached_property
    def vertex_of(self) -> tuple[int, ...]:
        """Trivalent vertex index of each half-edge, or -1 for a leg."""
        out = [-1] * self.n_half_edges
        for i, t in enumerate(self.triples):
            for h in t:
                out[h] = i
        return tuple(out)

    @cached_property
    def leg_position(self) -> dict[int, tuple[int, int]]:
        """Map leg half-edge -> (component, position along it)."""
        return {h: (j, i) for j, s in enumerate(self.legs) for i, h in enumerate(s)}

    def has_looped_edge(self) -> bool:
        v = self.vertex_of
        return any(v[a] >= 0 and v[a] == v[b] for a, b in self.pairs)

    @cached_property
    def connected_components(self) -> tuple[frozenset[int], ...]:
        """Half-edge sets of the graph components (the support is ignored)."""
        parent = list(range(self.n_half_edges))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.pairs:
            parent[find(a)] = find(b)
        for t in self.triples:
            parent[find(t[0])] = find(t[1])
            parent[find(t[0])] = find(t[2])
        groups: dict[int, set[int]] = {}
        for h in range(self.n_half_edges):
            groups.setdefault(find(h), set()).add(h)
        return tuple(frozenset(g) for g in sorted(groups.values(), key=min))

    def has_closed_component(self) -> bool:
        legs = set(self.leg_position)
        return any(not (c & legs) for c in self.connected_components)

    # transformations --------------------------------------------------

    def relabel(self, perm: Sequence[int]) -> "JacobiDiagram":
        """Rename half-edge h to perm[h]."""
        return JacobiDiagram(
            self.support,
            tuple((perm[a], perm[b]) for a, b in self.pairs),
            tuple(tuple(perm[x] for x in t) for t in self.triples),
            tuple(tuple(perm[x] for x in s) for s in self.legs),
        )

    def flip(self, vertex: int) -> "JacobiDiagram":
        """Reverse the cyclic order at one trivalent vertex."""
        tr = list(self.triples)
        a, b, c = tr[vertex]
        tr[vertex] = (a, c, b)
        return JacobiDiagram(self.support, self.pairs, tuple(tr), self.legs)

    def rotate_legs(self, component: int, r: int) -> "JacobiDiagram":
        legs = list(self.legs)
        s = legs[component]
        if s:
            r %= len(s)
            legs[component] = s[r:] + s[:r]
        return JacobiDiagram(self.support, self.pairs, self.triples, tuple(legs))

    # text form ----------------------------------------------------------

    def to_text(self) -> str:
        pairs = "".join(f"({a} {b})" for a, b in self.pairs)
        triples = "".join(f"({a} {b} {c})" for a, b, c in self.triples)
        parts = [f"n={self.degree}", f"support={self.support}", f"pairs={pairs}", f"triples={triples}"]
        for j, s in enumerate(self.legs, start=1):
            parts.append(f"legs[{j}]=" + ",".join(str(h) for h in s))
        return "; ".join(parts)

    @classmethod
    def from_text(cls, text: str) -> "JacobiDiagram":
        fields: dict[str, str] = {}
        legs: dict[int, str] = {}
        for chunk in text.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            name, _, value = chunk.partition("=")
            name = re.sub(r"\s+", "", name)
            m = re.fullmatch(r"legs\[(\d+)\]", name)
            if m:
                legs[int(m.group(1))] = value
            else:
                fields[name] = value
        support = Support.parse(fields.get("support", "empty"))

        def groups(v: str) -> list[tuple[int, ...]]:
            return [tuple(int(x) for x in g.split()) for g in re.findall(r"\(([^)]*)\)", v)]

        seqs = []
        for j in range(1, support.n_components + 1):
            raw = legs.get(j, "").strip().strip("<>")
            seqs.append(tuple(int(x) for x in re.split(r"[,\s]+", raw) if x))
        d = cls(support, tuple(groups(fields.get("pairs", ""))), tuple(groups(fields.get("triples", ""))), tuple(seqs))
        if "n" in fields and int(fields["n"]) != d.degree:
            raise DiagramError(f"degree field n={fields['n']} disagrees with structure (n={d.degree})")
        return d


def chord_diagram(words: Sequence[Sequence] | Sequence, support: Support | None = None) -> JacobiDiagram:
    """Chord diagram from chord-label words, one word per component.

    ``chord_diagram("abab")`` is the two crossing chords on one circle.
    """
    if isinstance(words, str) or (words and not isinstance(words[0], (str, list, tuple))):
        words = [words]
    if support is None:
        support = Support.circles(len(words))
    ends: dict[object, list[int]] = {}
    legs = []
    h = 0
    for w in words:
        seq = []
        for label in w:
            ends.setdefault(label, []).append(h)
            seq.append(h)
            h += 1
        legs.append(tuple(seq))
    pairs = []
    for label, hs in ends.items():
        if len(hs) != 2:
            raise DiagramError(f"chord {label!r} must have exactly two ends")
        pairs.append(tuple(hs))
    return JacobiDiagram(support, tuple(pairs), (), tuple(legs))


# ---------------------------------------------------------------------------
# canonical forms


@dataclass(frozen=True, order=True)
class CanonicalKey:
    """Isomorphism-class key plus the AS sign relative to the representative."""

    key: bytes
    sign: int = 1

    def diagram(self) -> JacobiDiagram:
        return decode_key(self.key)

    def __str__(self) -> str:
        return ("+" if self.sign > 0 else "-") + self.key.decode()


def _labelings(d: JacobiDiagram) -> Iterator[list[int]]:
    """All breadth-first relabellings of d (half-edge -> new label)."""
    H = d.n_half_edges
    partner = d.partner
    vert = d.vertex_of
    triples = d.triples
    rot_ranges = [
        range(len(s)) if (d.support.cyclic and s) else range(1) for s in d.legs
    ]

    def extend(labels: list[int], order: list[int], q: int) -> Iterator[list[int]]:
        while True:
            while q < len(order):
                h = order[q]
                q += 1
                p = partner[h]
                if labels[p] < 0:
                    labels[p] = len(order)
                    order.append(p)
                v = vert[h]
                if v >= 0:
                    free = [x for x in triples[v] if labels[x] < 0]
                    if len(free) == 2:
                        for a, b in (free, free[::-1]):
                            l2, o2 = labels[:], order[:]
                            l2[a] = len(o2)
                            o2.append(a)
                            l2[b] = len(o2)
                            o2.append(b)
                            yield from extend(l2, o2, q)
                        return
                    for x in free:
                        labels[x] = len(order)
                        order.append(x)
            if len(order) == H:
                yield labels
                return
            for s in range(H):
                if labels[s] < 0:
                    l2, o2 = labels[:], order[:]
                    l2[s] = len(o2)
                    o2.append(s)
                    yield from extend(l2, o2, q)
            return

    for rot in itertools.product(*rot_ranges):
        labels = [-1] * H
        order: list[int] = []
        for j, s in enumerate(d.legs):
            r = rot[j]
            for h in s[r:] + s[:r]:
                labels[h] = len(order)
                order.append(h)
        yield from extend(labels, order, 0)


def _encode(d: JacobiDiagram, lab: Sequence[int]) -> tuple:
    pairs = tuple(sorted((min(lab[a], lab[b]), max(lab[a], lab[b])) for a, b in d.pairs))
    triples = tuple(sorted(tuple(sorted(lab[x] for x in t)) for t in d.triples))
    return pairs, triples


def _orientation_sign(d: JacobiDiagram, lab: Sequence[int]) -> int:
    s = 1
    for t in d.triples:
        s *= _cyclic_sign([lab[x] for x in t])
    return s


def _key_bytes(support: Support, counts: Sequence[int], enc: tuple) -> bytes:
    pairs, triples = enc
    text = "|".join(
        [
            str(support),
            ",".join(str(c) for c in counts),
            ",".join(f"{a}-{b}" for a, b in pairs),
            ",".join("-".join(str(x) for x in t) for t in triples),
        ]
    )
    return text.encode("ascii")


@dataclass(frozen=True)
class _CanonInfo:
    key: bytes
    sign: int
    zero: bool
    aut: int
    best: tuple  # labelings reaching the minimal encoding


@lru_cache(maxsize=200_000)
def _canon(d: JacobiDiagram) -> _CanonInfo:
    best_enc = None
    best: list[list[int]] = []
    for lab in _labelings(d):
        enc = _encode(d, lab)
        if best_enc is None or enc < best_enc:
            best_enc = enc
            best = [lab]
        elif enc == best_enc:
            best.append(lab)
    if best_enc is None:  # empty diagram
        best_enc = ((), ())
        best = [[]]
    signs = {_orientation_sign(d, lab) for lab in best}
    counts = [len(s) for s in d.legs]
    return _CanonInfo(
        key=_key_bytes(d.support, counts, best_enc),
        sign=_orientation_sign(d, best[0]),
        zero=len(signs) == 2,
        aut=len(best),
        best=tuple(tuple(lab) for lab in best),
    )


def canonicalize(d: JacobiDiagram) -> CanonicalKey:
    """Key of the isomorphism class of d and the sign relating d to it."""
    info = _canon(d)
    return CanonicalKey(info.key, info.sign)


def automorphism_count(d: JacobiDiagram) -> int:
    """Order of Aut(d); vertex orientations are ignored, leg orders are kept."""
    return _canon(d).aut


def is_as_zero(d: JacobiDiagram) -> bool:
    """True when an automorphism reverses an odd number of vertex orientations."""
    return _canon(d).zero


@lru_cache(maxsize=50_000)
def decode_key(key: bytes) -> JacobiDiagram:
    """Canonical representative of a key (legs consecutive, triples ascending)."""
    sup, counts, pairs, triples = key.decode("ascii").split("|")
    support = Support.parse(sup)
    cnt = [int(c) for c in counts.split(",")] if counts else []
    legs = []
    h = 0
    for c in cnt:
        legs.append(tuple(range(h, h + c)))
        h += c
    pr = tuple(tuple(int(x) for x in p.split("-")) for p in pairs.split(",")) if pairs else ()
    tr = tuple(tuple(int(x) for x in t.split("-")) for t in triples.split(",")) if triples else ()
    return JacobiDiagram(support, pr, tr, tuple(legs))


# ---------------------------------------------------------------------------
# enumeration


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for c in itertools.combinations(range(total + parts - 1), parts - 1):
        prev = -1
        out = []
        for x in c + (total + parts - 1,):
            out.append(x - prev - 1)
            prev = x
        yield tuple(out)


def _matchings(
    n_legs: int, n_tri: int, allow_looped: bool
) -> Iterator[list[tuple[int, int]]]:
    """Perfect matchings of legs + triple half-edges, pruned by vertex symmetry.

    Untouched trivalent vertices are interchangeable, and so are the two free
    half-edges of a vertex with one matched half-edge, so only one
    representative of each such choice is explored.
    """
    H = n_legs + 3 * n_tri
    vert = [-1] * n_legs + [i for i in range(n_tri) for _ in range(3)]
    matched = [False] * H
    used = [0] * n_tri
    pairs: list[tuple[int, int]] = []

    def rec() -> Iterator[list[tuple[int, int]]]:
        try:
            h = matched.index(False)
        except ValueError:
            yield list(pairs)
            return
        vh = vert[h]
        matched[h] = True
        if vh >= 0:
            used[vh] += 1
        fresh_taken = False
        seen_partial: set[int] = set()
        for x in range(h + 1, H):
            if matched[x]:
                continue
            vx = vert[x]
            if vx >= 0:
                if vx == vh:
                    if not allow_looped or vx in seen_partial:
                        continue
                    seen_partial.add(vx)
                elif used[vx] == 0:
                    if fresh_taken:
                        continue
                    fresh_taken = True
                elif used[vx] == 1:
                    if vx in seen_partial:
                        continue
                    seen_partial.add(vx)
            matched[x] = True
            if vx >= 0:
                used[vx] += 1
            pairs.append((h, x))
            yield from rec()
            pairs.pop()
            matched[x] = False
            if vx >= 0:
                used[vx] -= 1
        matched[h] = False
        if vh >= 0:
            used[vh] -= 1

    yield from rec()


def _raw_diagrams(
    n: int, support: Support, chords_only: bool, allow_looped: bool
) -> Iterator[JacobiDiagram]:
    k = support.n_components
    for u in range(2 * n, -1, -1):
        t = 2 * n - u
        if chords_only and t:
            continue
        if k == 0 and u:
            continue
        for counts in _compositions(u, k):
            legs = []
            h = 0
            for c in counts:
                legs.append(tuple(range(h, h + c)))
                h += c
            triples = tuple((u + 3 * i, u + 3 * i + 1, u + 3 * i + 2) for i in range(t))
            for m in _matchings(u, t, allow_looped):
                yield JacobiDiagram(support, tuple(m), triples, tuple(legs))


def _guard(n: int, support: Support, chords_only: bool) -> None:
    k = max(support.n_components, 1)
    H = 2 * n if chords_only else 6 * n
    est = math.prod(range(H - 1, 0, -2)) if chords_only else 0
    if chords_only and est * math.comb(2 * n + k - 1, k - 1) > ENUMERATION_CAP:
        raise CapExceeded(f"chord enumeration at n={n} exceeds cap {ENUMERATION_CAP}")
    if not chords_only and n > 4:
        raise CapExceeded(f"Jacobi enumeration is capped at n=4 (asked n={n})")
    del H


def enumerate_chord_diagrams(n: int, k: int = 1) -> list[CanonicalKey]:
    """Isomorphism classes of n-chord diagrams on k circles, sorted by key."""
    if n < 0 or k < 1:
        raise DiagramError("need n >= 0 and k >= 1")
    support = Support.circles(k)
    _guard(n, support, True)
    keys = {canonicalize(d).key for d in _raw_diagrams(n, support, True, False)}
    return [CanonicalKey(key) for key in sorted(keys)]


def enumerate_jacobi(
    n: int,
    support: Support,
    allow_closed_components: bool = True,
    *,
    allow_looped: bool = False,
    oriented: bool = False,
    include_zero: bool = True,
) -> list[CanonicalKey]:
    """Isomorphism classes of degree-n Jacobi diagrams on a support.

    By default classes are unoriented and looped edges are excluded.  With
    ``oriented=True`` each class is split into its orbits of vertex
    orientations (the key then carries an orientation suffix).  With
    ``include_zero=False`` classes killed by AS are dropped.
    """
    if n < 0:
        raise DiagramError("degree must be nonnegative")
    _guard(n, support, False)
    keys: dict[bytes, JacobiDiagram] = {}
    for d in _raw_diagrams(n, support, False, allow_looped):
        if not allow_closed_components and d.has_closed_component():
            continue
        info = _canon(d)
        if info.key not in keys:
            keys[info.key] = d
    out: list[CanonicalKey] = []
    for key in sorted(keys):
        d = keys[key]
        if not include_zero and _canon(d).zero:
            continue
        if oriented:
            codes = {_oriented_code(_flip_mask(d, m)) for m in range(2 ** d.n_trivalent)}
            out.extend(CanonicalKey(key + b"|o" + c.encode()) for c in sorted(codes))
        else:
            out.append(CanonicalKey(key))
    return out


def _flip_mask(d: JacobiDiagram, mask: int) -> JacobiDiagram:
    for v in range(d.n_trivalent):
        if mask >> v & 1:
            d = d.flip(v)
    return d


def _oriented_code(d: JacobiDiagram) -> str:
    info = _canon(d)
    best = None
    for lab in info.best:
        bits = []
        for t in sorted(d.triples, key=lambda t: sorted(lab[x] for x in t)):
            bits.append("1" if _cyclic_sign([lab[x] for x in t]) > 0 else "0")
        code = "".join(bits)
        if best is None or code < best:
            best = code
    return best or ""


# ---------------------------------------------------------------------------
# numbered diagrams


@dataclass(frozen=True)
class NumberedDiagram:
    """Jacobi diagram with oriented, injectively numbered edges.

    ``first[i]`` is the source half-edge of edge ``base.pairs[i]`` and
    ``numbering[i]`` its label in {1..3n}.
    """

    base: JacobiDiagram
    first: tuple[int, ...]
    numbering: tuple[int, ...]

    def __post_init__(self) -> None:
        d = self.base
        object.__setattr__(self, "first", tuple(int(x) for x in self.first))
        object.__setattr__(self, "numbering", tuple(int(x) for x in self.numbering))
        if len(self.first) != d.n_edges or len(self.numbering) != d.n_edges:
            raise DiagramError("one orientation and one number per edge")
        for (a, b), f in zip(d.pairs, self.first):
            if f not in (a, b):
                raise DiagramError("edge orientation must name one of the edge's half-edges")
        n = d.degree
        if len(set(self.numbering)) != len(self.numbering):
            raise DiagramError("numbering must be injective")
        if any(not 1 <= x <= 3 * n for x in self.numbering):
            raise DiagramError("numbering must take values in 1..3n")
        if d.n_univalent == 0 and sorted(self.numbering) != list(range(1, 3 * n + 1)):
            raise DiagramError("without univalent vertices the numbering is a bijection onto 1..3n")
        if d.has_looped_edge():
            raise DiagramError("numbered diagrams have no looped edge")

    def oriented_edges(self) -> list[tuple[int, int]]:
        """(source, target) half-edges per edge, in ``base.pairs`` order."""
        return [(f, b if f == a else a) for (a, b), f in zip(self.base.pairs, self.first)]

    def reverse_edge(self, i: int) -> "NumberedDiagram":
        a, b = self.base.pairs[i]
        first = list(self.first)
        first[i] = b if first[i] == a else a
        return NumberedDiagram(self.base, tuple(first), self.numbering)


def beta_weight(d: JacobiDiagram):
    """(3n-|E|)! / ((3n)! 2^|E|) as an exact Fraction."""
    from fractions import Fraction

    n, e = d.degree, d.n_edges
    return Fraction(math.factorial(3 * n - e), math.factorial(3 * n) * 2**e)


def numbered_class_key(g: NumberedDiagram) -> bytes:
    """Key of the isomorphism class of a numbered diagram."""
    info = _canon(g.base)
    best = None
    for lab in info.best:
        data = sorted(
            (min(lab[a], lab[b]), max(lab[a], lab[b]), lab[f], num)
            for (a, b), f, num in zip(g.base.pairs, g.first, g.numbering)
        )
        code = tuple((x[2], x[3]) for x in data)
        if best is None or code < best:
            best = code
    body = ",".join(f"{s}:{m}" for s, m in (best or ()))
    return info.key + b"|e" + body.encode()


def enumerate_numbered(
    n: int,
    support: Support,
    *,
    classes: Sequence[CanonicalKey] | None = None,
    mode: str = "labelled",
) -> Iterator[NumberedDiagram]:
    """Stream numbered diagrams of degree n.

    ``mode="labelled"`` yields every edge orientation and every injective
    numbering on the canonical representative of each class.
    ``mode="classes"`` yields one representative per isomorphism class of
    numbered diagrams; a class Gamma then has exactly |Aut Gamma| fewer
    members, so that (count) * beta = 1/|Aut|.
    """
    if n > NUMBERED_DEGREE_CAP:
        raise CapExceeded(f"numbered enumeration is capped at n={NUMBERED_DEGREE_CAP}")
    if mode not in ("labelled", "classes"):
        raise DiagramError(f"unknown mode {mode!r}")
    if classes is None:
        classes = enumerate_jacobi(n, support, True)
    for ck in classes:
        d = decode_key(ck.key)
        seen: set[bytes] = set()
        for orient in itertools.product((0, 1), repeat=d.n_edges):
            first = tuple(p[o] for p, o in zip(d.pairs, orient))
            for nums in itertools.permutations(range(1, 3 * n + 1), d.n_edges):
                g = NumberedDiagram(d, first, nums)
                if mode == "classes":
                    key = numbered_class_key(g)
                    if key in seen:
                        continue
                    seen.add(key)
                yield g
