"""Generators and relation vectors for the diagram spaces.

Conventions shared by every local move below: a trivalent vertex is written
``(l, b, c)`` after rotating its cyclic order so that ``l`` is the half-edge
under consideration.

* STU at a leg whose edge ends at such a vertex: ``S = T - U`` where ``T``
  puts the end of ``c`` just before the leg and the end of ``b`` just after,
  and ``U`` is the opposite order.
* IHX at an internal edge ``e`` joining ``(e, A, B)`` and ``(e, C, D)``:
  ``[(e,A,B),(e,C,D)] + [(e,B,C),(e,A,D)] + [(e,C,A),(e,B,D)] = 0``.
* 4T: ``D(a1-) - D(a1+) - D(a2+) + D(a2-) = 0`` where a free chord end sits
  just before/after the ends a1, a2 of another chord.
"""

from __future__ import annotations

from typing import Iterator, Sequence

from ..diagrams import (
    JacobiDiagram,
    Support,
    chord_diagram,
    decode_key,
    enumerate_chord_diagrams,
    enumerate_jacobi,
)
from .vectors import AlgebraError, DiagramVector

__all__ = [
    "RELATION_KINDS",
    "parse_kinds",
    "relation_vectors",
    "generators",
    "stu_terms",
    "has_isolated_chord",
    "compact",
]

RELATION_KINDS = ("as", "ihx", "stu", "4t", "1t")
_ALIASES = {"jacobi": "ihx", "four_t": "4t", "one_t": "1t", "fourt": "4t", "onet": "1t"}


def parse_kinds(kinds: str | Sequence[str]) -> frozenset[str]:
    if isinstance(kinds, str):
        kinds = [k for k in kinds.replace("+", ",").split(",") if k.strip()]
    out = set()
    for k in kinds:
        k = k.strip().lower()
        k = _ALIASES.get(k, k)
        if k not in RELATION_KINDS:
            raise AlgebraError(f"unknown relation kind {k!r}")
        out.add(k)
    return frozenset(out)


def compact(
    support: Support,
    pairs: Sequence[tuple[int, int]],
    triples: Sequence[tuple[int, int, int]],
    legs: Sequence[Sequence[int]],
) -> JacobiDiagram:
    """Build a diagram from arbitrary half-edge ids by renumbering them 0..H-1."""
    used = sorted({h for p in pairs for h in p})
    ren = {h: i for i, h in enumerate(used)}
    return JacobiDiagram(
        support,
        tuple((ren[a], ren[b]) for a, b in pairs),
        tuple(tuple(ren[x] for x in t) for t in triples),
        tuple(tuple(ren[x] for x in s) for s in legs),
    )


def _rotate_to(t: tuple[int, int, int], h: int) -> tuple[int, int, int]:
    i = t.index(h)
    return t[i:] + t[:i]


# ---------------------------------------------------------------------------
# generators


def generators(n: int, support: Support, kinds: frozenset[str]) -> list[bytes]:
    """Basis keys of the space the relations act on.

    Chord diagrams when only 4T/1T are requested, otherwise Jacobi diagrams
    (without closed components unless the support is empty), always with the
    AS-vanishing classes removed.
    """
    if kinds <= {"4t", "1t"}:
        if support.kind != "circles":
            raise AlgebraError("4T/1T quotients are implemented on circle supports")
        return [k.key for k in enumerate_chord_diagrams(n, support.k)]
    closed = support.kind == "empty"
    return [k.key for k in enumerate_jacobi(n, support, closed, include_zero=False)]


# ---------------------------------------------------------------------------
# STU


def stu_terms(d: JacobiDiagram, leg: int) -> tuple[JacobiDiagram, JacobiDiagram]:
    """(T, U) for the STU move at a leg whose edge ends at a trivalent vertex."""
    p = d.partner[leg]
    v = d.vertex_of[p]
    if v < 0:
        raise AlgebraError("STU needs a leg attached to a trivalent vertex")
    _, b, c = _rotate_to(d.triples[v], p)
    comp, pos = d.leg_position[leg]
    pairs = [pr for pr in d.pairs if leg not in pr]
    triples = [t for i, t in enumerate(d.triples) if i != v]

    def with_order(first: int, second: int) -> JacobiDiagram:
        legs = [list(s) for s in d.legs]
        legs[comp][pos : pos + 1] = [first, second]
        return compact(d.support, pairs, triples, legs)

    return with_order(c, b), with_order(b, c)


def _stu_vectors(n: int, support: Support, gens: Sequence[bytes]) -> Iterator[DiagramVector]:
    for key in gens:
        d = decode_key(key)
        for leg in sorted(d.leg_position):
            if d.vertex_of[d.partner[leg]] < 0:
                continue
            t, u = stu_terms(d, leg)
            yield DiagramVector.combination([(d, 1), (t, -1), (u, 1)], n, support)


# ---------------------------------------------------------------------------
# IHX


def _reattach(
    d: JacobiDiagram, e: tuple[int, int], u_slots: tuple[int, int], w_slots: tuple[int, int],
    letters: tuple[int, int, int, int],
) -> JacobiDiagram:
    """Reconnect the four outer ends around edge e.

    ``letters`` gives, for the slots (u1, u2, w1, w2), which original slot's
    outer end each one now connects to.
    """
    h1, h2 = e
    old_slots = u_slots + w_slots
    slot_set = set(old_slots)
    partner = d.partner
    new_pos = {old_slots[letters[i]]: old_slots[i] for i in range(4)}
    pairs = [pr for pr in d.pairs if not (set(pr) & slot_set)]
    done = set()
    for i, s in enumerate(old_slots):
        letter = old_slots[letters[i]]
        q = partner[letter]
        if q in slot_set:
            if letter in done:
                continue
            other = new_pos[q]
            pairs.append((s, other))
            done.add(letter)
            done.add(q)
        else:
            pairs.append((s, q))
    triples = [
        t for t in d.triples if h1 not in t and h2 not in t
    ]
    triples.append((h1,) + u_slots)
    triples.append((h2,) + w_slots)
    return compact(d.support, pairs, triples, d.legs)


def ihx_terms(d: JacobiDiagram, edge_index: int) -> tuple[JacobiDiagram, JacobiDiagram, JacobiDiagram]:
    h1, h2 = d.pairs[edge_index]
    vu, vw = d.vertex_of[h1], d.vertex_of[h2]
    if vu < 0 or vw < 0 or vu == vw:
        raise AlgebraError("IHX needs an edge between two distinct trivalent vertices")
    _, A, B = _rotate_to(d.triples[vu], h1)
    _, C, D = _rotate_to(d.triples[vw], h2)
    us, ws = (A, B), (C, D)
    # slot order (A, B, C, D) = indices 0..3
    t1 = _reattach(d, (h1, h2), us, ws, (0, 1, 2, 3))
    t2 = _reattach(d, (h1, h2), us, ws, (1, 2, 0, 3))
    t3 = _reattach(d, (h1, h2), us, ws, (2, 0, 1, 3))
    return t1, t2, t3


def _ihx_vectors(n: int, support: Support, gens: Sequence[bytes]) -> Iterator[DiagramVector]:
    for key in gens:
        d = decode_key(key)
        for i, (a, b) in enumerate(d.pairs):
            va, vb = d.vertex_of[a], d.vertex_of[b]
            if va < 0 or vb < 0 or va == vb:
                continue
            t1, t2, t3 = ihx_terms(d, i)
            yield DiagramVector.combination([(t1, 1), (t2, 1), (t3, 1)], n, support)


# ---------------------------------------------------------------------------
# 4T and 1T on chord diagrams


def _words(d: JacobiDiagram) -> list[list[int]]:
    label = {}
    for i, (a, b) in enumerate(d.pairs):
        label[a] = label[b] = i
    return [[label[h] for h in s] for s in d.legs]


def _four_t_vectors(n: int, support: Support) -> Iterator[DiagramVector]:
    if n < 2:
        return
    new = "new"
    for ck in enumerate_chord_diagrams(n - 1, support.k):
        base = _words(decode_key(ck.key))
        m = len(base)
        for a in range(n - 1):
            for comp in range(m):
                L = len(base[comp])
                gaps = range(max(L, 1)) if support.cyclic else range(L + 1)
                for g in gaps:
                    with_x = [list(w) for w in base]
                    with_x[comp].insert(g, new)

                    def place(end: int, after: bool) -> JacobiDiagram:
                        ws = [list(w) for w in with_x]
                        seen = 0
                        for j, w in enumerate(ws):
                            for i, lab in enumerate(w):
                                if lab == a:
                                    if seen == end:
                                        w.insert(i + 1 if after else i, new)
                                        return chord_diagram(ws, support)
                                    seen += 1
                        raise AssertionError("chord end not found")

                    terms = [
                        (place(0, False), 1),
                        (place(0, True), -1),
                        (place(1, True), -1),
                        (place(1, False), 1),
                    ]
                    yield DiagramVector.combination(terms, n, support)


def has_isolated_chord(d: JacobiDiagram) -> bool:
    """A chord on one component whose ends separate no other graph component."""
    comps = d.connected_components
    comp_of = {}
    for ci, c in enumerate(comps):
        for h in c:
            comp_of[h] = ci
    for a, b in d.pairs:
        if a not in d.leg_position or b not in d.leg_position:
            continue
        (ja, ia), (jb, ib) = d.leg_position[a], d.leg_position[b]
        if ja != jb:
            continue
        lo, hi = sorted((ia, ib))
        seq = d.legs[ja]
        inside = {comp_of[h] for h in seq[lo + 1 : hi]}
        outside = {comp_of[h] for h in seq[:lo] + seq[hi + 1 :]}
        for j, s in enumerate(d.legs):
            if j != ja:
                outside |= {comp_of[h] for h in s}
        if not (inside & outside):
            return True
    return False


def _one_t_vectors(n: int, support: Support, gens: Sequence[bytes]) -> Iterator[DiagramVector]:
    for key in gens:
        d = decode_key(key)
        if has_isolated_chord(d):
            yield DiagramVector.from_diagram(d)


def _as_vectors(n: int, support: Support, gens: Sequence[bytes]) -> Iterator[DiagramVector]:
    for key in gens:
        d = decode_key(key)
        for v in range(d.n_trivalent):
            yield DiagramVector.combination([(d, 1), (d.flip(v), 1)], n, support)


def relation_vectors(kind: str, n: int, support: Support, gens: Sequence[bytes] | None = None) -> list[DiagramVector]:
    """Relation vectors of one kind in degree n.

    AS vectors are emitted as self-checks: canonical signs make each of them
    the zero vector.
    """
    kind = next(iter(parse_kinds([kind])))
    if kind == "4t":
        if support.kind != "circles":
            raise AlgebraError("4T is implemented on circle supports")
        return list(_four_t_vectors(n, support))
    if kind in ("stu", "1t") and support.kind == "empty":
        raise AlgebraError(f"{kind.upper()} needs a nonempty support")
    if gens is None:
        gens = generators(n, support, frozenset({kind}) if kind != "1t" else frozenset({"1t", "stu"}))
    if kind == "stu":
        return list(_stu_vectors(n, support, gens))
    if kind == "ihx":
        return list(_ihx_vectors(n, support, gens))
    if kind == "1t":
        return list(_one_t_vectors(n, support, gens))
    return list(_as_vectors(n, support, gens))
