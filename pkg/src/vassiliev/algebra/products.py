"""Products on A(I), the projection to A(S^1), the #_j action and exp."""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Number

from ..diagrams import JacobiDiagram, Support, decode_key
from .relations import compact
from .vectors import AlgebraError, DiagramVector, ZSeries

__all__ = [
    "product",
    "series_product",
    "series_exp",
    "to_circle",
    "insert_into",
    "sharp_action",
    "chord_on_interval",
]

_LINEAR = ("interval", "line")


def _concat(da: JacobiDiagram, db: JacobiDiagram) -> JacobiDiagram:
    off = da.n_half_edges
    pairs = list(da.pairs) + [(a + off, b + off) for a, b in db.pairs]
    triples = list(da.triples) + [tuple(x + off for x in t) for t in db.triples]
    legs = [tuple(da.legs[0]) + tuple(h + off for h in db.legs[0])]
    return JacobiDiagram(da.support, tuple(pairs), tuple(triples), tuple(legs))


def product(a: DiagramVector, b: DiagramVector) -> DiagramVector:
    """Concatenation product (a first, then b) on interval or line support."""
    if a.support != b.support or a.support.kind not in _LINEAR:
        raise AlgebraError("product needs two vectors on the same interval/line support")
    items = []
    for ka, ca in a.terms.items():
        da = decode_key(ka)
        for kb, cb in b.terms.items():
            items.append((_concat(da, decode_key(kb)), ca * cb))
    return DiagramVector.combination(items, a.grade + b.grade, a.support)


def series_product(x: ZSeries, y: ZSeries) -> ZSeries:
    if x.support != y.support:
        raise AlgebraError("series supports differ")
    N = min(x.truncation, y.truncation)
    parts = []
    for n in range(N + 1):
        acc = DiagramVector.zero(n, x.support)
        for i in range(n + 1):
            if x[i] and y[n - i]:
                acc = acc + product(x[i], y[n - i])
        parts.append(acc)
    return ZSeries(tuple(parts), x.support)


def series_exp(a: ZSeries, N: int | None = None) -> ZSeries:
    """sum_m a^m / m! truncated at degree N; needs a_0 = 0."""
    if a.parts and a[0]:
        raise AlgebraError("exp needs a series with zero degree-0 part")
    if N is None:
        N = a.truncation
    a = a.truncate(N) if a.truncation >= N else ZSeries.from_parts(a.parts, N, a.support)
    out = ZSeries.one(N, a.support)
    power = ZSeries.one(N, a.support)
    for m in range(1, N + 1):
        power = series_product(power, a)
        out = out + power * Fraction(1, math.factorial(m))
    return out


def to_circle(v: DiagramVector) -> DiagramVector:
    """Close an interval diagram up into a circle."""
    if v.support.kind not in _LINEAR:
        raise AlgebraError("projection to the circle starts from interval/line support")
    s = Support.circles(1)
    items = []
    for k, c in v.terms.items():
        d = decode_key(k)
        items.append((JacobiDiagram(s, d.pairs, d.triples, d.legs), c))
    return DiagramVector.combination(items, v.grade, s)


def chord_on_interval(coef: Number = 1, support: Support | None = None) -> DiagramVector:
    """The single chord with both ends on an interval."""
    s = support or Support.interval()
    return DiagramVector.from_diagram(JacobiDiagram(s, ((0, 1),), (), ((0, 1),)), coef)


def insert_into(a: DiagramVector, z: DiagramVector, j: int, locus: int = 0) -> DiagramVector:
    """Insert the interval vector a into component j (1-based) of z.

    The legs of a are placed, in order, just before position ``locus`` of the
    leg sequence of the representative of each term of z.
    """
    if a.support.kind not in _LINEAR:
        raise AlgebraError("the inserted vector must live on an interval")
    if not 1 <= j <= z.support.n_components:
        raise AlgebraError(f"component index {j} out of range 1..{z.support.n_components}")
    items = []
    for kz, cz in z.terms.items():
        dz = decode_key(kz)
        for ka, ca in a.terms.items():
            da = decode_key(ka)
            off = dz.n_half_edges
            pairs = list(dz.pairs) + [(x + off, y + off) for x, y in da.pairs]
            triples = list(dz.triples) + [tuple(x + off for x in t) for t in da.triples]
            legs = [list(s) for s in dz.legs]
            seq = legs[j - 1]
            pos = locus % (len(seq) + (0 if z.support.cyclic and seq else 1)) if seq else 0
            seq[pos:pos] = [h + off for h in da.legs[0]]
            items.append((compact(dz.support, pairs, triples, legs), ca * cz))
    return DiagramVector.combination(items, a.grade + z.grade, z.support)


def sharp_action(a: ZSeries | DiagramVector, z: ZSeries, j: int, locus: int = 0) -> ZSeries:
    """a #_j z, truncated at the truncation of z."""
    if isinstance(a, DiagramVector):
        a = ZSeries.from_parts([a], max(a.grade, 0), a.support)
    if not 1 <= j <= z.support.n_components:
        raise AlgebraError(f"component index {j} out of range 1..{z.support.n_components}")
    N = z.truncation
    parts = [DiagramVector.zero(n, z.support) for n in range(N + 1)]
    for p in range(min(a.truncation, N) + 1):
        if not a[p]:
            continue
        for m in range(N + 1 - p):
            if z[m]:
                parts[p + m] = parts[p + m] + insert_into(a[p], z[m], j, locus)
    return ZSeries(tuple(parts), z.support, dict(z.meta))
