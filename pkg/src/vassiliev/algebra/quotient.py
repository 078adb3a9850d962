"""Quotients of diagram spaces by relation sets, and STU reduction."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from ..diagrams import CapExceeded, Support, decode_key
from .elimination import Echelon, eliminate
from .relations import generators, parse_kinds, relation_vectors, stu_terms
from .vectors import AlgebraError, DiagramVector

__all__ = [
    "QuotientPresentation",
    "quotient",
    "quotient_dim",
    "stu_reduce",
    "QUOTIENT_DEGREE_CAP",
]

QUOTIENT_DEGREE_CAP = 4


@dataclass
class QuotientPresentation:
    """A diagram space modulo relations, in reduced row echelon form."""

    degree: int
    support: Support
    kinds: frozenset[str]
    generators: list[bytes]
    relations: list[DiagramVector]
    echelon: Echelon
    index: dict[bytes, int] = field(repr=False)

    @property
    def rank(self) -> int:
        return self.echelon.rank

    @property
    def dim(self) -> int:
        return len(self.generators) - self.rank

    @property
    def reduced_basis(self) -> list[bytes]:
        return [self.generators[c] for c in self.echelon.free_columns()]

    @property
    def reducer(self) -> dict[bytes, dict[bytes, Fraction]]:
        """Each generator written in the reduced basis."""
        out = {}
        for c, g in enumerate(self.generators):
            if c in self.echelon.rows:
                sol = self.echelon.solve_pivot(c)
                out[g] = {self.generators[k]: v for k, v in sol.items()}
            else:
                out[g] = {g: Fraction(1)}
        return out

    def relation_matrix(self) -> list[dict[int, Fraction]]:
        return [self._row(v) for v in self.relations]

    def _row(self, v: DiagramVector) -> dict[int, Fraction]:
        if v.grade != self.degree or v.support != self.support:
            raise AlgebraError("vector does not live in this space")
        row = {}
        for k, c in v.terms.items():
            if k not in self.index:
                raise AlgebraError(f"diagram {k.decode()} is not a generator of this space")
            row[self.index[k]] = Fraction(c)
        return row

    def normal_form(self, v: DiagramVector) -> DiagramVector:
        red = self.echelon.reduce(self._row(v))
        return DiagramVector({self.generators[c]: x for c, x in red.items()}, self.degree, self.support)

    def is_zero(self, v: DiagramVector) -> bool:
        return not self.normal_form(v)

    def equal(self, u: DiagramVector, v: DiagramVector) -> bool:
        return self.is_zero(u - v)


@lru_cache(maxsize=64)
def _quotient_cached(n: int, support: Support, kinds: frozenset[str]) -> QuotientPresentation:
    gens = generators(n, support, kinds)
    rels: list[DiagramVector] = []
    for kind in sorted(kinds):
        if kind == "as":
            continue
        if kind == "4t":
            rels.extend(relation_vectors("4t", n, support))
        else:
            rels.extend(relation_vectors(kind, n, support, gens))
    return _build(n, support, kinds, gens, rels)


def _build(n, support, kinds, gens, rels) -> QuotientPresentation:
    index = {g: i for i, g in enumerate(gens)}
    q = QuotientPresentation(n, support, kinds, list(gens), list(rels), Echelon(len(gens), {}), index)
    q.echelon = eliminate(q.relation_matrix(), len(gens))
    return q


def quotient(
    n: int,
    support: Support,
    kinds: str | Sequence[str],
    *,
    generator_order: Sequence[int] | None = None,
    relation_order: Sequence[int] | None = None,
) -> QuotientPresentation:
    """Presentation of the degree-n space on ``support`` modulo ``kinds``.

    The optional orders permute generators and relations (used to check
    that the dimension does not depend on them).
    """
    if n > QUOTIENT_DEGREE_CAP:
        raise CapExceeded(f"quotients are capped at degree {QUOTIENT_DEGREE_CAP}")
    ks = parse_kinds(kinds)
    q = _quotient_cached(n, support, ks)
    if generator_order is None and relation_order is None:
        return q
    gens = [q.generators[i] for i in generator_order] if generator_order else q.generators
    rels = [q.relations[i] for i in relation_order] if relation_order else q.relations
    return _build(n, support, ks, gens, rels)


def quotient_dim(n: int, support: Support, kinds: str | Sequence[str]) -> int:
    return quotient(n, support, kinds).dim


def _first_reducible_leg(d) -> int | None:
    for s in d.legs:
        for h in s:
            if d.vertex_of[d.partner[h]] >= 0:
                return h
    return None


def stu_reduce(v: DiagramVector) -> DiagramVector:
    """Rewrite v on chord diagrams only, by repeated STU.

    Each step rewrites the trivalent vertex next to the first leg (in the
    order of the canonical representative) that ends at a trivalent vertex.
    """
    if v.support.kind not in ("circles", "interval", "line"):
        raise AlgebraError("STU reduction needs a one-manifold support")
    acc: dict[bytes, Fraction] = {}
    todo = dict(v.terms)
    while todo:
        key, coef = todo.popitem()
        d = decode_key(key)
        if d.is_chord_diagram:
            acc[key] = acc.get(key, 0) + coef
            continue
        if d.has_closed_component():
            raise AlgebraError("closed component; not reducible")
        leg = _first_reducible_leg(d)
        t, u = stu_terms(d, leg)
        step = DiagramVector.combination([(t, coef), (u, -coef)], v.grade, v.support)
        for k, c in step.terms.items():
            todo[k] = todo.get(k, 0) + c
            if todo[k] == 0:
                del todo[k]
    return DiagramVector(acc, v.grade, v.support)
