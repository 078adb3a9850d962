"""Sparse linear combinations of canonical diagrams and graded series."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Number
from typing import Iterable, Iterator, Mapping

from ..diagrams import (
    CanonicalKey,
    JacobiDiagram,
    Support,
    canonicalize,
    decode_key,
    is_as_zero,
)

__all__ = ["DiagramVector", "ZSeries", "AlgebraError"]


class AlgebraError(ValueError):
    """Incompatible operands or an unsupported relation request."""


def _clean(coef):
    if isinstance(coef, int):
        return Fraction(coef)
    return coef


@dataclass(frozen=True, eq=False)
class DiagramVector:
    """Linear combination of diagram classes of a fixed degree and support.

    Keys are canonical key bytes; each coefficient already includes the AS
    sign, so ``x * [d]`` is stored as ``x * sign(d)`` on the representative.
    Coefficients are Fractions for exact work; floats are allowed for
    numerically estimated series.
    """

    terms: Mapping[bytes, Number]
    grade: int
    support: Support

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "terms", {k: _clean(v) for k, v in self.terms.items() if v != 0}
        )

    # construction -----------------------------------------------------

    @classmethod
    def zero(cls, grade: int, support: Support) -> "DiagramVector":
        return cls({}, grade, support)

    @classmethod
    def from_diagram(cls, d: JacobiDiagram, coef: Number = 1) -> "DiagramVector":
        if is_as_zero(d):
            return cls({}, d.degree, d.support)
        ck = canonicalize(d)
        return cls({ck.key: ck.sign * _clean(coef)}, d.degree, d.support)

    @classmethod
    def from_key(cls, key: CanonicalKey | bytes, coef: Number = 1) -> "DiagramVector":
        if isinstance(key, CanonicalKey):
            d = decode_key(key.key)
            coef = key.sign * _clean(coef)
        else:
            d = decode_key(key)
        return cls.from_diagram(d, coef)

    @classmethod
    def combination(
        cls, items: Iterable[tuple[JacobiDiagram, Number]], grade: int, support: Support
    ) -> "DiagramVector":
        acc: dict[bytes, Number] = {}
        for d, c in items:
            if d.degree != grade or d.support != support:
                raise AlgebraError("all diagrams in a vector share degree and support")
            if is_as_zero(d):
                continue
            ck = canonicalize(d)
            acc[ck.key] = acc.get(ck.key, 0) + ck.sign * _clean(c)
        return cls(acc, grade, support)

    # arithmetic --------------------------------------------------------

    def _check(self, other: "DiagramVector") -> None:
        if self.grade != other.grade or self.support != other.support:
            raise AlgebraError(
                f"cannot combine degree {self.grade} on {self.support} with "
                f"degree {other.grade} on {other.support}"
            )

    def __add__(self, other: "DiagramVector") -> "DiagramVector":
        self._check(other)
        acc = dict(self.terms)
        for k, v in other.terms.items():
            acc[k] = acc.get(k, 0) + v
        return DiagramVector(acc, self.grade, self.support)

    def __neg__(self) -> "DiagramVector":
        return DiagramVector({k: -v for k, v in self.terms.items()}, self.grade, self.support)

    def __sub__(self, other: "DiagramVector") -> "DiagramVector":
        return self + (-other)

    def __mul__(self, scalar: Number) -> "DiagramVector":
        s = _clean(scalar)
        return DiagramVector({k: v * s for k, v in self.terms.items()}, self.grade, self.support)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiagramVector):
            return NotImplemented
        return (
            self.grade == other.grade
            and self.support == other.support
            and self.terms == other.terms
        )

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[bytes, Number]]:
        return iter(sorted(self.terms.items()))

    def coefficient(self, what: JacobiDiagram | CanonicalKey | bytes) -> Number:
        if isinstance(what, JacobiDiagram):
            if is_as_zero(what):
                return Fraction(0)
            ck = canonicalize(what)
            return ck.sign * self.terms.get(ck.key, 0)
        if isinstance(what, CanonicalKey):
            return what.sign * self.terms.get(what.key, 0)
        return self.terms.get(what, 0)

    def max_abs(self) -> float:
        return max((abs(float(v)) for v in self.terms.values()), default=0.0)

    def __repr__(self) -> str:
        if not self.terms:
            return f"DiagramVector(0; n={self.grade}, {self.support})"
        body = " + ".join(f"{v}*[{k.decode()}]" for k, v in self)
        return f"DiagramVector({body}; n={self.grade})"


@dataclass(frozen=True, eq=False)
class ZSeries:
    """Graded series (v_0, ..., v_N) truncated at degree N."""

    parts: tuple[DiagramVector, ...]
    support: Support
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        for n, v in enumerate(self.parts):
            if v.grade != n or v.support != self.support:
                raise AlgebraError("part n of a series must have degree n and the series support")
        if self.parts:
            bad = [k for k in self.parts[0].terms if decode_key(k).n_half_edges]
            if bad:
                raise AlgebraError("degree-0 part must be a multiple of the empty diagram")

    @property
    def truncation(self) -> int:
        return len(self.parts) - 1

    @classmethod
    def zero(cls, N: int, support: Support) -> "ZSeries":
        return cls(tuple(DiagramVector.zero(n, support) for n in range(N + 1)), support)

    @classmethod
    def one(cls, N: int, support: Support) -> "ZSeries":
        parts = [DiagramVector.zero(n, support) for n in range(N + 1)]
        parts[0] = DiagramVector.from_diagram(JacobiDiagram(support), 1)
        return cls(tuple(parts), support)

    @classmethod
    def from_parts(cls, parts: Iterable[DiagramVector], N: int, support: Support) -> "ZSeries":
        out = [DiagramVector.zero(n, support) for n in range(N + 1)]
        for v in parts:
            if v.grade <= N:
                out[v.grade] = out[v.grade] + v
        return cls(tuple(out), support)

    def __getitem__(self, n: int) -> DiagramVector:
        return self.parts[n]

    def _check(self, other: "ZSeries") -> None:
        if self.support != other.support:
            raise AlgebraError("series supports differ")

    def __add__(self, other: "ZSeries") -> "ZSeries":
        self._check(other)
        N = min(self.truncation, other.truncation)
        return ZSeries(tuple(self.parts[n] + other.parts[n] for n in range(N + 1)), self.support)

    def __neg__(self) -> "ZSeries":
        return ZSeries(tuple(-v for v in self.parts), self.support)

    def __sub__(self, other: "ZSeries") -> "ZSeries":
        return self + (-other)

    def __mul__(self, scalar: Number) -> "ZSeries":
        return ZSeries(tuple(v * scalar for v in self.parts), self.support)

    __rmul__ = __mul__

    def truncate(self, N: int) -> "ZSeries":
        return ZSeries(self.parts[: N + 1], self.support)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ZSeries):
            return NotImplemented
        return self.support == other.support and self.parts == other.parts
