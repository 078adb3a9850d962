"""Brackets over crossing changes and finite-type degree tests."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .diagrams import canonicalize
from .linkcodes import (
    CrossingChange,
    GaussCodeError,
    LinkCode,
    apply_crossing_changes,
    chord_diagram_of_singular,
    linking_number,
    make_singular,
    random_code,
    writhe,
)

__all__ = [
    "Bracket",
    "InvariantFn",
    "InvariantDomainError",
    "DegreeReport",
    "SameDiagramReport",
    "expand",
    "evaluate",
    "degree_test",
    "same_diagram_check",
    "register",
    "get_invariant",
    "registry_names",
    "v2_descending",
    "random_bracket",
]


class InvariantDomainError(ValueError):
    """An invariant was evaluated outside its component-count domain."""


@dataclass(frozen=True)
class Bracket:
    """[x; o_1, ..., o_n] for crossing changes at distinct crossings."""

    base: LinkCode
    ops: tuple[CrossingChange, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "ops", tuple(self.ops))
        ids = [o.crossing for o in self.ops]
        if len(set(ids)) != len(ids):
            raise GaussCodeError("bracket operations must act on distinct crossings")
        # validates ids and directions
        apply_crossing_changes(self.base, self.ops)

    @classmethod
    def at(cls, base: LinkCode, crossings: Iterable[int]) -> "Bracket":
        return cls(base, tuple(CrossingChange.at(base, c) for c in crossings))

    @property
    def degree(self) -> int:
        return len(self.ops)

    def singular_code(self) -> LinkCode:
        return make_singular(self.base, [o.crossing for o in self.ops])

    def chord_key(self, component: int | None = None):
        return canonicalize(chord_diagram_of_singular(self.singular_code(), component)).key


@dataclass(frozen=True)
class InvariantFn:
    name: str
    fn: Callable[[LinkCode], int | Fraction]
    components: int | None = None

    def __call__(self, code: LinkCode) -> Fraction:
        if self.components is not None and code.n_components != self.components:
            raise InvariantDomainError(
                f"{self.name} is defined on {self.components}-component codes, "
                f"got {code.n_components}"
            )
        return Fraction(self.fn(code))


def expand(b: Bracket) -> list[tuple[int, LinkCode]]:
    """The 2^n signed resolutions, ordered by subset bitmask."""
    out = []
    n = b.degree
    for mask in range(1 << n):
        chosen = [b.ops[k] for k in range(n) if mask >> k & 1]
        sign = -1 if len(chosen) % 2 else 1
        out.append((sign, apply_crossing_changes(b.base, chosen)))
    return out


def evaluate(f: InvariantFn, b: Bracket) -> Fraction:
    total = Fraction(0)
    for sign, code in expand(b):
        total += sign * f(code)
    return total


@dataclass
class DegreeReport:
    invariant: str
    degree: int
    trials: int
    max_abs_residual: Fraction
    passed: bool
    witness: Bracket | None = None
    witness_value: Fraction | None = None
    note: str = "invariance of the function under diagram moves is assumed, not checked"

    def as_dict(self) -> dict:
        return {
            "invariant": self.invariant,
            "degree": self.degree,
            "trials": self.trials,
            "max_abs_residual": float(self.max_abs_residual),
            "pass": self.passed,
            "witness": None
            if self.witness is None
            else {
                "code": str(self.witness.base),
                "ops": [[o.crossing, o.direction] for o in self.witness.ops],
                "value": str(self.witness_value),
            },
            "note": self.note,
        }


def degree_test(f: InvariantFn, n: int, corpus: Sequence[Bracket]) -> DegreeReport:
    """f has degree <= n on the corpus iff every (n+1)-bracket vanishes."""
    worst = Fraction(0)
    witness = None
    wval = None
    for b in corpus:
        if b.degree != n + 1:
            raise ValueError(f"degree test at n={n} needs brackets with {n + 1} operations")
        val = evaluate(f, b)
        if abs(val) > worst:
            worst, witness, wval = abs(val), b, val
    return DegreeReport(f.name, n, len(corpus), worst, worst == 0, witness, wval)


@dataclass
class SameDiagramReport:
    invariant: str
    degree: int
    pairs: int
    values: list[tuple[Fraction, Fraction]]
    passed: bool


def same_diagram_check(
    f: InvariantFn, n: int, pairs: Sequence[tuple[Bracket, Bracket]], component: int | None = None
) -> SameDiagramReport:
    """Brackets with equal chord diagrams have equal values."""
    values = []
    for a, b in pairs:
        if a.degree != n or b.degree != n:
            raise ValueError(f"pairs must consist of {n}-brackets")
        if a.chord_key(component) != b.chord_key(component):
            raise ValueError("the two brackets of a pair have different chord diagrams")
        values.append((evaluate(f, a), evaluate(f, b)))
    return SameDiagramReport(f.name, n, len(pairs), values, all(x == y for x, y in values))


# ---------------------------------------------------------------------------
# the degree-2 oracle


def _smoothing_lk(visits: Sequence, c: int) -> Fraction:
    """Linking number of the two-component smoothing at self-crossing c."""
    pos = [i for i, v in enumerate(visits) if v.crossing == c]
    inside = {v.crossing for v in visits[pos[0] + 1 : pos[1]]}
    outside = {v.crossing for v in visits[: pos[0]] + visits[pos[1] + 1 :]}
    total = sum(v.sign for v in visits if v.kind == "O" and v.crossing in inside & outside)
    return Fraction(total, 2)


def v2_descending(code: LinkCode) -> Fraction:
    """Degree-2 invariant of a knot code, by telescoping to a descending code.

    Walking from the base point, the first crossing met first as an under
    passage is changed; each change at c contributes sign(c) times the
    linking number of the oriented smoothing at c, and a descending code
    contributes 0.  The normalization gives 1 on the crossing-chords
    diagram, 1 on the trefoil and -1 on the figure-eight knot.
    """
    if code.n_components != 1:
        raise InvariantDomainError("v2 is defined on knot codes")
    if code.double_points:
        raise GaussCodeError("v2 needs a code without double points")
    total = Fraction(0)
    cur = code
    for _ in range(len(code.crossing_ids) + 1):
        visits = cur.components[0]
        seen: set[int] = set()
        wrong = None
        for v in visits:
            if v.crossing not in seen:
                seen.add(v.crossing)
                if v.kind == "U":
                    wrong = v
                    break
        if wrong is None:
            return total
        total += wrong.sign * _smoothing_lk(visits, wrong.crossing)
        cur = apply_crossing_changes(cur, [CrossingChange.at(cur, wrong.crossing)])
    raise AssertionError("descending telescoping did not terminate")


# ---------------------------------------------------------------------------
# registry

_REGISTRY: dict[str, InvariantFn] = {}


def register(f: InvariantFn) -> InvariantFn:
    _REGISTRY[f.name] = f
    return f


def registry_names() -> list[str]:
    return sorted(_REGISTRY)


def get_invariant(name: str) -> InvariantFn:
    if name in _REGISTRY:
        return _REGISTRY[name]
    m = re.fullmatch(r"lk\((\d+),(\d+)\)", name.replace(" ", ""))
    if m:
        i, j = int(m.group(1)), int(m.group(2))
        return InvariantFn(name, lambda c: linking_number(c, i, j))
    raise KeyError(f"unknown invariant {name!r}; known: {', '.join(registry_names())}")


register(InvariantFn("c0", lambda c: 1))
register(InvariantFn("lk", lambda c: linking_number(c, 1, 2)))
register(InvariantFn("crossings", lambda c: len(c.crossing_ids)))
register(InvariantFn("writhe1", lambda c: writhe(c, 1)))
register(InvariantFn("writhe1_sq", lambda c: writhe(c, 1) ** 2))
register(InvariantFn("v2", v2_descending, components=1))


def random_bracket(
    rng: np.random.Generator,
    n_ops: int,
    n_components: int = 2,
    n_crossings: int = 6,
    base: LinkCode | None = None,
) -> Bracket:
    """A bracket with n_ops changes at distinct crossings of a random code."""
    if base is None:
        base = random_code(rng, n_components, max(n_crossings, n_ops))
    ids = base.crossing_ids
    if len(ids) < n_ops:
        raise ValueError("not enough crossings for the requested bracket")
    chosen = sorted(int(x) for x in rng.choice(ids, size=n_ops, replace=False))
    order = rng.permutation(n_ops)
    return Bracket.at(base, [chosen[k] for k in order])
