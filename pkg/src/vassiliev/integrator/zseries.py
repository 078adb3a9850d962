"""Assembly of the truncated series from configuration integrals."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from ..algebra import (
    DiagramVector,
    ZSeries,
    chord_on_interval,
    quotient,
    series_exp,
    sharp_action,
    stu_reduce,
)
from ..diagrams import (
    JacobiDiagram,
    NumberedDiagram,
    Support,
    automorphism_count,
    beta_weight,
    canonicalize,
    decode_key,
    enumerate_jacobi,
    numbered_class_key,
)
from ..curves.geometry import ParamLink
from ..curves.quadrature import self_linking_integral
from .mc import MCEstimate, mc_integrate
from .tripod import TripodIntegrator, is_tripod

__all__ = [
    "Budget",
    "AssembledDegree",
    "ZResult",
    "Z_DEGREE_CAP",
    "assemble_Z",
    "correct_anomaly",
    "estimate_class",
    "z_series",
    "z2_knot",
    "reduce_series",
]

Z_DEGREE_CAP = 2


@dataclass(frozen=True)
class Budget:
    chord_samples: int = 1_000_000
    tripod_samples: int = 40_000
    segments: int = 384
    zero_samples: int = 20_000
    seed: int = 0
    threads: int = 1


def _default_numbering(d: JacobiDiagram) -> NumberedDiagram:
    return NumberedDiagram(d, tuple(p[0] for p in d.pairs), tuple(range(1, d.n_edges + 1)))


def estimate_class(d: JacobiDiagram, link: ParamLink, budget: Budget, g: NumberedDiagram | None = None) -> MCEstimate:
    """Integral of the diagram d over the link, with an estimator chosen by shape.

    Chord diagrams use the generic sampler; tripods integrate their legs on
    a polygon; diagrams with two trivalent vertices at degree <= 2 carry a
    double edge, whose form squares to zero, and get a small generic run.
    """
    g = g or _default_numbering(d)
    if is_tripod(g):
        return TripodIntegrator(g, link, budget.segments).integrate(
            budget.tripod_samples, budget.seed, budget.threads
        )
    n = budget.chord_samples if d.n_trivalent == 0 else budget.zero_samples
    return mc_integrate(g, link, n, budget.seed, budget.threads)


@dataclass
class AssembledDegree:
    """Both forms of one degree of the series, with per-class variances."""

    numbered: DiagramVector
    resummed: DiagramVector
    variance: dict
    agree: bool
    max_gap_sigma: float


def assemble_Z(
    estimates: Iterable[tuple[NumberedDiagram, MCEstimate]], n: int, support: Support
) -> AssembledDegree:
    """Combine integrals of numbered diagrams into the degree-n part.

    The numbered form weights each isomorphism class of numbered diagrams by
    beta; the resummed form weights each diagram class by 1/|Aut|.  Every
    class must be represented by its complete fibre of numbered classes.
    """
    by_num: dict[bytes, list] = defaultdict(list)
    base_of: dict[bytes, JacobiDiagram] = {}
    for g, est in estimates:
        if g.base.degree != n or g.base.support != support:
            raise ValueError("estimate does not belong to this degree and support")
        k = numbered_class_key(g)
        by_num[k].append(est)
        base_of[k] = g.base
    fibres: dict[bytes, list[bytes]] = defaultdict(list)
    signs: dict[bytes, int] = {}
    for k, d in base_of.items():
        ck = canonicalize(d)
        fibres[ck.key].append(k)
        signs[k] = ck.sign
    num_terms: dict[bytes, float] = {}
    num_var: dict[bytes, float] = {}
    res_terms: dict[bytes, float] = {}
    res_var: dict[bytes, float] = {}
    for ckey, members in fibres.items():
        d = decode_key(ckey)
        aut = automorphism_count(d)
        beta = beta_weight(d)
        if Fraction(len(members)) * beta != Fraction(1, aut):
            raise ValueError(f"incomplete numbered fibre for {ckey.decode()}")
        vals, vars_ = [], []
        for k in members:
            ests = by_num[k]
            v = math.fsum(signs[k] * e.value for e in ests) / len(ests)
            s2 = math.fsum(e.stderr**2 for e in ests) / len(ests) ** 2
            vals.append(v)
            vars_.append(s2)
        b = float(beta)
        num_terms[ckey] = math.fsum(b * v for v in vals)
        num_var[ckey] = math.fsum(b * b * s for s in vars_)
        mean = math.fsum(vals) / len(vals)
        res_terms[ckey] = mean / aut
        res_var[ckey] = math.fsum(vars_) / len(vals) ** 2 / aut**2
    gap = 0.0
    for ckey in fibres:
        sd = math.sqrt(num_var[ckey] + res_var[ckey])
        diff = abs(num_terms[ckey] - res_terms[ckey])
        if sd > 0:
            gap = max(gap, diff / sd)
        elif diff > 1e-12:
            gap = math.inf
    return AssembledDegree(
        DiagramVector(num_terms, n, support),
        DiagramVector(res_terms, n, support),
        res_var,
        gap < 1e-6,
        gap,
    )


def correct_anomaly(z: ZSeries, itheta: Sequence[float], locus: int = 0) -> ZSeries:
    """Apply exp(-I_theta(K_j) alpha) on each component j, alpha = chord / 2."""
    if len(itheta) != z.support.n_components:
        raise ValueError("one self-linking integral per component")
    out = z
    interval = Support.interval()
    for j, it in enumerate(itheta, start=1):
        a = ZSeries.from_parts([chord_on_interval(-Fraction(1, 2) * Fraction(it) if isinstance(it, Fraction) else -0.5 * it, interval)], z.truncation, interval)
        out = sharp_action(series_exp(a, z.truncation), out, j, locus)
    return ZSeries(out.parts, z.support, dict(z.meta))


def reduce_series(z: ZSeries, kinds: Sequence[str] = ("4t", "1t")) -> list[dict[bytes, float]]:
    """Coordinates of each degree in the reduced chord basis modulo kinds."""
    out = []
    for n in range(z.truncation + 1):
        v = z[n]
        if n == 0:
            out.append({k: float(c) for k, c in v.terms.items()})
            continue
        chords = stu_reduce(DiagramVector({k: Fraction(c) for k, c in v.terms.items()}, n, v.support))
        q = quotient(n, z.support, kinds)
        nf = q.normal_form(chords)
        out.append({k: float(c) for k, c in nf.terms.items()})
    return out


@dataclass
class ZResult:
    link: str
    N: int
    estimates: dict
    raw: ZSeries
    corrected: ZSeries
    itheta: list
    reduced: list
    reduced_stderr: list
    certificate: list
    kinds: tuple
    numbered_check: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        def vec(v):
            return {k.decode(): float(c) for k, c in v.terms.items()}

        return {
            "link": self.link,
            "N": self.N,
            "kinds": list(self.kinds),
            "itheta": self.itheta,
            "estimates": [dict(e.as_dict(), key=k.decode()) for k, e in self.estimates.items()],
            "raw": [vec(v) for v in self.raw.parts],
            "corrected": [vec(v) for v in self.corrected.parts],
            "reduced": [
                {k.decode(): {"value": c, "stderr": self.reduced_stderr[n][k]} for k, c in part.items()}
                for n, part in enumerate(self.reduced)
            ],
            "certificate": [
                {cls.decode(): {b.decode(): str(x) for b, x in row.items()} for cls, row in part.items()}
                for part in self.certificate
            ],
            "numbered_check": self.numbered_check,
        }


def _unit_images(classes: dict[int, list[bytes]], N: int, support: Support, itheta, kinds) -> dict:
    """Reduced image of each unit class vector under the anomaly correction."""
    images = {}
    for n, keys in classes.items():
        for k in keys:
            parts = [DiagramVector.zero(m, support) for m in range(N + 1)]
            parts[n] = DiagramVector({k: Fraction(1)}, n, support)
            z = correct_anomaly(ZSeries(tuple(parts), support), [Fraction(x) for x in itheta])
            images[k] = [
                {b: Fraction(c) for b, c in _exact_reduce(z[m], kinds).items()} for m in range(N + 1)
            ]
    return images


def _exact_reduce(v: DiagramVector, kinds) -> dict[bytes, Fraction]:
    if v.grade == 0:
        return dict(v.terms)
    if not v:
        return {}
    chords = stu_reduce(v)
    return dict(quotient(v.grade, v.support, kinds).normal_form(chords).terms)


def z_series(
    link: ParamLink,
    N: int,
    budget: Budget = Budget(),
    kinds: Sequence[str] = ("4t", "1t"),
    check_numbered: bool = False,
) -> ZResult:
    """Estimate the series up to degree N <= 2 and reduce it.

    Diagram classes with closed components are left out; AS-zero classes
    contribute nothing.  The reduced coordinates carry standard errors
    propagated linearly from the per-class estimates.
    """
    if N > Z_DEGREE_CAP:
        raise ValueError(f"series estimation is capped at degree {Z_DEGREE_CAP}")
    support = Support.circles(len(link))
    itheta = [self_linking_integral(c).value for c in link.curves]
    estimates: dict[bytes, MCEstimate] = {}
    classes: dict[int, list[bytes]] = {}
    parts = [DiagramVector.from_diagram(JacobiDiagram(support), 1)]
    for n in range(1, N + 1):
        keys = [ck.key for ck in enumerate_jacobi(n, support, False, include_zero=False)]
        classes[n] = keys
        terms = {}
        for k in keys:
            d = decode_key(k)
            est = estimate_class(d, link, budget)
            estimates[k] = est
            terms[k] = est.value / automorphism_count(d)
        parts.append(DiagramVector(terms, n, support))
    raw = ZSeries(tuple(parts), support, {"link": link.name})
    corrected = correct_anomaly(raw, itheta)
    images = _unit_images(classes, N, support, itheta, tuple(kinds))
    reduced = reduce_series(corrected, kinds)
    stderr = []
    certificate = []
    for m in range(N + 1):
        var: dict[bytes, float] = defaultdict(float)
        cert: dict[bytes, dict] = {}
        for k, img in images.items():
            aut = automorphism_count(decode_key(k))
            for b, lam in img[m].items():
                var[b] += (float(lam) * estimates[k].stderr / aut) ** 2
            if img[m]:
                cert[k] = img[m]
        stderr.append({b: math.sqrt(var.get(b, 0.0)) for b in reduced[m]})
        certificate.append(cert)
    check = {}
    if check_numbered:
        from ..diagrams import enumerate_numbered

        for n in range(1, N + 1):
            pairs = []
            for g in enumerate_numbered(n, support, classes=[canonicalize(decode_key(k)) for k in classes[n]], mode="classes"):
                pairs.append((g, estimate_class(g.base, link, budget, g)))
            asm = assemble_Z(pairs, n, support)
            check[n] = {"agree_sigma": asm.max_gap_sigma}
    return ZResult(
        link.name, N, estimates, raw, corrected, itheta, reduced, stderr, certificate, tuple(kinds), check
    )


def z2_knot(knot: ParamLink, budget: Budget = Budget()) -> MCEstimate:
    """Degree-2 coordinate of the corrected series of a knot, modulo 4T and 1T."""
    if len(knot) != 1:
        raise ValueError("z2_knot needs a one-component link")
    res = z_series(knot, 2, budget)
    part = res.reduced[2]
    if len(part) != 1:
        raise AssertionError("degree-2 quotient of a knot is one-dimensional")
    (k, v), = part.items()
    est = MCEstimate(v, res.reduced_stderr[2][k], budget.chord_samples, budget.seed, k.decode())
    est.conventions["reduction"] = "STU to chord diagrams, then 4T and 1T"
    return est
