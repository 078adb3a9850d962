import math
from fractions import Fraction

import numpy as np
import pytest

from vassiliev.algebra import DiagramVector, ZSeries
from vassiliev.curves import FourierCurve, ParamLink, builtin_link, gauss_kernel, self_linking_integral
from vassiliev.diagrams import (
    JacobiDiagram,
    NumberedDiagram,
    Support,
    automorphism_count,
    beta_weight,
    canonicalize,
    chord_diagram,
    decode_key,
    enumerate_numbered,
)
from vassiliev.integrator import (
    Budget,
    ConfigPoint,
    DiagramPlan,
    MCEstimate,
    TripodIntegrator,
    assemble_Z,
    correct_anomaly,
    integrand,
    mc_integrate,
    tripod_sign,
    z2_knot,
    z_series,
)
from vassiliev.integrator.sampling import cauchy_density, sample_cauchy, sample_cyclic_legs

CIRCLE = FourierCurve([[1, 0, 0, 1, 0, 0]])
SMALL = Budget(chord_samples=200_000, tripod_samples=20_000, zero_samples=5_000)


def _numbered(d, flips=(), numbering=None):
    first = tuple(p[1] if i in flips else p[0] for i, p in enumerate(d.pairs))
    return NumberedDiagram(d, first, numbering or tuple(range(1, d.n_edges + 1)))


def _knot_chord():
    return _numbered(chord_diagram("aa"))


def _hopf_chord():
    return _numbered(chord_diagram(["a", "a"]))


# ---------------------------------------------------------------------------
# sampling densities


def test_cauchy_sampler_normalised():
    rng = np.random.default_rng(0)
    c, R = np.zeros(3), 1.3
    x = sample_cauchy(rng, 200_000, c, R)
    # E[g/p] for a unit-mass Gaussian
    g = np.exp(-0.5 * np.sum(x**2, axis=1)) / (2 * np.pi) ** 1.5
    w = g / cauchy_density(x, c, R)
    assert abs(w.mean() - 1) < 4 * w.std() / math.sqrt(len(w))


def test_cyclic_leg_sampler_orders():
    rng = np.random.default_rng(1)
    legs = sample_cyclic_legs(rng, [4, 7, 9], 1000)
    t = np.stack([legs[4], legs[7], legs[9]], axis=1)
    # cyclic order: exactly one descent around the triple
    descents = (t[:, 1] < t[:, 0]).astype(int) + (t[:, 2] < t[:, 1]) + (t[:, 0] < t[:, 2])
    assert np.all(descents == 1)


# ---------------------------------------------------------------------------
# the integrand


def test_chord_integrand_is_self_linking_kernel():
    K = builtin_link("trefoil")
    g = _knot_chord()
    a, b = g.base.pairs[0]
    rng = np.random.default_rng(2)
    for s, t in rng.random((100, 2)):
        v = integrand(g, K, ConfigPoint({a: s, b: t}))
        P, dP = K[0].evaluate(np.array([s]))
        Q, dQ = K[0].evaluate(np.array([t]))
        assert v == pytest.approx(float(gauss_kernel(P, dP, Q, dQ)[0]), rel=1e-12, abs=1e-12)


def test_hopf_chord_integrand_is_gauss_kernel():
    L = builtin_link("hopf+")
    g = _hopf_chord()
    a, b = g.base.pairs[0]
    rng = np.random.default_rng(3)
    for s, t in rng.random((20, 2)):
        v = integrand(g, L, ConfigPoint({a: s, b: t}))
        P, dP = L[g.base.leg_position[a][0]].evaluate(np.array([s]))
        Q, dQ = L[g.base.leg_position[b][0]].evaluate(np.array([t]))
        assert v == pytest.approx(float(gauss_kernel(P, dP, Q, dQ)[0]), rel=1e-12)


def test_coincident_configuration_rejected():
    g = _knot_chord()
    a, b = g.base.pairs[0]
    with pytest.raises(ValueError):
        integrand(g, builtin_link("unknot"), ConfigPoint({a: 0.3, b: 0.3}))


def test_plan_component_mismatch():
    d = chord_diagram("aa")
    assert DiagramPlan(_numbered(d), 1).n_tri == 0
    with pytest.raises(ValueError):
        DiagramPlan(_numbered(d), 2)


def test_sign_coherence():
    """Reversing one edge negates the raw edge-form product and leaves the
    oriented integrand unchanged."""
    rng = np.random.default_rng(4)
    L = builtin_link("trefoil")
    for d in (chord_diagram("abab"), chord_diagram("aabb")):
        g = _numbered(d)
        for _ in range(10):
            legs = {h: float(x) for h, x in zip(d.leg_position, rng.random(d.n_univalent))}
            c = ConfigPoint(legs)
            for i in range(d.n_edges):
                r = g.reverse_edge(i)
                assert integrand(r, L, c, oriented=False) == pytest.approx(-integrand(g, L, c, oriented=False))
                assert integrand(r, L, c) == pytest.approx(integrand(g, L, c))


def test_sign_coherence_tripod(tripod_diagram):
    rng = np.random.default_rng(5)
    L = builtin_link("trefoil")
    g = _numbered(tripod_diagram)
    for _ in range(10):
        legs = {h: float(x) for h, x in zip(tripod_diagram.leg_position, np.sort(rng.random(3)))}
        c = ConfigPoint(legs, rng.normal(size=(1, 3)))
        for i in range(tripod_diagram.n_edges):
            r = g.reverse_edge(i)
            assert integrand(r, L, c, oriented=False) == pytest.approx(-integrand(g, L, c, oriented=False))
            assert integrand(r, L, c) == pytest.approx(integrand(g, L, c))


@pytest.fixture
def tripod_diagram():
    from vassiliev.diagrams import enumerate_jacobi

    for ck in enumerate_jacobi(2, Support.circles(1), False, include_zero=False):
        d = decode_key(ck.key)
        if d.n_trivalent == 1:
            return d
    raise AssertionError("no tripod class at degree 2")


def test_tripod_integrand_is_field_determinant(tripod_diagram):
    L = builtin_link("trefoil")
    g = _numbered(tripod_diagram)
    s = tripod_sign(g, L)
    d = g.base
    rng = np.random.default_rng(6)
    legs_h = [d.partner[h] for h in d.triples[0]]
    for _ in range(5):
        t = rng.random(3)
        x = rng.normal(size=3)
        w = []
        for h, tt in zip(legs_h, t):
            P, T = L[0].evaluate(np.array([tt]))
            r = x - P[0]
            w.append(np.cross(T[0], r) / (4 * np.pi * np.linalg.norm(r) ** 3))
        v = integrand(g, L, ConfigPoint(dict(zip(legs_h, t)), x[None]))
        assert v == pytest.approx(s * np.linalg.det(np.array(w)), rel=1e-9)


# ---------------------------------------------------------------------------
# Monte Carlo


def test_hopf_chord_mc():
    e = mc_integrate(_hopf_chord(), builtin_link("hopf+"), 200_000, seed=7)
    assert abs(e.value - 1) < 3 * e.stderr
    assert e.rejected == 0


def test_far_circles_chord():
    L = ParamLink([CIRCLE, CIRCLE.transformed(shift=[50.0, 0, 0])])
    e = mc_integrate(_hopf_chord(), L, 50_000, seed=1)
    assert abs(e.value) < 1e-4


def test_planar_circle_chord_mc():
    e = mc_integrate(_knot_chord(), ParamLink([CIRCLE]), 50_000, seed=8)
    assert abs(e.value) <= 3 * e.stderr + 1e-12


def test_thread_count_bit_identity():
    L = builtin_link("hopf+")
    g = _hopf_chord()
    runs = [mc_integrate(g, L, 100_000, seed=11, threads=t, chunk=4096) for t in (1, 2, 4)]
    assert len({(r.value, r.stderr) for r in runs}) == 1


def test_seed_changes_value():
    L = builtin_link("hopf+")
    a = mc_integrate(_hopf_chord(), L, 20_000, seed=1)
    b = mc_integrate(_hopf_chord(), L, 20_000, seed=2)
    assert a.value != b.value


def test_stderr_scaling():
    L = builtin_link("hopf+")
    g = _hopf_chord()
    errs = [mc_integrate(g, L, 25_000 * 2**k, seed=13).stderr for k in range(6)]
    for a, b in zip(errs, errs[1:]):
        assert abs(b / a - 1 / math.sqrt(2)) < 0.2 / math.sqrt(2)


def test_knot_chord_matches_self_linking():
    K = builtin_link("trefoil")
    e = mc_integrate(_knot_chord(), K, 400_000, seed=14)
    ref = self_linking_integral(K[0]).value
    assert abs(e.value - ref) < 3 * e.stderr


def test_numbering_independence():
    K = builtin_link("trefoil")
    d = chord_diagram("aa")
    ests = []
    for g in enumerate_numbered(1, Support.circles(1), classes=[canonicalize(d)]):
        e = mc_integrate(g, K, 100_000, seed=15)
        ests.append(e)
    assert len(ests) == 6
    for e in ests[1:]:
        assert abs(e.value - ests[0].value) < 3 * math.hypot(e.stderr, ests[0].stderr)


def test_tripod_estimator_unknot(tripod_diagram):
    # on the round circle the tripod term I/|Aut| is 1/24 in absolute value
    e = TripodIntegrator(_numbered(tripod_diagram), builtin_link("unknot")).integrate(20_000, seed=0)
    aut = automorphism_count(tripod_diagram)
    assert aut == 3
    assert abs(abs(e.value) / aut - 1 / 24) < 4 * e.stderr / aut + 1e-3


# ---------------------------------------------------------------------------
# assembly


def _fake(value, se=0.0):
    return MCEstimate(value, se, 1, 0, "")


def test_assemble_degree_one():
    d = chord_diagram("aa")
    pairs = [(g, _fake(3.4, 0.01)) for g in enumerate_numbered(1, Support.circles(1), classes=[canonicalize(d)], mode="classes")]
    assert len(pairs) * beta_weight(d) == Fraction(1, automorphism_count(d)) == Fraction(1, 2)
    asm = assemble_Z(pairs, 1, Support.circles(1))
    key = canonicalize(d).key
    assert asm.numbered.terms[key] == pytest.approx(1.7)
    assert asm.resummed.terms[key] == pytest.approx(1.7)
    assert asm.agree


def test_assemble_labelled_weights():
    # every labelled numbering is counted |Aut| times among the six
    d = chord_diagram("aa")
    labelled = list(enumerate_numbered(1, Support.circles(1), classes=[canonicalize(d)]))
    classes = list(enumerate_numbered(1, Support.circles(1), classes=[canonicalize(d)], mode="classes"))
    assert len(labelled) == 6 and beta_weight(d) == Fraction(1, 6)
    assert len(labelled) == automorphism_count(d) * len(classes)
    assert len(classes) * beta_weight(d) == Fraction(1, 2)


def test_assemble_incomplete_fibre():
    d = chord_diagram("abab")
    gs = list(enumerate_numbered(2, Support.circles(1), classes=[canonicalize(d)], mode="classes"))
    with pytest.raises(ValueError, match="incomplete"):
        assemble_Z([(g, _fake(1.0)) for g in gs[:-1]], 2, Support.circles(1))


def test_degree_zero_term():
    res = z_series(builtin_link("unknot"), 0)
    assert list(res.reduced[0].values()) == [1]
    assert len(res.estimates) == 0


def test_anomaly_cancels_degree_one_exactly():
    s = Support.circles(1)
    key = canonicalize(chord_diagram("aa")).key
    z = ZSeries((DiagramVector.from_diagram(JacobiDiagram(s), 1), DiagramVector({key: Fraction(7, 4)}, 1, s)), s)
    out = correct_anomaly(z, [Fraction(7, 2)])
    assert not out[1]


def test_anomaly_degree_cap():
    with pytest.raises(ValueError):
        z_series(builtin_link("unknot"), 3)


@pytest.mark.parametrize("name", ["unknot", "trefoil"])
def test_corrected_degree_one(name):
    L = builtin_link(name)
    res = z_series(L, 1, SMALL)
    (k, est), = res.estimates.items()
    coef = res.corrected[1].terms.get(k, 0.0)
    assert abs(coef) < 3 * est.stderr / 2 + 1e-12


def test_z2_values():
    u = z2_knot(builtin_link("unknot"), SMALL)
    w = z2_knot(builtin_link("wiggly-unknot"), SMALL)
    t = z2_knot(builtin_link("trefoil"), SMALL)
    m = z2_knot(builtin_link("trefoil-"), SMALL)
    # the round circle: only the tripod survives, with value -1/24
    assert abs(u.value + 1 / 24) < 3 * u.stderr + 2e-3
    assert abs(w.value - u.value) < 3 * math.hypot(w.stderr, u.stderr) + 3e-3
    assert abs(t.value - u.value - 1) < 0.15
    assert abs(t.value - m.value) < 3 * math.hypot(t.stderr, m.stderr) + 3e-3


def test_hopf_degree_two_lk_square():
    res = z_series(builtin_link("hopf+"), 2, SMALL)
    (k1, v1), = res.reduced[1].items()
    assert v1 == pytest.approx(1.0, abs=3 * res.reduced_stderr[1][k1] + 5e-3)
    # coefficient of the two parallel inter-component chords is lk^2 / 2
    vals = sorted(res.reduced[2].values())
    assert any(abs(v - 0.5) < 0.05 for v in vals)


def test_numbered_check_agrees():
    res = z_series(builtin_link("unknot"), 1, Budget(chord_samples=20_000), check_numbered=True)
    assert res.numbered_check[1]["agree_sigma"] < 1e-6
