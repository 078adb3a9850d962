import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from vassiliev.algebra import (
    AlgebraError,
    DiagramVector,
    ZSeries,
    chord_on_interval,
    generators,
    parse_kinds,
    product,
    quotient,
    quotient_dim,
    relation_vectors,
    series_exp,
    series_product,
    sharp_action,
    stu_reduce,
    stu_terms,
    to_circle,
)
from vassiliev.algebra.elimination import eliminate
from vassiliev.algebra.oracle import oracle_chord_dim
from vassiliev.diagrams import JacobiDiagram, Support, chord_diagram, decode_key, enumerate_jacobi

S1 = Support.circles(1)
I = Support.interval()
THETA = JacobiDiagram(Support.empty(), ((0, 3), (1, 4), (2, 5)), ((0, 1, 2), (3, 4, 5)), ())
# two trivalent vertices joined by a double edge, one leg each
WHEEL2 = JacobiDiagram(S1, ((0, 2), (3, 5), (4, 6), (1, 7)), ((2, 3, 4), (7, 6, 5)), ((0, 1),))
Y = JacobiDiagram(S1, ((0, 3), (1, 4), (2, 5)), ((3, 4, 5),), ((0, 1, 2),))


def test_elimination_rank_matches_sympy():
    import sympy

    rng = random.Random(4)
    for _ in range(20):
        rows = [{c: Fraction(rng.randint(-3, 3)) for c in rng.sample(range(7), 3)} for _ in range(6)]
        M = sympy.Matrix([[r.get(c, 0) for c in range(7)] for r in rows])
        assert eliminate(rows, 7).rank == M.rank()


def test_dims_one_t():
    assert [quotient_dim(n, S1, "4t,1t") for n in range(1, 5)] == [0, 1, 1, 3]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_dims_match_oracle(n):
    assert quotient_dim(n, S1, "4t,1t") == oracle_chord_dim(n, one_t=True)
    assert quotient_dim(n, S1, "4t") == oracle_chord_dim(n, one_t=False)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_chords_mod_4t_equals_jacobi_mod_stu(n):
    assert quotient_dim(n, S1, "4t") == quotient_dim(n, S1, "stu,ihx,as")


def test_small_examples():
    assert quotient_dim(0, Support.empty(), "ihx") == 1
    # every 4T instance is trivial in degree 2; 1T then removes the nested pair
    q = quotient(2, S1, "4t")
    assert len(q.generators) == 2 and q.rank == 0 and q.dim == 2
    assert quotient(2, S1, "4t,1t").dim == 1
    assert [quotient_dim(n, S1, "4t") for n in range(1, 5)] == [1, 2, 3, 6]
    assert quotient_dim(1, S1, "1t") == 0


def test_as_self_check():
    v = DiagramVector.from_diagram(THETA) + DiagramVector.from_diagram(THETA.flip(1))
    assert not v
    assert all(not r for r in relation_vectors("as", 1, Support.empty()))


def test_rank_plus_dim():
    for kinds in ("4t", "4t,1t", "stu,ihx"):
        q = quotient(3, S1, kinds)
        assert q.rank + q.dim == len(q.generators)


def test_reducer_expresses_generators():
    q = quotient(3, S1, "4t")
    basis = set(q.reduced_basis)
    for g, expr in q.reducer.items():
        assert set(expr) <= basis
        v = DiagramVector({g: 1}, 3, S1) - DiagramVector(dict(expr), 3, S1)
        assert q.is_zero(v)


@pytest.mark.parametrize("kinds", ["4t", "4t,1t", "stu,ihx"])
def test_dim_independent_of_orders(kinds):
    q = quotient(3, S1, kinds)
    rng = random.Random(11)
    for _ in range(10):
        go = list(range(len(q.generators)))
        ro = list(range(len(q.relations)))
        rng.shuffle(go)
        rng.shuffle(ro)
        assert quotient(3, S1, kinds, generator_order=go, relation_order=ro).dim == q.dim


@pytest.mark.parametrize("n", [1, 2, 3])
def test_one_t_after_four_t(n):
    q4 = quotient(n, S1, "4t")
    ones = relation_vectors("1t", n, S1, q4.generators)
    images = [q4.echelon.reduce(q4._row(v)) for v in ones]
    extra = eliminate(images, len(q4.generators)).rank
    assert q4.dim - extra == quotient_dim(n, S1, "4t,1t")


def test_stu_reduce_y():
    out = stu_reduce(DiagramVector.from_diagram(Y))
    expect = DiagramVector.from_diagram(chord_diagram(["aabb"])) - DiagramVector.from_diagram(chord_diagram(["abab"]))
    assert out == expect


def test_stu_reduce_chords_unchanged():
    v = DiagramVector.from_diagram(chord_diagram(["abcabc"]), 3)
    assert stu_reduce(v) == v


def test_stu_reduce_closed_component_error():
    d = JacobiDiagram(
        S1, ((0, 1), (2, 5), (3, 6), (4, 7)), ((2, 3, 4), (5, 6, 7)), ((0, 1),)
    )
    with pytest.raises(AlgebraError, match="closed component"):
        stu_reduce(DiagramVector.from_diagram(d))


def test_wheel_reduction_site_independent():
    q = quotient(2, S1, "4t")
    results = []
    for leg in (0, 1):
        t, u = stu_terms(WHEEL2, leg)
        v = DiagramVector.combination([(t, 1), (u, -1)], 2, S1)
        results.append(stu_reduce(v))
    assert q.equal(results[0], results[1])
    assert q.equal(results[0], stu_reduce(DiagramVector.from_diagram(WHEEL2)))


@pytest.mark.parametrize("n", [1, 2])
def test_stu_reduce_is_identity_mod_stu(n):
    q = quotient(n, S1, "stu,ihx")
    for k in q.generators:
        v = DiagramVector({k: 1}, n, S1)
        assert q.is_zero(v - stu_reduce(v))


def _interval_vectors(n):
    return [DiagramVector.from_key(ck) for ck in enumerate_jacobi(n, I, False, include_zero=False)]


def test_product_identity_and_degree():
    one = DiagramVector.from_diagram(JacobiDiagram(I))
    rng = random.Random(2)
    pool = {n: _interval_vectors(n) for n in (1, 2)}
    for _ in range(20):
        a = rng.choice(pool[rng.choice((1, 2))])
        b = rng.choice(pool[rng.choice((1, 2))])
        assert product(one, a) == a == product(a, one)
        assert product(a, b).grade == a.grade + b.grade


def test_product_commutes_on_circle():
    c1 = _interval_vectors(1)
    c2 = _interval_vectors(2)
    for a in c1:
        for b in c2:
            ab = stu_reduce(to_circle(product(a, b)))
            ba = stu_reduce(to_circle(product(b, a)))
            assert quotient(3, S1, "4t").equal(ab, ba)
    chord = chord_on_interval()
    assert product(chord, chord) == product(chord, chord)


def test_product_support_mismatch():
    with pytest.raises(AlgebraError):
        product(chord_on_interval(), DiagramVector.from_diagram(chord_diagram(["aa"])))


def _series_on_circle(v: DiagramVector, N: int) -> ZSeries:
    return ZSeries.from_parts([v], N, v.support)


def test_sharp_identity_and_bad_index():
    z = ZSeries.from_parts([DiagramVector.from_diagram(chord_diagram(["abab"]))], 3, S1)
    one = ZSeries.one(3, I)
    assert sharp_action(one, z, 1) == z
    with pytest.raises(AlgebraError):
        sharp_action(one, z, 2)


def test_sharp_locus_independent_mod_4t():
    z = ZSeries.from_parts([DiagramVector.from_diagram(chord_diagram(["aa"]))], 3, S1)
    for a in _interval_vectors(1) + _interval_vectors(2):
        outs = [sharp_action(a, z, 1, locus) for locus in (0, 1)]
        n = a.grade + 1
        assert outs[0][n].grade == n
        q = quotient(n, S1, "4t")
        assert q.equal(stu_reduce(outs[0][n]), stu_reduce(outs[1][n]))


def test_exp_examples():
    assert series_exp(ZSeries.zero(3, I)) == ZSeries.one(3, I)
    c = Fraction(-7, 3)
    e = series_exp(ZSeries.from_parts([chord_on_interval(c)], 3, I))
    assert e[1] == chord_on_interval(c)
    with pytest.raises(AlgebraError):
        series_exp(ZSeries.one(2, I))


@settings(max_examples=15, deadline=None)
@given(
    st.lists(st.integers(-3, 3), min_size=3, max_size=3),
    st.integers(1, 3),
    st.randoms(use_true_random=False),
)
def test_exp_inverse(coefs, N, rnd):
    parts = []
    for n, c in zip(range(1, N + 1), coefs):
        parts.append(rnd.choice(_interval_vectors(n)) * Fraction(c, 2))
    a = ZSeries.from_parts(parts, N, I)
    prod = series_product(series_exp(a), series_exp(-a))
    assert prod == ZSeries.one(N, I)


def test_parse_kinds_errors():
    assert parse_kinds("4T,1t") == frozenset({"4t", "1t"})
    with pytest.raises(AlgebraError):
        parse_kinds("5t")
