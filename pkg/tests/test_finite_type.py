from fractions import Fraction

import numpy as np
import pytest

from vassiliev.finite_type import (
    Bracket,
    InvariantDomainError,
    degree_test,
    evaluate,
    expand,
    get_invariant,
    same_diagram_check,
    random_bracket,
    registry_names,
    v2_descending,
)
from vassiliev.linkcodes import CrossingChange, GaussCodeError, apply_crossing_changes, parse_gauss

HOPF = parse_gauss("O1+ U2+ / U1+ O2+")


def test_expand_signs_and_size(corpus):
    t = corpus["trefoil-"]
    for n in range(4):
        b = Bracket.at(t, list(range(1, n + 1)))
        ex = expand(b)
        assert len(ex) == 2**n
        assert [s for s, _ in ex] == [(-1) ** bin(m).count("1") for m in range(2**n)]
    assert expand(Bracket(t)) == [(1, t)]
    b1 = Bracket.at(t, [2])
    assert expand(b1)[1] == (-1, apply_crossing_changes(t, [CrossingChange.at(t, 2)]))


def test_bracket_requires_distinct_crossings(corpus):
    t = corpus["trefoil-"]
    with pytest.raises(GaussCodeError):
        Bracket(t, (CrossingChange.at(t, 1), CrossingChange.at(t, 1)))


def test_constant_vanishes(corpus):
    c0 = get_invariant("c0")
    for n in (1, 2, 3):
        assert evaluate(c0, Bracket.at(corpus["trefoil-"], range(1, n + 1))) == 0


def test_lk_one_brackets():
    lk = get_invariant("lk")
    for cid in (1, 2):
        assert abs(evaluate(lk, Bracket.at(HOPF, [cid]))) == 1


def test_lk_degree_one():
    rng = np.random.default_rng(5)
    corpus = [random_bracket(rng, 2) for _ in range(20)]
    rep = degree_test(get_invariant("lk"), 1, corpus)
    assert rep.passed and rep.max_abs_residual == 0 and rep.trials == 20
    assert rep.as_dict()["pass"] is True


def test_c0_degree_zero():
    rng = np.random.default_rng(1)
    assert degree_test(get_invariant("c0"), 0, [random_bracket(rng, 1) for _ in range(5)]).passed


def test_writhe_proxy_rejected_with_witness():
    rng = np.random.default_rng(2)
    corpus = [random_bracket(rng, 1, n_components=1) for _ in range(10)]
    rep = degree_test(get_invariant("writhe1"), 0, corpus)
    assert not rep.passed
    assert rep.max_abs_residual == 2 and abs(rep.witness_value) == 2
    # and at n = 1 the square of the writhe is rejected as well
    corpus2 = [random_bracket(rng, 2, n_components=1) for _ in range(10)]
    assert not degree_test(get_invariant("writhe1_sq"), 1, corpus2).passed


def test_degree_test_arity():
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        degree_test(get_invariant("lk"), 1, [random_bracket(rng, 1)])


def test_recursion_identity():
    rng = np.random.default_rng(9)
    names = ["lk", "writhe1", "writhe1_sq", "crossings"]
    for k in range(50):
        b = random_bracket(rng, 1 + k % 3, n_components=2, n_crossings=6)
        f = get_invariant(names[k % len(names)])
        *head, last = b.ops
        lhs = evaluate(f, b)
        rest = evaluate(f, Bracket(b.base, tuple(head)))
        moved = apply_crossing_changes(b.base, [last])
        shifted = Bracket(moved, tuple(head))
        assert lhs == rest - evaluate(f, shifted)


def test_v2_values(corpus):
    v2 = get_invariant("v2")
    assert v2_descending(corpus["trefoil"]) == 1
    assert v2_descending(corpus["trefoil-"]) == 1
    assert v2_descending(corpus["figure8"]) == -1
    assert v2(parse_gauss("")) == 0
    with pytest.raises(InvariantDomainError):
        v2(HOPF)


def test_v2_degree_two():
    rng = np.random.default_rng(3)
    v2 = get_invariant("v2")
    corpus = [random_bracket(rng, 3, n_components=1, n_crossings=7) for _ in range(30)]
    assert degree_test(v2, 2, corpus).passed
    corpus2 = [random_bracket(rng, 2, n_components=1, n_crossings=7) for _ in range(30)]
    assert not degree_test(v2, 1, corpus2).passed


def test_v2_crossing_chords_value(corpus):
    # the 2-bracket on the positive trefoil whose chord diagram has crossing chords
    t = corpus["trefoil-"]
    b = Bracket.at(t, [1, 2])
    assert b.chord_key() == Bracket.at(t, [2, 3]).chord_key()
    assert abs(evaluate(get_invariant("v2"), b)) == 1


def test_same_diagram_degree_one():
    lk = get_invariant("lk")
    # one-singular unknot codes: both 1-brackets resolve a kink
    a = parse_gauss("O1+ U1+")
    b = parse_gauss("U1- O1- O2+ U2+")
    rep = same_diagram_check(get_invariant("c0"), 1, [(Bracket.at(a, [1]), Bracket.at(b, [1]))])
    assert rep.passed
    rep = same_diagram_check(get_invariant("crossings"), 1, [(Bracket.at(a, [1]), Bracket.at(a, [1]))])
    assert rep.passed


def _positive_bracket(code, ids):
    """Bracket whose changes all go from a positive to a negative crossing."""
    neg = [CrossingChange.at(code, c) for c in ids if code.crossing_sign(c) < 0]
    return Bracket.at(apply_crossing_changes(code, neg), ids)


def test_same_diagram_degree_two(corpus):
    v2 = get_invariant("v2")
    t = corpus["trefoil-"]
    f8 = corpus["figure8"]
    pairs = []
    for x in ([1, 2], [2, 3], [1, 3]):
        for y in ([1, 2], [2, 3], [1, 3]):
            pairs.append((Bracket.at(t, x), Bracket.at(t, y)))
    crossed = Bracket.at(t, [1, 2]).chord_key()
    for ids in ([1, 2], [1, 3], [1, 4], [2, 3], [2, 4], [3, 4]):
        b = _positive_bracket(f8, ids)
        if b.chord_key() == crossed:
            pairs.append((Bracket.at(t, [1, 2]), b))
    rep = same_diagram_check(v2, 2, pairs)
    assert rep.passed and rep.pairs == len(pairs) > 9


def test_same_diagram_precondition(corpus):
    t = corpus["trefoil-"]
    nested = parse_gauss("O1+ U1+ O2+ U2+")
    with pytest.raises(ValueError, match="different chord diagrams"):
        same_diagram_check(get_invariant("v2"), 2, [(Bracket.at(t, [1, 2]), Bracket.at(nested, [1, 2]))])


def test_registry():
    assert {"c0", "lk", "v2", "writhe1"} <= set(registry_names())
    f = get_invariant("lk(2,1)")
    assert f(HOPF) == 1
    with pytest.raises(KeyError):
        get_invariant("nope")
