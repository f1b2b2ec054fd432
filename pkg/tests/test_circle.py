import math
import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings, strategies as st

from arithact import circle as cc
from arithact.circle import IDENTITY, PLCircleLift, rotation

seeds = st.integers(0, 2**32)
points = [Q(k, 37) for k in range(-40, 80)]


def pl_from_seed(seed, pieces=3):
    return cc.random_pl(random.Random(seed), pieces)


def test_rejects_non_monotone_and_bad_degree():
    with pytest.raises(ValueError):
        PLCircleLift(["0", "1/2"], ["1/2", "1/4"])
    with pytest.raises(ValueError):
        PLCircleLift(["0", "1/2"], ["0", "1"])       # f(1/2) = f(0) + 1 breaks injectivity
    with pytest.raises(ValueError):
        PLCircleLift(["1/2", "0"], ["0", "1/4"])
    with pytest.raises(ValueError):
        PLCircleLift(["1"], ["0"])


def test_degree_one_and_monotone():
    f = PLCircleLift(["0", "1/3", "1/2"], ["1/10", "1/5", "4/5"])
    for t in points:
        assert f(t + 1) == f(t) + 1
        assert f(t + Q(1, 1000)) > f(t)


def test_rotation_composition_and_normalize():
    assert cc.compose(rotation(Q(1, 3)), rotation(Q(1, 3))) == rotation(Q(2, 3))
    assert cc.normalize(rotation(Q(7, 3))) == rotation(Q(1, 3))
    assert cc.normalize(rotation(Q(-1, 4))) == rotation(Q(3, 4))


@given(seeds, seeds)
def test_compose_agrees_pointwise(s1, s2):
    f, g = pl_from_seed(s1), pl_from_seed(s2)
    fg = cc.compose(f, g)
    for t in points[::7]:
        assert fg(t) == f(g(t))


@given(seeds)
def test_inverse(seed):
    f = pl_from_seed(seed)
    assert cc.compose(f, cc.inverse(f)) == IDENTITY == cc.compose(cc.inverse(f), f)
    assert cc.compose(f, IDENTITY) == f
    for t in points[::5]:
        assert cc.inverse(f)(f(t)) == t


def test_three_breakpoint_inverse_on_samples():
    f = PLCircleLift(["0", "1/3", "1/2"], ["1/10", "1/5", "4/5"])
    inv = cc.inverse(f)
    assert all(inv(f(Q(k, 100))) == Q(k, 100) for k in range(100))


@given(seeds, st.integers(-3, 3))
def test_normalize_idempotent_and_shift(seed, n):
    f = pl_from_seed(seed)
    g = cc.normalize(f.shift(n))
    assert g == f and cc.normalize(g) == g
    assert 0 <= g(0) < 1


def test_canonical_form_drops_fake_breakpoints():
    assert PLCircleLift(["0", "1/2"], ["1/4", "3/4"]) == rotation(Q(1, 4))
    f = PLCircleLift(["0", "1/4", "1/2"], ["0", "1/8", "1/4"])   # 1/4 sits on a straight segment
    assert f.breakpoints == (Q(0), Q(1, 2))


def test_euler_cocycle_examples():
    assert cc.euler_cocycle(rotation(Q(2, 3)), rotation(Q(2, 3))) == 1
    f = pl_from_seed(3)
    assert cc.euler_cocycle(IDENTITY, f) == 0
    with pytest.raises(ValueError):
        cc.euler_cocycle(rotation(Q(4, 3)), f)


@settings(max_examples=200)
@given(seeds, seeds)
def test_cocycle_values_and_independence(s1, s2):
    g, h = pl_from_seed(s1), pl_from_seed(s2)
    c = cc.euler_cocycle(g, h)
    assert c in (0, 1)
    gh = cc.normalize(cc.compose(g, h))
    for t in points[::11]:
        assert g(h(t)) == gh(t) + c


@settings(max_examples=100)
@given(seeds, seeds, seeds)
def test_four_term_identity(s1, s2, s3):
    assert cc.cocycle_identity_check(pl_from_seed(s1), pl_from_seed(s2), pl_from_seed(s3))


def test_rational_rotations_cocycle_formula():
    # for rotations the cocycle is floor(a + b) with a, b in [0, 1)
    for a in range(12):
        for b in range(12):
            x, y = Q(a, 12), Q(b, 12)
            assert cc.euler_cocycle(rotation(x), rotation(y)) == math.floor(x + y)


def test_common_fixed_point_kills_cocycle_when_based_there():
    rng = random.Random(7)
    p = Q(2, 5)
    gens = [cc.random_pl_fixing(rng, p) for _ in range(4)]
    based = [cc.normalize(g, p) for g in gens]
    for g in based:
        assert g(p) == p
    for g in based:
        for h in based:
            assert cc.euler_cocycle(g, h, p) == 0


def test_level_and_fixed_sets():
    f = PLCircleLift(["0", "1/4", "1/2"], ["0", "1/3", "1/2"])
    assert cc.fixed_set(f) == [(Q(0), Q(0)), (Q(1, 2), Q(1))]   # identity on [1/2, 1]
    g = PLCircleLift(["0", "1/4", "1/2", "3/4"], ["0", "1/3", "1/2", "5/8"])
    assert cc.fixed_set(g) == [(Q(0), Q(0)), (Q(1, 2), Q(1, 2))]
    assert cc.fixed_set(IDENTITY) == [(Q(0), Q(1))]
    assert cc.fixed_set(rotation(Q(1, 3))) == []
    assert cc.level_set(rotation(Q(1)), 1) == [(Q(0), Q(1))]


def test_fixed_point_family_sharing_a_point():
    rng = random.Random(11)
    p = Q(1, 2)
    gens = [cc.random_pl_fixing(rng, p) for _ in range(2)]
    phi = cc.primitive_from_fixed_point(gens, p)
    rep = cc.fixed_point_from_primitive(gens, phi, R=4)
    assert rep.verdict == "fixed"
    s = rep.sup
    lifts = cc.WordLifts(gens)
    for i in range(2):
        g = lifts[cc.ReducedWord.generator(i, 2)].shift(phi(cc.ReducedWord.generator(i, 2)))
        assert g(s) == s
    # the circle point is fixed by the original maps
    for g in gens:
        assert (g(rep.point) - rep.point).denominator == 1


def test_fixed_point_single_map_fixing_half_with_zero_primitive():
    f = PLCircleLift(["0", "1/4", "1/2"], ["0", "1/3", "1/2"])
    rep = cc.fixed_point_from_primitive([f], lambda w: 0, R=6)
    assert rep.verdict == "fixed" and f(rep.point) == rep.point


def test_fixed_point_trivial_group():
    rep = cc.fixed_point_from_primitive([], lambda w: 0)
    assert rep.verdict == "fixed" and rep.point == 0


def test_fixed_point_negative_for_rotation():
    r = rotation(Q(1, 3))
    assert cc.fixed_point_from_primitive([r], lambda w: 0, R=6).verdict == "not_primitive"
    # floor(n/3) is the honest primitive on <r>; the adjusted lifts are translations
    phi = lambda w: sum(1 if x > 0 else -1 for x in w.letters()) // 3  # noqa: E731
    rep = cc.fixed_point_from_primitive([r], phi, R=6)
    assert rep.verdict == "no_common_fixed_point"


def test_primitive_requires_fixed_point():
    with pytest.raises(ValueError):
        cc.primitive_from_fixed_point([rotation(Q(1, 3))], 0)


@pytest.mark.parametrize("q", range(1, 13))
def test_rotation_number_of_rotations(q):
    for p in range(q):
        if math.gcd(p, q) == 1:
            rep = cc.rotation_number(rotation(Q(p, q)))
            assert rep.exact == Q(p, q)
            assert len(rep.orbit) == len(set(rep.orbit)) == q
            assert rep.lo <= Q(p, q) <= rep.hi


def test_rotation_number_conjugate_of_half_turn():
    h = PLCircleLift(["0", "1/3"], ["0", "1/2"])
    f = cc.compose(h, cc.compose(rotation(Q(1, 2)), cc.inverse(h)))
    assert not f.is_translation()
    rep = cc.rotation_number(f)
    assert rep.exact == Q(1, 2) and len(rep.orbit) == 2
    for x in rep.orbit:
        assert f(f(x)) == x + 1


def test_rotation_number_with_fixed_point():
    f = PLCircleLift(["0", "1/4", "1/2"], ["0", "1/3", "1/2"])
    assert cc.rotation_number(f).exact == 0


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_rotation_interval_width_and_powers(seed):
    f = pl_from_seed(seed)
    rep = cc.rotation_number(f, N=16, period_cap=0)
    assert rep.hi - rep.lo < Q(1, 16)
    rep2 = cc.rotation_number(cc.power(f, 2), N=8, period_cap=0)
    # rho(f^2) = 2 rho(f): the two intervals must be compatible
    assert rep2.lo <= 2 * rep.hi and 2 * rep.lo <= rep2.hi


def test_json_round_trip():
    f = PLCircleLift(["0", "1/3", "1/2"], ["1/10", "1/5", "4/5"])
    assert PLCircleLift.from_json(f.to_json()) == f
    assert PLCircleLift.from_json({"rot": "2/7"}) == rotation(Q(2, 7))
