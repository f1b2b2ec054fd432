import itertools
import random
from fractions import Fraction

import pytest

from arithact import amenability as am
from arithact import freegroup as fg
from arithact.groups import FreeAbelianBackend, FreeGroupBackend

Z2 = FreeAbelianBackend(2)


def direct_overlap(F, a):
    shifted = {tuple(x + y for x, y in zip(a, f)) for f in F}
    return len(shifted & set(F))


def test_box_examples():
    S = am.unit_generators(2)
    rep = am.check_folner(am.FolnerCandidate(Z2, am.box(2, 11), S, Fraction(1, 10)))
    assert rep.ok and rep.details["min_ratio"] == "10/11"
    assert direct_overlap(am.box(2, 11), (1, 0)) == 110
    rep = am.check_folner(am.FolnerCandidate(Z2, am.box(2, 2), S, Fraction(1, 10)))
    assert rep.verdict == "fail" and rep.witness["ratio"] == "1/2"


def test_singleton_fails():
    b = FreeGroupBackend(2)
    a = b.generators()[0]
    rep = am.check_folner(am.FolnerCandidate(b, frozenset([b.identity()]), (a,), Fraction(99, 100)))
    assert rep.verdict == "fail" and rep.witness["ratio"] == "0"


def test_empty_candidate_rejected():
    with pytest.raises(ValueError):
        am.FolnerCandidate(Z2, frozenset(), (), Fraction(1, 2))


@pytest.mark.parametrize("d,S,eps,n", [
    (2, None, Fraction(1, 10), 11),
    (1, [(1,), (-1,)], Fraction(1, 100), 101),
    (3, None, Fraction(1, 4), 5),
    (2, None, Fraction(1), 2),      # strict inequality: the 1-cube has overlap 0, not > 0
    (2, None, Fraction(3, 2), 1),
])
def test_folner_box_minimal(d, S, eps, n):
    got, cand = am.folner_box(d, S, eps)
    assert got == n
    assert am.check_folner(cand).ok
    if n > 1:
        S2 = cand.S
        assert not am.check_folner(am.FolnerCandidate(cand.backend, am.box(d, n - 1), S2, eps)).ok


def test_folner_monotone_in_eps():
    S = am.unit_generators(2)
    rng = random.Random(0)
    for _ in range(50):
        F = frozenset(rng.sample(sorted(am.box(2, 6)), rng.randint(1, 36)))
        eps = Fraction(rng.randint(1, 20), 20)
        if am.check_folner(am.FolnerCandidate(Z2, F, S, eps)).ok:
            assert am.check_folner(am.FolnerCandidate(Z2, F, S, eps + Fraction(1, 7))).ok


def test_overlap_matches_direct_count():
    rng = random.Random(1)
    for _ in range(30):
        F = frozenset(rng.sample(sorted(am.box(2, 5)), rng.randint(1, 25)))
        a = (rng.randint(-2, 2), rng.randint(-2, 2))
        assert am.overlap(Z2, F, a) == direct_overlap(F, a)


def test_f2_overlap_bound_on_balls_and_samples():
    for r in range(4):
        assert am.f2_overlap_bound(fg.ball(2, r)).ok
    rep = am.f2_folner_sweep(R=3, samples=100, eps=Fraction(1, 2))
    assert rep.ok


def test_f2_overlap_bound_exhaustive_small():
    # every nonempty subset of the radius-1 ball
    words = fg.ball(2, 1)
    for k in range(1, len(words) + 1):
        for F in itertools.combinations(words, k):
            assert am.f2_overlap_bound(F).ok


def test_f2_sweep_quarter():
    assert am.f2_folner_sweep(R=3, samples=50, eps=Fraction(1, 4)).ok


@pytest.mark.parametrize("k,R", [(2, 6), (2, 1), (3, 3)])
def test_ponzi_scheme(k, R):
    scheme = am.build_ponzi_free(k, R)
    rep = am.verify_ponzi(scheme)
    assert rep.ok
    assert rep.details["wealth_identity"] == 2 * k + 1
    assert rep.details["wealth_interior"] == ([2 * k - 1] if R > 1 else [])
    assert rep.details["wealth_total"] == fg.ball_size(k, R) == len(scheme.M)


def test_ponzi_preimage_counts():
    scheme = am.build_ponzi_free(2, 4)
    pre = scheme.preimages()
    for g, n in pre.items():
        if len(g) < 4:
            assert n == (4 if g.is_identity() else 3)
        else:
            assert n == 0


def test_ponzi_detects_bad_map():
    scheme = am.build_ponzi_free(2, 3)
    g = fg.ReducedWord.parse("ab")
    scheme.M[g] = fg.ReducedWord.parse("ba")
    assert not am.verify_ponzi(scheme).ok


def test_wealth_table_text():
    text = am.wealth_table(am.build_ponzi_free(2, 2))
    lines = text.splitlines()
    assert len(lines) == 4 and lines[1].split()[-2:] == ["5", "5"]


def test_abelian_ball_sizes():
    assert am.abelian_ball_size(2, 10) == 221
    for d in (1, 2, 3):
        assert am.ball_sizes(FreeAbelianBackend(d), 5) == [am.abelian_ball_size(d, r) for r in range(6)]


def test_growth_reports():
    rep = am.growth_obstruction(FreeAbelianBackend(2), 10)
    assert rep.ok and rep.details["ball_sizes"][10] == 221
    assert rep.details["first_non_doubling_radius"] == 2
    rep = am.growth_obstruction(FreeGroupBackend(2), 3)
    assert rep.ok and rep.details["ball_sizes"][3] == 53
    rep = am.growth_obstruction(FreeAbelianBackend(1), 50)
    assert Fraction(rep.details["ratio"]) < Fraction(2) * Fraction(51, 50)


def test_paradoxical_decomposition():
    rep = am.verify_paradoxical(am.build_paradoxical_f2(), 4)
    assert rep.ok and all(rep.details["checks"].values())
    dec = am.build_paradoxical_f2()
    a = fg.ReducedWord.parse("a")
    assert dec.pieces["A1"](fg.ReducedWord.identity())
    assert dec.pieces["A1"](a)   # so e lies in a^-1 A1


def test_paradoxical_negative_control():
    rep = am.verify_paradoxical(am.build_paradoxical_f2(include_identity=False), 3)
    assert rep.verdict == "fail"
    assert rep.details["checks"]["union"] is False
    assert rep.witness["word"] == "e"


def test_report_json_shape():
    rep = am.verify_paradoxical(am.build_paradoxical_f2(), 2).to_json()
    assert set(rep) >= {"check", "parameters", "verdict", "witness"}
