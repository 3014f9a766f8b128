"""Counting quasimorphisms against a dynamic-programming oracle."""

import random
from fractions import Fraction

import pytest

from sclkit.groups import DirectProduct, FreeGroup, CyclicZ, proj_left
from sclkit.quasimorphisms import (
    CertifiedValue,
    brooks,
    brooks_homogenized,
    count_copies,
    defect_bound_counting,
    defect_search,
    hom_qm,
    homogenize,
    homogenize_counting_exact,
    invariance_check,
    pullback,
    zero_qm,
)
from sclkit.words import Word, commutator, random_reduced, word


def dp_count(pattern, text):
    """Max number of disjoint occurrences of pattern in text, by DP."""
    m, n = len(pattern), len(text)
    if m == 0 or m > n:
        return 0
    best = [0] * (n + 1)
    for i in range(1, n + 1):
        best[i] = best[i - 1]
        if i >= m and text[i - m : i] == pattern:
            best[i] = max(best[i], best[i - m] + 1)
    return best[n]


def test_count_copies_matches_dp_oracle_exhaustively():
    from sclkit.words import words_of_length

    for pattern in [word("ab"), word("aba"), word("abA")]:
        for length in range(0, 7):
            for letters in words_of_length(2, length):
                g = Word(2, letters)
                assert count_copies(pattern, g) == dp_count(pattern.letters, letters)


def test_count_copies_matches_dp_oracle_random():
    rng = random.Random(400)
    for _ in range(800):
        p = Word(2, random_reduced(rng, 2, rng.randrange(1, 5)))
        g = Word(2, random_reduced(rng, 2, rng.randrange(0, 30)))
        assert count_copies(p, g) == dp_count(p.letters, g.letters)


def test_brooks_antisymmetry():
    rng = random.Random(401)
    h = brooks(word("abAB"))
    for _ in range(300):
        g = Word(2, random_reduced(rng, 2, rng.randrange(0, 16)))
        assert h(~g) == -h(g)


def test_brooks_known_values():
    h = brooks(word("xyXY"))
    c = commutator(word("x", 25), word("y", 25))
    for n in (1, 2, 5):
        assert h(c**n) == n
    assert h(word("xy", 25)) == 0


def test_defect_bound_counting():
    assert defect_bound_counting(word("a")) == 0
    assert defect_bound_counting(word("x", 25)) == 0
    assert defect_bound_counting(word("ab")) == 3
    assert defect_bound_counting(word("xyXY")) == 3


def test_homogenized_exact_known_values():
    w = word("xyXY")
    c = commutator(word("x", 25), word("y", 25))
    assert homogenize_counting_exact(w, c) == 1
    assert homogenize_counting_exact(w, word("x", 25)) == 0
    assert homogenize_counting_exact(w, c**3) == 3


def test_homogenized_qm_is_homogeneous():
    rng = random.Random(402)
    h = brooks_homogenized(word("abAB"))
    ctx = h.context
    for _ in range(60):
        g = Word(2, random_reduced(rng, 2, rng.randrange(0, 8)))
        base = h(g)
        for n in (-2, 0, 3):
            assert h(ctx.power(g, n)) == n * base


def test_homogenize_interval_contains_exact_value():
    w = word("xyXY")
    h = brooks(w)
    c = commutator(word("x", 25), word("y", 25))
    exact = homogenize_counting_exact(w, c)
    for n_max in (4, 16, 48):
        cv = homogenize(h, c, n_max)
        assert cv.radius == Fraction(3, n_max)
        assert cv.contains(exact)


def test_homogenize_of_homogeneous_is_exact():
    h = brooks_homogenized(word("abAB"))
    g = commutator(word("a"), word("b"))
    cv = homogenize(h, g, 5)
    assert cv == CertifiedValue(Fraction(1), Fraction(0))


def test_homogenize_without_defect_has_unknown_radius():
    h = brooks(word("ab"))
    stripped = type(h)(
        name=h.name,
        context=h.context,
        eval_fn=h.eval_fn,
        homogeneous=False,
        defect_upper=None,
    )
    cv = homogenize(stripped, word("ab"), 8)
    assert cv.radius is None
    assert not cv.contains(cv.value)


def test_homogenize_rejects_bad_truncation():
    with pytest.raises(ValueError):
        homogenize(brooks(word("ab")), word("a"), 0)


def test_defect_search_monotone_and_below_certified_bound():
    h = brooks(word("ab"))
    prev = Fraction(0)
    for radius in (2, 4, 6):
        res = defect_search(h, radius)
        assert res.lower >= prev
        assert res.lower <= h.defect_upper
        prev = res.lower
    assert res.pairs_checked > 0
    if res.witness is not None:
        g, hh = res.witness
        assert abs(h(g * hh) - h(g) - h(hh)) == res.lower


def test_defect_search_finds_a_positive_gap():
    h = brooks_homogenized(word("abAB"))
    res = defect_search(h, 6)
    assert 0 < res.lower <= h.defect_upper


def test_homogeneous_qm_is_conjugation_invariant_in_own_group():
    h = brooks_homogenized(word("abAB"))
    ctx = h.context
    report = invariance_check(
        h, conjugators=ctx.ball(2), targets=[ctx.parse("abAB"), ctx.parse("ab")]
    )
    assert report.ok
    assert report.checked == len(ctx.ball(2)) * 2


def test_pullback_carries_values_defect_and_provenance():
    prod = DirectProduct(FreeGroup(2), CyclicZ())
    base = brooks_homogenized(word("abAB"))
    phi = pullback(base, proj_left(prod), rng=random.Random(403), samples=100)
    assert phi.context is prod
    assert phi.defect_upper == base.defect_upper
    assert phi.defect_provenance.endswith("; pulled back along proj-left")
    g = (FreeGroup(2).parse("abAB"), 7)
    assert phi(g) == base(FreeGroup(2).parse("abAB")) == 1
    assert phi.homogeneous


def test_pullback_rejects_a_non_homomorphism():
    from sclkit.groups import GroupHom

    z = CyclicZ()
    bad = GroupHom(z, z, lambda k: k * k, "square")
    with pytest.raises(ValueError):
        pullback(hom_qm(z, lambda k: k, "id"), bad, rng=random.Random(404))


def test_zero_and_hom_qms():
    z = CyclicZ()
    zq = zero_qm(z)
    assert zq(17) == 0 and zq.defect_upper == 0 and zq.homogeneous
    hq = hom_qm(z, lambda k: 3 * k, "triple")
    assert hq(4) == 12
    assert defect_search(hq, 5).lower == 0
