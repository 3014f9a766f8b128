"""Braid normal forms and the pure-braid coordinate splitting.

The core oracle: Garside normal forms must be invariant under random
applications of the defining relations (far commutation, the braid relation,
free insertion/cancellation), since those generate all equalities.
"""

import random

import pytest

from sclkit.braids import (
    BraidGroup,
    P3Coordinates,
    b3_equal_fast,
    braid,
    braid_equal,
    format_braid,
    full_twist,
    half_twist,
    index_section,
    index_sum,
    is_pure,
    nf_to_letters,
    normal_form,
    p3_assemble,
    p3_coordinates,
    pr1,
    underlying_permutation,
)
from sclkit.words import Word, random_reduced


def random_braid(rng, n, length):
    letters = []
    for _ in range(length):
        i = rng.randrange(1, n)
        letters.append(i if rng.random() < 0.5 else -i)
    return braid(",".join(str(l) for l in letters), n)


def rewrite_once(rng, letters, n):
    """Apply one random defining relation or free move to a letter list."""
    letters = list(letters)
    moves = ["insert"]
    if letters:
        moves.append("cancel_site" if len(letters) >= 2 else "insert")
    if len(letters) >= 2:
        moves.append("commute")
    if len(letters) >= 3:
        moves.append("braid_rel")
    move = rng.choice(moves)
    if move == "insert":
        pos = rng.randrange(0, len(letters) + 1)
        i = rng.randrange(1, n)
        sign = 1 if rng.random() < 0.5 else -1
        letters[pos:pos] = [sign * i, -sign * i]
    elif move == "cancel_site":
        sites = [
            j for j in range(len(letters) - 1) if letters[j] == -letters[j + 1]
        ]
        if sites:
            j = rng.choice(sites)
            del letters[j : j + 2]
    elif move == "commute":
        sites = [
            j
            for j in range(len(letters) - 1)
            if abs(abs(letters[j]) - abs(letters[j + 1])) >= 2
        ]
        if sites:
            j = rng.choice(sites)
            letters[j], letters[j + 1] = letters[j + 1], letters[j]
    elif move == "braid_rel":
        sites = []
        for j in range(len(letters) - 2):
            a, b, c = letters[j : j + 3]
            if a > 0 and b > 0 and c > 0 and a == c and abs(a - b) == 1:
                sites.append(j)
        if sites:
            j = rng.choice(sites)
            a, b = letters[j], letters[j + 1]
            letters[j : j + 3] = [b, a, b]
    return letters


@pytest.mark.parametrize("n", [3, 4])
def test_normal_form_invariant_under_relations(n):
    rng = random.Random(300 + n)
    for _ in range(60):
        b = random_braid(rng, n, rng.randrange(0, 10))
        nf = normal_form(b)
        letters = list(b.letters)
        for _ in range(12):
            letters = rewrite_once(rng, letters, n)
        rewritten = braid(",".join(str(l) for l in letters), n)
        assert normal_form(rewritten) == nf
        assert braid_equal(b, rewritten)


def test_normal_form_round_trip():
    rng = random.Random(301)
    for _ in range(100):
        b = random_braid(rng, 3, rng.randrange(0, 12))
        back = braid(",".join(str(l) for l in nf_to_letters(normal_form(b))), 3)
        assert braid_equal(b, back)


def test_braid_parse_and_format():
    b = braid("1,2,-1", 3)
    assert format_braid(b) == "1,2,-1"
    assert braid("", 3).letters == ()
    with pytest.raises(ValueError):
        braid("3", 3)
    with pytest.raises(ValueError):
        braid("0", 3)


def test_b3_equal_fast_agrees_with_normal_forms():
    rng = random.Random(302)
    for _ in range(150):
        a = random_braid(rng, 3, rng.randrange(0, 9))
        b = random_braid(rng, 3, rng.randrange(0, 9))
        assert b3_equal_fast(a, b) == braid_equal(a, b)
        ctx = BraidGroup(3)
        conj = ctx.conjugate(random_braid(rng, 3, 3), a)
        same = ctx.mul(ctx.mul(a, b), ctx.inv(b))
        assert b3_equal_fast(a, same)
        assert b3_equal_fast(conj, a) == braid_equal(conj, a)


def test_underlying_permutation_is_a_homomorphism():
    rng = random.Random(303)
    ctx = BraidGroup(4)
    from sclkit.groups import SymmetricGroup

    s4 = SymmetricGroup(4)
    for _ in range(100):
        a = random_braid(rng, 4, rng.randrange(0, 8))
        b = random_braid(rng, 4, rng.randrange(0, 8))
        assert underlying_permutation(ctx.mul(a, b)) == s4.mul(
            underlying_permutation(a), underlying_permutation(b)
        )


def test_half_and_full_twist():
    ctx = BraidGroup(3)
    delta = half_twist(3)
    assert braid_equal(ctx.conjugate(delta, braid("1", 3)), braid("2", 3))
    assert braid_equal(ctx.power(delta, 2), full_twist(3))
    for g in ctx.generators():
        assert braid_equal(
            ctx.mul(full_twist(3), g), ctx.mul(g, full_twist(3))
        )
    assert braid_equal(full_twist(4), BraidGroup(4).power(half_twist(4), 2))


def test_index_sum_and_section():
    rng = random.Random(304)
    ctx = BraidGroup(3)
    for _ in range(100):
        a = random_braid(rng, 3, rng.randrange(0, 10))
        b = random_braid(rng, 3, rng.randrange(0, 10))
        assert index_sum(ctx.mul(a, b)) == index_sum(a) + index_sum(b)
    assert index_sum(half_twist(3)) == 3
    assert index_sum(index_section(-4)) == -4


def test_is_pure():
    assert not is_pure(braid("1", 3))
    assert is_pure(braid("1,1", 3))
    assert is_pure(full_twist(3))
    assert not is_pure(half_twist(3))
    alpha = BraidGroup(3).commutator(braid("1,1", 3), braid("2,2", 3))
    assert is_pure(alpha)


def test_braid_group_context_round_trip():
    ctx = BraidGroup(3)
    rng = random.Random(305)
    for _ in range(60):
        g = ctx.sample(rng, rng.randrange(0, 8))
        assert braid_equal(ctx.parse(ctx.text(g)), g)
    assert ctx.is_identity(ctx.mul(braid("1", 3), braid("-1", 3)))
    assert len(ctx.ball(0)) == 1
    assert len(ctx.ball(1)) == 5


def test_p3_round_trip_small():
    rng = random.Random(306)
    for _ in range(60):
        w = Word(25, random_reduced(rng, 25, rng.randrange(0, 10), gen_indices=(24, 25)))
        k = rng.randint(-3, 3)
        coords = p3_coordinates(p3_assemble(w, k))
        assert coords == P3Coordinates(w, k)


def test_p3_coordinates_rejects_non_pure():
    with pytest.raises(ValueError):
        p3_coordinates(braid("1", 3))
    with pytest.raises(ValueError):
        p3_coordinates(braid("1", 4))


def test_p3_splitting_is_multiplicative_in_center():
    # the center coordinate adds; the free part multiplies up to the twist
    rng = random.Random(307)
    ctx = BraidGroup(3)
    for _ in range(40):
        w1 = Word(25, random_reduced(rng, 25, rng.randrange(0, 6), gen_indices=(24, 25)))
        w2 = Word(25, random_reduced(rng, 25, rng.randrange(0, 6), gen_indices=(24, 25)))
        k1, k2 = rng.randint(-2, 2), rng.randint(-2, 2)
        product = ctx.mul(p3_assemble(w1, k1), p3_assemble(w2, k2))
        coords = p3_coordinates(product)
        assert coords.center_exponent == k1 + k2
        assert coords.f2_part == w1 * w2


def test_pr1_multiplicative_on_pure_braids():
    # pr1 is only defined on pure braids, so sample those directly
    hom = pr1()
    assert hom.name == "pr1"
    rng = random.Random(308)
    ctx = BraidGroup(3)
    for _ in range(60):
        w1 = Word(25, random_reduced(rng, 25, rng.randrange(0, 6), gen_indices=(24, 25)))
        w2 = Word(25, random_reduced(rng, 25, rng.randrange(0, 6), gen_indices=(24, 25)))
        a = p3_assemble(w1, rng.randint(-2, 2))
        b = p3_assemble(w2, rng.randint(-2, 2))
        assert hom(ctx.mul(a, b)) == hom(a) * hom(b)
    alpha = ctx.commutator(braid("1,1", 3), braid("2,2", 3))
    assert str(hom(alpha)) == "xyXY"
