"""Group contexts: axioms, text round trips, ball enumeration."""

import random

import pytest

from sclkit.groups import (
    CyclicZ,
    DirectProduct,
    FreeGroup,
    GroupHom,
    SwapProduct,
    SymmetricGroup,
    TableGroup,
    cycle_count,
    perm_compose,
    perm_identity,
    perm_inverse,
    proj_left,
    proj_right,
)


def check_axioms(ctx, rng, samples=200, size=6):
    e = ctx.identity
    for _ in range(samples):
        a = ctx.sample(rng, rng.randrange(0, size))
        b = ctx.sample(rng, rng.randrange(0, size))
        c = ctx.sample(rng, rng.randrange(0, size))
        assert ctx.eq(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)))
        assert ctx.eq(ctx.mul(a, ctx.inv(a)), e)
        assert ctx.eq(ctx.mul(e, a), a)
        assert ctx.eq(ctx.parse(ctx.text(a)), a)
        assert ctx.canonical(a) == ctx.canonical(ctx.parse(ctx.text(a)))


def test_free_group_axioms_and_text():
    check_axioms(FreeGroup(2), random.Random(200))
    check_axioms(FreeGroup.on("xy"), random.Random(201))


def test_free_group_ball_sizes():
    f2 = FreeGroup(2)
    assert len(f2.ball(0)) == 1
    assert len(f2.ball(1)) == 5
    assert len(f2.ball(2)) == 17
    assert len(f2.sphere(3)) == 4 * 3 * 3


def test_free_group_on_letters():
    fxy = FreeGroup.on("xy")
    assert fxy.name == "free:xy"
    assert [str(g) for g in fxy.generators()] == ["x", "y"]
    g = fxy.parse("xyXY")
    assert g.letters == (24, 25, -24, -25)
    with pytest.raises(ValueError):
        fxy.parse("ab")


def test_cyclic_z():
    z = CyclicZ()
    check_axioms(z, random.Random(202))
    assert z.parse("-3") == -3
    assert z.parse("") == 0
    assert z.power(2, 5) == 10
    assert sorted(z.ball(2)) == [-2, -1, 0, 1, 2]


def test_direct_product_axioms_and_nested_parse():
    prod = DirectProduct(FreeGroup(2), CyclicZ())
    check_axioms(prod, random.Random(203))
    nested = DirectProduct(DirectProduct(FreeGroup(2), CyclicZ()), CyclicZ())
    check_axioms(nested, random.Random(204), samples=100)
    # text of a nested element contains commas and parens; parse must split
    # at the top level only
    g = ((FreeGroup(2).parse("ab"), 3), -2)
    assert nested.eq(nested.parse(nested.text(g)), g)


def test_swap_product_realizes_commuting_supports():
    f2 = FreeGroup(2)
    sp = SwapProduct(f2)
    check_axioms(sp, random.Random(205), samples=150, size=4)
    a = f2.parse("a")
    f = ((a, f2.identity), 0)
    g = ((f2.identity, f2.identity), 1)
    c = sp.conjugate(g, sp.inv(f))
    assert sp.eq(sp.mul(f, c), sp.mul(c, f))
    assert sp.eq(sp.commutator(f, g), ((a, f2.inv(a)), 0))


def test_permutation_primitives():
    # permutations are 0-indexed image tuples; compose applies left first
    e = perm_identity(4)
    swap01 = (1, 0, 2, 3)
    assert perm_compose(e, swap01) == swap01
    p = (1, 2, 0, 3)
    assert perm_compose(p, perm_inverse(p)) == e
    swap12 = (0, 2, 1, 3)
    assert perm_compose(swap01, swap12) == (2, 0, 1, 3)
    assert cycle_count(e) == 4
    assert cycle_count((1, 2, 3, 0)) == 1
    assert cycle_count((1, 0, 3, 2)) == 2


def test_symmetric_group():
    s4 = SymmetricGroup(4)
    check_axioms(s4, random.Random(206))
    assert len(list(s4.elements())) == 24
    assert len(s4.ball(6)) == 24
    assert s4.parse("2,1,3,4") == (1, 0, 2, 3)
    assert s4.text((1, 0, 2, 3)) == "2,1,3,4"
    with pytest.raises(ValueError):
        s4.parse("2,2,3,4")


def test_table_group_from_text():
    # Z/3 as an explicit multiplication table
    text = "3\n0 1 2\n1 2 0\n2 0 1\n"
    tg = TableGroup.from_text(text, name="table:z3")
    assert len(list(tg.elements())) == 3
    check_axioms(tg, random.Random(207), samples=60, size=3)
    assert tg.mul(1, 2) == 0
    assert tg.inv(1) == 2


def test_table_group_rejects_non_group_table():
    # row 1 is not a permutation, so no inverse exists
    broken = "2\n0 1\n1 1\n"
    with pytest.raises(ValueError):
        TableGroup.from_text(broken, name="table:bad")


def test_group_hom_projections():
    prod = DirectProduct(FreeGroup(2), CyclicZ())
    rng = random.Random(208)
    left = proj_left(prod)
    right = proj_right(prod)
    assert left.check_on_samples(rng, count=200)
    assert right.check_on_samples(rng, count=200)
    g = (FreeGroup(2).parse("ab"), 5)
    assert str(left(g)) == "ab"
    assert right(g) == 5


def test_group_hom_detects_non_homomorphism():
    z = CyclicZ()
    bad = GroupHom(z, z, lambda k: k * k, name="square")
    assert not bad.check_on_samples(random.Random(209), count=200)


def test_ball_is_monotone_and_deduplicated():
    f2 = FreeGroup(2)
    b2 = f2.ball(2)
    assert len({f2.canonical(g) for g in b2}) == len(b2)
    assert set(f2.canonical(g) for g in f2.ball(1)) <= set(
        f2.canonical(g) for g in b2
    )
