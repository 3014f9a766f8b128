"""Text specs for groups, pairs, and quasimorphisms round-trip with names."""

import os
import tempfile
from fractions import Fraction

import pytest

from sclkit.braids import BraidGroup
from sclkit.groups import CyclicZ, DirectProduct, FreeGroup, SymmetricGroup
from sclkit.quasimorphisms import brooks_homogenized
from sclkit.specs import SpecError, parse_group, parse_group_pair, parse_qm, parse_section
from sclkit.words import word


@pytest.mark.parametrize(
    "spec,kind",
    [
        ("z", CyclicZ),
        ("free:2", FreeGroup),
        ("free:xy", FreeGroup),
        ("braid:3", BraidGroup),
        ("braid:4", BraidGroup),
        ("perm:5", SymmetricGroup),
        ("product:free:2,z", DirectProduct),
        ("product:product:free:2,z,z", DirectProduct),
    ],
)
def test_parse_group_kinds_and_name_round_trip(spec, kind):
    g = parse_group(spec)
    assert isinstance(g, kind)
    again = parse_group(g.name)
    assert type(again) is type(g)
    assert again.name == g.name


def test_parse_group_details():
    assert str(parse_group("free:xy").generators()[0]) == "x"
    assert parse_group("braid:3").n == 3
    assert parse_group("perm:4").n == 4
    prod = parse_group("product:free:2,z")
    assert isinstance(prod.left, FreeGroup) and isinstance(prod.right, CyclicZ)


def test_parse_group_table_file():
    text = "3\n0 1 2\n1 2 0\n2 0 1\n"
    with tempfile.NamedTemporaryFile("w", suffix=".table", delete=False) as f:
        f.write(text)
        path = f.name
    try:
        tg = parse_group(f"table:{path}")
        assert len(list(tg.elements())) == 3
    finally:
        os.unlink(path)


@pytest.mark.parametrize(
    "bad",
    ["", "braid:1", "braid:x", "free:", "perm:0", "product:z", "bogus:3", "free:a1"],
)
def test_parse_group_rejects(bad):
    with pytest.raises(SpecError):
        parse_group(bad)


def test_parse_group_pair_modes():
    assert parse_group_pair("free:2").mode == "ordinary"
    assert parse_group_pair("braid:3/pure").mode == "mixed"
    assert parse_group_pair("braid:3/pure-ordinary").mode == "ordinary"
    assert parse_group_pair("braid:3/comm").mode == "mixed"
    assert parse_group_pair("product:free:2,z/left").mode == "mixed"


def test_parse_group_pair_name_round_trip():
    for spec in [
        "free:2",
        "braid:3/pure",
        "braid:3/pure-ordinary",
        "braid:3/comm",
        "product:free:2,z/left",
    ]:
        pair = parse_group_pair(spec)
        assert parse_group_pair(pair.name).name == pair.name


@pytest.mark.parametrize(
    "bad",
    ["braid:4/pure", "free:2/pure", "free:2/comm", "z/left", "braid:3/unknown"],
)
def test_parse_group_pair_rejects(bad):
    with pytest.raises(SpecError):
        parse_group_pair(bad)


def test_parse_qm_brooks_and_homogenized():
    qm = parse_qm("brooks(w=abAB)")
    assert qm(word("abAB")) == 1
    assert not qm.homogeneous
    h = parse_qm("homog(brooks(w=xyXY))")
    assert h.homogeneous
    assert h.defect_upper == 6
    assert h(word("xyXY", 25)) == 1


def test_parse_qm_zero_and_hom():
    with pytest.raises(SpecError):
        parse_qm("zero")
    z = parse_qm("zero", group=CyclicZ())
    assert z(5) == 0
    idx = parse_qm("hom(indexsum)")
    assert idx.context.n == 3
    assert idx(BraidGroup(3).parse("1,2")) == 2


def test_parse_qm_pullback():
    qm = parse_qm("pullback(homog(brooks(w=xyXY)), pr1)")
    assert qm.homogeneous
    assert qm.defect_upper == 6
    assert "pulled back along pr1" in qm.defect_provenance
    from sclkit.scl import alpha_braid

    assert qm(alpha_braid()) == 1


def test_parse_qm_proj_left_pullback():
    group = parse_group("product:free:2,z")
    qm = parse_qm("pullback(homog(brooks(w=abAB)), proj-left)", group=group)
    assert qm((FreeGroup(2).parse("abAB"), 9)) == 1


def test_parse_qm_defect_const_only_for_homog():
    qm = parse_qm("homog(brooks(w=abAB))", defect_const=Fraction(4))
    assert qm.defect_upper == 4
    assert qm.defect_provenance.startswith("user-config")
    with pytest.raises(SpecError):
        parse_qm("brooks(w=abAB)", defect_const=Fraction(4))
    with pytest.raises(SpecError):
        parse_qm("homog(brooks(w=abAB))", defect_const=Fraction(-1))


def test_parse_qm_error_positions():
    with pytest.raises(SpecError) as exc:
        parse_qm("brooks(w=")
    assert "position" in str(exc.value)
    for bad in ["", "brooks()", "brooks(w=a1)", "homog(zero)", "pullback(zero)", "wibble"]:
        with pytest.raises(SpecError):
            parse_qm(bad, group=CyclicZ())


def test_parse_qm_round_trips_with_printed_names():
    for qm in [
        parse_qm("brooks(w=abAB)"),
        parse_qm("homog(brooks(w=xyXY))"),
        parse_qm("pullback(homog(brooks(w=xyXY)), pr1)"),
    ]:
        again = parse_qm(qm.name, group=qm.context)
        assert again.name == qm.name
        assert again.defect_upper == qm.defect_upper


def test_parse_qm_group_mismatch():
    with pytest.raises(SpecError):
        parse_qm("brooks(w=abAB)", group=BraidGroup(3))
    with pytest.raises(SpecError):
        parse_qm("pullback(homog(brooks(w=xyXY)), pr1)", group=CyclicZ())


def test_parse_section():
    sec = parse_section("section(quotient=Z, map=z^k)")
    assert sec.name.startswith("section(quotient=Z, map=z^k)")
    sec2 = parse_section("section(quotient=Z, map=s1^k)")
    assert sec2.ambient.n == 3
    round1 = parse_section(sec.name)
    assert round1.name == sec.name
    with pytest.raises(SpecError):
        parse_section("section(quotient=Q)")
