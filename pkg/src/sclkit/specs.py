"""Parsers turning short text specs into live objects.

The grammar is exactly the set of names the objects themselves print, so
``parse_group_pair(pair.name)`` and ``parse_qm(qm.name)`` round-trip.  These
strings are the interchange format shared by the command line and by
certificate files; a verifier rebuilds everything it checks from them.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .braids import BraidGroup, index_sum, pr1
from .extension import (
    SectionData,
    braid_abelianization_section,
    central_z_section,
)
from .groups import (
    CyclicZ,
    DirectProduct,
    FreeGroup,
    GroupContext,
    GroupHom,
    SymmetricGroup,
    TableGroup,
    proj_left,
    proj_right,
)
from .quasimorphisms import (
    Quasimorphism,
    brooks,
    brooks_homogenized,
    hom_qm,
    pullback,
    zero_qm,
)
from .scl import (
    GroupPair,
    braid_commutator_pair,
    braid_pure_pair,
    ordinary_pair,
    product_left_pair,
    pure_ordinary_pair,
)


class SpecError(ValueError):
    """A malformed or unsupported spec string."""


def parse_group(text: str) -> GroupContext:
    """Group spec -> context.

    >>> parse_group("free:2").name
    'free:2'
    >>> str(parse_group("free:xy").generators()[0])
    'x'
    >>> parse_group("product:free:2,z").name
    'product:free:2,z'
    """
    spec = text.strip()
    if spec == "z":
        return CyclicZ()
    head, sep, rest = spec.partition(":")
    if not sep or not rest:
        raise SpecError(f"unknown group spec {text!r}")
    if head == "free":
        if rest.isdigit():
            return FreeGroup(int(rest))
        if rest.isascii() and rest.isalpha() and rest.islower():
            try:
                return FreeGroup.on(rest)
            except ValueError as exc:
                raise SpecError(str(exc)) from exc
        raise SpecError(
            f"free group spec needs a rank or lowercase generator letters: {text!r}"
        )
    if head == "braid":
        if not rest.isdigit() or int(rest) < 2:
            raise SpecError(f"braid group spec needs a strand count >= 2: {text!r}")
        return BraidGroup(int(rest))
    if head == "perm":
        if not rest.isdigit() or int(rest) < 1:
            raise SpecError(f"permutation group spec needs a positive degree: {text!r}")
        return SymmetricGroup(int(rest))
    if head == "product":
        left_text, comma, right_text = rest.rpartition(",")
        if not comma:
            raise SpecError(f"product spec needs two comma-separated factors: {text!r}")
        return DirectProduct(parse_group(left_text), parse_group(right_text))
    if head == "table":
        path = Path(rest)
        if not path.is_file():
            raise SpecError(f"no multiplication table file at {rest!r}")
        group = TableGroup.from_text(path.read_text(), name=spec)
        return group
    raise SpecError(f"unknown group spec {text!r}")


_PAIR_SUFFIXES = ("pure", "pure-ordinary", "comm", "left")


def parse_group_pair(text: str) -> GroupPair:
    """Pair spec -> group pair.

    A bare group spec means the ordinary pair (G, G); a ``/suffix`` selects
    one of the built-in normal subgroups.
    """
    spec = text.strip()
    base, slash, suffix = spec.rpartition("/")
    if not slash:
        return ordinary_pair(parse_group(spec))
    if suffix not in _PAIR_SUFFIXES:
        raise SpecError(
            f"unknown pair suffix {suffix!r} in {text!r}; expected one of {', '.join(_PAIR_SUFFIXES)}"
        )
    if suffix in ("pure", "pure-ordinary"):
        if base != "braid:3":
            raise SpecError("the pure-braid pair is only built on 3 strands")
        return braid_pure_pair() if suffix == "pure" else pure_ordinary_pair()
    ctx = parse_group(base)
    if suffix == "comm":
        if not isinstance(ctx, BraidGroup):
            raise SpecError("the commutator-subgroup pair is only built on braid groups")
        return braid_commutator_pair(ctx.n)
    if not isinstance(ctx, DirectProduct) or not isinstance(ctx.right, CyclicZ):
        raise SpecError("the left-factor pair needs a product group with right factor z")
    return product_left_pair(ctx.left)


class _QmParser:
    """Recursive-descent parser for quasimorphism specs.

    Grammar:
        qm   := "zero" | "hom(" name ")" | "brooks(w=" word ")"
              | "homog(" qm ")" | "pullback(" qm ", " map ")"
        map  := "pr1" | "proj-left" | "proj-right"

    Exact homogenisation exists only for the counting quasimorphisms, so
    ``homog`` accepts a ``brooks`` body and nothing else.
    """

    def __init__(self, text: str, group: GroupContext | None, defect_const):
        self.text = text
        self.pos = 0
        self.group = group
        self.defect_const = defect_const

    def fail(self, message: str) -> SpecError:
        return SpecError(f"{message} at position {self.pos} in {self.text!r}")

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, ch: str) -> None:
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            raise self.fail(f"expected {ch!r}")
        self.pos += 1

    def ident(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] in "_-"
        ):
            self.pos += 1
        if self.pos == start:
            raise self.fail("expected a name")
        return self.text[start : self.pos]

    def until(self, stop: str) -> str:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] != stop:
            self.pos += 1
        return self.text[start : self.pos]

    def parse(self) -> Quasimorphism:
        qm = self.expr()
        self.skip_ws()
        if self.pos != len(self.text):
            raise self.fail("trailing input")
        return qm

    def expr(self) -> Quasimorphism:
        name = self.ident()
        if name == "zero":
            if self.group is None:
                raise self.fail("the zero quasimorphism needs a group")
            self.no_override("zero")
            return zero_qm(self.group)
        if name == "hom":
            return self.hom_expr()
        if name == "brooks":
            return self.brooks_expr(homogenized=False)
        if name == "homog":
            self.expect("(")
            self.skip_ws()
            inner = self.ident()
            if inner != "brooks":
                raise self.fail("exact homogenisation only wraps a counting quasimorphism")
            qm = self.brooks_expr(homogenized=True)
            self.expect(")")
            return qm
        if name == "pullback":
            return self.pullback_expr()
        raise self.fail(f"unknown quasimorphism {name!r}")

    def no_override(self, kind: str) -> None:
        if self.defect_const is not None:
            raise SpecError(
                f"a defect override only applies to homogenised counting "
                f"quasimorphisms, not to {kind!r}"
            )

    def hom_expr(self) -> Quasimorphism:
        self.expect("(")
        name = self.ident()
        self.expect(")")
        if name != "indexsum":
            raise self.fail(f"unknown homomorphism {name!r}; only 'indexsum' is built in")
        self.no_override("hom")
        ctx = self.group if self.group is not None else BraidGroup(3)
        if not isinstance(ctx, BraidGroup):
            raise SpecError(f"hom(indexsum) lives on braid groups, not {ctx.name}")
        return hom_qm(ctx, index_sum, "indexsum")

    def brooks_expr(self, homogenized: bool) -> Quasimorphism:
        self.expect("(")
        self.skip_ws()
        key = self.ident()
        if key != "w":
            raise self.fail("counting quasimorphisms take a single argument w=<word>")
        self.expect("=")
        body = self.until(")").strip()
        self.expect(")")
        ctx = self.group
        if ctx is not None and not isinstance(ctx, FreeGroup):
            raise SpecError(f"counting quasimorphisms live on free groups, not {ctx.name}")
        try:
            if ctx is not None:
                pattern = ctx.parse(body)
            else:
                from .words import word

                pattern = word(body)
        except ValueError as exc:
            raise SpecError(str(exc)) from exc
        if not pattern.letters:
            raise SpecError("the counting pattern must be a nonempty word")
        if homogenized:
            return brooks_homogenized(pattern, context=ctx, defect_override=self.defect_const)
        self.no_override("brooks")
        return brooks(pattern, context=ctx)

    def pullback_expr(self) -> Quasimorphism:
        self.expect("(")
        start = self.pos
        depth = 0
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch == "(":
                depth += 1
            elif ch == ")":
                if depth == 0:
                    break
                depth -= 1
            elif ch == "," and depth == 0:
                break
            self.pos += 1
        inner_text = self.text[start : self.pos].strip()
        self.expect(",")
        map_name = self.ident()
        self.expect(")")
        hom = self.resolve_map(map_name)
        inner = parse_qm(inner_text, group=hom.codomain, defect_const=self.defect_const)
        return pullback(inner, hom)

    def resolve_map(self, name: str) -> GroupHom:
        if name == "pr1":
            if self.group is not None and self.group.name != "braid:3":
                raise SpecError(f"pr1 is the pure-braid projection on braid:3, not {self.group.name}")
            return pr1()
        if name in ("proj-left", "proj_left", "proj-right", "proj_right"):
            if not isinstance(self.group, DirectProduct):
                raise SpecError(f"{name} needs a product group, got "
                                f"{self.group.name if self.group is not None else 'none'}")
            return proj_left(self.group) if "left" in name else proj_right(self.group)
        raise self.fail(f"unknown map {name!r}")


def parse_qm(
    text: str,
    group: GroupContext | None = None,
    defect_const: Fraction | int | str | None = None,
) -> Quasimorphism:
    """Quasimorphism spec -> quasimorphism.

    ``group`` pins the domain where the spec alone does not determine it
    (zero, hom, projections).  ``defect_const`` replaces the derived defect
    bound of a homogenised counting quasimorphism; its provenance is then
    recorded as user-config.

    >>> parse_qm("homog(brooks(w=xyXY))").defect_upper
    Fraction(6, 1)
    >>> parse_qm("pullback(homog(brooks(w=xyXY)), pr1)").name
    'pullback(homog(brooks(w=xyXY)), pr1)'
    """
    override = None if defect_const is None else Fraction(defect_const)
    if override is not None and override <= 0:
        raise SpecError("a defect override must be positive")
    return _QmParser(text, group, override).parse()


def parse_section(text: str) -> SectionData:
    """Section spec -> section data, accepting the printed name with or
    without its trailing ``on <group>`` part."""
    spec = text.strip()
    body, _, tail = spec.partition(" on ")
    body = body.strip()
    tail = tail.strip()
    if body == "section(quotient=Z, map=z^k)":
        if not tail:
            return central_z_section()
        ctx = parse_group(tail)
        if not isinstance(ctx, DirectProduct) or not isinstance(ctx.right, CyclicZ):
            raise SpecError("the central section needs a product group with right factor z")
        return central_z_section(ctx.left)
    if body == "section(quotient=Z, map=s1^k)":
        if not tail:
            return braid_abelianization_section()
        ctx = parse_group(tail)
        if not isinstance(ctx, BraidGroup):
            raise SpecError("the index-sum section needs a braid group")
        return braid_abelianization_section(ctx.n)
    raise SpecError(f"unknown section spec {text!r}")
