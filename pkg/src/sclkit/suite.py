"""The acceptance suite: eleven self-contained checks, one per headline fact.

Each item recomputes its claim from scratch with a per-item seeded rng and
returns a machine-readable pass/fail with a one-line detail.  Items that
produce certificates hand them to the final integrity item, which writes
them to disk, re-verifies them through the file pathway, and confirms that
corrupted copies fail at the named step.
"""

from __future__ import annotations

import contextlib
import io
import os
import random
import tempfile
import time
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import certio
from .braids import (
    BraidGroup,
    braid,
    half_twist,
    index_section,
    index_sum,
    normal_form,
    p3_assemble,
    p3_coordinates,
    pr1,
)
from .extension import (
    braid_abelianization_section,
    central_z_section,
    defect_chain_check,
    extend_via_section,
    restriction_check,
)
from .groups import (
    DirectProduct,
    FreeGroup,
    SwapProduct,
    SymmetricGroup,
    cycle_count,
    perm_identity,
    proj_left,
)
from .norms import FragmentationNorm, PreconditionError, norm_axiom_report
from .quasimorphisms import (
    brooks,
    brooks_homogenized,
    count_copies,
    defect_search,
    homogenize,
    homogenize_counting_exact,
    invariance_check,
    pullback,
    zero_qm,
)
from .scl import (
    alpha_braid,
    bavard_lower,
    commutator_identity_xy,
    conjugate_flip_decomposition,
    power_commutator,
    pure_ordinary_pair,
    braid_pure_pair,
    upper_from_decomposition,
    verify_decomposition,
)
from .words import Word, random_reduced, reduce_letters, word


@dataclass(frozen=True)
class Item:
    key: str
    slug: str
    budget: float
    fn: Callable


@dataclass
class ItemResult:
    key: str
    slug: str
    ok: bool
    seconds: float
    budget: float
    detail: str
    certificates: list = field(default_factory=list)

    def line(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        return f"{verdict} {self.key:>2} {self.slug} ({self.seconds:.2f}s): {self.detail}"


@dataclass
class SuiteReport:
    seed: int
    results: list[ItemResult]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def lines(self) -> list[str]:
        out = [r.line() for r in self.results]
        passed = sum(1 for r in self.results if r.ok)
        out.append(f"{passed}/{len(self.results)} items passed (seed {self.seed})")
        return out

    def as_dict(self) -> dict:
        # wall times stay out of the machine-readable form so that equal
        # configuration and seed give byte-equal serialisations
        return {
            "format": "verify-report/1",
            "seed": self.seed,
            "ok": self.ok,
            "items": [
                {"key": r.key, "slug": r.slug, "ok": r.ok, "detail": r.detail}
                for r in self.results
            ],
        }


def _fail(detail: str):
    return False, detail, []


# --- item 1: counting values on powers of the basic commutator ----------


def _item_counting(rng, shared):
    f2 = FreeGroup.on("xy")
    w = f2.word("xyXY")
    wbar = ~w
    t = f2.commutator(f2.word("x"), f2.word("y"))
    for n in range(1, 65):
        tn = t**n
        if count_copies(w, tn) != n:
            return _fail(f"count of w in t^{n} is {count_copies(w, tn)}, expected {n}")
        if count_copies(wbar, tn) != 0:
            return _fail(f"count of w^-1 in t^{n} is nonzero")
    exact = homogenize_counting_exact(w, t)
    if exact != 1:
        return _fail(f"exact homogenisation gives {exact}, expected 1")
    raw = brooks(w, context=f2)
    for n_max in (16, 48):
        cv = homogenize(raw, t, n_max)
        if abs(cv.value - exact) > cv.radius:
            return _fail(f"truncated interval {cv.value}+-{cv.radius} misses {exact}")
    return True, "counts 1..64 exact; homogenised value 1 by both methods", []


# --- item 2: the half twist conjugates alpha to its inverse -------------


def _item_flip(rng, shared):
    ctx = BraidGroup(3)
    alpha = alpha_braid()
    delta = half_twist(3)
    prod = ctx.mul(ctx.mul(ctx.mul(delta, alpha), ctx.inv(delta)), alpha)
    nf = normal_form(prod)
    if nf.delta_power != 0 or nf.factors != ():
        return _fail(f"normal form of delta alpha delta^-1 alpha is {nf}, not the identity")
    if not ctx.eq(ctx.conjugate(delta, alpha), ctx.inv(alpha)):
        return _fail("conjugation by the half twist does not invert alpha")
    return True, "normal form certifies delta alpha delta^-1 = alpha^-1", []


# --- item 3: the family of mixed upper bounds ----------------------------


def _item_mixed_upper(rng, shared):
    pair = braid_pure_pair()
    alpha = alpha_braid()
    delta = half_twist(3)
    certs = []
    for n in range(1, 33):
        d = conjugate_flip_decomposition(pair, alpha, delta, n)
        report = verify_decomposition(d)
        if not report:
            return _fail(f"n={n}: {report.detail}")
        cert = upper_from_decomposition(
            alpha, 2 * n, d, note="flip decomposition: the half twist inverts alpha"
        )
        if cert.bound != Fraction(1, 2 * n):
            return _fail(f"n={n}: bound {cert.bound}, expected 1/{2*n}")
        certs.append(cert)
    return True, "alpha^(2n) = [delta, alpha^-n] verified for n <= 32; best bound 1/64", certs


# --- item 4: the duality lower bound through the free-factor projection --


def _item_duality_lower(rng, shared):
    f2 = FreeGroup.on("xy")
    w = f2.word("xyXY")
    qm_free = brooks_homogenized(w, context=f2)
    qm = pullback(qm_free, pr1())
    alpha = alpha_braid()

    # the projection kills the centre coordinate, so additivity gaps of the
    # pulled-back map at pure braids equal the gaps of the free-factor map
    # at the projected words; the searched maximum below therefore equals
    # the searched maximum over pure-braid pairs of the same radius
    search = defect_search(qm_free, 8, context=f2)
    defect = Fraction(qm_free.defect_upper)
    if search.lower > defect:
        return _fail(f"searched defect {search.lower} exceeds certified bound {defect}")

    for _ in range(50):
        b1 = p3_assemble(Word(25, random_reduced(rng, 25, rng.randrange(0, 7), (24, 25))), rng.randint(-2, 2))
        b2 = p3_assemble(Word(25, random_reduced(rng, 25, rng.randrange(0, 7), (24, 25))), rng.randint(-2, 2))
        gap_braid = abs(qm(BraidGroup(3).mul(b1, b2)) - qm(b1) - qm(b2))
        w1, w2 = p3_coordinates(b1).f2_part, p3_coordinates(b2).f2_part
        gap_free = abs(qm_free(w1 * w2) - qm_free(w1) - qm_free(w2))
        if gap_braid != gap_free:
            return _fail("additivity gap differs between the braid and free sides")

    inv = invariance_check(
        qm_free, conjugators=f2.ball(2), targets=[w, f2.word("xy"), f2.word("xYx")]
    )
    if not inv.ok:
        return _fail("free-side invariance sample found a violation")
    cert = bavard_lower(
        alpha,
        qm,
        pure_ordinary_pair(),
        invariance=inv,
        note="ordinary bound inside the pure subgroup via the free-factor projection",
    )
    if cert.bound != Fraction(1, 12) or cert.bound != 1 / (2 * defect) or cert.bound <= 0:
        return _fail(f"bound {cert.bound}, expected 1/(2*{defect}) = 1/12")
    detail = (
        f"bound 1/12 = 1/(2*{defect}); searched defect {search.lower} <= {defect} "
        f"at radius 8 ({search.pairs_checked} pairs)"
    )
    return True, detail, [cert]


# --- item 5: powers of a commutator collapsing to one commutator ---------


def _item_power_commutator(rng, shared):
    # disjoint commuting supports need the coordinate swap; inside a plain
    # product the hypothesis only holds degenerately
    sw = SwapProduct(FreeGroup(2))
    a = FreeGroup(2).word("a")
    e = FreeGroup(2).identity
    f = ((a, e), 0)
    g = ((e, e), 1)
    for n in range(0, 33):
        d = power_commutator(sw, f, g, n)
        report = verify_decomposition(d)
        if not report:
            return _fail(f"swap model n={n}: {report.detail}")

    dp = DirectProduct(FreeGroup(2), FreeGroup(2))
    fd = (dp.left.word("ab"), dp.right.identity)
    gd = (dp.left.identity, dp.right.word("ba"))
    for n in (1, 5, 32):
        d = power_commutator(dp, fd, gd, n)
        if not verify_decomposition(d):
            return _fail(f"product model n={n} failed")

    ctx = BraidGroup(3)
    alpha, delta = alpha_braid(), half_twist(3)
    for n in range(1, 33):
        d = power_commutator(ctx, alpha, delta, n)
        report = verify_decomposition(d)
        if not report:
            return _fail(f"braid side n={n}: {report.detail}")

    f2 = FreeGroup(2)
    rejected = 0
    for pair in (("a", "b"), ("ab", "ba"), ("aab", "abb")):
        try:
            power_commutator(f2, f2.word(pair[0]), f2.word(pair[1]), 2)
        except PreconditionError:
            rejected += 1
    if rejected != 3:
        return _fail("free-group counterexamples were not all rejected")
    return True, "[f,g]^n = [f^n,g] exact for n <= 32 in both models; free-group misuse rejected", []


# --- item 6: the packing identity ----------------------------------------


def _item_packing(rng, shared):
    ctx = FreeGroup(2)
    trials = [(ctx.word("a"), ctx.word("b"))]
    while len(trials) < 20:
        x = Word(2, random_reduced(rng, 2, rng.randrange(0, 5)))
        y = Word(2, random_reduced(rng, 2, rng.randrange(0, 5)))
        trials.append((x, y))
    for x, y in trials:
        for n in range(0, 9):
            d = commutator_identity_xy(ctx, x, y, n)
            if len(d.factors) != n:
                return _fail(f"expected {n} factors, got {len(d.factors)}")
            if not verify_decomposition(d):
                return _fail(
                    f"packing failed at n={n}, x={ctx.text(x)!r}, y={ctx.text(y)!r}"
                )
    return True, "(xy)^2n x^-2n y^-2n = n commutators, 20 trials, n <= 8", []


# --- item 7: extension along a section, both legs -------------------------


def _item_extension(rng, shared):
    left = FreeGroup(2)
    sec = central_z_section(left)
    phi = pullback(brooks_homogenized(left.word("abAB"), context=left), proj_left(sec.ambient))
    screp = sec.check(rng)
    if not screp.ok:
        return _fail(f"product section: {screp.failures[0]}")
    res = extend_via_section(phi, sec, n_max=64)
    elements = [(left.sample(rng, rng.randrange(0, 11)), 0) for _ in range(1000)]
    rest = restriction_check(res, phi, elements)
    if not rest.ok:
        return _fail(rest.describe())
    chain = defect_chain_check(res, 4)
    if not chain.ok:
        return _fail(
            f"product defect chain: {chain.phi_hat_searched} > {chain.phi_hat_bound}"
        )

    bsec = braid_abelianization_section(3)
    bphi = zero_qm(BraidGroup(3))
    bscrep = bsec.check(rng)
    if not bscrep.ok:
        return _fail(f"braid section: {bscrep.failures[0]}")
    bres = extend_via_section(bphi, bsec, n_max=16)
    ctx = BraidGroup(3)
    belements = []
    for _ in range(1000):
        b = ctx.sample(rng, rng.randrange(0, 9))
        belements.append(ctx.mul(b, index_section(-index_sum(b), 3)))
    brest = restriction_check(bres, bphi, belements)
    if not brest.ok:
        return _fail(brest.describe())
    bchain = defect_chain_check(bres, 4)
    if not bchain.ok:
        return _fail(
            f"braid defect chain: {bchain.phi_hat_searched} > {bchain.phi_hat_bound}"
        )
    detail = (
        f"both legs: 1000 exact restrictions each; defect chains at radius 4 "
        f"({chain.pairs_checked} and {bchain.pairs_checked} pairs) within bounds"
    )
    return True, detail, []


# --- item 8: the fragmentation norm against the transposition count ------


def _item_fragmentation(rng, shared):
    s5 = SymmetricGroup(5)
    t5 = (1, 0, 2, 3, 4)
    norm5 = FragmentationNorm(s5, [t5])

    # independent oracle: plain breadth-first search over multiplication by
    # any transposition (the conjugates of t5), written against raw tuples
    moves = []
    for i in range(5):
        for j in range(i + 1, 5):
            images = list(range(5))
            images[i], images[j] = images[j], images[i]
            moves.append(tuple(images))
    oracle = {perm_identity(5): 0}
    queue = deque([perm_identity(5)])
    while queue:
        g = queue.popleft()
        for m in moves:
            h = tuple(g[m[i]] for i in range(5))
            if h not in oracle:
                oracle[h] = oracle[g] + 1
                queue.append(h)

    for g in s5.elements():
        res = norm5.value_with_witness(g)
        expected = 5 - cycle_count(g)
        if not res.exact or res.value != expected or oracle[g] != expected:
            return _fail(
                f"norm at {s5.text(g)}: module {res.value}, oracle {oracle[g]}, "
                f"formula {expected}"
            )

    s4 = SymmetricGroup(4)
    norm4 = FragmentationNorm(s4, [(1, 0, 2, 3)]).as_norm()
    axioms = norm_axiom_report(norm4, elements=s4.elements())
    if not axioms.ok:
        return _fail(axioms.describe())
    detail = (
        f"120 values match formula and oracle; axioms exhaustive on "
        f"{axioms.elements_checked} elements / {axioms.pairs_checked} pairs"
    )
    return True, detail, []


# --- item 9: the splitting of pure 3-strand braids ------------------------


def _item_splitting(rng, shared):
    ctx = BraidGroup(3)
    for _ in range(1000):
        w = Word(25, random_reduced(rng, 25, rng.randrange(0, 41), (24, 25)))
        k = rng.randint(-5, 5)
        co = p3_coordinates(p3_assemble(w, k))
        if co.f2_part != w or co.center_exponent != k:
            return _fail(f"round trip failed at ({w}, {k})")
    hom = pr1()
    for _ in range(1000):
        b1 = p3_assemble(Word(25, random_reduced(rng, 25, rng.randrange(0, 13), (24, 25))), rng.randint(-3, 3))
        b2 = p3_assemble(Word(25, random_reduced(rng, 25, rng.randrange(0, 13), (24, 25))), rng.randint(-3, 3))
        if hom(ctx.mul(b1, b2)) != hom(b1) * hom(b2):
            return _fail("projection is not multiplicative")
    return True, "1000 exact round trips (|w| <= 40, |k| <= 5); 1000 multiplicative pairs", []


# --- item 10: word algebra properties -------------------------------------


def _item_word_algebra(rng, shared):
    rank = 3
    gens = [i for i in range(1, rank + 1)] + [-i for i in range(1, rank + 1)]

    def raw():
        return tuple(rng.choice(gens) for _ in range(rng.randrange(0, 9)))

    for _ in range(100_000):
        ra, rb, rc = raw(), raw(), raw()
        u = Word.from_raw(rank, ra)
        v = Word.from_raw(rank, rb)
        t = Word.from_raw(rank, rc)
        if ((u * v) * t).letters != (u * (v * t)).letters:
            return _fail(f"associativity failed at {ra} {rb} {rc}")
        if (u * ~u).letters != ():
            return _fail(f"inverse failed at {ra}")
        once = reduce_letters(rb, rank)
        if reduce_letters(once, rank) != once:
            return _fail(f"reduction is not idempotent at {rb}")
    return True, "100000 random triples: associativity, inverses, idempotent reduction", []


# --- item 11: certificate file integrity ----------------------------------


def _item_certificates(rng, shared):
    certs = [c for result in shared.values() for c in result.certificates]
    if not certs:
        # standalone run: regenerate a small family plus one lower bound
        pair = braid_pure_pair()
        alpha = alpha_braid()
        delta = half_twist(3)
        for n in (1, 2, 4):
            d = conjugate_flip_decomposition(pair, alpha, delta, n)
            certs.append(upper_from_decomposition(alpha, 2 * n, d))
        qm = pullback(brooks_homogenized(word("xyXY")), pr1())
        certs.append(bavard_lower(alpha, qm, pure_ordinary_pair()))

    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "certificates.json")
        doc = certio.write_certificates(certs, path)
        report = certio.verify_file(path)
        if not report.ok:
            return _fail(report.describe().splitlines()[-1])

        from .cli import main as raw_cli_main

        def cli_main(argv):
            # the command's own report is noise here; only the exit code matters
            with contextlib.redirect_stdout(io.StringIO()):
                return raw_cli_main(argv)

        if cli_main(["verify", path]) != 0:
            return _fail("command-line verification of a fresh file did not exit 0")

        def corrupted(mutate, expected_step):
            import copy

            bad = copy.deepcopy(doc)
            mutate(bad)
            badpath = os.path.join(tmp, "bad.json")
            certio.write_text_atomic(certio.dumps(bad), badpath)
            rep = certio.verify_file(badpath)
            if rep.ok:
                return f"corrupted certificate ({expected_step}) still verifies"
            got = rep.schema_error or next(
                c.failed_step for c in rep.checks if not c.ok
            )
            if expected_step not in (got or ""):
                return f"expected failure at {expected_step!r}, got {got!r}"
            if cli_main(["verify", badpath]) != 1:
                return "command-line verification of a corrupted file did not exit 1"
            return None

        upper_idx = next(
            i for i, it in enumerate(doc["items"]) if it["kind"] == "scl-upper-decomposition"
        )
        lower_idx = next(
            (i for i, it in enumerate(doc["items"]) if it["kind"] == "scl-lower-bavard"),
            None,
        )

        def bump_bound(d):
            d["items"][upper_idx]["bound"] = "1/1000"

        def break_member(d):
            d["items"][upper_idx]["witness"]["factors"][0][1] = "1"

        def break_product(d):
            d["items"][upper_idx]["witness"]["factors"][0][0] = "1,2"

        checks = [
            (bump_bound, "bound arithmetic"),
            (break_member, "membership of factor 0"),
            (break_product, "product equality"),
        ]
        if lower_idx is not None:

            def bump_value(d):
                d["items"][lower_idx]["witness"]["value"] = "2"

            checks.append((bump_value, "qm value"))
        for mutate, step in checks:
            problem = corrupted(mutate, step)
            if problem:
                return _fail(problem)

        empty = os.path.join(tmp, "empty.json")
        open(empty, "w").close()
        rep = certio.verify_file(empty)
        if rep.ok or "schema" not in (rep.schema_error or ""):
            return _fail("empty file did not raise a schema error")
        if cli_main(["verify", empty]) != 1:
            return _fail("command-line verification of an empty file did not exit 1")

    n = len(certs)
    return True, f"{n} certificates re-verified; 4 corruptions + empty file all caught", []


ITEMS: tuple[Item, ...] = (
    Item("1", "counting-values", 1.0, _item_counting),
    Item("2", "flip-identity", 1.0, _item_flip),
    Item("3", "mixed-upper-family", 10.0, _item_mixed_upper),
    Item("4", "duality-lower", 60.0, _item_duality_lower),
    Item("5", "power-commutator", 5.0, _item_power_commutator),
    Item("6", "commutator-packing", 30.0, _item_packing),
    Item("7", "section-extension", 120.0, _item_extension),
    Item("8", "fragmentation-norm", 30.0, _item_fragmentation),
    Item("9", "pure-braid-splitting", 30.0, _item_splitting),
    Item("10", "word-algebra", 10.0, _item_word_algebra),
    Item("11", "certificate-integrity", 10.0, _item_certificates),
)

DEFAULT_SEED = 7


def find_item(key: str) -> Item:
    wanted = key.strip().lower()
    for item in ITEMS:
        if wanted in (item.key, item.slug):
            return item
    names = ", ".join(f"{i.key} ({i.slug})" for i in ITEMS)
    raise KeyError(f"unknown suite item {key!r}; available: {names}")


def run_item(item: Item, seed: int, shared: dict[str, ItemResult]) -> ItemResult:
    rng = random.Random(seed * 1009 + int(item.key))
    start = time.monotonic()
    try:
        ok, detail, certs = item.fn(rng, shared)
    except Exception as exc:  # a crash is a failed item, not a crashed suite
        ok, detail, certs = False, f"crashed: {type(exc).__name__}: {exc}", []
    seconds = time.monotonic() - start
    return ItemResult(item.key, item.slug, ok, seconds, item.budget, detail, certs)


def run_suite(seed: int = DEFAULT_SEED, only: str | None = None) -> SuiteReport:
    selected = ITEMS if only is None else (find_item(only),)
    shared: dict[str, ItemResult] = {}
    results = []
    for item in selected:
        result = run_item(item, seed, shared)
        shared[item.key] = result
        results.append(result)
    return SuiteReport(seed, results)
