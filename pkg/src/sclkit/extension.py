"""Extending an invariant quasimorphism along a section of the quotient map.

Setting: a normal subgroup with integer quotient, a homomorphic section s
of the projection pi, and a homogeneous quasimorphism phi on the subgroup
that is (by sampled evidence) invariant under ambient conjugation.  The
transported function phi'(ghat) = phi(s(pi(ghat))^-1 * ghat) is again a
quasimorphism with defect at most D(phi): the subgroup parts of a product
differ from the product of subgroup parts by an ambient conjugation,
which the invariance hypothesis makes invisible to phi.  Homogenising
phi' costs at most another factor of two, giving D(phi_hat) <= 2 D(phi).

The extension restricts to phi exactly: on subgroup elements the section
contributes nothing and homogenisation fixes the already homogeneous phi.
Off the subgroup, phi_hat is reported as a certified interval
(truncated-limit value with radius D(phi')/n_max), never a bare number.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterable

from .braids import BraidGroup, index_section, index_sum
from .groups import CyclicZ, DirectProduct, FreeGroup, GroupContext
from .norms import PreconditionError
from .quasimorphisms import (
    CertifiedValue,
    InvarianceReport,
    Quasimorphism,
    homogenize,
)


@dataclass
class SectionData:
    """A homomorphic section of the projection onto an integer quotient."""

    ambient: GroupContext
    project: Callable[[Any], int]
    section: Callable[[int], Any]
    member: Callable[[Any], bool]
    name: str

    def check(self, rng, quotient_radius: int = 8, samples: int = 200) -> "SectionReport":
        """Verify pi o s = id on the quotient ball, s(0) = identity, and
        multiplicativity of both maps on sampled ambient pairs."""
        ctx = self.ambient
        failures: list[str] = []
        if not ctx.is_identity(self.section(0)):
            failures.append("s(0) is not the identity")
        for k in range(-quotient_radius, quotient_radius + 1):
            if self.project(self.section(k)) != k:
                failures.append(f"pi(s({k})) != {k}")
                break
        for _ in range(samples):
            a = rng.randint(-quotient_radius, quotient_radius)
            b = rng.randint(-quotient_radius, quotient_radius)
            if not ctx.eq(self.section(a + b), ctx.mul(self.section(a), self.section(b))):
                failures.append(f"s({a}+{b}) != s({a})s({b})")
                break
        for _ in range(samples):
            g = ctx.sample(rng, rng.randrange(0, 6))
            h = ctx.sample(rng, rng.randrange(0, 6))
            if self.project(ctx.mul(g, h)) != self.project(g) + self.project(h):
                failures.append(
                    f"pi not additive at ({ctx.text(g)}, {ctx.text(h)})"
                )
                break
        return SectionReport(self.name, samples, tuple(failures))


@dataclass(frozen=True)
class SectionReport:
    section_name: str
    samples: int
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.failures


def central_z_section(inner: GroupContext | None = None) -> SectionData:
    """Section k -> (1, k) of the projection (w, k) -> k on G x Z."""
    left = inner if inner is not None else FreeGroup(2)
    ctx = DirectProduct(left, CyclicZ())
    return SectionData(
        ambient=ctx,
        project=lambda p: p[1],
        section=lambda k: (left.identity, k),
        member=lambda p: p[1] == 0,
        name=f"section(quotient=Z, map=z^k) on {ctx.name}",
    )


def braid_abelianization_section(n: int = 3) -> SectionData:
    """Section k -> s1^k of the index-sum projection on the braid group;
    the kernel is the commutator subgroup."""
    ctx = BraidGroup(n)
    return SectionData(
        ambient=ctx,
        project=index_sum,
        section=lambda k: index_section(k, n),
        member=lambda b: index_sum(b) == 0,
        name=f"section(quotient=Z, map=s1^k) on braid:{n}",
    )


@dataclass
class ExtensionResult:
    """The transported quasimorphism with its defect bookkeeping.

    phi_prime is exact everywhere; the homogenised extension is exact on
    the subgroup and an interval elsewhere.  defect_chain records
    D(phi) -> D(phi') -> D(phi_hat) certified bounds.
    """

    base: Quasimorphism
    section: SectionData
    phi_prime: Quasimorphism
    n_max: int
    invariance_evidence: InvarianceReport | None

    @property
    def defect_chain(self) -> dict:
        d = Fraction(self.base.defect_upper)
        return {
            "D(phi)": d,
            "D(phi_prime)<=": d,
            "D(phi_hat)<=": 2 * d,
        }

    def value(self, ghat) -> CertifiedValue:
        """phi_hat at ghat: exact on the subgroup, interval off it.

        Subgroup values still run through the section transport, never
        through the original phi directly, so a broken section or transport
        cannot hide behind a shortcut.
        """
        if self.section.member(ghat):
            return CertifiedValue(self.phi_prime(ghat), Fraction(0))
        return homogenize(self.phi_prime, ghat, self.n_max)

    def exact_on_subgroup(self, g) -> Fraction:
        if not self.section.member(g):
            raise ValueError("exact evaluation is only available on the subgroup")
        return self.phi_prime(g)


def extend_via_section(
    qm: Quasimorphism,
    section: SectionData,
    n_max: int = 64,
    invariance: InvarianceReport | None = None,
) -> ExtensionResult:
    """Transport qm along the section and homogenise.

    qm must be homogeneous with a certified defect; its eval must accept
    subgroup elements in their ambient representation.  Every phi_prime
    evaluation first checks that the subgroup part really passes the
    membership test, so an inconsistent section fails loudly.
    """
    if not qm.homogeneous:
        raise ValueError("extension needs a homogeneous quasimorphism")
    if qm.defect_upper is None:
        raise ValueError("refusing to extend without a certified defect bound")
    ctx = section.ambient

    def phi_prime_eval(ghat) -> Fraction:
        q = section.section(section.project(ghat))
        bar = ctx.mul(ctx.inv(q), ghat)
        if not section.member(bar):
            raise PreconditionError(
                f"section inconsistency: {ctx.text(bar)} failed the membership test"
            )
        return qm(bar)

    phi_prime = Quasimorphism(
        name=f"transport({qm.name})",
        context=ctx,
        eval_fn=phi_prime_eval,
        homogeneous=False,
        defect_upper=qm.defect_upper,
        defect_provenance=(
            f"{qm.defect_provenance}; transported along {section.name}, "
            "defect preserved by ambient invariance"
        ),
    )
    return ExtensionResult(
        base=qm,
        section=section,
        phi_prime=phi_prime,
        n_max=n_max,
        invariance_evidence=invariance,
    )


@dataclass(frozen=True)
class RestrictionReport:
    checked: int
    mismatches: tuple[str, ...]
    sufficient: bool

    @property
    def ok(self) -> bool:
        return not self.mismatches and self.sufficient

    def describe(self) -> str:
        if not self.sufficient:
            return "restriction check: no samples, vacuous pass is insufficient evidence"
        if self.mismatches:
            return "restriction check FAILED: " + "; ".join(self.mismatches[:3])
        return f"restriction check: {self.checked} subgroup elements, all exact matches"


def restriction_check(
    result: ExtensionResult,
    phi: Quasimorphism,
    elements: Iterable[Any],
) -> RestrictionReport:
    """phi_hat = phi on subgroup samples, as exact rationals.

    phi is the reference quasimorphism, evaluated directly; the extension
    side goes through the section transport, so any inconsistency between
    the two paths surfaces as a mismatch.
    """
    ctx = result.section.ambient
    mismatches: list[str] = []
    checked = 0
    for g in elements:
        if not result.section.member(g):
            raise ValueError(f"sample {ctx.text(g)} is not in the subgroup")
        checked += 1
        expected = phi(g)
        got = result.value(g)
        if got.value != expected or got.radius != 0:
            mismatches.append(
                f"phi_hat({ctx.text(g)}) = {got} but phi gives {expected}"
            )
        if len(mismatches) >= 5:
            break
    return RestrictionReport(checked, tuple(mismatches), sufficient=checked > 0)


@dataclass(frozen=True)
class DefectChainReport:
    phi_prime_searched: Fraction
    phi_prime_bound: Fraction
    phi_hat_searched: Fraction
    phi_hat_bound: Fraction
    radius: int
    pairs_checked: int

    @property
    def ok(self) -> bool:
        return (
            self.phi_prime_searched <= self.phi_prime_bound
            and self.phi_hat_searched <= self.phi_hat_bound
        )

    def describe(self) -> str:
        status = "ok" if self.ok else "VIOLATION"
        return (
            f"defect chain at radius {self.radius} ({self.pairs_checked} pairs): "
            f"phi' searched {self.phi_prime_searched} <= {self.phi_prime_bound}, "
            f"phi_hat searched {self.phi_hat_searched} <= {self.phi_hat_bound}: {status}"
        )


def defect_chain_check(result: ExtensionResult, radius: int) -> DefectChainReport:
    """Searched defect lower bounds inside the ambient ball.

    phi_prime is exact, so its searched defect must stay within D(phi).
    phi_hat values are intervals; the sound lower bound for a pair's gap
    subtracts all three radii, and must stay within 2 D(phi).
    """
    ctx = result.section.ambient
    spheres = [ctx.sphere(k) for k in range(radius + 1)]
    prime_memo: dict = {}
    hat_memo: dict = {}

    def prime(g) -> Fraction:
        key = ctx.canonical(g)
        if key not in prime_memo:
            prime_memo[key] = result.phi_prime(g)
        return prime_memo[key]

    def hat(g) -> CertifiedValue:
        key = ctx.canonical(g)
        if key not in hat_memo:
            hat_memo[key] = result.value(g)
        return hat_memo[key]

    best_prime = Fraction(0)
    best_hat = Fraction(0)
    pairs = 0
    for total in range(radius + 1):
        for i in range(total + 1):
            for g in spheres[i]:
                for h in spheres[total - i]:
                    pairs += 1
                    gh = ctx.mul(g, h)
                    gap_p = abs(prime(gh) - prime(g) - prime(h))
                    if gap_p > best_prime:
                        best_prime = gap_p
                    vg, vh, vgh = hat(g), hat(h), hat(gh)
                    slack = (vg.radius or 0) + (vh.radius or 0) + (vgh.radius or 0)
                    gap_h = abs(vgh.value - vg.value - vh.value) - slack
                    if gap_h > best_hat:
                        best_hat = gap_h
    d = Fraction(result.base.defect_upper)
    return DefectChainReport(
        phi_prime_searched=best_prime,
        phi_prime_bound=d,
        phi_hat_searched=best_hat,
        phi_hat_bound=2 * d,
        radius=radius,
        pairs_checked=pairs,
    )
