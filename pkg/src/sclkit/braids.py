"""Braid groups with an exact word problem.

Elements are Artin words (signed generator indices, ``+i`` for the i-th
elementary crossing).  Equality is decided through the left-greedy normal
form ``D^k p_1 ... p_l``: a power of the half twist followed by a
left-weighted sequence of permutation braids, each recorded as the
permutation it induces on strand positions.

Conventions.  Permutations are 0-indexed image tuples acting on positions;
composition ``compose(p, q)`` applies p first.  A braid word maps to the
composition of its letters' transpositions, so the half twist corresponds to
the order-reversing permutation.  For a permutation braid P with permutation
``pi``:

* ``sigma_{i+1}`` is a prefix of P   iff  pi has a descent at i,
* ``sigma_{i+1}`` is a suffix of P   iff  pi^-1 has a descent at i,
* appending ``sigma_{i+1}`` keeps P a permutation braid iff pi^-1 has no
  descent at i (the strands ending at positions i, i+1 have not crossed yet).

A pair (A, B) of permutation braids is left-weighted when every prefix
generator of B is a suffix generator of A; the local repair move slides one
crossing from the front of B to the back of A and strictly shrinks B, so it
terminates.  The pair repair is memoised per strand count, which makes
normalisation of long words on few strands cheap.

The rank-3 group also carries the exact integer-matrix homomorphism onto
SL(2,Z) sending the two generators to [[1,1],[0,1]] and [[1,0],[-1,1]].  Its
kernel modulo sign is the centre generated by the full twist, which gives an
independent equality oracle and drives the pure-braid coordinate splitting
``p3_coordinates``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable

from .groups import GroupContext, GroupHom, perm_compose, perm_identity, perm_inverse
from .words import Word, invert_letters

_PERM_TABLES: dict[int, dict] = {}


def _tables(n: int) -> dict:
    """Per-strand-count permutation helpers and the memoised pair repair."""
    tab = _PERM_TABLES.get(n)
    if tab is None:
        ident = perm_identity(n)
        delta = tuple(range(n - 1, -1, -1))
        taus = []
        for i in range(n - 1):
            images = list(range(n))
            images[i], images[i + 1] = images[i + 1], images[i]
            taus.append(tuple(images))
        tab = _PERM_TABLES[n] = {
            "ident": ident,
            "delta": delta,
            "taus": taus,
            "pair": {},
            "flip": {},
        }
    return tab


def _descents(p: tuple[int, ...]) -> list[int]:
    return [i for i in range(len(p) - 1) if p[i] > p[i + 1]]


def _flip(n: int, p: tuple[int, ...]) -> tuple[int, ...]:
    """Conjugation of a permutation braid by the half twist."""
    tab = _tables(n)
    cached = tab["flip"].get(p)
    if cached is None:
        delta = tab["delta"]
        cached = perm_compose(perm_compose(delta, p), delta)
        tab["flip"][p] = cached
    return cached


def _lw_pair(n: int, a: tuple[int, ...], b: tuple[int, ...]):
    """Left-weight an adjacent factor pair, preserving the product a*b."""
    tab = _tables(n)
    cached = tab["pair"].get((a, b))
    if cached is None:
        taus = tab["taus"]
        x, y = a, b
        while True:
            xinv = perm_inverse(x)
            move = None
            for i in _descents(y):
                if xinv[i] < xinv[i + 1]:
                    move = i
                    break
            if move is None:
                break
            x = perm_compose(x, taus[move])
            y = perm_compose(taus[move], y)
        cached = (x, y)
        tab["pair"][(a, b)] = cached
    return cached


def _normalize_factors(n: int, k: int, factors: list[tuple[int, ...]]):
    """Left-weight a positive factor list, extracting half-twist powers."""
    tab = _tables(n)
    ident, delta = tab["ident"], tab["delta"]
    fs = [f for f in factors if f != ident]
    while True:
        out: list[tuple[int, ...]] = []
        for f in fs:
            if f == delta:
                k += 1
                out = [_flip(n, g) for g in out]
            elif f != ident:
                out.append(f)
        fs = out
        changed = False
        for i in range(len(fs) - 1):
            a, b = fs[i], fs[i + 1]
            a2, b2 = _lw_pair(n, a, b)
            if a2 != a:
                fs[i], fs[i + 1] = a2, b2
                changed = True
        if not changed:
            return k, tuple(fs)


@dataclass(frozen=True)
class GarsideNormalForm:
    """Normal form D^k p_1 ... p_l; no factor is trivial or the half twist."""

    n: int
    delta_power: int
    factors: tuple[tuple[int, ...], ...]

    def canonical_length(self) -> int:
        return len(self.factors)

    def infimum(self) -> int:
        return self.delta_power

    def supremum(self) -> int:
        return self.delta_power + len(self.factors)

    def __str__(self) -> str:
        parts = " ".join(",".join(str(v + 1) for v in f) for f in self.factors)
        return f"D^{self.delta_power} | {parts}" if parts else f"D^{self.delta_power} |"

    def key(self) -> Hashable:
        return (self.n, self.delta_power, self.factors)

    def is_left_weighted(self) -> bool:
        tab = _tables(self.n)
        if any(f in (tab["ident"], tab["delta"]) for f in self.factors):
            return False
        for a, b in zip(self.factors, self.factors[1:]):
            fin = set(_descents(perm_inverse(a)))
            if any(i not in fin for i in _descents(b)):
                return False
        return True


@dataclass(frozen=True)
class BraidWord:
    """An Artin word in the braid group on n strands."""

    n: int
    letters: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("braid group needs at least 2 strands")
        for l in self.letters:
            if l == 0 or abs(l) > self.n - 1:
                raise ValueError(f"crossing index {l} out of range for {self.n} strands")

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if self.n != other.n:
            raise ValueError(f"strand count mismatch: {self.n} vs {other.n}")
        head = list(self.letters)
        i = 0
        while head and i < len(other.letters) and head[-1] == -other.letters[i]:
            head.pop()
            i += 1
        return BraidWord(self.n, tuple(head) + other.letters[i:])

    def __invert__(self) -> "BraidWord":
        return BraidWord(self.n, invert_letters(self.letters))

    def __pow__(self, m: int) -> "BraidWord":
        base = self if m >= 0 else ~self
        return BraidWord(self.n, base.letters * abs(m))

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return format_braid(self)

    def conjugate_by(self, g: "BraidWord") -> "BraidWord":
        return g * self * ~g


def braid(text: str, n: int) -> BraidWord:
    """Parse either compact '1,2,-1' or token 's1 s2 s1^-1' syntax.

    >>> braid("s1 s2 s1^-1", 3).letters
    (1, 2, -1)
    >>> braid("1,2,-1", 3).letters
    (1, 2, -1)
    """
    text = text.strip()
    if not text:
        return BraidWord(n, ())
    letters: list[int] = []
    if "s" in text or "S" in text:
        for tok in text.replace(",", " ").split():
            t = tok.lower()
            if not t.startswith("s"):
                raise ValueError(f"bad braid token {tok!r}")
            body = t[1:]
            power = 1
            if "^" in body:
                body, ptext = body.split("^", 1)
                power = int(ptext)
            idx = int(body)
            letter = idx if power >= 0 else -idx
            letters.extend([letter] * abs(power))
    else:
        letters = [int(tok) for tok in text.split(",") if tok.strip()]
    return BraidWord(n, tuple(letters))


def format_braid(b: BraidWord) -> str:
    return ",".join(str(l) for l in b.letters)


def normal_form(b: BraidWord) -> GarsideNormalForm:
    """Left-greedy normal form of an Artin word."""
    tab = _tables(b.n)
    taus, delta = tab["taus"], tab["delta"]
    exps = []
    factors = []
    for l in b.letters:
        if l > 0:
            exps.append(0)
            factors.append(taus[l - 1])
        else:
            exps.append(-1)
            factors.append(perm_compose(delta, taus[-l - 1]))
    # every half twist moves to the front, flipping the factors it crosses
    flipped = []
    suffix = 0
    for e, f in zip(reversed(exps), reversed(factors)):
        flipped.append(_flip(b.n, f) if suffix % 2 else f)
        suffix += e
    flipped.reverse()
    k, fs = _normalize_factors(b.n, sum(exps), flipped)
    return GarsideNormalForm(b.n, k, fs)


_NF_CACHE: dict[tuple[int, tuple[int, ...]], GarsideNormalForm] = {}
_NF_CACHE_LIMIT = 200_000


def cached_normal_form(b: BraidWord) -> GarsideNormalForm:
    key = (b.n, b.letters)
    nf = _NF_CACHE.get(key)
    if nf is None:
        nf = normal_form(b)
        if len(_NF_CACHE) > _NF_CACHE_LIMIT:
            _NF_CACHE.clear()
        _NF_CACHE[key] = nf
    return nf


def braid_equal(a: BraidWord, b: BraidWord) -> bool:
    """Exact word-problem solution via normal forms."""
    if a.n != b.n:
        raise ValueError(f"strand count mismatch: {a.n} vs {b.n}")
    return cached_normal_form(a).key() == cached_normal_form(b).key()


def nf_to_letters(nf: GarsideNormalForm) -> tuple[int, ...]:
    """An Artin word representing the normal form (for round trips)."""
    n = nf.n
    half = []
    for size in range(n - 1, 0, -1):
        half.extend(range(1, size + 1))
    letters: list[int] = []
    if nf.delta_power >= 0:
        letters.extend(half * nf.delta_power)
    else:
        letters.extend([-l for l in reversed(half)] * (-nf.delta_power))
    for f in nf.factors:
        p = f
        taus = _tables(n)["taus"]
        while p != _tables(n)["ident"]:
            i = _descents(p)[0]
            letters.append(i + 1)
            p = perm_compose(taus[i], p)
    return tuple(letters)


def underlying_permutation(b: BraidWord) -> tuple[int, ...]:
    """Image in the symmetric group (0-indexed position images)."""
    p = perm_identity(b.n)
    taus = _tables(b.n)["taus"]
    for l in b.letters:
        p = perm_compose(p, taus[abs(l) - 1])
    return p


def is_pure(b: BraidWord) -> bool:
    return underlying_permutation(b) == perm_identity(b.n)


def index_sum(b: BraidWord) -> int:
    """Signed crossing count: the homomorphism onto Z sending every
    generator to 1."""
    return sum(1 if l > 0 else -1 for l in b.letters)


def index_section(k: int, n: int = 3) -> BraidWord:
    """The section of index_sum powered by the first generator: k -> s1^k."""
    return BraidWord(n, (1,) * k if k >= 0 else (-1,) * (-k))


def half_twist(n: int) -> BraidWord:
    letters = []
    for size in range(n - 1, 0, -1):
        letters.extend(range(1, size + 1))
    return BraidWord(n, tuple(letters))


def full_twist(n: int) -> BraidWord:
    d = half_twist(n)
    return BraidWord(n, d.letters * 2)


class BraidGroup(GroupContext):
    """Braid group context; canonical forms come from the normal form."""

    def __init__(self, n: int):
        self.n = n
        self.name = f"braid:{n}"

    def mul(self, a: BraidWord, b: BraidWord) -> BraidWord:
        return a * b

    def inv(self, a: BraidWord) -> BraidWord:
        return ~a

    @property
    def identity(self) -> BraidWord:
        return BraidWord(self.n, ())

    def power(self, a: BraidWord, m: int) -> BraidWord:
        return a**m

    def canonical(self, a: BraidWord) -> Hashable:
        return cached_normal_form(a).key()

    def eq(self, a: BraidWord, b: BraidWord) -> bool:
        return braid_equal(a, b)

    def text(self, a: BraidWord) -> str:
        return format_braid(a)

    def parse(self, s: str) -> BraidWord:
        return braid(s, self.n)

    def braid(self, s: str) -> BraidWord:
        return self.parse(s)

    def generators(self) -> list[BraidWord]:
        return [BraidWord(self.n, (i,)) for i in range(1, self.n)]

    def sort_key(self, a: BraidWord):
        nf = cached_normal_form(a)
        return (nf.delta_power, nf.factors)

    def sample(self, rng, size: int) -> BraidWord:
        letters = []
        for _ in range(size):
            idx = rng.randint(1, self.n - 1)
            letters.append(idx if rng.random() < 0.5 else -idx)
        return BraidWord(self.n, tuple(letters))


# --- the rank-3 matrix homomorphism and pure-braid coordinates ----------

Matrix = tuple[tuple[int, int], tuple[int, int]]

_SL2_GEN: dict[int, Matrix] = {
    1: ((1, 1), (0, 1)),
    -1: ((1, -1), (0, 1)),
    2: ((1, 0), (-1, 1)),
    -2: ((1, 0), (1, 1)),
}


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


_MAT_ID: Matrix = ((1, 0), (0, 1))


def sl2_image(b: BraidWord) -> Matrix:
    """Exact image of a 3-strand braid in SL(2,Z)."""
    if b.n != 3:
        raise ValueError("the matrix homomorphism is defined on 3 strands")
    m = _MAT_ID
    for l in b.letters:
        m = _mat_mul(m, _SL2_GEN[l])
    return m


def _mat_neg(m: Matrix) -> Matrix:
    return ((-m[0][0], -m[0][1]), (-m[1][0], -m[1][1]))


def b3_equal_fast(a: BraidWord, b: BraidWord) -> bool:
    """Equality in the 3-strand group via the matrix image and index sum.

    The matrix homomorphism identifies B_3 modulo its centre up to sign, and
    the index sum is injective on the centre, so the pair of invariants
    separates elements exactly.
    """
    if a.n != 3 or b.n != 3:
        raise ValueError("fast equality is specific to 3 strands")
    if index_sum(a) != index_sum(b):
        return False
    ma, mb = sl2_image(a), sl2_image(b)
    return ma == mb or ma == _mat_neg(mb)


X = 24
Y = 25
F2_RANK = 25


@dataclass(frozen=True)
class P3Coordinates:
    """Splitting of a pure 3-strand braid as (free part, centre exponent).

    The pure braid group on 3 strands is generated by x = s1^2, y = s2^2 and
    the central full twist z, with ``braid = embed(f2_part) * z^k`` exactly.
    The free part is a word in the letters x, y.
    """

    f2_part: Word
    center_exponent: int


def p3_embed_letters(w: Word) -> tuple[int, ...]:
    """Letters of the braid word for a free-group element in x, y."""
    strand = {X: 1, Y: 2}
    out: list[int] = []
    for l in w.letters:
        g = strand.get(abs(l))
        if g is None:
            raise ValueError("free part must be a word in the letters x, y")
        s = 1 if l > 0 else -1
        out.extend((s * g, s * g))
    return tuple(out)


def p3_assemble(w: Word, k: int) -> BraidWord:
    """Braid word embed(w) * fulltwist^k on 3 strands."""
    twist = full_twist(3) if k >= 0 else ~full_twist(3)
    return BraidWord(3, p3_embed_letters(w) + twist.letters * abs(k))


class PeelingError(RuntimeError):
    """Internal guard: the coordinate extraction failed to certify itself."""


def _round_nearest(p: int, q: int) -> int:
    """Nearest integer to p/q; callers guarantee ties cannot occur."""
    if q < 0:
        p, q = -p, -q
    quotient, r = divmod(p, q)
    return quotient + (1 if 2 * r > q else 0)


def _peel_sanov(m: Matrix, guard: int) -> tuple[int, list[tuple[int, int]]]:
    """Write an SL(2,Z) matrix as +-X^a1 Y^b1 ... with X = [[1,2],[0,1]]
    and Y = [[1,0],[-2,1]].

    Works on matrices congruent to the identity mod 2; each step strictly
    shrinks the first column, and parity rules out boundary ties.  Returns
    (sign, syllables); raises PeelingError if the guard is exhausted.
    """
    (p, q), (r, s) = m
    syllables: list[tuple[int, int]] = []
    steps = 0
    while r != 0:
        steps += 1
        if steps > guard:
            raise PeelingError("syllable extraction exceeded its iteration guard")
        if abs(p) > abs(r):
            a = _round_nearest(p, 2 * r)
            if a == 0:
                raise PeelingError("column reduction stalled")
            syllables.append((1, a))
            p, q = p - 2 * a * r, q - 2 * a * s
        else:
            b = _round_nearest(r, 2 * p)
            if b == 0:
                raise PeelingError("column reduction stalled")
            syllables.append((2, -b))
            r, s = r - 2 * b * p, s - 2 * b * q
    if abs(p) != 1 or p * s != 1:
        raise PeelingError("peeled matrix is not a signed triangular unit")
    tail = p * q
    if tail % 2 != 0:
        raise PeelingError("triangular remainder has odd off-diagonal entry")
    if tail != 0:
        syllables.append((1, tail // 2))
    return p, syllables


def p3_coordinates(b: BraidWord) -> P3Coordinates:
    """Coordinates (f2_part, center_exponent) of a pure 3-strand braid.

    The output is re-verified by reassembling embed(w) * z^k and comparing
    with the input through the exact matrix-plus-index invariants, so the
    extraction certifies itself; failures raise rather than return.
    """
    if b.n != 3:
        raise ValueError("coordinates are defined for 3-strand braids")
    if not is_pure(b):
        raise ValueError("coordinates are defined for pure braids only")
    guard = 4 * len(b.letters) + 16
    sign, syllables = _peel_sanov(sl2_image(b), guard)
    raw: list[int] = []
    for gen, exp in syllables:
        letter = (X, Y)[gen - 1]
        if exp < 0:
            letter = -letter
        raw.extend([letter] * abs(exp))
    w = Word(F2_RANK, tuple(raw))
    total = index_sum(b) - 2 * w.exponent_sum()
    k, rem = divmod(total, 6)
    if rem != 0:
        raise PeelingError("index sum is inconsistent with the free part")
    if sign != (1 if k % 2 == 0 else -1):
        raise PeelingError("matrix sign is inconsistent with the centre exponent")
    if not b3_equal_fast(p3_assemble(w, k), b):
        raise PeelingError("reassembled coordinates do not reproduce the input")
    return P3Coordinates(w, k)


def pure_braid_context() -> BraidGroup:
    return BraidGroup(3)


def pr1() -> GroupHom:
    """Projection of pure 3-strand braids onto the free factor in x, y."""
    from .groups import FreeGroup

    return GroupHom(
        BraidGroup(3),
        FreeGroup.on("xy"),
        lambda b: p3_coordinates(b).f2_part,
        "pr1",
    )
