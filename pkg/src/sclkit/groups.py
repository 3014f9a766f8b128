"""Group contexts: a uniform element-agnostic interface over the concrete
groups the library computes in.

A context bundles multiplication, inversion, identity, exact equality via
canonical forms, deterministic ball enumeration and seeded sampling.  Elements
themselves stay plain immutable values (words, ints, tuples, permutations), so
everything here is safe to evaluate concurrently and to use as dict keys via
``canonical``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Sequence

from .words import Word, format_letters, random_reduced, word, words_of_length


class GroupContext:
    """Shared interface; subclasses fill in the primitive operations."""

    name: str = "group"

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    @property
    def identity(self):
        raise NotImplementedError

    def canonical(self, a) -> Hashable:
        """Hashable canonical form; equal elements get equal forms."""
        raise NotImplementedError

    def eq(self, a, b) -> bool:
        return self.canonical(a) == self.canonical(b)

    def is_identity(self, a) -> bool:
        return self.eq(a, self.identity)

    def power(self, a, n: int):
        if n < 0:
            return self.power(self.inv(a), -n)
        result = self.identity
        square = a
        while n:
            if n & 1:
                result = self.mul(result, square)
            square = self.mul(square, square)
            n >>= 1
        return result

    def conjugate(self, g, a):
        """g * a * g^-1."""
        return self.mul(self.mul(g, a), self.inv(g))

    def commutator(self, a, b):
        return self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))

    def text(self, a) -> str:
        raise NotImplementedError

    def parse(self, s: str):
        raise NotImplementedError

    def generators(self) -> list:
        """Standard generators (without inverses)."""
        raise NotImplementedError

    # --- deterministic enumeration -------------------------------------

    def sphere(self, k: int) -> list:
        """Elements at word-length exactly k from the standard generators,
        deduplicated by canonical form, in a deterministic order."""
        return self._bfs_spheres(k)[k]

    def ball(self, radius: int) -> list:
        spheres = self._bfs_spheres(radius)
        return [g for k in range(radius + 1) for g in spheres[k]]

    def _bfs_spheres(self, radius: int) -> list[list]:
        cache = getattr(self, "_sphere_cache", None)
        if cache is None:
            cache = self._sphere_cache = [[self.identity]]
        gens = [g for g in self.generators()]
        step = gens + [self.inv(g) for g in gens]
        seen = getattr(self, "_sphere_seen", None)
        if seen is None:
            seen = self._sphere_seen = {self.canonical(self.identity)}
        while len(cache) <= radius:
            frontier = []
            for g in cache[-1]:
                for s in step:
                    h = self.mul(g, s)
                    key = self.canonical(h)
                    if key not in seen:
                        seen.add(key)
                        frontier.append((self.sort_key(h), h))
            frontier.sort(key=lambda pair: pair[0])
            cache.append([h for _, h in frontier])
        return cache

    def sort_key(self, a):
        return self.text(a)

    def sample(self, rng, size: int):
        """Random element of word-length about ``size``; deterministic for a
        seeded rng."""
        out = self.identity
        gens = self.generators()
        step = gens + [self.inv(g) for g in gens]
        for _ in range(size):
            out = self.mul(out, rng.choice(step))
        return out


class FreeGroup(GroupContext):
    """Free group on a chosen set of named generators; elements are Word
    values.

    ``FreeGroup(2)`` is the free group on ``a, b``.  ``FreeGroup.on("xy")``
    is the free group on the letters ``x, y``: words still carry their full
    alphabet indices (x is generator 24), but enumeration and sampling range
    over the two chosen letters only.
    """

    def __init__(self, rank: int | None = None, *, gen_indices: tuple[int, ...] | None = None):
        if gen_indices is not None:
            if not all(1 <= i <= 26 for i in gen_indices):
                raise ValueError("generator indices must be in 1..26")
            if len(set(gen_indices)) != len(gen_indices):
                raise ValueError("generator indices must be distinct")
            self.gen_indices = tuple(sorted(gen_indices))
            self.rank = max(self.gen_indices, default=0)
            names = "".join(format_letters((i,)) for i in self.gen_indices)
            self.name = f"free:{names}"
        else:
            if rank is None or rank < 0:
                raise ValueError("rank must be nonnegative")
            self.rank = rank
            self.gen_indices = tuple(range(1, rank + 1))
            self.name = f"free:{rank}"

    @classmethod
    def on(cls, letters: str) -> "FreeGroup":
        """Free group on the given lowercase letters, e.g. ``on("xy")``."""
        indices = tuple(ord(c) - ord("a") + 1 for c in letters)
        if any(not 1 <= i <= 26 for i in indices):
            raise ValueError("generators must be lowercase letters a..z")
        return cls(gen_indices=indices)

    def mul(self, a: Word, b: Word) -> Word:
        return a * b

    def inv(self, a: Word) -> Word:
        return ~a

    @property
    def identity(self) -> Word:
        return Word(self.rank, ())

    def power(self, a: Word, n: int) -> Word:
        return a**n

    def canonical(self, a: Word) -> Hashable:
        return a.letters

    def text(self, a: Word) -> str:
        return str(a)

    def parse(self, s: str) -> Word:
        w = word(s, rank=self.rank)
        bad = sorted({abs(l) for l in w.letters} - set(self.gen_indices))
        if bad:
            names = format_letters(tuple(bad))
            raise ValueError(f"letters {names!r} are not generators of {self.name}")
        return w

    def word(self, s: str) -> Word:
        return self.parse(s)

    def generators(self) -> list[Word]:
        return [Word(self.rank, (i,)) for i in self.gen_indices]

    def sphere(self, k: int) -> list[Word]:
        return [Word(self.rank, ls) for ls in words_of_length(self.rank, k, self.gen_indices)]

    def ball(self, radius: int) -> list[Word]:
        return [g for k in range(radius + 1) for g in self.sphere(k)]

    def sample(self, rng, size: int) -> Word:
        return Word(self.rank, random_reduced(rng, self.rank, size, self.gen_indices))


class CyclicZ(GroupContext):
    """The integers under addition; elements are plain ints."""

    name = "z"

    def mul(self, a: int, b: int) -> int:
        return a + b

    def inv(self, a: int) -> int:
        return -a

    @property
    def identity(self) -> int:
        return 0

    def power(self, a: int, n: int) -> int:
        return a * n

    def canonical(self, a: int) -> Hashable:
        return a

    def text(self, a: int) -> str:
        return str(a)

    def parse(self, s: str) -> int:
        return int(s) if s.strip() else 0

    def generators(self) -> list[int]:
        return [1]

    def sphere(self, k: int) -> list[int]:
        return [0] if k == 0 else [-k, k]

    def ball(self, radius: int) -> list[int]:
        return [k for r in range(radius + 1) for k in self.sphere(r)]

    def sample(self, rng, size: int) -> int:
        return rng.randint(-size, size)


class DirectProduct(GroupContext):
    """Direct product of two contexts; elements are (left, right) pairs."""

    def __init__(self, left: GroupContext, right: GroupContext):
        self.left = left
        self.right = right
        self.name = f"product:{left.name},{right.name}"

    def mul(self, a, b):
        return (self.left.mul(a[0], b[0]), self.right.mul(a[1], b[1]))

    def inv(self, a):
        return (self.left.inv(a[0]), self.right.inv(a[1]))

    @property
    def identity(self):
        return (self.left.identity, self.right.identity)

    def power(self, a, n: int):
        return (self.left.power(a[0], n), self.right.power(a[1], n))

    def canonical(self, a) -> Hashable:
        return (self.left.canonical(a[0]), self.right.canonical(a[1]))

    def text(self, a) -> str:
        return f"({self.left.text(a[0])},{self.right.text(a[1])})"

    def parse(self, s: str):
        body = s.strip()
        if not (body.startswith("(") and body.endswith(")")):
            raise ValueError(f"product element must look like (left,right): {s!r}")
        depth = 0
        split = -1
        inner = body[1:-1]
        for i, ch in enumerate(inner):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "," and depth == 0:
                split = i
                break
        if split < 0:
            raise ValueError(f"product element missing component separator: {s!r}")
        return (self.left.parse(inner[:split]), self.right.parse(inner[split + 1 :]))

    def generators(self) -> list:
        gl = [(g, self.right.identity) for g in self.left.generators()]
        gr = [(self.left.identity, g) for g in self.right.generators()]
        return gl + gr

    def sphere(self, k: int) -> list:
        out = []
        for i in range(k + 1):
            for a in self.left.sphere(i):
                for b in self.right.sphere(k - i):
                    out.append((a, b))
        return out

    def ball(self, radius: int) -> list:
        return [g for k in range(radius + 1) for g in self.sphere(k)]

    def sample(self, rng, size: int):
        i = rng.randint(0, size)
        return (self.left.sample(rng, i), self.right.sample(rng, size - i))


class SwapProduct(GroupContext):
    """Semidirect product (G x G) : Z/2, the swap acting by exchanging the
    two coordinates.  Elements are ((a, b), s) with s in {0, 1}.

    This is the smallest exact model of elements with disjoint commuting
    supports: for f = ((x, 1), 0) and g = ((1, 1), 1), the conjugate
    g f^-1 g^-1 = ((1, x^-1), 0) commutes with f, and [f, g] = ((x, x^-1), 0).
    """

    def __init__(self, inner: GroupContext):
        self.inner = inner
        self.name = f"swapproduct:{inner.name}"

    def _act(self, s: int, pair):
        return (pair[1], pair[0]) if s else pair

    def mul(self, a, b):
        (a0, a1), s = a
        (b0, b1), t = b
        c0, c1 = self._act(s, (b0, b1))
        return ((self.inner.mul(a0, c0), self.inner.mul(a1, c1)), (s + t) % 2)

    def inv(self, a):
        (a0, a1), s = a
        i0, i1 = self._act(s, (self.inner.inv(a0), self.inner.inv(a1)))
        return ((i0, i1), s)

    @property
    def identity(self):
        e = self.inner.identity
        return ((e, e), 0)

    def canonical(self, a) -> Hashable:
        (a0, a1), s = a
        return (self.inner.canonical(a0), self.inner.canonical(a1), s)

    def text(self, a) -> str:
        (a0, a1), s = a
        return f"({self.inner.text(a0)},{self.inner.text(a1)};{s})"

    def parse(self, s: str):
        body = s.strip()
        if not (body.startswith("(") and body.endswith(")")):
            raise ValueError(f"swap-product element must look like (a,b;s): {s!r}")
        inner = body[1:-1]
        parts, flag = inner.rsplit(";", 1)
        a, b = parts.split(",", 1)
        return ((self.inner.parse(a), self.inner.parse(b)), int(flag) % 2)

    def generators(self) -> list:
        e = self.inner.identity
        base = [((g, e), 0) for g in self.inner.generators()]
        base += [((e, g), 0) for g in self.inner.generators()]
        return base + [((e, e), 1)]

    def sample(self, rng, size: int):
        return (
            (self.inner.sample(rng, size), self.inner.sample(rng, size)),
            rng.randint(0, 1),
        )


def perm_identity(n: int) -> tuple[int, ...]:
    return tuple(range(n))


def perm_compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """Apply p first, then q."""
    return tuple(q[p[i]] for i in range(len(p)))


def perm_inverse(p: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def cycle_count(p: tuple[int, ...]) -> int:
    """Number of cycles, fixed points included."""
    seen = [False] * len(p)
    cycles = 0
    for i in range(len(p)):
        if not seen[i]:
            cycles += 1
            j = i
            while not seen[j]:
                seen[j] = True
                j = p[j]
    return cycles


class SymmetricGroup(GroupContext):
    """Symmetric group on n points; elements are 0-indexed image tuples."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("degree must be positive")
        self.n = n
        self.name = f"perm:{n}"

    def mul(self, a, b):
        return perm_compose(a, b)

    def inv(self, a):
        return perm_inverse(a)

    @property
    def identity(self):
        return perm_identity(self.n)

    def canonical(self, a) -> Hashable:
        return a

    def text(self, a) -> str:
        return ",".join(str(v + 1) for v in a)

    def parse(self, s: str):
        """One-line notation, 1-indexed images: '2,1,3'."""
        images = [int(tok) - 1 for tok in s.replace(" ", "").split(",") if tok]
        if sorted(images) != list(range(self.n)):
            raise ValueError(f"not a permutation of 1..{self.n}: {s!r}")
        return tuple(images)

    def generators(self) -> list:
        gens = []
        for i in range(self.n - 1):
            images = list(range(self.n))
            images[i], images[i + 1] = images[i + 1], images[i]
            gens.append(tuple(images))
        return gens

    def elements(self) -> list[tuple[int, ...]]:
        return sorted(itertools.permutations(range(self.n)))

    def sample(self, rng, size: int):
        images = list(range(self.n))
        rng.shuffle(images)
        return tuple(images)


class TableGroup(GroupContext):
    """Finite group given by an explicit multiplication table.

    Text format: first line is the order N; the next N lines hold N
    whitespace-separated 0-based indices, row g listing the products g*h.
    """

    def __init__(self, table: Sequence[Sequence[int]], name: str = "table"):
        n = len(table)
        self.table = tuple(tuple(row) for row in table)
        if any(len(row) != n for row in self.table):
            raise ValueError("multiplication table must be square")
        if any(not 0 <= v < n for row in self.table for v in row):
            raise ValueError("table entry out of range")
        self.n = n
        self.name = name
        self._identity = next(
            (e for e in range(n) if all(self.table[e][g] == g and self.table[g][e] == g for g in range(n))),
            None,
        )
        if self._identity is None:
            raise ValueError("table has no identity element")
        self._inverse = []
        for g in range(n):
            invs = [h for h in range(n) if self.table[g][h] == self._identity]
            if len(invs) != 1 or self.table[invs[0]][g] != self._identity:
                raise ValueError(f"element {g} has no unique inverse")
            self._inverse.append(invs[0])

    @staticmethod
    def from_text(text: str, name: str = "table") -> "TableGroup":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        n = int(lines[0])
        rows = [[int(tok) for tok in ln.split()] for ln in lines[1 : n + 1]]
        if len(rows) != n:
            raise ValueError("multiplication table is truncated")
        return TableGroup(rows, name=name)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self._inverse[a]

    @property
    def identity(self) -> int:
        return self._identity

    def canonical(self, a: int) -> Hashable:
        return a

    def text(self, a: int) -> str:
        return str(a)

    def parse(self, s: str) -> int:
        v = int(s)
        if not 0 <= v < self.n:
            raise ValueError(f"element index {v} out of range")
        return v

    def generators(self) -> list[int]:
        return list(range(self.n))

    def elements(self) -> list[int]:
        return list(range(self.n))

    def sample(self, rng, size: int) -> int:
        return rng.randrange(self.n)


@dataclass(frozen=True)
class GroupHom:
    """A homomorphism between contexts, carried as an explicit function."""

    domain: GroupContext
    codomain: GroupContext
    fn: Callable[[Any], Any]
    name: str

    def __call__(self, a):
        return self.fn(a)

    def check_on_samples(self, rng, count: int = 1000, size: int = 8) -> bool:
        """Sampled multiplicativity check h(ab) = h(a) h(b)."""
        for _ in range(count):
            a = self.domain.sample(rng, rng.randint(0, size))
            b = self.domain.sample(rng, rng.randint(0, size))
            lhs = self.fn(self.domain.mul(a, b))
            rhs = self.codomain.mul(self.fn(a), self.fn(b))
            if not self.codomain.eq(lhs, rhs):
                return False
        return True


def proj_left(product: DirectProduct) -> GroupHom:
    return GroupHom(product, product.left, lambda a: a[0], "proj-left")


def proj_right(product: DirectProduct) -> GroupHom:
    return GroupHom(product, product.right, lambda a: a[1], "proj-right")
