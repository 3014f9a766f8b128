"""Exact word algebra for finitely generated free groups.

A word is an immutable sequence of signed generator indices: ``+i`` is the
i-th generator and ``-i`` its inverse, with ``1 <= i <= rank``.  The empty
sequence is the identity.  Every operation returns freely reduced output, so
two words are equal in the group iff their letter tuples are equal.

Text syntax: lowercase ``a``..``z`` name generators 1..26, uppercase letters
their inverses, whitespace is ignored, and ``x^3`` / ``x^-2`` powers are
accepted on input.  Printing always emits plain letters, so
``parse -> format -> parse`` is the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


def reduce_letters(raw: Iterable[int], rank: int) -> tuple[int, ...]:
    """Freely reduce a letter sequence with a single stack scan.

    >>> reduce_letters([1, 2, -2, -1], 2)
    ()
    >>> reduce_letters([1, 2, -2, 1], 2)
    (1, 1)
    """
    stack: list[int] = []
    for letter in raw:
        if letter == 0 or abs(letter) > rank:
            raise ValueError(f"letter {letter} out of range for rank {rank}")
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def is_reduced(letters: Iterable[int]) -> bool:
    seq = tuple(letters)
    return all(seq[i] != -seq[i + 1] for i in range(len(seq) - 1))


def invert_letters(letters: Iterable[int]) -> tuple[int, ...]:
    return tuple(-l for l in reversed(tuple(letters)))


def multiply_letters(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """Product of two reduced words; cancellation happens at the junction only."""
    head = list(a)
    i = 0
    n = len(b)
    while head and i < n and head[-1] == -b[i]:
        head.pop()
        i += 1
    return tuple(head) + b[i:]


def cyclic_reduce_letters(letters: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split a reduced word into (core, conjugator) with w = u * core * u^-1.

    The core is cyclically reduced.  For a reduced input the core is empty
    only when the input is empty.

    >>> cyclic_reduce_letters((1, 2, -1))
    ((2,), (1,))
    """
    lo, hi = 0, len(letters)
    while hi - lo >= 2 and letters[lo] == -letters[hi - 1]:
        lo += 1
        hi -= 1
    return letters[lo:hi], letters[:lo]


_ORD_A = ord("a")
_ORD_CAP_A = ord("A")


def format_letters(letters: Iterable[int]) -> str:
    """Render letters in a..z / A..Z text form (rank at most 26)."""
    out = []
    for l in letters:
        idx = abs(l)
        if not 1 <= idx <= 26:
            raise ValueError(f"letter {l} has no single-character name")
        out.append(chr(_ORD_A + idx - 1) if l > 0 else chr(_ORD_CAP_A + idx - 1))
    return "".join(out)


def parse_letters(text: str) -> list[int]:
    """Parse text form into a raw (unreduced) letter list.

    >>> parse_letters("abAB")
    [1, 2, -1, -2]
    >>> parse_letters("a^3 B^-2")
    [1, 1, 1, 2, 2]
    """
    raw: list[int] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if "a" <= ch <= "z":
            letter = (ord(ch) - _ORD_A) + 1
        elif "A" <= ch <= "Z":
            letter = -((ord(ch) - _ORD_CAP_A) + 1)
        else:
            raise ValueError(f"unexpected character {ch!r} in word text")
        i += 1
        power = 1
        if i < n and text[i] == "^":
            i += 1
            j = i
            if j < n and text[j] in "+-":
                j += 1
            while j < n and text[j].isdigit():
                j += 1
            if j == i or not text[i:j].lstrip("+-"):
                raise ValueError(f"malformed power in word text at position {i}")
            power = int(text[i:j])
            i = j
        if power < 0:
            letter = -letter
            power = -power
        raw.extend([letter] * power)
    return raw


@dataclass(frozen=True, eq=False)
class Word:
    """A freely reduced word; the rank is a validation bound on letters.

    Group identity is the letter tuple alone: words with the same letters
    are equal regardless of declared rank, and products take the larger of
    the two ranks.
    """

    rank: int
    letters: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rank < 0:
            raise ValueError("rank must be nonnegative")
        for l in self.letters:
            if l == 0 or abs(l) > self.rank:
                raise ValueError(f"letter {l} out of range for rank {self.rank}")
        if not is_reduced(self.letters):
            raise ValueError("Word requires freely reduced letters; use word() or from_raw()")

    @staticmethod
    def from_raw(rank: int, raw: Iterable[int]) -> "Word":
        return Word(rank, reduce_letters(raw, rank))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        rank = max(self.rank, other.rank)
        return Word(rank, multiply_letters(self.letters, other.letters))

    def __invert__(self) -> "Word":
        return Word(self.rank, invert_letters(self.letters))

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else ~self
        return Word(self.rank, reduce_letters(base.letters * abs(n), self.rank))

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return format_letters(self.letters)

    def is_identity(self) -> bool:
        return not self.letters

    def conjugate_by(self, g: "Word") -> "Word":
        """g * self * g^-1."""
        return g * self * ~g

    def cyclic_reduce(self) -> tuple["Word", "Word"]:
        """Return (core, conjugator) with self = conjugator * core * conjugator^-1."""
        core, conj = cyclic_reduce_letters(self.letters)
        return Word(self.rank, core), Word(self.rank, conj)

    def exponent_sum(self, index: int | None = None) -> int:
        """Signed letter count, for one generator or (default) all of them."""
        if index is None:
            return sum(1 if l > 0 else -1 for l in self.letters)
        return sum(1 if l == index else -1 if l == -index else 0 for l in self.letters)


def word(text: str, rank: int | None = None) -> Word:
    """Parse text into a Word, inferring the rank when not given.

    >>> str(word("x y^2 X"))
    'xyyX'
    """
    raw = parse_letters(text)
    if rank is None:
        rank = max((abs(l) for l in raw), default=0)
    return Word.from_raw(rank, raw)


def commutator(a: Word, b: Word) -> Word:
    return a * b * ~a * ~b


def words_of_length(rank: int, length: int, gen_indices: Iterable[int] | None = None) -> Iterator[tuple[int, ...]]:
    """Yield every reduced letter tuple of exactly the given length over the
    chosen generators (default: all of 1..rank), in a fixed deterministic
    order."""
    if length == 0:
        yield ()
        return
    indices = tuple(gen_indices) if gen_indices is not None else tuple(range(1, rank + 1))
    alphabet = [i for g in indices for i in (g, -g)]
    prefix: list[int] = []

    def rec() -> Iterator[tuple[int, ...]]:
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for l in alphabet:
            if prefix and prefix[-1] == -l:
                continue
            prefix.append(l)
            yield from rec()
            prefix.pop()

    yield from rec()


def random_reduced(rng, rank: int, length: int, gen_indices: Iterable[int] | None = None) -> tuple[int, ...]:
    """Uniform random reduced letter tuple of the given length."""
    indices = tuple(gen_indices) if gen_indices is not None else tuple(range(1, rank + 1))
    if not indices or length == 0:
        return ()
    alphabet = [i for g in indices for i in (g, -g)]
    out: list[int] = []
    for _ in range(length):
        choices = [l for l in alphabet if not out or out[-1] != -l]
        out.append(rng.choice(choices))
    return tuple(out)
