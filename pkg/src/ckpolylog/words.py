"""Graded alphabets, words and Lyndon words.

Letters come in three kinds: weight-one generators ``t<q>`` labelled by a
prime, odd generators ``s<r>`` of weight ``r >= 3``, and the two polylog
letters ``0`` and ``1`` (both of weight one).  Words are immutable tuples of
letters; the empty word serialises as ``"e"``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from functools import total_ordering
from itertools import product
from typing import Iterable, Iterator, Sequence


class LetterKind(IntEnum):
    POLY = 0
    TAU = 1
    SIGMA = 2


@total_ordering
@dataclass(frozen=True)
class Letter:
    kind: LetterKind
    label: int

    def __post_init__(self):
        if self.kind is LetterKind.SIGMA and (self.label < 3 or self.label % 2 == 0):
            raise ValueError(f"sigma letters need odd weight >= 3, got {self.label}")
        if self.kind is LetterKind.POLY and self.label not in (0, 1):
            raise ValueError("polylog letters are 0 and 1")
        if self.kind is LetterKind.TAU and self.label < 2:
            raise ValueError("tau letters are labelled by primes")

    @property
    def weight(self) -> int:
        return self.label if self.kind is LetterKind.SIGMA else 1

    def _key(self):
        return (int(self.kind), self.label)

    def __lt__(self, other: "Letter") -> bool:
        return self._key() < other._key()

    def __str__(self) -> str:
        if self.kind is LetterKind.POLY:
            return str(self.label)
        return ("t" if self.kind is LetterKind.TAU else "s") + str(self.label)

    __repr__ = __str__

    @classmethod
    def parse(cls, text: str) -> "Letter":
        text = text.strip()
        if text in ("0", "1"):
            return cls(LetterKind.POLY, int(text))
        if text[:1] == "t":
            return cls(LetterKind.TAU, int(text[1:]))
        if text[:1] == "s":
            return cls(LetterKind.SIGMA, int(text[1:]))
        raise ValueError(f"cannot parse letter {text!r}")


def tau(q: int) -> Letter:
    return Letter(LetterKind.TAU, q)


def sigma(r: int) -> Letter:
    return Letter(LetterKind.SIGMA, r)


ZERO = Letter(LetterKind.POLY, 0)
ONE = Letter(LetterKind.POLY, 1)


@total_ordering
class Word:
    """An immutable word.  Ordering is lexicographic (a proper prefix is smaller)."""

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[Letter] = ()):
        self.letters = tuple(letters)
        self._hash = hash(self.letters)

    @property
    def weight(self) -> int:
        return sum(a.weight for a in self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word(self.letters[item])
        return self.letters[item]

    def __add__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __lt__(self, other: "Word") -> bool:
        return self.letters < other.letters

    def __hash__(self) -> int:
        return self._hash

    def sort_key(self):
        """Canonical order used for serialisation: by weight, then lexicographic."""
        return (self.weight, self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "e"
        if all(a.kind is LetterKind.POLY for a in self.letters):
            return "".join(str(a) for a in self.letters)
        return ".".join(str(a) for a in self.letters)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "Word":
        text = text.strip()
        if text in ("", "e"):
            return cls()
        if "." in text or text[0] in "ts":
            return cls(Letter.parse(t) for t in text.split("."))
        return cls(Letter.parse(c) for c in text)

    def rotations(self) -> Iterator["Word"]:
        for i in range(1, len(self.letters)):
            yield Word(self.letters[i:] + self.letters[:i])


EMPTY = Word()


class GradedAlphabet:
    """A finite totally ordered set of graded letters.

    The order is fixed at construction: taus by prime, then sigmas by weight
    (polylog letters, if present, come first).
    """

    def __init__(self, letters: Iterable[Letter]):
        letters = sorted(set(letters))
        self.letters: tuple[Letter, ...] = tuple(letters)
        self._index = {a: i for i, a in enumerate(self.letters)}

    @classmethod
    def from_primes(cls, primes: Iterable[int], max_weight: int = 0) -> "GradedAlphabet":
        """Taus for ``primes`` plus one sigma per odd weight in ``[3, max_weight]``."""
        letters = [tau(q) for q in primes]
        letters += [sigma(r) for r in range(3, max_weight + 1, 2)]
        return cls(letters)

    @classmethod
    def polylog(cls) -> "GradedAlphabet":
        return cls([ZERO, ONE])

    @classmethod
    def parse(cls, text: str) -> "GradedAlphabet":
        text = text.strip().strip("{}")
        if not text:
            return cls([])
        return cls(Letter.parse(t) for t in text.split(","))

    @property
    def taus(self) -> tuple[Letter, ...]:
        return tuple(a for a in self.letters if a.kind is LetterKind.TAU)

    @property
    def sigmas(self) -> tuple[Letter, ...]:
        return tuple(a for a in self.letters if a.kind is LetterKind.SIGMA)

    def __contains__(self, letter: Letter) -> bool:
        return letter in self._index

    def __iter__(self):
        return iter(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, GradedAlphabet) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __str__(self) -> str:
        return "{" + ",".join(str(a) for a in self.letters) + "}"

    __repr__ = __str__

    def owns(self, word: Word) -> bool:
        return all(a in self._index for a in word)

    def words_of_weight(self, weight: int) -> list[Word]:
        """All words of exactly the given weight, sorted lexicographically."""
        if weight < 0:
            return []
        table: list[list[tuple[Letter, ...]]] = [[()]]
        for w in range(1, weight + 1):
            level = []
            for a in self.letters:
                if a.weight <= w:
                    level.extend(rest + (a,) for rest in table[w - a.weight])
            table.append(level)
        return sorted(Word(t) for t in table[weight])

    def words_up_to(self, max_weight: int) -> list[Word]:
        out = []
        for w in range(max_weight + 1):
            out.extend(self.words_of_weight(w))
        return out


def is_lyndon(word: Word) -> bool:
    """True iff ``word`` is strictly smaller than each of its proper rotations."""
    if not len(word):
        raise ValueError("the empty word is not a Lyndon word")
    return all(word < r for r in word.rotations())


def lyndon_words(alphabet: GradedAlphabet, max_weight: int) -> list[Word]:
    """Lyndon words of weight <= max_weight, sorted by (weight, lex)."""
    if max_weight < 1:
        raise ValueError("max_weight must be >= 1")
    out = []
    for w in range(1, max_weight + 1):
        out.extend(x for x in alphabet.words_of_weight(w) if is_lyndon(x))
    return sorted(out, key=Word.sort_key)


def lyndon_factorization(word: Word) -> list[Word]:
    """Chen-Fox-Lyndon factorisation into non-increasing Lyndon words (Duval)."""
    s = word.letters
    n, i, out = len(s), 0, []
    while i < n:
        j, k = i + 1, i
        while j < n and s[k] <= s[j]:
            k = i if s[k] < s[j] else k + 1
            j += 1
        while i <= k:
            out.append(Word(s[i:i + j - k]))
            i += j - k
    return out


def standard_factorization(word: Word) -> tuple[Word, Word]:
    """Split a Lyndon word of length >= 2 as uv with v its longest proper Lyndon suffix."""
    for i in range(1, len(word)):
        v = word[i:]
        if is_lyndon(v):
            return word[:i], v
    raise ValueError(f"{word} has length < 2")


def all_words(letters: Sequence[Letter], length: int) -> Iterator[Word]:
    for t in product(letters, repeat=length):
        yield Word(t)
