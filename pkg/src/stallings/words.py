"""Reduced words in a free group of finite rank.

Letters are signed integers: ``g`` is the ``g``-th generator and ``-g`` its
inverse.  In text, a lowercase letter is a generator and the matching
uppercase letter its inverse, so ``"abA"`` is ``a b a^-1``.

>>> w = Word.parse("abBa")
>>> str(w), w.letters, w.rank
('aa', (1, 1), 2)
>>> str(Word.parse("aba") * Word.parse("A"))
'ab'
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .errors import AlphabetError, ParseError, PreconditionError, RankMismatchError

DEFAULT_ALPHABET = "abcdefghijklmnopqrstuvw"
XYZ_ALPHABET = "xyz"


class Letter(NamedTuple):
    generator_index: int
    sign: int

    @property
    def code(self) -> int:
        return self.sign * self.generator_index

    @classmethod
    def from_code(cls, code: int) -> "Letter":
        return cls(abs(code), 1 if code > 0 else -1)


def free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    """Cancel adjacent inverse pairs until none remain."""
    stack: list[int] = []
    for c in letters:
        if stack and stack[-1] == -c:
            stack.pop()
        else:
            stack.append(c)
    return tuple(stack)


def invert_letters(letters: Sequence[int]) -> tuple[int, ...]:
    return tuple(-c for c in reversed(letters))


def is_reduced_letters(letters: Sequence[int]) -> bool:
    return all(letters[i] != -letters[i + 1] for i in range(len(letters) - 1))


def letter_order_key(letters: Sequence[int]) -> tuple:
    """Shortlex key with letter order a < A < b < B < ..."""
    return (len(letters), tuple((abs(c), c < 0) for c in letters))


def detect_alphabet(texts: Iterable[str]) -> str:
    """Use ``xyz`` when only x, y, z occur, else the ``abc...`` alphabet."""
    used = {ch.lower() for text in texts for ch in text if ch.isalpha()}
    if used and used <= set(XYZ_ALPHABET):
        return XYZ_ALPHABET
    return DEFAULT_ALPHABET


def _parse_letters(text: str, alphabet: str) -> list[int]:
    codes = []
    line, column = 1, 0
    for ch in text:
        column += 1
        if ch == "\n":
            line, column = line + 1, 0
            continue
        if ch.isspace():
            continue
        idx = alphabet.find(ch.lower())
        if idx < 0 or not ch.isalpha():
            raise ParseError(f"invalid letter {ch!r}", text, line, column)
        codes.append(idx + 1 if ch.islower() else -(idx + 1))
    return codes


@dataclass(frozen=True, slots=True)
class Word:
    """A freely reduced word; immutable and hashable."""

    letters: tuple[int, ...]
    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise AlphabetError(f"rank must be positive, got {self.rank}")
        for c in self.letters:
            if c == 0 or abs(c) > self.rank:
                raise AlphabetError(f"letter {c} out of range for rank {self.rank}")
        if not is_reduced_letters(self.letters):
            raise PreconditionError(f"{self.letters} is not freely reduced")

    @classmethod
    def parse(cls, text: str, rank: int | None = None, alphabet: str | None = None) -> "Word":
        """Parse the text syntax; unreduced input is reduced.

        Without ``rank`` the rank is the highest generator used, but at least 2.
        """
        if alphabet is None:
            alphabet = detect_alphabet([text])
        codes = _parse_letters(text, alphabet)
        if rank is None:
            rank = max([2] + [abs(c) for c in codes])
        return reduce(codes, rank)

    @classmethod
    def empty(cls, rank: int = 2) -> "Word":
        return cls((), rank)

    @classmethod
    def generator(cls, index: int, rank: int = 2) -> "Word":
        return cls((index,), rank)

    def format(self, alphabet: str = DEFAULT_ALPHABET) -> str:
        if self.rank > len(alphabet):
            raise AlphabetError(f"alphabet {alphabet!r} too small for rank {self.rank}")
        return "".join(alphabet[c - 1] if c > 0 else alphabet[-c - 1].upper() for c in self.letters)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"Word({self.format()!r}, rank={self.rank})"

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return Word(self.letters[index], self.rank)
        return self.letters[index]

    def letter(self, i: int) -> Letter:
        return Letter.from_code(self.letters[i])

    def _check_rank(self, other: "Word") -> None:
        if other.rank != self.rank:
            raise RankMismatchError(f"cannot combine rank {self.rank} with rank {other.rank}")

    def __mul__(self, other: "Word") -> "Word":
        self._check_rank(other)
        return Word(free_reduce(self.letters + other.letters), self.rank)

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        return Word(free_reduce(base.letters * abs(k)), self.rank)

    def inverse(self) -> "Word":
        return Word(invert_letters(self.letters), self.rank)

    def conjugate(self, by: "Word") -> "Word":
        """Return ``by^-1 * self * by``."""
        return by.inverse() * self * by

    def is_cyclically_reduced(self) -> bool:
        return len(self.letters) <= 1 or self.letters[0] != -self.letters[-1]

    def rotate(self, k: int) -> "Word":
        """Cyclic rotation moving the first ``k`` letters to the end (CR words only)."""
        if not self.is_cyclically_reduced():
            raise PreconditionError("only cyclically reduced words can be rotated")
        if not self.letters:
            return self
        k %= len(self.letters)
        return Word(self.letters[k:] + self.letters[:k], self.rank)

    def is_prefix_of(self, other: "Word") -> bool:
        return other.letters[: len(self.letters)] == self.letters

    def is_suffix_of(self, other: "Word") -> bool:
        n = len(self.letters)
        return n == 0 or other.letters[-n:] == self.letters

    def sort_key(self) -> tuple:
        return letter_order_key(self.letters)


def reduce(raw: Iterable, rank: int) -> Word:
    """Freely reduce a sequence of signed codes or :class:`Letter` values.

    >>> str(reduce([1, 2, -2, 1], 2))
    'aa'
    >>> reduce([1, -1], 2).letters
    ()
    """
    codes = []
    for item in raw:
        code = item.code if isinstance(item, Letter) else int(item)
        if code == 0 or abs(code) > rank:
            raise AlphabetError(f"letter {code} out of range for rank {rank}")
        codes.append(code)
    return Word(free_reduce(codes), rank)


@dataclass(frozen=True, slots=True)
class CyclicDecomposition:
    conjugator: Word
    core: Word

    def recompose(self) -> Word:
        return self.conjugator * self.core * self.conjugator.inverse()


def cyclic_split(letters: Sequence[int]) -> int:
    """Length of the maximal conjugator ``x`` with ``letters = x u x^-1``."""
    n = len(letters)
    i = 0
    while i < n - 1 - i and letters[i] == -letters[n - 1 - i]:
        i += 1
    return i


def cyclic_decompose(w: Word) -> CyclicDecomposition:
    """Write ``w = x u x^-1`` without cancellation and ``u`` cyclically reduced.

    >>> d = cyclic_decompose(Word.parse("abaBA"))
    >>> str(d.conjugator), str(d.core)
    ('ab', 'a')
    """
    k = cyclic_split(w.letters)
    return CyclicDecomposition(Word(w.letters[:k], w.rank), Word(w.letters[k : len(w) - k], w.rank))


def cyclic_core(w: Word) -> Word:
    return cyclic_decompose(w).core


def is_monotone(w: Word) -> bool:
    """True when every generator occurs in ``w`` with only one sign."""
    signs: dict[int, int] = {}
    for c in w.letters:
        s = 1 if c > 0 else -1
        if signs.setdefault(abs(c), s) != s:
            return False
    return True


def heads_distinct(w: Word, w2: Word) -> bool:
    """True when the first letters differ, so nothing folds at a shared origin."""
    if not w.letters or not w2.letters:
        raise PreconditionError("heads_distinct needs nonempty words")
    return w.letters[0] != w2.letters[0]


def exponent_sums(w: Word) -> tuple[int, ...]:
    sums = [0] * w.rank
    for c in w.letters:
        sums[abs(c) - 1] += 1 if c > 0 else -1
    return tuple(sums)


def _is_prefix_of_reduced_power(w: Sequence[int], u: Sequence[int]) -> bool:
    if len(u) and (len(u) <= 1 or u[0] != -u[-1]):
        return all(w[i] == u[i % len(u)] for i in range(len(w)))
    # u is not cyclically reduced: powers cancel, so compare against each one
    for k in range(len(w) + 2):
        power = free_reduce(tuple(u) * k)
        if tuple(w) == power[: len(w)]:
            return True
    return False


def is_prefix_of_power(w: Word, u: Word) -> bool:
    """True when ``w`` is a prefix of ``u^k`` or ``u^-k`` for some ``k >= 0``."""
    if not u.letters:
        raise PreconditionError("is_prefix_of_power needs a nonempty u")
    w._check_rank(u)
    return _is_prefix_of_reduced_power(w.letters, u.letters) or _is_prefix_of_reduced_power(
        w.letters, invert_letters(u.letters)
    )


def substitute(w: Word, images: Sequence[Word]) -> Word:
    """Apply the homomorphism sending generator ``i`` to ``images[i-1]``."""
    if len(images) != w.rank:
        raise RankMismatchError(f"need {w.rank} images, got {len(images)}")
    target = images[0].rank
    out: list[int] = []
    for c in w.letters:
        img = images[abs(c) - 1]
        if img.rank != target:
            raise RankMismatchError("images live in different ranks")
        out.extend(img.letters if c > 0 else invert_letters(img.letters))
    return Word(free_reduce(out), target)


def all_reduced_words(length: int, rank: int = 2) -> list[tuple[int, ...]]:
    """All reduced letter tuples of exactly ``length`` letters, in shortlex order."""
    letters = [c for g in range(1, rank + 1) for c in (g, -g)]
    words: list[tuple[int, ...]] = [()]
    for _ in range(length):
        words = [w + (c,) for w in words for c in letters if not w or w[-1] != -c]
    return words
