"""Bases and primitive elements of the free group of rank two.

Cyclically reduced (CR) bases come from coprime length pairs through the
subtraction form of Euclid's algorithm; every other basis is a conjugate of
a CR basis.  Generators are ``a`` (code 1) and ``b`` (code 2).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

from .errors import CapExceededError, InternalConsistencyError, NotABasisError, PreconditionError
from .graphs import RawGraph, _fold_union_find
from .words import (
    DEFAULT_ALPHABET,
    Word,
    all_reduced_words,
    cyclic_decompose,
    exponent_sums,
    free_reduce,
    invert_letters,
    is_monotone,
    is_prefix_of_power,
    letter_order_key,
    substitute,
)

A, B = Word((1,), 2), Word((2,), 2)

# (u, v) seeds; the other sign patterns of a single letter come from inversion
SEEDS: tuple[tuple[int, int], ...] = ((1, 2), (-1, 2), (1, -2), (-1, -2))

BRUTE_CAP = 10
STRUCTURAL_CAP = 12


def _is_basis_letters(u: Sequence[int], v: Sequence[int]) -> bool:
    if not u or not v:
        return False
    g = RawGraph(2)
    g.add_path(0, u, 0)
    g.add_path(0, v, 0)
    folded = _fold_union_find(g)
    # reduced loops keep two edge types at every non-basepoint vertex, so
    # nothing is trimmed and the fold is already the core graph
    return len(folded.vertices) == 1 and len(folded.edges) == 2


def is_basis(u: Word, v: Word) -> bool:
    """True when the bouquet of ``u`` and ``v`` folds onto the two-loop rose."""
    if u.rank != 2 or v.rank != 2:
        raise PreconditionError("is_basis works in rank 2")
    return _is_basis_letters(u.letters, v.letters)


def _pair_key(u: Sequence[int], v: Sequence[int]) -> tuple:
    ku, kv = letter_order_key(u), letter_order_key(v)
    return (ku, kv) if ku <= kv else (kv, ku)


@dataclass(frozen=True)
class Basis2:
    """An ordered basis ``(u, v)`` of F2."""

    u: Word
    v: Word

    def __post_init__(self):
        if not is_basis(self.u, self.v):
            raise NotABasisError(f"{{{self.u}, {self.v}}} is not a basis of F2")

    @classmethod
    def parse(cls, u: str, v: str) -> "Basis2":
        return cls(Word.parse(u, rank=2), Word.parse(v, rank=2))

    def key(self) -> tuple:
        """Order-independent identity of the pair."""
        return _pair_key(self.u.letters, self.v.letters)

    def canonical(self) -> "Basis2":
        return self if letter_order_key(self.u.letters) <= letter_order_key(self.v.letters) else self.swapped()

    def swapped(self) -> "Basis2":
        return Basis2(self.v, self.u)

    def is_cr(self) -> bool:
        return self.u.is_cyclically_reduced() and self.v.is_cyclically_reduced()

    @property
    def total_length(self) -> int:
        return len(self.u) + len(self.v)

    def format(self, alphabet: str = DEFAULT_ALPHABET) -> str:
        return f"{{{self.u.format(alphabet)}, {self.v.format(alphabet)}}}"

    def __str__(self) -> str:
        return self.format()


def _basis_unchecked(u: Word, v: Word) -> Basis2:
    b = object.__new__(Basis2)
    object.__setattr__(b, "u", u)
    object.__setattr__(b, "v", v)
    return b


# -- Euclid ------------------------------------------------------------------


@dataclass(frozen=True)
class EuclidSequence:
    pairs: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)


def euclid_sequence(p: int, q: int) -> EuclidSequence:
    """Subtract the smaller entry from the larger until reaching ``(1, 1)``.

    >>> euclid_sequence(5, 3).pairs
    ((5, 3), (2, 3), (2, 1), (1, 1))
    """
    if p < 1 or q < 1:
        raise PreconditionError(f"lengths must be positive, got ({p}, {q})")
    if gcd(p, q) != 1:
        raise PreconditionError(f"({p}, {q}) are not coprime")
    pairs = [(p, q)]
    while (p, q) != (1, 1):
        if p < q:
            q -= p
        else:
            p -= q
        pairs.append((p, q))
    return EuclidSequence(tuple(pairs))


def _seed_codes(seed) -> tuple[int, int]:
    if isinstance(seed, str):
        w = Word.parse(seed, rank=2)
        seed = w.letters
    if isinstance(seed, Basis2):
        seed = (seed.u.letters[0], seed.v.letters[0])
    s, t = (x.letters[0] if isinstance(x, Word) else int(x) for x in seed)
    if {abs(s), abs(t)} != {1, 2}:
        raise PreconditionError(f"seed must assign one sign to each generator, got {seed!r}")
    return s, t


def _generate(p: int, q: int, seed: tuple[int, int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    pairs = euclid_sequence(p, q).pairs
    u, v = (seed[0],), (seed[1],)
    for pi, qi in reversed(pairs[:-1]):
        if pi < qi:
            v = v + u
        else:
            u = u + v
    return u, v


def generate_cr_basis(p: int, q: int, seed=(1, 2)) -> Basis2:
    """The CR basis with ``|u| = p`` and ``|v| = q`` grown from ``seed``.

    ``seed`` is a pair of letter codes, a two-letter string like ``"Ab"``, or
    a pair of one-letter words.

    >>> print(generate_cr_basis(3, 2))
    {aba, ba}
    """
    u, v = _generate(p, q, _seed_codes(seed))
    return Basis2(Word(u, 2), Word(v, 2))


# -- reverse Euclid --------------------------------------------------------------


@dataclass(frozen=True)
class ReverseEuclid:
    """Shrinking sequence from a normalized CR basis down to a seed.

    ``steps[0]`` is the input after optionally inverting the element at index
    ``inverted`` and conjugating both by ``rotation`` (``r^-1 x r``).
    """

    steps: tuple[Basis2, ...]
    rotation: Word
    inverted: int | None = None

    @property
    def seed(self) -> Basis2:
        return self.steps[-1]


def _shrink(x: tuple, y: tuple):
    """Apply suffix subtractions; stop at the first prefix-only step."""
    steps = [(x, y)]
    while len(x) > 1 or len(y) > 1:
        if len(x) == len(y):
            raise InternalConsistencyError(f"equal lengths {len(x)} before reaching a seed")
        short_first = len(x) < len(y)
        s, longer = (x, y) if short_first else (y, x)
        if longer[-len(s):] == s:
            t = longer[: -len(s)]
        elif longer[: len(s)] == s:
            return steps, s
        else:
            raise NotABasisError("shorter element is neither a prefix nor a suffix of the longer")
        x, y = (x, t) if short_first else (t, y)
        steps.append((x, y))
    return steps, None


def reverse_euclid(x0: Word, y0: Word) -> ReverseEuclid:
    """Undo the Euclid construction on a CR basis.

    >>> r = reverse_euclid(Word.parse("aab"), Word.parse("ab"))
    >>> [str(b) for b in r.steps], str(r.rotation)
    (['{aba, ba}', '{a, ba}', '{a, b}'], 'a')
    """
    if not is_basis(x0, y0):
        raise NotABasisError(f"{{{x0}, {y0}}} is not a basis")
    if not (x0.is_cyclically_reduced() and y0.is_cyclically_reduced()):
        raise NotABasisError(f"{{{x0}, {y0}}} is not cyclically reduced")
    x, y = x0.letters, y0.letters
    inverted = None
    if len(x) != len(y):
        short_first = len(x) < len(y)
        s, longer = (x, y) if short_first else (y, x)
        fits = lambda s: longer[: len(s)] == s or longer[-len(s):] == s  # noqa: E731
        if not fits(s):
            if not fits(invert_letters(s)):
                raise NotABasisError("no element or inverse is a prefix or suffix of the other")
            inverted = 0 if short_first else 1
            if short_first:
                x = invert_letters(x)
            else:
                y = invert_letters(y)
    rotation: tuple = ()
    for _ in range(len(x) + len(y) + 1):
        steps, prefix = _shrink(x, y)
        if prefix is None:
            bases = tuple(_basis_unchecked(Word(a, 2), Word(b, 2)) for a, b in steps)
            return ReverseEuclid(bases, Word(free_reduce(rotation), 2), inverted)
        inv = invert_letters(prefix)
        nx, ny = free_reduce(inv + x + prefix), free_reduce(inv + y + prefix)
        if len(nx) != len(x) or len(ny) != len(y):
            raise InternalConsistencyError(f"{Word(prefix, 2)} is not a common prefix")
        x, y = nx, ny
        rotation = rotation + prefix
    raise InternalConsistencyError("rotation fixes did not converge")


# -- general bases ---------------------------------------------------------------


@dataclass(frozen=True)
class GeneralBasisDecomposition:
    """``first = x u x^-1`` and ``second = x w v w^-1 x^-1`` without cancellation.

    ``swapped`` is true when the second input element plays the ``u`` role.
    """

    x: Word
    w: Word
    u: Word
    v: Word
    swapped: bool = False

    def cr_basis(self) -> Basis2:
        return Basis2(self.u.conjugate(self.w), self.v)

    def recompose(self) -> tuple[Word, Word]:
        first = self.x * self.u * self.x.inverse()
        second = (self.x * self.w) * self.v * (self.x * self.w).inverse()
        return (second, first) if self.swapped else (first, second)


def decompose_general_basis(ub: Word, vb: Word) -> GeneralBasisDecomposition:
    if not is_basis(ub, vb):
        raise NotABasisError(f"{{{ub}, {vb}}} is not a basis")
    du, dv = cyclic_decompose(ub), cyclic_decompose(vb)
    swapped = len(du.conjugator) > len(dv.conjugator)
    if swapped:
        du, dv = dv, du
    x, u, y, v = du.conjugator, du.core, dv.conjugator, dv.core
    if not x.is_prefix_of(y):
        raise InternalConsistencyError(f"conjugator {x} is not a prefix of {y}")
    w = y[len(x):]
    if w and not is_prefix_of_power(w, u):
        raise InternalConsistencyError(f"{w} is not a prefix of a power of {u} or its inverse")
    rotated = u.conjugate(w)
    if len(rotated) != len(u) or not rotated.is_cyclically_reduced():
        raise InternalConsistencyError(f"{w}^-1 {u} {w} is not a rotation of {u}")
    if not is_basis(rotated, v):
        raise InternalConsistencyError("conjugated pair is not a CR basis")
    return GeneralBasisDecomposition(x, w, u, v, swapped)


def inverse_substitution(basis: Basis2) -> tuple[Word, Word]:
    """Words ``alpha, beta`` in the basis letters with ``alpha(u, v) = a``, ``beta(u, v) = b``.

    In the returned words letter ``a`` stands for ``u`` and ``b`` for ``v``.
    Built from the decomposition and the reverse Euclid trace.
    """
    # invariant: e[i] = k^-1 E[i](u, v) k, with E[i] a word in the basis letters
    e = [basis.u, basis.v]
    E = [A, B]
    dec = decompose_general_basis(basis.u, basis.v)
    k = dec.x * dec.w
    e = [z.conjugate(k) for z in e]
    rev = reverse_euclid(e[0], e[1])
    if rev.inverted is not None:
        i = rev.inverted
        e[i], E[i] = e[i].inverse(), E[i].inverse()
    e = [z.conjugate(rev.rotation) for z in e]
    k = k * rev.rotation
    if (e[0], e[1]) != (rev.steps[0].u, rev.steps[0].v):
        raise InternalConsistencyError("normalized pair does not match the reverse Euclid start")
    for prev, nxt in zip(rev.steps, rev.steps[1:]):
        if prev.u == nxt.u:
            E[1] = E[1] * E[0].inverse()
        else:
            E[0] = E[0] * E[1].inverse()
    seed = rev.seed
    images = {}
    for word, expr in ((seed.u, E[0]), (seed.v, E[1])):
        code = word.letters[0]
        images[abs(code)] = expr if code > 0 else expr.inverse()
    alpha0, beta0 = images[1], images[2]
    K = substitute(k, [alpha0, beta0])
    alpha, beta = alpha0.conjugate(K), beta0.conjugate(K)
    if substitute(alpha, [basis.u, basis.v]) != A or substitute(beta, [basis.u, basis.v]) != B:
        raise InternalConsistencyError(f"inverse substitution for {basis} does not round-trip")
    return alpha, beta


# -- enumeration -----------------------------------------------------------------


def _rotation_closure(u: tuple, v: tuple) -> set[tuple[tuple, tuple]]:
    seen = {(u, v)}
    todo = [(u, v)]
    while todo:
        x, y = todo.pop()
        moves = []
        if x[0] == y[0]:
            moves.append((x[1:] + x[:1], y[1:] + y[:1]))
        if x[-1] == y[-1]:
            moves.append((x[-1:] + x[:-1], y[-1:] + y[:-1]))
        for pair in moves:
            if pair not in seen:
                seen.add(pair)
                todo.append(pair)
    return seen


def _sorted_bases(pairs: Iterable[tuple[tuple, tuple]], check: bool) -> list[Basis2]:
    make = Basis2 if check else _basis_unchecked
    return [make(Word(u, 2), Word(v, 2)) for u, v in (_pair_key_letters(p) for p in sorted(pairs, key=lambda p: _pair_key(*p)))]


def _pair_key_letters(pair):
    u, v = pair
    return (u, v) if letter_order_key(u) <= letter_order_key(v) else (v, u)


def enumerate_cr_bases(max_len: int) -> list[Basis2]:
    """All CR bases with ``|u| + |v| <= max_len``, one entry per unordered pair."""
    if max_len < 2:
        raise PreconditionError("max_len must be at least 2")
    found: dict[tuple, tuple] = {}
    for n in range(2, max_len + 1):
        for p in range(1, n):
            q = n - p
            if gcd(p, q) != 1:
                continue
            for seed in SEEDS:
                for u, v in _rotation_closure(*_generate(p, q, seed)):
                    for pair in ((u, v), (invert_letters(u), v), (u, invert_letters(v))):
                        found.setdefault(_pair_key(*pair), pair)
    return _sorted_bases(found.values(), check=True)


def _brute_bases(max_len: int, abelian_filter: bool) -> dict[tuple, tuple]:
    by_len: dict[int, dict[tuple, list]] = {}
    for n in range(1, max_len):
        index: dict[tuple, list] = {}
        for w in all_reduced_words(n, 2):
            s = t = 0
            for c in w:
                if c == 1:
                    s += 1
                elif c == -1:
                    s -= 1
                elif c == 2:
                    t += 1
                else:
                    t -= 1
            index.setdefault((s, t), []).append(w)
        by_len[n] = index
    found = {}
    for i in range(1, max_len // 2 + 1):
        for j in range(i, max_len - i + 1):
            for (s, t), us in by_len[i].items():
                for (s2, t2), vs in by_len[j].items():
                    if abelian_filter and abs(s * t2 - t * s2) != 1:
                        continue
                    for u in us:
                        ku = letter_order_key(u)
                        for v in vs:
                            if i == j and letter_order_key(v) <= ku:
                                continue
                            if _is_basis_letters(u, v):
                                found[_pair_key(u, v)] = (u, v)
    return found


def _structural_bases(max_len: int) -> dict[tuple, tuple]:
    found = {}
    x_words = {n: all_reduced_words(n, 2) for n in range(0, max_len // 4 + 1)}
    for basis in enumerate_cr_bases(max_len):
        for u0, v in ((basis.u.letters, basis.v.letters), (basis.v.letters, basis.u.letters)):
            budget = max_len - len(u0) - len(v)
            n0 = len(u0)
            conjugators = {()}
            for m in range(1, budget // 2 + 1):
                # suffixes of powers of u0 and of u0^-1
                conjugators.add(tuple(u0[(i - m) % n0] for i in range(m)))
                inv = invert_letters(u0)
                conjugators.add(tuple(inv[(i - m) % n0] for i in range(m)))
            for w in conjugators:
                u = free_reduce(w + u0 + invert_letters(w))
                if len(u) != n0:
                    raise InternalConsistencyError("conjugate by a suffix of a power is not a rotation")
                wv = free_reduce(w + v + invert_letters(w))
                if len(wv) != 2 * len(w) + len(v):
                    continue
                room = (budget - 2 * len(w)) // 4
                for xl in range(room + 1):
                    for x in x_words[xl]:
                        xi = invert_letters(x)
                        ub = free_reduce(x + u + xi)
                        vb = free_reduce(x + wv + xi)
                        if len(ub) == 2 * xl + n0 and len(vb) == 2 * xl + len(wv):
                            found.setdefault(_pair_key(ub, vb), (ub, vb))
    return found


def enumerate_bases(max_total_len: int, mode: str = "brute", *, cap: int | None = None, abelian_filter: bool = True) -> list[Basis2]:
    """All bases with ``|u| + |v| <= max_total_len``, one entry per unordered pair.

    ``brute`` folds every candidate word pair (skipping pairs whose exponent
    sums already rule out a basis, unless ``abelian_filter`` is off);
    ``structural`` conjugates the CR bases.
    """
    if mode not in ("brute", "structural"):
        raise PreconditionError(f"unknown mode {mode!r}")
    if cap is None:
        cap = BRUTE_CAP if mode == "brute" else STRUCTURAL_CAP
    if max_total_len > cap:
        raise CapExceededError(f"max_total_len {max_total_len} exceeds the {mode} cap {cap}")
    if max_total_len < 2:
        return []
    found = _brute_bases(max_total_len, abelian_filter) if mode == "brute" else _structural_bases(max_total_len)
    return _sorted_bases(found.values(), check=mode == "structural")


def ordered(bases: Iterable[Basis2]) -> list[Basis2]:
    """Both orders of every unordered basis."""
    out = []
    for b in bases:
        out.append(b)
        out.append(_basis_unchecked(b.v, b.u))
    return out


# -- primitive elements ------------------------------------------------------------


def _necklace(letters: tuple) -> tuple:
    n = len(letters)
    inv = invert_letters(letters)
    return min(min(w[i:] + w[:i] for i in range(n)) for w in (letters, inv))


@lru_cache(maxsize=None)
def _primitive_necklaces(n: int) -> frozenset:
    out = set()
    partners = [1] if n == 1 else [q for q in range(1, n) if gcd(n, q) == 1]
    for q in partners:
        for seed in SEEDS:
            out.add(_necklace(_generate(n, q, seed)[0]))
            out.add(_necklace(_generate(q, n, seed)[1]))
    return frozenset(out)


def is_primitive(w: Word) -> bool:
    """Whether ``w`` belongs to some basis of F2."""
    if w.rank != 2:
        raise PreconditionError("is_primitive works in rank 2")
    u = cyclic_decompose(w).core
    n = len(u)
    if n <= 1:
        return n == 1
    if not is_monotone(u):
        return False
    s, t = exponent_sums(u)
    if gcd(abs(s), abs(t)) != 1:
        return False
    return _necklace(u.letters) in _primitive_necklaces(n)


def primitive_complement(w: Word) -> Word | None:
    """Some ``v`` with ``{w, v}`` a basis, or None when ``w`` is not primitive."""
    if not is_primitive(w):
        return None
    d = cyclic_decompose(w)
    u = d.core.letters
    n = len(u)
    for q in [1] if n == 1 else [q for q in range(1, n) if gcd(n, q) == 1]:
        for seed in SEEDS:
            for first, (gu, gv) in ((True, _generate(n, q, seed)), (False, _generate(q, n, seed))):
                mine, other = (gu, gv) if first else (gv, gu)
                for image, partner in ((mine, other), (invert_letters(mine), invert_letters(other))):
                    for i in range(n):
                        if image[i:] + image[:i] == u:
                            # rotating by image[:i] conjugates both elements
                            c = Word(image[:i], 2)
                            v = Word(partner, 2).conjugate(c)
                            x = d.conjugator
                            return x * v * x.inverse()
    raise InternalConsistencyError(f"no complement found for primitive {w}")


# -- exponent pattern ----------------------------------------------------------------


@dataclass(frozen=True)
class ExponentPattern:
    """Cyclic run structure shared by the two elements of a CR basis."""

    degenerate: bool = False
    eps_letter: int | None = None
    eps: int | None = None
    run_letter: int | None = None
    m: int | None = None
    violation: str | None = None

    @property
    def ok(self) -> bool:
        return self.violation is None


def _cyclic_subword(s: tuple, longer: tuple) -> bool:
    if len(s) > len(longer):
        return False
    doubled = longer + longer[: len(s) - 1]
    return any(doubled[i : i + len(s)] == s for i in range(len(longer)))


def _cyclic_runs(w: tuple) -> list[tuple[int, int]]:
    """(generator, signed run length) over the cyclic word."""
    n = len(w)
    if all(c == w[0] for c in w):
        return [(abs(w[0]), n if w[0] > 0 else -n)]
    start = next(i for i in range(n) if w[i] != w[i - 1])
    rot = w[start:] + w[:start]
    runs, i = [], 0
    while i < n:
        j = i
        while j < n and rot[j] == rot[i]:
            j += 1
        runs.append((abs(rot[i]), (j - i) if rot[i] > 0 else -(j - i)))
        i = j
    return runs


def exponent_pattern(u: Word, v: Word) -> ExponentPattern:
    if not (is_basis(u, v) and u.is_cyclically_reduced() and v.is_cyclically_reduced()):
        raise PreconditionError(f"{{{u}, {v}}} is not a CR basis")
    if len(u) == 1 and len(v) == 1:
        return ExponentPattern(degenerate=True)
    for x in (u.letters, invert_letters(u.letters)):
        y = v.letters
        if _cyclic_subword(x, y) or _cyclic_subword(y, x):
            break
    else:
        raise PreconditionError(f"neither {u} nor its inverse is a cyclic subword relation with {v}")
    exps: dict[int, set] = {1: set(), 2: set()}
    counts = {1: 0, 2: 0}
    for word in (x, y):
        if len({abs(c) for c in word}) < 2:
            # a lone letter has no run boundaries, so it constrains nothing
            continue
        for g, e in _cyclic_runs(word):
            exps[g].add(e)
            counts[g] += abs(e)
    candidates = [g for g in (1, 2) if exps[g] and (exps[g] == {1} or exps[g] == {-1})]
    if not candidates:
        return ExponentPattern(violation=f"no letter has a constant exponent: {exps}")
    g = min(candidates, key=lambda g: (counts[g], g))
    h = 3 - g
    eps = next(iter(exps[g]))
    if not exps[h]:
        return ExponentPattern(eps_letter=g, eps=eps, run_letter=h)
    lo, hi = min(exps[h]), max(exps[h])
    if hi - lo > 1:
        return ExponentPattern(eps_letter=g, eps=eps, run_letter=h, violation=f"runs of {h} take exponents {sorted(exps[h])}")
    return ExponentPattern(eps_letter=g, eps=eps, run_letter=h, m=lo)
