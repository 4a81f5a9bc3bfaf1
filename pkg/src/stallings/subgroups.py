"""Subgroups of a free group through their core graphs."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import CapExceededError, RankMismatchError
from .graphs import CoreGraph, RawGraph, compute_morphism, quotient, to_core
from .words import DEFAULT_ALPHABET, Word, detect_alphabet, invert_letters


@dataclass(frozen=True)
class Subgroup:
    """A subgroup given by a (possibly redundant) list of generators."""

    generators: tuple[Word, ...]
    rank: int = 2

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        for g in self.generators:
            if g.rank != self.rank:
                raise RankMismatchError(f"generator {g} has rank {g.rank}, subgroup has rank {self.rank}")

    @classmethod
    def parse(cls, text: str, rank: int | None = None, alphabet: str | None = None) -> "Subgroup":
        """Comma-separated generators, e.g. ``"aBa, AAb"``."""
        parts = [p for p in text.split(",") if p.strip()]
        if alphabet is None:
            alphabet = detect_alphabet(parts)
        words = [Word.parse(p, alphabet=alphabet, rank=rank) for p in parts]
        if rank is None:
            rank = max([2] + [w.rank for w in words])
            words = [Word(w.letters, rank) for w in words]
        return cls(tuple(words), rank)

    @classmethod
    def of(cls, *words: Word) -> "Subgroup":
        return cls(tuple(words), words[0].rank)

    @classmethod
    def full(cls, rank: int = 2) -> "Subgroup":
        return cls(tuple(Word.generator(i, rank) for i in range(1, rank + 1)), rank)

    @classmethod
    def from_core(cls, core: CoreGraph) -> "Subgroup":
        return cls(tuple(core.generators()), core.rank)

    @cached_property
    def core(self) -> CoreGraph:
        return to_core(RawGraph.bouquet(self.generators, self.rank))

    def join(self, *words: Word) -> "Subgroup":
        """The subgroup generated by this one and ``words``."""
        return Subgroup(self.generators + tuple(words), self.rank)

    def format(self, alphabet: str = DEFAULT_ALPHABET) -> str:
        return "<" + ", ".join(g.format(alphabet) for g in self.generators) + ">"

    def __str__(self) -> str:
        return self.format()


def core_graph(H: Subgroup) -> CoreGraph:
    return H.core


def _check_rank(w: Word, H: Subgroup) -> None:
    if w.rank != H.rank:
        raise RankMismatchError(f"word of rank {w.rank} tested against subgroup of rank {H.rank}")


def is_member(w: Word, H: Subgroup | CoreGraph) -> bool:
    """Trace ``w`` from the basepoint; members are exactly the closed readings."""
    core = H if isinstance(H, CoreGraph) else H.core
    if w.rank != core.rank:
        raise RankMismatchError(f"word of rank {w.rank} tested against rank {core.rank}")
    return core.trace(w.letters) == core.basepoint


@dataclass(frozen=True)
class AppearWitness:
    """``w = p1 p2`` with ``p1`` leaving and ``p2`` entering the basepoint."""

    split: int
    p1: tuple = ()
    p2: tuple = ()

    def to_record(self) -> dict:
        return {"split": self.split, "p1": [list(e) for e in self.p1], "p2": [list(e) for e in self.p2]}


def _path_edges(core: CoreGraph, start, letters: Sequence[int]) -> tuple:
    edges = []
    v = start
    for c in letters:
        w = core.step(v, c)
        edges.append((v, c, w) if c > 0 else (w, -c, v))
        v = w
    return tuple(edges)


def appears(w: Word, core: CoreGraph) -> AppearWitness | None:
    """Witness for ``w`` appearing in ``core``, with the shortest possible ``p1``."""
    if w.rank != core.rank:
        raise RankMismatchError(f"word of rank {w.rank} tested against rank {core.rank}")
    letters = w.letters
    n = len(letters)
    forward, _ = core.trace_prefix(letters)
    backward, _ = core.trace_prefix(invert_letters(letters))
    split = max(0, n - backward)
    if split > forward:
        return None
    suffix = letters[split:]
    # p2 need not start where p1 ends
    p2_start = core.trace(invert_letters(suffix))
    p1 = _path_edges(core, core.basepoint, letters[:split])
    return AppearWitness(split, p1, _path_edges(core, p2_start, suffix))


class Cover(enum.Enum):
    NOT_SUBGROUP = "not-subgroup"
    COVERS = "covers"
    NOT_COVERS = "not-covers"

    def __bool__(self) -> bool:
        return self is Cover.COVERS


def x_covers(H: Subgroup, J: Subgroup) -> Cover:
    """Whether the core-graph morphism of ``H <= J`` is onto."""
    if H.rank != J.rank:
        raise RankMismatchError(f"subgroups of rank {H.rank} and {J.rank}")
    if not all(is_member(g, J) for g in H.generators):
        return Cover.NOT_SUBGROUP
    m = compute_morphism(H.core, J.core)
    if m is None:
        # cannot happen once every generator is a member
        return Cover.NOT_SUBGROUP
    return Cover.COVERS if m.onto else Cover.NOT_COVERS


def covers_simple(H: Subgroup, w: Word) -> bool:
    """``H`` covers ``<H, w>`` iff ``w`` appears in the core graph of ``H``."""
    _check_rank(w, H)
    return appears(w, H.core) is not None


def embeds_as_subgraph(H: Subgroup, J: Subgroup) -> bool:
    """Injective core-graph morphism; certifies ``H`` as a free factor of ``J``."""
    m = compute_morphism(H.core, J.core)
    return m is not None and m.injective


# -- principal overgroups ------------------------------------------------------


def restricted_growth_strings(n: int) -> Iterator[tuple[int, ...]]:
    """Set partitions of ``range(n)`` as restricted growth strings, in lexicographic order."""
    if n == 0:
        yield ()
        return
    a = [0] * n
    b = [1] * n  # b[i] = 1 + max(a[:i])
    while True:
        yield tuple(a)
        i = n - 1
        while i > 0 and a[i] == b[i]:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        for j in range(i + 1, n):
            a[j] = 0
            b[j] = max(b[j - 1], a[j - 1] + 1)


def bell_number(n: int) -> int:
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def principal_overgroups(H: Subgroup, max_vertices: int = 10) -> list[CoreGraph]:
    """Core graphs of all quotients of the core graph of ``H``, deduplicated.

    Includes ``H`` itself (the discrete partition).  Sorted by canonical form.
    """
    core = H.core
    n = core.num_vertices
    if n > max_vertices:
        raise CapExceededError(f"core graph has {n} vertices, cap is {max_vertices}")
    vertices = sorted(core.vertices, key=repr)
    found: dict[bytes, CoreGraph] = {}
    for rgs in restricted_growth_strings(n):
        blocks: list[list] = [[] for _ in range(max(rgs) + 1)]
        for v, b in zip(vertices, rgs):
            blocks[b].append(v)
        q = to_core(quotient(core, blocks))
        found.setdefault(q.canonical, q)
    return [found[k] for k in sorted(found)]
