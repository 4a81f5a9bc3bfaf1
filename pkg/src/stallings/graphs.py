"""Pointed, directed, labeled graphs and Stallings folding.

A :class:`RawGraph` is an arbitrary finite graph whose edges are triples
``(origin, label, terminus)`` with ``label`` a positive generator index.
Folding and trimming turn it into a :class:`CoreGraph`, which is a
deterministic partial automaton: from every vertex, each signed letter has
at most one continuation.
"""

from __future__ import annotations

import random
import warnings
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from .errors import NotFoldedError, PreconditionError
from .words import DEFAULT_ALPHABET, Word, free_reduce

Edge = tuple[int, int, int]


class RawGraph:
    """Mutable multigraph; loops and parallel edges are allowed."""

    def __init__(self, rank: int, vertices: Iterable[Hashable] = (0,), edges: Iterable[Edge] = (), basepoint=0):
        self.rank = rank
        self.vertices = set(vertices)
        self.edges: list[Edge] = []
        self.basepoint = basepoint
        if basepoint not in self.vertices:
            raise PreconditionError(f"basepoint {basepoint!r} is not a vertex")
        for o, label, t in edges:
            self.add_edge(o, label, t)

    @classmethod
    def bouquet(cls, words: Iterable[Word | Sequence[int]], rank: int) -> "RawGraph":
        """One closed loop at a fresh basepoint for each word."""
        g = cls(rank)
        for w in words:
            letters = w.letters if isinstance(w, Word) else tuple(w)
            if letters:
                g.add_path(g.basepoint, letters, g.basepoint)
        return g

    def copy(self) -> "RawGraph":
        g = RawGraph(self.rank, self.vertices, basepoint=self.basepoint)
        g.edges = list(self.edges)
        return g

    def new_vertex(self) -> int:
        v = len(self.vertices)
        while v in self.vertices:
            v += 1
        self.vertices.add(v)
        return v

    def add_edge(self, origin, label: int, terminus) -> None:
        if not 1 <= label <= self.rank:
            raise PreconditionError(f"label {label} out of range for rank {self.rank}")
        if origin not in self.vertices or terminus not in self.vertices:
            raise PreconditionError(f"edge {(origin, label, terminus)} has an endpoint outside the graph")
        self.edges.append((origin, label, terminus))

    def add_path(self, start, letters: Sequence[int], end=None):
        """Attach a path reading ``letters`` from ``start``; returns its endpoint.

        When ``end`` is given the last letter lands on it, closing the path.
        """
        cur = start
        for i, c in enumerate(letters):
            nxt = end if (end is not None and i == len(letters) - 1) else self.new_vertex()
            if c > 0:
                self.add_edge(cur, c, nxt)
            else:
                self.add_edge(nxt, -c, cur)
            cur = nxt
        return cur

    def degrees(self) -> dict:
        deg = dict.fromkeys(self.vertices, 0)
        for o, _, t in self.edges:
            deg[o] += 1
            deg[t] += 1
        return deg

    def edge_types(self, v) -> set[tuple[int, int]]:
        """The (label, direction) pairs at ``v``; +1 outgoing, -1 incoming."""
        types = set()
        for o, label, t in self.edges:
            if o == v:
                types.add((label, 1))
            if t == v:
                types.add((label, -1))
        return types

    def is_folded(self) -> bool:
        seen_out, seen_in = set(), set()
        for o, label, t in self.edges:
            if (o, label) in seen_out or (t, label) in seen_in:
                return False
            seen_out.add((o, label))
            seen_in.add((t, label))
        return True

    def reachable(self) -> set:
        adj = defaultdict(list)
        for o, _, t in self.edges:
            adj[o].append(t)
            adj[t].append(o)
        seen = {self.basepoint}
        todo = [self.basepoint]
        while todo:
            v = todo.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return seen

    def __repr__(self) -> str:
        return f"RawGraph(rank={self.rank}, |V|={len(self.vertices)}, |E|={len(self.edges)}, basepoint={self.basepoint!r})"


def no_trim_condition(g: RawGraph) -> bool:
    """Every vertex except the basepoint carries at least two edge types."""
    types = defaultdict(set)
    for o, label, t in g.edges:
        types[o].add((label, 1))
        types[t].add((label, -1))
    return all(len(types[v]) >= 2 for v in g.vertices if v != g.basepoint)


# -- folding -----------------------------------------------------------------


def _fold_union_find(g: RawGraph) -> RawGraph:
    parent = {v: v for v in g.vertices}
    size = dict.fromkeys(g.vertices, 1)
    out: dict = {v: {} for v in g.vertices}
    inc: dict = {v: {} for v in g.vertices}
    pending: deque = deque()

    def find(v):
        root = v
        while parent[root] != root:
            root = parent[root]
        while parent[v] != root:
            parent[v], v = root, parent[v]
        return root

    def attach(o, label, t):
        prev = out[o].get(label)
        if prev is None:
            out[o][label] = t
        else:
            pending.append((prev, t))
        prev = inc[t].get(label)
        if prev is None:
            inc[t][label] = o
        else:
            pending.append((prev, o))

    for o, label, t in g.edges:
        attach(find(o), label, find(t))
        while pending:
            x, y = pending.popleft()
            x, y = find(x), find(y)
            if x == y:
                continue
            if size[x] < size[y]:
                x, y = y, x
            parent[y] = x
            size[x] += size[y]
            moved_out, moved_in = out.pop(y), inc.pop(y)
            for label2, t2 in moved_out.items():
                prev = out[x].get(label2)
                if prev is None:
                    out[x][label2] = t2
                else:
                    pending.append((prev, t2))
            for label2, o2 in moved_in.items():
                prev = inc[x].get(label2)
                if prev is None:
                    inc[x][label2] = o2
                else:
                    pending.append((prev, o2))

    roots = {find(v) for v in g.vertices}
    folded = RawGraph(g.rank, roots, basepoint=find(g.basepoint))
    folded.edges = sorted({(find(o), label, find(t)) for o, label, t in g.edges}, key=repr)
    return folded


def _fold_random_order(g: RawGraph, rng: random.Random) -> RawGraph:
    rep = {v: v for v in g.vertices}
    edges = list(g.edges)
    basepoint = g.basepoint
    while True:
        by_out, by_in = defaultdict(list), defaultdict(list)
        for i, (o, label, t) in enumerate(edges):
            by_out[(o, label)].append(i)
            by_in[(t, label)].append(i)
        pairs = []
        for bucket in list(by_out.values()) + list(by_in.values()):
            pairs.extend((bucket[i], bucket[j]) for i in range(len(bucket)) for j in range(i + 1, len(bucket)))
        if not pairs:
            break
        i, j = rng.choice(pairs)
        if rng.random() < 0.5:
            i, j = j, i
        (o1, _, t1), (o2, _, t2) = edges[i], edges[j]
        del edges[j]
        # the pair shares an origin or a terminus; identify the other ends too
        alias: dict = {}
        for a, b in ((o1, o2), (t1, t2)):
            while a in alias:
                a = alias[a]
            while b in alias:
                b = alias[b]
            if a == b:
                continue
            keep, drop = (a, b) if rng.random() < 0.5 else (b, a)
            if drop == basepoint:
                keep, drop = drop, keep
            alias[drop] = keep
            edges = [(keep if o == drop else o, label, keep if t == drop else t) for o, label, t in edges]
            for v, r in rep.items():
                if r == drop:
                    rep[v] = keep
    folded = RawGraph(g.rank, set(rep.values()), basepoint=basepoint)
    folded.edges = edges
    return folded


def fold_all(g: RawGraph, rng: random.Random | None = None) -> RawGraph:
    """Fold until no two edges share a label and an origin or a terminus.

    The default path is a union-find worklist.  Passing ``rng`` instead picks
    a uniformly random foldable pair at every step, which is slow but useful
    for checking that the result does not depend on the folding order.
    """
    if rng is None:
        return _fold_union_find(g)
    return _fold_random_order(g, rng)


# -- trimming ----------------------------------------------------------------


def _trim(g: RawGraph) -> tuple[RawGraph, int, int]:
    alive = g.reachable()
    discarded = len(g.vertices) - len(alive)
    edges = [e for e in g.edges if e[0] in alive]
    deg = dict.fromkeys(alive, 0)
    incident = defaultdict(list)
    for i, (o, _, t) in enumerate(edges):
        deg[o] += 1
        deg[t] += 1
        incident[o].append(i)
        incident[t].append(i)
    dead_edges = set()
    todo = [v for v in alive if v != g.basepoint and deg[v] <= 1]
    trims = 0
    while todo:
        v = todo.pop()
        if v not in alive or deg[v] > 1:
            continue
        alive.discard(v)
        trims += 1
        for i in incident[v]:
            if i in dead_edges:
                continue
            dead_edges.add(i)
            o, _, t = edges[i]
            other = t if o == v else o
            deg[other] -= 1
            if other != g.basepoint and other in alive and deg[other] <= 1:
                todo.append(other)
    trimmed = RawGraph(g.rank, alive, basepoint=g.basepoint)
    trimmed.edges = [e for i, e in enumerate(edges) if i not in dead_edges]
    return trimmed, trims, discarded


def trim(g: RawGraph) -> RawGraph:
    """Drop unreachable parts, then peel non-basepoint leaves to a fixpoint."""
    return _trim(g)[0]


# -- core graphs ---------------------------------------------------------------


@dataclass(frozen=True)
class CoreStats:
    folds: int = 0
    trims: int = 0
    discarded: int = 0


class CoreGraph:
    """A folded, trimmed, connected pointed graph.

    Vertices produced by :func:`to_core` are ``0..n-1`` in canonical order
    with the basepoint at ``0``; hand-built instances may use any ids.
    Equality and hashing go through :func:`canonical_form`.
    """

    __slots__ = ("rank", "vertices", "edges", "basepoint", "stats", "_step", "_canon")

    def __init__(self, rank: int, vertices: Iterable, edges: Iterable[Edge], basepoint=0, *, stats: CoreStats | None = None, check: bool = True):
        self.rank = rank
        self.vertices = frozenset(vertices)
        self.edges = tuple(sorted(edges, key=repr)) if check else tuple(edges)
        self.basepoint = basepoint
        self.stats = stats or CoreStats()
        self._canon = None
        step: dict = {v: {} for v in self.vertices}
        for o, label, t in self.edges:
            if check and (label in step[o] or -label in step[t]):
                raise NotFoldedError(f"edge {(o, label, t)} is foldable")
            step[o][label] = t
            step[t][-label] = o
        self._step = step
        if check:
            raw = self.to_raw()
            if raw.reachable() != set(self.vertices):
                raise PreconditionError("core graph must be connected")
            deg = raw.degrees()
            leaves = [v for v in self.vertices if v != basepoint and deg[v] <= 1]
            if leaves:
                raise PreconditionError(f"core graph has non-basepoint leaves {leaves}")

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def rank_of_subgroup(self) -> int:
        return self.num_edges - self.num_vertices + 1

    def step(self, v, letter: int):
        return self._step[v].get(letter)

    def neighbors(self, v) -> dict:
        """Signed letter to adjacent vertex; read-only view."""
        return self._step[v]

    def trace(self, letters: Sequence[int], start=None):
        """Follow ``letters`` from ``start``; return the end vertex or None."""
        v = self.basepoint if start is None else start
        step = self._step
        for c in letters:
            v = step[v].get(c)
            if v is None:
                return None
        return v

    def trace_prefix(self, letters: Sequence[int], start=None) -> tuple[int, object]:
        """Length of the longest prefix readable from ``start`` and its endpoint."""
        v = self.basepoint if start is None else start
        step = self._step
        for i, c in enumerate(letters):
            nxt = step[v].get(c)
            if nxt is None:
                return i, v
            v = nxt
        return len(letters), v

    def is_rose(self) -> bool:
        return self.num_vertices == 1 and self.num_edges == self.rank

    def to_raw(self) -> RawGraph:
        g = RawGraph(self.rank, self.vertices, basepoint=self.basepoint)
        g.edges = list(self.edges)
        return g

    def generators(self) -> list[Word]:
        """A free basis read off a breadth-first spanning tree."""
        path = {self.basepoint: ()}
        tree = set()
        queue = deque([self.basepoint])
        while queue:
            v = queue.popleft()
            for c, w in sorted(self._step[v].items(), key=lambda kv: (abs(kv[0]), kv[0] < 0)):
                if w not in path:
                    path[w] = path[v] + (c,)
                    tree.add((v, c, w) if c > 0 else (w, -c, v))
                    queue.append(w)
        gens = []
        for o, label, t in self.edges:
            if (o, label, t) in tree:
                continue
            back = tuple(-c for c in reversed(path[t]))
            gens.append(Word(free_reduce(path[o] + (label,) + back), self.rank))
        return gens

    @property
    def canonical(self) -> bytes:
        if self._canon is None:
            self._canon = canonical_form(self)
        return self._canon

    def __eq__(self, other) -> bool:
        return isinstance(other, CoreGraph) and self.canonical == other.canonical

    def __hash__(self) -> int:
        return hash(self.canonical)

    def __repr__(self) -> str:
        return f"CoreGraph(rank={self.rank}, |V|={self.num_vertices}, |E|={self.num_edges})"


def to_core(g: RawGraph) -> CoreGraph:
    """Fold, then trim; the result is renumbered canonically."""
    folded = fold_all(g)
    trimmed, trims, discarded = _trim(folded)
    if discarded:
        warnings.warn(f"discarded {discarded} vertices unreachable from the basepoint", stacklevel=2)
    stats = CoreStats(folds=len(g.edges) - len(folded.edges), trims=trims, discarded=discarded)
    order = _canonical_order(trimmed)
    edges = sorted((order[o], label, order[t]) for o, label, t in trimmed.edges)
    return CoreGraph(g.rank, range(len(order)), edges, 0, stats=stats, check=False)


def bouquet_core(words: Iterable[Word], rank: int) -> CoreGraph:
    return to_core(RawGraph.bouquet(words, rank))


# -- canonical form --------------------------------------------------------------


def _adjacency(g) -> dict:
    if isinstance(g, CoreGraph):
        return g._step
    if not g.is_folded():
        raise NotFoldedError("canonical_form needs a folded graph")
    step: dict = {v: {} for v in g.vertices}
    for o, label, t in g.edges:
        step[o][label] = t
        step[t][-label] = o
    return step


def _canonical_order(g) -> dict:
    """Breadth-first numbering: outgoing labels ascending, then incoming."""
    step = _adjacency(g)
    letters = list(range(1, g.rank + 1)) + [-c for c in range(1, g.rank + 1)]
    order = {g.basepoint: 0}
    queue = deque([g.basepoint])
    while queue:
        v = queue.popleft()
        nbrs = step[v]
        for c in letters:
            w = nbrs.get(c)
            if w is not None and w not in order:
                order[w] = len(order)
                queue.append(w)
    return order


def canonical_form(g) -> bytes:
    """Encoding equal for two folded graphs iff they are pointed-isomorphic.

    Only the component of the basepoint is encoded.
    """
    order = _canonical_order(g)
    edges = sorted((order[o], label, order[t]) for o, label, t in g.edges if o in order)
    body = ",".join(f"{o}:{label}:{t}" for o, label, t in edges)
    return f"rank={g.rank};vertices={len(order)};edges={body}".encode()


# -- morphisms -----------------------------------------------------------------


@dataclass(frozen=True)
class Morphism:
    vertex_map: dict
    vertex_onto: bool
    edge_onto: bool
    injective: bool

    @property
    def onto(self) -> bool:
        return self.vertex_onto and self.edge_onto


def compute_morphism(src: CoreGraph, dst: CoreGraph) -> Morphism | None:
    """The unique basepoint-preserving labeled map ``src -> dst``, if any."""
    if src.rank != dst.rank:
        return None
    vmap = {src.basepoint: dst.basepoint}
    queue = deque([src.basepoint])
    while queue:
        v = queue.popleft()
        image = dst._step[vmap[v]]
        for c, w in src._step[v].items():
            target = image.get(c)
            if target is None:
                return None
            seen = vmap.get(w)
            if seen is None:
                vmap[w] = target
                queue.append(w)
            elif seen != target:
                return None
    edge_image = {(vmap[o], label, vmap[t]) for o, label, t in src.edges}
    image_vertices = set(vmap.values())
    return Morphism(
        vertex_map=vmap,
        vertex_onto=len(image_vertices) == dst.num_vertices,
        edge_onto=len(edge_image) == dst.num_edges,
        injective=len(image_vertices) == src.num_vertices and len(edge_image) == src.num_edges,
    )


# -- quotients -----------------------------------------------------------------


def quotient(g: CoreGraph | RawGraph, partition: Iterable[Iterable]) -> RawGraph:
    """Identify the vertices of each block; block ``i`` becomes vertex ``i``."""
    block_of = {}
    for i, block in enumerate(partition):
        for v in block:
            if v in block_of:
                raise PreconditionError(f"vertex {v!r} appears in two blocks")
            if v not in g.vertices:
                raise PreconditionError(f"vertex {v!r} is not in the graph")
            block_of[v] = i
    missing = set(g.vertices) - set(block_of)
    if missing:
        raise PreconditionError(f"partition misses vertices {sorted(missing, key=repr)}")
    nblocks = len(set(block_of.values()))
    if sorted(set(block_of.values())) != list(range(nblocks)):
        raise PreconditionError("partition has empty blocks")
    q = RawGraph(g.rank, range(nblocks), basepoint=block_of[g.basepoint])
    q.edges = [(block_of[o], label, block_of[t]) for o, label, t in g.edges]
    return q


# -- export --------------------------------------------------------------------


def _canonical_edges(g) -> tuple[int, list[Edge]]:
    order = _canonical_order(g)
    return len(order), sorted((order[o], label, order[t]) for o, label, t in g.edges if o in order)


def to_records(g, alphabet: str = DEFAULT_ALPHABET) -> str:
    """Header ``<vertex count> <basepoint>`` then one ``origin label terminus`` line per edge."""
    n, edges = _canonical_edges(g)
    lines = [f"{n} 0"]
    lines.extend(f"{o} {alphabet[label - 1]} {t}" for o, label, t in edges)
    return "\n".join(lines) + "\n"


def from_records(text: str, rank: int = 2, alphabet: str = DEFAULT_ALPHABET) -> CoreGraph:
    lines = [line.split() for line in text.strip().splitlines()]
    n, basepoint = int(lines[0][0]), int(lines[0][1])
    edges = [(int(o), alphabet.index(label) + 1, int(t)) for o, label, t in lines[1:]]
    return CoreGraph(rank, range(n), edges, basepoint)


def to_dot(g, alphabet: str = DEFAULT_ALPHABET, name: str = "core") -> str:
    """Graphviz text; the basepoint is drawn as a double circle."""
    n, edges = _canonical_edges(g)
    lines = [f"digraph {name} {{", "  node [shape=circle, label=\"\", width=0.2];", "  0 [shape=doublecircle];"]
    lines.extend(f"  {v};" for v in range(1, n))
    lines.extend(f'  {o} -> {t} [label="{alphabet[label - 1]}"];' for o, label, t in edges)
    lines.append("}")
    return "\n".join(lines) + "\n"
