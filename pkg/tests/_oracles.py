"""Slow, independent reference implementations used only by the tests.

Nothing here calls into the folding, canonical-form or partition code of the
package: graphs are plain edge lists and isomorphism is decided by networkx.
"""

from __future__ import annotations

import networkx as nx
from networkx.algorithms.isomorphism import categorical_multiedge_match, categorical_node_match


def naive_fold(vertices, edges, basepoint):
    """Merge any foldable pair found by exhaustive search, until none is left."""
    vertices = set(vertices)
    edges = list(edges)
    while True:
        pair = None
        for i in range(len(edges)):
            for j in range(i + 1, len(edges)):
                (o1, l1, t1), (o2, l2, t2) = edges[i], edges[j]
                if l1 != l2:
                    continue
                if o1 == o2:
                    pair = (t1, t2, i, j)
                elif t1 == t2:
                    pair = (o1, o2, i, j)
                if pair:
                    break
            if pair:
                break
        if pair is None:
            return vertices, edges, basepoint
        x, y, i, j = pair
        keep, drop = (y, x) if x != basepoint and y == basepoint else (x, y)
        del edges[j]
        if keep != drop:
            vertices.discard(drop)
            edges = [(keep if o == drop else o, l, keep if t == drop else t) for o, l, t in edges]
            if basepoint == drop:
                basepoint = keep


def naive_trim(vertices, edges, basepoint):
    vertices = set(vertices)
    edges = list(edges)
    # unreachable vertices first
    seen, todo = {basepoint}, [basepoint]
    while todo:
        v = todo.pop()
        for o, _, t in edges:
            for a, b in ((o, t), (t, o)):
                if a == v and b not in seen:
                    seen.add(b)
                    todo.append(b)
    vertices &= seen
    edges = [e for e in edges if e[0] in seen]
    while True:
        deg = {v: 0 for v in vertices}
        for o, _, t in edges:
            deg[o] += 1
            deg[t] += 1
        leaves = [v for v in vertices if v != basepoint and deg[v] <= 1]
        if not leaves:
            return vertices, edges, basepoint
        v = leaves[0]
        vertices.discard(v)
        edges = [e for e in edges if v not in (e[0], e[2])]


def bouquet_edges(words):
    """Edge list of the bouquet of loops, vertex 0 the basepoint."""
    edges, fresh = [], 1
    for w in words:
        if not w:
            continue
        prev = 0
        for k, c in enumerate(w):
            nxt = 0 if k == len(w) - 1 else fresh
            if nxt:
                fresh += 1
            edges.append((prev, c, nxt) if c > 0 else (nxt, -c, prev))
            prev = nxt
    return set(range(fresh)), edges, 0


def naive_core(words):
    return naive_trim(*naive_fold(*bouquet_edges(words)))


def to_nx(vertices, edges, basepoint):
    g = nx.MultiDiGraph()
    for v in vertices:
        g.add_node(v, bp=(v == basepoint))
    for o, l, t in edges:
        g.add_edge(o, t, label=l)
    return g


def isomorphic(g1, g2) -> bool:
    return nx.is_isomorphic(
        to_nx(*g1), to_nx(*g2), node_match=categorical_node_match("bp", False), edge_match=categorical_multiedge_match("label", None)
    )


def core_of(graph):
    """Plain (vertices, edges, basepoint) triple of a package CoreGraph."""
    return set(graph.vertices), list(graph.edges), graph.basepoint


def set_partitions(items):
    """All set partitions, by inserting each element into an existing block or a new one."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for p in set_partitions(rest):
        yield [[first]] + p
        for i in range(len(p)):
            yield p[:i] + [[first] + p[i]] + p[i + 1 :]


def naive_overgroup_count(vertices, edges, basepoint) -> int:
    """Isomorphism classes of trimmed foldings of all vertex quotients."""
    reps = []
    for part in set_partitions(sorted(vertices)):
        block = {v: i for i, b in enumerate(part) for v in b}
        q = naive_trim(*naive_fold(set(block.values()), [(block[o], l, block[t]) for o, l, t in edges], block[basepoint]))
        if not any(isomorphic(q, r) for r in reps):
            reps.append(q)
    return len(reps)


def naive_appears(w, vertices, edges, basepoint) -> bool:
    """Try every split of ``w``; paths are traced over the raw edge list."""

    def step(v, c):
        for o, l, t in edges:
            if c > 0 and o == v and l == c:
                return t
            if c < 0 and t == v and l == -c:
                return o
        return None

    def trace(v, letters):
        for c in letters:
            if v is None:
                return None
            v = step(v, c)
        return v

    inv = lambda s: tuple(-c for c in reversed(s))  # noqa: E731
    for k in range(len(w) + 1):
        p1, p2 = w[:k], w[k:]
        if trace(basepoint, p1) is not None and trace(basepoint, inv(p2)) is not None:
            return True
    return False


# -- bases and primitivity -----------------------------------------------------


def exponent_pair(w) -> tuple[int, int]:
    s = sum(1 if c == 1 else -1 for c in w if abs(c) == 1)
    t = sum(1 if c == 2 else -1 for c in w if abs(c) == 2)
    return s, t


def det_compatible(p, q) -> bool:
    """Abelianization test: a basis maps to a basis of Z^2, so the determinant is +-1."""
    return abs(p[0] * q[1] - p[1] * q[0]) == 1


def fold_is_rose(u, v) -> bool:
    """Bouquet of u and v folded (and trimmed) by the naive oracle is the two-loop rose."""
    vertices, edges, _ = naive_core([u, v])
    return len(vertices) == 1 and len(edges) == 2


class BrutePrimitivity:
    """``w`` is primitive iff some reduced ``v`` with ``|v| <= bound`` completes it to a basis.

    Candidates are all reduced words; the determinant filter only skips pairs
    that provably cannot be bases.  ``is_basis`` decides the rest.
    """

    def __init__(self, max_v: int, is_basis):
        from stallings.words import all_reduced_words

        self.is_basis = is_basis
        self.by_sums: dict = {}
        for n in range(1, max_v + 1):
            for v in all_reduced_words(n, 2):
                self.by_sums.setdefault(exponent_pair(v), []).append(v)

    def __call__(self, w, bound: int) -> bool:
        if not w:
            return False
        ew = exponent_pair(w)
        for sums, vs in self.by_sums.items():
            if not det_compatible(ew, sums):
                continue
            for v in vs:
                if len(v) <= bound and self.is_basis(w, v):
                    return True
        return False


def appearing_words(core, max_len: int) -> set:
    """Every reduced word of length <= max_len that appears in ``core``.

    A word appears iff it is ``p1 p2`` with ``p1`` a non-backtracking walk from
    the basepoint and ``p2`` one into it, without cancellation at the junction.
    """

    def walks(start, sign):
        out = {()}
        frontier = [((), start)]
        for _ in range(max_len):
            nxt = []
            for word, v in frontier:
                for c, w in core.neighbors(v).items():
                    if word and word[-1] == -c:
                        continue
                    nw = word + (c,)
                    out.add(nw)
                    nxt.append((nw, w))
            frontier = nxt
        if sign < 0:
            return {tuple(-c for c in reversed(x)) for x in out}
        return out

    starts = walks(core.basepoint, 1)
    ends = walks(core.basepoint, -1)
    found = set()
    for p1 in starts:
        for p2 in ends:
            if len(p1) + len(p2) <= max_len and not (p1 and p2 and p1[-1] == -p2[0]):
                found.add(p1 + p2)
    return found


def appear_restricted_primitive(w, bound: int, is_basis, subgroup_core) -> bool:
    """Same predicate as BrutePrimitivity, searching only candidates that can work.

    If ``w`` uses both generators, the core graph of ``<w>`` maps onto the rose,
    so ``<w>`` covers ``<w, v>`` = F2 for any complement ``v``; by the
    covers-iff-appears lemma such a ``v`` appears in that core graph.
    """
    if not w:
        return False
    if len({abs(c) for c in w}) < 2:
        # a power of one letter: its only possible complements are short
        return len(w) == 1
    ew = exponent_pair(w)
    for v in appearing_words(subgroup_core, bound):
        if v and det_compatible(ew, exponent_pair(v)) and is_basis(w, v):
            return True
    return False
