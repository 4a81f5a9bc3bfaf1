import random
import warnings

import pytest
from hypothesis import given
from hypothesis import strategies as st

import _oracles as oracle
from _helpers import W, reduced_words
from stallings import NotFoldedError, PreconditionError, Subgroup
from stallings.graphs import (
    CoreGraph,
    RawGraph,
    canonical_form,
    compute_morphism,
    fold_all,
    from_records,
    no_trim_condition,
    quotient,
    to_core,
    to_dot,
    to_records,
    trim,
)


def random_raw_graph(rng: random.Random, max_edges: int = 20, rank: int = 2) -> RawGraph:
    n = rng.randint(1, 8)
    g = RawGraph(rank, range(n))
    for _ in range(rng.randint(0, max_edges)):
        g.add_edge(rng.randrange(n), rng.randint(1, rank), rng.randrange(n))
    return g


def quiet_core(g):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return to_core(g)


@st.composite
def raw_graphs(draw, rank=2):
    n = draw(st.integers(1, 7))
    edges = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(1, rank), st.integers(0, n - 1)), max_size=14))
    return RawGraph(rank, range(n), edges)


class TestFold:
    def test_identical_loops(self):
        g = fold_all(RawGraph.bouquet([W("a"), W("a")], 2))
        assert (len(g.vertices), g.edges) == (1, [(0, 1, 0)])

    def test_prefix_merge(self):
        # loops x = a and y = ab: the a-edges fold, so the b-edge becomes a loop
        g = fold_all(RawGraph.bouquet([W("a"), W("ab")], 2))
        assert len(g.vertices) == 1 and sorted(g.edges) == [(0, 1, 0), (0, 2, 0)]
        ov, oe, _ = oracle.naive_fold(*oracle.bouquet_edges([(1,), (1, 2)]))
        assert len(ov) == 1 and len(oe) == 2

    def test_fixpoint(self):
        g = RawGraph.bouquet([W("aabb")], 2)
        assert sorted(fold_all(g).edges) == sorted(g.edges)

    def test_basepoint_tracked(self):
        g = fold_all(RawGraph(2, ["p", "q", "r"], [("q", 1, "p"), ("q", 1, "r")], basepoint="r"))
        assert g.basepoint in g.vertices and len(g.vertices) == 2

    @given(raw_graphs())
    def test_result_is_folded(self, g):
        assert fold_all(g).is_folded()

    @given(raw_graphs())
    def test_matches_exhaustive_pair_search(self, g):
        ours = fold_all(g)
        ref = oracle.naive_fold(g.vertices, g.edges, g.basepoint)
        assert oracle.isomorphic((ours.vertices, ours.edges, ours.basepoint), ref)


class TestTrim:
    def test_dead_end_path(self):
        g = RawGraph(2, range(3), [(0, 1, 1), (1, 1, 2)])
        t = trim(g)
        assert t.vertices == {0} and t.edges == []

    def test_cycle_unchanged(self):
        g = RawGraph.bouquet([W("aabb")], 2)
        assert sorted(trim(g).edges) == sorted(g.edges)

    def test_hanging_tree(self):
        g = RawGraph.bouquet([W("ab")], 2)
        v = g.add_path(0, (1, 2))
        g.add_path(v, (-1,))
        t = trim(g)
        assert len(t.vertices) == 2 and len(t.edges) == 2

    def test_loop_counts_twice(self):
        g = RawGraph(2, range(2), [(0, 1, 1), (1, 2, 1)])
        assert len(trim(g).vertices) == 2

    def test_unreachable_discarded(self):
        g = RawGraph(2, range(3), [(0, 1, 0), (1, 1, 2), (2, 2, 1)])
        with pytest.warns(UserWarning):
            core = to_core(g)
        assert core.num_vertices == 1 and core.stats.discarded == 2


class TestToCore:
    def test_fig1(self, fig1):
        core = to_core(RawGraph.bouquet(fig1.generators, 2))
        assert (core.num_vertices, core.num_edges) == (4, 5)

    def test_aabb_cycle(self):
        core = Subgroup.parse("aabb").core
        assert (core.num_vertices, core.num_edges) == (4, 4)
        assert core.trace(W("aabb").letters) == core.basepoint

    def test_rose(self):
        assert Subgroup.parse("a, b").core.is_rose()

    def test_trivial_subgroup(self):
        core = Subgroup.parse("aA").core
        assert core.num_vertices == 1 and core.num_edges == 0

    @given(raw_graphs())
    def test_idempotent(self, g):
        core = quiet_core(g)
        again = to_core(core.to_raw())
        assert again.canonical == core.canonical and again.stats.folds == again.stats.trims == 0

    @given(raw_graphs())
    def test_matches_naive_core(self, g):
        core = quiet_core(g)
        ref = oracle.naive_trim(*oracle.naive_fold(g.vertices, g.edges, g.basepoint))
        assert oracle.isomorphic(oracle.core_of(core), ref)

    @given(st.lists(reduced_words(min_size=1, max_size=6), min_size=1, max_size=3))
    def test_bouquet_matches_naive(self, words):
        core = Subgroup(tuple(words), 2).core
        assert oracle.isomorphic(oracle.core_of(core), oracle.naive_core([w.letters for w in words]))

    def test_core_graph_checks_invariants(self):
        with pytest.raises(PreconditionError):
            CoreGraph(2, range(2), [(0, 1, 1)])
        with pytest.raises(PreconditionError):
            CoreGraph(2, range(1), [(0, 1, 0), (0, 1, 0)])


class TestConfluence:
    @pytest.mark.parametrize("seed", range(10))
    def test_random_orders_agree(self, seed):
        rng = random.Random(seed)
        g = random_raw_graph(rng)
        base = quiet_core(g).canonical
        for _ in range(20):
            folded = fold_all(g, rng=rng)
            assert folded.is_folded()
            assert quiet_core(folded).canonical == base

    @given(raw_graphs(), st.integers(0, 2**31))
    def test_random_order_property(self, g, seed):
        assert quiet_core(fold_all(g, rng=random.Random(seed))).canonical == quiet_core(g).canonical


class TestNoTrim:
    def test_cr_loop(self):
        assert no_trim_condition(RawGraph.bouquet([W("aBab")], 2))

    def test_dead_end(self):
        assert not no_trim_condition(RawGraph(2, range(2), [(0, 1, 1)]))

    def test_fig1(self, fig1):
        assert no_trim_condition(fig1.core.to_raw())

    @given(raw_graphs())
    def test_no_trims_when_condition_holds(self, g):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            core = to_core(g)
        if no_trim_condition(g) and not core.stats.discarded:
            assert core.stats.trims == 0

    @given(st.lists(reduced_words(min_size=1, max_size=8), min_size=1, max_size=3))
    def test_cr_bouquets_need_no_trim(self, words):
        # a loop of a reduced word gives every interior vertex two edge types
        g = RawGraph.bouquet(words, 2)
        assert no_trim_condition(g)
        assert to_core(g).stats.trims == 0


class TestCanonicalForm:
    def test_fig1_relabelings(self, fig1):
        core = fig1.core
        rng = random.Random(1)
        for _ in range(5):
            names = list(range(100, 100 + core.num_vertices))
            rng.shuffle(names)
            ren = dict(zip(sorted(core.vertices), names))
            other = CoreGraph(2, names, [(ren[o], l, ren[t]) for o, l, t in core.edges], ren[core.basepoint])
            assert canonical_form(other) == canonical_form(core)

    def test_distinct(self):
        assert Subgroup.parse("a, b").core.canonical != Subgroup.parse("a").core.canonical
        assert Subgroup.parse("aabb").core.canonical != Subgroup.parse("abab").core.canonical

    def test_unfolded_rejected(self):
        with pytest.raises(NotFoldedError):
            canonical_form(RawGraph.bouquet([W("a"), W("a")], 2))

    @given(st.lists(reduced_words(min_size=1, max_size=5), min_size=1, max_size=3),
           st.lists(reduced_words(min_size=1, max_size=5), min_size=1, max_size=3))
    def test_equal_iff_isomorphic(self, xs, ys):
        a, b = Subgroup(tuple(xs), 2).core, Subgroup(tuple(ys), 2).core
        assert (a.canonical == b.canonical) == oracle.isomorphic(oracle.core_of(a), oracle.core_of(b))


class TestMorphism:
    def test_counterexample_onto(self):
        m = compute_morphism(Subgroup.parse("aabb").core, Subgroup.parse("aabb, ab").core)
        assert m is not None and m.onto and not m.injective

    def test_identity(self, fig1):
        m = compute_morphism(fig1.core, fig1.core)
        assert m.onto and m.injective and all(k == v for k, v in m.vertex_map.items())

    def test_absent(self):
        assert compute_morphism(Subgroup.parse("a").core, Subgroup.parse("b").core) is None

    @given(st.lists(reduced_words(min_size=1, max_size=5), min_size=1, max_size=2), reduced_words(max_size=5))
    def test_unique_under_relabeling(self, gens, extra):
        H = Subgroup(tuple(gens), 2)
        J = H.join(extra)
        src, dst = H.core, J.core
        m = compute_morphism(src, dst)
        assert m is not None
        rng = random.Random(len(gens))
        names = list(range(dst.num_vertices))
        rng.shuffle(names)
        ren = dict(zip(sorted(dst.vertices), names))
        shuffled = CoreGraph(2, names, [(ren[o], l, ren[t]) for o, l, t in dst.edges], ren[dst.basepoint])
        m2 = compute_morphism(src, shuffled)
        assert {v: ren[w] for v, w in m.vertex_map.items()} == m2.vertex_map


class TestQuotient:
    def test_identity_partition(self, fig1):
        core = fig1.core
        q = to_core(quotient(core, [[v] for v in sorted(core.vertices)]))
        assert q.canonical == core.canonical

    def test_all_in_one_rose(self):
        rose = Subgroup.parse("a, b").core
        assert to_core(quotient(rose, [list(rose.vertices)])).canonical == rose.canonical

    def test_merging_interior_a_vertices(self):
        core = Subgroup.parse("aabb").core
        v1 = core.step(core.basepoint, 1)
        v3 = core.step(core.basepoint, -2)
        q = to_core(quotient(core, [[core.basepoint], [v1, v3], [core.step(v1, 1)]]))
        H2 = Subgroup.from_core(q)
        # the identification adds a path reading ab; spot-check membership
        assert q.trace(W("ab").letters) == q.basepoint
        assert q.trace(W("aabb").letters) == q.basepoint
        assert H2.core.canonical == q.canonical and q.num_vertices < core.num_vertices

    def test_malformed(self, fig1):
        with pytest.raises(PreconditionError):
            quotient(fig1.core, [[0, 1], [1, 2, 3]])
        with pytest.raises(PreconditionError):
            quotient(fig1.core, [[0, 1]])


class TestEuler:
    @given(st.lists(reduced_words(min_size=1, max_size=6), min_size=1, max_size=3))
    def test_rank_at_most_generator_count(self, words):
        core = Subgroup(tuple(words), 2).core
        assert core.rank_of_subgroup == core.num_edges - core.num_vertices + 1
        assert core.rank_of_subgroup <= len(words)
        assert len(core.generators()) == core.rank_of_subgroup

    def test_fixtures(self, fig1):
        assert fig1.core.rank_of_subgroup == 2
        assert Subgroup.parse("aabb, ab").core.rank_of_subgroup == 2
        assert Subgroup.parse("aabb").core.rank_of_subgroup == 1

    @given(st.lists(reduced_words(min_size=1, max_size=6), min_size=1, max_size=3))
    def test_spanning_tree_generators_span(self, words):
        H = Subgroup(tuple(words), 2)
        assert Subgroup.from_core(H.core).core.canonical == H.core.canonical


class TestExport:
    def test_records_round_trip(self, fig1):
        text = to_records(fig1.core)
        assert text.splitlines()[0] == "4 0"
        assert from_records(text).canonical == fig1.core.canonical

    def test_byte_stable(self, fig1):
        again = Subgroup.parse("AAb, aBa").core
        assert to_records(again) == to_records(fig1.core)
        assert to_dot(again) == to_dot(fig1.core)

    def test_dot_marks_basepoint(self, fig1):
        assert "0 [shape=doublecircle]" in to_dot(fig1.core)
