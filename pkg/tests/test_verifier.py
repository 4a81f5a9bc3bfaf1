import pytest

from _helpers import W
from stallings import CapExceededError, NotABasisError, PreconditionError, Subgroup
from stallings.f2 import Basis2, enumerate_bases, ordered
from stallings.subgroups import Cover, appears, x_covers
from stallings.verifier import (
    check_lemma_conditions,
    free_factor_certificate,
    rewrite_in_basis,
    search_noncovering_basis,
    verify_counterexample,
    verify_f3_example,
)


def contents(report):
    return (
        report.bases_checked,
        [(str(b), why) for b, why in report.failures],
        [r.to_record() for r in report.per_basis],
    )


class TestSweep:
    def test_seed_bases(self):
        r = verify_counterexample(2)
        assert r.passed and r.bases_checked == 8
        ab = next(rec for rec in r.per_basis if (str(rec.basis.u), str(rec.basis.v)) == ("a", "b"))
        assert ab.covers_simple and ab.x_covers is Cover.COVERS and ab.split == 1

    def test_count_matches_enumeration(self):
        r = verify_counterexample(6)
        assert r.bases_checked == len(ordered(enumerate_bases(6)))

    def test_structural_mode(self):
        r = verify_counterexample(8, "structural")
        assert r.passed and r.bases_checked == len(ordered(enumerate_bases(8)))

    def test_corrupted_probe_fails(self):
        r = verify_counterexample(4, probe="uV")
        assert not r.passed and r.verdict == "FAIL"
        # oracle: aB does not appear in the aabb cycle
        assert appears(W("aB"), Subgroup.parse("aabb").core) is None
        assert any(str(b) == "{a, b}" for b, _ in r.failures)
        # the two checks still agree on every basis
        assert all(rec.covers_simple == bool(rec.x_covers) for rec in r.per_basis)

    def test_monotone_in_length(self):
        big = verify_counterexample(7)
        small = verify_counterexample(5)
        assert big.passed and small.passed
        assert {r.basis.key() + (str(r.basis.u),) for r in small.per_basis} <= {
            r.basis.key() + (str(r.basis.u),) for r in big.per_basis
        }

    def test_deterministic_across_jobs(self):
        assert contents(verify_counterexample(6, jobs=1)) == contents(verify_counterexample(6, jobs=3))
        assert contents(verify_counterexample(6)) == contents(verify_counterexample(6))

    def test_cap(self):
        with pytest.raises(CapExceededError):
            verify_counterexample(11)

    def test_bad_probe(self):
        with pytest.raises(PreconditionError):
            verify_counterexample(2, probe="vu")

    def test_summary_has_no_timing_by_default(self):
        r = verify_counterexample(3)
        assert "wall_time" not in r.summary() and "wall_time" in r.summary(timings=True)


class TestCertificate:
    def test_free_factor(self):
        c = free_factor_certificate()
        assert c.ok and c.rank_J == 2
        # in a basis of F2 the cover is onto, so no embedding can exist there
        assert not c.embeds_in_ab_a_basis


class TestLemmaConditions:
    @pytest.mark.parametrize("u, v", [("a", "b"), ("aba", "ba"), ("baB", "b")])
    def test_examples(self, u, v):
        assert check_lemma_conditions(W(u), W(v)) == (True, True)

    def test_not_a_basis(self):
        with pytest.raises(NotABasisError):
            check_lemma_conditions(W("aa"), W("b"))

    def test_general_bases_appear(self):
        for b in ordered(enumerate_bases(8)):
            appears_uv, head = check_lemma_conditions(b.u, b.v)
            assert appears_uv
            if b.u.is_cyclically_reduced() or b.v.is_cyclically_reduced():
                assert head


class TestF3:
    def test_not_covered(self):
        r = verify_f3_example()
        assert not r.covered and not r
        assert r.member_sanity and r.substitution_ok and r.embeds and r.ok


class TestSearch:
    def test_counterexample_has_no_failing_basis(self):
        assert search_noncovering_basis(Subgroup.parse("aabb"), Subgroup.parse("aabb, ab"), 7) is None

    def test_cyclic_subgroup_in_f2(self):
        # report-only: whatever basis comes back must really fail to cover
        b = search_noncovering_basis(Subgroup.parse("a"), Subgroup.full(), 4)
        if b is not None:
            HY = Subgroup.of(rewrite_in_basis(W("a"), b))
            assert x_covers(HY, Subgroup.full()) is not Cover.COVERS

    def test_identity(self):
        H = Subgroup.parse("aabb")
        assert search_noncovering_basis(H, H, 4) is None

    def test_not_a_subgroup(self):
        with pytest.raises(PreconditionError):
            search_noncovering_basis(Subgroup.parse("ab"), Subgroup.parse("aabb"), 3)

    def test_rewrite_round_trip(self):
        for b in ordered(enumerate_bases(6)):
            for g in (W("aabb"), W("ab"), W("baB")):
                out = rewrite_in_basis(g, b)
                assert out.rank == 2

    def test_rewrite_example(self):
        b = Basis2(W("ab"), W("a"))
        assert str(rewrite_in_basis(W("aabb"), b)) == "baBa"
