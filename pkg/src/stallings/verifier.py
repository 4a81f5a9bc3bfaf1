"""Exhaustive checks of the counterexample ``<a^2 b^2> <= <a^2 b^2, ab>``.

For a basis ``{u, v}`` of F2 the subgroup pair written in that basis is
covered iff ``<u^2 v^2>`` covers ``<u^2 v^2, uv>`` with respect to ``{a, b}``,
so a sweep over enumerated bases checks the cover claim basis by basis.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .errors import InternalConsistencyError, PreconditionError
from .f2 import Basis2, enumerate_bases, inverse_substitution, ordered
from .graphs import CoreGraph
from .subgroups import Cover, Subgroup, appears, covers_simple, embeds_as_subgraph, is_member, x_covers
from .words import XYZ_ALPHABET, Word, substitute

PROBES = ("uv", "uV")


def _kind(b: Basis2) -> str:
    n = b.u.is_cyclically_reduced() + b.v.is_cyclically_reduced()
    return ("none-CR", "one-CR", "CR")[n]


@dataclass(frozen=True)
class BasisRecord:
    basis: Basis2
    kind: str
    split: int | None
    covers_simple: bool
    x_covers: Cover
    head_emanates: bool

    def to_record(self) -> dict:
        return {
            "u": str(self.basis.u),
            "v": str(self.basis.v),
            "kind": self.kind,
            "split": self.split,
            "covers_simple": self.covers_simple,
            "x_covers": self.x_covers.value,
            "head_emanates": self.head_emanates,
        }


@dataclass(frozen=True)
class FreeFactorCertificate:
    """``J`` is free on its two generators and ``H`` is a free factor of it.

    ``rank_J`` comes from the core graph; the embedding is checked in the
    abstract coordinates ``s = a^2 b^2``, ``t = ab``.
    """

    rank_J: int
    embeds: bool
    proper: bool
    embeds_in_ab_a_basis: bool

    @property
    def ok(self) -> bool:
        return self.rank_J == 2 and self.embeds and self.proper


@dataclass
class CoverReport:
    max_len: int
    mode: str
    bases_checked: int
    failures: list[tuple[Basis2, str]] = field(default_factory=list)
    per_basis: list[BasisRecord] | None = None
    wall_time: float = 0.0
    probe: str = "uv"
    certificate: FreeFactorCertificate | None = None

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def summary(self, timings: bool = False) -> str:
        lines = [
            f"verdict: {self.verdict}",
            f"max_len: {self.max_len}",
            f"mode: {self.mode}",
            f"probe: {self.probe}",
            f"bases_checked: {self.bases_checked}",
            f"failures: {len(self.failures)}",
        ]
        if self.per_basis is not None:
            kinds: dict[str, int] = {}
            for r in self.per_basis:
                kinds[r.kind] = kinds.get(r.kind, 0) + 1
            lines.append("kinds: " + ", ".join(f"{k}={kinds[k]}" for k in sorted(kinds)))
        if self.certificate is not None:
            c = self.certificate
            lines.append(f"free_factor_certificate: {'ok' if c.ok else 'FAILED'} (rank J = {c.rank_J}, H embeds = {c.embeds})")
        for b, why in self.failures[:20]:
            lines.append(f"  {b}: {why}")
        if timings:
            lines.append(f"wall_time: {self.wall_time:.3f}s")
        return "\n".join(lines)


def _head_emanates(core: CoreGraph, u: Word, v: Word) -> bool:
    bp = core.basepoint
    return core.step(bp, u.letters[0]) is not None or core.step(bp, -v.letters[-1]) is not None


def check_lemma_conditions(u: Word, v: Word) -> tuple[bool, bool]:
    """``(uv appears in the core graph of <u^2 v^2>, u_1 or (v^-1)_1 leaves the basepoint)``."""
    Basis2(u, v)
    H = Subgroup.of(u * u * v * v)
    return covers_simple(H, u * v), _head_emanates(H.core, u, v)


def _check_one(b: Basis2, probe: str) -> tuple[BasisRecord, str | None]:
    u, v = b.u, b.v
    w = u * v if probe == "uv" else u * v.inverse()
    H = Subgroup.of(u * u * v * v)
    wit = appears(w, H.core)
    simple = wit is not None
    cover = x_covers(H, H.join(w))
    kind = _kind(b)
    head = _head_emanates(H.core, u, v)
    rec = BasisRecord(b, kind, wit.split if wit else None, simple, cover, head)
    problems = []
    if not simple:
        problems.append(f"{w} does not appear")
    if cover is not Cover.COVERS:
        problems.append(f"x_covers is {cover.value}")
    if simple != bool(cover):
        problems.append("covers_simple and x_covers disagree")
    if kind != "none-CR" and not head:
        problems.append("no head letter leaves the basepoint")
    return rec, "; ".join(problems) or None


def _check_chunk(args):
    chunk, probe = args
    return [_check_one(b, probe) for b in chunk]


def _chunks(items: list, n: int) -> list[list]:
    size = max(1, -(-len(items) // n))
    return [items[i : i + size] for i in range(0, len(items), size)]


def free_factor_certificate() -> FreeFactorCertificate:
    """Certify ``H = <a^2 b^2>`` as a proper free factor of ``J = <a^2 b^2, ab>``."""
    J = Subgroup.parse("aabb, ab")
    rank_J = J.core.rank_of_subgroup
    # two generators and rank 2, so they form a free basis of J; work in it
    s, t = Word.parse("a"), Word.parse("b")
    embeds = embeds_as_subgraph(Subgroup.of(s), Subgroup.of(s, t))
    proper = not is_member(t, Subgroup.of(s))
    # for contrast, the same pair written in the basis {ab, a} of F2
    Y = Basis2(Word.parse("ab"), Word.parse("a"))
    HY = Subgroup.of(*(rewrite_in_basis(g, Y) for g in Subgroup.parse("aabb").generators))
    JY = Subgroup.of(*(rewrite_in_basis(g, Y) for g in J.generators))
    ab_a = embeds_as_subgraph(HY, JY)
    return FreeFactorCertificate(rank_J, embeds, proper, ab_a)


def verify_counterexample(
    max_len: int = 9,
    mode: str = "brute",
    *,
    jobs: int = 1,
    probe: str = "uv",
    per_basis: bool = True,
    cap: int | None = None,
) -> CoverReport:
    """Check every ordered basis with ``|u| + |v| <= max_len``.

    ``probe="uV"`` replaces ``uv`` by ``uv^-1``, a deliberately wrong claim
    used to make sure the harness can fail.
    """
    if probe not in PROBES:
        raise PreconditionError(f"probe must be one of {PROBES}")
    start = time.perf_counter()
    bases = ordered(enumerate_bases(max_len, mode, cap=cap))
    if jobs > 1 and len(bases) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_check_chunk, [(c, probe) for c in _chunks(bases, jobs * 4)]))
        results = [r for part in parts for r in part]
    else:
        results = [_check_one(b, probe) for b in bases]
    report = CoverReport(
        max_len=max_len,
        mode=mode,
        bases_checked=len(results),
        failures=[(rec.basis, why) for rec, why in results if why],
        per_basis=[rec for rec, _ in results] if per_basis else None,
        probe=probe,
        certificate=free_factor_certificate(),
    )
    report.wall_time = time.perf_counter() - start
    return report


# -- rank three --------------------------------------------------------------


@dataclass(frozen=True)
class F3Result:
    covered: bool
    member_sanity: bool
    substitution_ok: bool
    embeds: bool

    @property
    def ok(self) -> bool:
        return not self.covered and self.member_sanity and self.substitution_ok

    def __bool__(self) -> bool:
        return self.covered


F3_IMAGES = ("a", "cB", "cbC")  # x, y, z written in a, b, c


def verify_f3_example() -> F3Result:
    """``xy^-1zy`` does not appear in the core graph of ``<x^2 y^-1 z^2 y>``."""
    h = Word.parse("xxYzzy", alphabet=XYZ_ALPHABET, rank=3)
    w = Word.parse("xYzy", alphabet=XYZ_ALPHABET, rank=3)
    H = Subgroup.of(h)
    covered = appears(w, H.core) is not None
    images = [Word.parse(s, rank=3) for s in F3_IMAGES]
    substitution_ok = substitute(h, images) == Word.parse("aabb", rank=3) and substitute(w, images) == Word.parse(
        "ab", rank=3
    )
    return F3Result(covered, is_member(h, H), substitution_ok, embeds_as_subgraph(H, H.join(w)))


# -- arbitrary pairs in other bases ------------------------------------------


def rewrite_in_basis(g: Word, basis: Basis2, inverse: tuple[Word, Word] | None = None) -> Word:
    """``g`` as a word in ``u`` (letter a) and ``v`` (letter b)."""
    alpha, beta = inverse or inverse_substitution(basis)
    out = substitute(g, [alpha, beta])
    if substitute(out, [basis.u, basis.v]) != g:
        raise InternalConsistencyError(f"rewriting {g} in {basis} does not round-trip")
    return out


def search_noncovering_basis(H: Subgroup, J: Subgroup, max_len: int, mode: str = "brute") -> Basis2 | None:
    """First ordered basis in which ``H`` does not cover ``J``, if any."""
    if H.rank != 2 or J.rank != 2:
        raise PreconditionError("search_noncovering_basis works in rank 2")
    if not all(is_member(g, J) for g in H.generators):
        raise PreconditionError(f"{H} is not a subgroup of {J}")
    for b in ordered(enumerate_bases(max_len, mode)):
        inv = inverse_substitution(b)
        HY = Subgroup(tuple(rewrite_in_basis(g, b, inv) for g in H.generators), 2)
        JY = Subgroup(tuple(rewrite_in_basis(g, b, inv) for g in J.generators), 2)
        if x_covers(HY, JY) is not Cover.COVERS:
            return b
    return None

