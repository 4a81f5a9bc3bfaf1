"""Command-line interface: ``stallings <verb> ...``.

Boolean verbs exit 0 for true and 1 for false; usage and parse errors exit 2.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import f2
from .errors import CapExceededError, ParseError, StallingsError
from .graphs import CoreGraph, to_dot, to_records
from .subgroups import Cover, Subgroup, appears, is_member, principal_overgroups, x_covers
from .verifier import verify_counterexample, verify_f3_example
from .words import Word, detect_alphabet

USAGE = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


class _Context:
    """Alphabet and rank shared by every word of one invocation."""

    def __init__(self, texts: Sequence[str], rank: int | None):
        self.alphabet = detect_alphabet(texts)
        used = [self.alphabet.find(ch.lower()) + 1 for t in texts for ch in t if ch.isalpha()]
        self.rank = rank if rank is not None else max([2] + used)

    def word(self, text: str) -> Word:
        return Word.parse(text, rank=self.rank, alphabet=self.alphabet)

    def subgroup(self, texts: Sequence[str]) -> Subgroup:
        parts = [p for t in texts for p in t.split(",") if p.strip()]
        return Subgroup(tuple(self.word(p) for p in parts), self.rank)

    def fmt(self, w: Word) -> str:
        return w.format(self.alphabet) or "1"


def _emit_graph(core: CoreGraph, fmt: str, ctx: _Context, out) -> None:
    if fmt == "dot":
        out.write(to_dot(core, ctx.alphabet))
    elif fmt == "human":
        out.write(f"vertices: {core.num_vertices}\nedges: {core.num_edges}\nrank: {core.rank_of_subgroup}\n")
        out.write(f"canonical: {core.canonical.decode()}\n")
    else:
        out.write(to_records(core, ctx.alphabet))


def cmd_core(args, out) -> int:
    ctx = _Context(args.words, args.rank)
    _emit_graph(ctx.subgroup(args.words).core, args.format or "records", ctx, out)
    return 0


def cmd_export(args, out) -> int:
    ctx = _Context(args.words, args.rank)
    core = ctx.subgroup(args.words).core
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            _emit_graph(core, args.format or "dot", ctx, fh)
    else:
        _emit_graph(core, args.format or "dot", ctx, out)
    return 0


def cmd_member(args, out) -> int:
    ctx = _Context([args.word, args.within], args.rank)
    ok = is_member(ctx.word(args.word), ctx.subgroup([args.within]))
    out.write(f"{'true' if ok else 'false'}\n")
    return 0 if ok else 1


def cmd_appears(args, out) -> int:
    ctx = _Context([args.word, args.within], args.rank)
    w = ctx.word(args.word)
    wit = appears(w, ctx.subgroup([args.within]).core)
    if args.format == "records":
        out.write(json.dumps({"word": ctx.fmt(w), "appears": wit is not None, "witness": wit.to_record() if wit else None}) + "\n")
    elif wit is None:
        out.write("false\n")
    else:
        p1, p2 = w.letters[: wit.split], w.letters[wit.split :]
        out.write(f"true\nsplit: {wit.split}\np1: {ctx.fmt(Word(p1, ctx.rank))}\np2: {ctx.fmt(Word(p2, ctx.rank))}\n")
    return 0 if wit is not None else 1


def cmd_covers(args, out) -> int:
    ctx = _Context([args.H, args.J], args.rank)
    result = x_covers(ctx.subgroup([args.H]), ctx.subgroup([args.J]))
    out.write(result.value + "\n")
    return 0 if result is Cover.COVERS else 1


def _check_rank2(ctx: _Context) -> None:
    if ctx.rank != 2:
        raise StallingsError("this verb works in rank 2")


def cmd_basis(args, out) -> int:
    ctx = _Context([args.u, args.v], args.rank)
    _check_rank2(ctx)
    ok = f2.is_basis(ctx.word(args.u), ctx.word(args.v))
    out.write(f"{'true' if ok else 'false'}\n")
    return 0 if ok else 1


def cmd_primitive(args, out) -> int:
    ctx = _Context([args.word], args.rank)
    _check_rank2(ctx)
    w = ctx.word(args.word)
    ok = f2.is_primitive(w)
    out.write(f"{'true' if ok else 'false'}\n")
    if ok and not w:
        return 0
    if ok:
        out.write(f"complement: {ctx.fmt(f2.primitive_complement(w))}\n")
    return 0 if ok else 1


def cmd_gen_basis(args, out) -> int:
    b = f2.generate_cr_basis(args.p, args.q, args.seed)
    if args.format == "records":
        out.write(json.dumps({"p": args.p, "q": args.q, "seed": args.seed, "u": str(b.u), "v": str(b.v)}) + "\n")
    else:
        out.write(f"{b.u} {b.v}\n")
    return 0


def cmd_reverse(args, out) -> int:
    ctx = _Context([args.u, args.v], args.rank)
    _check_rank2(ctx)
    r = f2.reverse_euclid(ctx.word(args.u), ctx.word(args.v))
    out.write(f"rotation: {ctx.fmt(r.rotation)}\n")
    if r.inverted is not None:
        out.write(f"inverted: {r.inverted}\n")
    for b in r.steps:
        out.write(f"{b.u} {b.v}\n")
    return 0


def cmd_enum_bases(args, out) -> int:
    if args.cr:
        bases = f2.enumerate_cr_bases(args.max_len)
    else:
        bases = f2.enumerate_bases(args.max_len, args.mode)
    if args.format == "records":
        for b in bases:
            out.write(json.dumps({"u": str(b.u), "v": str(b.v)}) + "\n")
    else:
        for b in bases:
            out.write(f"{b.u} {b.v}\n")
        out.write(f"# {len(bases)} unordered, {2 * len(bases)} ordered\n")
    return 0


def cmd_overgroups(args, out) -> int:
    ctx = _Context(args.words, args.rank)
    groups = principal_overgroups(ctx.subgroup(args.words), args.max_vertices)
    for core in groups:
        gens = ", ".join(ctx.fmt(g) for g in core.generators())
        if args.format == "records":
            out.write(json.dumps({"generators": gens, "vertices": core.num_vertices, "canonical": core.canonical.decode()}) + "\n")
        else:
            out.write(f"<{gens}>  vertices={core.num_vertices} edges={core.num_edges}\n")
    if args.format != "records":
        out.write(f"# {len(groups)} principal overgroups\n")
    return 0


def cmd_verify_counterexample(args, out) -> int:
    report = verify_counterexample(args.max_len, args.mode, jobs=args.jobs, probe=args.probe)
    if args.format == "records":
        for rec in report.per_basis or []:
            out.write(json.dumps(rec.to_record()) + "\n")
        summary = {"verdict": report.verdict, "max_len": report.max_len, "mode": report.mode, "probe": report.probe,
                   "bases_checked": report.bases_checked, "failures": len(report.failures)}
        if args.timings:
            summary["wall_time"] = round(report.wall_time, 3)
        out.write(json.dumps(summary) + "\n")
    else:
        out.write(report.summary(timings=args.timings) + "\n")
    return 0 if report.passed and report.certificate.ok else 1


def cmd_verify_f3(args, out) -> int:
    r = verify_f3_example()
    out.write(f"appears(xYzy, <xxYzzy>): {'true' if r.covered else 'false'}\n")
    out.write(f"member(xxYzzy, <xxYzzy>): {'true' if r.member_sanity else 'false'}\n")
    out.write(f"substitution x=a, y=cB, z=cbC: {'ok' if r.substitution_ok else 'FAILED'}\n")
    out.write(f"<xxYzzy> embeds in <xxYzzy, xYzy>: {'true' if r.embeds else 'false'}\n")
    out.write(f"verdict: {'PASS' if r.ok else 'FAIL'}\n")
    return 0 if r.ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="stallings", description="Stallings core graphs and bases of F2.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def verb(name, func, help_text):
        s = sub.add_parser(name, help=help_text)
        s.set_defaults(func=func)
        s.add_argument("--rank", type=int, default=None)
        s.add_argument("--format", choices=("human", "records", "dot"), default=None)
        return s

    s = verb("core", cmd_core, "core graph of a subgroup")
    s.add_argument("words", nargs="+", help="generators, comma or space separated")
    s = verb("export", cmd_export, "export a core graph (dot by default)")
    s.add_argument("words", nargs="+")
    s.add_argument("-o", "--output")
    s = verb("member", cmd_member, "membership test")
    s.add_argument("word")
    s.add_argument("--in", dest="within", required=True)
    s = verb("appears", cmd_appears, "does a word appear in the core graph")
    s.add_argument("word")
    s.add_argument("--in", dest="within", required=True)
    s = verb("covers", cmd_covers, "is the core-graph morphism from H to J onto")
    s.add_argument("H")
    s.add_argument("J")
    s = verb("basis", cmd_basis, "is {u, v} a basis of F2")
    s.add_argument("u")
    s.add_argument("v")
    s = verb("primitive", cmd_primitive, "is w primitive in F2")
    s.add_argument("word")
    s = verb("gen-basis", cmd_gen_basis, "CR basis with lengths (p, q)")
    s.add_argument("p", type=int)
    s.add_argument("q", type=int)
    s.add_argument("--seed", default="ab", choices=("ab", "Ab", "aB", "AB"))
    s = verb("reverse-euclid", cmd_reverse, "reduce a CR basis to a seed")
    s.add_argument("u")
    s.add_argument("v")
    s = verb("enum-bases", cmd_enum_bases, "enumerate bases of F2")
    s.add_argument("--max-len", type=int, required=True)
    s.add_argument("--mode", choices=("brute", "structural"), default="brute")
    s.add_argument("--cr", action="store_true", help="only cyclically reduced bases")
    s = verb("overgroups", cmd_overgroups, "principal overgroups")
    s.add_argument("words", nargs="+")
    s.add_argument("--max-vertices", type=int, default=10)
    s = verb("verify-counterexample", cmd_verify_counterexample, "sweep all bases up to a length")
    s.add_argument("--max-len", type=int, default=9)
    s.add_argument("--mode", choices=("brute", "structural"), default="brute")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--probe", choices=("uv", "uV"), default="uv")
    s.add_argument("--timings", action="store_true")
    verb("verify-f3", cmd_verify_f3, "the rank three non-cover example")
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except ParseError as e:
        print(f"stallings: parse error: {e}", file=sys.stderr)
        return USAGE
    except CapExceededError as e:
        print(f"stallings: {e}", file=sys.stderr)
        return USAGE
    except StallingsError as e:
        print(f"stallings: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
