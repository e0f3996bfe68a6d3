"""Command-line front end.

Subcommands: ``fold``, ``sd``, ``eq`` and ``fuzz``.  Homomorphisms are read
from HomFiles, one map per file::

    # optional headers; otherwise both alphabets are inferred
    domain: a b
    codomain: x y
    a -> x
    b -> Y

Exit codes: 0 success, 1 usage or parse error, 2 hypothesis not verified,
3 campaign failure, 4 unsupported input.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass

from .equaliser import (
    HypothesisNotVerified,
    WrongSolver,
    classify_rank2,
    solve_retract_pipeline,
    solve_set,
)
from .harness import CAMPAIGNS, TrialConfig, run_campaign
from .morphisms import Homomorphism
from .stable_domain import UnsupportedMap, sd_iterate
from .stallings import UnsupportedPreimage, fold, to_dot
from .words import Alphabet, AlphabetMismatch, WordSyntaxError, format_word, parse_word

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_HYPOTHESIS = 2
EXIT_CAMPAIGN = 3
EXIT_UNSUPPORTED = 4

_words = {"type": "array", "items": {"type": "string"}}
_int_or_null = {"type": ["integer", "null"]}

SCHEMAS = {
    "fold": {
        "type": "object",
        "required": ["version", "kind", "alphabet", "rank", "basisWords", "vertices", "edges"],
        "properties": {
            "version": {"const": SCHEMA_VERSION},
            "kind": {"const": "fold"},
            "alphabet": _words,
            "rank": {"type": "integer", "minimum": 0},
            "basisWords": _words,
            "vertices": {"type": "integer", "minimum": 1},
            "edges": {"type": "integer", "minimum": 0},
        },
        "additionalProperties": False,
    },
    "sd": {
        "type": "object",
        "required": ["version", "kind", "status", "iterateRanks", "stabilizationIndex", "sdBasis", "maxIter", "reason"],
        "properties": {
            "version": {"const": SCHEMA_VERSION},
            "kind": {"const": "sd"},
            "status": {"enum": ["stabilized", "cap-reached", "unsupported"]},
            "iterateRanks": {"type": "array", "items": {"type": "integer"}},
            "stabilizationIndex": _int_or_null,
            "sdBasis": {"type": ["array", "null"], "items": {"type": "string"}},
            "maxIter": {"type": "integer"},
            "reason": {"type": "string"},
        },
        "additionalProperties": False,
    },
    "eq": {
        "type": "object",
        "required": ["version", "kind", "verdict", "basisWords", "witnesses", "provenance", "radius", "rank", "notes", "maps"],
        "properties": {
            "version": {"const": SCHEMA_VERSION},
            "kind": {"const": "eq"},
            "verdict": {"enum": ["exact-basis", "sound-candidate", "not-finitely-generated", "trivial", "whole-group"]},
            "basisWords": _words,
            "witnesses": _words,
            "provenance": {"type": "string"},
            "radius": _int_or_null,
            "rank": {"type": "integer", "minimum": 0},
            "notes": _words,
            "maps": _words,
        },
        "additionalProperties": False,
    },
    "fuzz": {
        "type": "object",
        "required": ["version", "kind", "property", "trials", "seed", "status", "failures", "note"],
        "properties": {
            "version": {"const": SCHEMA_VERSION},
            "kind": {"const": "fuzz"},
            "property": {"type": "string"},
            "trials": {"type": "integer"},
            "seed": {"type": "integer"},
            "status": {"enum": ["pass", "fail"]},
            "failures": {"type": "array", "items": {"type": "object"}},
            "note": {"type": "string"},
        },
        "additionalProperties": False,
    },
}


# -- HomFile ------------------------------------------------------------------------

_ASSIGN = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_']*)\s*->\s*(.*?)\s*$")
_HEADER = re.compile(r"^\s*(domain|codomain|alphabet)\s*:\s*(.*?)\s*$")
_TOKEN_SPLIT = re.compile(r"[\s*.]+")


@dataclass
class HomFile:
    """A parsed but not yet typed homomorphism file."""

    source: str
    domain: list[str]
    codomain: list[str] | None
    images: dict[str, tuple[str, int]]  # generator -> (word text, line number)

    def compact(self) -> bool:
        return all(len(s) == 1 and s.islower() for s in self.domain) and all(
            re.fullmatch(r"[A-Za-z]*|1", text) for text, _ in self.images.values()
        )

    def codomain_names(self) -> list[str]:
        if self.codomain is not None:
            return list(self.codomain)
        names = set()
        for text, _ in self.images.values():
            if text in ("", "1"):
                continue
            if self.compact():
                names.update(ch.lower() for ch in text)
            else:
                names.update(re.sub(r"\^.*$", "", tok) for tok in _TOKEN_SPLIT.split(text) if tok)
        return sorted(names)

    def build(self, codomain: Alphabet) -> Homomorphism:
        domain = Alphabet(self.domain)
        images = []
        for s in self.domain:
            text, line = self.images[s]
            try:
                images.append(parse_word(codomain, text))
            except WordSyntaxError as exc:
                raise WordSyntaxError(f"{self.source}, line {line}: {exc}", text, exc.column, line) from None
        return Homomorphism(domain, codomain, images)


def _split_names(text: str) -> list[str]:
    return [t for t in re.split(r"[\s,]+", text) if t]


def parse_hom_text(text: str, source: str = "<string>") -> HomFile:
    domain_hdr = codomain_hdr = None
    images: dict[str, tuple[str, int]] = {}
    order: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _HEADER.match(line)
        if m:
            key, value = m.groups()
            if key == "codomain":
                codomain_hdr = _split_names(value)
            else:
                domain_hdr = _split_names(value)
            continue
        m = _ASSIGN.match(line)
        if not m:
            raise WordSyntaxError(f"{source}: expected 'generator -> word'", raw, 1, lineno)
        name, word = m.groups()
        if name in images:
            raise WordSyntaxError(f"{source}: generator {name!r} assigned twice", raw, 1, lineno)
        images[name] = (word, lineno)
        order.append(name)
    if domain_hdr is not None:
        extra = [s for s in order if s not in domain_hdr]
        missing = [s for s in domain_hdr if s not in images]
        if extra or missing:
            raise WordSyntaxError(f"{source}: assignments do not match the domain header (missing {missing}, extra {extra})")
        domain = domain_hdr
    else:
        domain = order
    if not domain:
        raise WordSyntaxError(f"{source}: no assignments")
    return HomFile(source, domain, codomain_hdr, images)


def shared_codomain(files: list[HomFile], extra_names=()) -> Alphabet:
    declared = [f.codomain for f in files if f.codomain is not None]
    if declared:
        if any(d != declared[0] for d in declared):
            raise AlphabetMismatch("codomain headers disagree between files")
        codomain = Alphabet(declared[0])
    else:
        names = set(extra_names)
        for f in files:
            names.update(f.codomain_names())
        codomain = Alphabet(sorted(names) or ["a"])
    return codomain


def load_homs(files: list[HomFile]) -> list[Homomorphism]:
    """Type several HomFiles over one shared codomain."""
    codomain = shared_codomain(files)
    return [f.build(codomain) for f in files]


def format_hom(h: Homomorphism) -> str:
    """HomFile text for ``h``; parsing it gives ``h`` back."""
    lines = [f"domain: {' '.join(h.domain)}", f"codomain: {' '.join(h.codomain)}"]
    lines += [f"{s} -> {format_word(w)}" for s, w in zip(h.domain, h.images)]
    return "\n".join(lines) + "\n"


def parse_hom(text: str, source: str = "<string>") -> Homomorphism:
    return load_homs([parse_hom_text(text, source)])[0]


def _read(path: str) -> HomFile:
    with open(path, encoding="utf-8") as fh:
        return parse_hom_text(fh.read(), path)


def _hom_str(h: Homomorphism) -> str:
    return ", ".join(f"{s}->{format_word(w)}" for s, w in zip(h.domain, h.images))


# -- output ---------------------------------------------------------------------------


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _emit(path: str | None, text: str, out) -> None:
    if path is None:
        return
    if path == "-":
        out.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def fold_json(G) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "kind": "fold",
        "alphabet": list(G.alphabet),
        "rank": G.rank(),
        "basisWords": [format_word(w) for w in G.basis().words],
        "vertices": G.n_vertices,
        "edges": len(G.edges),
    }


def sd_json(trace, max_iter: int) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "kind": "sd",
        "status": trace.status,
        "iterateRanks": trace.ranks,
        "stabilizationIndex": trace.index if trace.stabilized else None,
        "sdBasis": [format_word(w) for w in trace.sd.basis().words] if trace.stabilized else None,
        "maxIter": max_iter,
        "reason": trace.reason,
    }


def eq_json(rep) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "kind": "eq",
        "verdict": rep.verdict,
        "basisWords": [format_word(w) for w in rep.basis],
        "witnesses": [format_word(w) for w in rep.witnesses],
        "provenance": rep.provenance,
        "radius": rep.radius,
        "rank": rep.rank,
        "notes": list(rep.notes),
        "maps": [_hom_str(f) for f in rep.maps],
    }


def fuzz_json(report, seed: int) -> dict:
    d = report.to_dict()
    d.update(version=SCHEMA_VERSION, kind="fuzz", seed=seed)
    return d


# -- commands -------------------------------------------------------------------------


def _cmd_fold(args, out) -> int:
    texts = [t.strip() for t in args.gens.split(",")] if args.gens.strip() else []
    if args.alphabet:
        alphabet = Alphabet(_split_names(args.alphabet))
    else:
        letters = sorted({ch.lower() for t in texts for ch in t if ch.isalpha()})
        alphabet = Alphabet(letters or ["a", "b"])
    gens = [parse_word(alphabet, t) for t in texts]
    G = fold(gens, alphabet)
    basis = [format_word(w) for w in G.basis().words]
    out.write(f"rank: {G.rank()}\n")
    out.write(f"basis: {', '.join(basis) if basis else '(empty)'}\n")
    _emit(args.dot, to_dot(G), out)
    _emit(args.json, dumps(fold_json(G)), out)
    return EXIT_OK


def _cmd_sd(args, out) -> int:
    g, h = load_homs([_read(args.g), _read(args.h)])
    trace = sd_iterate(g, h, args.max_iter)
    out.write(f"status: {trace.status}\n")
    out.write(f"iterate ranks: {trace.ranks}\n")
    if trace.stabilized:
        out.write(f"stabilised at index {trace.index}\n")
        out.write(f"sd basis: {', '.join(format_word(w) for w in trace.sd.basis().words) or '(empty)'}\n")
    elif trace.reason:
        out.write(f"reason: {trace.reason}\n")
    _emit(args.json, dumps(sd_json(trace, args.max_iter)), out)
    return EXIT_UNSUPPORTED if trace.status == "unsupported" else EXIT_OK


def _cmd_eq(args, out) -> int:
    map_files = [_read(p) for p in args.maps]
    retr_files = [_read(p) for p in args.retraction or []]
    if retr_files and (len(retr_files) != 2 or len(map_files) != 2):
        raise _Usage("--retraction needs exactly two map files and is given exactly twice")
    extra = set()
    for f in retr_files:
        extra.update(f.domain)
    codomain = shared_codomain(map_files + retr_files, extra)
    for f in retr_files:
        if sorted(f.domain) != sorted(codomain):
            raise AlphabetMismatch(f"{f.source}: a retraction must assign every codomain generator")
        f.domain = list(codomain)  # endomorphism: domain order follows the codomain
    maps = [f.build(codomain) for f in map_files]
    retr = [f.build(codomain) for f in retr_files]
    if retr:
        rep = solve_retract_pipeline(maps[0], maps[1], retr[0], retr[1], radius=args.radius)
    elif len(maps[0].domain) == 2:
        rep = classify_rank2(maps, radius=args.radius, max_iter=args.max_iter)
    else:
        rep = solve_set(maps, radius=args.radius, max_iter=args.max_iter)
    out.write(f"verdict: {rep.verdict}\n")
    out.write(f"basis: {', '.join(format_word(w) for w in rep.basis) or '(empty)'}\n")
    if rep.witnesses:
        out.write(f"witnesses: {', '.join(format_word(w) for w in rep.witnesses)}\n")
    out.write(f"provenance: {rep.provenance}\n")
    if rep.radius is not None:
        out.write(f"radius: {rep.radius}\n")
    _emit(args.json, dumps(eq_json(rep)), out)
    return EXIT_OK


def _cmd_fuzz(args, out) -> int:
    if args.property not in CAMPAIGNS:
        raise _Usage(f"unknown property {args.property!r}; choose from {', '.join(sorted(CAMPAIGNS))}")
    cfg = TrialConfig(seed=args.seed, trials=args.trials, max_word_len=args.max_word_len,
                      radius=args.radius, max_iter=args.max_iter)
    report = run_campaign(args.property, cfg)
    out.write(f"{report.property}: {report.status} ({report.trials} trials, {len(report.failures)} failures)\n")
    for f in report.failures:
        out.write(f"  seed {f['seed']} trial {f['trial']}: {'; '.join(f['problems'])}\n")
    _emit(args.json, dumps(fuzz_json(report, args.seed)), out)
    return EXIT_OK if report.passed else EXIT_CAMPAIGN


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="equalisers", description="Subgroups, stable domains and equalisers in free groups.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    f = sub.add_parser("fold", help="fold generators into a Stallings graph")
    f.add_argument("--gens", required=True, help="comma-separated words, e.g. 'ab,abb'")
    f.add_argument("--alphabet", help="generator names (default: letters used)")
    f.add_argument("--dot", metavar="PATH", help="write DOT ('-' for stdout)")
    f.add_argument("--json", metavar="PATH", help="write JSON ('-' for stdout)")

    s = sub.add_parser("sd", help="stable domain iterates of a pair")
    s.add_argument("g")
    s.add_argument("h")
    s.add_argument("--max-iter", type=int, default=20)
    s.add_argument("--json", metavar="PATH")

    e = sub.add_parser("eq", help="equaliser of two or more maps")
    e.add_argument("maps", nargs="+", metavar="MAP")
    e.add_argument("--retraction", action="append", metavar="RHO",
                   help="retraction onto the image of the first map, then of the second")
    e.add_argument("--radius", type=int, default=8)
    e.add_argument("--max-iter", type=int, default=8)
    e.add_argument("--json", metavar="PATH")

    z = sub.add_parser("fuzz", help="run a seeded property campaign")
    z.add_argument("--property", required=True, help=", ".join(CAMPAIGNS))
    z.add_argument("--seed", type=int, default=0)
    z.add_argument("--trials", type=int, default=100)
    z.add_argument("--max-word-len", type=int, default=4)
    z.add_argument("--radius", type=int, default=6)
    z.add_argument("--max-iter", type=int, default=5)
    z.add_argument("--json", metavar="PATH")
    return p


COMMANDS = {"fold": _cmd_fold, "sd": _cmd_sd, "eq": _cmd_eq, "fuzz": _cmd_fuzz}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command == "eq" and len(args.maps) < 2:
            raise _Usage("eq needs at least two map files")
        return COMMANDS[args.command](args, out)
    except _Usage as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except HypothesisNotVerified as exc:
        err.write(f"hypothesis not verified: {exc}\n")
        return EXIT_HYPOTHESIS
    except (UnsupportedMap, UnsupportedPreimage, WrongSolver) as exc:
        err.write(f"unsupported input: {exc}\n")
        return EXIT_UNSUPPORTED
    except (WordSyntaxError, AlphabetMismatch, ValueError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
