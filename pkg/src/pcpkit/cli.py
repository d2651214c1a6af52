"""Command-line front end: parse instance and witness files, run solvers,
apply reductions and chains, check certificates, translate witnesses.

File formats are line oriented; `;` starts a comment, strings are
space-separated symbol tokens and `-` denotes the empty string.  Exit codes
are a stable contract: 0 success/accept, 1 reject, 2 malformed input or
usage, 3 solver found nothing within the bound.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Dict, List, Optional, Sequence, Tuple

from .core import Card, Str
from .problems import (
    CfiInstance,
    CfpInstance,
    MpcpInstance,
    PcpInstance,
    SrhInstance,
    SrhPrimeInstance,
    SrInstance,
    check_cfi,
    check_cfp,
    check_mpcp,
    check_pcp,
    check_sr,
    check_srh,
    check_srh_prime,
)
from . import reductions, solvers, testkit
from .solvers import Found, SearchBound
from .turing import TmSpec, tm_run

PROBLEM_TAGS = ("pcp", "mpcp", "sr", "srh", "srh'", "cfp", "cfi", "tm")
RESERVED_TOKENS = {"/", "-", "%", ";"}
BLANK_TOKEN = "_"


class ParseError(Exception):
    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InternTable:
    """Bidirectional mapping between symbol names and codes, allocated in
    order of first appearance."""

    def __init__(self):
        self.by_name: Dict[str, int] = {}
        self.by_code: Dict[int, str] = {}

    def intern(self, name: str, line: Optional[int] = None) -> int:
        if name in RESERVED_TOKENS or name == BLANK_TOKEN:
            raise ParseError(f"{name!r} cannot be used as a symbol name", line)
        if name not in self.by_name:
            code = len(self.by_name)
            self.by_name[name] = code
            self.by_code[code] = name
        return self.by_name[name]

    def copy(self) -> "InternTable":
        t = InternTable()
        t.by_name = dict(self.by_name)
        t.by_code = dict(self.by_code)
        return t


class _Renderer:
    """Renders symbol codes as names, inventing `_fK` names for codes the
    table does not know (fresh symbols introduced by reductions)."""

    def __init__(self, table: InternTable):
        self.table = table.copy()
        self.counter = 0

    def name(self, code: int) -> str:
        if code not in self.table.by_code:
            while True:
                candidate = f"_f{self.counter}"
                self.counter += 1
                if candidate not in self.table.by_name:
                    break
            self.table.by_name[candidate] = code
            self.table.by_code[code] = candidate
        return self.table.by_code[code]

    def string(self, s: Sequence[int]) -> str:
        return " ".join(self.name(a) for a in s) if s else "-"

    def card(self, card: Card) -> str:
        return f"{self.string(card.top)} / {self.string(card.bot)}"


def _lines(text: str) -> List[Tuple[int, str]]:
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(";", 1)[0].strip()
        if line:
            out.append((no, line))
    return out


def _parse_str(tokens: Sequence[str], table: InternTable, line: int) -> Str:
    if list(tokens) == ["-"]:
        return ()
    if not tokens:
        raise ParseError("empty string must be written as -", line)
    return tuple(table.intern(t, line) for t in tokens)


def _parse_card(body: str, table: InternTable, line: int) -> Card:
    parts = body.split()
    if parts.count("/") != 1:
        raise ParseError("a card line must contain exactly one /", line)
    cut = parts.index("/")
    return Card(_parse_str(parts[:cut], table, line),
                _parse_str(parts[cut + 1:], table, line))


def parse_instance(text: str):
    """Parse an instance file.  Returns (tag, instance, intern table)."""
    lines = _lines(text)
    if not lines:
        raise ParseError("empty instance file")
    no, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != "%problem":
        raise ParseError("expected '%problem <tag>' header", no)
    tag = parts[1]
    if tag not in PROBLEM_TAGS:
        raise ParseError(f"unknown problem tag {tag!r}", no)
    table = InternTable()
    body = lines[1:]
    if tag == "tm":
        return tag, _parse_tm(body, table), table

    sections: Dict[str, object] = {}
    card_lists: Dict[str, List[Card]] = {}
    # Bare card lines accumulate into the section named by `current`; for pcp
    # and mpcp they go to the implicit "cards" section, even after a scalar
    # section such as %first.
    default_current = {"pcp": "cards", "mpcp": "cards"}.get(tag)
    current = default_current
    if current is not None:
        card_lists[current] = []
    for no, line in body:
        if line.startswith("%"):
            parts = line.split()
            key = parts[0][1:]
            if key in ("rules", "grammar1", "grammar2"):
                if key in card_lists:
                    raise ParseError(f"duplicate section %{key}", no)
                card_lists[key] = []
                current = key
            else:
                if key in sections:
                    raise ParseError(f"duplicate section %{key}", no)
                sections[key] = (no, parts[1:])
                current = default_current
        else:
            if current is None:
                raise ParseError("card line outside a card section", no)
            card_lists[current].append(_parse_card(line, table, no))

    def want_cards(key):
        if key not in card_lists:
            raise ParseError(f"missing section %{key}")
        return tuple(card_lists[key])

    def want(key, parse):
        if key not in sections:
            raise ParseError(f"missing section %{key}")
        no, toks = sections[key]
        return parse(toks, no)

    def as_str(toks, no):
        return _parse_str(toks, table, no)

    def as_sym(toks, no):
        if len(toks) != 1 or toks[0] == "-":
            raise ParseError("expected a single symbol", no)
        return table.intern(toks[0], no)

    def as_card(toks, no):
        return _parse_card(" ".join(toks), table, no)

    allowed_scalar = {
        "pcp": set(), "mpcp": {"first"},
        "sr": {"from", "to"}, "srh": {"from", "target"},
        "srh'": {"from", "targets"}, "cfp": {"marker"}, "cfi": {"marker"},
    }[tag]
    allowed_cards = {
        "pcp": {"cards"}, "mpcp": {"cards"},
        "sr": {"rules"}, "srh": {"rules"}, "srh'": {"rules"},
        "cfp": {"rules"}, "cfi": {"grammar1", "grammar2"},
    }[tag]
    unknown = (set(sections) - allowed_scalar) | (set(card_lists) - allowed_cards)
    if unknown:
        raise ParseError(f"unexpected section %{sorted(unknown)[0]}")
    if tag == "pcp":
        return tag, PcpInstance(want_cards("cards")), table
    if tag == "mpcp":
        return tag, MpcpInstance(want("first", as_card), want_cards("cards")), table
    if tag == "sr":
        return tag, SrInstance(want_cards("rules"), want("from", as_str),
                               want("to", as_str)), table
    if tag == "srh":
        return tag, SrhInstance(want_cards("rules"), want("from", as_str),
                                want("target", as_sym)), table
    if tag == "srh'":
        return tag, SrhPrimeInstance(want_cards("rules"), want("from", as_str),
                                     want("targets", as_str)), table
    if tag == "cfp":
        return tag, CfpInstance(want_cards("rules"), want("marker", as_sym)), table
    # cfi
    return tag, CfiInstance(want_cards("grammar1"), want_cards("grammar2"),
                            want("marker", as_sym)), table


def _parse_tm(body, table: InternTable):
    sections: Dict[str, Tuple[int, List[str]]] = {}
    transitions: List[Tuple[int, List[str]]] = []
    for no, line in body:
        if line.startswith("%"):
            parts = line.split()
            key = parts[0][1:]
            if key not in ("states", "tape", "start", "halt", "input"):
                raise ParseError(f"unexpected section %{key}", no)
            if key in sections:
                raise ParseError(f"duplicate section %{key}", no)
            sections[key] = (no, parts[1:])
        elif "->" in line.split():
            transitions.append((no, line.split()))
        else:
            raise ParseError("expected a transition 'q r -> q' w M'", no)
    for key in ("states", "tape", "start", "halt", "input"):
        if key not in sections:
            raise ParseError(f"missing section %{key}")

    no, toks = sections["states"]
    states = _parse_str(toks, table, no)
    no, toks = sections["tape"]
    tape = _parse_str(toks, table, no)
    no, toks = sections["start"]
    if len(toks) != 1:
        raise ParseError("expected a single start state", no)
    start = table.intern(toks[0], no)
    no, toks = sections["halt"]
    halting = frozenset(_parse_str(toks, table, no))
    no, toks = sections["input"]
    tape_input = _parse_str(toks, table, no)

    def sym_or_blank(tok: str, no: int):
        return None if tok == BLANK_TOKEN else table.intern(tok, no)

    delta = {}
    for no, toks in transitions:
        if len(toks) != 6 or toks[2] != "->":
            raise ParseError("expected a transition 'q r -> q' w M'", no)
        q = table.intern(toks[0], no)
        read = sym_or_blank(toks[1], no)
        q2 = table.intern(toks[3], no)
        write = sym_or_blank(toks[4], no)
        move = toks[5]
        if move not in ("L", "N", "R"):
            raise ParseError(f"bad move {move!r}", no)
        if (q, read) in delta:
            raise ParseError("duplicate transition", no)
        delta[(q, read)] = (q2, write, move)
    try:
        spec = TmSpec(tape, states, start, halting, delta)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    if any(a not in tape for a in tape_input):
        raise ParseError("input symbol outside the tape alphabet")
    return spec, tape_input


def print_instance(tag: str, instance, table: InternTable) -> str:
    r = _Renderer(table)
    out = [f"%problem {tag}"]
    if tag == "pcp":
        out += [r.card(c) for c in instance.cards]
    elif tag == "mpcp":
        out.append(f"%first {r.card(instance.first)}")
        out += [r.card(c) for c in instance.cards]
    elif tag in ("sr", "srh", "srh'"):
        out.append("%rules")
        out += [r.card(c) for c in instance.rules]
        out.append(f"%from {r.string(instance.start)}")
        if tag == "sr":
            out.append(f"%to {r.string(instance.goal)}")
        elif tag == "srh":
            out.append(f"%target {r.name(instance.target)}")
        else:
            out.append(f"%targets {r.string(instance.targets)}")
    elif tag == "cfp":
        out.append("%rules")
        out += [r.card(c) for c in instance.rules]
        out.append(f"%marker {r.name(instance.marker)}")
    elif tag == "cfi":
        out.append("%grammar1")
        out += [r.card(c) for c in instance.rules1]
        out.append("%grammar2")
        out += [r.card(c) for c in instance.rules2]
        out.append(f"%marker {r.name(instance.marker)}")
    elif tag == "tm":
        spec, tape_input = instance
        out.append(f"%states {r.string(spec.states)}")
        out.append(f"%tape {r.string(spec.tape_alphabet)}")
        out.append(f"%start {r.name(spec.start)}")
        out.append(f"%halt {r.string(tuple(q for q in spec.states if q in spec.halting))}")
        for q in spec.states:
            if q in spec.halting:
                continue
            for read in [None] + list(spec.tape_alphabet):
                q2, write, move = spec.delta[(q, read)]
                rt = BLANK_TOKEN if read is None else r.name(read)
                wt = BLANK_TOKEN if write is None else r.name(write)
                out.append(f"{r.name(q)} {rt} -> {r.name(q2)} {wt} {move}")
        out.append(f"%input {r.string(tape_input)}")
    else:
        raise ValueError(f"unknown tag {tag!r}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Witness files

DERIVATION_TAGS = ("sr", "srh", "srh'")


def parse_witness(text: str):
    """Parse a witness file.  Returns (tag, payload): an index tuple for
    stack witnesses, a step tuple for derivations, an (indices, indices)
    pair for cfi, or a step count for tm."""
    lines = _lines(text)
    if not lines:
        raise ParseError("empty witness file")
    no, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != "%witness":
        raise ParseError("expected '%witness <tag>' header", no)
    tag = parts[1]
    if tag not in PROBLEM_TAGS:
        raise ParseError(f"unknown problem tag {tag!r}", no)
    body = lines[1:]

    def ints(tokens, no):
        try:
            out = tuple(int(t) for t in tokens)
        except ValueError:
            raise ParseError("expected numbers", no)
        if any(i < 0 for i in out):
            raise ParseError("indices must be nonnegative", no)
        return out

    if tag in ("pcp", "mpcp", "cfp"):
        if len(body) != 1 or not body[0][1].startswith("indices:"):
            raise ParseError("expected a single 'indices:' line")
        no, line = body[0]
        return tag, ints(line[len("indices:"):].split(), no)
    if tag == "cfi":
        if len(body) != 2 or not body[0][1].startswith("indices:") \
                or not body[1][1].startswith("indices2:"):
            raise ParseError("expected 'indices:' and 'indices2:' lines")
        w1 = ints(body[0][1][len("indices:"):].split(), body[0][0])
        w2 = ints(body[1][1][len("indices2:"):].split(), body[1][0])
        return tag, (w1, w2)
    if tag == "tm":
        if len(body) != 1 or not body[0][1].startswith("halt-steps:"):
            raise ParseError("expected a single 'halt-steps:' line")
        no, line = body[0]
        (n,) = ints(line[len("halt-steps:"):].split(), no)
        return tag, n
    # derivations
    if not body or body[0][1] != "steps:":
        raise ParseError("expected a 'steps:' line")
    steps = []
    for no, line in body[1:]:
        pair = ints(line.split(), no)
        if len(pair) != 2:
            raise ParseError("expected 'rule cut'", no)
        steps.append(pair)
    return tag, tuple(steps)


def print_witness(tag: str, payload) -> str:
    out = [f"%witness {tag}"]
    if tag in ("pcp", "mpcp", "cfp"):
        out.append(("indices: " + " ".join(map(str, payload))).rstrip())
    elif tag == "cfi":
        w1, w2 = payload
        out.append(("indices: " + " ".join(map(str, w1))).rstrip())
        out.append(("indices2: " + " ".join(map(str, w2))).rstrip())
    elif tag == "tm":
        out.append(f"halt-steps: {payload}")
    elif tag in DERIVATION_TAGS:
        out.append("steps:")
        out += [f"{ri} {cut}" for ri, cut in payload]
    else:
        raise ValueError(f"unknown tag {tag!r}")
    return "\n".join(out) + "\n"


def check_witness(tag: str, instance, payload, max_steps: int = 10000):
    """Run the exact checker for any problem; tm replays the simulator."""
    if tag == "pcp":
        return check_pcp(instance, payload)
    if tag == "mpcp":
        return check_mpcp(instance, payload)
    if tag == "cfp":
        return check_cfp(instance, payload)
    if tag == "cfi":
        return check_cfi(instance, payload[0], payload[1])
    if tag == "sr":
        return check_sr(instance, payload)
    if tag == "srh":
        return check_srh(instance, payload)
    if tag == "srh'":
        return check_srh_prime(instance, payload)
    if tag == "tm":
        spec, tape_input = instance
        run = tm_run(spec, tape_input, payload)
        from .problems import CheckResult
        if run.halted and run.steps <= payload:
            return CheckResult(True)
        return CheckResult(False, f"machine does not halt within {payload} steps")
    raise ValueError(f"unknown tag {tag!r}")


def _solve(tag: str, instance, bound: SearchBound):
    """Returns (found, payload or None)."""
    if tag == "pcp":
        out = solvers.solve_pcp(instance, bound)
    elif tag == "mpcp":
        out = solvers.solve_mpcp(instance, bound)
    elif tag == "cfp":
        out = solvers.solve_cfp(instance, bound)
    elif tag == "cfi":
        out = solvers.solve_cfi(instance, bound)
    elif tag == "sr":
        out = solvers.solve_sr(instance, bound)
    elif tag == "srh":
        out = solvers.solve_srh(instance, bound)
    elif tag == "srh'":
        out = solvers.solve_srh_prime(instance, bound)
    elif tag == "tm":
        spec, tape_input = instance
        run = tm_run(spec, tape_input, bound.max_steps)
        return (run.halted, run.steps if run.halted else None)
    else:
        raise ValueError(f"unknown tag {tag!r}")
    if isinstance(out, Found):
        return True, out.witness
    return False, None


# ---------------------------------------------------------------------------
# Reduction maps

MAP_FORMAT = 1


def _write_map(kind: str, source_tag: str, target_tag: str,
               source_text: str) -> str:
    return json.dumps({"pcpkit-map": MAP_FORMAT, "kind": kind,
                       "source_tag": source_tag, "target_tag": target_tag,
                       "source": source_text}, indent=2) + "\n"


def _load_map(text: str):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"reduction map is not valid JSON: {exc}")
    if not isinstance(data, dict) or data.get("pcpkit-map") != MAP_FORMAT:
        raise ParseError("not a reduction map file")
    return data


# ---------------------------------------------------------------------------
# Commands


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}")


def _cmd_check(args) -> int:
    tag, instance, _ = parse_instance(_read(args.instance))
    wtag, payload = parse_witness(_read(args.witness))
    if wtag != tag:
        raise ParseError(f"witness is for {wtag!r} but instance is {tag!r}")
    result = check_witness(tag, instance, payload)
    if result:
        print("accepted")
        return 0
    print(f"rejected: {result.reason}", file=sys.stderr)
    return 1


def _cmd_solve(args) -> int:
    tag, instance, _ = parse_instance(_read(args.instance))
    bound = SearchBound(max_steps=args.max_steps, max_len=args.max_len,
                        max_cards=args.max_cards)
    found, payload = _solve(tag, instance, bound)
    if not found:
        print("not found within bound", file=sys.stderr)
        return 3
    text = print_witness(tag, payload)
    sys.stdout.write(text)
    if args.emit_witness:
        with open(args.emit_witness, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0


def _reduce_or_chain(args, kind: str) -> int:
    source_text = _read(args.instance)
    tag, instance, table = parse_instance(source_text)
    source = instance
    if kind == "reduce":
        if reductions.chain_path(tag, args.to) != [tag, args.to]:
            raise ParseError(f"no single-step reduction from {tag!r} to {args.to!r}")
    result = reductions.chain(source, tag, args.to)
    sys.stdout.write(print_instance(args.to, result.instance, table))
    if args.emit_map:
        canonical = print_instance(tag, instance, table)
        with open(args.emit_map, "w", encoding="utf-8") as fh:
            fh.write(_write_map(kind, tag, args.to, canonical))
    return 0


def _cmd_translate(args) -> int:
    data = _load_map(_read(args.map))
    source_tag, target_tag = data["source_tag"], data["target_tag"]
    tag, instance, _ = parse_instance(data["source"])
    if tag != source_tag:
        raise ParseError("reduction map source does not match its declared tag")
    result = reductions.chain(instance, source_tag, target_tag)
    wtag, payload = parse_witness(_read(args.witness))
    try:
        if args.direction == "fwd":
            if wtag != source_tag:
                raise ParseError(f"witness is for {wtag!r}, expected {source_tag!r}")
            out_tag, out = target_tag, reductions.chain_witness_fwd(result, payload)
        else:
            if wtag != target_tag:
                raise ParseError(f"witness is for {wtag!r}, expected {target_tag!r}")
            out_tag, out = source_tag, reductions.chain_witness_bwd(result, payload)
    except reductions.TranslationError as exc:
        print(f"translation failed: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(print_witness(out_tag, out))
    return 0


def _cmd_gen(args) -> int:
    config = testkit.GenConfig(seed=args.seed, max_cards=max(1, args.size),
                               max_states=max(1, min(args.size, 3)))
    if args.problem == "pcp":
        tag, instance = "pcp", testkit.gen_pcp(config)
    elif args.problem == "mpcp":
        tag, instance = "mpcp", testkit.gen_mpcp(config)
    elif args.problem == "sr":
        tag, instance = "sr", testkit.gen_srs(config)
    elif args.problem == "tm":
        tag, instance = "tm", testkit.gen_tm(config)
    else:
        raise ParseError(f"gen does not support problem {args.problem!r}")
    sys.stdout.write(print_instance(tag, instance, InternTable()))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pcpkit",
        description="Certificate checkers, bounded solvers and witness-preserving "
                    "reductions for PCP and related undecidable problems.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check a witness against an instance")
    p.add_argument("instance")
    p.add_argument("witness")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("solve", help="bounded brute-force search for a witness")
    p.add_argument("instance")
    p.add_argument("--max-cards", type=int, default=10)
    p.add_argument("--max-steps", type=int, default=50)
    p.add_argument("--max-len", type=int, default=50)
    p.add_argument("--emit-witness", metavar="FILE")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("reduce", help="apply one reduction step")
    p.add_argument("instance")
    p.add_argument("--to", required=True, choices=PROBLEM_TAGS)
    p.add_argument("--emit-map", metavar="FILE")
    p.set_defaults(func=lambda a: _reduce_or_chain(a, "reduce"))

    p = sub.add_parser("chain", help="compose reductions to a target problem")
    p.add_argument("instance")
    p.add_argument("--to", required=True, choices=PROBLEM_TAGS)
    p.add_argument("--emit-map", metavar="FILE")
    p.set_defaults(func=lambda a: _reduce_or_chain(a, "chain"))

    p = sub.add_parser("translate", help="translate a witness across a reduction map")
    p.add_argument("map")
    p.add_argument("witness")
    p.add_argument("--direction", required=True, choices=("fwd", "bwd"))
    p.set_defaults(func=_cmd_translate)

    p = sub.add_parser("gen", help="generate a seeded random instance")
    p.add_argument("--problem", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--size", type=int, default=3)
    p.set_defaults(func=_cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
