"""Single-tape Turing machines: model, simulator, configuration codec, rule compiler.

The tape is represented by the part the machine has previously written to,
split into four non-overlapping shapes: empty, head inside the written part,
head in the left overflow, head in the right overflow.  Configurations encode
to strings with the state symbol immediately left of the read position and
two dedicated end markers; `tm_rules` compiles the transition table into a
string rewriting system so that one machine step corresponds to exactly one
rewrite step on encoded configurations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Optional, Tuple, Union

from .core import Card, Str, Symbol, fresh

# Head movement: left, none, right.
MOVES = ("L", "N", "R")

# (next state, symbol to write or None for "write nothing", move)
Action = Tuple[Symbol, Optional[Symbol], str]
# Transition table keyed by (state, read symbol or None for blank).
Delta = Dict[Tuple[Symbol, Optional[Symbol]], Action]


@dataclass(frozen=True)
class Empty:
    pass


@dataclass(frozen=True)
class LeftOf:
    head_next: Symbol
    rest: Str = ()


@dataclass(frozen=True)
class RightOf:
    head_prev: Symbol
    rest: Str = ()  # written prefix left of head_prev


@dataclass(frozen=True)
class Mid:
    left: Str
    head: Symbol
    right: Str


Tape = Union[Empty, LeftOf, RightOf, Mid]


@dataclass(frozen=True)
class Config:
    state: Symbol
    tape: Tape


@dataclass(frozen=True)
class TmSpec:
    tape_alphabet: Tuple[Symbol, ...]
    states: Tuple[Symbol, ...]
    start: Symbol
    halting: FrozenSet[Symbol]
    delta: Dict = field(hash=False)

    def __post_init__(self):
        sigma = set(self.tape_alphabet)
        q = set(self.states)
        if len(sigma) != len(self.tape_alphabet) or len(q) != len(self.states):
            raise ValueError("alphabet and state list must be duplicate-free")
        if sigma & q:
            raise ValueError("state symbols must be disjoint from tape symbols")
        if self.start not in q:
            raise ValueError("start state not a state")
        if not self.halting <= q:
            raise ValueError("halting set not a subset of the states")
        reads = [None] + list(self.tape_alphabet)
        for state in self.states:
            if state in self.halting:
                continue
            for read in reads:
                if (state, read) not in self.delta:
                    raise ValueError(f"transition missing for ({state}, {read})")
        for (state, read), (nxt, write, move) in self.delta.items():
            if state not in q or nxt not in q:
                raise ValueError("transition mentions unknown state")
            if read is not None and read not in sigma:
                raise ValueError("transition reads unknown symbol")
            if write is not None and write not in sigma:
                raise ValueError("transition writes unknown symbol")
            if move not in MOVES:
                raise ValueError(f"bad move {move!r}")


def markers(m: TmSpec) -> Tuple[Symbol, Symbol]:
    """The left and right end-marker symbols, allocated above the machine's symbols."""
    base = list(m.tape_alphabet) + list(m.states)
    lm = fresh(base)
    rm = fresh(base + [lm])
    return lm, rm


def tm_step(m: TmSpec, c: Config) -> Optional[Config]:
    """One machine step; None when the configuration is halting."""
    if c.state not in m.states:
        raise ValueError(f"unknown state {c.state}")
    if c.state in m.halting:
        return None
    tape = c.tape
    read = tape.head if isinstance(tape, Mid) else None
    nxt, write, move = m.delta[(c.state, read)]

    if isinstance(tape, Empty):
        if write is None:
            new = tape
        elif move == "L":
            new = LeftOf(write)
        elif move == "N":
            new = Mid((), write, ())
        else:
            new = RightOf(write)
    elif isinstance(tape, LeftOf):
        if write is None:
            new = Mid((), tape.head_next, tape.rest) if move == "R" else tape
        elif move == "L":
            new = LeftOf(write, (tape.head_next,) + tape.rest)
        elif move == "N":
            new = Mid((), write, (tape.head_next,) + tape.rest)
        else:
            new = Mid((write,), tape.head_next, tape.rest)
    elif isinstance(tape, RightOf):
        if write is None:
            new = Mid(tape.rest, tape.head_prev, ()) if move == "L" else tape
        elif move == "L":
            new = Mid(tape.rest, tape.head_prev, (write,))
        elif move == "N":
            new = Mid(tape.rest + (tape.head_prev,), write, ())
        else:
            new = RightOf(write, tape.rest + (tape.head_prev,))
    else:
        head = write if write is not None else tape.head
        if move == "N":
            new = Mid(tape.left, head, tape.right)
        elif move == "L":
            if tape.left:
                new = Mid(tape.left[:-1], tape.left[-1], (head,) + tape.right)
            else:
                new = LeftOf(head, tape.right)
        else:
            if tape.right:
                new = Mid(tape.left + (head,), tape.right[0], tape.right[1:])
            else:
                new = RightOf(head, tape.left)
    return Config(nxt, new)


@dataclass(frozen=True)
class RunResult:
    halted: bool
    steps: int
    final: Config


def initial_config(m: TmSpec, tape_input: Str) -> Config:
    if tape_input:
        return Config(m.start, LeftOf(tape_input[0], tuple(tape_input[1:])))
    return Config(m.start, Empty())


def tm_run(m: TmSpec, tape_input: Str, max_steps: int) -> RunResult:
    bad = [a for a in tape_input if a not in m.tape_alphabet]
    if bad:
        raise ValueError(f"input symbol {bad[0]} outside the tape alphabet")
    c = initial_config(m, tape_input)
    for n in range(max_steps + 1):
        nxt = tm_step(m, c)
        if nxt is None:
            return RunResult(True, n, c)
        c = nxt
    return RunResult(False, max_steps, c)


def encode_config(m: TmSpec, c: Config) -> Str:
    lm, rm = markers(m)
    q, tape = c.state, c.tape
    if isinstance(tape, Empty):
        return (q, lm, rm)
    if isinstance(tape, LeftOf):
        return (q, lm, tape.head_next) + tape.rest + (rm,)
    if isinstance(tape, RightOf):
        return (lm,) + tape.rest + (tape.head_prev, q, rm)
    return (lm,) + tape.left + (q, tape.head) + tape.right + (rm,)


def decode_config(m: TmSpec, s: Str) -> Optional[Config]:
    """Inverse of encode_config; None for strings not matching any shape."""
    lm, rm = markers(m)
    q_set = set(m.states)
    sigma = set(m.tape_alphabet)
    states_at = [i for i, a in enumerate(s) if a in q_set]
    if len(states_at) != 1 or len(s) < 3 or s[-1] != rm:
        return None
    qi = states_at[0]
    q = s[qi]
    body = s[:-1]
    if qi == 0:
        # q ( .. )  : empty tape or left overflow
        if len(body) < 2 or body[1] != lm:
            return None
        rest = body[2:]
        if not rest:
            return Config(q, Empty()) if s == (q, lm, rm) else None
        if any(a not in sigma for a in rest):
            return None
        return Config(q, LeftOf(rest[0], rest[1:]))
    if body[0] != lm:
        return None
    inner = body[1:]
    pos = qi - 1  # position of q within inner
    if pos == len(inner) - 1:
        # ( x a q ) : right overflow
        written = inner[:-1]
        if not written or any(a not in sigma for a in written):
            return None
        return Config(q, RightOf(written[-1], written[:-1]))
    left, after = inner[:pos], inner[pos + 1:]
    if not after or any(a not in sigma for a in left + after):
        return None
    return Config(q, Mid(left, after[0], after[1:]))


def tm_rules(m: TmSpec) -> Tuple[Card, ...]:
    """Compile the transition table into rewrite rules over encoded configurations.

    For each transition the emitted rules cover every tape shape the
    transition can fire in; schemas with a free tape symbol are instantiated
    for every symbol of the alphabet in alphabet order.  Halting states emit
    no rules.
    """
    lm, rm = markers(m)
    sig = m.tape_alphabet
    rules = []

    def rule(x, y):
        rules.append(Card(tuple(x), tuple(y)))

    for q1 in m.states:
        if q1 in m.halting:
            continue
        for read in [None] + list(sig):
            q2, w, move = m.delta[(q1, read)]
            if read is None and w is None:
                if move == "L":
                    rule([q1, lm], [q2, lm])
                    for a in sig:
                        rule([a, q1, rm], [q2, a, rm])
                elif move == "N":
                    rule([q1, lm], [q2, lm])
                    rule([q1, rm], [q2, rm])
                else:
                    rule([q1, lm, rm], [q2, lm, rm])
                    rule([q1, rm], [q2, rm])
                    for a in sig:
                        rule([q1, lm, a], [lm, q2, a])
            elif read is None:
                if move == "L":
                    rule([q1, lm], [q2, lm, w])
                    for a in sig:
                        rule([a, q1, rm], [q2, a, w, rm])
                elif move == "N":
                    rule([q1, lm], [lm, q2, w])
                    rule([q1, rm], [q2, w, rm])
                else:
                    rule([q1, lm], [lm, w, q2])
                    rule([q1, rm], [w, q2, rm])
            elif w is None:
                if move == "L":
                    rule([lm, q1, read], [q2, lm, read])
                    for c in sig:
                        rule([c, q1, read], [q2, c, read])
                elif move == "N":
                    rule([q1, read], [q2, read])
                else:
                    rule([q1, read], [read, q2])
            else:
                if move == "L":
                    rule([lm, q1, read], [q2, lm, w])
                    for c in sig:
                        rule([c, q1, read], [q2, c, w])
                elif move == "N":
                    rule([q1, read], [q2, w])
                else:
                    rule([q1, read], [w, q2])
    return tuple(rules)
