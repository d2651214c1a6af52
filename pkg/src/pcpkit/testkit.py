"""Seeded generators and reference oracles for the property-test suite.

The PRNG is splitmix64, fixed here so that a port in any language can
regenerate the exact same corpora from the same seeds.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import List, Tuple

from .core import Card, Str, trace_bot, trace_top
from .problems import (
    MpcpInstance,
    PcpInstance,
    SrhInstance,
    SrhPrimeInstance,
    SrInstance,
    StackWitness,
    check_pcp,
)
from .turing import MOVES, TmSpec

MASK64 = (1 << 64) - 1


class SplitMix64:
    """splitmix64: x += 0x9E3779B97F4A7C15; z = x; z = (z ^ z>>30) * 0xBF58476D1CE4E5B9;
    z = (z ^ z>>27) * 0x94D049BB133111EB; return z ^ z>>31."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform-ish integer in [0, n)."""
        return self.next_u64() % n

    def choice(self, seq):
        return seq[self.below(len(seq))]


@dataclass(frozen=True)
class GenConfig:
    seed: int
    alphabet_size: int = 2
    max_cards: int = 3
    max_side_len: int = 2
    max_states: int = 3


def _gen_str(rng: SplitMix64, alphabet_size: int, max_len: int) -> Str:
    return tuple(rng.below(alphabet_size) for _ in range(rng.below(max_len + 1)))


def _gen_card(rng: SplitMix64, c: GenConfig) -> Card:
    return Card(_gen_str(rng, c.alphabet_size, c.max_side_len),
                _gen_str(rng, c.alphabet_size, c.max_side_len))


def gen_pcp(c: GenConfig) -> PcpInstance:
    rng = SplitMix64(c.seed)
    n = 1 + rng.below(c.max_cards)
    return PcpInstance(tuple(_gen_card(rng, c) for _ in range(n)))


def gen_srs(c: GenConfig) -> SrInstance:
    rng = SplitMix64(c.seed)
    n = 1 + rng.below(c.max_cards)
    rules = tuple(_gen_card(rng, c) for _ in range(n))
    start = _gen_str(rng, c.alphabet_size, c.max_side_len + 1)
    goal = _gen_str(rng, c.alphabet_size, c.max_side_len + 1)
    return SrInstance(rules, start, goal)


def gen_srh(c: GenConfig) -> SrhInstance:
    rng = SplitMix64(c.seed)
    n = 1 + rng.below(c.max_cards)
    rules = tuple(_gen_card(rng, c) for _ in range(n))
    start = _gen_str(rng, c.alphabet_size, c.max_side_len + 1)
    target = rng.below(c.alphabet_size)
    return SrhInstance(rules, start, target)


def gen_srh_prime(c: GenConfig) -> SrhPrimeInstance:
    rng = SplitMix64(c.seed)
    n = 1 + rng.below(c.max_cards)
    rules = tuple(_gen_card(rng, c) for _ in range(n))
    start = _gen_str(rng, c.alphabet_size, c.max_side_len + 1)
    targets = _gen_str(rng, c.alphabet_size, c.max_side_len)
    return SrhPrimeInstance(rules, start, targets)


def gen_mpcp(c: GenConfig) -> MpcpInstance:
    rng = SplitMix64(c.seed)
    first = _gen_card(rng, c)
    n = rng.below(c.max_cards + 1)
    return MpcpInstance(first, tuple(_gen_card(rng, c) for _ in range(n)))


def gen_pcp_planted(c: GenConfig) -> Tuple[PcpInstance, StackWitness]:
    """A satisfiable instance: a random matching stack is built first, then its
    distinct cards are shuffled into the card list; the plant is returned as a
    witness over that list."""
    rng = SplitMix64(c.seed)
    # Random match: cut one random string into top-chunks and bottom-chunks.
    s = tuple(rng.below(c.alphabet_size)
              for _ in range(1 + rng.below(3 * c.max_side_len)))

    def chunks(string):
        out = []
        i = 0
        while i < len(string):
            k = 1 + rng.below(min(c.max_side_len, len(string) - i))
            out.append(string[i:i + k])
            i += k
        return out

    tops, bots = chunks(s), chunks(s)
    while len(tops) < len(bots):
        tops.append(())
    while len(bots) < len(tops):
        bots.append(())
    stack = [Card(t, b) for t, b in zip(tops, bots)]
    distinct = list(dict.fromkeys(stack))
    # Fisher-Yates shuffle driven by the same generator.
    for i in range(len(distinct) - 1, 0, -1):
        j = rng.below(i + 1)
        distinct[i], distinct[j] = distinct[j], distinct[i]
    inst = PcpInstance(tuple(distinct))
    witness = tuple(distinct.index(card) for card in stack)
    assert check_pcp(inst, witness)
    return inst, witness


def gen_tm(c: GenConfig) -> Tuple[TmSpec, Str]:
    """A machine with total transitions on non-halting states, plus an input.

    Tape symbols are 0..k-1 and state symbols k..k+m-1, so the two alphabets
    are disjoint by construction.  The halting set is nonempty with
    probability one half.
    """
    rng = SplitMix64(c.seed)
    k = max(1, c.alphabet_size)
    sig = tuple(range(k))
    m = 1 + rng.below(c.max_states)
    states = tuple(range(k, k + m))
    start = states[rng.below(m)]
    if rng.below(2) == 0:
        halting = frozenset()
    else:
        halting = frozenset(q for q in states if rng.below(2) == 0)
        if not halting:
            halting = frozenset({states[rng.below(m)]})
    delta = {}
    reads = [None] + list(sig)
    writes = [None] + list(sig)
    for q in states:
        if q in halting:
            continue
        for read in reads:
            delta[(q, read)] = (states[rng.below(m)], rng.choice(writes),
                               rng.choice(MOVES))
    tape_input = tuple(rng.below(k) for _ in range(rng.below(c.max_side_len + 1)))
    return TmSpec(sig, states, start, halting, delta), tape_input


def oracle_pcp(inst: PcpInstance, k: int) -> List[StackWitness]:
    """All matching index sequences of length 1..k, by exhaustive enumeration."""
    assert len(inst.cards) <= 4 and k <= 5, "oracle is desk-scale only"
    out = []
    n = len(inst.cards)
    for length in range(1, k + 1):
        for seq in product(range(n), repeat=length):
            stack = tuple(inst.cards[i] for i in seq)
            if trace_top(stack) == trace_bot(stack):
                out.append(seq)
    return out


def solve_sr_reference(inst: SrInstance, max_steps: int, max_len: int):
    """Plain depth-bounded enumeration without a visited set; None if no
    derivation of length <= max_steps exists within the length bound."""
    from .solvers import rewrite_successors

    goal = tuple(inst.goal)

    def dfs(cur, remaining, acc):
        if cur == goal:
            return tuple(acc)
        if remaining == 0:
            return None
        for nxt, ri, cut in rewrite_successors(inst.rules, cur):
            if len(nxt) > max_len:
                continue
            acc.append((ri, cut))
            hit = dfs(nxt, remaining - 1, acc)
            if hit is not None:
                return hit
            acc.pop()
        return None

    return dfs(tuple(inst.start), max_steps, [])
