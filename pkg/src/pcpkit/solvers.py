"""Bounded brute-force search for every problem.

Solvers return a checked witness or "not found within bound"; they never claim
unsatisfiability, because none of these problems is decidable.  Exploration
order is deterministic so that golden tests are byte-stable:

* rewriting successors are enumerated by increasing cut, then rule index;
* SR-family search is breadth-first with a visited set;
* PCP/MPCP search is iterative-deepening DFS over the single-sided overhang,
  trying card indices in increasing order, so the witness returned is the
  lexicographically smallest one of minimal length;
* CFP enumerates index sequences in length-then-lex order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Generic, Optional, Sequence, Tuple, TypeVar, Union

from .core import Card, Str, is_palindrome, sigma
from .problems import (
    CfiInstance,
    CfpInstance,
    MpcpInstance,
    PcpInstance,
    SrDerivation,
    SrhInstance,
    SrhPrimeInstance,
    SrInstance,
    StackWitness,
)

W = TypeVar("W")


@dataclass(frozen=True)
class SearchBound:
    max_steps: int = 50
    max_len: int = 50
    max_cards: int = 10


@dataclass(frozen=True)
class Found(Generic[W]):
    witness: W
    explored: int = 0


@dataclass(frozen=True)
class NotFoundWithinBound:
    explored: int = 0


SearchOutcome = Union[Found, NotFoundWithinBound]


def rewrite_successors(rules: Sequence[Card], x: Str):
    """All strings reachable in one rewrite step, with the producing rule and cut."""
    out = []
    for cut in range(len(x) + 1):
        for ri, (lhs, rhs) in enumerate(rules):
            if x[cut:cut + len(lhs)] == lhs:
                out.append((x[:cut] + rhs + x[cut + len(lhs):], ri, cut))
    return out


def _bfs(rules, start, is_goal, bound: SearchBound):
    """Breadth-first rewrite search; returns Found(derivation) or NotFoundWithinBound."""
    start = tuple(start)
    explored = 0
    if is_goal(start):
        return Found((), explored)
    # parent[s] = (previous string, rule index, cut)
    parent = {start: None}
    frontier = deque([(start, 0)])
    while frontier:
        cur, depth = frontier.popleft()
        if depth >= bound.max_steps:
            continue
        for nxt, ri, cut in rewrite_successors(rules, cur):
            if nxt in parent or len(nxt) > bound.max_len:
                continue
            parent[nxt] = (cur, ri, cut)
            explored += 1
            if is_goal(nxt):
                steps = []
                node = nxt
                while parent[node] is not None:
                    prev, ri2, cut2 = parent[node]
                    steps.append((ri2, cut2))
                    node = prev
                steps.reverse()
                return Found(tuple(steps), explored)
            frontier.append((nxt, depth + 1))
    return NotFoundWithinBound(explored)


def solve_sr(inst: SrInstance, bound: SearchBound) -> SearchOutcome:
    goal = tuple(inst.goal)
    return _bfs(inst.rules, inst.start, lambda s: s == goal, bound)


def solve_srh(inst: SrhInstance, bound: SearchBound) -> SearchOutcome:
    return _bfs(inst.rules, inst.start, lambda s: inst.target in s, bound)


def solve_srh_prime(inst: SrhPrimeInstance, bound: SearchBound) -> SearchOutcome:
    targets = set(inst.targets)
    return _bfs(inst.rules, inst.start, lambda s: bool(targets & set(s)), bound)


def _append_overhang(overhang, card: Card):
    """Extend a (direction, string) overhang with a card.

    direction +1 means the top trace is ahead by `string`, -1 the bottom
    trace.  Returns the new overhang or None when the card is inconsistent.
    """
    direc, s = overhang
    if direc >= 0:
        top, bot = s + card.top, card.bot
    else:
        top, bot = card.top, s + card.bot
    if top[:len(bot)] == bot[:len(top)]:
        if len(top) >= len(bot):
            return (+1, top[len(bot):])
        return (-1, bot[len(top):])
    return None


def _overhang_dfs(cards: Sequence[Card], initial, initially_solved: bool,
                  bound: SearchBound) -> SearchOutcome:
    """IDDFS over overhang states, deepening up to bound.max_cards.

    `initial` is the overhang before any searched card (empty for plain PCP,
    the forced-card overhang for MPCP).  If `initially_solved`, the empty
    index sequence is already a solution and is returned immediately.
    """
    explored = 0
    if initially_solved:
        return Found((), explored)
    if initial is None:
        return NotFoundWithinBound(explored)
    n = len(cards)
    for limit in range(1, bound.max_cards + 1):
        # failed[state] = largest remaining depth fully explored without success
        failed: dict = {}
        path: list = []

        def dfs(state, remaining) -> bool:
            nonlocal explored
            if failed.get(state, -1) >= remaining:
                return False
            for i in range(n):
                nxt = _append_overhang(state, cards[i])
                if nxt is None or len(nxt[1]) > bound.max_len:
                    continue
                explored += 1
                path.append(i)
                if not nxt[1]:
                    return True
                if remaining > 1 and dfs(nxt, remaining - 1):
                    return True
                path.pop()
            failed[state] = max(failed.get(state, -1), remaining)
            return False

        if dfs(initial, limit):
            return Found(tuple(path), explored)
    return NotFoundWithinBound(explored)


def solve_pcp(inst: PcpInstance, bound: SearchBound) -> SearchOutcome:
    return _overhang_dfs(inst.cards, (+1, ()), False, bound)


def solve_mpcp(inst: MpcpInstance, bound: SearchBound) -> SearchOutcome:
    initial = _append_overhang((+1, ()), inst.first)
    solved = initial is not None and not initial[1]
    return _overhang_dfs(inst.all_cards, initial, solved, bound)


def solve_cfp(inst: CfpInstance, bound: SearchBound) -> SearchOutcome:
    explored = 0
    n = len(inst.rules)
    for length in range(1, bound.max_cards + 1):
        for seq in product(range(n), repeat=length):
            explored += 1
            stack = tuple(inst.rules[i] for i in seq)
            if is_palindrome(sigma(inst.marker, stack)):
                return Found(seq, explored)
    return NotFoundWithinBound(explored)


def _as_paired_pcp(inst: CfiInstance) -> Optional[PcpInstance]:
    """Recognize grammar pairs of the shape x/x#y#, y/x#y# over a shared card list.

    When both rule lists are the two standard grammar images of a single PCP
    card list (marker absent from the underlying cards), the intersection
    problem has a solution iff that PCP instance does, with identical index
    sequences; searching the PCP instance is exponentially cheaper than joint
    enumeration.
    """
    if len(inst.rules1) != len(inst.rules2):
        return None
    m = inst.marker
    cards = []
    for (x, flat1), (y, flat2) in zip(inst.rules1, inst.rules2):
        if flat1 != flat2 or m in x or m in y:
            return None
        if flat1 != x + (m,) + y + (m,):
            return None
        cards.append(Card(x, y))
    return PcpInstance(tuple(cards))


def solve_cfi(inst: CfiInstance, bound: SearchBound) -> SearchOutcome:
    paired = _as_paired_pcp(inst)
    if paired is not None:
        outcome = solve_pcp(paired, bound)
        if isinstance(outcome, Found):
            return Found((outcome.witness, outcome.witness), outcome.explored)
        return outcome
    explored = 0
    n1, n2 = len(inst.rules1), len(inst.rules2)
    pairs = sorted(
        ((l1, l2) for l1 in range(1, bound.max_cards + 1)
         for l2 in range(1, bound.max_cards + 1)),
        key=lambda p: (p[0] + p[1], p[0]),
    )
    for l1, l2 in pairs:
        for seq1 in product(range(n1), repeat=l1):
            s1 = sigma(inst.marker, tuple(inst.rules1[i] for i in seq1))
            for seq2 in product(range(n2), repeat=l2):
                explored += 1
                s2 = sigma(inst.marker, tuple(inst.rules2[i] for i in seq2))
                if s1 == s2:
                    return Found((seq1, seq2), explored)
    return NotFoundWithinBound(explored)
