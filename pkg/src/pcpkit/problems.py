"""Problem instances and exact certificate checkers.

The checkers are the ground truth for everything else in the package: solvers
and witness translators are validated against them.  Each checker returns a
CheckResult carrying a boolean verdict plus a human-readable reason for the
first failure; only the boolean is semantically meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .core import Card, Str, Symbol, is_palindrome, sigma, trace_bot, trace_top

StackWitness = Tuple[int, ...]
SrStep = Tuple[int, int]  # (rule index, cut position)
SrDerivation = Tuple[SrStep, ...]


@dataclass(frozen=True)
class SrInstance:
    rules: Tuple[Card, ...]
    start: Str
    goal: Str


@dataclass(frozen=True)
class SrhInstance:
    rules: Tuple[Card, ...]
    start: Str
    target: Symbol


@dataclass(frozen=True)
class SrhPrimeInstance:
    rules: Tuple[Card, ...]
    start: Str
    targets: Str


@dataclass(frozen=True)
class PcpInstance:
    cards: Tuple[Card, ...]


@dataclass(frozen=True)
class MpcpInstance:
    # `first` is the forced starting card; it is not required to be in `cards`.
    # Witness index 0 refers to `first`, index i+1 to cards[i].
    first: Card
    cards: Tuple[Card, ...]

    def card_at(self, i: int) -> Card:
        return self.first if i == 0 else self.cards[i - 1]

    @property
    def all_cards(self) -> Tuple[Card, ...]:
        return (self.first,) + self.cards


@dataclass(frozen=True)
class CfpInstance:
    rules: Tuple[Card, ...]
    marker: Symbol


@dataclass(frozen=True)
class CfiInstance:
    rules1: Tuple[Card, ...]
    rules2: Tuple[Card, ...]
    marker: Symbol


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    reason: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


ACCEPT = CheckResult(True)


def _reject(reason: str) -> CheckResult:
    return CheckResult(False, reason)


def _select(cards: Sequence[Card], indices: Sequence[int]):
    """The stack selected by an index sequence, or None on an out-of-range index."""
    n = len(cards)
    out = []
    for pos, i in enumerate(indices):
        if not 0 <= i < n:
            return None, pos
    return tuple(cards[i] for i in indices), None


def check_pcp(inst: PcpInstance, w: Sequence[int]) -> CheckResult:
    if not w:
        return _reject("witness is empty; a match must be nonempty")
    stack, bad = _select(inst.cards, w)
    if stack is None:
        return _reject(f"index out of range at position {bad}")
    if trace_top(stack) != trace_bot(stack):
        return _reject("upper and lower traces differ")
    return ACCEPT


def check_mpcp(inst: MpcpInstance, w: Sequence[int]) -> CheckResult:
    stack, bad = _select(inst.all_cards, w)
    if stack is None:
        return _reject(f"index out of range at position {bad}")
    top = inst.first.top + trace_top(stack)
    bot = inst.first.bot + trace_bot(stack)
    if top != bot:
        return _reject("traces differ after the forced first card")
    return ACCEPT


def replay(rules: Sequence[Card], start: Str, steps: Sequence[SrStep]):
    """Replay rewrite steps from `start`.

    Returns (strings, None) with the full sequence of intermediate strings
    (including `start`) on success, or (prefix, reason) where `reason` names
    the first illegal step.
    """
    cur = tuple(start)
    strings = [cur]
    for pos, (ri, cut) in enumerate(steps):
        if not 0 <= ri < len(rules):
            return strings, f"step {pos}: rule index {ri} out of range"
        lhs, rhs = rules[ri]
        if not 0 <= cut <= len(cur):
            return strings, f"step {pos}: cut {cut} out of range"
        if cur[cut:cut + len(lhs)] != lhs:
            return strings, f"step {pos}: rule {ri} does not apply at cut {cut}"
        cur = cur[:cut] + rhs + cur[cut + len(lhs):]
        strings.append(cur)
    return strings, None


def check_sr(inst: SrInstance, d: Sequence[SrStep]) -> CheckResult:
    strings, reason = replay(inst.rules, inst.start, d)
    if reason is not None:
        return _reject(reason)
    if strings[-1] != inst.goal:
        return _reject("final string does not equal the goal")
    return ACCEPT


def check_srh(inst: SrhInstance, d: Sequence[SrStep]) -> CheckResult:
    strings, reason = replay(inst.rules, inst.start, d)
    if reason is not None:
        return _reject(reason)
    if inst.target not in strings[-1]:
        return _reject("final string does not contain the target symbol")
    return ACCEPT


def check_srh_prime(inst: SrhPrimeInstance, d: Sequence[SrStep]) -> CheckResult:
    strings, reason = replay(inst.rules, inst.start, d)
    if reason is not None:
        return _reject(reason)
    if not any(a in strings[-1] for a in inst.targets):
        return _reject("final string shares no symbol with the targets")
    return ACCEPT


def check_cfp(inst: CfpInstance, w: Sequence[int]) -> CheckResult:
    if not w:
        return _reject("witness is empty; a derivation must be nonempty")
    stack, bad = _select(inst.rules, w)
    if stack is None:
        return _reject(f"index out of range at position {bad}")
    if not is_palindrome(sigma(inst.marker, stack)):
        return _reject("projected string is not a palindrome")
    return ACCEPT


def check_cfi(inst: CfiInstance, w1: Sequence[int], w2: Sequence[int]) -> CheckResult:
    if not w1 or not w2:
        return _reject("both witnesses must be nonempty")
    stack1, bad1 = _select(inst.rules1, w1)
    if stack1 is None:
        return _reject(f"grammar 1: index out of range at position {bad1}")
    stack2, bad2 = _select(inst.rules2, w2)
    if stack2 is None:
        return _reject(f"grammar 2: index out of range at position {bad2}")
    if sigma(inst.marker, stack1) != sigma(inst.marker, stack2):
        return _reject("projections differ")
    return ACCEPT
