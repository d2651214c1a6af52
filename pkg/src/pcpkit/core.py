"""Symbols, strings, cards and the string-level operations shared by every problem.

Symbols are plain natural numbers; a string is a tuple of symbols. All
operations here are pure and total, so values can be shared freely across
threads.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple, Sequence, Tuple

Symbol = int
Str = Tuple[Symbol, ...]

EPSILON: Str = ()


class Card(NamedTuple):
    """A pair of strings: top/bottom of a PCP card, or left/right of a rewrite rule."""

    top: Str
    bot: Str


Stack = Tuple[Card, ...]


def trace_top(stack: Sequence[Card]) -> Str:
    """Concatenation of the top strings of a stack, in order."""
    out: list = []
    for card in stack:
        out.extend(card.top)
    return tuple(out)


def trace_bot(stack: Sequence[Card]) -> Str:
    """Concatenation of the bottom strings of a stack, in order."""
    out: list = []
    for card in stack:
        out.extend(card.bot)
    return tuple(out)


def reverse(x: Sequence[Symbol]) -> Str:
    return tuple(x[::-1])


def is_palindrome(x: Sequence[Symbol]) -> bool:
    return tuple(x) == reverse(x)


def sigma(a: Symbol, stack: Sequence[Card]) -> Str:
    """Flatten a stack of grammar rules around the marker symbol a.

    The empty stack flattens to the one-symbol string (a,); a rule x/y wraps
    the flattening of the remaining stack as x .. y.  The innermost rule is
    the last one of the stack.
    """
    acc: Str = (a,)
    for x, y in reversed(stack):
        acc = x + acc + y
    return acc


def fresh(symbols: Iterable[Symbol]) -> Symbol:
    """A symbol strictly greater than every member of the input, hence absent."""
    return sum(1 + s for s in symbols)


def hash_pre(h: Symbol, x: Sequence[Symbol]) -> Str:
    """Insert h before every symbol of x."""
    out: list = []
    for a in x:
        out.append(h)
        out.append(a)
    return tuple(out)


def hash_post(h: Symbol, x: Sequence[Symbol]) -> Str:
    """Insert h after every symbol of x."""
    out: list = []
    for a in x:
        out.append(a)
        out.append(h)
    return tuple(out)


def alphabet_of(parts: Iterable[Sequence[Symbol]]) -> Str:
    """All symbols occurring in the given strings, deduplicated in first-occurrence order."""
    seen = set()
    out: list = []
    for part in parts:
        for a in part:
            if a not in seen:
                seen.add(a)
                out.append(a)
    return tuple(out)


def card_parts(cards: Sequence[Card]) -> list:
    """The sides of a card list as a flat list of strings, top before bottom."""
    parts: list = []
    for card in cards:
        parts.append(card.top)
        parts.append(card.bot)
    return parts
