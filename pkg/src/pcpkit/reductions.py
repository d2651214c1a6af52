"""Reduction functions between the problems, with executable witness translators.

Every reduction comes with a forward translator (source witness to target
witness) and a backward translator (target witness to source witness).  The
backward translators are checked decoders: they re-verify each structural
assumption they rely on and raise TranslationError instead of guessing, so a
malformed or foreign witness can never be silently accepted.

Set unions in the constructions become order-preserving concatenations with
duplicates kept, which makes every output deterministic and lets witnesses
refer to cards by index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Tuple, Union

from .core import (
    Card,
    Str,
    Symbol,
    alphabet_of,
    card_parts,
    fresh,
    hash_pre,
    hash_post,
    reverse,
)
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
    check_cfi,
    check_cfp,
    check_mpcp,
    check_pcp,
    check_sr,
    check_srh,
    check_srh_prime,
    replay,
)
from .turing import TmSpec, encode_config, initial_config, tm_rules, tm_run
from .solvers import rewrite_successors


class TranslationError(Exception):
    """A witness violates a translator's precondition or structural assumption."""


@dataclass(frozen=True)
class ReductionOutput:
    instance: object
    # Fresh symbols allocated, index maps, the alphabet ordering used, ...
    trace: Dict = field(default_factory=dict, hash=False)


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise TranslationError(message)


# ---------------------------------------------------------------------------
# SRH -> SR


def reduce_srh_to_sr(src: SrhInstance) -> ReductionOutput:
    sig = alphabet_of(card_parts(src.rules) + [src.start, (src.target,)])
    a0 = src.target
    absorb = tuple(Card((a, a0), (a0,)) for a in sig) + \
        tuple(Card((a0, a), (a0,)) for a in sig)
    inst = SrInstance(src.rules + absorb, src.start, (a0,))
    return ReductionOutput(inst, {"alphabet": sig, "fresh": ()})


def srh_to_sr_witness_fwd(src: SrhInstance, d: SrDerivation, y: Str = None) -> SrDerivation:
    _require(bool(check_srh(src, d)), "derivation rejected by the source checker")
    strings, _ = replay(src.rules, src.start, d)
    if y is None:
        y = strings[-1]
    _require(y == strings[-1], "supplied final string does not match the replay")
    sig = alphabet_of(card_parts(src.rules) + [src.start, (src.target,)])
    a0 = src.target
    n_r, n_s = len(src.rules), len(sig)
    steps = list(d)
    cur = list(y)
    p = cur.index(a0)
    while p > 0:  # absorb the symbol left of the target, one at a time
        a = cur[p - 1]
        steps.append((n_r + sig.index(a), p - 1))
        del cur[p - 1]
        p -= 1
    while len(cur) > 1:  # then absorb everything to the right
        a = cur[1]
        steps.append((n_r + n_s + sig.index(a), 0))
        del cur[1]
    return tuple(steps)


def srh_to_sr_witness_bwd(src: SrhInstance, d: SrDerivation) -> SrDerivation:
    target = reduce_srh_to_sr(src).instance
    _require(bool(check_sr(target, d)), "derivation rejected by the target checker")
    prefix = []
    for ri, cut in d:
        if ri >= len(src.rules):
            break
        prefix.append((ri, cut))
    out = tuple(prefix)
    _require(bool(check_srh(src, out)), "truncated derivation rejected by the source checker")
    return out


# ---------------------------------------------------------------------------
# SR -> MPCP
#
# Card indices in the target (0 = forced first card):
#   0: $ / $ x0 #      (forced first card)
#   1: y0 # $ / $      (closing card)
#   2 .. 2+|R|-1: the source rules
#   2+|R|: # / #
#   3+|R|+i: the copy card for the i-th alphabet symbol


def _sr_alphabet(src: SrInstance) -> Str:
    return alphabet_of(card_parts(src.rules) + [src.start, src.goal])


def reduce_sr_to_mpcp(src: SrInstance) -> ReductionOutput:
    sig = _sr_alphabet(src)
    h = fresh(sig)
    s = fresh(list(sig) + [h])
    d = Card((s,), (s,) + src.start + (h,))
    e = Card(src.goal + (h, s), (s,))
    cards = (e,) + src.rules + (Card((h,), (h,)),) + \
        tuple(Card((a,), (a,)) for a in sig)
    inst = MpcpInstance(first=d, cards=cards)
    return ReductionOutput(inst, {"alphabet": sig, "hash": h, "dollar": s,
                                  "fresh": (h, s)})


def sr_to_mpcp_witness_fwd(src: SrInstance, d: SrDerivation) -> StackWitness:
    _require(bool(check_sr(src, d)), "derivation rejected by the source checker")
    sig = _sr_alphabet(src)
    n_r = len(src.rules)
    copy_at = {a: 3 + n_r + i for i, a in enumerate(sig)}
    hash_idx = 2 + n_r
    strings, _ = replay(src.rules, src.start, d)
    out = []
    for (ri, cut), before in zip(d, strings):
        u = src.rules[ri].top
        out.extend(copy_at[a] for a in before[:cut])
        out.append(2 + ri)
        out.extend(copy_at[a] for a in before[cut + len(u):])
        out.append(hash_idx)
    out.append(1)  # closing card
    return tuple(out)


def sr_to_mpcp_witness_bwd(src: SrInstance, w: StackWitness) -> SrDerivation:
    target = reduce_sr_to_mpcp(src).instance
    _require(bool(check_mpcp(target, w)), "witness rejected by the target checker")
    sig = _sr_alphabet(src)
    n_r = len(src.rules)
    hash_idx = 2 + n_r
    x: Str = tuple(src.start)  # still to be copied on the current line
    y: Str = ()                # already copied prefix of the current line
    steps = []
    closed = False
    for pos, idx in enumerate(w):
        _require(not closed, "cards appear after the closing card")
        if idx == 0:
            raise TranslationError("forced first card reused inside the match")
        if idx == 1:
            _require(x == tuple(src.goal) and y == (),
                     "closing card used before the goal line was reached")
            closed = True
        elif 2 <= idx < hash_idx:
            u, v = src.rules[idx - 2]
            _require(x[:len(u)] == u, f"rule card at position {pos} does not fit the line")
            steps.append((idx - 2, len(y)))
            x = x[len(u):]
            y = y + v
        elif idx == hash_idx:
            _require(x == (), "line separator used before the line was consumed")
            x, y = y, ()
        else:
            a = sig[idx - (3 + n_r)]
            _require(bool(x) and x[0] == a,
                     f"copy card at position {pos} does not fit the line")
            x = x[1:]
            y = y + (a,)
    _require(closed, "match does not end with the closing card")
    out = tuple(steps)
    _require(bool(check_sr(src, out)), "decoded derivation rejected by the source checker")
    return out


# ---------------------------------------------------------------------------
# MPCP -> PCP
#
# Target card indices: 0 = starting card, 1 = closing card, then the hashed
# images of the source cards (forced card first) in source order, skipping
# cards with two empty sides.


def reduce_mpcp_to_pcp(src: MpcpInstance) -> ReductionOutput:
    sig = alphabet_of(card_parts(src.all_cards))
    h = fresh(sig)
    s = fresh(list(sig) + [h])
    d = Card((s,) + hash_pre(h, src.first.top), (s, h) + hash_post(h, src.first.bot))
    e = Card((h, s), (s,))
    hashed = []
    index_map: Dict[int, int] = {}
    for si, card in enumerate(src.all_cards):
        if card.top == () and card.bot == ():
            continue
        index_map[si] = 2 + len(hashed)
        hashed.append(Card(hash_pre(h, card.top), hash_post(h, card.bot)))
    inst = PcpInstance((d, e) + tuple(hashed))
    return ReductionOutput(inst, {"alphabet": sig, "hash": h, "dollar": s,
                                  "index_map": index_map, "fresh": (h, s)})


def mpcp_to_pcp_witness_fwd(src: MpcpInstance, w: StackWitness) -> StackWitness:
    _require(bool(check_mpcp(src, w)), "witness rejected by the source checker")
    index_map = reduce_mpcp_to_pcp(src).trace["index_map"]
    body = [index_map[i] for i in w if i in index_map]
    return (0,) + tuple(body) + (1,)


def mpcp_to_pcp_witness_bwd(src: MpcpInstance, w: StackWitness) -> StackWitness:
    out = reduce_mpcp_to_pcp(src)
    _require(bool(check_pcp(out.instance, w)), "witness rejected by the target checker")
    _require(bool(w) and w[0] == 0, "match does not start with the starting card")
    inverse = {ti: si for si, ti in out.trace["index_map"].items()}
    body = []
    for pos, idx in enumerate(w[1:], start=1):
        if idx == 1:
            _require(pos == len(w) - 1, "closing card occurs before the end of the match")
            break
        _require(idx != 0, "starting card reused inside the match")
        _require(idx in inverse, f"unmappable card index {idx}")
        body.append(inverse[idx])
    else:
        raise TranslationError("match does not end with the closing card")
    result = tuple(body)
    _require(bool(check_mpcp(src, result)), "decoded witness rejected by the source checker")
    return result


# ---------------------------------------------------------------------------
# PCP -> CFP


def reduce_pcp_to_cfp(src: PcpInstance) -> ReductionOutput:
    marker = fresh(alphabet_of(card_parts(src.cards)))
    rules = tuple(Card(x, reverse(y)) for x, y in src.cards)
    inst = CfpInstance(rules, marker)
    return ReductionOutput(inst, {"marker": marker, "fresh": (marker,)})


def pcp_to_cfp_witness_fwd(src: PcpInstance, w: StackWitness) -> StackWitness:
    _require(bool(check_pcp(src, w)), "witness rejected by the source checker")
    target = reduce_pcp_to_cfp(src).instance
    _require(bool(check_cfp(target, w)), "witness rejected by the target checker")
    return tuple(w)


def pcp_to_cfp_witness_bwd(src: PcpInstance, w: StackWitness) -> StackWitness:
    target = reduce_pcp_to_cfp(src).instance
    _require(bool(check_cfp(target, w)), "witness rejected by the target checker")
    _require(bool(check_pcp(src, w)), "witness rejected by the source checker")
    return tuple(w)


# ---------------------------------------------------------------------------
# PCP -> CFI


def reduce_pcp_to_cfi(src: PcpInstance) -> ReductionOutput:
    m = fresh(alphabet_of(card_parts(src.cards)))
    rules1 = tuple(Card(x, x + (m,) + y + (m,)) for x, y in src.cards)
    rules2 = tuple(Card(y, x + (m,) + y + (m,)) for x, y in src.cards)
    inst = CfiInstance(rules1, rules2, m)
    return ReductionOutput(inst, {"marker": m, "fresh": (m,)})


def pcp_to_cfi_witness_fwd(src: PcpInstance, w: StackWitness):
    _require(bool(check_pcp(src, w)), "witness rejected by the source checker")
    return tuple(w), tuple(w)


def pcp_to_cfi_witness_bwd(src: PcpInstance, w1: StackWitness, w2: StackWitness) -> StackWitness:
    target = reduce_pcp_to_cfi(src).instance
    _require(bool(check_cfi(target, w1, w2)), "witness pair rejected by the target checker")
    if tuple(w1) != tuple(w2):
        stack1 = tuple(src.cards[i] for i in w1)
        stack2 = tuple(src.cards[i] for i in w2)
        _require(stack1 == stack2,
                 "the two derivations select distinct card stacks")
    _require(bool(check_pcp(src, w1)), "decoded witness rejected by the source checker")
    return tuple(w1)


# ---------------------------------------------------------------------------
# TM -> SRH'


def reduce_tm_to_srh_prime(m: TmSpec, tape_input: Str) -> ReductionOutput:
    bad = [a for a in tape_input if a not in m.tape_alphabet]
    if bad:
        raise ValueError(f"input symbol {bad[0]} outside the tape alphabet")
    rules = tm_rules(m)
    start = encode_config(m, initial_config(m, tape_input))
    targets = tuple(q for q in m.states if q in m.halting)
    inst = SrhPrimeInstance(rules, start, targets)
    from .turing import markers
    return ReductionOutput(inst, {"fresh": markers(m)})


def tm_witness_fwd(m: TmSpec, tape_input: Str, steps: int) -> SrDerivation:
    run = tm_run(m, tape_input, steps)
    _require(run.halted, f"machine does not halt within {steps} steps")
    from .turing import tm_step
    rules = tm_rules(m)
    c = initial_config(m, tape_input)
    out = []
    for _ in range(run.steps):
        nxt = tm_step(m, c)
        enc, enc_next = encode_config(m, c), encode_config(m, nxt)
        hits = [(ri, cut) for s, ri, cut in rewrite_successors(rules, enc) if s == enc_next]
        _require(len(hits) >= 1, "no rewrite rule matches the machine step")
        out.append(hits[0])
        c = nxt
    return tuple(out)


def tm_witness_bwd(m: TmSpec, tape_input: Str, d: SrDerivation) -> int:
    from .turing import decode_config, tm_step
    rules = tm_rules(m)
    start = encode_config(m, initial_config(m, tape_input))
    strings, reason = replay(rules, start, d)
    _require(reason is None, f"derivation does not replay: {reason}")
    configs = []
    for s in strings:
        c = decode_config(m, s)
        _require(c is not None, "intermediate string is not an encoded configuration")
        configs.append(c)
    for cur, nxt in zip(configs, configs[1:]):
        _require(tm_step(m, cur) == nxt,
                 "rewrite step does not correspond to a machine step")
    _require(configs[-1].state in m.halting, "final configuration is not halting")
    return len(d)


# ---------------------------------------------------------------------------
# SRH' -> SRH


def reduce_srh_prime_to_srh(src: SrhPrimeInstance) -> ReductionOutput:
    h = fresh(alphabet_of(card_parts(src.rules) + [src.start, src.targets]))
    rules = src.rules + tuple(Card((a,), (h,)) for a in src.targets)
    inst = SrhInstance(rules, src.start, h)
    return ReductionOutput(inst, {"fresh": (h,)})


def srh_prime_to_srh_witness_fwd(src: SrhPrimeInstance, d: SrDerivation) -> SrDerivation:
    _require(bool(check_srh_prime(src, d)), "derivation rejected by the source checker")
    strings, _ = replay(src.rules, src.start, d)
    y = strings[-1]
    targets = list(src.targets)
    p = next(i for i, a in enumerate(y) if a in targets)
    rule = len(src.rules) + targets.index(y[p])
    return tuple(d) + ((rule, p),)


def srh_prime_to_srh_witness_bwd(src: SrhPrimeInstance, d: SrDerivation) -> SrDerivation:
    target = reduce_srh_prime_to_srh(src).instance
    _require(bool(check_srh(target, d)), "derivation rejected by the target checker")
    prefix = []
    for ri, cut in d:
        if ri >= len(src.rules):
            break
        prefix.append((ri, cut))
    out = tuple(prefix)
    _require(bool(check_srh_prime(src, out)),
             "truncated derivation rejected by the source checker")
    return out


# ---------------------------------------------------------------------------
# Chained reductions


CHAIN_ORDER = ("tm", "srh'", "srh", "sr", "mpcp", "pcp")
CHAIN_BRANCHES = ("cfp", "cfi")


@dataclass(frozen=True)
class ChainStage:
    src_tag: str
    src: object
    dst_tag: str
    output: ReductionOutput


@dataclass(frozen=True)
class ChainResult:
    source_tag: str
    target_tag: str
    stages: Tuple[ChainStage, ...]

    @property
    def instance(self):
        return self.stages[-1].output.instance


def chain_path(source_tag: str, target_tag: str):
    """The list of tags visited from source to target, or None if unreachable."""
    if target_tag in CHAIN_BRANCHES:
        if source_tag in CHAIN_BRANCHES:
            return None
        prefix = ["pcp"] if source_tag == "pcp" else chain_path(source_tag, "pcp")
        return None if prefix is None else prefix + [target_tag]
    if source_tag not in CHAIN_ORDER or target_tag not in CHAIN_ORDER:
        return None
    i, j = CHAIN_ORDER.index(source_tag), CHAIN_ORDER.index(target_tag)
    if i >= j:
        return None
    return list(CHAIN_ORDER[i:j + 1])


def _apply_edge(src_tag: str, dst_tag: str, src) -> ReductionOutput:
    if (src_tag, dst_tag) == ("tm", "srh'"):
        m, tape_input = src
        return reduce_tm_to_srh_prime(m, tape_input)
    if (src_tag, dst_tag) == ("srh'", "srh"):
        return reduce_srh_prime_to_srh(src)
    if (src_tag, dst_tag) == ("srh", "sr"):
        return reduce_srh_to_sr(src)
    if (src_tag, dst_tag) == ("sr", "mpcp"):
        return reduce_sr_to_mpcp(src)
    if (src_tag, dst_tag) == ("mpcp", "pcp"):
        return reduce_mpcp_to_pcp(src)
    if (src_tag, dst_tag) == ("pcp", "cfp"):
        return reduce_pcp_to_cfp(src)
    if (src_tag, dst_tag) == ("pcp", "cfi"):
        return reduce_pcp_to_cfi(src)
    raise ValueError(f"no reduction from {src_tag} to {dst_tag}")


def chain(source, source_tag: str, target_tag: str) -> ChainResult:
    """Compose single-step reductions from source_tag to target_tag.

    For the 'tm' source, `source` is a (TmSpec, input string) pair.
    """
    path = chain_path(source_tag, target_tag)
    if path is None:
        raise ValueError(f"cannot reach {target_tag} from {source_tag}")
    stages = []
    cur = source
    for a, b in zip(path, path[1:]):
        out = _apply_edge(a, b, cur)
        stages.append(ChainStage(a, cur, b, out))
        cur = out.instance
    return ChainResult(source_tag, target_tag, tuple(stages))


def _edge_witness_fwd(stage: ChainStage, witness):
    pair = (stage.src_tag, stage.dst_tag)
    if pair == ("tm", "srh'"):
        m, tape_input = stage.src
        return tm_witness_fwd(m, tape_input, witness)
    if pair == ("srh'", "srh"):
        return srh_prime_to_srh_witness_fwd(stage.src, witness)
    if pair == ("srh", "sr"):
        return srh_to_sr_witness_fwd(stage.src, witness)
    if pair == ("sr", "mpcp"):
        return sr_to_mpcp_witness_fwd(stage.src, witness)
    if pair == ("mpcp", "pcp"):
        return mpcp_to_pcp_witness_fwd(stage.src, witness)
    if pair == ("pcp", "cfp"):
        return pcp_to_cfp_witness_fwd(stage.src, witness)
    if pair == ("pcp", "cfi"):
        return pcp_to_cfi_witness_fwd(stage.src, witness)
    raise ValueError(f"no translator for {pair}")


def _edge_witness_bwd(stage: ChainStage, witness):
    pair = (stage.src_tag, stage.dst_tag)
    if pair == ("tm", "srh'"):
        m, tape_input = stage.src
        return tm_witness_bwd(m, tape_input, witness)
    if pair == ("srh'", "srh"):
        return srh_prime_to_srh_witness_bwd(stage.src, witness)
    if pair == ("srh", "sr"):
        return srh_to_sr_witness_bwd(stage.src, witness)
    if pair == ("sr", "mpcp"):
        return sr_to_mpcp_witness_bwd(stage.src, witness)
    if pair == ("mpcp", "pcp"):
        return mpcp_to_pcp_witness_bwd(stage.src, witness)
    if pair == ("pcp", "cfp"):
        return pcp_to_cfp_witness_bwd(stage.src, witness)
    if pair == ("pcp", "cfi"):
        return pcp_to_cfi_witness_bwd(stage.src, witness[0], witness[1])
    raise ValueError(f"no translator for {pair}")


def chain_witness_fwd(result: ChainResult, witness):
    """Translate a source witness along the whole chain to a target witness."""
    for stage in result.stages:
        witness = _edge_witness_fwd(stage, witness)
    return witness


def chain_witness_bwd(result: ChainResult, witness):
    """Translate a target witness back along the whole chain to a source witness."""
    for stage in reversed(result.stages):
        witness = _edge_witness_bwd(stage, witness)
    return witness
