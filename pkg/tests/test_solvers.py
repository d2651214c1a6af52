"""Bounded brute-force solvers, cross-checked against reference enumeration."""

from pcpkit.core import Card
from pcpkit.problems import (
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
from pcpkit.solvers import (
    Found,
    NotFoundWithinBound,
    SearchBound,
    rewrite_successors,
    solve_cfi,
    solve_cfp,
    solve_mpcp,
    solve_pcp,
    solve_sr,
    solve_srh,
    solve_srh_prime,
)
from pcpkit.testkit import (
    GenConfig,
    gen_pcp,
    gen_pcp_planted,
    gen_srs,
    oracle_pcp,
    solve_sr_reference,
)

A, B = 0, 1
CLASSIC = PcpInstance((Card((A,), ()), Card((B,), (A,)), Card((), (B, B))))


def test_rewrite_successors_order():
    rules = (Card((A,), (B,)), Card((), (B,)))
    out = rewrite_successors(rules, (A,))
    # Enumerated by increasing cut, then rule index.
    assert out == [
        ((B,), 0, 0),
        ((B, A), 1, 0),
        ((A, B), 1, 1),
    ]


def test_solve_pcp_classic():
    out = solve_pcp(CLASSIC, SearchBound(max_cards=5))
    assert isinstance(out, Found)
    assert check_pcp(CLASSIC, out.witness)
    assert len(out.witness) == 5
    # Lexicographically smallest match of minimal length.
    assert out.witness == (0, 0, 1, 1, 2)


def test_solve_pcp_not_found():
    inst = PcpInstance((Card((A,), (B,)),))
    out = solve_pcp(inst, SearchBound(max_cards=6))
    assert isinstance(out, NotFoundWithinBound)


def test_solve_pcp_matches_oracle_minimum():
    for seed in range(80):
        inst = gen_pcp(GenConfig(seed=seed, max_cards=3))
        if len(inst.cards) > 4:
            continue
        sols = oracle_pcp(inst, 4)
        out = solve_pcp(inst, SearchBound(max_cards=4, max_len=16))
        if sols:
            assert isinstance(out, Found)
            assert out.witness == min(sols, key=lambda w: (len(w), w))
        else:
            assert isinstance(out, NotFoundWithinBound)


def test_solve_pcp_planted():
    for seed in range(40):
        inst, _ = gen_pcp_planted(GenConfig(seed=seed))
        out = solve_pcp(inst, SearchBound(max_cards=12, max_len=24))
        assert isinstance(out, Found)
        assert check_pcp(inst, out.witness)


def test_solve_mpcp():
    inst = MpcpInstance(first=Card((A,), (A, A)), cards=(Card((A,), ()),))
    out = solve_mpcp(inst, SearchBound(max_cards=4))
    assert isinstance(out, Found)
    assert out.witness == (1,)
    balanced = MpcpInstance(first=Card((A, B), (A, B)), cards=())
    assert solve_mpcp(balanced, SearchBound()).witness == ()
    hopeless = MpcpInstance(first=Card((A,), (B,)), cards=())
    assert isinstance(solve_mpcp(hopeless, SearchBound(max_cards=4)),
                      NotFoundWithinBound)


def test_solve_sr():
    inst = SrInstance((Card((A,), (B,)),), (A, A), (B, B))
    out = solve_sr(inst, SearchBound())
    assert isinstance(out, Found)
    assert check_sr(inst, out.witness)
    assert len(out.witness) == 2
    stuck = SrInstance((), (A,), (B,))
    assert isinstance(solve_sr(stuck, SearchBound()), NotFoundWithinBound)


def test_solve_sr_matches_reference_depth():
    # BFS returns a shortest derivation; the reference enumerator bounds depth.
    for seed in range(60):
        inst = gen_srs(GenConfig(seed=seed))
        out = solve_sr(inst, SearchBound(max_steps=4, max_len=8))
        ref = solve_sr_reference(inst, 4, 8)
        if isinstance(out, Found):
            assert ref is not None
            assert check_sr(inst, out.witness)
            assert len(out.witness) <= len(ref)
        elif ref is not None:
            # The visited set may prune a longer route the reference finds,
            # but never an entire reachable goal.
            assert check_sr(inst, ref)
            assert False, "BFS missed a goal the reference reached"


def test_solve_srh_and_prime():
    inst = SrhInstance((Card((A,), (B,)),), (A,), B)
    out = solve_srh(inst, SearchBound())
    assert isinstance(out, Found) and check_srh(inst, out.witness)
    assert solve_srh(SrhInstance((), (A,), B), SearchBound()) == \
        NotFoundWithinBound(0)
    pinst = SrhPrimeInstance((Card((A,), (B,)),), (A,), (B,))
    pout = solve_srh_prime(pinst, SearchBound())
    assert isinstance(pout, Found) and check_srh_prime(pinst, pout.witness)
    empty_targets = SrhPrimeInstance((Card((A,), (B,)),), (A,), ())
    assert isinstance(solve_srh_prime(empty_targets, SearchBound(max_steps=3)),
                      NotFoundWithinBound)


def test_solve_cfp():
    inst = CfpInstance((Card((A,), (B,)), Card((A,), (A,))), 7)
    out = solve_cfp(inst, SearchBound(max_cards=3))
    assert isinstance(out, Found)
    assert out.witness == (1,)
    assert check_cfp(inst, out.witness)
    assert isinstance(solve_cfp(CfpInstance((Card((A,), (B,)),), 7),
                                SearchBound(max_cards=3)), NotFoundWithinBound)


def test_solve_cfi_joint():
    inst = CfiInstance((Card((A,), (B,)),), (Card((A,), (B,)),), 7)
    out = solve_cfi(inst, SearchBound(max_cards=3))
    assert isinstance(out, Found)
    assert check_cfi(inst, *out.witness)


def test_solve_cfi_paired_fast_path():
    from pcpkit.reductions import reduce_pcp_to_cfi

    inst = reduce_pcp_to_cfi(CLASSIC).instance
    out = solve_cfi(inst, SearchBound(max_cards=5))
    assert isinstance(out, Found)
    w1, w2 = out.witness
    assert w1 == w2 == (0, 0, 1, 1, 2)
    assert check_cfi(inst, w1, w2)
