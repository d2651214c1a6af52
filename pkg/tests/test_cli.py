"""Command-line front end: file formats, round-trips, exit codes."""

import json

import pytest

from pcpkit.cli import (
    InternTable,
    ParseError,
    main,
    parse_instance,
    parse_witness,
    print_instance,
    print_witness,
)
from pcpkit.problems import MpcpInstance, PcpInstance, SrInstance

PCP_TEXT = """\
; the classic three-card instance
%problem pcp
a / -
b / a
- / b b
"""

SR_TEXT = """\
%problem sr
%rules
b c / a
a a / b
%from a b c
%to b
"""

TM_TEXT = """\
%problem tm
%states q0 q1
%tape a b
%start q0
%halt q1
q0 _ -> q1 a N
q0 a -> q1 a N
q0 b -> q1 a N
%input -
"""


def test_parse_pcp():
    tag, inst, table = parse_instance(PCP_TEXT)
    assert tag == "pcp"
    a, b = table.by_name["a"], table.by_name["b"]
    assert inst == PcpInstance(((  (a,), ()), ((b,), (a,)), ((), (b, b))))


def test_parse_sr():
    tag, inst, table = parse_instance(SR_TEXT)
    assert tag == "sr"
    assert isinstance(inst, SrInstance)
    assert len(inst.rules) == 2
    assert len(inst.start) == 3 and len(inst.goal) == 1


def test_parse_tm():
    tag, (spec, tape_input), table = parse_instance(TM_TEXT)
    assert tag == "tm"
    assert tape_input == ()
    q0 = table.by_name["q0"]
    assert spec.start == q0
    assert len(spec.delta) == 3


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_instance("")
    with pytest.raises(ParseError):
        parse_instance("%problem nope\n")
    with pytest.raises(ParseError):
        parse_instance("%problem sr\n%rules\na / b\n%rules\n%from a\n%to b\n")
    with pytest.raises(ParseError):
        parse_instance("%problem sr\n%rules\na / b\n%from a\n")  # missing %to
    with pytest.raises(ParseError):
        parse_instance("%problem pcp\na / b\n%marker m\n")  # foreign section
    with pytest.raises(ParseError):
        parse_instance("%problem pcp\na b\n")  # no slash
    with pytest.raises(ParseError):
        parse_instance("%problem pcp\n/ / a\n")  # reserved token


def test_instance_roundtrip():
    for text in (PCP_TEXT, SR_TEXT, TM_TEXT):
        tag, inst, table = parse_instance(text)
        rendered = print_instance(tag, inst, table)
        tag2, inst2, _ = parse_instance(rendered)
        assert (tag2, inst2) == (tag, inst)
        # Printing is idempotent up to comments and spacing.
        _, inst3, table3 = parse_instance(rendered)
        assert print_instance(tag2, inst3, table3) == rendered


def test_witness_roundtrip():
    cases = [
        ("pcp", (2, 1, 1, 0, 0)),
        ("mpcp", ()),
        ("cfp", (0, 1)),
        ("cfi", ((0, 1), (1,))),
        ("sr", ((0, 1), (1, 0))),
        ("srh'", ()),
        ("tm", 7),
    ]
    for tag, payload in cases:
        text = print_witness(tag, payload)
        assert parse_witness(text) == (tag, payload)


def test_parse_witness_errors():
    with pytest.raises(ParseError):
        parse_witness("")
    with pytest.raises(ParseError):
        parse_witness("%witness pcp\nsteps:\n")
    with pytest.raises(ParseError):
        parse_witness("%witness pcp\nindices: -1\n")
    with pytest.raises(ParseError):
        parse_witness("%witness sr\nsteps:\n0 1 2\n")


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_cmd_check(tmp_path, capsys):
    inst = write(tmp_path / "p.pcp", PCP_TEXT)
    good = write(tmp_path / "w.txt", "%witness pcp\nindices: 2 1 1 0 0\n")
    bad = write(tmp_path / "b.txt", "%witness pcp\nindices: 0\n")
    assert main(["check", inst, good]) == 0
    assert "accepted" in capsys.readouterr().out
    assert main(["check", inst, bad]) == 1
    assert "rejected" in capsys.readouterr().err
    mismatched = write(tmp_path / "m.txt", "%witness sr\nsteps:\n")
    assert main(["check", inst, mismatched]) == 2


def test_cmd_solve(tmp_path, capsys):
    inst = write(tmp_path / "p.pcp", PCP_TEXT)
    out_file = tmp_path / "w.txt"
    assert main(["solve", inst, "--max-cards", "5",
                 "--emit-witness", str(out_file)]) == 0
    printed = capsys.readouterr().out
    assert printed == out_file.read_text(encoding="utf-8")
    assert parse_witness(printed) == ("pcp", (0, 0, 1, 1, 2))
    hopeless = write(tmp_path / "h.pcp", "%problem pcp\na / b\n")
    assert main(["solve", hopeless, "--max-cards", "3"]) == 3


def test_cmd_solve_tm(tmp_path, capsys):
    inst = write(tmp_path / "m.tm", TM_TEXT)
    assert main(["solve", inst]) == 0
    assert parse_witness(capsys.readouterr().out) == ("tm", 1)


def test_cmd_reduce_and_translate(tmp_path, capsys):
    inst = write(tmp_path / "r.sr", SR_TEXT)
    map_file = tmp_path / "map.json"
    assert main(["reduce", inst, "--to", "mpcp",
                 "--emit-map", str(map_file)]) == 0
    reduced_text = capsys.readouterr().out
    tag, reduced, _ = parse_instance(reduced_text)
    assert tag == "mpcp" and isinstance(reduced, MpcpInstance)
    data = json.loads(map_file.read_text(encoding="utf-8"))
    assert data["source_tag"] == "sr" and data["target_tag"] == "mpcp"

    wit = write(tmp_path / "w.txt", "%witness sr\nsteps:\n0 1\n1 0\n")
    assert main(["translate", str(map_file), wit, "--direction", "fwd"]) == 0
    wtag, payload = parse_witness(capsys.readouterr().out)
    assert wtag == "mpcp"
    from pcpkit.problems import check_mpcp
    assert check_mpcp(reduced, payload)

    back = write(tmp_path / "wb.txt", print_witness("mpcp", payload))
    assert main(["translate", str(map_file), back, "--direction", "bwd"]) == 0
    assert parse_witness(capsys.readouterr().out) == ("sr", ((0, 1), (1, 0)))

    junk = write(tmp_path / "junk.txt", "%witness mpcp\nindices: 0 0\n")
    assert main(["translate", str(map_file), junk, "--direction", "bwd"]) == 1
    assert "translation failed" in capsys.readouterr().err


def test_cmd_reduce_rejects_multi_step(tmp_path):
    inst = write(tmp_path / "r.sr", SR_TEXT)
    assert main(["reduce", inst, "--to", "cfp"]) == 2


def test_cmd_chain(tmp_path, capsys):
    inst = write(tmp_path / "m.tm", TM_TEXT)
    map_file = tmp_path / "map.json"
    assert main(["chain", inst, "--to", "pcp", "--emit-map", str(map_file)]) == 0
    tag, pcp, _ = parse_instance(capsys.readouterr().out)
    assert tag == "pcp"
    wit = write(tmp_path / "w.txt", "%witness tm\nhalt-steps: 5\n")
    assert main(["translate", str(map_file), wit, "--direction", "fwd"]) == 0
    wtag, payload = parse_witness(capsys.readouterr().out)
    assert wtag == "pcp"
    from pcpkit.problems import check_pcp
    assert check_pcp(pcp, payload)


def test_cmd_gen(capsys):
    assert main(["gen", "--problem", "pcp", "--seed", "42"]) == 0
    first = capsys.readouterr().out
    assert main(["gen", "--problem", "pcp", "--seed", "42"]) == 0
    assert capsys.readouterr().out == first
    tag, _, _ = parse_instance(first)
    assert tag == "pcp"
    assert main(["gen", "--problem", "tm", "--seed", "7"]) == 0
    tag, _, _ = parse_instance(capsys.readouterr().out)
    assert tag == "tm"
    assert main(["gen", "--problem", "cfp", "--seed", "1"]) == 2


def test_missing_file_is_usage_error():
    assert main(["check", "/nonexistent/i", "/nonexistent/w"]) == 2


def test_fresh_symbols_get_generated_names(tmp_path, capsys):
    inst = write(tmp_path / "r.sr", SR_TEXT)
    assert main(["reduce", inst, "--to", "mpcp"]) == 0
    out = capsys.readouterr().out
    assert "_f0" in out and "_f1" in out


def test_intern_table_rejects_reserved():
    t = InternTable()
    with pytest.raises(ParseError):
        t.intern("/")
    with pytest.raises(ParseError):
        t.intern("_")
    assert t.intern("a") == t.intern("a") == 0
