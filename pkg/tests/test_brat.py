import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopfbrat.brat import (
    BratteliLevel,
    DimensionMismatch,
    LevelReport,
    ParseError,
    SizeLimitExceeded,
    UnsupportedLevel,
    analyze,
    analyze_direct,
    decompose,
    parse_level,
    render_level,
)

EQ47 = """
# M1 + M2 into M1 + M4
in 1,2; out 1,4
; mult [[1,0],
        [2,1]]   # trailing comment
"""


@st.composite
def levels(draw):
    s = draw(st.integers(1, 3))
    t = draw(st.integers(1, 3))
    ins = draw(st.lists(st.integers(1, 3), min_size=s, max_size=s))
    mult = draw(st.lists(st.lists(st.integers(0, 2), min_size=s, max_size=s), min_size=t, max_size=t))
    for row in mult:
        if not any(row):
            row[0] = 1
    for j in range(s):
        if not any(row[j] for row in mult):
            mult[0][j] = 1
    outs = [sum(x * d for x, d in zip(row, ins)) for row in mult]
    return BratteliLevel(tuple(ins), tuple(outs), tuple(tuple(r) for r in mult))


def test_parse_eq47():
    lv = parse_level(EQ47)
    assert lv == BratteliLevel((1, 2), (1, 4), ((1, 0), (2, 1)))
    assert render_level(lv) == "in 1,2; out 1,4; mult [[1,0],[2,1]]"


@settings(max_examples=60, deadline=None)
@given(levels())
def test_render_roundtrip(lv):
    assert parse_level(render_level(lv)) == lv


@settings(max_examples=25, deadline=None)
@given(levels())
def test_decomposition_reproduces_level(lv):
    plan = decompose(lv)
    assert [st.name for st in plan.stages] == ["A", "B", "C"]
    assert plan.matches_level()
    comp = plan.composite()
    assert comp.source.block_dims == lv.input_dims and comp.target.block_dims == lv.output_dims
    assert comp.failures() == []


@pytest.mark.parametrize(
    "text,line,col",
    [
        ("in 1,2; out 1,4 mult [[1,0],[2,1]]", 1, 17),
        ("in 1,2;\nout 1,4;\nmult [[1,0],[2,1]", 3, 18),
        ("in 1,2; out 1,4; mult [[1,0],[2,1]] extra", 1, 37),
        ("in 1,x; out 1; mult [[1]]", 1, 6),
        ("in 1; out 2; mult [[2]] @", 1, 25),
    ],
)
def test_parse_errors_carry_position(text, line, col):
    with pytest.raises(ParseError) as ei:
        parse_level(text)
    assert (ei.value.line, ei.value.column) == (line, col)


def test_dimension_mismatch_names_block():
    with pytest.raises(DimensionMismatch, match="output block 1"):
        parse_level("in 1,2; out 1,5; mult [[1,0],[2,1]]")
    with pytest.raises(DimensionMismatch):
        parse_level("in 1,2; out 1; mult [[1]]")


def test_zero_column_unsupported():
    with pytest.raises(UnsupportedLevel):
        decompose(parse_level("in 1,1; out 1; mult [[1,0]]"))


def test_eq47_stages():
    plan = decompose(parse_level(EQ47))
    kinds = [[p.kind for p in st.pieces] for st in plan.stages]
    assert kinds == [["case3", "identity"], ["identity", "case2", "identity"], ["identity", "case1"]]
    pieces = plan.nonidentity_pieces()
    assert [(p.kind, p.params) for p in pieces] == [
        ("case3", {"dims": (1,), "n": 2}),
        ("case2", {"k": 1, "n": 2}),
        ("case1", {"lengths": (2, 2)}),
    ]


def test_permutation_witness_regroups_by_output():
    # two inputs each feeding two outputs: stage B order (j, i) differs from (i, j)
    lv = parse_level("in 1,1; out 2,2; mult [[1,1],[1,1]]")
    plan = decompose(lv)
    assert plan.stages[-1].permutation == [0, 2, 1, 3]
    assert plan.matches_level()


def test_analyze_eq47_and_json_roundtrip():
    report = analyze(decompose(parse_level(EQ47)))
    assert report.ok and len(report.pieces) == 3
    assert all(p.is_hopf_galois for p in report.pieces)
    data = json.loads(json.dumps(report.to_json()))
    assert LevelReport.from_json(data).to_json() == report.to_json()


def test_analyze_concurrently_matches_serial():
    plan = decompose(parse_level(EQ47))
    assert analyze(plan, workers=2).to_json() == analyze(plan).to_json()


def test_size_limit_names_piece():
    with pytest.raises(SizeLimitExceeded, match="case1"):
        analyze(decompose(parse_level(EQ47)), max_dim=3)


def test_identity_plan_has_no_findings():
    report = analyze(decompose(parse_level("in 2,1; out 2,1; mult [[1,0],[0,1]]")))
    assert report.pieces == [] and report.ok


def test_direct_counterexample():
    v = analyze_direct(parse_level("in 1,1; out 1,2; mult [[1,0],[1,1]]"))
    assert v.dims == (13, None) and not v.is_hopf_galois
