import pytest

import qpinf


def test_points_and_opens():
    p = qpinf.normalize(["0", "2", "-4"])
    assert p == ["0/1", "1/1", "-2/1"]
    assert qpinf.level(p) == 1
    o = qpinf.nbhd_base(p, 2)
    assert o["chart"] == 1
    assert qpinf.closure_member(p, o)
    # constrained indices 0..max(k, length) = 0..3, so Y_4 is the tail
    assert qpinf.skeleton_tail_level(o) == 4
    assert qpinf.closure_member(["0/1", "0/1", "0/1", "0/1", "1/1"], o)
    assert not qpinf.closure_member(["0/1", "0/1", "0/1", "1/1"], o)


def test_stage_order():
    assert qpinf.gamma(6) == ["0", "(0,0)", "1", "(0,1)", "(1,0)", "2"]


def test_golomb():
    assert qpinf.golomb_closure_contains(1, 2, 2, 500)
    assert not qpinf.golomb_closure_contains(1, 3, 2, 500)


def test_verify_and_replay():
    records, code = qpinf.run("verify", source="qline", samples=4)
    assert records[0]["stage"] == "header"
    verdicts = {r["clause"]: r["verdict"] for r in records}
    assert verdicts["coregular"] == "pass"
    assert verdicts["superconnecting"] == "fail"
    assert code == 1
    again, rcode = qpinf.replay(records)
    assert rcode == 0 and len(again) == len(records)


def test_engine_run_is_deterministic():
    a = qpinf.run("embed", source="qp", target="qp", stages=20, seed=3)
    b = qpinf.run("embed", source="qp", target="qp", stages=20, seed=3)
    assert a == b
    assert a[1] == 0
    assert a[0][-1]["clause"] == "partial_map"


def test_errors():
    with pytest.raises(qpinf.QpinfError, match="UnsupportedModel"):
        qpinf.run("verify", source="R")
    with pytest.raises(qpinf.QpinfError, match="'bogus'"):
        qpinf.run("verify", bogus=1)
