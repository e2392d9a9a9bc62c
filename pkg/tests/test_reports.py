import json
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from sigtqft.reports import FAIL, PASS, SweepItem, SweepReport, plain, rows_to_csv


def test_plain_scalars():
    assert plain(7) == 7
    assert plain(Fraction(6, 3)) == 2
    assert plain(Fraction(-1, 18)) == "-1/18"
    assert plain(0.2) == "0.2"
    assert plain(mpmath.mpf("0.1")) == repr(float(mpmath.mpf("0.1")))
    big = plain(mpmath.mpf(10) ** 400)
    assert "e+399" in big or "e+400" in big
    assert abs(mpmath.mpf(big) / mpmath.mpf(10) ** 400 - 1) < 1e-15
    assert plain(None) is None and plain("x") == "x" and plain(True) is True
    with pytest.raises(TypeError):
        plain(object())


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_plain_float_round_trips(x):
    assert float(plain(x)) == x


def sample_report():
    rep = SweepReport("demo", meta={"p_max": 5, "ratio": Fraction(1, 3)})
    rep.add(SweepItem({"q": 1, "p": 3}, {"s": Fraction(1, 18), "v": 0.25}, 0, PASS), 0.01)
    rep.add(SweepItem({"q": 2, "p": 5}, {"s": 0, "extra": "a,b"}, Fraction(1, 2), FAIL), 0.02)
    return rep


def test_summary_and_failures():
    rep = sample_report()
    assert rep.summary == {"total": 2, "pass": 1, "fail": 1}
    assert not rep.ok and rep.failures()[0].inputs == {"q": 2, "p": 5}
    with pytest.raises(ValueError):
        SweepItem({}, {}, 0, "maybe")


def test_json_round_trip():
    rep = sample_report()
    back = SweepReport.from_json(rep.to_json())
    assert back.to_dict() == rep.to_dict()
    assert back.timing == rep.timing
    doc = json.loads(rep.to_json(timing=False))
    assert "timing" not in doc and doc["meta"]["ratio"] == "1/3"
    doc["summary"]["pass"] = 2
    with pytest.raises(ValueError):
        SweepReport.from_dict(doc)


def test_csv_layout():
    text = sample_report().to_csv()
    lines = text.split("\r\n")
    assert lines[0] == "q,p,s,v,extra,residual,status"
    assert lines[1] == "1,3,1/18,0.25,,0,pass"
    assert lines[2] == '2,5,0,,"a,b",1/2,fail'
    assert text.endswith("\r\n")
    assert sample_report().to_csv() == text


def test_rows_to_csv():
    out = rows_to_csv([{"a": 1, "b": Fraction(1, 2)}, {"a": 2}], ["a", "b"])
    assert out == "a,b\r\n1,1/2\r\n2,\r\n"
    assert rows_to_csv([]) == "\r\n"
