import json
import os
from pathlib import Path

import pytest

import pydml

CORPUS = Path(os.environ.get("DML_CORPUS_DIR", Path(__file__).resolve().parents[2] / "corpus"))


def test_fibonacci_file():
    rep = pydml.run_file(CORPUS / "fibonacci.json")
    assert rep["status"] == "CERTIFIED"
    assert rep["exit_code"] == 0


def test_run_accepts_dict_and_overrides():
    doc = json.loads((CORPUS / "sml_even.json").read_text())
    a = pydml.run(doc)
    b = pydml.run(json.dumps(doc), overrides=["k=96"])
    assert a["result"] == b["result"]


def test_malformed_gives_error_report():
    rep = pydml.run((CORPUS / "malformed.json").read_text())
    assert rep["status"] == "ERROR"
    assert rep["exit_code"] == 3
    assert "offset" in rep["result"]["error"]


def test_bad_polynomial():
    rep = pydml.run_file(CORPUS / "bad_polynomial.json")
    assert rep["status"] == "ERROR"


def test_brute_force_translation():
    # n + 1 = 7 exactly once
    assert pydml.brute_force(["x1+1"], ["1"], "x1-7", 50) == [6]


def test_degrees_henon_like():
    assert pydml.degrees(["x2", "x1+x2^2"], 4) == [2, 4, 8, 16]


def test_bad_input_raises():
    with pytest.raises(pydml.DmlError):
        pydml.brute_force(["x1+"], ["0"], "x1", 3)
