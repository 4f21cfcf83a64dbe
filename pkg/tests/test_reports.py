import json
import math
from fractions import Fraction

import numpy as np

from curvature import curvature_constants
from isoperimetry import exact_cheeger_search
from reports import SCHEMA_VERSION, emit_report, encode_value, render
from verify_suite import VerificationSuite


def test_encode_values():
    assert encode_value(Fraction(-1, 6)) == {"num": -1, "den": 6}
    assert encode_value(1 / 3) == 0.333333333333
    assert encode_value(math.inf) == "inf"
    assert encode_value(np.int64(4)) == 4
    assert encode_value(np.bool_(True)) is True
    assert encode_value({3, 1, 2}) == [1, 2, 3]
    assert encode_value((1, Fraction(1, 2))) == [1, {"num": 1, "den": 2}]


def test_curvature_report(trihex):
    document = emit_report(curvature_constants(trihex))
    assert document["schema"] == SCHEMA_VERSION
    assert document["report"] == "CurvatureProfile"
    assert document["a"] is None
    assert document["b"] == {"num": 0, "den": 1}


def test_cheeger_report_fields_keep_their_order(t3):
    document = emit_report(exact_cheeger_search(t3, 3))
    assert document["bound_physical"] == {"num": 1, "den": 1}
    keys = list(document)
    assert keys[:4] == ["schema", "report", "cap", "roots"]


def test_empty_suite():
    document = emit_report(VerificationSuite(profile="small"))
    assert document["checks"] == []
    assert document["passed"] == 0


def test_mapping_report_and_render_are_stable(cube):
    sections = {"curvature": curvature_constants(cube), "note": None}
    first = render(emit_report(sections, name="CombinedReport"))
    second = render(emit_report(sections, name="CombinedReport"))
    assert first == second
    parsed = json.loads(first)
    assert parsed["report"] == "CombinedReport"
    assert parsed["curvature"]["b"] == {"num": -1, "den": 4}
