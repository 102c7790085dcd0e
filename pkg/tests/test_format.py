from __future__ import annotations

import json
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from bpdmn.format import (
    EMPTY_DOCUMENT,
    ParseError,
    parse_diagram,
    parse_diagram_with_warnings,
    serialize_diagram,
)

from conftest import FIXTURES, fixture_text
from randgen import fuzz_input, random_diagram

ALL_FIXTURES = sorted(p.relative_to(FIXTURES) for p in FIXTURES.rglob("*.bpdmn.json"))


@pytest.mark.parametrize("relpath", ALL_FIXTURES, ids=str)
def test_every_fixture_round_trips(relpath):
    text = fixture_text(str(relpath))
    assert serialize_diagram(parse_diagram(text)) == text


def test_canonical_output_shape(travel):
    text = serialize_diagram(travel)
    assert text.endswith("\n") and not text.endswith("\n\n")
    doc = json.loads(text)
    assert list(doc)[:2] == ["bpdmn", "id"]
    ids = [o["id"] for o in doc["objects"]]
    assert ids == sorted(ids)
    assert text.splitlines()[1].startswith('  "')  # two-space indentation


def test_mapping_rule_order_is_preserved(travel):
    doc = json.loads(serialize_diagram(travel))
    dm1 = next(m for m in doc["mappings"] if m["id"] == "dm1")
    assert [r["to"] for r in dm1["rules"]] == ["cardNumber", "cardType"]


def test_empty_document_constant_round_trips():
    d = parse_diagram(EMPTY_DOCUMENT)
    assert not d.pools and not d.objects
    assert serialize_diagram(d) == EMPTY_DOCUMENT


def test_malformed_json_reports_position():
    with pytest.raises(ParseError) as err:
        parse_diagram('{"bpdmn": "1.0",\n  "pools": [,]}')
    diag = err.value.diagnostics[0]
    assert diag.span.line == 2
    assert "malformed" in diag.message


def test_missing_version_is_an_error():
    with pytest.raises(ParseError, match="format version"):
        parse_diagram('{"pools": [], "stores": [], "objects": [], "mappings": [], "message_flows": []}')


def test_unknown_key_strict_vs_lenient():
    text = json.loads(EMPTY_DOCUMENT)
    text["mystery"] = 1
    raw = json.dumps(text)
    with pytest.raises(ParseError, match="unknown key 'mystery'"):
        parse_diagram(raw)
    diagram, warnings = parse_diagram_with_warnings(raw, strict=False)
    assert diagram is not None
    assert any("mystery" in str(w) for w in warnings)


def test_unknown_node_kind_is_located():
    raw = fixture_text("travel.bpdmn.json").replace('"kind": "task"', '"kind": "jobby"', 1)
    with pytest.raises(ParseError) as err:
        parse_diagram(raw)
    diag = err.value.diagnostics[0]
    assert "jobby" in diag.message
    assert diag.span.line > 1  # best-effort location points into the document


def test_dangling_reference_is_a_parse_error():
    raw = fixture_text("handoff/direct.bpdmn.json").replace('"object": "x"', '"object": "zz"')
    with pytest.raises(ParseError):
        parse_diagram(raw)


def test_behaviors_and_start_inputs_round_trip(eco):
    text = serialize_diagram(eco)
    again = parse_diagram(text)
    assert set(again.behaviors) == set(eco.behaviors)
    b = again.behaviors["m_check"]
    assert len(b.store_actions) == 1 and b.store_actions[0].object == "ECO_Data"
    assert again.start_inputs == eco.start_inputs


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_random_diagram_round_trip(seed):
    d = random_diagram(seed)
    text = serialize_diagram(d)
    assert serialize_diagram(parse_diagram(text)) == text


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 100_000))
def test_fuzz_inputs_never_crash(seed):
    try:
        parse_diagram(fuzz_input(seed))
    except ParseError:
        pass
