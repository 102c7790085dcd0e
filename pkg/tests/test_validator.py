from __future__ import annotations

import re

import pytest

from bpdmn.validator import Severity, has_errors, validate

from conftest import load

RULES = [f"V{i}" for i in range(1, 10)]


@pytest.mark.parametrize("rule", RULES)
def test_good_fixture_passes(rule):
    d = load(f"validator/good_{rule.lower()}.bpdmn.json")
    diagnostics = validate(d)
    assert not has_errors(diagnostics), [str(x) for x in diagnostics]
    assert not any(x.rule == rule for x in diagnostics)


@pytest.mark.parametrize("rule", RULES)
def test_bad_fixture_fails_its_rule(rule):
    d = load(f"validator/bad_{rule.lower()}.bpdmn.json")
    diagnostics = validate(d)
    assert any(x.rule == rule for x in diagnostics), [str(x) for x in diagnostics]


def test_v9_is_a_warning_not_an_error():
    diagnostics = validate(load("validator/bad_v9.bpdmn.json"))
    v9 = [x for x in diagnostics if x.rule == "V9"]
    assert v9 and all(x.severity is Severity.WARNING for x in v9)
    assert not has_errors(diagnostics)


@pytest.mark.parametrize("name", ["travel.bpdmn.json", "eco.bpdmn.json"])
def test_example_models_validate_cleanly(name):
    diagnostics = validate(load(name))
    assert not has_errors(diagnostics), [str(x) for x in diagnostics]


def test_diagnostic_string_format():
    diagnostics = validate(load("validator/bad_v1.bpdmn.json"))
    assert diagnostics, "expected at least one diagnostic"
    for d in diagnostics:
        assert re.fullmatch(r"V\d (error|warning) \S+: .+", str(d))


def test_diagnostics_sorted_by_rule_then_element():
    d = load("validator/bad_v7.bpdmn.json")  # missing start AND end event
    diagnostics = validate(d)
    keys = [(x.rule, x.element, x.message) for x in diagnostics]
    assert keys == sorted(keys)
    assert len([x for x in diagnostics if x.rule == "V7"]) == 2


def test_bad_v1_mentions_both_roles_when_unused():
    # an object attached only as input is flagged as never produced
    diagnostics = validate(load("validator/bad_v1.bpdmn.json"))
    assert any("never produced" in x.message for x in diagnostics)


def test_validate_does_not_mutate(travel):
    before = len(travel.mappings), len(travel.objects), len(list(travel.iter_nodes()))
    validate(travel)
    after = len(travel.mappings), len(travel.objects), len(list(travel.iter_nodes()))
    assert before == after
