from __future__ import annotations

from pathlib import Path

import pytest

from bpdmn.format import parse_diagram
from bpdmn.model import Diagram

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load(relpath: str) -> Diagram:
    return parse_diagram((FIXTURES / relpath).read_text(encoding="utf-8"))


def fixture_text(relpath: str) -> str:
    return (FIXTURES / relpath).read_text(encoding="utf-8")


@pytest.fixture
def travel() -> Diagram:
    return load("travel.bpdmn.json")


@pytest.fixture
def eco() -> Diagram:
    return load("eco.bpdmn.json")
