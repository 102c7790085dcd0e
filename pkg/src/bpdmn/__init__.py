"""Toolchain for data-extended BPMN models: parsing, validation, workflow
data pattern analysis, BPEL/XPDL generation and data-aware simulation."""

from __future__ import annotations

from .format import parse_diagram, serialize_diagram
from .model import Diagram
from .validator import validate

__version__ = "0.1.0"

__all__ = ["Diagram", "parse_diagram", "serialize_diagram", "validate", "__version__"]
