"""Workflow Data Pattern capability matrix and structural detectors.

The matrix is a fixed transcription: 40 numbered patterns plus four extra
requirement rows, each with a support level for plain BPMN and for the
data-extended notation. The detectors are this toolchain's structural
interpretation of each supported pattern; each detector documents its
predicate in one sentence and returns witness element-id sets found in a
concrete model. Unsupported patterns (3, 6, 35, 37) always report empty.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from . import validator
from .expr import expr_refs
from .model import (
    Diagram,
    node_inputs,
    node_outputs,
    store_readers,
    store_writers,
)


class Support(str, Enum):
    SUPPORTED = "supported"
    PARTIAL = "partial"
    UNSUPPORTED = "unsupported"

    @property
    def symbol(self) -> str:
        return {"supported": "+", "partial": "+/-", "unsupported": "-"}[self.value]


_S, _P, _U = Support.SUPPORTED, Support.PARTIAL, Support.UNSUPPORTED


@dataclass(frozen=True)
class Pattern:
    key: str  # "1".."40" or an extra-row name
    name: str
    group: str
    number: int | None = None


PATTERNS: list[Pattern] = [
    Pattern("1", "Task data", "data visibility", 1),
    Pattern("2", "Block data", "data visibility", 2),
    Pattern("3", "Scope data", "data visibility", 3),
    Pattern("4", "Multiple Instance data", "data visibility", 4),
    Pattern("5", "Case data", "data visibility", 5),
    Pattern("6", "Folder data", "data visibility", 6),
    Pattern("7", "Workflow data", "data visibility", 7),
    Pattern("8", "Environment data", "data visibility", 8),
    Pattern("9", "Data Interaction between Tasks", "data interaction (internal)", 9),
    Pattern("10", "Block Task to Sub-workflow Decomposition", "data interaction (internal)", 10),
    Pattern("11", "Sub-workflow Decomposition to Block Task", "data interaction (internal)", 11),
    Pattern("12", "To Multiple Instance Task", "data interaction (internal)", 12),
    Pattern("13", "From Multiple Instance Task", "data interaction (internal)", 13),
    Pattern("14", "Case to Case", "data interaction (internal)", 14),
    Pattern("15", "Task to Environment - Push", "data interaction (external)", 15),
    Pattern("16", "Environment to Task - Pull", "data interaction (external)", 16),
    Pattern("17", "Environment to Task - Push", "data interaction (external)", 17),
    Pattern("18", "Task to Environment - Pull", "data interaction (external)", 18),
    Pattern("19", "Case to Environment - Push", "data interaction (external)", 19),
    Pattern("20", "Environment to Case - Pull", "data interaction (external)", 20),
    Pattern("21", "Environment to Case - Push", "data interaction (external)", 21),
    Pattern("22", "Case to Environment - Pull", "data interaction (external)", 22),
    Pattern("23", "Workflow to Environment - Push", "data interaction (external)", 23),
    Pattern("24", "Environment to Workflow - Pull", "data interaction (external)", 24),
    Pattern("25", "Environment to Workflow - Push", "data interaction (external)", 25),
    Pattern("26", "Workflow to Environment - Pull", "data interaction (external)", 26),
    Pattern("27", "Data Transfer by Value - Incoming", "data transfer", 27),
    Pattern("28", "Data Transfer by Value - Outcoming", "data transfer", 28),
    Pattern("29", "Data Transfer - Copy In/Copy Out", "data transfer", 29),
    Pattern("30", "Data Transfer by Reference - Unlocked", "data transfer", 30),
    Pattern("31", "Data Transfer by Reference - Locked", "data transfer", 31),
    Pattern("32", "Data Transformation - Input", "data transfer", 32),
    Pattern("33", "Data Transformation - Output", "data transfer", 33),
    Pattern("34", "Task Precondition - Data Existence", "data based routing", 34),
    Pattern("35", "Task Precondition - Data Value", "data based routing", 35),
    Pattern("36", "Task Postcondition - Data Existence", "data based routing", 36),
    Pattern("37", "Task Postcondition - Data Value", "data based routing", 37),
    Pattern("38", "Event-based Task Trigger", "data based routing", 38),
    Pattern("39", "Data-based Task Trigger", "data based routing", 39),
    Pattern("40", "Data-based Routing", "data based routing", 40),
    Pattern("structure", "Structure", "additional requirements"),
    Pattern("explicit_data_flow", "Explicit Data Flow", "additional requirements"),
    Pattern("data_control_flow", "Data / Control Flow", "additional requirements"),
    Pattern("process_data_store", "Process Data Store", "additional requirements"),
]

PATTERN_KEYS = [p.key for p in PATTERNS]
UNSUPPORTED_KEYS = {"3", "6", "35", "37"}

# (BPMN support, data-extended support) per row
_MATRIX: dict[str, tuple[Support, Support]] = {
    "1": (_S, _S),
    "2": (_S, _S),
    "3": (_U, _U),
    "4": (_P, _S),
    "5": (_S, _S),
    "6": (_U, _U),
    "7": (_U, _S),
    "8": (_U, _S),
    "9": (_S, _S),
    "10": (_S, _S),
    "11": (_S, _S),
    "12": (_U, _S),
    "13": (_U, _S),
    "14": (_U, _S),
    "15": (_S, _S),
    "16": (_S, _S),
    "17": (_S, _S),
    "18": (_S, _S),
    "19": (_U, _S),
    "20": (_U, _S),
    "21": (_U, _S),
    "22": (_U, _S),
    "23": (_U, _S),
    "24": (_U, _S),
    "25": (_U, _S),
    "26": (_U, _S),
    "27": (_S, _S),
    "28": (_S, _S),
    "29": (_P, _S),
    "30": (_U, _S),
    "31": (_S, _S),
    "32": (_P, _S),
    "33": (_P, _S),
    "34": (_S, _S),
    "35": (_U, _U),
    "36": (_S, _S),
    "37": (_U, _U),
    "38": (_S, _S),
    "39": (_S, _S),
    "40": (_S, _S),
    "structure": (_U, _S),
    "explicit_data_flow": (_P, _S),
    "data_control_flow": (_P, _S),
    "process_data_store": (_U, _S),
}


def capability_matrix() -> dict[str, tuple[Support, Support]]:
    """The static 44-row matrix: pattern key -> (BPMN, BPDMN) support."""
    return dict(_MATRIX)


Witness = frozenset[str]


@dataclass
class PatternReport:
    instances: dict[str, list[Witness]]

    def witnesses(self, key: str) -> list[Witness]:
        return self.instances.get(key, [])


class InvalidDiagramError(ValueError):
    """Raised when analyze() is given a diagram with validation errors."""


# ---------------------------------------------------------------------------
# Structural helpers


def _tasks(d: Diagram):
    return [n for n in d.iter_nodes() if n.kind == "task"]


def _env_source_stores(d: Diagram) -> list[str]:
    # stores only read inside the diagram: data owned by the environment
    return [s.id for s in d.stores if store_readers(d, s.id) and not store_writers(d, s.id)]


def _env_sink_stores(d: Diagram) -> list[str]:
    # stores only written inside the diagram: data handed to the environment
    return [s.id for s in d.stores if store_writers(d, s.id) and not store_readers(d, s.id)]


def _black_box_message_flows(d: Diagram):
    for flow in d.message_flows:
        if d.is_black_box_pool(flow.source) or d.is_black_box_pool(flow.target):
            yield flow


def _task_producers(d: Diagram) -> dict[str, set[str]]:
    """object id -> nodes producing it via output attachments or explicit flows."""
    producers: dict[str, set[str]] = {}
    for node in d.iter_nodes():
        for io in node_outputs(d, node.id):
            if io.channel in ("sequence", "explicit"):
                producers.setdefault(io.object, set()).add(node.id)
    return producers


def _task_consumers(d: Diagram) -> dict[str, set[str]]:
    consumers: dict[str, set[str]] = {}
    for node in d.iter_nodes():
        for io in node_inputs(d, node.id):
            if io.channel in ("sequence", "explicit"):
                consumers.setdefault(io.object, set()).add(node.id)
    return consumers


# ---------------------------------------------------------------------------
# Detectors. Each returns a list of witness element-id sets.


def _d01(d: Diagram) -> list[Witness]:
    """A task produces a data object of its own (output attachment)."""
    out = []
    for node in _tasks(d):
        for io in node_outputs(d, node.id):
            if io.channel == "sequence":
                out.append(frozenset({node.id, io.object}))
    return out


def _d02(d: Diagram) -> list[Witness]:
    """A store is scoped to a sub-process block."""
    return [
        frozenset({s.id, s.scope.sub_process})
        for s in d.stores
        if s.scope.kind == "sub_process"
    ]


def _d04(d: Diagram) -> list[Witness]:
    """A multi-instance task keeps its data in a shared store."""
    out = []
    for node in _tasks(d):
        if not node.multi_instance:
            continue
        for store in d.stores:
            if node.id in store_readers(d, store.id) | store_writers(d, store.id):
                out.append(frozenset({node.id, store.id}))
    return out


def _d05(d: Diagram) -> list[Witness]:
    """A diagram-scoped store is written and read within one pool (case data)."""
    out = []
    for store in d.stores:
        if store.scope.kind != "diagram":
            continue
        for pool in d.pools:
            ids = {n.id for n in pool.iter_nodes()}
            if store_writers(d, store.id) & ids and store_readers(d, store.id) & ids:
                out.append(frozenset({store.id, pool.id}))
    return out


def _d07(d: Diagram) -> list[Witness]:
    """A diagram-scoped store is accessed from two or more pools."""
    out = []
    for store in d.stores:
        if store.scope.kind != "diagram":
            continue
        accessors = store_readers(d, store.id) | store_writers(d, store.id)
        pools = {p.id for p in d.pools if accessors & {n.id for n in p.iter_nodes()}}
        if len(pools) >= 2:
            out.append(frozenset({store.id} | pools))
    return out


def _d08(d: Diagram) -> list[Witness]:
    """A store read but never written inside the diagram models environment data."""
    return [frozenset({sid}) for sid in _env_source_stores(d)]


def _d09(d: Diagram) -> list[Witness]:
    """An object output by one task is an input of a different task."""
    out = []
    producers = _task_producers(d)
    consumers = _task_consumers(d)
    task_ids = {n.id for n in _tasks(d)}
    for obj, prods in producers.items():
        for p in prods & task_ids:
            for c in consumers.get(obj, set()) & task_ids:
                if p != c:
                    out.append(frozenset({p, c, obj}))
    return out


def _d10(d: Diagram) -> list[Witness]:
    """An object flows into a sub-process as input."""
    out = []
    for node in d.iter_nodes():
        if node.kind != "sub_process":
            continue
        for io in node_inputs(d, node.id):
            out.append(frozenset({node.id, io.object}))
    return out


def _d11(d: Diagram) -> list[Witness]:
    """A sub-process hands an object out as output."""
    out = []
    for node in d.iter_nodes():
        if node.kind != "sub_process":
            continue
        for io in node_outputs(d, node.id):
            out.append(frozenset({node.id, io.object}))
    return out


def _d12(d: Diagram) -> list[Witness]:
    """Data flows into a multi-instance task (attachment or store extraction)."""
    out = []
    for node in _tasks(d):
        if not node.multi_instance:
            continue
        for io in node_inputs(d, node.id):
            out.append(frozenset({node.id, io.object}))
    return out


def _d13(d: Diagram) -> list[Witness]:
    """Data flows out of a multi-instance task (attachment or store insertion)."""
    out = []
    for node in _tasks(d):
        if not node.multi_instance:
            continue
        for io in node_outputs(d, node.id):
            out.append(frozenset({node.id, io.object}))
    return out


def _d14(d: Diagram) -> list[Witness]:
    """A diagram-scoped store is written in one pool and read in another."""
    out = []
    for store in d.stores:
        if store.scope.kind != "diagram":
            continue
        writer_pools = {
            p.id for p in d.pools if store_writers(d, store.id) & {n.id for n in p.iter_nodes()}
        }
        reader_pools = {
            p.id for p in d.pools if store_readers(d, store.id) & {n.id for n in p.iter_nodes()}
        }
        for wp in writer_pools:
            for rp in reader_pools:
                if wp != rp:
                    out.append(frozenset({store.id, wp, rp}))
    return out


def _d15(d: Diagram) -> list[Witness]:
    """A node sends an object on a message flow to a black-box pool."""
    out = []
    for flow in _black_box_message_flows(d):
        if not d.is_black_box_pool(flow.target):
            continue
        for att in flow.attachments:
            if att.direction == "output":
                out.append(frozenset({flow.id, flow.source, att.object}))
    return out


def _d16(d: Diagram) -> list[Witness]:
    """A task extracts an object from an environment-owned (read-only) store."""
    out = []
    env = set(_env_source_stores(d))
    for pool in d.pools:
        for flow in pool.explicit_data_flows:
            if flow.source in env:
                out.append(frozenset({flow.target, flow.source, flow.object}))
    return out


def _d17(d: Diagram) -> list[Witness]:
    """A black-box pool pushes an object to a task over a message flow."""
    out = []
    task_ids = {n.id for n in _tasks(d)}
    for flow in _black_box_message_flows(d):
        if not d.is_black_box_pool(flow.source) or flow.target not in task_ids:
            continue
        for att in flow.attachments:
            if att.direction == "input":
                out.append(frozenset({flow.id, flow.target, att.object}))
    return out


def _d18(d: Diagram) -> list[Witness]:
    """A task deposits an object in a store nothing in the diagram reads."""
    out = []
    env = set(_env_sink_stores(d))
    for pool in d.pools:
        for flow in pool.explicit_data_flows:
            if flow.target in env:
                out.append(frozenset({flow.source, flow.target, flow.object}))
    return out


def _d19(d: Diagram) -> list[Witness]:
    """A pool (case) pushes data to the environment through a write-only store."""
    out = []
    env = set(_env_sink_stores(d))
    for pool in d.pools:
        ids = {n.id for n in pool.iter_nodes()}
        for sid in env:
            if store_writers(d, sid) & ids:
                out.append(frozenset({pool.id, sid}))
    return out


def _d20(d: Diagram) -> list[Witness]:
    """A pool (case) pulls data from an environment-owned store."""
    out = []
    env = set(_env_source_stores(d))
    for pool in d.pools:
        ids = {n.id for n in pool.iter_nodes()}
        for sid in env:
            if store_readers(d, sid) & ids:
                out.append(frozenset({pool.id, sid}))
    return out


def _d21(d: Diagram) -> list[Witness]:
    """The environment pushes data into a case through a message start event."""
    out = []
    for node in d.iter_nodes():
        if node.kind != "start_event_message":
            continue
        for io in node_outputs(d, node.id):
            if io.channel == "sequence":
                out.append(frozenset({node.id, io.object}))
    return out


def _d22(d: Diagram) -> list[Witness]:
    """The environment pulls case results: an object is sent out to a
    black-box pool."""
    out = []
    for flow in _black_box_message_flows(d):
        if not d.is_black_box_pool(flow.target):
            continue
        src_pool = d.pool_of(flow.source)
        for att in flow.attachments:
            if att.direction == "output" and src_pool is not None:
                out.append(frozenset({src_pool.id, flow.id, att.object}))
    return out


def _d23(d: Diagram) -> list[Witness]:
    """At workflow level, data is pushed to the environment via a write-only
    diagram-scoped store."""
    return [
        frozenset({sid})
        for sid in _env_sink_stores(d)
        if (s := d.store(sid)) is not None and s.scope.kind == "diagram"
    ]


def _d24(d: Diagram) -> list[Witness]:
    """At workflow level, data is pulled from an environment-owned
    diagram-scoped store."""
    return [
        frozenset({sid})
        for sid in _env_source_stores(d)
        if (s := d.store(sid)) is not None and s.scope.kind == "diagram"
    ]


def _d25(d: Diagram) -> list[Witness]:
    """A black-box pool pushes a message that starts a process (message flow
    into a start event)."""
    out = []
    starts = {n.id for n in d.iter_nodes() if n.kind == "start_event_message"}
    for flow in _black_box_message_flows(d):
        if d.is_black_box_pool(flow.source) and flow.target in starts:
            out.append(frozenset({flow.id, flow.target}))
    return out


def _d26(d: Diagram) -> list[Witness]:
    """At workflow level, the environment pulls results over a message flow
    to a black-box pool."""
    out = []
    for flow in _black_box_message_flows(d):
        if d.is_black_box_pool(flow.target) and flow.attachments:
            out.append(frozenset({flow.id, flow.target}))
    return out


def _d27(d: Diagram) -> list[Witness]:
    """A structured object (with variables) is passed into a node by value."""
    out = []
    for node in d.iter_nodes():
        for io in node_inputs(d, node.id):
            obj = d.object(io.object)
            if obj is not None and obj.variables and io.channel == "sequence":
                out.append(frozenset({node.id, io.object}))
    return out


def _d28(d: Diagram) -> list[Witness]:
    """A structured object (with variables) is passed out of a node by value."""
    out = []
    for node in d.iter_nodes():
        for io in node_outputs(d, node.id):
            obj = d.object(io.object)
            if obj is not None and obj.variables and io.channel == "sequence":
                out.append(frozenset({node.id, io.object}))
    return out


def _d29(d: Diagram) -> list[Witness]:
    """A node copies data out of a store and back into the same store."""
    out = []
    for store in d.stores:
        for node_id in store_readers(d, store.id) & store_writers(d, store.id):
            out.append(frozenset({node_id, store.id}))
    return out


def _d30(d: Diagram) -> list[Witness]:
    """An object carrying a URL is passed around as an unlocked reference."""
    out = []
    used = set()
    for node in d.iter_nodes():
        for io in node_inputs(d, node.id) + node_outputs(d, node.id):
            used.add(io.object)
    for obj in d.objects:
        if obj.url is not None and obj.id in used:
            out.append(frozenset({obj.id}))
    return out


def _d31(d: Diagram) -> list[Witness]:
    """An object bound to a store (origin store reference) is passed between
    nodes; access goes through the engine-managed store."""
    out = []
    for obj in d.objects:
        if obj.origin_store is None:
            continue
        for node in d.iter_nodes():
            for io in node_inputs(d, node.id):
                if io.object == obj.id and io.channel == "sequence":
                    out.append(frozenset({node.id, obj.id, obj.origin_store}))
    return out


def _d32(d: Diagram) -> list[Witness]:
    """A data mapping transforms data into the input format of a node."""
    out = []
    consumers = _task_consumers(d)
    for mapping in d.mappings:
        if consumers.get(mapping.target_object):
            out.append(frozenset({mapping.id}))
    return out


def _d33(d: Diagram) -> list[Witness]:
    """A data mapping transforms data produced as the output of a node."""
    out = []
    produced: set[str] = set()
    for node in d.iter_nodes():
        produced.update(io.object for io in node_outputs(d, node.id))
    for mapping in d.mappings:
        if mapping.source_object in produced:
            out.append(frozenset({mapping.id}))
    return out


def _d34(d: Diagram) -> list[Witness]:
    """A task waits on a required (non-optional) input object."""
    out = []
    for node in _tasks(d):
        for io in node_inputs(d, node.id):
            if not io.optional:
                out.append(frozenset({node.id, io.object}))
    return out


def _d36(d: Diagram) -> list[Witness]:
    """A task guarantees an output object exists on completion."""
    out = []
    for node in _tasks(d):
        for io in node_outputs(d, node.id):
            out.append(frozenset({node.id, io.object}))
    return out


def _d38(d: Diagram) -> list[Witness]:
    """A message event (start or intermediate) carrying data triggers work."""
    out = []
    for node in d.iter_nodes():
        if node.kind not in ("start_event_message", "intermediate_message"):
            continue
        if node_inputs(d, node.id) or node_outputs(d, node.id):
            out.append(frozenset({node.id}))
    return out


def _d39(d: Diagram) -> list[Witness]:
    """A node-to-node explicit data flow enables the downstream node."""
    out = []
    store_ids = {s.id for s in d.stores}
    for pool in d.pools:
        for flow in pool.explicit_data_flows:
            if flow.source not in store_ids and flow.target not in store_ids:
                out.append(frozenset({flow.id, flow.source, flow.target}))
    return out


def _d40(d: Diagram) -> list[Witness]:
    """A data-based exclusive gateway routes on a guard over object data."""
    out = []
    for pool in d.pools:
        for flow in pool.sequence_flows:
            node = d.node(flow.source)
            if (
                node is not None
                and node.kind == "gateway_exclusive_data"
                and flow.guard is not None
                and expr_refs(flow.guard)
            ):
                out.append(frozenset({node.id, flow.id}))
    return out


def _d_structure(d: Diagram) -> list[Witness]:
    """A store exposes ER structure, or an object carries typed variables."""
    out = []
    for store in d.stores:
        if any(e.fields for e in store.entities):
            out.append(frozenset({store.id}))
    for obj in d.objects:
        if obj.variables:
            out.append(frozenset({obj.id}))
    return out


def _d_explicit_data_flow(d: Diagram) -> list[Witness]:
    """The model uses a dashed explicit data flow connector."""
    return [
        frozenset({flow.id}) for pool in d.pools for flow in pool.explicit_data_flows
    ]


def _d_data_control_flow(d: Diagram) -> list[Witness]:
    """An object rides a control (sequence) flow and gates its target."""
    out = []
    for pool in d.pools:
        for flow in pool.sequence_flows:
            for att in flow.attachments:
                out.append(frozenset({flow.id, att.object}))
    return out


def _d_process_data_store(d: Diagram) -> list[Witness]:
    """The model declares a data store."""
    return [frozenset({s.id}) for s in d.stores]


_DETECTORS = {
    "1": _d01,
    "2": _d02,
    "4": _d04,
    "5": _d05,
    "7": _d07,
    "8": _d08,
    "9": _d09,
    "10": _d10,
    "11": _d11,
    "12": _d12,
    "13": _d13,
    "14": _d14,
    "15": _d15,
    "16": _d16,
    "17": _d17,
    "18": _d18,
    "19": _d19,
    "20": _d20,
    "21": _d21,
    "22": _d22,
    "23": _d23,
    "24": _d24,
    "25": _d25,
    "26": _d26,
    "27": _d27,
    "28": _d28,
    "29": _d29,
    "30": _d30,
    "31": _d31,
    "32": _d32,
    "33": _d33,
    "34": _d34,
    "36": _d36,
    "38": _d38,
    "39": _d39,
    "40": _d40,
    "structure": _d_structure,
    "explicit_data_flow": _d_explicit_data_flow,
    "data_control_flow": _d_data_control_flow,
    "process_data_store": _d_process_data_store,
}


def analyze(diagram: Diagram) -> PatternReport:
    """Run all structural detectors on a valid diagram.

    Instances are reported only for supported patterns; unsupported rows
    report empty lists. Raises :class:`InvalidDiagramError` when the
    diagram has validation errors.
    """
    diagnostics = validator.validate(diagram)
    if validator.has_errors(diagnostics):
        raise InvalidDiagramError(
            "diagram has validation errors: "
            + "; ".join(str(x) for x in diagnostics if x.is_error)
        )
    instances: dict[str, list[Witness]] = {}
    for key in PATTERN_KEYS:
        if key in UNSUPPORTED_KEYS:
            instances[key] = []
            continue
        witnesses = _DETECTORS[key](diagram)
        # deterministic order, deduplicated
        instances[key] = sorted(set(witnesses), key=lambda w: sorted(w))
    return PatternReport(instances=instances)


def detector_doc(key: str) -> str:
    """One-sentence predicate description for a supported pattern."""
    func = _DETECTORS.get(key)
    return (func.__doc__ or "").strip() if func else "not supported; no detector"


def render_matrix() -> str:
    """Fixed-width text table mirroring the capability comparison layout."""
    matrix = capability_matrix()
    lines = []
    header = f"{'pattern':<48} {'BPMN':>5} {'BPDMN':>6}"
    lines.append(header)
    lines.append("-" * len(header))
    current_group = None
    for pattern in PATTERNS:
        if pattern.group != current_group:
            current_group = pattern.group
            lines.append(f"[{current_group}]")
        bpmn, bpdmn = matrix[pattern.key]
        label = f"{pattern.number}. {pattern.name}" if pattern.number else pattern.name
        lines.append(f"{label:<48} {bpmn.symbol:>5} {bpdmn.symbol:>6}")
    return "\n".join(lines) + "\n"
