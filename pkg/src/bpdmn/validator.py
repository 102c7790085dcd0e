"""Structural well-formedness checking over a parsed diagram.

Nine fixed rules, applied in order; the result is a diagnostic list sorted
by rule id then element id. All data-semantics rules are errors, the single
cosmetic rule (V9) is a warning. The validator never mutates its input.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from . import model
from .expr import expr_refs
from .model import (
    Diagram,
    StoreInsert,
    StoreRead,
    node_inputs,
    node_outputs,
    object_sources,
    object_targets,
    reaches,
    resolve_scope,
)

RULE_IDS = ("V1", "V2", "V3", "V4", "V5", "V6", "V7", "V8", "V9")


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    rule: str
    severity: Severity
    element: str
    message: str

    def __str__(self) -> str:
        return f"{self.rule} {self.severity.value} {self.element}: {self.message}"

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR


def _error(rule: str, element: str, message: str) -> Diagnostic:
    return Diagnostic(rule, Severity.ERROR, element, message)


def validate(diagram: Diagram) -> list[Diagnostic]:
    """Apply the full rule catalog; an empty list means the model is valid."""
    diagnostics: list[Diagnostic] = []
    diagnostics += _v1_sources_and_targets(diagram)
    diagnostics += _v2_optional_inputs_only(diagram)
    diagnostics += _v3_mappings(diagram)
    diagnostics += _v4_store_structure(diagram)
    diagnostics += _v5_store_scope(diagram)
    diagnostics += _v6_message_objects_cross_pool(diagram)
    diagnostics += _v7_pool_shape(diagram)
    diagnostics += _v8_origin_store_variables(diagram)
    diagnostics += _v9_collapsed_empty_stores(diagram)
    diagnostics.sort(key=lambda d: (d.rule, d.element, d.message))
    return diagnostics


def has_errors(diagnostics: list[Diagnostic]) -> bool:
    return any(d.is_error for d in diagnostics)


def _used_objects(diagram: Diagram) -> set[str]:
    used: set[str] = set()
    for pool in diagram.pools:
        for flow in pool.sequence_flows:
            used.update(a.object for a in flow.attachments)
        for flow in pool.explicit_data_flows:
            used.add(flow.object)
    for flow in diagram.message_flows:
        used.update(a.object for a in flow.attachments)
    for mapping in diagram.mappings:
        used.add(mapping.source_object)
        used.add(mapping.target_object)
    return used


def _only_on_external_messages(diagram: Diagram, object_id: str) -> bool:
    """True when every use of the object sits on a message flow whose
    opposite endpoint is a black-box pool (data received from or sent
    outside the modeled diagram)."""
    appearances = 0
    external = 0
    for pool in diagram.pools:
        for flow in pool.sequence_flows:
            appearances += sum(1 for a in flow.attachments if a.object == object_id)
        for flow in pool.explicit_data_flows:
            if flow.object == object_id:
                appearances += 1
    for flow in diagram.message_flows:
        for att in flow.attachments:
            if att.object != object_id:
                continue
            appearances += 1
            if diagram.is_black_box_pool(flow.source) or diagram.is_black_box_pool(flow.target):
                external += 1
    return appearances > 0 and appearances == external


def _v1_sources_and_targets(diagram: Diagram) -> list[Diagnostic]:
    """V1: every used object is produced somewhere and consumed somewhere."""
    out = []
    mapping_targets = {m.target_object for m in diagram.mappings}
    mapping_sources = {m.source_object for m in diagram.mappings}
    consumed_as_input: set[str] = set()
    for node in diagram.iter_nodes():
        consumed_as_input.update(io.object for io in node_inputs(diagram, node.id))
    for object_id in sorted(_used_objects(diagram)):
        if diagram.object(object_id) is None:
            continue  # dangling refs are construction errors
        if _only_on_external_messages(diagram, object_id):
            continue
        has_source = bool(object_sources(diagram, object_id)) or object_id in mapping_targets
        has_target = (
            bool(object_targets(diagram, object_id))
            or object_id in mapping_sources
            or object_id in consumed_as_input
        )
        if not has_source:
            out.append(_error("V1", object_id, "object is never produced (no source)"))
        if not has_target:
            out.append(_error("V1", object_id, "object is never consumed (no target)"))
    return out


def _v2_optional_inputs_only(diagram: Diagram) -> list[Diagnostic]:
    """V2: the optional marker is allowed on input attachments only."""
    out = []
    flows: list[tuple[str, list[model.ObjectAttachment]]] = []
    for pool in diagram.pools:
        flows += [(f.id, f.attachments) for f in pool.sequence_flows]
    flows += [(f.id, f.attachments) for f in diagram.message_flows]
    for flow_id, attachments in flows:
        for att in attachments:
            if att.optional and att.direction != "input":
                out.append(
                    _error("V2", flow_id, f"object {att.object}: optional marker on an output")
                )
    return out


def _v3_mappings(diagram: Diagram) -> list[Diagnostic]:
    """V3: mappings connect a produced object to a consumed one on a
    connected path, and every copy-rule path resolves."""
    out = []
    for mapping in diagram.mappings:
        source = diagram.object(mapping.source_object)
        target = diagram.object(mapping.target_object)
        if source is None or target is None:
            continue
        producers = [link.element for link in object_sources(diagram, source.id)]
        if not producers and not any(m.target_object == source.id for m in diagram.mappings):
            out.append(
                _error("V3", mapping.id, f"source object {source.id} is never produced")
            )
        consumers = [
            node.id
            for node in diagram.iter_nodes()
            if any(io.object == target.id for io in node_inputs(diagram, node.id))
        ]
        if not consumers:
            out.append(
                _error("V3", mapping.id, f"target object {target.id} is not an input of any node")
            )
        elif producers and not any(
            reaches(diagram, p, c) for p in producers for c in consumers
        ):
            out.append(
                _error(
                    "V3",
                    mapping.id,
                    f"no path connects a producer of {source.id} to a consumer of {target.id}",
                )
            )
        source_vars = source.variable_names()
        target_scalars = {
            v.name for v in target.variables if v.vtype in model.SCALAR_VTYPES
        }
        for rule in mapping.rules:
            for ref in sorted(expr_refs(rule.from_expr)):
                head, _, rest = ref.partition(".")
                if head != source.id or (rest and rest not in source_vars):
                    out.append(
                        _error(
                            "V3",
                            mapping.id,
                            f"copy source {ref!r} does not resolve in object {source.id}",
                        )
                    )
            if rule.to not in target_scalars:
                out.append(
                    _error(
                        "V3",
                        mapping.id,
                        f"copy target {rule.to!r} does not resolve to a scalar of {target.id}",
                    )
                )
    return out


def _v4_store_structure(diagram: Diagram) -> list[Diagnostic]:
    """V4: entity graphs are well formed (unique entity names, existing
    relationship endpoints, acyclic generalizations)."""
    out = []
    for store in diagram.stores:
        names = [e.name for e in store.entities]
        for name in sorted({n for n in names if names.count(n) > 1}):
            out.append(_error("V4", store.id, f"duplicate entity name {name!r}"))
        entity_names = set(names)
        for rel in store.relationships:
            for end in (rel.left, rel.right):
                if end not in entity_names:
                    out.append(
                        _error("V4", store.id, f"relationship {rel.name!r}: unknown entity {end!r}")
                    )
        parents: dict[str, list[str]] = {}
        for gen in store.generalizations:
            for end in (gen.parent, gen.child):
                if end not in entity_names:
                    out.append(
                        _error("V4", store.id, f"generalization endpoint {end!r} does not exist")
                    )
            parents.setdefault(gen.child, []).append(gen.parent)
        if _has_cycle(parents):
            out.append(_error("V4", store.id, "generalization edges form a cycle"))
    return out


def _has_cycle(edges: dict[str, list[str]]) -> bool:
    WHITE, GRAY, BLACK = 0, 1, 2
    color: dict[str, int] = {}

    def visit(node: str) -> bool:
        color[node] = GRAY
        for nxt in edges.get(node, ()):
            state = color.get(nxt, WHITE)
            if state == GRAY:
                return True
            if state == WHITE and visit(nxt):
                return True
        color[node] = BLACK
        return False

    return any(color.get(n, WHITE) == WHITE and visit(n) for n in list(edges))


def _v5_store_scope(diagram: Diagram) -> list[Diagnostic]:
    """V5: every node reading or writing a store lies inside its scope."""
    out = []
    node_ids = {n.id for n in diagram.iter_nodes()}
    for store in diagram.stores:
        allowed = resolve_scope(diagram, store.id)
        accessors: set[str] = set()
        for pool in diagram.pools:
            for flow in pool.explicit_data_flows:
                if flow.source == store.id and flow.target in node_ids:
                    accessors.add(flow.target)
                if flow.target == store.id and flow.source in node_ids:
                    accessors.add(flow.source)
        for node_id, behavior in diagram.behaviors.items():
            for action in behavior.store_actions:
                if isinstance(action, (StoreInsert, StoreRead)) and action.store == store.id:
                    accessors.add(node_id)
        for node_id in sorted(accessors - allowed):
            out.append(
                _error("V5", node_id, f"node accesses store {store.id} outside its scope")
            )
    return out


def _v6_message_objects_cross_pool(diagram: Diagram) -> list[Diagnostic]:
    """V6: message-attached objects travel only between distinct pools."""
    out = []
    for flow in diagram.message_flows:
        if not flow.attachments:
            continue
        src_pool = diagram.pool_of(flow.source)
        dst_pool = diagram.pool_of(flow.target)
        if src_pool is not None and dst_pool is not None and src_pool.id == dst_pool.id:
            out.append(
                _error("V6", flow.id, "message flow with objects connects a pool to itself")
            )
    return out


def _v7_pool_shape(diagram: Diagram) -> list[Diagnostic]:
    """V7: each (non-black-box) pool has at least one start and one end
    event; flow endpoint existence is enforced at construction."""
    out = []
    for pool in diagram.pools:
        if not pool.nodes:
            continue  # black-box pool: opaque external participant
        kinds = {n.kind for n in pool.iter_nodes()}
        if not (kinds & model.START_KINDS):
            out.append(_error("V7", pool.id, "pool has no start event"))
        if "end_event" not in kinds:
            out.append(_error("V7", pool.id, "pool has no end event"))
    return out


def _v8_origin_store_variables(diagram: Diagram) -> list[Diagnostic]:
    """V8: an object extracted from a store carries only variables of that
    store's entity graph."""
    out = []
    for obj in diagram.objects:
        if obj.origin_store is None:
            continue
        store = diagram.store(obj.origin_store)
        if store is None:
            continue
        known = store.qualified_field_names()
        for var in obj.variables:
            if var.vtype == "record":
                continue
            if var.name not in known:
                out.append(
                    _error(
                        "V8",
                        obj.id,
                        f"variable {var.name!r} does not exist in store {store.id}",
                    )
                )
    return out


def _v9_collapsed_empty_stores(diagram: Diagram) -> list[Diagnostic]:
    """V9 (warning): a store drawn collapsed/expandable but with no internal
    structure to expand."""
    out = []
    for store in diagram.stores:
        if store.collapsed and not store.entities:
            out.append(
                Diagnostic(
                    "V9",
                    Severity.WARNING,
                    store.id,
                    "collapsed store has no internal structure",
                )
            )
    return out
