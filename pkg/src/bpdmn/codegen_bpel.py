"""BPEL document generation.

Stores and objects become ``variable`` elements, data mappings become
``assign`` blocks with one ``copy`` per rule, tasks with attachments become
``invoke`` activities, message start events become ``receive``. The control
skeleton maps linear chains to ``sequence``, parallel gateway regions to
``flow`` and data-based exclusive gateways to ``if``/``else``.

Partner links, port types and WSDL definitions are emitted as fixed
placeholders; they carry no data semantics. Objects attached to message
flows have no BPEL counterpart and are skipped with a warning.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET

from . import validator
from .expr import Lit, Ref, print_expr
from .model import Diagram, Node, node_inputs, node_outputs

PROCESS_NS = "http://example.org/bpel/generated"
PLACEHOLDER_PARTNER_LINK = "partnerLinkPlaceholder"
PLACEHOLDER_PORT_TYPE = "portTypePlaceholder"


class GenerationError(Exception):
    pass


def to_bpel(diagram: Diagram) -> tuple[str, list[str]]:
    """Translate a valid diagram into a BPEL document.

    Returns the XML text and a list of warnings. Raises
    :class:`GenerationError` when the diagram has validation errors.
    """
    diagnostics = validator.validate(diagram)
    if validator.has_errors(diagnostics):
        raise GenerationError(
            "diagram has validation errors: "
            + "; ".join(str(x) for x in diagnostics if x.is_error)
        )
    warnings: list[str] = []

    process = ET.Element("process", {"name": diagram.id, "targetNamespace": PROCESS_NS})
    _emit_variables(diagram, process, warnings)

    pool_bodies = []
    for pool in sorted(diagram.pools, key=lambda p: p.id):
        if not pool.nodes:
            continue  # black-box pools have no executable body
        body = _emit_pool(diagram, pool, warnings)
        if body is not None:
            pool_bodies.append((pool, body))
    if len(pool_bodies) == 1:
        process.append(pool_bodies[0][1])
    elif pool_bodies:
        flow = ET.SubElement(process, "flow", {"name": "pools"})
        for pool, body in pool_bodies:
            body.set("name", pool.name)
            flow.append(body)

    for flow in diagram.message_flows:
        for att_object in sorted({att.object for att in flow.attachments}):
            warnings.append(
                f"object {att_object} on message flow {flow.id} has no BPEL"
                " counterpart; skipped"
            )
    for store in diagram.stores:
        if store.scope.kind == "sub_process":
            warnings.append(
                f"store {store.id} is scoped to a sub-process; BPEL has no"
                " matching variable scope, emitted at process level"
            )

    ET.indent(process, space="  ")
    text = ET.tostring(process, encoding="unicode", xml_declaration=False)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + text + "\n", warnings


def _emit_variables(diagram: Diagram, process: ET.Element, warnings: list[str]) -> None:
    variables = ET.SubElement(process, "variables")
    names_seen: dict[str, str] = {}

    def claim(name: str, owner: str) -> None:
        if name in names_seen:
            raise GenerationError(
                f"variable name collision: {owner} and {names_seen[name]} both map to {name!r}"
            )
        names_seen[name] = owner

    for store in sorted(diagram.stores, key=lambda s: s.id):
        for entity in sorted(store.entities, key=lambda e: e.name):
            for fld in sorted(entity.fields, key=lambda f: f.name):
                if fld.vtype == "record":
                    continue
                name = f"{store.id}.{entity.name}.{fld.name}"
                claim(name, f"store {store.id}")
                variables.append(
                    ET.Comment(f" store-backed variable, element type {fld.vtype} ")
                )
                ET.SubElement(variables, "variable", {"name": name, "element": fld.vtype})
    for obj in sorted(diagram.objects, key=lambda o: o.id):
        claim(obj.id, f"object {obj.id}")
        ET.SubElement(variables, "variable", {"name": obj.id, "messageType": obj.name})


def _assign_for_mapping(diagram: Diagram, mapping_id: str) -> ET.Element:
    mapping = next(m for m in diagram.mappings if m.id == mapping_id)
    assign = ET.Element("assign", {"name": mapping.id})
    for rule in mapping.rules:
        copy = ET.SubElement(assign, "copy")
        expr = rule.from_expr
        if isinstance(expr, Ref) and expr.path[0] == mapping.source_object:
            ET.SubElement(
                copy,
                "from",
                {"variable": mapping.source_object, "part": ".".join(expr.path[1:])},
            )
        elif isinstance(expr, Lit):
            ET.SubElement(copy, "from", {"expression": print_expr(expr)})
        else:
            ET.SubElement(copy, "from", {"expression": print_expr(expr)})
        ET.SubElement(copy, "to", {"variable": mapping.target_object, "part": rule.to})
    return assign


def _pick_input_variable(diagram: Diagram, node_id: str) -> str | None:
    inputs = sorted(
        {io.object for io in node_inputs(diagram, node_id) if io.channel != "message"}
    )
    if not inputs:
        return None
    mapping_targets = {m.target_object for m in diagram.mappings}
    # a mapping-produced input is the service's actual request format
    for obj in inputs:
        if obj in mapping_targets:
            return obj
    return inputs[0]


def _pick_output_variable(diagram: Diagram, node_id: str) -> str | None:
    outputs = sorted(
        {io.object for io in node_outputs(diagram, node_id) if io.channel == "sequence"}
    )
    return outputs[0] if outputs else None


def _replies_to_starter(diagram: Diagram, pool, node_id: str) -> bool:
    """True when the node answers the pool's start message over a message flow
    back to the sending participant."""
    start_sources: set[str] = set()
    start_ids = {n.id for n in pool.iter_nodes() if n.kind == "start_event_message"}
    for flow in diagram.message_flows:
        if flow.target in start_ids:
            src_pool = diagram.pool_of(flow.source)
            start_sources.add(src_pool.id if src_pool is not None else flow.source)
    if not start_sources:
        return False
    for flow in diagram.message_flows:
        if flow.source != node_id:
            continue
        dst_pool = diagram.pool_of(flow.target)
        dst = dst_pool.id if dst_pool is not None else flow.target
        if dst in start_sources:
            return True
    return False


def _node_element(diagram: Diagram, pool, node: Node, warnings: list[str]) -> list[ET.Element]:
    """Elements for one node: its mapping assigns followed by its activity."""
    elements: list[ET.Element] = []
    input_objects = {io.object for io in node_inputs(diagram, node.id)}
    for mapping in sorted(diagram.mappings, key=lambda m: m.id):
        if mapping.target_object in input_objects:
            elements.append(_assign_for_mapping(diagram, mapping.id))

    if node.kind == "start_event_message":
        attrs = {
            "name": node.name,
            "partnerLink": PLACEHOLDER_PARTNER_LINK,
            "portType": PLACEHOLDER_PORT_TYPE,
            "operation": "receive",
            "createInstance": "yes",
        }
        outputs = _pick_output_variable(diagram, node.id)
        if outputs:
            attrs["variable"] = outputs
        elements.append(ET.Element("receive", attrs))
    elif node.kind in ("task", "sub_process"):
        if _replies_to_starter(diagram, pool, node.id):
            attrs = {
                "name": node.name,
                "partnerLink": PLACEHOLDER_PARTNER_LINK,
                "portType": PLACEHOLDER_PORT_TYPE,
                "operation": "reply",
            }
            out = _pick_output_variable(diagram, node.id)
            if out:
                attrs["variable"] = out
            elements.append(ET.Element("reply", attrs))
        else:
            attrs = {
                "name": node.name,
                "partnerLink": PLACEHOLDER_PARTNER_LINK,
                "portType": PLACEHOLDER_PORT_TYPE,
                "operation": "execute",
            }
            invar = _pick_input_variable(diagram, node.id)
            outvar = _pick_output_variable(diagram, node.id)
            if invar:
                attrs["inputVariable"] = invar
            if outvar:
                attrs["outputVariable"] = outvar
            elements.append(ET.Element("invoke", attrs))
    elif node.kind == "intermediate_message":
        elements.append(
            ET.Element(
                "receive",
                {
                    "name": node.name,
                    "partnerLink": PLACEHOLDER_PARTNER_LINK,
                    "portType": PLACEHOLDER_PORT_TYPE,
                    "operation": "receive",
                },
            )
        )
    # start_event_none, end_event and gateways emit no standalone activity
    return elements


def _successors(pool, node_id: str) -> list:
    return sorted(
        (f for f in pool.sequence_flows if f.source == node_id), key=lambda f: f.id
    )


def _reachable(pool, node_id: str) -> set[str]:
    seen = {node_id}
    stack = [node_id]
    while stack:
        current = stack.pop()
        for flow in _successors(pool, current):
            if flow.target not in seen:
                seen.add(flow.target)
                stack.append(flow.target)
    return seen


def _find_join(pool, branch_heads: list[str]) -> str | None:
    """First node reachable from every branch head (BFS order of the first
    branch); assumes structured split/join regions."""
    reach_sets = [_reachable(pool, head) for head in branch_heads]
    common = set.intersection(*reach_sets) if reach_sets else set()
    # BFS from the first head to pick the nearest common node
    order = []
    seen = {branch_heads[0]}
    queue = [branch_heads[0]]
    while queue:
        current = queue.pop(0)
        order.append(current)
        for flow in _successors(pool, current):
            if flow.target not in seen:
                seen.add(flow.target)
                queue.append(flow.target)
    for node_id in order:
        if node_id in common and node_id not in branch_heads:
            return node_id
    return None


class _SkeletonBuilder:
    def __init__(self, diagram: Diagram, pool, warnings: list[str]) -> None:
        self.diagram = diagram
        self.pool = pool
        self.warnings = warnings
        self.emitted: set[str] = set()

    def render_chain(self, start_id: str, stop_id: str | None) -> list[ET.Element]:
        """Render from *start_id* (inclusive) up to *stop_id* (exclusive)."""
        elements: list[ET.Element] = []
        current: str | None = start_id
        while current is not None and current != stop_id:
            if current in self.emitted:
                break
            self.emitted.add(current)
            node = self.diagram.node(current)
            if node is None:
                break
            if node.kind == "gateway_parallel":
                nexts = _successors(self.pool, current)
                heads = [f.target for f in nexts]
                if len(heads) <= 1:
                    current = heads[0] if heads else None
                    continue
                join = _find_join(self.pool, heads)
                flow_el = ET.Element("flow", {"name": node.name or node.id})
                for head in heads:
                    branch = self.render_chain(head, join)
                    seq = ET.Element("sequence")
                    seq.extend(branch)
                    flow_el.append(seq)
                elements.append(flow_el)
                if join is not None:
                    self.emitted.add(join)  # the join gateway itself emits nothing
                    joins = _successors(self.pool, join)
                    current = joins[0].target if joins else None
                else:
                    current = None
                continue
            if node.kind == "gateway_exclusive_data":
                elements.append(self.render_exclusive(node))
                current = None
                continue
            elements.extend(_node_element(self.diagram, self.pool, node, self.warnings))
            nexts = _successors(self.pool, current)
            current = nexts[0].target if nexts else None
        return elements

    def render_exclusive(self, node: Node) -> ET.Element:
        outgoing = _successors(self.pool, node.id)
        guarded = [f for f in outgoing if f.guard is not None]
        defaults = [f for f in outgoing if f.guard is None]
        heads = [f.target for f in outgoing]
        join = _find_join(self.pool, heads) if len(heads) > 1 else None
        if_el = ET.Element("if", {"name": node.name or node.id})
        if guarded:
            cond = ET.SubElement(if_el, "condition")
            cond.text = print_expr(guarded[0].guard)
            seq = ET.SubElement(if_el, "sequence")
            seq.extend(self.render_chain(guarded[0].target, join))
            for extra in guarded[1:]:
                elseif = ET.SubElement(if_el, "elseif")
                cond = ET.SubElement(elseif, "condition")
                cond.text = print_expr(extra.guard)
                seq = ET.SubElement(elseif, "sequence")
                seq.extend(self.render_chain(extra.target, join))
        for default in defaults[:1]:
            else_el = ET.SubElement(if_el, "else")
            seq = ET.SubElement(else_el, "sequence")
            seq.extend(self.render_chain(default.target, join))
        if join is not None:
            wrapper = ET.Element("sequence")
            wrapper.append(if_el)
            wrapper.extend(self.render_chain(join, None))
            return wrapper
        return if_el


def _emit_pool(diagram: Diagram, pool, warnings: list[str]) -> ET.Element | None:
    starts = sorted(
        (n for n in pool.iter_nodes() if n.kind in ("start_event_none", "start_event_message")),
        key=lambda n: n.id,
    )
    if not starts:
        return None
    builder = _SkeletonBuilder(diagram, pool, warnings)
    seq = ET.Element("sequence")
    for start in starts:
        seq.extend(builder.render_chain(start.id, None))
    return seq
