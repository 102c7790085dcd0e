"""In-memory metamodel for data-extended BPMN diagrams.

The diagram is the single source of truth for every other module: pools of
nodes and flows, data stores with ER-style internal structure, structured
data objects, explicit data flows, and data mappings. Diagrams are treated
as immutable after construction; the constructor rejects duplicate
identifiers and dangling flow endpoints, while the softer well-formedness
rules live in :mod:`bpdmn.validator`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .expr import Expression, Value

NODE_KINDS = {
    "task",
    "sub_process",
    "gateway_exclusive_data",
    "gateway_parallel",
    "start_event_none",
    "start_event_message",
    "end_event",
    "intermediate_message",
}

START_KINDS = {"start_event_none", "start_event_message"}

OBJECT_STEREOTYPES = {"generic", "document", "product", "message"}
STORE_ICONS = {"database", "warehouse", "folder"}
SCALAR_VTYPES = {"string", "number", "boolean"}
VTYPES = SCALAR_VTYPES | {"record"}


class ModelError(Exception):
    """Structural violation detected while building a diagram."""


@dataclass
class Variable:
    name: str  # dot-qualified path allowed, e.g. "Device.deviceID"
    vtype: str = "string"

    def __post_init__(self) -> None:
        if not self.name or any(not seg for seg in self.name.split(".")):
            raise ModelError(f"invalid variable name {self.name!r}")
        if self.vtype not in VTYPES:
            raise ModelError(f"invalid variable type {self.vtype!r}")


@dataclass
class ObjectAttachment:
    object: str  # object id
    direction: str  # 'input' | 'output'
    optional: bool = False

    def __post_init__(self) -> None:
        if self.direction not in ("input", "output"):
            raise ModelError(f"invalid attachment direction {self.direction!r}")


@dataclass
class SequenceFlow:
    id: str
    source: str
    target: str
    attachments: list[ObjectAttachment] = field(default_factory=list)
    guard: Expression | None = None

    def __post_init__(self) -> None:
        if self.source == self.target:
            raise ModelError(f"flow {self.id}: source equals target")


@dataclass
class MessageFlow:
    id: str
    source: str  # node id, or pool id for a black-box pool
    target: str
    attachments: list[ObjectAttachment] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.source == self.target:
            raise ModelError(f"message flow {self.id}: source equals target")


@dataclass
class ExplicitDataFlow:
    """Dashed-line data connector between a store and a node or two nodes."""

    id: str
    source: str  # node id or store id
    target: str  # node id or store id
    object: str
    optional: bool = False

    def __post_init__(self) -> None:
        if self.source == self.target:
            raise ModelError(f"data flow {self.id}: source equals target")


@dataclass
class Node:
    id: str
    name: str
    kind: str
    children: list[Node] = field(default_factory=list)
    local_stores: list[str] = field(default_factory=list)
    condition: Expression | None = None
    multi_instance: bool = False

    def __post_init__(self) -> None:
        if self.kind not in NODE_KINDS:
            raise ModelError(f"node {self.id}: unknown kind {self.kind!r}")
        if self.children and self.kind != "sub_process":
            raise ModelError(f"node {self.id}: only sub-processes may have children")
        if self.local_stores and self.kind != "sub_process":
            raise ModelError(f"node {self.id}: only sub-processes may declare local stores")
        if self.condition is not None and self.kind != "gateway_exclusive_data":
            raise ModelError(f"node {self.id}: condition allowed only on data-based gateways")
        if self.multi_instance and self.kind != "task":
            raise ModelError(f"node {self.id}: multi-instance marker allowed only on tasks")


@dataclass
class Pool:
    id: str
    name: str
    nodes: list[Node] = field(default_factory=list)
    sequence_flows: list[SequenceFlow] = field(default_factory=list)
    explicit_data_flows: list[ExplicitDataFlow] = field(default_factory=list)

    def iter_nodes(self):
        stack = list(self.nodes)
        while stack:
            node = stack.pop(0)
            yield node
            stack = node.children + stack


@dataclass
class Entity:
    name: str
    fields: list[Variable] = field(default_factory=list)

    def __post_init__(self) -> None:
        names = [f.name for f in self.fields]
        if len(names) != len(set(names)):
            raise ModelError(f"entity {self.name}: duplicate field names")


@dataclass
class Relationship:
    name: str
    left: str  # entity name
    right: str


@dataclass
class Generalization:
    parent: str  # entity name
    child: str

    def __post_init__(self) -> None:
        if self.parent == self.child:
            raise ModelError(f"generalization: {self.parent} cannot generalize itself")


@dataclass
class Scope:
    """Store visibility: the whole diagram, or one sub-process subtree."""

    kind: str  # 'diagram' | 'sub_process'
    sub_process: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("diagram", "sub_process"):
            raise ModelError(f"invalid scope kind {self.kind!r}")
        if self.kind == "sub_process" and not self.sub_process:
            raise ModelError("sub-process scope requires a node id")

    @classmethod
    def diagram(cls) -> Scope:
        return cls("diagram")

    @classmethod
    def of(cls, node_id: str) -> Scope:
        return cls("sub_process", node_id)


DIAGRAM_SCOPE = Scope.diagram


@dataclass
class DataStore:
    id: str
    name: str
    icon: str = "database"  # 'database' | 'warehouse' | 'folder' | custom label
    entities: list[Entity] = field(default_factory=list)
    relationships: list[Relationship] = field(default_factory=list)
    generalizations: list[Generalization] = field(default_factory=list)
    scope: Scope = field(default_factory=Scope.diagram)
    collapsed: bool = False

    @property
    def custom_icon(self) -> bool:
        return self.icon not in STORE_ICONS

    def entity(self, name: str) -> Entity | None:
        for e in self.entities:
            if e.name == name:
                return e
        return None

    def qualified_field_names(self) -> set[str]:
        """All ``Entity.field`` names, including fields inherited through
        (acyclic) generalizations."""
        own: dict[str, set[str]] = {e.name: {f.name for f in e.fields} for e in self.entities}
        parents: dict[str, list[str]] = {}
        for g in self.generalizations:
            parents.setdefault(g.child, []).append(g.parent)

        def effective(name: str, seen: frozenset[str]) -> set[str]:
            if name in seen or name not in own:
                return set()
            fields = set(own[name])
            for p in parents.get(name, []):
                fields |= effective(p, seen | {name})
            return fields

        result: set[str] = set()
        for e in self.entities:
            for f in effective(e.name, frozenset()):
                result.add(f"{e.name}.{f}")
        return result


@dataclass
class DataObject:
    id: str
    name: str
    stereotype: str = "generic"  # known kind or custom label
    physicality: str = "digital"  # 'digital' | 'physical'
    variables: list[Variable] = field(default_factory=list)
    url: str | None = None
    state: str | None = None  # inert BPMN 1.2 object state, kept for compatibility
    origin_store: str | None = None

    def __post_init__(self) -> None:
        if self.physicality not in ("digital", "physical"):
            raise ModelError(f"object {self.id}: invalid physicality {self.physicality!r}")

    def variable_names(self) -> set[str]:
        return {v.name for v in self.variables}


@dataclass
class CopyRule:
    from_expr: Expression
    to: str  # variable path in the target object


@dataclass
class DataMapping:
    id: str
    source_object: str
    target_object: str
    rules: list[CopyRule] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.rules:
            raise ModelError(f"mapping {self.id}: rules must be non-empty")


# ---------------------------------------------------------------------------
# Task behaviors (simulation configuration carried alongside the diagram)


@dataclass
class Effect:
    """Assignment ``object.path := expression`` run when a task fires."""

    target_object: str
    target_path: str
    expr: Expression


@dataclass
class StoreInsert:
    store: str
    entity: str
    assignments: dict[str, Expression]  # field name -> expression


@dataclass
class StoreRead:
    store: str
    entity: str
    object: str  # object to bind the record into
    filter: Expression | None = None


@dataclass
class TaskBehavior:
    effects: list[Effect] = field(default_factory=list)
    store_actions: list[StoreInsert | StoreRead] = field(default_factory=list)
    instances: int = 1  # >1 only for multi-instance tasks


# ---------------------------------------------------------------------------
# Diagram


@dataclass
class Diagram:
    id: str
    pools: list[Pool] = field(default_factory=list)
    stores: list[DataStore] = field(default_factory=list)
    objects: list[DataObject] = field(default_factory=list)
    mappings: list[DataMapping] = field(default_factory=list)
    message_flows: list[MessageFlow] = field(default_factory=list)
    behaviors: dict[str, TaskBehavior] = field(default_factory=dict)
    start_inputs: dict[str, dict[str, Value]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self._check_unique_ids()
        self._check_references()

    # -- construction checks

    def _check_unique_ids(self) -> None:
        seen: set[str] = set()

        def add(kind: str, ident: str) -> None:
            if ident in seen:
                raise ModelError(f"duplicate identifier {ident!r} ({kind})")
            seen.add(ident)

        add("diagram", self.id)
        for pool in self.pools:
            add("pool", pool.id)
            for node in pool.iter_nodes():
                add("node", node.id)
            for flow in pool.sequence_flows:
                add("sequence flow", flow.id)
            for flow in pool.explicit_data_flows:
                add("data flow", flow.id)
        for store in self.stores:
            add("store", store.id)
        for obj in self.objects:
            add("object", obj.id)
        for mapping in self.mappings:
            add("mapping", mapping.id)
        for flow in self.message_flows:
            add("message flow", flow.id)

    def _check_references(self) -> None:
        node_ids = {n.id for n in self.iter_nodes()}
        store_ids = {s.id for s in self.stores}
        object_ids = {o.id for o in self.objects}
        pool_ids = {p.id for p in self.pools}

        for pool in self.pools:
            pool_nodes = {n.id for n in pool.iter_nodes()}
            for flow in pool.sequence_flows:
                for end in (flow.source, flow.target):
                    if end not in pool_nodes:
                        raise ModelError(
                            f"sequence flow {flow.id}: endpoint {end!r} is not a node of pool {pool.id}"
                        )
                for att in flow.attachments:
                    if att.object not in object_ids:
                        raise ModelError(f"flow {flow.id}: unknown object {att.object!r}")
            for flow in pool.explicit_data_flows:
                ends_stores = [e for e in (flow.source, flow.target) if e in store_ids]
                if len(ends_stores) == 2:
                    raise ModelError(f"data flow {flow.id}: both endpoints are stores")
                for end in (flow.source, flow.target):
                    if end not in node_ids and end not in store_ids:
                        raise ModelError(f"data flow {flow.id}: unknown endpoint {end!r}")
                if flow.object not in object_ids:
                    raise ModelError(f"data flow {flow.id}: unknown object {flow.object!r}")
            for node in pool.iter_nodes():
                for sid in node.local_stores:
                    if sid not in store_ids:
                        raise ModelError(f"node {node.id}: unknown local store {sid!r}")

        for flow in self.message_flows:
            for end in (flow.source, flow.target):
                if end not in node_ids and end not in pool_ids:
                    raise ModelError(f"message flow {flow.id}: unknown endpoint {end!r}")
            for att in flow.attachments:
                if att.object not in object_ids:
                    raise ModelError(f"message flow {flow.id}: unknown object {att.object!r}")

        for obj in self.objects:
            if obj.origin_store is not None and obj.origin_store not in store_ids:
                raise ModelError(f"object {obj.id}: unknown origin store {obj.origin_store!r}")

        for mapping in self.mappings:
            if mapping.source_object not in object_ids:
                raise ModelError(f"mapping {mapping.id}: unknown source object")
            if mapping.target_object not in object_ids:
                raise ModelError(f"mapping {mapping.id}: unknown target object")

        for store in self.stores:
            if store.scope.kind == "sub_process" and store.scope.sub_process not in node_ids:
                raise ModelError(f"store {store.id}: unknown scope node {store.scope.sub_process!r}")

    # -- lookups

    def iter_nodes(self):
        for pool in self.pools:
            yield from pool.iter_nodes()

    def node(self, node_id: str) -> Node | None:
        for n in self.iter_nodes():
            if n.id == node_id:
                return n
        return None

    def pool_of(self, element_id: str) -> Pool | None:
        """Pool containing the node, or the pool itself for a pool id."""
        for pool in self.pools:
            if pool.id == element_id:
                return pool
            for n in pool.iter_nodes():
                if n.id == element_id:
                    return pool
        return None

    def store(self, store_id: str) -> DataStore | None:
        for s in self.stores:
            if s.id == store_id:
                return s
        return None

    def object(self, object_id: str) -> DataObject | None:
        for o in self.objects:
            if o.id == object_id:
                return o
        return None

    def is_black_box_pool(self, element_id: str) -> bool:
        for pool in self.pools:
            if pool.id == element_id:
                return not pool.nodes
        return False


class NotFoundError(KeyError):
    """Raised when an operation references an element missing from a diagram."""


# ---------------------------------------------------------------------------
# Provenance / consumption records


class LinkKind(str, Enum):
    STORE_EXTRACTION = "store_extraction"
    ACTIVITY_OUTPUT = "activity_output"
    MESSAGE_RECEIPT = "message_receipt"
    MESSAGE_START = "message_start"
    STORE_INSERTION = "store_insertion"
    ACTIVITY_INPUT = "activity_input"
    MESSAGE_SEND = "message_send"


@dataclass(frozen=True)
class ObjectLink:
    """One place an object is produced or consumed.

    ``element`` is the producing/consuming node or store; ``via`` is the
    flow carrying the object.
    """

    kind: LinkKind
    element: str
    via: str


def object_sources(diagram: Diagram, object_id: str) -> list[ObjectLink]:
    """Every place *object_id* is produced: store extraction, activity output,
    message receipt, or message start event."""
    if diagram.object(object_id) is None:
        raise NotFoundError(object_id)
    store_ids = {s.id for s in diagram.stores}
    out: list[ObjectLink] = []
    for pool in diagram.pools:
        for flow in pool.sequence_flows:
            for att in flow.attachments:
                if att.object != object_id or att.direction != "output":
                    continue
                src = diagram.node(flow.source)
                if src is not None and src.kind == "start_event_message":
                    out.append(ObjectLink(LinkKind.MESSAGE_START, flow.source, flow.id))
                else:
                    out.append(ObjectLink(LinkKind.ACTIVITY_OUTPUT, flow.source, flow.id))
        for flow in pool.explicit_data_flows:
            if flow.object != object_id:
                continue
            if flow.source in store_ids:
                out.append(ObjectLink(LinkKind.STORE_EXTRACTION, flow.source, flow.id))
            elif flow.target not in store_ids:
                # node-to-node transfer: produced by the source node
                out.append(ObjectLink(LinkKind.ACTIVITY_OUTPUT, flow.source, flow.id))
    for flow in diagram.message_flows:
        for att in flow.attachments:
            if att.object == object_id and att.direction == "input":
                out.append(ObjectLink(LinkKind.MESSAGE_RECEIPT, flow.target, flow.id))
    return out


def object_targets(diagram: Diagram, object_id: str) -> list[ObjectLink]:
    """Every place *object_id* is consumed: store insertion, activity input,
    or message send. Symmetric to :func:`object_sources`."""
    if diagram.object(object_id) is None:
        raise NotFoundError(object_id)
    store_ids = {s.id for s in diagram.stores}
    out: list[ObjectLink] = []
    for pool in diagram.pools:
        for flow in pool.sequence_flows:
            for att in flow.attachments:
                if att.object == object_id and att.direction == "input":
                    out.append(ObjectLink(LinkKind.ACTIVITY_INPUT, flow.target, flow.id))
        for flow in pool.explicit_data_flows:
            if flow.object != object_id:
                continue
            if flow.target in store_ids:
                out.append(ObjectLink(LinkKind.STORE_INSERTION, flow.target, flow.id))
            elif flow.source not in store_ids:
                out.append(ObjectLink(LinkKind.ACTIVITY_INPUT, flow.target, flow.id))
    for flow in diagram.message_flows:
        for att in flow.attachments:
            if att.object == object_id and att.direction == "output":
                out.append(ObjectLink(LinkKind.MESSAGE_SEND, flow.source, flow.id))
    return out


def resolve_scope(diagram: Diagram, store_id: str) -> set[str]:
    """Node ids permitted to read/write the store: all nodes for a
    diagram-scoped store, the sub-process subtree (including the sub-process
    node itself) otherwise."""
    store = diagram.store(store_id)
    if store is None:
        raise NotFoundError(store_id)
    if store.scope.kind == "diagram":
        return {n.id for n in diagram.iter_nodes()}
    root = diagram.node(store.scope.sub_process)
    if root is None:
        return set()
    result = {root.id}
    stack = list(root.children)
    while stack:
        n = stack.pop()
        result.add(n.id)
        stack.extend(n.children)
    return result


# ---------------------------------------------------------------------------
# Derived views used by the validator, pattern analyzer and simulator


@dataclass(frozen=True)
class NodeIO:
    object: str
    optional: bool
    via: str  # flow id
    channel: str  # 'sequence', 'message', 'store', 'explicit'


def node_inputs(diagram: Diagram, node_id: str) -> list[NodeIO]:
    """Objects consumed by a node, over every channel that can carry data in."""
    store_ids = {s.id for s in diagram.stores}
    out: list[NodeIO] = []
    for pool in diagram.pools:
        for flow in pool.sequence_flows:
            if flow.target != node_id:
                continue
            for att in flow.attachments:
                if att.direction == "input":
                    out.append(NodeIO(att.object, att.optional, flow.id, "sequence"))
        for flow in pool.explicit_data_flows:
            if flow.target != node_id:
                continue
            channel = "store" if flow.source in store_ids else "explicit"
            out.append(NodeIO(flow.object, flow.optional, flow.id, channel))
    for flow in diagram.message_flows:
        if flow.target != node_id:
            continue
        for att in flow.attachments:
            if att.direction == "input":
                out.append(NodeIO(att.object, att.optional, flow.id, "message"))
    return out


def node_outputs(diagram: Diagram, node_id: str) -> list[NodeIO]:
    """Objects produced or emitted by a node."""
    store_ids = {s.id for s in diagram.stores}
    out: list[NodeIO] = []
    for pool in diagram.pools:
        for flow in pool.sequence_flows:
            if flow.source != node_id:
                continue
            for att in flow.attachments:
                if att.direction == "output":
                    out.append(NodeIO(att.object, False, flow.id, "sequence"))
        for flow in pool.explicit_data_flows:
            if flow.source != node_id:
                continue
            channel = "store" if flow.target in store_ids else "explicit"
            out.append(NodeIO(flow.object, False, flow.id, channel))
    for flow in diagram.message_flows:
        if flow.source != node_id:
            continue
        for att in flow.attachments:
            if att.direction == "output":
                out.append(NodeIO(att.object, False, flow.id, "message"))
    return out


def store_readers(diagram: Diagram, store_id: str) -> set[str]:
    """Nodes extracting objects from the store (explicit flows and behaviors)."""
    readers: set[str] = set()
    for pool in diagram.pools:
        for flow in pool.explicit_data_flows:
            if flow.source == store_id:
                readers.add(flow.target)
    for node_id, behavior in diagram.behaviors.items():
        for action in behavior.store_actions:
            if isinstance(action, StoreRead) and action.store == store_id:
                readers.add(node_id)
    return readers


def store_writers(diagram: Diagram, store_id: str) -> set[str]:
    """Nodes inserting objects into the store (explicit flows and behaviors)."""
    writers: set[str] = set()
    for pool in diagram.pools:
        for flow in pool.explicit_data_flows:
            if flow.target == store_id:
                writers.add(flow.source)
    for node_id, behavior in diagram.behaviors.items():
        for action in behavior.store_actions:
            if isinstance(action, StoreInsert) and action.store == store_id:
                writers.add(node_id)
    return writers


def reaches(diagram: Diagram, source: str, target: str) -> bool:
    """Directed reachability over sequence, message and explicit data flows.

    Stores participate as graph nodes; every element reaches itself.
    """
    if source == target:
        return True
    edges: dict[str, set[str]] = {}

    def add(a: str, b: str) -> None:
        edges.setdefault(a, set()).add(b)

    for pool in diagram.pools:
        for flow in pool.sequence_flows:
            add(flow.source, flow.target)
        for flow in pool.explicit_data_flows:
            add(flow.source, flow.target)
    for flow in diagram.message_flows:
        add(flow.source, flow.target)

    seen = {source}
    stack = [source]
    while stack:
        current = stack.pop()
        for nxt in edges.get(current, ()):
            if nxt == target:
                return True
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return False
