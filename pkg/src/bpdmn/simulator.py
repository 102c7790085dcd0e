"""Deterministic token-and-data execution engine.

A node is enabled when its join condition holds (a token on every incoming
sequence flow for tasks and parallel joins, on at least one for exclusive
merges) and every non-optional input object is available: already bound,
deliverable from a store, waiting in the pool inbox, or producible by a
data mapping whose source is available. The default scheduling policy fires
the enabled node with the smallest id, which makes runs reproducible; a
seeded random policy is available for exploratory runs.

Store reads are non-destructive, inserts append, and bindings persist for
the whole case once produced. An optional input that is absent when its
consumer fires is bound to null and never awaited.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

from .expr import ExprError, Value, eval_expr
from .model import (
    Diagram,
    Node,
    NodeIO,
    StoreInsert,
    StoreRead,
    TaskBehavior,
    node_inputs,
    node_outputs,
)


class SimulationError(Exception):
    pass


class InitializationError(SimulationError):
    pass


class StuckGatewayError(SimulationError):
    pass


Record = dict[str, Value]
Bindings = dict[str, dict[str, Value]]  # object id -> variable path -> value


@dataclass
class Message:
    flow: str  # message flow id
    objects: Bindings  # snapshot of the attached objects


@dataclass
class ExecutionState:
    tokens: dict[str, int] = field(default_factory=dict)  # sequence flow id -> count
    bindings: Bindings = field(default_factory=dict)
    stores: dict[str, list[Record]] = field(default_factory=dict)  # records as Entity.field maps
    inbox: dict[str, list[Message]] = field(default_factory=dict)  # pool id -> queue
    completed: set[str] = field(default_factory=set)
    step_count: int = 0
    pending_starts: set[str] = field(default_factory=set)  # message starts awaiting a message

    def token_total(self) -> int:
        return sum(self.tokens.values())

    def store_size(self, store_id: str) -> int:
        return len(self.stores.get(store_id, []))


# ---------------------------------------------------------------------------
# Trace


@dataclass(frozen=True)
class NodeFired:
    step: int
    node: str

    def __str__(self) -> str:
        return f"step {self.step}: fired {self.node}"


@dataclass(frozen=True)
class ObjectBound:
    step: int
    object: str
    variable: str
    value: Value

    def __str__(self) -> str:
        return f"step {self.step}: bound {self.object}.{self.variable} = {self.value!r}"


@dataclass(frozen=True)
class StoreChanged:
    step: int
    store: str
    entity: str
    record: tuple[tuple[str, Value], ...]

    def __str__(self) -> str:
        fields = ", ".join(f"{k}={v!r}" for k, v in self.record)
        return f"step {self.step}: store {self.store} += {self.entity}({fields})"


@dataclass(frozen=True)
class MessageSent:
    step: int
    flow: str

    def __str__(self) -> str:
        return f"step {self.step}: message sent on {self.flow}"


@dataclass(frozen=True)
class MessageReceived:
    step: int
    flow: str

    def __str__(self) -> str:
        return f"step {self.step}: message received on {self.flow}"


TraceEvent = NodeFired | ObjectBound | StoreChanged | MessageSent | MessageReceived
Trace = list[TraceEvent]


@dataclass
class RunResult:
    trace: Trace
    status: str  # 'completed' | 'deadlocked' | 'step_limit'
    state: ExecutionState

    def fired_nodes(self) -> set[str]:
        return {e.node for e in self.trace if isinstance(e, NodeFired)}


def render_trace(trace: Trace) -> str:
    return "\n".join(str(e) for e in trace) + ("\n" if trace else "")


# ---------------------------------------------------------------------------
# Initialization


def _env_of(bindings: Bindings) -> dict[str, Value]:
    env: dict[str, Value] = {}
    for obj, variables in bindings.items():
        for path, value in variables.items():
            env[f"{obj}.{path}"] = value
    return env


def _start_objects(diagram: Diagram, node_id: str) -> list[NodeIO]:
    return [io for io in node_outputs(diagram, node_id) if io.channel == "sequence"]


def init(
    diagram: Diagram,
    behaviors: dict[str, TaskBehavior] | None = None,
    start_inputs: dict[str, dict[str, Value]] | None = None,
) -> ExecutionState:
    """Build the initial state: tokens on the outgoing flows of ready start
    events, message-start objects bound from *start_inputs*. Message starts
    fed by an internal message flow stay pending until the message arrives.
    """
    if behaviors is None:
        behaviors = diagram.behaviors
    if start_inputs is None:
        start_inputs = diagram.start_inputs
    if not any(True for _ in diagram.iter_nodes()):
        raise InitializationError("no start event: diagram has no nodes")

    state = ExecutionState()
    state.inbox = {p.id: [] for p in diagram.pools}
    internal_message_targets = {f.target for f in diagram.message_flows}

    for pool in diagram.pools:
        for node in pool.iter_nodes():
            if node.kind not in ("start_event_none", "start_event_message"):
                continue
            if node.kind == "start_event_message":
                outputs = _start_objects(diagram, node.id)
                supplied = [io for io in outputs if io.object in start_inputs]
                if node.id in internal_message_targets and not supplied:
                    state.pending_starts.add(node.id)
                    continue
                missing = [
                    io.object
                    for io in outputs
                    if not io.optional and io.object not in start_inputs
                ]
                if missing and node.id not in internal_message_targets:
                    raise InitializationError(
                        f"start event {node.id}: missing required start input for {missing}"
                    )
                for io in outputs:
                    obj = diagram.object(io.object)
                    given = start_inputs.get(io.object, {})
                    bound: dict[str, Value] = {}
                    if obj is not None:
                        for var in obj.variables:
                            if var.vtype == "record":
                                continue
                            bound[var.name] = given.get(var.name)
                    for key, value in given.items():
                        bound[key] = value
                    state.bindings[io.object] = bound
            state.completed.add(node.id)
            for flow in pool.sequence_flows:
                if flow.source == node.id:
                    state.tokens[flow.id] = state.tokens.get(flow.id, 0) + 1
    return state


# ---------------------------------------------------------------------------
# Enablement


def _incoming_flows(diagram: Diagram, node_id: str):
    for pool in diagram.pools:
        for flow in pool.sequence_flows:
            if flow.target == node_id:
                yield flow


def _outgoing_flows(diagram: Diagram, node_id: str):
    for pool in diagram.pools:
        for flow in pool.sequence_flows:
            if flow.source == node_id:
                yield flow


def _store_read_available(
    state: ExecutionState, diagram: Diagram, behavior: TaskBehavior | None, object_id: str
) -> bool:
    if behavior is not None:
        for action in behavior.store_actions:
            if isinstance(action, StoreRead) and action.object == object_id:
                return _matching_record(state, action) is not None
    # no configured read: the extraction is conceptual, treat as available
    return True


def _matching_record(state: ExecutionState, action: StoreRead) -> Record | None:
    env_base = _env_of(state.bindings)
    for record in state.stores.get(action.store, []):
        if not record.get("__entity__") == action.entity:
            continue
        if action.filter is None:
            return record
        env = dict(env_base)
        for key, value in record.items():
            if key != "__entity__":
                env[key] = value
        try:
            if eval_expr(action.filter, env) is True:
                return record
        except ExprError:
            continue
    return None


def _input_available(
    state: ExecutionState,
    diagram: Diagram,
    node: Node,
    io: NodeIO,
    behavior: TaskBehavior | None,
    visiting: frozenset[str],
) -> bool:
    if io.object in state.bindings:
        return True
    if io.channel == "message":
        pool = diagram.pool_of(node.id)
        if pool is not None:
            for msg in state.inbox.get(pool.id, []):
                if msg.flow == io.via and io.object in msg.objects:
                    return True
        return False
    if io.channel == "store":
        return _store_read_available(state, diagram, behavior, io.object)
    # sequence or explicit node-to-node channel: maybe producible by a mapping
    for mapping in diagram.mappings:
        if mapping.target_object != io.object or mapping.id in visiting:
            continue
        if mapping.source_object in state.bindings:
            return True
        for other in node_inputs(diagram, node.id):
            if other.object == mapping.source_object and _input_available(
                state, diagram, node, other, behavior, visiting | {mapping.id}
            ):
                return True
    return False


def enabled(state: ExecutionState, diagram: Diagram) -> set[str]:
    """Nodes ready to fire under the join and data-availability conditions."""
    behaviors = diagram.behaviors
    ready: set[str] = set()
    for node in diagram.iter_nodes():
        incoming = list(_incoming_flows(diagram, node.id))
        if not incoming:
            if node.id in state.pending_starts:
                pool = diagram.pool_of(node.id)
                flow_ids = {f.id for f in diagram.message_flows if f.target == node.id}
                if pool is not None and any(
                    msg.flow in flow_ids for msg in state.inbox.get(pool.id, [])
                ):
                    ready.add(node.id)
            continue
        if node.id in state.completed and node.kind in (
            "start_event_none",
            "start_event_message",
        ):
            continue
        if node.kind == "gateway_exclusive_data":
            has_tokens = any(state.tokens.get(f.id, 0) > 0 for f in incoming)
        else:
            has_tokens = all(state.tokens.get(f.id, 0) > 0 for f in incoming)
        if not has_tokens:
            continue
        behavior = behaviors.get(node.id)
        inputs_ok = all(
            io.optional
            or _input_available(state, diagram, node, io, behavior, frozenset())
            for io in node_inputs(diagram, node.id)
        )
        if inputs_ok:
            ready.add(node.id)
    return ready


# ---------------------------------------------------------------------------
# Firing


def _bind(state: ExecutionState, trace: Trace, step: int, obj: str, path: str, value: Value) -> None:
    state.bindings.setdefault(obj, {})[path] = value
    trace.append(ObjectBound(step, obj, path, value))


def _apply_mappings(
    state: ExecutionState, diagram: Diagram, node: Node, trace: Trace, step: int
) -> None:
    input_objects = {io.object for io in node_inputs(diagram, node.id)}
    for mapping in sorted(diagram.mappings, key=lambda m: m.id):
        if mapping.target_object not in input_objects:
            continue
        if mapping.source_object not in state.bindings:
            continue
        env = _env_of(state.bindings)
        for rule in mapping.rules:
            try:
                value = eval_expr(rule.from_expr, env)
            except ExprError as exc:
                raise SimulationError(f"mapping {mapping.id}: {exc}") from exc
            _bind(state, trace, step, mapping.target_object, rule.to, value)
            env[f"{mapping.target_object}.{rule.to}"] = value


def _run_behavior(
    state: ExecutionState, diagram: Diagram, node: Node, behavior: TaskBehavior, trace: Trace, step: int
) -> None:
    instances = max(behavior.instances, 1) if node.multi_instance else 1
    for index in range(1, instances + 1):
        env = _env_of(state.bindings)
        env["instance.index"] = index
        for effect in behavior.effects:
            try:
                value = eval_expr(effect.expr, env)
            except ExprError as exc:
                raise SimulationError(f"behavior of {node.id}: {exc}") from exc
            _bind(state, trace, step, effect.target_object, effect.target_path, value)
            env[f"{effect.target_object}.{effect.target_path}"] = value
        for action in behavior.store_actions:
            if isinstance(action, StoreInsert):
                record: Record = {"__entity__": action.entity}
                for fname, fexpr in sorted(action.assignments.items()):
                    try:
                        record[f"{action.entity}.{fname}"] = eval_expr(fexpr, env)
                    except ExprError as exc:
                        raise SimulationError(f"insert by {node.id}: {exc}") from exc
                state.stores.setdefault(action.store, []).append(record)
                trace.append(
                    StoreChanged(
                        step,
                        action.store,
                        action.entity,
                        tuple(
                            (k, v) for k, v in sorted(record.items()) if k != "__entity__"
                        ),
                    )
                )
            else:
                record = _matching_record(state, action)
                if record is None:
                    continue
                obj = diagram.object(action.object)
                if obj is None:
                    continue
                for var in obj.variables:
                    if var.vtype == "record":
                        continue
                    if var.name in record:
                        _bind(state, trace, step, action.object, var.name, record[var.name])
                        env[f"{action.object}.{var.name}"] = record[var.name]
                state.bindings.setdefault(action.object, {})


def _receive_messages(
    state: ExecutionState, diagram: Diagram, node: Node, trace: Trace, step: int
) -> None:
    pool = diagram.pool_of(node.id)
    if pool is None:
        return
    incoming_flow_ids = {f.id for f in diagram.message_flows if f.target == node.id}
    queue = state.inbox.get(pool.id, [])
    remaining: list[Message] = []
    for msg in queue:
        if msg.flow in incoming_flow_ids:
            trace.append(MessageReceived(step, msg.flow))
            for obj, variables in msg.objects.items():
                state.bindings.setdefault(obj, {})
                for path, value in variables.items():
                    _bind(state, trace, step, obj, path, value)
            incoming_flow_ids.discard(msg.flow)  # one message per flow per firing
        else:
            remaining.append(msg)
    state.inbox[pool.id] = remaining


def _send_messages(
    state: ExecutionState, diagram: Diagram, node: Node, trace: Trace, step: int
) -> None:
    for flow in diagram.message_flows:
        if flow.source != node.id:
            continue
        snapshot: Bindings = {}
        for att in flow.attachments:
            if att.direction == "output":
                snapshot[att.object] = dict(state.bindings.get(att.object, {}))
        target_pool = diagram.pool_of(flow.target)
        trace.append(MessageSent(step, flow.id))
        if target_pool is not None and target_pool.nodes:
            state.inbox.setdefault(target_pool.id, []).append(Message(flow.id, snapshot))
        # messages to black-box pools leave the modeled world


def _emit_tokens(
    state: ExecutionState, diagram: Diagram, node: Node, trace: Trace, step: int
) -> None:
    outgoing = sorted(_outgoing_flows(diagram, node.id), key=lambda f: f.id)
    if not outgoing:
        return
    if node.kind == "gateway_exclusive_data":
        env = _env_of(state.bindings)
        default = None
        for flow in outgoing:
            if flow.guard is None:
                if default is None:
                    default = flow
                continue
            try:
                result = eval_expr(flow.guard, env)
            except ExprError as exc:
                raise SimulationError(f"guard of flow {flow.id}: {exc}") from exc
            if result is True:
                state.tokens[flow.id] = state.tokens.get(flow.id, 0) + 1
                return
        if default is None:
            raise StuckGatewayError(f"gateway {node.id}: no true guard and no default flow")
        state.tokens[default.id] = state.tokens.get(default.id, 0) + 1
        return
    for flow in outgoing:
        state.tokens[flow.id] = state.tokens.get(flow.id, 0) + 1


def step(
    state: ExecutionState,
    diagram: Diagram,
    behaviors: dict[str, TaskBehavior] | None = None,
    choose: str | None = None,
) -> tuple[ExecutionState, Trace]:
    """Fire one enabled node (the smallest id unless *choose* names one) and
    return the updated state together with the trace delta."""
    if behaviors is None:
        behaviors = diagram.behaviors
    ready = enabled(state, diagram)
    if not ready:
        raise SimulationError("no node is enabled")
    node_id = choose if choose is not None else min(ready)
    if node_id not in ready:
        raise SimulationError(f"node {node_id} is not enabled")
    node = diagram.node(node_id)
    assert node is not None

    current = state.step_count + 1
    trace: Trace = []
    trace.append(NodeFired(current, node_id))

    # consume tokens
    incoming = sorted(_incoming_flows(diagram, node_id), key=lambda f: f.id)
    if node.kind == "gateway_exclusive_data":
        for flow in incoming:
            if state.tokens.get(flow.id, 0) > 0:
                state.tokens[flow.id] -= 1
                break
    else:
        for flow in incoming:
            if state.tokens.get(flow.id, 0) > 0:
                state.tokens[flow.id] -= 1
    state.tokens = {k: v for k, v in state.tokens.items() if v > 0}

    _receive_messages(state, diagram, node, trace, current)
    state.pending_starts.discard(node_id)

    behavior = behaviors.get(node_id)
    # pre-behavior store reads so effects can see extracted data
    if behavior is not None:
        for action in behavior.store_actions:
            if isinstance(action, StoreRead):
                record = _matching_record(state, action)
                if record is not None:
                    obj = diagram.object(action.object)
                    if obj is not None:
                        for var in obj.variables:
                            if var.vtype != "record" and var.name in record:
                                _bind(state, trace, current, action.object, var.name, record[var.name])
                        state.bindings.setdefault(action.object, {})

    _apply_mappings(state, diagram, node, trace, current)

    # optional inputs that never arrived are bound to null now
    for io in node_inputs(diagram, node_id):
        if io.optional and io.object not in state.bindings:
            obj = diagram.object(io.object)
            state.bindings[io.object] = {}
            if obj is not None:
                for var in obj.variables:
                    if var.vtype != "record":
                        _bind(state, trace, current, io.object, var.name, None)

    if behavior is not None:
        effects_only = replace(
            behavior,
            store_actions=[a for a in behavior.store_actions if isinstance(a, StoreInsert)],
        )
        _run_behavior(state, diagram, node, effects_only, trace, current)

    # every output object is considered produced once the node fires
    for io in node_outputs(diagram, node_id):
        if io.channel != "store":
            state.bindings.setdefault(io.object, {})

    _send_messages(state, diagram, node, trace, current)
    _emit_tokens(state, diagram, node, trace, current)

    state.completed.add(node_id)
    state.step_count = current
    return state, trace


def run(
    diagram: Diagram,
    behaviors: dict[str, TaskBehavior] | None = None,
    start_inputs: dict[str, dict[str, Value]] | None = None,
    max_steps: int = 1000,
    policy: str = "smallest",
    seed: int = 0,
) -> RunResult:
    """Execute until quiescence or the step limit.

    ``policy`` is ``smallest`` (deterministic default) or ``random``
    (seeded uniform choice among enabled nodes).
    """
    if behaviors is None:
        behaviors = diagram.behaviors
    state = init(diagram, behaviors, start_inputs)
    rng = random.Random(seed)
    trace: Trace = []
    # initial bindings (start inputs) appear in the trace at step 0
    for obj in sorted(state.bindings):
        for variable, value in sorted(state.bindings[obj].items()):
            trace.append(ObjectBound(0, obj, variable, value))
    while state.step_count < max_steps:
        ready = enabled(state, diagram)
        if not ready:
            break
        if policy == "random":
            choice = rng.choice(sorted(ready))
        else:
            choice = min(ready)
        state, delta = step(state, diagram, behaviors, choose=choice)
        trace.extend(delta)
    ready = enabled(state, diagram)
    if ready:
        status = "step_limit"
    elif state.token_total() > 0:
        status = "deadlocked"
    else:
        status = "completed"
    return RunResult(trace=trace, status=status, state=state)


# ---------------------------------------------------------------------------
# Post-hoc trace checks and the exhaustive interleaving oracle


def check_data_gating(trace: Trace, diagram: Diagram) -> list[str]:
    """Violations of the data-gating rule found in a trace: a node fired at
    a step where a required input object was not yet bound."""
    violations = []
    bound_step: dict[str, int] = {}
    for event in trace:
        if isinstance(event, ObjectBound) and event.object not in bound_step:
            bound_step[event.object] = event.step
    for event in trace:
        if not isinstance(event, NodeFired):
            continue
        for io in node_inputs(diagram, event.node):
            if io.optional or io.channel == "store":
                continue
            first = bound_step.get(io.object)
            if first is None or first > event.step:
                violations.append(
                    f"node {event.node} fired at step {event.step} "
                    f"with required input {io.object} unbound"
                )
    return violations


def _freeze_state(state: ExecutionState):
    return (
        tuple(sorted(state.tokens.items())),
        tuple(sorted(state.bindings)),
        tuple(sorted((s, len(r)) for s, r in state.stores.items())),
        tuple(sorted((p, len(q)) for p, q in state.inbox.items())),
        tuple(sorted(state.completed)),
    )


def explore_interleavings(
    diagram: Diagram,
    behaviors: dict[str, TaskBehavior] | None = None,
    start_inputs: dict[str, dict[str, Value]] | None = None,
    max_steps: int = 50,
) -> set[frozenset[str]]:
    """Brute-force oracle: the set of fired-node sets over every possible
    firing order. Intended for desk-scale, gateway-free diagrams."""
    if behaviors is None:
        behaviors = diagram.behaviors
    results: set[frozenset[str]] = set()
    seen: set = set()

    def explore(state: ExecutionState, fired: frozenset[str]) -> None:
        key = (_freeze_state(state), fired)
        if key in seen:
            return
        seen.add(key)
        ready = enabled(state, diagram)
        if not ready or state.step_count >= max_steps:
            results.add(fired)
            return
        for choice in sorted(ready):
            clone = ExecutionState(
                tokens=dict(state.tokens),
                bindings={k: dict(v) for k, v in state.bindings.items()},
                stores={k: [dict(r) for r in v] for k, v in state.stores.items()},
                inbox={
                    k: [Message(m.flow, {o: dict(b) for o, b in m.objects.items()}) for m in v]
                    for k, v in state.inbox.items()
                },
                completed=set(state.completed),
                step_count=state.step_count,
                pending_starts=set(state.pending_starts),
            )
            clone, _ = step(clone, diagram, behaviors, choose=choice)
            explore(clone, fired | {choice})

    explore(init(diagram, behaviors, start_inputs), frozenset())
    return results
