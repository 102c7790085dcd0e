"""Seeded random diagram generator for round-trip and robustness tests.

Generated diagrams always satisfy the construction invariants (unique ids,
resolvable references) but are free to violate the soft validation rules —
the serializer and parser must handle both.
"""

from __future__ import annotations

import random
import string

from bpdmn.expr import parse_expr
from bpdmn.model import (
    CopyRule,
    DataMapping,
    DataObject,
    DataStore,
    Diagram,
    Entity,
    ExplicitDataFlow,
    MessageFlow,
    Node,
    ObjectAttachment,
    Pool,
    SequenceFlow,
    Variable,
)

_KINDS = [
    "task",
    "task",
    "task",
    "sub_process",
    "gateway_parallel",
    "intermediate_message",
]


def random_diagram(seed: int) -> Diagram:
    rng = random.Random(seed)
    counter = iter(range(10_000))

    def ident(prefix: str) -> str:
        return f"{prefix}{next(counter)}"

    objects = [
        DataObject(
            ident("obj"),
            "".join(rng.choices(string.ascii_letters, k=rng.randint(1, 8))),
            stereotype=rng.choice(["generic", "document", "product", "message"]),
            variables=[
                Variable(ident("v"), rng.choice(["string", "number", "boolean"]))
                for _ in range(rng.randint(0, 3))
            ],
            url=f"https://example.org/{ident('u')}" if rng.random() < 0.2 else None,
        )
        for _ in range(rng.randint(0, 4))
    ]
    stores = [
        DataStore(
            ident("st"),
            "Store " + str(rng.randint(0, 99)),
            icon=rng.choice(["database", "warehouse", "folder", "custom"]),
            entities=[
                Entity(f"E{k}", [Variable(ident("f")) for _ in range(rng.randint(0, 2))])
                for k in range(rng.randint(0, 2))
            ],
            collapsed=rng.random() < 0.3,
        )
        for _ in range(rng.randint(0, 2))
    ]

    pools = []
    for _ in range(rng.randint(1, 2)):
        nodes = [Node(ident("n"), "Start", "start_event_none")]
        for _ in range(rng.randint(0, 4)):
            kind = rng.choice(_KINDS)
            nodes.append(Node(ident("n"), kind.replace("_", " ").title(), kind))
        nodes.append(Node(ident("n"), "End", "end_event"))

        flows = []
        for a, b in zip(nodes, nodes[1:]):
            atts = []
            if objects and rng.random() < 0.5:
                atts.append(
                    ObjectAttachment(
                        rng.choice(objects).id,
                        rng.choice(["input", "output"]),
                        optional=rng.random() < 0.3,
                    )
                )
            flows.append(SequenceFlow(ident("f"), a.id, b.id, attachments=atts))

        explicit = []
        if stores and objects and rng.random() < 0.5:
            node = rng.choice(nodes)
            store = rng.choice(stores)
            ends = (store.id, node.id) if rng.random() < 0.5 else (node.id, store.id)
            explicit.append(
                ExplicitDataFlow(ident("ef"), *ends, rng.choice(objects).id, optional=rng.random() < 0.2)
            )
        pools.append(
            Pool(ident("p"), "Pool", nodes=nodes, sequence_flows=flows, explicit_data_flows=explicit)
        )

    mappings = []
    if len(objects) >= 2 and rng.random() < 0.5:
        src, dst = rng.sample(objects, 2)
        if src.variables and dst.variables:
            mappings.append(
                DataMapping(
                    ident("m"),
                    src.id,
                    dst.id,
                    [CopyRule(parse_expr(f"{src.id}.{src.variables[0].name}"), dst.variables[0].name)],
                )
            )

    message_flows = []
    if len(pools) == 2 and rng.random() < 0.5:
        message_flows.append(
            MessageFlow(ident("mf"), pools[0].nodes[1].id, pools[1].nodes[1].id)
        )

    return Diagram(
        f"rand{seed}",
        pools=pools,
        stores=stores,
        objects=objects,
        mappings=mappings,
        message_flows=message_flows,
    )


def fuzz_input(seed: int) -> str:
    """A hostile parser input: truncated JSON, wrong types, junk bytes."""
    rng = random.Random(seed)
    choice = rng.randrange(6)
    if choice == 0:
        return "".join(rng.choices(string.printable, k=rng.randint(0, 200)))
    if choice == 1:
        return '{"bpdmn": "1.0", "pools": ' + rng.choice(["{}", "3", '"x"', "[{}]", "[3]"])
    if choice == 2:
        good = (
            '{"bpdmn": "1.0", "pools": [], "stores": [], "objects": [],'
            ' "mappings": [], "message_flows": []}'
        )
        cut = rng.randint(0, len(good))
        return good[:cut]
    if choice == 3:
        return (
            '{"bpdmn": "1.0", "pools": [{"id": "p", "name": 3, "nodes":'
            ' [{"id": "n", "kind": "%s"}], "sequence_flows": [%s]}],'
            ' "stores": [], "objects": [], "mappings": [], "message_flows": []}'
            % (rng.choice(["task", "bogus", ""]), rng.choice(["", "{}", '{"id": "f"}']))
        )
    if choice == 4:
        return "[" + ", ".join(str(rng.random()) for _ in range(rng.randint(0, 5))) + "]"
    return bytes(rng.randrange(256) for _ in range(rng.randint(0, 100))).decode(
        "utf-8", errors="replace"
    )
