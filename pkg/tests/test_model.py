from __future__ import annotations

import pytest

from bpdmn.model import (
    DataObject,
    DataStore,
    Diagram,
    Entity,
    ExplicitDataFlow,
    Generalization,
    LinkKind,
    ModelError,
    Node,
    ObjectAttachment,
    Pool,
    Scope,
    SequenceFlow,
    Variable,
    node_inputs,
    node_outputs,
    object_sources,
    object_targets,
    reaches,
    resolve_scope,
    store_readers,
    store_writers,
)

from conftest import load


def test_duplicate_ids_rejected():
    with pytest.raises(ModelError, match="duplicate identifier"):
        Diagram("d", objects=[DataObject("o", "O"), DataObject("o", "O2")])


def test_dangling_flow_endpoint_rejected():
    pool = Pool(
        "p",
        "P",
        nodes=[Node("a", "A", "task")],
        sequence_flows=[SequenceFlow("f", "a", "ghost")],
    )
    with pytest.raises(ModelError, match="endpoint 'ghost'"):
        Diagram("d", pools=[pool])


def test_self_loop_flow_rejected():
    with pytest.raises(ModelError, match="source equals target"):
        SequenceFlow("f", "a", "a")


def test_store_to_store_explicit_flow_rejected():
    pool = Pool("p", "P", explicit_data_flows=[ExplicitDataFlow("ef", "s1", "s2", "o")])
    with pytest.raises(ModelError, match="both endpoints are stores"):
        Diagram(
            "d",
            pools=[pool],
            stores=[DataStore("s1", "S1"), DataStore("s2", "S2")],
            objects=[DataObject("o", "O")],
        )


def test_condition_only_on_exclusive_gateways():
    with pytest.raises(ModelError):
        Node("t", "T", "task", condition=object())  # type: ignore[arg-type]


def test_multi_instance_only_on_tasks():
    with pytest.raises(ModelError):
        Node("g", "G", "gateway_parallel", multi_instance=True)


def test_unknown_attachment_direction_rejected():
    with pytest.raises(ModelError):
        ObjectAttachment("o", "sideways")


def test_travel_object_sources_and_targets(travel):
    src = object_sources(travel, "input")
    assert {(l.kind, l.element) for l in src} == {(LinkKind.MESSAGE_START, "n_start")}
    tgt = object_targets(travel, "input")
    assert {(l.kind, l.element) for l in tgt} == {(LinkKind.ACTIVITY_INPUT, "check_cc")}
    assert {(l.kind, l.element) for l in object_targets(travel, "plan")} == {
        (LinkKind.STORE_INSERTION, "arch_db"),
        (LinkKind.ACTIVITY_INPUT, "n_end"),
    }


def test_eco_store_extraction_is_a_source(eco):
    src = object_sources(eco, "ECO_Data")
    assert {(l.kind, l.element) for l in src} == {(LinkKind.STORE_EXTRACTION, "OracleDB")}


def test_node_inputs_channels(eco):
    channels = {(io.object, io.channel) for io in node_inputs(eco, "m_check")}
    assert channels == {
        ("Input", "sequence"),
        ("Order_ID", "sequence"),
        ("ECO_Data", "store"),
    }


def test_node_outputs(travel):
    assert {io.object for io in node_outputs(travel, "archive")} == {"plan"}


def test_store_readers_and_writers(eco):
    assert store_readers(eco, "OracleDB") == {"m_check"}
    assert store_writers(eco, "OracleDB") == {"t_submit"}


def test_reaches_follows_all_flow_kinds(eco):
    assert reaches(eco, "t_start", "t_end")
    assert reaches(eco, "t_send", "m_process")  # across the message flow
    assert not reaches(eco, "m_process", "t_start")
    assert reaches(eco, "m_gw", "m_gw")  # reflexive


def test_resolve_scope_diagram_and_sub_process():
    sub = Node("sp", "SP", "sub_process", children=[Node("inner", "I", "task")])
    pool = Pool("p", "P", nodes=[sub, Node("outside", "O", "task")])
    d = Diagram(
        "d",
        pools=[pool],
        stores=[
            DataStore("global", "G"),
            DataStore("local", "L", scope=Scope.of("sp")),
        ],
    )
    assert resolve_scope(d, "global") == {"sp", "inner", "outside"}
    assert resolve_scope(d, "local") == {"sp", "inner"}


def test_qualified_field_names_include_generalization():
    store = DataStore(
        "st",
        "S",
        entities=[
            Entity("Base", [Variable("common")]),
            Entity("Derived", [Variable("own")]),
        ],
        generalizations=[Generalization("Base", "Derived")],
    )
    assert store.qualified_field_names() == {
        "Base.common",
        "Derived.own",
        "Derived.common",
    }


def test_black_box_pool_detection(travel):
    d = Diagram("d", pools=[Pool("env", "Env"), Pool("full", "F", nodes=[Node("t", "T", "task")])])
    assert d.is_black_box_pool("env")
    assert not d.is_black_box_pool("full")
    assert not travel.is_black_box_pool("travel_agency")


def test_iter_nodes_covers_sub_process_children():
    sub = Node("sp", "SP", "sub_process", children=[Node("inner", "I", "task")])
    d = Diagram("d", pools=[Pool("p", "P", nodes=[sub])])
    assert {n.id for n in d.iter_nodes()} == {"sp", "inner"}


def test_travel_fixture_is_loaded(travel):
    assert travel.id == "travel"
    assert travel.node("check_cc").name == "Check Credit Card"
    assert travel.pool_of("archive").id == "travel_agency"
    assert load("eco.bpdmn.json").store("OracleDB").name == "OracleDB"
