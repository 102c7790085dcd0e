from __future__ import annotations

import xml.etree.ElementTree as ET

import pytest

from bpdmn.codegen_xpdl import GenerationError, to_xpdl

from conftest import load


@pytest.fixture
def eco_xpdl(eco):
    xml, warnings = to_xpdl(eco)
    return ET.fromstring(xml), warnings


def test_output_is_well_formed(travel, eco):
    for diagram in (travel, eco):
        xml, _ = to_xpdl(diagram)
        ET.fromstring(xml)


def test_store_fields_become_data_fields(eco_xpdl):
    root, _ = eco_xpdl
    field = root.find("DataFields/DataField[@Id='OracleDB.Device.deviceID']")
    assert field is not None
    assert field.get("Name") == "deviceID"
    assert field.find("DataType/BasicType").get("Type") == "STRING"


def test_data_field_ids_are_injective(eco_xpdl, travel):
    root, _ = eco_xpdl
    ids = [f.get("Id") for f in root.findall("DataFields/DataField")]
    assert len(ids) == len(set(ids))
    t_root = ET.fromstring(to_xpdl(travel)[0])
    t_ids = [f.get("Id") for f in t_root.findall("DataFields/DataField")]
    assert len(t_ids) == len(set(t_ids))


def test_object_becomes_data_object_with_field_refs(eco_xpdl):
    root, _ = eco_xpdl
    data_object = root.find("DataObjects/DataObject[@Id='ECO_Data']")
    assert data_object is not None
    assert data_object.get("Name") == "Eco Data"
    refs = {f.get("Id") for f in data_object.findall("DataFields/DataField")}
    assert refs == {"Device.deviceID", "Device.description"}


def test_activity_has_input_output_sets_and_parameters(eco_xpdl):
    root, _ = eco_xpdl
    activity = root.find(".//Activity[@Name='Check ECO Data']")
    assert activity is not None
    inputs = {i.get("ArtifactId") for i in activity.findall("InputSets/InputSet/Input")}
    assert "ECO_Data" in inputs
    outputs = {o.get("ArtifactId") for o in activity.findall("OutputSets/OutputSet/Output")}
    assert outputs == {"Checked_Data"}
    params = [p.text for p in activity.iter("ActualParameter")]
    assert "ECO_Data.Device.deviceID" in params


def test_mapping_becomes_assignment_in_consuming_activity(eco_xpdl):
    root, _ = eco_xpdl
    activity = root.find(".//Activity[@Name='Check ECO Data']")
    assignment = activity.find("Assignments/Assignment")
    assert assignment.find("Target").text == "Input.device"
    assert assignment.find("Expression").text == "ECO_Data.Device.deviceID"


def test_message_flows_become_messages(eco_xpdl):
    root, _ = eco_xpdl
    message = root.find("Messages/Message[@Id='mf1']")
    assert message is not None
    assert message.get("From") == "t_send" and message.get("To") == "m_start"
    assert message.find("DataObject").get("Id") == "Order_ID"


def test_transitions_carry_guards(eco_xpdl):
    root, _ = eco_xpdl
    transition = root.find(".//Transition[@Id='g3']")
    assert transition.find("Condition").text == "Checked_Data.ok"
    assert root.find(".//Transition[@Id='g4']").find("Condition") is None


def test_no_data_construct_is_lost(eco, eco_xpdl):
    root, _ = eco_xpdl
    assert len(root.findall("DataObjects/DataObject")) == len(eco.objects)
    assert len(root.findall("Messages/Message")) == len(eco.message_flows)
    transitions = root.findall(".//Transition")
    assert len(transitions) == sum(len(p.sequence_flows) for p in eco.pools)
    scalar_fields = sum(
        sum(1 for f in e.fields if f.vtype != "record")
        for s in eco.stores
        for e in s.entities
    )
    assert len(root.findall(".//DataField[@Name]")) == scalar_fields
    mapping_rules = sum(len(m.rules) for m in eco.mappings)
    assert len(root.findall(".//Assignment")) == mapping_rules


def test_one_workflow_process_per_modeled_pool(eco_xpdl):
    root, _ = eco_xpdl
    processes = root.findall("WorkflowProcesses/WorkflowProcess")
    assert {p.get("Id") for p in processes} == {"pool_tech", "pool_maint"}


def test_sub_process_store_declared_locally():
    d = load("patterns/p2.bpdmn.json")
    root = ET.fromstring(to_xpdl(d)[0])
    assert root.find("DataFields") is None  # no diagram-scoped stores
    activity = root.find(".//Activity[@Id='sp']")
    assert activity.find("DataFields/DataField[@Id='st.E.f']") is not None


def test_invalid_diagram_is_refused():
    with pytest.raises(GenerationError):
        to_xpdl(load("validator/bad_v4.bpdmn.json"))
