import math

import pytest
from hypothesis import given, strategies as st

from circuitquest.core import (
    DEFAULT_SOURCE_RESISTANCE,
    Circuit,
    ElementKind,
    MissingGroundError,
    NetlistSyntaxError,
    UnknownKindError,
    format_value,
    parse_netlist,
    parse_value,
    serialize_netlist,
    source_phasor,
)

from oracles import random_circuit


def test_minimal_netlist():
    c = parse_netlist("V1 1 0 DC 12\nR1 1 0 4")
    assert len(c.elements) == 2
    assert set(c.nodes) == {"0", "1"}
    assert c.element("R1").value == 4.0


def test_passive_only_circuit_is_valid():
    c = parse_netlist("R1 1 0 4")
    assert c.element("R1").kind is ElementKind.RESISTOR


def test_missing_ground_rejected():
    with pytest.raises(MissingGroundError):
        parse_netlist("R1 1 2 4")


def test_title_from_leading_comment():
    c = parse_netlist("# Heater loop\n# not the title\nV1 1 0 DC 12\nR1 1 0 4")
    assert c.title == "Heater loop"


def test_comment_after_card_is_not_title():
    c = parse_netlist("V1 1 0 DC 12\n# trailing note\nR1 1 0 4")
    assert c.title == ""


@pytest.mark.parametrize(
    "token,expected",
    [
        ("4.7k", 4700.0),
        ("10m", 0.01),
        ("100u", 1e-4),
        ("5n", 5e-9),
        ("2p", 2e-12),
        ("3M", 3e6),
        ("1G", 1e9),
        ("-12.5", -12.5),
        ("1e3", 1000.0),
        (".5", 0.5),
    ],
)
def test_value_suffixes(token, expected):
    assert parse_value(token) == pytest.approx(expected, rel=1e-15)


def test_suffixes_are_case_sensitive():
    assert parse_value("1m") == 1e-3
    assert parse_value("1M") == 1e6
    with pytest.raises(ValueError):
        parse_value("1K")


@pytest.mark.parametrize("bad", ["", "abc", "1.2.3", "4k7", "--5", "1e", "k"])
def test_bad_number_tokens(bad):
    with pytest.raises(ValueError):
        parse_value(bad)


@given(st.floats(min_value=1e-12, max_value=1e12, allow_nan=False, allow_infinity=False))
def test_format_value_round_trips(x):
    assert parse_value(format_value(x)) == x


def test_syntax_error_carries_line_number():
    with pytest.raises(NetlistSyntaxError) as err:
        parse_netlist("V1 1 0 DC 12\nR1 1 0\nR2 1 0 5")
    assert err.value.line_no == 2


def test_unknown_kind_letter():
    with pytest.raises(UnknownKindError):
        parse_netlist("Q1 1 0 4")


def test_rs_override_only_on_voltage_sources():
    c = parse_netlist("V1 1 0 DC 12 RS=0.5\nR1 1 0 4")
    assert c.element("V1").source_resistance == 0.5
    with pytest.raises(NetlistSyntaxError):
        parse_netlist("I1 1 0 DC 2 RS=0.5\nR1 1 0 4")


def test_default_source_resistance():
    c = parse_netlist("V1 1 0 DC 12\nR1 1 0 4")
    assert c.element("V1").source_resistance == DEFAULT_SOURCE_RESISTANCE


def test_ac_directive():
    c = parse_netlist("V1 1 0 AC 230 30\nR1 1 0 4\n.AC 50")
    assert c.ac_frequency == 50.0
    with pytest.raises(NetlistSyntaxError):
        parse_netlist("R1 1 0 4\n.AC -50")
    with pytest.raises(NetlistSyntaxError):
        parse_netlist("R1 1 0 4\n.AC 50 60")


def test_port_directive():
    c = parse_netlist("R1 1 0 4\n.PORT 1 0")
    assert c.port == ("1", "0")
    with pytest.raises(NetlistSyntaxError):
        parse_netlist("R1 1 0 4\n.PORT 1 1")
    with pytest.raises(NetlistSyntaxError):
        parse_netlist("R1 1 0 4\n.NODESET 1 0")


def test_source_phasor():
    c = parse_netlist("V1 1 0 AC 100 60\nR1 1 0 4")
    z = source_phasor(c.element("V1"))
    assert z == pytest.approx(complex(50.0, 50.0 * math.sqrt(3)), rel=1e-12)


def test_switch_card():
    c = parse_netlist("V1 1 0 DC 5\nSW1 1 2 CLOSED\nR1 2 0 4\nSW2 2 0 OPEN")
    assert c.element("SW1").state.value == "CLOSED"
    with pytest.raises(NetlistSyntaxError):
        parse_netlist("V1 1 0 DC 5\nSW1 1 0 HALF")


def test_dependent_source_cards():
    c = parse_netlist(
        "V1 1 0 DC 5\nR1 1 0 4\n"
        "E1 2 0 1 0 2\nR2 2 0 1\n"
        "H1 3 0 R1 5\nR3 3 0 1\n"
        "G1 4 0 1 0 0.1\nR4 4 0 1\n"
        "F1 5 0 V1 2\nR5 5 0 1"
    )
    assert c.element("E1").ctrl_nodes == ("1", "0")
    assert c.element("H1").ctrl_element == "R1"


def test_serialization_is_a_fixed_point():
    text = serialize_netlist(parse_netlist("# t\nV1 1 0 AC 10 45\nR1 1 0 4.7k\n.AC 50"))
    assert serialize_netlist(parse_netlist(text)) == text


def test_zero_phase_ac_serializes_as_dc():
    c = parse_netlist("V1 1 0 AC 10 0\nR1 1 0 4")
    assert "V1 1 0 DC 10" in serialize_netlist(c)


@pytest.mark.parametrize("seed", range(25))
def test_generated_circuits_round_trip(seed):
    c = random_circuit(seed, max_nodes=15).circuit
    text = serialize_netlist(c)
    back = parse_netlist(text)
    assert back.elements == c.elements
    assert back.ac_frequency == c.ac_frequency
    assert serialize_netlist(back) == text


def test_duplicate_names_rejected():
    with pytest.raises(Exception) as err:
        parse_netlist("R1 1 0 4\nR1 1 0 5")
    assert "R1" in str(err.value)


def test_circuit_helpers():
    c = parse_netlist("V1 1 0 DC 12\nR1 1 0 4")
    assert c.has_element("R1") and not c.has_element("R9")
    swapped = c.replace_value("R1", 8.0)
    assert swapped.element("R1").value == 8.0
    assert c.element("R1").value == 4.0
    assert isinstance(swapped, Circuit)
