"""Line-oriented netlist reader and writer.

Card shapes::

    R|L|C <name> <nodeA> <nodeB> <value>
    V|I   <name> <node+> <node-> DC <value> | AC <rms value> <phase deg>
    E|G   <name> <out+> <out-> <sense+> <sense-> <gain>
    H|F   <name> <out+> <out-> <sensed element> <value>
    K     <name> <L1> <L2> <k>
    T     <name> <pri+> <pri-> <sec+> <sec-> <ratio>
    SW    <name> <nodeA> <nodeB> OPEN|CLOSED
    .AC <hertz>
    .PORT <nodeA> <nodeB>

The element kind comes from the first letters of the name. ``#`` starts a
comment; a comment line before any card becomes the circuit title. Values
accept the engineering suffixes k m u n p M G (case-sensitive). Voltage
source cards take an optional trailing ``RS=<ohms>`` to override the implicit
series resistance.
"""

from __future__ import annotations

import math
import re

from .circuit import Circuit
from .elements import DEFAULT_SOURCE_RESISTANCE, Element, ElementKind, SwitchState
from .errors import (
    CircuitError,
    InvalidElementError,
    NetlistSyntaxError,
    UnknownKindError,
)

_SUFFIXES = {
    "k": 1e3,
    "m": 1e-3,
    "u": 1e-6,
    "n": 1e-9,
    "p": 1e-12,
    "M": 1e6,
    "G": 1e9,
}

_NUMBER_RE = re.compile(r"^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)([kmunpMG])?$")


def parse_value(token: str) -> float:
    """Parse a number with an optional engineering suffix."""
    m = _NUMBER_RE.match(token)
    if not m:
        raise ValueError(f"not a number: {token!r}")
    base = float(m.group(1))
    if m.group(2):
        base *= _SUFFIXES[m.group(2)]
    return base


def format_value(x: float) -> str:
    """Render a float so that parse_value reads back the same bits."""
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _kind_of(name: str) -> ElementKind:
    upper = name.upper()
    if upper.startswith("SW"):
        return ElementKind.SWITCH
    try:
        return ElementKind(upper[0])
    except ValueError:
        raise UnknownKindError(f"element name {name!r} does not start with a known kind letter")


def parse_netlist(text: str) -> Circuit:
    """Parse netlist text into a validated Circuit."""
    elements: list[Element] = []
    title = ""
    ac_frequency: float | None = None
    port: tuple[str, str] | None = None
    saw_card = False

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line, _, comment = raw.partition("#")
        line = line.strip()
        if not line:
            comment = comment.strip()
            if comment and not saw_card and not title:
                title = comment
            continue
        tokens = line.split()
        try:
            if tokens[0].startswith("."):
                directive = tokens[0].upper()
                if directive == ".AC":
                    if len(tokens) != 2:
                        raise ValueError(".AC takes exactly one frequency")
                    ac_frequency = parse_value(tokens[1])
                    if ac_frequency <= 0:
                        raise ValueError(".AC frequency must be > 0")
                elif directive == ".PORT":
                    if len(tokens) != 3:
                        raise ValueError(".PORT takes exactly two nodes")
                    if tokens[1] == tokens[2]:
                        raise ValueError(".PORT nodes must differ")
                    port = (tokens[1], tokens[2])
                else:
                    raise ValueError(f"unknown directive {tokens[0]!r}")
            else:
                elements.append(_parse_card(tokens))
                saw_card = True
        except (ValueError, InvalidElementError) as exc:
            raise NetlistSyntaxError(line_no, str(exc)) from exc
        except UnknownKindError:
            raise
        except CircuitError:
            raise

    return Circuit(tuple(elements), title=title, ac_frequency=ac_frequency, port=port)


def _parse_card(tokens: list[str]) -> Element:
    name = tokens[0]
    kind = _kind_of(name)
    body = tokens[1:]

    if kind in (ElementKind.RESISTOR, ElementKind.INDUCTOR, ElementKind.CAPACITOR):
        if len(body) != 3:
            raise ValueError(f"{name}: expected <nodeA> <nodeB> <value>")
        return Element(name, kind, (body[0], body[1]), value=parse_value(body[2]))

    if kind in (ElementKind.VSOURCE, ElementKind.ISOURCE):
        rs = DEFAULT_SOURCE_RESISTANCE
        if body and body[-1].upper().startswith("RS="):
            if kind is not ElementKind.VSOURCE:
                raise ValueError(f"{name}: RS= applies to voltage sources only")
            rs = parse_value(body[-1][3:])
            body = body[:-1]
        if len(body) < 3:
            raise ValueError(f"{name}: expected <node+> <node-> DC|AC ...")
        n_pos, n_neg, mode = body[0], body[1], body[2].upper()
        if mode == "DC":
            if len(body) != 4:
                raise ValueError(f"{name}: DC takes exactly one value")
            value, phase_deg = parse_value(body[3]), 0.0
        elif mode == "AC":
            if len(body) != 5:
                raise ValueError(f"{name}: AC takes <rms value> <phase deg>")
            value, phase_deg = parse_value(body[3]), parse_value(body[4])
        else:
            raise ValueError(f"{name}: source mode must be DC or AC, got {body[2]!r}")
        return Element(
            name, kind, (n_pos, n_neg), value=value, phase_deg=phase_deg, source_resistance=rs
        )

    if kind in (ElementKind.VCVS, ElementKind.VCCS):
        if len(body) != 5:
            raise ValueError(f"{name}: expected <out+> <out-> <sense+> <sense-> <gain>")
        return Element(
            name,
            kind,
            (body[0], body[1]),
            value=parse_value(body[4]),
            ctrl_nodes=(body[2], body[3]),
        )

    if kind in (ElementKind.CCVS, ElementKind.CCCS):
        if len(body) != 4:
            raise ValueError(f"{name}: expected <out+> <out-> <sensed element> <value>")
        return Element(
            name, kind, (body[0], body[1]), value=parse_value(body[3]), ctrl_element=body[2]
        )

    if kind is ElementKind.COUPLING:
        if len(body) != 3:
            raise ValueError(f"{name}: expected <L1> <L2> <k>")
        return Element(name, kind, (), value=parse_value(body[2]), coupled=(body[0], body[1]))

    if kind is ElementKind.TRANSFORMER:
        if len(body) != 5:
            raise ValueError(f"{name}: expected <pri+> <pri-> <sec+> <sec-> <ratio>")
        return Element(
            name, kind, (body[0], body[1], body[2], body[3]), value=parse_value(body[4])
        )

    if kind is ElementKind.SWITCH:
        if len(body) != 3:
            raise ValueError(f"{name}: expected <nodeA> <nodeB> OPEN|CLOSED")
        state = body[2].upper()
        if state not in ("OPEN", "CLOSED"):
            raise ValueError(f"{name}: switch state must be OPEN or CLOSED, got {body[2]!r}")
        return Element(name, kind, (body[0], body[1]), state=SwitchState(state))

    raise UnknownKindError(f"unhandled kind {kind}")


def serialize_netlist(circuit: Circuit) -> str:
    """Write a Circuit back out; parse_netlist(result) reproduces the input."""
    lines: list[str] = []
    if circuit.title:
        lines.append(f"# {circuit.title}")
    for el in circuit.elements:
        lines.append(_format_card(el))
    if circuit.ac_frequency is not None:
        lines.append(f".AC {format_value(circuit.ac_frequency)}")
    if circuit.port is not None:
        lines.append(f".PORT {circuit.port[0]} {circuit.port[1]}")
    return "\n".join(lines) + "\n"


def _format_card(el: Element) -> str:
    k = el.kind
    if k in (ElementKind.RESISTOR, ElementKind.INDUCTOR, ElementKind.CAPACITOR):
        return f"{el.name} {el.nodes[0]} {el.nodes[1]} {format_value(el.value)}"
    if k in (ElementKind.VSOURCE, ElementKind.ISOURCE):
        if el.phase_deg == 0.0:
            card = f"{el.name} {el.nodes[0]} {el.nodes[1]} DC {format_value(el.value)}"
        else:
            card = (
                f"{el.name} {el.nodes[0]} {el.nodes[1]} AC "
                f"{format_value(el.value)} {format_value(el.phase_deg)}"
            )
        if k is ElementKind.VSOURCE and el.source_resistance != DEFAULT_SOURCE_RESISTANCE:
            card += f" RS={format_value(el.source_resistance)}"
        return card
    if k in (ElementKind.VCVS, ElementKind.VCCS):
        return (
            f"{el.name} {el.nodes[0]} {el.nodes[1]} "
            f"{el.ctrl_nodes[0]} {el.ctrl_nodes[1]} {format_value(el.value)}"
        )
    if k in (ElementKind.CCVS, ElementKind.CCCS):
        return f"{el.name} {el.nodes[0]} {el.nodes[1]} {el.ctrl_element} {format_value(el.value)}"
    if k is ElementKind.COUPLING:
        return f"{el.name} {el.coupled[0]} {el.coupled[1]} {format_value(el.value)}"
    if k is ElementKind.TRANSFORMER:
        n = el.nodes
        return f"{el.name} {n[0]} {n[1]} {n[2]} {n[3]} {format_value(el.value)}"
    if k is ElementKind.SWITCH:
        return f"{el.name} {el.nodes[0]} {el.nodes[1]} {el.state.value}"
    raise UnknownKindError(f"unhandled kind {k}")


def source_phasor(el: Element) -> complex:
    """Complex RMS value of a source card."""
    rad = math.radians(el.phase_deg)
    return complex(el.value * math.cos(rad), el.value * math.sin(rad))
