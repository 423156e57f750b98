"""Element model shared by the netlist parser and the solver."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import InvalidElementError

#: Implicit series resistance of every voltage source unless overridden.
#: Keeps shorted or opposing sources finite instead of singular.
DEFAULT_SOURCE_RESISTANCE = 1e-6


class ElementKind(enum.Enum):
    RESISTOR = "R"
    INDUCTOR = "L"
    CAPACITOR = "C"
    VSOURCE = "V"
    ISOURCE = "I"
    VCVS = "E"
    VCCS = "G"
    CCVS = "H"
    CCCS = "F"
    COUPLING = "K"
    TRANSFORMER = "T"
    SWITCH = "SW"


class SwitchState(enum.Enum):
    OPEN = "OPEN"
    CLOSED = "CLOSED"


#: Kinds whose value must be strictly positive.
_POSITIVE_VALUE = {
    ElementKind.RESISTOR,
    ElementKind.INDUCTOR,
    ElementKind.CAPACITOR,
    ElementKind.TRANSFORMER,
}

#: Kinds that connect two ordinary terminals.
TWO_TERMINAL = {
    ElementKind.RESISTOR,
    ElementKind.INDUCTOR,
    ElementKind.CAPACITOR,
    ElementKind.VSOURCE,
    ElementKind.ISOURCE,
    ElementKind.SWITCH,
}


@dataclass(frozen=True)
class Element:
    """One circuit element.

    ``nodes`` is the terminal tuple in card order. For sources the first
    terminal is the positive one, and every reported element current flows
    into the first terminal, through the element, and out the last. ``value``
    carries the defining quantity of the kind: ohms, henries, farads, RMS
    volts or amps, gain, coupling coefficient, or turns ratio.
    """

    name: str
    kind: ElementKind
    nodes: tuple[str, ...]
    value: float = 0.0
    phase_deg: float = 0.0
    ctrl_nodes: tuple[str, str] | None = None  # VCVS / VCCS sensing pair
    ctrl_element: str | None = None            # CCVS / CCCS sensed element
    coupled: tuple[str, str] | None = None     # COUPLING inductor pair
    state: SwitchState | None = None
    source_resistance: float = field(default=DEFAULT_SOURCE_RESISTANCE)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        k = self.kind
        if not self.name:
            raise InvalidElementError("element name must be non-empty")
        if k is ElementKind.COUPLING:
            if self.coupled is None or len(self.coupled) != 2:
                raise InvalidElementError(f"{self.name}: coupling needs two inductor names")
            if self.coupled[0] == self.coupled[1]:
                raise InvalidElementError(f"{self.name}: coupling must join distinct inductors")
            if not 0.0 < self.value < 1.0:
                raise InvalidElementError(
                    f"{self.name}: coupling coefficient must lie in (0, 1), got {self.value}"
                )
            return
        expected = 4 if k is ElementKind.TRANSFORMER else 2
        if len(self.nodes) != expected:
            raise InvalidElementError(
                f"{self.name}: {k.value} takes {expected} terminals, got {len(self.nodes)}"
            )
        if k in TWO_TERMINAL and self.nodes[0] == self.nodes[1]:
            raise InvalidElementError(f"{self.name}: both terminals on node {self.nodes[0]}")
        if k is ElementKind.TRANSFORMER:
            if self.nodes[0] == self.nodes[1] or self.nodes[2] == self.nodes[3]:
                raise InvalidElementError(f"{self.name}: transformer winding shorted to itself")
        if k in _POSITIVE_VALUE and not self.value > 0.0:
            raise InvalidElementError(
                f"{self.name}: {k.value} value must be > 0, got {self.value}"
            )
        if k in (ElementKind.VCVS, ElementKind.VCCS):
            if self.ctrl_nodes is None:
                raise InvalidElementError(f"{self.name}: controlled source needs a sensing node pair")
        if k in (ElementKind.CCVS, ElementKind.CCCS):
            if not self.ctrl_element:
                raise InvalidElementError(f"{self.name}: controlled source needs a sensed element")
            if self.ctrl_element == self.name:
                raise InvalidElementError(f"{self.name}: cannot sense its own current")
        if k is ElementKind.SWITCH and self.state is None:
            raise InvalidElementError(f"{self.name}: switch needs a state (OPEN or CLOSED)")
        if k is ElementKind.VSOURCE and self.source_resistance < 0.0:
            raise InvalidElementError(f"{self.name}: source resistance must be >= 0")

    @property
    def is_source(self) -> bool:
        return self.kind in (ElementKind.VSOURCE, ElementKind.ISOURCE)
