"""Three-phase sources and loads.

A system is one three-phase source feeding a single bus through an optional
per-phase line impedance. Wye loads bond their star points to the neutral
conductor when one exists, otherwise each star point floats. Balanced
systems reduce to one phase and replicate with 120 degree shifts; anything
else expands to a full three-source circuit for the general solver.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .circuit import Circuit
from .elements import Element, ElementKind, SwitchState
from .errors import CircuitError, InvalidElementError, UnbalancedSystemError
from .mna import Solution, solve_ac
from .analysis import element_power

PHASES = ("A", "B", "C")

#: Phase angle (degrees) per phase label, by rotation sequence.
SEQUENCES = {
    "ABC": {"A": 0.0, "B": -120.0, "C": 120.0},
    "ACB": {"A": 0.0, "B": 120.0, "C": -120.0},
}

_BALANCE_RTOL = 1e-12


@dataclass(frozen=True)
class ThreePhaseLoad:
    """One load on the bus: 'wye' or 'delta', one impedance per phase.

    ``z`` is a single complex for a balanced load or a three-tuple for an
    unbalanced one (arm per phase for wye; AB, BC, CA sides for delta).
    """

    connection: str
    z: complex | tuple[complex, complex, complex]

    def __post_init__(self):
        if self.connection not in ("wye", "delta"):
            raise InvalidElementError(f"load connection must be wye or delta, got {self.connection!r}")
        zs = self.phase_impedances()
        for z in zs:
            if abs(z) == 0.0:
                raise InvalidElementError("load impedance must be non-zero")
            if z.real < 0.0:
                raise InvalidElementError("load resistance must be >= 0")

    def phase_impedances(self) -> tuple[complex, complex, complex]:
        if isinstance(self.z, (tuple, list)):
            if len(self.z) != 3:
                raise InvalidElementError("unbalanced load needs exactly three impedances")
            return tuple(complex(z) for z in self.z)  # type: ignore[return-value]
        return (complex(self.z),) * 3

    @property
    def balanced(self) -> bool:
        za, zb, zc = self.phase_impedances()
        scale = max(abs(za), abs(zb), abs(zc))
        return abs(za - zb) <= _BALANCE_RTOL * scale and abs(zb - zc) <= _BALANCE_RTOL * scale

    def wye_equivalent(self) -> tuple[complex, complex, complex]:
        """Per-phase wye arms; a balanced delta maps to z/3."""
        zs = self.phase_impedances()
        if self.connection == "wye":
            return zs
        if not self.balanced:
            raise UnbalancedSystemError("unbalanced delta has no per-phase wye shortcut here")
        return tuple(z / 3.0 for z in zs)  # type: ignore[return-value]


@dataclass(frozen=True)
class ThreePhaseSystem:
    """Source (RMS line-to-line volts), sequence, frequency, line, loads."""

    v_ll: float
    frequency: float
    loads: tuple[ThreePhaseLoad, ...]
    sequence: str = "ABC"
    line_z: complex = 0j
    neutral_z: complex | None = None  # None: three-wire system

    def __post_init__(self):
        if self.v_ll <= 0.0:
            raise InvalidElementError(f"line-to-line voltage must be > 0, got {self.v_ll}")
        if self.frequency <= 0.0:
            raise InvalidElementError(f"frequency must be > 0, got {self.frequency}")
        if self.sequence not in SEQUENCES:
            raise InvalidElementError(f"sequence must be ABC or ACB, got {self.sequence!r}")
        if not self.loads:
            raise InvalidElementError("system needs at least one load")
        if self.line_z.real < 0.0:
            raise InvalidElementError("line resistance must be >= 0")

    @property
    def v_phase(self) -> float:
        return self.v_ll / math.sqrt(3.0)

    @property
    def balanced(self) -> bool:
        return all(load.balanced for load in self.loads)

    def emf(self, phase: str) -> complex:
        return cmath.rect(self.v_phase, math.radians(SEQUENCES[self.sequence][phase]))


@dataclass(frozen=True)
class ThreePhaseReport:
    """Phase quantities at the load bus plus source totals."""

    system: ThreePhaseSystem
    method: str
    v_ln: dict[str, complex]          # load bus, relative to source neutral
    v_ll: dict[str, complex]          # "AB", "BC", "CA" at the load bus
    i_line: dict[str, complex]        # toward the load
    i_neutral: complex | None         # None for three-wire systems
    s_total: complex                  # delivered by the source
    solution: Solution | None = None  # present for the full expansion
    tag: str = field(default="", repr=False)

    @property
    def p_total(self) -> float:
        return self.s_total.real

    @property
    def q_total(self) -> float:
        return self.s_total.imag

    @property
    def apparent_total(self) -> float:
        return abs(self.s_total)

    @property
    def pf_total(self) -> float:
        s = self.apparent_total
        return abs(self.p_total) / s if s > 1e-15 else 1.0


def _parallel(impedances: list[complex]) -> complex:
    y = sum(1.0 / z for z in impedances)
    return 1.0 / y


def _solve_reduced(system: ThreePhaseSystem) -> ThreePhaseReport:
    z_eq = _parallel([load.wye_equivalent()[0] for load in system.loads])
    i_a = system.emf("A") / (system.line_z + z_eq)
    v_a = i_a * z_eq

    rot = {p: cmath.rect(1.0, math.radians(SEQUENCES[system.sequence][p])) for p in PHASES}
    v_ln = {p: v_a * rot[p] for p in PHASES}
    i_line = {p: i_a * rot[p] for p in PHASES}
    v_ll = {
        "AB": v_ln["A"] - v_ln["B"],
        "BC": v_ln["B"] - v_ln["C"],
        "CA": v_ln["C"] - v_ln["A"],
    }
    s_total = 3.0 * system.emf("A") * i_a.conjugate()
    i_neutral = None if system.neutral_z is None else 0.0 + 0.0j
    return ThreePhaseReport(
        system=system,
        method="reduction",
        v_ln=v_ln,
        v_ll=v_ll,
        i_line=i_line,
        i_neutral=i_neutral,
        s_total=s_total,
    )


def impedance_elements(
    prefix: str, node_a: str, node_b: str, z: complex, frequency: float
) -> list[Element]:
    """Realise a complex impedance as series R and L (or C) elements."""
    omega = 2.0 * math.pi * frequency
    if abs(z) == 0.0:
        raise InvalidElementError(f"{prefix}: cannot realise a zero impedance")
    if z.real < 0.0:
        raise InvalidElementError(f"{prefix}: negative resistance {z.real}")
    parts: list[Element] = []
    has_r = z.real > 0.0
    has_x = z.imag != 0.0
    mid = f"{node_a}_{prefix}m"
    r_nodes = (node_a, mid if has_x else node_b)
    x_nodes = (mid if has_r else node_a, node_b)
    if has_r:
        parts.append(Element(f"R{prefix}", ElementKind.RESISTOR, r_nodes, value=z.real))
    if has_x:
        if z.imag > 0.0:
            parts.append(
                Element(f"L{prefix}", ElementKind.INDUCTOR, x_nodes, value=z.imag / omega)
            )
        else:
            parts.append(
                Element(
                    f"C{prefix}",
                    ElementKind.CAPACITOR,
                    x_nodes,
                    value=-1.0 / (omega * z.imag),
                )
            )
    return parts


def build_three_phase_circuit(system: ThreePhaseSystem) -> Circuit:
    """Full expansion: three ideal sources, lines, loads, optional neutral."""
    elements: list[Element] = []
    has_line = abs(system.line_z) > 0.0
    bus = {p: (f"L{p}" if has_line else f"S{p}") for p in PHASES}

    for p in PHASES:
        angle = SEQUENCES[system.sequence][p]
        elements.append(
            Element(
                f"V{p}",
                ElementKind.VSOURCE,
                (f"S{p}", "0"),
                value=system.v_phase,
                phase_deg=angle,
                source_resistance=0.0,
            )
        )
        if has_line:
            elements.extend(
                impedance_elements(f"LN{p}", f"S{p}", bus[p], system.line_z, system.frequency)
            )

    star_nodes: list[str] = []
    for idx, load in enumerate(system.loads):
        zs = load.phase_impedances()
        if load.connection == "wye":
            star = f"N{idx}"
            star_nodes.append(star)
            for p, z in zip(PHASES, zs):
                elements.extend(
                    impedance_elements(f"W{idx}{p}", bus[p], star, z, system.frequency)
                )
        else:
            for (pa, pb), z in zip((("A", "B"), ("B", "C"), ("C", "A")), zs):
                elements.extend(
                    impedance_elements(f"D{idx}{pa}{pb}", bus[pa], bus[pb], z, system.frequency)
                )

    if system.neutral_z is not None and star_nodes:
        # Bond all star points onto the neutral conductor.
        neutral = star_nodes[0]
        for other in star_nodes[1:]:
            elements.append(
                Element(
                    f"SWNB{other}",
                    ElementKind.SWITCH,
                    (neutral, other),
                    state=SwitchState.CLOSED,
                )
            )
        if abs(system.neutral_z) > 0.0:
            elements.extend(
                impedance_elements("NEU", neutral, "0", system.neutral_z, system.frequency)
            )
        else:
            elements.append(
                Element("SWNEU", ElementKind.SWITCH, (neutral, "0"), state=SwitchState.CLOSED)
            )

    return Circuit(tuple(elements), title="three-phase expansion", ac_frequency=system.frequency)


def _solve_expanded(system: ThreePhaseSystem) -> ThreePhaseReport:
    circuit = build_three_phase_circuit(system)
    sol = solve_ac(circuit, system.frequency)
    has_line = abs(system.line_z) > 0.0
    bus = {p: (f"L{p}" if has_line else f"S{p}") for p in PHASES}

    v_ln = {p: sol.voltage(bus[p]) for p in PHASES}
    v_ll = {
        "AB": v_ln["A"] - v_ln["B"],
        "BC": v_ln["B"] - v_ln["C"],
        "CA": v_ln["C"] - v_ln["A"],
    }
    # Line current toward the load is the source current reversed.
    i_line = {p: -sol.current(f"V{p}") for p in PHASES}

    i_neutral: complex | None = None
    if system.neutral_z is not None:
        if circuit.has_element("RNEU"):
            i_neutral = sol.current("RNEU")
        elif circuit.has_element("LNEU"):
            i_neutral = sol.current("LNEU")
        elif circuit.has_element("CNEU"):
            i_neutral = sol.current("CNEU")
        elif circuit.has_element("SWNEU"):
            i_neutral = sol.current("SWNEU")
        else:  # neutral declared but no wye load to use it
            i_neutral = 0.0 + 0.0j

    s_total = 0.0 + 0.0j
    for p in PHASES:
        s_total += -element_power(circuit.element(f"V{p}"), sol)

    return ThreePhaseReport(
        system=system,
        method="mna",
        v_ln=v_ln,
        v_ll=v_ll,
        i_line=i_line,
        i_neutral=i_neutral,
        s_total=s_total,
        solution=sol,
    )


def solve_three_phase(system: ThreePhaseSystem, method: str = "auto") -> ThreePhaseReport:
    """Solve a three-phase system.

    ``method`` is ``auto`` (reduction when balanced), ``reduction``
    (balanced only), or ``mna`` (always the full expansion).
    """
    if method not in ("auto", "reduction", "mna"):
        raise CircuitError(f"method must be auto, reduction or mna, got {method!r}")
    if method == "reduction" or (method == "auto" and system.balanced):
        if not system.balanced:
            raise UnbalancedSystemError("reduction path requires a balanced system")
        return _solve_reduced(system)
    return _solve_expanded(system)
