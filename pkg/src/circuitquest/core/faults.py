"""Fault injection and protection coordination checks."""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

from .circuit import GROUND, Circuit
from .elements import Element, ElementKind, SwitchState
from .errors import DanglingNodeError, InvalidReferenceError, MissingGroundError
from .mna import Solution, solve


class FaultKind(enum.Enum):
    SHORT = "SHORT"
    OPEN = "OPEN"
    BYPASS = "BYPASS"


@dataclass(frozen=True)
class FaultSpec:
    """One fault to impose on a healthy circuit.

    SHORT joins ``node_a``/``node_b`` through ``impedance`` ohms (0 allowed);
    OPEN removes ``element``; BYPASS leaks from ``node`` to ground through
    ``impedance`` ohms.
    """

    kind: FaultKind
    node_a: str | None = None
    node_b: str | None = None
    element: str | None = None
    node: str | None = None
    impedance: float = 0.0

    def location(self) -> tuple:
        """Comparable location key, used by diagnosis grading."""
        if self.kind is FaultKind.SHORT:
            return tuple(sorted((self.node_a or "", self.node_b or "")))
        if self.kind is FaultKind.OPEN:
            return (self.element or "",)
        return (self.node or "",)


#: Name given to the branch a SHORT or BYPASS fault adds.
FAULT_ELEMENT = "XFAULTX"


def inject_fault(circuit: Circuit, fault: FaultSpec) -> Circuit:
    """Apply a fault, returning a new valid circuit.

    An OPEN that would strand part of the network raises DanglingNode, the
    same error the circuit constructor gives for any unreachable node.
    """
    nodes = set(circuit.nodes)
    if fault.kind is FaultKind.SHORT:
        if not fault.node_a or not fault.node_b:
            raise InvalidReferenceError("SHORT fault needs two nodes")
        for n in (fault.node_a, fault.node_b):
            if n not in nodes:
                raise InvalidReferenceError(f"fault node {n!r} does not exist")
        if fault.node_a == fault.node_b:
            raise InvalidReferenceError("SHORT fault nodes must differ")
        if fault.impedance < 0.0:
            raise InvalidReferenceError("fault impedance must be >= 0")
        if fault.impedance == 0.0:
            extra = Element(
                FAULT_ELEMENT + "SW",
                ElementKind.SWITCH,
                (fault.node_a, fault.node_b),
                state=SwitchState.CLOSED,
            )
        else:
            extra = Element(
                "R" + FAULT_ELEMENT,
                ElementKind.RESISTOR,
                (fault.node_a, fault.node_b),
                value=fault.impedance,
            )
        return circuit.with_elements(circuit.elements + (extra,))

    if fault.kind is FaultKind.OPEN:
        if not fault.element:
            raise InvalidReferenceError("OPEN fault needs an element name")
        if not circuit.has_element(fault.element):
            raise InvalidReferenceError(f"no element named {fault.element!r}")
        remaining = tuple(el for el in circuit.elements if el.name != fault.element)
        if not remaining:
            raise MissingGroundError("opening the only element leaves no circuit")
        return circuit.with_elements(remaining)

    if fault.kind is FaultKind.BYPASS:
        if not fault.node:
            raise InvalidReferenceError("BYPASS fault needs a node")
        if fault.node not in nodes:
            raise InvalidReferenceError(f"fault node {fault.node!r} does not exist")
        if fault.node == GROUND:
            raise InvalidReferenceError("BYPASS fault from ground to ground is meaningless")
        if fault.impedance <= 0.0:
            raise InvalidReferenceError("BYPASS leakage impedance must be > 0")
        extra = Element(
            "R" + FAULT_ELEMENT,
            ElementKind.RESISTOR,
            (fault.node, GROUND),
            value=fault.impedance,
        )
        return circuit.with_elements(circuit.elements + (extra,))

    raise InvalidReferenceError(f"unknown fault kind {fault.kind}")


def fault_branch_name(faulted: Circuit) -> str | None:
    """Name of the branch a SHORT/BYPASS injection added, if present."""
    for el in faulted.elements:
        if el.name.startswith(FAULT_ELEMENT) or el.name == "R" + FAULT_ELEMENT:
            return el.name
    return None


def prune_dead_sections(
    elements: tuple[Element, ...], base: Circuit
) -> Circuit | None:
    """Drop every element that lost its path to ground.

    Returns None when nothing conductive remains on the ground side.
    Models a de-energised island after breakers open: the island carries
    no current and is simply absent from the re-solve. ``base`` supplies
    the circuit metadata for the rebuilt survivor.
    """
    adjacency: dict[str, set[str]] = {}
    for el in elements:
        for a in el.nodes:
            for b in el.nodes:
                if a != b:
                    adjacency.setdefault(a, set()).add(b)
    if GROUND not in adjacency:
        return None
    live = {GROUND}
    frontier = [GROUND]
    while frontier:
        here = frontier.pop()
        for nxt in adjacency.get(here, ()):
            if nxt not in live:
                live.add(nxt)
                frontier.append(nxt)

    kept_names: set[str] = set()
    kept: list[Element] = []
    for el in elements:
        if el.kind is ElementKind.COUPLING:
            continue  # handled after its inductors are decided
        if all(n in live for n in el.nodes):
            kept.append(el)
            kept_names.add(el.name)
    # Sensing references into the dead island take their sensors with them.
    changed = True
    while changed:
        changed = False
        for el in list(kept):
            if el.ctrl_element and el.ctrl_element not in kept_names:
                kept.remove(el)
                kept_names.discard(el.name)
                changed = True
            elif el.ctrl_nodes and any(n not in live for n in el.ctrl_nodes):
                kept.remove(el)
                kept_names.discard(el.name)
                changed = True
    for el in elements:
        if el.kind is ElementKind.COUPLING and all(n in kept_names for n in el.coupled):
            kept.append(el)
    if not kept:
        return None
    try:
        return base.with_elements(tuple(kept))
    except (DanglingNodeError, MissingGroundError):
        return None


@dataclass(frozen=True)
class ProtectionSpec:
    """An overcurrent breaker in series with ``element``, or a differential
    device tripping on the current that escapes to ground."""

    element: str
    threshold: float
    kind: str = "overcurrent"  # or "differential"

    def __post_init__(self):
        if self.kind not in ("overcurrent", "differential"):
            raise InvalidReferenceError(
                f"protection kind must be overcurrent or differential, got {self.kind!r}"
            )
        if self.threshold <= 0.0:
            raise InvalidReferenceError("protection threshold must be > 0")


@dataclass(frozen=True)
class ProtectionResult:
    spec: ProtectionSpec
    observed: float
    tripped: bool


@dataclass(frozen=True)
class ProtectionReport:
    """Outcome of one fault against a protection plan."""

    results: tuple[ProtectionResult, ...]
    fault_current: complex | None      # through the injected branch
    residual_current: float | None     # magnitude leaking to ground (BYPASS)
    isolated: bool | None              # None when nothing tripped
    fault_solution: Solution
    post_trip_solution: Solution | None

    @property
    def tripped(self) -> tuple[str, ...]:
        return tuple(r.spec.element for r in self.results if r.tripped)


def protection_check(
    circuit: Circuit,
    protections: list[ProtectionSpec],
    fault: FaultSpec | None = None,
    ground_loop_impedance: float = 0.0,
    frequency: float | None = None,
) -> ProtectionReport:
    """Impose a fault and report which protections trip and what survives.

    Overcurrent devices compare the magnitude of their element's current
    against the threshold. Differential devices compare the residual
    (ground-leak) current, which a BYPASS fault drives through its leakage
    branch in series with ``ground_loop_impedance``. After tripping, the
    tripped elements are opened, dead islands pruned, and the remainder
    re-solved to show what still operates.
    """
    for spec in protections:
        if not circuit.has_element(spec.element):
            raise InvalidReferenceError(f"protection watches unknown element {spec.element!r}")
    if frequency is None:
        frequency = circuit.ac_frequency or 0.0

    faulted = circuit
    if fault is not None:
        if fault.kind is FaultKind.BYPASS and ground_loop_impedance > 0.0:
            fault = replace(fault, impedance=fault.impedance + ground_loop_impedance)
        faulted = inject_fault(circuit, fault)

    sol = solve(faulted, frequency)
    branch = fault_branch_name(faulted) if fault is not None else None
    fault_current = sol.current(branch) if branch else None
    residual = None
    if fault is not None and fault.kind is FaultKind.BYPASS and branch:
        residual = abs(sol.current(branch))

    results = []
    for spec in protections:
        if spec.kind == "differential":
            observed = residual if residual is not None else 0.0
        else:
            observed = abs(sol.current(spec.element)) if faulted.has_element(spec.element) else 0.0
        results.append(
            ProtectionResult(spec=spec, observed=observed, tripped=observed > spec.threshold)
        )

    tripped_elements = {r.spec.element for r in results if r.tripped}
    isolated: bool | None = None
    post_sol: Solution | None = None
    if tripped_elements:
        survivors = tuple(el for el in faulted.elements if el.name not in tripped_elements)
        pruned = prune_dead_sections(survivors, faulted) if survivors else None
        if pruned is None:
            isolated = True  # everything de-energised
        else:
            post_sol = solve(pruned, frequency)
            if branch and pruned.has_element(branch):
                scale = max(abs(fault_current) if fault_current else 0.0, 1e-12)
                isolated = abs(post_sol.current(branch)) <= 1e-9 * scale
            else:
                isolated = True
    return ProtectionReport(
        results=tuple(results),
        fault_current=fault_current,
        residual_current=residual,
        isolated=isolated,
        fault_solution=sol,
        post_trip_solution=post_sol,
    )
