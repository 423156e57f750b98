"""Circuit container and structural validation."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .elements import Element, ElementKind, SwitchState
from .errors import (
    DanglingNodeError,
    DuplicateNameError,
    InvalidElementError,
    InvalidReferenceError,
    MissingGroundError,
)

GROUND = "0"


@dataclass(frozen=True)
class Circuit:
    """An immutable bag of elements plus optional analysis metadata.

    ``ac_frequency`` and ``port`` mirror the ``.AC`` and ``.PORT`` netlist
    directives; they are defaults for analyses, never solver state.
    """

    elements: tuple[Element, ...]
    title: str = ""
    ac_frequency: float | None = None
    port: tuple[str, str] | None = None

    def __post_init__(self):
        validate_circuit(self)

    # -- lookups ---------------------------------------------------------

    @property
    def nodes(self) -> tuple[str, ...]:
        """All node names in first-appearance order, ground included."""
        seen: dict[str, None] = {}
        for el in self.elements:
            for n in el.nodes:
                seen.setdefault(n, None)
        return tuple(seen)

    def element(self, name: str) -> Element:
        for el in self.elements:
            if el.name == name:
                return el
        raise InvalidReferenceError(f"no element named {name!r}")

    def has_element(self, name: str) -> bool:
        return any(el.name == name for el in self.elements)

    # -- derived circuits -------------------------------------------------

    def with_elements(self, elements: tuple[Element, ...]) -> "Circuit":
        return replace(self, elements=elements)

    def replace_value(self, name: str, value: float) -> "Circuit":
        """Copy of the circuit with one element's value swapped."""
        found = False
        out = []
        for el in self.elements:
            if el.name == name:
                out.append(replace(el, value=value))
                found = True
            else:
                out.append(el)
        if not found:
            raise InvalidReferenceError(f"no element named {name!r}")
        return self.with_elements(tuple(out))

    def with_switch(self, name: str, state: SwitchState) -> "Circuit":
        el = self.element(name)
        if el.kind is not ElementKind.SWITCH:
            raise InvalidReferenceError(f"{name} is not a switch")
        out = tuple(replace(e, state=state) if e.name == name else e for e in self.elements)
        return self.with_elements(out)


def validate_circuit(circuit: Circuit) -> None:
    """Enforce the structural invariants every public constructor relies on.

    Rules: unique names, at least one element on ground, every node (and
    every sensing node) reachable from ground through element terminals,
    coupling and current-sense references resolvable.
    """
    if not circuit.elements:
        raise MissingGroundError("circuit has no elements")

    names: set[str] = set()
    for el in circuit.elements:
        if el.name in names:
            raise DuplicateNameError(f"duplicate element name {el.name!r}")
        names.add(el.name)

    node_set: set[str] = set()
    for el in circuit.elements:
        node_set.update(el.nodes)
    if GROUND not in node_set:
        raise MissingGroundError("no element terminal touches the reference node '0'")

    # Reachability over element terminals, transformer windings included.
    adjacency: dict[str, set[str]] = {n: set() for n in node_set}
    for el in circuit.elements:
        for a in el.nodes:
            for b in el.nodes:
                if a != b:
                    adjacency[a].add(b)
    reached = {GROUND}
    frontier = [GROUND]
    while frontier:
        here = frontier.pop()
        for nxt in adjacency[here]:
            if nxt not in reached:
                reached.add(nxt)
                frontier.append(nxt)
    unreached = sorted(node_set - reached)
    if unreached:
        raise DanglingNodeError(
            f"node(s) {', '.join(unreached)} have no path to the reference node"
        )

    inductors = {el.name for el in circuit.elements if el.kind is ElementKind.INDUCTOR}
    current_bearing = names  # any element's current can be sensed
    for el in circuit.elements:
        if el.kind is ElementKind.COUPLING:
            for ref in el.coupled:
                if ref not in inductors:
                    raise InvalidReferenceError(
                        f"{el.name}: coupled element {ref!r} is not an inductor"
                    )
        if el.ctrl_element is not None and el.ctrl_element not in current_bearing:
            raise InvalidReferenceError(
                f"{el.name}: sensed element {el.ctrl_element!r} does not exist"
            )
        if el.ctrl_nodes is not None:
            for n in el.ctrl_nodes:
                if n not in node_set:
                    raise InvalidReferenceError(
                        f"{el.name}: sensing node {n!r} does not exist"
                    )
    # A coupling may not sit on top of another coupling for the same pair.
    pairs: set[frozenset[str]] = set()
    for el in circuit.elements:
        if el.kind is ElementKind.COUPLING:
            key = frozenset(el.coupled)
            if key in pairs:
                raise InvalidElementError(
                    f"{el.name}: inductor pair {sorted(key)} already coupled"
                )
            pairs.add(key)
