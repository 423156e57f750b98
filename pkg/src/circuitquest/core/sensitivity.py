"""Finite-difference sensitivities of solved quantities."""

from __future__ import annotations

from dataclasses import dataclass

from .circuit import Circuit
from .elements import ElementKind
from .errors import CircuitError, InvalidReferenceError
from .mna import Solution, solve

#: Parameter name that selects the analysis frequency instead of an element.
FREQUENCY_PARAM = "@frequency"

#: Relative half-width of the central difference.
RELATIVE_STEP = 1e-6


@dataclass(frozen=True)
class Probe:
    """A scalar-valued observable of a solved circuit.

    kinds: ``voltage`` (between ``nodes``), ``current`` or ``power`` (of
    ``element``), ``loss`` (total power in all resistors).
    """

    kind: str
    nodes: tuple[str, str] | None = None
    element: str | None = None

    def __post_init__(self):
        if self.kind not in ("voltage", "current", "power", "loss"):
            raise InvalidReferenceError(f"unknown probe kind {self.kind!r}")
        if self.kind == "voltage" and (self.nodes is None or len(self.nodes) != 2):
            raise InvalidReferenceError("voltage probe needs a node pair")
        if self.kind in ("current", "power") and not self.element:
            raise InvalidReferenceError(f"{self.kind} probe needs an element name")

    def evaluate(self, circuit: Circuit, solution: Solution) -> complex:
        if self.kind == "voltage":
            return solution.voltage_between(*self.nodes)
        if self.kind == "current":
            return solution.current(self.element)
        if self.kind == "power":
            from .analysis import element_power

            return element_power(circuit.element(self.element), solution)
        total = 0.0
        for el in circuit.elements:
            if el.kind is ElementKind.RESISTOR:
                v = solution.voltage_between(el.nodes[0], el.nodes[1])
                total += (abs(v) ** 2) / el.value
        return complex(total)


def sensitivity(
    circuit: Circuit,
    parameter: str,
    probe: Probe,
    frequency: float | None = None,
    metric: str = "complex",
    relative_step: float = RELATIVE_STEP,
) -> complex:
    """Central-difference derivative of a probed quantity.

    ``parameter`` is an element name, or FREQUENCY_PARAM to differentiate
    against the analysis frequency. ``metric`` is ``complex`` for the raw
    phasor derivative or ``magnitude`` for d|probe|/dp. The parameter value
    must be strictly positive so the relative step is well defined.
    """
    if metric not in ("complex", "magnitude"):
        raise CircuitError(f"metric must be complex or magnitude, got {metric!r}")
    if frequency is None:
        frequency = circuit.ac_frequency or 0.0

    if parameter == FREQUENCY_PARAM:
        base = frequency
        if base <= 0.0:
            raise CircuitError("frequency sensitivity needs a positive base frequency")

        def at(p: float) -> complex:
            sol = solve(circuit, p)
            return probe.evaluate(circuit, sol)

    else:
        el = circuit.element(parameter)
        base = el.value
        if base <= 0.0:
            raise CircuitError(f"parameter {parameter!r} must be > 0 for a relative step")

        def at(p: float) -> complex:
            varied = circuit.replace_value(parameter, p)
            sol = solve(varied, frequency)
            return probe.evaluate(varied, sol)

    h = relative_step * base
    hi, lo = at(base + h), at(base - h)
    if metric == "magnitude":
        return complex((abs(hi) - abs(lo)) / (2.0 * h))
    return (hi - lo) / (2.0 * h)
