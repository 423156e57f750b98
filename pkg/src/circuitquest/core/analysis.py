"""Analyses layered on top of the phasor solver."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .circuit import Circuit
from .elements import Element, ElementKind
from .errors import (
    InvalidReferenceError,
    MismatchedSolutionError,
    NeedTwoSourcesError,
    NonDissipativePortError,
    ZeroImpedanceError,
    ZeroImpedancePortError,
)
from .mna import Solution, solve, terminal_currents

#: Below this magnitude a Thevenin impedance counts as an ideal (zero) port.
ZERO_PORT_TOL = 1e-12


# --------------------------------------------------------------------------
# Power accounting


@dataclass(frozen=True)
class ElementPower:
    """Complex power taken by one element, passive sign convention."""

    s: complex
    pf: float
    flag: str  # "lagging" | "leading" | "unity"

    @property
    def p(self) -> float:
        return self.s.real

    @property
    def q(self) -> float:
        return self.s.imag

    @property
    def apparent(self) -> float:
        return abs(self.s)


@dataclass(frozen=True)
class PowerReport:
    """Per-element power plus source/load totals.

    ``delivered`` sums the power of every element that generates
    (negative absorbed power, sign flipped so the total reads positive);
    ``absorbed`` sums the rest. Their difference is the conservation
    residual and stays at rounding level for a correct solution.
    """

    entries: dict[str, ElementPower]
    total: complex
    delivered: complex
    absorbed: complex

    def conservation_residual(self) -> float:
        scale = max(abs(self.delivered), abs(self.absorbed), 1e-12)
        return abs(self.total) / scale


def element_power(el: Element, solution: Solution) -> complex:
    """Complex power absorbed by an element (all its terminals summed)."""
    s = 0.0 + 0.0j
    for node, current in terminal_currents(el, solution):
        s += solution.voltage(node) * current.conjugate()
    return s


def power_summary(circuit: Circuit, solution: Solution) -> PowerReport:
    """Per-element P/Q/S/pf and the source/load totals."""
    expected = {el.name for el in circuit.elements if el.kind is not ElementKind.COUPLING}
    if expected != set(solution.element_currents):
        raise MismatchedSolutionError("solution does not belong to this circuit")

    entries: dict[str, ElementPower] = {}
    total = 0.0 + 0.0j
    delivered = 0.0 + 0.0j
    absorbed = 0.0 + 0.0j
    for el in circuit.elements:
        if el.kind is ElementKind.COUPLING:
            continue
        s = element_power(el, solution)
        apparent = abs(s)
        pf = abs(s.real) / apparent if apparent > 1e-15 else 1.0
        if abs(s.imag) <= 1e-12 * max(apparent, 1.0):
            flag = "unity"
        elif s.imag > 0:
            flag = "lagging"
        else:
            flag = "leading"
        entries[el.name] = ElementPower(s=s, pf=pf, flag=flag)
        total += s
        if s.real < 0.0:
            delivered += -s
        else:
            absorbed += s
    return PowerReport(entries=entries, total=total, delivered=delivered, absorbed=absorbed)


# --------------------------------------------------------------------------
# Superposition


def _zeroed(el: Element) -> Element:
    return replace(el, value=0.0, phase_deg=0.0)


def superpose(circuit: Circuit, frequency: float | None = None) -> dict[str, Solution]:
    """Partial solution per independent source, all other sources zeroed.

    Zeroed voltage sources keep their series resistance, so the partial
    circuits sum exactly to the full solution. Raises NeedTwoSources for
    circuits with fewer than two independent sources.
    """
    if frequency is None:
        frequency = circuit.ac_frequency or 0.0
    sources = [el.name for el in circuit.elements if el.is_source]
    if len(sources) < 2:
        raise NeedTwoSourcesError(
            f"superposition needs at least two independent sources, found {len(sources)}"
        )
    out: dict[str, Solution] = {}
    for keep in sources:
        elements = tuple(
            _zeroed(el) if el.is_source and el.name != keep else el for el in circuit.elements
        )
        out[keep] = solve(circuit.with_elements(elements), frequency)
    return out


# --------------------------------------------------------------------------
# Thevenin / Norton ports


@dataclass(frozen=True)
class PortModel:
    """Thevenin equivalent seen from a node pair at one frequency."""

    vth: complex
    zth: complex
    port: tuple[str, str]
    frequency: float
    zero_impedance: bool

    def norton_current(self) -> complex:
        if self.zero_impedance:
            raise ZeroImpedancePortError(
                f"port {self.port} has zero impedance, Norton form undefined"
            )
        return self.vth / self.zth

    def load_current(self, z_load: complex) -> complex:
        """Current the port drives through an attached impedance."""
        return self.vth / (self.zth + z_load)

    def load_voltage(self, z_load: complex) -> complex:
        return self.load_current(z_load) * z_load


def _fresh_name(circuit: Circuit, base: str) -> str:
    name = base
    n = 1
    while circuit.has_element(name):
        n += 1
        name = f"{base}{n}"
    return name


def thevenin(
    circuit: Circuit,
    port: tuple[str, str] | None = None,
    frequency: float | None = None,
) -> PortModel:
    """Open-circuit voltage plus impedance from a unit test-current solve."""
    if port is None:
        port = circuit.port
    if port is None:
        raise InvalidReferenceError("no port given and the circuit carries no .PORT directive")
    node_a, node_b = port
    known = set(circuit.nodes)
    for n in port:
        if n not in known:
            raise InvalidReferenceError(f"port node {n!r} does not exist")
    if node_a == node_b:
        raise InvalidReferenceError("port nodes must differ")
    if frequency is None:
        frequency = circuit.ac_frequency or 0.0

    open_sol = solve(circuit, frequency)
    voc = open_sol.voltage_between(node_a, node_b)

    # 1 A pushed from node_b through the probe into node_a.
    probe = Element(
        _fresh_name(circuit, "ITHPROBE"), ElementKind.ISOURCE, (node_b, node_a), value=1.0
    )
    probed = circuit.with_elements(circuit.elements + (probe,))
    probe_sol = solve(probed, frequency)
    zth = probe_sol.voltage_between(node_a, node_b) - voc

    return PortModel(
        vth=voc,
        zth=zth,
        port=port,
        frequency=frequency,
        zero_impedance=abs(zth) < ZERO_PORT_TOL,
    )


@dataclass(frozen=True)
class MaxPowerResult:
    z_load: complex
    p_max: float


def maximum_power_load(port: PortModel) -> MaxPowerResult:
    """Conjugate-matched load and the power it draws (RMS convention)."""
    if port.zero_impedance or abs(port.zth) < ZERO_PORT_TOL:
        raise ZeroImpedancePortError(f"port {port.port} has zero impedance")
    r = port.zth.real
    if r <= 0.0:
        raise NonDissipativePortError(
            f"port {port.port} has Re(Zth) = {r:g} <= 0, transferable power is unbounded"
        )
    z_load = port.zth.conjugate()
    p_max = abs(port.vth) ** 2 / (4.0 * r)
    return MaxPowerResult(z_load=z_load, p_max=p_max)


# --------------------------------------------------------------------------
# Wye <-> delta


def wye_delta(
    impedances: tuple[complex, complex, complex],
    direction: str,
) -> tuple[complex, complex, complex]:
    """Transform a three-terminal star to a triangle or back.

    Wye triples are (z_a, z_b, z_c), the arm at each terminal; delta triples
    are (z_ab, z_bc, z_ca), the side opposite the same order. Both
    directions compose to the identity.
    """
    za, zb, zc = (complex(z) for z in impedances)
    if direction == "wye_to_delta":
        if min(abs(za), abs(zb), abs(zc)) == 0.0:
            raise ZeroImpedanceError("wye arm with zero impedance cannot be transformed")
        num = za * zb + zb * zc + zc * za
        return (num / zc, num / za, num / zb)
    if direction == "delta_to_wye":
        total = za + zb + zc
        if abs(total) < 1e-300 or min(abs(za), abs(zb), abs(zc)) == 0.0:
            raise ZeroImpedanceError("degenerate delta cannot be transformed")
        z_ab, z_bc, z_ca = za, zb, zc
        return (z_ab * z_ca / total, z_ab * z_bc / total, z_bc * z_ca / total)
    raise ValueError(f"direction must be 'wye_to_delta' or 'delta_to_wye', got {direction!r}")
