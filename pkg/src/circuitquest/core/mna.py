"""Modified nodal analysis over complex phasors.

One assembly routine covers DC (omega = 0) and single-frequency AC. Branch
current unknowns are created for every voltage-defined element (sources,
inductors, closed switches, transformers, controlled voltage sources) and
for any element whose current another element senses. Inductors always get
a branch current so that the zero-frequency short and mutual coupling fall
out of the same stamp.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .circuit import GROUND, Circuit
from .elements import Element, ElementKind, SwitchState
from .errors import CircuitError, InvalidReferenceError, SingularSystemError
from .netlist import source_phasor
from .phasor import Phasor

#: Pivot threshold, relative to the infinity norm of the system matrix.
PIVOT_RTOL = 1e-12

_ALWAYS_BRANCH = {
    ElementKind.VSOURCE,
    ElementKind.VCVS,
    ElementKind.CCVS,
    ElementKind.INDUCTOR,
    ElementKind.TRANSFORMER,
}


@dataclass(frozen=True)
class Solution:
    """Phasor solution of one circuit at one frequency.

    ``frequency`` is hertz, 0.0 for DC. Voltages and currents are complex
    RMS values; the ground node is present and exactly zero. Element
    currents follow the into-first-terminal reference; a transformer
    reports its primary current.
    """

    frequency: float
    node_voltages: dict[str, complex]
    element_currents: dict[str, complex]

    def voltage(self, node: str) -> complex:
        try:
            return self.node_voltages[node]
        except KeyError:
            raise InvalidReferenceError(f"no node named {node!r}")

    def voltage_between(self, node_a: str, node_b: str) -> complex:
        return self.voltage(node_a) - self.voltage(node_b)

    def current(self, element: str) -> complex:
        try:
            return self.element_currents[element]
        except KeyError:
            raise InvalidReferenceError(f"no element named {element!r}")

    def voltage_phasor(self, node: str) -> Phasor:
        return Phasor.from_complex(self.voltage(node))

    def current_phasor(self, element: str) -> Phasor:
        return Phasor.from_complex(self.current(element))


def _branch_elements(circuit: Circuit) -> list[Element]:
    """Elements that receive a branch-current unknown, in circuit order."""
    sensed: set[str] = set()
    stack = [el.ctrl_element for el in circuit.elements if el.ctrl_element]
    while stack:
        name = stack.pop()
        if name in sensed:
            continue
        sensed.add(name)
        nxt = circuit.element(name).ctrl_element
        if nxt:
            stack.append(nxt)

    out = []
    for el in circuit.elements:
        if el.kind in _ALWAYS_BRANCH:
            out.append(el)
        elif el.kind is ElementKind.SWITCH:
            if el.state is SwitchState.CLOSED or el.name in sensed:
                out.append(el)
        elif el.name in sensed and el.kind is not ElementKind.COUPLING:
            out.append(el)
    return out


def _mutual_terms(circuit: Circuit) -> dict[str, list[tuple[str, float]]]:
    """inductor name -> [(other inductor, mutual inductance M)]."""
    out: dict[str, list[tuple[str, float]]] = {}
    for el in circuit.elements:
        if el.kind is not ElementKind.COUPLING:
            continue
        la, lb = (circuit.element(n) for n in el.coupled)
        m = el.value * math.sqrt(la.value * lb.value)
        out.setdefault(la.name, []).append((lb.name, m))
        out.setdefault(lb.name, []).append((la.name, m))
    return out


def solve(circuit: Circuit, frequency: float = 0.0) -> Solution:
    """Solve the circuit at the given frequency (0 for DC)."""
    if frequency < 0.0:
        raise CircuitError(f"frequency must be >= 0, got {frequency}")
    omega = 2.0 * math.pi * frequency

    node_names = [n for n in circuit.nodes if n != GROUND]
    nidx = {n: i for i, n in enumerate(node_names)}
    branches = _branch_elements(circuit)
    bidx = {el.name: len(node_names) + j for j, el in enumerate(branches)}
    mutual = _mutual_terms(circuit)

    size = len(node_names) + len(branches)
    a = np.zeros((size, size), dtype=complex)
    z = np.zeros(size, dtype=complex)

    def kcl(node: str, col: int, coeff: complex) -> None:
        if node != GROUND:
            a[nidx[node], col] += coeff

    def kcl_const(node: str, value: complex) -> None:
        # A known current `value` leaves `node` into an element.
        if node != GROUND:
            z[nidx[node]] -= value

    def vcol(node: str) -> int | None:
        return None if node == GROUND else nidx[node]

    def stamp_admittance(na: str, nb: str, y: complex) -> None:
        for n_from, n_to, sign in ((na, nb, 1.0), (nb, na, 1.0)):
            i = vcol(n_from)
            if i is None:
                continue
            a[i, i] += y
            j = vcol(n_to)
            if j is not None:
                a[i, j] -= y

    def row_voltage(row: int, node: str, coeff: complex) -> None:
        col = vcol(node)
        if col is not None:
            a[row, col] += coeff

    for el in circuit.elements:
        k = el.kind
        branch = bidx.get(el.name)

        if k is ElementKind.COUPLING:
            continue

        if branch is not None and k is not ElementKind.COUPLING and el.nodes:
            if k is ElementKind.TRANSFORMER:
                p_pos, p_neg, s_pos, s_neg = el.nodes
                ratio = el.value
                kcl(p_pos, branch, 1.0)
                kcl(p_neg, branch, -1.0)
                kcl(s_pos, branch, -ratio)
                kcl(s_neg, branch, ratio)
            else:
                kcl(el.nodes[0], branch, 1.0)
                kcl(el.nodes[1], branch, -1.0)

        if k is ElementKind.RESISTOR:
            if branch is None:
                stamp_admittance(el.nodes[0], el.nodes[1], 1.0 / el.value)
            else:
                row_voltage(branch, el.nodes[0], 1.0)
                row_voltage(branch, el.nodes[1], -1.0)
                a[branch, branch] -= el.value

        elif k is ElementKind.CAPACITOR:
            y = 1j * omega * el.value
            if branch is None:
                if omega > 0.0:
                    stamp_admittance(el.nodes[0], el.nodes[1], y)
            else:
                # i - y (Va - Vb) = 0; at DC this pins i to zero.
                a[branch, branch] += 1.0
                row_voltage(branch, el.nodes[0], -y)
                row_voltage(branch, el.nodes[1], y)

        elif k is ElementKind.INDUCTOR:
            row_voltage(branch, el.nodes[0], 1.0)
            row_voltage(branch, el.nodes[1], -1.0)
            a[branch, branch] -= 1j * omega * el.value
            for other, m in mutual.get(el.name, ()):
                a[branch, bidx[other]] -= 1j * omega * m

        elif k is ElementKind.VSOURCE:
            row_voltage(branch, el.nodes[0], 1.0)
            row_voltage(branch, el.nodes[1], -1.0)
            a[branch, branch] -= el.source_resistance
            z[branch] += source_phasor(el)

        elif k is ElementKind.ISOURCE:
            value = source_phasor(el)
            if branch is None:
                kcl_const(el.nodes[0], value)
                kcl_const(el.nodes[1], -value)
            else:
                a[branch, branch] += 1.0
                z[branch] += value

        elif k is ElementKind.VCVS:
            row_voltage(branch, el.nodes[0], 1.0)
            row_voltage(branch, el.nodes[1], -1.0)
            row_voltage(branch, el.ctrl_nodes[0], -el.value)
            row_voltage(branch, el.ctrl_nodes[1], el.value)

        elif k is ElementKind.VCCS:
            if branch is None:
                gm = el.value
                for out_node, sign in ((el.nodes[0], 1.0), (el.nodes[1], -1.0)):
                    i = vcol(out_node)
                    if i is None:
                        continue
                    for c_node, c_sign in ((el.ctrl_nodes[0], 1.0), (el.ctrl_nodes[1], -1.0)):
                        jcol = vcol(c_node)
                        if jcol is not None:
                            a[i, jcol] += sign * c_sign * gm
            else:
                a[branch, branch] += 1.0
                row_voltage(branch, el.ctrl_nodes[0], -el.value)
                row_voltage(branch, el.ctrl_nodes[1], el.value)

        elif k is ElementKind.CCVS:
            row_voltage(branch, el.nodes[0], 1.0)
            row_voltage(branch, el.nodes[1], -1.0)
            a[branch, bidx[el.ctrl_element]] -= el.value

        elif k is ElementKind.CCCS:
            ctrl_col = bidx[el.ctrl_element]
            if branch is None:
                kcl(el.nodes[0], ctrl_col, el.value)
                kcl(el.nodes[1], ctrl_col, -el.value)
            else:
                a[branch, branch] += 1.0
                a[branch, ctrl_col] -= el.value

        elif k is ElementKind.TRANSFORMER:
            p_pos, p_neg, s_pos, s_neg = el.nodes
            row_voltage(branch, p_pos, 1.0)
            row_voltage(branch, p_neg, -1.0)
            row_voltage(branch, s_pos, -el.value)
            row_voltage(branch, s_neg, el.value)

        elif k is ElementKind.SWITCH:
            if branch is None:
                continue
            if el.state is SwitchState.CLOSED:
                row_voltage(branch, el.nodes[0], 1.0)
                row_voltage(branch, el.nodes[1], -1.0)
            else:
                a[branch, branch] += 1.0  # sensed open switch: i = 0

    labels = [f"V({n})" for n in node_names] + [f"I({el.name})" for el in branches]
    x = _factor_and_solve(a, z, labels)

    voltages: dict[str, complex] = {GROUND: 0.0 + 0.0j}
    for n, i in nidx.items():
        voltages[n] = complex(x[i])

    currents: dict[str, complex] = {}
    for el in circuit.elements:
        if el.kind is ElementKind.COUPLING:
            continue
        currents[el.name] = _element_current(el, bidx, x, voltages, omega)

    return Solution(frequency=frequency, node_voltages=voltages, element_currents=currents)


def _factor_and_solve(a: np.ndarray, z: np.ndarray, labels: list[str]) -> np.ndarray:
    if a.shape[0] == 0:
        return np.zeros(0, dtype=complex)
    norm = np.abs(a).sum(axis=1).max()
    if norm == 0.0:
        raise SingularSystemError("system matrix is identically zero", labels[0])
    try:
        with warnings.catch_warnings():
            # The pivot check below reports exact singularity with a better
            # message than scipy's warning.
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    except scipy.linalg.LinAlgError as exc:
        raise SingularSystemError(f"singular system: {exc}") from exc
    diag = np.abs(np.diag(lu))
    worst = int(np.argmin(diag))
    if diag[worst] < PIVOT_RTOL * norm:
        raise SingularSystemError(
            f"singular system: unknown {labels[worst]} is unconstrained "
            f"(pivot {diag[worst]:.3e} vs norm {norm:.3e})",
            labels[worst],
        )
    return scipy.linalg.lu_solve((lu, piv), z, check_finite=False)


def _element_current(
    el: Element,
    bidx: dict[str, int],
    x: np.ndarray,
    voltages: dict[str, complex],
    omega: float,
) -> complex:
    branch = bidx.get(el.name)
    if branch is not None:
        return complex(x[branch])
    k = el.kind
    if k is ElementKind.RESISTOR:
        return (voltages[el.nodes[0]] - voltages[el.nodes[1]]) / el.value
    if k is ElementKind.CAPACITOR:
        if omega == 0.0:
            return 0.0 + 0.0j
        return 1j * omega * el.value * (voltages[el.nodes[0]] - voltages[el.nodes[1]])
    if k is ElementKind.ISOURCE:
        return source_phasor(el)
    if k is ElementKind.VCCS:
        return el.value * (voltages[el.ctrl_nodes[0]] - voltages[el.ctrl_nodes[1]])
    if k is ElementKind.CCCS:
        return el.value * complex(x[bidx[el.ctrl_element]])
    if k is ElementKind.SWITCH:
        return 0.0 + 0.0j  # open
    raise AssertionError(f"element {el.name} should carry a branch unknown")


def solve_dc(circuit: Circuit) -> Solution:
    """DC operating point: inductors short, capacitors open."""
    return solve(circuit, 0.0)


def solve_ac(circuit: Circuit, frequency: float | None = None) -> Solution:
    """Single-frequency phasor solution. Falls back to the .AC directive."""
    if frequency is None:
        frequency = circuit.ac_frequency
    if frequency is None:
        raise CircuitError("no frequency given and the circuit carries no .AC directive")
    if frequency <= 0.0:
        raise CircuitError(f"AC frequency must be > 0, got {frequency}")
    return solve(circuit, frequency)


def terminal_currents(el: Element, solution: Solution) -> list[tuple[str, complex]]:
    """(node, current flowing into the element at that node) per terminal.

    The per-node sums of these values over all elements are the KCL
    residuals, and sum(V_node * conj(current)) pairs give complex power.
    """
    if el.kind is ElementKind.COUPLING:
        return []
    i = solution.current(el.name)
    if el.kind is ElementKind.TRANSFORMER:
        p_pos, p_neg, s_pos, s_neg = el.nodes
        i_sec = -el.value * i
        return [(p_pos, i), (p_neg, -i), (s_pos, i_sec), (s_neg, -i_sec)]
    return [(el.nodes[0], i), (el.nodes[1], -i)]


def kcl_residuals(circuit: Circuit, solution: Solution) -> dict[str, complex]:
    """Sum of element currents entering each non-ground node."""
    sums: dict[str, complex] = {n: 0.0 + 0.0j for n in circuit.nodes if n != GROUND}
    for el in circuit.elements:
        for node, current in terminal_currents(el, solution):
            if node != GROUND:
                sums[node] += current
    return sums


def max_relative_kcl_residual(circuit: Circuit, solution: Solution) -> float:
    """Worst node residual, scaled by the largest element current."""
    scale = max((abs(i) for i in solution.element_currents.values()), default=0.0)
    scale = max(scale, 1e-12)
    residuals = kcl_residuals(circuit, solution)
    return max((abs(r) for r in residuals.values()), default=0.0) / scale


@dataclass(frozen=True)
class SweepPoint:
    frequency: float
    value: Phasor | None
    error: str | None = None


def frequency_sweep(
    circuit: Circuit,
    frequencies: list[float],
    probe: tuple[str, str],
) -> list[SweepPoint]:
    """Voltage between a node pair across a frequency grid.

    Frequencies must be positive and strictly increasing. A frequency where
    the system goes singular produces an error marker, not an exception.
    """
    last = 0.0
    for f in frequencies:
        if f <= last:
            raise CircuitError("frequencies must be positive and strictly increasing")
        last = f
    node_a, node_b = probe
    known = set(circuit.nodes)
    for n in probe:
        if n not in known:
            raise InvalidReferenceError(f"probe node {n!r} does not exist")
    points: list[SweepPoint] = []
    for f in frequencies:
        try:
            sol = solve(circuit, f)
        except SingularSystemError as exc:
            points.append(SweepPoint(f, None, str(exc)))
            continue
        points.append(SweepPoint(f, Phasor.from_complex(sol.voltage_between(node_a, node_b))))
    return points
