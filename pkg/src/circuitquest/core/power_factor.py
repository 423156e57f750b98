"""Reactive compensation sizing, verified by re-solving the circuit."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .analysis import power_summary
from .circuit import Circuit
from .elements import Element, ElementKind
from .errors import AlreadyCompensatedError, CircuitError
from .mna import solve_ac
from .threephase import impedance_elements


@dataclass(frozen=True)
class PowerFactorCorrection:
    """Sizing result for a single-phase compensation element."""

    qc: float               # reactive power the element must exchange, var
    kind: str               # "C" for lagging loads, "L" for leading ones
    value: float            # farads or henries
    achieved_pf: float      # measured at the source after compensation
    load_circuit: Circuit
    compensated_circuit: Circuit


def load_impedance(p_watts: float, pf: float, v_rms: float, lagging: bool = True) -> complex:
    """Impedance drawing P at the given power factor from V (RMS)."""
    s = p_watts / pf
    q = math.sqrt(max(s * s - p_watts * p_watts, 0.0))
    if not lagging:
        q = -q
    return v_rms * v_rms / complex(p_watts, -q)


def correct_power_factor(
    p_watts: float,
    pf: float,
    target_pf: float,
    v_rms: float,
    frequency: float,
    lagging: bool = True,
) -> PowerFactorCorrection:
    """Size the parallel element that lifts the power factor to the target.

    Lagging loads get a capacitor, leading loads an inductor; either way
    Qc = P (tan(acos pf) - tan(acos target)). The returned achieved_pf is
    re-measured at the source of the compensated circuit, not assumed.
    """
    if not 0.0 < pf < 1.0:
        raise CircuitError(f"power factor must lie in (0, 1), got {pf}")
    if not pf < target_pf <= 1.0:
        if target_pf <= pf:
            raise AlreadyCompensatedError(
                f"target power factor {target_pf} does not improve on {pf}"
            )
        raise CircuitError(f"target power factor must lie in (pf, 1], got {target_pf}")
    if p_watts <= 0.0 or v_rms <= 0.0 or frequency <= 0.0:
        raise CircuitError("power, voltage and frequency must all be > 0")

    qc = p_watts * (math.tan(math.acos(pf)) - math.tan(math.acos(target_pf)))
    omega = 2.0 * math.pi * frequency

    source = Element(
        "VSUP", ElementKind.VSOURCE, ("t", "0"), value=v_rms, source_resistance=0.0
    )
    load = impedance_elements("LOAD", "t", "0", load_impedance(p_watts, pf, v_rms, lagging), frequency)
    load_circuit = Circuit(
        (source, *load), title="uncompensated load", ac_frequency=frequency
    )

    if lagging:
        kind, value = "C", qc / (omega * v_rms * v_rms)
        comp = Element("CCOMP", ElementKind.CAPACITOR, ("t", "0"), value=value)
    else:
        kind, value = "L", v_rms * v_rms / (omega * qc)
        comp = Element("LCOMP", ElementKind.INDUCTOR, ("t", "0"), value=value)

    compensated = Circuit(
        (source, *load, comp), title="compensated load", ac_frequency=frequency
    )
    report = power_summary(compensated, solve_ac(compensated, frequency))
    s_src = -report.entries["VSUP"].s
    achieved = abs(s_src.real) / abs(s_src) if abs(s_src) > 1e-15 else 1.0

    return PowerFactorCorrection(
        qc=qc,
        kind=kind,
        value=value,
        achieved_pf=achieved,
        load_circuit=load_circuit,
        compensated_circuit=compensated,
    )
