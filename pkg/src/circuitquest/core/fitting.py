"""Equivalent-circuit identification from terminal measurements.

Candidate models are parameterised circuit builders. Fitting minimises the
RMS relative mismatch between simulated and observed probe phasors with
multi-start Nelder-Mead in log-parameter space, which keeps every physical
parameter positive without explicit constraints.
"""

from __future__ import annotations

import logging
import math
import zlib
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
import scipy.optimize

from .circuit import Circuit
from .elements import Element, ElementKind, SwitchState
from .errors import CircuitError, InvalidReferenceError, NonConvergenceError, SingularSystemError
from .mna import solve
from .sensitivity import Probe

logger = logging.getLogger(__name__)

#: Stop a candidate early once its residual is numerically zero.
EARLY_STOP_RESIDUAL = 1e-13

#: Residuals this small compare as ties; fewer parameters then win.
TIE_RESIDUAL = 1e-9


@dataclass(frozen=True)
class Stimulus:
    """Excitation for one measurement: source overrides, switch states,
    and the analysis frequency (0 for DC)."""

    frequency: float = 0.0
    sources: dict[str, tuple[float, float]] = field(default_factory=dict)
    switches: dict[str, SwitchState] = field(default_factory=dict)


@dataclass(frozen=True)
class Observation:
    probe: Probe
    value: complex


@dataclass(frozen=True)
class Measurement:
    stimulus: Stimulus
    observations: tuple[Observation, ...]


@dataclass(frozen=True)
class CandidateModel:
    """A named topology: parameter bounds plus a circuit builder."""

    name: str
    bounds: dict[str, tuple[float, float]]
    build: Callable[[dict[str, float]], Circuit]

    def __post_init__(self):
        for pname, (lo, hi) in self.bounds.items():
            if not 0.0 < lo < hi:
                raise CircuitError(f"{self.name}.{pname}: bounds must satisfy 0 < lo < hi")

    @property
    def param_names(self) -> tuple[str, ...]:
        return tuple(self.bounds)


@dataclass(frozen=True)
class FitResult:
    model: str
    params: dict[str, float]
    residual: float
    ranking: tuple[tuple[str, float, int], ...]  # (model, residual, n_params)
    evaluations: int


def apply_stimulus(circuit: Circuit, stimulus: Stimulus) -> Circuit:
    elements = list(circuit.elements)
    by_name = {el.name: i for i, el in enumerate(elements)}
    for name, (rms, phase_deg) in stimulus.sources.items():
        if name not in by_name:
            raise InvalidReferenceError(f"stimulus source {name!r} not in model")
        el = elements[by_name[name]]
        if not el.is_source:
            raise InvalidReferenceError(f"stimulus target {name!r} is not a source")
        elements[by_name[name]] = replace(el, value=rms, phase_deg=phase_deg)
    for name, state in stimulus.switches.items():
        if name not in by_name:
            raise InvalidReferenceError(f"stimulus switch {name!r} not in model")
        el = elements[by_name[name]]
        if el.kind is not ElementKind.SWITCH:
            raise InvalidReferenceError(f"stimulus target {name!r} is not a switch")
        elements[by_name[name]] = replace(el, state=state)
    return circuit.with_elements(tuple(elements))


def measurement_residual(
    model: CandidateModel, params: dict[str, float], measurements: list[Measurement]
) -> float:
    """RMS relative mismatch over every observation; large on solver failure."""
    errors: list[float] = []
    try:
        base = model.build(params)
    except CircuitError:
        return 1e9
    for m in measurements:
        try:
            sol = solve(apply_stimulus(base, m.stimulus), m.stimulus.frequency)
        except (SingularSystemError, CircuitError):
            errors.extend(1e6 for _ in m.observations)
            continue
        for obs in m.observations:
            sim = obs.probe.evaluate(base, sol)
            scale = max(abs(obs.value), 1e-12)
            errors.append(abs(sim - obs.value) / scale)
    if not errors:
        raise CircuitError("no observations to fit against")
    return math.sqrt(sum(e * e for e in errors) / len(errors))


class _Converged(Exception):
    def __init__(self, x: np.ndarray, fun: float):
        self.x, self.fun = x, fun


def _fit_candidate(
    model: CandidateModel,
    measurements: list[Measurement],
    starts: int,
    max_evals: int,
    seed: int,
) -> tuple[dict[str, float], float, int]:
    names = model.param_names
    lo = np.array([math.log(model.bounds[n][0]) for n in names])
    hi = np.array([math.log(model.bounds[n][1]) for n in names])
    evals = 0

    def params_of(x: np.ndarray) -> dict[str, float]:
        return {n: math.exp(min(max(v, -700.0), 700.0)) for n, v in zip(names, x)}

    def objective(x: np.ndarray) -> float:
        nonlocal evals
        evals += 1
        penalty = float(np.sum(np.maximum(0.0, lo - x) + np.maximum(0.0, x - hi))) * 1e3
        value = measurement_residual(model, params_of(np.clip(x, lo, hi)), measurements)
        total = value + penalty
        if total < EARLY_STOP_RESIDUAL:
            raise _Converged(x, total)
        return total

    rng = np.random.default_rng((seed + zlib.crc32(model.name.encode())) & 0xFFFFFFFF)
    best_x: np.ndarray | None = None
    best_fun = math.inf
    for k in range(starts):
        if k == 0:
            x0 = (lo + hi) / 2.0
        else:
            x0 = rng.uniform(lo, hi)
        try:
            res = scipy.optimize.minimize(
                objective,
                x0,
                method="Nelder-Mead",
                options={
                    "maxfev": max_evals,
                    "xatol": 1e-12,
                    "fatol": 1e-15,
                    "adaptive": len(names) > 2,
                },
            )
            x_final, fun = res.x, float(res.fun)
        except _Converged as hit:
            x_final, fun = hit.x, hit.fun
        if fun < best_fun:
            best_fun, best_x = fun, x_final
        if best_fun < EARLY_STOP_RESIDUAL:
            break

    assert best_x is not None
    clipped = np.clip(best_x, lo, hi)
    params = params_of(clipped)
    return params, measurement_residual(model, params, measurements), evals


def _residuals_tie(ra: float, rb: float) -> bool:
    if ra <= TIE_RESIDUAL and rb <= TIE_RESIDUAL:
        return True
    return abs(ra - rb) <= 1e-6 * max(ra, rb)


def fit_equivalent_circuit(
    candidates: list[CandidateModel],
    measurements: list[Measurement],
    starts: int = 16,
    max_evals: int = 2000,
    seed: int = 0,
    acceptable_residual: float | None = None,
) -> FitResult:
    """Fit every candidate and rank them; ties go to the smaller model.

    Raises NonConvergence (best result attached) when ``acceptable_residual``
    is given and even the winner misses it.
    """
    if not candidates:
        raise CircuitError("no candidate models given")
    if not measurements:
        raise CircuitError("no measurements given")

    fits: list[tuple[CandidateModel, dict[str, float], float, int]] = []
    total_evals = 0
    for model in candidates:
        params, residual, evals = _fit_candidate(model, measurements, starts, max_evals, seed)
        total_evals += evals
        logger.debug("fit %s: residual %.3e after %d evaluations", model.name, residual, evals)
        fits.append((model, params, residual, len(model.param_names)))

    fits.sort(key=lambda f: f[2])
    # Stable pass: within a tie group, fewer parameters first.
    for i in range(len(fits)):
        for j in range(len(fits) - 1, i, -1):
            a, b = fits[j - 1], fits[j]
            if _residuals_tie(a[2], b[2]) and b[3] < a[3]:
                fits[j - 1], fits[j] = b, a

    winner = fits[0]
    result = FitResult(
        model=winner[0].name,
        params=winner[1],
        residual=winner[2],
        ranking=tuple((f[0].name, f[2], f[3]) for f in fits),
        evaluations=total_evals,
    )
    if acceptable_residual is not None and result.residual > acceptable_residual:
        raise NonConvergenceError(
            f"best candidate {result.model} reached residual {result.residual:.3e}, "
            f"above the acceptable {acceptable_residual:.3e}",
            best=result,
        )
    return result


def synthesize_measurements(
    model: CandidateModel,
    params: dict[str, float],
    plan: list[tuple[Stimulus, list[Probe]]],
) -> list[Measurement]:
    """Noiseless observations a given parameterisation would produce."""
    base = model.build(params)
    out: list[Measurement] = []
    for stimulus, probes in plan:
        sol = solve(apply_stimulus(base, stimulus), stimulus.frequency)
        obs = tuple(Observation(p, p.evaluate(base, sol)) for p in probes)
        out.append(Measurement(stimulus=stimulus, observations=obs))
    return out


# --------------------------------------------------------------------------
# Stock topologies


def _battery_thevenin(p: dict[str, float]) -> Circuit:
    return Circuit(
        (
            Element("VEMF", ElementKind.VSOURCE, ("i", "0"), value=p["emf"], source_resistance=0.0),
            Element("RINT", ElementKind.RESISTOR, ("i", "t"), value=p["r_int"]),
            Element("ILOAD", ElementKind.ISOURCE, ("t", "0"), value=0.0),
        ),
        title="battery, Thevenin form",
    )


def _battery_rc(p: dict[str, float]) -> Circuit:
    return Circuit(
        (
            Element("VEMF", ElementKind.VSOURCE, ("i", "0"), value=p["emf"], source_resistance=0.0),
            Element("R0", ElementKind.RESISTOR, ("i", "m"), value=p["r0"]),
            Element("R1", ElementKind.RESISTOR, ("m", "t"), value=p["r1"]),
            Element("C1", ElementKind.CAPACITOR, ("m", "t"), value=p["c1"]),
            Element("ILOAD", ElementKind.ISOURCE, ("t", "0"), value=0.0),
        ),
        title="battery with one relaxation branch",
    )


def _pv_linear(p: dict[str, float]) -> Circuit:
    return Circuit(
        (
            Element("IPH", ElementKind.ISOURCE, ("0", "n"), value=p["i_ph"]),
            Element("RSH", ElementKind.RESISTOR, ("n", "0"), value=p["r_sh"]),
            Element("RSER", ElementKind.RESISTOR, ("n", "t"), value=p["r_s"]),
            Element("ILOAD", ElementKind.ISOURCE, ("t", "0"), value=0.0),
        ),
        title="photovoltaic source near its operating point",
    )


def _transformer_shunt(p: dict[str, float]) -> Circuit:
    return Circuit(
        (
            Element("VTEST", ElementKind.VSOURCE, ("p", "0"), value=230.0, source_resistance=0.0),
            Element("RSER", ElementKind.RESISTOR, ("p", "m"), value=p["r_s"]),
            Element("LSER", ElementKind.INDUCTOR, ("m", "q"), value=p["l_s"]),
            Element("RMAG", ElementKind.RESISTOR, ("q", "0"), value=p["r_m"]),
            Element("LMAG", ElementKind.INDUCTOR, ("q", "0"), value=p["l_m"]),
            Element("SWSC", ElementKind.SWITCH, ("q", "0"), state=SwitchState.OPEN),
        ),
        title="transformer, series plus magnetising branch",
    )


def _synchronous_machine(p: dict[str, float]) -> Circuit:
    return Circuit(
        (
            Element("VEMF", ElementKind.VSOURCE, ("i", "0"), value=p["emf"], source_resistance=0.0),
            Element("RARM", ElementKind.RESISTOR, ("i", "x"), value=p["r_a"]),
            Element("LSYN", ElementKind.INDUCTOR, ("x", "t"), value=p["l_s"]),
            Element("SWSC", ElementKind.SWITCH, ("t", "0"), state=SwitchState.OPEN),
        ),
        title="synchronous machine, EMF behind reactance",
    )


def stock_candidates() -> dict[str, CandidateModel]:
    """The topologies the course identifies from terminal tests."""
    return {
        "battery_thevenin": CandidateModel(
            "battery_thevenin",
            bounds={"emf": (0.1, 1000.0), "r_int": (1e-4, 100.0)},
            build=_battery_thevenin,
        ),
        "battery_rc": CandidateModel(
            "battery_rc",
            bounds={
                "emf": (0.1, 1000.0),
                "r0": (1e-4, 100.0),
                "r1": (1e-4, 100.0),
                "c1": (1e-6, 10.0),
            },
            build=_battery_rc,
        ),
        "pv_linear": CandidateModel(
            "pv_linear",
            bounds={"i_ph": (0.01, 100.0), "r_sh": (1.0, 10000.0), "r_s": (1e-3, 100.0)},
            build=_pv_linear,
        ),
        "transformer_shunt": CandidateModel(
            "transformer_shunt",
            bounds={
                "r_s": (1e-3, 100.0),
                "l_s": (1e-5, 10.0),
                "r_m": (10.0, 1e6),
                "l_m": (1e-3, 1000.0),
            },
            build=_transformer_shunt,
        ),
        "synchronous_machine": CandidateModel(
            "synchronous_machine",
            bounds={"emf": (1.0, 100000.0), "r_a": (1e-3, 100.0), "l_s": (1e-4, 100.0)},
            build=_synchronous_machine,
        ),
    }
