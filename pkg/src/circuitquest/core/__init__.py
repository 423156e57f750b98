"""Linear circuit engine: netlists, phasor MNA solves, and the derived
analyses (Thevenin, three-phase, power factor, faults, sensitivity,
conductor sizing, equivalent-circuit fitting)."""

from .analysis import (
    ElementPower,
    MaxPowerResult,
    PortModel,
    PowerReport,
    element_power,
    maximum_power_load,
    power_summary,
    superpose,
    thevenin,
    wye_delta,
)
from .circuit import GROUND, Circuit, validate_circuit
from .elements import DEFAULT_SOURCE_RESISTANCE, Element, ElementKind, SwitchState
from .errors import (
    AlreadyCompensatedError,
    CircuitError,
    DanglingNodeError,
    DuplicateNameError,
    InvalidElementError,
    InvalidReferenceError,
    MismatchedSolutionError,
    MissingGroundError,
    NeedTwoSourcesError,
    NetlistSyntaxError,
    NoAdmissibleSizeError,
    NonConvergenceError,
    NonDissipativePortError,
    SingularSystemError,
    UnbalancedSystemError,
    UnknownKindError,
    ZeroImpedanceError,
    ZeroImpedancePortError,
)
from .faults import (
    FaultKind,
    FaultSpec,
    ProtectionReport,
    ProtectionSpec,
    fault_branch_name,
    inject_fault,
    protection_check,
    prune_dead_sections,
)
from .fitting import (
    CandidateModel,
    FitResult,
    Measurement,
    Observation,
    Stimulus,
    apply_stimulus,
    fit_equivalent_circuit,
    measurement_residual,
    stock_candidates,
    synthesize_measurements,
)
from .mna import (
    Solution,
    SweepPoint,
    frequency_sweep,
    kcl_residuals,
    max_relative_kcl_residual,
    solve,
    solve_ac,
    solve_dc,
    terminal_currents,
)
from .netlist import format_value, parse_netlist, parse_value, serialize_netlist, source_phasor
from .phasor import Phasor, wrap_angle
from .power_factor import PowerFactorCorrection, correct_power_factor, load_impedance
from .sensitivity import FREQUENCY_PARAM, Probe, sensitivity
from .sizing import (
    RESISTIVITY,
    STANDARD_SECTIONS_MM2,
    ConductorChoice,
    size_conductor,
    wire_resistance,
)
from .threephase import (
    ThreePhaseLoad,
    ThreePhaseReport,
    ThreePhaseSystem,
    build_three_phase_circuit,
    impedance_elements,
    solve_three_phase,
)

__all__ = [
    "GROUND",
    "DEFAULT_SOURCE_RESISTANCE",
    "FREQUENCY_PARAM",
    "RESISTIVITY",
    "STANDARD_SECTIONS_MM2",
    "AlreadyCompensatedError",
    "CandidateModel",
    "Circuit",
    "CircuitError",
    "ConductorChoice",
    "DanglingNodeError",
    "DuplicateNameError",
    "Element",
    "ElementKind",
    "ElementPower",
    "FaultKind",
    "FaultSpec",
    "FitResult",
    "InvalidElementError",
    "InvalidReferenceError",
    "MaxPowerResult",
    "Measurement",
    "MismatchedSolutionError",
    "MissingGroundError",
    "NeedTwoSourcesError",
    "NetlistSyntaxError",
    "NoAdmissibleSizeError",
    "NonConvergenceError",
    "NonDissipativePortError",
    "Observation",
    "Phasor",
    "PortModel",
    "PowerFactorCorrection",
    "PowerReport",
    "Probe",
    "ProtectionReport",
    "ProtectionSpec",
    "SingularSystemError",
    "Solution",
    "Stimulus",
    "SweepPoint",
    "SwitchState",
    "ThreePhaseLoad",
    "ThreePhaseReport",
    "ThreePhaseSystem",
    "UnbalancedSystemError",
    "UnknownKindError",
    "ZeroImpedanceError",
    "ZeroImpedancePortError",
    "apply_stimulus",
    "build_three_phase_circuit",
    "correct_power_factor",
    "element_power",
    "fault_branch_name",
    "fit_equivalent_circuit",
    "format_value",
    "frequency_sweep",
    "impedance_elements",
    "inject_fault",
    "kcl_residuals",
    "load_impedance",
    "max_relative_kcl_residual",
    "maximum_power_load",
    "measurement_residual",
    "parse_netlist",
    "parse_value",
    "power_summary",
    "protection_check",
    "prune_dead_sections",
    "sensitivity",
    "serialize_netlist",
    "size_conductor",
    "solve",
    "solve_ac",
    "solve_dc",
    "solve_three_phase",
    "source_phasor",
    "stock_candidates",
    "superpose",
    "synthesize_measurements",
    "terminal_currents",
    "thevenin",
    "validate_circuit",
    "wire_resistance",
    "wrap_angle",
    "wye_delta",
]
