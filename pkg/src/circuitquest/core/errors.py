"""Exception types raised by the circuit layer."""


class CircuitError(Exception):
    """Base class for every circuit-layer failure."""


class NetlistSyntaxError(CircuitError):
    """Netlist text could not be parsed. Carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class UnknownKindError(CircuitError):
    """First token of a netlist card does not name a known element kind."""


class DuplicateNameError(CircuitError):
    """Two elements share a name."""


class MissingGroundError(CircuitError):
    """No element touches the reference node '0'."""


class DanglingNodeError(CircuitError):
    """A node has no conductive path to the reference node."""


class InvalidElementError(CircuitError):
    """An element violates a structural rule (value sign, arity, self-loop)."""


class InvalidReferenceError(CircuitError):
    """A name or node referenced by an operation does not exist."""


class SingularSystemError(CircuitError):
    """The system matrix is singular at the requested frequency.

    ``constraint`` names the unknown whose pivot collapsed, which is the
    most useful hint about the offending constraint (shorted port, floating
    subcircuit, inconsistent source loop, ...).
    """

    def __init__(self, message: str, constraint: str | None = None):
        super().__init__(message)
        self.constraint = constraint


class MismatchedSolutionError(CircuitError):
    """A Solution was paired with a Circuit it does not belong to."""


class NeedTwoSourcesError(CircuitError):
    """Superposition asked for on a circuit with fewer than two sources."""


class ZeroImpedanceError(CircuitError):
    """A wye/delta arm has zero impedance and cannot be transformed."""


class ZeroImpedancePortError(CircuitError):
    """Port has (numerically) zero Thevenin impedance."""


class NonDissipativePortError(CircuitError):
    """Maximum power transfer is unbounded for a port with Re(Zth) <= 0."""


class AlreadyCompensatedError(CircuitError):
    """Power-factor correction requested but the load already meets the target."""


class UnbalancedSystemError(CircuitError):
    """A balanced-only three-phase path was given an unbalanced system."""


class NoAdmissibleSizeError(CircuitError):
    """No catalogue cross-section keeps the voltage drop inside the budget."""


class NonConvergenceError(CircuitError):
    """Fitting failed to reach an acceptable residual. Carries best attempt."""

    def __init__(self, message: str, best=None):
        super().__init__(message)
        self.best = best
