"""Exception types shared across the package."""


class MNSeriesError(Exception):
    """Base class for all package errors."""


class MalformedSpec(MNSeriesError):
    """A ring/group/twist specification is structurally invalid."""


class AxiomViolation(MNSeriesError):
    """Supplied operation tables fail the ring axioms."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotAutomorphism(MNSeriesError):
    """A candidate map fails the automorphism conditions."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class RingMismatch(MNSeriesError):
    """Operands belong to different rings."""


class SizeCapExceeded(MNSeriesError):
    """An exhaustive scan was requested beyond the configured cap."""


class DuplicateKey(MNSeriesError):
    """A series constructor received two coefficients for one exponent."""


class TwistMismatch(MNSeriesError):
    """Series operands belong to different twist systems."""


class ZeroSeries(MNSeriesError):
    """Minimal support element requested of the zero series."""


class NotNormalized(MNSeriesError):
    """Operation requires a normalized twist (sigma_1 = id, tau(1,x) = tau(x,1) = 1)."""


class ZeroElement(MNSeriesError):
    """Fusible decomposition requested for the zero element."""


class BoundsTooLarge(MNSeriesError):
    """Requested enumeration bounds exceed the feasibility cap."""


class NotFusibleRing(MNSeriesError):
    """Base ring is not left fusible."""


class NotSigmaCompatible(MNSeriesError):
    """Base ring (or ideal) fails sigma-compatibility."""


class PreconditionFail(MNSeriesError):
    """A harness precondition does not hold for the given inputs."""


class HypothesisFails(MNSeriesError):
    """The quotient hypothesis of a zip argument fails, with a witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class TraceMismatch(MNSeriesError):
    """A derivation step's claimed membership failed direct re-evaluation."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class SuiteUnknown(MNSeriesError):
    """Requested verification suite does not exist."""


class ParseError(MNSeriesError):
    """Fixture file does not parse."""


class ValidationError(MNSeriesError):
    """Fixture parsed but failed an invariant; message names the invariant."""
