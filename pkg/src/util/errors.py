class DriftFluxError(Exception):
    """Base class for every error raised by the toolkit."""


class DomainError(DriftFluxError):
    """Input lies outside the domain of a chart, family or current."""


class SingularChartError(DomainError):
    """Chart map is singular at the given state."""


class DegenerateFamilyError(DriftFluxError):
    """Solution family violates its nondegeneracy condition."""


class NoSolutionError(DriftFluxError):
    """Implicit solve did not converge inside the validity window."""


class NotSubalgebraError(DriftFluxError):
    """Subspace is not closed under the commutator."""


class UnsupportedTransportError(DriftFluxError):
    """W-reparameterization cannot transport the given omega exactly."""


class InvalidAutomorphismError(DriftFluxError):
    """Matrix does not have the shape of an automorphism of the radical."""


class BlowUpError(DriftFluxError):
    """Numerical state became non-finite or left its admissible range."""


class ScenarioError(DriftFluxError):
    """Scenario file is malformed; `key` names the offending entry."""

    def __init__(self, key, message=None):
        self.key = key
        super().__init__(message or f"invalid or missing scenario key '{key}'")
