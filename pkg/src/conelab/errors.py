"""Exception types raised by the verification engine."""


class EngineError(Exception):
    """Base class for all engine-level failures."""


class DomainError(EngineError):
    """Point lies outside a chart's coordinate domain."""


class DegenerateMetricError(EngineError):
    """Metric matrix failed to be symmetric positive definite."""


class JetOrderError(EngineError):
    """A derivative was requested beyond the available jet order."""


class ConeCompletionError(EngineError):
    """Cone radial range touches r = 0, which the construction excludes."""


class NotContactMetricError(EngineError):
    """Candidate Reeb field violates the contact metric axiom.

    Carries the largest residual and the point where it occurred.
    """

    def __init__(self, message, residual=None, witness=None):
        super().__init__(message)
        self.residual = residual
        self.witness = witness


class IncompatibleStructureError(EngineError):
    """Cone 2-form failed compatibility (J^2 != -Id)."""


class DegeneratePairError(EngineError):
    """Two structures coincide up to sign; no third structure exists."""


class ImpossiblePairError(EngineError):
    """Anticommutator trace violates the Cauchy-Schwarz bound |lambda| <= 2."""
