"""Exception hierarchy for unclab."""


class UnclabError(Exception):
    """Base class for all library errors."""


class DomainError(UnclabError, ValueError):
    """Argument outside the supported mathematical domain."""


class UnsupportedCatalogError(UnclabError, ValueError):
    """Requested catalog state has no tabulated closed form."""


class KinkEvaluationError(UnclabError, ValueError):
    """Pointwise derivative requested exactly at a kink."""


class IngestionError(UnclabError, ValueError):
    """Tabulated samples rejected during ingestion.

    ``index`` points at the offending sample (or kink) when known.
    """

    def __init__(self, message, index=None):
        super().__init__(message if index is None else f"{message} (index {index})")
        self.index = index


class InconsistencyError(UnclabError, RuntimeError):
    """Independent routes disagree, or a state violates a bound-state identity."""


class QuadratureEvaluationError(UnclabError, FloatingPointError):
    """Integrand returned NaN."""

    def __init__(self, abscissa):
        super().__init__(f"integrand returned NaN at x = {abscissa!r}")
        self.abscissa = abscissa
