"""Position-momentum uncertainty products of one-dimensional bound states."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DomainError,
    IngestionError,
    InconsistencyError,
    KinkEvaluationError,
    UnclabError,
    UnsupportedCatalogError,
)
from .moments import uncertainty  # noqa: E402
from .special_fns import morse_uncertainty, srm_uncertainty, trigamma  # noqa: E402
from .states import KinkPoint, WaveSpec, ingest_tabulated, make_state  # noqa: E402

__all__ = [
    "DomainError", "IngestionError", "InconsistencyError", "KinkEvaluationError",
    "UnclabError", "UnsupportedCatalogError", "KinkPoint", "WaveSpec",
    "ingest_tabulated", "make_state", "morse_uncertainty", "srm_uncertainty",
    "trigamma", "uncertainty",
]
