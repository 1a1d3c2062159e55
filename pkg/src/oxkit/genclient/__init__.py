"""Batch text-to-image generation, curation ledger, and the triage service."""

from .backends import (
    DEFAULT_PROMPT,
    GenBackendError,
    GenRequest,
    HttpBackend,
    StubBackend,
)
from .store import (
    CURATION_REASONS,
    CostEntry,
    CurationRecord,
    GenStore,
    SelectionRow,
    format_fraction_pct,
)
from .service import create_app

__all__ = [
    "CURATION_REASONS",
    "CostEntry",
    "CurationRecord",
    "DEFAULT_PROMPT",
    "GenBackendError",
    "GenRequest",
    "GenStore",
    "HttpBackend",
    "SelectionRow",
    "StubBackend",
    "create_app",
    "format_fraction_pct",
]
