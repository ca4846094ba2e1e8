"""Catalog of surfaces, maps and constructions, with the verification harness."""

from ellfib.catalog.harness import (
    CONFIG_MISMATCH,
    EQUATION_MISMATCH,
    PASS,
    SKIPPED,
    Construction,
    ReportRow,
    VerificationReport,
    build,
    predicted_configuration,
    verify_all,
    verify_entry,
)
from ellfib.catalog.loader import (
    ENV_VAR,
    Catalog,
    CatalogEntry,
    MapRecord,
    SurfaceRecord,
    builtin_dir,
    format_entry,
    load_builtin,
    load_catalog,
    load_dir,
    parse_entries,
)

__all__ = [
    "CONFIG_MISMATCH",
    "ENV_VAR",
    "EQUATION_MISMATCH",
    "PASS",
    "SKIPPED",
    "Catalog",
    "CatalogEntry",
    "Construction",
    "MapRecord",
    "ReportRow",
    "SurfaceRecord",
    "VerificationReport",
    "build",
    "builtin_dir",
    "format_entry",
    "load_builtin",
    "load_catalog",
    "load_dir",
    "parse_entries",
    "predicted_configuration",
    "verify_all",
    "verify_entry",
]
