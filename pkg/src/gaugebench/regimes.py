"""Experimental-regime guide data and dipole-size estimators.

The bundled CSV collects (eta, f, dipole size, coupling ratio) ranges for
eight experimental families; point values are stored as degenerate
ranges.  These are overlay/guide values only, never acceptance targets.
"""

from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass, fields
from importlib import resources
from pathlib import Path

from . import constants
from .errors import DomainError, GaugebenchError

CSV_HEADER = [
    "name",
    "eta_min",
    "eta_max",
    "f_min_eV",
    "f_max_eV",
    "dipole_min_um",
    "dipole_max_um",
    "g_over_nu_min",
    "g_over_nu_max",
    "g_over_w10_min",
    "g_over_w10_max",
    "caution",
    "citations",
]


class RegimeParseError(GaugebenchError):
    """A regimes CSV row failed to parse; names the row and column."""


@dataclass(frozen=True)
class RegimeEntry:
    name: str
    eta_range: tuple[float, float]
    f_range_eV: tuple[float, float]
    dipole_size_um: tuple[float, float]
    g_over_nu: tuple[float, float]
    g_over_omega10: tuple[float, float]
    caution_flag: bool
    citation_keys: tuple[str, ...]

    def __post_init__(self):
        for label in ("eta_range", "f_range_eV", "dipole_size_um", "g_over_nu", "g_over_omega10"):
            lo, hi = getattr(self, label)
            if not (0 < lo <= hi):
                raise RegimeParseError(f"{self.name}: {label} must satisfy 0 < min <= max")


def _parse_float(raw: str, row: int, column: str) -> float:
    try:
        return float(raw)
    except ValueError as exc:
        raise RegimeParseError(f"row {row}, column {column!r}: not a number: {raw!r}") from exc


def _parse_row(record: dict, row: int) -> RegimeEntry:
    def rng(lo_col: str, hi_col: str) -> tuple[float, float]:
        return (_parse_float(record[lo_col], row, lo_col), _parse_float(record[hi_col], row, hi_col))

    caution_raw = record["caution"].strip().lower()
    if caution_raw not in ("true", "false"):
        raise RegimeParseError(f"row {row}, column 'caution': expected true/false, got {caution_raw!r}")
    return RegimeEntry(
        name=record["name"].strip(),
        eta_range=rng("eta_min", "eta_max"),
        f_range_eV=rng("f_min_eV", "f_max_eV"),
        dipole_size_um=rng("dipole_min_um", "dipole_max_um"),
        g_over_nu=rng("g_over_nu_min", "g_over_nu_max"),
        g_over_omega10=rng("g_over_w10_min", "g_over_w10_max"),
        caution_flag=caution_raw == "true",
        citation_keys=tuple(k for k in record["citations"].split(";") if k),
    )


def load_regimes(path: str | Path | None = None) -> list[RegimeEntry]:
    """Load regime entries from ``path``, or the bundled dataset if omitted."""
    if path is None:
        text = resources.files("gaugebench").joinpath("data/regimes.csv").read_text()
    else:
        text = Path(path).read_text()
    if not text.strip():
        warnings.warn("regimes file is empty", stacklevel=2)
        return []
    reader = csv.DictReader(io.StringIO(text))
    missing = set(CSV_HEADER) - set(reader.fieldnames or [])
    if missing:
        raise RegimeParseError(f"header is missing columns: {sorted(missing)}")
    entries = []
    for row_number, record in enumerate(reader, start=2):
        entries.append(_parse_row(record, row_number))
    return entries


def serialize_regimes(entries: list[RegimeEntry]) -> str:
    """CSV text for a sequence of entries (inverse of load_regimes)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for e in entries:
        writer.writerow(
            [
                e.name,
                repr(e.eta_range[0]),
                repr(e.eta_range[1]),
                repr(e.f_range_eV[0]),
                repr(e.f_range_eV[1]),
                repr(e.dipole_size_um[0]),
                repr(e.dipole_size_um[1]),
                repr(e.g_over_nu[0]),
                repr(e.g_over_nu[1]),
                repr(e.g_over_omega10[0]),
                repr(e.g_over_omega10[1]),
                "true" if e.caution_flag else "false",
                ";".join(e.citation_keys),
            ]
        )
    return out.getvalue()


def dipole_size_from_coupling(g: float, e_vac: float, e: float = constants.ELEMENTARY_CHARGE) -> float:
    """Dipole size x10 = g / (e E_vac) in 1/eV (hbar = 1).

    ``e_vac`` is the vacuum electric-field amplitude in natural units.
    """
    if not (g > 0 and e_vac > 0 and e > 0):
        raise DomainError("g, e_vac, and e must all be positive")
    return g / (e * e_vac)


def effective_bohr_radius(omega10: float) -> float:
    """Effective Bohr radius a_eff = alpha / (2 omega10) in 1/eV (c = 1)."""
    if not omega10 > 0:
        raise DomainError(f"omega10 must be > 0, got {omega10}")
    return constants.ALPHA / (2.0 * omega10)


def cyclotron_dipole_size(b_field: float, filling: float, e: float = constants.ELEMENTARY_CHARGE) -> float:
    """Dipole size l0 sqrt(filling) with magnetic length l0 = 1/sqrt(e B)."""
    if not (b_field > 0 and filling > 0 and e > 0):
        raise DomainError("b_field, filling, and e must all be positive")
    return (filling / (e * b_field)) ** 0.5


def inverse_ev_to_um(length: float) -> float:
    """Convert a length from 1/eV to micrometres."""
    return length * constants.HBARC_UM_EV
