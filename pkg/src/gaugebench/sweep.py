"""Grids of relative truncation errors over the (eta, f) or (nu, f) plane.

Each grid point converges an exact reference gap, then scores fixed two-
and three-level matter truncations in one or both gauges against it.  The
exact reference is computed in the C-field build, which converges fastest
in the matter dimension; its gauge independence is asserted separately by
the spectrum-level tests.
"""

from __future__ import annotations

import csv
import enum
import io
import logging
import math
from dataclasses import dataclass, field
from multiprocessing import Pool

import numpy as np

from . import constants
from .errors import ConfigurationError
from .hamiltonians import (
    Gauge,
    ModelParams,
    coupling_diagnostics,
    resonant_geometry,
    well_length_for_omega10,
)
from .operators import MatterBasisSpec, PhotonBasisSpec
from .spectrum import converge_gap, relative_error

log = logging.getLogger(__name__)

CSV_HEADER = [
    "mode",
    "eta",
    "nu_eV",
    "f_eV",
    "g_tilde",
    "gap_exact_eV",
    "err_coulomb_2",
    "err_coulomb_3",
    "err_cfield_2",
    "err_cfield_3",
    "Nm_star",
    "Np_star",
    "converged",
]

#: Soft monotone-improvement invariant: adding a matter level should not
#: worsen the error; violations above this are logged as warnings.
MONOTONE_SLACK = 1e-12


class SweepMode(enum.Enum):
    RESONANT = "resonant"
    DETUNED = "detuned"


@dataclass(frozen=True)
class AxisSpec:
    """Grid axis: count points from min to max, log- or linear-spaced."""

    min: float
    max: float
    count: int
    spacing: str = "log"

    def __post_init__(self):
        if self.count < 2:
            raise ConfigurationError(f"axis count must be >= 2, got {self.count}")
        if not self.min < self.max:
            raise ConfigurationError(f"axis needs min < max, got [{self.min}, {self.max}]")
        if self.spacing not in ("log", "linear"):
            raise ConfigurationError(f"axis spacing must be 'log' or 'linear', got {self.spacing!r}")
        if self.spacing == "log" and not self.min > 0:
            raise ConfigurationError("log axis needs min > 0")
        if self.spacing == "linear" and self.min < 0:
            raise ConfigurationError("linear axis needs min >= 0")

    def points(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.min, self.max, self.count)
        return np.linspace(self.min, self.max, self.count)


@dataclass(frozen=True)
class SweepConfig:
    mode: SweepMode
    y_axis: AxisSpec  # eta (resonant) or nu in eV (detuned)
    f_axis: AxisSpec  # field amplitude in eV
    levels: tuple[int, ...] = (2, 3)
    gauges: tuple[Gauge, ...] = (Gauge.COULOMB, Gauge.CFIELD)
    tol: float = 1e-8
    fixed_omega10: float | None = None
    mass: float = constants.ELECTRON_MASS_EV
    charge: float = constants.ELEMENTARY_CHARGE
    literal_eq38: bool = False

    def __post_init__(self):
        if not self.levels or any(lv not in (2, 3) for lv in self.levels):
            raise ConfigurationError(f"levels must be a non-empty subset of (2, 3), got {self.levels}")
        if not self.gauges:
            raise ConfigurationError("at least one gauge is required")
        if self.mode is SweepMode.DETUNED and not (self.fixed_omega10 or 0) > 0:
            raise ConfigurationError("detuned mode requires fixed_omega10 > 0")

    def as_dict(self) -> dict:
        return {
            "mode": self.mode.value,
            "y_axis": {
                "min": self.y_axis.min,
                "max": self.y_axis.max,
                "count": self.y_axis.count,
                "spacing": self.y_axis.spacing,
            },
            "f_axis": {
                "min": self.f_axis.min,
                "max": self.f_axis.max,
                "count": self.f_axis.count,
                "spacing": self.f_axis.spacing,
            },
            "levels": list(self.levels),
            "gauges": [g.value for g in self.gauges],
            "tol": self.tol,
            "fixed_omega10": self.fixed_omega10,
            "mass": self.mass,
            "charge": self.charge,
            "literal_eq38": self.literal_eq38,
        }


def default_resonant_config(**overrides) -> SweepConfig:
    """Fig.-2-style defaults: eta in [1e-4, 1e-1], f in [1e-2, 1e3] eV."""
    base = dict(
        mode=SweepMode.RESONANT,
        y_axis=AxisSpec(1e-4, 1e-1, 24),
        f_axis=AxisSpec(1e-2, 1e3, 24),
    )
    base.update(overrides)
    return SweepConfig(**base)


@dataclass(frozen=True)
class SweepPoint:
    eta: float
    nu_eV: float
    f_eV: float
    g_tilde: float
    gap_exact_eV: float
    errors: dict[tuple[str, int], float]
    nm_star: int
    np_star: int
    converged: bool


@dataclass(frozen=True)
class ErrorMap:
    config: SweepConfig
    points: tuple[SweepPoint, ...]


def _model(length: float, nu: float, f: float, n_levels: int, gauge: Gauge, config: SweepConfig) -> ModelParams:
    return ModelParams(
        matter=MatterBasisSpec(
            n_levels=n_levels, well_length=length, mass=config.mass, charge=config.charge
        ),
        photon=PhotonBasisSpec(n_fock=16, mode_energy=nu, amplitude=f),
        gauge=gauge,
    )


def sweep_point(config: SweepConfig, y_value: float, f: float) -> SweepPoint:
    """Evaluate one grid point: exact reference plus all truncation errors."""
    if config.mode is SweepMode.RESONANT:
        geo = resonant_geometry(y_value, mass=config.mass, charge=config.charge)
        nu, length = geo.nu, geo.well_length
    else:
        nu = y_value
        length = well_length_for_omega10(config.fixed_omega10, mass=config.mass)

    diag = coupling_diagnostics(_model(length, nu, f, 2, Gauge.COULOMB, config))

    exact = converge_gap(
        _model(length, nu, f, 2, Gauge.CFIELD, config),
        tol=config.tol,
        literal_eq38=config.literal_eq38,
    )
    converged = exact.converged
    have_exact = math.isfinite(exact.gap) and exact.gap > 0

    errors: dict[tuple[str, int], float] = {}
    for gauge in config.gauges:
        for level in config.levels:
            report = converge_gap(
                _model(length, nu, f, level, gauge, config),
                tol=config.tol,
                refine_matter=False,
                literal_eq38=config.literal_eq38,
            )
            converged = converged and report.converged
            if have_exact and math.isfinite(report.gap):
                errors[(gauge.value, level)] = relative_error(report.gap, exact.gap)
            else:
                errors[(gauge.value, level)] = float("nan")

    for gauge in config.gauges:
        if (gauge.value, 2) in errors and (gauge.value, 3) in errors:
            excess = errors[(gauge.value, 3)] - errors[(gauge.value, 2)]
            if converged and excess > MONOTONE_SLACK:
                log.warning(
                    "monotone-improvement violation at (y=%g, f=%g) for %s: "
                    "err3 - err2 = %.3e",
                    y_value, f, gauge.value, excess,
                )

    return SweepPoint(
        eta=diag.eta,
        nu_eV=nu,
        f_eV=f,
        g_tilde=diag.g_tilde,
        gap_exact_eV=exact.gap,
        errors=errors,
        nm_star=exact.n_matter_final,
        np_star=exact.n_fock_final,
        converged=converged,
    )


def _point_worker(job: tuple[SweepConfig, float, float]) -> SweepPoint:
    config, y_value, f = job
    return sweep_point(config, y_value, f)


def _run(config: SweepConfig, parallel: int = 1, progress=None) -> ErrorMap:
    jobs = [(config, y, f) for y in config.y_axis.points() for f in config.f_axis.points()]
    if parallel == 0:
        import os

        parallel = os.cpu_count() or 1
    if parallel <= 1:
        points = []
        for i, job in enumerate(jobs):
            points.append(_point_worker(job))
            if progress:
                progress(i + 1, len(jobs))
    else:
        with Pool(processes=parallel) as pool:
            points = []
            for i, point in enumerate(pool.imap(_point_worker, jobs, chunksize=1)):
                points.append(point)
                if progress:
                    progress(i + 1, len(jobs))
    return ErrorMap(config=config, points=tuple(points))


def run_resonant_sweep(config: SweepConfig, parallel: int = 1, progress=None) -> ErrorMap:
    if config.mode is not SweepMode.RESONANT:
        raise ConfigurationError("run_resonant_sweep requires mode=RESONANT")
    return _run(config, parallel=parallel, progress=progress)


def run_detuned_sweep(config: SweepConfig, parallel: int = 1, progress=None) -> ErrorMap:
    if config.mode is not SweepMode.DETUNED:
        raise ConfigurationError("run_detuned_sweep requires mode=DETUNED")
    return _run(config, parallel=parallel, progress=progress)


def run_sweep(config: SweepConfig, parallel: int = 1, progress=None) -> ErrorMap:
    if config.mode is SweepMode.RESONANT:
        return run_resonant_sweep(config, parallel=parallel, progress=progress)
    return run_detuned_sweep(config, parallel=parallel, progress=progress)


def _fmt(value: float) -> str:
    # repr gives the shortest decimal that round-trips IEEE-754 doubles.
    return repr(float(value))


def to_csv(error_map: ErrorMap) -> str:
    """Render an ErrorMap as CSV text, one row per grid point."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    mode = error_map.config.mode.value
    for p in error_map.points:
        row = [mode, _fmt(p.eta), _fmt(p.nu_eV), _fmt(p.f_eV), _fmt(p.g_tilde), _fmt(p.gap_exact_eV)]
        for key in (("coulomb", 2), ("coulomb", 3), ("cfield", 2), ("cfield", 3)):
            row.append(_fmt(p.errors[key]) if key in p.errors else "")
        row.extend([str(p.nm_star), str(p.np_star), "true" if p.converged else "false"])
        writer.writerow(row)
    return out.getvalue()


def to_records(error_map: ErrorMap) -> list[dict]:
    """JSON-ready mirror of the CSV rows."""
    records = []
    mode = error_map.config.mode.value
    for p in error_map.points:
        record = {
            "mode": mode,
            "eta": p.eta,
            "nu_eV": p.nu_eV,
            "f_eV": p.f_eV,
            "g_tilde": p.g_tilde,
            "gap_exact_eV": p.gap_exact_eV,
            "Nm_star": p.nm_star,
            "Np_star": p.np_star,
            "converged": p.converged,
        }
        for key in (("coulomb", 2), ("coulomb", 3), ("cfield", 2), ("cfield", 3)):
            name = f"err_{key[0]}_{key[1]}"
            record[name] = p.errors.get(key)
        records.append(record)
    return records
