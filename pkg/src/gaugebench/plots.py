"""Heatmap rendering for sweep CSVs, with optional regime overlays.

Input is the delimited sweep output only; nothing here recomputes
spectra.  Unconverged grid cells are hatched, and coupling-strength
iso-contours are drawn from the g_tilde column when it varies.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import LogNorm  # noqa: E402

from .errors import ConfigurationError, GaugebenchError  # noqa: E402
from .regimes import RegimeEntry, load_regimes  # noqa: E402

REQUIRED_COLUMNS = ["mode", "eta", "nu_eV", "f_eV", "g_tilde", "converged"]

#: Distinct, colorblind-reasonable marker styles for up to eight regimes.
_MARKERS = ["o", "s", "^", "D", "v", "P", "X", "*"]
_COLORS = ["#0072B2", "#E69F00", "#009E73", "#CC79A7",
           "#56B4E9", "#D55E00", "#F0E442", "#000000"]


class PlotInputError(GaugebenchError):
    """The sweep or overlay CSV does not match the expected schema."""


@dataclass(frozen=True)
class PlotSpec:
    input_csv: str | Path
    output: str | Path
    metric: str = "err_cfield_2"
    overlay_csv: str | Path | None = None
    title: str | None = None


@dataclass(frozen=True)
class SweepTable:
    """Rectangular sweep grid reconstructed from CSV rows."""

    mode: str
    y_label: str
    y_values: np.ndarray  # grid axis (eta or nu_eV), ascending
    f_values: np.ndarray  # field-amplitude axis, ascending
    metric: np.ndarray  # shape (len(y_values), len(f_values))
    g_tilde: np.ndarray
    converged: np.ndarray  # bool mask, same shape


def _read_rows(path: str | Path, metric: str) -> tuple[list[dict], str]:
    text = Path(path).read_text()
    reader = csv.DictReader(text.splitlines())
    columns = reader.fieldnames or []
    missing = [c for c in REQUIRED_COLUMNS if c not in columns]
    if missing:
        raise PlotInputError(f"sweep CSV {path} is missing columns: {missing}")
    if metric not in columns:
        choices = [c for c in columns if c.startswith("err_")]
        raise PlotInputError(
            f"metric column {metric!r} not found in {path}; available: {choices}"
        )
    rows = list(reader)
    if not rows:
        raise PlotInputError(f"sweep CSV {path} has no data rows")
    return rows, rows[0]["mode"]


def load_sweep_table(path: str | Path, metric: str) -> SweepTable:
    """Parse a sweep CSV into a rectangular grid for one error column."""
    rows, mode = _read_rows(path, metric)
    y_column = "eta" if mode == "resonant" else "nu_eV"

    y_values = np.array(sorted({float(r[y_column]) for r in rows}))
    f_values = np.array(sorted({float(r["f_eV"]) for r in rows}))
    if len(y_values) * len(f_values) != len(rows):
        raise PlotInputError(
            f"sweep CSV {path} is not a full {len(y_values)}x{len(f_values)} grid"
        )

    y_index = {v: i for i, v in enumerate(y_values)}
    f_index = {v: j for j, v in enumerate(f_values)}
    shape = (len(y_values), len(f_values))
    values = np.full(shape, np.nan)
    g_tilde = np.full(shape, np.nan)
    converged = np.zeros(shape, dtype=bool)
    for r in rows:
        i, j = y_index[float(r[y_column])], f_index[float(r["f_eV"])]
        raw = r[metric]
        values[i, j] = float(raw) if raw else math.nan
        g_tilde[i, j] = float(r["g_tilde"])
        converged[i, j] = r["converged"].strip().lower() == "true"
    return SweepTable(
        mode=mode,
        y_label=r"$\eta$" if mode == "resonant" else r"mode energy $\nu$ [eV]",
        y_values=y_values,
        f_values=f_values,
        metric=values,
        g_tilde=g_tilde,
        converged=converged,
    )


def _edges(centers: np.ndarray) -> np.ndarray:
    """Cell edges for pcolormesh from logarithmically spaced centers."""
    if np.any(centers <= 0):
        inner = 0.5 * (centers[1:] + centers[:-1])
        first = centers[0] - (inner[0] - centers[0]) if len(centers) > 1 else centers[0] - 0.5
        last = centers[-1] + (centers[-1] - inner[-1]) if len(centers) > 1 else centers[-1] + 0.5
        return np.concatenate([[first], inner, [last]])
    logc = np.log(centers)
    inner = 0.5 * (logc[1:] + logc[:-1])
    if len(centers) == 1:
        return np.exp(np.array([logc[0] - 0.1, logc[0] + 0.1]))
    first = logc[0] - (inner[0] - logc[0])
    last = logc[-1] + (logc[-1] - inner[-1])
    return np.exp(np.concatenate([[first], inner, [last]]))


def _draw_overlay(ax, entries: list[RegimeEntry]) -> None:
    """Mark each regime at its (f, eta) midpoint with range bars."""
    for k, e in enumerate(entries):
        f_lo, f_hi = e.f_range_eV
        y_lo, y_hi = e.eta_range
        f_mid = math.sqrt(f_lo * f_hi)
        y_mid = math.sqrt(y_lo * y_hi)
        color = _COLORS[k % len(_COLORS)]
        ax.errorbar(
            [f_mid],
            [y_mid],
            xerr=[[f_mid - f_lo], [f_hi - f_mid]],
            yerr=[[y_mid - y_lo], [y_hi - y_mid]],
            fmt=_MARKERS[k % len(_MARKERS)],
            color=color,
            markersize=7,
            markeredgecolor="white",
            markeredgewidth=0.6,
            capsize=3,
            elinewidth=1.2,
            label=e.name + (" (!)" if e.caution_flag else ""),
            zorder=5,
        )


def render_heatmap(spec: PlotSpec) -> Path:
    """Render the error heatmap described by ``spec``; returns the image path."""
    table = load_sweep_table(spec.input_csv, spec.metric)

    fig, ax = plt.subplots(figsize=(7.2, 5.4))
    x_edges = _edges(table.f_values)
    y_edges = _edges(table.y_values)

    finite = table.metric[np.isfinite(table.metric)]
    positive = finite[finite > 0]
    if positive.size:
        vmax = positive.max()
        vmin = max(positive.min(), vmax * 1e-12)
        norm = LogNorm(vmin=vmin, vmax=vmax)
        # Exact zeros (e.g. the f = 0 column) sit below the log floor;
        # clip them to the colormap minimum rather than dropping cells.
        plotted = np.where(table.metric <= 0, vmin, table.metric)
    else:
        norm = None
        plotted = table.metric
    mesh = ax.pcolormesh(x_edges, y_edges, plotted, norm=norm, cmap="viridis", shading="flat")
    fig.colorbar(mesh, ax=ax, label=f"relative gap error ({spec.metric})")

    if not table.converged.all():
        hatch = np.ma.masked_where(table.converged, np.ones_like(table.metric))
        mesh = ax.pcolor(x_edges, y_edges, hatch, hatch="///", linewidth=0.0, zorder=3)
        mesh.set_facecolor("none")
        mesh.set_edgecolor("0.35")

    gt = table.g_tilde
    finite_gt = gt[np.isfinite(gt) & (gt > 0)]
    if finite_gt.size and finite_gt.max() / max(finite_gt.min(), 1e-300) > 10:
        levels = [lv for lv in (1e-3, 1e-2, 1e-1, 1.0, 10.0)
                  if finite_gt.min() < lv < finite_gt.max()]
        if levels:
            cs = ax.contour(
                table.f_values, table.y_values, gt,
                levels=levels, colors="white", linewidths=0.8, alpha=0.8,
            )
            ax.clabel(cs, fmt=lambda v: rf"$\tilde{{g}}={v:g}$", fontsize=7)

    if table.f_values.min() > 0:
        ax.set_xscale("log")
    if table.y_values.min() > 0:
        ax.set_yscale("log")
    ax.set_xlabel(r"field amplitude $f$ [eV]")
    ax.set_ylabel(table.y_label)
    if spec.title:
        ax.set_title(spec.title)

    if spec.overlay_csv is not None:
        if table.mode != "resonant":
            raise ConfigurationError("regime overlays are defined on resonant (eta, f) grids only")
        entries = load_regimes(spec.overlay_csv)
        _draw_overlay(ax, entries)
        if entries:
            ax.legend(loc="upper left", fontsize=6.5, framealpha=0.85)

    out = Path(spec.output)
    fig.tight_layout()
    try:
        fig.savefig(out, dpi=160)
    finally:
        plt.close(fig)
    return out
