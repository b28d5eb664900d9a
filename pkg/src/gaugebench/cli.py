"""Command-line surface: point reports, sweeps, convergence runs, overlays.

Every file-producing command writes a manifest alongside its outputs with
the fully resolved configuration, so a run can be reproduced
bit-identically from the manifest alone.  Progress goes to stderr;
stdout carries machine-readable content only.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

from . import __version__, constants
from .errors import DomainError, GaugebenchError, NumericalError
from .hamiltonians import (
    Gauge,
    ModelParams,
    amplitude_for_g_tilde,
    coupling_diagnostics,
    resonant_geometry,
    well_length_for_omega10,
)
from .operators import MatterBasisSpec, PhotonBasisSpec
from .regimes import load_regimes
from .spectrum import converge_gap, relative_error
from .sweep import (
    AxisSpec,
    SweepConfig,
    SweepMode,
    run_sweep,
    to_csv,
    to_records,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NUMERICAL = 4


def _parse_levels(raw: str) -> tuple[int, ...]:
    try:
        levels = tuple(int(part) for part in raw.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad levels list: {raw!r}")
    if not levels or any(lv not in (2, 3) for lv in levels):
        raise argparse.ArgumentTypeError("levels must be a comma list drawn from 2,3")
    return levels


def _parse_gauges(raw: str) -> tuple[Gauge, ...]:
    try:
        return tuple(Gauge(part.strip().lower()) for part in raw.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad gauges list: {raw!r} (use coulomb,cfield)")


def _json_dumps(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _write_text(path: str | Path, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise _IOFailure(f"cannot write {path}: {exc}") from exc


class _IOFailure(GaugebenchError):
    pass


def _manifest(command: str, config: dict, output_paths: list[str]) -> dict:
    return {
        "command": command,
        "config": config,
        "constants": constants.unit_record(),
        "artifact_version": __version__,
        "output_paths": output_paths,
    }


def _resolve_point_geometry(args) -> tuple[float, float, float]:
    """Return (nu, well_length, f) from the point/converge flag set."""
    if args.mode == "resonant":
        if args.eta is None:
            raise DomainError("resonant mode needs --eta")
        geo = resonant_geometry(args.eta, mass=args.mass, charge=args.charge)
        nu, length = geo.nu, geo.well_length
    else:
        if args.nu is None or args.omega10_ev is None:
            raise DomainError("detuned mode needs --nu and --omega10-ev")
        nu = args.nu
        length = well_length_for_omega10(args.omega10_ev, mass=args.mass)

    if (args.f is None) == (args.gtilde is None):
        raise DomainError("specify exactly one of --f and --gtilde")
    if args.f is not None:
        f = args.f
    else:
        matter = MatterBasisSpec(n_levels=2, well_length=length, mass=args.mass, charge=args.charge)
        f = amplitude_for_g_tilde(args.gtilde, matter)
    return nu, length, f


def _model(args, length: float, nu: float, f: float, n_levels: int, gauge: Gauge) -> ModelParams:
    return ModelParams(
        matter=MatterBasisSpec(
            n_levels=n_levels, well_length=length, mass=args.mass, charge=args.charge
        ),
        photon=PhotonBasisSpec(n_fock=16, mode_energy=nu, amplitude=f),
        gauge=gauge,
    )


def _emit(args, text: str, default_name: str) -> list[str]:
    if args.out:
        _write_text(args.out, text)
        return [str(args.out)]
    sys.stdout.write(text)
    return [f"<stdout:{default_name}>"]


def cmd_point(args) -> int:
    nu, length, f = _resolve_point_geometry(args)
    diag = coupling_diagnostics(_model(args, length, nu, f, 2, Gauge.COULOMB))

    exact = converge_gap(
        _model(args, length, nu, f, 2, Gauge.CFIELD),
        tol=args.tol,
        literal_eq38=args.literal_eq38,
    )
    truncated = {}
    for gauge in args.gauges:
        for level in args.levels:
            report = converge_gap(
                _model(args, length, nu, f, level, gauge),
                tol=args.tol,
                refine_matter=False,
                literal_eq38=args.literal_eq38,
            )
            entry = report.as_dict()
            if exact.gap > 0:
                entry["relative_error"] = relative_error(report.gap, exact.gap)
            truncated[f"{gauge.value}_{level}"] = entry

    payload = {
        "mode": args.mode,
        "diagnostics": asdict(diag),
        "geometry": {"nu_eV": nu, "well_length_inv_eV": length, "f_eV": f},
        "exact": exact.as_dict(),
        "truncated": truncated,
        "constants": constants.unit_record(),
        "artifact_version": __version__,
    }
    _emit(args, _json_dumps(payload), "point.json")
    return EXIT_OK


def cmd_converge(args) -> int:
    nu, length, f = _resolve_point_geometry(args)
    gauge = args.gauges[0] if len(args.gauges) == 1 else Gauge.CFIELD
    report = converge_gap(
        _model(args, length, nu, f, 2, gauge),
        tol=args.tol,
        literal_eq38=args.literal_eq38,
    )
    payload = {
        "mode": args.mode,
        "gauge": gauge.value,
        "geometry": {"nu_eV": nu, "well_length_inv_eV": length, "f_eV": f},
        "report": report.as_dict(),
        "constants": constants.unit_record(),
        "artifact_version": __version__,
    }
    _emit(args, _json_dumps(payload), "converge.json")
    return EXIT_OK


def _sweep_config(args) -> SweepConfig:
    file_values = {}
    if args.config:
        try:
            file_values = json.loads(Path(args.config).read_text())
        except OSError as exc:
            raise _IOFailure(f"cannot read config {args.config}: {exc}") from exc

    def pick(flag_value, key, default):
        # Precedence: explicit flag > config file > default.
        if flag_value is not None:
            return flag_value
        return file_values.get(key, default)

    mode = SweepMode(pick(args.mode, "mode", "resonant"))
    if mode is SweepMode.RESONANT:
        y_axis = AxisSpec(
            pick(args.eta_min, "eta_min", 1e-4),
            pick(args.eta_max, "eta_max", 1e-1),
            int(pick(args.eta_steps, "eta_steps", 24)),
        )
    else:
        y_axis = AxisSpec(
            pick(args.nu_min, "nu_min", 1e-2),
            pick(args.nu_max, "nu_max", 1e2),
            int(pick(args.nu_steps, "nu_steps", 24)),
        )
    f_axis = AxisSpec(
        pick(args.f_min, "f_min", 1e-2),
        pick(args.f_max, "f_max", 1e3),
        int(pick(args.f_steps, "f_steps", 24)),
        pick(args.f_spacing, "f_spacing", "log"),
    )
    return SweepConfig(
        mode=mode,
        y_axis=y_axis,
        f_axis=f_axis,
        levels=pick(args.levels, "levels", (2, 3)),
        gauges=pick(args.gauges_opt, "gauges", (Gauge.COULOMB, Gauge.CFIELD)),
        tol=pick(args.tol, "tol", 1e-8),
        fixed_omega10=pick(args.omega10_ev, "omega10_ev", None),
        mass=pick(args.mass, "mass", constants.ELECTRON_MASS_EV),
        charge=pick(args.charge, "charge", constants.ELEMENTARY_CHARGE),
        literal_eq38=bool(args.literal_eq38),
    )


def cmd_sweep(args) -> int:
    config = _sweep_config(args)

    def progress(done, total):
        print(f"sweep: {done}/{total} points", file=sys.stderr, flush=True)

    error_map = run_sweep(config, parallel=args.parallel, progress=progress)
    csv_text = to_csv(error_map)

    outputs = []
    if args.stdout:
        sys.stdout.write(csv_text)
        outputs.append("<stdout:sweep.csv>")
    else:
        out = args.out or "sweep.csv"
        _write_text(out, csv_text)
        outputs.append(str(out))
        if args.json:
            json_path = str(Path(out).with_suffix(".json"))
            _write_text(json_path, _json_dumps(to_records(error_map)))
            outputs.append(json_path)
        manifest_path = str(Path(out).with_suffix(".manifest.json"))
        manifest = _manifest("sweep", config.as_dict(), outputs)
        _write_text(manifest_path, _json_dumps(manifest))
    return EXIT_OK


def cmd_overlay(args) -> int:
    entries = load_regimes(args.regimes)
    lines = [
        "name,eta_min,eta_max,f_min_eV,f_max_eV,gtilde_min,gtilde_max,"
        "g_over_nu_min,g_over_nu_max,dipole_min,dipole_max,dipole_units,caution"
    ]
    for e in entries:
        if args.units == "um":
            dip_lo, dip_hi = e.dipole_size_um
        else:
            dip_lo = e.dipole_size_um[0] / constants.HBARC_UM_EV
            dip_hi = e.dipole_size_um[1] / constants.HBARC_UM_EV
        lines.append(
            ",".join(
                [
                    f'"{e.name}"',
                    repr(e.eta_range[0]),
                    repr(e.eta_range[1]),
                    repr(e.f_range_eV[0]),
                    repr(e.f_range_eV[1]),
                    repr(e.g_over_omega10[0]),
                    repr(e.g_over_omega10[1]),
                    repr(e.g_over_nu[0]),
                    repr(e.g_over_nu[1]),
                    repr(dip_lo),
                    repr(dip_hi),
                    args.units,
                    "true" if e.caution_flag else "false",
                ]
            )
        )
    text = "\n".join(lines) + "\n"
    outputs = _emit(args, text, "overlay.csv")
    if args.out:
        manifest_path = str(Path(args.out).with_suffix(".manifest.json"))
        manifest = _manifest(
            "overlay", {"regimes": args.regimes, "units": args.units}, outputs
        )
        _write_text(manifest_path, _json_dumps(manifest))
    return EXIT_OK


def cmd_render(args) -> int:
    from .plots import PlotSpec, render_heatmap

    spec = PlotSpec(
        input_csv=args.input,
        overlay_csv=args.overlay,
        metric=args.metric,
        output=args.out,
        title=args.title,
    )
    render_heatmap(spec)
    print(f"wrote {args.out}", file=sys.stderr)
    return EXIT_OK


def _add_common_point_flags(sub):
    sub.add_argument("--mode", choices=["resonant", "detuned"], default="resonant")
    sub.add_argument("--resonant", action="store_const", const="resonant", dest="mode")
    sub.add_argument("--detuned", action="store_const", const="detuned", dest="mode")
    sub.add_argument("--eta", type=float, help="dipole size over wavelength (resonant mode)")
    sub.add_argument("--nu", type=float, help="mode energy in eV (detuned mode)")
    sub.add_argument("--omega10-ev", type=float, help="fixed lowest matter transition (detuned)")
    sub.add_argument("--f", type=float, help="field amplitude in eV")
    sub.add_argument("--gtilde", type=float, help="normalized coupling; f is back-solved")
    sub.add_argument("--levels", type=_parse_levels, default=(2, 3))
    sub.add_argument("--gauges", type=_parse_gauges, default=(Gauge.COULOMB, Gauge.CFIELD))
    sub.add_argument("--tol", type=float, default=1e-8)
    sub.add_argument("--mass", type=float, default=constants.ELECTRON_MASS_EV)
    sub.add_argument("--charge", type=float, default=constants.ELEMENTARY_CHARGE)
    sub.add_argument("--literal-eq38", action="store_true")
    sub.add_argument("--out", help="output path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gtb",
        description="Few-level truncation accuracy of Coulomb-gauge and C-field "
        "cavity-QED Hamiltonians (square-well dipole, single mode).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    point = commands.add_parser("point", help="single-point truncation-error report (JSON)")
    _add_common_point_flags(point)
    point.set_defaults(func=cmd_point)

    converge = commands.add_parser("converge", help="convergence report for one point (JSON)")
    _add_common_point_flags(converge)
    converge.set_defaults(func=cmd_converge)

    sweep = commands.add_parser("sweep", help="grid sweep writing the error-map CSV")
    sweep.add_argument("--mode", choices=["resonant", "detuned"])
    sweep.add_argument("--eta-min", type=float)
    sweep.add_argument("--eta-max", type=float)
    sweep.add_argument("--eta-steps", type=int)
    sweep.add_argument("--nu-min", type=float)
    sweep.add_argument("--nu-max", type=float)
    sweep.add_argument("--nu-steps", type=int)
    sweep.add_argument("--f-min", type=float)
    sweep.add_argument("--f-max", type=float)
    sweep.add_argument("--f-steps", type=int)
    sweep.add_argument("--f-spacing", choices=["log", "linear"])
    sweep.add_argument("--omega10-ev", type=float)
    sweep.add_argument("--levels", type=_parse_levels, dest="levels")
    sweep.add_argument("--gauges", type=_parse_gauges, dest="gauges_opt")
    sweep.add_argument("--tol", type=float)
    sweep.add_argument("--mass", type=float)
    sweep.add_argument("--charge", type=float)
    sweep.add_argument("--literal-eq38", action="store_true")
    sweep.add_argument("--config", help="JSON config file (flags take precedence)")
    sweep.add_argument("--out", help="CSV output path (default sweep.csv)")
    sweep.add_argument("--json", action="store_true", help="also write a JSON mirror")
    sweep.add_argument("--stdout", action="store_true", help="write CSV to stdout instead")
    sweep.add_argument("--parallel", type=int, default=1, help="worker count; 0 = auto")
    sweep.set_defaults(func=cmd_sweep)

    overlay = commands.add_parser("overlay", help="regime-overlay CSV for plotting")
    overlay.add_argument("--regimes", help="regimes CSV (default: bundled Table data)")
    overlay.add_argument("--units", choices=["natural", "um"], default="natural")
    overlay.add_argument("--out", help="output path (default: stdout)")
    overlay.set_defaults(func=cmd_overlay)

    render = commands.add_parser("render", help="render a heatmap image from a sweep CSV")
    render.add_argument("--in", dest="input", required=True, help="sweep CSV path")
    render.add_argument("--overlay", help="overlay CSV from the overlay command")
    render.add_argument(
        "--metric",
        default="err_cfield_2",
        help="error column to plot (e.g. err_coulomb_2)",
    )
    render.add_argument("--out", required=True, help="image output path")
    render.add_argument("--title", help="figure title")
    render.set_defaults(func=cmd_render)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (_IOFailure, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except GaugebenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
