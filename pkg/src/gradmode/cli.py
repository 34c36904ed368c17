"""Batch command line front end.

    gradmode run   <config.json> [--out DIR] [--quiet] [--jobs N]
    gradmode sweep <config.json> [...]
    gradmode susy  <config.json> [...]

The configuration is one JSON document, for example::

    {
      "profile": {"kind": "GaussianSusyPair", "n0": 1.0, "alpha": 1.0},
      "grid": {"x_min": -8, "x_max": 8, "n_points": 1601},
      "k0": 5.0,
      "polarizations": ["TE", "TM"],
      "max_modes": 4,
      "susy_check": true,
      "tolerances": {"constancy": 1e-9, "pairing": 1e-6},
      "output_dir": "out"
    }

``"k0"`` may be replaced by ``"sweep": {"start": 1, "stop": 5, "steps": 9}``.
Exit status: 0 success, 2 malformed configuration, 3 I/O or solver failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, kernels
from .errors import ConfigError, GradmodeError, NotConstantIndex
from .profiles import Constant, GaussianSusyPair, Grid, MaterialProfile, SechSquaredEps, load_tabulated
from .reduction import Polarization, field_from_wavefunction
from .spectral import BOUNDARY_WARN, ModeSpectrum, compute_spectrum
from .susy import default_constancy_tol, superpotential, verify_susy, zero_modes

log = logging.getLogger("gradmode")

EXIT_OK, EXIT_CONFIG, EXIT_FAILURE = 0, 2, 3
SPECTRUM_HEADER = ["k0", "polarization", "mode_index", "beta_sq", "e_schr", "nodes", "guided"]
DISPERSION_HEADER = ["k0", "polarization", "mode_index", "beta_sq", "pair_id"]

_PROFILE_PARAMS = {
    "Constant": (Constant, {"eps": 1.0, "mu": 1.0}),
    "GaussianSusyPair": (GaussianSusyPair, {"n0": 1.0, "alpha": 1.0}),
    "SechSquaredEps": (SechSquaredEps, {"eps_b": 1.0, "delta": 1.0, "width": 1.0}),
}


@dataclass
class RunConfig:
    profile: MaterialProfile
    grid: Grid
    k0_values: list[float]
    polarizations: list[Polarization]
    max_modes: int = 4
    susy_check: bool = False
    constancy_tol: float | None = None
    pair_tol: float = 1e-6
    output_dir: Path = Path("gradmode_out")
    is_sweep: bool = False
    extrapolate: bool = True


@dataclass
class RunReport:
    spectra: list[ModeSpectrum] = field(default_factory=list)
    susy: list[dict] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    pair_ids: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)


# -- configuration ---------------------------------------------------------


def _number(d, key, path, default=None, positive=False, integer=False):
    if key not in d:
        if default is None:
            raise ConfigError("missing required field", f"{path}.{key}")
        return default
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ConfigError(f"expected a finite number, got {v!r}", f"{path}.{key}")
    if integer and int(v) != v:
        raise ConfigError(f"expected an integer, got {v!r}", f"{path}.{key}")
    if positive and not v > 0:
        raise ConfigError(f"must be positive, got {v!r}", f"{path}.{key}")
    return int(v) if integer else float(v)


def _parse_profile(spec, base_dir: Path) -> MaterialProfile:
    if not isinstance(spec, dict):
        raise ConfigError("expected an object", "profile")
    kind = spec.get("kind")
    if kind == "Tabulated":
        p = spec.get("path")
        if not isinstance(p, str):
            raise ConfigError("Tabulated profile needs a string 'path'", "profile.path")
        path = Path(p) if Path(p).is_absolute() else base_dir / p
        try:
            return load_tabulated(path)
        except OSError as exc:
            raise OSError(f"cannot read tabulated profile {path}: {exc}") from exc
    if kind not in _PROFILE_PARAMS:
        raise ConfigError(f"unknown kind {kind!r}", "profile.kind")
    cls, defaults = _PROFILE_PARAMS[kind]
    unknown = set(spec) - set(defaults) - {"kind"}
    if unknown:
        raise ConfigError(f"unknown parameter(s) {sorted(unknown)}", "profile")
    params = {k: _number(spec, k, "profile", default=v) for k, v in defaults.items()}
    return cls(**params)


def parse_config(doc: dict, base_dir: Path = Path(".")) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigError("top level must be a JSON object")
    if "profile" not in doc:
        raise ConfigError("missing required field", "profile")
    profile = _parse_profile(doc["profile"], base_dir)

    g = doc.get("grid")
    if not isinstance(g, dict):
        raise ConfigError("expected an object", "grid")
    try:
        grid = Grid(_number(g, "x_min", "grid"), _number(g, "x_max", "grid"), _number(g, "n_points", "grid", integer=True))
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc), "grid") from exc

    if ("k0" in doc) == ("sweep" in doc):
        raise ConfigError("exactly one of 'k0' and 'sweep' is required", "k0")
    if "k0" in doc:
        k0_values = [_number(doc, "k0", "$", positive=True)]
        is_sweep = False
    else:
        sw = doc["sweep"]
        if not isinstance(sw, dict):
            raise ConfigError("expected an object", "sweep")
        start = _number(sw, "start", "sweep", positive=True)
        stop = _number(sw, "stop", "sweep", positive=True)
        steps = _number(sw, "steps", "sweep", integer=True)
        if steps < 2:
            raise ConfigError(f"steps must be >= 2, got {steps}", "sweep.steps")
        k0_values = [float(v) for v in np.linspace(start, stop, steps)]
        is_sweep = True

    pols = doc.get("polarizations", ["TE", "TM"])
    if not isinstance(pols, list) or not pols:
        raise ConfigError("expected a non-empty list", "polarizations")
    try:
        polarizations = [Polarization(p) for p in dict.fromkeys(pols)]
    except ValueError as exc:
        raise ConfigError(f"unknown polarization in {pols!r}", "polarizations") from exc

    max_modes = _number(doc, "max_modes", "$", default=4, integer=True)
    if max_modes < 1:
        raise ConfigError("must be >= 1", "max_modes")
    susy_check = doc.get("susy_check", False)
    if not isinstance(susy_check, bool):
        raise ConfigError("expected true or false", "susy_check")
    extrapolate = doc.get("extrapolate", True)
    if not isinstance(extrapolate, bool):
        raise ConfigError("expected true or false", "extrapolate")
    tol = doc.get("tolerances", {})
    if not isinstance(tol, dict):
        raise ConfigError("expected an object", "tolerances")
    constancy = _number(tol, "constancy", "tolerances", default=default_constancy_tol(profile), positive=True)
    pairing = _number(tol, "pairing", "tolerances", default=1e-6, positive=True)
    out = doc.get("output_dir", "gradmode_out")
    if not isinstance(out, str):
        raise ConfigError("expected a string", "output_dir")
    out_path = Path(out) if Path(out).is_absolute() else base_dir / out
    return RunConfig(
        profile, grid, k0_values, polarizations, max_modes, susy_check,
        constancy, pairing, out_path, is_sweep, extrapolate,
    )


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from exc
    return parse_config(doc, path.parent)


# -- execution -------------------------------------------------------------


def run(config: RunConfig, jobs: int = 1) -> RunReport:
    """Solve every requested (k0, polarization) and, if asked, verify SUSY."""
    report = RunReport()
    t0 = time.perf_counter()
    tasks = [(k0, pol) for k0 in config.k0_values for pol in config.polarizations]

    def solve(task):
        k0, pol = task
        return compute_spectrum(config.profile, config.grid, k0, pol, config.max_modes, extrapolate=config.extrapolate)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            report.spectra = list(pool.map(solve, tasks))
    else:
        report.spectra = [solve(t) for t in tasks]
    report.timing["solve_s"] = time.perf_counter() - t0

    for spec in report.spectra:
        for m in spec.modes:
            if m.box_limited:
                report.warnings.append(
                    f"{spec.polarization} mode {m.mode_index} at k0={spec.k0!r}: boundary/peak "
                    f"{m.boundary_ratio:.3e} exceeds {BOUNDARY_WARN:g}; enlarge the domain"
                )

    if config.susy_check:
        t1 = time.perf_counter()
        try:
            w = superpotential(config.profile, config.grid, config.constancy_tol)
        except NotConstantIndex as exc:
            report.susy.append(
                {"status": "NotConstantIndex", "max_deviation": exc.max_deviation, "x": exc.x_at}
            )
        else:
            zero = zero_modes(w, config.profile, config.grid)
            by_key = {(s.k0, s.polarization): s for s in report.spectra}
            for k0 in config.k0_values:
                te = by_key.get((k0, Polarization.TE))
                tm = by_key.get((k0, Polarization.TM))
                if te is None or tm is None:
                    report.warnings.append("SUSY verification needs both polarizations")
                    break
                r = verify_susy(te, tm, w, config.pair_tol, zero)
                for p in r.pairing:
                    pid = f"TE{p.te_index}/TM{p.tm_index}"
                    report.pair_ids[(k0, Polarization.TE, p.te_index)] = pid
                    report.pair_ids[(k0, Polarization.TM, p.tm_index)] = pid
                report.susy.append({"status": "ok", **r.to_dict()})
        report.timing["susy_s"] = time.perf_counter() - t1
    report.timing["total_s"] = time.perf_counter() - t0
    return report


# -- output ----------------------------------------------------------------


def _fmt(v) -> str:
    return repr(float(v))


def _clean(obj):
    """JSON-safe copy: non-finite floats become null."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def report_dict(config: RunConfig, report: RunReport) -> dict:
    g = config.grid
    runs = []
    for spec in report.spectra:
        modes = []
        for m in spec.modes:
            modes.append({
                "mode_index": m.mode_index,
                "beta_sq": m.beta_sq,
                "e_schr": m.e_schr,
                "e_schr_raw": m.e_schr_raw,
                "nodes": m.nodes,
                "guided": True,
                "boundary_ratio": m.boundary_ratio,
                "grid_warning": m.box_limited,
                "pair_id": report.pair_ids.get((spec.k0, spec.polarization, m.mode_index)),
            })
        runs.append({
            "k0": spec.k0,
            "polarization": str(spec.polarization),
            "extrapolated": spec.extrapolated,
            "modes": modes,
            "rejected_states": len(spec.rejected),
        })
    doc = {
        "gradmode_version": __version__,
        "profile": config.profile.to_dict(),
        "grid": {"x_min": g.x_min, "x_max": g.x_max, "n_points": g.n_points},
        "k0_values": list(config.k0_values),
        "max_modes": config.max_modes,
        "runs": runs,
        "warnings": list(report.warnings),
    }
    if config.susy_check:
        doc["susy"] = report.susy
    return _clean(doc)


def write_outputs(config: RunConfig, report: RunReport, out_dir: Path, plot_data: bool = True) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "report.json", "w") as fh:
        json.dump(report_dict(config, report), fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(out_dir / "spectrum.csv", "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(SPECTRUM_HEADER)
        for spec in report.spectra:
            rows = sorted(spec.modes + spec.rejected, key=lambda m: m.e_schr)
            for m in rows:
                wr.writerow([_fmt(spec.k0), spec.polarization, m.mode_index, _fmt(m.beta_sq), _fmt(m.e_schr), m.nodes, str(m.guided).lower()])
    if config.is_sweep:
        with open(out_dir / "dispersion.csv", "w", newline="") as fh:
            wr = csv.writer(fh, lineterminator="\n")
            wr.writerow(DISPERSION_HEADER)
            for spec in report.spectra:
                for m in spec.modes:
                    wr.writerow([_fmt(spec.k0), spec.polarization, m.mode_index, _fmt(m.beta_sq),
                                 report.pair_ids.get((spec.k0, spec.polarization, m.mode_index), "")])
    if plot_data:
        x = config.grid.x
        for spec in report.spectra:
            for m in spec.modes:
                fld = field_from_wavefunction(m.psi, config.profile, config.grid, spec.polarization)
                name = f"{spec.polarization}_mode{_fmt(spec.k0)}_{m.mode_index}.dat"
                with open(out_dir / name, "w") as fh:
                    fh.write("# x psi field potential\n")
                    for row in zip(x, m.psi, fld, spec.potential.v):
                        fh.write(" ".join(_fmt(v) for v in row) + "\n")
    with open(out_dir / "timing.json", "w") as fh:
        json.dump({"backend": kernels.BACKEND, **report.timing}, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _summary(config: RunConfig, report: RunReport) -> str:
    lines = []
    for spec in report.spectra:
        vals = ", ".join(f"{m.mode_index}:{m.beta_sq:.8g}" for m in spec.modes) or "none"
        lines.append(f"k0={spec.k0:g} {spec.polarization}: guided beta^2 [{vals}]")
    for s in report.susy:
        if s.get("status") == "ok":
            lines.append(
                f"SUSY n0={s['n0']:.6g} k0={s['k0']:g}: {s['classification']}, "
                f"{len(s['pairing'])} degenerate pair(s)"
            )
        else:
            lines.append(f"SUSY check: not constant index (max deviation {s['max_deviation']:.3e})")
    return "\n".join(lines)


# -- entry point -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gradmode", description="Guided TE/TM modes of graded planar waveguides.")
    ap.add_argument("--version", action="version", version=f"gradmode {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("run", "solve the configured modes"),
        ("sweep", "dispersion table over the configured k0 sweep"),
        ("susy", "solve both polarizations and verify SUSY pairing"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("config", help="JSON run configuration")
        p.add_argument("--out", help="output directory (overrides output_dir)")
        p.add_argument("--quiet", action="store_true", help="only report errors")
        p.add_argument("--jobs", type=int, default=1, help="concurrent solves (default 1)")
        p.add_argument("--no-plot-data", action="store_true", help="skip per-mode .dat files")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.ERROR if args.quiet else logging.INFO, format="gradmode: %(levelname)s: %(message)s"
    )
    try:
        config = load_config(args.config)
        if args.command == "sweep" and not config.is_sweep:
            raise ConfigError("the sweep command needs a 'sweep' block", "sweep")
        if args.command == "susy":
            config.susy_check = True
            if set(config.polarizations) != {Polarization.TE, Polarization.TM}:
                config.polarizations = [Polarization.TE, Polarization.TM]
        out_dir = Path(args.out) if args.out else config.output_dir
        report = run(config, jobs=max(1, args.jobs))
        write_outputs(config, report, out_dir, plot_data=not args.no_plot_data)
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    except (OSError, GradmodeError, ArithmeticError) as exc:
        log.error("%s", exc)
        return EXIT_FAILURE
    for msg in report.warnings:
        log.warning("%s", msg)
    if not args.quiet:
        print(_summary(config, report))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
