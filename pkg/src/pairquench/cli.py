"""Command-line entry point.

Each experiment reads a sectioned key=value config file (INI syntax), runs
deterministically, and writes CSV artifacts plus a JSON manifest recording
the resolved configuration, library versions and wall time.  Without
``--config`` the built-in defaults reproduce the headline quench study.
"""

from __future__ import annotations

import argparse
import configparser
import copy
import sys
import time
from pathlib import Path

import numpy as np

from . import reporting, spectrum, three_site
from .model import ModelParams
from .quench import QuenchWorkspace, WavePacketSpec, run_quench, sweep_transfer

EXPERIMENTS = ("three-site", "band", "spectrum", "quench", "sweep")

_MODEL_KEYS = {
    "n_sites": int,
    "kappa": float,
    "u": float,
    "v": float,
    "field": float,
    "boundary": str,
}

# (section, key, type, required) per experiment
SCHEMA: dict[str, list[tuple[str, str, type, bool]]] = {
    "three-site": [
        ("model", "n_sites", int, True),
        ("model", "kappa", float, True),
        ("model", "u", float, True),
        ("model", "v", float, True),
        ("three_site", "fields", str, True),
        ("three_site", "t_max", float, True),
        ("three_site", "dt", float, True),
    ],
    "band": [
        ("model", "n_sites", int, True),
        ("model", "kappa", float, True),
        ("model", "u", float, True),
    ],
    "spectrum": [
        ("model", "n_sites", int, True),
        ("model", "kappa", float, True),
        ("model", "u", float, True),
        ("model", "v", float, True),
        ("spectrum", "f_start", float, True),
        ("spectrum", "f_stop", float, True),
        ("spectrum", "f_count", int, True),
        ("spectrum", "r_threshold", float, False),
        ("spectrum", "window_lo", float, False),
        ("spectrum", "window_hi", float, False),
    ],
    "quench": [
        ("model", "n_sites", int, True),
        ("model", "kappa", float, True),
        ("model", "u", float, True),
        ("model", "v", float, True),
        ("model", "field", float, True),
        ("packet", "k0_pi", float, True),
        ("packet", "width", float, True),
        ("packet", "center_site", int, True),
        ("packet", "branch", str, False),
        ("time", "t_max", float, True),
        ("time", "dt", float, True),
    ],
    "sweep": [
        ("model", "n_sites", int, True),
        ("model", "kappa", float, True),
        ("model", "u", float, True),
        ("model", "v", float, True),
        ("packet", "k0_pi", float, True),
        ("packet", "width", float, True),
        ("packet", "center_site", int, True),
        ("packet", "branch", str, False),
        ("sweep", "f_start", float, True),
        ("sweep", "f_stop", float, True),
        ("sweep", "f_step", float, True),
        ("sweep", "t_f", float, True),
    ],
}

_PAPER_MODEL = {"n_sites": 111, "kappa": 1.0, "u": -6.24, "v": -6.24}
_PAPER_PACKET = {"k0_pi": -0.9, "width": 0.2, "center_site": 36, "branch": "upper"}

DEFAULTS: dict[str, dict[str, dict]] = {
    "three-site": {
        "model": {"n_sites": 3, "kappa": 0.4, "u": -6.0, "v": -6.0},
        "three_site": {"fields": "-3.0, -1.0", "t_max": 100.0, "dt": 0.05},
    },
    "band": {"model": dict(_PAPER_MODEL)},
    "spectrum": {
        "model": {"n_sites": 3, "kappa": 0.4, "u": -6.0, "v": -6.0},
        "spectrum": {"f_start": -5.0, "f_stop": -1.0, "f_count": 81, "r_threshold": 1.0},
    },
    "quench": {
        "model": dict(_PAPER_MODEL, field=-0.097120),
        "packet": dict(_PAPER_PACKET),
        "time": {"t_max": 800.0, "dt": 1.0},
    },
    "sweep": {
        "model": dict(_PAPER_MODEL),
        "packet": dict(_PAPER_PACKET),
        "sweep": {"f_start": -0.0995, "f_stop": -0.0950, "f_step": 7.5e-5, "t_f": 800.0},
    },
}

_BRANCH_ALIASES = {"upper": "+", "lower": "-", "+": "+", "-": "-"}


class ConfigError(Exception):
    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


def load_config(experiment: str, path: str | None) -> dict[str, dict]:
    """Resolve the run configuration, validating every required field."""
    if path is None:
        return copy.deepcopy(DEFAULTS[experiment])
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError([f"config file not found: {path}"])
    problems = []
    config: dict[str, dict] = {}
    for section, key, typ, required in SCHEMA[experiment]:
        if parser.has_option(section, key):
            raw = parser.get(section, key)
            try:
                config.setdefault(section, {})[key] = typ(raw)
            except ValueError:
                problems.append(f"invalid value for [{section}] {key}: {raw!r}")
        elif required:
            problems.append(f"missing [{section}] {key}")
    if parser.has_option("model", "boundary"):
        config.setdefault("model", {})["boundary"] = parser.get("model", "boundary")
    if problems:
        raise ConfigError(problems)
    return config


def _model_params(config: dict, field: float | None = None) -> ModelParams:
    section = config["model"]
    return ModelParams(
        n_sites=section["n_sites"],
        kappa=section["kappa"],
        u=section["u"],
        v=section.get("v", 0.0),
        field=section.get("field", 0.0) if field is None else field,
        boundary=section.get("boundary", "open"),
    )


def _packet_spec(config: dict) -> WavePacketSpec:
    section = config["packet"]
    branch = _BRANCH_ALIASES.get(str(section.get("branch", "upper")).lower())
    if branch is None:
        raise ConfigError([f"invalid value for [packet] branch: {section['branch']!r}"])
    return WavePacketSpec(
        center_momentum=section["k0_pi"] * np.pi,
        width=section["width"],
        center_site=section["center_site"],
        branch=branch,
    )


def _run_three_site(config, out: Path, args) -> list[str]:
    section = config["three_site"]
    fields = [float(tok) for tok in section["fields"].split(",") if tok.strip()]
    times = np.arange(0.0, section["t_max"] + 0.5 * section["dt"], section["dt"])
    outputs = []
    for f in fields:
        params = _model_params(config, field=f)
        constants = three_site.rabi_constants(f, params.u, params.kappa)
        analytic = three_site.transfer_probability(times, constants)
        pair_loss, unpair = three_site.exact_pair_dynamics(params, times)
        name = f"three_site_F{reporting.fmt(f)}.csv"
        reporting.write_csv(
            out / name,
            ["t", "transfer_analytic", "transfer_exact", "unpair_weight_exact"],
            zip(times, analytic, pair_loss, unpair),
        )
        outputs.append(name)
    if args.emit_plots:
        reporting.write_gnuplot(out / "three_site.gp", "three-site", outputs[0])
        outputs.append("three_site.gp")
    return outputs


def _run_band(config, out: Path, args) -> list[str]:
    from .bound_band import band_scan

    model = config["model"]
    band = band_scan(model["kappa"], model["u"], model["n_sites"])
    reporting.write_band_csv(out / "band.csv", band)
    outputs = ["band.csv"]
    if args.emit_plots:
        reporting.write_gnuplot(out / "band.gp", "band", "band.csv")
        outputs.append("band.gp")
    return outputs


def _run_spectrum(config, out: Path, args) -> list[str]:
    section = config["spectrum"]
    params = _model_params(config, field=0.0)
    f_values = np.linspace(section["f_start"], section["f_stop"], section["f_count"])
    window = None
    if "window_lo" in section and "window_hi" in section:
        window = (section["window_lo"], section["window_hi"])
    slices = spectrum.spectrum_vs_field(f_values, params, window)
    r_threshold = section.get("r_threshold", 1.0)
    labels = [spectrum.classify_levels(s, r_threshold) for s in slices]
    scan = spectrum.detect_avoided_crossings(slices, r_threshold=r_threshold)
    reporting.write_spectrum_csv(out / "spectrum.csv", slices, labels, scan.track_ids)
    reporting.write_json(out / "crossings.json", reporting.crossing_payload(scan))
    outputs = ["spectrum.csv", "crossings.json"]
    if args.emit_plots:
        reporting.write_gnuplot(out / "spectrum.gp", "spectrum", "spectrum.csv")
        outputs.append("spectrum.gp")
    return outputs


def _run_quench(config, out: Path, args) -> list[str]:
    params = _model_params(config)
    workspace = QuenchWorkspace.prepare(params.replace(field=0.0), _packet_spec(config))
    section = config["time"]
    times = np.arange(0.0, section["t_max"] + 0.5 * section["dt"], section["dt"])
    trajectory = run_quench(workspace, params.field, times)
    reporting.write_trajectory_csv(out / "trajectory.csv", trajectory)
    outputs = ["trajectory.csv"]
    if args.emit_plots:
        reporting.write_gnuplot(out / "quench.gp", "quench", "trajectory.csv")
        outputs.append("quench.gp")
    return outputs


def _run_sweep(config, out: Path, args) -> list[str]:
    params = _model_params(config, field=0.0)
    workspace = QuenchWorkspace.prepare(params, _packet_spec(config))
    section = config["sweep"]
    count = int(round((section["f_stop"] - section["f_start"]) / section["f_step"])) + 1
    f_values = section["f_start"] + section["f_step"] * np.arange(count)
    sweep = sweep_transfer(workspace, f_values, section["t_f"], workers=args.threads)
    reporting.write_sweep_csv(out / "sweep.csv", sweep)
    reporting.write_json(
        out / "sweep_period.json",
        {
            "period": sweep.period.period,
            "uncertainty": sweep.period.uncertainty,
            "lag": sweep.period.lag,
            "strength": sweep.period.strength,
            "t_f": sweep.t_final,
            "f_start": float(f_values[0]),
            "f_stop": float(f_values[-1]),
            "f_step": section["f_step"],
            "failures": [{"F": f, "error": msg} for f, msg in sweep.failures],
        },
    )
    outputs = ["sweep.csv", "sweep_period.json"]
    if args.emit_plots:
        reporting.write_gnuplot(out / "sweep.gp", "sweep", "sweep.csv")
        outputs.append("sweep.gp")
    return outputs


_RUNNERS = {
    "three-site": _run_three_site,
    "band": _run_band,
    "spectrum": _run_spectrum,
    "quench": _run_quench,
    "sweep": _run_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pairquench",
        description="Two-boson lattice dynamics: bound-pair bands, spectra and field quenches.",
    )
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", default=None, metavar="PATH",
                       help="INI config file (built-in defaults when omitted)")
        p.add_argument("--out", default=None, metavar="DIR",
                       help="output directory (default runs/<experiment>)")
        p.add_argument("--threads", type=int, default=1,
                       help="worker processes for the sweep grid")
        p.add_argument("--emit-plots", action="store_true",
                       help="write gnuplot scripts next to the CSV output")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.experiment, args.config)
    except ConfigError as exc:
        print("configuration error:", file=sys.stderr)
        for problem in exc.problems:
            print(f"  {problem}", file=sys.stderr)
        return 2
    out = Path(args.out) if args.out else Path("runs") / args.experiment
    out.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    try:
        outputs = _RUNNERS[args.experiment](config, out, args)
    except ConfigError as exc:
        print("configuration error:", file=sys.stderr)
        for problem in exc.problems:
            print(f"  {problem}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError) as exc:
        print(f"run failed: {exc}", file=sys.stderr)
        return 1
    reporting.write_json(
        out / "manifest.json",
        {
            "experiment": args.experiment,
            "config": config,
            "threads": args.threads,
            "versions": reporting.versions(),
            "wall_time_seconds": time.perf_counter() - started,
            "outputs": outputs,
        },
    )
    for name in outputs:
        print(out / name)
    print(out / "manifest.json")
    return 0


if __name__ == "__main__":
    sys.exit(main())
