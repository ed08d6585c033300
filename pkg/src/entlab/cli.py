"""``entlab`` command line: parameter sweeps written as CSV or JSON.

Settings are resolved in increasing priority: built-in defaults, a named
``--preset``, a ``key=value`` file given with ``--config``, explicit flags.
Exit status is 0 on success, 2 for configuration errors and 3 for numeric
failures (truncation leakage, non-physical states).
"""

from __future__ import annotations

import argparse
import logging
import math
import re
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from . import analytic, coherent, vacuum
from .jc import SiteParams
from .qcore import NonPhysicalStateError, TruncationError
from .timeseries import TimeSeries

log = logging.getLogger("entlab")

EXIT_CONFIG = 2
EXIT_NUMERIC = 3

COMMANDS = ("vacuum", "coherent", "analytic", "compare", "envelope")
FORMATS = ("csv", "json")


class ConfigError(ValueError):
    pass


_NUM = re.compile(
    r"^\s*(?P<sign>[-+]?)\s*(?P<coef>\d*\.?\d*(?:[eE][-+]?\d+)?)?\s*\*?\s*pi\s*(?:/\s*(?P<den>\d*\.?\d+))?\s*$"
)


def parse_number(text) -> float:
    """Float parser that also understands multiples of pi: ``pi/6``, ``2*pi``, ``-pi/4``."""
    if isinstance(text, (int, float)):
        return float(text)
    s = str(text).strip()
    try:
        return float(s)
    except ValueError:
        pass
    m = _NUM.match(s)
    if not m:
        raise ConfigError(f"cannot parse number {text!r}")
    coef = float(m["coef"]) if m["coef"] else 1.0
    den = float(m["den"]) if m["den"] else 1.0
    return (-1 if m["sign"] == "-" else 1) * coef * math.pi / den


def _parse_int(text) -> int:
    try:
        return int(str(text).strip())
    except ValueError as exc:
        raise ConfigError(f"expected an integer, got {text!r}") from exc


def _parse_threads(text):
    s = str(text).strip()
    return "auto" if s == "auto" else _parse_int(s)


@dataclass(frozen=True)
class RunConfig:
    command: str = "coherent"
    bell_angle: float = math.pi / 4
    coherent_amp: float = 10.0
    g: float = 1.0
    detuning: float = 0.0
    tau_min: float = 0.0
    tau_max: float = 140.0
    steps: int = 4000
    cutoff_override: int | None = None
    tail_tolerance: float = 1e-12
    kmax: int | None = None
    output_path: str | None = None
    format: str = "csv"
    threads: int | str = 1

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.format!r}")
        if self.steps < 2:
            raise ConfigError(f"steps must be >= 2, got {self.steps}")
        if not self.tau_max > 0:
            raise ConfigError(f"tau_max must be positive, got {self.tau_max}")
        if not self.tau_max > self.tau_min:
            raise ConfigError("tau_max must exceed tau_min")
        if not self.g > 0:
            raise ConfigError(f"g must be positive, got {self.g}")
        if not self.coherent_amp > 0:
            raise ConfigError(f"coherent_amp must be positive, got {self.coherent_amp}")
        if not 0 < self.tail_tolerance < 1:
            raise ConfigError("tail_tolerance must lie in (0, 1)")
        if self.kmax is not None and self.kmax < 1:
            raise ConfigError("kmax must be >= 1")
        if self.threads != "auto" and int(self.threads) < 1:
            raise ConfigError("threads must be >= 1 or 'auto'")
        return self

    def grid(self) -> np.ndarray:
        """``steps`` equal intervals from ``tau_min`` to ``tau_max`` inclusive."""
        return np.linspace(self.tau_min, self.tau_max, self.steps + 1)

    def resolved_kmax(self) -> int:
        if self.kmax is not None:
            return self.kmax
        return analytic.default_kmax(max(abs(self.tau_min), abs(self.tau_max)), self.coherent_amp)


_PARSERS = {
    "bell_angle": parse_number,
    "coherent_amp": parse_number,
    "g": parse_number,
    "detuning": parse_number,
    "tau_min": parse_number,
    "tau_max": parse_number,
    "steps": _parse_int,
    "cutoff_override": _parse_int,
    "tail_tolerance": parse_number,
    "kmax": _parse_int,
    "output_path": str,
    "format": str,
    "threads": _parse_threads,
}


def _detail_window(amp: float) -> dict:
    centre = 2 * math.pi * amp
    return {"coherent_amp": amp, "tau_min": centre - 8.0, "tau_max": centre + 8.0, "steps": 2000}


# Each preset is a list of (label, settings); multi-entry presets write one
# file per entry with the label appended to the output stem.
PRESETS = {
    "fig-esd": [
        ("pi4", {"bell_angle": math.pi / 4, "tau_max": 2 * math.pi, "steps": 1000}),
        ("pi6", {"bell_angle": math.pi / 6, "tau_max": 2 * math.pi, "steps": 1000}),
        ("pi12", {"bell_angle": math.pi / 12, "tau_max": 2 * math.pi, "steps": 1000}),
    ],
    "fig-revivals-10": [
        ("", {"coherent_amp": 10.0, "tau_min": 0.0, "tau_max": 140.0, "steps": 4000}),
    ],
    "fig-revival-detail-10": [("", _detail_window(10.0))],
    "fig-revival-detail-5-6": [("a5", _detail_window(5.0)), ("a6", _detail_window(6.0))],
}


def read_config_file(path) -> dict:
    """Plain ``key=value`` lines; ``#`` starts a comment. Keys are flag
    names with underscores (``tau_max``) or dashes (``tau-max``)."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    valid = {f.name for f in fields(RunConfig)} - {"command"}
    aliases = {"cutoff": "cutoff_override", "output": "output_path"}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = aliases.get(key.replace("-", "_"), key.replace("-", "_"))
        if key not in valid:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = _PARSERS[key](value)
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    add = common.add_argument
    add("--bell-angle", dest="bell_angle", type=parse_number,
        help="vacuum initial state cos(a)|ee> + sin(a)|gg>; accepts pi/6 etc. (default pi/4)")
    add("--coherent-amp", dest="coherent_amp", type=parse_number,
        help="real coherent amplitude, mean photon number is its square (default 10)")
    add("--g", dest="g", type=parse_number, help="atom-field coupling (default 1)")
    add("--detuning", dest="detuning", type=parse_number, help="atomic minus field frequency (default 0)")
    add("--tau-min", dest="tau_min", type=parse_number, help="first grid time g*t (default 0)")
    add("--tau-max", dest="tau_max", type=parse_number, help="last grid time g*t")
    add("--steps", dest="steps", type=_parse_int, help="number of grid intervals (points = steps + 1)")
    add("--cutoff", dest="cutoff_override", type=_parse_int, help="photon-number cutoff override")
    add("--tail-tolerance", dest="tail_tolerance", type=parse_number,
        help="allowed Poisson tail mass above the cutoff (default 1e-12)")
    add("--kmax", dest="kmax", type=_parse_int, help="highest revival index in the analytic formulas")
    add("-o", "--output", dest="output_path", help="output file (default stdout)")
    add("--format", dest="format", choices=FORMATS, help="output format (default csv)")
    add("--threads", dest="threads", type=_parse_threads,
        help="worker threads or 'auto'; ENTLAB_THREADS overrides (default 1)")
    add("--config", dest="config", help="key=value settings file")
    add("--preset", dest="preset", choices=sorted(PRESETS), help="named grid setting; multi-entry presets need --output")
    add("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="entlab",
        description="Atom-atom entanglement in two Jaynes-Cummings cavities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "vacuum": "pairwise concurrences for vacuum cavities",
        "coherent": "exact engine with coherent-state fields",
        "analytic": "saddle-point formulas",
        "compare": "exact versus analytic concurrence on one grid",
        "envelope": "revival peak heights",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def resolve_configs(args: argparse.Namespace) -> list[tuple[str, RunConfig]]:
    base = RunConfig(command=args.command)
    if args.command == "vacuum":
        base = replace(base, tau_max=2 * math.pi, steps=1000)
    entries = PRESETS[args.preset] if args.preset else [("", {})]
    file_settings = read_config_file(args.config) if args.config else {}
    flag_settings = {
        f.name: getattr(args, f.name)
        for f in fields(RunConfig)
        if f.name != "command" and getattr(args, f.name, None) is not None
    }
    out = []
    for label, preset in entries:
        cfg = replace(base, **{**preset, **file_settings, **flag_settings})
        out.append((label, cfg.validate()))
    if len(out) > 1 and out[0][1].output_path in (None, "-"):
        raise ConfigError(f"preset {args.preset} writes several files; give --output")
    return out


def run_vacuum(cfg: RunConfig) -> TimeSeries:
    sc = vacuum.VacuumScenario(cfg.bell_angle, SiteParams(g=cfg.g, delta=cfg.detuning))
    return TimeSeries.from_columns(vacuum.vacuum_rows(sc, cfg.grid()))


def _coherent_scenario(cfg: RunConfig) -> coherent.CoherentScenario:
    return coherent.CoherentScenario(
        coherent_amp=cfg.coherent_amp,
        cutoff=cfg.cutoff_override,
        tail_tolerance=cfg.tail_tolerance,
    )


def run_coherent(cfg: RunConfig) -> TimeSeries:
    ts = coherent.concurrence_timeseries(
        _coherent_scenario(cfg), cfg.grid(), threads=cfg.threads, with_elements=True
    )
    return ts.select(("tau", "C_full", "C_xproj", "rho23", "rho11", "rho44", "leakage"))


def run_analytic(cfg: RunConfig) -> TimeSeries:
    taus = cfg.grid()
    a, kmax = cfg.coherent_amp, cfg.resolved_kmax()
    lam = analytic.lambda_approx(taus, a, kmax)
    i12 = analytic.i12(taus, a)
    i34 = analytic.i34(taus, a, kmax)
    return TimeSeries.from_columns({
        "tau": taus,
        "Lambda": lam,
        "C_analytic": 2 * np.maximum(0.0, lam),
        "Lambda_literal_half": analytic.lambda_approx(taus, a, kmax, "literal_half"),
        "Lambda_literal_full": analytic.lambda_approx(taus, a, kmax, "literal_full"),
        "i12_re": i12.real,
        "i12_im": i12.imag,
        "i34_re": i34.real,
        "i34_im": i34.imag,
    })


def run_compare(cfg: RunConfig) -> TimeSeries:
    taus = cfg.grid()
    a, kmax = cfg.coherent_amp, cfg.resolved_kmax()
    exact = coherent.concurrence_timeseries(_coherent_scenario(cfg), taus, threads=cfg.threads)
    nearest = np.maximum(1, np.rint(taus / (2 * math.pi * a)).astype(int))
    return TimeSeries.from_columns({
        "tau": taus,
        "C_exact": exact["C_full"],
        "C_analytic": analytic.concurrence_approx(taus, a, kmax),
        "C_paper_literal_main": analytic.concurrence_approx(taus, a, kmax, "literal_half"),
        "C_paper_literal_appendix": analytic.concurrence_approx(taus, a, kmax, "literal_full"),
        "envelope_k": np.array([analytic.envelope(int(k), a) for k in nearest]),
    })


def run_envelope(cfg: RunConfig) -> TimeSeries:
    a = cfg.coherent_amp
    ks = np.arange(1, cfg.resolved_kmax() + 1)
    raw = np.array([analytic.envelope(int(k), a) for k in ks])
    return TimeSeries.from_columns({
        "k": ks,
        "tau_center": 2 * math.pi * ks * a,
        "envelope_raw": raw,
        "envelope_clamped": np.maximum(0.0, raw),
    })


RUNNERS = {
    "vacuum": run_vacuum,
    "coherent": run_coherent,
    "analytic": run_analytic,
    "compare": run_compare,
    "envelope": run_envelope,
}


def _target(path, label):
    if not label:
        return Path(path)
    p = Path(path)
    return p.with_name(f"{p.stem}_{label}{p.suffix}")


def emit(ts: TimeSeries, cfg: RunConfig, label: str = "") -> None:
    text = ts.render(cfg.format)
    if cfg.output_path in (None, "-"):
        sys.stdout.write(text)
        return
    target = _target(cfg.output_path, label)
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w", newline="") as fh:
        fh.write(text)
    log.info("wrote %d rows to %s", len(ts), target)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        runs = resolve_configs(args)
    except (ConfigError, TypeError) as exc:
        print(f"entlab: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        for label, cfg in runs:
            emit(RUNNERS[cfg.command](cfg), cfg, label)
    except (TruncationError, NonPhysicalStateError) as exc:
        print(f"entlab: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"entlab: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return 0


if __name__ == "__main__":
    sys.exit(main())
