"""Command-line interface.

Exit status: 0 success, 2 usage error, 3 numerical validation failure,
4 I/O failure.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace

import numpy as np

from .bath import BUNCH_DAVIES, BathParams, bath_coefficients, gibbons_hawking_temperature
from .dynamics import (
    F_MAX,
    EvolutionConfig,
    equilibrium_state,
    evolve_numeric,
    initial_state,
    weak_measurement_reversal,
)
from .errors import DomainError, IntegrationError, ValidationError
from .measures import measure_report
from .sweep import (
    PRESETS,
    ResultRow,
    RunConfig,
    SweepError,
    emit_csv,
    format_alpha,
    format_number,
    run_sweep,
)

EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

# config/flag key -> RunConfig field
KEYS = {
    "preset": "preset",
    "f": "f",
    "T": "T",
    "alpha": "alpha",
    "omega": "omega",
    "p": "p",
    "tau-max": "tau_max",
    "tau-points": "tau_points",
    "integrator": "integrator",
    "workers": "workers",
    "output": "output",
}
LIST_KEYS = ("f", "T", "alpha", "omega", "p")


class ConfigError(ValueError):
    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")


def _number(key, text):
    try:
        x = float(text)
    except ValueError:
        raise ConfigError(key, f"malformed number {text!r}") from None
    if math.isnan(x):
        raise ConfigError(key, f"malformed number {text!r}")
    return x


def _parse_alpha(text):
    if text.strip().upper() in ("BD", "-INF"):
        return BUNCH_DAVIES
    return _number("alpha", text)


def _parse_list(key, text):
    items = [s.strip() for s in str(text).split(",")]
    if not items or any(s == "" for s in items):
        raise ConfigError(key, f"empty value in list {text!r}")
    parse = _parse_alpha if key == "alpha" else (lambda s: _number(key, s))
    return tuple(parse(s) for s in items)


def _parse_int(key, text):
    try:
        return int(str(text).strip())
    except ValueError:
        raise ConfigError(key, f"malformed integer {text!r}") from None


def read_config_file(path):
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from None
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("config", f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("_", "-")
        if key not in KEYS:
            raise ConfigError(key, f"unknown key in {path}")
        values[key] = value
    return values


def _validate(cfg):
    for key in LIST_KEYS:
        if not getattr(cfg, key):
            raise ConfigError(key, "empty list")
    for f in cfg.f:
        if not 0 <= f <= F_MAX + 1e-15:
            raise ConfigError("f", f"{f!r} outside [0, 1/3]")
    for T in cfg.T:
        if not (T > 0 and math.isfinite(T)):
            raise ConfigError("T", f"temperature must be positive, got {T!r}")
    for w in cfg.omega:
        if not (w > 0 and math.isfinite(w)):
            raise ConfigError("omega", f"omega must be positive, got {w!r}")
    for a in cfg.alpha:
        try:
            BathParams(omega=1.0, temperature=1.0, alpha=a)
        except DomainError as exc:
            raise ConfigError("alpha", str(exc)) from None
    for p in cfg.p:
        if not 0 <= p < 1:
            raise ConfigError("p", f"{p!r} outside [0, 1)")
    if cfg.tau_max is not None and not (cfg.tau_max > 0 and math.isfinite(cfg.tau_max)):
        raise ConfigError("tau-max", f"must be positive, got {cfg.tau_max!r}")
    if cfg.tau_points < 2:
        raise ConfigError("tau-points", f"must be >= 2, got {cfg.tau_points}")
    if cfg.integrator not in ("rk4", "rk45"):
        raise ConfigError("integrator", f"unknown integrator {cfg.integrator!r}")
    if cfg.workers < 1:
        raise ConfigError("workers", f"must be >= 1, got {cfg.workers}")
    return cfg


def _apply(cfg, key, value):
    name = KEYS[key]
    if key == "preset":
        if value not in PRESETS:
            raise ConfigError("preset", f"unknown preset {value!r} (choose from {', '.join(PRESETS)})")
        return replace(cfg, preset=value, **PRESETS[value])
    if key in LIST_KEYS:
        return replace(cfg, **{name: _parse_list(key, value)})
    if key == "tau-max":
        return replace(cfg, tau_max=_number(key, value))
    if key in ("tau-points", "workers"):
        return replace(cfg, **{name: _parse_int(key, value)})
    return replace(cfg, **{name: str(value)})


def build_config(flags, config_path=None):
    """Merge preset, config file and flags (in increasing precedence)."""
    file_values = read_config_file(config_path) if config_path else {}
    merged = {**file_values, **{k: v for k, v in flags.items() if v is not None}}
    cfg = RunConfig()
    if "preset" in merged:
        cfg = _apply(cfg, "preset", merged.pop("preset"))
    for key, value in merged.items():
        cfg = _apply(cfg, key, value)
    return _validate(cfg)


def _add_grid_options(parser):
    g = parser.add_argument_group("parameters (comma-separated lists allowed)")
    g.add_argument("--preset", help=f"one of {', '.join(PRESETS)}")
    g.add_argument("--f", help="initial-state mixing parameter in [0, 1/3]")
    g.add_argument("--T", help="Gibbons-Hawking temperature")
    g.add_argument("--alpha", help="alpha-vacuum parameter (< 0) or BD for Bunch-Davies")
    g.add_argument("--omega", help="qubit level spacing")
    g.add_argument("--p", help="weak measurement reversal strength in [0, 1)")
    g.add_argument("--tau-max", dest="tau_max", help="final proper time (default: 10/(4 A_min))")
    g.add_argument("--tau-points", dest="tau_points", help="number of tau samples (default 200)")
    g.add_argument("--integrator", help="rk4 (default) or rk45")
    g.add_argument("--workers", help="worker processes for the sweep")
    g.add_argument("--config", help="flat 'key = value' file; flags take precedence")
    g.add_argument("-o", "--output", help="output CSV path, '-' for stdout")


_VALUE_OPTIONS = {"--" + k for k in KEYS} | {"--config", "--ell"}


def _attach_values(argv):
    # "--alpha -1e-3" would otherwise be read as two options
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith("-") and argv[i + 1] not in _VALUE_OPTIONS:
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def parse_config(argv):
    """Parse ``[subcommand] options...`` into ``(subcommand, RunConfig, extras)``."""
    parser = make_parser()
    args = parser.parse_args(_attach_values(list(argv)))
    flags = {key: getattr(args, name, None) for key, name in KEYS.items()}
    if args.command == "coeffs" and args.ell is not None:
        ells = _parse_list("ell", args.ell)
        try:
            flags["T"] = ",".join(repr(gibbons_hawking_temperature(l)) for l in ells)
        except DomainError as exc:
            raise ConfigError("ell", str(exc)) from None
    cfg = build_config(flags, args.config)
    return args.command, cfg, args


def make_parser():
    parser = argparse.ArgumentParser(
        prog="alphavac",
        description="Entropic uncertainty of a qutrit-qubit pair in de Sitter alpha-vacua.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("coeffs", help="dissipator coefficients A, B")
    _add_grid_options(p)
    p.add_argument("--ell", help="curvature radius (sets T = 1/(2 pi ell))")
    p = sub.add_parser("evolve", help="integrate one trajectory numerically")
    _add_grid_options(p)
    p.add_argument("--full-state", action="store_true", help="dump all 36 entries as re/im columns")
    p = sub.add_parser("measures", help="measures along one trajectory")
    _add_grid_options(p)
    p = sub.add_parser("sweep", help="measures over a parameter grid")
    _add_grid_options(p)
    p = sub.add_parser("equilibrium", help="measures of the stationary state")
    _add_grid_options(p)
    return parser


def _single(cfg):
    for key in LIST_KEYS:
        if len(getattr(cfg, key)) != 1:
            raise ConfigError(key, "this subcommand takes a single value")
    return cfg.f[0], cfg.T[0], cfg.alpha[0], cfg.omega[0], cfg.p[0]


def _write_table(header, records, destination):
    lines = [",".join(header)] + [",".join(r) for r in records]
    payload = "\n".join(lines) + "\n"
    if destination == "-":
        sys.stdout.write(payload)
    else:
        with open(destination, "w", encoding="ascii", newline="\n") as fh:
            fh.write(payload)


def cmd_coeffs(cfg, args):
    records = []
    for T, a, w in sorted(cfg.coefficient_grid()):
        c = bath_coefficients(BathParams(omega=w, temperature=T, alpha=a))
        records.append([format_number(w), format_number(T), format_alpha(a), format_number(c.A), format_number(c.B)])
    _write_table(["omega", "T", "alpha", "A", "B"], records, cfg.output)


def cmd_evolve(cfg, args):
    f, T, a, w, p = _single(cfg)
    coeffs = bath_coefficients(BathParams(omega=w, temperature=T, alpha=a))
    times = cfg.times()
    rho0 = initial_state(f)
    if p:
        rho0 = weak_measurement_reversal(rho0, p)
    traj = evolve_numeric(rho0, coeffs, EvolutionConfig(float(times[-1]), len(times), integrator=cfg.integrator))
    if args.full_state:
        header = ["tau"] + [f"{part}_{i}_{j}" for i in range(6) for j in range(6) for part in ("re", "im")]
        records = [
            [format_number(tau)] + [format_number(getattr(z, part)) for z in rho.ravel() for part in ("real", "imag")]
            for tau, rho in traj
        ]
    else:
        header = ["tau"] + [f"rho_{k}_{k}" for k in range(6)]
        records = [[format_number(tau)] + [format_number(x) for x in np.diag(rho).real] for tau, rho in traj]
    _write_table(header, records, cfg.output)


def cmd_measures(cfg, args):
    _single(cfg)
    emit_csv(run_sweep(cfg), cfg.output)


def cmd_sweep(cfg, args):
    emit_csv(run_sweep(cfg), cfg.output)


def cmd_equilibrium(cfg, args):
    if any(p != 0 for p in cfg.p):
        raise ConfigError("p", "equilibrium is defined for the unfiltered family only (p = 0)")
    rows = []
    for f, T, a, w, p in cfg.grid():
        coeffs = bath_coefficients(BathParams(omega=w, temperature=T, alpha=a))
        r = measure_report(equilibrium_state(f, coeffs), math.inf)
        rows.append(ResultRow(f, T, a, w, p, math.inf, r.L, r.R, r.negativity, r.mixedness, r.purity))
    emit_csv(sorted(rows), cfg.output)


COMMANDS = {
    "coeffs": cmd_coeffs,
    "evolve": cmd_evolve,
    "measures": cmd_measures,
    "sweep": cmd_sweep,
    "equilibrium": cmd_equilibrium,
}


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        command, cfg, args = parse_config(argv)
        COMMANDS[command](cfg, args)
    except SystemExit as exc:  # argparse usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except ConfigError as exc:
        print(f"alphavac: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SweepError, ValidationError, IntegrationError, DomainError) as exc:
        print(f"alphavac: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"alphavac: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0
