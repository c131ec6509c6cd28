"""Command-line front end: each subcommand writes one CSV table (plus optional SVG).

Effective configuration = command defaults, overridden by ``--config`` file
entries (``key = value`` lines), overridden by command-line flags.
"""

import argparse
import datetime
import math
import os
import sys

import numpy as np

from . import __version__, dispersion, exceptional_masses, stationary_phase, svg
from .csvio import CsvTable, fmt, write_atomic
from .errors import ConfigError, DomainError, FloquetError
from .evolution import (
    MassModel,
    SpectralGrid,
    Wavepacket,
    auto_grid,
    check_grid_sufficiency,
    evolve,
    field_table,
    make_wavepacket,
)

PROG = "floquet-dirac"
DEFAULT_DELTA = 2.0
SWITCHING_N_LIST = tuple(128 * 2**k for k in range(8))
ROTATING_T_LIST = tuple(16 * 2**k for k in range(9))


def _float_list(text):
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    items = [v for v in str(text).replace(" ", "").split(",") if v]
    if not items:
        raise ValueError("empty list")
    return [float(v) for v in items]


def _complex_pair(text):
    if isinstance(text, (list, tuple)):
        vals = [complex(v) for v in text]
    else:
        vals = [complex(v.replace(" ", "").replace("i", "j")) for v in str(text).split(",")]
    if len(vals) != 2:
        raise ValueError("weights need exactly two components")
    return tuple(vals)


def _bool(text):
    if isinstance(text, bool):
        return text
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _choice(*options):
    def conv(text):
        if text not in options:
            raise ValueError(f"expected one of {options}, got {text!r}")
        return text
    return conv


# key -> (converter, flag help)
COMMON_KEYS = {
    "m": (float, "mass parameter m > 0"),
    "drive": (float, "drive frequency of the rotating model"),
    "delta": (float, "half-width of the packet's Fourier support"),
    "xi_center": (float, "centre of the packet's Fourier support"),
    "n_list": (_float_list, "comma-separated periods (switching) or times"),
    "omega_list": (_float_list, "comma-separated oscillation parameters"),
    "out": (str, "output CSV path (default: stdout)"),
    "format": (_choice("csv", "csv+svg"), "csv or csv+svg (svg next to --out)"),
    "no_timestamp": (_bool, "omit the timestamp footer line"),
}

COMMAND_KEYS = {
    "dispersion": {
        "mode": (_choice("fig1", "fig2"), "fig1: theta derivatives at 0 vs m; fig2: vs xi"),
        "m_max": (float, "largest mass (fig1)"),
        "m_step": (float, "mass spacing (fig1)"),
        "xi_max": (float, "largest xi (fig2)"),
        "xi_step": (float, "xi spacing (fig2)"),
    },
    "masses": {
        "m_max": (float, "search masses in (0, m_max]"),
    },
    "evolve": {
        "model": (_choice("constant", "switching", "rotating"), "mass model"),
        "n": (float, "periods (switching) or time"),
        "envelope": (_choice("bump", "truncated-gaussian"), "packet envelope"),
        "weights": (_complex_pair, "component weights, e.g. 1,0 or 1,0.5j"),
        "grid_n": (int, "spectral grid size (power of two; default automatic)"),
        "xi_max": (float, "spectral grid half-width (default automatic)"),
    },
    "decay-fit": {
        "model": (_choice("constant", "switching", "rotating"), "mass model"),
        "probe": (_choice("peak", "sup"), "peak at x_n = n s0, or smoothed sup norm"),
        "epsilon": (float, "extra smoothing order for the sup probe"),
        "envelope": (_choice("bump", "truncated-gaussian"), "packet envelope"),
        "weights": (_complex_pair, "component weights"),
    },
    "airy-check": {
        "order": (int, "degeneracy order, 3 or 5"),
        "lead": (float, "leading phase derivative (default 1 for order 3, 120 for order 5)"),
        "half_width": (float, "half-width of the bump amplitude"),
    },
    "inflections": {
        "xi_max": (float, "scan xi in (0, xi_max]"),
        "count": (int, "stop after this many roots"),
    },
}

COMMON_DEFAULTS = {
    "m": 1.0, "drive": 1.0, "delta": DEFAULT_DELTA, "xi_center": 0.0,
    "n_list": None, "omega_list": None, "out": None, "format": "csv",
    "no_timestamp": False,
}

COMMAND_DEFAULTS = {
    "dispersion": {"mode": "fig1", "m_max": 27.0, "m_step": 0.05, "xi_max": 60.0, "xi_step": 0.05},
    "masses": {"m_max": 27.0},
    "evolve": {"model": "switching", "n": 0.0, "envelope": "bump", "weights": (1 + 0j, 0j),
               "grid_n": None, "xi_max": None},
    "decay-fit": {"model": "switching", "probe": None, "epsilon": stationary_phase.ROTATING_EPSILON,
                  "envelope": "bump", "weights": (1 + 0j, 0j)},
    "airy-check": {"order": 3, "lead": None, "half_width": 1.0},
    "inflections": {"xi_max": 200.0, "count": None},
}


def _keys(command):
    return {**COMMON_KEYS, **COMMAND_KEYS[command]}


def read_config_file(path, command):
    """Parse ``key = value`` lines; unknown keys raise ConfigError."""
    known = _keys(command)
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in known:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r} for {command}")
        try:
            out[key] = known[key][0](value)
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return out


def build_parser():
    parser = argparse.ArgumentParser(prog=PROG, description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for command in COMMAND_KEYS:
        p = sub.add_parser(command, argument_default=argparse.SUPPRESS)
        p.add_argument("--config", help="file of 'key = value' lines")
        for key, (conv, text) in _keys(command).items():
            flag = "--" + key.replace("_", "-")
            if conv is _bool:
                p.add_argument(flag, action="store_true", help=text)
            else:
                p.add_argument(flag, type=conv, help=text)
    return parser


def resolve_config(args):
    command = args.command
    cfg = {**COMMON_DEFAULTS, **COMMAND_DEFAULTS[command]}
    given = vars(args).copy()
    given.pop("command")
    path = given.pop("config", None)
    if path:
        cfg.update(read_config_file(path, command))
    cfg.update(given)
    return cfg


def _geometric(values, what, minimum=2):
    v = np.asarray(values, dtype=float)
    if v.size < minimum or not np.all(v > 0) or not np.all(np.diff(v) > 0):
        raise ConfigError(f"{what} must hold at least {minimum} increasing positive values")
    if v.size > 2 and np.ptp(np.log(v[1:] / v[:-1])) > 1e-6:
        raise ConfigError(f"{what} must be geometrically spaced")
    return [float(x) for x in v]


def _packet(cfg):
    return Wavepacket(cfg["delta"], cfg["xi_center"], cfg.get("weights", (1, 0)),
                      cfg.get("envelope", "bump"))


def _model(cfg):
    kind = cfg["model"]
    if kind == "rotating":
        return MassModel.rotating(cfg["m"], cfg["drive"])
    return MassModel(kind, cfg["m"])


def cmd_dispersion(cfg):
    m_plot = None
    if cfg["mode"] == "fig1":
        if not (cfg["m_max"] > 0 and cfg["m_step"] > 0) or cfg["m_step"] > cfg["m_max"]:
            raise ConfigError("need 0 < m_step <= m_max")
        count = int(math.floor(cfg["m_max"] / cfg["m_step"] + 1e-9))
        ms = cfg["m_step"] * np.arange(1, count + 1)
        table = CsvTable(["m", "theta3_at_0", "theta5_at_0"])
        for m in ms:
            d = dispersion.theta_derivs_at_zero(m)
            table.add_row([m, d.d3, d.d5])
        m_plot = svg.plot([("theta'''(0; m)", list(ms), table.column("theta3_at_0"), "line")],
                          "theta'''(0; m)", "m", "theta'''(0)")
        return table, m_plot
    m = dispersion.check_mass(cfg["m"])
    if not (cfg["xi_max"] > 0 and cfg["xi_step"] > 0) or cfg["xi_step"] > cfg["xi_max"]:
        raise ConfigError("need 0 < xi_step <= xi_max")
    count = int(math.floor(cfg["xi_max"] / cfg["xi_step"] + 1e-9))
    xs = cfg["xi_step"] * np.arange(0, count + 1)
    d2 = dispersion.theta_derivative(xs, m, 2)
    d3 = dispersion.theta_derivative(xs, m, 3)
    table = CsvTable(["xi", "theta2", "theta3"])
    for row in zip(xs, d2, d3):
        table.add_row(row)
    plot = svg.plot([("theta''", list(xs), list(d2), "line"), ("theta'''", list(xs), list(d3), "line")],
                    f"derivatives of theta, m = {m:g}", "xi", "value")
    return table, plot


def cmd_masses(cfg):
    masses = exceptional_masses.find_exceptional_masses(cfg["m_max"])
    table = CsvTable(["k", "m_k", "residual", "scaled_d5", "asymptotic_gap"])
    for e in masses:
        table.add_row([e.k, e.m_k, e.residual, e.scaled_d5, e.asymptotic_gap])
    if len(masses) >= 2:
        fit = exceptional_masses.fifth_derivative_scaling(masses)
        table.footer.append(f"fifth_derivative_slope={fmt(fit.slope)} k0=0")
    mk = [e.m_k for e in masses]
    d5 = [abs(e.scaled_d5) / e.m_k**3 for e in masses]
    plot = svg.plot([("|theta^(5)(0; m_k)|", mk, d5, "points")], "exceptional masses",
                    "m_k", "|theta^(5)(0; m_k)|", logx=True, logy=True)
    return table, plot


def cmd_evolve(cfg):
    model = _model(cfg)
    packet = _packet(cfg)
    extent = cfg["n"]
    if model.kind == "switching":
        if extent != int(extent) or extent < 0:
            raise ConfigError("--n must be a non-negative integer for the switching model")
        extent = int(extent)
    elif extent < 0:
        raise ConfigError("--n must be non-negative")
    if (cfg["grid_n"] is None) != (cfg["xi_max"] is None):
        raise ConfigError("give both --grid-n and --xi-max, or neither")
    grid = SpectralGrid(cfg["xi_max"], cfg["grid_n"]) if cfg["grid_n"] else auto_grid(packet, model, extent)
    field = make_wavepacket(packet, grid)
    sup, grid = check_grid_sufficiency(packet, model, extent, grid)
    out = evolve(field, model, extent)
    table = CsvTable(["x", "re_a1", "im_a1", "re_a2", "im_a2"])
    data = field_table(out)
    for row in data:
        table.add_row(row)
    table.footer.append(f"l2_norm={fmt(out.l2_norm())}")
    table.footer.append(f"sup_norm={fmt(sup)} grid_n={grid.n} xi_max={fmt(grid.xi_max)}")
    amp = np.hypot(np.hypot(data[:, 1], data[:, 2]), np.hypot(data[:, 3], data[:, 4]))
    plot = svg.plot([("|alpha(x)|", list(data[:, 0]), list(amp), "line")],
                    f"{model.kind} model, extent {extent}", "x", "|alpha|")
    return table, plot


def cmd_decay_fit(cfg):
    model = _model(cfg)
    packet = _packet(cfg)
    default = SWITCHING_N_LIST if model.kind == "switching" else ROTATING_T_LIST
    ns = _geometric(cfg["n_list"] or default, "--n-list", minimum=5)
    cfg["n_list"] = ns
    fit = stationary_phase.fit_decay(model, packet, ns, cfg["probe"], cfg["epsilon"])
    cfg["probe"] = fit.probe
    table = CsvTable(["n", "amplitude", "predicted"])
    for row in zip(fit.n_values, fit.amplitudes, fit.predicted):
        table.add_row(row)
    table.footer.append(f"exponent={fmt(fit.exponent)} stderr={fmt(fit.stderr)} r2={fmt(fit.r_squared)}")
    table.footer.append(f"intercept={fmt(fit.intercept)} probe={fit.probe} discarded={fit.discarded}")
    series = [("amplitude", fit.n_values, fit.amplitudes, "points")]
    if not all(math.isnan(p) for p in fit.predicted):
        series.append(("predicted", fit.n_values, fit.predicted, "line"))
    plot = svg.plot(series, f"decay, {model.kind} model, m = {model.m:g}", "n", "amplitude",
                    logx=True, logy=True)
    return table, plot


def cmd_airy_check(cfg):
    if cfg["order"] not in (3, 5):
        raise ConfigError("--order must be 3 or 5")
    omegas = _geometric(cfg["omega_list"] or [1e2, 1e3, 1e4], "--omega-list")
    cfg["omega_list"] = omegas
    if not cfg["half_width"] > 0:
        raise ConfigError("--half-width must be positive")
    if cfg["lead"] is not None and cfg["lead"] == 0:
        raise ConfigError("--lead must be nonzero")
    rows = stationary_phase.model_phase_check(cfg["order"], omegas, cfg["lead"], cfg["half_width"])
    table = CsvTable(["omega", "quadrature_abs", "asymptotic_abs", "rel_error"])
    for r in rows:
        table.add_row([r.omega, r.quadrature_abs, r.asymptotic_abs, r.rel_error])
    errs = [r.rel_error for r in rows]
    if len(rows) >= 2 and min(errs) > 0:
        order = -stationary_phase.fit_loglog(omegas, errs, discard=0)[0]
        table.footer.append(f"remainder_order={fmt(order)}")
    plot = svg.plot([("relative error", omegas, errs, "points")],
                    f"order-{cfg['order']} leading term vs quadrature", "omega", "relative error",
                    logx=True, logy=True)
    return table, plot


def cmd_inflections(cfg):
    scan = exceptional_masses.inflection_scan(cfg["m"], cfg["xi_max"], cfg["count"])
    table = CsvTable(["l", "xi_l", "theta3_at_root", "theta2_residual"])
    for p in scan.points:
        table.add_row([p.l, p.xi_l, p.d3_at_root, p.d2_residual])
    table.footer.append(f"slope={fmt(scan.slope)} truncated={str(scan.truncated).lower()}")
    xs = [p.xi_l for p in scan.points]
    ys = [abs(p.d3_at_root) for p in scan.points]
    plot = svg.plot([("|theta'''(xi_l)|", xs, ys, "points")], f"inflection points, m = {scan.m:g}",
                    "xi_l", "|theta'''(xi_l)|", logx=True, logy=True)
    return table, plot


COMMANDS = {
    "dispersion": cmd_dispersion,
    "masses": cmd_masses,
    "evolve": cmd_evolve,
    "decay-fit": cmd_decay_fit,
    "airy-check": cmd_airy_check,
    "inflections": cmd_inflections,
}


def _config_footer(cfg):
    parts = []
    for key in sorted(cfg):
        v = cfg[key]
        if isinstance(v, (list, tuple)):
            v = ",".join(str(x) if isinstance(x, complex) else fmt(x) for x in v)
        elif isinstance(v, float):
            v = fmt(v)
        parts.append(f"{key}={v}")
    return "config: " + " ".join(parts)


def run(argv=None):
    """Execute one command; returns the rendered CSV text."""
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    cfg = resolve_config(args)
    if cfg["format"] == "csv+svg" and not cfg["out"]:
        raise ConfigError("--format csv+svg needs --out")
    table, plot = COMMANDS[args.command](cfg)
    table.footer.append("command: " + " ".join([PROG] + argv))
    table.footer.append(f"version: {__version__}")
    if not cfg["no_timestamp"]:
        stamp = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
        table.footer.append(f"timestamp: {stamp}")
    table.footer.append(_config_footer(cfg))
    text = table.render()
    if cfg["out"]:
        write_atomic(cfg["out"], text)
        if cfg["format"] == "csv+svg":
            write_atomic(os.path.splitext(cfg["out"])[0] + ".svg", plot)
    else:
        sys.stdout.write(text)
    return text


def main(argv=None):
    try:
        run(argv)
    except FloquetError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return DomainError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
