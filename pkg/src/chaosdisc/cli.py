"""Command-line front end: one subcommand per figure-style data product.

Every output starts with a header that echoes the effective configuration;
feeding that configuration back through ``--config`` reproduces the file
byte for byte.
"""
from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import __version__
from .bloch import ObservableAxis, QubitArray, SpherePoint, pair_at_delta, to_state
from .circuit import resource_estimate, success_probability_array, verify_circuit
from .correlations import LGI_TOL, LUDERS_BOUND, faulty_axis, k3_ensemble
from .dynamics import MapParams
from .ensemble import EnsembleSpec, average_fidelity_vs_iteration, critical_iteration, rxy_vs_iteration
from .errors import ChaosDiscError, NotReached
from .fractal import box_dimension, julia_raster
from .protocol import (
    NOT_REACHED,
    fatou_band_ensemble,
    fatou_straddle_ensemble,
    machine_precision_probe,
    patch_success_optimization,
    resolution_heatmap,
    strategy_a_run,
    strategy_b_discriminate,
)

PROG = "chaosdisc"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# Parsers for flag values
# ---------------------------------------------------------------------------

_S_RE = re.compile(r"^([+-]?)(\d*\.?\d*(?:e[+-]?\d+)?)?([ij])$")


def parse_s(text: str) -> complex:
    """'i', '-i', '0.5i', '0.25j', '1+0.5i', '0' -> complex."""
    t = str(text).strip().lower().replace(" ", "")
    if not t:
        raise ValueError("empty value for s")
    m = _S_RE.match(t)
    if m and not m.group(2):
        return complex(0, -1 if m.group(1) == "-" else 1)
    t = re.sub(r"(^|[+-])([ij])$", r"\g<1>1j", t).replace("i", "j")
    return complex(t)


def format_s(s: complex) -> str:
    s = complex(s)
    if s.real == 0:
        return "0" if s.imag == 0 else f"{s.imag!r}i"
    return f"{s.real!r}{s.imag:+}i" if s.imag else repr(s.real)


def parse_range(text: str) -> list[int]:
    """'4-16' or '1,2,5' -> list of ints."""
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if re.fullmatch(r"\d+-\d+", part):
            lo, hi = map(int, part.split("-"))
            if hi < lo:
                raise ValueError(f"empty range {part}")
            out.extend(range(lo, hi + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise ValueError("empty list")
    return out


def parse_floats(text: str, n: int | None = None) -> list[float]:
    vals = [float(v) for v in str(text).split(",") if v.strip()]
    if n is not None and len(vals) != n:
        raise ValueError(f"expected {n} comma-separated numbers")
    return vals


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------


@dataclass
class RunConfig:
    command: str = "rxy"
    s: str = "i"
    delta: float = 0.1
    digits: str = "1-8"
    ensemble: int = 10_000
    sampling: str = "uniform"
    region: str = "whole"
    theta_max: float = math.pi / 10
    axis_theta: float = math.pi / 2
    axis_phi: float = 0.0
    dtheta: float = 0.0
    dphi: float = 0.0
    theta: float = 1.0
    phi: float = 0.5
    n_max: int = 100
    threshold: float = 1e-2
    epsilon: float = 0.05
    window: int = 10
    population: str = "band"
    snapshots: str = "0,15,30,60"
    states: int = 1
    precisions: str = "standard,extended"
    resolution: int = 1024
    horizon: int = 200
    lyapunov: float = 0.0
    tail: int = 8
    plane: str = "-2,2,-2,2"
    samples: int = 1000
    points: int = 33
    steps: int = 10
    precision: str = "extended"
    seed: int = 0
    format: str = "csv"
    out: str = "-"
    threads: int = 0


# flag name -> (config field, converter, help)
FLAGS: dict[str, tuple[str, Callable, str]] = {
    "--s": ("s", lambda v: format_s(parse_s(v)), "map parameter, e.g. i, 0.5i, 0"),
    "--delta": ("delta", float, "pair separation (radians)"),
    "--digits": ("digits", lambda v: ",".join(map(str, parse_range(v))), "p values, e.g. 1-8 or 4,8,12"),
    "--ensemble": ("ensemble", int, "ensemble size L"),
    "--sampling": ("sampling", str, "grid | angle-grid | uniform"),
    "--region": ("region", str, "whole | patch"),
    "--theta-max": ("theta_max", float, "patch colatitude bound"),
    "--axis-theta": ("axis_theta", float, "measurement axis colatitude"),
    "--axis-phi": ("axis_phi", float, "measurement axis azimuth"),
    "--dtheta": ("dtheta", float, "axis colatitude error"),
    "--dphi": ("dphi", float, "axis azimuth error"),
    "--theta": ("theta", float, "state colatitude"),
    "--phi": ("phi", float, "state azimuth"),
    "--n-max": ("n_max", int, "last iteration"),
    "--threshold": ("threshold", float, "|Delta K3| distinguishability threshold"),
    "--epsilon": ("epsilon", float, "|r_xy| saturation level"),
    "--window": ("window", int, "consecutive iterations below epsilon"),
    "--population": ("population", str, "band | straddle"),
    "--snapshots": ("snapshots", lambda v: ",".join(map(str, parse_range(v))), "histogram iterations"),
    "--states": ("states", int, "number of random initial states"),
    "--precisions": ("precisions", str, "comma list of standard,extended"),
    "--resolution": ("resolution", int, "pixels (or cells) per axis"),
    "--horizon": ("horizon", int, "orbit length N for the separation exponent"),
    "--lyapunov": ("lyapunov", float, "separation exponent threshold"),
    "--tail": ("tail", int, "trailing steps scanned for the separation"),
    "--plane": ("plane", lambda v: ",".join(repr(x) for x in parse_floats(v, 4)), "xmin,xmax,ymin,ymax"),
    "--samples": ("samples", int, "random states tested"),
    "--points": ("points", int, "colatitude samples"),
    "--steps": ("steps", int, "iterations for the resource estimate"),
}

GLOBAL_FLAGS: dict[str, tuple[str, Callable, str]] = {
    "--precision": ("precision", str, "standard | extended"),
    "--seed": ("seed", int, "random seed"),
    "--format": ("format", str, "csv | json (julia also: pgm)"),
    "--out": ("out", str, "output path, - for stdout"),
    "--threads": ("threads", int, "cap on worker threads (0 = default)"),
}

NOT_ECHOED = {"out", "threads"}
_CONVERTERS = {dest: conv for dest, conv, _ in list(FLAGS.values()) + list(GLOBAL_FLAGS.values())}


@dataclass
class Output:
    columns: list[str]
    rows: list[tuple]
    summary: dict = field(default_factory=dict)
    raw: bytes | None = None


@dataclass
class Command:
    help: str
    flags: list[str]
    defaults: dict
    run: Callable[[RunConfig], Output]


def _params(cfg: RunConfig) -> MapParams:
    return MapParams(parse_s(cfg.s))


def _axis(cfg: RunConfig) -> ObservableAxis:
    return ObservableAxis(cfg.axis_theta, cfg.axis_phi)


def _random_states(n: int, seed: int) -> QubitArray:
    rng = np.random.default_rng(seed)
    u = rng.uniform(-1.0, 1.0, n)
    ph = rng.uniform(0.0, 2 * np.pi, n)
    return QubitArray.from_sphere(np.arccos(u), ph)


def _crit(r, cfg) -> int:
    try:
        return critical_iteration(r, cfg.epsilon, cfg.window)
    except NotReached:
        return NOT_REACHED


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def run_fidelity_fatou(cfg: RunConfig) -> Output:
    ens = fatou_straddle_ensemble(cfg.delta, cfg.ensemble)
    res = strategy_a_run(ens, cfg.n_max, _params(cfg), cfg.precision, snapshots=(cfg.n_max,))
    below = np.flatnonzero(res.mean_fidelity < 1e-3)
    summary = {"first_n_below_1e-3": int(below[0]) if len(below) else NOT_REACHED}
    return Output(["n", "mean_fidelity", "std_fidelity"], list(zip(res.n, res.mean_fidelity, res.std_fidelity)), summary)


def _spec(cfg: RunConfig, delta: float) -> EnsembleSpec:
    region = cfg.region
    return EnsembleSpec(
        size=cfg.ensemble, delta=delta, region=region, theta_max=cfg.theta_max if region == "patch" else math.pi,
        sampling=cfg.sampling, seed=cfg.seed,
    )


def run_rxy(cfg: RunConfig) -> Output:
    params, axis = _params(cfg), _axis(cfg)
    series = rxy_vs_iteration(_spec(cfg, cfg.delta), axis, params, cfg.n_max, cfg.precision)
    summary = {"critical_iteration": _crit(series.r, cfg), "zero_variance": series.zero_variance}
    return Output(["n", "r_xy"], list(zip(series.n, series.r)), summary)


def run_rxy_inset(cfg: RunConfig) -> Output:
    params, axis = _params(cfg), _axis(cfg)
    rows = []
    for p in parse_range(cfg.digits):
        series = rxy_vs_iteration(_spec(cfg, 10.0**-p), axis, params, cfg.n_max, cfg.precision)
        rows.append((p, 10.0**-p, _crit(series.r, cfg)))
    ok = [(p, n) for p, _, n in rows if n != NOT_REACHED]
    summary = {}
    if len(ok) >= 2:
        x, y = np.array(ok, dtype=float).T
        slope, icpt = np.polyfit(x, y, 1)
        resid = y - (slope * x + icpt)
        ss = ((y - y.mean()) ** 2).sum()
        summary = {"slope": slope, "intercept": icpt, "r2": 1 - (resid @ resid) / ss if ss > 0 else 1.0}
    return Output(["p", "delta", "critical_iteration"], rows, summary)


def run_patch(cfg: RunConfig) -> Output:
    res = patch_success_optimization(
        cfg.theta_max, cfg.delta, _axis(cfg), _params(cfg), cfg.n_max, cfg.ensemble, cfg.seed,
        cfg.precision, cfg.epsilon, cfg.window,
    )
    nc = res.critical_iteration
    summary = {
        "critical_iteration": NOT_REACHED if nc is None else nc,
        "min_success": res.min_success,
        "cumulative_bound": res.cumulative_bound,
        "mean_cumulative_success": res.mean_cumulative_success,
    }
    return Output(["n", "r_xy"], list(zip(res.rxy.n, res.rxy.r)), summary)


def run_k3_faulty(cfg: RunConfig) -> Output:
    axis = faulty_axis((cfg.dtheta, cfg.dphi), _axis(cfg))
    states = _random_states(cfg.states, cfg.seed)
    k = k3_ensemble(states, axis, _params(cfg), cfg.n_max, cfg.precision)
    K = k.k3[:, 1:]
    lgi = np.abs(K) > 1 + LGI_TOL
    lud = K > LUDERS_BOUND + LGI_TOL
    n = np.arange(1, cfg.n_max + 1)
    summary = {
        "states_violating_lgi": float(lgi.any(axis=1).mean()),
        "states_violating_luders": float(lud.any(axis=1).mean()),
    }
    if cfg.states == 1:
        rows = list(zip(n, k.c12[0, 1:], k.c23[0, 1:], k.c13[0, 1:], K[0], lgi[0], lud[0]))
        return Output(["n", "C12", "C23", "C13", "K3", "lgi_violation", "luders_violation"], rows, summary)
    rows = list(zip(n, K.min(axis=0), K.max(axis=0), lgi.mean(axis=0), lud.mean(axis=0)))
    return Output(["n", "min_k3", "max_k3", "lgi_fraction", "luders_fraction"], rows, summary)


def run_k3_diff(cfg: RunConfig) -> Output:
    pair = pair_at_delta(SpherePoint(cfg.theta, cfg.phi), cfg.delta)
    v = strategy_b_discriminate(pair, _axis(cfg), _params(cfg), cfg.n_max, cfg.threshold, cfg.precision)
    summary = {
        "distinguishable": v.distinguishable,
        "first_nonzero_iteration": NOT_REACHED if v.first_nonzero_iteration is None else v.first_nonzero_iteration,
    }
    n = np.arange(1, cfg.n_max + 1)
    return Output(["n", "delta_k3"], list(zip(n, v.k3_difference_series)), summary)


def run_heatmap(cfg: RunConfig) -> Output:
    H = resolution_heatmap(cfg.delta, _axis(cfg), _params(cfg), cfg.resolution, cfg.n_max, cfg.threshold, cfg.precision)
    rows = [(H.x[i], H.y[j], H.counts[j, i]) for j in range(len(H.y)) for i in range(len(H.x))]
    summary = {"not_reached": -1, "outside_disk": -2, "fixed_point": [1.0, 0.0]}
    return Output(["x", "y", "count"], rows, summary)


def run_histogram(cfg: RunConfig) -> Output:
    if cfg.population == "band":
        ens = fatou_band_ensemble(cfg.delta, cfg.ensemble, cfg.seed)
    elif cfg.population == "straddle":
        ens = fatou_straddle_ensemble(cfg.delta, cfg.ensemble)
    else:
        raise UsageError("--population must be band or straddle")
    snaps = tuple(k for k in parse_range(cfg.snapshots) if k <= cfg.n_max)
    res = strategy_a_run(ens, cfg.n_max, _params(cfg), cfg.precision, snapshots=snaps)
    e = res.bin_edges
    rows = [(k, e[b], e[b + 1], res.histograms[k][b]) for k in sorted(res.histograms) for b in range(len(e) - 1)]
    summary = {"straddling_fraction": float(res.straddle.mean())}
    return Output(["n", "bin_lo", "bin_hi", "fraction"], rows, summary)


def run_probe(cfg: RunConfig) -> Output:
    precs = [p.strip() for p in cfg.precisions.split(",") if p.strip()]
    rows = machine_precision_probe(parse_range(cfg.digits), precs, _params(cfg), cfg.n_max)
    out = [(r.digits, r.delta, r.precision, NOT_REACHED if r.critical_iteration is None else r.critical_iteration) for r in rows]
    return Output(["digits", "delta", "precision", "critical_iteration"], out)


def _raster(cfg: RunConfig):
    return julia_raster(
        _params(cfg), tuple(parse_floats(cfg.plane, 4)), cfg.resolution, cfg.horizon, cfg.lyapunov, cfg.tail
    )


def run_julia(cfg: RunConfig) -> Output:
    R = _raster(cfg)
    summary = {"marked_fraction": R.fraction}
    if cfg.format == "pgm":
        return Output([], [], summary, raw=R.to_pgm())
    xs, ys = R.centres()
    j, i = np.nonzero(R.mask)
    return Output(["x", "y"], list(zip(xs[i], ys[j])), summary)


def run_boxdim(cfg: RunConfig) -> Output:
    B = box_dimension(_raster(cfg))
    summary = {"dimension": B.dimension, "r2": B.r2}
    px = np.rint(B.scales * cfg.resolution).astype(int)
    return Output(["scale", "box_pixels", "occupied", "residual"], list(zip(B.scales, px, B.counts, B.residuals)), summary)


def run_fidelity_avg(cfg: RunConfig) -> Output:
    mean, std = average_fidelity_vs_iteration(_spec(cfg, cfg.delta), _params(cfg), cfg.n_max, cfg.precision)
    return Output(["n", "mean_fidelity", "std_fidelity"], list(zip(range(len(mean)), mean, std)))


def run_circuit_verify(cfg: RunConfig) -> Output:
    rep = verify_circuit(cfg.samples, _params(cfg), cfg.seed)
    cols = ["samples", "max_projective_deviation", "max_probability_deviation", "gate_unitary"]
    return Output(cols, [tuple(rep[c] for c in cols)])


def run_success_prob(cfg: RunConfig) -> Output:
    params = _params(cfg)
    th = np.linspace(0.0, math.pi, cfg.points)
    p = success_probability_array(QubitArray.from_sphere(th, np.zeros_like(th)), params)
    m = 100
    tg = np.arccos(1 - 2 * (np.arange(m) + 0.5) / m)
    grid = QubitArray.from_sphere(np.repeat(tg, m), np.tile(2 * np.pi * (np.arange(m) + 0.5) / m, m))
    rep = resource_estimate(to_state(SpherePoint(cfg.theta, cfg.phi)), params, cfg.steps, cfg.precision)
    summary = {"sphere_average": float(success_probability_array(grid, params).mean()), "resource": rep.resource}
    return Output(["theta", "p_success"], list(zip(th, p)), summary)


COMMON = ["--s", "--n-max"]
ENS = ["--delta", "--ensemble", "--sampling", "--region", "--theta-max", "--axis-theta", "--axis-phi"]
COMMANDS: dict[str, Command] = {
    "fidelity-fatou": Command(
        "mean pair fidelity for equator-straddling pairs", ["--s", "--n-max", "--delta", "--ensemble"],
        {"s": "0", "n_max": 60, "ensemble": 1000}, run_fidelity_fatou,
    ),
    "rxy": Command(
        "r_xy between K3 of base and partner ensembles per iteration",
        COMMON + ENS + ["--epsilon", "--window"], {}, run_rxy,
    ),
    "rxy-inset": Command(
        "critical iteration against p = -log10(delta)",
        COMMON + ENS[1:] + ["--digits", "--epsilon", "--window"], {}, run_rxy_inset,
    ),
    "patch-optimize": Command(
        "r_xy and success probability for a polar patch",
        COMMON + ["--delta", "--ensemble", "--theta-max", "--axis-theta", "--axis-phi", "--epsilon", "--window"],
        {"delta": 1e-8, "seed": 1}, run_patch,
    ),
    "k3-faulty": Command(
        "K3 series with a misaligned measurement axis",
        COMMON + ["--axis-theta", "--axis-phi", "--dtheta", "--dphi", "--states"],
        {"dphi": 1e-8}, run_k3_faulty,
    ),
    "k3-diff": Command(
        "K3 difference of a pair and the distinguishability verdict",
        COMMON + ["--theta", "--phi", "--delta", "--axis-theta", "--axis-phi", "--threshold"], {}, run_k3_diff,
    ),
    "heatmap": Command(
        "first distinguishable iteration over the unit disk",
        COMMON + ["--delta", "--resolution", "--threshold", "--axis-theta", "--axis-phi"],
        {"resolution": 101}, run_heatmap,
    ),
    "histogram-fatou": Command(
        "population histogram of |theta1 - theta2|/pi",
        COMMON + ["--delta", "--ensemble", "--population", "--snapshots"],
        {"s": "0", "n_max": 60, "ensemble": 1000}, run_histogram,
    ),
    "precision-probe": Command(
        "iterations until a 10^-p pair separates, per working precision",
        COMMON + ["--digits", "--precisions"], {"s": "0", "n_max": 200, "digits": "4-16"}, run_probe,
    ),
    "julia": Command(
        "Julia-set raster", ["--s", "--resolution", "--horizon", "--lyapunov", "--tail", "--plane"],
        {"format": "pgm"}, run_julia,
    ),
    "boxdim": Command(
        "box-counting dimension of the Julia raster",
        ["--s", "--resolution", "--horizon", "--lyapunov", "--tail", "--plane"], {}, run_boxdim,
    ),
    "fidelity-avg": Command(
        "ensemble-average pair fidelity per iteration", COMMON + ENS[:5], {"sampling": "grid"}, run_fidelity_avg,
    ),
    "circuit-verify": Command(
        "compare the ancilla circuit with the map on random states", ["--s", "--samples"], {}, run_circuit_verify,
    ),
    "success-prob": Command(
        "post-selection success probability and copy resource",
        ["--s", "--points", "--theta", "--phi", "--steps"], {}, run_success_prob,
    ),
}


# ---------------------------------------------------------------------------
# Parsing and output
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _flag_type(flag: str, conv: Callable):
    def convert(text):
        try:
            return conv(text)
        except (ValueError, TypeError) as exc:
            raise argparse.ArgumentTypeError(f"invalid value {text!r} for {flag}: {exc}") from None

    convert.__name__ = flag.lstrip("-")
    return convert


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=PROG, description="Chaos-assisted discrimination of nearby qubit states.")
    parser.add_argument("--version", action="version", version=f"{PROG} {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    for name, cmd in COMMANDS.items():
        p = sub.add_parser(name, help=cmd.help, description=cmd.help, argument_default=argparse.SUPPRESS)
        p.add_argument("--config", metavar="FILE", help="JSON RunConfig; flags override its values")
        for flag in cmd.flags:
            dest, conv, hlp = FLAGS[flag]
            p.add_argument(flag, dest=dest, type=_flag_type(flag, conv), help=hlp)
        for flag, (dest, conv, hlp) in GLOBAL_FLAGS.items():
            p.add_argument(flag, dest=dest, type=_flag_type(flag, conv), help=hlp)
    return parser


def _allowed(name: str) -> set[str]:
    cmd = COMMANDS[name]
    return {FLAGS[f][0] for f in cmd.flags} | {v[0] for v in GLOBAL_FLAGS.values()} | {"command"}


def resolve_config(name: str, given: dict, config_path: str | None) -> RunConfig:
    allowed = _allowed(name)
    values = dict(COMMANDS[name].defaults)
    if config_path:
        try:
            with open(config_path) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {config_path}: {exc}") from None
        if not isinstance(loaded, dict):
            raise UsageError("config file must hold a JSON object")
        unknown = sorted(set(loaded) - allowed)
        if unknown:
            raise UsageError(f"config keys not valid for {name}: {', '.join(unknown)}")
        if loaded.get("command", name) != name:
            raise UsageError(f"config is for command {loaded['command']!r}, not {name!r}")
        values.update(loaded)
    values.update(given)
    values["command"] = name
    # route every value through its flag converter so echoed configs are canonical
    defaults = asdict(RunConfig())
    for k in allowed - {"command"}:
        v = values.get(k, defaults[k])
        try:
            values[k] = _CONVERTERS[k](str(v))
        except (ValueError, TypeError) as exc:
            raise UsageError(f"config field {k}: {exc}") from None
    cfg = RunConfig(**values)
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig):
    if cfg.precision not in ("standard", "extended"):
        raise UsageError("--precision must be standard or extended")
    formats = ("csv", "json", "pgm") if cfg.command == "julia" else ("csv", "json")
    if cfg.format not in formats:
        raise UsageError(f"--format must be one of {', '.join(formats)}")
    if cfg.threads < 0:
        raise UsageError("--threads must be >= 0")
    allowed = _allowed(cfg.command)
    if {"window", "n_max"} <= allowed and cfg.n_max < cfg.window:
        raise UsageError("--n-max must be at least --window")


def echoed_config(cfg: RunConfig) -> dict:
    allowed = _allowed(cfg.command) - NOT_ECHOED
    return {k: v for k, v in sorted(asdict(cfg).items()) if k in allowed}


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "nan" if math.isnan(v) else f"{float(v):.17g}"
    if v is None:
        return ""
    return str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return None if not math.isfinite(v) else float(v)
    return v


def render(cfg: RunConfig, out: Output) -> bytes:
    conf = json.dumps(echoed_config(cfg), sort_keys=True, separators=(",", ":"))
    header = [f"{PROG} {__version__}", f"command: {cfg.command}", f"config: {conf}"]
    header += [f"{k}: {json.dumps(_jsonable(v))}" for k, v in out.summary.items()]
    if out.raw is not None:
        # PGM: comments go after the magic number
        magic, rest = out.raw.split(b"\n", 1)
        return magic + b"\n" + "".join(f"# {h}\n" for h in header).encode() + rest
    if cfg.format == "json":
        doc = {
            "meta": {"program": PROG, "version": __version__, "command": cfg.command, "config": echoed_config(cfg)},
            "summary": _jsonable(out.summary),
            "columns": out.columns,
            "rows": _jsonable(out.rows),
        }
        return (json.dumps(doc, indent=1) + "\n").encode()
    lines = [f"# {h}" for h in header]
    lines.append(",".join(out.columns))
    lines += [",".join(_cell(v) for v in row) for row in out.rows]
    return ("\n".join(lines) + "\n").encode()


def _set_threads(n: int):
    if n > 0:
        import numba

        numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))


def run_command(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        ns = vars(parser.parse_args(argv))
        name = ns.pop("command", None)
        if name is None:
            parser.print_help(sys.stderr)
            return 2
        cfg = resolve_config(name, ns, ns.pop("config", None) if "config" in ns else None)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    try:
        _set_threads(cfg.threads)
        data = render(cfg, COMMANDS[name].run(cfg))
    except UsageError as exc:
        print(f"{PROG} {name}: {exc}", file=sys.stderr)
        return 2
    except (ChaosDiscError, ValueError, ArithmeticError) as exc:
        print(f"{PROG} {name}: error: {exc}", file=sys.stderr)
        return 1
    if cfg.out == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        try:
            with open(cfg.out, "wb") as fh:
                fh.write(data)
        except OSError as exc:
            print(f"{PROG} {name}: error: {exc}", file=sys.stderr)
            return 1
    return 0


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
