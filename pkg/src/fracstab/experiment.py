"""Experiment configuration, presets and the command runners behind the CLI.

A configuration is a JSON object; every key is checked and unknown keys are
rejected.  Validation collects all problems before any numerical work starts
and raises one :class:`~fracstab.errors.ConfigError` listing them.
"""

from __future__ import annotations

import copy
import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import stability, stabilization
from .errors import ConfigError, NotStabilizableError, NumericError
from .solution_engine import evolve_trace
from .special_functions import MlParameters, ml_evaluate
from .spectral_model import (
    BUILTIN_INITIAL_CONDITIONS,
    ModalOperator,
    ModalState,
    builtin_initial_condition,
    dirichlet_laplacian,
    load_samples_csv,
    project,
    synthesize,
    uniform_grid,
)

__all__ = [
    "COMMANDS",
    "PRESETS",
    "ExperimentConfig",
    "OperatorConfig",
    "FeedbackConfig",
    "DecompositionConfig",
    "TimeSpec",
    "OutputConfig",
    "MlEvalConfig",
    "parse_config",
    "load_config",
    "preset",
    "run",
    "Output",
]

COMMANDS = ("simulate", "stabilize", "analyze", "ml-eval")
FORMATS = ("csv", "json")
DEFAULT_GRID_POINTS = 4097
DEFAULT_PROFILE_POINTS = 101
DEFAULT_HORIZON = 1e4


# --------------------------------------------------------------------------
# schema


@dataclass(frozen=True)
class OperatorConfig:
    diffusivity: float = 1.0
    shift: float = 0.0
    N: int = 64


@dataclass(frozen=True)
class DecompositionConfig:
    xi: float
    margin: float
    coupling_scale: float = 0.0


@dataclass(frozen=True)
class FeedbackConfig:
    b: float = 1.0
    gamma: float | None = None
    decomposition: DecompositionConfig | None = None


@dataclass(frozen=True)
class TimeSpec:
    start: float
    stop: float
    count: int
    spacing: str = "linear"

    def grid(self) -> np.ndarray:
        if self.spacing == "linear":
            return np.linspace(self.start, self.stop, self.count)
        return np.geomspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class OutputConfig:
    path: str | None = None
    format: str = "csv"


@dataclass(frozen=True)
class MlEvalConfig:
    beta: float = 1.0
    z: tuple = ()


@dataclass(frozen=True)
class ExperimentConfig:
    alpha: float
    operator: OperatorConfig = field(default_factory=OperatorConfig)
    initial_condition: str = "sin_pi_x"
    times: tuple | TimeSpec = (1.0,)
    feedback: FeedbackConfig | None = None
    output: OutputConfig = field(default_factory=OutputConfig)
    grid_points: int = DEFAULT_GRID_POINTS
    profile_points: int = DEFAULT_PROFILE_POINTS
    horizon: float = DEFAULT_HORIZON
    ml_eval: MlEvalConfig | None = None

    def time_grid(self) -> np.ndarray:
        if isinstance(self.times, TimeSpec):
            return self.times.grid()
        return np.asarray(self.times, dtype=float)

    def to_dict(self) -> dict:
        d = {
            "alpha": self.alpha,
            "operator": {"diffusivity": self.operator.diffusivity, "shift": self.operator.shift, "N": self.operator.N},
            "initial_condition": self.initial_condition,
            "grid_points": self.grid_points,
            "profile_points": self.profile_points,
            "horizon": self.horizon,
            "output": {"path": self.output.path, "format": self.output.format},
        }
        if isinstance(self.times, TimeSpec):
            d["times"] = {
                "start": self.times.start,
                "stop": self.times.stop,
                "count": self.times.count,
                "spacing": self.times.spacing,
            }
        else:
            d["times"] = list(self.times)
        if self.feedback is not None:
            fb = {"b": self.feedback.b}
            if self.feedback.gamma is not None:
                fb["gamma"] = self.feedback.gamma
            if self.feedback.decomposition is not None:
                dc = self.feedback.decomposition
                fb["decomposition"] = {"xi": dc.xi, "margin": dc.margin, "coupling_scale": dc.coupling_scale}
            d["feedback"] = fb
        if self.ml_eval is not None:
            d["ml_eval"] = {"beta": self.ml_eval.beta, "z": [_z_to_json(z) for z in self.ml_eval.z]}
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def _z_to_json(z):
    if isinstance(z, complex):
        return repr(z)
    return z


# --------------------------------------------------------------------------
# validation


class _Collector:
    def __init__(self):
        self.messages = []

    def add(self, msg):
        self.messages.append(msg)

    def keys(self, obj, allowed, where):
        if not isinstance(obj, dict):
            self.add(f"{where}: expected an object")
            return False
        for k in sorted(set(obj) - set(allowed)):
            self.add(f"{where}: unknown key {k!r}")
        return True

    def number(self, obj, key, where, default=None, *, positive=False, nonneg=False, required=False):
        if key not in obj:
            if required:
                self.add(f"{where}.{key}: required")
            return default
        v = obj[key]
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            self.add(f"{where}.{key}: expected a finite number, got {v!r}")
            return default
        if positive and not v > 0:
            self.add(f"{where}.{key}: must be > 0, got {v!r}")
        if nonneg and v < 0:
            self.add(f"{where}.{key}: must be >= 0, got {v!r}")
        return float(v)

    def integer(self, obj, key, where, default, minimum):
        if key not in obj:
            return default
        v = obj[key]
        if isinstance(v, bool) or not isinstance(v, int):
            self.add(f"{where}.{key}: expected an integer, got {v!r}")
            return default
        if v < minimum:
            self.add(f"{where}.{key}: must be >= {minimum}, got {v!r}")
        return v


_TOP_KEYS = (
    "alpha",
    "operator",
    "initial_condition",
    "times",
    "feedback",
    "output",
    "grid_points",
    "profile_points",
    "horizon",
    "ml_eval",
)


def _parse_times(raw, col, where="times"):
    if isinstance(raw, list):
        if not raw:
            col.add(f"{where}: the list is empty")
            return (1.0,)
        out = []
        for i, v in enumerate(raw):
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                col.add(f"{where}[{i}]: expected a finite number, got {v!r}")
                continue
            out.append(float(v))
        if any(v < 0 for v in out):
            col.add(f"{where}: times must be non-negative")
        if any(b <= a for a, b in zip(out, out[1:])):
            col.add(f"{where}: times must be strictly increasing")
        return tuple(out)
    if isinstance(raw, dict):
        col.keys(raw, ("start", "stop", "count", "spacing"), where)
        start = col.number(raw, "start", where, 0.0, nonneg=True, required=True)
        stop = col.number(raw, "stop", where, 1.0, positive=True, required=True)
        count = col.integer(raw, "count", where, 2, 1)
        if "count" not in raw:
            col.add(f"{where}.count: required")
        spacing = raw.get("spacing", "linear")
        if spacing not in ("linear", "geometric"):
            col.add(f"{where}.spacing: expected 'linear' or 'geometric', got {spacing!r}")
            spacing = "linear"
        if start is not None and stop is not None and not stop > start:
            col.add(f"{where}: stop must exceed start")
        if spacing == "geometric" and start is not None and not start > 0:
            col.add(f"{where}: geometric spacing needs start > 0")
        return TimeSpec(start, stop, count, spacing)
    col.add(f"{where}: expected a list of times or an object {{start, stop, count, spacing}}")
    return (1.0,)


def _parse_z(raw, col):
    out = []
    if not isinstance(raw, list) or not raw:
        col.add("ml_eval.z: expected a non-empty list of numbers")
        return ()
    for i, v in enumerate(raw):
        try:
            if isinstance(v, bool):
                raise ValueError
            if isinstance(v, (int, float)):
                z = float(v)
            elif isinstance(v, str):
                z = complex(v.replace(" ", ""))
                if z.imag == 0.0 and "j" not in v:
                    z = z.real
            else:
                raise ValueError
            if not cmath_isfinite(z):
                raise ValueError
            out.append(z)
        except ValueError:
            col.add(f"ml_eval.z[{i}]: expected a finite real or complex number, got {v!r}")
    return tuple(out)


def cmath_isfinite(z) -> bool:
    return math.isfinite(z.real) and math.isfinite(z.imag) if isinstance(z, complex) else math.isfinite(z)


def parse_config(data: dict, command: str | None = None, base_dir: Path | None = None) -> ExperimentConfig:
    """Validate a raw configuration object and build an :class:`ExperimentConfig`.

    All problems are gathered; a single :class:`ConfigError` lists them.
    """
    col = _Collector()
    if command is not None and command not in COMMANDS:
        col.add(f"unknown command {command!r}; valid: {', '.join(COMMANDS)}")
    if not col.keys(data, _TOP_KEYS, "config"):
        raise ConfigError(col.messages)

    alpha = col.number(data, "alpha", "config", 0.5, required=True)
    alpha_max = 2.0 if command == "ml-eval" else 1.0
    if alpha is not None and not 0.0 < alpha <= alpha_max:
        col.add(f"config.alpha: must lie in (0, {alpha_max:g}], got {alpha!r}")

    op_raw = data.get("operator", {})
    operator = OperatorConfig()
    if col.keys(op_raw, ("diffusivity", "shift", "N"), "operator"):
        operator = OperatorConfig(
            col.number(op_raw, "diffusivity", "operator", 1.0, positive=True),
            col.number(op_raw, "shift", "operator", 0.0),
            col.integer(op_raw, "N", "operator", 64, 1),
        )

    grid_points = col.integer(data, "grid_points", "config", DEFAULT_GRID_POINTS, 2)
    if isinstance(operator.N, int) and isinstance(grid_points, int) and grid_points < 4 * operator.N + 1:
        col.add(f"config.grid_points: {grid_points} is below the resolution floor 4N+1 = {4 * operator.N + 1}")
    profile_points = col.integer(data, "profile_points", "config", DEFAULT_PROFILE_POINTS, 2)
    horizon = col.number(data, "horizon", "config", DEFAULT_HORIZON, positive=True)

    ic = data.get("initial_condition", "sin_pi_x")
    if not isinstance(ic, str):
        col.add(f"config.initial_condition: expected a name or a CSV path, got {ic!r}")
        ic = "sin_pi_x"
    elif ic not in BUILTIN_INITIAL_CONDITIONS:
        if ic.lower().endswith(".csv"):
            path = Path(ic)
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            if not path.is_file():
                col.add(f"config.initial_condition: CSV file {ic!r} not found")
            else:
                ic = str(path)
        else:
            valid = ", ".join(sorted(BUILTIN_INITIAL_CONDITIONS))
            col.add(f"config.initial_condition: unknown initial condition {ic!r}; valid names: {valid} (or a .csv path)")

    times = _parse_times(data.get("times", [1.0]), col)

    feedback = None
    if "feedback" in data and data["feedback"] is not None:
        fb = data["feedback"]
        if col.keys(fb, ("b", "gamma", "decomposition"), "feedback"):
            b = col.number(fb, "b", "feedback", 1.0)
            gamma = col.number(fb, "gamma", "feedback", None, nonneg=True)
            dec = None
            if "decomposition" in fb:
                draw = fb["decomposition"]
                if col.keys(draw, ("xi", "margin", "coupling_scale"), "feedback.decomposition"):
                    dec = DecompositionConfig(
                        col.number(draw, "xi", "feedback.decomposition", 1.0, positive=True, required=True),
                        col.number(draw, "margin", "feedback.decomposition", 1.0, positive=True, required=True),
                        col.number(draw, "coupling_scale", "feedback.decomposition", 0.0),
                    )
            if ("gamma" in fb) == ("decomposition" in fb):
                col.add("feedback: give exactly one of 'gamma' or 'decomposition'")
            feedback = FeedbackConfig(b, gamma, dec)

    out_raw = data.get("output", {})
    output = OutputConfig()
    if col.keys(out_raw, ("path", "format"), "output"):
        path = out_raw.get("path")
        if path is not None and not isinstance(path, str):
            col.add(f"output.path: expected a string, got {path!r}")
            path = None
        fmt = out_raw.get("format", "csv")
        if fmt not in FORMATS:
            col.add(f"output.format: expected one of {', '.join(FORMATS)}, got {fmt!r}")
            fmt = "csv"
        output = OutputConfig(path, fmt)

    ml = None
    if "ml_eval" in data:
        mraw = data["ml_eval"]
        if col.keys(mraw, ("beta", "z"), "ml_eval"):
            beta = col.number(mraw, "beta", "ml_eval", 1.0, positive=True)
            ml = MlEvalConfig(beta, _parse_z(mraw.get("z"), col))

    if command == "simulate" and feedback is not None:
        col.add("simulate: the configuration must not contain a feedback block (use 'stabilize')")
    if command == "stabilize" and feedback is None:
        col.add("stabilize: the configuration needs a feedback block")
    if command == "stabilize" and feedback is not None and feedback.decomposition is not None:
        _check_uniform(times, col)
    if command == "ml-eval" and ml is None:
        col.add("ml-eval: the configuration needs an 'ml_eval' block with 'z'")

    if col.messages:
        raise ConfigError(col.messages)
    return ExperimentConfig(
        alpha=alpha,
        operator=operator,
        initial_condition=ic,
        times=times,
        feedback=feedback,
        output=output,
        grid_points=grid_points,
        profile_points=profile_points,
        horizon=horizon,
        ml_eval=ml,
    )


def _check_uniform(times, col):
    t = np.asarray(times.grid() if isinstance(times, TimeSpec) else times, dtype=float)
    if t.size == 0 or t[0] != 0.0:
        col.add("times: the decomposition pipeline needs a uniform grid starting at 0")
        return
    if t.size > 1:
        d = np.diff(t)
        if np.max(np.abs(d - d.mean())) > 1e-9 * d.mean():
            col.add("times: the decomposition pipeline needs a uniform grid starting at 0")


def load_config(path, command: str | None = None) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError([f"cannot read config {str(path)!r}: {exc.strerror}"]) from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"config {str(path)!r} is not valid JSON: {exc}"]) from None
    return parse_config(data, command, base_dir=path.parent)


# --------------------------------------------------------------------------
# presets

_PRESET_DATA = {
    "figure1": {
        "alpha": 0.5,
        "operator": {"diffusivity": 1.0, "shift": 0.0, "N": 64},
        "initial_condition": "sin_pi_x",
        "times": [0.1, 0.15, 0.2, 1.0],
    },
    "figure2": {
        "alpha": 0.2,
        "operator": {"diffusivity": 0.01, "shift": 0.5, "N": 64},
        "initial_condition": "x_times_x_minus_1",
        "times": [0.0, 10.0],
        "feedback": {"b": 1.0, "gamma": 1.0},
    },
    "decomposition": {
        "alpha": 0.5,
        "operator": {"diffusivity": 0.1, "shift": 1.5, "N": 64},
        "initial_condition": "x_times_x_minus_1",
        "times": {"start": 0.0, "stop": 100.0, "count": 1001, "spacing": "linear"},
        "feedback": {"b": 1.0, "decomposition": {"xi": 1.0, "margin": 1.0, "coupling_scale": 0.5}},
    },
}
PRESETS = tuple(sorted(_PRESET_DATA))


def preset(name: str) -> dict:
    """Raw configuration object of a named preset."""
    try:
        return copy.deepcopy(_PRESET_DATA[name])
    except KeyError:
        raise ConfigError([f"unknown preset {name!r}; valid: {', '.join(PRESETS)}"]) from None


# --------------------------------------------------------------------------
# runners


@dataclass
class Output:
    """Rendered results: the main document plus optional side files keyed by suffix."""

    main: str
    side: dict = field(default_factory=dict)
    summary: str = ""


def _dumps(obj) -> str:
    return json.dumps(stability._clean(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _require_finite(arr, what):
    if not np.all(np.isfinite(arr)):
        raise NumericError(f"{what} is not finite (overflow in the evolution)")


def build_operator(cfg: ExperimentConfig) -> ModalOperator:
    return dirichlet_laplacian(cfg.operator.diffusivity, cfg.operator.shift, cfg.operator.N)


def initial_state(cfg: ExperimentConfig, op: ModalOperator) -> ModalState:
    if cfg.initial_condition in BUILTIN_INITIAL_CONDITIONS:
        x = uniform_grid(cfg.grid_points)
        return project(builtin_initial_condition(cfg.initial_condition)(x), op)
    _, values = load_samples_csv(cfg.initial_condition)
    return project(values, op)


def run_simulate(cfg: ExperimentConfig, fmt: str) -> Output:
    op = build_operator(cfg)
    z0 = initial_state(cfg, op)
    times = cfg.time_grid()
    trace = evolve_trace(op, z0, cfg.alpha, times)
    _require_finite(trace.coefficients, "the modal trace")
    x = uniform_grid(cfg.profile_points)
    profiles = np.stack([synthesize(s, op, x) for s in trace.states], axis=1)
    peaks = np.max(np.abs(profiles), axis=0)
    summary = "".join(f"t={float(t)!r}  peak={p:.6g}  norm={n:.6g}\n" for t, p, n in zip(times, peaks, trace.norms))
    if fmt == "json":
        doc = {
            "command": "simulate",
            "config": cfg.to_dict(),
            "x": x.tolist(),
            "times": times.tolist(),
            "profiles": profiles.T.tolist(),
            "peaks": peaks.tolist(),
            "norms": trace.norms.tolist(),
            "trace": trace.to_dict(),
        }
        return Output(_dumps(doc), summary=summary)
    rows = [["x"] + [f"t={float(t)!r}" for t in times]]
    rows += [[xi, *row] for xi, row in zip(x.tolist(), profiles.tolist())]
    return Output(_csv(rows), {".trace.csv": trace.to_csv()}, summary)


def run_stabilize(cfg: ExperimentConfig, fmt: str) -> Output:
    op = build_operator(cfg)
    z0 = initial_state(cfg, op)
    times = cfg.time_grid()
    fb = cfg.feedback
    open_lambda_1 = op.lambda_max
    if fb.decomposition is not None:
        return _run_decomposition(cfg, op, z0, times, fmt)

    law = stabilization.FeedbackLaw.scalar(fb.gamma)
    closed = stabilization.closed_loop(op, fb.b, law)
    if not closed.lambda_max < 0.0:
        raise NotStabilizableError(
            f"closed-loop lambda_1 = {closed.lambda_max!r} >= 0 with b = {fb.b!r}, gamma = {fb.gamma!r}"
        )
    trace = evolve_trace(closed, z0, cfg.alpha, times)
    _require_finite(trace.coefficients, "the modal trace")
    report = stability.analyze(closed, z0, cfg.alpha, cfg.horizon)
    final = stabilization.stabilization_error(trace, times[-1])
    meta = {
        "command": "stabilize",
        "mode": "feedback",
        "config": cfg.to_dict(),
        "open_loop_lambda_1": open_lambda_1,
        "open_loop_matignon_pass": stability.matignon_test([open_lambda_1], cfg.alpha).passed
        if open_lambda_1 != 0.0
        else False,
        "closed_loop_lambda_1": closed.lambda_max,
        "feedback": law.to_dict(),
        "initial_norm": float(trace.norms[0]),
        "final_time": float(times[-1]),
        "final_norm": final,
        "norms": trace.norms.tolist(),
    }
    summary = (
        f"open-loop lambda_1   {open_lambda_1:.6g}\n"
        f"closed-loop lambda_1 {closed.lambda_max:.6g}\n"
        f"||z({float(times[0])!r})|| = {trace.norms[0]:.6g}\n"
        f"||z({float(times[-1])!r})|| = {final:.6g}\n" + report.table()
    )
    if fmt == "json":
        doc = dict(meta, trace=trace.to_dict(), report=report.to_dict())
        return Output(_dumps(doc), summary=summary)
    side = {".report.json": _dumps(dict(meta, report=report.to_dict()))}
    return Output(trace.to_csv(), side, summary)


def _run_decomposition(cfg, op, z0, times, fmt) -> Output:
    fb = cfg.feedback
    dc = fb.decomposition
    split = stabilization.split_spectrum(op, dc.xi)
    coupling = None
    if dc.coupling_scale and split.n_retained and split.n_retained < op.n:
        p = np.arange(split.n_retained + 1, op.n + 1, dtype=float)
        coupling = np.repeat((dc.coupling_scale / p)[:, None], split.n_retained, axis=1)
    if fb.b == 0.0 and split.n_retained:
        raise NotStabilizableError("b = 0: the control has no authority over the retained modes")
    result = stabilization.decompose_and_stabilize(op, fb.b, dc.xi, dc.margin, z0, cfg.alpha, times, coupling)
    trace = result.trace
    _require_finite(trace.coefficients, "the modal trace")
    meta = {
        "command": "stabilize",
        "mode": "decomposition",
        "config": cfg.to_dict(),
        "open_loop_lambda_1": op.lambda_max,
        "plan": result.plan.to_dict(),
        "notes": list(result.notes),
        "initial_norm": float(trace.norms[0]),
        "final_norm": float(trace.norms[-1]),
        "norms": trace.norms.tolist(),
    }
    if result.unstable_trace is not None and times[-1] > 0 and times.size > 3:
        try:
            meta["unstable_decay_exponent"] = stabilization.unstable_decay_exponent(result)
        except Exception as exc:  # diagnostic only
            meta["unstable_decay_exponent"] = None
            meta["notes"].append(f"unstable-part fit unavailable: {exc}")
    if result.unstable_trace is not None and result.stable_trace is not None and times.size > 1:
        env = stabilization.stable_part_envelope(result)
        meta["stable_envelope"] = {"holds": env.holds, "max_ratio": env.max_ratio, "constant": env.constant}
    summary = (
        f"retained modes {result.plan.split.n_retained} (xi = {dc.xi!r})\n"
        f"gains    {list(result.plan.unstable_gains)}\n"
        f"closed-loop retained eigenvalues {list(result.plan.closed_loop_unstable)}\n"
        f"||z(0)|| = {trace.norms[0]:.6g}  ||z(T)|| = {trace.norms[-1]:.6g}\n"
    )
    if fmt == "json":
        return Output(_dumps(dict(meta, trace=trace.to_dict())), summary=summary)
    return Output(trace.to_csv(), {".plan.json": _dumps(meta)}, summary)


def run_analyze(cfg: ExperimentConfig, fmt: str) -> Output:
    op = build_operator(cfg)
    z0 = initial_state(cfg, op)
    if cfg.feedback is not None and cfg.feedback.gamma is not None:
        op = stabilization.closed_loop(op, cfg.feedback.b, stabilization.FeedbackLaw.scalar(cfg.feedback.gamma))
    report = stability.analyze(op, z0, cfg.alpha, cfg.horizon)
    table = report.table()
    if fmt == "json":
        return Output(report.to_json() + "\n", summary=table)
    rows = [["key", "value"]] + [[k, float(v) if isinstance(v, float) else str(v)] for k, v in report.summary_rows()]
    return Output(_csv(rows), summary=table)


def run_ml_eval(alpha: float, beta: float, zs, fmt: str) -> Output:
    params = MlParameters(alpha, beta)
    rows = []
    for z in zs:
        res = ml_evaluate(params.eta, params.beta, z)
        value = res.value
        if not cmath_isfinite(value):
            raise NumericError(f"E_{{{alpha},{beta}}}({z!r}) overflows")
        rows.append((z, value.real if not isinstance(z, complex) else value, res.regime.value, res.error_estimate))
    if fmt == "json":
        doc = {
            "alpha": alpha,
            "beta": beta,
            "rows": [
                {"z": _z_to_json(z), "value": _z_to_json(v), "regime": r, "error_estimate": e} for z, v, r, e in rows
            ],
        }
        return Output(_dumps(doc))
    out = [["z", "value", "regime", "error_estimate"]]
    out += [[repr(z), repr(v), r, repr(e)] for z, v, r, e in rows]
    return Output(_csv(out))


def run(command: str, cfg: ExperimentConfig, fmt: str | None = None) -> Output:
    """Dispatch ``command`` on a validated configuration."""
    fmt = fmt or cfg.output.format
    if command == "simulate":
        return run_simulate(cfg, fmt)
    if command == "stabilize":
        return run_stabilize(cfg, fmt)
    if command == "analyze":
        return run_analyze(cfg, fmt)
    if command == "ml-eval":
        return run_ml_eval(cfg.alpha, cfg.ml_eval.beta, cfg.ml_eval.z, fmt)
    raise ConfigError([f"unknown command {command!r}"])
