"""Experiment orchestration: configs, delta sweeps, and CSV reports.

A sweep is a cartesian product of (method, delta, seed) cells over one test
problem.  Cells are fully determined by the config (seeds drive only the
noise direction; every solver is deterministic), so rerunning a config
reproduces every numeric column except wall_ms byte for byte.  Failures a
cell can legitimately produce (no discrepancy root, noise at or above the
data norm, iteration budget exhausted) become status values on the row
instead of exceptions, so one bad cell never aborts a sweep.

The JSON config and CSV report schemas here are the stable interchange
contract; parsing helpers for the compact CLI option grammar
(``apriori:0.5``, ``discrepancy:1.5``, ``c0=1,c1=1,p=0.5``) also live here
so the CLI and config files accept the same strings.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass

import numpy as np

from .dsm import EpsilonSchedule, dsm_evolve, dsm_stop_discrepancy, dsm_stop_root
from .errors import ConfigError, NoiseDominatesDataError, NoRootError
from .landweber import DiscrepancyStop, FixedStop, OracleStop, landweber_run
from .problems import PROBLEM_KINDS, TRUTH_FUNCTIONS, Problem, add_noise, make_problem
from .quasisol import BallCompactum, quasi_solution
from .variational import AlphaRule, apriori_alpha, morozov_alpha, tikhonov_solve

__all__ = [
    "REPORT_HEADER",
    "StopSpec",
    "MethodSpec",
    "SweepConfig",
    "ReportRow",
    "parse_alpha_rule",
    "parse_landweber_stop",
    "parse_dsm_stop",
    "parse_schedule",
    "run_cell",
    "run_sweep",
    "format_report",
    "write_report",
    "read_report",
]

REPORT_HEADER = (
    "method",
    "n",
    "delta",
    "seed",
    "param_name",
    "param_value",
    "residual",
    "error",
    "steps_or_time",
    "wall_ms",
    "status",
)

STATUS_OK = "ok"
STATUS_NO_ROOT = "no-root"
STATUS_NOISE = "noise-dominates-data"
STATUS_BUDGET = "budget-exhausted"

METHOD_NAMES = ("tikhonov", "quasi", "landweber", "dsm")


@dataclass(frozen=True)
class StopSpec:
    """Parsed stopping rule: a kind tag plus its numeric argument (if any)."""

    kind: str
    value: float | None = None


def _split_option(text: str, name: str) -> tuple[str, float | None]:
    head, sep, tail = text.partition(":")
    if not sep:
        return head, None
    try:
        return head, float(tail)
    except ValueError as exc:
        raise ConfigError(f"cannot parse {name} option {text!r}") from exc


def parse_alpha_rule(text: str) -> AlphaRule:
    """Parse ``apriori[:p]``, ``morozov[:C]``, or ``fixed:alpha``."""
    head, value = _split_option(text, "rule")
    try:
        if head == "apriori":
            return AlphaRule.apriori() if value is None else AlphaRule.apriori(value)
        if head == "morozov":
            return AlphaRule.morozov() if value is None else AlphaRule.morozov(value)
        if head == "fixed":
            if value is None:
                raise ConfigError("fixed rule needs a value, e.g. fixed:1e-3")
            return AlphaRule.fixed(value)
    except ValueError as exc:
        raise ConfigError(f"invalid rule {text!r}: {exc}") from exc
    raise ConfigError(f"unknown rule {text!r}")


def parse_landweber_stop(text: str) -> StopSpec:
    """Parse ``discrepancy[:C]``, ``oracle``, or ``fixed:n``."""
    head, value = _split_option(text, "stop")
    if head == "discrepancy":
        return StopSpec("discrepancy", 1.5 if value is None else value)
    if head == "oracle":
        if value is not None:
            raise ConfigError("oracle stop takes no value")
        return StopSpec("oracle")
    if head == "fixed":
        if value is None:
            raise ConfigError("fixed stop needs a count, e.g. fixed:100")
        return StopSpec("fixed", value)
    raise ConfigError(f"unknown landweber stop {text!r}")


def parse_dsm_stop(text: str) -> StopSpec:
    """Parse ``root[:b]``, ``discrepancy[:C]``, or ``time:t``."""
    head, value = _split_option(text, "stop")
    if head == "root":
        return StopSpec("root", 0.5 if value is None else value)
    if head == "discrepancy":
        return StopSpec("discrepancy", 1.0 if value is None else value)
    if head == "time":
        if value is None:
            raise ConfigError("time stop needs a horizon, e.g. time:100")
        return StopSpec("time", value)
    raise ConfigError(f"unknown dsm stop {text!r}")


def parse_schedule(text: str) -> EpsilonSchedule:
    """Parse ``c0=<v>,c1=<v>,p=<v>`` (missing entries keep their defaults)."""
    params = {"c0": 1.0, "c1": 1.0, "p": 0.5}
    for piece in filter(None, (p.strip() for p in text.split(","))):
        key, sep, value = piece.partition("=")
        if not sep or key not in params:
            raise ConfigError(f"cannot parse schedule entry {piece!r}")
        try:
            params[key] = float(value)
        except ValueError as exc:
            raise ConfigError(f"cannot parse schedule entry {piece!r}") from exc
    try:
        return EpsilonSchedule(**params)
    except ValueError as exc:
        raise ConfigError(f"invalid schedule {text!r}: {exc}") from exc


@dataclass(frozen=True)
class MethodSpec:
    """One method column of a sweep, with its parsed parameters."""

    name: str
    rule: AlphaRule | None = None
    radius: float = 1.0
    mu: float = 0.9
    n_max: int = 100_000
    stop: StopSpec | None = None
    schedule: EpsilonSchedule | None = None

    @classmethod
    def from_dict(cls, raw: dict) -> "MethodSpec":
        if not isinstance(raw, dict) or "method" not in raw:
            raise ConfigError(f"method entry must be an object with 'method': {raw!r}")
        name = raw["method"]
        if name not in METHOD_NAMES:
            raise ConfigError(f"unknown method {name!r}; expected one of {METHOD_NAMES}")
        known = {
            "tikhonov": {"method", "rule"},
            "quasi": {"method", "radius"},
            "landweber": {"method", "mu", "stop", "nmax"},
            "dsm": {"method", "schedule", "stop"},
        }[name]
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown keys {sorted(unknown)} for method {name!r}")
        if name == "tikhonov":
            return cls(name=name, rule=parse_alpha_rule(raw.get("rule", "apriori")))
        if name == "quasi":
            radius = float(raw.get("radius", 1.0))
            if radius <= 0.0:
                raise ConfigError(f"radius must be positive, got {radius}")
            return cls(name=name, radius=radius)
        if name == "landweber":
            return cls(
                name=name,
                mu=float(raw.get("mu", 0.9)),
                n_max=int(raw.get("nmax", 100_000)),
                stop=parse_landweber_stop(raw.get("stop", "discrepancy:1.5")),
            )
        return cls(
            name=name,
            schedule=parse_schedule(raw.get("schedule", "")),
            stop=parse_dsm_stop(raw.get("stop", "root:0.5")),
        )

    def to_dict(self) -> dict:
        if self.name == "tikhonov":
            rule = self.rule
            tail = {
                "apriori": f"apriori:{rule.exponent!r}",
                "morozov": f"morozov:{rule.C!r}",
                "fixed": f"fixed:{rule.alpha!r}",
            }[rule.kind]
            return {"method": self.name, "rule": tail}
        if self.name == "quasi":
            return {"method": self.name, "radius": self.radius}
        if self.name == "landweber":
            stop = self.stop
            text = stop.kind if stop.value is None else f"{stop.kind}:{stop.value!r}"
            return {"method": self.name, "mu": self.mu, "stop": text, "nmax": self.n_max}
        sched = self.schedule
        stop = self.stop
        return {
            "method": self.name,
            "schedule": f"c0={sched.c0!r},c1={sched.c1!r},p={sched.p!r}",
            "stop": stop.kind if stop.value is None else f"{stop.kind}:{stop.value!r}",
        }


@dataclass(frozen=True)
class SweepConfig:
    """Validated sweep description: problem, deltas, seeds, methods, output."""

    kind: str
    n: int
    truth: str
    deltas: tuple[float, ...]
    seeds: tuple[int, ...]
    methods: tuple[MethodSpec, ...]
    out: str | None = None

    @classmethod
    def from_dict(cls, raw: dict) -> "SweepConfig":
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        problem = raw.get("problem")
        if not isinstance(problem, dict):
            raise ConfigError("config needs a 'problem' object with kind/n/truth")
        kind = problem.get("kind")
        if kind not in PROBLEM_KINDS:
            raise ConfigError(f"unknown problem kind {kind!r}; expected {PROBLEM_KINDS}")
        truth = problem.get("truth", "hat")
        if truth not in TRUTH_FUNCTIONS:
            raise ConfigError(
                f"unknown truth {truth!r}; expected one of {tuple(TRUTH_FUNCTIONS)}"
            )
        try:
            n = int(problem.get("n", 64))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"problem n must be an integer: {problem.get('n')!r}") from exc
        if n < 1:
            raise ConfigError(f"problem n must be >= 1, got {n}")
        deltas = raw.get("deltas")
        if not isinstance(deltas, (list, tuple)) or not deltas:
            raise ConfigError("config needs a nonempty 'deltas' list")
        deltas = tuple(float(d) for d in deltas)
        if any(d <= 0.0 for d in deltas):
            raise ConfigError(f"all deltas must be positive, got {deltas}")
        seeds = raw.get("seeds", [0])
        if not isinstance(seeds, (list, tuple)) or not seeds:
            raise ConfigError("config needs a nonempty 'seeds' list")
        seeds = tuple(int(s) for s in seeds)
        methods = raw.get("methods")
        if not isinstance(methods, (list, tuple)) or not methods:
            raise ConfigError("config needs a nonempty 'methods' list")
        methods = tuple(MethodSpec.from_dict(m) for m in methods)
        out = raw.get("out")
        if out is not None and not isinstance(out, str):
            raise ConfigError(f"'out' must be a string path, got {out!r}")
        extra = set(raw) - {"problem", "deltas", "seeds", "methods", "out"}
        if extra:
            raise ConfigError(f"unknown config keys {sorted(extra)}")
        return cls(
            kind=kind, n=n, truth=truth, deltas=deltas, seeds=seeds,
            methods=methods, out=out,
        )

    def to_dict(self) -> dict:
        data = {
            "problem": {"kind": self.kind, "n": self.n, "truth": self.truth},
            "deltas": list(self.deltas),
            "seeds": list(self.seeds),
            "methods": [m.to_dict() for m in self.methods],
        }
        if self.out is not None:
            data["out"] = self.out
        return data

    @classmethod
    def from_json(cls, text: str) -> "SweepConfig":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        return cls.from_dict(raw)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def load(cls, path: str) -> "SweepConfig":
        with open(path, encoding="utf-8") as handle:
            return cls.from_json(handle.read())

    def with_seeds(self, seeds) -> "SweepConfig":
        return SweepConfig(
            kind=self.kind, n=self.n, truth=self.truth, deltas=self.deltas,
            seeds=tuple(int(s) for s in seeds), methods=self.methods, out=self.out,
        )


@dataclass(frozen=True)
class ReportRow:
    """One sweep cell.  ``error``/``residual``/``param_value`` are -1 when the
    cell failed before producing a solution (see ``status``)."""

    method: str
    n: int
    delta: float
    seed: int
    param_name: str
    param_value: float
    residual: float
    error: float
    steps_or_time: float
    wall_ms: float
    status: str


def _fmt(value: float) -> str:
    return f"{value:.12g}"


def _row_fields(row: ReportRow) -> list[str]:
    return [
        row.method,
        str(row.n),
        _fmt(row.delta),
        str(row.seed),
        row.param_name,
        _fmt(row.param_value),
        _fmt(row.residual),
        _fmt(row.error),
        _fmt(row.steps_or_time),
        _fmt(row.wall_ms),
        row.status,
    ]


def run_cell(
    problem: Problem,
    spec: MethodSpec,
    delta: float,
    seed: int,
    artifacts: dict | None = None,
) -> ReportRow:
    """Run one (method, delta, seed) cell and report it as a row.

    ``artifacts``, when a dict is supplied, receives the method's trace
    object under ``"trace"`` (Landweber) or ``"trajectory"`` (DSM) for
    callers that want to dump it (the CLI's --trace option).
    """
    op = problem.op
    noisy = add_noise(problem, delta, seed)
    param_name = {"tikhonov": "alpha", "quasi": "lambda", "landweber": "n", "dsm": "t"}[
        spec.name
    ]
    start = time.perf_counter()
    status = STATUS_OK
    u = None
    param_value = -1.0
    steps_or_time = 0.0
    try:
        if spec.name == "tikhonov":
            rule = spec.rule
            if rule.kind == "apriori":
                alpha = apriori_alpha(delta, rule.exponent)
            elif rule.kind == "morozov":
                alpha, _ = morozov_alpha(op, noisy.f_delta, delta, rule.C)
            else:
                alpha = rule.alpha
            u = tikhonov_solve(op, noisy.f_delta, alpha)
            param_value = alpha
        elif spec.name == "quasi":
            ball = BallCompactum(radius=spec.radius, grid=op.grid)
            u, multiplier = quasi_solution(op, noisy.f_delta, ball)
            param_value = multiplier
        elif spec.name == "landweber":
            stop_spec = spec.stop
            if stop_spec.kind == "discrepancy":
                stop = DiscrepancyStop(C=stop_spec.value)
            elif stop_spec.kind == "oracle":
                stop = OracleStop(truth=problem.truth)
            else:
                stop = FixedStop(n=int(stop_spec.value))
            u, trace = landweber_run(
                op, noisy, mu=spec.mu, n_max=spec.n_max, stop=stop, truth=problem.truth
            )
            if artifacts is not None:
                artifacts["trace"] = trace
            param_value = float(trace.stop_index)
            steps_or_time = float(trace.stop_index)
            if trace.exhausted:
                status = STATUS_BUDGET
        else:
            stop_spec = spec.stop
            schedule = spec.schedule
            if stop_spec.kind == "root":
                t_stop = dsm_stop_root(schedule, delta, stop_spec.value).t
            elif stop_spec.kind == "discrepancy":
                t_stop = dsm_stop_discrepancy(
                    op, noisy.f_delta, delta, stop_spec.value, schedule
                ).t
            else:
                t_stop = float(stop_spec.value)
            if t_stop <= 0.0:
                u = np.zeros(op.n)
            else:
                trajectory = dsm_evolve(
                    op,
                    noisy.q_delta,
                    schedule,
                    t_stop,
                    f_delta=noisy.f_delta,
                    truth=problem.truth,
                )
                if artifacts is not None:
                    artifacts["trajectory"] = trajectory
                u = trajectory.final
            param_value = t_stop
            steps_or_time = t_stop
    except NoiseDominatesDataError:
        status = STATUS_NOISE
    except NoRootError:
        status = STATUS_NO_ROOT
    wall_ms = (time.perf_counter() - start) * 1e3

    if u is None:
        residual = -1.0
        error = -1.0
        param_value = -1.0
    else:
        residual = op.norm_h(op.apply(u) - noisy.f_delta)
        error = op.norm_h(u - problem.truth)
    return ReportRow(
        method=spec.name,
        n=op.n,
        delta=float(delta),
        seed=int(seed),
        param_name=param_name,
        param_value=float(param_value),
        residual=float(residual),
        error=float(error),
        steps_or_time=float(steps_or_time),
        wall_ms=wall_ms,
        status=status,
    )


def run_sweep(config: SweepConfig) -> list[ReportRow]:
    """Run every (method, delta, seed) cell of the config, in config order."""
    problem = make_problem(config.kind, config.n, TRUTH_FUNCTIONS[config.truth])
    return [
        run_cell(problem, spec, delta, seed)
        for spec in config.methods
        for delta in config.deltas
        for seed in config.seeds
    ]


def format_report(rows) -> str:
    """Render rows as CSV text with the canonical header."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(REPORT_HEADER)
    for row in rows:
        writer.writerow(_row_fields(row))
    return buffer.getvalue()


def write_report(rows, path: str) -> None:
    """Write rows to ``path`` as CSV (12 significant digits, config order)."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(format_report(rows))


def read_report(path: str) -> list[ReportRow]:
    """Parse a report CSV back into rows (inverse of write_report)."""
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != list(REPORT_HEADER):
            raise ConfigError(f"unexpected report header in {path}: {header}")
        rows = []
        for fields in reader:
            if len(fields) != len(REPORT_HEADER):
                raise ConfigError(f"malformed report row in {path}: {fields}")
            rows.append(
                ReportRow(
                    method=fields[0],
                    n=int(fields[1]),
                    delta=float(fields[2]),
                    seed=int(fields[3]),
                    param_name=fields[4],
                    param_value=float(fields[5]),
                    residual=float(fields[6]),
                    error=float(fields[7]),
                    steps_or_time=float(fields[8]),
                    wall_ms=float(fields[9]),
                    status=fields[10],
                )
            )
    return rows
