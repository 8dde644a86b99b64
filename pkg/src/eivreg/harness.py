"""Experiment orchestration: seeded parameter sweeps, per-trial records,
quantile aggregation, and rate-exponent reports.

Every trial is a pure function of (master_seed, m, n, replicate), so sweeps
are reproducible trial-by-trial, embarrassingly parallel, and emit
byte-identical CSV regardless of worker count.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields

import numpy as np

from .conditions import column_norm_constant, re_probe
from .datagen import SignalSpec, generate_dataset, generate_signal
from .errors import ConfigError, DomainError
from .model import NoiseModel, ProblemShape, SparsityBudget, lp_loss
from .projections import ProjectionOptions
from .rates import fit_rate_exponent
from .solver import SolverOptions, solve
from .surrogate import SurrogatePair, compute_gamma, compute_upsilon, deviation_inf

_MASK64 = (1 << 64) - 1
# Stream tags keep signal seeds, dataset seeds and probe seeds disjoint.
_SIGNAL_TAG = 0x5349474E414C           # "SIGNAL"
_PROBE_TAG = 0x50524F4245              # "PROBE"
_RE_PROBE_EXTRA = 32                   # random probes beyond the axis sweep


def _splitmix64(x: int) -> int:
    """One SplitMix64 output step; stable across platforms."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def mix64(*parts: int) -> int:
    """Deterministic 64-bit mix of integer parts (SplitMix64 absorption).

    Used to derive per-trial seeds: trials can be re-run in isolation and
    never share streams.
    """
    h = 0x243F6A8885A308D3
    for p in parts:
        h = _splitmix64(h ^ (int(p) & _MASK64))
    return h


@dataclass(frozen=True)
class ExperimentConfig:
    q: float
    R_q: float
    m_grid: tuple
    n_grid: tuple
    noise: NoiseModel
    replicates: int
    master_seed: int
    solver: SolverOptions = SolverOptions()
    projections: ProjectionOptions = ProjectionOptions()
    loss_ps: tuple = (1.0, 2.0)

    def __post_init__(self):
        SparsityBudget(self.q, self.R_q)  # reuse its validation
        if len(self.m_grid) == 0 or len(self.n_grid) == 0:
            raise ConfigError("m_grid and n_grid must be nonempty")
        if any(m < 1 for m in self.m_grid):
            raise ConfigError("every m must be >= 1")
        if any(n < 2 for n in self.n_grid):
            raise ConfigError("every n must be >= 2")
        if self.replicates < 1:
            raise ConfigError("replicates must be >= 1")
        if any(p < 1 for p in self.loss_ps):
            raise ConfigError("every loss exponent must be >= 1")


@dataclass(frozen=True)
class TrialRecord:
    replicate: int
    m: int
    n: int
    q: float
    R_q: float
    sigma_w: float          # noise standard deviations, not variances
    sigma_e: float
    kappa_c_emp: float
    kappa_l_emp: float
    deviation_inf: float
    l2_err_sq: float
    l1_err: float
    iterations: int
    converged: bool
    seed_used: int
    error: str = ""                      # nonempty marks a failed trial
    extra_losses: dict = field(default_factory=dict)  # p -> loss, p not in {1, 2}


_CSV_FIELDS = [
    "replicate", "m", "n", "q", "R_q", "sigma_w", "sigma_e",
    "kappa_c_emp", "kappa_l_emp", "deviation_inf", "l2_err_sq", "l1_err",
    "iterations", "converged", "seed_used", "error",
]


def run_trial(config: ExperimentConfig, m: int, n: int, replicate: int) -> TrialRecord:
    """One (m, n, replicate) cell: generate, estimate, score.

    The signal seed depends on (master_seed, n, replicate) only, so the
    same ground truth is reused across the m sweep; the dataset seed mixes
    in m as well.  Any exception is captured into the record's error tag
    instead of aborting the sweep.
    """
    seed_used = mix64(config.master_seed, m, n, replicate)
    budget = SparsityBudget(config.q, config.R_q)
    noise = config.noise
    record = dict(
        replicate=replicate, m=m, n=n, q=config.q, R_q=config.R_q,
        sigma_w=math.sqrt(noise.sigma_w2), sigma_e=math.sqrt(noise.sigma_e2),
        kappa_c_emp=float("nan"), kappa_l_emp=float("nan"),
        deviation_inf=float("nan"), l2_err_sq=float("nan"),
        l1_err=float("nan"), iterations=0, converged=False,
        seed_used=seed_used, error="", extra_losses={},
    )
    try:
        signal_seed = mix64(config.master_seed, _SIGNAL_TAG, n, replicate)
        beta_star = generate_signal(SignalSpec(n, budget, signal_seed))
        dataset = generate_dataset(ProblemShape(m, n), noise, beta_star, seed_used)
        pair = SurrogatePair(
            gamma=compute_gamma(dataset.Z, noise.sigma_w2),
            upsilon=compute_upsilon(dataset.Z, dataset.y),
        )
        record["kappa_c_emp"] = column_norm_constant(dataset.Z)
        probe = re_probe(
            pair.gamma, budget, probes=n + _RE_PROBE_EXTRA,
            seed=mix64(seed_used, _PROBE_TAG), m=m,
        )
        record["kappa_l_emp"] = probe.kappa_l_hat
        record["deviation_inf"] = deviation_inf(pair, beta_star)
        sol = solve(pair, budget, config.solver, config.projections)
        record["l2_err_sq"] = lp_loss(sol.beta_hat, beta_star, 2.0)
        record["l1_err"] = lp_loss(sol.beta_hat, beta_star, 1.0)
        record["iterations"] = sol.iterations
        record["converged"] = sol.converged
        record["extra_losses"] = {
            p: lp_loss(sol.beta_hat, beta_star, p)
            for p in config.loss_ps
            if p not in (1.0, 2.0)
        }
    except Exception as exc:  # noqa: BLE001 - per-trial capture is the contract
        record["error"] = f"{type(exc).__name__}: {exc}"
        record["converged"] = False
    return TrialRecord(**record)


def run_experiment(config: ExperimentConfig, threads: int = 1) -> list[TrialRecord]:
    """Run the full sweep; record count = |m_grid| * |n_grid| * replicates.

    Records come back sorted by (m, n, replicate) whatever the worker
    count, so downstream output is byte-identical.
    """
    cells = sorted(
        (m, n, r)
        for m in config.m_grid
        for n in config.n_grid
        for r in range(config.replicates)
    )
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(
                pool.map(lambda c: run_trial(config, *c), cells)
            )
    else:
        records = [run_trial(config, *cell) for cell in cells]
    return records


# ---------------------------------------------------------------------------
# Aggregation and reports
# ---------------------------------------------------------------------------

_METRIC_FIELDS = [
    "kappa_c_emp", "kappa_l_emp", "deviation_inf",
    "l2_err_sq", "l1_err", "iterations",
]


def aggregate(records: list[TrialRecord], group_by: list[str]) -> list[dict]:
    """Per-group median and quartiles of each numeric metric.

    Quartiles use numpy's linear-interpolation quantiles at 0.25 / 0.5 /
    0.75.  Failed trials (nonempty error tag) are excluded from the metric
    quantiles but counted in the failure_rate column.  Groups are sorted by
    key; rows within a group contribute independently of input order.
    """
    if not records:
        raise DomainError("aggregate needs at least one record")
    groups: dict[tuple, list[TrialRecord]] = {}
    for rec in records:
        key = tuple(getattr(rec, f) for f in group_by)
        groups.setdefault(key, []).append(rec)
    out = []
    for key in sorted(groups):
        recs = groups[key]
        ok = [r for r in recs if r.error == ""]
        row = dict(zip(group_by, key))
        row["count"] = len(recs)
        row["failure_rate"] = 1.0 - len(ok) / len(recs)
        for metric in _METRIC_FIELDS:
            vals = np.array([getattr(r, metric) for r in ok], dtype=float)
            if vals.size:
                q1, med, q3 = np.quantile(vals, [0.25, 0.5, 0.75])
            else:
                q1 = med = q3 = float("nan")
            row[f"{metric}_median"] = float(med)
            row[f"{metric}_q1"] = float(q1)
            row[f"{metric}_q3"] = float(q3)
        out.append(row)
    return out


@dataclass(frozen=True)
class RateReport:
    mode: str
    slope: float
    intercept: float
    r2: float
    theory_exponent: float
    points: tuple  # ((log n / m, median l2_err_sq), ...)


def rate_report(records: list[TrialRecord], mode: str) -> RateReport:
    """Fit the empirical error exponent along one swept axis.

    x = log(n) / m with the unswept axis held fixed, y = per-group median
    squared l2 error; the fitted slope sits next to the predicted exponent
    1 - q/2.
    """
    if mode not in ("sweep-m", "sweep-n"):
        raise DomainError(f"unknown mode {mode!r}")
    if not records:
        raise DomainError("rate_report needs records")
    swept, fixed = ("m", "n") if mode == "sweep-m" else ("n", "m")
    fixed_vals = {getattr(r, fixed) for r in records}
    if len(fixed_vals) != 1:
        raise DomainError(f"{fixed} must be fixed for {mode}, got {sorted(fixed_vals)}")
    qs = {r.q for r in records}
    if len(qs) != 1:
        raise DomainError("records mix different q values")
    q = qs.pop()
    swept_vals = sorted({getattr(r, swept) for r in records})
    if len(swept_vals) < 3:
        raise DomainError(f"need >= 3 distinct {swept} values, got {len(swept_vals)}")
    points = []
    for v in swept_vals:
        ok = [
            r for r in records
            if getattr(r, swept) == v and r.error == ""
        ]
        if not ok:
            raise DomainError(f"all trials failed at {swept} = {v}")
        med = float(np.median([r.l2_err_sq for r in ok]))
        x = math.log(ok[0].n) / ok[0].m
        points.append((x, med))
    slope, intercept, r2 = fit_rate_exponent(points)
    return RateReport(
        mode=mode,
        slope=slope,
        intercept=intercept,
        r2=r2,
        theory_exponent=1.0 - q / 2.0,
        points=tuple(points),
    )


# ---------------------------------------------------------------------------
# CSV emission / ingestion (17 significant digits; floats round-trip exactly)
# ---------------------------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return "%.17g" % value


def _extra_columns(records) -> list[float]:
    ps = sorted({p for r in records for p in r.extra_losses})
    return ps


def _extra_header(p: float) -> str:
    return "lp_err_p%s" % _fmt(p)


def records_to_csv(records: list[TrialRecord]) -> str:
    """Render records as CSV text (header + one row per trial)."""
    extras = _extra_columns(records)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_CSV_FIELDS + [_extra_header(p) for p in extras])
    for rec in records:
        row = [_fmt(getattr(rec, f)) if f != "error" else rec.error
               for f in _CSV_FIELDS]
        row += [_fmt(rec.extra_losses.get(p, float("nan"))) for p in extras]
        writer.writerow(row)
    return buf.getvalue()


def write_records(records: list[TrialRecord], path) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(records_to_csv(records))


def read_records(path) -> list[TrialRecord]:
    with open(path, "r", encoding="ascii", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header[: len(_CSV_FIELDS)] != _CSV_FIELDS:
            raise ConfigError(f"unexpected CSV header in {path}")
        extra_names = header[len(_CSV_FIELDS):]
        records = []
        for row in reader:
            vals = dict(zip(header, row))
            extras = {
                float(name[len("lp_err_p"):]): float(vals[name])
                for name in extra_names
            }
            records.append(
                TrialRecord(
                    replicate=int(vals["replicate"]),
                    m=int(vals["m"]),
                    n=int(vals["n"]),
                    q=float(vals["q"]),
                    R_q=float(vals["R_q"]),
                    sigma_w=float(vals["sigma_w"]),
                    sigma_e=float(vals["sigma_e"]),
                    kappa_c_emp=float(vals["kappa_c_emp"]),
                    kappa_l_emp=float(vals["kappa_l_emp"]),
                    deviation_inf=float(vals["deviation_inf"]),
                    l2_err_sq=float(vals["l2_err_sq"]),
                    l1_err=float(vals["l1_err"]),
                    iterations=int(vals["iterations"]),
                    converged=vals["converged"] == "true",
                    seed_used=int(vals["seed_used"]),
                    error=vals["error"],
                    extra_losses=extras,
                )
            )
    return records


# ---------------------------------------------------------------------------
# Config files: JSON mirroring ExperimentConfig field names; unknown keys
# are a hard error (no silent typo tolerance).
# ---------------------------------------------------------------------------

_TOP_KEYS = {
    "q", "R_q", "m_grid", "n_grid", "noise", "replicates", "master_seed",
    "solver", "projections", "loss_ps",
}
_REQUIRED_KEYS = {"q", "R_q", "m_grid", "n_grid", "noise", "replicates",
                  "master_seed"}


def _build_section(cls, data: dict, name: str):
    allowed = {f.name for f in fields(cls)}
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in {name}: {sorted(unknown)}")
    try:
        return cls(**data)
    except (TypeError, DomainError) as exc:
        raise ConfigError(f"invalid {name} section: {exc}") from exc


def config_from_dict(data: dict) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError("config root must be an object")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    missing = _REQUIRED_KEYS - set(data)
    if missing:
        raise ConfigError(f"missing config keys: {sorted(missing)}")
    noise = _build_section(NoiseModel, data["noise"], "noise")
    solver = _build_section(SolverOptions, data.get("solver", {}), "solver")
    projections = _build_section(
        ProjectionOptions, data.get("projections", {}), "projections"
    )
    try:
        return ExperimentConfig(
            q=float(data["q"]),
            R_q=float(data["R_q"]),
            m_grid=tuple(int(m) for m in data["m_grid"]),
            n_grid=tuple(int(n) for n in data["n_grid"]),
            noise=noise,
            replicates=int(data["replicates"]),
            master_seed=int(data["master_seed"]),
            solver=solver,
            projections=projections,
            loss_ps=tuple(float(p) for p in data.get("loss_ps", (1.0, 2.0))),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return config_from_dict(data)
