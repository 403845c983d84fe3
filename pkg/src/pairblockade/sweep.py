"""Sweep configuration, grid execution and CSV emission."""

from __future__ import annotations

import csv
import io
import itertools
import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any

import numpy as np

from .errors import ConfigError, SimulationError, SingularParameterError, UndefinedCorrelationError
from .hilbert import HilbertDims
from .lindblad import build_liouvillian, standard_channels, steady_state
from .model import (
    DissipationParams,
    EffectiveParams,
    build_hamiltonian,
    interference_optimum,
    paper_defaults,
)
from .observables import cauchy_schwarz_gamma, default_tau_grid, g2_equal_time, g2_tau, photon_number

log = logging.getLogger(__name__)

WORKERS_ENV = "PAIRBLOCKADE_WORKERS"
CONVERGENCE_TOL = 1e-6

EFFECTIVE_FIELDS = tuple(f.name for f in fields(EffectiveParams))
DISSIPATION_FIELDS = tuple(f.name for f in fields(DissipationParams))
AXIS_UNITS = ("kappa", "g", "gamma", "kappa_a")
INTERFERENCE_MODES = ("off", "analytic_optimum", "analytic_eta", "explicit")
CORRELATION_PAIRS = {"aa": ("A", "A"), "bb": ("B", "B"), "ab": ("A", "B"), "ba": ("B", "A")}
SCALAR_OUTPUTS = ("n_s_a", "n_s_b", "g2_aa", "g2_bb", "g2_ab", "gamma_param")
TAU_OUTPUTS = tuple(f"g2_{k}_tau" for k in CORRELATION_PAIRS)
RESULT_COLUMNS = SCALAR_OUTPUTS + ("theta_used", "eta_used", "converged", "error")


@dataclass(frozen=True)
class Axis:
    name: str
    values: tuple[float, ...]
    unit: str = "kappa"
    spacing: str = "linear"

    @classmethod
    def from_dict(cls, entry: dict) -> "Axis":
        if not isinstance(entry, dict):
            raise ConfigError(f"axis must be an object, got {entry!r}")
        name = entry.get("name")
        if name not in EFFECTIVE_FIELDS + DISSIPATION_FIELDS:
            raise ConfigError(f"axis parameter {name!r} is not a model parameter")
        unit = entry.get("unit", "kappa")
        if unit not in AXIS_UNITS:
            raise ConfigError(f"axis unit {unit!r} not in {AXIS_UNITS}")
        spacing = entry.get("spacing", "linear")
        if "values" in entry:
            values = tuple(float(v) for v in entry["values"])
            spacing = entry.get("spacing", "explicit")
            if spacing not in ("explicit", "linear", "log"):
                raise ConfigError(f"axis spacing {spacing!r} must be 'explicit', 'linear' or 'log'")
        else:
            try:
                lo, hi, n = float(entry["min"]), float(entry["max"]), int(entry["points"])
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"axis {name!r} needs min/max/points or values: {exc}") from None
            if n < 2:
                raise ConfigError(f"axis {name!r} needs at least 2 points, got {n}")
            if spacing == "linear":
                values = tuple(np.linspace(lo, hi, n).tolist())
            elif spacing == "log":
                if lo <= 0 or hi <= 0:
                    raise ConfigError(f"log-spaced axis {name!r} needs positive bounds")
                values = tuple(np.geomspace(lo, hi, n).tolist())
            else:
                raise ConfigError(f"axis spacing {spacing!r} must be 'linear' or 'log'")
        if len(values) < 2:
            raise ConfigError(f"axis {name!r} needs at least 2 points")
        if not all(math.isfinite(v) for v in values):
            raise ConfigError(f"axis {name!r} has non-finite values")
        return cls(name, values, unit, spacing)

    def to_dict(self) -> dict:
        return {"name": self.name, "values": list(self.values), "unit": self.unit, "spacing": self.spacing}

    @property
    def column(self) -> str:
        return self.name if self.unit == "kappa" else f"{self.name}_over_{self.unit}"


@dataclass(frozen=True)
class SweepConfig:
    base: EffectiveParams
    dissipation: DissipationParams
    axis_1: Axis
    axis_2: Axis | None = None
    interference_mode: str = "off"
    cutoffs: HilbertDims = field(default_factory=HilbertDims)
    outputs: tuple[str, ...] = SCALAR_OUTPUTS
    tau_grid: tuple[float, ...] | None = None
    lock_stark_product: bool = True
    lock_detunings: bool = True
    convergence: str = "tail"
    name: str = ""

    def __post_init__(self):
        if self.interference_mode not in INTERFERENCE_MODES:
            raise ConfigError(f"interference mode {self.interference_mode!r} not in {INTERFERENCE_MODES}")
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise ConfigError("the two axes sweep the same parameter")
        drive = {"theta", "eta"} & set(names)
        if self.interference_mode == "analytic_optimum" and drive:
            raise ConfigError(f"cannot sweep {sorted(drive)} with analytic_optimum interference")
        if self.interference_mode == "analytic_eta" and "eta" in drive:
            raise ConfigError("cannot sweep eta with analytic_eta interference")
        if self.interference_mode == "off" and drive:
            raise ConfigError(f"cannot sweep {sorted(drive)} with interference off")
        if self.lock_stark_product and "u_b" in names:
            raise ConfigError("u_b is tied to g^2/u_a; disable lock_stark_product to sweep it")
        if self.lock_detunings and {"delta_b", "delta_r"} & set(names):
            raise ConfigError("delta_b/delta_r are tied to delta_a; disable lock_detunings to sweep them")
        for out in self.outputs:
            if out not in SCALAR_OUTPUTS + TAU_OUTPUTS:
                raise ConfigError(f"unknown output {out!r}")
        if self.tau_outputs and self.tau_grid is None:
            raise ConfigError("tau outputs requested without a tau_grid")
        if self.tau_grid is not None and any(t < 0 for t in self.tau_grid):
            raise ConfigError("tau_grid entries must be >= 0")
        if self.convergence not in ("tail", "refine"):
            raise ConfigError("convergence must be 'tail' or 'refine'")

    @property
    def axes(self) -> list[Axis]:
        return [a for a in (self.axis_1, self.axis_2) if a is not None]

    @property
    def tau_outputs(self) -> list[str]:
        return [o for o in self.outputs if o in TAU_OUTPUTS]

    @property
    def n_points(self) -> int:
        return int(np.prod([len(a.values) for a in self.axes]))

    def columns(self) -> list[str]:
        cols = []
        for a in self.axes:
            cols.append(a.name)
            if a.unit != "kappa":
                cols.append(a.column)
        return cols + list(RESULT_COLUMNS)

    def with_cutoff(self, n_max: int) -> "SweepConfig":
        return replace(self, cutoffs=HilbertDims(n_max, n_max))

    # -- serialization -------------------------------------------------

    @classmethod
    def from_dict(cls, doc: dict) -> "SweepConfig":
        if not isinstance(doc, dict):
            raise ConfigError("configuration must be a JSON object")
        known = {
            "name", "base", "axis_1", "axis_2", "interference", "cutoffs", "outputs",
            "tau_grid", "locks", "convergence", "description", "recipe",
        }
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        p0, d0 = paper_defaults()
        base = doc.get("base", {})
        eff_over = dict(base.get("effective", {}))
        diss_over = dict(base.get("dissipation", {}))
        for key, allowed in (("effective", EFFECTIVE_FIELDS), ("dissipation", DISSIPATION_FIELDS)):
            bad = set(base.get(key, {})) - set(allowed)
            if bad:
                raise ConfigError(f"unknown {key} parameters: {sorted(bad)}")
        bad = set(base) - {"effective", "dissipation"}
        if bad:
            raise ConfigError(f"unknown base sections: {sorted(bad)}")
        try:
            p = p0.replace(**{k: float(v) for k, v in eff_over.items()})
            d = d0.replace(**{k: float(v) for k, v in diss_over.items()})
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid base parameter: {exc}") from None

        locks = doc.get("locks", {})
        lock_sp = bool(locks.get("stark_product", True))
        lock_det = bool(locks.get("detunings", True))
        if lock_sp and "u_b" not in eff_over and p.u_a != 0:
            p = p.replace(u_b=p.g**2 / p.u_a)
        if lock_det:
            p = p.replace(delta_b=p.delta_a, delta_r=2 * p.delta_a)

        inter = doc.get("interference", {"mode": "off"})
        if isinstance(inter, str):
            inter = {"mode": inter}
        mode = inter.get("mode", "off")
        if mode == "explicit":
            try:
                p = p.replace(theta=float(inter["theta"]), eta=float(inter["eta"]))
            except (KeyError, TypeError, ValueError):
                raise ConfigError("explicit interference needs numeric 'theta' and 'eta'") from None
        elif mode == "off":
            p = p.replace(eta=0.0)

        cut = doc.get("cutoffs", {})
        try:
            dims = HilbertDims(int(cut.get("n_max_a", 5)), int(cut.get("n_max_b", 5)))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid cutoffs: {exc}") from None

        tau = doc.get("tau_grid")
        if isinstance(tau, dict):
            tau = tuple(default_tau_grid(float(tau.get("t_max", 10.0)), int(tau.get("points", 200))).tolist())
        elif tau is not None:
            tau = tuple(float(t) for t in tau)

        if "axis_1" not in doc:
            raise ConfigError("axis_1 is required")
        axis_2 = doc.get("axis_2")
        return cls(
            base=p,
            dissipation=d,
            axis_1=Axis.from_dict(doc["axis_1"]),
            axis_2=Axis.from_dict(axis_2) if axis_2 else None,
            interference_mode=mode,
            cutoffs=dims,
            outputs=tuple(doc.get("outputs", SCALAR_OUTPUTS)),
            tau_grid=tau,
            lock_stark_product=lock_sp,
            lock_detunings=lock_det,
            convergence=doc.get("convergence", "tail"),
            name=str(doc.get("name", "")),
        )

    def to_dict(self) -> dict:
        doc: dict[str, Any] = {
            "name": self.name,
            "base": {"effective": self.base.to_dict(), "dissipation": self.dissipation.to_dict()},
            "locks": {"stark_product": self.lock_stark_product, "detunings": self.lock_detunings},
            "axis_1": self.axis_1.to_dict(),
            "interference": {"mode": self.interference_mode},
            "cutoffs": {"n_max_a": self.cutoffs.n_max_a, "n_max_b": self.cutoffs.n_max_b},
            "outputs": list(self.outputs),
            "convergence": self.convergence,
        }
        if self.interference_mode == "explicit":
            doc["interference"].update(theta=self.base.theta, eta=self.base.eta)
        if self.axis_2 is not None:
            doc["axis_2"] = self.axis_2.to_dict()
        if self.tau_grid is not None:
            doc["tau_grid"] = list(self.tau_grid)
        return doc


def load_config(path: str | Path) -> SweepConfig:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from None
    return SweepConfig.from_dict(doc)


# -- execution -------------------------------------------------------------


def _unit_scale(unit: str, p: EffectiveParams, d: DissipationParams) -> float:
    return {"kappa": 1.0, "g": p.g, "gamma": d.gamma, "kappa_a": d.kappa_a}[unit]


def resolve_point(
    config: SweepConfig, values: tuple[float, ...]
) -> tuple[EffectiveParams, DissipationParams]:
    """Parameters at one grid point (axis values in their declared units)."""
    p, d = config.base, config.dissipation
    eff, diss = {}, {}
    for axis, v in zip(config.axes, values):
        target = eff if axis.name in EFFECTIVE_FIELDS else diss
        target[axis.name] = v * _unit_scale(axis.unit, config.base, config.dissipation)
    p = p.replace(**eff)
    d = d.replace(**diss)
    if config.lock_stark_product and p.u_a != 0:
        p = p.replace(u_b=p.g**2 / p.u_a)
    if config.lock_detunings:
        p = p.replace(delta_b=p.delta_a, delta_r=2 * p.delta_a)
    if config.interference_mode == "analytic_optimum":
        theta, eta = interference_optimum(p, d)
        p = p.replace(theta=theta, eta=eta)
    elif config.interference_mode == "analytic_eta":
        _, eta = interference_optimum(p, d)
        p = p.replace(eta=eta)
    elif config.interference_mode == "off":
        p = p.replace(eta=0.0)
    return p, d


def _observables(p: EffectiveParams, d: DissipationParams, dims: HilbertDims):
    lv = build_liouvillian(build_hamiltonian(p, dims), standard_channels(dims, d))
    rho = steady_state(lv)
    out: dict[str, float | None] = {
        "n_s_a": photon_number(rho, "A"),
        "n_s_b": photon_number(rho, "B"),
    }
    errors = []
    for name, (o, op) in (("g2_aa", ("A", "A")), ("g2_bb", ("B", "B")), ("g2_ab", ("A", "B"))):
        try:
            out[name] = g2_equal_time(rho, o, op)
        except UndefinedCorrelationError as exc:
            out[name] = None
            errors.append(type(exc).__name__)
    out["gamma_param"] = None
    if not errors:
        rep = cauchy_schwarz_gamma(rho)
        out["gamma_param"] = rep.gamma_param
        if rep.gamma_param is None:
            errors.append(UndefinedCorrelationError.__name__)
    return lv, rho, out, errors


def _tail_weight(rho, dims: HilbertDims) -> float:
    pops = np.real(np.diag(rho.matrix)).reshape(dims.shape)
    top = pops[dims.n_max_a].sum() + pops[:, dims.n_max_b].sum() - pops[dims.n_max_a, dims.n_max_b].sum()
    return float(max(top, 0.0))


def _is_converged(config, p, d, out) -> bool:
    if config.convergence == "tail":
        return out.pop("_tail") <= CONVERGENCE_TOL * max(out["n_s_a"], out["n_s_b"], 1e-300)
    out.pop("_tail", None)
    n = config.cutoffs
    finer = HilbertDims(n.n_max_a + 1, n.n_max_b + 1)
    _, _, ref, _ = _observables(p, d, finer)
    for key in SCALAR_OUTPUTS:
        a, b = out.get(key), ref.get(key)
        if a is None or b is None:
            continue
        if abs(a - b) > CONVERGENCE_TOL * max(abs(a), abs(b), 1e-12):
            return False
    return True


def evaluate_point(config: SweepConfig, values: tuple[float, ...]) -> tuple[dict, list[dict]]:
    """One grid point: the result row and (optionally) its tau-series rows."""
    row: dict[str, Any] = {}
    for axis, v in zip(config.axes, values):
        row[axis.name] = v * _unit_scale(axis.unit, config.base, config.dissipation)
        if axis.unit != "kappa":
            row[axis.column] = v
    for key in RESULT_COLUMNS:
        row[key] = None
    row["error"] = ""
    tau_rows: list[dict] = []
    try:
        p, d = resolve_point(config, values)
        row["theta_used"], row["eta_used"] = p.theta, p.eta
        lv, rho, out, errors = _observables(p, d, config.cutoffs)
        out["_tail"] = _tail_weight(rho, config.cutoffs)
        row["converged"] = _is_converged(config, p, d, out)
        row.update(out)
        row["error"] = ";".join(sorted(set(errors)))
        for name in config.tau_outputs:
            o, op = CORRELATION_PAIRS[name[3:5]]
            pts = g2_tau(lv, rho, o, op, config.tau_grid)
            for pt in pts:
                tau_rows.append({**{a.column: row[a.column] for a in config.axes}, "series": name,
                                 "tau": pt.tau, "value": pt.value})
    except (SimulationError, SingularParameterError, np.linalg.LinAlgError) as exc:
        row["error"] = type(exc).__name__
        log.info("grid point %s failed: %s", values, exc)
    return row, tau_rows


def _evaluate_star(args):
    return evaluate_point(*args)


def grid_values(config: SweepConfig) -> list[tuple[float, ...]]:
    return list(itertools.product(*(a.values for a in config.axes)))


def resolve_workers(workers: int | None = None) -> int:
    if workers is None:
        env = os.environ.get(WORKERS_ENV)
        workers = int(env) if env else 1
    return max(1, int(workers))


@dataclass
class SweepResult:
    config: SweepConfig
    rows: list[dict]
    tau_rows: list[dict] = field(default_factory=list)

    @property
    def failed(self) -> list[dict]:
        return [r for r in self.rows if r["error"]]

    def column(self, name: str) -> np.ndarray:
        return np.array([np.nan if r.get(name) is None else float(r[name]) for r in self.rows])

    def to_csv(self) -> str:
        return format_csv(self.config.columns(), self.rows)

    def tau_csv(self) -> str:
        cols = [a.column for a in self.config.axes] + ["series", "tau", "value"]
        return format_csv(cols, self.tau_rows)


def run_sweep(config: SweepConfig, workers: int | None = None) -> SweepResult:
    """Evaluate every grid point; rows come back in row-major axis order."""
    points = grid_values(config)
    workers = resolve_workers(workers)
    if workers == 1 or len(points) == 1:
        results = [evaluate_point(config, v) for v in points]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunk = max(1, len(points) // (4 * workers))
            results = list(pool.map(_evaluate_star, [(config, v) for v in points], chunksize=chunk))
    rows = [r for r, _ in results]
    tau_rows = [t for _, ts in results for t in ts]
    return SweepResult(config, rows, tau_rows)


# -- CSV ---------------------------------------------------------------------


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float, np.floating, np.integer)):
        return format(float(v), ".12g")
    return str(v)


def format_csv(columns: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r.get(c)) for c in columns])
    return buf.getvalue()


def _parse(v: str):
    if v == "":
        return None
    if v in ("true", "false"):
        return v == "true"
    try:
        return float(v)
    except ValueError:
        return v


def read_csv(text: str) -> tuple[list[str], list[dict]]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None:
        return [], []
    rows = []
    for rec in reader:
        row = {c: _parse(v) for c, v in zip(header, rec)}
        if "error" in row and row["error"] is None:
            row["error"] = ""
        rows.append(row)
    return header, rows


def sidecar_paths(csv_path: Path) -> dict[str, Path]:
    stem = csv_path.with_suffix("")
    return {
        "config": stem.with_name(stem.name + ".config.json"),
        "tau": stem.with_name(stem.name + ".tau.csv"),
        "recipe": stem.with_name(stem.name + ".recipe.txt"),
        "figure": stem.with_name(stem.name + ".png"),
    }


def write_result(result: SweepResult, csv_path: str | Path) -> dict[str, Path]:
    csv_path = Path(csv_path)
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    csv_path.write_text(result.to_csv())
    paths = sidecar_paths(csv_path)
    paths["config"].write_text(json.dumps(result.config.to_dict(), indent=2) + "\n")
    written = {"csv": csv_path, "config": paths["config"]}
    if result.tau_rows:
        paths["tau"].write_text(result.tau_csv())
        written["tau"] = paths["tau"]
    return written


def load_result(csv_path: str | Path) -> SweepResult:
    """Rebuild a :class:`SweepResult` from a CSV and its ``.config.json`` sidecar."""
    csv_path = Path(csv_path)
    _, rows = read_csv(csv_path.read_text())
    paths = sidecar_paths(csv_path)
    if not paths["config"].exists():
        raise ConfigError(f"missing configuration sidecar {paths['config']}")
    config = SweepConfig.from_dict(json.loads(paths["config"].read_text()))
    tau_rows = []
    if paths["tau"].exists():
        _, tau_rows = read_csv(paths["tau"].read_text())
    return SweepResult(config, rows, tau_rows)
