"""Shape-level checks on a finished sweep.

Each figure preset has a handful of qualitative expectations (where a peak
sits, which side of a resonance is antibunched, how a curve trends). The
checks here measure those features from the stored rows and compare them
against fixed tolerances. Datasets with an unknown name get the generic
checks only.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .sweep import SweepResult, evaluate_point

log = logging.getLogger(__name__)

PAIR_SYMMETRY_TOL = 1e-8
PEAK_TOL_G = 0.05  # two grid steps of the 161-point detuning axis
ANTIBUNCHING_WINDOW = 10.0  # units of 1/kappa
LONG_DELAY = 50.0


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    measured: str
    expected: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.measured} (expected {self.expected})"


@dataclass
class Report:
    dataset: str
    checks: list[Check] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def render(self) -> str:
        lines = [f"report for {self.dataset or '<unnamed>'}"]
        lines += [f"warning: {w}" for w in self.warnings]
        lines += [c.line() for c in self.checks]
        lines.append(f"{sum(c.passed for c in self.checks)}/{len(self.checks)} checks passed")
        return "\n".join(lines) + "\n"


# -- helpers -----------------------------------------------------------------


def _col(result: SweepResult, name: str) -> np.ndarray:
    return result.column(name)


def _x(result: SweepResult) -> np.ndarray:
    return _col(result, result.config.axis_1.column)


def _nearest(x: np.ndarray, target: float) -> int:
    return int(np.argmin(np.abs(x - target)))


def _series(result: SweepResult, name: str):
    """Split a sweep into curves along its longer axis, keyed by the shorter axis value."""
    cfg = result.config
    if cfg.axis_2 is None:
        return {None: (_x(result), _col(result, name))}
    long_, short = sorted(cfg.axes, key=lambda a: len(a.values), reverse=True)
    x, key, z = _col(result, long_.column), _col(result, short.column), _col(result, name)
    return {v: (x[key == v], z[key == v]) for v in dict.fromkeys(key.tolist())}


def _reference(result: SweepResult, x_value: float, **overrides) -> dict:
    """Evaluate one extra point of the same configuration with altered drive."""
    cfg = result.config
    mode = overrides.pop("interference_mode", cfg.interference_mode)
    ref = replace(cfg, axis_2=None, interference_mode=mode, base=cfg.base.replace(**overrides))
    row, _ = evaluate_point(ref, (x_value,))
    return row


def _check(name: str, ok: bool, measured: str, expected: str) -> Check:
    return Check(name, bool(ok), measured, expected)


# -- generic -----------------------------------------------------------------


def generic_checks(result: SweepResult) -> list[Check]:
    cfg = result.config
    out = [
        _check("row count", len(result.rows) == cfg.n_points, f"{len(result.rows)} rows", f"{cfg.n_points}"),
        _check("all points evaluated", not result.failed, f"{len(result.failed)} failed", "0 failed"),
    ]
    conv = [r["converged"] for r in result.rows if not r["error"]]
    out.append(_check("cutoff converged", all(conv), f"{sum(conv)}/{len(conv)} converged", "all"))
    if "kappa_b" in {a.name for a in cfg.axes}:
        kb = _col(result, "kappa_b")
        sym = np.isclose(kb, _col(result, "kappa_a") if "kappa_a" in result.rows[0] else cfg.dissipation.kappa_a)
    else:
        sym = np.full(len(result.rows), cfg.dissipation.kappa_a == cfg.dissipation.kappa_b)
    na, nb = _col(result, "n_s_a"), _col(result, "n_s_b")
    if sym.any():
        dev = float(np.nanmax(np.abs(na[sym] - nb[sym])))
        out.append(_check("pair symmetry n_s_a = n_s_b", dev < PAIR_SYMMETRY_TOL, f"max |diff| {dev:.2e}",
                          f"< {PAIR_SYMMETRY_TOL:g}"))
    return out


# -- per-figure checks -------------------------------------------------------


def _peak_checks(result: SweepResult) -> list[Check]:
    x, n = _x(result), _col(result, "n_s_a")
    out = []
    for side, lo, hi in (("blue", -2.0, 0.0), ("red", 0.0, 2.0)):
        m = (x > lo) & (x < hi)
        xp = x[m][np.nanargmax(n[m])]
        target = -0.5 if side == "blue" else 0.5
        out.append(_check(f"n_s peak on {side} side at delta_a/g = {target:+.1f}",
                          abs(xp - target) <= PEAK_TOL_G, f"peak at {xp:+.4f}", f"{target:+.1f} +/- {PEAK_TOL_G}"))
    nb, nr = n[_nearest(x, -0.5)], n[_nearest(x, 0.5)]
    asym = abs(nb - nr) / max(nb, nr)
    out.append(_check("n_s red/blue symmetric", asym < 0.05, f"rel diff {asym:.3f}", "< 0.05"))
    return out


def _sideband_min(result: SweepResult, name: str, side: float, label: str) -> list[Check]:
    x, g = _x(result), _col(result, name)
    xm = x[np.nanargmin(g)]
    gb, gr = g[_nearest(x, -0.5)], g[_nearest(x, 0.5)]
    low, high = (gb, gr) if side < 0 else (gr, gb)
    return [
        _check(f"{name} minimum near the {label} sideband", abs(xm - side) <= 2 * PEAK_TOL_G,
               f"argmin at {xm:+.4f}", f"{side:+.1f} +/- {2 * PEAK_TOL_G}"),
        _check(f"{name} lower on {label} sideband than opposite", low < high,
               f"{low:.4g} vs {high:.4g}", f"{label} < opposite"),
    ]


def check_fig2a(r):
    return _peak_checks(r) + _sideband_min(r, "g2_aa", 0.5, "red")


def check_fig2b(r):
    return _peak_checks(r) + _sideband_min(r, "g2_bb", -0.5, "blue")


def check_fig2c(r):
    return _peak_checks(r)


def check_fig2d(r):
    s = _series(r, "g2_aa")
    sb = _series(r, "g2_bb")
    red_u, red_aa = s[0.5]
    blue_u, blue_bb = sb[-0.5]
    i = _nearest(red_u, 1.0)
    j = _nearest(blue_u, 1.0)
    rel = abs(red_aa[i] - blue_bb[j]) / blue_bb[j]
    up = red_u >= 1.0
    lo = blue_u <= 1.0
    far = (red_u > 0.5) & (red_u < 2.0)
    return [
        _check("red g2_aa equals blue g2_bb at U_a/g = 1", rel < 1e-6, f"rel diff {rel:.2e}", "< 1e-6"),
        _check("red g2_aa decreases for U_a/g > 1", np.all(np.diff(red_aa[up]) < 0),
               f"{red_aa[up][0]:.3g} -> {red_aa[up][-1]:.3g}", "strictly decreasing"),
        _check("blue g2_bb decreases as U_a/g drops below 1", np.all(np.diff(blue_bb[lo]) > 0),
               f"{blue_bb[lo][0]:.3g} at U_a/g={blue_u[lo][0]:.2g}", "strictly increasing in U_a/g"),
        _check("no strong blockade for 0.5 < U_a/g < 2", np.all(red_aa[far] > 0.01) and np.all(sb[-0.5][1][far] > 0.01),
               f"min {min(red_aa[far].min(), sb[-0.5][1][far].min()):.3g}", "> 0.01"),
    ]


def _theta_opt(r) -> float:
    from .model import interference_optimum

    p = r.config.base
    p = p.replace(delta_a=-0.5 * p.g, delta_b=-0.5 * p.g, delta_r=-p.g)
    return interference_optimum(p, r.config.dissipation)[0]


def check_fig3a(r):
    x, th, g = _x(r), _col(r, r.config.axis_2.column), _col(r, "g2_aa")
    i = int(np.nanargmin(g))
    step = float(np.diff(np.unique(th)).max())
    t0 = _theta_opt(r)
    dth = abs((th[i] - t0 + np.pi) % (2 * np.pi) - np.pi)
    return [
        _check("strong blockade region exists", g[i] < 0.01, f"min g2_aa {g[i]:.3g}", "< 0.01"),
        _check("blockade minimum at the blue sideband", abs(x[i] + 0.5) <= 2 * PEAK_TOL_G,
               f"delta_a/g = {x[i]:+.3f}", "-0.5"),
        _check("blockade minimum at the optimal phase", dth <= step, f"theta = {th[i]:.3f} (optimum {t0:.3f})",
               f"within {step:.3f}"),
    ]


def check_fig3b(r):
    x, th, n = _x(r), _col(r, r.config.axis_2.column), _col(r, "n_s_a")
    g = _col(r, "g2_aa")
    ok = (g < 0.01)
    nmax = float(n[ok].max()) if ok.any() else 0.0
    return [
        _check("finite photon number throughout", np.all(n > 0), f"min n_s {n.min():.3g}", "> 0"),
        _check("usable photon flux inside the blockade region", nmax > 1e-3, f"max n_s with g2_aa<0.01: {nmax:.3g}",
               "> 1e-3"),
    ]


def check_fig4a(r):
    x, g = _x(r), _col(r, "g2_aa")
    gb = g[_nearest(x, -0.5)]
    ref = _reference(r, -0.5, eta=0.0, interference_mode="explicit")["g2_aa"]
    return [
        _check("g2_aa about 0.01 at the blue sideband", 0.005 <= gb <= 0.02, f"{gb:.4g}", "0.01 within x2"),
        _check("interference suppresses g2_aa by > 10x", ref / gb > 10, f"{ref:.3g} -> {gb:.3g}", "ratio > 10"),
    ]


def _window_peak(r, side: float, half_width: float = 0.1) -> tuple[float, float]:
    """Largest n_s_a within +/- half_width (units of g) of a sideband, with and without drive interference."""
    x, n = _x(r), _col(r, "n_s_a")
    m = np.abs(x - side) <= half_width + 1e-12
    ref = [_reference(r, v, eta=0.0, interference_mode="explicit")["n_s_a"] for v in x[m]]
    return float(n[m].max()), float(max(ref))


def check_fig4b(r):
    nb, rb = _window_peak(r, -0.5)
    nr, rr = _window_peak(r, 0.5)
    return [
        _check("n_s reduced at the blue sideband", nb < rb, f"peak {rb:.3g} -> {nb:.3g}", "decrease"),
        _check("n_s enhanced at the red sideband", nr > rr, f"peak {rr:.3g} -> {nr:.3g}", "increase"),
    ]


def check_fig4c(r):
    rows = [t for t in r.tau_rows if t["series"] == "g2_aa_tau"]
    key = r.config.axis_1.column
    blue = sorted((t for t in rows if abs(t[key] + 0.5) < 1e-9), key=lambda t: t["tau"])
    if not blue:
        return [_check("blue sideband tau series present", False, "missing", "present")]
    tau = np.array([t["tau"] for t in blue])
    val = np.array([t["value"] for t in blue])
    g0 = val[tau == 0][0]
    later = val[(tau > 0) & (tau <= ANTIBUNCHING_WINDOW)]
    return [
        _check("g2_aa(0) about 0.01 at the blue sideband", 0.005 <= g0 <= 0.02, f"{g0:.4g}", "0.01 within x2"),
        _check("antibunching g2_aa(0) < g2_aa(tau)", np.all(later > g0), f"min over tau>0 {later.min():.4g}",
               f"> {g0:.4g}"),
        _check("g2_aa(tau) -> 1 at long delay", tau[-1] >= LONG_DELAY * (1 - 1e-9) and abs(val[-1] - 1) < 0.05,
               f"{val[-1]:.4g} at tau={tau[-1]:g}", f"1 +/- 0.05 at tau >= {LONG_DELAY:g}"),
    ]


def check_fig4d(r):
    s = _series(r, "g2_aa")
    vals = {k: v[1][_nearest(v[0], -0.5)] for k, v in s.items()}
    spread = max(vals.values()) / min(vals.values())
    return [
        _check("blockade robust to dephasing up to 10 gamma", max(vals.values()) < 0.05 and spread < 1.5,
               ", ".join(f"{k:g}: {v:.3g}" for k, v in vals.items()), "all < 0.05, spread < 1.5x"),
    ]


def check_fig4e(r):
    u, g = _x(r), _col(r, "g2_aa")
    below = g < 1e-4
    cross = float(u[np.argmax(below)]) if below.any() else float("nan")
    tail = u > 7.8
    return [
        _check("g2_aa < 1e-4 for all U_a/g > 7.8", np.all(g[tail] < 1e-4),
               f"max {g[tail].max():.3g}", "< 1e-4"),
        _check("crossing of 1e-4 near U_a/g = 7.8", abs(cross - 7.8) <= 0.5, f"{cross:.3f}", "7.8 +/- 0.5"),
        _check("g2_aa falls by over two decades across the sweep", g[0] / g[-1] > 100,
               f"{g[0]:.3g} -> {g[-1]:.3g}", "ratio > 100"),
    ]


def check_fig4f(r):
    n = _col(r, "n_s_a")
    return [_check("n_s increases with U_a/g", np.all(np.diff(n) > 0), f"{n[0]:.3g} -> {n[-1]:.3g}",
                   "strictly increasing")]


def check_fig5a(r):
    x, g = _x(r), _col(r, "g2_ab")
    inner = np.arange(1, len(g) - 1)
    wells = [float(x[k]) for k in inner if g[k] < g[k - 1] and g[k] < g[k + 1]]
    return [
        _check("pair bunching g2_ab > 1 everywhere", np.all(g > 1), f"min {g.min():.3g}", "> 1"),
        _check("double well: one local minimum near each sideband", len(wells) == 2 and all(
            abs(w - s) <= 2 * PEAK_TOL_G for w, s in zip(wells, (-0.5, 0.5))),
            "minima at " + ", ".join(f"{w:+.3f}" for w in wells), "-0.5 and +0.5, +/- 0.1"),
    ]


def check_fig5b(r):
    x, gam = _x(r), _col(r, "gamma_param")
    out = []
    for side in (-0.5, 0.5):
        m = np.abs(x - side) <= 0.1
        v = gam[m]
        out.append(_check(f"Cauchy-Schwarz violated near delta_a/g = {side:+.1f}", np.all(v > 1),
                          f"min Gamma {np.nanmin(v):.3g}", "> 1"))
    out.append(_check("Gamma peak above 10", np.nanmax(gam) > 10, f"{np.nanmax(gam):.3g}", "> 10"))
    return out


def _kappa_trend(r, name: str, side: float) -> tuple[list[float], list[float]]:
    s = _series(r, name)
    keys = sorted(s)
    return keys, [s[k][1][_nearest(s[k][0], side)] for k in keys]


def check_figS2(r):
    out = []
    for side, label in ((-0.5, "blue"), (0.5, "red")):
        ks, vals = _kappa_trend(r, "g2_aa", side)
        out.append(_check(f"{label}-sideband g2_aa grows as kappa_b/kappa_a drops", np.all(np.diff(vals) < 0),
                          ", ".join(f"{k:g}: {v:.3g}" for k, v in zip(ks, vals)), "decreasing in kappa_b"))
    s = _series(r, "n_s_a")
    peaks, asym = [], []
    for k in sorted(s):
        x, n = s[k]
        peaks.append(float(n.max()))
        nb, nr = n[_nearest(x, -0.5)], n[_nearest(x, 0.5)]
        asym.append(abs(nb - nr) / max(nb, nr))
    out.append(_check("n_s red/blue symmetric for every kappa_b", max(asym) < 0.05, f"max rel diff {max(asym):.3f}",
                      "< 0.05"))
    out.append(_check("n_s peak grows with kappa_b/kappa_a", np.all(np.diff(peaks) > 0),
                      ", ".join(f"{k:g}: {v:.3g}" for k, v in zip(sorted(s), peaks)), "increasing in kappa_b"))
    return out


def check_figS4(r):
    ks, g = _kappa_trend(r, "g2_aa", -0.5)
    _, nb = _kappa_trend(r, "n_s_a", -0.5)
    _, nr = _kappa_trend(r, "n_s_a", 0.5)
    fmt = lambda vals: ", ".join(f"{k:g}: {v:.3g}" for k, v in zip(ks, vals))  # noqa: E731
    return [
        _check("blue-sideband g2_aa grows as kappa_b/kappa_a drops", np.all(np.diff(g) < 0), fmt(g),
               "decreasing in kappa_b"),
        _check("blue-sideband n_s grows as kappa_b/kappa_a drops", np.all(np.diff(nb) < 0), fmt(nb),
               "decreasing in kappa_b"),
        _check("red-sideband n_s grows as kappa_b/kappa_a drops", np.all(np.diff(nr) < 0), fmt(nr),
               "decreasing in kappa_b"),
    ]


FIGURE_CHECKS: dict[str, Callable[[SweepResult], list[Check]]] = {
    "fig2a": check_fig2a, "fig2b": check_fig2b, "fig2c": check_fig2c, "fig2d": check_fig2d,
    "fig3a": check_fig3a, "fig3b": check_fig3b, "fig4a": check_fig4a, "fig4b": check_fig4b,
    "fig4c": check_fig4c, "fig4d": check_fig4d, "fig4e": check_fig4e, "fig4f": check_fig4f,
    "fig5a": check_fig5a, "fig5b": check_fig5b, "figS2": check_figS2, "figS4": check_figS4,
}


def build_report(result: SweepResult) -> Report:
    """Run the generic checks and, for known presets, the figure checks."""
    rep = Report(result.config.name)
    if not result.rows:
        rep.warnings.append("dataset has no rows; all checks pass vacuously")
        log.warning("empty dataset %s", result.config.name)
        return rep
    rep.checks += generic_checks(result)
    fn = FIGURE_CHECKS.get(result.config.name)
    if fn is None:
        rep.warnings.append("no figure-specific checks for this dataset")
    elif result.failed:
        rep.warnings.append("figure checks skipped because some points failed")
    else:
        rep.checks += fn(result)
    return rep
