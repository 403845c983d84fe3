"""Render sweep results to image files with matplotlib (Agg backend)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .sweep import SCALAR_OUTPUTS, SweepResult  # noqa: E402

LOG_QUANTITIES = {"g2_aa", "g2_bb", "g2_ab", "gamma_param"}
LABELS = {
    "n_s_a": r"$n_s^{(a)}$",
    "n_s_b": r"$n_s^{(b)}$",
    "g2_aa": r"$g^{(2)}_{aa}(0)$",
    "g2_bb": r"$g^{(2)}_{bb}(0)$",
    "g2_ab": r"$g^{(2)}_{ab}(0)$",
    "gamma_param": r"$\Gamma$",
}
STYLES = ["-", "--", ":", "-."]

plt.rcParams.update({"font.size": 10, "axes.linewidth": 0.8, "lines.linewidth": 1.4})


def _axis_label(axis) -> str:
    return axis.column.replace("_over_", " / ")


def _line_panel(ax, x, ys: dict[str, np.ndarray], xlabel: str, log_x: bool = False):
    for (name, y), style in zip(ys.items(), STYLES * 4):
        ax.plot(x, y, style, marker="o" if len(x) < 10 else None, label=LABELS.get(name, name))
    if any(n in LOG_QUANTITIES for n in ys):
        ax.set_yscale("log")
    if log_x:
        ax.set_xscale("log")
    ax.set_xlabel(xlabel)
    ax.legend(frameon=False, fontsize=8)


def render(result: SweepResult, path: str | Path) -> Path:
    """Write one figure for a sweep: curves for 1-axis sweeps and short second
    axes, a heatmap when both axes are long, plus a tau panel if present."""
    cfg = result.config
    outputs = [o for o in cfg.outputs if o in SCALAR_OUTPUTS] or ["n_s_a"]
    n_panels = len(outputs) + (1 if result.tau_rows else 0)
    ncols = min(3, n_panels)
    nrows = -(-n_panels // ncols)
    fig, grid = plt.subplots(nrows, ncols, figsize=(3.8 * ncols, 3.0 * nrows), squeeze=False)
    axes = grid.ravel()
    for ax in axes[n_panels:]:
        ax.set_visible(False)
    axes = axes[:n_panels]

    if cfg.axis_2 is None:
        x = np.array(cfg.axis_1.values)
        for ax, name in zip(axes, outputs):
            _line_panel(ax, x, {name: result.column(name)}, _axis_label(cfg.axis_1),
                        cfg.axis_1.spacing == "log")
    else:
        n1, n2 = len(cfg.axis_1.values), len(cfg.axis_2.values)
        short, long_ = (cfg.axis_1, cfg.axis_2) if n1 <= n2 else (cfg.axis_2, cfg.axis_1)
        if len(short.values) <= 6:
            for ax, name in zip(axes, outputs):
                grid = result.column(name).reshape(n1, n2)
                if short is cfg.axis_2:
                    grid = grid.T
                curves = {f"{short.column}={v:g}": grid[i] for i, v in enumerate(short.values)}
                _line_panel(ax, np.array(long_.values), curves, _axis_label(long_), long_.spacing == "log")
                if name in LOG_QUANTITIES:
                    ax.set_yscale("log")
                ax.set_ylabel(LABELS.get(name, name))
        else:
            for ax, name in zip(axes, outputs):
                z = result.column(name).reshape(n1, n2).T
                if name in LOG_QUANTITIES:
                    z = np.log10(z)
                mesh = ax.pcolormesh(cfg.axis_1.values, cfg.axis_2.values, z, shading="nearest", cmap="coolwarm")
                fig.colorbar(mesh, ax=ax, label=("log10 " if name in LOG_QUANTITIES else "") + name)
                ax.set_xlabel(_axis_label(cfg.axis_1))
                ax.set_ylabel(_axis_label(cfg.axis_2))

    if result.tau_rows:
        ax = axes[-1]
        key = cfg.axis_1.column
        for i, v in enumerate(sorted({r[key] for r in result.tau_rows})):
            sel = [r for r in result.tau_rows if r[key] == v]
            ax.plot([r["tau"] for r in sel], [r["value"] for r in sel], STYLES[i % 4],
                    label=f"{sel[0]['series']}, {key}={v:g}")
        # symlog keeps tau = 0 on the axis while resolving the short-delay structure
        positive = [r["tau"] for r in result.tau_rows if r["tau"] > 0]
        if positive:
            ax.set_xscale("symlog", linthresh=min(positive))
        ax.set_xlabel(r"$\kappa\tau$")
        ax.legend(frameon=False, fontsize=8)

    fig.suptitle(cfg.name or "sweep", fontsize=10)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
