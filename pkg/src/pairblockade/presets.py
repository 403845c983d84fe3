"""Figure presets: resolved sweep configurations for each reproduced panel.

Some values are repository choices, and the preset descriptions say so:

* the detuning window is Delta_a/g in [-2, 2] with 161 points, so both
  sidebands Delta_a/g = -1/2 and +1/2 fall exactly on the grid;
* fig2d sweeps U_a/g log-spaced over [0.1, 10];
* fig4d uses gamma_d in {1, 5, 10} x gamma;
* figS2 and figS4 use kappa_b in {0.5, 1, 2} x kappa_a.
"""

from __future__ import annotations

import copy
import math

from .errors import ConfigError
from .sweep import SweepConfig

DETUNING_AXIS = {"name": "delta_a", "min": -2.0, "max": 2.0, "points": 161, "unit": "g"}
SIDEBANDS_AXIS = {"name": "delta_a", "values": [-0.5, 0.5], "unit": "g"}
BLUE_SIDEBAND = {"delta_a": -1.0}  # -g/2 with g = 2


def _cfg(**kw) -> dict:
    doc = {
        "base": {"effective": {"u_a": 4.0}},
        "interference": {"mode": "off"},
        "cutoffs": {"n_max_a": 5, "n_max_b": 5},
    }
    doc.update(kw)
    return doc


_PRESETS: dict[str, dict] = {
    "fig2a": _cfg(
        axis_1=DETUNING_AXIS,
        outputs=["g2_aa", "g2_bb"],
        description="g2_oo(0) vs Delta_a at U_a/g = 2, eta = 0.",
        recipe="x: delta_a_over_g; y (log): g2_aa solid, g2_bb dashed.",
    ),
    "fig2b": _cfg(
        base={"effective": {"u_a": 1.0}},
        axis_1=DETUNING_AXIS,
        outputs=["g2_aa", "g2_bb"],
        description="g2_oo(0) vs Delta_a at U_a/g = 1/2, eta = 0.",
        recipe="x: delta_a_over_g; y (log): g2_aa solid, g2_bb dashed.",
    ),
    "fig2c": _cfg(
        axis_1=DETUNING_AXIS,
        outputs=["n_s_a", "n_s_b"],
        description="Steady photon numbers vs Delta_a at U_a/g = 2, eta = 0.",
        recipe="x: delta_a_over_g; y: n_s_a solid, n_s_b dashed (curves coincide).",
    ),
    "fig2d": _cfg(
        axis_1=SIDEBANDS_AXIS,
        axis_2={"name": "u_a", "min": 0.1, "max": 10.0, "points": 101, "spacing": "log", "unit": "g"},
        outputs=["g2_aa", "g2_bb"],
        description=(
            "g2 vs U_a/g with eta = 0: g2_aa at the red sideband (Delta_a/g = 1/2) and "
            "g2_bb at the blue sideband (Delta_a/g = -1/2). U_a/g range is a repository choice."
        ),
        recipe="x (log): u_a_over_g; y (log): g2_aa from rows delta_a_over_g=0.5, g2_bb from rows -0.5.",
    ),
    "fig3a": _cfg(
        axis_1={"name": "delta_a", "min": -2.0, "max": 2.0, "points": 41, "unit": "g"},
        axis_2={"name": "theta", "min": -math.pi, "max": math.pi, "points": 41},
        interference={"mode": "analytic_eta"},
        outputs=["g2_aa"],
        description="log10 g2_aa(0) over (Delta_a, theta), eta from the interference optimum, U_a/g = 2.",
        recipe="heatmap: x delta_a_over_g, y theta, colour log10(g2_aa).",
    ),
    "fig3b": _cfg(
        axis_1={"name": "delta_a", "min": -2.0, "max": 2.0, "points": 41, "unit": "g"},
        axis_2={"name": "theta", "min": -math.pi, "max": math.pi, "points": 41},
        interference={"mode": "analytic_eta"},
        outputs=["n_s_a"],
        description="n_s_a over (Delta_a, theta), eta from the interference optimum, U_a/g = 2.",
        recipe="heatmap: x delta_a_over_g, y theta, colour n_s_a.",
    ),
    "fig4a": _cfg(
        axis_1=DETUNING_AXIS,
        interference={"mode": "analytic_optimum"},
        outputs=["g2_aa"],
        description="g2_aa(0) vs Delta_a with the interference optimum, U_a/g = 2.",
        recipe="x: delta_a_over_g; y (log): g2_aa; overlay fig2a g2_aa for the eta = 0 reference.",
    ),
    "fig4b": _cfg(
        axis_1=DETUNING_AXIS,
        interference={"mode": "analytic_optimum"},
        outputs=["n_s_a"],
        description="n_s_a vs Delta_a with the interference optimum, U_a/g = 2.",
        recipe="x: delta_a_over_g; y: n_s_a; overlay fig2c n_s_a for the eta = 0 reference.",
    ),
    "fig4c": _cfg(
        axis_1=SIDEBANDS_AXIS,
        interference={"mode": "analytic_optimum"},
        outputs=["g2_aa", "g2_aa_tau"],
        tau_grid={"t_max": 50.0, "points": 240},
        description=(
            "g2_aa(tau) at both sidebands with the interference optimum, U_a/g = 2; "
            "the panel is the Delta_a/g = -1/2 series in the .tau.csv companion."
        ),
        recipe="x: tau (1/kappa), log axis, 0 to 10 for the panel; y: value from .tau.csv rows with delta_a_over_g = -0.5.",
    ),
    "fig4d": _cfg(
        axis_1={"name": "gamma_d", "values": [1.0, 5.0, 10.0], "unit": "gamma"},
        axis_2=DETUNING_AXIS,
        interference={"mode": "analytic_optimum"},
        outputs=["g2_aa"],
        description="g2_aa(0) vs Delta_a for gamma_d/gamma in {1, 5, 10} (repository choice).",
        recipe="x: delta_a_over_g; y (log): g2_aa, one curve per gamma_d_over_gamma.",
    ),
    "fig4e": _cfg(
        base={"effective": {"u_a": 4.0, **BLUE_SIDEBAND}},
        axis_1={"name": "u_a", "min": 1.0, "max": 10.0, "points": 101, "unit": "g"},
        interference={"mode": "analytic_optimum"},
        outputs=["g2_aa"],
        description="g2_aa(0) vs U_a/g on the blue sideband with the interference optimum.",
        recipe="x: u_a_over_g; y (log): g2_aa; reference line at 1e-4.",
    ),
    "fig4f": _cfg(
        base={"effective": {"u_a": 4.0, **BLUE_SIDEBAND}},
        axis_1={"name": "u_a", "min": 1.0, "max": 10.0, "points": 101, "unit": "g"},
        interference={"mode": "analytic_optimum"},
        outputs=["n_s_a"],
        description="n_s_a vs U_a/g on the blue sideband with the interference optimum.",
        recipe="x: u_a_over_g; y: n_s_a.",
    ),
    "fig5a": _cfg(
        axis_1=DETUNING_AXIS,
        interference={"mode": "analytic_optimum"},
        outputs=["g2_ab"],
        description="Cross-correlation g2_ab(0) vs Delta_a with the interference optimum, U_a/g = 2.",
        recipe="x: delta_a_over_g; y (log): g2_ab.",
    ),
    "fig5b": _cfg(
        axis_1=DETUNING_AXIS,
        interference={"mode": "analytic_optimum"},
        outputs=["gamma_param", "g2_aa", "g2_bb", "g2_ab"],
        description="Cauchy-Schwarz parameter Gamma vs Delta_a with the interference optimum, U_a/g = 2.",
        recipe="x: delta_a_over_g; y (log): gamma_param; reference line at 1.",
    ),
    "figS2": _cfg(
        axis_1={"name": "kappa_b", "values": [0.5, 1.0, 2.0], "unit": "kappa_a"},
        axis_2=DETUNING_AXIS,
        outputs=["g2_aa", "n_s_a"],
        description="g2_aa(0) and n_s_a vs Delta_a for kappa_b/kappa_a in {0.5, 1, 2} (repository choice), eta = 0.",
        recipe="two panels, x: delta_a_over_g; y: g2_aa (log) and n_s_a, one curve per kappa_b_over_kappa_a.",
    ),
    "figS4": _cfg(
        axis_1={"name": "kappa_b", "values": [0.5, 1.0, 2.0], "unit": "kappa_a"},
        axis_2=DETUNING_AXIS,
        interference={"mode": "analytic_optimum"},
        outputs=["g2_aa", "n_s_a"],
        description=(
            "As figS2 with the interference optimum; the optimum uses (kappa_a + kappa_b)/2, "
            "so unequal decays are evaluated off the exact optimum."
        ),
        recipe="two panels, x: delta_a_over_g; y: g2_aa (log) and n_s_a, one curve per kappa_b_over_kappa_a.",
    ),
}

PRESET_NAMES = tuple(_PRESETS)


def preset_document(name: str) -> dict:
    """The annotated JSON document behind a preset (includes description and recipe)."""
    if name not in _PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESET_NAMES)}")
    doc = copy.deepcopy(_PRESETS[name])
    doc["name"] = name
    return doc


def figure_preset(name: str) -> SweepConfig:
    return SweepConfig.from_dict(preset_document(name))


def recipe(name: str) -> str:
    doc = preset_document(name)
    return f"{name}: {doc['description']}\nplot: {doc['recipe']}\n"
