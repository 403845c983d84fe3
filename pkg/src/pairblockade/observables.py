"""Photon numbers, second-order correlations and the Cauchy-Schwarz parameter."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import StaleStateError, UndefinedCorrelationError
from .hilbert import mode_operators
from .lindblad import DensityMatrix, Liouvillian, propagate_series, steady_state_residual

log = logging.getLogger(__name__)

OCCUPATION_FLOOR = 1e-12
IMAG_TOL = 1e-10
STEADY_RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class CorrelationPoint:
    tau: float
    value: float


@dataclass(frozen=True)
class NonclassicalityReport:
    g2_aa: float
    g2_bb: float
    g2_ab: float
    gamma_param: float | None
    violates: bool

    @property
    def defined(self) -> bool:
        return self.gamma_param is not None


def default_tau_grid(t_max: float = 10.0, points: int = 200) -> np.ndarray:
    """``tau = 0`` followed by log-spaced delays up to ``t_max`` (units of 1/kappa)."""
    return np.concatenate([[0.0], np.logspace(-3, math.log10(t_max), points - 1)])


def _tr(op: np.ndarray, rho: np.ndarray) -> complex:
    # Tr[op @ rho] without forming the product
    return complex(np.sum(op * rho.T))


def _real(z: complex, what: str) -> float:
    if abs(z.imag) > IMAG_TOL * max(1.0, abs(z.real)):
        log.warning("%s has imaginary part %.3g", what, z.imag)
    return z.real


def photon_number(rho: DensityMatrix, mode: str) -> float:
    ops = mode_operators(rho.dims)
    o = ops.mode(mode).matrix
    n = _real(_tr(o.conj().T @ o, rho.matrix), f"n_{mode}")
    return max(n, 0.0)


def _g2_numerator(rho: DensityMatrix, o_label: str, op_label: str) -> float:
    ops = mode_operators(rho.dims)
    o = ops.mode(o_label).matrix
    op = ops.mode(op_label).matrix
    num = o.conj().T @ op.conj().T @ op @ o
    return _real(_tr(num, rho.matrix), f"g2_{o_label}{op_label} numerator")


def g2_equal_time(rho: DensityMatrix, o: str, o_prime: str) -> float:
    n_o = photon_number(rho, o)
    n_op = photon_number(rho, o_prime)
    if n_o <= OCCUPATION_FLOOR or n_op <= OCCUPATION_FLOOR:
        raise UndefinedCorrelationError(
            f"g2_{o}{o_prime}(0) undefined: occupations {n_o:.3g}, {n_op:.3g}"
        )
    return _g2_numerator(rho, o, o_prime) / (n_o * n_op)


def g2_tau(
    lv: Liouvillian,
    rho_s: DensityMatrix,
    o: str,
    o_prime: str,
    tau_grid: Sequence[float] | None = None,
) -> list[CorrelationPoint]:
    """Delayed correlation via the quantum regression theorem.

    The seed ``o rho_s o^+`` is propagated with the full Liouvillian and the
    second mode's number operator is read out at each delay.
    """
    residual = steady_state_residual(lv, rho_s)
    if residual > STEADY_RESIDUAL_TOL:
        raise StaleStateError(f"rho is not stationary under L (residual {residual:.3g})")
    taus = default_tau_grid() if tau_grid is None else np.asarray(tau_grid, dtype=float)
    order = np.argsort(taus, kind="stable")

    n_o = photon_number(rho_s, o)
    n_op = photon_number(rho_s, o_prime)
    if n_o <= OCCUPATION_FLOOR or n_op <= OCCUPATION_FLOOR:
        raise UndefinedCorrelationError(f"g2_{o}{o_prime}(tau) undefined: empty mode")

    ops = mode_operators(rho_s.dims)
    a = ops.mode(o).matrix
    b = ops.mode(o_prime).matrix
    seed = a @ rho_s.matrix @ a.conj().T
    readout = b.conj().T @ b
    series = propagate_series(lv, seed, taus[order])

    values = np.empty(taus.size)
    for k, x in zip(order, series):
        values[k] = _real(_tr(readout, x), "g2(tau) numerator") / (n_o * n_op)
    return [CorrelationPoint(float(t), float(v)) for t, v in zip(taus, values)]


def cauchy_schwarz_gamma(rho: DensityMatrix) -> NonclassicalityReport:
    """Gamma = g2_ab / sqrt(g2_aa g2_bb); Gamma > 1 is forbidden for classical fields.

    When an auto-correlation vanishes Gamma is reported as ``None``;
    ``violates`` still reflects the inequality g2_ab <= sqrt(g2_aa g2_bb).
    """
    g_aa = g2_equal_time(rho, "A", "A")
    g_bb = g2_equal_time(rho, "B", "B")
    g_ab = g2_equal_time(rho, "A", "B")
    bound = math.sqrt(max(g_aa, 0.0) * max(g_bb, 0.0))
    gamma = g_ab / bound if bound > 0 else None
    return NonclassicalityReport(g_aa, g_bb, g_ab, gamma, g_ab > bound)


def equal_time_summary(rho: DensityMatrix) -> dict[str, float]:
    """Photon numbers plus every correlation that is defined for ``rho``."""
    out = {"n_s_a": photon_number(rho, "A"), "n_s_b": photon_number(rho, "B")}
    for name, (o, op) in {"g2_aa": ("A", "A"), "g2_bb": ("B", "B"), "g2_ab": ("A", "B")}.items():
        try:
            out[name] = g2_equal_time(rho, o, op)
        except UndefinedCorrelationError:
            pass
    return out
