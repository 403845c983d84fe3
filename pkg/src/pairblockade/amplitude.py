"""Truncated-wavefunction model of the weakly driven system.

Keeps the amplitudes of |0,0,g>, |1,1,g>, |2,2,g>, |0,0,r>, |1,1,r> with
losses entered as imaginary detunings,

    D_a = 2 delta_a - 2 i kappa,    D_r = 2 delta_a - i gamma,

and serves as an independent check of the interference optimum. Pure
dephasing is not part of this model. The detuning pattern assumes
Delta_b = Delta_a and Delta_r = 2 Delta_a.
"""

from __future__ import annotations

from dataclasses import astuple, dataclass

import numpy as np

from .errors import ResonantDegeneracyError
from .model import DissipationParams, EffectiveParams, with_interference

ORDER = ("c00g", "c11g", "c22g", "c00r", "c11r")


@dataclass(frozen=True)
class AmplitudeState:
    c00g: complex = 1.0
    c11g: complex = 0.0
    c22g: complex = 0.0
    c00r: complex = 0.0
    c11r: complex = 0.0

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=complex)

    @classmethod
    def from_array(cls, arr) -> "AmplitudeState":
        return cls(*(complex(x) for x in arr))

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.as_array()) ** 2))


def coupling_matrix(p: EffectiveParams, d: DissipationParams) -> np.ndarray:
    """``M`` in ``i dc/dt = M c`` for c ordered as :data:`ORDER`."""
    kappa = d.kappa
    da = 2 * p.delta_a - 2j * kappa
    dr = 2 * p.delta_a - 1j * d.gamma
    up = p.eta * np.exp(1j * p.theta)
    down = p.eta * np.exp(-1j * p.theta)
    g, om, u0 = p.g, p.omega, p.u_0
    #        c00g      c11g      c22g    c00r  c11r
    return np.array(
        [
            [0,        up,       0,      om,   0],
            [down,     da,       2 * up, g,    om],
            [0,        2 * down, 2 * da, 0,    2 * g],
            [om,       g,        0,      dr,   0],
            [0,        om,       2 * g,  0,    da + dr - u0],
        ],
        dtype=complex,
    )


def amplitude_rhs(s: AmplitudeState, p: EffectiveParams, d: DissipationParams) -> AmplitudeState:
    return AmplitudeState.from_array(-1j * coupling_matrix(p, d) @ s.as_array())


def amplitude_steady(p: EffectiveParams, d: DissipationParams) -> AmplitudeState:
    """Stationary amplitudes with the ground amplitude clamped to 1.

    The ground-state equation is dropped and the remaining four are solved
    as a linear system driven by c00g = 1.
    """
    m = coupling_matrix(p, d)
    a = m[1:, 1:]
    rhs = -m[1:, 0]
    if not np.all(np.isfinite(a)) or np.linalg.cond(a) > 1e14:
        raise ResonantDegeneracyError("amplitude equations are singular at this parameter point")
    x = np.linalg.solve(a, rhs)
    return AmplitudeState(1.0, *x)


def two_photon_ratio(p: EffectiveParams, d: DissipationParams) -> float:
    """``|c22g| / |c11g|`` at the drive settings carried by ``p``."""
    s = amplitude_steady(p, d)
    if s.c11g == 0:
        return 0.0 if s.c22g == 0 else float("inf")
    return abs(s.c22g) / abs(s.c11g)


def verify_interference(p: EffectiveParams, d: DissipationParams) -> float:
    """Two-photon ratio after replacing theta and eta by the analytic optimum."""
    return two_photon_ratio(with_interference(p, d), d)
