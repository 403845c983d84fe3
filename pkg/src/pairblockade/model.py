"""Parameter sets, the effective two-mode Hamiltonian and its closed-form results.

All rates are in units of the cavity decay rate (kappa = 1).
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field, fields, replace

import numpy as np

from .errors import SingularParameterError
from .hilbert import HilbertDims, Operator, mode_operators

log = logging.getLogger(__name__)

#: Physical cavity decay rate (rad/s) used as the energy unit; display only.
KAPPA_PHYSICAL = 2 * math.pi * 800e3


@dataclass(frozen=True)
class EffectiveParams:
    delta_a: float = 0.0
    delta_b: float = 0.0
    delta_r: float = 0.0
    u_a: float = 0.0
    u_b: float = 0.0
    g: float = 0.0
    omega: float = 0.0
    eta: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not math.isfinite(v):
                raise ValueError(f"{f.name} must be finite, got {v}")

    @property
    def u_0(self) -> float:
        return self.u_a - self.u_b

    def replace(self, **changes) -> "EffectiveParams":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class DissipationParams:
    kappa_a: float = 1.0
    kappa_b: float = 1.0
    gamma: float = 0.0
    gamma_d: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{f.name} must be finite and >= 0, got {v}")

    @property
    def kappa(self) -> float:
        """Single decay rate used by the closed-form interference results.

        For unequal cavities the mean is used; this is a heuristic, the
        interference conditions are only exact for kappa_a == kappa_b.
        """
        return 0.5 * (self.kappa_a + self.kappa_b)

    def replace(self, **changes) -> "DissipationParams":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class MicroscopicParams:
    g_a: float
    g_b: float
    g_b_prime: float
    omega_1: float
    omega_2: float
    omega_3: float
    delta_1: float
    delta_2: float
    delta_3: float
    delta_small_a: float = 0.0
    delta_small_b: float = 0.0
    theta: float = 0.0


@dataclass(frozen=True)
class SpectrumLevel:
    n: int
    e_plus: float
    e_minus: float
    split_plus: float
    split_minus: float


def paper_defaults(u_a: float = 4.0, delta_a: float = -1.0) -> tuple[EffectiveParams, DissipationParams]:
    """Reference parameter point (kappa units).

    g = 2, Omega = 0.1, gamma = gamma_d = 0.01, kappa_a = kappa_b = 1, with
    Delta_b = Delta_a, Delta_r = 2 Delta_a and U_b fixed by U_a U_b = g^2.
    The defaults place the system at U_a/g = 2 on the blue sideband
    (Delta_a/g = -1/2) with the cavity drive switched off.
    """
    g = 2.0
    p = EffectiveParams(
        delta_a=delta_a,
        delta_b=delta_a,
        delta_r=2.0 * delta_a,
        u_a=u_a,
        u_b=g * g / u_a,
        g=g,
        omega=0.1,
    )
    return p, DissipationParams(kappa_a=1.0, kappa_b=1.0, gamma=0.01, gamma_d=0.01)


def build_hamiltonian(p: EffectiveParams, dims: HilbertDims) -> Operator:
    ops = mode_operators(dims)
    a_dag_b_dag = ops.a.dag() @ ops.b.dag()
    diagonal = (
        p.delta_a * ops.n_a
        + p.delta_b * ops.n_b
        + (p.delta_r * ops.eye - p.u_a * ops.n_a + p.u_b * ops.n_b) @ ops.sigma_rr
    )
    coupling = (p.g * a_dag_b_dag + p.omega * ops.eye) @ ops.sigma_gr + (
        p.eta * np.exp(-1j * p.theta)
    ) * (a_dag_b_dag @ ops.sigma_gg)
    return diagonal + coupling + coupling.dag()


def effective_from_microscopic(m: MicroscopicParams) -> EffectiveParams:
    """Adiabatic elimination of the far-detuned levels |e> and |r'>.

    ``delta_r`` is not fixed by the mapping and is left at zero; set it with
    :meth:`EffectiveParams.replace`.
    """
    if m.delta_1 == 0 or m.delta_3 == 0:
        raise SingularParameterError("delta_1 and delta_3 must be nonzero")
    d1 = m.delta_1
    return EffectiveParams(
        delta_a=m.delta_small_a - m.g_a**2 / d1,
        delta_b=m.delta_small_b,
        u_a=-m.g_a**2 / d1,
        u_b=-m.g_b**2 / d1,
        g=-m.g_a * m.g_b / d1,
        omega=-m.omega_1 * m.omega_2 / d1,
        eta=m.omega_3 * m.g_a * m.g_b_prime / (d1 * m.delta_3),
        theta=m.theta,
    )


def validate_regime(m: MicroscopicParams, ratio_threshold: float = 10.0) -> list[str]:
    """Check the dispersive and rotating-wave conditions behind the effective model.

    Returns one message per violated ratio; an empty list means every
    detuning exceeds the couplings it must dominate by ``ratio_threshold``.
    """
    couplings = {
        "g_a": m.g_a,
        "g_b": m.g_b,
        "g_b_prime": m.g_b_prime,
        "omega_1": m.omega_1,
        "omega_2": m.omega_2,
        "omega_3": m.omega_3,
    }
    warnings: list[str] = []

    def check(label, detuning, names):
        for name in names:
            c = abs(couplings[name])
            if c == 0:
                continue
            ratio = abs(detuning) / c
            if ratio < ratio_threshold:
                warnings.append(
                    f"|{label}|/{name} = {ratio:.3g} < {ratio_threshold:g}: dispersive condition violated"
                )

    check("delta_1", m.delta_1, ["g_a", "g_b", "omega_1", "omega_2"])
    check("delta_2", m.delta_2, ["omega_1", "omega_2"])
    check("delta_3", m.delta_3, ["g_b_prime", "omega_3"])

    rwa = abs(m.delta_1 - m.delta_2)
    rwa_couplings = [abs(couplings[k]) for k in ("g_a", "g_b", "omega_1", "omega_2")]
    scale = max(rwa_couplings)
    if rwa == 0 or (scale > 0 and rwa / scale < ratio_threshold):
        warnings.append(
            f"|delta_1 - delta_2| = {rwa:.3g} too small against couplings (max {scale:.3g}): "
            "rotating-wave condition violated"
        )
    return warnings


def energy_spectrum(p: EffectiveParams, n: int) -> SpectrumLevel:
    """Dressed energies of the n-th pair manifold {|n-1,n-1,r>, |n,n,g>}.

    Drive terms (omega, eta) are ignored. Assumes Delta_b = Delta_a and
    Delta_r = 2 Delta_a, as in the reference parameter set.
    """
    if n < 1:
        raise ValueError(f"pair number must be >= 1, got {n}")
    u0 = p.u_0
    # hypot is exact when the Stark term vanishes, so n = 1 gives exactly +/- g
    root = math.hypot(0.5 * (n - 1) * u0, n * p.g)
    shift = -0.5 * (n - 1) * u0
    base = 2 * n * p.delta_a + shift
    return SpectrumLevel(
        n=n,
        e_plus=base + root,
        e_minus=base - root,
        split_plus=root + shift,
        split_minus=-root + shift,
    )


def dressed_splittings(p: EffectiveParams, n: int) -> tuple[float, float]:
    level = energy_spectrum(p, n)
    return level.split_plus, level.split_minus


def interference_optimum(p: EffectiveParams, d: DissipationParams) -> tuple[float, float]:
    """Drive phase and amplitude that cancel the |2,2,g> amplitude.

    Uses the two-argument arctangent, so theta lies in (-pi, 0] whenever
    there are losses; ``4 delta_a == U0`` gives -pi/2. The lossless limit
    with ``4 delta_a < U0`` returns -pi.
    """
    x = 4 * p.delta_a - p.u_0
    y = 2 * d.kappa + d.gamma
    r = math.hypot(x, y)
    if r == 0:
        raise SingularParameterError("4*delta_a == U0 with no losses: the optimum amplitude diverges")
    if d.kappa_a != d.kappa_b:
        log.debug("unequal cavity decays: interference optimum uses the mean kappa (heuristic)")
    theta = -math.atan2(y, x)
    return theta, p.g * p.omega / r


def with_interference(p: EffectiveParams, d: DissipationParams) -> EffectiveParams:
    theta, eta = interference_optimum(p, d)
    return p.replace(theta=theta, eta=eta)
