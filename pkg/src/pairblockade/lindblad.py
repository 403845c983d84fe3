"""Liouvillian assembly, steady states and propagation of vectorized matrices.

Vectorization is column stacking: ``vec(A @ rho @ B) = kron(B.T, A) @ vec(rho)``,
i.e. ``rho.reshape(-1, order="F")``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import (
    IntegrationError,
    InvalidDimensionError,
    NonHermitianError,
    NonUniqueSteadyStateError,
    TruncationError,
)
from .hilbert import HilbertDims, Operator, basis_state, mode_operators
from .model import DissipationParams

log = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-8
COND_LIMIT = 1e14


def vec(m: np.ndarray) -> np.ndarray:
    return np.asarray(m).reshape(-1, order="F")


def unvec(v: np.ndarray, d: int) -> np.ndarray:
    return np.asarray(v).reshape(d, d, order="F")


@dataclass(frozen=True)
class DensityMatrix:
    dims: HilbertDims
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (self.dims.total, self.dims.total):
            raise InvalidDimensionError(f"density matrix shape {m.shape} does not match {self.dims}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_state(cls, state) -> "DensityMatrix":
        return cls(state.dims, state.projector())

    @classmethod
    def vacuum(cls, dims: HilbertDims) -> "DensityMatrix":
        return cls.from_state(basis_state(0, 0, "g", dims))

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def min_eigenvalue(self) -> float:
        h = 0.5 * (self.matrix + self.matrix.conj().T)
        return float(np.linalg.eigvalsh(h)[0])

    def is_physical(self, tol: float = HERMITIAN_TOL) -> bool:
        return (
            self.hermiticity_error() < tol
            and abs(self.trace() - 1) < tol
            and self.min_eigenvalue() >= -PSD_TOL
        )

    def population(self, n_a: int, n_b: int, s: str) -> float:
        i = self.dims.index(n_a, n_b, s)
        return float(self.matrix[i, i].real)


@dataclass(frozen=True)
class CollapseChannel:
    """Jump operator with its master-equation prefactor.

    ``rate`` multiplies ``D[o] rho / 2`` with ``D[o] rho = 2 o rho o^+ - o^+ o rho - rho o^+ o``,
    so it equals the standard-form rate: a cavity with rate kappa loses
    photons as exp(-kappa t).
    """

    operator: Operator
    rate: float

    def __post_init__(self):
        if not self.rate >= 0:
            raise ValueError(f"collapse rate must be >= 0, got {self.rate}")


@dataclass(frozen=True)
class Liouvillian:
    dims: HilbertDims
    matrix: sp.csr_matrix = field(repr=False)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def apply(self, rho: np.ndarray) -> np.ndarray:
        d = self.dims.total
        return unvec(self.matrix @ vec(rho), d)

    def trace_functional(self) -> np.ndarray:
        d = self.dims.total
        return vec(np.eye(d))


def standard_channels(dims: HilbertDims, d: DissipationParams) -> list[CollapseChannel]:
    ops = mode_operators(dims)
    return [
        CollapseChannel(ops.a, d.kappa_a),
        CollapseChannel(ops.b, d.kappa_b),
        CollapseChannel(ops.sigma_gr, d.gamma),
        CollapseChannel(ops.sigma_rr, d.gamma_d),
    ]


def _dims_of(h: Operator) -> HilbertDims:
    if not isinstance(h.dims, HilbertDims):
        raise InvalidDimensionError("Hamiltonian must act on a composite HilbertDims space")
    return h.dims


def build_liouvillian(
    h: Operator, channels: Sequence[CollapseChannel] = (), dense: bool = False
) -> Liouvillian:
    """Superoperator of the Lindblad equation in column-stacking form.

    ``dense=True`` assembles with numpy Kronecker products; the sparse default
    agrees with it elementwise.
    """
    dims = _dims_of(h)
    herm_err = np.max(np.abs(h.matrix - h.matrix.conj().T)) if h.dim else 0.0
    if herm_err > HERMITIAN_TOL:
        raise NonHermitianError(f"Hamiltonian deviates from Hermitian by {herm_err:.3g}")
    n = h.dim
    for ch in channels:
        if ch.operator.dim != n:
            raise InvalidDimensionError(
                f"collapse operator of size {ch.operator.dim} does not match Hamiltonian size {n}"
            )

    if dense:
        kron, eye, conv = np.kron, np.eye(n), (lambda m: m)
    else:
        kron = lambda x, y: sp.kron(x, y, format="csr")  # noqa: E731
        eye, conv = sp.identity(n, format="csr", dtype=complex), sp.csr_matrix

    hm = conv(h.matrix)
    lv = -1j * (kron(eye, hm) - kron(hm.T, eye))
    for ch in channels:
        if ch.rate == 0:
            continue
        o = conv(ch.operator.matrix)
        odo = conv(ch.operator.matrix.conj().T @ ch.operator.matrix)
        lv = lv + ch.rate * (kron(o.conj(), o) - 0.5 * kron(eye, odo) - 0.5 * kron(odo.T, eye))
    if dense:
        return Liouvillian(dims, sp.csr_matrix(lv))
    lv = sp.csr_matrix(lv)
    lv.eliminate_zeros()
    return Liouvillian(dims, lv)


def _condition_estimate(a: sp.spmatrix, lu) -> float:
    n = a.shape[0]
    inv = spla.LinearOperator(
        (n, n),
        matvec=lambda x: lu.solve(np.asarray(x, dtype=complex).ravel()),
        rmatvec=lambda x: lu.solve(np.asarray(x, dtype=complex).ravel(), trans="H"),
        dtype=complex,
    )
    return float(spla.norm(a, 1) * spla.onenormest(inv))


def _steady_vector_eig(lv: Liouvillian) -> np.ndarray:
    vals, vecs = spla.eigs(lv.matrix.tocsc(), k=2, sigma=1e-9, which="LM")
    order = np.argsort(np.abs(vals))
    vals, vecs = vals[order], vecs[:, order]
    if abs(vals[1]) < 1e-10:
        raise NonUniqueSteadyStateError(
            f"Liouvillian has a degenerate zero eigenvalue: {vals[0]:.3g}, {vals[1]:.3g}"
        )
    return vecs[:, 0]


def steady_state(lv: Liouvillian) -> DensityMatrix:
    """Solve ``L vec(rho) = 0`` with ``Tr rho = 1``.

    One equation of ``L`` (the one for ``rho[0, 0]``; the diagonal equations
    are linearly dependent) is replaced by the trace constraint. An
    ill-conditioned system falls back to the eigenvector of the
    smallest-magnitude eigenvalue, where degeneracy is detected.
    """
    d = lv.dims.total
    tr = sp.csr_matrix(lv.trace_functional()[None, :].astype(complex))
    a = sp.vstack([tr, lv.matrix[1:]], format="csc")
    rhs = np.zeros(d * d, dtype=complex)
    rhs[0] = 1.0

    x = None
    try:
        lu = spla.splu(a)
        cond = _condition_estimate(a, lu)
        if cond <= COND_LIMIT:
            x = lu.solve(rhs)
            # one step of iterative refinement
            x = x + lu.solve(rhs - a @ x)
        else:
            log.debug("steady-state system ill-conditioned (cond ~ %.3g); using eigenvector", cond)
    except RuntimeError:
        log.debug("steady-state system singular; using eigenvector")
    if x is None:
        x = _steady_vector_eig(lv)

    rho = unvec(x, d)
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(lv.dims, clip_negative(rho / np.trace(rho).real))


def clip_negative(rho: np.ndarray, tol: float = PSD_TOL) -> np.ndarray:
    """Remove roundoff-level negative eigenvalues from a Hermitian, unit-trace matrix.

    Eigenvalues below ``-tol`` raise :class:`TruncationError`. Eigenvalues
    between ``-tol`` and the eigensolver's own resolution (``d * eps * |rho|``)
    are set to zero by subtracting their eigenprojectors; anything smaller is
    indistinguishable from zero and left untouched.
    """
    w, v = np.linalg.eigh(rho)
    if w[0] < -tol:
        raise TruncationError(f"steady state has eigenvalue {w[0]:.3g} < -{tol:g}; increase the photon cutoff")
    resolution = rho.shape[0] * np.finfo(float).eps * np.abs(w).max()
    if w[0] >= -resolution:
        return rho
    # subtract only the negative part; rebuilding rho from all eigenpairs
    # would smear roundoff over populations that are themselves ~1e-10
    neg = w < 0
    rho = rho - (v[:, neg] * w[neg]) @ v[:, neg].conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def steady_state_residual(lv: Liouvillian, rho: DensityMatrix) -> float:
    return float(np.max(np.abs(lv.matrix @ vec(rho.matrix))))


def _expm_action(lv: Liouvillian, v: np.ndarray, t: float) -> np.ndarray:
    if t < 0:
        raise ValueError(f"propagation time must be >= 0, got {t}")
    if t == 0:
        return np.array(v, dtype=complex)
    try:
        out = spla.expm_multiply(lv.matrix * t, v)
    except Exception as exc:  # scipy raises a variety of errors for pathological input
        raise IntegrationError(f"matrix-exponential action failed at t={t}: {exc}") from exc
    if not np.all(np.isfinite(out)):
        raise IntegrationError(f"non-finite result propagating to t={t} (norm {np.linalg.norm(v):.3g})")
    return out


def propagate_matrix(lv: Liouvillian, x: np.ndarray, t: float) -> np.ndarray:
    """Apply ``exp(L t)`` to an arbitrary (not necessarily Hermitian) matrix."""
    d = lv.dims.total
    x = np.asarray(x, dtype=complex)
    if x.shape != (d, d):
        raise InvalidDimensionError(f"matrix shape {x.shape} does not match {lv.dims}")
    return unvec(_expm_action(lv, vec(x), float(t)), d)


def propagate_series(lv: Liouvillian, x: np.ndarray, times: Iterable[float]) -> np.ndarray:
    """``exp(L t) x`` on a nondecreasing time grid, stepping between successive points.

    Returns an array of shape ``(len(times), d, d)``.
    """
    times = np.asarray(list(times), dtype=float)
    if times.size and (times[0] < 0 or np.any(np.diff(times) < 0)):
        raise ValueError("times must be nonnegative and nondecreasing")
    d = lv.dims.total
    x = np.asarray(x, dtype=complex)
    if x.shape != (d, d):
        raise InvalidDimensionError(f"matrix shape {x.shape} does not match {lv.dims}")
    out = np.empty((times.size, d, d), dtype=complex)
    v, t_prev = vec(x), 0.0
    for k, t in enumerate(times):
        v = _expm_action(lv, v, t - t_prev)
        t_prev = t
        out[k] = unvec(v, d)
    return out


def evolve(lv: Liouvillian, rho0: DensityMatrix, t: float) -> DensityMatrix:
    tr0 = rho0.trace()
    out = propagate_matrix(lv, rho0.matrix, t)
    drift = abs(np.trace(out) - tr0)
    if drift > 1e-9 * max(1.0, abs(tr0)):
        raise IntegrationError(f"trace drifted by {drift:.3g} over t={t}")
    return DensityMatrix(rho0.dims, out)


@dataclass
class ConvergenceReport:
    cutoffs: list[int]
    values: list[dict[str, float]]
    deltas: list[dict[str, float]]
    tol: float
    converged: bool
    converged_at: int | None

    def summary(self) -> str:
        lines = []
        for i, n in enumerate(self.cutoffs):
            vals = ", ".join(f"{k}={v:.10g}" for k, v in self.values[i].items())
            if i:
                worst = max(self.deltas[i - 1].values(), default=0.0)
                vals += f"  (max rel. change {worst:.2e})"
            lines.append(f"n_max={n}: {vals}")
        verdict = f"converged at n_max={self.converged_at}" if self.converged else "NOT converged"
        lines.append(f"{verdict} (tol {self.tol:g})")
        return "\n".join(lines)


def _rel_change(new: float, old: float, floor: float = 1e-12) -> float:
    # the floor keeps roundoff-level values (empty modes) from reading as O(1) changes
    return abs(new - old) / max(abs(new), abs(old), floor)


def default_probe(rho: DensityMatrix) -> dict[str, float]:
    from .observables import equal_time_summary

    return equal_time_summary(rho)


def convergence_check(
    builder: Callable[[int], Liouvillian],
    cutoffs: Sequence[int] = (3, 4, 5, 6),
    probe: Callable[[DensityMatrix], dict[str, float]] | None = None,
    tol: float = 1e-6,
) -> ConvergenceReport:
    """Track steady-state observables over an increasing sequence of photon cutoffs.

    ``builder(n_max)`` returns the Liouvillian at that cutoff. The run counts
    as converged at the first cutoff from which every later step changes
    every probed quantity by less than ``tol`` (relative).
    """
    cutoffs = list(cutoffs)
    if len(cutoffs) < 2 or any(b <= a for a, b in zip(cutoffs, cutoffs[1:])):
        raise ValueError("cutoffs must be a strictly increasing sequence of length >= 2")
    probe = probe or default_probe
    values = [probe(steady_state(builder(n))) for n in cutoffs]
    deltas = []
    for old, new in zip(values, values[1:]):
        keys = old.keys() & new.keys()
        deltas.append({k: _rel_change(new[k], old[k]) for k in sorted(keys)})
    ok = [max(dl.values(), default=0.0) < tol for dl in deltas]
    converged_at = None
    for i in range(len(ok)):
        if all(ok[i:]):
            converged_at = cutoffs[i]
            break
    return ConvergenceReport(cutoffs, values, deltas, tol, converged_at is not None, converged_at)
