"""Operators on the truncated space (mode A Fock) x (mode B Fock) x (atom {g, r}).

Basis ordering is fixed: ``index = s + 2 * (n_b + (n_max_b + 1) * n_a)`` with
``s = 0`` for ``g`` and ``s = 1`` for ``r``, i.e. the atom index runs fastest.
This is exactly the ordering produced by ``kron(A, kron(B, atom))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np
import scipy.sparse as sp

from .errors import InvalidDimensionError, InvalidLabelError

ATOM_LEVELS = ("g", "r")
SLOTS = ("A", "B", "atom")


@dataclass(frozen=True)
class HilbertDims:
    n_max_a: int = 5
    n_max_b: int = 5
    atom_dim: int = 2

    def __post_init__(self):
        if self.n_max_a < 2 or self.n_max_b < 2:
            raise InvalidDimensionError(
                f"photon cutoffs must be >= 2, got ({self.n_max_a}, {self.n_max_b})"
            )
        if self.atom_dim != 2:
            raise InvalidDimensionError("atom_dim is fixed at 2")

    @classmethod
    def uniform(cls, n_max: int) -> "HilbertDims":
        return cls(n_max, n_max)

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.n_max_a + 1, self.n_max_b + 1, self.atom_dim)

    @property
    def total(self) -> int:
        return int(np.prod(self.shape))

    def slot_dim(self, slot: str) -> int:
        try:
            return self.shape[SLOTS.index(slot)]
        except ValueError:
            raise InvalidLabelError(f"unknown slot {slot!r}; expected one of {SLOTS}") from None

    def index(self, n_a: int, n_b: int, s: str | int) -> int:
        s_idx = _atom_index(s) if isinstance(s, str) else int(s)
        if not (0 <= n_a <= self.n_max_a and 0 <= n_b <= self.n_max_b and 0 <= s_idx < 2):
            raise IndexError(f"basis label ({n_a}, {n_b}, {s}) outside {self}")
        return s_idx + 2 * (n_b + (self.n_max_b + 1) * n_a)

    def labels(self) -> list[tuple[int, int, str]]:
        """Basis labels in canonical order."""
        return [
            (na, nb, s)
            for na in range(self.n_max_a + 1)
            for nb in range(self.n_max_b + 1)
            for s in ATOM_LEVELS
        ]


Dims = Union[HilbertDims, int]


def _dim_of(dims: Dims) -> int:
    return dims.total if isinstance(dims, HilbertDims) else int(dims)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


class Operator:
    """Immutable dense complex matrix tagged with the space it acts on.

    ``dims`` is a :class:`HilbertDims` for operators on the composite space and
    a plain integer for single-factor (local) operators.
    """

    __slots__ = ("dims", "matrix")

    def __init__(self, matrix, dims: Dims | None = None):
        m = _frozen(matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidDimensionError(f"operator matrix must be square, got shape {m.shape}")
        if dims is None:
            dims = m.shape[0]
        if _dim_of(dims) != m.shape[0]:
            raise InvalidDimensionError(
                f"matrix of size {m.shape[0]} does not match dims {dims}"
            )
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    def __setattr__(self, name, value):
        raise AttributeError("Operator is immutable")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dag(self) -> "Operator":
        return Operator(self.matrix.conj().T, self.dims)

    def to_sparse(self) -> sp.csr_matrix:
        return sp.csr_matrix(self.matrix)

    def expect(self, state: "StateVector") -> complex:
        return complex(np.vdot(state.amplitudes, self.matrix @ state.amplitudes))

    def _check(self, other: "Operator"):
        if self.dim != other.dim:
            raise InvalidDimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __matmul__(self, other):
        if isinstance(other, Operator):
            self._check(other)
            return Operator(self.matrix @ other.matrix, self.dims)
        if isinstance(other, StateVector):
            return StateVector(self.matrix @ other.amplitudes, other.dims, normalize=False)
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, Operator):
            self._check(other)
            return Operator(self.matrix + other.matrix, self.dims)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, Operator):
            self._check(other)
            return Operator(self.matrix - other.matrix, self.dims)
        return NotImplemented

    def __neg__(self):
        return Operator(-self.matrix, self.dims)

    def __mul__(self, scalar):
        if np.isscalar(scalar):
            return Operator(self.matrix * scalar, self.dims)
        return NotImplemented

    __rmul__ = __mul__

    def __repr__(self):
        return f"Operator(dim={self.dim}, dims={self.dims!r})"


def commutator(x: Operator, y: Operator) -> Operator:
    return x @ y - y @ x


class StateVector:
    __slots__ = ("dims", "amplitudes")

    def __init__(self, amplitudes, dims: HilbertDims, normalize: bool = True):
        v = np.array(amplitudes, dtype=complex).reshape(-1)
        if v.size != dims.total:
            raise InvalidDimensionError(f"state of length {v.size} does not match {dims}")
        if normalize:
            norm = np.linalg.norm(v)
            if norm == 0:
                raise ValueError("cannot normalize the zero vector")
            v = v / norm
        v.setflags(write=False)
        object.__setattr__(self, "amplitudes", v)
        object.__setattr__(self, "dims", dims)

    def __setattr__(self, name, value):
        raise AttributeError("StateVector is immutable")

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())


def _atom_index(label: str) -> int:
    try:
        return ATOM_LEVELS.index(label)
    except ValueError:
        raise InvalidLabelError(f"unknown atomic level {label!r}; expected 'g' or 'r'") from None


def annihilation_op(n_max: int) -> Operator:
    """Ladder operator on a Fock space truncated at ``n_max`` photons."""
    if n_max < 1:
        raise InvalidDimensionError(f"photon cutoff must be >= 1, got {n_max}")
    return Operator(np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), k=1))


def atomic_transition(k: str, l: str) -> Operator:
    """``|k><l|`` on the two-level atom."""
    m = np.zeros((2, 2), dtype=complex)
    m[_atom_index(k), _atom_index(l)] = 1.0
    return Operator(m)


def identity(dims: Dims) -> Operator:
    return Operator(np.eye(_dim_of(dims)), dims)


def embed(local: Operator, slot: str, dims: HilbertDims) -> Operator:
    """Lift a single-factor operator to the composite space (identity on the other factors)."""
    target = dims.slot_dim(slot)
    if local.dim != target:
        raise InvalidDimensionError(
            f"local operator of size {local.dim} does not fit slot {slot} of size {target}"
        )
    factors = [np.eye(d) for d in dims.shape]
    factors[SLOTS.index(slot)] = local.matrix
    full = np.kron(factors[0], np.kron(factors[1], factors[2]))
    return Operator(full, dims)


def basis_state(n_a: int, n_b: int, s: str, dims: HilbertDims) -> StateVector:
    v = np.zeros(dims.total, dtype=complex)
    v[dims.index(n_a, n_b, s)] = 1.0
    return StateVector(v, dims, normalize=False)


class ModeOperators:
    """The embedded operators every builder needs, constructed once per cutoff."""

    def __init__(self, dims: HilbertDims):
        self.dims = dims
        self.a = embed(annihilation_op(dims.n_max_a), "A", dims)
        self.b = embed(annihilation_op(dims.n_max_b), "B", dims)
        self.sigma_gr = embed(atomic_transition("g", "r"), "atom", dims)
        self.sigma_rr = embed(atomic_transition("r", "r"), "atom", dims)
        self.sigma_gg = embed(atomic_transition("g", "g"), "atom", dims)
        self.n_a = self.a.dag() @ self.a
        self.n_b = self.b.dag() @ self.b
        self.eye = identity(dims)

    def mode(self, label: str) -> Operator:
        label = label.upper()
        if label == "A":
            return self.a
        if label == "B":
            return self.b
        raise InvalidLabelError(f"unknown cavity mode {label!r}; expected 'A' or 'B'")


@lru_cache(maxsize=16)
def mode_operators(dims: HilbertDims) -> ModeOperators:
    return ModeOperators(dims)
