"""Bounded Hermitian observables and product expectations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg
from .errors import DimensionError, ObservableNormError
from .states import BipartiteState

NORM_TOL = 1e-10
IMAG_TOL = 1e-10

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


@dataclass(frozen=True, eq=False)
class Observable:
    """Hermitian operator on C^dim.

    Hermiticity is checked here; the norm bound ``||W|| <= 1`` is checked by
    :meth:`require_bounded` at call sites whose hypotheses need it.
    """

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = linalg.require_hermitian(self.matrix, what="observable").copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def norm(self) -> float:
        return linalg.operator_norm(self.matrix)

    def require_bounded(self, what: str = "observable") -> "Observable":
        n = self.norm
        if n > 1.0 + NORM_TOL:
            raise ObservableNormError(f"{what} has operator norm {n:.12g} > 1")
        return self

    def __neg__(self) -> "Observable":
        return Observable(-self.matrix)


@dataclass(frozen=True)
class QubitObservableParams:
    alpha: float
    n: tuple[float, float, float]

    def __post_init__(self):
        n = tuple(float(x) for x in self.n)
        if len(n) != 3:
            raise DimensionError(f"n must have 3 components, got {len(n)}")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "n", n)

    @property
    def n_norm(self) -> float:
        return float(np.linalg.norm(self.n))

    @property
    def eigenvalues(self) -> tuple[float, float]:
        """``(alpha - |n|, alpha + |n|)``."""
        return (self.alpha - self.n_norm, self.alpha + self.n_norm)


def qubit_observable(p: QubitObservableParams) -> Observable:
    """``alpha I + n_x sx + n_y sy + n_z sz``."""
    m = p.alpha * IDENTITY
    for coef, pauli in zip(p.n, PAULIS):
        m = m + coef * pauli
    return Observable(m)


def spin(direction: Sequence[float]) -> Observable:
    """Spin observable ``n̂ · sigma`` along a (normalized) direction."""
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    return qubit_observable(QubitObservableParams(0.0, tuple(d)))


def random_observable(dim: int, rng: np.random.Generator) -> Observable:
    """Random Hermitian observable rescaled to operator norm exactly 1."""
    if dim < 2:
        raise DimensionError(f"dim must be >= 2, got {dim}")
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    h = (g + g.conj().T) / 2
    return Observable(h / linalg.operator_norm(h))


def random_dichotomic(dim: int, rng: np.random.Generator) -> Observable:
    """Random observable with spectrum in {-1, +1}."""
    return Observable(linalg.operator_sign(random_observable(dim, rng).matrix))


def correlation(rho: BipartiteState, w1: Observable, w2: Observable) -> float:
    """``tr[rho (W1 ⊗ W2)]``."""
    if w1.dim != rho.d1 or w2.dim != rho.d2:
        raise DimensionError(
            f"observables act on C^{w1.dim} ⊗ C^{w2.dim}, state lives on "
            f"C^{rho.d1} ⊗ C^{rho.d2}"
        )
    d1, d2 = rho.dims
    r = rho.matrix.reshape(d1, d2, d1, d2)
    # tr[rho (A⊗B)] = sum rho[i k, j l] A[j i] B[l k]
    value = np.einsum("ikjl,ji,lk->", r, w1.matrix, w2.matrix)
    if abs(value.imag) > IMAG_TOL:
        raise ArithmeticError(f"correlation has imaginary part {value.imag:.3e}")
    return float(value.real)
