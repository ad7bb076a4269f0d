"""Source-operator dilations of noisy states and their positivity certificates.

Three constructions of a unit-trace self-adjoint operator ``T(beta)`` whose
partial traces reproduce ``eta(beta) = beta I/(d1 d2) + (1 - beta) rho``:

``right``
    On C^d1 ⊗ C^d2 ⊗ C^d2, with ``xi2 = I/d2``::

        (1-b) [rho_{12} ⊗ xi2 + rho_{13} ⊗ xi2_{(2)} - tau1 ⊗ xi2 ⊗ xi2] + b I/(d1 d2^2)

    Tracing out factor 1 or factor 2 gives ``eta``.
``left``
    The mirror on C^d1 ⊗ C^d1 ⊗ C^d2 with ``xi1 = I/d1``; tracing out factor 0
    or factor 1 gives ``eta``.
``bell``
    On C^d ⊗ C^d ⊗ C^d for equal reduced states ``tau``::

        (1-b) [rho_{12} ⊗ tau + rho_{13} ⊗ tau_{(2)} + tau ⊗ rho_{23} - 2 tau⊗tau⊗tau] + b I/d^3

    Every single-factor partial trace gives ``eta``.

When ``T(beta)`` is positive semidefinite it is a density source operator and
``eta(beta)`` inherits the corresponding classical correlation bounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import DimensionError, InvalidStateError, PreconditionError
from .states import BipartiteState, mix_with_white_noise, reduced_states
from .thresholds import MARGINAL_TOL, require_equal_marginals

CONSTRUCTIONS = ("right", "left", "bell")
SOURCE_TOL = 1e-10
MAX_SOURCE_DIM = 512

# factors whose partial trace must reproduce the target state
_MARGINAL_FACTORS = {"right": (1, 2), "left": (0, 1), "bell": (0, 1, 2)}


@dataclass(frozen=True, eq=False)
class SourceOperator:
    construction: str
    dims: tuple[int, int, int]
    matrix: np.ndarray = field(repr=False)
    beta: float
    target: BipartiteState = field(repr=False)
    rho: BipartiteState = field(repr=False)

    def __post_init__(self):
        if self.construction not in CONSTRUCTIONS:
            raise ValueError(f"unknown construction {self.construction!r}")
        m = linalg.as_matrix(self.matrix)
        linalg.check_dims(self.dims, m.shape[0])
        herm = linalg.hermiticity_residual(m)
        if herm > SOURCE_TOL:
            raise InvalidStateError(f"source operator not Hermitian (residual {herm:.3e})")
        tr = np.trace(m)
        if abs(tr - 1.0) > SOURCE_TOL:
            raise InvalidStateError(f"source operator trace {tr.real:.15g} != 1")
        worst = max(self.marginal_residuals().values())
        if worst > SOURCE_TOL:
            raise InvalidStateError(f"marginal identity violated by {worst:.3e}")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def marginal_factors(self) -> tuple[int, ...]:
        return _MARGINAL_FACTORS[self.construction]

    def marginal(self, factor: int) -> np.ndarray:
        return linalg.partial_trace(self.matrix, self.dims, factor)

    def marginal_residuals(self) -> dict[int, float]:
        """Max entrywise deviation from the target, per traced-out factor."""
        return {
            k: float(np.max(np.abs(self.marginal(k) - self.target.matrix)))
            for k in self.marginal_factors
        }


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not 0.0 <= beta <= 1.0:
        raise PreconditionError(f"beta must lie in [0, 1], got {beta}")
    return beta


def _bracket_right(rho: BipartiteState) -> np.ndarray:
    d1, d2 = rho.dims
    tau1, _ = reduced_states(rho)
    xi = np.eye(d2, dtype=complex) / d2
    a = np.kron(rho.matrix, xi)
    b = linalg.permute_factors(a, (d1, d2, d2), (0, 2, 1))
    return a + b - linalg.kron_all(tau1, xi, xi)


def _bracket_left(rho: BipartiteState) -> np.ndarray:
    d1, d2 = rho.dims
    _, tau2 = reduced_states(rho)
    xi = np.eye(d1, dtype=complex) / d1
    a = np.kron(xi, rho.matrix)
    b = linalg.permute_factors(a, (d1, d1, d2), (1, 0, 2))
    return a + b - linalg.kron_all(xi, xi, tau2)


def _bracket_bell(rho: BipartiteState) -> np.ndarray:
    d = rho.d1
    tau, _ = reduced_states(rho)
    dims = (d, d, d)
    r12 = np.kron(rho.matrix, tau)
    r13 = linalg.permute_factors(r12, dims, (0, 2, 1))
    r23 = np.kron(tau, rho.matrix)
    return r12 + r13 + r23 - 2.0 * linalg.kron_all(tau, tau, tau)


def _source_dims(rho: BipartiteState, construction: str) -> tuple[int, int, int]:
    d1, d2 = rho.dims
    if construction == "right":
        return (d1, d2, d2)
    if construction == "left":
        return (d1, d1, d2)
    if construction == "bell":
        return (d1, d1, d1)
    raise ValueError(f"unknown construction {construction!r}; expected {CONSTRUCTIONS}")


def _check_construction(rho: BipartiteState, construction: str, marginal_tol: float) -> None:
    if construction not in CONSTRUCTIONS:
        raise ValueError(f"unknown construction {construction!r}; expected {CONSTRUCTIONS}")
    if construction == "bell":
        if rho.d1 != rho.d2:
            raise DimensionError(f"bell construction needs d1 == d2, got {rho.dims}")
        require_equal_marginals(rho, marginal_tol)


def noise_free_part(rho: BipartiteState, construction: str, marginal_tol: float = MARGINAL_TOL) -> np.ndarray:
    """The bracket multiplying ``1 - beta``; ``T(beta) = (1-beta) A + beta I/N``."""
    _check_construction(rho, construction, marginal_tol)
    return {"right": _bracket_right, "left": _bracket_left, "bell": _bracket_bell}[construction](rho)


def build(
    rho: BipartiteState, beta: float, construction: str, marginal_tol: float = MARGINAL_TOL
) -> SourceOperator:
    beta = _check_beta(beta)
    bracket = noise_free_part(rho, construction, marginal_tol)
    dims = _source_dims(rho, construction)
    n = int(np.prod(dims))
    m = (1.0 - beta) * bracket + beta * np.eye(n, dtype=complex) / n
    return SourceOperator(construction, dims, m, beta, mix_with_white_noise(rho, beta), rho)


def build_right(rho: BipartiteState, beta: float) -> SourceOperator:
    return build(rho, beta, "right")


def build_left(rho: BipartiteState, beta: float) -> SourceOperator:
    return build(rho, beta, "left")


def build_bell(rho: BipartiteState, beta: float, marginal_tol: float = MARGINAL_TOL) -> SourceOperator:
    return build(rho, beta, "bell", marginal_tol)


def analytic_lower_bound(rho: BipartiteState, beta: float, construction: str) -> float:
    """Lower bound on ``lambda_min(T(beta))`` from the norm estimate of the noise term.

    ``right``: ``(b - d1 ||tau1|| (1-b)) / (d1 d2^2)``;
    ``left``: ``(b - d2 ||tau2|| (1-b)) / (d1^2 d2)``;
    ``bell``: ``(b - 2 d^3 ||tau||^3 (1-b)) / d^3``.
    """
    d1, d2 = rho.dims
    tau1, tau2 = reduced_states(rho)
    if construction == "right":
        return (beta - d1 * linalg.operator_norm(tau1) * (1 - beta)) / (d1 * d2**2)
    if construction == "left":
        return (beta - d2 * linalg.operator_norm(tau2) * (1 - beta)) / (d1**2 * d2)
    if construction == "bell":
        d = d1
        return (beta - 2 * d**3 * linalg.operator_norm(tau1) ** 3 * (1 - beta)) / d**3
    raise ValueError(f"unknown construction {construction!r}")


@dataclass
class DsoCertificate:
    construction: str
    beta: float
    min_eigenvalue: float
    is_dso: bool
    analytic_lower_bound: float
    tol: float
    marginal_residuals: dict[int, float]

    def to_dict(self) -> dict:
        return {
            "construction": self.construction,
            "beta": self.beta,
            "min_eigenvalue": self.min_eigenvalue,
            "is_dso": self.is_dso,
            "analytic_lower_bound": self.analytic_lower_bound,
            "tol": self.tol,
            "marginal_residuals": {str(k): v for k, v in self.marginal_residuals.items()},
        }


def certify(t: SourceOperator, tol: float = linalg.PSD_TOL) -> DsoCertificate:
    """Certify positivity of a source operator by its exact smallest eigenvalue."""
    lam = float(np.linalg.eigvalsh(t.matrix)[0])
    return DsoCertificate(
        construction=t.construction,
        beta=t.beta,
        min_eigenvalue=lam,
        is_dso=lam >= -tol,
        analytic_lower_bound=analytic_lower_bound(t.rho, t.beta, t.construction),
        tol=tol,
        marginal_residuals=t.marginal_residuals(),
    )


def min_eigenvalue_curve(
    rho: BipartiteState, construction: str, betas, marginal_tol: float = MARGINAL_TOL
) -> np.ndarray:
    """``lambda_min(T(beta))`` sampled at each beta in ``betas``."""
    bracket = noise_free_part(rho, construction, marginal_tol)
    n = bracket.shape[0]
    eye = np.eye(n, dtype=complex) / n
    return np.array(
        [np.linalg.eigvalsh((1 - b) * bracket + b * eye)[0] for b in np.asarray(betas, float)]
    )


def minimal_positive_beta(
    rho: BipartiteState,
    construction: str,
    tol: float = 1e-8,
    max_iter: int = 60,
    marginal_tol: float = MARGINAL_TOL,
) -> float:
    """Smallest beta in [0, 1] (to within ``tol``) where ``T(beta) >= 0``.

    ``lambda_min(T(beta))`` is concave in beta and positive at beta = 1, so the
    feasible set is an interval ending at 1 and bisection applies. The
    returned value is always on the feasible side.
    """
    bracket = noise_free_part(rho, construction, marginal_tol)
    n = bracket.shape[0]
    if n > MAX_SOURCE_DIM:
        raise DimensionError(f"source operator dimension {n} exceeds cap {MAX_SOURCE_DIM}")
    eye = np.eye(n, dtype=complex) / n

    def feasible(b: float) -> bool:
        return np.linalg.eigvalsh((1 - b) * bracket + b * eye)[0] >= 0.0

    if feasible(0.0):
        return 0.0
    lo, hi = 0.0, 1.0
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return hi
