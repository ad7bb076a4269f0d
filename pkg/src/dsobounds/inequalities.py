"""CHSH-type functionals, the perfect-correlation Bell form, and CHSH maximization."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg
from .errors import CoefficientError, DimensionError
from .observables import PAULIS, Observable, correlation, random_observable, spin
from .states import BipartiteState

VIOLATION_TOL = 1e-10
RELATION_TOL = 1e-12
TSIRELSON = 2.0 * np.sqrt(2.0)


@dataclass(frozen=True)
class ExtendedChshCoefficients:
    """Real weights ``(g11, g12, g21, g22)`` obeying at least one of::

        g11 g12 = -g21 g22,   g11 g21 = -g12 g22,   g11 g22 = -g12 g21
    """

    g11: float
    g12: float
    g21: float
    g22: float

    def __post_init__(self):
        for name in ("g11", "g12", "g21", "g22"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not any(self.relations()):
            res = self.relation_residuals()
            raise CoefficientError(
                "coefficients satisfy none of the three relations; residuals "
                + ", ".join(f"relation {i + 1}: {r:.3e}" for i, r in enumerate(res))
            )

    @property
    def values(self) -> tuple[float, float, float, float]:
        return (self.g11, self.g12, self.g21, self.g22)

    @property
    def max_abs(self) -> float:
        return max(abs(g) for g in self.values)

    @property
    def bound(self) -> float:
        return 2.0 * self.max_abs

    def relation_residuals(self) -> tuple[float, float, float]:
        a, b, c, d = self.values
        return (abs(a * b + c * d), abs(a * c + b * d), abs(a * d + b * c))

    def relations(self) -> tuple[bool, bool, bool]:
        scale = max(1.0, self.max_abs**2)
        return tuple(r <= RELATION_TOL * scale for r in self.relation_residuals())


CHSH_COEFFICIENTS = ExtendedChshCoefficients(1, 1, 1, -1)


def random_valid_coefficients(
    rng: np.random.Generator, relation: int, low: float = -3.0, high: float = 3.0, gap: float = 1e-3
) -> ExtendedChshCoefficients:
    """Draw three weights from ``[low, high]`` minus ``(-gap, gap)`` and solve
    relation ``relation`` (1, 2 or 3) for ``g22``."""

    def draw() -> float:
        while True:
            x = rng.uniform(low, high)
            if abs(x) >= gap:
                return x

    a, b, c = draw(), draw(), draw()
    if relation == 1:
        d = -a * b / c
    elif relation == 2:
        d = -a * c / b
    elif relation == 3:
        d = -b * c / a
    else:
        raise ValueError(f"relation must be 1, 2 or 3, got {relation}")
    return ExtendedChshCoefficients(a, b, c, d)


@dataclass
class ChshReport:
    value: float
    bound: float
    violated: bool
    correlations: tuple[float, float, float, float]
    settings: tuple[Observable, Observable, Observable, Observable] = field(repr=False)
    coefficients: tuple[float, float, float, float] = (1.0, 1.0, 1.0, -1.0)


def _check_settings(rho: BipartiteState, alice: Sequence[Observable], bob: Sequence[Observable]) -> None:
    for i, a in enumerate(alice, 1):
        if a.dim != rho.d1:
            raise DimensionError(f"A{i} acts on C^{a.dim}, Alice's space is C^{rho.d1}")
        a.require_bounded(f"A{i}")
    for k, b in enumerate(bob, 1):
        if b.dim != rho.d2:
            raise DimensionError(f"B{k} acts on C^{b.dim}, Bob's space is C^{rho.d2}")
        b.require_bounded(f"B{k}")


def correlation_table(rho, a1, a2, b1, b2) -> tuple[float, float, float, float]:
    """``(E11, E12, E21, E22)`` with ``E_ik = tr[rho (A_i ⊗ B_k)]``."""
    return (
        correlation(rho, a1, b1),
        correlation(rho, a1, b2),
        correlation(rho, a2, b1),
        correlation(rho, a2, b2),
    )


def extended_chsh_value(
    rho: BipartiteState,
    a1: Observable,
    a2: Observable,
    b1: Observable,
    b2: Observable,
    coeffs: ExtendedChshCoefficients,
) -> ChshReport:
    """``|sum g_ik E_ik|`` against the bound ``2 max |g_ik|``."""
    _check_settings(rho, (a1, a2), (b1, b2))
    e = correlation_table(rho, a1, a2, b1, b2)
    value = abs(sum(g * x for g, x in zip(coeffs.values, e)))
    bound = coeffs.bound
    return ChshReport(value, bound, value > bound + VIOLATION_TOL, e, (a1, a2, b1, b2), coeffs.values)


def chsh_value(rho, a1, a2, b1, b2) -> ChshReport:
    """``|E11 + E12 + E21 - E22|`` against the bound 2."""
    return extended_chsh_value(rho, a1, a2, b1, b2, CHSH_COEFFICIENTS)


@dataclass
class BellLine:
    lhs: float
    rhs: float
    satisfied: bool

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs


@dataclass
class BellCheck:
    lines: tuple[BellLine, BellLine]

    @property
    def satisfied(self) -> bool:
        return all(line.satisfied for line in self.lines)


def bell_check(rho: BipartiteState, w1: Observable, w2: Observable, w2t: Observable) -> BellCheck:
    """Evaluate both lines of the perfect-correlation Bell form for one triple.

    Line 1: ``|E(W1,W2) - E(W1,W2t)| <= 1 - E(W2,W2t)``.
    Line 2 is the same triple with the roles of the parties exchanged:
    ``|E(W2,W1) - E(W2t,W1)| <= 1 - E(W2,W2t)``.
    """
    if rho.d1 != rho.d2:
        raise DimensionError(f"Bell form needs d1 == d2, got {rho.dims}")
    _check_settings(rho, (w1, w2, w2t), ())
    cross = correlation(rho, w2, w2t)
    lhs1 = abs(correlation(rho, w1, w2) - correlation(rho, w1, w2t))
    lhs2 = abs(correlation(rho, w2, w1) - correlation(rho, w2t, w1))
    rhs = 1.0 - cross
    return BellCheck(
        (
            BellLine(lhs1, rhs, lhs1 <= rhs + VIOLATION_TOL),
            BellLine(lhs2, rhs, lhs2 <= rhs + VIOLATION_TOL),
        )
    )


def correlation_matrix(rho: BipartiteState) -> np.ndarray:
    """3x3 real matrix ``t_ij = tr[rho (sigma_i ⊗ sigma_j)]``."""
    if rho.dims != (2, 2):
        raise DimensionError(f"correlation matrix needs a two-qubit state, got {rho.dims}")
    return np.array(
        [[correlation(rho, Observable(si), Observable(sj)) for sj in PAULIS] for si in PAULIS]
    )


@dataclass
class ChshMax:
    value: float
    settings: tuple[Observable, Observable, Observable, Observable] = field(repr=False)
    history: list[float] = field(default_factory=list, repr=False)


def chsh_max_two_qubit(rho: BipartiteState) -> ChshMax:
    """Closed-form CHSH maximum ``2 sqrt(s1^2 + s2^2)`` over qubit observables.

    ``s1 >= s2`` are the top singular values of the correlation matrix.
    Bob's directions are ``cos(t) c1 ± sin(t) c2`` with ``t = atan(s2/s1)``
    and ``c1, c2`` the top right singular vectors; Alice's are the matching
    left singular vectors.
    """
    t = correlation_matrix(rho)
    u, s, vt = np.linalg.svd(t)
    s1, s2 = s[0], s[1]
    value = 2.0 * np.hypot(s1, s2)
    theta = np.arctan2(s2, s1)
    c1, c2 = vt[0], vt[1]
    b1 = np.cos(theta) * c1 + np.sin(theta) * c2
    b2 = np.cos(theta) * c1 - np.sin(theta) * c2
    settings = (spin(u[:, 0]), spin(u[:, 1]), spin(b1), spin(b2))
    return ChshMax(float(value), settings)


def _induced(rho_t: np.ndarray, op: np.ndarray, side: int) -> np.ndarray:
    """``tr_B[rho (I ⊗ op)]`` (side 1) or ``tr_A[rho (op ⊗ I)]`` (side 0)."""
    if side == 1:
        m = np.einsum("ikjl,lk->ij", rho_t, op)
    else:
        m = np.einsum("ikjl,ji->kl", rho_t, op)
    return (m + m.conj().T) / 2


def _signed_chsh(rho_t, a1, a2, b1, b2) -> float:
    def e(a, b):
        return np.einsum("ikjl,ji,lk->", rho_t, a, b).real

    return e(a1, b1) + e(a1, b2) + e(a2, b1) - e(a2, b2)


def _seesaw_run(rho: BipartiteState, rng: np.random.Generator, max_iter: int, gain_tol: float):
    d1, d2 = rho.dims
    rho_t = rho.matrix.reshape(d1, d2, d1, d2)
    b1 = linalg.operator_sign(random_observable(d2, rng).matrix)
    b2 = linalg.operator_sign(random_observable(d2, rng).matrix)
    history: list[float] = []
    previous = -np.inf
    for _ in range(max_iter):
        a1 = linalg.operator_sign(_induced(rho_t, b1 + b2, 1))
        a2 = linalg.operator_sign(_induced(rho_t, b1 - b2, 1))
        b1 = linalg.operator_sign(_induced(rho_t, a1 + a2, 0))
        b2 = linalg.operator_sign(_induced(rho_t, a1 - a2, 0))
        value = _signed_chsh(rho_t, a1, a2, b1, b2)
        history.append(float(value))
        if value - previous < gain_tol:
            break
        previous = value
    settings = tuple(Observable(m) for m in (a1, a2, b1, b2))
    return history, settings


def chsh_max_seesaw(
    rho: BipartiteState,
    restarts: int = 8,
    seed: int = 42,
    max_iter: int = 200,
    gain_tol: float = 1e-9,
) -> ChshMax:
    """Lower bound on the CHSH maximum by alternating exact maximization.

    With Bob's pair fixed, ``A1 = sign(tr_B[rho (I ⊗ (B1 + B2))])`` and
    ``A2 = sign(tr_B[rho (I ⊗ (B1 - B2))])`` are optimal among norm-1
    observables; Bob's step is symmetric. Restart ``r`` draws its start from
    the stream seeded by ``(seed, r)``, so results do not depend on order.
    """
    best: ChshMax | None = None
    for r in range(restarts):
        rng = np.random.default_rng([seed, r])
        history, settings = _seesaw_run(rho, rng, max_iter, gain_tol)
        value = history[-1]
        if best is None or value > best.value:
            best = ChshMax(float(value), settings, history)
    return best


@dataclass
class PointwiseBoundCheck:
    max_value: float
    corner_max: float
    sampled_max: float
    bound: float

    @property
    def holds(self) -> bool:
        return self.max_value <= self.bound + 1e-12


def multilinear_form(coeffs: ExtendedChshCoefficients, lam) -> np.ndarray:
    """``g11 l1 l2 + g12 l1 l2t + g21 l1t l2 + g22 l1t l2t`` for rows ``(l1, l1t, l2, l2t)``."""
    lam = np.atleast_2d(np.asarray(lam, dtype=float))
    l1, l1t, l2, l2t = lam.T
    g11, g12, g21, g22 = coeffs.values
    return g11 * l1 * l2 + g12 * l1 * l2t + g21 * l1t * l2 + g22 * l1t * l2t


_CORNERS = np.array(list(itertools.product((-1.0, 1.0), repeat=4)))


def check_pointwise_bound(
    coeffs: ExtendedChshCoefficients, samples: int, rng: np.random.Generator
) -> PointwiseBoundCheck:
    """Largest ``|form|`` over random points of [-1,1]^4 and all 16 corners.

    The form is multilinear, so the corner sweep alone gives the exact
    maximum over the cube.
    """
    corner = float(np.max(np.abs(multilinear_form(coeffs, _CORNERS))))
    sampled = 0.0
    if samples > 0:
        pts = rng.uniform(-1.0, 1.0, size=(samples, 4))
        sampled = float(np.max(np.abs(multilinear_form(coeffs, pts))))
    return PointwiseBoundCheck(max(corner, sampled), corner, sampled, coeffs.bound)
