"""Closed-form quantities for the noisy singlet and noisy phased maximally
entangled states, each paired with the generic numerical route."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from . import linalg
from .errors import PreconditionError
from .observables import (
    IDENTITY,
    PAULIS,
    QubitObservableParams,
    correlation,
    qubit_observable,
)
from .states import (
    BipartiteState,
    bell_state,
    mix_with_white_noise,
    phased_max_entangled,
)


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not 0.0 <= beta <= 1.0:
        raise PreconditionError(f"beta must lie in [0, 1], got {beta}")
    return beta


def noisy_singlet(beta: float) -> BipartiteState:
    return mix_with_white_noise(bell_state("psi-"), _check_beta(beta))


def noisy_singlet_correlation(p: QubitObservableParams, beta: float) -> float:
    """``alpha^2 - |n|^2 (1 - beta)``: both parties measure ``W_{alpha,n}``."""
    beta = _check_beta(beta)
    return p.alpha**2 - p.n_norm**2 * (1.0 - beta)


def noisy_singlet_correlation_numeric(p: QubitObservableParams, beta: float) -> float:
    w = qubit_observable(p)
    return correlation(noisy_singlet(beta), w, w)


@dataclass
class JointProbabilities:
    """Outcome-pair probabilities for both parties measuring ``W_{alpha,n}``.

    ``plus`` is the outcome ``alpha + |n|``, ``minus`` is ``alpha - |n|``; the
    first label is Alice's.
    """

    outcomes: tuple[float, float]
    plus_plus: float
    minus_minus: float
    plus_minus: float
    minus_plus: float
    conditional_same: float
    conditional_different: float

    def table(self) -> np.ndarray:
        """2x2 array indexed ``[alice, bob]`` with 0 = minus, 1 = plus."""
        return np.array(
            [[self.minus_minus, self.minus_plus], [self.plus_minus, self.plus_plus]]
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        d["outcomes"] = list(self.outcomes)
        return d


def _check_n(p: QubitObservableParams) -> None:
    if p.n_norm == 0.0:
        raise PreconditionError("joint probabilities need |n| != 0 (two distinct outcomes)")


def noisy_singlet_joint_probs(p: QubitObservableParams, beta: float) -> JointProbabilities:
    """Same outcomes ``beta/4`` each, different outcomes ``1/2 - beta/4`` each.

    Conditioned on Bob's outcome, Alice agrees with probability ``beta/2``.
    """
    beta = _check_beta(beta)
    _check_n(p)
    same = beta / 4.0
    diff = 0.5 - beta / 4.0
    return JointProbabilities(
        outcomes=(p.alpha + p.n_norm, p.alpha - p.n_norm),
        plus_plus=same,
        minus_minus=same,
        plus_minus=diff,
        minus_plus=diff,
        conditional_same=beta / 2.0,
        conditional_different=1.0 - beta / 2.0,
    )


def spectral_projectors(p: QubitObservableParams) -> tuple[np.ndarray, np.ndarray]:
    """``((I + n̂·sigma)/2, (I - n̂·sigma)/2)`` for eigenvalues ``alpha ± |n|``."""
    _check_n(p)
    nhat = np.asarray(p.n) / p.n_norm
    ns = sum(c * s for c, s in zip(nhat, PAULIS))
    return (IDENTITY + ns) / 2, (IDENTITY - ns) / 2


def noisy_singlet_joint_probs_numeric(p: QubitObservableParams, beta: float) -> JointProbabilities:
    """Joint probabilities from ``tr[eta (P_i ⊗ P_j)]`` with spectral projectors."""
    eta = noisy_singlet(beta).matrix
    plus, minus = spectral_projectors(p)

    def prob(a, b) -> float:
        return float(np.real(np.trace(eta @ np.kron(a, b))))

    pp, mm, pm, mp = prob(plus, plus), prob(minus, minus), prob(plus, minus), prob(minus, plus)
    bob_plus = pp + mp
    return JointProbabilities(
        outcomes=(p.alpha + p.n_norm, p.alpha - p.n_norm),
        plus_plus=pp,
        minus_minus=mm,
        plus_minus=pm,
        minus_plus=mp,
        conditional_same=pp / bob_plus,
        conditional_different=mp / bob_plus,
    )


def peres_pt_min_eig_analytic(d: int, beta: float) -> float:
    """``(beta (d+1) - d) / d^2``; negative exactly for ``beta < d/(d+1)``."""
    return (beta * (d + 1) - d) / d**2


def peres_pt_min_eig(
    d: int, beta: float, phases: Sequence[float] | None = None
) -> tuple[float, float]:
    """``(analytic, numeric)`` smallest eigenvalue of the partial transpose of
    the noisy phased maximally entangled state."""
    beta = _check_beta(beta)
    eta = mix_with_white_noise(phased_max_entangled(d, phases), beta)
    pt = linalg.partial_transpose(eta.matrix, eta.dims, 1)
    return peres_pt_min_eig_analytic(d, beta), linalg.min_eigenvalue(pt)


def separability_boundary(d: int) -> float:
    """Noise fraction ``d/(d+1)`` where the partial transpose turns positive."""
    return d / (d + 1)
