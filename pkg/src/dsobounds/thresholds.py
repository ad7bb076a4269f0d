"""Noise thresholds computed from the reduced states of a bipartite state.

All formulas are total functions of the state. They are guaranteed
sufficient noise amounts only under the corresponding hypotheses (CHSH
violation for ``beta_chsh``, equal reduced states for ``beta_bell``), and
they need not be the least such amounts.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np

from . import linalg
from .errors import PreconditionError
from .states import BipartiteState, reduced_states

MARGINAL_TOL = 1e-10
TIE_TOL = 1e-12


class Gamma(NamedTuple):
    value: float
    side_values: tuple[float, float]
    tie: bool


def gamma(rho: BipartiteState) -> Gamma:
    """``min(d1 ||tau1||, d2 ||tau2||)``, with both side values."""
    tau1, tau2 = reduced_states(rho)
    s1 = rho.d1 * linalg.operator_norm(tau1)
    s2 = rho.d2 * linalg.operator_norm(tau2)
    return Gamma(min(s1, s2), (s1, s2), abs(s1 - s2) <= TIE_TOL)


def beta_chsh_from_gamma(g: float) -> float:
    return g / (1.0 + g)


def beta_bell_from_gamma(g: float) -> float:
    g3 = 2.0 * g**3
    return g3 / (1.0 + g3)


def beta_chsh(rho: BipartiteState) -> float:
    return beta_chsh_from_gamma(gamma(rho).value)


def marginal_difference(rho: BipartiteState) -> float:
    """Operator norm of ``tau1 - tau2``; requires ``d1 == d2``."""
    if rho.d1 != rho.d2:
        raise PreconditionError(
            f"equal reduced states need d1 == d2, got d1={rho.d1}, d2={rho.d2}"
        )
    tau1, tau2 = reduced_states(rho)
    diff = tau1 - tau2
    return linalg.operator_norm((diff + diff.conj().T) / 2)


def require_equal_marginals(rho: BipartiteState, tol: float = MARGINAL_TOL) -> None:
    delta = marginal_difference(rho)
    if delta > tol:
        raise PreconditionError(
            f"reduced states differ: ||tau1 - tau2|| = {delta:.3e} exceeds tolerance {tol:g}"
        )


def beta_bell(rho: BipartiteState, tol: float = MARGINAL_TOL) -> float:
    """``2 g^3 / (1 + 2 g^3)`` with ``g = d ||tau||``; needs equal reduced states."""
    require_equal_marginals(rho, tol)
    tau1, _ = reduced_states(rho)
    return beta_bell_from_gamma(rho.d1 * linalg.operator_norm(tau1))


@dataclass
class ThresholdReport:
    gamma: float
    side_values: tuple[float, float]
    tie: bool
    beta_chsh: float
    beta_bell: float | None
    reduced_equal: bool
    marginal_difference: float | None
    note: str = (
        "thresholds are sufficient noise fractions for a positive source operator; "
        "smaller fractions may also work"
    )

    def to_dict(self) -> dict:
        d = asdict(self)
        d["side_values"] = list(self.side_values)
        return d


def threshold_report(rho: BipartiteState, marginal_tol: float = MARGINAL_TOL) -> ThresholdReport:
    g = gamma(rho)
    delta = marginal_difference(rho) if rho.d1 == rho.d2 else None
    equal = delta is not None and delta <= marginal_tol
    bell = None
    if equal:
        tau1, _ = reduced_states(rho)
        bell = beta_bell_from_gamma(rho.d1 * linalg.operator_norm(tau1))
    return ThresholdReport(
        gamma=g.value,
        side_values=g.side_values,
        tie=g.tie,
        beta_chsh=beta_chsh_from_gamma(g.value),
        beta_bell=bell,
        reduced_equal=equal,
        marginal_difference=None if delta is None else float(np.float64(delta)),
    )
