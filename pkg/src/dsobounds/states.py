"""Bipartite density matrices: named states, white-noise mixing, reduced states."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg
from .errors import DimensionError, InvalidStateError, PreconditionError

STATE_HERMITIAN_TOL = 1e-12
STATE_TRACE_TOL = 1e-12
STATE_EIG_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """Density matrix on C^d1 ⊗ C^d2.

    Validated at construction: Hermitian, unit trace and positive
    semidefinite within tolerance. Invalid matrices are rejected, never
    repaired.
    """

    d1: int
    d2: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = linalg.as_matrix(self.matrix).copy()
        d1, d2 = int(self.d1), int(self.d2)
        linalg.check_dims((d1, d2))
        if m.shape != (d1 * d2, d1 * d2):
            raise DimensionError(
                f"matrix shape {m.shape} does not match d1*d2 = {d1 * d2}"
            )
        scale = max(1.0, float(np.max(np.abs(m))))
        herm = linalg.hermiticity_residual(m)
        if herm > STATE_HERMITIAN_TOL * scale:
            raise InvalidStateError(f"state is not Hermitian (residual {herm:.3e})")
        tr = np.trace(m)
        if abs(tr - 1.0) > STATE_TRACE_TOL:
            raise InvalidStateError(f"state trace is {tr.real:.15g}, expected 1")
        lam = float(np.linalg.eigvalsh(m)[0])
        if lam < -STATE_EIG_TOL:
            raise InvalidStateError(
                f"state is not positive semidefinite (lambda_min = {lam:.3e})"
            )
        m.setflags(write=False)
        object.__setattr__(self, "d1", d1)
        object.__setattr__(self, "d2", d2)
        object.__setattr__(self, "matrix", m)

    @property
    def dims(self) -> tuple[int, int]:
        return (self.d1, self.d2)

    @property
    def dim(self) -> int:
        return self.d1 * self.d2

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))


def pure_state(vector, d1: int, d2: int) -> BipartiteState:
    psi = np.asarray(vector, dtype=complex).reshape(-1)
    psi = psi / np.linalg.norm(psi)
    return BipartiteState(d1, d2, np.outer(psi, psi.conj()))


_BELL_VECTORS = {
    "phi+": (1, 0, 0, 1),
    "phi-": (1, 0, 0, -1),
    "psi+": (0, 1, 1, 0),
    "psi-": (0, 1, -1, 0),
}


def bell_state(kind: str) -> BipartiteState:
    """One of the four Bell projectors: ``phi+``, ``phi-``, ``psi+``, ``psi-``."""
    try:
        vec = np.array(_BELL_VECTORS[kind], dtype=complex) / np.sqrt(2)
    except KeyError:
        raise InvalidStateError(
            f"unknown Bell state {kind!r}; expected one of {sorted(_BELL_VECTORS)}"
        ) from None
    return BipartiteState(2, 2, np.outer(vec, vec.conj()))


def phased_max_entangled_vector(d: int, phases: Sequence[float] | None = None) -> np.ndarray:
    if d < 2:
        raise DimensionError(f"d must be >= 2, got {d}")
    phases = np.zeros(d) if phases is None else np.asarray(phases, dtype=float)
    if phases.shape != (d,):
        raise DimensionError(f"expected {d} phases, got {phases.size}")
    vec = np.zeros(d * d, dtype=complex)
    vec[np.arange(d) * (d + 1)] = np.exp(1j * phases) / np.sqrt(d)
    return vec


def phased_max_entangled(d: int, phases: Sequence[float] | None = None) -> BipartiteState:
    """Projector onto ``d^{-1/2} sum_n exp(i phase_n) e_n ⊗ e_n``; zero phases by default."""
    vec = phased_max_entangled_vector(d, phases)
    return BipartiteState(d, d, np.outer(vec, vec.conj()))


def maximally_mixed(d1: int, d2: int) -> BipartiteState:
    n = d1 * d2
    return BipartiteState(d1, d2, np.eye(n, dtype=complex) / n)


def mix_with_white_noise(rho: BipartiteState, beta: float) -> BipartiteState:
    """``beta * I/(d1 d2) + (1 - beta) * rho``."""
    beta = float(beta)
    if not 0.0 <= beta <= 1.0:
        raise PreconditionError(f"noise fraction beta must lie in [0, 1], got {beta}")
    n = rho.dim
    return BipartiteState(
        rho.d1, rho.d2, beta * np.eye(n, dtype=complex) / n + (1.0 - beta) * rho.matrix
    )


def reduced_states(rho: BipartiteState) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(tr_2 rho, tr_1 rho)``."""
    return (
        linalg.partial_trace(rho.matrix, rho.dims, 1),
        linalg.partial_trace(rho.matrix, rho.dims, 0),
    )


def product_state(rho_a, rho_b) -> BipartiteState:
    a, b = linalg.as_matrix(rho_a), linalg.as_matrix(rho_b)
    return BipartiteState(a.shape[0], b.shape[0], np.kron(a, b))


def swap_operator(d: int) -> np.ndarray:
    s = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            s[j * d + i, i * d + j] = 1.0
    return s


def symmetrize_marginals(rho: BipartiteState) -> BipartiteState:
    """Average ``rho`` with its subsystem swap, giving equal reduced states."""
    if rho.d1 != rho.d2:
        raise DimensionError("marginal symmetrization requires d1 == d2")
    s = swap_operator(rho.d1)
    return BipartiteState(rho.d1, rho.d2, (rho.matrix + s @ rho.matrix @ s) / 2)


def random_density_matrix(n: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Ginibre-induced random density matrix of size ``n`` and the given rank."""
    rank = n if rank is None else int(rank)
    g = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    m = g @ g.conj().T
    m = (m + m.conj().T) / 2
    return m / np.trace(m).real


def random_state(
    d1: int, d2: int, rng: np.random.Generator, rank: int | None = None
) -> BipartiteState:
    return BipartiteState(d1, d2, random_density_matrix(d1 * d2, rng, rank))


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR with phase correction."""
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


_PHASED_RE = re.compile(r"^phased:d=(\d+)(?::(.+))?$")
_WERNER_RE = re.compile(r"^werner:beta=([0-9.eE+-]+)$")
_MIXED_RE = re.compile(r"^mixed:d1=(\d+),d2=(\d+)$")


def named_state(name: str) -> BipartiteState:
    """Resolve a registry name.

    Recognised forms: ``bell:<phi+|phi-|psi+|psi->``, ``phased:d=<d>`` with
    optional ``:<p1>,<p2>,...`` phases, ``werner:beta=<b>`` (the singlet mixed
    with white noise fraction ``b``) and ``mixed:d1=<a>,d2=<b>``.
    """
    name = name.strip()
    if name.startswith("bell:"):
        return bell_state(name[len("bell:"):])
    m = _PHASED_RE.match(name)
    if m:
        d = int(m.group(1))
        phases = None
        if m.group(2):
            try:
                phases = [float(x) for x in m.group(2).split(",")]
            except ValueError:
                raise InvalidStateError(f"bad phase list in {name!r}") from None
        return phased_max_entangled(d, phases)
    m = _WERNER_RE.match(name)
    if m:
        return mix_with_white_noise(bell_state("psi-"), float(m.group(1)))
    m = _MIXED_RE.match(name)
    if m:
        return maximally_mixed(int(m.group(1)), int(m.group(2)))
    raise InvalidStateError(f"unknown state name {name!r}")


def is_registry_name(text: str) -> bool:
    return text.split(":", 1)[0] in {"bell", "phased", "werner", "mixed"} and ":" in text
