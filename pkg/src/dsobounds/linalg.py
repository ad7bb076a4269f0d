"""Dense complex linear algebra on tensor-product spaces.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. A tensor shape is
a tuple of factor dimensions ``(d0, d1, ...)``; factor 0 is the leftmost slot
of the Kronecker product.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from .errors import ConvergenceError, DimensionError, NotHermitianError

HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-9


def as_matrix(a) -> np.ndarray:
    """Return ``a`` as a 2-D complex array."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got array with ndim={m.ndim}")
    return m


def check_dims(dims: Sequence[int], size: int | None = None) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims:
        raise DimensionError("tensor shape must have at least one factor")
    if any(d < 2 for d in dims):
        raise DimensionError(f"every factor dimension must be >= 2, got {dims}")
    if size is not None and int(np.prod(dims)) != size:
        raise DimensionError(
            f"tensor shape {dims} describes dimension {int(np.prod(dims))}, "
            f"matrix has dimension {size}"
        )
    return dims


def _check_square(m: np.ndarray) -> None:
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"matrix must be square, got shape {m.shape}")


def hermiticity_residual(a) -> float:
    """Largest entrywise deviation ``max |A_ij - conj(A_ji)|``."""
    m = as_matrix(a)
    _check_square(m)
    if m.size == 0:
        return 0.0
    return float(np.max(np.abs(m - m.conj().T)))


def is_hermitian(a, tol: float = HERMITIAN_TOL) -> bool:
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        return False
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    return hermiticity_residual(m) <= tol * scale


def require_hermitian(a, tol: float = HERMITIAN_TOL, what: str = "matrix") -> np.ndarray:
    """Return ``a`` as a complex matrix, raising if it is not Hermitian.

    The input is never symmetrized.
    """
    m = as_matrix(a)
    _check_square(m)
    if not is_hermitian(m, tol):
        raise NotHermitianError(
            f"{what} is not Hermitian: residual {hermiticity_residual(m):.3e} exceeds "
            f"{tol:g} (relative)"
        )
    return m


def kron(a, b) -> np.ndarray:
    """Kronecker product, ``(A⊗B)[i*rB + k, j*cB + l] = A[i, j] * B[k, l]``."""
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(*ops) -> np.ndarray:
    out = as_matrix(ops[0])
    for op in ops[1:]:
        out = np.kron(out, as_matrix(op))
    return out


def _as_tensor(m: np.ndarray, dims: Sequence[int]) -> np.ndarray:
    m = as_matrix(m)
    _check_square(m)
    dims = check_dims(dims, m.shape[0])
    return m.reshape(dims + dims), dims


def partial_trace(t, dims: Sequence[int], factor: int) -> np.ndarray:
    """Trace out tensor factor ``factor`` of the square matrix ``t``."""
    tensor, dims = _as_tensor(t, dims)
    n = len(dims)
    if not 0 <= factor < n:
        raise DimensionError(f"factor {factor} out of range for shape {dims}")
    if n == 1:
        return np.array([[np.trace(tensor)]], dtype=complex)
    reduced = np.trace(tensor, axis1=factor, axis2=n + factor)
    rest = int(np.prod(dims)) // dims[factor]
    return reduced.reshape(rest, rest)


def partial_transpose(rho, dims: Sequence[int], factor: int) -> np.ndarray:
    """Transpose the indices of tensor factor ``factor`` only."""
    tensor, dims = _as_tensor(rho, dims)
    n = len(dims)
    if n != 2:
        raise DimensionError(f"partial transpose expects a two-factor shape, got {dims}")
    if not 0 <= factor < n:
        raise DimensionError(f"factor {factor} out of range for shape {dims}")
    swapped = np.swapaxes(tensor, factor, n + factor)
    size = int(np.prod(dims))
    return np.ascontiguousarray(swapped).reshape(size, size)


def permute_factors(t, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors: slot ``k`` of the result holds factor ``order[k]``."""
    tensor, dims = _as_tensor(t, dims)
    n = len(dims)
    order = list(order)
    if sorted(order) != list(range(n)):
        raise DimensionError(f"{order} is not a permutation of {n} factors")
    perm = order + [n + k for k in order]
    size = int(np.prod(dims))
    return np.ascontiguousarray(np.transpose(tensor, perm)).reshape(size, size)


class Eigh(NamedTuple):
    values: np.ndarray
    vectors: np.ndarray


def jacobi_eigh(a, max_sweeps: int = 100, rtol: float = 1e-14) -> Eigh:
    """Cyclic complex Jacobi eigensolver for a Hermitian matrix.

    Sweeps over all off-diagonal pairs, annihilating each with a unitary
    plane rotation, until the off-diagonal Frobenius mass drops below
    ``rtol * ||A||_F``. Eigenvalues are returned ascending.
    """
    m = require_hermitian(a).copy()
    n = m.shape[0]
    v = np.eye(n, dtype=complex)
    fro = np.linalg.norm(m)
    target = rtol * fro

    def off_norm() -> float:
        return float(np.linalg.norm(m - np.diag(np.diag(m))))

    for _ in range(max_sweeps):
        if off_norm() <= target or fro == 0.0:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                phase = apq / mag
                app, aqq = m[p, p].real, m[q, q].real
                zeta = (aqq - app) / (2.0 * mag)
                t = 1.0 / (abs(zeta) + np.hypot(1.0, zeta))
                if zeta < 0:
                    t = -t
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                # diag(1, conj(phase)) makes the (p, q) entry real, then a real rotation
                rot = np.array(
                    [[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=complex
                )
                cols = m[:, [p, q]] @ rot
                m[:, p], m[:, q] = cols[:, 0], cols[:, 1]
                rows = rot.conj().T @ m[[p, q], :]
                m[p, :], m[q, :] = rows[0], rows[1]
                m[p, q] = 0.0
                m[q, p] = 0.0
                vc = v[:, [p, q]] @ rot
                v[:, p], v[:, q] = vc[:, 0], vc[:, 1]
    else:
        if off_norm() > target:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps "
                f"(off-diagonal norm {off_norm():.3e})"
            )
    values = np.real(np.diag(m))
    order = np.argsort(values, kind="stable")
    return Eigh(values[order], v[:, order])


def hermitian_eig(a, method: str = "lapack") -> Eigh:
    """Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.

    ``method="lapack"`` uses :func:`numpy.linalg.eigh`; ``method="jacobi"``
    uses :func:`jacobi_eigh`. Non-Hermitian input raises.
    """
    m = require_hermitian(a)
    if method == "jacobi":
        return jacobi_eigh(m)
    if method != "lapack":
        raise ValueError(f"unknown eigensolver {method!r}")
    w, v = np.linalg.eigh(m)
    return Eigh(w, v)


def eigvalsh(a) -> np.ndarray:
    return np.linalg.eigvalsh(require_hermitian(a))


def min_eigenvalue(a) -> float:
    return float(eigvalsh(a)[0])


def operator_norm(a) -> float:
    """Largest absolute eigenvalue of a Hermitian matrix."""
    w = eigvalsh(a)
    return float(max(abs(w[0]), abs(w[-1])))


class PsdResult(NamedTuple):
    is_psd: bool
    min_eigenvalue: float


def is_psd(a, tol: float = PSD_TOL) -> PsdResult:
    """PSD test: ``lambda_min >= -tol * max(1, ||A||)``."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    w = eigvalsh(a)
    norm = max(abs(w[0]), abs(w[-1]))
    lam = float(w[0])
    return PsdResult(lam >= -tol * max(1.0, norm), lam)


def operator_sign(a) -> np.ndarray:
    """Hermitian sign function, mapping zero eigenvalues to +1."""
    w, v = np.linalg.eigh(require_hermitian(a, tol=1e-10))
    s = np.where(w >= 0, 1.0, -1.0)
    out = (v * s) @ v.conj().T
    return (out + out.conj().T) / 2
