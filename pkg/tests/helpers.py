"""Independent oracles shared by the test modules."""

import numpy as np
import pytest

# acceptance lines collected for the terminal summary
ACCEPTANCE_RESULTS = pytest.StashKey[dict]()


def random_hermitian(n, rng):
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (g + g.conj().T) / 2


def brute_kron(a, b):
    ra, ca = a.shape
    rb, cb = b.shape
    out = np.zeros((ra * rb, ca * cb), dtype=complex)
    for i in range(ra):
        for j in range(ca):
            for k in range(rb):
                for l in range(cb):
                    out[i * rb + k, j * cb + l] = a[i, j] * b[k, l]
    return out


def brute_partial_trace(t, dims, factor):
    """Index-loop partial trace over one factor."""
    keep = [d for i, d in enumerate(dims) if i != factor]
    n_keep = int(np.prod(keep))
    out = np.zeros((n_keep, n_keep), dtype=complex)
    for row in np.ndindex(*keep):
        for col in np.ndindex(*keep):
            s = 0
            for j in range(dims[factor]):
                r = list(row)
                c = list(col)
                r.insert(factor, j)
                c.insert(factor, j)
                s += t[np.ravel_multi_index(r, dims), np.ravel_multi_index(c, dims)]
            out[np.ravel_multi_index(row, keep), np.ravel_multi_index(col, keep)] = s
    return out


def brute_partial_transpose(t, dims, factor):
    n = int(np.prod(dims))
    out = np.zeros((n, n), dtype=complex)
    for row in np.ndindex(*dims):
        for col in np.ndindex(*dims):
            r, c = list(row), list(col)
            r[factor], c[factor] = c[factor], r[factor]
            out[np.ravel_multi_index(r, dims), np.ravel_multi_index(c, dims)] = t[
                np.ravel_multi_index(row, dims), np.ravel_multi_index(col, dims)
            ]
    return out


def bloch_singlet_correlation(a, b):
    """Singlet correlation for spin directions a, b: -a.b."""
    return -float(np.dot(a, b))
