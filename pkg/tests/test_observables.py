import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dsobounds import linalg
from dsobounds.errors import DimensionError, NotHermitianError, ObservableNormError
from dsobounds.observables import (
    SIGMA_X,
    SIGMA_Z,
    Observable,
    QubitObservableParams,
    correlation,
    qubit_observable,
    random_observable,
    spin,
)
from dsobounds.states import bell_state, maximally_mixed, mix_with_white_noise, random_state


def test_qubit_observable_examples():
    np.testing.assert_array_equal(qubit_observable(QubitObservableParams(0, (0, 0, 1))).matrix, SIGMA_Z)
    np.testing.assert_allclose(
        qubit_observable(QubitObservableParams(0.5, (0, 0, 0.5))).matrix, np.diag([1, 0])
    )
    w = qubit_observable(QubitObservableParams(0, (0.6, 0, 0.8)))
    np.testing.assert_allclose(np.linalg.eigvalsh(w.matrix), [-1, 1], atol=1e-15)


def test_qubit_eigenvalues_alpha_pm_n():
    p = QubitObservableParams(0.2, (0.1, -0.3, 0.2))
    np.testing.assert_allclose(np.linalg.eigvalsh(qubit_observable(p).matrix), p.eigenvalues, atol=1e-15)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 5))
def test_random_observable_unit_norm(seed, dim):
    w = random_observable(dim, np.random.default_rng(seed))
    assert w.norm == pytest.approx(1.0, abs=1e-10)


def test_random_observable_deterministic_and_hermitian():
    a = random_observable(3, np.random.default_rng(7))
    b = random_observable(3, np.random.default_rng(7))
    np.testing.assert_array_equal(a.matrix, b.matrix)
    assert linalg.hermiticity_residual(a.matrix) <= 1e-14


def test_observable_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        Observable(np.array([[0, 1], [0, 0]]))


def test_norm_check_at_call_site():
    big = qubit_observable(QubitObservableParams(0.5, (0, 0, 1)))
    with pytest.raises(ObservableNormError):
        big.require_bounded()
    spin((1, 1, 0)).require_bounded()


def test_singlet_zz_correlation():
    z = Observable(SIGMA_Z)
    assert correlation(bell_state("psi-"), z, z) == pytest.approx(-1.0, abs=1e-15)


def test_maximally_mixed_correlation(rng):
    a, b = random_observable(2, rng), random_observable(3, rng)
    expected = np.trace(a.matrix).real * np.trace(b.matrix).real / 6
    assert correlation(maximally_mixed(2, 3), a, b) == pytest.approx(expected, abs=1e-14)
    assert correlation(maximally_mixed(2, 2), Observable(SIGMA_X), Observable(SIGMA_Z)) == 0.0


def test_correlation_noisy_singlet_formula():
    p = QubitObservableParams(0.3, (0.2, 0.4, -0.1))
    w = qubit_observable(p)
    for beta in (0.0, 0.25, 2 / 3, 1.0):
        eta = mix_with_white_noise(bell_state("psi-"), beta)
        assert correlation(eta, w, w) == pytest.approx(p.alpha**2 - p.n_norm**2 * (1 - beta), abs=1e-12)


def test_correlation_against_explicit_trace(rng):
    rho = random_state(2, 3, rng)
    a, b = random_observable(2, rng), random_observable(3, rng)
    expected = np.trace(rho.matrix @ np.kron(a.matrix, b.matrix)).real
    assert correlation(rho, a, b) == pytest.approx(expected, abs=1e-14)


def test_correlation_dimension_mismatch(rng):
    with pytest.raises(DimensionError):
        correlation(random_state(2, 3, rng), random_observable(3, rng), random_observable(3, rng))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_correlation_bilinear_affine_bounded(seed):
    rng = np.random.default_rng(seed)
    r1, r2 = random_state(2, 2, rng), random_state(2, 2, rng)
    a, a2, b = (random_observable(2, rng) for _ in range(3))
    x, y = rng.uniform(-1, 1, 2)
    combo = Observable(x * a.matrix + y * a2.matrix)
    assert correlation(r1, combo, b) == pytest.approx(
        x * correlation(r1, a, b) + y * correlation(r1, a2, b), abs=1e-12
    )
    t = rng.uniform()
    from dsobounds.states import BipartiteState

    mix = BipartiteState(2, 2, t * r1.matrix + (1 - t) * r2.matrix)
    assert correlation(mix, a, b) == pytest.approx(
        t * correlation(r1, a, b) + (1 - t) * correlation(r2, a, b), abs=1e-12
    )
    assert abs(correlation(r1, a, b)) <= a.norm * b.norm + 1e-12
