import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dsobounds import singlet_lab as lab
from dsobounds.errors import PreconditionError
from dsobounds.inequalities import bell_check
from dsobounds.observables import QubitObservableParams, random_observable


def params(alpha, r, direction=(0.3, -0.5, 0.8)):
    u = np.asarray(direction) / np.linalg.norm(direction)
    return QubitObservableParams(alpha, tuple(r * u))


def test_correlation_examples():
    assert lab.noisy_singlet_correlation(params(0, 1), 0) == -1
    assert lab.noisy_singlet_correlation(params(0, 1), 2 / 3) == pytest.approx(-1 / 3)
    assert lab.noisy_singlet_correlation(params(0.5, 0.5), 0.5) == pytest.approx(0.125)


@settings(max_examples=50, deadline=None)
@given(
    st.floats(-1, 1), st.floats(0, 1), st.floats(0, 1),
    st.tuples(*[st.floats(-1, 1)] * 3).filter(lambda v: np.linalg.norm(v) > 1e-3),
)
def test_correlation_closed_form_vs_trace(alpha, r, beta, direction):
    p = params(alpha, r, direction)
    assert lab.noisy_singlet_correlation(p, beta) == pytest.approx(
        lab.noisy_singlet_correlation_numeric(p, beta), abs=1e-12
    )


def test_spin_correlation_negative_below_one():
    for beta in np.linspace(0, 1, 21)[:-1]:
        assert lab.noisy_singlet_correlation_numeric(params(0, 1), beta) < 0


def test_joint_probs_at_two_thirds():
    p = params(0, 1)
    for probs in (lab.noisy_singlet_joint_probs(p, 2 / 3), lab.noisy_singlet_joint_probs_numeric(p, 2 / 3)):
        got = (probs.plus_plus, probs.minus_minus, probs.plus_minus, probs.minus_plus)
        np.testing.assert_allclose(got, (1 / 6, 1 / 6, 1 / 3, 1 / 3), atol=1e-12)
        assert probs.conditional_same == pytest.approx(1 / 3, abs=1e-12)
        assert probs.conditional_different == pytest.approx(2 / 3, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.floats(-1, 1), st.floats(0.01, 1), st.floats(0, 1))
def test_joint_probs_closed_form_vs_trace(alpha, r, beta):
    p = params(alpha, r)
    a = lab.noisy_singlet_joint_probs(p, beta)
    b = lab.noisy_singlet_joint_probs_numeric(p, beta)
    np.testing.assert_allclose(a.table(), b.table(), atol=1e-12)
    assert a.table().sum() == pytest.approx(1.0, abs=1e-14)
    assert a.conditional_same == pytest.approx(b.conditional_same, abs=1e-12)


def test_joint_probs_need_nonzero_n():
    with pytest.raises(PreconditionError):
        lab.noisy_singlet_joint_probs(QubitObservableParams(0.3, (0, 0, 0)), 0.5)


def test_beta_out_of_range():
    with pytest.raises(PreconditionError):
        lab.noisy_singlet_correlation(params(0, 1), 1.1)


@pytest.mark.parametrize("d,beta,expected", [(3, 0.0, -1 / 3), (2, 1.0, 0.25), (2, 0.5, -1 / 8)])
def test_peres_examples(d, beta, expected):
    analytic, numeric = lab.peres_pt_min_eig(d, beta)
    assert analytic == pytest.approx(expected, abs=1e-15)
    assert numeric == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_peres_analytic_vs_numeric_random_phases(d):
    phases = np.random.default_rng(d).uniform(0, 2 * np.pi, d)
    for beta in np.linspace(0, 1, 6):
        analytic, numeric = lab.peres_pt_min_eig(d, beta, phases)
        assert numeric == pytest.approx(analytic, abs=1e-10)


def test_separability_boundary():
    for d in range(2, 6):
        b = lab.separability_boundary(d)
        assert lab.peres_pt_min_eig_analytic(d, b) == pytest.approx(0, abs=1e-15)
        assert lab.peres_pt_min_eig(d, b - 1e-9)[1] < 0
        assert lab.peres_pt_min_eig(d, b + 1e-9)[1] > 0


def test_negativity_window_grid():
    for alpha in np.linspace(-1, 1, 9):
        for r in np.linspace(0, 1, 9):
            for beta in np.linspace(0, 1, 9):
                value = lab.noisy_singlet_correlation(params(alpha, r), beta)
                window = alpha**2 < r**2 * (1 - beta)
                if abs(alpha**2 - r**2 * (1 - beta)) > 1e-12:
                    assert (value < 0) == window


@pytest.mark.parametrize("beta", [2 / 3, 0.75, 0.9, 0.99])
def test_bell_form_without_perfect_correlations(beta):
    rng = np.random.default_rng(int(beta * 1000))
    eta = lab.noisy_singlet(beta)
    for _ in range(300):
        assert bell_check(eta, *(random_observable(2, rng) for _ in range(3))).satisfied
    probs = lab.noisy_singlet_joint_probs(params(0, 1), beta)
    same = probs.plus_plus + probs.minus_minus
    assert same == pytest.approx(beta / 2) and same < 1


def test_separable_boundary_above_bell_threshold():
    for d in range(2, 7):
        assert lab.separability_boundary(d) >= 2 / 3
