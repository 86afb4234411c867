"""Property-based checks of the algebraic invariants."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from wignerprobe import detector as det
from wignerprobe import photon_statistics as ps
from wignerprobe import reconstruction as rc

etas = st.floats(min_value=0.05, max_value=1.0)
gammas = st.floats(min_value=0.0, max_value=1.5)


@settings(max_examples=40, deadline=None)
@given(etas, etas)
def test_loss_matrices_compose(eta1, eta2):
    a = det.loss_matrix(eta1, 10).entries
    b = det.loss_matrix(eta2, 10).entries
    c = det.loss_matrix(eta1 * eta2, 10).entries
    np.testing.assert_allclose(a @ b, c, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=0.2, max_value=1.0), gammas)
def test_loss_then_inverse_is_identity_on_states(eta, gamma):
    rho = ps.displaced_fock(1, gamma, 20, tail_tol=np.inf).probs
    degraded = det.loss_matrix(eta, 21).entries @ rho
    np.testing.assert_allclose(rc.invert_loss(degraded, eta).values, rho,
                               atol=1e-8)


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=0.0, max_value=1.0), gammas)
def test_parity_is_linear(w, gamma):
    a = ps.displaced_fock(0, gamma, 24, tail_tol=np.inf).probs
    b = ps.displaced_fock(1, gamma, 24, tail_tol=np.inf).probs
    mixed = w * a + (1.0 - w) * b
    want = w * ps.parity_wigner(a) + (1.0 - w) * ps.parity_wigner(b)
    assert abs(ps.parity_wigner(mixed) - want) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=0.3, max_value=1.0), gammas,
       st.floats(min_value=0.3, max_value=1.0))
def test_loss_commutes_with_recalibrated_displacement(T, gamma, extra):
    # losing photons first and displacing by gamma equals displacing by
    # gamma/sqrt(T) first and then losing photons
    first = ps.lossy_displaced_fock(1, gamma, T, 32, tail_tol=np.inf).probs
    pre = ps.displaced_fock(1, gamma / np.sqrt(T), 32, tail_tol=np.inf).probs
    second = det.loss_matrix(T, 33).entries @ pre
    np.testing.assert_allclose(first, second, atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=4), gammas)
def test_displaced_fock_normalized(m, gamma):
    d = ps.displaced_fock(m, gamma, 48, tail_tol=np.inf)
    assert abs(d.probs.sum() - 1.0) < 1e-9
