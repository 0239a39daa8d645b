import math

import numpy as np
import pytest

from fixtime.dynamics import (Base, LyapunovError, SpecError, base_settling, converse_lyapunov,
                              field, lyapunov_solve, make_system, predict_settling)
from fixtime.gain_aut import make_aut_gain, psi_vector_field
from fixtime.gain_nonaut import make_nonaut_gain

from conftest import POLY_BETA, exp_sqrt_system, poly_beta_system, sinusoid_system, tbg_system


def _kronecker_lyapunov(A):
    # A'P + PA = I as a linear system in vec(P)
    n = A.shape[0]
    K = np.kron(np.eye(n), A.T) + np.kron(A.T, np.eye(n))
    return np.linalg.solve(K, np.eye(n).reshape(-1, order="F")).reshape(n, n, order="F")


def random_hurwitz(rng, n=3):
    while True:
        A = rng.normal(size=(n, n))
        A += (0.5 - np.linalg.eigvals(A).real.min()) * np.eye(n)
        if np.linalg.eigvals(A).real.min() > 0.1:
            return A


def test_lyapunov_half_identity():
    np.testing.assert_allclose(lyapunov_solve(0.5 * np.eye(4)), np.eye(4), atol=1e-15)


@pytest.mark.parametrize("alpha", [0.3, 1.0, 4.0])
def test_lyapunov_shifted_skew(alpha):
    S = np.array([[0.0, 1.0], [-1.0, 0.0]])
    P = lyapunov_solve(alpha * np.eye(2) + S)
    np.testing.assert_allclose(P, np.eye(2) / (2 * alpha), atol=1e-14)


@pytest.mark.parametrize("seed", range(5))
def test_lyapunov_random_against_kronecker(seed):
    A = random_hurwitz(np.random.default_rng(seed))
    P = lyapunov_solve(A)
    np.testing.assert_allclose(P, _kronecker_lyapunov(A), rtol=1e-10, atol=1e-12)
    assert np.max(np.abs(A.T @ P + P @ A - np.eye(3))) <= 1e-10
    np.testing.assert_array_equal(P, P.T)
    assert np.linalg.eigvalsh(P).min() > 0


@pytest.mark.parametrize("A", [np.diag([1.0, -0.1]), np.zeros((2, 2)),
                               np.array([[0.0, 1.0], [-1.0, 0.0]])])
def test_lyapunov_rejects_non_hurwitz(A):
    with pytest.raises(LyapunovError):
        lyapunov_solve(A)


def test_lyapunov_rejects_non_square():
    with pytest.raises(LyapunovError):
        lyapunov_solve(np.ones((2, 3)))


def test_spec_validation():
    g = make_aut_gain("ExpSqrt", {}, "id")
    with pytest.raises(SpecError):
        make_system(g, dim=0)
    with pytest.raises(SpecError):
        make_system(g, T_c=0.0)
    with pytest.raises(SpecError):
        make_system(g, t0=-1.0)
    with pytest.raises(SpecError):
        make_system(g, base="IdentityPlusRoot", root_exp=1.0)
    with pytest.raises(SpecError):
        make_system(g, dim=2, base="LinearMatrix")
    with pytest.raises(SpecError):
        make_system(g, dim=2, base="LinearMatrix", A=np.eye(3))
    with pytest.raises(SpecError):
        make_system(make_nonaut_gain("Secant", {}, "id", T_c=2.0), T_c=1.0)
    with pytest.raises(ValueError):
        make_system(g, base="Cubic")


def test_spec_is_immutable():
    spec = make_system(make_aut_gain("ExpSqrt", {}, "id"), dim=2, base="LinearMatrix",
                       A=[[1.0, 1.0], [-1.0, 1.0]])
    with pytest.raises(Exception):
        spec.T_c = 2.0
    with pytest.raises(ValueError):
        spec.A[0, 0] = 5.0


def test_field_zero_at_origin(aut_systems, nonaut_systems):
    for spec in list(aut_systems.values()) + list(nonaut_systems.values()):
        np.testing.assert_array_equal(field(spec, np.zeros(1), 0.2), np.zeros(1))


def test_field_matches_gain_field():
    spec = poly_beta_system(dim=2, T_c=2.0)
    x = np.array([0.7, -1.1])
    np.testing.assert_allclose(field(spec, x, 0.0), psi_vector_field(spec.gain, x, 2.0),
                               rtol=1e-13)


def test_field_nonautonomous_identity():
    spec = tbg_system(dim=2)
    x = np.array([1.0, 2.0])
    np.testing.assert_allclose(field(spec, x, 0.5), -x / (1 - 0.5), rtol=1e-13)
    np.testing.assert_allclose(field(spec, x, 1.5), -x, rtol=1e-13)
    with pytest.raises(ValueError):
        field(tbg_system(t0=1.0), x[:1], 0.5)


def test_linear_base_pieces():
    A = np.array([[1.0, 1.0], [-1.0, 1.0]])
    spec = poly_beta_system(dim=2, base="LinearMatrix", A=A)
    assert spec.lam_max == pytest.approx(0.5)
    x = np.array([3.0, 4.0])
    assert spec.lyapunov(x) == pytest.approx(5.0 * math.sqrt(0.5))
    assert spec.H(2.0) == pytest.approx(2.0)
    np.testing.assert_allclose(spec.g(x), A @ x)
    assert spec.lyapunov(np.array([1e-300, 0.0])) > 0


def test_identity_plus_root_pieces():
    spec = tbg_system(base="IdentityPlusRoot")
    assert base_settling(spec, [100.0]) == pytest.approx(2 * math.log(11.0), rel=1e-15)
    assert spec.H(4.0) == pytest.approx(6.0)
    assert base_settling(tbg_system(), [3.0]) == math.inf
    assert base_settling(tbg_system(), [0.0]) == 0.0


def test_predictions():
    assert predict_settling(tbg_system(base="IdentityPlusRoot"), [100.0]) == pytest.approx(
        1 - 1 / 121, abs=1e-12)
    assert predict_settling(tbg_system(), [100.0]) == 1.0
    assert predict_settling(poly_beta_system(), [1.0]) == pytest.approx(0.710587259579996856,
                                                                      abs=1e-10)


@pytest.mark.parametrize("make", [poly_beta_system, exp_sqrt_system, sinusoid_system])
@pytest.mark.parametrize("x", [0.1, 1.0, 10.0])
def test_converse_lyapunov_recovers_norm(make, x):
    spec = make()
    assert converse_lyapunov(spec, [x]) == pytest.approx(x, abs=1e-6)


def test_converse_lyapunov_edges():
    spec = poly_beta_system(dim=2)
    assert converse_lyapunov(spec, [0.0, 0.0]) == 0.0
    assert converse_lyapunov(spec, [0.3, 0.4], settling_time=1.0) == math.inf
    with pytest.raises(SpecError):
        converse_lyapunov(tbg_system(), [1.0])


def test_serial_form():
    spec = poly_beta_system(dim=2, base="LinearMatrix", A=[[2.0, 0.0], [1.0, 3.0]])
    d = spec.to_dict()
    assert d["base"] == {"kind": "LinearMatrix", "A": [[2.0, 0.0], [1.0, 3.0]]}
    assert d["gain"]["params"] == POLY_BETA
    assert tbg_system(base="IdentityPlusRoot").to_dict()["base"] == {"kind": "IdentityPlusRoot",
                                                                    "a": 0.5}
    assert spec.base is Base.LINEAR_MATRIX
