import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vcslab import linalg
from vcslab.disc import make_disc_tuple
from vcslab.errors import NumericalError, ValidationError
from vcslab.zmatrix import build_Z


def z2(r=0.5):
    return build_Z(make_disc_tuple(2, [(r, 0.0)]))


def test_mat_mul_identity_and_involution():
    a = np.array([[1, 2j], [3, 4]])
    assert linalg.max_abs_diff(linalg.mat_mul(np.eye(2), a), a) == 0.0
    x = np.array([[0, 1], [1, 0]])
    assert linalg.max_abs_diff(linalg.mat_mul(x, x), np.eye(2)) == 0.0


def test_mat_mul_z_square_by_hand():
    # [[1, .5], [.5, 1]]^2 = [[1 + .25, .5 + .5], [.5 + .5, .25 + 1]]
    assert linalg.max_abs_diff(linalg.mat_mul(z2(), z2()), [[1.25, 1.0], [1.0, 1.25]]) == 0.0


def test_mat_mul_dimension_mismatch():
    with pytest.raises(ValidationError):
        linalg.mat_mul(np.ones((2, 3)), np.ones((2, 3)))


def test_dagger():
    s = np.array([[1.0, 2.0], [2.0, 5.0]])
    assert linalg.max_abs_diff(linalg.dagger(s), s) == 0.0
    assert linalg.max_abs_diff(linalg.dagger([[0, 1j], [0, 0]]), [[0, 0], [-1j, 0]]) == 0.0


def test_hermitian_eig_examples():
    e = linalg.hermitian_eig(np.eye(3))
    assert np.array_equal(e.eigenvalues, [1.0, 1.0, 1.0])
    e = linalg.hermitian_eig(z2())
    assert np.max(np.abs(e.eigenvalues - [0.5, 1.5])) <= 1e-14
    t = make_disc_tuple(3, [(0.3, 0.0), (0.4, np.pi / 2)])
    e = linalg.hermitian_eig(build_Z(t))
    assert np.max(np.abs(e.eigenvalues - [0.5, 1.0, 1.5])) <= 1e-14


def test_hermitian_eig_rejects_non_hermitian():
    with pytest.raises(ValidationError):
        linalg.hermitian_eig([[1, 1], [0, 1]])
    with pytest.raises(ValidationError):
        linalg.hermitian_eig(np.ones((2, 3)))


def test_hermitian_eig_reports_sweeps_on_failure():
    a = np.array([[1.0, 0.3], [0.3, 2.0]])
    with pytest.raises(NumericalError) as exc:
        linalg.hermitian_eig(a, max_sweeps=0)
    assert exc.value.iterations == 0


def _random_hermitian(rng, n, scale):
    a = rng.uniform(-1, 1, (n, n)) + 1j * rng.uniform(-1, 1, (n, n))
    a = (a + a.conj().T) / 2
    return a * (scale / max(np.max(np.abs(a)), 1e-300))


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 16), seed=st.integers(0, 2 ** 32 - 1), scale=st.floats(1e-3, 8.0))
def test_eig_invariants_property(n, seed, scale):
    a = _random_hermitian(np.random.default_rng(seed), n, scale)
    e = linalg.hermitian_eig(a)
    u = e.vectors
    assert linalg.max_abs_diff(u.conj().T @ u, np.eye(n)) <= 1e-12
    assert linalg.max_abs_diff(a, e.reconstruct()) <= 1e-11
    assert np.all(np.diff(e.eigenvalues) >= 0)


def test_eig_size_64_against_lapack(rng):
    a = _random_hermitian(rng, 64, 8.0)
    e = linalg.hermitian_eig(a)
    assert linalg.max_abs_diff(a, e.reconstruct()) <= 1e-11
    assert np.max(np.abs(e.eigenvalues - np.linalg.eigvalsh(a))) <= 1e-11


def test_power_naive_examples():
    a = np.array([[1, 2], [3, 4j]])
    assert linalg.max_abs_diff(linalg.power_naive(a, 0), np.eye(2)) == 0.0
    assert linalg.max_abs_diff(linalg.power_naive(np.diag([2, 3]), 4), np.diag([16, 81])) == 0.0
    assert linalg.max_abs_diff(linalg.power_naive(z2(), 2), [[1.25, 1.0], [1.0, 1.25]]) == 0.0


@settings(max_examples=30, deadline=None)
@given(m=st.integers(0, 10), k=st.integers(0, 10), seed=st.integers(0, 10 ** 6))
def test_power_additivity(m, k, seed):
    a = _random_hermitian(np.random.default_rng(seed), 4, 1.0)
    lhs = linalg.power_naive(a, m + k)
    rhs = linalg.mat_mul(linalg.power_naive(a, m), linalg.power_naive(a, k))
    assert linalg.max_abs_diff(lhs, rhs) <= 1e-11 * max(1.0, linalg.max_abs(lhs))


def test_max_abs_diff_examples():
    a = np.array([[1, 2], [3, 4]])
    assert linalg.max_abs_diff(a, a) == 0.0
    assert linalg.max_abs_diff(np.eye(2), np.zeros((2, 2))) == 1.0
    with pytest.raises(ValidationError):
        linalg.max_abs_diff(np.eye(2), np.eye(3))


def test_truncated_inverse():
    g = np.diag([4.0, 2.0, 1.0]).astype(complex)
    assert linalg.max_abs_diff(linalg.truncated_inverse(g), np.diag([0.25, 0.5, 1.0])) <= 1e-15
    with pytest.raises(NumericalError):
        linalg.truncated_inverse(np.diag([1.0, 1e-14]))
    pinv = linalg.truncated_inverse(np.diag([1.0, 1e-14]), strict=False)
    assert linalg.max_abs_diff(pinv, np.diag([1.0, 0.0])) == 0.0
