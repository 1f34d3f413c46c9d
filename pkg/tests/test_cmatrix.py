import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from teleportlab import cmatrix as cm

PHI_PLUS = (cm.ket(0, 0) + cm.ket(1, 1)) / math.sqrt(2)
SINGLET = (cm.ket(0, 1) - cm.ket(1, 0)) / math.sqrt(2)

finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)


def complex_matrices(n):
    return hnp.arrays(np.float64, (2, n, n), elements=finite).map(lambda a: a[0] + 1j * a[1])


def hermitian(n):
    return complex_matrices(n).map(lambda x: x + x.conj().T)


def density(n):
    return complex_matrices(n).map(lambda x: x @ x.conj().T + 1e-3 * np.eye(n)).map(lambda m: m / np.trace(m))


def charpoly(a):
    """Characteristic polynomial coefficients via Faddeev-LeVerrier."""
    n = a.shape[0]
    M = np.zeros_like(a)
    coeffs = [1.0 + 0j]
    for k in range(1, n + 1):
        M = a @ M + coeffs[-1] * np.eye(n)
        coeffs.append(-np.trace(a @ M) / k)
    return np.array(coeffs)


def test_kron_identity_and_basis():
    assert np.array_equal(cm.kron(cm.I2, cm.I2), np.eye(4))
    assert np.array_equal(cm.kron(cm.ket(0), cm.ket(1)), [0, 1, 0, 0])


def test_kron_xx_fixes_phi_plus():
    # XX|00> = |11>, XX|11> = |00>, so (|00> + |11>)/sqrt2 is invariant
    out = cm.kron(cm.SX, cm.SX) @ PHI_PLUS
    assert np.allclose(out, PHI_PLUS, atol=1e-15)


def test_kron_dimension_cap():
    with pytest.raises(ValueError, match="unsupported dimension"):
        cm.kron(np.eye(4), np.eye(4))
    with pytest.raises(ValueError, match="unsupported dimension"):
        cm.kron(np.ones(4), np.ones(4))


@settings(max_examples=30, deadline=None)
@given(complex_matrices(2), complex_matrices(2), complex_matrices(2), complex_matrices(2))
def test_kron_mixed_product(a, b, c, d):
    lhs = cm.kron(a, b) @ cm.kron(c, d)
    assert np.allclose(lhs, cm.kron(a @ c, b @ d), atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(complex_matrices(2), complex_matrices(2), complex_matrices(2))
def test_kron_associative(a, b, c):
    assert np.allclose(cm.kron(cm.kron(a, b), c), cm.kron(a, cm.kron(b, c)), atol=1e-12)


def test_dagger():
    assert np.array_equal(cm.dagger(cm.I2), cm.I2)
    assert np.array_equal(cm.dagger(cm.SY), cm.SY)
    a = np.arange(16).reshape(4, 4) * (1 + 2j)
    assert np.array_equal(cm.dagger(cm.dagger(a)), a)


def test_partial_trace_examples():
    assert np.allclose(cm.partial_trace(cm.outer(PHI_PLUS), "first"), np.eye(2) / 2)
    rho = cm.outer(cm.ket(0, 1))
    assert np.allclose(cm.partial_trace(rho, "first"), cm.outer(cm.ket(0)))
    assert np.allclose(cm.partial_trace(rho, "second"), cm.outer(cm.ket(1)))


def test_partial_trace_matches_index_sum():
    rho = np.arange(16).reshape(4, 4).astype(complex)
    # <i|rho_A|k> = sum_j <ij|rho|kj>
    expected = np.array([[rho[0, 0] + rho[1, 1], rho[0, 2] + rho[1, 3]],
                         [rho[2, 0] + rho[3, 1], rho[2, 2] + rho[3, 3]]])
    assert np.array_equal(cm.partial_trace(rho, 0), expected)


def test_partial_trace_wrong_dim():
    with pytest.raises(ValueError):
        cm.partial_trace(np.eye(2))
    with pytest.raises(ValueError):
        cm.partial_trace(np.ones((4, 2)))


@settings(max_examples=40, deadline=None)
@given(density(4), st.sampled_from(["first", "second"]))
def test_partial_trace_keeps_trace_and_hermiticity(rho, keep):
    red = cm.partial_trace(rho, keep)
    assert abs(np.trace(red) - np.trace(rho)) < 1e-12
    assert cm.hermiticity_error(red) < 1e-12


def test_reduce_qubits_three_qubit():
    ghz = (cm.ket(0, 0, 0) + cm.ket(1, 1, 1)) / math.sqrt(2)
    red = cm.reduce_qubits(cm.outer(ghz), keep=(0, 1))
    assert np.allclose(red, np.diag([0.5, 0, 0, 0.5]))


def test_partial_transpose_index_pattern():
    rho = np.arange(16).reshape(4, 4)
    second = np.array([[0, 4, 2, 6], [1, 5, 3, 7], [8, 12, 10, 14], [9, 13, 11, 15]])
    first = np.array([[0, 1, 8, 9], [4, 5, 12, 13], [2, 3, 10, 11], [6, 7, 14, 15]])
    assert np.array_equal(cm.partial_transpose(rho, "second").real, second)
    assert np.array_equal(cm.partial_transpose(rho, "first").real, first)


def test_partial_transpose_singlet_spectrum():
    pt = cm.partial_transpose(cm.outer(SINGLET))
    w = cm.hermitian_eigenvalues(pt)
    assert np.allclose(w, [-0.5, 0.5, 0.5, 0.5], atol=1e-12)
    # the computed spectrum must reproduce the characteristic polynomial
    assert np.allclose(np.poly(w), charpoly(pt), atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(hermitian(4))
def test_jacobi_spectrum_matches_charpoly(a):
    assert np.allclose(np.poly(cm.hermitian_eigenvalues(a)), charpoly(a), atol=1e-8, rtol=1e-9)


@settings(max_examples=30, deadline=None)
@given(density(2), density(2))
def test_product_states_are_ppt(a, b):
    assert cm.hermitian_eigenvalues(cm.partial_transpose(cm.kron(a, b)))[0] > -1e-12


@settings(max_examples=30, deadline=None)
@given(hermitian(4), st.sampled_from([0, 1]))
def test_partial_transpose_involution_and_invariants(a, on):
    pt = cm.partial_transpose(a, on)
    assert np.allclose(cm.partial_transpose(pt, on), a)
    assert abs(np.trace(pt) - np.trace(a)) < 1e-12
    assert cm.hermiticity_error(pt) < 1e-12


def test_eigenvalues_simple():
    assert np.allclose(cm.hermitian_eigenvalues(cm.SZ), [-1, 1])
    assert np.allclose(cm.hermitian_eigenvalues(np.eye(4) / 4), [0.25] * 4)


def test_eigenvalues_rejects_non_hermitian():
    with pytest.raises(ValueError, match="hermiticity violated"):
        cm.hermitian_eigenvalues(np.array([[0, 1], [0, 0]]))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 4, 8]).flatmap(hermitian))
def test_jacobi_against_lapack(a):
    w, V = cm.hermitian_eigh(a)
    assert np.all(np.diff(w) >= 0)
    assert np.allclose(w, np.linalg.eigvalsh(a), atol=1e-9)
    assert abs(w.sum() - np.trace(a).real) < 1e-10
    assert np.max(np.abs(V @ np.diag(w) @ V.conj().T - a)) < 1e-9
    assert np.allclose(V.conj().T @ V, np.eye(a.shape[0]), atol=1e-10)


def test_jacobi_degenerate_and_diagonal():
    w, V = cm.hermitian_eigh(np.diag([3.0, 1.0, 1.0, -2.0]))
    assert np.array_equal(w, [-2.0, 1.0, 1.0, 3.0])


@pytest.mark.parametrize(
    "a, root",
    [
        (np.eye(4), np.eye(4)),
        (np.diag([4.0, 1.0, 0.0, 0.0]), np.diag([2.0, 1.0, 0.0, 0.0])),
        (cm.outer(PHI_PLUS), cm.outer(PHI_PLUS)),
    ],
)
def test_matrix_sqrt_examples(a, root):
    assert np.allclose(cm.matrix_sqrt_psd(a), root, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(density(4))
def test_matrix_sqrt_squares_back(rho):
    root = cm.matrix_sqrt_psd(rho)
    assert np.max(np.abs(root @ root - rho)) < 1e-8
    assert cm.hermiticity_error(root) < 1e-12
    assert cm.hermitian_eigenvalues(root)[0] > -1e-10


def test_matrix_sqrt_rejects_negative():
    with pytest.raises(ValueError, match="not PSD"):
        cm.matrix_sqrt_psd(np.diag([1.0, -0.1]))
    # round-off sized negatives are clamped
    assert np.allclose(cm.matrix_sqrt_psd(np.diag([1.0, -1e-12])), np.diag([1.0, 0.0]))


def test_non_finite_rejected():
    with pytest.raises(ValueError, match="non-finite"):
        cm.partial_trace(np.full((4, 4), np.nan))


def test_check_density():
    cm.check_density(np.eye(4) / 4)
    assert not cm.is_density(np.eye(4))
    assert not cm.is_density(np.diag([1.5, -0.5]))
