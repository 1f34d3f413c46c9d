import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from teleportlab import cmatrix as cm
from teleportlab.states import (
    ChannelKind,
    ParameterError,
    g_from_epsilon,
    gram_schmidt,
    input_state,
    make_channel,
    nmes,
    noes_pure,
    nonorth_basis,
    nonorth_mixed,
    rho_new,
    validate_channel,
    werner,
)
from teleportlab.teleport import BELL_VECTORS, BellOutcome

r_open = st.floats(0.0, 0.999)
angle = st.floats(0.0, 2 * math.pi)


def explicit_mixed_matrix(r, theta, g):
    """Entry-by-entry 4x4 matrix of the mixed non-orthogonal state."""
    n1sq = 1.0 / (2.0 * (1.0 + r * r))
    inv_ng = math.sqrt(1.0 - r * r)
    ov = r * cmath.exp(1j * theta)
    d = (1.0 - g) / 4.0
    off = 2 * g * n1sq * ov * inv_ng
    mid = g * n1sq * (1 - r * r)
    return np.array([
        [d + 4 * n1sq * r * r * g, off, off, 0],
        [off.conjugate(), d + mid, mid, 0],
        [off.conjugate(), mid, d + mid, 0],
        [0, 0, 0, d],
    ])


def test_nonorth_basis_overlap_examples():
    assert abs(nonorth_basis(0.0, 1.0).overlap) < 1e-15
    b = nonorth_basis(1.0, 0.0)
    assert np.allclose(b.beta, b.alpha)
    b = nonorth_basis(0.6, math.pi / 3)
    assert abs(b.overlap - 0.6 * cmath.exp(1j * math.pi / 3)) < 1e-12


@settings(max_examples=50, deadline=None)
@given(st.floats(0.0, 1.0), angle)
def test_nonorth_basis_invariants(r, theta):
    b = nonorth_basis(r, theta)
    assert abs(abs(b.overlap) - r) < 1e-12
    assert abs(np.linalg.norm(b.alpha) - 1) < 1e-12
    assert abs(np.linalg.norm(b.beta) - 1) < 1e-12


def test_nonorth_basis_range():
    with pytest.raises(ParameterError):
        nonorth_basis(1.2)
    with pytest.raises(ParameterError):
        nonorth_basis(-0.1)


def test_gram_schmidt_orthogonal_limit():
    b = nonorth_basis(0.0, 0.4)
    zero, one = gram_schmidt(b)
    assert np.allclose(one, b.beta)


@settings(max_examples=50, deadline=None)
@given(r_open, angle)
def test_gram_schmidt_orthonormal(r, theta):
    zero, one = gram_schmidt(nonorth_basis(r, theta))
    assert abs(np.vdot(zero, one)) < 1e-12
    assert abs(np.vdot(one, one) - 1) < 1e-12
    assert abs(np.vdot(zero, zero) - 1) < 1e-12


def test_gram_schmidt_residual_norm():
    b = nonorth_basis(0.8, 0.3)
    residual = b.beta - np.vdot(b.alpha, b.beta) * b.alpha
    assert abs(np.linalg.norm(residual) - 0.6) < 1e-12


def test_gram_schmidt_degenerate():
    with pytest.raises(ValueError, match="degenerate basis"):
        gram_schmidt(nonorth_basis(1.0))


def test_noes_orthogonal_limit():
    psi = noes_pure(0.0, 2.2).pure_vector
    assert np.allclose(psi, (cm.ket(0, 1) + cm.ket(1, 0)) / math.sqrt(2), atol=1e-15)


def test_noes_amplitudes_r_half():
    psi = noes_pure(0.5, 0.0).pure_vector
    # a00 = 2 N1 r, a01 = a10 = N1/N_G with N1 = 1/sqrt(2.5), 1/N_G = sqrt(0.75)
    assert psi[0] == pytest.approx(2 * 0.5 / math.sqrt(2.5), abs=1e-12)
    assert psi[0] == pytest.approx(0.632455532, abs=1e-9)
    assert psi[1] == pytest.approx(math.sqrt(0.75 / 2.5), abs=1e-12)
    assert psi[2] == pytest.approx(0.547722558, abs=1e-9)
    assert psi[3] == 0


@settings(max_examples=50, deadline=None)
@given(r_open, angle)
def test_noes_matches_closed_amplitudes(r, theta):
    n1 = 1 / math.sqrt(2 * (1 + r * r))
    expected = [2 * n1 * r * cmath.exp(1j * theta), n1 * math.sqrt(1 - r * r), n1 * math.sqrt(1 - r * r), 0]
    ch = noes_pure(r, theta)
    assert np.allclose(ch.pure_vector, expected, atol=1e-12)
    assert abs(np.linalg.norm(ch.pure_vector) - 1) < 1e-12


def test_noes_reduced_state_matches_closed_form():
    r, theta = 0.5, 0.9
    red = cm.partial_trace(noes_pure(r, theta).rho, "first")
    expected = np.array([
        [(1 + 3 * r * r) / (2 * (1 + r * r)), r * cmath.exp(1j * theta) * math.sqrt(1 - r * r) / (1 + r * r)],
        [r * cmath.exp(-1j * theta) * math.sqrt(1 - r * r) / (1 + r * r), (1 - r * r) / (2 * (1 + r * r))],
    ])
    assert np.allclose(red, expected, atol=1e-12)
    assert red[0, 0].real == pytest.approx(1.75 / 2.5)


def test_noes_rejects_r_one():
    with pytest.raises(ParameterError, match="separable-degenerate"):
        noes_pure(1.0)


def test_werner_endpoints():
    singlet = (cm.ket(0, 1) - cm.ket(1, 0)) / math.sqrt(2)
    assert np.allclose(werner(0).rho, cm.outer(singlet))
    assert np.allclose(werner(1).rho, np.eye(4) / 4)
    with pytest.raises(ParameterError):
        werner(1.01)


def test_werner_bell_weights():
    rho = werner(0.5).rho
    weights = {o: np.vdot(v, rho @ v).real for o, v in BELL_VECTORS.items()}
    assert weights[BellOutcome.PSI_MINUS] == pytest.approx(0.625)
    for o in (BellOutcome.PSI_PLUS, BellOutcome.PHI_PLUS, BellOutcome.PHI_MINUS):
        assert weights[o] == pytest.approx(0.125)
    # Bell-diagonal: no coherences between Bell states
    B = np.column_stack(list(BELL_VECTORS.values()))
    off = B.conj().T @ rho @ B
    assert np.allclose(off - np.diag(np.diag(off)), 0)


def test_nmes_examples():
    assert np.allclose(nmes(0).pure_vector, (cm.ket(0, 1) + cm.ket(1, 0)) / math.sqrt(2))
    assert np.allclose(nmes(1).pure_vector, cm.ket(1, 0))
    psi = nmes(0.5).pure_vector
    assert psi[1].real == pytest.approx(0.5 / math.sqrt(2), abs=1e-12)
    assert psi[1].real == pytest.approx(0.35355, abs=1e-5)
    assert psi[2].real == pytest.approx(0.93541, abs=1e-5)


def test_g_from_epsilon():
    assert g_from_epsilon(0.0, 1e-12) == pytest.approx(1 / 3)
    assert g_from_epsilon(0.0, 2 / 3) == pytest.approx(1.0)
    assert g_from_epsilon(0.5, 0.3) == pytest.approx(1.25 / 2.75 + 0.3)
    assert g_from_epsilon(0.5, 0.3) == pytest.approx(0.75455, abs=1e-5)


def test_g_from_epsilon_bound_is_r_dependent():
    # at r = 0.5 the largest admissible eps is 1.5 / 2.75
    g_from_epsilon(0.5, 1.5 / 2.75)
    with pytest.raises(ParameterError, match="epsilon too large"):
        g_from_epsilon(0.5, 0.6)
    with pytest.raises(ParameterError, match="epsilon too large"):
        g_from_epsilon(0.0, 0.7)


def test_nonorth_mixed_endpoints():
    assert np.allclose(nonorth_mixed(0.4, 1.0, 1.0).rho, noes_pure(0.4, 1.0).rho, atol=1e-12)
    assert np.allclose(nonorth_mixed(0.4, 1.0, 0.0).rho, np.eye(4) / 4)


def test_nonorth_mixed_entry():
    rho = nonorth_mixed(0.5, 0.0, 0.8).rho
    # (1-g)/4 + g |a00|^2 with |a00|^2 = 4 r^2 / (2 (1 + r^2)) = 0.4
    assert rho[0, 0].real == pytest.approx(0.05 + 0.8 * 0.4, abs=1e-12)
    assert abs(noes_pure(0.5, 0.0).pure_vector[0]) ** 2 == pytest.approx(0.4)


@settings(max_examples=50, deadline=None)
@given(r_open, angle, st.floats(0.0, 1.0))
def test_nonorth_mixed_matches_explicit_matrix(r, theta, g):
    assert np.allclose(nonorth_mixed(r, theta, g).rho, explicit_mixed_matrix(r, theta, g), atol=1e-12)


def test_rho_new_endpoints():
    psi_plus = (cm.ket(0, 1) + cm.ket(1, 0)) / math.sqrt(2)
    assert np.allclose(rho_new(1).rho, (cm.outer(cm.ket(0, 0)) + cm.outer(cm.ket(1, 1))) / 2)
    expected0 = cm.outer(cm.ket(0, 0)) / 3 + 2 * cm.outer(psi_plus) / 3
    assert np.allclose(rho_new(0).rho, expected0)
    assert np.allclose(rho_new(0.5).rho, 0.5 * rho_new(0).rho + 0.5 * rho_new(1).rho)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.0, 1.0))
def test_rho_new_real_and_swap_symmetric(p):
    rho = np.asarray(rho_new(p).rho)
    swap = np.eye(4)[[0, 2, 1, 3]]
    assert np.all(rho.imag == 0)
    assert np.allclose(swap @ rho @ swap, rho)


def test_input_state_examples():
    assert np.allclose(input_state(0.0).vector, [1, 0])
    v = input_state(math.pi, 0.3).vector
    assert abs(abs(v[1]) - 1) < 1e-15 and abs(v[0]) < 1e-15
    inp = input_state(math.pi / 2, 0.0)
    assert np.allclose(inp.vector, np.array([1, 1]) / math.sqrt(2))
    assert inp.ysq == pytest.approx(0.5)


@settings(max_examples=50)
@given(st.floats(0.0, math.pi), angle)
def test_input_state_normalized(tb, phi):
    inp = input_state(tb, phi)
    assert abs(abs(inp.x) ** 2 + abs(inp.y) ** 2 - 1) < 1e-12


channels = st.one_of(
    st.builds(noes_pure, r_open, angle),
    st.builds(werner, st.floats(0.0, 1.0)),
    st.builds(nmes, st.floats(0.0, 1.0)),
    st.builds(nonorth_mixed, r_open, angle, st.floats(0.0, 1.0)),
    st.builds(rho_new, st.floats(0.0, 1.0)),
)


@settings(max_examples=80, deadline=None)
@given(channels)
def test_every_channel_is_a_density_matrix(ch):
    validate_channel(ch, tol=1e-10)
    rho = np.asarray(ch.rho)
    assert cm.hermiticity_error(rho) < 1e-12
    assert abs(np.trace(rho) - 1) < 1e-12
    assert np.linalg.eigvalsh(rho)[0] > -1e-10
    if ch.pure_vector is not None:
        assert np.max(np.abs(cm.outer(ch.pure_vector) - rho)) < 1e-12


def test_channel_is_immutable():
    ch = werner(0.2)
    with pytest.raises(ValueError):
        ch.rho[0, 0] = 1
    with pytest.raises(TypeError):
        ch.params["p"] = 0.5


def test_make_channel():
    assert make_channel("noes", r=0.3).kind is ChannelKind.NOES
    ch = make_channel("nonorth-mixed", r=0.5, eps=0.3)
    assert ch.params["g"] == pytest.approx(g_from_epsilon(0.5, 0.3))
    assert make_channel("rho_new", p=0.1).kind is ChannelKind.GHZW_MIX
    with pytest.raises(ParameterError, match="does not apply"):
        make_channel("werner", r=0.1)
    with pytest.raises(ParameterError):
        make_channel("nonorth-mixed", r=0.1, g=0.5, eps=0.1)
    with pytest.raises(ValueError, match="unknown channel"):
        make_channel("bell")
