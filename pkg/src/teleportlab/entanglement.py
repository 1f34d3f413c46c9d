"""Two-qubit entanglement measures and the Horodecki usefulness criterion.

Each matrix-based measure has a closed-form twin for the channel families
where one is known; the tests pin the two against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import cmatrix as cm
from .states import Channel

CLAMP_TOL = 1e-12
_SYSY = cm.kron(cm.SY, cm.SY)


def _clamp(value: float, hi: float | None = None) -> float:
    value = max(0.0, float(value))
    return min(value, hi) if hi is not None else value


def concurrence_pure(psi) -> float:
    """2 sqrt(det rho_a) for a normalized two-qubit pure state."""
    psi = cm.as_vector(psi, dims=(4,))
    if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
        raise ValueError("state vector is not normalized")
    rho_a = cm.partial_trace(cm.outer(psi), keep="first")
    det = (rho_a[0, 0] * rho_a[1, 1] - rho_a[0, 1] * rho_a[1, 0]).real
    return _clamp(2.0 * math.sqrt(max(det, 0.0)), 1.0)


def concurrence_noes_closed(r: float) -> float:
    return (1.0 - r * r) / (1.0 + r * r)


def concurrence_nmes_closed(s: float) -> float:
    """2uv for u|01> + v|10> written in terms of s."""
    w = 1.0 - s
    return w * math.sqrt(2.0 - w * w)


def concurrence_werner_closed(p: float) -> float:
    return max(0.0, 1.0 - 1.5 * p)


def concurrence_mixed(rho) -> float:
    """Wootters concurrence max(0, l1 - l2 - l3 - l4).

    The l_i are the square roots of the eigenvalues of
    sqrt(rho) rho~ sqrt(rho), rho~ = (sy x sy) rho* (sy x sy), sorted
    in decreasing order.
    """
    rho = cm.check_density(cm.as_matrix(rho, dims=(4,)))
    root = cm.matrix_sqrt_psd(rho)
    flipped = _SYSY @ rho.conj() @ _SYSY
    R = root @ flipped @ root
    R = 0.5 * (R + R.conj().T)
    lam = np.sqrt(np.clip(cm.hermitian_eigenvalues(R), 0.0, None))[::-1]
    return _clamp(lam[0] - lam[1] - lam[2] - lam[3], 1.0)


def negativity(rho) -> float:
    """Twice the magnitude of the most negative partial-transpose eigenvalue."""
    rho = cm.check_density(cm.as_matrix(rho, dims=(4,)))
    lam_min = cm.hermitian_eigenvalues(cm.partial_transpose(rho, "second"))[0]
    return _clamp(-2.0 * lam_min, 1.0)


def negativity_nonorth_closed(r: float, g: float) -> float:
    if g <= (1.0 + r * r) / (3.0 - r * r):
        return 0.0
    return (g * (3.0 - r * r) - (1.0 + r * r)) / (2.0 * (1.0 + r * r))


def correlation_matrix(rho) -> np.ndarray:
    """Real 3x3 matrix t_ij = tr(rho sigma_i x sigma_j)."""
    rho = cm.as_matrix(rho, dims=(4,))
    T = np.empty((3, 3))
    for i, si in enumerate(cm.PAULIS):
        for j, sj in enumerate(cm.PAULIS):
            T[i, j] = np.trace(rho @ np.kron(si, sj)).real
    return T


def horodecki_nu(rho) -> float:
    """Sum of the singular values of the correlation matrix.

    Values above 1 mean the state beats the classical 2/3 average fidelity.
    """
    rho = cm.check_density(cm.as_matrix(rho, dims=(4,)))
    T = correlation_matrix(rho)
    u = cm.hermitian_eigenvalues((T.T @ T).astype(complex))
    return float(np.sum(np.sqrt(np.clip(u, 0.0, None))))


def nu_nonorth_closed(r: float, eps: float) -> float:
    return 1.0 + (3.0 - r * r) * eps / (1.0 + r * r)


@dataclass(frozen=True)
class EntanglementReport:
    concurrence: float
    negativity: float
    nu: float
    useful: bool


def report(channel: Channel) -> EntanglementReport:
    """All metrics from the matrix routes (never the closed forms)."""
    if channel.is_pure:
        conc = concurrence_pure(channel.pure_vector)
    else:
        conc = concurrence_mixed(channel.rho)
    nu = horodecki_nu(channel.rho)
    return EntanglementReport(conc, negativity(channel.rho), nu, nu > 1.0 + CLAMP_TOL)
