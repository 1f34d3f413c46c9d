"""Small dense complex linear algebra for one-, two- and three-qubit objects.

Matrices and state vectors are plain ``numpy`` complex arrays.  Qubit
ordering: the leftmost tensor factor is the most significant bit of the row
index, so ``kron(a, b)`` puts ``a`` on qubit 0.

Hermitian spectra are computed with a cyclic complex Jacobi sweep rather than
LAPACK; the tests cross-check it against ``numpy.linalg.eigvalsh``.
"""

from __future__ import annotations

import math
from typing import Iterable, Union

import numpy as np

MAX_DIM = 8
HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10
JACOBI_OFFDIAG_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SX, SY, SZ)

Subsystem = Union[int, str]


def _check_finite(a: np.ndarray) -> None:
    if not np.all(np.isfinite(a)):
        raise ValueError("non-finite entries")


def as_matrix(a, dims: Iterable[int] | None = None) -> np.ndarray:
    """Coerce to a square complex matrix, checking shape and finiteness."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if dims is not None and m.shape[0] not in tuple(dims):
        raise ValueError(f"unsupported dimension {m.shape[0]}")
    _check_finite(m)
    return m


def as_vector(v, dims: Iterable[int] | None = None) -> np.ndarray:
    out = np.asarray(v, dtype=complex)
    if out.ndim != 1:
        raise ValueError(f"expected a vector, got shape {out.shape}")
    if dims is not None and out.shape[0] not in tuple(dims):
        raise ValueError(f"unsupported dimension {out.shape[0]}")
    _check_finite(out)
    return out


def ket(*bits: int) -> np.ndarray:
    """Computational basis vector, e.g. ``ket(0, 1)`` is |01>."""
    out = np.zeros(2 ** len(bits), dtype=complex)
    out[int("".join(str(b) for b in bits), 2)] = 1.0
    return out


def normalize(v) -> np.ndarray:
    v = as_vector(v)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return v / norm


def outer(v, w=None) -> np.ndarray:
    """|v><w| (``w`` defaults to ``v``)."""
    v = as_vector(v)
    w = v if w is None else as_vector(w)
    return np.outer(v, w.conj())


def kron(a, b) -> np.ndarray:
    """Kronecker product of two vectors or two square matrices.

    The result may not exceed dimension 8 (three qubits).
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != b.ndim or a.ndim not in (1, 2):
        raise ValueError("kron needs two vectors or two matrices")
    if a.ndim == 2:
        a, b = as_matrix(a), as_matrix(b)
    else:
        a, b = as_vector(a), as_vector(b)
    if a.shape[0] * b.shape[0] > MAX_DIM:
        raise ValueError("unsupported dimension")
    return np.kron(a, b)


def dagger(a) -> np.ndarray:
    return np.asarray(a, dtype=complex).conj().T


def _subsystem_index(which: Subsystem) -> int:
    if which in (0, "first"):
        return 0
    if which in (1, "second"):
        return 1
    raise ValueError(f"subsystem must be 'first' or 'second', got {which!r}")


def _n_qubits(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim < 2 or 2 ** n != dim or dim > MAX_DIM:
        raise ValueError("unsupported dimension")
    return n


def reduce_qubits(rho, keep: Iterable[int]) -> np.ndarray:
    """Trace out every qubit not listed in ``keep`` (kept qubits stay in order)."""
    rho = as_matrix(rho)
    n = _n_qubits(rho.shape[0])
    keep = sorted(set(keep))
    if not keep or keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"invalid qubit selection {keep} for {n} qubits")
    t = rho.reshape((2,) * (2 * n))
    # trace from the highest index down so earlier axis numbers stay valid
    for q in reversed(range(n)):
        if q not in keep:
            cur = t.ndim // 2
            t = np.trace(t, axis1=q, axis2=q + cur)
    d = 2 ** len(keep)
    return t.reshape(d, d)


def partial_trace(rho, keep: Subsystem = "first") -> np.ndarray:
    """Reduced state of one qubit of a two-qubit density matrix."""
    rho = as_matrix(rho, dims=(4,))
    return reduce_qubits(rho, [_subsystem_index(keep)])


def partial_transpose(rho, on: Subsystem = "second") -> np.ndarray:
    """Transpose the chosen tensor factor of a 4x4 matrix."""
    rho = as_matrix(rho, dims=(4,))
    t = rho.reshape(2, 2, 2, 2)  # (i, j, k, l) = <ij|rho|kl>
    if _subsystem_index(on) == 0:
        t = t.transpose(2, 1, 0, 3)
    else:
        t = t.transpose(0, 3, 2, 1)
    return t.reshape(4, 4)


def hermiticity_error(a) -> float:
    a = np.asarray(a, dtype=complex)
    return float(np.max(np.abs(a - a.conj().T)))


def _check_hermitian(a) -> np.ndarray:
    a = as_matrix(a)
    if a.shape[0] > MAX_DIM:
        raise ValueError("unsupported dimension")
    if hermiticity_error(a) > HERMITIAN_TOL:
        raise ValueError("hermiticity violated")
    return a


def hermitian_eigh(a):
    """Eigenvalues (ascending) and eigenvectors (columns) of a Hermitian matrix.

    Cyclic Jacobi: each pair (p, q) is first rotated by a phase so that the
    pivot is real, then annihilated by a real Givens rotation.  Sweeps stop
    once every off-diagonal magnitude is below 1e-14, or after 100 sweeps.
    Works on Python scalars; at n <= 8 that beats numpy's per-call overhead.
    """
    a = _check_hermitian(a)
    n = a.shape[0]
    A = (0.5 * (a + a.conj().T)).tolist()
    V = np.eye(n, dtype=complex).tolist()
    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]
    for _ in range(JACOBI_MAX_SWEEPS):
        if max((abs(A[p][q]) for p, q in pairs), default=0.0) < JACOBI_OFFDIAG_TOL:
            break
        for p, q in pairs:
            apq = A[p][q]
            mag = abs(apq)
            if mag == 0.0:
                continue
            ph = (apq / mag).conjugate()
            tau = (A[q][q].real - A[p][p].real) / (2.0 * mag)
            t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
            c = 1.0 / math.sqrt(1.0 + t * t)
            s = t * c
            # J = [[c, s], [-s ph, c ph]] on (p, q); A <- J^dag A J
            sph, cph = s * ph, c * ph
            for row in A:
                ap, aq = row[p], row[q]
                row[p] = c * ap - sph * aq
                row[q] = s * ap + cph * aq
            for row in V:
                vp, vq = row[p], row[q]
                row[p] = c * vp - sph * vq
                row[q] = s * vp + cph * vq
            rp, rq = A[p], A[q]
            sphc, cphc = sph.conjugate(), cph.conjugate()
            for k in range(n):
                ap, aq = rp[k], rq[k]
                rp[k] = c * ap - sphc * aq
                rq[k] = s * ap + cphc * aq
            rp[q] = rq[p] = 0.0
            rp[p] = complex(rp[p].real)
            rq[q] = complex(rq[q].real)
    w = np.array([A[i][i].real for i in range(n)])
    order = np.argsort(w, kind="stable")
    return w[order], np.array(V, dtype=complex)[:, order]


def hermitian_eigenvalues(a) -> np.ndarray:
    return hermitian_eigh(a)[0]


def matrix_sqrt_psd(a) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian matrix."""
    w, V = hermitian_eigh(a)
    if w[0] < -PSD_TOL:
        raise ValueError("not PSD")
    root = (V * np.sqrt(np.clip(w, 0.0, None))) @ V.conj().T
    return 0.5 * (root + root.conj().T)


def check_density(rho, tol: float = 1e-10) -> np.ndarray:
    """Raise ``ValueError`` unless ``rho`` is Hermitian, unit trace and PSD."""
    rho = as_matrix(rho)
    if hermiticity_error(rho) > tol:
        raise ValueError("density matrix is not Hermitian")
    tr = np.trace(rho)
    if abs(tr - 1.0) > tol:
        raise ValueError(f"density matrix trace is {tr.real:.3g}, not 1")
    if hermitian_eigenvalues(rho)[0] < -tol:
        raise ValueError("density matrix is not positive semidefinite")
    return rho


def is_density(rho, tol: float = 1e-10) -> bool:
    try:
        check_density(rho, tol)
    except ValueError:
        return False
    return True
