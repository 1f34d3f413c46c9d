"""Standard one-qubit teleportation through an arbitrary two-qubit channel.

Qubit 1 holds the input, qubits a and b the channel; Alice measures (1, a)
in the Bell basis and Bob corrects b with a fixed Pauli per outcome.  The
batched kernels (``fidelity_batch``) and the single-input routines share the
same Bell contraction so the averages test the protocol itself.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import cmatrix as cm
from .entanglement import horodecki_nu
from .states import (
    Channel,
    ChannelKind,
    InputQubit,
    ParameterError,
    epsilon_from_g,
    nmes_amplitudes,
)

ZERO_PROB = 1e-15
CLASSICAL_FIDELITY = 2.0 / 3.0


class BellOutcome(enum.Enum):
    PHI_PLUS = 0
    PHI_MINUS = 1
    PSI_PLUS = 2
    PSI_MINUS = 3


_S2 = 1.0 / math.sqrt(2.0)
BELL_VECTORS = {
    BellOutcome.PHI_PLUS: _S2 * (cm.ket(0, 0) + cm.ket(1, 1)),
    BellOutcome.PHI_MINUS: _S2 * (cm.ket(0, 0) - cm.ket(1, 1)),
    BellOutcome.PSI_PLUS: _S2 * (cm.ket(0, 1) + cm.ket(1, 0)),
    BellOutcome.PSI_MINUS: _S2 * (cm.ket(0, 1) - cm.ket(1, 0)),
}
# (outcome, qubit 1, qubit a)
_BELL = np.stack([BELL_VECTORS[o].reshape(2, 2) for o in BellOutcome])

CORRECTION_TABLES = {
    # Psi+ style channels (non-orthogonal, NMES, rho_new)
    "psi_plus": {
        BellOutcome.PHI_PLUS: cm.SX,
        BellOutcome.PHI_MINUS: cm.SY,
        BellOutcome.PSI_PLUS: cm.I2,
        BellOutcome.PSI_MINUS: cm.SZ,
    },
    # singlet-based channels (Werner)
    "psi_minus": {
        BellOutcome.PHI_PLUS: cm.SY,
        BellOutcome.PHI_MINUS: cm.SX,
        BellOutcome.PSI_PLUS: cm.SZ,
        BellOutcome.PSI_MINUS: cm.I2,
    },
}


def _corrections(frame: str) -> np.ndarray:
    table = CORRECTION_TABLES[frame]
    return np.stack([table[o] for o in BellOutcome])


def apply_correction(outcome: BellOutcome, state, frame: str = "psi_plus") -> np.ndarray:
    """Bob's Pauli for ``outcome``; vectors are rotated, densities conjugated."""
    U = CORRECTION_TABLES[frame][outcome]
    state = np.asarray(state, dtype=complex)
    if state.ndim == 1:
        return U @ state
    return U @ state @ U.conj().T


def _bell_weights(phis: np.ndarray) -> np.ndarray:
    """w[n, j, a] = sum_i conj(B_j[i, a]) phi_n[i]."""
    return np.einsum("jia,ni->nja", _BELL.conj(), phis)


def _as_inputs(inputs) -> np.ndarray:
    if isinstance(inputs, InputQubit):
        return inputs.vector[None, :]
    phis = np.asarray(inputs, dtype=complex)
    return phis[None, :] if phis.ndim == 1 else phis


@dataclass(frozen=True)
class BellDecomposition:
    """Conditional states of qubit b for each Bell outcome on (1, a).

    ``vectors`` follow the convention |chi> = (1/sqrt 2) sum_j |B_j>|v_j>,
    so outcome j occurs with probability |v_j|^2 / 2.  ``coefficients``
    holds A, B, P+-, Q+- for the non-orthogonal channel, otherwise None.
    """

    vectors: dict
    coefficients: Optional[dict] = None

    def probabilities(self) -> dict:
        return {o: 0.5 * float(np.vdot(v, v).real) for o, v in self.vectors.items()}


def noes_coefficients(inp: InputQubit, r: float, theta: float) -> dict:
    n1 = 1.0 / math.sqrt(2.0 * (1.0 + r * r))
    inv_ng = math.sqrt(1.0 - r * r)
    ov = r * np.exp(1j * theta)
    x, y = inp.x, inp.y
    return {
        "A": x * n1 * inv_ng,
        "B": y * n1 * inv_ng,
        "P+": n1 * (2 * x * ov + y * inv_ng),
        "P-": n1 * (2 * x * ov - y * inv_ng),
        "Q+": n1 * (x * inv_ng + 2 * y * ov),
        "Q-": n1 * (x * inv_ng - 2 * y * ov),
    }


def bell_project(inp: InputQubit, channel: Channel) -> BellDecomposition:
    if not channel.is_pure:
        raise ValueError("use teleport_mixed for mixed channels")
    w = _bell_weights(inp.vector[None, :])[0]
    psi = channel.pure_vector.reshape(2, 2)
    v = math.sqrt(2.0) * (w @ psi)
    vectors = {o: v[o.value] for o in BellOutcome}
    coeffs = None
    if channel.kind is ChannelKind.NOES:
        coeffs = noes_coefficients(inp, channel.params["r"], channel.params["theta"])
    return BellDecomposition(vectors, coeffs)


@dataclass(frozen=True)
class OutcomeRecord:
    """One Bell outcome; ``state`` is None when the outcome cannot occur."""

    tag: BellOutcome
    probability: float
    state: Optional[np.ndarray]
    fidelity: Optional[float]


@dataclass(frozen=True)
class TeleportResult:
    input: InputQubit
    outcomes: tuple
    fidelity: float

    def recompute_fidelity(self) -> float:
        return sum(o.probability * o.fidelity for o in self.outcomes if o.state is not None)

    @property
    def total_probability(self) -> float:
        return sum(o.probability for o in self.outcomes)


def teleport_pure(inp: InputQubit, channel: Channel) -> TeleportResult:
    decomp = bell_project(inp, channel)
    phi = inp.vector
    records = []
    for tag, v in decomp.vectors.items():
        prob = 0.5 * float(np.vdot(v, v).real)
        if prob <= ZERO_PROB:
            records.append(OutcomeRecord(tag, prob, None, None))
            continue
        xi = apply_correction(tag, v / np.linalg.norm(v), channel.correction_frame)
        records.append(OutcomeRecord(tag, prob, xi, float(abs(np.vdot(phi, xi)) ** 2)))
    fid = sum(rec.probability * rec.fidelity for rec in records if rec.state is not None)
    return TeleportResult(inp, tuple(records), fid)


def teleport_mixed(inp: InputQubit, channel: Channel) -> TeleportResult:
    """Density-matrix protocol: project |phi><phi| x rho onto the Bell basis."""
    cm.check_density(channel.rho)
    phi = inp.vector
    w = _bell_weights(phi[None, :])[0]
    R = np.asarray(channel.rho).reshape(2, 2, 2, 2)
    sigmas = np.einsum("ja,abcd,jc->jbd", w, R, w.conj())
    records = []
    for tag in BellOutcome:
        sigma = sigmas[tag.value]
        prob = float(np.trace(sigma).real)
        if prob <= ZERO_PROB:
            records.append(OutcomeRecord(tag, prob, None, None))
            continue
        out = apply_correction(tag, sigma / prob, channel.correction_frame)
        records.append(OutcomeRecord(tag, prob, out, float(np.vdot(phi, out @ phi).real)))
    fid = sum(rec.probability * rec.fidelity for rec in records if rec.state is not None)
    return TeleportResult(inp, tuple(records), fid)


def teleport(inp: InputQubit, channel: Channel) -> TeleportResult:
    return teleport_pure(inp, channel) if channel.is_pure else teleport_mixed(inp, channel)


def fidelity_batch(inputs, channel: Channel) -> np.ndarray:
    """Protocol fidelity for many input vectors at once (shape (n, 2))."""
    phis = _as_inputs(inputs)
    w = _bell_weights(phis)
    U = _corrections(channel.correction_frame)
    # rotate the input back instead of the output: <phi|U v> = <U^dag phi|v>
    back = np.einsum("jba,nb->nja", U.conj(), phis)
    if channel.is_pure:
        v = w @ channel.pure_vector.reshape(2, 2)
        amp = np.einsum("njb,njb->nj", back.conj(), v)
        return np.sum(np.abs(amp) ** 2, axis=1)
    R = np.asarray(channel.rho).reshape(2, 2, 2, 2)
    sig = np.einsum("nja,abcd,njc->njbd", w, R, w.conj())
    return np.einsum("njb,njbd,njd->n", back.conj(), sig, back).real


# closed forms


def fidelity_noes_closed(r: float, ysq: float) -> float:
    return (1.0 - r * r * (1.0 - 2.0 * ysq) ** 2) / (1.0 + r * r)


def fidelity_nmes_closed(s: float, ysq: float) -> float:
    w = 1.0 - s
    return 1.0 - 2.0 * ysq * (1.0 - ysq) * (1.0 - w * math.sqrt(2.0 - w * w))


def avg_fidelity_noes(r: float) -> float:
    return (3.0 - r * r) / (3.0 * (1.0 + r * r))


def avg_fidelity_werner(p: float) -> float:
    return (2.0 - p) / 2.0


def avg_fidelity_nmes(s: float) -> float:
    w = 1.0 - s
    return (2.0 + w * math.sqrt(2.0 - w * w)) / 3.0


def avg_fidelity_nonorth_mixed(r: float, eps: float) -> float:
    return 2.0 / 3.0 + (3.0 - r * r) * eps / (6.0 * (1.0 + r * r))


def avg_fidelity_rho_new(p: float) -> float:
    """(7 - 4p)/9 below p = 1/4; exactly 2/3 from there on."""
    return (7.0 - 4.0 * p) / 9.0 if p < 0.25 else CLASSICAL_FIDELITY


class ClosedFormFidelity(NamedTuple):
    value: float
    at_classical_bound: bool = False


def avg_fidelity_closed(channel_or_kind, **params) -> ClosedFormFidelity:
    """Closed-form input-averaged fidelity for a channel or a family + params.

    Passing a family name avoids building the channel, so the r = 1 and
    s = 1 endpoints are reachable.  The non-orthogonal mixture accepts
    ``eps`` directly or ``g`` (converted to eps).
    """
    if isinstance(channel_or_kind, Channel):
        kind, params = channel_or_kind.kind, dict(channel_or_kind.params)
    else:
        kind = ChannelKind.parse(channel_or_kind)
    if kind is ChannelKind.NOES:
        return ClosedFormFidelity(avg_fidelity_noes(params.get("r", 0.0)))
    if kind is ChannelKind.WERNER:
        return ClosedFormFidelity(avg_fidelity_werner(params.get("p", 0.0)))
    if kind is ChannelKind.NMES:
        return ClosedFormFidelity(avg_fidelity_nmes(params.get("s", 0.0)))
    if kind is ChannelKind.NONORTH_MIXED:
        r = params.get("r", 0.0)
        eps = params["eps"] if "eps" in params else epsilon_from_g(r, params.get("g", 1.0))
        return ClosedFormFidelity(avg_fidelity_nonorth_mixed(r, eps))
    p = params.get("p", 0.0)
    return ClosedFormFidelity(avg_fidelity_rho_new(p), p >= 0.25)


def avg_fidelity_horodecki(channel: Channel) -> float:
    """Optimal average fidelity (1 + nu/3)/2 implied by the correlation matrix."""
    return 0.5 * (1.0 + horodecki_nu(channel.rho) / 3.0)


# numerical averages over the Bloch sphere


def bloch_inputs(cos_theta, phi) -> np.ndarray:
    """Input vectors for arrays of cos(theta_b) and phi."""
    cos_theta = np.asarray(cos_theta, dtype=float)
    x = np.sqrt(np.clip((1.0 + cos_theta) / 2.0, 0.0, None))
    y = np.exp(1j * np.asarray(phi)) * np.sqrt(np.clip((1.0 - cos_theta) / 2.0, 0.0, None))
    return np.stack([x.astype(complex), y], axis=-1)


def bloch_quadrature(n: int):
    """Nodes (cos theta, phi) and weights of an n x n rule on the sphere.

    Gauss-Legendre in cos(theta), uniform trapezoid in phi; the weights sum
    to one so the rule returns the average directly.
    """
    if int(n) != n or n < 2:
        raise ParameterError("n", f"quadrature needs at least 2 nodes, got {n}")
    n = int(n)
    c, wc = np.polynomial.legendre.leggauss(n)
    phis = 2.0 * np.pi * np.arange(n) / n
    C, P = np.meshgrid(c, phis, indexing="ij")
    W = np.outer(wc / 2.0, np.full(n, 1.0 / n))
    return C.ravel(), P.ravel(), W.ravel()


class MonteCarloEstimate(NamedTuple):
    mean: float
    stderr: float
    n: int


MC_CHUNK = 1 << 16


def avg_fidelity_montecarlo(channel: Channel, n: int, seed: Optional[int] = None) -> MonteCarloEstimate:
    """Haar-random inputs: theta_b = arccos(1 - 2u), phi = 2 pi v.

    Samples are drawn in fixed-size chunks, each from its own child stream of
    ``SeedSequence(seed)``, and reduced in chunk order, so a fixed seed gives
    bit-identical results.
    """
    if int(n) != n or n < 1000:
        raise ParameterError("n", f"Monte Carlo needs at least 1000 samples, got {n}")
    n = int(n)
    n_chunks = -(-n // MC_CHUNK)
    streams = np.random.SeedSequence(seed).spawn(n_chunks)
    sums = np.empty(n_chunks)
    sq_sums = np.empty(n_chunks)
    for k, ss in enumerate(streams):
        size = min(MC_CHUNK, n - k * MC_CHUNK)
        rng = np.random.default_rng(ss)
        u = rng.random(size)
        v = rng.random(size)
        f = fidelity_batch(bloch_inputs(1.0 - 2.0 * u, 2.0 * np.pi * v), channel)
        sums[k] = np.sum(f)
        sq_sums[k] = np.sum(f * f)
    mean = float(np.sum(sums)) / n
    var = max(float(np.sum(sq_sums)) / n - mean * mean, 0.0) * n / (n - 1)
    return MonteCarloEstimate(mean, math.sqrt(var / n), n)


def avg_fidelity_numeric(channel: Channel, method: str = "quadrature", n: int = 64,
                         seed: Optional[int] = None) -> float:
    if method == "quadrature":
        C, P, W = bloch_quadrature(n)
        return float(np.dot(W, fidelity_batch(bloch_inputs(C, P), channel)))
    if method == "montecarlo":
        return avg_fidelity_montecarlo(channel, n, seed).mean
    raise ValueError(f"unknown averaging method {method!r}")
