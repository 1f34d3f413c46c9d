"""Constructors for the bases, channels and input qubits used in the lab."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Optional

import numpy as np

from . import cmatrix as cm

CONSTRUCTION_TOL = 1e-12


class ParameterError(ValueError):
    """A channel or input parameter is out of range.

    ``param`` names the offending parameter so front ends can point at the
    flag that supplied it.
    """

    def __init__(self, param: str, message: str):
        super().__init__(f"{param}: {message}")
        self.param = param


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ParameterError(name, f"must be finite, got {value}")
    return value


def _require_range(name: str, value: float, lo: float, hi: float, hi_open: bool = False) -> float:
    value = _require_finite(name, value)
    if value < lo or value > hi or (hi_open and value >= hi):
        bracket = ")" if hi_open else "]"
        raise ParameterError(name, f"must lie in [{lo:g}, {hi:g}{bracket}, got {value:g}")
    return value


class ChannelKind(enum.Enum):
    NOES = "noes"
    WERNER = "werner"
    NMES = "nmes"
    NONORTH_MIXED = "nonorth-mixed"
    GHZW_MIX = "rho-new"

    @classmethod
    def parse(cls, value) -> "ChannelKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        for kind in cls:
            if key in (kind.value, kind.name.lower().replace("_", "-")):
                return kind
        raise ValueError(f"unknown channel family {value!r}")

    @property
    def is_pure(self) -> bool:
        return self in (ChannelKind.NOES, ChannelKind.NMES)


@dataclass(frozen=True)
class NonOrthBasis:
    """Two unit vectors with overlap <alpha|beta> = r e^{i theta}."""

    r: float
    theta: float
    alpha: np.ndarray = field(repr=False)
    beta: np.ndarray = field(repr=False)

    @property
    def n_beta(self) -> float:
        return math.sqrt(1.0 - self.r**2)

    @property
    def n_g(self) -> float:
        return 1.0 / self.n_beta if self.r < 1.0 else math.inf

    @property
    def n_1(self) -> float:
        return 1.0 / math.sqrt(2.0 * (1.0 + self.r**2))

    @property
    def overlap(self) -> complex:
        return complex(np.vdot(self.alpha, self.beta))


def nonorth_basis(r: float, theta: float = 0.0) -> NonOrthBasis:
    # |alpha> = |0> so that <alpha|beta> equals the intended r e^{i theta}
    r = _require_range("r", r, 0.0, 1.0)
    theta = _require_finite("theta", theta)
    alpha = np.array([1.0, 0.0], dtype=complex)
    beta = np.array([r * np.exp(1j * theta), math.sqrt(1.0 - r * r)], dtype=complex)
    return NonOrthBasis(r, theta, alpha, beta)


def gram_schmidt(basis: NonOrthBasis) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal pair (|0>, |1>) spanning the same plane as the basis."""
    if basis.r >= 1.0 - CONSTRUCTION_TOL:
        raise ParameterError("r", "degenerate basis (r = 1 leaves no orthogonal complement)")
    zero = basis.alpha.copy()
    residual = basis.beta - np.vdot(basis.alpha, basis.beta) * basis.alpha
    one = basis.n_g * residual
    return zero, one


@dataclass(frozen=True)
class InputQubit:
    """Pure qubit cos(theta_b/2)|0> + e^{i phi} sin(theta_b/2)|1>."""

    theta_b: float
    phi: float = 0.0

    @property
    def x(self) -> complex:
        return complex(math.cos(self.theta_b / 2.0))

    @property
    def y(self) -> complex:
        return complex(np.exp(1j * self.phi) * math.sin(self.theta_b / 2.0))

    @property
    def ysq(self) -> float:
        return math.sin(self.theta_b / 2.0) ** 2

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=complex)


def input_state(theta_b: float, phi: float = 0.0) -> InputQubit:
    return InputQubit(_require_finite("theta_b", theta_b), _require_finite("phi", phi))


def input_from_ysq(ysq: float, phi: float = 0.0) -> InputQubit:
    """Input qubit with |y|^2 = ysq."""
    ysq = _require_range("ysq", ysq, 0.0, 1.0)
    return input_state(2.0 * math.asin(math.sqrt(ysq)), phi)


@dataclass(frozen=True, eq=False)
class Channel:
    """A two-qubit teleportation resource.

    ``correction_frame`` names the Bell state the channel is built around
    ("psi_plus" or "psi_minus"); it selects Bob's correction table.
    """

    kind: ChannelKind
    params: Mapping[str, float]
    rho: np.ndarray = field(repr=False)
    pure_vector: Optional[np.ndarray] = field(default=None, repr=False)
    correction_frame: str = "psi_plus"

    def __post_init__(self):
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))
        self.rho.setflags(write=False)
        if self.pure_vector is not None:
            self.pure_vector.setflags(write=False)

    @property
    def is_pure(self) -> bool:
        return self.pure_vector is not None


def _pure_channel(kind, params, psi, frame="psi_plus") -> Channel:
    psi = np.array(psi, dtype=complex)
    return Channel(kind, params, cm.outer(psi), psi, frame)


def noes_pure(r: float, theta: float = 0.0) -> Channel:
    """Symmetric non-orthogonal entangled state N_1(|alpha beta> + |beta alpha>).

    Built in the raw basis and then re-expressed in the Gram-Schmidt basis.
    """
    r = _require_range("r", r, 0.0, 1.0)
    if r >= 1.0:
        raise ParameterError("r", "channel separable-degenerate at r = 1")
    basis = nonorth_basis(r, theta)
    raw = basis.n_1 * (cm.kron(basis.alpha, basis.beta) + cm.kron(basis.beta, basis.alpha))
    zero, one = gram_schmidt(basis)
    G = np.column_stack([zero, one])
    psi = cm.kron(G.conj().T, G.conj().T) @ raw
    return _pure_channel(ChannelKind.NOES, {"r": r, "theta": basis.theta}, psi)


SINGLET = (cm.ket(0, 1) - cm.ket(1, 0)) / math.sqrt(2.0)


def werner(p: float) -> Channel:
    """(1 - p)|psi-><psi-| + (p/4) I; p = 0 is the pure singlet."""
    p = _require_range("p", p, 0.0, 1.0)
    rho = (1.0 - p) * cm.outer(SINGLET) + 0.25 * p * np.eye(4, dtype=complex)
    return Channel(ChannelKind.WERNER, {"p": p}, rho, None, "psi_minus")


def nmes_amplitudes(s: float) -> tuple[float, float]:
    s = _require_range("s", s, 0.0, 1.0)
    u = (1.0 - s) / math.sqrt(2.0)
    return u, math.sqrt(1.0 - u * u)


def nmes(s: float) -> Channel:
    """u|01> + v|10> with u = (1 - s)/sqrt(2)."""
    u, v = nmes_amplitudes(s)
    psi = u * cm.ket(0, 1) + v * cm.ket(1, 0)
    return _pure_channel(ChannelKind.NMES, {"s": float(s)}, psi)


def separability_threshold(r: float) -> float:
    """Mixing weight g below which the non-orthogonal mixture is separable."""
    return (1.0 + r * r) / (3.0 - r * r)


def epsilon_bound(r: float) -> float:
    return (2.0 - 2.0 * r * r) / (3.0 - r * r)


def g_from_epsilon(r: float, eps: float) -> float:
    r = _require_range("r", r, 0.0, 1.0)
    eps = _require_finite("eps", eps)
    if eps < 0.0:
        raise ParameterError("eps", f"must be non-negative, got {eps:g}")
    if eps > epsilon_bound(r) + CONSTRUCTION_TOL:
        raise ParameterError(
            "eps", f"epsilon too large for this r (r={r:g} allows at most {epsilon_bound(r):.6g})"
        )
    return min(separability_threshold(r) + eps, 1.0)


def epsilon_from_g(r: float, g: float) -> float:
    return g - separability_threshold(r)


def nonorth_mixed(r: float, theta: float = 0.0, g: float = 1.0) -> Channel:
    """g |psi><psi| + (1 - g) I/4 with |psi> the non-orthogonal pure state."""
    g = _require_range("g", g, 0.0, 1.0)
    psi = noes_pure(r, theta).pure_vector
    rho = g * cm.outer(psi) + 0.25 * (1.0 - g) * np.eye(4, dtype=complex)
    return Channel(ChannelKind.NONORTH_MIXED, {"r": float(r), "theta": float(theta), "g": g}, rho)


GHZ = (cm.ket(0, 0, 0) + cm.ket(1, 1, 1)) / math.sqrt(2.0)
W_STATE = (cm.ket(0, 0, 1) + cm.ket(0, 1, 0) + cm.ket(1, 0, 0)) / math.sqrt(3.0)


def rho_new(p: float) -> Channel:
    """p Tr_3|GHZ><GHZ| + (1 - p) Tr_3|W><W|."""
    p = _require_range("p", p, 0.0, 1.0)
    rho_g = cm.reduce_qubits(cm.outer(GHZ), keep=(0, 1))
    rho_w = cm.reduce_qubits(cm.outer(W_STATE), keep=(0, 1))
    return Channel(ChannelKind.GHZW_MIX, {"p": p}, p * rho_g + (1.0 - p) * rho_w)


CHANNEL_PARAMS = {
    ChannelKind.NOES: ("r", "theta"),
    ChannelKind.WERNER: ("p",),
    ChannelKind.NMES: ("s",),
    ChannelKind.NONORTH_MIXED: ("r", "theta", "g", "eps"),
    ChannelKind.GHZW_MIX: ("p",),
}


def make_channel(kind, **params) -> Channel:
    """Build a channel from its family name and keyword parameters.

    The non-orthogonal mixture takes either ``g`` or ``eps`` (not both).
    """
    kind = ChannelKind.parse(kind)
    allowed = CHANNEL_PARAMS[kind]
    for name in params:
        if name not in allowed:
            raise ParameterError(name, f"does not apply to channel family '{kind.value}'")
    if kind is ChannelKind.NOES:
        return noes_pure(params.get("r", 0.0), params.get("theta", 0.0))
    if kind is ChannelKind.WERNER:
        return werner(params.get("p", 0.0))
    if kind is ChannelKind.NMES:
        return nmes(params.get("s", 0.0))
    if kind is ChannelKind.GHZW_MIX:
        return rho_new(params.get("p", 0.0))
    r = params.get("r", 0.0)
    if "g" in params and "eps" in params:
        raise ParameterError("eps", "give either g or eps, not both")
    g = g_from_epsilon(r, params["eps"]) if "eps" in params else params.get("g", 1.0)
    return nonorth_mixed(r, params.get("theta", 0.0), g)


def validate_channel(channel: Channel, tol: float = 1e-10) -> None:
    """Density-matrix checks plus consistency of the stored pure vector."""
    cm.check_density(channel.rho, tol)
    if channel.pure_vector is not None:
        if abs(np.linalg.norm(channel.pure_vector) - 1.0) > tol:
            raise ValueError("pure vector is not normalized")
        if np.max(np.abs(cm.outer(channel.pure_vector) - channel.rho)) > tol:
            raise ValueError("rho does not match the pure vector")
