"""Quantum teleportation through non-orthogonal, noisy and non-maximally
entangled two-qubit channels, simulated with explicit density matrices."""

from .entanglement import (
    EntanglementReport,
    concurrence_mixed,
    concurrence_pure,
    horodecki_nu,
    negativity,
    report,
)
from .states import (
    Channel,
    ChannelKind,
    InputQubit,
    ParameterError,
    input_state,
    make_channel,
    nmes,
    noes_pure,
    nonorth_mixed,
    rho_new,
    werner,
)
from .teleport import (
    BellOutcome,
    TeleportResult,
    avg_fidelity_closed,
    avg_fidelity_horodecki,
    avg_fidelity_numeric,
    teleport_mixed,
    teleport_pure,
)

__version__ = "0.1.0"
