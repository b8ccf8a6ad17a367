"""Kraus channels acting locally on subsystem A, the built-in two-operator
bit-flip channel on span{|0>,|1>} (often labelled phase damping in this
setting), evolved-state discord bounds, and the Werner-state gap.
"""

import math
from dataclasses import dataclass

import numpy as np

from .qmat import (
    DensityOperator,
    DimensionError,
    ValidationError,
    as_matrix,
    validate_density,
)
from .sud_basis import DiagCorrelationSpec, build_diag_state
from .sqd import (
    CorrelationReport,
    sqd_upper_bound_diag,
    _xlog2x,
)


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Completely positive trace-preserving map given by Kraus operators."""

    d: int
    kraus: tuple

    def __post_init__(self):
        total = sum(as_matrix(e).conj().T @ as_matrix(e) for e in self.kraus)
        defect = float(np.max(np.abs(total - np.eye(self.d))))
        if defect > 1e-12:
            raise ValidationError(
                [f"Kraus completeness violated: max |sum E^dag E - I| = {defect:.3e}"]
            )


def bitflip01_kraus(gamma: float, d: int) -> KrausChannel:
    """Two-Kraus channel E0 = sqrt(gamma) I, E1 = sqrt(1-gamma) (X on
    span{|0>,|1>} plus identity on the complement)."""
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    e0 = math.sqrt(gamma) * np.eye(d, dtype=complex)
    flip = np.eye(d, dtype=complex)
    flip[0, 0] = flip[1, 1] = 0.0
    flip[0, 1] = flip[1, 0] = 1.0
    e1 = math.sqrt(1.0 - gamma) * flip
    return KrausChannel(d=d, kraus=(e0, e1))


# The two-Kraus map above flips the {0,1} block; "phase damping" is the
# other name this channel carries in the Werner-state literature.
phase_damping_kraus = bitflip01_kraus


def apply_channel_local_A(rho: DensityOperator, ch: KrausChannel) -> DensityOperator:
    """sum_i (E_i (x) I) rho (E_i (x) I)^dag."""
    m = as_matrix(rho)
    if m.shape[0] % ch.d != 0:
        raise DimensionError(
            f"state dimension {m.shape[0]} is not a multiple of channel dimension {ch.d}"
        )
    dB = m.shape[0] // ch.d
    eyeB = np.eye(dB)
    out = np.zeros_like(m)
    for e in ch.kraus:
        k = np.kron(as_matrix(e), eyeB)
        out += k @ m @ k.conj().T
    return validate_density(out)


def evolved_diag_coeffs(c, gamma: float):
    """Coefficient map of the built-in channel on the three-coefficient
    diagonal family: (c1, (2 gamma - 1) c2, (2 gamma - 1) c3)."""
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    c1, c2, c3 = (float(v) for v in c)
    g = 2.0 * gamma - 1.0
    return (c1, g * c2, g * c3)


def sqd_bound_after_channel(spec: DiagCorrelationSpec, gamma: float,
                            x: float) -> CorrelationReport:
    """Discord upper bound of the evolved three-coefficient state:
    I(evolved) - (2/d^2) H(c_bar tanh x) with c_bar the largest evolved
    coefficient magnitude."""
    c = spec.pauli_coeffs()
    evolved = DiagCorrelationSpec.diag3(spec.d, *evolved_diag_coeffs(c, gamma))
    rep = sqd_upper_bound_diag(evolved, x)
    rep.method = "analytic-channel"
    return rep


def werner_gap_T(c: float, gamma: float) -> float:
    """Closed-form discord-bound gap of the d = 2 Werner state across the
    built-in channel. Symmetric about gamma = 1/2, zero at gamma = 0 and
    gamma = 1, and nondecreasing on [0, 1/2]. Weak and projective
    measurements give the identical gap."""
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"c must lie in [0, 1], got {c}")
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    terms = np.array([1 - c, 1 + 3 * c, 1 - c + 4 * gamma * c, 1 + 3 * c - 4 * gamma * c])
    vals = _xlog2x(terms)
    return float((vals[0] + vals[1] - vals[2] - vals[3]) / 4.0)


def channel_gap_general(spec: DiagCorrelationSpec, gamma: float, x: float) -> float:
    """Difference between the discord bound before and after the channel;
    may take either sign."""
    before = sqd_upper_bound_diag(spec, x)
    after = sqd_bound_after_channel(spec, gamma, x)
    return before.sqd_upper_bound - after.sqd_upper_bound
