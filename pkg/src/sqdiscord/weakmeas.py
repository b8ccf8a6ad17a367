"""Weak-measurement operator families.

A family is d commuting PSD operators {P_i} with sum_i P_i^2 = I. The
special family deforms the pair of projectors on a rotated qubit block,
with the rotation given by a unit quaternion (t, y1, y2, y3) acting on
span{|0>, |1>}; every other projector is left untouched. The strength
parameter x enters through tanh x: x = 0 is no measurement, |x| -> infinity
recovers projective measurement with outcomes 0 and 1 swapped.
"""

import math
from dataclasses import dataclass

import numpy as np

from .qmat import (
    DensityOperator,
    DimensionError,
    ValidationError,
    as_matrix,
    partial_trace,
)

ZERO_PROBABILITY = 1e-14


def entropic_H(v):
    """(1+v)log2(1+v) + (1-v)log2(1-v) with 0 log 0 := 0, in bits.

    Accepts scalars or arrays; |v| must not exceed 1.
    """
    a = np.asarray(v, dtype=float)
    if np.any(np.abs(a) > 1.0 + 1e-15):
        raise ValueError("entropic_H requires |v| <= 1")
    a = np.clip(a, -1.0, 1.0)
    out = np.zeros_like(a)
    for s in (1.0, -1.0):
        w = 1.0 + s * a
        out = out + np.where(w > 0.0, w * np.log2(np.where(w > 0.0, w, 1.0)), 0.0)
    return float(out) if np.isscalar(v) or a.ndim == 0 else out


@dataclass(frozen=True)
class Orientation:
    """Unit quaternion (t, y1, y2, y3) selecting the rotated qubit frame."""

    t: float
    y1: float
    y2: float
    y3: float

    def __post_init__(self):
        n = self.t**2 + self.y1**2 + self.y2**2 + self.y3**2
        if abs(n - 1.0) > 1e-12:
            raise ValueError(f"orientation must be a unit 4-vector, |.|^2 = {n}")

    @classmethod
    def normalized(cls, t, y1, y2, y3):
        n = math.sqrt(t * t + y1 * y1 + y2 * y2 + y3 * y3)
        if n == 0.0:
            raise ValueError("cannot normalize the zero 4-vector")
        return cls(t / n, y1 / n, y2 / n, y3 / n)


@dataclass(frozen=True)
class ZVector:
    """Unit 3-vector: the measurement axis induced by an orientation."""

    z1: float
    z2: float
    z3: float

    def __post_init__(self):
        n = self.z1**2 + self.z2**2 + self.z3**2
        if abs(n - 1.0) > 1e-12:
            raise ValueError(f"z must be a unit 3-vector, |z|^2 = {n}")

    def as_array(self) -> np.ndarray:
        return np.array([self.z1, self.z2, self.z3])


def z_from_orientation(o: Orientation) -> ZVector:
    """Axis on the unit sphere reached by rotating e3 with the orientation."""
    t, y1, y2, y3 = o.t, o.y1, o.y2, o.y3
    z = np.array(
        [
            2.0 * (y1 * y3 - t * y2),
            2.0 * (y2 * y3 + t * y1),
            t * t + y3 * y3 - y1 * y1 - y2 * y2,
        ]
    )
    z /= np.linalg.norm(z)  # unit by construction; guard round-off
    return ZVector(*z)


def orientation_from_z(z) -> Orientation:
    """An orientation whose induced axis equals the given unit 3-vector.

    Inverse of z_from_orientation up to the gauge freedom of rotations
    about the axis itself.
    """
    z = np.asarray(z, dtype=float)
    z = z / np.linalg.norm(z)
    z1, z2, z3 = z
    if z3 >= 1.0 - 1e-15:
        return Orientation(1.0, 0.0, 0.0, 0.0)
    if z3 <= -1.0 + 1e-15:
        return Orientation(0.0, -1.0, 0.0, 0.0)
    # Rotate e3 to z about the axis e3 x z; the induced-axis map uses the
    # conjugate quaternion, hence the sign flip on the vector part.
    axis = np.array([-z2, z1, 0.0])
    axis /= np.linalg.norm(axis)
    half = 0.5 * math.acos(max(-1.0, min(1.0, z3)))
    s = math.sin(half)
    return Orientation.normalized(
        math.cos(half), -s * axis[0], -s * axis[1], -s * axis[2]
    )


def rotation_unitary(o: Orientation, d: int) -> np.ndarray:
    """Unitary acting as t I + i (y1 X + y2 Y + y3 Z) on span{|0>,|1>} and
    as the identity on the complement."""
    if d < 2:
        raise DimensionError(f"dimension must be >= 2, got {d}")
    u2 = np.array(
        [
            [o.t + 1j * o.y3, o.y2 + 1j * o.y1],
            [-o.y2 + 1j * o.y1, o.t - 1j * o.y3],
        ],
        dtype=complex,
    )
    u = np.eye(d, dtype=complex)
    u[:2, :2] = u2
    return u


@dataclass(frozen=True, eq=False)
class WeakMeasurementFamily:
    """d commuting PSD operators with sum of squares equal to I."""

    d: int
    x: float
    operators: tuple


def family_axiom_violations(fam: WeakMeasurementFamily) -> dict:
    """Max deviations from the defining axioms, for tests and verification."""
    ops = [as_matrix(p) for p in fam.operators]
    d = fam.d
    total = sum(p @ p for p in ops)
    completeness = float(np.max(np.abs(total - np.eye(d))))
    comm = 0.0
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            comm = max(comm, float(np.max(np.abs(ops[i] @ ops[j] - ops[j] @ ops[i]))))
    herm = max(float(np.max(np.abs(p - p.conj().T))) for p in ops)
    lam_min = min(float(np.linalg.eigvalsh(0.5 * (p + p.conj().T))[0]) for p in ops)
    return {
        "completeness": completeness,
        "commutators": comm,
        "hermiticity": herm,
        "min_eigenvalue": lam_min,
    }


def _deformation_weights(x: float):
    th = math.tanh(x)
    return math.sqrt((1.0 - th) / 2.0), math.sqrt((1.0 + th) / 2.0)


def build_special_family(o: Orientation, x: float, d: int) -> WeakMeasurementFamily:
    """Weak measurement in the rotated computational frame: the projectors
    onto the rotated |0>, |1> are mixed with weights sqrt((1 -+ tanh x)/2),
    all remaining projectors stay projective."""
    v0 = rotation_unitary(o, d)
    a, b = _deformation_weights(x)
    pi0 = np.outer(v0[:, 0], v0[:, 0].conj())
    pi1 = np.outer(v0[:, 1], v0[:, 1].conj())
    ops = [a * pi0 + b * pi1, b * pi0 + a * pi1]
    for i in range(2, d):
        pi = np.zeros((d, d), dtype=complex)
        pi[i, i] = 1.0
        ops.append(pi)
    return WeakMeasurementFamily(d=d, x=float(x), operators=tuple(ops))


def build_general_family(frame, pair, x: float) -> WeakMeasurementFamily:
    """Weak measurement in an arbitrary orthonormal frame: deform the two
    projectors at the outcome indices in `pair`, keep the others projective.

    frame: unitary matrix whose columns define the measurement basis.
    """
    u = as_matrix(frame)
    d = u.shape[0]
    defect = float(np.max(np.abs(u @ u.conj().T - np.eye(d))))
    if defect > 1e-10:
        raise ValidationError([f"frame is not unitary: max |UU^dag - I| = {defect:.3e}"])
    ia, ib = pair
    if ia == ib or not (0 <= ia < d and 0 <= ib < d):
        raise ValueError(f"pair must be two distinct outcome indices, got {pair}")
    projs = [np.outer(u[:, i], u[:, i].conj()) for i in range(d)]
    a, b = _deformation_weights(x)
    ops = list(projs)
    ops[ia] = a * projs[ia] + b * projs[ib]
    ops[ib] = b * projs[ia] + a * projs[ib]
    return WeakMeasurementFamily(d=d, x=float(x), operators=tuple(ops))


def post_measurement(rho: DensityOperator, fam: WeakMeasurementFamily):
    """Outcome probabilities and conditioned states on subsystem B.

    Returns a list of (p_i, DensityOperator-or-None); outcomes with
    probability below ZERO_PROBABILITY carry None instead of a state.
    """
    m = as_matrix(rho)
    dim = m.shape[0]
    dA = fam.d
    if dim % dA != 0:
        raise DimensionError(
            f"state dimension {dim} is not a multiple of measurement dimension {dA}"
        )
    dB = dim // dA
    eyeB = np.eye(dB)
    out = []
    for p_op in fam.operators:
        k = np.kron(as_matrix(p_op), eyeB)
        m_i = k @ m @ k
        p = float(np.trace(m_i).real)
        if p < ZERO_PROBABILITY:
            out.append((p, None))
            continue
        red = partial_trace(m_i, "B", (dA, dB)).mat / p
        out.append((p, DensityOperator(dim=dB, mat=red)))
    return out
