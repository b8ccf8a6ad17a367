"""Generalized Gell-Mann generators of su(d) and the two bipartite state
families with maximally mixed marginals built from them.

Generator conventions (all Hermitian, traceless, Tr(s_a s_b) = 2 delta_ab):

    u_ij = |i><j| + |j><i|                         0 <= i < j < d
    v_ij = i(|j><i| - |i><j|)                      0 <= i < j < d
    w_k  = sqrt(2/(k(k+1))) (sum_{i<k} |i><i| - k |k><k|)   0 < k < d

At d = 2 these are the Pauli matrices: sigma_1 = u_01, sigma_2 = v_01,
sigma_3 = w_1.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .qmat import DensityOperator, ValidationError, density_violations


@dataclass(frozen=True)
class GeneratorId:
    """Label for one su(d) generator: kind 'u'/'v' with pair (i, j), or
    kind 'w' with diagonal index k in the `i` slot."""

    kind: str
    i: int
    j: int = -1

    def validate(self, d: int) -> None:
        if self.kind in ("u", "v"):
            if not (0 <= self.i < self.j < d):
                raise ValueError(
                    f"{self.kind}-generator needs 0 <= i < j < d, "
                    f"got (i, j) = ({self.i}, {self.j}) at d = {d}"
                )
        elif self.kind == "w":
            if not (0 < self.i < d):
                raise ValueError(
                    f"w-generator needs 0 < k < d, got k = {self.i} at d = {d}"
                )
        else:
            raise ValueError(f"unknown generator kind {self.kind!r}")


def generator(gid: GeneratorId, d: int) -> np.ndarray:
    """Dense matrix of one su(d) generator."""
    gid.validate(d)
    m = np.zeros((d, d), dtype=complex)
    if gid.kind == "u":
        m[gid.i, gid.j] = 1.0
        m[gid.j, gid.i] = 1.0
    elif gid.kind == "v":
        m[gid.j, gid.i] = 1.0j
        m[gid.i, gid.j] = -1.0j
    else:
        k = gid.i
        scale = math.sqrt(2.0 / (k * (k + 1)))
        for i in range(k):
            m[i, i] = scale
        m[k, k] = -k * scale
    return m


def su_generator_ids(d: int):
    """All d^2 - 1 generator labels at dimension d."""
    ids = []
    for i in range(d):
        for j in range(i + 1, d):
            ids.append(GeneratorId("u", i, j))
            ids.append(GeneratorId("v", i, j))
    for k in range(1, d):
        ids.append(GeneratorId("w", k))
    return ids


def pauli_sigmas(d: int):
    """The embedded Pauli triple (sigma_1, sigma_2, sigma_3) on span{|0>,|1>}."""
    return (
        generator(GeneratorId("u", 0, 1), d),
        generator(GeneratorId("v", 0, 1), d),
        generator(GeneratorId("w", 1), d),
    )


def in_correlation_subset(gid: GeneratorId) -> bool:
    """Whether a generator belongs to the coefficient subset used by the
    diagonal state family: the Pauli triple plus u_ij, v_ij with 2 <= i < j."""
    if gid.kind == "w":
        return gid.i == 1
    return (gid.i, gid.j) == (0, 1) or gid.i >= 2


@dataclass
class DiagCorrelationSpec:
    """Coefficients c_a on sigma_a (x) sigma_a terms of the diagonal family."""

    d: int
    coeffs: dict = field(default_factory=dict)

    @classmethod
    def diag3(cls, d: int, c1: float, c2: float, c3: float):
        """Common three-coefficient case on the Pauli triple."""
        return cls(
            d=d,
            coeffs={
                GeneratorId("u", 0, 1): float(c1),
                GeneratorId("v", 0, 1): float(c2),
                GeneratorId("w", 1): float(c3),
            },
        )

    def pauli_coeffs(self):
        """(c1, c2, c3) on the Pauli triple; absent entries are zero."""
        return (
            float(self.coeffs.get(GeneratorId("u", 0, 1), 0.0)),
            float(self.coeffs.get(GeneratorId("v", 0, 1), 0.0)),
            float(self.coeffs.get(GeneratorId("w", 1), 0.0)),
        )

    def validate_ids(self) -> None:
        if self.d < 2:
            raise ValueError(f"subsystem dimension must be >= 2, got {self.d}")
        for gid in self.coeffs:
            gid.validate(self.d)
            if not in_correlation_subset(gid):
                raise ValueError(
                    f"generator {gid} is outside the admissible coefficient subset"
                )


@dataclass
class BlockCorrelationSpec:
    """3x3 correlation matrix T on the Pauli-triple block."""

    d: int
    T: np.ndarray

    def __post_init__(self):
        self.T = np.asarray(self.T, dtype=float)
        if self.T.shape != (3, 3):
            raise ValueError(f"T must be 3x3, got shape {self.T.shape}")
        if self.d < 2:
            raise ValueError(f"subsystem dimension must be >= 2, got {self.d}")


def _finish_state(m: np.ndarray, d: int) -> DensityOperator:
    m /= d * d
    bad = density_violations(m)
    if bad:
        raise ValidationError(bad)
    return DensityOperator(dim=d * d, mat=m)


def build_diag_state(spec: DiagCorrelationSpec) -> DensityOperator:
    """(1/d^2)(I (x) I + sum_a c_a sigma_a (x) sigma_a), PSD-checked."""
    spec.validate_ids()
    d = spec.d
    m = np.eye(d * d, dtype=complex)
    for gid, c in spec.coeffs.items():
        s = generator(gid, d)
        m += float(c) * np.kron(s, s)
    return _finish_state(m, d)


def build_block_state(spec: BlockCorrelationSpec) -> DensityOperator:
    """(1/d^2)(I (x) I + sum_{jk} T_jk sigma_j (x) sigma_k), PSD-checked."""
    d = spec.d
    sig = pauli_sigmas(d)
    m = np.eye(d * d, dtype=complex)
    for j in range(3):
        for k in range(3):
            t = spec.T[j, k]
            if t != 0.0:
                m += t * np.kron(sig[j], sig[k])
    return _finish_state(m, d)


def closed_form_spectrum_diag3(c1: float, c2: float, c3: float, d: int):
    """Eigenvalues of the three-coefficient diagonal state as
    (value, multiplicity) pairs: four distinguished values on the qubit-pair
    block plus a (d^2 - 4)-fold 1/d^2.

    Values may be negative for inadmissible coefficients; callers decide.
    """
    dd = d * d
    out = [
        ((1 - c1 + (c2 + c3)) / dd, 1),
        ((1 - c1 - (c2 + c3)) / dd, 1),
        ((1 + c1 + (c2 - c3)) / dd, 1),
        ((1 + c1 - (c2 - c3)) / dd, 1),
    ]
    if dd > 4:
        out.append((1.0 / dd, dd - 4))
    return out
