"""Dense complex-matrix core: tensor products, partial traces, Hermitian
spectra, von Neumann entropy, and density-operator validation.

Everything downstream (state builders, measurement families, correlation
measures) leans on this module as the numerical oracle, so tolerances are
pinned here once.
"""

from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10


class DimensionError(ValueError):
    """Shapes or subsystem dimensions do not match."""


class ValidationError(ValueError):
    """A matrix fails a numerical invariant (Hermiticity, trace, PSD).

    `violations` lists one human-readable entry per failed invariant,
    including the magnitude of the violation.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """A validated density matrix: Hermitian, unit trace, PSD."""

    dim: int
    mat: np.ndarray


def as_matrix(m) -> np.ndarray:
    """Coerce a DensityOperator or array-like to a square complex ndarray."""
    a = m.mat if isinstance(m, DensityOperator) else m
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError(["matrix contains non-finite entries"])
    return a


def tensor(a, b) -> np.ndarray:
    """Kronecker product of two square matrices."""
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace(rho, keep: str, dims: tuple) -> DensityOperator:
    """Trace out one factor of a bipartite operator.

    keep: "A" keeps the first factor (traces out B), "B" the second.
    dims: (dA, dB) with dA * dB equal to the full dimension.
    """
    m = as_matrix(rho)
    dA, dB = dims
    if m.shape[0] != dA * dB:
        raise DimensionError(
            f"dims {dims} incompatible with matrix of dimension {m.shape[0]}"
        )
    r = m.reshape(dA, dB, dA, dB)
    if keep == "A":
        red = np.einsum("abcb->ac", r)
    elif keep == "B":
        red = np.einsum("abad->bd", r)
    else:
        raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")
    return DensityOperator(dim=red.shape[0], mat=red)


def hermiticity_defect(m) -> float:
    """Largest entrywise deviation from M = M^dagger."""
    a = as_matrix(m)
    return float(np.max(np.abs(a - a.conj().T)))


def hermitian_spectrum(m, tol: float = HERMITICITY_TOL, vectors: bool = False):
    """Eigenvalues (ascending) of a Hermitian matrix; optionally eigenvectors.

    Raises ValidationError if the input is not Hermitian within `tol`.
    """
    a = as_matrix(m)
    defect = hermiticity_defect(a)
    if defect > tol:
        raise ValidationError(
            [f"hermiticity violated: max |M - M^dag| = {defect:.3e} > {tol:.1e}"]
        )
    if vectors:
        vals, vecs = np.linalg.eigh(a)
        return vals, vecs
    return np.linalg.eigvalsh(a)


def spectrum_entropy(vals) -> float:
    """Shannon entropy (bits) of a nonnegative spectrum, 0 log 0 := 0."""
    lam = np.asarray(vals, dtype=float)
    lam = lam[lam > 0.0]
    return float(-np.sum(lam * np.log2(lam)))


def von_neumann_entropy(rho) -> float:
    """-Tr rho log2 rho of a density operator, in bits."""
    if not isinstance(rho, DensityOperator):
        rho = validate_density(rho)
    vals = np.linalg.eigvalsh(rho.mat)
    return spectrum_entropy(np.clip(vals, 0.0, None))


def density_violations(
    m,
    herm_tol: float = HERMITICITY_TOL,
    trace_tol: float = TRACE_TOL,
    psd_tol: float = PSD_TOL,
):
    """List of invariant violations keeping a matrix from being a density.

    Empty list means the matrix is a valid density operator at the given
    tolerances.
    """
    a = as_matrix(m)
    out = []
    defect = hermiticity_defect(a)
    if defect > herm_tol:
        out.append(f"hermiticity: max |M - M^dag| = {defect:.3e} > {herm_tol:.1e}")
        return out  # eigvalsh below assumes Hermitian input
    tr_dev = abs(np.trace(a).real - 1.0) + abs(np.trace(a).imag)
    if tr_dev > trace_tol:
        out.append(f"trace: |Tr M - 1| = {tr_dev:.3e} > {trace_tol:.1e}")
    lam_min = float(np.linalg.eigvalsh(a)[0])
    if lam_min < -psd_tol:
        out.append(f"positivity: smallest eigenvalue = {lam_min:.3e} < -{psd_tol:.1e}")
    return out


def validate_density(
    m,
    herm_tol: float = HERMITICITY_TOL,
    trace_tol: float = TRACE_TOL,
    psd_tol: float = PSD_TOL,
) -> DensityOperator:
    """Wrap a matrix as a DensityOperator or raise with a violation report."""
    a = as_matrix(m)
    bad = density_violations(a, herm_tol, trace_tol, psd_tol)
    if bad:
        raise ValidationError(bad)
    return DensityOperator(dim=a.shape[0], mat=a)
