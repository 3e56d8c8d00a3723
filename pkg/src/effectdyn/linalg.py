"""Dense complex linear algebra for Hermitian operators.

Spectral decompositions, Hermitian matrix functions, unitary propagators
and commutators on small dense matrices. Everything here is pure and
operates on immutable inputs; returned arrays are new allocations.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionMismatchError, NonHermitianError

# Max-entry deviation of M from M-dagger, relative to the max entry magnitude.
HERMITICITY_RTOL = 1e-10
# Gap threshold (relative to the operator norm) for grouping eigenvalues
# into distinct-eigenvalue clusters; deliberately looser than the
# eigensolver residual so spectral projections stay stable.
CLUSTER_GAP_RTOL = 1e-8


def as_complex_matrix(entries) -> np.ndarray:
    """Coerce input to a square complex matrix with finite entries."""
    m = np.asarray(entries, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {m.shape}")
    if m.size and not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def hermiticity_defect(m: np.ndarray) -> float:
    """Largest entry magnitude of M - M^dagger."""
    if m.size == 0:
        return 0.0
    return float(np.max(np.abs(m - m.conj().T)))


def require_hermitian(m, rtol: float = HERMITICITY_RTOL) -> np.ndarray:
    """Check Hermiticity and return the symmetrized matrix (M + M^dagger)/2.

    Symmetrizing after the check removes round-off asymmetry before any
    eigendecomposition.
    """
    m = as_complex_matrix(m)
    scale = max(1.0, float(np.max(np.abs(m))) if m.size else 0.0)
    defect = hermiticity_defect(m)
    if defect > rtol * scale:
        raise NonHermitianError(
            f"hermiticity defect {defect:.3e} exceeds tolerance {rtol * scale:.3e}"
        )
    return (m + m.conj().T) / 2.0


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigensystem of a Hermitian matrix, eigenvalues grouped into clusters.

    ``eigenvalues`` is real and ascending; column j of ``vectors`` is the
    eigenvector for eigenvalue j; ``clusters`` partitions the indices into
    groups of numerically coincident eigenvalues.
    """

    eigenvalues: np.ndarray
    vectors: np.ndarray
    clusters: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    @cached_property
    def cluster_values(self) -> np.ndarray:
        """Representative (mean) eigenvalue of each cluster."""
        return np.array([float(np.mean(self.eigenvalues[list(c)])) for c in self.clusters])

    def projections(self) -> list[np.ndarray]:
        """Spectral projection onto each cluster's eigenspace."""
        out = []
        for c in self.clusters:
            cols = self.vectors[:, list(c)]
            out.append(cols @ cols.conj().T)
        return out

    def apply(self, f: Callable[[float], complex]) -> np.ndarray:
        """U diag(f(lambda_i)) U^dagger."""
        vals = np.array([f(float(lam)) for lam in self.eigenvalues], dtype=complex)
        return (self.vectors * vals) @ self.vectors.conj().T


def _cluster_indices(eigenvalues: np.ndarray, gap: float) -> tuple[tuple[int, ...], ...]:
    clusters: list[tuple[int, ...]] = []
    current = [0]
    for i in range(1, eigenvalues.shape[0]):
        if eigenvalues[i] - eigenvalues[i - 1] > gap:
            clusters.append(tuple(current))
            current = [i]
        else:
            current.append(i)
    clusters.append(tuple(current))
    return tuple(clusters)


def eigh(m, rtol: float = HERMITICITY_RTOL) -> SpectralDecomposition:
    """Spectral decomposition of a Hermitian matrix.

    Raises NonHermitianError when the input fails the Hermiticity check;
    eigenvalues come back ascending and real.
    """
    h = require_hermitian(m, rtol)
    w, v = np.linalg.eigh(h)
    norm = float(np.max(np.abs(w))) if w.size else 0.0
    gap = CLUSTER_GAP_RTOL * max(1.0, norm)
    clusters = _cluster_indices(w, gap) if w.size else ()
    return SpectralDecomposition(_readonly(w), _readonly(v), clusters)


def matrix_function(m, f: Callable[[float], complex]) -> np.ndarray:
    """f(M) = U diag(f(lambda_i)) U^dagger for Hermitian M."""
    return eigh(m).apply(f)


def unitary_exp(a, t: float) -> np.ndarray:
    """Propagator exp(-i t a) for Hermitian a.

    Computed spectrally (exact for Hermitian arguments). Returns the
    identity exactly at t = 0.
    """
    d = eigh(a)
    return unitary_from_decomposition(d, t)


def unitary_from_decomposition(d: SpectralDecomposition, t: float) -> np.ndarray:
    """exp(-i t a) from a precomputed decomposition of a."""
    if t == 0:
        return np.eye(d.dim, dtype=complex)
    phase = np.exp(-1j * t * d.eigenvalues)
    return (d.vectors * phase) @ d.vectors.conj().T


def commutator(a, b) -> np.ndarray:
    """[A, B] = AB - BA."""
    a = as_complex_matrix(a)
    b = as_complex_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"incompatible shapes {a.shape} and {b.shape}")
    return a @ b - b @ a


def operator_norm(m) -> float:
    """Largest absolute eigenvalue of a Hermitian matrix."""
    h = require_hermitian(m)
    if h.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvalsh(h))))


def spectral_norm(m) -> float:
    """Largest singular value; valid for arbitrary (non-Hermitian) matrices."""
    m = np.asarray(m, dtype=complex)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def projection_defect(m: np.ndarray) -> float:
    """Spectral norm of M^2 - M (zero iff M is idempotent)."""
    return spectral_norm(m @ m - m)


def trace_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """tr(A B) without forming the full product."""
    return complex(np.sum(a * b.T))
