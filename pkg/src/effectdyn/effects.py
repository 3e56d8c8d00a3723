"""Effects, states, probabilities, the sequential product and coexistence.

An effect is a Hermitian operator a with 0 <= a <= I; it models a yes-no
measurement. A state is a positive operator with unit trace. The
sequential product a o b = a^(1/2) b a^(1/2) is the effect of measuring a
and then b immediately afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import linalg
from .errors import (
    DimensionMismatchError,
    NotCommutingError,
    SpectrumOutOfRangeError,
    TraceNotOneError,
)

# Admissible eigenvalue overshoot for effects: spectrum in [-TOL, 1 + TOL].
EFFECT_SPECTRUM_TOL = 1e-9
# Yes/no decisions (commutation, constancy, witness residuals).
DECISION_TOL = 1e-9
STATE_TRACE_TOL = 1e-10
# Eigenvalues at or below this (relative) scale are treated as exact zeros
# when taking the square root. sqrt is non-Lipschitz at 0: an exact zero the
# eigensolver perturbs to ~1e-16 would otherwise contribute ~1e-8 to a^{1/2}
# and wreck downstream residuals for rank-deficient effects.
SQRT_ZERO_CUTOFF = 1e-13


@dataclass(frozen=True, eq=False)
class Effect:
    """Hermitian operator with spectrum inside [0, 1] (within tolerance).

    Instances are produced by :func:`validate_effect`; the stored matrix is
    symmetrized and read-only, so effects are safe to share across threads.
    ``eig_min``/``eig_max`` are the raw extremal eigenvalues found at
    validation time.
    """

    matrix: np.ndarray
    eig_min: float
    eig_max: float

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def norm(self) -> float:
        """Operator norm (largest absolute eigenvalue)."""
        return max(abs(self.eig_min), abs(self.eig_max))

    @cached_property
    def decomposition(self) -> linalg.SpectralDecomposition:
        return linalg.eigh(self.matrix)

    @cached_property
    def sqrt(self) -> np.ndarray:
        """The unique positive square root, with noise-level eigenvalues zeroed."""
        d = self.decomposition
        w = np.clip(d.eigenvalues, 0.0, None)
        w[w <= SQRT_ZERO_CUTOFF * max(1.0, self.eig_max)] = 0.0
        return (d.vectors * np.sqrt(w)) @ d.vectors.conj().T

    def clamped_range(self) -> tuple[float, float]:
        """Extremal eigenvalues with sub-tolerance overshoot snapped to [0, 1].

        Raw values stay available as ``eig_min``/``eig_max``; the clamped
        view is for user-facing reporting only.
        """
        return clamp_unit(self.eig_min), clamp_unit(self.eig_max)


def clamp_unit(value: float, tol: float = EFFECT_SPECTRUM_TOL) -> float:
    """Snap values within ``tol`` of 0 or 1 onto the boundary."""
    if -tol <= value < 0.0:
        return 0.0
    if 1.0 < value <= 1.0 + tol:
        return 1.0
    return value


def validate_effect(matrix, tol: float = EFFECT_SPECTRUM_TOL) -> Effect:
    """Validate 0 <= M <= I and build an :class:`Effect`.

    Raises NonHermitianError when M is not Hermitian and
    SpectrumOutOfRangeError (carrying the offending eigenvalue) when the
    spectrum leaves [-tol, 1 + tol].
    """
    h = linalg.require_hermitian(matrix)
    w = np.linalg.eigvalsh(h)
    lo, hi = float(w[0]), float(w[-1])
    if lo < -tol:
        raise SpectrumOutOfRangeError(f"eigenvalue {lo:.6g} below 0", lo)
    if hi > 1.0 + tol:
        raise SpectrumOutOfRangeError(f"eigenvalue {hi:.6g} above 1", hi)
    h.setflags(write=False)
    return Effect(h, lo, hi)


def identity_effect(dim: int) -> Effect:
    return validate_effect(np.eye(dim))


def zero_effect(dim: int) -> Effect:
    return validate_effect(np.zeros((dim, dim)))


@dataclass(frozen=True, eq=False)
class State:
    """Positive operator with unit trace; produced by :func:`validate_state`."""

    matrix: np.ndarray
    eig_min: float

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def validate_state(matrix, tol: float = EFFECT_SPECTRUM_TOL) -> State:
    """Validate positivity and unit trace and build a :class:`State`."""
    h = linalg.require_hermitian(matrix)
    w = np.linalg.eigvalsh(h)
    lo = float(w[0]) if w.size else 0.0
    if lo < -tol:
        raise SpectrumOutOfRangeError(f"eigenvalue {lo:.6g} below 0", lo)
    tr = float(np.trace(h).real)
    if abs(tr - 1.0) > STATE_TRACE_TOL:
        raise TraceNotOneError(f"trace {tr!r} differs from 1 beyond {STATE_TRACE_TOL}")
    h.setflags(write=False)
    return State(h, lo)


def maximally_mixed_state(dim: int) -> State:
    return validate_state(np.eye(dim) / dim)


def _check_dims(*dims: int) -> None:
    if len(set(dims)) > 1:
        raise DimensionMismatchError(f"dimension mismatch: {dims}")


def probability(rho: State, a: Effect) -> float:
    """tr(rho a): probability that the effect occurs in the given state.

    Values within tolerance of 0 or 1 are clamped onto the boundary.
    """
    _check_dims(rho.dim, a.dim)
    p = float(linalg.trace_inner(rho.matrix, a.matrix).real)
    return clamp_unit(p)


def sequential_product(a: Effect, b: Effect) -> Effect:
    """a o b = a^(1/2) b a^(1/2): measure a, then b immediately after.

    The result is re-validated as an effect rather than trusted; it always
    satisfies a o b <= a, and equals ab when a and b commute.
    """
    _check_dims(a.dim, b.dim)
    s = a.sqrt
    return validate_effect(s @ b.matrix @ s)


def commutes(a: Effect, b: Effect, tol: float = DECISION_TOL) -> bool:
    """True iff ||ab - ba|| <= tol * max(1, ||a|| ||b||)."""
    _check_dims(a.dim, b.dim)
    c = linalg.commutator(a.matrix, b.matrix)
    return linalg.spectral_norm(c) <= tol * max(1.0, a.norm * b.norm)


@dataclass(frozen=True, eq=False)
class CoexistenceWitness:
    """Decomposition witnessing that two effects coexist.

    Witnesses a = a1 + c and b = b1 + c with a1 + b1 + c <= I, so both
    effects arise as outcome sums of the single four-outcome observable
    {a1, b1, c, I - a1 - b1 - c}. The complement is derived on demand, not
    stored. Construction does not re-check the sum condition; use
    :func:`verify_coexistence_witness`.
    """

    a1: Effect
    b1: Effect
    c: Effect

    def complement(self) -> Effect:
        """d = I - a1 - b1 - c, the fourth observable member."""
        dim = self.a1.dim
        return validate_effect(
            np.eye(dim) - self.a1.matrix - self.b1.matrix - self.c.matrix
        )


def verify_coexistence_witness(
    a: Effect, b: Effect, witness: CoexistenceWitness, tol: float = DECISION_TOL
) -> bool:
    """Check that a witness actually decomposes the pair (a, b).

    True iff all three members are valid effects, a1 + b1 + c <= I, and
    a = a1 + c, b = b1 + c within tolerance.
    """
    _check_dims(a.dim, b.dim, witness.a1.dim, witness.b1.dim, witness.c.dim)
    try:
        for member in (witness.a1, witness.b1, witness.c):
            validate_effect(member.matrix)
    except (SpectrumOutOfRangeError, ValueError):
        return False
    total = witness.a1.matrix + witness.b1.matrix + witness.c.matrix
    if float(np.max(np.linalg.eigvalsh(total))) > 1.0 + EFFECT_SPECTRUM_TOL:
        return False
    res_a = linalg.operator_norm(a.matrix - witness.a1.matrix - witness.c.matrix)
    res_b = linalg.operator_norm(b.matrix - witness.b1.matrix - witness.c.matrix)
    return res_a <= tol and res_b <= tol


def commuting_witness(a: Effect, b: Effect) -> CoexistenceWitness:
    """Standard coexistence witness (a - ab, b - ab, ab) for a commuting pair.

    Raises NotCommutingError when the pair does not commute.
    """
    if not commutes(a, b):
        raise NotCommutingError("commuting_witness requires a commuting pair")
    prod = a.matrix @ b.matrix
    prod = (prod + prod.conj().T) / 2.0  # exact product is Hermitian; drop round-off skew
    return CoexistenceWitness(
        a1=validate_effect(a.matrix - prod),
        b1=validate_effect(b.matrix - prod),
        c=validate_effect(prod),
    )


def evolve_state(rho: State, a: Effect, t: float) -> State:
    """exp(ita) rho exp(-ita): the state after the unitary a-channel runs for time t."""
    _check_dims(rho.dim, a.dim)
    u = linalg.unitary_from_decomposition(a.decomposition, t)
    return validate_state(u.conj().T @ rho.matrix @ u)
