"""Unitary time evolution of effects and the constancy classification.

The a-evolution of an effect b is b(t|a) = e^{-ita} b e^{ita}: the influence
on b of an effect a that occurred time t ago but was never recorded. The
time-dependent sequential product a[t]b = a o b(t|a) models "measure a, wait
t, then measure b". a[t]b is constant in t exactly when [a o b, a] = 0,
equivalently when [a, b] = 0 or a is a scaled projection; the classifier
decides this algebraically and the bruteforce grid check serves as its
independent oracle.

Commutator convention: [x, y] = xy - yx, so d/dt b(t|a) = i[b(t|a), a].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .effects import DECISION_TOL, Effect, sequential_product, commutes, validate_effect
from .errors import (
    ClassifierInconsistencyError,
    ConsistencyError,
    EmptyGridError,
    InvalidOrderError,
    NotAProjectionError,
)

# Grid-sampled constancy decisions (one order looser than the algebraic one:
# the grid maximum underestimates the true supremum).
BRUTEFORCE_TOL = 1e-8
# Agreement required between the two computed forms of a[t]b.
CROSS_CHECK_TOL = 1e-10

REASON_COMMUTING = "Commuting"
REASON_SCALED_PROJECTION = "ScaledProjection"
REASON_NEITHER = "Neither"


@dataclass(frozen=True, eq=False)
class ScaledProjectionDecomposition:
    """a = lambda * p with p a nonzero projection and lambda in (0, 1]."""

    scale: float
    projection: Effect


@dataclass(frozen=True, eq=False)
class ConstancyReport:
    """Outcome of the constancy decision for a pair (a, b).

    ``residual`` is ||[a o b, a]||; ``constant`` holds iff it is below the
    decision tolerance. ``reason`` is "Commuting", "ScaledProjection" or
    "Neither"; the decomposition is attached for the scaled-projection case.
    """

    constant: bool
    reason: str
    residual: float
    decomposition: ScaledProjectionDecomposition | None = None


def effect_evolution(b: Effect, a: Effect, t: float) -> Effect:
    """b(t|a) = e^{-ita} b e^{ita}, the a-evolution of b.

    Unitary conjugation, so the spectrum (and trace) of b is preserved.
    """
    u = linalg.unitary_from_decomposition(a.decomposition, t)
    return validate_effect(u @ b.matrix @ u.conj().T)


def evolution_derivative(b: Effect, a: Effect, t: float, n: int = 1) -> np.ndarray:
    """n-th time derivative of b(t|a): i^n [ ... [[b(t|a), a], a] ..., a].

    Each bracket is [x, y] = xy - yx; the result is Hermitian for every n
    (round-off skew is symmetrized away). Raises InvalidOrderError for n < 1.
    """
    if int(n) != n or n < 1:
        raise InvalidOrderError(f"derivative order must be a positive integer, got {n!r}")
    m = effect_evolution(b, a, t).matrix
    for _ in range(int(n)):
        m = 1j * linalg.commutator(m, a.matrix)
    return (m + m.conj().T) / 2.0


def deviation_norm(b: Effect, a: Effect, t: float) -> float:
    """||b(t|a) - b||: how far the a-evolution has moved b at time t."""
    delta = effect_evolution(b, a, t).matrix - b.matrix
    return linalg.operator_norm(delta)


def time_seq_product(a: Effect, b: Effect, t: float) -> Effect:
    """a[t]b = a o b(t|a): measure a, wait time t, then measure b.

    Because e^{-ita} commutes with a^{1/2}, this equals the conjugated
    product e^{-ita}(a o b)e^{ita}; both forms are computed and
    cross-checked, and the conjugated one (which preserves the spectrum of
    a o b exactly) is returned.
    """
    u = linalg.unitary_from_decomposition(a.decomposition, t)
    conjugated = u @ sequential_product(a, b).matrix @ u.conj().T
    s = a.sqrt
    direct = s @ (u @ b.matrix @ u.conj().T) @ s
    if linalg.spectral_norm(conjugated - direct) > CROSS_CHECK_TOL:
        raise ConsistencyError(
            "the two forms of a[t]b disagree beyond tolerance; "
            "this indicates a numerical defect, not a property of the inputs"
        )
    return validate_effect(conjugated)


def seq_product_derivative(a: Effect, b: Effect, t: float) -> np.ndarray:
    """d/dt a[t]b = i[a[t]b, a]; Hermitian, and zero for all t iff constant."""
    m = 1j * linalg.commutator(time_seq_product(a, b, t).matrix, a.matrix)
    return (m + m.conj().T) / 2.0


def projection_evolution_closed_form(
    b: Effect, scale: float, p: Effect, t: float
) -> Effect:
    """b(t|lambda*p) for a projection p, without forming the unitary.

    Expands e^{-it lambda p} = I + (e^{-i lambda t} - 1) p, giving

        b + 2(1 - cos(lambda t)) pbp + (e^{-i lambda t} - 1) pb
          + (e^{i lambda t} - 1) bp.

    Serves as the module's cross-check against effect_evolution(b, scale*p, t).
    Raises NotAProjectionError when p fails p^2 = p or p = 0.
    """
    pm = p.matrix
    if linalg.projection_defect(pm) > 1e-9 or p.norm <= 1e-9:
        raise NotAProjectionError("closed form requires a nonzero projection")
    phase = np.exp(-1j * scale * t)
    bp = b.matrix @ pm
    pb = pm @ b.matrix
    out = (
        b.matrix
        + 2.0 * (1.0 - np.cos(scale * t)) * (pm @ bp)
        + (phase - 1.0) * pb
        + (np.conj(phase) - 1.0) * bp
    )
    return validate_effect(out)


def seq_deviation_profile(a: Effect, b: Effect, times) -> np.ndarray:
    """||a[t]b - a o b|| for every t in ``times`` (batched in a's eigenbasis).

    a[t]b - a o b is unitarily equivalent to X_jk (e^{-it(w_j - w_k)} - 1)
    where X is a o b expressed in the eigenbasis of a and w its eigenvalues,
    so each time slice costs one small Hermitian eigensolve and no
    back-transform.
    """
    ts = np.asarray(times, dtype=float).ravel()
    if ts.size == 0:
        raise EmptyGridError("time grid is empty")
    d = a.decomposition
    x = d.vectors.conj().T @ sequential_product(a, b).matrix @ d.vectors
    freq = d.eigenvalues[:, None] - d.eigenvalues[None, :]
    phases = np.exp(-1j * ts[:, None, None] * freq[None, :, :])
    stack = x[None, :, :] * (phases - 1.0)
    stack = (stack + np.conj(np.swapaxes(stack, -1, -2))) / 2.0
    return np.max(np.abs(np.linalg.eigvalsh(stack)), axis=-1)


def max_seq_deviation(a: Effect, b: Effect, times) -> float:
    """max over the grid of ||a[t]b - a o b||; 0 means constant on the grid."""
    return float(np.max(seq_deviation_profile(a, b, times)))


def constancy_bruteforce(a: Effect, b: Effect, grid, tol: float = BRUTEFORCE_TOL) -> bool:
    """Grid-sampled constancy: true iff max_t ||a[t]b - a o b|| <= tol.

    Independent oracle for the classifier. A degenerate grid such as {0}
    trivially returns true — callers choose grids that actually probe the
    dynamics. Raises EmptyGridError on an empty grid.
    """
    return max_seq_deviation(a, b, grid) <= tol


def classify_scaled_projection(a: Effect) -> ScaledProjectionDecomposition | None:
    """Decompose a = lambda * p if a's spectrum is {0, lambda} (or {lambda}).

    Eigenvalues are grouped into numerical clusters; the decomposition exists
    iff at most one cluster value is nonzero (and at least one is). Returns
    None otherwise — in particular for a = 0.
    """
    d = a.decomposition
    zero_tol = linalg.CLUSTER_GAP_RTOL * max(1.0, a.norm)
    values = d.cluster_values
    nonzero = [i for i, v in enumerate(values) if abs(v) > zero_tol]
    if len(nonzero) != 1:
        return None
    idx = nonzero[0]
    scale = min(float(values[idx]), 1.0)
    projection = validate_effect(d.projections()[idx])
    return ScaledProjectionDecomposition(scale, projection)


def constancy_classifier(a: Effect, b: Effect, tol: float = DECISION_TOL) -> ConstancyReport:
    """Decide whether a[t]b is constant in t, and why.

    Constancy is equivalent to [a o b, a] = 0, which holds exactly when
    [a, b] = 0 or a is a scaled projection; the decision is therefore purely
    algebraic (no time sampling). When both reasons apply (e.g. a = lambda*I)
    the report says Commuting. Raises ClassifierInconsistencyError if the
    residual is below tolerance but neither reason matches — a tolerance bug,
    not a mathematical possibility.
    """
    residual = float(
        linalg.spectral_norm(
            linalg.commutator(sequential_product(a, b).matrix, a.matrix)
        )
    )
    if residual > tol:
        return ConstancyReport(False, REASON_NEITHER, residual)
    if commutes(a, b, tol):
        return ConstancyReport(True, REASON_COMMUTING, residual)
    decomposition = classify_scaled_projection(a)
    if decomposition is not None:
        return ConstancyReport(True, REASON_SCALED_PROJECTION, residual, decomposition)
    raise ClassifierInconsistencyError(
        f"[a o b, a] vanishes (residual {residual:.3g}) but the pair neither "
        "commutes nor has a scaled-projection decomposition within tolerance"
    )
