"""Observables (finite effect families summing to I) and their calculus.

Covers outcome distributions, the sequential product A o B, conditioning
(B|A), the a-evolution B(t|a), the time-dependent product A[t]B, the
time-dependent conditional observable (B|A)(t|A), and convex combinations.
Every operation funnels its output through validate_observable, so the
normalization arguments behind each construction are re-checked numerically
on every call.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .effects import Effect, State, clamp_unit, sequential_product, validate_effect
from .errors import (
    ConsistencyError,
    DimensionMismatchError,
    EffectdynError,
    MemberNotEffectError,
    OutcomeSetMismatchError,
    SchemaError,
    SumNotIdentityError,
    WeightsNotNormalizedError,
)
from .evolution import effect_evolution, time_seq_product

# ||sum of effects - I|| admitted for a valid observable.
OBSERVABLE_SUM_TOL = 1e-9
DISTRIBUTION_SUM_TOL = 1e-10
WEIGHT_SUM_TOL = 1e-12

# Joins outcome labels of product observables: (x, y) -> "x⊗y".
PRODUCT_LABEL_SEP = "⊗"


@dataclass(frozen=True, eq=False)
class Observable:
    """Ordered family of effects summing to the identity.

    ``outcomes`` are unique string labels parallel to ``effects``; both are
    stored in declaration order and all iteration is order-stable.
    """

    outcomes: tuple[str, ...]
    effects: tuple[Effect, ...]

    @property
    def dim(self) -> int:
        return self.effects[0].dim

    def __len__(self) -> int:
        return len(self.effects)


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    """Probabilities tr(rho A_x) per outcome; sums to 1 within tolerance."""

    outcomes: tuple[str, ...]
    probabilities: tuple[float, ...]

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.outcomes, self.probabilities))


def _default_labels(n: int) -> tuple[str, ...]:
    return tuple(str(i) for i in range(n))


def validate_observable(effects, outcomes=None) -> Observable:
    """Check that the effects form an observable and build it.

    Members may be Effect instances or raw matrices; raw members are
    validated (MemberNotEffectError on failure). The sum must be I within
    OBSERVABLE_SUM_TOL (SumNotIdentityError, carrying the residual, on
    failure). Labels default to "0", "1", ...; duplicates are rejected.
    """
    members: list[Effect] = []
    for i, m in enumerate(effects):
        if isinstance(m, Effect):
            members.append(m)
        else:
            try:
                members.append(validate_effect(m))
            except EffectdynError as exc:
                raise MemberNotEffectError(f"member {i} is not an effect: {exc}") from exc
    if not members:
        raise SchemaError("an observable needs at least one effect")
    dims = {m.dim for m in members}
    if len(dims) > 1:
        raise DimensionMismatchError(f"members have mixed dimensions: {sorted(dims)}")
    labels = _default_labels(len(members)) if outcomes is None else tuple(str(o) for o in outcomes)
    if len(labels) != len(members):
        raise SchemaError(
            f"{len(labels)} outcome labels for {len(members)} effects"
        )
    if len(set(labels)) != len(labels):
        raise SchemaError("outcome labels must be unique")
    dim = members[0].dim
    total = np.zeros((dim, dim), dtype=complex)
    for m in members:
        total += m.matrix
    residual = linalg.operator_norm(total - np.eye(dim))
    if residual > OBSERVABLE_SUM_TOL:
        raise SumNotIdentityError(
            f"effects sum to I only within {residual:.3g} (> {OBSERVABLE_SUM_TOL})",
            residual,
        )
    return Observable(labels, tuple(members))


def distribution(a: Observable, rho: State) -> OutcomeDistribution:
    """The probability measure x -> tr(rho A_x) of A in the state rho."""
    if rho.dim != a.dim:
        raise DimensionMismatchError(
            f"state dimension {rho.dim} vs observable dimension {a.dim}"
        )
    probs = tuple(
        clamp_unit(float(linalg.trace_inner(rho.matrix, m.matrix).real))
        for m in a.effects
    )
    total = sum(probs)
    if abs(total - 1.0) > DISTRIBUTION_SUM_TOL:
        raise ConsistencyError(
            f"distribution sums to {total!r}, off 1 beyond {DISTRIBUTION_SUM_TOL}"
        )
    return OutcomeDistribution(a.outcomes, probs)


def product_label(x: str, y: str) -> str:
    return f"{x}{PRODUCT_LABEL_SEP}{y}"


def obs_seq_product(a: Observable, b: Observable) -> Observable:
    """A o B: effects A_x o B_y over the product outcome set, input order."""
    labels = []
    members = []
    for x, ax in zip(a.outcomes, a.effects):
        for y, by in zip(b.outcomes, b.effects):
            labels.append(product_label(x, y))
            members.append(sequential_product(ax, by))
    return validate_observable(members, labels)


def conditioned_observable(b: Observable, a: Observable) -> Observable:
    """(B|A): effects sum_x A_x o B_y — B after a nonselective A measurement."""
    members = []
    for by in b.effects:
        total = np.zeros((b.dim, b.dim), dtype=complex)
        for ax in a.effects:
            total += sequential_product(ax, by).matrix
        members.append(total)
    return validate_observable(members, b.outcomes)


def obs_evolution(b: Observable, a: Effect, t: float) -> Observable:
    """B(t|a): each member evolved, e^{-ita} B_y e^{ita}; outcomes unchanged."""
    return validate_observable(
        [effect_evolution(by, a, t) for by in b.effects], b.outcomes
    )


def obs_time_seq_product(a: Observable, b: Observable, t: float) -> Observable:
    """A[t]B: effects A_x[t]B_y = A_x o (B_y evolved by A_x for time t)."""
    labels = []
    members = []
    for x, ax in zip(a.outcomes, a.effects):
        for y, by in zip(b.outcomes, b.effects):
            labels.append(product_label(x, y))
            members.append(time_seq_product(ax, by, t))
    return validate_observable(members, labels)


def time_conditional_observable(b: Observable, a: Observable, t: float) -> Observable:
    """(B|A)(t|A): effects sum_x A_x[t]B_y; reduces to (B|A) at t = 0."""
    members = []
    for by in b.effects:
        total = np.zeros((b.dim, b.dim), dtype=complex)
        for ax in a.effects:
            total += time_seq_product(ax, by, t).matrix
        members.append(total)
    return validate_observable(members, b.outcomes)


def convex_combination(weights, observables) -> Observable:
    """sum_i w_i B_i over a shared outcome set, weights on the simplex.

    Raises WeightsNotNormalizedError when the weights do not sum to 1 (or
    leave [0, 1]) and OutcomeSetMismatchError when the outcome sets differ.
    """
    ws = [float(w) for w in weights]
    obs = list(observables)
    if len(ws) != len(obs) or not obs:
        raise SchemaError(f"{len(ws)} weights for {len(obs)} observables")
    if any(w < 0.0 or w > 1.0 for w in ws) or abs(sum(ws) - 1.0) > WEIGHT_SUM_TOL:
        raise WeightsNotNormalizedError(
            f"weights must lie in [0,1] and sum to 1, got {ws}"
        )
    first = obs[0]
    for o in obs[1:]:
        if o.outcomes != first.outcomes:
            raise OutcomeSetMismatchError(
                f"outcome sets differ: {first.outcomes} vs {o.outcomes}"
            )
    members = []
    for y in range(len(first)):
        total = np.zeros((first.dim, first.dim), dtype=complex)
        for w, o in zip(ws, obs):
            total += w * o.effects[y].matrix
        members.append(total)
    return validate_observable(members, first.outcomes)
