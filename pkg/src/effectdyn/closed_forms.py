"""Closed-form reference values for the built-in worked qubit examples.

Three hand-solvable scenarios are wired through tests and the CLI
``examples`` command as independent oracles for the generic evolution code:

1. a = diag(1, 1/2), b = (1/2) * ones: the evolved effect and its derivative
   eigenvalues have simple closed forms.
2. a = lambda * diag(1, 0), general Hermitian b: the deviation
   ||b(t|a) - b|| and the derivative eigenvalues in closed form.
3. a = lambda * p for any projection p: a[t]b is the constant lambda*pbp.

Everything here is computed straight from the formulas — deliberately no
shared code with the evolution module, since agreement between the two
routes is the point.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .effects import Effect, validate_effect
from .errors import NotAProjectionError

_EXAMPLE1_A = np.array([[1.0, 0.0], [0.0, 0.5]], dtype=complex)
_EXAMPLE1_B = np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex)


def example1_effects() -> tuple[Effect, Effect]:
    """The first worked pair: a = diag(1, 1/2), b = (1/2)[[1,1],[1,1]]."""
    return validate_effect(_EXAMPLE1_A), validate_effect(_EXAMPLE1_B)


def example1_evolution(t: float) -> np.ndarray:
    """b(t|a) for the first worked pair: (1/2)[[1, e^{-it/2}],[e^{it/2}, 1]]."""
    phase = cmath.exp(-0.5j * t)
    return 0.5 * np.array([[1.0, phase], [phase.conjugate(), 1.0]])


def example1_derivative_eigs() -> tuple[float, float]:
    """Eigenvalues of d/dt b(t|a) for the first pair: (-1/4, 1/4), any t."""
    return (-0.25, 0.25)


@dataclass(frozen=True)
class QubitExampleParams:
    """Inputs for the second worked example: a = scale * diag(1, 0).

    ``scale`` is the projection multiplier in (0, 1]; b is the Hermitian
    matrix [[b11, b12], [conj(b12), b22]] and must be a valid effect (checked
    at construction).
    """

    scale: float
    b11: float
    b22: float
    b12: complex

    def __post_init__(self) -> None:
        if not 0.0 < self.scale <= 1.0:
            raise ValueError(f"scale must lie in (0, 1], got {self.scale!r}")
        self.effect_b()

    def effect_a(self) -> Effect:
        return validate_effect(np.diag([self.scale, 0.0]))

    def effect_b(self) -> Effect:
        b12 = complex(self.b12)
        return validate_effect(
            np.array([[self.b11, b12], [b12.conjugate(), self.b22]])
        )


def example2_deviation(params: QubitExampleParams, t: float) -> float:
    """||b(t|a) - b|| = sqrt(2(1 - cos(scale*t))) * |b12|.

    Maximal (= 2|b12|) at t = (2n-1)*pi/scale.
    """
    return math.sqrt(2.0 * (1.0 - math.cos(params.scale * t))) * abs(params.b12)


def example2_derivative_eigs(params: QubitExampleParams) -> tuple[float, float]:
    """Eigenvalues of d/dt b(t|a): +/- scale*|b12|, independent of t."""
    v = params.scale * abs(params.b12)
    return (-v, v)


def example3_constant_product(scale: float, p: Effect, b: Effect, t: float) -> Effect:
    """a[t]b for a = scale * p with p a projection: scale*pbp, for every t.

    The time argument is accepted (and ignored) to mirror the generic
    signature this oracle is checked against. Raises NotAProjectionError
    when p is not a nonzero projection.
    """
    pm = p.matrix
    if (
        np.linalg.norm(pm @ pm - pm, 2) > 1e-9
        or np.linalg.norm(pm, 2) <= 1e-9
    ):
        raise NotAProjectionError("third worked example requires a nonzero projection")
    out = scale * (pm @ b.matrix @ pm)
    return validate_effect(out)
