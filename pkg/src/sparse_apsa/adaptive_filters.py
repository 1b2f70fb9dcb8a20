"""VSS-APSA and its sparsity-aware variants.

Every filter shares the sign-error data term::

    w(n+1) = w(n) + mu(n) * x(n) * sgn(e(n)) - penalty(w(n), w(n-1))
    mu(n)  = mu / (||x(n)||_2 + delta0)

where ``e(n)`` is the a priori error.  The penalty is one of

=======  ==========================================================
None     0
ZA       (lam/2) * sgn(w)
RZA      (lam/2) * sgn(w) / (1 + eps*|w|)
RL1      (lam/2) * sgn(w) / (delta + |w_prev|)
=======  ==========================================================

The ideal ``l0`` penalty these replace is combinatorial and has no
implementation here.

All functions accept arrays with arbitrary leading batch dimensions; the
last axis is the tap axis.  States are immutable values and ``update``
returns a new one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

__all__ = [
    "NoPenalty",
    "ZeroAttracting",
    "ReweightedZeroAttracting",
    "ReweightedL1",
    "PenaltyKind",
    "FilterConfig",
    "FilterState",
    "NonFiniteInputError",
    "init",
    "a_priori_error",
    "variable_step",
    "penalty_term",
    "update",
    "lms_update",
    "penalty_curve",
]


class NonFiniteInputError(ValueError):
    """Regressor or desired sample contains NaN or inf."""


@dataclass(frozen=True)
class NoPenalty:
    """Plain VSS-APSA, no sparsity term."""

    def strength(self, w, w_prev):
        return np.zeros_like(np.asarray(w, dtype=float))

    def term(self, w, w_prev):
        return self.strength(w, w_prev)


@dataclass(frozen=True)
class _Penalty:
    lam: float

    def __post_init__(self):
        if not self.lam >= 0:
            raise ValueError(f"lam must be non-negative, got {self.lam}")

    def term(self, w, w_prev):
        # "+ 0.0" folds -0.0 into +0.0 so lam=0 is bit-identical to NoPenalty
        return (self.lam / 2.0) * self.strength(w, w_prev) + 0.0


@dataclass(frozen=True)
class ZeroAttracting(_Penalty):
    """l1 penalty: uniform pull toward zero."""

    lam: float = 4e-4

    def strength(self, w, w_prev):
        return np.sign(w)


@dataclass(frozen=True)
class ReweightedZeroAttracting(_Penalty):
    """Log-sum penalty; the pull fades for ``|w|`` beyond about ``1/eps``."""

    lam: float = 4e-3
    eps: float = 20.0

    def __post_init__(self):
        super().__post_init__()
        if not self.eps > 0:
            raise ValueError(f"eps must be positive, got {self.eps}")

    def strength(self, w, w_prev):
        return np.sign(w) / (1.0 + self.eps * np.abs(w))


@dataclass(frozen=True)
class ReweightedL1(_Penalty):
    """Reweighted l1 penalty, weights taken from the previous iterate."""

    lam: float = 1e-4
    delta: float = 0.01

    def __post_init__(self):
        super().__post_init__()
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")

    def strength(self, w, w_prev):
        return np.sign(w) / (self.delta + np.abs(w_prev))


PenaltyKind = Union[NoPenalty, ZeroAttracting, ReweightedZeroAttracting, ReweightedL1]


@dataclass(frozen=True)
class FilterConfig:
    """Step-size constants and penalty for one filter.

    ``mu`` is the initial step size; for :func:`lms_update` it is the fixed
    LMS step.
    """

    n_taps: int
    mu: float = 0.1
    delta0: float = 1e-6
    penalty: PenaltyKind = field(default_factory=NoPenalty)

    def __post_init__(self):
        if self.n_taps < 1:
            raise ValueError(f"n_taps must be >= 1, got {self.n_taps}")
        if not self.mu > 0:
            raise ValueError(f"mu must be positive, got {self.mu}")
        if not self.delta0 > 0:
            raise ValueError(f"delta0 must be positive, got {self.delta0}")


@dataclass(frozen=True, eq=False)
class FilterState:
    """Current estimate ``w_hat`` and the previous one ``w_prev`` (RL1 only)."""

    w_hat: np.ndarray
    w_prev: np.ndarray


def init(config: FilterConfig, batch_shape: tuple = ()) -> FilterState:
    """All-zero state, optionally with leading batch dimensions."""
    shape = tuple(batch_shape) + (config.n_taps,)
    return FilterState(np.zeros(shape), np.zeros(shape))


def _check_dims(w, x):
    if np.shape(x)[-1:] != np.shape(w)[-1:]:
        raise ValueError(f"regressor shape {np.shape(x)} does not match weights {np.shape(w)}")


def a_priori_error(state: FilterState, x, d):
    """``d - x . w_hat`` using the pre-update estimate."""
    _check_dims(state.w_hat, x)
    return d - np.sum(x * state.w_hat, axis=-1)


def variable_step(x, mu: float, delta0: float):
    """``mu / (||x||_2 + delta0)``; note the norm is not squared."""
    x = np.asarray(x, dtype=float)
    return mu / (np.sqrt(np.sum(x * x, axis=-1)) + delta0)


def penalty_term(kind: PenaltyKind, w_hat, w_prev):
    """Sparsity vector subtracted by :func:`update` (includes the ``lam/2`` scale)."""
    _check_dims(w_hat, w_prev)
    return kind.term(np.asarray(w_hat, dtype=float), np.asarray(w_prev, dtype=float))


def _check_finite(x, d):
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(d))):
        raise NonFiniteInputError("regressor and desired sample must be finite")


def update(state: FilterState, config: FilterConfig, x, d) -> FilterState:
    """One VSS-APSA step with the configured sparsity penalty.

    The sign is taken of the a priori error; the a posteriori error would
    depend on the estimate being computed.
    """
    x = np.asarray(x, dtype=float)
    _check_dims(state.w_hat, x)
    _check_finite(x, d)
    e = a_priori_error(state, x, d)
    gain = variable_step(x, config.mu, config.delta0) * np.sign(e)
    w_new = (
        state.w_hat
        + np.expand_dims(gain, -1) * x
        - config.penalty.term(state.w_hat, state.w_prev)
    )
    if not np.all(np.isfinite(w_new)):
        raise FloatingPointError("VSS-APSA update produced a non-finite estimate")
    return FilterState(w_new, state.w_hat)


def lms_update(state: FilterState, config: FilterConfig, x, d) -> FilterState:
    """Classical LMS step ``w += mu * e * x`` (comparison baseline only).

    Impulsive noise can drive the estimate arbitrarily far; nothing is
    clipped here.
    """
    x = np.asarray(x, dtype=float)
    _check_dims(state.w_hat, x)
    _check_finite(x, d)
    e = a_priori_error(state, x, d)
    with np.errstate(over="ignore", invalid="ignore"):
        w_new = state.w_hat + config.mu * np.expand_dims(e, -1) * x
    return FilterState(w_new, state.w_hat)


def penalty_curve(kind: PenaltyKind, grid) -> np.ndarray:
    """Unscaled penalty strength over ``grid``.

    The RL1 curve reweights each point by itself (``w_prev = w``).
    """
    grid = np.asarray(grid, dtype=float)
    return kind.strength(grid, grid)
