"""Alpha-stable noise: characteristic function and Chambers-Mallows-Stuck sampler.

The distribution is parameterized by ``(alpha, beta, gamma, delta)`` with
characteristic function::

    phi(t) = exp{ j*delta*t - gamma*|t|^alpha * [1 + j*beta*sgn(t)*S(t, alpha)] }

    S(t, alpha) = tan(alpha*pi/2)        alpha != 1
                = (2/pi) * log|t|        alpha == 1

``gamma`` is the dispersion (it plays the role a variance plays for the
Gaussian member: alpha=2 gives variance ``2*gamma``).  For alpha == 1 the
logarithmic term uses the ``2/pi`` factor of the standard stable law; any
other factor fails to be a characteristic function for large ``|beta|``.
With ``beta = 0`` the two branches coincide and only ``exp(-gamma|t|^alpha)``
remains.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "StableParams",
    "characteristic_fn",
    "empirical_cf",
    "sample",
    "sample_vector",
    "UNIFORMS_PER_VARIATE",
]

#: Each variate consumes exactly this many ``rng.random()`` doubles.
UNIFORMS_PER_VARIATE = 2


@dataclass(frozen=True)
class StableParams:
    """Parameters of an alpha-stable law.

    Parameters
    ----------
    alpha : float
        Characteristic exponent in (0, 2]; smaller means heavier tails.
    beta : float
        Symmetry parameter in [-1, 1].
    gamma : float
        Dispersion, > 0.
    delta : float
        Location.
    """

    alpha: float
    beta: float = 0.0
    gamma: float = 1.0
    delta: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if not 0.0 < self.alpha <= 2.0:
            raise ValueError(f"alpha must lie in (0, 2], got {self.alpha!r}")
        if not -1.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must lie in [-1, 1], got {self.beta!r}")
        if not self.gamma > 0.0:
            raise ValueError(f"gamma must be positive, got {self.gamma!r}")

    @property
    def scale(self) -> float:
        """Scale of the standard variate, ``gamma ** (1/alpha)``."""
        return self.gamma ** (1.0 / self.alpha)


def characteristic_fn(params: StableParams, t):
    """Evaluate the characteristic function at ``t`` (scalar or array).

    The ``alpha == 1`` branch at ``t == 0`` is the removable singularity of
    ``|t| log|t|`` and evaluates to exactly 1.
    """
    t_arr = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t_arr)):
        raise ValueError("t must be finite")
    a, b, g, d = params.alpha, params.beta, params.gamma, params.delta
    abs_t = np.abs(t_arr)
    if a == 1.0:
        with np.errstate(divide="ignore", invalid="ignore"):
            skew = np.where(abs_t > 0, (2.0 / np.pi) * np.log(abs_t), 0.0)
    else:
        skew = np.full_like(abs_t, math.tan(a * math.pi / 2.0))
    exponent = 1j * d * t_arr - g * abs_t**a * (1.0 + 1j * b * np.sign(t_arr) * skew)
    out = np.exp(exponent)
    return complex(out) if out.ndim == 0 else out


def empirical_cf(samples, t):
    """Sample mean of ``exp(j*t*X)`` for each ``t``."""
    x = np.asarray(samples, dtype=float)
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    return np.array([np.mean(np.exp(1j * tk * x)) for tk in t_arr])


def _standard_cms(alpha, beta, u):
    """Chambers-Mallows-Stuck transform of uniforms ``u[..., 0:2]``.

    Returns standard variates with characteristic function
    ``exp(-|t|^a [1 - j*beta*sgn(t)*tan(pi*a/2)])`` (alpha != 1) or
    ``exp(-|t| [1 + j*beta*(2/pi)*sgn(t)*log|t|])`` (alpha == 1).
    """
    v = np.pi * (u[..., 0] - 0.5)
    w = -np.log1p(-u[..., 1])
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        if alpha == 1.0:
            half_pi_bv = np.pi / 2.0 + beta * v
            return (2.0 / np.pi) * (
                half_pi_bv * np.tan(v)
                - beta * np.log((np.pi / 2.0) * w * np.cos(v) / half_pi_bv)
            )
        zeta = beta * math.tan(math.pi * alpha / 2.0)
        shift = math.atan(zeta) / alpha
        factor = (1.0 + zeta * zeta) ** (1.0 / (2.0 * alpha))
        av = alpha * (v + shift)
        return (
            factor
            * np.sin(av)
            / np.cos(v) ** (1.0 / alpha)
            * (np.cos(v - av) / w) ** ((1.0 - alpha) / alpha)
        )


def _transform(params: StableParams, u):
    a = params.alpha
    if a == 1.0:
        # characteristic_fn's "+j*beta" matches the alpha=1 CMS convention directly
        x = _standard_cms(1.0, params.beta, u)
        g = params.gamma
        return g * x + (2.0 / np.pi) * params.beta * g * math.log(g) + params.delta
    # characteristic_fn carries "+j*beta*tan" where CMS carries "-j*beta*tan"
    x = _standard_cms(a, -params.beta, u)
    return params.delta + params.scale * x


def sample_vector(params: StableParams, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` independent variates.

    Consumes ``2 * n`` doubles from ``rng`` in stream order, so the result
    equals ``n`` successive :func:`sample` calls on the same generator.
    No clipping is applied; extreme values are part of the model.
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    u = rng.random((n, UNIFORMS_PER_VARIATE))
    return _transform(params, u)


def sample(params: StableParams, rng: np.random.Generator) -> float:
    """Draw one variate (two uniforms consumed)."""
    return float(sample_vector(params, 1, rng)[0])
