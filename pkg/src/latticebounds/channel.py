"""AWGN noise-norm distribution, tail integrals, and unit-ball volumes.

The norm of an n-dimensional isotropic Gaussian vector with per-dimension
variance sigma^2 follows a (scaled) chi distribution.  Everything here comes
with a log-domain twin so that large-dimension exponent computations do not
underflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_LOG_PI = math.log(math.pi)


@dataclass(frozen=True)
class NoiseModel:
    """Isotropic Gaussian noise in dimension n with per-dimension variance sigma_sq."""

    n: int
    sigma_sq: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be >= 1")
        if not self.sigma_sq > 0:
            raise ValueError("sigma_sq must be positive")

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma_sq)


def unit_ball_volume_log(n: int) -> float:
    """ln V_n with V_n = pi^(n/2) / Gamma(n/2 + 1)."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    return 0.5 * n * _LOG_PI - math.lgamma(0.5 * n + 1.0)


def unit_ball_volume(n: int) -> float:
    """Volume of the n-dimensional unit ball."""
    return math.exp(unit_ball_volume_log(n))


def norm_pdf_log(model: NoiseModel, rho: float) -> float:
    """ln f(rho) for the noise-norm density

    f(rho) = rho^(n-1) exp(-rho^2 / (2 sigma^2)) / (2^(n/2-1) sigma^n Gamma(n/2)).
    """
    if rho < 0:
        raise ValueError("rho must be nonnegative")
    n, s2 = model.n, model.sigma_sq
    log_const = (0.5 * n - 1.0) * math.log(2.0) + 0.5 * n * math.log(s2) + math.lgamma(0.5 * n)
    if rho == 0.0:
        return -log_const if n == 1 else -math.inf
    return (n - 1) * math.log(rho) - rho * rho / (2.0 * s2) - log_const


def norm_pdf(model: NoiseModel, rho: float) -> float:
    """Density of the noise norm at rho."""
    return math.exp(norm_pdf_log(model, rho))


def norm_tail_log(model: NoiseModel, r: float) -> float:
    """ln Pr(||z|| > r) = ln Q(n/2, r^2 / (2 sigma^2))."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    return log_gammainc_upper(0.5 * model.n, r * r / (2.0 * model.sigma_sq))


def norm_tail(model: NoiseModel, r: float) -> float:
    """Pr(||z|| > r), the sphere-bound term at radius r."""
    return math.exp(norm_tail_log(model, r))


def log_gammainc_upper(a: float, x: float) -> float:
    """ln of the upper regularized incomplete gamma Q(a, x).

    Series for the lower function below the a+1 threshold, Lentz continued
    fraction above it; the continued fraction is assembled in the log domain
    so that Q far in the tail (Q ~ e^-700 and below) stays representable.
    """
    if a <= 0:
        raise ValueError("a must be positive")
    if x < 0:
        raise ValueError("x must be nonnegative")
    if x == 0.0:
        return 0.0
    log_pre = a * math.log(x) - x - math.lgamma(a)
    if x < a + 1.0:
        # P(a,x) via the standard series, then Q = 1 - P.
        term = 1.0 / a
        total = term
        ap = a
        for _ in range(1000):
            ap += 1.0
            term *= x / ap
            total += term
            if abs(term) < abs(total) * 1e-17:
                break
        p = math.exp(log_pre) * total
        if p >= 1.0:
            p = math.nextafter(1.0, 0.0)
        return math.log1p(-p)
    # Modified Lentz evaluation of the continued fraction for Q.
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b if b != 0.0 else 1.0 / tiny
    h = d
    for i in range(1, 1000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return log_pre + math.log(h)


def gammainc_upper(a: float, x: float) -> float:
    """Upper regularized incomplete gamma Q(a, x)."""
    return math.exp(log_gammainc_upper(a, x))
