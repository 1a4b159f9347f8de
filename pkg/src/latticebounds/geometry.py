"""Ball/shell intersection volumes in n dimensions.

The configuration throughout: an origin-centered ball B(0, R) intersected
with a ball B(z, rho) whose center sits at distance ||z|| = rho from the
origin, so the moving ball always passes through the origin and reaches out
to norm 2*rho.
"""

from __future__ import annotations

import math

from scipy.special import betainc

from .channel import unit_ball_volume


def _cap_fraction(n: int, r: float, a: float) -> float:
    """Fraction of an n-ball of radius r beyond a plane at signed distance a.

    a >= 0 puts the plane between center and boundary (a cap smaller than a
    half-ball); negative a gives the complementary piece.
    """
    if a >= r:
        return 0.0
    if a <= -r:
        return 1.0
    if a >= 0.0:
        t = 1.0 - (a / r) ** 2
        return 0.5 * float(betainc(0.5 * (n + 1), 0.5, t))
    return 1.0 - _cap_fraction(n, r, -a)


def lens_volume(n: int, R: float, rho: float) -> float:
    """Volume of B(0, R) ∩ B(z, rho) with ||z|| = rho.

    When R >= 2*rho the moving ball is contained and the result is V_n rho^n;
    otherwise the lens splits into two hyperspherical caps at the radical
    hyperplane x1 = R^2 / (2 rho).
    """
    if R <= 0.0 or rho <= 0.0:
        return 0.0
    vn = unit_ball_volume(n)
    if R >= 2.0 * rho:
        return vn * rho**n
    c = R * R / (2.0 * rho)
    part_fixed = vn * R**n * _cap_fraction(n, R, c)
    part_moving = vn * rho**n * _cap_fraction(n, rho, rho - c)
    return part_fixed + part_moving


def shell_ball_volume(n: int, lambda_lo: float, lambda_hi: float, rho: float) -> float:
    """Volume of the shell lambda_lo < ||x|| <= lambda_hi inside B(z, rho), ||z|| = rho."""
    if not 0.0 <= lambda_lo < lambda_hi:
        raise ValueError("need 0 <= lambda_lo < lambda_hi")
    v = lens_volume(n, lambda_hi, rho) - lens_volume(n, lambda_lo, rho)
    return max(v, 0.0)
