"""Random-coding exponent for unconstrained AWGN and its spectrum correction.

Rates are normalized log densities (NLD, nats per dimension).  The exponent
is positive below the critical density delta* and has three regimes: zero at
and above delta*, the curved random-coding branch between delta_cr and
delta*, and a straight line of slope -1 below delta_cr.

The straight-line constant: the curved branch meets delta_cr with value
(1 - ln 2) / 2 and slope -1, so the tangent line is
(delta* - delta) + ln(e/4) / 2.  The literature sometimes prints the
constant without the 1/2, which is discontinuous at delta_cr by ~0.19 nats;
that variant stays available behind `paper_literal_line`.

A specific lattice sequence pays a rate penalty nu[n] = ln(alpha[n]) / n,
where alpha[n] is the smoothing-profile level from the spectrum-aware bound;
its exponent is the random-coding exponent evaluated at delta + nu[n].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .alpha import alpha_opt, alpha_rng, profile_max
from .channel import NoiseModel, unit_ball_volume_log
from .spectrum import DistanceSpectrum, normalize

_LN2 = math.log(2.0)
# tangent-matching constant for the straight-line branch: ln(e/4) / 2
_LINE_CONST_CONTINUOUS = 0.5 * (1.0 - 2.0 * _LN2)
_LINE_CONST_LITERAL = 1.0 - 2.0 * _LN2


@dataclass(frozen=True)
class ExponentPoint:
    """One lattice of a sequence: its density, profile level, and exponent."""

    n: int
    delta: float
    alpha_n: float
    nu: float
    exponent: float

    def __post_init__(self):
        if self.alpha_n < 0:
            raise ValueError("alpha_n must be nonnegative")
        if abs(self.nu - math.log(self.alpha_n) / self.n) > 1e-12 * max(1.0, abs(self.nu)):
            raise ValueError("nu inconsistent with alpha_n")


class FirstShellGap(NamedTuple):
    gap: float
    rng_monotone: bool
    count_rate: float


def critical_rates(model: NoiseModel) -> tuple[float, float]:
    """(delta*, delta_cr) in nats per dimension; they differ by ln(2)/2."""
    delta_star = -0.5 * math.log(2.0 * math.pi * math.e * model.sigma_sq)
    return delta_star, delta_star - 0.5 * _LN2


def poltyrev_exponent(
    delta: float, model: NoiseModel, paper_literal_line: bool = False
) -> float:
    """Exponential decay rate of the ensemble error bound at NLD delta."""
    delta_star, delta_cr = critical_rates(model)
    if delta >= delta_star:
        return 0.0
    if delta >= delta_cr:
        gap = delta_star - delta
        return 0.5 * (math.exp(2.0 * gap) - 2.0 * gap - 1.0)
    const = _LINE_CONST_LITERAL if paper_literal_line else _LINE_CONST_CONTINUOUS
    return (delta_star - delta) + const


def vnr(model: NoiseModel, log_density: float) -> float:
    """Volume-to-noise ratio det^(2/n) / (2 pi e sigma^2); 1 at capacity."""
    return math.exp(-2.0 * log_density) / (2.0 * math.pi * math.e * model.sigma_sq)


def vnr_db(model: NoiseModel, log_density: float) -> float:
    return 10.0 * math.log10(vnr(model, log_density))


def vnr_to_sigma(mu: float, log_density: float) -> float:
    """Noise sigma at which the lattice of the given NLD sits at VNR mu."""
    if not mu > 0:
        raise ValueError("VNR must be positive")
    return math.sqrt(math.exp(-2.0 * log_density) / (2.0 * math.pi * math.e * mu))


def _alpha_for_policy(spec: DistanceSpectrum, r_policy) -> float:
    if r_policy == "dmhs":
        from .bounds import dmhs_alpha

        return dmhs_alpha(spec)[0]
    snorm = normalize(spec)
    if r_policy == "first-shell":
        lam1 = float(snorm.norms[0])
        return profile_max(alpha_opt(snorm, lam1), lam1)
    if isinstance(r_policy, (int, float)) and not isinstance(r_policy, bool):
        lam_max = float(r_policy)
        return profile_max(alpha_opt(snorm, lam_max), lam_max)
    raise ValueError("r_policy must be 'dmhs', 'first-shell', or a normalized radius")


def nu_series(
    specs: Iterable[DistanceSpectrum],
    model_or_sigma,
    r_policy="dmhs",
    paper_literal_line: bool = False,
) -> list[ExponentPoint]:
    """Rate penalties and exponents for a lattice sequence.

    `r_policy` selects how much spectrum feeds the profile level: "dmhs" runs
    the radius/profile fixed point (noise-independent), "first-shell" uses
    only the minimal-distance shell, and a float fixes the normalized radius.
    `model_or_sigma` provides the noise level at which exponents are read
    off; pass a float sigma or any NoiseModel (its dimension is ignored, the
    critical rates depend only on sigma).
    """
    sigma_sq = (
        model_or_sigma.sigma_sq
        if isinstance(model_or_sigma, NoiseModel)
        else float(model_or_sigma) ** 2
    )
    points = []
    for spec in specs:
        alpha_n = _alpha_for_policy(spec, r_policy)
        nu = math.log(alpha_n) / spec.n
        model = NoiseModel(n=spec.n, sigma_sq=sigma_sq)
        exponent = poltyrev_exponent(
            spec.log_density + nu, model, paper_literal_line=paper_literal_line
        )
        points.append(
            ExponentPoint(
                n=spec.n,
                delta=spec.log_density,
                alpha_n=alpha_n,
                nu=nu,
                exponent=exponent,
            )
        )
    return points


def gap_to_capacity_firstshell(spec: DistanceSpectrum) -> FirstShellGap:
    """First-shell gap (1/n) ln(N1 / (e^(n delta) V_n lambda1^n)) plus diagnostics.

    When the even-spread profile is monotonically non-increasing it already
    equals the optimal one, and this gap coincides with the sequence's rate
    penalty.  `count_rate` reports (1/n) ln N1, whose vanishing is necessary
    for the gap itself to vanish on minimal-distance-optimal sequences.
    """
    if not spec.entries:
        raise ValueError("spectrum has no shells")
    n = spec.n
    snorm = normalize(spec)
    n1 = int(snorm.counts[0])
    lam1_n = snorm.entries[0][0] ** (n / 2.0)
    gap = (math.log(n1) - unit_ball_volume_log(n) - math.log(lam1_n)) / n
    levels = alpha_rng(snorm, len(snorm.entries)).values
    monotone = all(
        levels[j + 1] <= levels[j] * (1 + 1e-12) for j in range(len(levels) - 1)
    )
    return FirstShellGap(gap=gap, rng_monotone=monotone, count_rate=math.log(n1) / n)


def write_nu_csv(points: Iterable[ExponentPoint], path) -> None:
    """Sequence points as CSV: n,delta,alpha_n,nu,exponent."""
    from ._format import fmt17

    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write("n,delta,alpha_n,nu,exponent\n")
        for p in points:
            f.write(
                f"{p.n},{fmt17(p.delta)},{fmt17(p.alpha_n)},{fmt17(p.nu)},{fmt17(p.exponent)}\n"
            )
