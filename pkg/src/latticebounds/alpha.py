"""Spectrum-smoothing profiles: the even-spread and min-max-optimal constructions.

A profile is a piecewise-constant bound on the smoothed spectral density
ratio N'(x) / (n V_n x^(n-1)) over the shells of a unit-density spectrum.
Spectral mass may only shift toward lower distances, so the cumulative mass
of a valid profile dominates the cumulative spectrum everywhere.

The min-max-optimal profile is the solution of a small LP and is computed by
a single water-filling pass: pour each shell's mass into its own shell and,
whenever the level reaches the running maximum, equalize over the lower
shells.  A direct LP solve is kept as a test oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channel import unit_ball_volume
from .spectrum import DistanceSpectrum

_SCOPE_SLACK = 1e-12


@dataclass(frozen=True)
class AlphaProfile:
    """Piecewise-constant profile: values[j] on shell (breakpoints[j], breakpoints[j+1]]."""

    n: int
    breakpoints: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        bps = tuple(float(b) for b in self.breakpoints)
        vals = tuple(float(v) for v in self.values)
        if len(bps) != len(vals) + 1:
            raise ValueError("need one more breakpoint than values")
        if not bps or bps[0] != 0.0:
            raise ValueError("breakpoints must start at 0")
        if any(b2 <= b1 for b1, b2 in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if any(v < 0 for v in vals):
            raise ValueError("profile values must be nonnegative")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", vals)

    def value_at(self, x: float) -> float:
        """Profile value at radius x (0 outside the covered shells)."""
        if x <= 0 or x > self.breakpoints[-1] * (1 + _SCOPE_SLACK):
            return 0.0
        for j in range(len(self.values)):
            if x <= self.breakpoints[j + 1] * (1 + _SCOPE_SLACK):
                return self.values[j]
        return self.values[-1]

    def shell_masses(self) -> list[float]:
        """Mass held by each shell: value * V_n * (hi^n - lo^n)."""
        vn = unit_ball_volume(self.n)
        out = []
        for j, v in enumerate(self.values):
            lo, hi = self.breakpoints[j], self.breakpoints[j + 1]
            out.append(v * vn * (hi**self.n - lo**self.n))
        return out


@dataclass(frozen=True)
class WaterFillAllocation:
    """Per-shell mass contributions N[j, i]: shell j's mass sent to shell i <= j."""

    M: int
    contributions: np.ndarray
    shell_mass: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.contributions, dtype=float)
        if c.shape != (self.M, self.M):
            raise ValueError("contributions must be M x M")
        if np.any(np.triu(c, k=1) != 0.0):
            raise ValueError("mass may only move toward lower distances")
        if np.any(c < 0):
            raise ValueError("contributions must be nonnegative")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "contributions", c)
        object.__setattr__(self, "shell_mass", np.asarray(self.shell_mass, dtype=float))


def _require_normalized(spec: DistanceSpectrum) -> None:
    if spec.log_density != 0.0:
        raise ValueError("alpha profiles are built on normalized (unit-density) spectra")


def _shell_scope(spec: DistanceSpectrum, lambda_max: float) -> int:
    """Number of complete shells with norm <= lambda_max."""
    norms = spec.norms
    return int(np.sum(norms <= lambda_max * (1 + _SCOPE_SLACK)))


def _shell_volumes_unit(spec: DistanceSpectrum, m: int) -> list[float]:
    """Shell volumes in units of V_n: lambda_j^n - lambda_{j-1}^n."""
    n = spec.n
    pows = [q ** (n / 2.0) for q, _ in spec.entries[:m]]
    return [p - (pows[j - 1] if j else 0.0) for j, p in enumerate(pows)]


def waterfill_levels(masses: Sequence, volumes: Sequence) -> list:
    """Equalized levels of the water-filling pour (generic numeric types).

    Shells are processed in increasing order; a new shell whose level reaches
    the running maximum of the group below it merges with it (ties merge, so
    the output is canonical).  The resulting levels are non-increasing.
    """
    groups: list[list] = []  # [volume, mass, shell_count]
    for m, v in zip(masses, volumes):
        groups.append([v, m, 1])
        while len(groups) > 1 and groups[-1][1] * groups[-2][0] >= groups[-2][1] * groups[-1][0]:
            v2, m2, c2 = groups.pop()
            groups[-1][0] += v2
            groups[-1][1] += m2
            groups[-1][2] += c2
    levels = []
    for v, m, c in groups:
        level = m / v
        levels.extend([level] * c)
    return levels


def alpha_rng(spec: DistanceSpectrum, M: int) -> AlphaProfile:
    """Even spread: shell j holds exactly its own spectral mass."""
    _require_normalized(spec)
    if not 1 <= M <= len(spec.entries):
        raise ValueError(f"M must be in 1..{len(spec.entries)}")
    vn = unit_ball_volume(spec.n)
    vols = _shell_volumes_unit(spec, M)
    counts = spec.counts[:M]
    values = tuple(int(c) / (vn * v) for c, v in zip(counts, vols))
    bps = (0.0,) + tuple(float(x) for x in spec.norms[:M])
    return AlphaProfile(n=spec.n, breakpoints=bps, values=values)


def alpha_opt(spec: DistanceSpectrum, lambda_max: float) -> AlphaProfile:
    """Min-max-optimal profile over the shells with norm <= lambda_max.

    Minimizes the largest shell level subject to mass moving only downward;
    shells past lambda_max do not participate.
    """
    _require_normalized(spec)
    m = _shell_scope(spec, lambda_max)
    if m == 0:
        raise ValueError("empty shell scope: lambda_max is below the first shell")
    vn = unit_ball_volume(spec.n)
    vols = _shell_volumes_unit(spec, m)
    levels = waterfill_levels([int(c) for c in spec.counts[:m]], vols)
    values = tuple(lv / vn for lv in levels)
    bps = (0.0,) + tuple(float(x) for x in spec.norms[:m])
    return AlphaProfile(n=spec.n, breakpoints=bps, values=values)


def waterfill_allocation(spec: DistanceSpectrum, lambda_max: float) -> WaterFillAllocation:
    """Explicit transport certificate for the water-filled profile.

    Within each equalized group the shells are filled greedily from the
    lowest; row j conserves the j'th spectral count (bit-exact when the row
    does not split, to subtraction rounding when it does).
    """
    profile = alpha_opt(spec, lambda_max)
    m = len(profile.values)
    vn = unit_ball_volume(spec.n)
    vols = _shell_volumes_unit(spec, m)
    counts = [int(c) for c in spec.counts[:m]]
    capacity = [profile.values[i] * vn * vols[i] for i in range(m)]
    contributions = np.zeros((m, m))
    filled = [0.0] * m
    i = 0
    for j in range(m):
        remaining = float(counts[j])
        while remaining > 0.0 and i < j:
            room = capacity[i] - filled[i]
            if room <= 1e-12 * max(capacity[i], 1.0):
                i += 1
                continue
            take = min(remaining, room)
            contributions[j, i] += take
            filled[i] += take
            remaining -= take
            if take == room:
                i += 1
        if remaining > 0.0:
            # close out the row exactly; buckets below j are full to float dust
            contributions[j, j] += remaining
            filled[j] += remaining
    shell_mass = contributions.sum(axis=0)
    return WaterFillAllocation(M=m, contributions=contributions, shell_mass=shell_mass)


def lp_oracle(spec: DistanceSpectrum, lambda_max: float) -> AlphaProfile:
    """Direct LP solve of the min-max program (test oracle, M <= 6 only).

    Variables are the per-shell contributions N[j, i] plus the level bound;
    scipy's HiGHS solves the exact program the water-filling pass optimizes.
    """
    from scipy.optimize import linprog

    _require_normalized(spec)
    m = _shell_scope(spec, lambda_max)
    if m == 0:
        raise ValueError("empty shell scope: lambda_max is below the first shell")
    if m > 6:
        raise ValueError("lp_oracle is test-scale only (M <= 6)")
    vn = unit_ball_volume(spec.n)
    vols = [vn * v for v in _shell_volumes_unit(spec, m)]
    counts = [int(c) for c in spec.counts[:m]]

    idx = {}
    for j in range(m):
        for i in range(j + 1):
            idx[(j, i)] = len(idx)
    nvar = len(idx) + 1
    alpha_ix = nvar - 1

    c = np.zeros(nvar)
    c[alpha_ix] = 1.0
    a_eq = np.zeros((m, nvar))
    b_eq = np.zeros(m)
    for j in range(m):
        for i in range(j + 1):
            a_eq[j, idx[(j, i)]] = 1.0
        b_eq[j] = counts[j]
    a_ub = np.zeros((m, nvar))
    for i in range(m):
        for j in range(i, m):
            a_ub[i, idx[(j, i)]] = 1.0
        a_ub[i, alpha_ix] = -vols[i]
    res = linprog(
        c,
        A_ub=a_ub,
        b_ub=np.zeros(m),
        A_eq=a_eq,
        b_eq=b_eq,
        bounds=[(0, None)] * nvar,
        method="highs",
    )
    if not res.success:
        raise RuntimeError(f"LP oracle failed: {res.message}")
    eps = np.zeros(m)
    for (j, i), k in idx.items():
        eps[i] += res.x[k]
    values = tuple(float(eps[i] / vols[i]) for i in range(m))
    bps = (0.0,) + tuple(float(x) for x in spec.norms[:m])
    return AlphaProfile(n=spec.n, breakpoints=bps, values=values)


def profile_max(profile: AlphaProfile, x_max: float) -> float:
    """Maximum profile value over shells intersecting (0, x_max]."""
    if x_max <= 0:
        return 0.0
    best = 0.0
    for j, v in enumerate(profile.values):
        if profile.breakpoints[j] < x_max:
            best = max(best, v)
        else:
            break
    return best


def cumulative_check(
    spec: DistanceSpectrum, profile: AlphaProfile, rtol: float = 1e-12
) -> bool:
    """True iff the profile's cumulative mass dominates the spectrum's.

    Both cumulatives are monotone between shell boundaries and the spectrum
    is atomic at them, so checking at every profile breakpoint suffices.
    The tiny rtol absorbs float rounding at points of exact equality.
    """
    _require_normalized(spec)
    m = len(profile.values)
    if m > len(spec.entries):
        raise ValueError("profile has more shells than the spectrum")
    norms = spec.norms
    for j in range(m):
        if abs(profile.breakpoints[j + 1] - norms[j]) > 1e-9 * norms[j]:
            raise ValueError("profile shells do not line up with the spectrum")
    counts = spec.counts
    masses = profile.shell_masses()
    cum_spec = 0
    cum_prof = 0.0
    for j in range(m):
        cum_spec += int(counts[j])
        cum_prof = math.fsum(masses[: j + 1])
        if cum_spec > cum_prof * (1 + rtol) + rtol:
            return False
    return True


def write_profile_csv(profile: AlphaProfile, path) -> None:
    """Profile shells as CSV: shell_index,lambda_lo,lambda_hi,alpha_value."""
    from ._format import fmt17

    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write("shell_index,lambda_lo,lambda_hi,alpha_value\n")
        for j, v in enumerate(profile.values):
            lo, hi = profile.breakpoints[j], profile.breakpoints[j + 1]
            f.write(f"{j + 1},{fmt17(lo)},{fmt17(hi)},{fmt17(v)}\n")
