"""ML decoding error bounds from the radius-r decomposition.

Every upper bound here splits the error event at a noise-norm radius r into a
union-bound term (UBT) over lattice points within reach and a sphere-bound
term (SBT), the probability that the noise norm exceeds r.  The bounds differ
in how the UBT is controlled:

* MHS        - ensemble average over all unit-density lattices.
* DMHS       - MHS with the density scaled by the max of the optimal
               smoothing profile of the given lattice's spectrum.
* eDMHS      - per-shell profile maxima against ball/shell overlap volumes.
* SUB        - closed-form pairwise capture probability per shell.
* UB / SLB   - union-bound and sphere-packing reference curves.

All radial integrals run through adaptive Gauss-Kronrod quadrature with the
integrand assembled in the log domain and exponentiated per node.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq, minimize_scalar
from scipy.special import erfc

from .alpha import alpha_opt, profile_max
from .channel import (
    NoiseModel,
    norm_pdf_log,
    norm_tail,
    unit_ball_volume,
    unit_ball_volume_log,
)
from .geometry import shell_ball_volume
from .spectrum import DistanceSpectrum, normalize

METHODS = ("MHS", "DMHS", "eDMHS", "SUB", "UB", "SLB")

_SLACK = 1e-12
_QUAD_EPSABS = 1e-12
_QUAD_EPSREL = 1e-10
_QUAD_FLAG_THRESHOLD = 1e-10


class SpectrumHorizonError(RuntimeError):
    """The optimal radius needs spectrum shells beyond the enumeration horizon.

    Continuing would silently undercount the union-bound term and the result
    would no longer be an upper bound, so the computation fails loudly.
    """


class IterationError(RuntimeError):
    """The radius/profile fixed-point iteration did not settle."""


@dataclass(frozen=True)
class BoundResult:
    """One evaluated bound; `total` is clamped to 1, ubt/sbt are raw."""

    method: str
    r_opt: float
    ubt: float
    sbt: float
    total: float
    diagnostics: dict = field(default_factory=dict)


def _result(method: str, r: float, ubt: float, sbt: float, diagnostics: dict) -> BoundResult:
    total = sbt if method == "SLB" else min(1.0, ubt + sbt)
    return BoundResult(
        method=method, r_opt=r, ubt=ubt, sbt=sbt, total=total, diagnostics=diagnostics
    )


def pairwise_bound(n: int, x_norm: float, rho: float) -> float:
    """Capture probability bound (1 - (x/2rho)^2)^((n-1)/2), zero past 2*rho."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    if x_norm < 0:
        raise ValueError("x_norm must be nonnegative")
    t = x_norm / (2.0 * rho)
    if t >= 1.0:
        return 0.0
    return (1.0 - t * t) ** (0.5 * (n - 1))


def _quad_exp(log_integrand, a: float, b: float, peak: float | None = None):
    """Integrate exp(log_integrand) over [a, b]; returns (value, abserr)."""
    if b <= a:
        return 0.0, 0.0

    def f(rho):
        v = log_integrand(rho)
        return math.exp(v) if v > -745.0 else 0.0

    points = None
    if peak is not None and a < peak < b:
        points = [peak]
    val, err = quad(
        f, a, b, epsabs=_QUAD_EPSABS, epsrel=_QUAD_EPSREL, limit=200, points=points
    )
    return val, err


def _chi_peak(model: NoiseModel) -> float:
    return model.sigma * math.sqrt(max(model.n - 1, 1))


# ---------------------------------------------------------------------------
# MHS and SLB (density-only forms)


def mhs_bound(n: int, log_density: float, model: NoiseModel) -> BoundResult:
    """Ensemble-average bound at the self-consistent radius (beta V_n)^(-1/n)."""
    if model.n != n:
        raise ValueError("model dimension mismatch")
    log_beta_vn = n * log_density + unit_ball_volume_log(n)
    r_star = math.exp(-log_beta_vn / n)

    def log_integrand(rho):
        if rho <= 0.0:
            return -math.inf
        return log_beta_vn + norm_pdf_log(model, rho) + n * math.log(rho)

    ubt, err = _quad_exp(log_integrand, 0.0, r_star, _chi_peak(model))
    sbt = norm_tail(model, r_star)
    diag = {"M_used": 0, "alpha_used": None, "iterations": 1, "quadrature_error_estimate": err}
    if err > _QUAD_FLAG_THRESHOLD:
        diag["quadrature_warning"] = True
    return _result("MHS", r_star, ubt, sbt, diag)


def sphere_lower_bound(n: int, log_density: float, model: NoiseModel) -> BoundResult:
    """Error probability of the ideal spherical decision region of covolume 1/beta."""
    if model.n != n:
        raise ValueError("model dimension mismatch")
    r_eff = math.exp(-(n * log_density + unit_ball_volume_log(n)) / n)
    sbt = norm_tail(model, r_eff)
    diag = {"M_used": 0, "alpha_used": None, "iterations": 1, "quadrature_error_estimate": 0.0}
    return _result("SLB", r_eff, 0.0, sbt, diag)


# ---------------------------------------------------------------------------
# DMHS


def _check_horizon(spec: DistanceSpectrum, r: float) -> None:
    if 2.0 * r > spec.complete_radius * (1 + _SLACK):
        raise SpectrumHorizonError(
            f"optimal radius needs shells up to {2 * r:.6g} but the spectrum is "
            f"complete only to {spec.complete_radius:.6g}; enumerate deeper"
        )


def dmhs_alpha(
    spec: DistanceSpectrum,
    *,
    fixed_lambda_max: float | None = None,
    max_iter: int = 100,
) -> tuple[float, float, int, int]:
    """Fixed point of the profile-level / radius iteration.

    Starts from r = (beta V_n)^(-1/n); each pass rebuilds the optimal profile
    over the shells within 2r (or over `fixed_lambda_max`, the suboptimal
    superset variant) and updates r = (alpha beta V_n)^(-1/n).  The radius is
    never taken below half the minimal distance, where the profile has no
    shells in scope.  Terminates on the first pass that leaves the level
    unchanged (1e-12 relative); the iteration is noise-independent.

    Returns (alpha, r, iterations, shells_in_scope).
    """
    if not spec.entries:
        raise ValueError("spectrum has no shells")
    snorm = normalize(spec)
    n = spec.n
    delta = spec.log_density
    scale = math.exp(delta)
    log_beta_vn = n * delta + unit_ball_volume_log(n)
    lambda1 = math.sqrt(spec.entries[0][0])

    if fixed_lambda_max is not None:
        base_profile = alpha_opt(snorm, fixed_lambda_max * scale)

    r = math.exp(-log_beta_vn / n)
    alpha_prev = None
    seen: list[float] = []
    for it in range(1, max_iter + 1):
        r_c = max(r, lambda1 / 2.0)
        _check_horizon(spec, r_c)
        if fixed_lambda_max is not None:
            if fixed_lambda_max < 2.0 * r_c * (1 - _SLACK):
                raise ValueError(
                    "fixed_lambda_max must cover the bound's reach "
                    f"2r = {2 * r_c:.6g} to keep the profile level valid"
                )
            profile = base_profile
        else:
            profile = alpha_opt(snorm, 2.0 * r_c * scale)
        alpha = profile_max(profile, 2.0 * r_c * scale)
        if alpha <= 0.0:
            raise IterationError("profile level collapsed to zero")
        if alpha_prev is not None and abs(alpha - alpha_prev) <= 1e-12 * alpha:
            m_used = len(profile.values)
            return alpha, r_c, it, m_used
        for old in seen[:-1]:
            if abs(alpha - old) <= 1e-12 * alpha:
                raise IterationError("radius/profile iteration entered a cycle")
        seen.append(alpha)
        alpha_prev = alpha
        r = math.exp(-(math.log(alpha) + log_beta_vn) / n)
    raise IterationError(f"no fixed point within {max_iter} iterations")


def _dmhs_eval(spec: DistanceSpectrum, model: NoiseModel, alpha: float, r: float):
    n = spec.n
    log_scale = math.log(alpha) + n * spec.log_density + unit_ball_volume_log(n)

    def log_integrand(rho):
        if rho <= 0.0:
            return -math.inf
        return log_scale + norm_pdf_log(model, rho) + n * math.log(rho)

    ubt, err = _quad_exp(log_integrand, 0.0, r, _chi_peak(model))
    sbt = norm_tail(model, r)
    return ubt, sbt, err


def dmhs_bound(
    spec: DistanceSpectrum,
    model: NoiseModel,
    *,
    fixed_lambda_max: float | None = None,
    max_iter: int = 100,
) -> BoundResult:
    """Spectrum-aware MHS: the density is scaled by the optimal profile level.

    The radius and the level are mutually dependent (the profile only sees
    shells within 2r), resolved by the fixed-point iteration of
    `dmhs_alpha`.  If the iteration cycles instead of settling, the bound is
    minimized exactly over the finitely many shell-count segments.
    """
    if model.n != spec.n:
        raise ValueError("model dimension mismatch")
    try:
        alpha, r, iterations, m_used = dmhs_alpha(
            spec, fixed_lambda_max=fixed_lambda_max, max_iter=max_iter
        )
        ubt, sbt, err = _dmhs_eval(spec, model, alpha, r)
    except IterationError:
        alpha, r, iterations, m_used, ubt, sbt, err = _dmhs_segment_min(spec, model)
    diag = {
        "M_used": m_used,
        "alpha_used": alpha,
        "iterations": iterations,
        "quadrature_error_estimate": err,
    }
    if err > _QUAD_FLAG_THRESHOLD:
        diag["quadrature_warning"] = True
    return _result("DMHS", r, ubt, sbt, diag)


def _dmhs_segment_min(spec: DistanceSpectrum, model: NoiseModel):
    """Exact minimization over shell-count segments (cycle fallback).

    Within a segment the level is constant, so the objective is unimodal with
    stationary radius (alpha beta V_n)^(-1/n) clamped into the segment.
    """
    snorm = normalize(spec)
    n = spec.n
    scale = math.exp(spec.log_density)
    log_beta_vn = n * spec.log_density + unit_ball_volume_log(n)
    norms = np.sqrt(spec.norms_sq)
    horizon = spec.complete_radius / 2.0
    best = None
    evals = 0
    for m in range(1, len(norms) + 1):
        seg_lo = norms[m - 1] / 2.0
        seg_hi = norms[m] / 2.0 if m < len(norms) else horizon
        seg_hi = min(seg_hi, horizon)
        if seg_lo > seg_hi:
            break
        profile = alpha_opt(snorm, norms[m - 1] * scale)
        alpha = profile.values[0]
        r_raw = math.exp(-(math.log(alpha) + log_beta_vn) / n)
        r_m = min(max(r_raw, seg_lo), seg_hi)
        ubt, sbt, err = _dmhs_eval(spec, model, alpha, r_m)
        evals += 1
        total = ubt + sbt
        if best is None or total < best[0]:
            best = (total, alpha, r_m, m, ubt, sbt, err, r_raw)
    if best is None:
        raise SpectrumHorizonError("no shell segment fits within the spectrum horizon")
    _, alpha, r_m, m, ubt, sbt, err, r_raw = best
    if r_m >= horizon * (1 - 1e-12) and r_raw > horizon * (1 + _SLACK):
        raise SpectrumHorizonError(
            "optimal radius lies beyond the spectrum horizon; enumerate deeper"
        )
    return alpha, r_m, evals, m, ubt, sbt, err


# ---------------------------------------------------------------------------
# eDMHS


def edmhs_bound(
    spec: DistanceSpectrum,
    model: NoiseModel,
    r_grid=None,
) -> BoundResult:
    """Per-shell refinement of DMHS using ball/shell overlap volumes.

    For a candidate radius r, every shell within 2r contributes its own
    profile level against the overlap h_j; the optimizer searches each
    shell-count segment (golden-section, since the term count is fixed per
    segment) plus the segment edges.  Supplying `r_grid` instead evaluates
    exactly those radii and takes the minimum.
    """
    if model.n != spec.n:
        raise ValueError("model dimension mismatch")
    if not spec.entries:
        raise ValueError("spectrum has no shells")
    snorm = normalize(spec)
    n = spec.n
    scale = math.exp(spec.log_density)
    beta = math.exp(n * spec.log_density)
    norms = np.sqrt(spec.norms_sq)
    horizon = spec.complete_radius / 2.0
    total_count = int(spec.counts.sum())

    profiles: dict[int, tuple] = {}

    def shell_data(m: int):
        if m not in profiles:
            profile = alpha_opt(snorm, norms[m - 1] * scale)
            profiles[m] = tuple(profile.values)
        return profiles[m]

    def scope(r: float) -> int:
        return int(np.sum(norms <= 2.0 * r * (1 + _SLACK)))

    evals = [0]

    def evaluate(r: float):
        m = scope(r)
        ubt = 0.0
        err_total = 0.0
        if m > 0:
            alphas = shell_data(m)
            for j in range(m):
                lo = norms[j] / 2.0
                if lo >= r:
                    continue
                lam_lo = norms[j - 1] if j else 0.0
                lam_hi = norms[j]

                def log_integrand(rho, lam_lo=lam_lo, lam_hi=lam_hi):
                    h = shell_ball_volume(n, lam_lo, lam_hi, rho)
                    if h <= 0.0:
                        return -math.inf
                    return norm_pdf_log(model, rho) + math.log(h)

                val, err = _quad_exp(log_integrand, lo, r, _chi_peak(model))
                ubt += beta * alphas[j] * val
                err_total += beta * alphas[j] * err
        sbt = norm_tail(model, r)
        evals[0] += 1
        return ubt, sbt, err_total

    candidates: list[float] = []
    if r_grid is not None:
        candidates = [float(r) for r in r_grid]
        for r in candidates:
            if r <= 0:
                raise ValueError("r_grid radii must be positive")
            if r > horizon * (1 + _SLACK):
                raise SpectrumHorizonError(
                    f"candidate radius {r:.6g} exceeds the spectrum horizon {horizon:.6g}"
                )
    else:
        edges = [x / 2.0 for x in norms if x / 2.0 <= horizon * (1 + _SLACK)]
        segments = []
        for k, lo in enumerate(edges):
            hi = edges[k + 1] if k + 1 < len(edges) else horizon
            if hi > lo:
                segments.append((lo, min(hi, horizon)))
        candidates.extend(edges)
        candidates.append(horizon)
        for lo, hi in segments:
            res = minimize_scalar(
                lambda r: sum(evaluate(r)[:2]),
                bounds=(lo, hi),
                method="bounded",
                options={"xatol": 1e-10},
            )
            candidates.append(float(res.x))

    best = None
    for r in candidates:
        ubt, sbt, err = evaluate(r)
        total = ubt + sbt
        if best is None or total < best[0] - 1e-18:
            best = (total, r, ubt, sbt, err)
    _, r_opt, ubt, sbt, err = best
    m_opt = scope(r_opt)
    if r_grid is None and r_opt >= horizon * (1 - 1e-9) and total_count > 1:
        probe = sum(evaluate(horizon * (1 - 1e-6))[:2])
        if probe > best[0]:
            raise SpectrumHorizonError(
                "bound still decreasing at the spectrum horizon; enumerate deeper"
            )
    alpha_used = max(shell_data(m_opt)) if m_opt else None
    diag = {
        "M_used": m_opt,
        "alpha_used": alpha_used,
        "iterations": evals[0],
        "quadrature_error_estimate": err,
    }
    if err > _QUAD_FLAG_THRESHOLD:
        diag["quadrature_warning"] = True
    return _result("eDMHS", r_opt, ubt, sbt, diag)


# ---------------------------------------------------------------------------
# SUB


def sub_bound(spec: DistanceSpectrum, model: NoiseModel) -> BoundResult:
    """Per-shell pairwise-probability bound with the sign-change radius search.

    The objective's r-derivative is f(r) * G(r) with
    G(r) = sum_j N_j (1 - (lambda_j / 2r)^2)^((n-1)/2) - 1, monotone
    non-decreasing and independent of the noise level; the optimizer collects
    the zero of G per shell-count segment plus all segment edges and keeps
    the best.
    """
    if model.n != spec.n:
        raise ValueError("model dimension mismatch")
    if not spec.entries:
        raise ValueError("spectrum has no shells")
    n = spec.n
    norms = np.sqrt(spec.norms_sq)
    counts = spec.counts
    horizon = spec.complete_radius / 2.0
    total_count = int(counts.sum())

    def g(r: float) -> float:
        total = -1.0
        for lam, cnt in zip(norms, counts):
            if lam >= 2.0 * r:
                break
            total += cnt * pairwise_bound(n, lam, r)
        return total

    def evaluate(r: float):
        ubt = 0.0
        err_total = 0.0
        for lam, cnt in zip(norms, counts):
            lo = lam / 2.0
            if lo >= r:
                break

            def log_integrand(rho, lam=lam):
                t = lam / (2.0 * rho)
                if t >= 1.0:
                    return -math.inf
                return norm_pdf_log(model, rho) + 0.5 * (n - 1) * math.log1p(-t * t)

            val, err = _quad_exp(log_integrand, lo, r, _chi_peak(model))
            ubt += cnt * val
            err_total += cnt * err
        sbt = norm_tail(model, r)
        return ubt, sbt, err_total

    edges = [x / 2.0 for x in norms if x / 2.0 <= horizon * (1 + _SLACK)]
    zero_crossings = []
    for k, lo in enumerate(edges):
        hi = edges[k + 1] if k + 1 < len(edges) else horizon
        hi = min(hi, horizon)
        if hi <= lo:
            continue
        g_lo, g_hi = g(lo * (1 + 1e-15)), g(hi)
        if g_lo < 0.0 <= g_hi:
            r_zc = brentq(g, lo, hi, xtol=1e-14, rtol=1e-14)
            zero_crossings.append(float(r_zc))

    candidates = edges + zero_crossings + [horizon]
    best = None
    for r in candidates:
        ubt, sbt, err = evaluate(r)
        total = ubt + sbt
        if best is None or total < best[0] - 1e-18:
            best = (total, r, ubt, sbt, err)
    _, r_opt, ubt, sbt, err = best

    degenerate = total_count <= 1
    if (
        not degenerate
        and r_opt >= horizon * (1 - 1e-9)
        and g(horizon) < 0.0
        and ubt < 1.0
    ):
        raise SpectrumHorizonError(
            "optimal radius sits at the spectrum horizon with the bound still "
            "decreasing; enumerate deeper"
        )
    m_used = int(np.sum(norms <= 2.0 * r_opt * (1 + _SLACK)))
    diag = {
        "M_used": m_used,
        "alpha_used": None,
        "iterations": len(candidates),
        "quadrature_error_estimate": err,
    }
    if err > _QUAD_FLAG_THRESHOLD:
        diag["quadrature_warning"] = True
    return _result("SUB", r_opt, ubt, sbt, diag)


# ---------------------------------------------------------------------------
# reference curves


def union_bound(spec: DistanceSpectrum, model: NoiseModel) -> BoundResult:
    """Plain union bound sum_j N_j Q(lambda_j / (2 sigma)) over all known shells."""
    if model.n != spec.n:
        raise ValueError("model dimension mismatch")
    sigma = model.sigma
    terms = [
        cnt * 0.5 * erfc(lam / (2.0 * sigma) / math.sqrt(2.0))
        for lam, cnt in zip(np.sqrt(spec.norms_sq), spec.counts)
    ]
    ubt = math.fsum(terms)
    diag = {
        "M_used": len(terms),
        "alpha_used": None,
        "iterations": 1,
        "quadrature_error_estimate": 0.0,
    }
    if terms and ubt > 0 and terms[-1] > 1e-3 * ubt:
        diag["truncated"] = True
        warnings.warn(
            "union bound visibly truncated by the spectrum horizon", stacklevel=2
        )
    return _result("UB", float("inf"), ubt, 0.0, diag)


# ---------------------------------------------------------------------------
# sweeps


def _bound_at(method: str, spec: DistanceSpectrum, model: NoiseModel) -> BoundResult:
    if method == "MHS":
        return mhs_bound(spec.n, spec.log_density, model)
    if method == "SLB":
        return sphere_lower_bound(spec.n, spec.log_density, model)
    if method == "DMHS":
        return dmhs_bound(spec, model)
    if method == "eDMHS":
        return edmhs_bound(spec, model)
    if method == "SUB":
        return sub_bound(spec, model)
    if method == "UB":
        return union_bound(spec, model)
    raise ValueError(f"unknown method {method!r}")


def sweep(
    method: str,
    spec: DistanceSpectrum,
    sigmas=None,
    vnr_dbs=None,
) -> list[BoundResult]:
    """Evaluate one bound across a sigma or VNR(dB) grid, in grid order.

    Failed points are reported in place with NaN fields and the error message
    in diagnostics; the sweep continues.
    """
    from .exponent import vnr_db as vnr_db_of, vnr_to_sigma

    if (sigmas is None) == (vnr_dbs is None):
        raise ValueError("provide exactly one of sigmas or vnr_dbs")
    if sigmas is None:
        sigmas = [vnr_to_sigma(10 ** (db / 10.0), spec.log_density) for db in vnr_dbs]
    results = []
    for sigma in sigmas:
        model = NoiseModel(n=spec.n, sigma_sq=float(sigma) ** 2)
        try:
            res = _bound_at(method, spec, model)
        except Exception as exc:  # marked, sweep continues
            res = BoundResult(
                method=method,
                r_opt=float("nan"),
                ubt=float("nan"),
                sbt=float("nan"),
                total=float("nan"),
                diagnostics={"error": str(exc)},
            )
        res.diagnostics["sigma"] = float(sigma)
        res.diagnostics["vnr_db"] = vnr_db_of(model, spec.log_density)
        results.append(res)
    return results


def write_sweep_csv(results, path) -> None:
    """Sweep rows as CSV with the fixed 17-significant-digit schema."""
    from ._format import fmt17

    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write("sigma,vnr_db,method,r_opt,ubt,sbt,total,M_used,alpha_used,iterations\n")
        for res in results:
            d = res.diagnostics
            f.write(
                ",".join(
                    [
                        fmt17(d.get("sigma")),
                        fmt17(d.get("vnr_db")),
                        res.method,
                        fmt17(res.r_opt),
                        fmt17(res.ubt),
                        fmt17(res.sbt),
                        fmt17(res.total),
                        str(d.get("M_used", "")),
                        fmt17(d.get("alpha_used")),
                        str(d.get("iterations", "")),
                    ]
                )
                + "\n"
            )
