import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

import latticebounds as lb

V2 = math.pi


def norm_z2(z2_spec):
    return lb.normalize(z2_spec)


# ---------------------------------------------------------------------------
# even-spread construction


def test_alpha_rng_z2_values(z2_spec):
    prof = lb.alpha_rng(norm_z2(z2_spec), 4)
    expected = [4 / V2, 4 / V2, 2 / V2, 8 / V2]
    assert list(prof.values) == pytest.approx(expected, rel=1e-12)


def test_alpha_rng_single_shell():
    spec = lb.NormalizedSpectrum(n=2, log_density=0.0, entries=((1.0, 1),), complete_radius=1.5)
    prof = lb.alpha_rng(spec, 1)
    assert prof.values[0] == pytest.approx(1 / math.pi, rel=1e-12)


def test_alpha_rng_d4_first_shell(d4_spec):
    prof = lb.alpha_rng(lb.normalize(d4_spec), 1)
    v4 = lb.unit_ball_volume(4)
    assert prof.values[0] == pytest.approx(24 / (v4 * 2.0), rel=1e-12)


def test_alpha_rng_bad_m(z2_spec):
    with pytest.raises(ValueError):
        lb.alpha_rng(norm_z2(z2_spec), 5)
    with pytest.raises(ValueError):
        lb.alpha_rng(norm_z2(z2_spec), 0)


def test_alpha_requires_normalized(d4_spec):
    with pytest.raises(ValueError):
        lb.alpha_rng(d4_spec, 1)
    with pytest.raises(ValueError):
        lb.alpha_opt(d4_spec, 2.0)


# ---------------------------------------------------------------------------
# water-filling optimum


def test_alpha_opt_z2_full_scope_is_flat(z2_spec):
    prof = lb.alpha_opt(norm_z2(z2_spec), math.sqrt(5.0))
    assert list(prof.values) == pytest.approx([4 / V2] * 4, abs=1e-12)


def test_alpha_opt_z2_three_shells(z2_spec):
    prof = lb.alpha_opt(norm_z2(z2_spec), 2.0)
    assert list(prof.values) == pytest.approx([4 / V2, 4 / V2, 2 / V2], rel=1e-12)


def test_alpha_opt_single_shell_equals_rng(z2_spec):
    zn = norm_z2(z2_spec)
    assert lb.alpha_opt(zn, 1.0).values == lb.alpha_rng(zn, 1).values


def test_alpha_opt_scope_truncates_inside_shell(z2_spec):
    prof = lb.alpha_opt(norm_z2(z2_spec), 1.9)  # strictly inside shell 3
    assert len(prof.values) == 2


def test_alpha_opt_empty_scope(z2_spec):
    with pytest.raises(ValueError):
        lb.alpha_opt(norm_z2(z2_spec), 0.5)


def test_waterfill_tie_merges():
    levels = lb.waterfill_levels([4, 4], [1.0, 1.0])
    assert levels == [4.0, 4.0]
    levels = lb.waterfill_levels([2, 6], [1.0, 1.0])
    assert levels == [4.0, 4.0]


def test_profile_max(z2_spec):
    prof = lb.alpha_opt(norm_z2(z2_spec), math.sqrt(5.0))
    assert lb.profile_max(prof, math.sqrt(5.0)) == pytest.approx(4 / V2, rel=1e-12)
    assert lb.profile_max(prof, 0.0) == 0.0
    assert lb.profile_max(prof, -1.0) == 0.0
    single = lb.alpha_opt(norm_z2(z2_spec), 1.0)
    assert lb.profile_max(single, 10.0) == single.values[0]


# ---------------------------------------------------------------------------
# LP oracle


def test_lp_oracle_z2_matches_waterfill(z2_spec):
    zn = norm_z2(z2_spec)
    for lam_max in (1.0, math.sqrt(2), 2.0, math.sqrt(5)):
        opt = lb.alpha_opt(zn, lam_max)
        oracle = lb.lp_oracle(zn, lam_max)
        assert max(opt.values) == pytest.approx(max(oracle.values), abs=1e-9)


def test_lp_oracle_rejects_large_m():
    entries = tuple((float(k), 2) for k in range(1, 9))
    spec = lb.NormalizedSpectrum(n=2, log_density=0.0, entries=entries, complete_radius=3.0)
    with pytest.raises(ValueError):
        lb.lp_oracle(spec, math.sqrt(8.0))


def test_trivial_allocation_is_feasible_and_dominated(z2_spec):
    # keeping every shell's mass in place is feasible, so the optimum is <= its max
    zn = norm_z2(z2_spec)
    rng_prof = lb.alpha_rng(zn, 4)
    opt_prof = lb.alpha_opt(zn, math.sqrt(5.0))
    assert max(opt_prof.values) <= max(rng_prof.values) + 1e-12


def test_average_lower_bounds_optimum(z2_spec):
    # any feasible profile's max level is >= total mass / total volume
    zn = norm_z2(z2_spec)
    opt = lb.alpha_opt(zn, math.sqrt(5.0))
    total_mass = sum(int(c) for _, c in zn.entries)
    total_vol = V2 * 5.0
    assert max(opt.values) >= total_mass / total_vol - 1e-12


@st.composite
def normalized_spectra(draw):
    m = draw(st.integers(min_value=1, max_value=6))
    n = draw(st.integers(min_value=1, max_value=8))
    gaps = draw(
        st.lists(
            st.floats(min_value=0.1, max_value=2.0, allow_nan=False),
            min_size=m,
            max_size=m,
        )
    )
    counts = draw(st.lists(st.integers(min_value=1, max_value=500), min_size=m, max_size=m))
    norms_sq = tuple(float(np.cumsum(gaps)[j]) for j in range(m))
    entries = tuple((q, c) for q, c in zip(norms_sq, counts))
    return lb.NormalizedSpectrum(
        n=n, log_density=0.0, entries=entries, complete_radius=math.sqrt(norms_sq[-1]) + 1.0
    )


@given(normalized_spectra())
def test_waterfill_matches_lp_and_prefix_formula(spec):
    lam_max = float(spec.norms[-1])
    opt = lb.alpha_opt(spec, lam_max)
    got = max(opt.values)
    # independent closed form: the optimum is the worst prefix density
    vn = lb.unit_ball_volume(spec.n)
    prefix = 0
    best = 0.0
    for j, (q, c) in enumerate(spec.entries):
        prefix += c
        best = max(best, prefix / (vn * q ** (spec.n / 2.0)))
    assert got == pytest.approx(best, rel=1e-11)
    oracle = lb.lp_oracle(spec, lam_max)
    assert got == pytest.approx(max(oracle.values), rel=1e-8, abs=1e-9)


@given(normalized_spectra())
def test_waterfill_invariants(spec):
    lam_max = float(spec.norms[-1])
    opt = lb.alpha_opt(spec, lam_max)
    rng_prof = lb.alpha_rng(spec, len(spec.entries))
    # optimum never exceeds the even spread's max
    assert max(opt.values) <= max(rng_prof.values) * (1 + 1e-12)
    # equalized levels never increase with radius
    assert all(
        opt.values[j + 1] <= opt.values[j] * (1 + 1e-12)
        for j in range(len(opt.values) - 1)
    )
    # both constructions satisfy the smoothing constraint
    assert lb.cumulative_check(spec, opt)
    assert lb.cumulative_check(spec, rng_prof)
    # mass conservation
    total = sum(int(c) for _, c in spec.entries)
    assert math.fsum(opt.shell_masses()) == pytest.approx(total, rel=1e-12)
    assert math.fsum(rng_prof.shell_masses()) == pytest.approx(total, rel=1e-12)


def test_cumulative_check_rejects_deficit(z2_spec):
    zn = norm_z2(z2_spec)
    prof = lb.alpha_rng(zn, 4)
    vn = lb.unit_ball_volume(2)
    shaved = lb.AlphaProfile(
        n=2,
        breakpoints=prof.breakpoints,
        values=(prof.values[0] - 1.0 / (vn * 1.0),) + prof.values[1:],
    )
    assert not lb.cumulative_check(zn, shaved)


def test_cumulative_check_misaligned_profile(z2_spec):
    zn = norm_z2(z2_spec)
    prof = lb.AlphaProfile(n=2, breakpoints=(0.0, 1.5), values=(10.0,))
    with pytest.raises(ValueError):
        lb.cumulative_check(zn, prof)


def test_exact_rational_waterfill_z2(z2_spec):
    # unit-density integral spectrum: shell volumes per V_n are integers
    zn = norm_z2(z2_spec)
    masses = [int(c) for _, c in zn.entries]
    pows = [Fraction(int(q)) for q, _ in zn.entries]  # q^(n/2) with n=2
    vols = [p - (pows[j - 1] if j else Fraction(0)) for j, p in enumerate(pows)]
    levels = lb.waterfill_levels(masses, vols)
    assert all(isinstance(lv, Fraction) for lv in levels)
    cum_mass = Fraction(0)
    cum_profile = Fraction(0)
    for m, v, lv in zip(masses, vols, levels):
        cum_mass += m
        cum_profile += lv * v
        assert cum_mass <= cum_profile
    assert levels == [4, 4, 4, 4]  # flat at 4 (per V_2 unit) for the Z2 spectrum


# ---------------------------------------------------------------------------
# allocation certificate


def test_allocation_rows_and_support(z2_spec):
    zn = norm_z2(z2_spec)
    alloc = lb.waterfill_allocation(zn, math.sqrt(5.0))
    assert alloc.M == 4
    counts = [int(c) for _, c in zn.entries]
    for j in range(4):
        assert math.fsum(alloc.contributions[j, : j + 1]) == pytest.approx(
            counts[j], rel=1e-15, abs=0.0
        )
        assert np.all(alloc.contributions[j, j + 1 :] == 0.0)
    # shell masses realize the equalized levels
    prof = lb.alpha_opt(zn, math.sqrt(5.0))
    vn = lb.unit_ball_volume(2)
    vols = [vn * (prof.breakpoints[i + 1] ** 2 - prof.breakpoints[i] ** 2) for i in range(4)]
    expected = [prof.values[i] * vols[i] for i in range(4)]
    assert list(alloc.shell_mass) == pytest.approx(expected, rel=1e-9)


@given(normalized_spectra())
def test_allocation_row_sums_exact(spec):
    lam_max = float(spec.norms[-1])
    alloc = lb.waterfill_allocation(spec, lam_max)
    counts = [int(c) for _, c in spec.entries]
    for j in range(alloc.M):
        # unsplit rows are bit-exact; split rows only carry subtraction rounding
        assert math.fsum(alloc.contributions[j]) == pytest.approx(
            counts[j], rel=1e-15, abs=0.0
        )


# ---------------------------------------------------------------------------
# CSV export


def test_profile_csv(tmp_path, z2_spec):
    prof = lb.alpha_opt(norm_z2(z2_spec), 2.0)
    path = tmp_path / "profile.csv"
    lb.write_profile_csv(prof, path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "shell_index,lambda_lo,lambda_hi,alpha_value"
    assert len(lines) == 4
    first = lines[1].split(",")
    assert first[0] == "1"
    assert float(first[3]) == pytest.approx(4 / V2, rel=1e-15)
