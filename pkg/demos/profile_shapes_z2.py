"""Smoothing profiles for the square lattice Z^2.

The spectrum is an impulse train; spreading each shell's mass evenly gives
the staircase profile, and letting mass flow toward smaller radii gives the
min-max-optimal (water-filled) profile.  For Z^2 up to sqrt(5) the optimal
profile is exactly flat at 4/pi.

Writes profile CSVs next to this script and, when matplotlib is installed,
a step plot of both constructions.
"""

import math
import os

import latticebounds as lb

here = os.path.dirname(os.path.abspath(__file__))
out_dir = os.path.join(here, "output")
os.makedirs(out_dir, exist_ok=True)

spec = lb.enumerate_spectrum(lb.builtin_lattice("Z2"), 2.3)
snorm = lb.normalize(spec)
print("Z^2 shells (squared norm, count):", list(spec.entries))

rng_prof = lb.alpha_rng(snorm, 4)
opt_prof = lb.alpha_opt(snorm, math.sqrt(5.0))

print("\neven-spread levels (per shell):")
for j, v in enumerate(rng_prof.values):
    lo, hi = rng_prof.breakpoints[j], rng_prof.breakpoints[j + 1]
    print(f"  ({lo:.4f}, {hi:.4f}] -> {v:.6f}")

print("\nwater-filled levels:")
for j, v in enumerate(opt_prof.values):
    lo, hi = opt_prof.breakpoints[j], opt_prof.breakpoints[j + 1]
    print(f"  ({lo:.4f}, {hi:.4f}] -> {v:.6f}")
print(f"\nflat optimum 4/pi = {4 / math.pi:.6f}: total mass 20 spread over a "
      f"disk of area 5*pi equalizes exactly")

print(f"max even-spread level : {max(rng_prof.values):.6f}")
print(f"max water-fill level  : {max(opt_prof.values):.6f} (never larger)")
print(f"smoothing constraint holds for both: "
      f"{lb.cumulative_check(snorm, rng_prof)}, {lb.cumulative_check(snorm, opt_prof)}")

for tag, prof in (("rng", rng_prof), ("opt", opt_prof)):
    path = os.path.join(out_dir, f"z2_alpha_{tag}.csv")
    lb.write_profile_csv(prof, path)
    print(f"wrote {path}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not installed; skipping the plot")
else:
    fig, ax = plt.subplots(figsize=(6, 4))
    for tag, prof, style in (("even spread", rng_prof, "C0-"),
                             ("water-filled", opt_prof, "C1--")):
        xs, ys = [], []
        for j, v in enumerate(prof.values):
            xs += [prof.breakpoints[j], prof.breakpoints[j + 1]]
            ys += [v, v]
        ax.plot(xs, ys, style, drawstyle="default", label=tag)
    for q, c in snorm.entries:
        ax.axvline(math.sqrt(q), color="0.85", zorder=0)
    ax.set_xlabel("normalized radius")
    ax.set_ylabel("profile level")
    ax.set_title("Z$^2$ smoothing profiles")
    ax.legend()
    path = os.path.join(out_dir, "z2_profiles.png")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    print(f"wrote {path}")
