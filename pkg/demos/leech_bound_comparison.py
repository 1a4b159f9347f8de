"""Error-probability bounds for the Leech lattice across the VNR range.

Sweeps the union bound, the ensemble-average bound, the two spectrum-aware
bounds and the sphere lower bound over 0..6 dB of volume-to-noise ratio,
using the first three spectral shells.  Near capacity (0 dB) the
spectrum-aware bounds are far below the union bound; the curves cross as the
channel improves.

Writes the sweep CSV and, when matplotlib is installed, the comparison plot.
"""

import os
import warnings

import numpy as np

import latticebounds as lb

here = os.path.dirname(os.path.abspath(__file__))
out_dir = os.path.join(here, "output")
os.makedirs(out_dir, exist_ok=True)

spec = lb.catalog_spectrum("Leech")
print(f"Leech: n={spec.n}, unit determinant, shells {[(q, c) for q, c in spec.entries]}")

dbs = list(np.linspace(0.0, 6.0, 50))
methods = ("UB", "MHS", "DMHS", "SUB", "SLB")
results = {}
with warnings.catch_warnings():
    warnings.simplefilter("ignore")  # the union bound reports visible truncation
    for method in methods:
        results[method] = lb.sweep(method, spec, vnr_dbs=dbs)

rows = [r for method in methods for r in results[method]]
path = os.path.join(out_dir, "leech_sweep.csv")
lb.write_sweep_csv(rows, path)
print(f"wrote {path}")

print("\n VNR(dB)     UB        MHS       DMHS      SUB       SLB")
for k in range(0, 50, 7):
    vals = " ".join(f"{results[m][k].total:9.3g}" for m in methods)
    print(f"  {dbs[k]:5.2f}  {vals}")

alpha = results["DMHS"][0].diagnostics["alpha_used"]
print(f"\nthe DMHS profile level for Leech saturates at {alpha:.4f} "
      f"(first shell dominated), a rate penalty of ln(alpha)/24 = "
      f"{np.log(alpha) / 24:.5f} nats/dim")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not installed; skipping the plot")
else:
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    for method, style in zip(methods, ("k-", "C2-.", "C0-", "C1--", "k:")):
        ax.semilogy(dbs, [r.total for r in results[method]], style, label=method)
    ax.set_xlabel("VNR (dB)")
    ax.set_ylabel("error probability bound")
    ax.set_title("Leech lattice: ML decoding error bounds")
    ax.set_ylim(1e-12, 1.5)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    path = os.path.join(out_dir, "leech_bounds.png")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    print(f"wrote {path}")
