"""Tour of lattice spectra: enumeration, normalization, and files.

Walks the built-in lattices, enumerates their short vectors, and shows the
unit-density rescaling that all smoothing profiles are built on.
"""

import math
import os
import tempfile

import latticebounds as lb

print("=== short-vector enumeration ===")
for name, radius in (("Z2", 2.3), ("D4", 2.1), ("E8", 1.5)):
    basis = lb.builtin_lattice(name)
    spec = lb.enumerate_spectrum(basis, radius)
    print(f"{name} up to radius {radius}:")
    for q, c in spec.entries:
        print(f"  squared norm {q:g}: {c} vectors")

print()
print("=== the kissing numbers of the dense families ===")
for name, radius in (("BW16", 2.05), ("Leech", 2.05)):
    spec = lb.enumerate_spectrum(lb.builtin_lattice(name), radius)
    q, c = spec.entries[0]
    print(f"{name}: minimal squared norm {q:g} with {c} minimal vectors")

print()
print("=== deeper shells come from the catalog ===")
for name in ("D4", "E8", "BW16", "Leech"):
    spec = lb.catalog_spectrum(name)
    print(f"{name}: n={spec.n}, delta={spec.log_density:+.5f}, "
          f"shells={[(q, c) for q, c in spec.entries]}")

print()
print("=== normalization to unit density ===")
d4 = lb.catalog_spectrum("D4")
nd4 = lb.normalize(d4)
print(f"D4 determinant 2 means delta = -ln(2)/4 = {d4.log_density:.6f}")
print(f"first norm sqrt(2) = {math.sqrt(d4.entries[0][0]):.6f} rescales to "
      f"2^(1/4) = {math.sqrt(nd4.entries[0][0]):.6f}")

print()
print("=== spectra round-trip through JSON ===")
with tempfile.TemporaryDirectory() as tmp:
    path = os.path.join(tmp, "d4.json")
    lb.save_spectrum(d4, path)
    back = lb.load_spectrum(path)
    print(f"saved and reloaded D4: identical = {back == d4}")
