"""Lattice bases, distance spectra, enumeration, and spectrum files.

Spectra store squared norms so that the integral lattice families (Z^n, D4,
E8, BW16, Leech) stay exact; enumeration groups norms exactly whenever the
Gram matrix snaps to a small rational denominator and falls back to a 1e-9
relative tolerance otherwise.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np


class EnumerationOverflowError(RuntimeError):
    """Raised when short-vector enumeration would exceed the vector cap."""


class SpectrumFormatError(ValueError):
    """Raised for malformed spectrum files."""


_MAX_ENUM_DIM = 24
_GRAM_SNAP_DENOMS = (1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 64)


@dataclass(frozen=True)
class LatticeBasis:
    """A full-rank lattice basis; columns of `generator` are the basis vectors."""

    name: str
    n: int
    generator: np.ndarray
    log_det: float

    def __post_init__(self):
        gen = np.asarray(self.generator, dtype=float)
        if gen.shape != (self.n, self.n):
            raise ValueError(f"generator must be {self.n}x{self.n}")
        sign, logabsdet = np.linalg.slogdet(gen)
        if sign == 0 or not np.isfinite(logabsdet):
            raise ValueError("generator is singular")
        if abs(logabsdet - self.log_det) > 1e-9 * max(1.0, abs(self.log_det)):
            raise ValueError(
                f"log_det {self.log_det} inconsistent with generator ({logabsdet})"
            )
        gen = gen.copy()
        gen.setflags(write=False)
        object.__setattr__(self, "generator", gen)


@dataclass(frozen=True)
class DistanceSpectrum:
    """Ordered unique squared norms with multiplicities, plus the density.

    The origin is implicit and never stored; `complete_radius` is the
    enumeration horizon: every lattice norm <= complete_radius appears.
    """

    n: int
    log_density: float
    entries: tuple[tuple[float, int], ...]
    complete_radius: float
    name: str = ""

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be >= 1")
        if not self.complete_radius > 0:
            raise ValueError("complete_radius must be positive")
        if not math.isfinite(self.log_density):
            raise ValueError("log_density must be finite")
        entries = tuple((float(q), int(c)) for q, c in self.entries)
        prev = 0.0
        for q, c in entries:
            if q <= prev:
                raise ValueError("squared norms must be strictly increasing and positive")
            if c < 1:
                raise ValueError("counts must be >= 1")
            prev = q
        object.__setattr__(self, "entries", entries)

    @property
    def norms_sq(self) -> np.ndarray:
        return np.array([q for q, _ in self.entries])

    @property
    def norms(self) -> np.ndarray:
        return np.sqrt(self.norms_sq)

    @property
    def counts(self) -> np.ndarray:
        return np.array([c for _, c in self.entries], dtype=np.int64)


@dataclass(frozen=True)
class NormalizedSpectrum(DistanceSpectrum):
    """Spectrum of the unit-density rescaling; log_density is exactly zero."""

    def __post_init__(self):
        super().__post_init__()
        if self.log_density != 0.0:
            raise ValueError("normalized spectrum must have log_density == 0")


def normalize(spec: DistanceSpectrum) -> NormalizedSpectrum:
    """Rescale to unit density: each norm becomes norm * exp(log_density)."""
    scale_sq = math.exp(2.0 * spec.log_density)
    entries = tuple((q * scale_sq, c) for q, c in spec.entries)
    return NormalizedSpectrum(
        n=spec.n,
        log_density=0.0,
        entries=entries,
        complete_radius=spec.complete_radius * math.exp(spec.log_density),
        name=spec.name,
    )


# ---------------------------------------------------------------------------
# built-in bases

# Integer generator rows frozen from an LLL-reduced basis of the lattice
# spanned by {2g : g in Golay[24,12]} + {(4,4,0,...) pairs} + (-3,1,...,1);
# the true lattice is rows / sqrt(8) (determinant 1, minimum squared norm 4,
# kissing number 196560).
_LEECH_ROWS = (
    (4, 4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (4, 0, 4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (0, -4, -4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (4, 0, 0, 4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (4, 0, 0, 0, 4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (2, 2, 2, 2, 2, 0, 0, 2, 0, 0, 2, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (2, 2, 2, -2, -2, 0, 0, 2, 0, 0, -2, 0, -2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (2, 2, 2, -2, -2, 0, 0, -2, 0, 0, 2, 0, -2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (4, 0, 0, 0, 0, 4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (0, 2, 2, 2, 2, 2, 0, 0, 2, 0, 0, 2, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (0, -2, 2, -2, -2, -2, 0, 0, 2, 0, 0, -2, 0, -2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (0, -2, 2, -2, -2, -2, 0, 0, -2, 0, 0, 2, 0, -2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (-2, -2, 2, 0, 0, -2, 2, 0, 0, 0, 0, 0, 2, -2, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0),
    (-2, -2, -2, 0, 0, 2, 2, 0, 0, 0, 0, 0, 2, 2, 0, -2, 0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 2, 2, 2, 2, 2, 0, 0, 2, 0, 0, 2, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (-2, 0, 2, 2, 0, -2, 0, 0, 0, -2, 2, 0, 0, -2, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0),
    (0, -2, 2, 2, 0, 0, 2, 2, 0, 0, 0, 0, 0, 2, -2, 0, 2, 0, 0, 0, 0, 0, 0, 0),
    (-2, 0, 0, 2, 2, 2, 0, 2, 0, 2, 0, -2, 0, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0),
    (2, -2, 0, -2, 0, 2, 0, 0, 0, 0, -2, 2, 0, 0, 0, -2, 0, 0, 2, 0, 0, 0, 0, 0),
    (2, 0, 0, 2, 2, 2, 0, 0, 2, 0, -2, 0, 0, 0, -2, 0, 0, 0, 0, 2, 0, 0, 0, 0),
    (0, -2, -2, -2, 0, 0, 0, 0, 0, 0, 0, -2, 2, 0, -2, -2, 0, 0, 0, 0, 2, 0, 0, 0),
    (-1, -3, -1, 1, -1, -1, 1, 1, -1, 1, 1, 1, -1, 1, 1, 1, -1, -1, 1, 1, 1, 1, 1, 1),
    (3, 1, 1, 1, 1, -1, 1, -1, 1, 1, -1, 1, -1, -1, 1, 1, 1, -1, -1, -1, -1, 1, -1, -1),
    (3, -1, 1, -1, 1, -1, -1, 1, 1, 1, 1, 1, -1, -1, 1, 1, 1, -1, 1, -1, -1, -1, 1, -1),
)

# Frozen from an LLL-reduced basis of Construction B on the [16,5,8]
# first-order Reed-Muller code; the lattice is rows / sqrt(2) (determinant 16,
# minimum squared norm 4, kissing number 4320).
_BW16_ROWS = (
    (2, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (2, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (0, -2, -2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (2, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (2, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0),
    (1, 1, 1, -1, -1, 1, -1, -1, 0, 0, 0, 0, 0, 0, 0, 0),
    (1, 1, 1, -1, -1, -1, 1, -1, 0, 0, 0, 0, 0, 0, 0, 0),
    (2, 0, 0, 0, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0),
    (1, 1, 1, 1, 0, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0),
    (1, 1, 1, -1, 0, 0, 0, 0, -1, 1, -1, -1, 0, 0, 0, 0),
    (1, 1, 1, -1, 0, 0, 0, 0, -1, -1, 1, -1, 0, 0, 0, 0),
    (1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0),
    (-1, 0, 1, 0, 1, 0, 1, 0, -1, 0, -1, 0, -1, 0, 1, 0),
    (0, 1, 1, 0, -1, 0, 0, 1, -1, 0, 0, -1, 0, -1, 1, 0),
    (0, 1, 0, 1, -1, 0, -1, 0, 1, 0, 1, 0, 0, 1, 0, 1),
)

_E8_ROWS = (
    (2, 0, 0, 0, 0, 0, 0, 0),
    (-1, 1, 0, 0, 0, 0, 0, 0),
    (0, -1, 1, 0, 0, 0, 0, 0),
    (0, 0, -1, 1, 0, 0, 0, 0),
    (0, 0, 0, -1, 1, 0, 0, 0),
    (0, 0, 0, 0, -1, 1, 0, 0),
    (0, 0, 0, 0, 0, -1, 1, 0),
    (0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5),
)

_D4_ROWS = (
    (1, -1, 0, 0),
    (0, 1, -1, 0),
    (0, 0, 1, -1),
    (0, 0, 1, 1),
)


def builtin_lattice(name: str) -> LatticeBasis:
    """Standard generator for Z1..Z24, D4, E8, BW16, or Leech."""
    if name.startswith("Z"):
        try:
            n = int(name[1:])
        except ValueError:
            n = 0
        if 1 <= n <= 24:
            return LatticeBasis(name=name, n=n, generator=np.eye(n), log_det=0.0)
    if name == "D4":
        gen = np.array(_D4_ROWS, dtype=float).T
        return LatticeBasis(name="D4", n=4, generator=gen, log_det=math.log(2.0))
    if name == "E8":
        gen = np.array(_E8_ROWS, dtype=float).T
        return LatticeBasis(name="E8", n=8, generator=gen, log_det=0.0)
    if name == "BW16":
        gen = np.array(_BW16_ROWS, dtype=float).T / math.sqrt(2.0)
        return LatticeBasis(name="BW16", n=16, generator=gen, log_det=math.log(16.0))
    if name == "Leech":
        gen = np.array(_LEECH_ROWS, dtype=float).T / math.sqrt(8.0)
        return LatticeBasis(name="Leech", n=24, generator=gen, log_det=0.0)
    raise ValueError(f"unknown lattice {name!r}")


# Published theta-series coefficients (first shells, squared norms).  BW16 and
# Leech are impractical to enumerate past the first shell at test scale, so
# bound computations read these catalog spectra instead.
_CATALOG = {
    "D4": (math.log(2.0), ((2, 24), (4, 24), (6, 96), (8, 24), (10, 144))),
    "E8": (0.0, ((2, 240), (4, 2160), (6, 6720), (8, 17520), (10, 30240))),
    "BW16": (math.log(16.0), ((4, 4320), (6, 61440), (8, 522720))),
    "Leech": (0.0, ((4, 196560), (6, 16773120), (8, 398034000))),
}


def catalog_spectrum(name: str, shells: int | None = None) -> DistanceSpectrum:
    """Cataloged distance spectrum for D4, E8, BW16, or Leech.

    `shells` truncates to the first few entries; the completeness horizon
    shrinks accordingly.
    """
    if name not in _CATALOG:
        raise ValueError(f"no catalog spectrum for {name!r}")
    log_det, entries = _CATALOG[name]
    if shells is not None:
        if not 1 <= shells <= len(entries):
            raise ValueError(f"{name} catalog has {len(entries)} shells")
        entries = entries[:shells]
    n = builtin_lattice(name).n
    return DistanceSpectrum(
        n=n,
        log_density=-log_det / n,
        entries=tuple((float(q), c) for q, c in entries),
        complete_radius=math.sqrt(entries[-1][0]),
        name=name,
    )


# ---------------------------------------------------------------------------
# enumeration


def _snap_gram(gram: np.ndarray):
    """Return (integer gram, denominator) when q*gram is integral, else None."""
    for q in _GRAM_SNAP_DENOMS:
        scaled = gram * q
        rounded = np.rint(scaled)
        if np.max(np.abs(scaled - rounded)) <= 1e-9:
            return rounded.astype(np.int64), q
    return None


def enumerate_spectrum(
    basis: LatticeBasis, radius: float, max_vectors: int = 10**8
) -> DistanceSpectrum:
    """All nonzero lattice norms <= radius with exact multiplicities.

    Layered Fincke-Pohst over the Cholesky factor of the Gram matrix; the
    whole candidate tree is expanded one coordinate at a time as numpy
    arrays, so aggregation is order-independent and deterministic.
    """
    if not radius > 0:
        raise ValueError("radius must be positive")
    n = basis.n
    if n > _MAX_ENUM_DIM:
        raise ValueError(f"enumeration limited to n <= {_MAX_ENUM_DIM}")
    gen = basis.generator
    gram = gen.T @ gen
    snapped = _snap_gram(gram)
    try:
        chol = np.linalg.cholesky(gram)
    except np.linalg.LinAlgError as exc:
        raise ValueError("generator is singular or indefinite") from exc
    R = chol.T
    radius_sq = radius * radius
    budget = radius_sq * (1.0 + 1e-12)

    U = np.zeros((1, 0), dtype=np.int64)
    T = np.zeros(1)
    for i in range(n - 1, -1, -1):
        c = U @ R[i, i + 1 :] if U.shape[1] else np.zeros(len(U))
        w = np.sqrt(np.maximum(budget - T, 0.0))
        lo = np.ceil((-w - c) / R[i, i] - 1e-12).astype(np.int64)
        hi = np.floor((w - c) / R[i, i] + 1e-12).astype(np.int64)
        widths = np.maximum(hi - lo + 1, 0)
        total = int(widths.sum())
        if total > max_vectors:
            raise EnumerationOverflowError(
                f"enumeration would visit {total} candidates (cap {max_vectors})"
            )
        parent = np.repeat(np.arange(len(U)), widths)
        offsets = np.arange(total) - np.repeat(np.cumsum(widths) - widths, widths)
        u_i = lo[parent] + offsets
        U = np.hstack([u_i[:, None], U[parent]])
        T = T[parent] + (R[i, i] * u_i + c[parent]) ** 2
        keep = T <= budget
        U, T = U[keep], T[keep]

    nonzero = np.any(U != 0, axis=1)
    U = U[nonzero]
    if snapped is not None:
        igram, q = snapped
        numer = np.einsum("ij,jk,ik->i", U, igram, U)
        numer = numer[numer <= radius_sq * q * (1 + 1e-12)]
        vals, cnts = np.unique(numer, return_counts=True)
        entries = tuple((float(p) / q, int(c)) for p, c in zip(vals, cnts))
    else:
        norms = T[nonzero]
        norms = np.sort(norms[norms <= radius_sq * (1 + 1e-12)])
        entries = []
        for v in norms:
            if entries and v <= entries[-1][0] * (1 + 1e-9) + 1e-12:
                entries[-1][1] += 1
            else:
                entries.append([float(v), 1])
        entries = tuple((q, c) for q, c in entries)
    return DistanceSpectrum(
        n=n,
        log_density=-basis.log_det / n,
        entries=entries,
        complete_radius=radius,
        name=basis.name,
    )


# ---------------------------------------------------------------------------
# spectrum files


def save_spectrum(spec: DistanceSpectrum, path) -> None:
    """Write the spectrum JSON; entries ascending, no NaN/Inf."""
    payload = {
        "name": spec.name,
        "n": spec.n,
        "log_det": -spec.log_density * spec.n,
        "complete_radius": spec.complete_radius,
        "entries": [{"norm_sq": q, "count": c} for q, c in spec.entries],
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=1, allow_nan=False)
        f.write("\n")


def load_spectrum(path) -> DistanceSpectrum:
    """Read a spectrum JSON, validating the schema."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            payload = json.load(f)
    except json.JSONDecodeError as exc:
        raise SpectrumFormatError(f"malformed spectrum file {path}: {exc}") from exc
    try:
        n = int(payload["n"])
        log_det = float(payload["log_det"])
        complete_radius = float(payload["complete_radius"])
        raw = payload["entries"]
        name = str(payload.get("name", ""))
        entries = tuple((float(e["norm_sq"]), int(e["count"])) for e in raw)
    except (KeyError, TypeError, ValueError) as exc:
        raise SpectrumFormatError(f"malformed spectrum file {path}: {exc}") from exc
    for q, _ in entries:
        if not math.isfinite(q):
            raise SpectrumFormatError("non-finite norm_sq")
    try:
        return DistanceSpectrum(
            n=n,
            log_density=-log_det / n,
            entries=entries,
            complete_radius=complete_radius,
            name=name,
        )
    except ValueError as exc:
        raise SpectrumFormatError(str(exc)) from exc
