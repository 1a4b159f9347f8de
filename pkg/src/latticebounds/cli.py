"""Command-line front end: spectra, profiles, bound sweeps, exponents, simulation.

All commands emit CSV (or JSON) data for external plotting; identical
configuration and seed produce byte-identical output.  Exit status is 0 iff
no grid point failed.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from ._format import fmt17
from . import alpha as alpha_mod
from . import bounds as bounds_mod
from . import exponent as exponent_mod
from . import mcsim
from . import spectrum as spectrum_mod
from .channel import NoiseModel

_METHOD_TOKENS = {
    "ub": "UB",
    "mhs": "MHS",
    "dmhs": "DMHS",
    "edmhs": "eDMHS",
    "sub": "SUB",
    "slb": "SLB",
}


def _parse_grid(text: str) -> list[float]:
    """Parse 'start:stop:steps' into an inclusive linear grid."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("grid must be start:stop:steps")
    start, stop, steps = float(parts[0]), float(parts[1]), int(parts[2])
    if steps < 1:
        raise argparse.ArgumentTypeError("steps must be >= 1")
    if steps == 1:
        return [start]
    return [float(x) for x in np.linspace(start, stop, steps)]


def _parse_methods(text: str) -> list[str]:
    methods = []
    for token in text.split(","):
        token = token.strip().lower()
        if token not in _METHOD_TOKENS:
            raise argparse.ArgumentTypeError(f"unknown method {token!r}")
        methods.append(_METHOD_TOKENS[token])
    return methods


def _load_spec_arg(args) -> spectrum_mod.DistanceSpectrum:
    if getattr(args, "spectrum", None):
        return spectrum_mod.load_spectrum(args.spectrum)
    name = args.lattice
    if name is None:
        raise SystemExit("provide --spectrum or --lattice")
    try:
        return spectrum_mod.catalog_spectrum(name)
    except ValueError:
        basis = spectrum_mod.builtin_lattice(name)
        radius = args.radius if getattr(args, "radius", None) else 3.0
        return spectrum_mod.enumerate_spectrum(basis, radius)


def _write_rows(path, header: list[str], rows: list[list[str]], fmt: str):
    """Write rows as CSV or JSON to a path ('-' for stdout)."""
    if fmt == "json":
        payload = [dict(zip(header, row)) for row in rows]
        text = json.dumps(payload, indent=1) + "\n"
    else:
        lines = [",".join(header)]
        lines += [",".join(row) for row in rows]
        text = "\n".join(lines) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)


def cmd_spectrum(args) -> int:
    if args.generator:
        with open(args.generator, "r", encoding="utf-8") as f:
            payload = json.load(f)
        gen = np.array(payload["generator"], dtype=float)
        sign, logdet = np.linalg.slogdet(gen)
        if sign == 0:
            raise SystemExit("generator file is singular")
        basis = spectrum_mod.LatticeBasis(
            name=str(payload.get("name", "user")),
            n=gen.shape[0],
            generator=gen,
            log_det=float(logdet),
        )
    else:
        if not args.lattice:
            raise SystemExit("provide --lattice or --generator")
        basis = spectrum_mod.builtin_lattice(args.lattice)
    if not args.radius or args.radius <= 0:
        raise SystemExit("--radius must be positive")
    spec = spectrum_mod.enumerate_spectrum(basis, args.radius)
    out = args.out or "-"
    if out == "-":
        json.dump(
            {
                "name": spec.name,
                "n": spec.n,
                "log_det": -spec.log_density * spec.n,
                "complete_radius": spec.complete_radius,
                "entries": [{"norm_sq": q, "count": c} for q, c in spec.entries],
            },
            sys.stdout,
            indent=1,
        )
        sys.stdout.write("\n")
    else:
        spectrum_mod.save_spectrum(spec, out)
    return 0


def cmd_alpha(args) -> int:
    spec = _load_spec_arg(args)
    snorm = spectrum_mod.normalize(spec)
    if not snorm.entries:
        raise SystemExit("spectrum has no shells")
    if args.mode == "rng":
        m = args.M if args.M else len(snorm.entries)
        profile = alpha_mod.alpha_rng(snorm, m)
    else:
        lam_max = args.lambda_max if args.lambda_max else float(snorm.norms[-1])
        profile = alpha_mod.alpha_opt(snorm, lam_max)
    header = ["shell_index", "lambda_lo", "lambda_hi", "alpha_value"]
    rows = [
        [str(j + 1), fmt17(profile.breakpoints[j]), fmt17(profile.breakpoints[j + 1]), fmt17(v)]
        for j, v in enumerate(profile.values)
    ]
    _write_rows(args.out, header, rows, args.format)
    return 0


def cmd_bound(args) -> int:
    spec = _load_spec_arg(args)
    if (args.sigma is None) == (args.vnr_db is None):
        raise SystemExit("provide exactly one of --sigma or --vnr-db")
    kwargs = (
        {"sigmas": args.sigma} if args.sigma is not None else {"vnr_dbs": args.vnr_db}
    )
    header = [
        "sigma",
        "vnr_db",
        "method",
        "r_opt",
        "ubt",
        "sbt",
        "total",
        "M_used",
        "alpha_used",
        "iterations",
        "status",
    ]
    rows = []
    failed = 0
    for method in args.methods:
        for res in bounds_mod.sweep(method, spec, **kwargs):
            d = res.diagnostics
            status = "error:" + d["error"] if "error" in d else "ok"
            if status != "ok":
                failed += 1
            rows.append(
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
                    status,
                ]
            )
    _write_rows(args.out, header, rows, args.format)
    return 1 if failed else 0


def cmd_exponent(args) -> int:
    specs = [spectrum_mod.load_spectrum(p) for p in args.spectra]
    points = exponent_mod.nu_series(
        specs,
        args.sigma,
        r_policy=args.r_policy,
        paper_literal_line=args.paper_literal_line,
    )
    header = ["n", "delta", "alpha_n", "nu", "exponent"]
    rows = [
        [str(p.n), fmt17(p.delta), fmt17(p.alpha_n), fmt17(p.nu), fmt17(p.exponent)]
        for p in points
    ]
    _write_rows(args.out, header, rows, args.format)
    return 0


def cmd_simulate(args) -> int:
    basis = spectrum_mod.builtin_lattice(args.lattice)
    header = ["lattice", "sigma", "trials", "errors", "p_hat", "ci95", "seed"]
    rows = []
    for sigma in args.sigma:
        model = NoiseModel(n=basis.n, sigma_sq=sigma * sigma)
        r = mcsim.simulate(basis, model, args.trials, args.seed)
        rows.append(
            [
                r.lattice,
                fmt17(r.sigma),
                str(r.trials),
                str(r.errors),
                fmt17(r.p_hat),
                fmt17(r.ci95_halfwidth),
                str(r.seed),
            ]
        )
    _write_rows(args.out, header, rows, args.format)
    return 0


def _r_policy(text: str):
    if text in ("dmhs", "first-shell"):
        return text
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            "r-policy must be 'dmhs', 'first-shell', or a normalized radius"
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latticebounds",
        description="Distance-spectrum error bounds for lattices over AWGN",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("spectrum", help="enumerate a distance spectrum to a JSON file")
    common(p)
    p.add_argument("--lattice", help="builtin lattice name (Z1..Z24, D4, E8, BW16, Leech)")
    p.add_argument("--generator", help="JSON file with a generator matrix")
    p.add_argument("--radius", type=float, required=True)

    p = sub.add_parser("alpha", help="emit a smoothing profile as CSV")
    common(p)
    p.add_argument("--lattice")
    p.add_argument("--spectrum", help="spectrum JSON produced by the spectrum command")
    p.add_argument("--radius", type=float, help="enumeration radius for --lattice")
    p.add_argument("--mode", choices=("rng", "opt"), default="opt")
    p.add_argument("--M", type=int, help="shell count for rng mode")
    p.add_argument("--lambda-max", dest="lambda_max", type=float, help="scope for opt mode")

    p = sub.add_parser("bound", help="sweep bounds over a sigma or VNR grid")
    common(p)
    p.add_argument("--lattice")
    p.add_argument("--spectrum")
    p.add_argument("--radius", type=float, help="enumeration radius for --lattice")
    p.add_argument("--methods", type=_parse_methods, default=_parse_methods("ub,mhs,dmhs,sub,slb"))
    p.add_argument("--sigma", type=_parse_grid, help="sigma grid start:stop:steps")
    p.add_argument("--vnr-db", dest="vnr_db", type=_parse_grid, help="VNR grid in dB")

    p = sub.add_parser("exponent", help="rate-penalty series for spectrum files")
    common(p)
    p.add_argument("--spectra", nargs="+", required=True, help="spectrum JSON files")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--r-policy", dest="r_policy", type=_r_policy, default="dmhs")
    p.add_argument(
        "--paper-literal-line",
        action="store_true",
        help="use the discontinuous straight-line constant ln(e/4)",
    )

    p = sub.add_parser("simulate", help="Monte Carlo error rate with exact decoders")
    common(p)
    p.add_argument("--lattice", required=True)
    p.add_argument("--sigma", type=_parse_grid, required=True)
    p.add_argument("--trials", type=int, default=10**5)

    return parser


_COMMANDS = {
    "spectrum": cmd_spectrum,
    "alpha": cmd_alpha,
    "bound": cmd_bound,
    "exponent": cmd_exponent,
    "simulate": cmd_simulate,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
