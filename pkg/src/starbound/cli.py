"""Command-line front end.

Usage examples::

    starbound chain --arms 10 --sites 20
    starbound chain --stem --sites 60
    starbound grid --size 40 --arms 4 --thickness 12 --out runs/cross
    starbound sweep --axis arms --range 3 6 --size 28 --thickness 1
    starbound sweep --axis sites --values 20 40 --arms 3
    starbound predict --omega0 6.66 --delta 0.070 --arms 4

Exit status is 0 when every solve met its residual tolerance, 1 when a
computation failed or missed its tolerance, and 2 for invalid input.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .eigensolve import DENSE_LIMIT, eig_dense_symmetric, eig_extremal_lanczos
from .errors import StarboundError
from .lattice_grid import (
    Corner,
    GridMask,
    RasterKind,
    RasterPolicy,
    StemChainSpec,
    build_laplacian,
    build_star_chain_matrix,
    build_star_mask,
    build_stem_chain_matrix,
    default_truncation,
    mask_from_pgm,
    mask_from_text,
)
from .reports import (
    SPECTRUM_COLUMNS,
    csv_text,
    density_ascii,
    density_pgm,
    dumps,
    envelope,
    provenance_lines,
    spectrum_rows,
    write_text,
)
from .spectra import (
    DEFAULT_GROW,
    GRID_CENTER,
    bloch_band,
    companion_mask,
    find_bound_states,
    grid_band,
    propagation_threshold,
)
from .star_chain import Convention, StarChainSpec, bound_energies, predict_resonances, stem_bound_energies

DEFAULT_OUT = "starbound-out"

SWEEP_COLUMNS = (
    "point",
    "axis",
    "value",
    "model",
    "arms",
    "sites",
    "size",
    "thickness",
    "factor",
    "n_sites",
    "solver",
    "bound_low",
    "bound_high",
    "bound_low_over_Et",
    "bound_low_over_Ec",
    "bound_high_over_Ec",
    "analytic_low",
    "analytic_high",
    "levels_below",
    "levels_embedded",
    "drift",
    "max_residual",
    "converged",
    "status",
)

BOUND_COLUMNS = (
    "index",
    "energy",
    "energy_over_Et",
    "energy_over_Ec",
    "localization",
    "side",
    "kind",
    "decay_rate",
    "decay_rate_predicted",
)


class UsageError(Exception):
    """Invalid input; the message names the offending option."""


# ---------------------------------------------------------------------------
# shared pieces


def _solve(matrix, solver: str, count: int, tol: float, seed: int):
    if solver == "dense" or (solver == "auto" and matrix.dim <= DENSE_LIMIT):
        return eig_dense_symmetric(matrix), "dense"
    return eig_extremal_lanczos(matrix, count=count, which="both", tol=tol, seed=seed), "lanczos"


def _policy(args, p: int) -> RasterPolicy:
    kind = RasterKind.AXIS_ALIGNED if args.raster == "axis" else RasterKind.BRESENHAM_STAIRCASE
    corner = Corner.MAJOR_FIRST if args.corner == "major" else Corner.MINOR_FIRST
    if args.angles:
        if len(args.angles) != p:
            raise UsageError(f"--angles: expected {p} angles for --arms {p}, got {len(args.angles)}")
        return RasterPolicy(kind, tuple(math.radians(a) for a in args.angles), corner)
    return RasterPolicy.default(p, kind, corner)


def _grid_mask(args) -> GridMask:
    if args.mask:
        path = Path(args.mask)
        if path.suffix.lower() == ".pgm":
            return mask_from_pgm(path)
        return mask_from_text(path.read_text(encoding="utf-8"))
    w, h = (args.size * 2)[:2] if len(args.size) == 1 else args.size
    return build_star_mask(w, h, args.arms, args.thickness, _policy(args, args.arms), args.arm_length)


def _output(args, name: str) -> Path:
    return Path(args.out or DEFAULT_OUT) / name


def _write_report(args, command: str, config: dict, result: dict, conventions: dict, stem: str) -> Path:
    if args.format == "csv":
        header = provenance_lines(command, config, args.seed)
        rows = result.get("bound_states", {}).get("states", [])
        return write_text(_output(args, f"{stem}.csv"), csv_text(BOUND_COLUMNS, rows, header))
    return write_text(_output(args, f"{stem}.json"), dumps(envelope(command, config, args.seed, conventions, result)))


# ---------------------------------------------------------------------------
# chain


def run_chain(arms: int, sites: int, stem: bool, solver: str = "auto", tol: float = 1e-10, seed: int = 0):
    """Solve a star or stem chain and compare with the closed form."""
    conv = Convention.CHAIN_CENTERED
    if stem:
        geometry = StemChainSpec(sites, conv)
        matrix = build_stem_chain_matrix(sites, conv)
        analytic = stem_bound_energies()
    else:
        geometry = StarChainSpec(arms, sites, conv)
        matrix = build_star_chain_matrix(geometry)
        analytic = bound_energies(arms) if arms >= 3 else None
    spectrum, how = _solve(matrix, solver, 1, tol, seed)
    report = find_bound_states(spectrum, bloch_band(conv), geometry)
    lo, hi = float(spectrum.eigenvalues[0]), float(spectrum.eigenvalues[-1])
    result = {
        "model": "stem" if stem else "star",
        "arms": 2 if stem else arms,
        "sites": sites,
        "dimension": matrix.dim,
        "solver": how,
        "numeric": {"lowest": lo, "highest": hi},
        "bound_states": report.as_dict(),
        "flags": [] if report.states else ["no bound states"],
    }
    if analytic is not None:
        result["analytic"] = {
            "e_minus": analytic.e_minus,
            "e_plus": analytic.e_plus,
            "decay_factor": analytic.decay_factor,
            "decay_rate": -math.log(analytic.decay_factor),
            "e_minus_over_Ec": (GRID_CENTER - analytic.e_minus) / GRID_CENTER,
            "e_plus_over_Ec": (GRID_CENTER - analytic.e_plus) / GRID_CENTER,
        }
        result["difference"] = {"lowest": lo - analytic.e_minus, "highest": hi - analytic.e_plus}
        result["truncation"] = {"sites": sites, "recommended_sites": default_truncation(analytic.decay_factor)}
    else:
        result["analytic"] = None
        result["difference"] = None
    return result, spectrum, geometry


def _chain_arm_files(args, spectrum, geometry, header) -> list[str]:
    """One CSV per arm with the two extremal eigenvectors along it."""
    written = []
    vecs = spectrum.eigenvectors
    lo, hi = vecs[:, 0], vecs[:, -1]
    n_arms = 2 if isinstance(geometry, StemChainSpec) else geometry.p
    for arm in range(n_arms):
        sites = geometry.arm_sites(arm)
        rows = [{"k": k, "site": s, "amp_lowest": lo[s], "amp_highest": hi[s]} for k, s in enumerate(sites)]
        name = f"chain_arm{arm}.csv"
        write_text(_output(args, name), csv_text(("k", "site", "amp_lowest", "amp_highest"), rows, header))
        written.append(name)
    if isinstance(geometry, StemChainSpec):
        s = geometry.stem_index
        rows = [{"k": 0, "site": 0, "amp_lowest": lo[0], "amp_highest": hi[0]}]
        rows.append({"k": 1, "site": s, "amp_lowest": lo[s], "amp_highest": hi[s]})
        write_text(_output(args, "chain_stem.csv"), csv_text(("k", "site", "amp_lowest", "amp_highest"), rows, header))
        written.append("chain_stem.csv")
    return written


def cmd_chain(args, config) -> int:
    result, spectrum, geometry = run_chain(args.arms, args.sites, args.stem, args.solver, args.tol, args.seed)
    header = provenance_lines("chain", config, args.seed)
    result["files"] = _chain_arm_files(args, spectrum, geometry, header)
    conventions = {"energy": Convention.CHAIN_CENTERED.value, "units": "hopping", "ratio": "E_c"}
    path = _write_report(args, "chain", config, result, conventions, "chain_report")
    num = result["numeric"]
    print(f"{result['model']} chain p={result['arms']} N={args.sites} dim={result['dimension']} ({result['solver']})")
    if result["analytic"]:
        a = result["analytic"]
        print(f"  analytic  {a['e_minus']:+.7f}  {a['e_plus']:+.7f}")
    print(f"  numeric   {num['lowest']:+.7f}  {num['highest']:+.7f}")
    for flag in result["flags"]:
        print(f"  {flag}")
    print(f"  report: {path}")
    return 0 if spectrum.converged else 1


# ---------------------------------------------------------------------------
# grid


def run_grid(mask: GridMask, solver="auto", count=8, tol=1e-10, seed=0, grow=DEFAULT_GROW, radius=None):
    """Solve a grid, optionally with a companion, and classify its states."""
    thickness = mask.thickness or 1
    band = grid_band(thickness)
    matrix = build_laplacian(mask)
    spectrum, how = _solve(matrix, solver, count, tol, seed)
    companion = None
    converged = spectrum.converged
    if how == "dense" and grow and mask.policy is not None and band.half_guide is not None:
        cmask = companion_mask(mask, grow)
        cmat = build_laplacian(cmask)
        if cmat.dim <= DENSE_LIMIT:
            cspec = eig_dense_symmetric(cmat)
            converged = converged and cspec.converged
            companion = (cspec, cmask)
    report = find_bound_states(spectrum, band, mask, radius, companion=companion)
    return spectrum, report, band, how, converged


def cmd_grid(args, config) -> int:
    mask = _grid_mask(args)
    spectrum, report, band, how, converged = run_grid(
        mask, args.solver, args.count, args.tol, args.seed, args.grow, args.radius
    )
    header = provenance_lines("grid", config, args.seed)
    e_t = band.e_threshold
    radius = report.criterion["localization_radius"]
    inside = mask.radii() <= radius + 1e-12
    loc = (spectrum.eigenvectors[inside] ** 2).sum(axis=0)
    files = ["mask.txt", "spectrum.csv", "states.csv"]
    write_text(_output(args, "mask.txt"), mask.to_text())
    rows = spectrum_rows(spectrum, loc, e_t, lambda e: e)
    write_text(_output(args, "spectrum.csv"), csv_text(SPECTRUM_COLUMNS, rows, header))

    x, y = mask.coords()
    cols = ["site", "x", "y"] + [f"density_{s.index}" for s in report.states]
    dens = []
    for i in range(mask.n_sites):
        row = {"site": i, "x": int(x[i]), "y": int(y[i])}
        for s in report.states:
            row[f"density_{s.index}"] = float(spectrum.eigenvectors[i, s.index] ** 2)
        dens.append(row)
    write_text(_output(args, "states.csv"), csv_text(cols, dens, header))
    for k, s in enumerate(report.states):
        note = header + [f"state {s.index} E={s.energy!r} E/E_t={s.energy_over_et!r}", "density normalized to max 1"]
        v = spectrum.eigenvectors[:, s.index]
        stem = f"state_{k:02d}"
        write_text(_output(args, stem + ".pgm"), density_pgm(mask, v, note))
        write_text(_output(args, stem + ".txt"), density_ascii(mask, v, note))
        files += [stem + ".pgm", stem + ".txt"]

    result = {
        "geometry": mask.fingerprint(),
        "solver": how,
        "thresholds": {
            "e_t": e_t,
            "half_guide": band.half_guide,
            "e_c": GRID_CENTER,
            "band_low": band.band_low,
            "band_high": band.band_high,
        },
        "bound_states": report.as_dict(),
        "n_eigenvalues": len(spectrum),
        "converged": bool(converged),
        "files": files,
        "flags": [] if report.states else ["no bound states"],
    }
    conventions = {"energy": Convention.GRID_SHIFTED.value, "units": "grid", "ratio": ["E_t", "E_c"]}
    path = _write_report(args, "grid", config, result, conventions, "grid_report")
    print(f"grid {mask.width}x{mask.height} sites={mask.n_sites} E_t={e_t:.6g} ({how})")
    for lv in report.levels:
        print(
            f"  {lv.side:5s} {lv.kind:16s} E={lv.energy:.6f}  E/E_t={lv.energy_over_et:.4f}"
            f"  E/E_c={lv.energy_over_ec:.4f}  x{lv.multiplicity}"
        )
    for note in report.notes:
        print(f"  note: {note}")
    if args.format == "json" and mask.n_sites <= 200:
        print("  spectrum: " + " ".join(f"{e:.4f}" for e in spectrum.eigenvalues))
    print(f"  report: {path}")
    return 0 if converged else 1


# ---------------------------------------------------------------------------
# sweep


def sweep_point(params: dict) -> dict:
    """Evaluate one sweep point; errors become a status string."""
    row = {c: params.get(c) for c in SWEEP_COLUMNS}
    try:
        if params["model"] == "chain":
            result, spectrum, _ = run_chain(
                params["arms"], params["sites"], params["stem"], params["solver"], params["tol"], params["seed"]
            )
            states = result["bound_states"]["states"]
            row["n_sites"] = result["dimension"]
            row["solver"] = result["solver"]
            grid_e = sorted(GRID_CENTER - s["energy"] for s in states)
            if result["analytic"]:
                a = result["analytic"]
                row["analytic_low"] = GRID_CENTER - a["e_plus"]
                row["analytic_high"] = GRID_CENTER - a["e_minus"]
            e_t = propagation_threshold(1)
            levels = result["bound_states"]["levels"]
            converged = spectrum.converged
        else:
            f = params.get("factor") or 1
            size, thickness = params["size"] * f, params["thickness"] * f
            policy = RasterPolicy.default(params["arms"], RasterKind(params["raster"]), Corner(params["corner"]))
            mask = build_star_mask(size, size, params["arms"], thickness, policy)
            spectrum, report, band, how, converged = run_grid(
                mask, params["solver"], params["count"], params["tol"], params["seed"], params["grow"]
            )
            row.update(size=size, thickness=thickness, n_sites=mask.n_sites, solver=how)
            grid_e = sorted(s.energy for s in report.states)
            e_t = band.e_threshold
            levels = [lv.as_dict() for lv in report.levels]
        if grid_e:
            row["bound_low"], row["bound_high"] = grid_e[0], grid_e[-1]
            row["bound_low_over_Et"] = grid_e[0] / e_t
            row["bound_low_over_Ec"] = grid_e[0] / GRID_CENTER
            row["bound_high_over_Ec"] = grid_e[-1] / GRID_CENTER
        row["levels_below"] = sum(1 for lv in levels if lv["side"] == "lower" and lv["kind"] != "embedded")
        row["levels_embedded"] = sum(1 for lv in levels if lv["kind"] == "embedded" and lv["side"] == "lower")
        row["max_residual"] = float(spectrum.residuals.max()) if len(spectrum.residuals) else 0.0
        row["converged"] = bool(converged)
        row["status"] = "ok" if converged else "residual above tolerance"
    except (StarboundError, ValueError, RuntimeError) as exc:
        row["status"] = f"error: {type(exc).__name__}: {exc}"
    return row


def _sweep_values(args) -> list:
    if args.values is not None:
        vals = args.values
    elif args.range is not None:
        start, stop = args.range[0], args.range[1]
        step = args.range[2] if len(args.range) > 2 else 1
        if step <= 0:
            raise UsageError("--range: step must be positive")
        vals = list(range(start, stop + 1, step))
    else:
        raise UsageError("--values or --range is required")
    return [int(v) for v in vals]


def _add_drift(rows: list[dict], axis: str) -> None:
    if axis not in ("sites", "size", "factor"):
        return
    ref = next((r for r in rows if r.get("bound_low") is not None), None)
    if ref is None:
        return
    for r in rows:
        if r.get("bound_low") is None:
            continue
        if r["model"] == "chain":
            r["drift"] = abs(r["bound_low"] - ref["bound_low"])
        else:
            r["drift"] = abs(r["bound_low_over_Et"] - ref["bound_low_over_Et"]) / ref["bound_low_over_Et"]


def cmd_sweep(args, config) -> int:
    values = _sweep_values(args)
    model = args.model or ("chain" if args.axis == "sites" or args.stem else "grid")
    if model == "chain" and args.axis in ("thickness", "size", "factor"):
        raise UsageError(f"--axis: {args.axis} needs --model grid")
    base = {
        "model": model,
        "axis": args.axis,
        "arms": args.arms,
        "sites": args.sites,
        "stem": args.stem,
        "size": args.size,
        "thickness": args.thickness,
        "factor": 1,
        "raster": "axis_aligned" if args.raster == "axis" else "bresenham_staircase",
        "corner": "major_first" if args.corner == "major" else "minor_first",
        "solver": args.solver,
        "count": args.count,
        "tol": args.tol,
        "seed": args.seed,
        "grow": args.grow,
    }
    key = {"arms": "arms", "thickness": "thickness", "sites": "sites", "size": "size", "factor": "factor"}[args.axis]
    points = []
    for i, v in enumerate(values):
        p = dict(base, point=i, value=v)
        p[key] = v
        points.append(p)

    rows: list[dict] = []
    failure = None
    if args.jobs > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(sweep_point, p) for p in points]
            for fut in futures:
                row = fut.result()
                rows.append(row)
                if row["status"].startswith("error") and not args.keep_going:
                    failure = row
                    for rest in futures:
                        rest.cancel()
                    break
    else:
        for p in points:
            row = sweep_point(p)
            rows.append(row)
            if row["status"].startswith("error") and not args.keep_going:
                failure = row
                break
    _add_drift(rows, args.axis)

    header = provenance_lines("sweep", config, args.seed)
    text = csv_text(SWEEP_COLUMNS, rows, header)
    if failure is not None:
        text += f"# PARTIAL: aborted at point {failure['point']} ({args.axis}={failure['value']}): {failure['status']}\n"
    path = write_text(_output(args, "sweep.csv"), text)
    if args.format == "json":
        drifts = [r["drift"] for r in rows if r.get("drift") is not None]
        result = {
            "axis": args.axis,
            "model": model,
            "rows": rows,
            "max_drift": max(drifts) if drifts else None,
            "partial": failure is not None,
        }
        conv = Convention.CHAIN_CENTERED.value if model == "chain" else Convention.GRID_SHIFTED.value
        conventions = {"energy": conv, "table_energies": Convention.GRID_SHIFTED.value, "ratio": ["E_t", "E_c"]}
        write_text(_output(args, "sweep.json"), dumps(envelope("sweep", config, args.seed, conventions, result)))
    for r in rows:
        lo = r.get("bound_low_over_Ec")
        print(f"  {args.axis}={r['value']}: {r['status']}" + (f"  E_low/E_c={lo:.4f}" if lo is not None else ""))
    if failure is not None:
        print(f"sweep aborted at {args.axis}={failure['value']}: {failure['status']}", file=sys.stderr)
    print(f"  table: {path}")
    ok = all(r["status"] == "ok" for r in rows) and failure is None
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# predict


def cmd_predict(args, config) -> int:
    if not args.omega0 > 0:
        raise UsageError("--omega0: must be positive")
    if args.delta < 0:
        raise UsageError("--delta: must be non-negative")
    pred = predict_resonances(args.omega0, args.delta, args.arms)
    pair = bound_energies(args.arms)
    result = {
        "omega0": args.omega0,
        "delta": args.delta,
        "arms": args.arms,
        "f_low": pred.f_low,
        "f_high": pred.f_high,
        "band_low": pred.band_low,
        "band_high": pred.band_high,
        "splitting": pred.splitting,
        "dimensionless": {"e_minus": pair.e_minus, "e_plus": pair.e_plus},
        "bound": args.arms >= 3,
    }
    print(f"resonances: {pred.f_low:.4f} / {pred.f_high:.4f} GHz (splitting {pred.splitting:.5f} GHz)")
    print(f"band:       {pred.band_low:.4f} .. {pred.band_high:.4f} GHz")
    print(f"energies:   {pair.e_minus:+.7f} {pair.e_plus:+.7f} (hopping units)")
    if args.out:
        conventions = {"energy": Convention.CHAIN_CENTERED.value, "units": "GHz"}
        if args.format == "csv":
            cols = ("omega0", "delta", "arms", "f_low", "f_high", "band_low", "band_high", "splitting")
            write_text(_output(args, "predict.csv"), csv_text(cols, [result], provenance_lines("predict", config, args.seed)))
        else:
            write_text(_output(args, "predict.json"), dumps(envelope("predict", config, args.seed, conventions, result)))
    return 0


# ---------------------------------------------------------------------------
# parser


def _positive(name, minimum=1):
    def parse(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer, got {text!r}") from None
        if v < minimum:
            raise argparse.ArgumentTypeError(f"{name} must be >= {minimum}, got {v}")
        return v

    return parse


def _seed(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--seed must be an integer, got {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("--seed must fit in an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json", help="report format")
    common.add_argument("--out", default=None, help=f"output directory (default {DEFAULT_OUT})")
    common.add_argument("--seed", type=_seed, default=0, help="seed for the Lanczos start vector")
    common.add_argument("--jobs", type=_positive("--jobs"), default=1, help="parallel sweep points")
    common.add_argument("--solver", choices=("auto", "dense", "lanczos"), default="auto")
    common.add_argument("--tol", type=float, default=1e-10, help="Lanczos residual tolerance")
    common.add_argument("--count", type=_positive("--count"), default=8, help="Lanczos pairs per spectrum end")

    geom = argparse.ArgumentParser(add_help=False)
    geom.add_argument("--angles", type=float, nargs="+", default=None, help="arm angles in degrees")
    geom.add_argument("--raster", choices=("staircase", "axis"), default="staircase")
    geom.add_argument("--corner", choices=("minor", "major"), default="minor")
    geom.add_argument("--grow", type=int, default=DEFAULT_GROW, help="companion grid enlargement (0 disables)")
    geom.add_argument("--radius", type=float, default=None, help="localization radius (default 2*thickness)")

    ap = argparse.ArgumentParser(prog="starbound", description=__doc__.split("\n")[0])
    ap.add_argument("--version", action="version", version=f"starbound {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("chain", parents=[common], help="star or stem chain against the closed form")
    c.add_argument("--arms", type=_positive("--arms", 2), default=None, help="arm count (default 3)")
    c.add_argument("--sites", type=_positive("--sites"), default=40)
    c.add_argument("--stem", action="store_true", help="two arms plus a one-site stem")
    c.set_defaults(func=cmd_chain)

    g = sub.add_parser("grid", parents=[common, geom], help="finite-difference star wire")
    g.add_argument("--size", type=_positive("--size"), nargs="+", default=[40], help="grid extent W [H]")
    g.add_argument("--arms", type=_positive("--arms", 2), default=4)
    g.add_argument("--thickness", type=_positive("--thickness"), default=1)
    g.add_argument("--arm-length", type=float, default=None, help="arm length along its axis")
    g.add_argument("--mask", default=None, help="load the geometry from a mask text or PGM file")
    g.set_defaults(func=cmd_grid)

    s = sub.add_parser("sweep", parents=[common, geom], help="tabulate bound states over one parameter")
    s.add_argument("--axis", choices=("arms", "thickness", "sites", "size", "factor"), required=True)
    s.add_argument("--values", type=int, nargs="*", default=None)
    s.add_argument("--range", type=int, nargs="+", default=None, metavar="START STOP [STEP]")
    s.add_argument("--model", choices=("chain", "grid"), default=None)
    s.add_argument("--arms", type=_positive("--arms", 2), default=3)
    s.add_argument("--sites", type=_positive("--sites"), default=40)
    s.add_argument("--stem", action="store_true")
    s.add_argument("--size", type=_positive("--size"), default=28)
    s.add_argument("--thickness", type=_positive("--thickness"), default=1)
    s.add_argument("--keep-going", action="store_true", help="record failed points and continue")
    s.set_defaults(func=cmd_sweep)

    pr = sub.add_parser("predict", parents=[common], help="resonance frequencies of a resonator star")
    pr.add_argument("--omega0", type=float, required=True, help="resonator frequency (GHz)")
    pr.add_argument("--delta", type=float, required=True, help="coupling (GHz)")
    pr.add_argument("--arms", type=_positive("--arms", 2), default=4)
    pr.set_defaults(func=cmd_predict)
    return ap


def resolved_config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k != "func"}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "chain":
        if args.stem and args.arms is not None:
            parser.error("--arms: a stem chain always has two arms plus the stem")
        if args.arms is None:
            args.arms = 3
        if args.arms < 2:
            parser.error("--arms: need at least 2 arms")
    if getattr(args, "range", None) is not None and len(args.range) not in (2, 3):
        parser.error("--range: expected START STOP [STEP]")
    if args.command == "grid" and len(args.size) > 2:
        parser.error("--size: expected W or W H")
    config = resolved_config(args)
    try:
        return args.func(args, config)
    except UsageError as exc:
        parser.error(str(exc))
    except StarboundError as exc:
        print(f"starbound: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 1


if __name__ == "__main__":
    raise SystemExit(main())
