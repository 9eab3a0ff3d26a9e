"""Experiment runner: every module surfaced as a reproducible subcommand.

Each run writes its CSV outputs plus exactly one manifest JSON holding the
resolved parameter record; re-running with those parameters reproduces the
CSVs byte for byte.  Exit codes: 0 success, 1 usage error, 2 numerical
failure, 3 precondition violation.

Flags override values from an optional ``--config`` JSON file (the same
structured format as symbol files, with flag names as keys).  ``--threads``
caps worker parallelism; all outputs are independent of its value.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from decimal import Decimal
from pathlib import Path

import numpy as np

from . import __version__
from .errors import PreconditionError
from .linops import NumericalError
from .manifest import load_manifest, write_csv, write_run_manifest
from .pseudo import ZGrid, bracket_sign_map, sigma_min_grid
from .quantize import dft_matrix, quantize  # noqa: F401  (dft exposed for scripts)
from .randmat import PerturbationSpec
from .regularize import bump
from .rmt import (ContourSegment, contour_trace_pair, fig3_matrix,
                  log_trace_bound, resolvent_trace_integral)
from .symbol import (TorusSymbol, builtin_symbol, symbol_digest,
                     symbol_from_doc)
from .weyl import (Disk, Strip, counting_sweep, empirical_measure_distance,
                   kappa_fit, spectra_draws)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); we reserve 2 for numerics
        raise UsageError(message)


def _load_symbol(spec: str) -> TorusSymbol:
    path = Path(spec)
    if path.exists():
        try:
            return symbol_from_doc(json.loads(path.read_text()))
        except (ValueError, KeyError, json.JSONDecodeError) as exc:
            raise UsageError(f"bad symbol file {spec}: {exc}") from exc
    try:
        return builtin_symbol(spec)
    except KeyError as exc:
        raise UsageError(str(exc)) from exc


def parse_r_grid(text: str) -> list[float]:
    """Inclusive start:stop:step with exact decimal arithmetic."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"r-grid must be start:stop:step, got {text!r}")
    start, stop, step = (Decimal(p) for p in parts)
    if step <= 0:
        raise UsageError("r-grid step must be positive")
    out = []
    v = start
    while v <= stop:
        out.append(float(v))
        v += step
    if not out:
        raise UsageError(f"empty r-grid {text!r}")
    return out


def _perturbation_spec(args) -> PerturbationSpec:
    if args.mode == "absolute":
        return PerturbationSpec.absolute(args.eta, args.seed, args.draws)
    return PerturbationSpec.power(args.p, args.seed, args.draws)


def _add_common(p, draws=True):
    p.add_argument("--symbol", default="scottish_flag",
                   help="builtin name or path to a symbol JSON file")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--out", required=True, help="output prefix (PREFIX.csv etc.)")
    p.add_argument("--threads", type=int, default=1)
    if draws:
        p.add_argument("--mode", choices=["absolute", "power"], default="absolute")
        p.add_argument("--eta", type=float, default=1e-4)
        p.add_argument("--p", type=float, default=1.5)
        p.add_argument("--draws", type=int, default=20)
        p.add_argument("--seed", type=int, default=42)


def build_parser() -> _Parser:
    ap = _Parser(prog="torusweyl", description=__doc__)
    ap.add_argument("--config", default=None,
                    help="JSON file of flag defaults; explicit flags win")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("quantize", help="dump the matrix of a symbol")
    p.add_argument("--symbol", default="scottish_flag")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--nonzero-only", action="store_true")
    p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("spectrum", help="perturbed eigenvalues per draw")
    _add_common(p)

    p = sub.add_parser("weyl-sweep", help="counting table over a region family")
    _add_common(p)
    p.add_argument("--region", choices=["disk", "strip"], default="disk")
    p.add_argument("--r", default="0.1:0.9:0.1", help="inclusive start:stop:step")
    p.add_argument("--grid", type=int, default=2048)

    p = sub.add_parser("kappa-fit", help="sublevel-volume exponent fit")
    p.add_argument("--symbol", default="scottish_flag")
    p.add_argument("--z", default="0", help="complex center, e.g. '1+1j'")
    p.add_argument("--t-min", type=float, default=1e-2)
    p.add_argument("--t-max", type=float, default=1e-1)
    p.add_argument("--points", type=int, default=12)
    p.add_argument("--grid", type=int, default=8192)
    p.add_argument("--out", required=True)
    p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("pseudospectrum", help="sigma_min portrait CSV")
    p.add_argument("--symbol", default="scottish_flag")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--window", type=float, default=1.6)
    p.add_argument("--nodes", type=int, default=161)
    p.add_argument("--out", required=True)
    p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("bracket-map", help="{Re f, Im f} on a torus grid")
    p.add_argument("--symbol", default="scottish_flag")
    p.add_argument("--grid", type=int, default=256)
    p.add_argument("--out", required=True)
    p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("rmt-fig3", help="trace-integral bound comparison")
    p.add_argument("--deltas", default="1e-1,1e-2,1e-3,1e-4,1e-5,1e-6")
    p.add_argument("--samples", type=int, default=1500)
    p.add_argument("--t-nodes", type=int, default=16)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--matrix-seed", type=int, default=20090)
    p.add_argument("--out", required=True)
    p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("contour", help="averaged vs regularized contour trace")
    p.add_argument("--symbol", default="scottish_flag")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--z0", default="0", help="boundary point; symbol is recentered there")
    p.add_argument("--alpha", type=float, default=0.3)
    p.add_argument("--delta", type=float, default=1e-3)
    p.add_argument("--length", type=float, default=0.05)
    p.add_argument("--angle-deg", type=float, default=0.0)
    p.add_argument("--samples", type=int, default=400)
    p.add_argument("--seed", type=int, default=1234)
    p.add_argument("--out", required=True)
    p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("conjecture", help="empirical-measure distances over N")
    p.add_argument("--symbol", default="scottish_flag")
    p.add_argument("--N-list", default="50,100,200")
    p.add_argument("--bins", type=int, default=24)
    p.add_argument("--grid", type=int, default=2048)
    p.add_argument("--mode", choices=["absolute", "power"], default="absolute")
    p.add_argument("--eta", type=float, default=1e-4)
    p.add_argument("--p", type=float, default=1.5)
    p.add_argument("--draws", type=int, default=10)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--out", required=True)
    p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("selftest", help="run the module invariant battery")
    p.add_argument("--fast", action="store_true", help="skip the slower checks")
    p.add_argument("--threads", type=int, default=1)

    return ap


# -- subcommand bodies ---------------------------------------------------------


def _cmd_quantize(args):
    f = _load_symbol(args.symbol)
    op = quantize(f, args.N)
    rows = []
    for i in range(op.dim):
        for j in range(op.dim):
            v = op.matrix[i, j]
            if args.nonzero_only and v == 0:
                continue
            rows.append((i, j, float(v.real), float(v.imag)))
    path = Path(f"{args.out}.csv")
    header_comment = f"# N={op.N} n={op.n} symbol={op.symbol_id}"
    body = "\n".join([header_comment, "row_index,col_index,re,im"]
                     + [",".join([str(r[0]), str(r[1]), repr(r[2]), repr(r[3])])
                        for r in rows])
    path.write_text(body + "\n")
    return [path], {"symbol": args.symbol, "symbol_digest": op.symbol_id,
                    "N": args.N, "n": op.n, "nonzero_only": bool(args.nonzero_only)}


def _cmd_spectrum(args):
    f = _load_symbol(args.symbol)
    spec = _perturbation_spec(args)
    eigs = spectra_draws(f, args.N, spec, args.threads)
    rows = []
    for i, ev in enumerate(eigs):
        for z in ev:
            rows.append((i, float(z.real), float(z.imag)))
    path = write_csv(f"{args.out}.csv", ["draw_index", "re", "im"], rows)
    return [path], {"symbol": args.symbol, "symbol_digest": symbol_digest(f),
                    "N": args.N, "mode": spec.mode, "eta": spec.eta, "p": spec.p,
                    "draws": spec.draws, "master_seed": spec.master_seed}


def _cmd_weyl_sweep(args):
    f = _load_symbol(args.symbol)
    spec = _perturbation_spec(args)
    rs = parse_r_grid(args.r)
    if args.region == "disk":
        regions = [Disk(0j, r) for r in rs]
    else:
        regions = [Strip(0.0, r) for r in rs]
    reports = counting_sweep(f, args.N, regions, spec, grid=args.grid,
                             threads=args.threads)
    rows = [(r, rep.mean_count, rep.stderr, rep.weyl_prediction)
            for r, rep in zip(rs, reports)]
    path = write_csv(f"{args.out}.csv",
                     ["r", "mean_count", "stderr", "weyl_prediction"], rows)
    return [path], {"symbol": args.symbol, "symbol_digest": symbol_digest(f),
                    "N": args.N, "region": args.region, "r": args.r,
                    "grid": args.grid, "mode": spec.mode, "eta": spec.eta,
                    "p": spec.p, "draws": spec.draws,
                    "master_seed": spec.master_seed}


def _cmd_kappa_fit(args):
    f = _load_symbol(args.symbol)
    z = complex(args.z)
    fit = kappa_fit(f, z, args.t_min, args.t_max, args.points, args.grid)
    rows = list(zip((float(t) for t in fit.t_grid),
                    (float(v) for v in fit.volumes)))
    path = write_csv(f"{args.out}.csv", ["t", "volume"], rows)
    print(f"kappa_hat = {fit.kappa_hat!r} (fit residual {fit.fit_residual!r})")
    return [path], {"symbol": args.symbol, "symbol_digest": symbol_digest(f),
                    "z": str(z), "t_min": args.t_min, "t_max": args.t_max,
                    "points": args.points, "grid": args.grid,
                    "kappa_hat": fit.kappa_hat, "fit_residual": fit.fit_residual}


def _cmd_pseudospectrum(args):
    f = _load_symbol(args.symbol)
    zg = ZGrid.square(args.window, args.nodes)
    portrait = sigma_min_grid(f, args.N, zg)
    res, ims = zg.axes()
    rows = []
    for i, b in enumerate(ims):
        for j, a in enumerate(res):
            rows.append((float(a), float(b), float(portrait.values[i, j])))
    path = write_csv(f"{args.out}.csv", ["re_z", "im_z", "sigma_min"], rows)
    return [path], {"symbol": args.symbol, "symbol_digest": symbol_digest(f),
                    "N": args.N, "window": args.window, "nodes": args.nodes}


def _cmd_bracket_map(args):
    f = _load_symbol(args.symbol)
    vals = bracket_sign_map(f, args.grid)
    axis = np.arange(args.grid) / args.grid
    rows = []
    for i, x in enumerate(axis):
        for j, xi in enumerate(axis):
            rows.append((float(x), float(xi), float(vals[i, j])))
    path = write_csv(f"{args.out}.csv", ["x", "xi", "bracket"], rows)
    return [path], {"symbol": args.symbol, "symbol_digest": symbol_digest(f),
                    "grid": args.grid}


def _cmd_rmt_fig3(args):
    A = fig3_matrix(args.matrix_seed)
    deltas = [float(s) for s in args.deltas.split(",")]
    rows = []
    for k, delta in enumerate(deltas):
        lhs = resolvent_trace_integral(A, delta, t_nodes=args.t_nodes,
                                       samples=args.samples,
                                       seed=args.seed + k)
        rhs = log_trace_bound(A, delta, C=1.0)
        rows.append((float(np.log10(1.0 / delta)), float(lhs), float(rhs)))
    path = write_csv(f"{args.out}.csv", ["log10_inv_delta", "lhs", "rhs_C1"], rows)
    return [path], {"deltas": args.deltas, "samples": args.samples,
                    "t_nodes": args.t_nodes, "seed": args.seed,
                    "matrix_seed": args.matrix_seed}


def _cmd_contour(args):
    f = _load_symbol(args.symbol)
    z0 = complex(args.z0)
    f_centered = f - z0
    direction = np.exp(1j * np.deg2rad(args.angle_deg))
    gamma = ContourSegment(-0.5 * args.length * direction,
                           0.5 * args.length * direction)
    mc, i_reg = contour_trace_pair(f_centered, args.N, gamma, args.alpha,
                                   args.delta, args.samples, args.seed)
    rows = [(float(mc.value.real), float(mc.value.imag), float(mc.stderr),
             float(i_reg.real), float(i_reg.imag))]
    path = write_csv(f"{args.out}.csv",
                     ["re_I", "im_I", "stderr", "re_Itilde", "im_Itilde"], rows)
    return [path], {"symbol": args.symbol, "symbol_digest": symbol_digest(f),
                    "N": args.N, "z0": str(z0), "alpha": args.alpha,
                    "delta": args.delta, "length": args.length,
                    "angle_deg": args.angle_deg, "samples": args.samples,
                    "seed": args.seed}


def _cmd_conjecture(args):
    f = _load_symbol(args.symbol)
    Ns = [int(s) for s in args.N_list.split(",")]
    rows = []
    for N in Ns:
        if args.mode == "absolute":
            spec = PerturbationSpec.absolute(args.eta, args.seed, args.draws)
        else:
            spec = PerturbationSpec.power(args.p, args.seed, args.draws)
        dist = empirical_measure_distance(f, N, spec, bins=args.bins,
                                          grid=args.grid, threads=args.threads)
        rows.append((N, float(dist)))
    path = write_csv(f"{args.out}.csv", ["N", "tv_distance"], rows)
    return [path], {"symbol": args.symbol, "symbol_digest": symbol_digest(f),
                    "N_list": args.N_list, "bins": args.bins, "grid": args.grid,
                    "mode": args.mode, "eta": args.eta, "p": args.p,
                    "draws": args.draws, "master_seed": args.seed}


def _cmd_selftest(args):
    from .selftest import run_selftest
    ok = run_selftest(fast=args.fast, threads=args.threads)
    if not ok:
        raise NumericalError("selftest found failing invariants")
    return [], {"fast": bool(args.fast)}


_COMMANDS = {
    "quantize": _cmd_quantize,
    "spectrum": _cmd_spectrum,
    "weyl-sweep": _cmd_weyl_sweep,
    "kappa-fit": _cmd_kappa_fit,
    "pseudospectrum": _cmd_pseudospectrum,
    "bracket-map": _cmd_bracket_map,
    "rmt-fig3": _cmd_rmt_fig3,
    "contour": _cmd_contour,
    "conjecture": _cmd_conjecture,
    "selftest": _cmd_selftest,
}


def _apply_config(argv: list[str], parser: _Parser) -> list[str]:
    """Prepend config-file values as defaults; explicit flags override."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        raise UsageError("--config requires a file path")
    cfg_path = argv[idx + 1]
    try:
        doc = json.loads(Path(cfg_path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {cfg_path}: {exc}") from exc
    extra: list[str] = []
    for key, value in doc.items():
        flag = "--" + key.replace("_", "-")
        if flag in argv:
            continue
        if isinstance(value, bool):
            if value:
                extra.append(flag)
        else:
            extra.extend([flag, str(value)])
    rest = argv[:idx] + argv[idx + 2:]
    # subcommand must stay first
    if rest and not rest[0].startswith("-"):
        return [rest[0]] + extra + rest[1:]
    return extra + rest


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _apply_config(argv, parser)
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        t0 = time.perf_counter()
        outputs, params = _COMMANDS[args.subcommand](args)
        wall = time.perf_counter() - t0
        params["threads"] = getattr(args, "threads", 1)
        if outputs:
            out_prefix = getattr(args, "out")
            write_run_manifest(out_prefix, args.subcommand, params, outputs,
                               wall, __version__)
        return 0
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except PreconditionError as exc:
        print(f"precondition violation: {exc}", file=sys.stderr)
        return 3
    except (NumericalError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


def rerun_from_manifest(manifest_path, out_prefix) -> int:
    """Re-run an experiment from its manifest's parameter record."""
    man = load_manifest(manifest_path)
    argv = [man.subcommand]
    skip = {"symbol_digest", "kappa_hat", "fit_residual", "n"}
    for key, value in man.params.items():
        if key in skip or value is None:
            continue
        flag = "--" + key.replace("_", "-").replace("master-seed", "seed")
        if isinstance(value, bool):
            if value:
                argv.append(flag)
        else:
            argv.extend([flag, str(value)])
    argv.extend(["--out", str(out_prefix)])
    return main(argv)


def entrypoint():  # console script
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
