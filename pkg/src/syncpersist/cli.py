"""Command-line entry point.

Subcommands: gen-graph, spectra, bounds, tongue, fastlimit, scaling,
fit-boundary. Grids use start:stop:count syntax (inclusive endpoints).
Flags override --config file values override defaults; SYNCPERSIST_SEED is
the last-resort seed default. Outputs are written atomically (temp + rename)
and every sweep emits a key=value manifest that reproduces the run when
passed back as --config.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Dict, List, Optional

import numpy as np

from . import bounds as bnd
from . import experiments as exp
from . import graphs, spectra


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


def parse_range(text: str) -> np.ndarray:
    """start:stop:count with inclusive endpoints, or a single value."""
    parts = text.split(":")
    if len(parts) == 1:
        return np.array([float(parts[0])])
    if len(parts) != 3:
        raise CliError(f"bad range {text!r}, expected start:stop:count")
    start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    if count < 1:
        raise CliError("range count must be >= 1")
    return np.linspace(start, stop, count)


def atomic_write(path, writer) -> None:
    tmp = str(path) + ".tmp"
    writer(tmp)
    os.replace(tmp, path)


def _merge(args: argparse.Namespace, cfgfile: Dict[str, str], key: str,
           default, cast):
    val = getattr(args, key.replace("-", "_"), None)
    if val is not None:
        return val
    if key in cfgfile:
        raw = cfgfile[key]
        if cast is bool:
            return raw.lower() in ("1", "true", "yes")
        return cast(raw)
    return default


def _load_config(args) -> Dict[str, str]:
    if getattr(args, "config", None):
        return exp.read_manifest(args.config)
    return {}


def _default_seed(cfgfile: Dict[str, str]) -> int:
    if "seed" in cfgfile:
        return int(cfgfile["seed"])
    env = os.environ.get("SYNCPERSIST_SEED")
    return int(env) if env else 0


def _resolve_graph(args, cfgfile) -> graphs.Graph:
    gpath = _merge(args, cfgfile, "graph", None, str)
    if gpath:
        return graphs.read_edgelist(gpath)
    n = _merge(args, cfgfile, "n", 2, int)
    if n == 2:
        return graphs.generate(graphs.GraphRecipe(kind="explicit", n=2,
                                                  edges=((0, 1),)))
    kind = _merge(args, cfgfile, "graph-kind", "complete", str)
    seed = _merge(args, cfgfile, "graph-seed", 0, int)
    p = _merge(args, cfgfile, "p", 0.3, float)
    m0 = _merge(args, cfgfile, "m0", 2, int)
    return graphs.generate(graphs.GraphRecipe(kind=kind, n=n, p=p, m0=m0,
                                              seed=seed))


def _sync_config(args, cfgfile, tau=100.0, T=300.0, ensemble=10,
                 mismatch="edge") -> exp.SyncErrorConfig:
    cfg = exp.SyncErrorConfig(
        tau=_merge(args, cfgfile, "tau", tau, float),
        T=_merge(args, cfgfile, "T", T, float),
        ensemble_size=_merge(args, cfgfile, "ensemble", ensemble, int),
        ic_jitter=_merge(args, cfgfile, "ic-jitter", 0.1, float),
        loss_threshold=_merge(args, cfgfile, "loss-threshold", 10.0, float),
        sync_threshold=_merge(args, cfgfile, "sync-threshold", 1.0, float),
        h=_merge(args, cfgfile, "h", 0.01, float),
        method=_merge(args, cfgfile, "method", "rk6", str),
        mismatch=_merge(args, cfgfile, "mismatch", mismatch, str),
    )
    if _merge(args, cfgfile, "paper-scale", False, bool):
        cfg = exp.paper_scale(cfg)
    return cfg


def _cmd_gen_graph(args) -> int:
    cfgfile = _load_config(args)
    recipe = graphs.GraphRecipe(
        kind=_merge(args, cfgfile, "kind", "er", str),
        n=_merge(args, cfgfile, "n", 100, int),
        p=_merge(args, cfgfile, "p", 0.3, float),
        m0=_merge(args, cfgfile, "m0", 1, int),
        seed=_merge(args, cfgfile, "seed", _default_seed(cfgfile), int),
    )
    g = graphs.generate(recipe)
    out = _merge(args, cfgfile, "out", None, str)
    if out:
        atomic_write(out, lambda p: graphs.write_edgelist(g, p))
    else:
        sys.stdout.write(f"{g.n} {g.m}\n")
        for i, j in sorted(g.edges):
            sys.stdout.write(f"{i + 1} {j + 1}\n")
    return 0


def _cmd_spectra(args) -> int:
    cfgfile = _load_config(args)
    gpath = _merge(args, cfgfile, "graph", None, str)
    if not gpath:
        raise CliError("spectra needs --graph <edge-list file>")
    g = graphs.read_edgelist(gpath)
    s = spectra.summarize(g)
    print(f"{s.n} {s.lambda2:.6f} {int(round(s.opnorm))} {s.g_min} {s.g_max}")
    return 0


def _bound_report(args, cfgfile):
    lambda2 = _merge(args, cfgfile, "lambda2", None, float)
    opn = _merge(args, cfgfile, "opnorm", None, float)
    gamma = _merge(args, cfgfile, "gamma", 1.0, float)
    if lambda2 is None or opn is None:
        raise CliError("bounds needs --lambda2 and --opnorm (or a config file)")
    c1 = _merge(args, cfgfile, "c1", None, float)
    c2 = _merge(args, cfgfile, "c2", None, float)
    if c1 is not None and c2 is not None:
        consts = bnd.constants_from_c(lambda2, opn, gamma, c1, c2,
                                      source="fitted")
    else:
        eta = _merge(args, cfgfile, "eta", None, float)
        K = _merge(args, cfgfile, "K", None, float)
        if eta is None or K is None:
            raise CliError("bounds needs either --c1/--c2 or --eta/--K")
        consts = bnd.DichotomyConstants(eta=eta, K=K, source="config")
    report = bnd.evaluate_bounds(lambda2, opn, gamma, consts)
    return report, consts


def _cmd_bounds(args) -> int:
    cfgfile = _load_config(args)
    report, consts = _bound_report(args, cfgfile)
    delta = _merge(args, cfgfile, "delta", 0.0, float)
    alphas = parse_range(_merge(args, cfgfile, "alpha", "1", str))
    print(f"constants: {consts.source} eta={report.eta!r} K={report.K!r}")
    print(f"alpha_star = {report.alpha_threshold!r}")
    print("alpha,delta_star,nu")
    for a in alphas:
        print(f"{float(a)!r},{report.delta_threshold(float(a))!r},"
              f"{report.nu(float(a), delta)!r}")
    return 0


def _sweep_manifest(args, cfgfile, cfg, seed, omega, workers, extra=None):
    values = {
        "tau": cfg.tau, "T": cfg.T, "ensemble": cfg.ensemble_size,
        "ic-jitter": cfg.ic_jitter, "loss-threshold": cfg.loss_threshold,
        "sync-threshold": cfg.sync_threshold, "h": cfg.h,
        "method": cfg.method, "mismatch": cfg.mismatch,
        "seed": seed, "omega": omega,
        "workers": workers,
        "alpha": _merge(args, cfgfile, "alpha", "0.05:2.05:41", str),
        "delta": _merge(args, cfgfile, "delta", "0:5:26", str),
        "n": _merge(args, cfgfile, "n", 2, int),
    }
    gpath = _merge(args, cfgfile, "graph", None, str)
    if gpath:
        values["graph"] = gpath
    if extra:
        values.update(extra)
    return values


def _run_sweep(args, fast: bool) -> int:
    cfgfile = _load_config(args)
    cfg = _sync_config(args, cfgfile)
    seed = _merge(args, cfgfile, "seed", _default_seed(cfgfile), int)
    omega = _merge(args, cfgfile, "omega", 1000.0 if fast else 1.0, float)
    workers = _merge(args, cfgfile, "workers", 1, int)
    g = _resolve_graph(args, cfgfile)
    alpha_grid = parse_range(_merge(args, cfgfile, "alpha", "0.05:2.05:41", str))
    delta_grid = parse_range(_merge(args, cfgfile, "delta", "0:5:26", str))
    out_csv = _merge(args, cfgfile, "out", "tongue.csv", str)
    precomputed = None
    if getattr(args, "resume", False) and os.path.exists(out_csv):
        precomputed = exp.read_tongue_cells(out_csv, alpha_grid, delta_grid)
    runner = exp.fast_limit_sweep if fast else exp.tongue_sweep
    result = runner(g, alpha_grid, delta_grid, cfg, seed, omega=omega,
                    workers=workers, precomputed=precomputed)
    atomic_write(out_csv, lambda p: exp.write_tongue_csv(result, p))
    manifest = _sweep_manifest(args, cfgfile, cfg, seed, omega, workers,
                               extra={"out": out_csv})
    atomic_write(out_csv + ".manifest",
                 lambda p: exp.write_manifest(p, manifest))
    print(f"wrote {out_csv} ({len(alpha_grid)}x{len(delta_grid)} cells)")
    return 0


def _cmd_tongue(args) -> int:
    return _run_sweep(args, fast=False)


def _cmd_fastlimit(args) -> int:
    return _run_sweep(args, fast=True)


def _cmd_scaling(args) -> int:
    cfgfile = _load_config(args)
    cfg = _sync_config(args, cfgfile, tau=15.0, T=45.0, ensemble=3)
    seed = _merge(args, cfgfile, "seed", _default_seed(cfgfile), int)
    workers = _merge(args, cfgfile, "workers", 1, int)
    kind = _merge(args, cfgfile, "kind", "ba", str)
    n_list_s = _merge(args, cfgfile, "n-list", "50,100,200,400", str)
    n_list = [int(v) for v in n_list_s.split(",")]
    alpha = _merge(args, cfgfile, "alpha", 5.0, float)
    ddelta = _merge(args, cfgfile, "ddelta", 0.05, float)
    graph_seeds = _merge(args, cfgfile, "graph-seeds", 5, int)
    p = _merge(args, cfgfile, "p", 0.3, float)
    m0 = _merge(args, cfgfile, "m0", 2, int)
    omega = _merge(args, cfgfile, "omega", 1.0, float)
    max_delta = _merge(args, cfgfile, "max-delta", 3.5, float)
    coarse = _merge(args, cfgfile, "coarse-factor", 6, int)
    outdir = _merge(args, cfgfile, "out", ".", str)
    os.makedirs(outdir, exist_ok=True)
    result = exp.scaling_study(
        kind, n_list, alpha, cfg, seed, p=p, m0=m0, graph_seeds=graph_seeds,
        ddelta=ddelta, omega=omega, max_delta=max_delta, coarse_factor=coarse,
        workers=workers,
    )
    samples = os.path.join(outdir, "scaling_samples.csv")
    summary = os.path.join(outdir, "scaling_summary.csv")
    fit = os.path.join(outdir, "scaling_fit.csv")
    tmp = [samples + ".tmp", summary + ".tmp", fit + ".tmp"]
    exp.write_scaling_csvs(result, *tmp)
    for t, final in zip(tmp, [samples, summary, fit]):
        os.replace(t, final)
    manifest = {
        "kind": kind, "n-list": n_list_s, "alpha": alpha, "ddelta": ddelta,
        "graph-seeds": graph_seeds, "p": p, "m0": m0, "omega": omega,
        "max-delta": max_delta, "coarse-factor": coarse,
        "seed": seed, "workers": workers,
        "tau": cfg.tau, "T": cfg.T, "ensemble": cfg.ensemble_size,
        "h": cfg.h, "method": cfg.method, "mismatch": cfg.mismatch,
        "out": outdir,
    }
    atomic_write(os.path.join(outdir, "scaling.manifest"),
                 lambda pth: exp.write_manifest(pth, manifest))
    print(f"beta = {result.beta!r} (stderr {result.beta_stderr!r})")
    return 0


def _cmd_fit_boundary(args) -> int:
    cfgfile = _load_config(args)
    csv = _merge(args, cfgfile, "csv", None, str)
    if not csv:
        raise CliError("fit-boundary needs --csv <tongue CSV>")
    result = exp.read_tongue_csv(csv)
    threshold = _merge(args, cfgfile, "sync-threshold", 1.0, float)
    lambda2 = _merge(args, cfgfile, "lambda2", 2.0, float)
    opn = _merge(args, cfgfile, "opnorm", 2.0, float)
    gamma = _merge(args, cfgfile, "gamma", 1.0, float)
    pts = exp.extract_boundary(result, threshold=threshold)
    if len(pts) < 3:
        raise CliError(f"only {len(pts)} boundary points extracted, need >= 3")
    consts, c1, c2 = bnd.fit_constants(pts, lambda2, opn, gamma)
    report = bnd.evaluate_bounds(lambda2, opn, gamma, consts)
    values = {
        "c1": repr(c1), "c2": repr(c2), "K": repr(consts.K),
        "eta": repr(consts.eta), "alpha_star": repr(report.alpha_threshold),
        "rms": repr(consts.fit_rms), "points": len(pts),
        "constants": "fitted",
    }
    out = _merge(args, cfgfile, "out", None, str)
    if out:
        atomic_write(out, lambda p: exp.write_manifest(p, values))
    for k in ("c1", "c2", "K", "eta", "alpha_star", "rms"):
        print(f"{k} = {values[k]}")
    print("constants: fitted")
    return 0


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--out")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="syncpersist")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-graph", help="generate a graph edge-list file")
    _add_common(p)
    p.add_argument("--kind", choices=["er", "ba", "complete", "path", "star"])
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--m0", type=int)
    p.set_defaults(func=_cmd_gen_graph)

    p = sub.add_parser("spectra", help="Laplacian spectral summary of a graph")
    _add_common(p)
    p.add_argument("--graph")
    p.set_defaults(func=_cmd_spectra)

    p = sub.add_parser("bounds", help="persistence thresholds and decay rate")
    _add_common(p)
    p.add_argument("--lambda2", type=float)
    p.add_argument("--opnorm", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--eta", type=float)
    p.add_argument("--K", type=float)
    p.add_argument("--c1", type=float)
    p.add_argument("--c2", type=float)
    p.add_argument("--alpha")
    p.add_argument("--delta", type=float)
    p.set_defaults(func=_cmd_bounds)

    for name, fn in (("tongue", _cmd_tongue), ("fastlimit", _cmd_fastlimit)):
        p = sub.add_parser(name, help=f"{name} sweep over (alpha, delta)")
        _add_common(p)
        p.add_argument("--graph")
        p.add_argument("--n", type=int)
        p.add_argument("--graph-kind")
        p.add_argument("--graph-seed", type=int)
        p.add_argument("--p", type=float)
        p.add_argument("--m0", type=int)
        p.add_argument("--alpha", help="grid start:stop:count")
        p.add_argument("--delta", help="grid start:stop:count")
        p.add_argument("--omega", type=float)
        p.add_argument("--tau", type=float)
        p.add_argument("--T", type=float)
        p.add_argument("--ensemble", type=int)
        p.add_argument("--h", type=float)
        p.add_argument("--method", choices=["rk4", "rk6"])
        p.add_argument("--mismatch", choices=["edge", "shared"])
        p.add_argument("--paper-scale", action="store_const", const=True)
        p.add_argument("--resume", action="store_true")
        p.set_defaults(func=fn)

    p = sub.add_parser("scaling", help="delta_max vs network size study")
    _add_common(p)
    p.add_argument("--kind", choices=["er", "ba"])
    p.add_argument("--n-list")
    p.add_argument("--alpha", type=float)
    p.add_argument("--ddelta", type=float)
    p.add_argument("--graph-seeds", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--m0", type=int)
    p.add_argument("--omega", type=float)
    p.add_argument("--max-delta", type=float)
    p.add_argument("--tau", type=float)
    p.add_argument("--T", type=float)
    p.add_argument("--ensemble", type=int)
    p.add_argument("--h", type=float)
    p.add_argument("--method", choices=["rk4", "rk6"])
    p.add_argument("--mismatch", choices=["edge", "shared"])
    p.add_argument("--coarse-factor", type=int)
    p.add_argument("--paper-scale", action="store_const", const=True)
    p.set_defaults(func=_cmd_scaling)

    p = sub.add_parser("fit-boundary",
                       help="fit delta* = c1 - c2/alpha to a tongue CSV")
    _add_common(p)
    p.add_argument("--csv")
    p.add_argument("--sync-threshold", type=float)
    p.add_argument("--lambda2", type=float)
    p.add_argument("--opnorm", type=float)
    p.add_argument("--gamma", type=float)
    p.set_defaults(func=_cmd_fit_boundary)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (CliError, graphs.GraphError, spectra.SpectraError,
            bnd.BoundsError, exp.ExperimentError, FileNotFoundError) as err:
        sys.stderr.write(f"error: {err}\n")
        return 1
    except Exception as err:  # runtime failure
        sys.stderr.write(f"runtime failure: {err}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
