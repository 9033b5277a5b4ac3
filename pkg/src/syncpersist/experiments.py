"""Sweep experiments: synchronization tongue, fast-oscillation flattening and
delta_max vs network size scaling.

Every cell of a sweep is a pure function of (master seed, experiment id, cell
index, member index): initial-condition jitter and the per-edge mismatch
matrices are drawn from a SeedSequence keyed on that tuple, so any cell can be
recomputed in isolation and results do not depend on worker count or
scheduling.
"""

from __future__ import annotations

import math
import multiprocessing as mp
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import _kernels
from .dynamics import sample_R_arrays
from .graphs import Graph, GraphRecipe, generate, is_connected
from .integrators import Trajectory

EXP_TONGUE = 1
EXP_FAST = 2
EXP_SCALING = 3


class ExperimentError(Exception):
    pass


@dataclass(frozen=True)
class SyncErrorConfig:
    """Desk-scale defaults; paper_scale() restores the published protocol."""

    tau: float = 100.0
    T: float = 300.0
    ensemble_size: int = 10
    ic_base: Tuple[float, float, float] = (-7.0, -10.0, 5.0)
    ic_jitter: float = 0.1
    loss_threshold: float = 10.0
    sync_threshold: float = 1.0
    h: float = 0.01
    method: str = "rk6"
    mismatch: str = "edge"

    def __post_init__(self):
        if not (0.0 < self.tau < self.T):
            raise ExperimentError("need 0 < tau < T")
        if self.ensemble_size < 1:
            raise ExperimentError("ensemble_size must be >= 1")
        if self.ic_jitter < 0.0:
            raise ExperimentError("ic_jitter must be >= 0")
        if self.mismatch not in ("edge", "shared"):
            raise ExperimentError("mismatch must be 'edge' or 'shared'")


def paper_scale(cfg: SyncErrorConfig = SyncErrorConfig()) -> SyncErrorConfig:
    return replace(cfg, tau=1000.0, T=2000.0, ensemble_size=20)


def node_error(x: np.ndarray) -> float:
    """Instantaneous synchronization error: for n=2 the max-norm of
    x_2 - x_1; for n>2 the worst-node max-norm deviation from the
    instantaneous network mean (a single desynchronized node counts as
    loss of synchronization; a node mean would dilute it by 1/n)."""
    n = x.shape[0]
    if n == 2:
        return float(np.abs(x[1] - x[0]).max())
    xb = x.mean(axis=0)
    return float(np.abs(x - xb).max())


def sync_error(traj: Trajectory, cfg: SyncErrorConfig, n: int, q: int = 3) -> float:
    """Time-averaged error over [tau, T) via the rectangle rule on samples.

    Blown-up trajectories return the sentinel max(10*loss_threshold, partial).
    """
    if cfg.tau >= cfg.T:
        raise ExperimentError("need tau < T")
    acc = 0.0
    cnt = 0
    eps = 1e-9
    for t, X in zip(traj.times, traj.states):
        if cfg.tau - eps <= t < cfg.T - eps:
            acc += node_error(X.reshape(n, q))
            cnt += 1
    partial = acc / cnt if cnt else 0.0
    if traj.terminated_early:
        return max(10.0 * cfg.loss_threshold, partial)
    return partial


class SyncErrorAccumulator:
    """Online version of sync_error for streaming integration."""

    def __init__(self, cfg: SyncErrorConfig, n: int, q: int = 3):
        self.cfg = cfg
        self.n = n
        self.q = q
        self.acc = 0.0
        self.cnt = 0

    def observe(self, t: float, X: np.ndarray) -> None:
        eps = 1e-9
        if self.cfg.tau - eps <= t < self.cfg.T - eps:
            self.acc += node_error(X.reshape(self.n, self.q))
            self.cnt += 1

    def value(self) -> float:
        return self.acc / self.cnt if self.cnt else 0.0


def member_seed_sequence(master_seed: int, key: Sequence[int]) -> np.random.SeedSequence:
    """Splittable counter-style derivation: any (experiment, cell, member)
    stream is recomputable in isolation."""
    return np.random.SeedSequence(
        entropy=int(master_seed), spawn_key=tuple(int(v) for v in key)
    )


# Real-axis stability limit shared by both tableaus (the classical fourth
# order method has the smaller interval, |z| < 2.785), with a safety factor.
_STAB_LIMIT = 0.8 * 2.785


def laplacian_spectral_radius(graph: Graph, iters: int = 60) -> float:
    """Largest Laplacian eigenvalue by deterministic power iteration (the
    Laplacian is positive semidefinite, so its largest eigenvalue dominates).
    Used only to bound the stable step size; padded by the final Rayleigh
    residual so slight underestimates cannot sneak past the stability limit."""
    n = graph.n
    if n < 2 or not graph.edges:
        return 0.0
    deg = graph.degrees.astype(np.float64)
    und = graph.edge_array()
    v = np.cos(np.arange(n, dtype=np.float64))  # fixed, not axis-aligned
    v /= np.linalg.norm(v)
    lam = float(deg.max())
    for _ in range(iters):
        w = deg * v
        np.subtract.at(w, und[:, 0], v[und[:, 1]])
        np.subtract.at(w, und[:, 1], v[und[:, 0]])
        lam = np.linalg.norm(w)
        if lam == 0.0:
            return 0.0
        v = w / lam
    # residual pad: ||L v - lam v|| bounds the distance to the spectrum
    w = deg * v
    np.subtract.at(w, und[:, 0], v[und[:, 1]])
    np.subtract.at(w, und[:, 1], v[und[:, 0]])
    return float(lam + np.linalg.norm(w - lam * v))


def effective_step(
    cfg: SyncErrorConfig,
    omega: float,
    alpha: float = 0.0,
    delta: float = 0.0,
    lap_radius: float = 0.0,
) -> Tuple[float, int, int]:
    """Step resolving the perturbation frequency (>= 20 samples per period)
    and the explicit-method stability limit of the coupling term, adjusted so
    T is an exact number of steps. Returns (h, nsteps, tau_steps)."""
    h = cfg.h
    if omega > 0.0:
        h = min(h, (2.0 * math.pi / omega) / 20.0)
    rate = alpha * (1.0 + delta) * lap_radius
    if rate > 0.0:
        h = min(h, _STAB_LIMIT / rate)
    nsteps = int(math.ceil(cfg.T / h - 1e-9))
    h = cfg.T / nsteps
    tau_steps = int(round(cfg.tau / h))
    return h, nsteps, tau_steps


def run_member(
    graph: Graph,
    alpha: float,
    delta: float,
    omega: float,
    cfg: SyncErrorConfig,
    ss: np.random.SeedSequence,
) -> Tuple[float, bool]:
    """One trajectory of the Lorenz network with identity coupling: draws the
    IC jitter then the mismatch matrices from ss, integrates with the fused
    kernel, returns (E, blown)."""
    n = graph.n
    rng = np.random.default_rng(ss)
    x0 = np.array(cfg.ic_base) + cfg.ic_jitter * rng.random((n, 3))
    und = graph.edge_array()
    m = und.shape[0]
    if delta != 0.0:
        if cfg.mismatch == "shared":
            R1f, _ = sample_R_arrays(1, 3, rng)
            Rf = np.ascontiguousarray(np.broadcast_to(R1f[0], (m, 3, 3)))
            Rb = Rf
        else:
            Rf, Rb = sample_R_arrays(m, 3, rng)
    else:
        Rf = np.zeros((m, 3, 3))
        Rb = Rf
    h, nsteps, tau_steps = effective_step(
        cfg, omega, alpha=alpha, delta=delta,
        lap_radius=laplacian_spectral_radius(graph),
    )
    A, B, C = _kernels.tableau(cfg.method)
    E, blown, _ = _kernels.run_sync_cell(
        x0, h, nsteps, tau_steps, alpha, delta, omega,
        np.ascontiguousarray(und[:, 0]), np.ascontiguousarray(und[:, 1]),
        Rf, Rb, A, B, C, 10.0 * cfg.loss_threshold,
    )
    return float(E), bool(blown)


def run_cell(
    graph: Graph,
    alpha: float,
    delta: float,
    omega: float,
    cfg: SyncErrorConfig,
    master_seed: int,
    key: Sequence[int],
) -> Tuple[float, int]:
    """Ensemble-averaged error E_a for one sweep cell. key identifies the
    cell (without the member index)."""
    es = []
    blowups = 0
    for member in range(cfg.ensemble_size):
        ss = member_seed_sequence(master_seed, tuple(key) + (member,))
        E, blown = run_member(graph, alpha, delta, omega, cfg, ss)
        es.append(E)
        blowups += int(blown)
    return float(np.mean(es)), blowups


@dataclass
class SweepResult:
    alpha_grid: np.ndarray
    delta_grid: np.ndarray
    Ea: np.ndarray  # shape (n_alpha, n_delta)
    blowups: np.ndarray
    omega: float
    master_seed: int
    exp_id: int


_WORKER_CTX: dict = {}


def _init_sweep_worker(graph, cfg, omega, master_seed, exp_id, alpha_grid, delta_grid):
    _WORKER_CTX.update(
        graph=graph, cfg=cfg, omega=omega, master_seed=master_seed,
        exp_id=exp_id, alpha_grid=alpha_grid, delta_grid=delta_grid,
    )


def _sweep_cell_task(cell_index: int) -> Tuple[int, float, int]:
    g = _WORKER_CTX["graph"]
    cfg = _WORKER_CTX["cfg"]
    alpha_grid = _WORKER_CTX["alpha_grid"]
    delta_grid = _WORKER_CTX["delta_grid"]
    nd = len(delta_grid)
    ia, idx = divmod(cell_index, nd)
    Ea, blow = run_cell(
        g, float(alpha_grid[ia]), float(delta_grid[idx]), _WORKER_CTX["omega"],
        cfg, _WORKER_CTX["master_seed"], (_WORKER_CTX["exp_id"], cell_index),
    )
    return cell_index, Ea, blow


def tongue_sweep(
    graph: Graph,
    alpha_grid: Sequence[float],
    delta_grid: Sequence[float],
    cfg: SyncErrorConfig,
    master_seed: int,
    omega: float = 1.0,
    workers: int = 1,
    exp_id: int = EXP_TONGUE,
    precomputed: Optional[Dict[int, Tuple[float, int]]] = None,
) -> SweepResult:
    """Grid of ensemble-averaged synchronization errors over (alpha, delta).

    Cells are independent; the result is identical for any worker count.
    precomputed maps cell_index -> (Ea, blowups) for resumed runs.
    """
    if not is_connected(graph):
        raise ExperimentError("graph must be connected")
    alpha_grid = np.asarray(alpha_grid, dtype=np.float64)
    delta_grid = np.asarray(delta_grid, dtype=np.float64)
    na, nd = len(alpha_grid), len(delta_grid)
    Ea = np.empty((na, nd))
    blowups = np.zeros((na, nd), dtype=np.int64)
    done = dict(precomputed or {})
    todo = [c for c in range(na * nd) if c not in done]
    _kernels.warmup()
    if workers > 1 and len(todo) > 1:
        ctx = mp.get_context("fork")
        with ctx.Pool(
            processes=workers,
            initializer=_init_sweep_worker,
            initargs=(graph, cfg, omega, master_seed, exp_id, alpha_grid, delta_grid),
        ) as pool:
            for cell, e, b in pool.imap_unordered(_sweep_cell_task, todo, chunksize=4):
                done[cell] = (e, b)
    else:
        _init_sweep_worker(graph, cfg, omega, master_seed, exp_id, alpha_grid, delta_grid)
        for cell in todo:
            _, e, b = _sweep_cell_task(cell)
            done[cell] = (e, b)
    for cell, (e, b) in done.items():
        ia, idx = divmod(cell, nd)
        Ea[ia, idx] = e
        blowups[ia, idx] = b
    return SweepResult(alpha_grid, delta_grid, Ea, blowups, omega, master_seed, exp_id)


def fast_limit_sweep(
    graph: Graph,
    alpha_grid: Sequence[float],
    delta_grid: Sequence[float],
    cfg: SyncErrorConfig,
    master_seed: int,
    omega: float = 1000.0,
    workers: int = 1,
    precomputed: Optional[Dict[int, Tuple[float, int]]] = None,
) -> SweepResult:
    """Tongue sweep with fast-oscillating perturbations (its own seed stream)."""
    return tongue_sweep(
        graph, alpha_grid, delta_grid, cfg, master_seed,
        omega=omega, workers=workers, exp_id=EXP_FAST, precomputed=precomputed,
    )


def extract_boundary(result: SweepResult,
                     threshold: Optional[float] = None,
                     cfg: Optional[SyncErrorConfig] = None
                     ) -> List[Tuple[float, float]]:
    """Per alpha column: the midpoint between the last synchronized and first
    desynchronized delta cell. Columns without a crossing inside the grid
    (never synchronized, or synchronized everywhere) are skipped."""
    if threshold is None:
        threshold = (cfg or SyncErrorConfig()).sync_threshold
    pts = []
    for ia, alpha in enumerate(result.alpha_grid):
        col = result.Ea[ia]
        if col[0] > threshold:
            continue
        cross = None
        for idx in range(1, len(col)):
            if col[idx] > threshold:
                cross = idx
                break
        if cross is None:
            continue
        dmid = 0.5 * (result.delta_grid[cross - 1] + result.delta_grid[cross])
        pts.append((float(alpha), float(dmid)))
    return pts


@dataclass
class DeltaMaxResult:
    delta_max: float
    censored: bool  # scan hit max_delta without losing synchronization
    evaluations: Dict[int, float] = field(default_factory=dict)


def delta_max_search(
    graph: Graph,
    alpha: float,
    ddelta: float,
    cfg: SyncErrorConfig,
    master_seed: int,
    omega: float = 1.0,
    max_delta: float = 10.0,
    coarse_factor: int = 5,
    scan_key: Sequence[int] = (),
    ea_fn=None,
) -> DeltaMaxResult:
    """Largest perturbation before synchronization loss: the smallest grid
    point k*ddelta whose E_a reaches loss_threshold, minus ddelta.

    The delta=0 run must synchronize (E_a <= sync_threshold), else an error is
    raised. A coarse bracketing pass (stride coarse_factor) narrows the scan
    before the fine ddelta-resolution pass; coarse_factor=1 is the plain scan.
    """
    if ddelta <= 0.0:
        raise ExperimentError("ddelta must be > 0")
    cache: Dict[int, float] = {}

    def ea(k: int) -> float:
        if k not in cache:
            if ea_fn is not None:
                cache[k] = float(ea_fn(k * ddelta))
            else:
                e, _ = run_cell(
                    graph, alpha, k * ddelta, omega, cfg, master_seed,
                    (EXP_SCALING,) + tuple(scan_key) + (k,),
                )
                cache[k] = e
        return cache[k]

    if ea(0) > cfg.sync_threshold:
        raise ExperimentError(
            f"alpha below threshold: E_a(delta=0) = {ea(0):.3f} "
            f"> {cfg.sync_threshold}"
        )
    kmax = int(math.floor(max_delta / ddelta + 1e-9))
    cf = max(1, int(coarse_factor))
    k_cross = None
    k_coarse = cf
    while k_coarse <= kmax:
        if ea(k_coarse) >= cfg.loss_threshold:
            # fine scan inside the bracket; first crossing wins
            for k in range(k_coarse - cf + 1, k_coarse + 1):
                if ea(k) >= cfg.loss_threshold:
                    k_cross = k
                    break
            break
        k_coarse += cf
    else:
        # remaining tail shorter than one coarse stride
        for k in range(k_coarse - cf + 1, kmax + 1):
            if ea(k) >= cfg.loss_threshold:
                k_cross = k
                break
    if k_cross is None:
        return DeltaMaxResult(delta_max=kmax * ddelta, censored=True,
                              evaluations=cache)
    return DeltaMaxResult(delta_max=(k_cross - 1) * ddelta, censored=False,
                          evaluations=cache)


@dataclass
class ScalingSample:
    n: int
    graph_seed: int
    delta_max: float
    censored: bool
    failed: bool  # delta=0 precheck failed


@dataclass
class ScalingResult:
    kind: str
    n_list: List[int]
    alpha: float
    ddelta: float
    samples: List[ScalingSample]
    medians: Dict[int, float]
    beta: float
    beta_stderr: float
    excluded: List[int]


def _graph_for_scaling(kind: str, n: int, p: float, m0: int,
                       master_seed: int, n_idx: int, gs: int) -> Graph:
    ss = member_seed_sequence(master_seed, (EXP_SCALING, 999, n_idx, gs))
    gseed = int(ss.generate_state(1, dtype=np.uint64)[0])
    if kind == "er":
        return generate(GraphRecipe(kind="er", n=n, p=p, seed=gseed))
    if kind == "ba":
        return generate(GraphRecipe(kind="ba", n=n, m0=m0, seed=gseed))
    raise ExperimentError(f"unknown scaling kind {kind!r}")


def _scaling_task(args) -> ScalingSample:
    (kind, n, p, m0, n_idx, gs, alpha, ddelta, cfg, master_seed,
     omega, max_delta, coarse_factor) = args
    g = _graph_for_scaling(kind, n, p, m0, master_seed, n_idx, gs)
    try:
        res = delta_max_search(
            g, alpha, ddelta, cfg, master_seed, omega=omega,
            max_delta=max_delta, coarse_factor=coarse_factor,
            scan_key=(n_idx, gs),
        )
    except ExperimentError:
        return ScalingSample(n=n, graph_seed=gs, delta_max=0.0,
                             censored=False, failed=True)
    return ScalingSample(n=n, graph_seed=gs, delta_max=res.delta_max,
                         censored=res.censored, failed=False)


def fit_powerlaw(ns: Sequence[float], values: Sequence[float]) -> Tuple[float, float]:
    """Least-squares fit value ~ n^(-beta) in log10-log10. Returns
    (beta, stderr of beta)."""
    x = np.log10(np.asarray(ns, dtype=np.float64))
    y = np.log10(np.asarray(values, dtype=np.float64))
    if len(x) < 2 or np.ptp(x) == 0.0:
        raise ExperimentError("need >= 2 distinct n values for the fit")
    X = np.column_stack([np.ones_like(x), x])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    slope = float(coef[1])
    resid = y - X @ coef
    dof = len(x) - 2
    if dof > 0:
        s2 = float(resid @ resid) / dof
        stderr = math.sqrt(s2 / float(((x - x.mean()) ** 2).sum()))
    else:
        stderr = 0.0
    return -slope, stderr


def scaling_study(
    kind: str,
    n_list: Sequence[int],
    alpha: float,
    cfg: SyncErrorConfig,
    master_seed: int,
    p: float = 0.3,
    m0: int = 2,
    graph_seeds: int = 5,
    ddelta: float = 0.05,
    omega: float = 1.0,
    max_delta: float = 10.0,
    coarse_factor: int = 5,
    workers: int = 1,
) -> ScalingResult:
    """delta_max per (n, graph seed), per-n medians, and the fitted exponent
    beta of delta_max ~ n^(-beta) on the medians.

    n values whose every sample fails the delta=0 precheck (or whose median
    delta_max is 0) are excluded from the fit and reported.
    """
    tasks = [
        (kind, int(n), p, m0, n_idx, gs, alpha, ddelta, cfg, master_seed,
         omega, max_delta, coarse_factor)
        for n_idx, n in enumerate(n_list)
        for gs in range(graph_seeds)
    ]
    _kernels.warmup()
    if workers > 1 and len(tasks) > 1:
        ctx = mp.get_context("fork")
        with ctx.Pool(processes=workers) as pool:
            samples = pool.map(_scaling_task, tasks)
    else:
        samples = [_scaling_task(t) for t in tasks]
    medians: Dict[int, float] = {}
    excluded: List[int] = []
    for n in n_list:
        vals = [s.delta_max for s in samples if s.n == n and not s.failed]
        if not vals:
            excluded.append(int(n))
            continue
        medians[int(n)] = float(np.median(vals))
    fit_ns = [n for n in medians if medians[n] > 0.0]
    excluded += [n for n in medians if medians[n] <= 0.0]
    beta, stderr = fit_powerlaw(fit_ns, [medians[n] for n in fit_ns])
    return ScalingResult(
        kind=kind, n_list=[int(n) for n in n_list], alpha=alpha, ddelta=ddelta,
        samples=samples, medians=medians, beta=beta, beta_stderr=stderr,
        excluded=sorted(set(excluded)),
    )


# ---------------------------------------------------------------------------
# CSV / manifest I/O (LF line endings, '.' decimal, header row)

def write_tongue_csv(result: SweepResult, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write("alpha,delta,Ea,blowups\n")
        for ia, a in enumerate(result.alpha_grid):
            for idx, d in enumerate(result.delta_grid):
                fh.write(f"{float(a)!r},{float(d)!r},"
                         f"{float(result.Ea[ia, idx])!r},"
                         f"{int(result.blowups[ia, idx])}\n")


def read_tongue_csv(path) -> SweepResult:
    alphas: List[float] = []
    deltas: List[float] = []
    rows = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "alpha,delta,Ea,blowups":
            raise ExperimentError(f"unexpected tongue CSV header: {header!r}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            a, d, e, b = line.split(",")
            rows.append((float(a), float(d), float(e), int(b)))
    alphas = sorted({r[0] for r in rows})
    deltas = sorted({r[1] for r in rows})
    if len(rows) != len(alphas) * len(deltas):
        raise ExperimentError("ragged tongue grid in CSV")
    ai = {a: i for i, a in enumerate(alphas)}
    di = {d: i for i, d in enumerate(deltas)}
    Ea = np.full((len(alphas), len(deltas)), np.nan)
    blow = np.zeros((len(alphas), len(deltas)), dtype=np.int64)
    for a, d, e, b in rows:
        Ea[ai[a], di[d]] = e
        blow[ai[a], di[d]] = b
    return SweepResult(np.array(alphas), np.array(deltas), Ea, blow,
                       omega=float("nan"), master_seed=-1, exp_id=-1)


def read_tongue_cells(path, alpha_grid, delta_grid) -> Dict[int, Tuple[float, int]]:
    """Map completed rows of an existing CSV to cell indices for --resume."""
    done: Dict[int, Tuple[float, int]] = {}
    key = {(repr(float(a)), repr(float(d))): ia * len(delta_grid) + idx
           for ia, a in enumerate(alpha_grid)
           for idx, d in enumerate(delta_grid)}
    with open(path) as fh:
        fh.readline()
        for line in fh:
            line = line.strip()
            if not line:
                continue
            a, d, e, b = line.split(",")
            cell = key.get((repr(float(a)), repr(float(d))))
            if cell is not None:
                done[cell] = (float(e), int(b))
    return done


def write_scaling_csvs(result: ScalingResult, samples_path, summary_path,
                       fit_path) -> None:
    with open(samples_path, "w", newline="\n") as fh:
        fh.write("n,graph_seed,delta_max\n")
        for s in result.samples:
            fh.write(f"{s.n},{s.graph_seed},{float(s.delta_max)!r}\n")
    with open(summary_path, "w", newline="\n") as fh:
        fh.write("n,delta_max_median\n")
        for n in result.n_list:
            if n in result.medians:
                fh.write(f"{n},{float(result.medians[n])!r}\n")
    with open(fit_path, "w", newline="\n") as fh:
        fh.write("beta,stderr\n")
        fh.write(f"{float(result.beta)!r},{float(result.beta_stderr)!r}\n")


def write_manifest(path, values: Dict[str, object]) -> None:
    """Plain key=value reproducibility record (parseable as a config file)."""
    with open(path, "w", newline="\n") as fh:
        for k in sorted(values):
            fh.write(f"{k} = {values[k]}\n")


def read_manifest(path) -> Dict[str, str]:
    out: Dict[str, str] = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ExperimentError(f"bad config line: {line!r}")
            k, v = line.split("=", 1)
            out[k.strip()] = v.strip()
    return out
