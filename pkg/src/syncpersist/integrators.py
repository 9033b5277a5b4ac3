"""Fixed-step explicit Runge-Kutta integration.

RK6 is Butcher's 7-stage sixth-order explicit method; RK4 is the classical
method and serves as a cross-check. Time is advanced as t0 + k*h (no
accumulated addition) and the final partial step lands exactly on t1.

RK6 Butcher tableau (Butcher 1964):

    0    |
    1/3  |  1/3
    2/3  |  0      2/3
    1/3  |  1/12   1/3   -1/12
    1/2  | -1/16   9/8   -3/16  -3/8
    1/2  |  0      9/8   -3/8   -3/4   1/2
    1    |  9/44  -9/11  63/44  18/11   0   -16/11
    -----+---------------------------------------------
         | 11/120   0    27/40  27/40 -4/15 -4/15 11/120
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from .dynamics import BlowUpError

RK4_A = np.array(
    [
        [0.0, 0.0, 0.0, 0.0],
        [0.5, 0.0, 0.0, 0.0],
        [0.0, 0.5, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
    ]
)
RK4_B = np.array([1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0])
RK4_C = np.array([0.0, 0.5, 0.5, 1.0])

RK6_A = np.array(
    [
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [1.0 / 3.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 2.0 / 3.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [1.0 / 12.0, 1.0 / 3.0, -1.0 / 12.0, 0.0, 0.0, 0.0, 0.0],
        [-1.0 / 16.0, 9.0 / 8.0, -3.0 / 16.0, -3.0 / 8.0, 0.0, 0.0, 0.0],
        [0.0, 9.0 / 8.0, -3.0 / 8.0, -3.0 / 4.0, 1.0 / 2.0, 0.0, 0.0],
        [9.0 / 44.0, -9.0 / 11.0, 63.0 / 44.0, 18.0 / 11.0, 0.0, -16.0 / 11.0, 0.0],
    ]
)
RK6_B = np.array(
    [11.0 / 120.0, 0.0, 27.0 / 40.0, 27.0 / 40.0, -4.0 / 15.0, -4.0 / 15.0, 11.0 / 120.0]
)
RK6_C = np.array([0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0, 0.5, 0.5, 1.0])

_TABLEAUS = {"rk4": (RK4_A, RK4_B, RK4_C), "rk6": (RK6_A, RK6_B, RK6_C)}


@dataclass(frozen=True)
class IntegratorConfig:
    h: float = 0.01
    method: str = "rk6"
    sample_stride: int = 1

    def __post_init__(self):
        if self.h <= 0.0:
            raise ValueError("step h must be > 0")
        if self.sample_stride < 1:
            raise ValueError("sample_stride must be >= 1")
        if self.method not in _TABLEAUS:
            raise ValueError(f"unknown method {self.method!r}")


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (n_samples, dim)
    terminated_early: bool = False
    blowup_time: Optional[float] = None


def rk_step(f: Callable, t: float, x: np.ndarray, h: float, method: str = "rk6") -> np.ndarray:
    """One explicit RK step of the chosen tableau."""
    A, B, C = _TABLEAUS[method]
    stages = B.shape[0]
    k = [f(t, x)]
    for s in range(1, stages):
        acc = x.copy()
        for i in range(s):
            a = A[s, i]
            if a != 0.0:
                acc = acc + (h * a) * k[i]
        k.append(f(t + C[s] * h, acc))
    out = x.copy()
    for i in range(stages):
        b = B[i]
        if b != 0.0:
            out = out + (h * b) * k[i]
    return out


def integrate_streaming(
    rhs: Callable,
    x0: np.ndarray,
    t0: float,
    t1: float,
    cfg: IntegratorConfig = IntegratorConfig(),
    observer: Optional[Callable[[float, np.ndarray], None]] = None,
) -> np.ndarray:
    """Fixed-step integration, invoking observer at every sampled step
    (including t0 and the endpoint). Returns the final state.

    Propagates BlowUpError from the RHS: the caller decides semantics.
    """
    if t1 < t0:
        raise ValueError("t1 must be >= t0")
    x = np.array(x0, dtype=np.float64)
    if observer is not None:
        observer(t0, x)
    if t1 == t0:
        return x
    h = cfg.h
    n_full = int(np.floor((t1 - t0) / h + 1e-12))
    t = t0
    for k in range(1, n_full + 1):
        x = rk_step(rhs, t, x, h, cfg.method)
        t = t0 + k * h
        if observer is not None and k % cfg.sample_stride == 0:
            observer(t, x)
    if t < t1 - 1e-12 * max(1.0, abs(t1)):
        x = rk_step(rhs, t, x, t1 - t, cfg.method)
        t = t1
        if observer is not None:
            observer(t, x)
    elif observer is not None and n_full % cfg.sample_stride != 0:
        # endpoint landed on a full step the stride skipped; still report it
        observer(t, x)
    return x


def integrate(
    rhs: Callable,
    x0: np.ndarray,
    t0: float,
    t1: float,
    cfg: IntegratorConfig = IntegratorConfig(),
) -> Trajectory:
    """As integrate_streaming but storing sampled times and states."""
    times: List[float] = []
    states: List[np.ndarray] = []

    def record(t, x):
        times.append(t)
        states.append(x.copy())

    try:
        integrate_streaming(rhs, x0, t0, t1, cfg, record)
    except BlowUpError as exc:
        return Trajectory(
            times=np.array(times),
            states=np.array(states),
            terminated_early=True,
            blowup_time=exc.t,
        )
    return Trajectory(times=np.array(times), states=np.array(states))


def dump_trajectory_csv(traj: Trajectory, n: int, q: int, path) -> None:
    """CSV with header "t,x_1_1,...,x_n_q", one row per sample."""
    header = "t," + ",".join(f"x_{i + 1}_{j + 1}" for i in range(n) for j in range(q))
    with open(path, "w", newline="\n") as fh:
        fh.write(header + "\n")
        for t, x in zip(traj.times, traj.states):
            fh.write(f"{float(t)!r}," + ",".join(repr(float(v)) for v in x) + "\n")
