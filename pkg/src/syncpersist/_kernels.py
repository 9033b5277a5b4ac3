"""Compiled inner loops for the sweep experiments.

A fused RK + online-error kernel for the Lorenz network with identity
coupling. Mirrors the arithmetic of dynamics.network_rhs / integrators so the
generic Python path can be used as an oracle in tests.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from .integrators import RK4_A, RK4_B, RK4_C, RK6_A, RK6_B, RK6_C

BLOWUP_LIMIT = 1e6


@njit(cache=True)
def _lorenz_net_rhs(t, x, out, ei, ej, Rf, Rb, alpha, delta, omega):
    n = x.shape[0]
    for i in range(n):
        out[i, 0] = 10.0 * (x[i, 1] - x[i, 0])
        out[i, 1] = x[i, 0] * (28.0 - x[i, 2]) - x[i, 1]
        out[i, 2] = x[i, 0] * x[i, 1] - (8.0 / 3.0) * x[i, 2]
    if alpha != 0.0:
        c = delta * math.cos(omega * t)
        m = ei.shape[0]
        for e in range(m):
            i = ei[e]
            j = ej[e]
            d0 = x[j, 0] - x[i, 0]
            d1 = x[j, 1] - x[i, 1]
            d2 = x[j, 2] - x[i, 2]
            out[i, 0] += alpha * d0
            out[i, 1] += alpha * d1
            out[i, 2] += alpha * d2
            out[j, 0] -= alpha * d0
            out[j, 1] -= alpha * d1
            out[j, 2] -= alpha * d2
            if c != 0.0:
                ac = alpha * c
                for r in range(3):
                    fwd = Rf[e, r, 0] * d0 + Rf[e, r, 1] * d1 + Rf[e, r, 2] * d2
                    out[i, r] += ac * fwd
                    bwd = Rb[e, r, 0] * d0 + Rb[e, r, 1] * d1 + Rb[e, r, 2] * d2
                    out[j, r] -= ac * bwd


@njit(cache=True)
def _sync_err(x):
    n = x.shape[0]
    if n == 2:
        m = 0.0
        for c in range(3):
            v = abs(x[1, c] - x[0, c])
            if v > m:
                m = v
        return m
    b0 = 0.0
    b1 = 0.0
    b2 = 0.0
    for i in range(n):
        b0 += x[i, 0]
        b1 += x[i, 1]
        b2 += x[i, 2]
    b0 /= n
    b1 /= n
    b2 /= n
    s = 0.0
    for i in range(n):
        m = abs(x[i, 0] - b0)
        v = abs(x[i, 1] - b1)
        if v > m:
            m = v
        v = abs(x[i, 2] - b2)
        if v > m:
            m = v
        if m > s:
            s = m
    return s


@njit(cache=True)
def run_sync_cell(x0, h, nsteps, tau_steps, alpha, delta, omega,
                  ei, ej, Rf, Rb, A, B, C, sentinel):
    """Integrate the Lorenz network over nsteps fixed RK steps from t=0,
    accumulating the synchronization error over steps tau_steps <= k < nsteps.

    Returns (E, blown, t_end). On blow-up E is max(sentinel, partial mean).
    """
    n = x0.shape[0]
    x = x0.copy()
    stages = B.shape[0]
    k = np.empty((stages, n, 3))
    xs = np.empty((n, 3))
    acc = 0.0
    cnt = 0
    if tau_steps <= 0 and nsteps > 0:
        acc += _sync_err(x)
        cnt += 1
    for step in range(1, nsteps + 1):
        t = (step - 1) * h
        _lorenz_net_rhs(t, x, k[0], ei, ej, Rf, Rb, alpha, delta, omega)
        for s in range(1, stages):
            for i in range(n):
                for c in range(3):
                    xs[i, c] = x[i, c]
            for ii in range(s):
                a = A[s, ii]
                if a != 0.0:
                    ha = h * a
                    for i in range(n):
                        for c in range(3):
                            xs[i, c] += ha * k[ii, i, c]
            _lorenz_net_rhs(t + C[s] * h, xs, k[s], ei, ej, Rf, Rb,
                            alpha, delta, omega)
        for s in range(stages):
            b = B[s]
            if b != 0.0:
                hb = h * b
                for i in range(n):
                    for c in range(3):
                        x[i, c] += hb * k[s, i, c]
        blown = False
        for i in range(n):
            for c in range(3):
                v = abs(x[i, c])
                if not (v <= BLOWUP_LIMIT):  # catches NaN too
                    blown = True
        if blown:
            partial = acc / cnt if cnt > 0 else 0.0
            E = sentinel if sentinel > partial else partial
            return E, True, step * h
        if tau_steps <= step < nsteps:
            acc += _sync_err(x)
            cnt += 1
    if cnt == 0:
        return 0.0, False, nsteps * h
    return acc / cnt, False, nsteps * h


def tableau(method: str):
    if method == "rk4":
        return RK4_A, RK4_B, RK4_C
    if method == "rk6":
        return RK6_A, RK6_B, RK6_C
    raise ValueError(f"unknown method {method!r}")


def warmup():
    """Force JIT compilation (or disk-cache load) before forking workers."""
    ei = np.array([0], dtype=np.int64)
    ej = np.array([1], dtype=np.int64)
    R = np.zeros((1, 3, 3))
    x0 = np.zeros((2, 3))
    run_sync_cell(x0, 0.01, 2, 0, 1.0, 0.0, 1.0, ei, ej, R, R,
                  RK6_A, RK6_B, RK6_C, 100.0)
    run_sync_cell(x0, 0.01, 2, 0, 1.0, 0.0, 1.0, ei, ej, R, R,
                  RK4_A, RK4_B, RK4_C, 100.0)
