"""Laplacian spectral quantities and the asymptotic predictions for ER / BA graphs.

The eigensolver is a cyclic Jacobi rotation scheme for dense symmetric matrices
(n up to ~2000 at this scale); only eigenvalues are kept.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .graphs import Graph, is_connected, laplacian


class SpectraError(Exception):
    pass


@njit(cache=True)
def _jacobi_eigenvalues(A, tol_frob):  # pragma: no cover - exercised via wrapper
    n = A.shape[0]
    for _ in range(100):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += A[p, q] * A[p, q]
        if math.sqrt(2.0 * off) <= tol_frob:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                if theta >= 0.0:
                    t = 1.0 / (theta + math.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = A[k, p]
                    akq = A[k, q]
                    A[k, p] = c * akp - s * akq
                    A[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = A[p, k]
                    aqk = A[q, k]
                    A[p, k] = c * apk - s * aqk
                    A[q, k] = s * apk + c * aqk
    return np.sort(np.diag(A))


def eigenvalues_symmetric(M: np.ndarray, rel_tol: float = 1e-12) -> np.ndarray:
    """All real eigenvalues of a symmetric matrix, ascending (cyclic Jacobi).

    Iterates until the off-diagonal Frobenius norm drops below
    rel_tol * ||M||_F. Raises on asymmetric input.
    """
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise SpectraError("matrix must be square")
    scale = max(1.0, float(np.abs(M).max()))
    if np.abs(M - M.T).max() > 1e-12 * scale:
        raise SpectraError("matrix is not symmetric")
    frob = float(np.linalg.norm(M))
    if frob == 0.0:
        return np.zeros(M.shape[0])
    work = np.ascontiguousarray(0.5 * (M + M.T))
    return _jacobi_eigenvalues(work, rel_tol * frob)


def opnorm(M: np.ndarray) -> float:
    """Induced max-row-sum norm (the paper's operator norm convention)."""
    M = np.atleast_2d(np.asarray(M, dtype=np.float64))
    return float(np.abs(M).sum(axis=1).max())


@dataclass(frozen=True)
class SpectralSummary:
    n: int
    eigenvalues: np.ndarray
    lambda2: float
    opnorm: float
    g_max: int
    g_min: int


def summarize(g: Graph) -> SpectralSummary:
    """Full Laplacian spectrum plus lambda2, ||L|| = 2 g_max, degree extremes."""
    if not is_connected(g):
        raise SpectraError("lambda2 undefined/zero: graph is disconnected")
    L = laplacian(g)
    ev = eigenvalues_symmetric(L)
    deg = g.degrees
    return SpectralSummary(
        n=g.n,
        eigenvalues=ev,
        lambda2=float(ev[1]),
        opnorm=opnorm(L),
        g_max=int(deg.max()),
        g_min=int(deg.min()),
    )


def er_a_of_p0(p0: float, tol: float = 1e-10) -> float:
    """Solve p0 - 1 = a * p0 * (1 - log a) for a in (0, 1) by bisection.

    The residual is monotone increasing in a on (0, 1], so bisection is safe.
    """
    if p0 <= 1.0:
        raise SpectraError("p0 must exceed 1")

    def resid(a: float) -> float:
        return a * p0 * (1.0 - math.log(a)) - (p0 - 1.0)

    lo, hi = 1e-300, 1.0
    for _ in range(10000):
        mid = 0.5 * (lo + hi)
        r = resid(mid)
        if abs(r) <= tol:
            return mid
        if r < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def predicted_ratio_er(n: int, p: float) -> float:
    """Asymptotic prediction a(p0) for lambda2 / (n p) on ER graphs,
    with p0 = p n / log n."""
    if n < 2:
        raise SpectraError("n must be at least 2")
    p0 = p * n / math.log(n)
    return er_a_of_p0(p0)


def predicted_delta_scale_ba(n: int) -> float:
    """n^(-1/2) scale factor governing the BA perturbation bound."""
    if n < 2:
        raise SpectraError("n must be at least 2")
    return 1.0 / math.sqrt(n)
