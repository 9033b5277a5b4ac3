"""Closed-form persistence thresholds and asymptotics.

Coupling threshold     alpha* = eta / (lambda2 gamma)
Perturbation threshold delta*(alpha) = (lambda2 gamma - eta/alpha) / (K ||L||)
Decay rate             nu(alpha, delta) = alpha (lambda2 gamma - delta K ||L||) - eta

The mismatch enters the variational operator premultiplied by the coupling
strength, so the decay rate loses alpha * delta K ||L||; nu vanishes exactly
on the persistence boundary delta = delta*(alpha).

The dichotomy constants eta and K are not computable from first principles;
they are either user config or fitted from a measured tongue boundary via the
equivalent parameterization delta* = c1 - c2/alpha with
c1 = lambda2 gamma / (K ||L||) and c2 = eta / (K ||L||).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np


class BoundsError(Exception):
    pass


@dataclass(frozen=True)
class DichotomyConstants:
    eta: float
    K: float
    source: str = "config"  # "config" | "fitted"
    fit_rms: float = 0.0

    def __post_init__(self):
        if self.eta <= 0.0 or self.K <= 0.0:
            raise BoundsError("eta and K must be positive")


@dataclass(frozen=True)
class BoundReport:
    lambda2: float
    opnorm: float
    gamma: float
    eta: float
    K: float

    @property
    def alpha_threshold(self) -> float:
        return self.eta / (self.lambda2 * self.gamma)

    @property
    def c1(self) -> float:
        return self.lambda2 * self.gamma / (self.K * self.opnorm)

    @property
    def c2(self) -> float:
        return self.eta / (self.K * self.opnorm)

    def delta_threshold(self, alpha: float) -> float:
        if alpha <= 0.0:
            raise BoundsError("alpha must be > 0")
        return (self.lambda2 * self.gamma - self.eta / alpha) / (self.K * self.opnorm)

    def nu(self, alpha: float, delta: float) -> float:
        return alpha * (self.lambda2 * self.gamma - delta * self.K * self.opnorm) - self.eta


def evaluate_bounds(lambda2: float, opnorm: float, gamma: float,
                    consts: DichotomyConstants) -> BoundReport:
    if lambda2 <= 0.0 or opnorm <= 0.0 or gamma <= 0.0:
        raise BoundsError("lambda2, opnorm and gamma must be positive")
    return BoundReport(lambda2=lambda2, opnorm=opnorm, gamma=gamma,
                       eta=consts.eta, K=consts.K)


def constants_from_c(lambda2: float, opnorm: float, gamma: float,
                     c1: float, c2: float, source: str = "config",
                     fit_rms: float = 0.0) -> DichotomyConstants:
    """Invert c1 = lambda2 gamma/(K ||L||), c2 = eta/(K ||L||)."""
    if c1 <= 0.0 or c2 <= 0.0:
        raise BoundsError("c1 and c2 must be positive")
    K = lambda2 * gamma / (c1 * opnorm)
    eta = c2 * K * opnorm
    return DichotomyConstants(eta=eta, K=K, source=source, fit_rms=fit_rms)


def fit_constants(boundary_points: Sequence[Tuple[float, float]],
                  lambda2: float, opnorm: float, gamma: float
                  ) -> Tuple[DichotomyConstants, float, float]:
    """Least-squares fit of delta* = c1 - c2/alpha to measured boundary points.

    Returns (constants, c1, c2); linear in the design (1, -1/alpha).
    """
    pts = [(float(a), float(d)) for a, d in boundary_points]
    if len(pts) < 2:
        raise BoundsError("need at least 2 boundary points")
    alphas = np.array([a for a, _ in pts])
    deltas = np.array([d for _, d in pts])
    if np.ptp(alphas) == 0.0:
        raise BoundsError("rank-deficient fit: all alpha values equal")
    X = np.column_stack([np.ones_like(alphas), -1.0 / alphas])
    coef, *_ = np.linalg.lstsq(X, deltas, rcond=None)
    c1, c2 = float(coef[0]), float(coef[1])
    resid = deltas - X @ coef
    rms = float(np.sqrt(np.mean(resid**2)))
    consts = constants_from_c(lambda2, opnorm, gamma, c1, c2,
                              source="fitted", fit_rms=rms)
    return consts, c1, c2


def corollary_er_bound(gamma: float, K: float) -> float:
    """Large-alpha, large-n ER bound K0 = gamma / K (n-independent)."""
    if gamma <= 0.0 or K <= 0.0:
        raise BoundsError("gamma and K must be positive")
    return gamma / K


def corollary_ba_bound(n: int, gamma: float, K: float, mu: float,
                       m_tilde: float) -> float:
    """Large-alpha BA bound K1 n^(-1/2) with K1 = gamma m_tilde / (2 mu K)."""
    if min(gamma, K, mu, m_tilde) <= 0.0:
        raise BoundsError("all constants must be positive")
    if n < 2:
        raise BoundsError("n must be at least 2")
    K1 = gamma * m_tilde / (2.0 * mu * K)
    return K1 / np.sqrt(n)


def ba_m_tilde_default(n: int, m0: int) -> float:
    """Fiedler-bound value (n/(n-1)) m0 used as the default for m_tilde."""
    return n / (n - 1.0) * m0


def fast_omega0(delta: float, c: float) -> float:
    """Minimal frequency omega0 = 2|delta|/c making the windowed integral of
    delta cos(omega t) R smaller than c."""
    if c <= 0.0:
        raise BoundsError("c must be > 0")
    if delta < 0.0:
        raise BoundsError("delta must be >= 0")
    return 2.0 * delta / c


def fast_integral_bound(delta: float, omega: float) -> float:
    """Bound 2|delta|/omega on || int_{t1}^{t2} delta cos(omega t) R dt ||."""
    if omega <= 0.0:
        raise BoundsError("omega must be > 0")
    return 2.0 * abs(delta) / omega
