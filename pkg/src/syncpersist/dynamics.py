"""Node dynamics (Lorenz), perturbed diffusive coupling, network RHS and the
variational operator near the synchronization manifold.

Coupling between connected nodes i, j acts on the difference x_j - x_i through
Gamma + P_ij(t), with P_ij(t) = delta * cos(omega t) * R_ij and R_ij a random
matrix normalized to unit max-row-sum norm. Two mismatch ensembles are
provided: Haar-random orthogonal matrices (the default, used in all
experiments) and symmetric GOE matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from .graphs import Graph
from .spectra import eigenvalues_symmetric, opnorm

BLOWUP_LIMIT = 1e6


class BlowUpError(Exception):
    """Raised when a state component leaves the working domain (|x| > 1e6)."""

    def __init__(self, t: float):
        super().__init__(f"blow-up detected at t={t}")
        self.t = t


def lorenz_rhs(x: np.ndarray) -> np.ndarray:
    """Lorenz vector field with parameters (10, 28, 8/3)."""
    return np.array(
        [
            10.0 * (x[1] - x[0]),
            x[0] * (28.0 - x[2]) - x[1],
            x[0] * x[1] - (8.0 / 3.0) * x[2],
        ]
    )


def lorenz_jacobian(x: np.ndarray) -> np.ndarray:
    return np.array(
        [
            [-10.0, 10.0, 0.0],
            [28.0 - x[2], -1.0, -x[0]],
            [x[1], x[0], -8.0 / 3.0],
        ]
    )


@dataclass(frozen=True)
class OscillatorModel:
    q: int
    rhs: Callable[[np.ndarray], np.ndarray]
    jacobian: Callable[[np.ndarray], np.ndarray]
    name: str
    jacobian_bound: Optional[float] = None


def lorenz_model() -> OscillatorModel:
    return OscillatorModel(q=3, rhs=lorenz_rhs, jacobian=lorenz_jacobian, name="lorenz")


def sample_goe_unit(q: int, rng: np.random.Generator) -> np.ndarray:
    """One q x q GOE matrix (off-diagonal variance 1, diagonal variance 2)
    divided by its max-row-sum norm."""
    while True:
        G = rng.standard_normal((q, q))
        S = (G + G.T) / math.sqrt(2.0)
        nrm = np.abs(S).sum(axis=1).max()
        if nrm > 0.0:  # zero draw has probability 0
            return S / nrm


def sample_orthogonal_unit(q: int, rng: np.random.Generator) -> np.ndarray:
    """One Haar-random q x q orthogonal matrix divided by its max-row-sum
    norm (QR of a Gaussian matrix with the sign convention diag(R) > 0)."""
    G = rng.standard_normal((q, q))
    Q, R = np.linalg.qr(G)
    Q = Q * np.sign(np.diag(R))
    return Q / np.abs(Q).sum(axis=1).max()


_SAMPLERS = {"orthogonal": sample_orthogonal_unit, "goe": sample_goe_unit}


def sample_R_arrays(
    m: int,
    q: int,
    rng: np.random.Generator,
    symmetric_mismatch: bool = False,
    ensemble: str = "orthogonal",
) -> Tuple[np.ndarray, np.ndarray]:
    """(Rf, Rb) arrays of shape (m, q, q): forward / backward matrices per
    undirected edge, drawn forward-then-backward in edge order."""
    try:
        draw = _SAMPLERS[ensemble]
    except KeyError:
        raise ValueError(f"unknown mismatch ensemble {ensemble!r}") from None
    Rf = np.empty((m, q, q))
    Rb = np.empty((m, q, q))
    for k in range(m):
        Rf[k] = draw(q, rng)
        Rb[k] = Rf[k] if symmetric_mismatch else draw(q, rng)
    return Rf, Rb


def sample_perturbation_matrices(
    graph: Graph,
    q: int,
    seed,
    symmetric_mismatch: bool = False,
    ensemble: str = "orthogonal",
) -> Dict[Tuple[int, int], np.ndarray]:
    """One q x q unit-norm mismatch matrix per ordered connected pair (i, j).

    ensemble selects the draw: "orthogonal" (Haar-random orthogonal, the
    default) or "goe" (symmetric Gaussian); either way the matrix is divided
    by its max-row-sum norm. Deterministic given the seed; with
    symmetric_mismatch the reverse orientation reuses the same matrix
    (R_ji = R_ij).
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    rng = np.random.default_rng(seed)
    und = graph.edge_array()
    Rf, Rb = sample_R_arrays(und.shape[0], q, rng, symmetric_mismatch, ensemble)
    out: Dict[Tuple[int, int], np.ndarray] = {}
    for k, (i, j) in enumerate(und):
        out[(int(i), int(j))] = Rf[k]
        out[(int(j), int(i))] = Rb[k]
    return out


@dataclass(frozen=True)
class CouplingSpec:
    """Gamma + per-edge mismatch family P_ij(t) = delta cos(omega t) R_ij."""

    q: int
    delta: float = 0.0
    omega: float = 1.0
    Gamma: Optional[np.ndarray] = None
    gamma: Optional[float] = None
    R: Dict[Tuple[int, int], np.ndarray] = field(default_factory=dict)
    seed: Optional[int] = None

    def __post_init__(self):
        if self.delta < 0.0:
            raise ValueError("delta must be >= 0")
        if self.omega <= 0.0:
            raise ValueError("omega must be > 0")
        Gamma = self.Gamma
        if Gamma is None:
            Gamma = np.eye(self.q)
        Gamma = np.asarray(Gamma, dtype=np.float64)
        object.__setattr__(self, "Gamma", Gamma)
        gamma = self.gamma
        if gamma is None:
            if np.abs(Gamma - Gamma.T).max() <= 1e-12 * max(1.0, opnorm(Gamma)):
                gamma = float(eigenvalues_symmetric(Gamma)[0])
            else:
                raise ValueError("gamma must be supplied for non-symmetric Gamma")
        if gamma <= 0.0:
            raise ValueError("gamma must be > 0 (all Re eigenvalues of Gamma positive)")
        object.__setattr__(self, "gamma", float(gamma))
        for key, M in self.R.items():
            nrm = opnorm(M)
            if abs(nrm - 1.0) > 1e-12:
                raise ValueError(f"R{key} has max-row-sum norm {nrm}, expected 1")

    def perturbation(self, i: int, j: int, t: float) -> np.ndarray:
        """P_ij(t) = delta cos(omega t) R_ij."""
        return self.delta * math.cos(self.omega * t) * self.R[(i, j)]


def identity_coupling(
    graph: Graph,
    q: int,
    delta: float,
    omega: float = 1.0,
    seed=0,
    symmetric_mismatch: bool = False,
    ensemble: str = "orthogonal",
) -> CouplingSpec:
    """H = identity plus random mismatches, the setup used in all experiments."""
    R = {}
    if delta != 0.0:
        R = sample_perturbation_matrices(graph, q, seed, symmetric_mismatch,
                                         ensemble)
    return CouplingSpec(q=q, delta=delta, omega=omega, R=R, seed=seed)


@dataclass(frozen=True)
class NetworkSystem:
    graph: Graph
    model: OscillatorModel
    coupling: CouplingSpec
    alpha: float

    def __post_init__(self):
        if self.alpha < 0.0:
            raise ValueError("alpha must be >= 0")
        if self.coupling.q != self.model.q:
            raise ValueError("coupling and model dimension mismatch")

    @property
    def dim(self) -> int:
        return self.graph.n * self.model.q

    def rhs(self, t: float, X: np.ndarray) -> np.ndarray:
        return network_rhs(self, t, X)


def network_rhs(sys: NetworkSystem, t: float, X: np.ndarray) -> np.ndarray:
    """Full network vector field, block i:
    f(x_i) + alpha * sum_j A_ij (Gamma + delta cos(omega t) R_ij)(x_j - x_i).

    Touches only existing edges; raises BlowUpError outside the working domain.
    """
    n, q = sys.graph.n, sys.model.q
    x = X.reshape(n, q)
    if np.abs(x).max() > BLOWUP_LIMIT or not np.isfinite(x).all():
        raise BlowUpError(t)
    out = np.empty_like(x)
    for i in range(n):
        out[i] = sys.model.rhs(x[i])
    alpha = sys.alpha
    if alpha != 0.0:
        cp = sys.coupling
        c = cp.delta * math.cos(cp.omega * t)
        Gamma = cp.Gamma
        for i, j in sys.graph.edges:
            d = x[j] - x[i]
            out[i] += alpha * (Gamma @ d)
            out[j] -= alpha * (Gamma @ d)
            if c != 0.0:
                out[i] += alpha * c * (cp.R[(i, j)] @ d)
                out[j] -= alpha * c * (cp.R[(j, i)] @ d)
    return out.reshape(-1)


def perturbation_block_matrix(sys: NetworkSystem, t: float) -> np.ndarray:
    """The Laplacian-like nq x nq mismatch matrix P(t) of the variational
    equation: off-diagonal block (i,j) = -L_ij P_ij(t), diagonal block
    (i,i) = sum_{j != i} L_ij P_ij(t). Satisfies ||P(t)|| <= ||L|| delta."""
    n, q = sys.graph.n, sys.model.q
    P = np.zeros((n * q, n * q))
    cp = sys.coupling
    if cp.delta == 0.0:
        return P
    for i, j in sys.graph.edges:
        Pij = cp.perturbation(i, j, t)
        Pji = cp.perturbation(j, i, t)
        # L_ij = -A_ij = -1 on edges
        P[i * q:(i + 1) * q, j * q:(j + 1) * q] = Pij
        P[j * q:(j + 1) * q, i * q:(i + 1) * q] = Pji
        P[i * q:(i + 1) * q, i * q:(i + 1) * q] -= Pij
        P[j * q:(j + 1) * q, j * q:(j + 1) * q] -= Pji
    return P


def variational_operator(sys: NetworkSystem, t: float, s: np.ndarray) -> np.ndarray:
    """Dense linearization about the synchronous state s:
    I_n (x) Df(s) - alpha (L (x) Gamma) + alpha P(t). Test-scale only."""
    from .graphs import laplacian

    n = sys.graph.n
    Df = sys.model.jacobian(s)
    L = laplacian(sys.graph)
    J = np.kron(np.eye(n), Df) - sys.alpha * np.kron(L, sys.coupling.Gamma)
    if sys.coupling.delta != 0.0:
        J = J + sys.alpha * perturbation_block_matrix(sys, t)
    return J
