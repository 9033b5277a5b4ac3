"""Persistence of synchronization in diffusively coupled oscillator networks.

Subpackages:
- graphs: ER / BA / fixed topologies, edge-list I/O
- spectra: Jacobi eigensolver, Laplacian spectral summaries, asymptotic predictions
- dynamics: Lorenz nodes, perturbed diffusive coupling, network RHS, variational operator
- integrators: fixed-step RK6 / RK4
- bounds: persistence thresholds, decay rate, corollary asymptotics, fast-oscillation bound
- experiments: synchronization-error sweeps (tongue, fast limit, size scaling)
- cli: command-line entry point
"""

__version__ = "0.1.0"
