"""Bayesian non-negative factorization solver.

The model writes the observed interaction matrix as a product of a
non-negative mixing matrix ``w`` (nodes x components) and basis matrix ``h``
(components x nodes) under a Poisson likelihood, with zero-mode half-normal
priors of per-component precision ``beta[k]`` on the columns of ``w`` and
rows of ``h`` and a Gamma(a, b) prior on each precision. Large precisions
shrink their component towards zero, so surplus components are pruned
automatically and the number of communities is inferred rather than fixed.

Inference is the fixed-point scheme: per iteration, multiplicative updates
of ``h`` then ``w`` followed by the closed-form precision update, each of
which does not increase the posterior energy.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.special import gammaln

from . import kernels
from .errors import NumericalError, ParameterError
from .graph import InteractionMatrix


@dataclass(frozen=True)
class SolverConfig:
    """Solver hyperparameters and run controls.

    ``k_max=None`` means "as many components as nodes", the most permissive
    choice; runs prune what they do not need. ``a`` and ``b`` may be scalars
    (shared across components) or length-``k_max`` arrays.
    """

    k_max: int | None = None
    a: float = 1.0
    b: float = 2.0
    max_iters: int = 500
    tol: float = 1e-6
    eps: float = 1e-12
    seed: object = 0

    def __post_init__(self):
        if self.k_max is not None and self.k_max < 1:
            raise ParameterError(f"k_max must be >= 1, got {self.k_max}")
        if np.any(np.asarray(self.a) <= 0) or np.any(np.asarray(self.b) <= 0):
            raise ParameterError("a and b must be positive")
        if self.max_iters < 1:
            raise ParameterError("max_iters must be positive")
        if self.tol <= 0:
            raise ParameterError("tol must be positive")
        if self.eps <= 0:
            raise ParameterError("eps must be positive")

    def resolve_k(self, n: int) -> int:
        return self.k_max if self.k_max is not None else n

    def shape_ab(self, k: int) -> tuple[np.ndarray, np.ndarray]:
        """Per-component shape/rate vectors, broadcast from scalars."""
        a = np.broadcast_to(np.asarray(self.a, dtype=np.float64), (k,)).copy()
        b = np.broadcast_to(np.asarray(self.b, dtype=np.float64), (k,)).copy()
        return a, b

    def with_seed(self, seed) -> "SolverConfig":
        return replace(self, seed=seed)


@dataclass
class Factorization:
    """Model state: mixing matrix, basis matrix, and component precisions."""

    w: np.ndarray
    h: np.ndarray
    beta: np.ndarray

    @property
    def n(self) -> int:
        return self.w.shape[0]

    @property
    def k(self) -> int:
        return self.w.shape[1]


@dataclass
class FitResult:
    factorization: Factorization
    energy_trace: np.ndarray
    iterations_run: int
    converged: bool


def _matrix(v) -> np.ndarray:
    if isinstance(v, InteractionMatrix):
        return v.v
    return np.ascontiguousarray(np.asarray(v, dtype=np.float64))


def initialize(config: SolverConfig, n: int) -> Factorization:
    """Draw w, h i.i.d. uniform on [eps, 1] and set beta to its
    update-equation value for that draw. Deterministic given the seed."""
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    k = config.resolve_k(n)
    rng = np.random.default_rng(config.seed)
    w = rng.uniform(config.eps, 1.0, size=(n, k))
    h = rng.uniform(config.eps, 1.0, size=(k, n))
    f = Factorization(w=w, h=h, beta=np.ones(k))
    f.beta = update_beta(f, config)
    return f


def reconstruct(f: Factorization) -> np.ndarray:
    return kernels.reconstruct(f.w, f.h)


def data_fit_term(v, v_hat, eps: float = 1e-12) -> float:
    """Poisson data-fit part of the energy (0*log(0/x) treated as 0)."""
    return kernels.kl_data_fit(_matrix(v), _matrix(v_hat), eps)


def energy(v, f: Factorization, config: SolverConfig) -> float:
    """Negative log posterior up to constants; the quantity the updates
    descend."""
    vm = _matrix(v)
    n = f.n
    a, b = config.shape_ab(f.k)
    u = data_fit_term(vm, reconstruct(f), config.eps)
    col_w = np.sum(f.w * f.w, axis=0)
    row_h = np.sum(f.h * f.h, axis=1)
    log_beta = np.log(f.beta)
    u += 0.5 * float(np.sum(f.beta * (col_w + row_h)) - 2.0 * n * np.sum(log_beta))
    u += float(np.sum(f.beta * b - (a - 1.0) * log_beta))
    return u


def poisson_nll(v, v_hat, eps: float = 1e-12) -> float:
    """Exact Poisson negative log likelihood (reporting only; the solver
    optimizes `energy`, which drops the data-independent pieces)."""
    vm = _matrix(v)
    vh = np.maximum(_matrix(v_hat), eps)
    return float(np.sum(-vm * np.log(vh) + vh + gammaln(vm + 1.0)))


def update_h(v, f: Factorization, config: SolverConfig) -> np.ndarray:
    """Multiplicative basis update; floors the result at eps."""
    return kernels.multiplicative_update_h(_matrix(v), f.w, f.h, f.beta, config.eps)


def update_w(v, f: Factorization, config: SolverConfig) -> np.ndarray:
    """Multiplicative mixing update; floors the result at eps."""
    return kernels.multiplicative_update_w(_matrix(v), f.w, f.h, f.beta, config.eps)


def update_beta(f: Factorization, config: SolverConfig) -> np.ndarray:
    """Closed-form precision update (stationary point of the energy)."""
    a, b = config.shape_ab(f.k)
    sq = 0.5 * (np.sum(f.w * f.w, axis=0) + np.sum(f.h * f.h, axis=1))
    return (f.n + a - 1.0) / (sq + b)


def fit(v, config: SolverConfig | None = None) -> FitResult:
    """Run the solver to convergence on an interaction matrix.

    Parameters
    ----------
    v : InteractionMatrix or (n, n) array
        Symmetric non-negative input.
    config : SolverConfig, optional
        Defaults apply when omitted.

    Returns
    -------
    FitResult
        Final factorization, the energy value at initialization and after
        every iteration, the iteration count, and whether the relative
        energy change fell below ``tol`` before ``max_iters``.

    Raises
    ------
    NumericalError
        If a non-finite energy value appears; carries the iteration index.
    """
    config = config or SolverConfig()
    vm = _matrix(v)
    if vm.ndim != 2 or vm.shape[0] != vm.shape[1]:
        raise ParameterError(f"input matrix must be square, got {vm.shape}")
    n = vm.shape[0]
    f = initialize(config, n)

    u = energy(vm, f, config)
    if not np.isfinite(u):
        raise NumericalError("non-finite energy at initialization", iteration=0)
    trace = [u]
    converged = False
    iterations = 0
    for t in range(1, config.max_iters + 1):
        f.h = update_h(vm, f, config)
        f.w = update_w(vm, f, config)
        f.beta = update_beta(f, config)
        u = energy(vm, f, config)
        if not np.isfinite(u):
            raise NumericalError("non-finite energy", iteration=t)
        trace.append(u)
        iterations = t
        if abs(trace[-1] - trace[-2]) / max(abs(trace[-2]), 1.0) < config.tol:
            converged = True
            break
    return FitResult(
        factorization=f,
        energy_trace=np.array(trace),
        iterations_run=iterations,
        converged=converged,
    )


def component_energies(f: Factorization) -> np.ndarray:
    """Column energies of the mixing matrix (diagnostic for pruning)."""
    return np.sum(f.w * f.w, axis=0)


def active_component_count(f: Factorization, rel_threshold: float = 1e-4) -> int:
    """Components whose column energy exceeds ``rel_threshold`` times the
    largest one. Diagnostic only; community counting goes through greedy
    allocation in :mod:`nmfcomm.membership`."""
    e = component_energies(f)
    if e.size == 0 or e.max() <= 0:
        return 0
    return int(np.sum(e > rel_threshold * e.max()))
