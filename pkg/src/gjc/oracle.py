"""Brute-force reference path: assemble the full truncated Hamiltonian and
propagate states numerically.

This module shares no diagonalization code with the closed-form engine; the
two paths arbitrate each other.  Dimensions stay desk-scale (2*(n_max+1)),
so a dense real-symmetric eigendecomposition is the default propagator and
time grids are reusable for free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .algebra import basis_dim, e_index, g_index, ladder_factor
from .errors import ConfigError, TruncationError
from .model import ModelSpec
from .states import QubitBosonState

_NORM_TOL = 1e-12
_EIG_RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class HamiltonianMatrix:
    """Dense real-symmetric Hamiltonian on the truncated space.

    Basis ordering matches the algebra module.  Off-diagonals connect
    |e,n> and |g,n+k> only.
    """

    n_max: int
    k: int
    mat: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=float)
        dim = basis_dim(self.n_max)
        if mat.shape != (dim, dim):
            raise ValueError(f"expected shape ({dim}, {dim}), got {mat.shape}")
        mat = mat.copy()
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)

    @property
    def dim(self) -> int:
        return basis_dim(self.n_max)


def assemble(spec: ModelSpec, n_max: int) -> HamiltonianMatrix:
    """Full Hamiltonian matrix of the model on 0..n_max.

    Diagonal: omega*n + omega0/2 + F(n) + G(n) on the excited row and
    omega*n - omega0/2 - F(n) + G(n) on the ground row.  Off-diagonal:
    g * f(n) * sqrt((n+k)!/n!) between |e,n> and |g,n+k>, placed
    symmetrically so H == H.T holds exactly.
    """
    if n_max < spec.k:
        raise ConfigError(f"n_max={n_max} must be >= k={spec.k}")
    spec.validate_range(n_max)
    dim = basis_dim(n_max)
    mat = np.zeros((dim, dim))
    for n in range(n_max + 1):
        fs, gs = spec.F(n), spec.G(n)
        mat[e_index(n, n_max), e_index(n, n_max)] = spec.omega * n + spec.omega0 / 2.0 + fs + gs
        mat[g_index(n, n_max), g_index(n, n_max)] = spec.omega * n - spec.omega0 / 2.0 - fs + gs
    for n in range(n_max - spec.k + 1):
        coupling = spec.g * spec.f(n) * ladder_factor(n, spec.k)
        i, j = e_index(n, n_max), g_index(n + spec.k, n_max)
        mat[i, j] = coupling
        mat[j, i] = coupling
    return HamiltonianMatrix(n_max=n_max, k=spec.k, mat=mat)


class PropagationMethod(Enum):
    EIGEN_DECOMPOSITION = "eigen"
    CHECKED_INTEGRATOR = "integrator"


@dataclass(frozen=True)
class PropagationConfig:
    method: PropagationMethod = PropagationMethod.EIGEN_DECOMPOSITION
    guard_levels: int | None = None  # None -> 2k
    leak_tolerance: float = 1e-10


def spectrum(h: HamiltonianMatrix):
    """Ascending eigenvalues and eigenvector columns of the full matrix.

    Every eigenpair is residual-checked; a failure is reported rather than
    silently degraded.
    """
    vals, vecs = np.linalg.eigh(h.mat)
    residual = np.max(np.abs(h.mat @ vecs - vecs * vals))
    if residual > _EIG_RESIDUAL_TOL:
        raise RuntimeError(
            f"eigendecomposition residual {residual:.3e} exceeds {_EIG_RESIDUAL_TOL:g}"
        )
    return vals, vecs


def _state_vector(state: QubitBosonState) -> np.ndarray:
    return np.concatenate([state.amp_e, state.amp_g])


def _split_state(vec: np.ndarray, n_max: int, tail_mass: float) -> QubitBosonState:
    half = n_max + 1
    return QubitBosonState(
        n_max=n_max, amp_e=vec[:half], amp_g=vec[half:], tail_mass=tail_mass
    )


def _check_leak(columns: np.ndarray, n_max: int, guard: int, tol: float) -> None:
    half = n_max + 1
    lo = n_max - guard + 1
    top = np.concatenate([columns[lo:half], columns[half + lo :]], axis=0)
    leak = float(np.max(np.sum(np.abs(top) ** 2, axis=0))) if top.size else 0.0
    if leak > tol:
        suggestion = 2 * n_max
        raise TruncationError(
            f"population {leak:.3e} in the top {guard} Fock level(s) exceeds "
            f"{tol:g}; raise n_max (suggestion: {suggestion})",
            suggested_n_max=suggestion,
        )


def propagate(
    h: HamiltonianMatrix,
    initial: QubitBosonState,
    times,
    config: PropagationConfig = PropagationConfig(),
):
    """Evolve ``initial`` under H, returning one state per requested time.

    Default method: expand in the eigenbasis and advance exact phases.
    The integrator method cross-checks with an adaptive Runge-Kutta scheme
    (scipy DOP853) at tight tolerances.  Both verify norm preservation and
    raise TruncationError if the top guard levels ever hold more population
    than the leak tolerance.
    """
    if initial.n_max != h.n_max:
        raise ValueError(
            f"state truncation n_max={initial.n_max} does not match matrix n_max={h.n_max}"
        )
    times = np.atleast_1d(np.asarray(times, dtype=float))
    guard = config.guard_levels if config.guard_levels is not None else 2 * h.k
    guard = min(guard, h.n_max)
    psi0 = _state_vector(initial)

    if config.method is PropagationMethod.EIGEN_DECOMPOSITION:
        vals, vecs = spectrum(h)
        coef = vecs.T @ psi0
        phases = np.exp(-1j * np.outer(vals, times))
        columns = vecs @ (phases * coef[:, None])
        norm_tol = _NORM_TOL
    elif config.method is PropagationMethod.CHECKED_INTEGRATOR:
        columns = _integrate(h.mat, psi0, times)
        norm_tol = 1e-8
    else:
        raise ValueError(f"unknown propagation method {config.method!r}")

    norms = np.sqrt(np.sum(np.abs(columns) ** 2, axis=0))
    drift = float(np.max(np.abs(norms**2 - initial.norm_squared())))
    if drift > norm_tol:
        raise RuntimeError(f"propagation norm drift {drift:.3e} exceeds {norm_tol:g}")
    if config.method is PropagationMethod.CHECKED_INTEGRATOR:
        # drift is verified above; restore the exact norm the dynamics conserves
        target = math.sqrt(initial.norm_squared())
        columns = columns * (target / np.where(norms > 0.0, norms, 1.0))
    _check_leak(columns, h.n_max, guard, config.leak_tolerance)

    return [
        _split_state(columns[:, i], h.n_max, initial.tail_mass) for i in range(times.size)
    ]


def _integrate(mat: np.ndarray, psi0: np.ndarray, times: np.ndarray) -> np.ndarray:
    from scipy.integrate import solve_ivp

    order = np.argsort(times)
    sorted_times = times[order]
    if sorted_times[0] < 0:
        raise ValueError("integrator path requires non-negative times")

    def rhs(_t, y):
        return -1j * (mat @ y)

    t_end = float(sorted_times[-1]) if sorted_times[-1] > 0 else 1e-12
    sol = solve_ivp(
        rhs,
        (0.0, t_end),
        psi0.astype(np.complex128),
        t_eval=sorted_times,
        method="DOP853",
        rtol=1e-10,
        atol=1e-12,
    )
    if not sol.success:
        raise RuntimeError(f"integrator failed: {sol.message}")
    columns = np.empty((psi0.size, times.size), dtype=np.complex128)
    columns[:, order] = sol.y
    return columns


def energy_mean(h: HamiltonianMatrix, state: QubitBosonState) -> float:
    """<H> for a state on the same truncation."""
    vec = _state_vector(state)
    return float(np.real(np.conj(vec) @ (h.mat @ vec)))
