"""Truncated qubit-boson states and their observables.

States live on {e, g} x {|0>, ..., |n_max>} with explicit bookkeeping of
the norm discarded by the Fock-space cutoff (``tail_mass``), so that
truncation error is always accounted for rather than silently normalized
away.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import TruncationError

EPS_TRUNC_DEFAULT = 1e-12
_NORM_TOL = 1e-12

QUBIT_LEVELS = ("g", "e")


def _as_amp_vector(values, n_max, name):
    arr = np.asarray(values, dtype=np.complex128).copy()
    if arr.shape != (n_max + 1,):
        raise ValueError(f"{name} must have shape ({n_max + 1},), got {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class QubitBosonState:
    """Pure state amplitudes over |e,n> and |g,n> for n = 0..n_max.

    Invariant: ||amp_e||^2 + ||amp_g||^2 + tail_mass == 1 within 1e-12.
    Instances are immutable (amplitude arrays are read-only views).
    """

    n_max: int
    amp_e: np.ndarray
    amp_g: np.ndarray
    tail_mass: float = 0.0

    def __post_init__(self):
        if self.n_max < 0:
            raise ValueError(f"n_max must be >= 0, got {self.n_max}")
        object.__setattr__(self, "amp_e", _as_amp_vector(self.amp_e, self.n_max, "amp_e"))
        object.__setattr__(self, "amp_g", _as_amp_vector(self.amp_g, self.n_max, "amp_g"))
        tail = float(self.tail_mass)
        if tail < -_NORM_TOL:
            raise ValueError(f"tail_mass must be non-negative, got {tail}")
        object.__setattr__(self, "tail_mass", max(tail, 0.0))
        total = self.norm_squared() + self.tail_mass
        if abs(total - 1.0) > _NORM_TOL:
            raise ValueError(
                f"state is not normalized: ||amp||^2 + tail_mass = {total!r}"
            )

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amp_e) ** 2) + np.sum(np.abs(self.amp_g) ** 2))

    def to_dict(self) -> dict:
        return {
            "n_max": self.n_max,
            "amp_e": [[z.real, z.imag] for z in self.amp_e],
            "amp_g": [[z.real, z.imag] for z in self.amp_g],
            "tail_mass": self.tail_mass,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, doc: dict) -> "QubitBosonState":
        n_max = doc["n_max"]
        amp_e = np.array([complex(re, im) for re, im in doc["amp_e"]])
        amp_g = np.array([complex(re, im) for re, im in doc["amp_g"]])
        return cls(n_max=n_max, amp_e=amp_e, amp_g=amp_g, tail_mass=doc.get("tail_mass", 0.0))


def _check_qubit(qubit: str) -> str:
    if qubit not in QUBIT_LEVELS:
        raise ValueError(f"qubit level must be one of {QUBIT_LEVELS}, got {qubit!r}")
    return qubit


def fock_state(qubit: str, n: int, n_max: int) -> QubitBosonState:
    """|qubit, n> on the truncated space; tail_mass is exactly zero."""
    _check_qubit(qubit)
    if not 0 <= n <= n_max:
        raise ValueError(f"Fock index n={n} out of range 0..{n_max}")
    amp_e = np.zeros(n_max + 1, dtype=np.complex128)
    amp_g = np.zeros(n_max + 1, dtype=np.complex128)
    (amp_e if qubit == "e" else amp_g)[n] = 1.0
    return QubitBosonState(n_max=n_max, amp_e=amp_e, amp_g=amp_g, tail_mass=0.0)


def coherent_amplitudes(alpha: complex, n_max: int):
    """Coefficients e^{-|a|^2/2} a^j / sqrt(j!) for j = 0..n_max and the tail mass.

    The recursion c_{j+1} = c_j * alpha / sqrt(j+1) avoids factorial overflow;
    the tail is the Poisson weight beyond the cutoff.
    """
    coeffs = np.zeros(n_max + 1, dtype=np.complex128)
    c = math.exp(-0.5 * abs(alpha) ** 2)
    for j in range(n_max + 1):
        coeffs[j] = c
        c = c * alpha / math.sqrt(j + 1)
    tail = max(0.0, 1.0 - float(np.sum(np.abs(coeffs) ** 2)))
    return coeffs, tail


def coherent_state(
    qubit: str,
    alpha: complex,
    n_max: int,
    eps_trunc: float = EPS_TRUNC_DEFAULT,
) -> QubitBosonState:
    """|qubit, alpha> truncated at n_max.

    Raises TruncationError when the discarded Poisson tail exceeds
    ``eps_trunc``; the suggested retry cutoff covers the mean plus ten
    standard deviations of the photon-number distribution.
    """
    _check_qubit(qubit)
    coeffs, tail = coherent_amplitudes(alpha, n_max)
    if tail > eps_trunc:
        mean = abs(alpha) ** 2
        suggestion = int(math.ceil(mean + 10.0 * math.sqrt(mean) + 20.0))
        raise TruncationError(
            f"coherent state |alpha|={abs(alpha):g} loses tail mass {tail:.3e} "
            f"> {eps_trunc:g} at n_max={n_max}; retry with n_max >= {suggestion}",
            suggested_n_max=suggestion,
        )
    zeros = np.zeros(n_max + 1, dtype=np.complex128)
    if qubit == "e":
        return QubitBosonState(n_max=n_max, amp_e=coeffs, amp_g=zeros, tail_mass=tail)
    return QubitBosonState(n_max=n_max, amp_e=zeros, amp_g=coeffs, tail_mass=tail)


def observables(state: QubitBosonState):
    """(<sigma_z>, <n>, <x>, <y>) for a normalized state.

    Quadratures follow the x = (a^dag + a)/2, y = i(a^dag - a)/2 convention,
    so <x> + i<y> equals the mean boson amplitude <a>.
    """
    pe = np.abs(state.amp_e) ** 2
    pg = np.abs(state.amp_g) ** 2
    sigma_z = float(np.sum(pe) - np.sum(pg))
    ns = np.arange(state.n_max + 1)
    n_mean = float(np.sum(ns * (pe + pg)))
    root = np.sqrt(ns[1:].astype(float))
    a_mean = complex(
        np.sum(root * np.conj(state.amp_e[:-1]) * state.amp_e[1:])
        + np.sum(root * np.conj(state.amp_g[:-1]) * state.amp_g[1:])
    )
    return sigma_z, n_mean, a_mean.real, a_mean.imag
