"""Autoregressive model descriptions and exact simulation.

The model convention throughout the package is

    y_t = beta_1 y_{t-1} + ... + beta_p y_{t-p} + eps_t

with characteristic polynomial phi(z) = 1 - beta_1 z - ... - beta_p z^p.
Stability is classified by the companion-matrix eigenvalues (the reciprocals
of the phi roots): a process is stable when every eigenvalue has modulus
below one, unstable when the largest modulus is exactly one, and explosive
beyond one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import NamedTuple

import numpy as np
from numpy.random import Generator, Philox
from numpy.typing import NDArray

__all__ = [
    "ArCoefficients",
    "RootFactorSpec",
    "ArProcess",
    "SeriesSample",
    "Stability",
    "StabilityReport",
    "coefficients_from_factors",
    "classify",
    "companion_matrix",
    "companion_eigenvalues",
    "characteristic_polynomial",
    "simulate",
    "derive_seed",
]

NOISE_KINDS = ("gaussian", "student-t", "none")

# Student-t(5) draws are scaled by sqrt(3/5) so their variance equals sigma^2.
_STUDENT_T_DF = 5
_STUDENT_T_SCALE = math.sqrt(3.0 / 5.0)

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class ArCoefficients:
    """Coefficient vector (beta_1, ..., beta_p) of an AR(p) recursion.

    Parameters
    ----------
    beta : tuple of float
        Lag coefficients, most recent lag first.  May be empty (order 0).
    over_specified : bool
        Marks vectors whose trailing coefficient is legitimately zero, e.g.
        a fit at an order above the true one.  Without the flag a trailing
        exact zero is rejected, since the represented order would be wrong.
    """

    beta: tuple[float, ...]
    over_specified: bool = False

    def __post_init__(self):
        beta = tuple(float(b) for b in self.beta)
        object.__setattr__(self, "beta", beta)
        if any(not math.isfinite(b) for b in beta):
            raise ValueError("coefficients must be finite")
        if beta and beta[-1] == 0.0 and not self.over_specified:
            raise ValueError(
                "trailing zero coefficient: pass over_specified=True if intended"
            )

    @property
    def order(self) -> int:
        return len(self.beta)

    @property
    def array(self) -> NDArray[np.float64]:
        return np.array(self.beta, dtype=float)


@dataclass(frozen=True)
class RootFactorSpec:
    """Factorization of the characteristic polynomial into real-root factors.

    ``factors`` lists (root, multiplicity) pairs where each root r is a
    companion-matrix eigenvalue, i.e. the polynomial factor is (1 - r B)^m.
    """

    factors: tuple[tuple[float, int], ...]

    def __post_init__(self):
        norm = tuple((float(r), int(m)) for r, m in self.factors)
        object.__setattr__(self, "factors", norm)
        for r, m in norm:
            if not math.isfinite(r):
                raise ValueError("roots must be finite")
            if m < 1:
                raise ValueError(f"multiplicity must be >= 1, got {m}")

    @property
    def order(self) -> int:
        return sum(m for _, m in self.factors)


class Stability(Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    EXPLOSIVE = "explosive"


class StabilityReport(NamedTuple):
    kind: Stability
    max_modulus: float


@dataclass(frozen=True, eq=False)
class ArProcess:
    """An AR(p) data-generating process.

    ``initial_values`` holds (y_0, y_{-1}, ..., y_{1-p}), most recent first.
    ``noise`` selects the innovation distribution: "gaussian" (default),
    "student-t" (df=5, rescaled to variance sigma^2), or "none" for the
    deterministic zero-noise mode.
    """

    coeffs: ArCoefficients
    sigma: float = 1.0
    initial_values: tuple[float, ...] = ()
    noise: str = "gaussian"

    def __post_init__(self):
        if not isinstance(self.coeffs, ArCoefficients):
            object.__setattr__(self, "coeffs", ArCoefficients(tuple(self.coeffs)))
        if not (self.sigma > 0.0) or not math.isfinite(self.sigma):
            raise ValueError(f"sigma must be positive and finite, got {self.sigma}")
        init = tuple(float(v) for v in self.initial_values)
        if not init:
            init = (0.0,) * self.coeffs.order
        if len(init) != self.coeffs.order:
            raise ValueError(
                f"initial_values must have length {self.coeffs.order}, got {len(init)}"
            )
        if any(not math.isfinite(v) for v in init):
            raise ValueError("initial values must be finite")
        object.__setattr__(self, "initial_values", init)
        if self.noise not in NOISE_KINDS:
            raise ValueError(f"noise must be one of {NOISE_KINDS}, got {self.noise!r}")

    @property
    def order(self) -> int:
        return self.coeffs.order


@dataclass(frozen=True, eq=False)
class SeriesSample:
    """A simulated path together with the innovations that produced it."""

    values: NDArray[np.float64]
    innovations: NDArray[np.float64]
    seed: int

    def __len__(self) -> int:
        return len(self.values)


def coefficients_from_factors(spec: RootFactorSpec) -> ArCoefficients:
    """Expand prod_i (1 - r_i B)^{m_i} into the coefficient vector.

    The expansion runs in exact rational arithmetic, so any root whose float
    is exactly representable (0.5, -1.0, 0.99, ...) yields exact
    coefficients.
    """
    poly: list[Fraction] = [Fraction(1)]
    for root, mult in spec.factors:
        r = Fraction(root)
        for _ in range(mult):
            nxt = poly + [Fraction(0)]
            for k in range(len(poly)):
                nxt[k + 1] -= r * poly[k]
            poly = nxt
    beta = tuple(float(-c) for c in poly[1:])
    return ArCoefficients(beta, over_specified=not beta or beta[-1] == 0.0)


def companion_matrix(coeffs: ArCoefficients) -> NDArray[np.float64]:
    """p x p companion matrix of the recursion (order >= 1)."""
    p = coeffs.order
    if p < 1:
        raise ValueError("companion matrix requires order >= 1")
    mat = np.zeros((p, p))
    mat[0, :] = coeffs.array
    if p > 1:
        mat[1:, :-1] = np.eye(p - 1)
    return mat


def companion_eigenvalues(coeffs: ArCoefficients) -> NDArray[np.complex128]:
    """Eigenvalues of the companion matrix (reciprocal characteristic roots)."""
    return np.linalg.eigvals(companion_matrix(coeffs))


def characteristic_polynomial(coeffs: ArCoefficients, z: complex) -> complex:
    """Evaluate phi(z) = 1 - beta_1 z - ... - beta_p z^p."""
    acc = 0.0 + 0.0j
    for b in reversed(coeffs.beta):
        acc = (acc + b) * z
    return 1.0 - acc


def classify(coeffs: ArCoefficients, tol: float = 1e-8) -> StabilityReport:
    """Classify by the largest companion-eigenvalue modulus.

    Order 0 is stable by convention with max modulus 0.  The tolerance tol
    decides how close to 1 counts as exactly on the unit circle.
    """
    if coeffs.order == 0:
        return StabilityReport(Stability.STABLE, 0.0)
    max_mod = float(np.max(np.abs(companion_eigenvalues(coeffs))))
    if max_mod < 1.0 - tol:
        kind = Stability.STABLE
    elif max_mod <= 1.0 + tol:
        kind = Stability.UNSTABLE
    else:
        kind = Stability.EXPLOSIVE
    return StabilityReport(kind, max_mod)


def _splitmix64(x: int) -> int:
    x &= _MASK64
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(master_seed: int, *indices: int) -> int:
    """Deterministic 64-bit seed for a (replication, stream, ...) coordinate.

    Chains splitmix64 over the master seed and each index, so distinct
    coordinates get effectively independent Philox keys and the derivation
    is reproducible across platforms and worker counts.
    """
    state = _splitmix64(master_seed)
    for ix in indices:
        state = _splitmix64(state ^ _splitmix64(ix + 0x9E3779B97F4A7C15))
    return state


def _draw_innovations(process: ArProcess, count: int, seed: int) -> NDArray[np.float64]:
    if process.noise == "none":
        return np.zeros(count)
    gen = Generator(Philox(key=seed & _MASK64))
    if process.noise == "gaussian":
        return process.sigma * gen.standard_normal(count)
    return process.sigma * _STUDENT_T_SCALE * gen.standard_t(_STUDENT_T_DF, size=count)


def simulate(process: ArProcess, length: int, seed: int, burn_in: int = 0) -> SeriesSample:
    """Simulate ``length`` observations of the process.

    Innovations come from a counter-based generator (Philox) keyed by
    ``seed``, so identical arguments replay bit-identical output.  With
    ``burn_in`` > 0 the recursion is advanced that many extra steps first
    and only the final ``length`` values (and their innovations) are kept.

    Returns
    -------
    SeriesSample
        values[t] == sum_k beta_k * values[t-k] + innovations[t], with the
        recursion seeded from process.initial_values (and, for t < burn-in
        horizon, the discarded warm-up values).
    """
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    if burn_in < 0:
        raise ValueError(f"burn_in must be >= 0, got {burn_in}")
    p = process.order
    beta = process.coeffs.beta
    total = length + burn_in
    eps = _draw_innovations(process, total, seed)
    eps_list = eps.tolist()
    # hist starts as (y_{1-p}, ..., y_0) and accumulates generated values.
    hist: list[float] = list(process.initial_values[::-1])
    for t in range(total):
        acc = eps_list[t]
        for k in range(p):
            acc += beta[k] * hist[-1 - k]
        hist.append(acc)
    return SeriesSample(
        values=np.array(hist[p + burn_in :]),
        innovations=eps[burn_in:].copy(),
        seed=int(seed),
    )
