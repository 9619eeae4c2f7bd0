"""
Minkowski/Rindler Bogoliubov coefficients and the thermal Unruh spectrum.

With ``x = pi omega / a`` the coefficients are::

    alpha = (1/omega) e^{x/2}  / sqrt(2 sinh x)     (alpha_LL = alpha_RR)
    beta  = (1/omega) e^{-x/2} / sqrt(2 sinh x)     (beta_LR = beta_RL)

They are evaluated as ``1 / sqrt(1 - e^{-2x})`` and ``e^{-x}`` times that,
which stays finite for large ``x``.

The ``1/omega`` factor reflects the normalisation of the Rindler ladder
operators, ``[b, b^dagger] = 1/omega^2``. Occupations are reported both with
that factor (``density``) and without it (``planck``).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.sparse as sp

from .coordinates import Wedge
from .fock import FockSpace, FockState, ModeIndex, QuantumOperator

#: Largest ``pi omega / a`` accepted by :func:`coefficients`.
MAX_EXPONENT = 700.0
TAIL_TOLERANCE = 1e-12


class TruncationWarning(UserWarning):
    pass


def _check(omega: float, a: float) -> float:
    if not (omega > 0 and math.isfinite(omega)):
        raise ValueError(f"omega must be positive, got {omega}")
    if not (a > 0 and math.isfinite(a)):
        raise ValueError(f"a must be positive, got {a}")
    return math.pi * omega / a


@dataclass(frozen=True)
class BogoliubovCoeffs:
    omega: float
    a: float
    alpha_LL: complex
    alpha_RR: complex
    beta_LR: complex
    beta_RL: complex

    @property
    def alpha(self) -> complex:
        return self.alpha_RR

    @property
    def beta(self) -> complex:
        return self.beta_RL

    def normalization(self) -> float:
        """``omega^2 (|alpha|^2 - |beta|^2)``, identically 1."""
        return self.omega**2 * (abs(self.alpha) ** 2 - abs(self.beta) ** 2)

    @property
    def squeezing(self) -> float:
        """``r`` with ``tanh r = beta / alpha = e^{-pi omega / a}``."""
        return math.atanh(math.exp(-math.pi * self.omega / self.a))


def coefficients(omega: float, a: float) -> BogoliubovCoeffs:
    """Closed-form coefficients; ``OverflowError`` if ``pi omega / a > 700``."""
    x = _check(omega, a)
    if x > MAX_EXPONENT:
        raise OverflowError(f"pi*omega/a = {x:.6g} exceeds {MAX_EXPONENT}")
    base = 1.0 / math.sqrt(-math.expm1(-2.0 * x))
    al = base / omega
    be = base * math.exp(-x) / omega
    return BogoliubovCoeffs(omega, a, al, al, be, be)


def coefficients_direct(omega: float, a: float) -> tuple[float, float]:
    """Naive evaluation of the same closed forms, for cross-checks at moderate ``x``."""
    x = _check(omega, a)
    n = math.sqrt(1.0 / (2.0 * math.sinh(x))) / omega
    return n * math.exp(x / 2), n * math.exp(-x / 2)


@dataclass(frozen=True)
class LadderRelation:
    """``b^R_k = alpha c^R_k + beta c^{L dagger}_{-k}`` and ``b^L_{-k} = alpha c^L_{-k} + beta c^{R dagger}_k``."""

    alpha: complex
    beta: complex
    omega: float

    def commutator_value(self) -> float:
        """``[b, b^dagger] = |alpha|^2 - |beta|^2 = 1 / omega^2``."""
        return abs(self.alpha) ** 2 - abs(self.beta) ** 2

    def operators(self, space: FockSpace, right: ModeIndex, left: ModeIndex) -> tuple[QuantumOperator, QuantumOperator]:
        """``(b^R, b^L)`` as matrices on a Fock space of the Minkowski-side ``c`` operators."""
        cR, cL = space.annihilation(right), space.annihilation(left)
        bR = self.alpha * cR + self.beta * cL.T
        bL = self.alpha * cL + self.beta * cR.T
        return QuantumOperator(bR, space), QuantumOperator(bL, space)

    def commutator_deviation(self, n_max: int = 6) -> float:
        """Largest entry of ``[b, b^dagger] - (|alpha|^2 - |beta|^2) 1`` on occupations ``<= n_max``.

        Built in a space padded by one quantum so the products are exact.
        """
        right, left = ModeIndex(Wedge.RIGHT, 1), ModeIndex(Wedge.LEFT, -1)
        padded = FockSpace((right, left), n_max + 1)
        worst = 0.0
        for b in self.operators(padded, right, left):
            comm = (b.matrix @ b.matrix.conj().T - b.matrix.conj().T @ b.matrix).tocsr()
            comm = comm - self.commutator_value() * sp.identity(padded.dim, format="csr")
            keep = padded.safe_indices(n_max - 1)
            block = comm[keep][:, keep]
            if block.nnz:
                worst = max(worst, float(np.max(np.abs(block.data))))
        return worst


def rindler_from_minkowski_ladder(omega: float, a: float) -> LadderRelation:
    c = coefficients(omega, a)
    return LadderRelation(c.alpha, c.beta, omega)


# ---------------------------------------------------------------------------
# occupations
# ---------------------------------------------------------------------------


def planck_factor(omega, a):
    """``1 / (e^{2 pi omega / a} - 1)``; 0 where the exponential overflows. Vectorised."""
    w = np.asarray(omega, dtype=float)
    a_ = np.asarray(a, dtype=float)
    if np.any(w <= 0) or np.any(a_ <= 0):
        raise ValueError("omega and a must be positive")
    x = 2.0 * np.pi * w / a_
    with np.errstate(over="ignore"):
        out = np.where(x > 709.0, 0.0, 1.0 / np.expm1(np.minimum(x, 709.0)))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class Occupation:
    planck: float
    density: float  # planck / omega^2, per unit delta(0)

    def regularized(self, length: float) -> float:
        """Density times the box value ``delta(0) = L / 2 pi``."""
        return self.density * length / (2.0 * math.pi)


def unruh_occupation(omega: float, a: float) -> Occupation:
    """``<0_M| b^{R dagger} b^R |0_M>`` per ``delta(0)``, plus the bare Planck factor."""
    _check(omega, a)
    n = planck_factor(omega, a)
    return Occupation(n, n / omega**2)


def squeezed_vacuum(omega: float, a: float, n_max: int) -> tuple[FockState, float]:
    """Minkowski vacuum in the Rindler number basis of the pair ``(k, R)``, ``(-k, L)``.

    Returns the truncated, renormalised state ``sum_n tanh^n r |n>_R |n>_L``
    and the analytic tail weight ``t^{2(n_max+1)}`` that truncation discards.
    """
    x = _check(omega, a)
    t = math.exp(-x)
    modes = (ModeIndex(Wedge.LEFT, -1), ModeIndex(Wedge.RIGHT, 1))
    amps = {(n, n): t**n for n in range(n_max + 1)}
    tail = t ** (2 * (n_max + 1))
    if tail > TAIL_TOLERANCE:
        warnings.warn(
            f"squeezed-vacuum truncation tail {tail:.3g} exceeds {TAIL_TOLERANCE:g}",
            TruncationWarning,
            stacklevel=2,
        )
    return FockState(modes, n_max, amps).normalized(), tail


@dataclass(frozen=True)
class OracleResult:
    planck: float
    density: float
    tail: float
    vacuum_residual: float


def unruh_occupation_oracle(omega: float, a: float, n_max: int = 40) -> OracleResult:
    """Brute-force occupation from the truncated two-mode squeezed vacuum.

    ``b^dagger b`` with canonically normalised Rindler ladders is the number
    operator of the right mode; its expectation is the Planck factor.
    ``vacuum_residual`` is ``|| c^R |0_M> ||`` with
    ``c^R = cosh r b^R - sinh r b^{L dagger}``, which vanishes for the true vacuum.
    """
    state, tail = squeezed_vacuum(omega, a, n_max)
    left, right = state.modes
    space = FockSpace(state.modes, n_max)
    v = space.vector(state)
    n_right = float(np.real(np.vdot(v, space.number(right) @ v)))
    r = math.atanh(math.exp(-math.pi * omega / a))
    c_right = math.cosh(r) * space.annihilation(right) - math.sinh(r) * space.creation(left)
    resid = float(np.linalg.norm(c_right @ v))
    return OracleResult(n_right, n_right / omega**2, tail, resid)


def unruh_temperature(a: float) -> float:
    if not a > 0:
        raise ValueError("a must be positive")
    return a / (2.0 * math.pi)


@dataclass(frozen=True)
class TemperatureFit:
    temperature: float
    spread: float
    per_point: np.ndarray


def fit_temperature(omegas: Sequence[float], occupations: Sequence[float]) -> TemperatureFit:
    """Invert ``n = 1 / (e^{omega / T} - 1)`` point by point: ``T_i = omega_i / log(1 + 1/n_i)``.

    Needs at least five points with occupations strictly decreasing in ``omega``.
    """
    w = np.asarray(omegas, dtype=float)
    n = np.asarray(occupations, dtype=float)
    if w.shape != n.shape or w.ndim != 1:
        raise ValueError("omegas and occupations must be 1D arrays of equal length")
    if w.size < 5:
        raise ValueError("temperature fit needs at least 5 frequencies")
    order = np.argsort(w)
    w, n = w[order], n[order]
    if np.any(n <= 0) or np.any(np.diff(n) >= 0):
        raise ValueError("spectrum is not a positive, monotonically decreasing function of omega")
    T = w / np.log1p(1.0 / n)
    return TemperatureFit(float(np.mean(T)), float(np.max(T) - np.min(T)), T)


@dataclass
class SpectrumRow:
    omega: float
    planck: float
    oracle: Optional[float]
    temperature: float


def unruh_spectrum(
    a: float,
    omegas: Sequence[float],
    oracle: bool = False,
    n_max: int = 40,
) -> tuple[list[SpectrumRow], TemperatureFit]:
    """Analytic (and optionally oracle) spectrum with the per-point inverted temperatures."""
    omegas = [float(w) for w in omegas]
    planck = [unruh_occupation(w, a).planck for w in omegas]
    orc = [unruh_occupation_oracle(w, a, n_max).planck for w in omegas] if oracle else [None] * len(omegas)
    fit = fit_temperature(omegas, orc if oracle else planck)
    order = np.argsort(omegas)
    T = dict(zip(np.asarray(omegas)[order], fit.per_point))
    rows = [SpectrumRow(w, p, o, float(T[w])) for w, p, o in zip(omegas, planck, orc)]
    return rows, fit
