"""
Plane-wave mode functions for the reduced 1D field on Minkowski and Rindler charts.

Right-wedge (and inertial) modes depend on ``k xi - omega eta`` and left-wedge
modes on ``k xi + omega eta``; both are positive frequency with respect to
their own future-directed Killing field (``+d_eta`` and ``-d_eta``). The
companion magnetic mode is ``q = s (k / omega) p`` with ``s`` the wedge time
sign, which is what the reduced Maxwell equations demand in either wedge.

Fock-space work uses box modes on ``[0, L)`` with ``k_n = 2 pi n / L`` and
``|U_n|^2 = omega_n / (2 L)``. Left and right mode families live on disjoint
copies of the box (the wedges are causally disjoint), so sampled mode
functions are stored per wedge block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .coordinates import ChartId, SpacetimePoint, Wedge, metric_at
from .electrodynamics import PeriodicGrid
from .fock import ModeIndex

ModeFunction = Callable[[float, float], complex]

#: Block order used for sampled functions on the two-wedge slice.
WEDGE_BLOCKS: tuple[Optional[Wedge], ...] = (Wedge.LEFT, Wedge.RIGHT)


def time_sign(wedge: Optional[Wedge]) -> int:
    """+1 when ``d_eta`` (or ``d_t``) is future directed, -1 in the left wedge."""
    return -1 if wedge is not None and Wedge.parse(wedge) is Wedge.LEFT else 1


@dataclass(frozen=True)
class ModeSpec:
    """On-shell photon mode; ``wedge=None`` is an inertial (Minkowski) mode."""

    k: float
    wedge: Optional[Wedge] = Wedge.RIGHT
    polarization: int = 1

    def __post_init__(self) -> None:
        if not math.isfinite(self.k) or self.k == 0:
            raise ValueError("k must be finite and nonzero")
        if self.wedge is not None:
            object.__setattr__(self, "wedge", Wedge.parse(self.wedge))
        if self.polarization not in (1, 2):
            raise ValueError("polarization must be 1 or 2")

    @property
    def omega(self) -> float:
        return abs(self.k)

    @property
    def time_sign(self) -> int:
        return time_sign(self.wedge)

    @property
    def direction(self) -> float:
        """``k / omega``."""
        return math.copysign(1.0, self.k)

    def phase(self, eta, xi):
        """``k xi - s omega eta``; accepts arrays."""
        return self.k * np.asarray(xi) - self.time_sign * self.omega * np.asarray(eta)

    @classmethod
    def from_index(cls, index: ModeIndex, length: float) -> "ModeSpec":
        return cls(index.k(length), index.wedge, index.polarization)


@dataclass(frozen=True)
class ModeCoefficients:
    U: complex
    V: complex = 0.0

    @classmethod
    def box(cls, omega: float, length: float, phase: complex = 1j) -> "ModeCoefficients":
        """``U = phase * sqrt(omega / 2L)``; the default phase ``i`` matches the inertial convention."""
        if not abs(abs(phase) - 1.0) < 1e-12:
            raise ValueError("phase must have unit modulus")
        return cls(phase * math.sqrt(omega / (2.0 * length)))

    @classmethod
    def continuum(cls, omega: float, phase: complex = 1j) -> "ModeCoefficients":
        return cls(phase * math.sqrt(omega / (4.0 * math.pi)))


def _parts(spec: ModeSpec, coeffs: ModeCoefficients, eta, xi):
    s = spec.time_sign
    forward = coeffs.U * np.exp(1j * spec.phase(eta, xi))
    if coeffs.V == 0:
        return forward, 0.0
    k, w = spec.k, spec.omega
    backward = coeffs.V * np.exp(-1j * (k * np.asarray(xi) + s * w * np.asarray(eta)))
    return forward, backward


def p_mode(spec: ModeSpec, coeffs: ModeCoefficients, eta, xi):
    """Electric mode function ``U e^{i(k xi - s omega eta)} + V e^{-i(k xi + s omega eta)}``."""
    fwd, bwd = _parts(spec, coeffs, eta, xi)
    out = fwd + bwd
    return complex(out) if np.ndim(out) == 0 else out


def q_mode(spec: ModeSpec, coeffs: ModeCoefficients, eta, xi):
    """Magnetic mode function ``s (k/omega) [U e^{...} - V e^{...}]``."""
    fwd, bwd = _parts(spec, coeffs, eta, xi)
    out = spec.time_sign * spec.direction * (fwd - bwd)
    return complex(out) if np.ndim(out) == 0 else out


def mode_function(spec: ModeSpec, coeffs: ModeCoefficients, kind: str = "p") -> ModeFunction:
    fn = {"p": p_mode, "q": q_mode}[kind]
    return lambda eta, xi: fn(spec, coeffs, eta, xi)


def coefficient_relation_residuals(
    spec: ModeSpec, coeffs: ModeCoefficients, eta: float, xi: float, h: float = 1e-4
) -> tuple[complex, complex]:
    """Finite-difference ``d_xi q - i s omega p`` and ``d_xi p - i s omega q``."""
    p = mode_function(spec, coeffs, "p")
    q = mode_function(spec, coeffs, "q")
    c = 1j * spec.time_sign * spec.omega
    dq = (q(eta, xi + h) - q(eta, xi - h)) / (2 * h)
    dp = (p(eta, xi + h) - p(eta, xi - h)) / (2 * h)
    return dq - c * p(eta, xi), dp - c * q(eta, xi)


def frequency_split_check(
    mode_fn: ModeFunction,
    wedge: Optional[Wedge],
    omega: float,
    eta: float = 0.0,
    xi: float = 0.0,
    h: float = 1e-4,
) -> complex:
    """``s d_eta f + i omega f`` with ``s`` the sign of the wedge's future Killing field.

    Vanishes for modes that are positive frequency in ``wedge``.
    """
    s = time_sign(wedge)
    df = (mode_fn(eta + h, xi) - mode_fn(eta - h, xi)) / (2 * h)
    return s * df + 1j * omega * mode_fn(eta, xi)


def wave_equation_residual(
    mode_fn: ModeFunction, k: float, eta: float = 0.0, xi: float = 0.0, h: float = 1e-4
) -> complex:
    """Three-point ``(d_xi^2 + k^2) f``."""
    f0 = mode_fn(eta, xi)
    d2 = (mode_fn(eta, xi + h) - 2.0 * f0 + mode_fn(eta, xi - h)) / (h * h)
    return d2 + k * k * f0


# ---------------------------------------------------------------------------
# discretised mode sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiscretizedModeSet:
    """Finite family of box modes; ``indices`` are kept in canonical order."""

    length: float
    indices: tuple[ModeIndex, ...]

    def __post_init__(self) -> None:
        if not self.length > 0:
            raise ValueError("box length must be positive")
        idx = tuple(sorted(self.indices))
        if len(set(idx)) != len(idx):
            raise ValueError("duplicate modes")
        if not idx:
            raise ValueError("empty mode set")
        kinds = {m.wedge is None for m in idx}
        if len(kinds) > 1:
            raise ValueError("cannot mix inertial and Rindler modes in one set")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def symmetric(
        cls,
        length: float,
        n_modes: int,
        wedges: Iterable[Optional[Wedge]] = (Wedge.LEFT, Wedge.RIGHT),
        polarizations: Iterable[int] = (1,),
    ) -> "DiscretizedModeSet":
        """``n = +-1, ..., +-n_modes`` for every wedge and polarisation."""
        if n_modes < 1:
            raise ValueError("need at least one mode number")
        idx = [
            ModeIndex(w, sgn * n, lam)
            for w in wedges
            for lam in polarizations
            for n in range(1, n_modes + 1)
            for sgn in (1, -1)
        ]
        return cls(length, tuple(idx))

    def __len__(self) -> int:
        return len(self.indices)

    @property
    def specs(self) -> list[ModeSpec]:
        return [ModeSpec.from_index(m, self.length) for m in self.indices]

    @property
    def ks(self) -> np.ndarray:
        return np.array([m.k(self.length) for m in self.indices])

    @property
    def omegas(self) -> np.ndarray:
        return np.abs(self.ks)

    @property
    def is_inertial(self) -> bool:
        return self.indices[0].wedge is None

    @property
    def blocks(self) -> tuple[Optional[Wedge], ...]:
        return (None,) if self.is_inertial else WEDGE_BLOCKS

    def is_symmetric(self) -> bool:
        keys = {(m.wedge, m.polarization, m.n) for m in self.indices}
        return all((w, lam, -n) in keys for w, lam, n in keys)

    def coefficients(self, phase: complex = 1j) -> list[ModeCoefficients]:
        return [ModeCoefficients.box(w, self.length, phase) for w in self.omegas]

    def min_points(self, per_wavelength: int = 16) -> int:
        """Smallest grid size resolving the shortest wavelength."""
        n_top = max(abs(m.n) for m in self.indices)
        return per_wavelength * n_top


def slice_samples(
    spec: ModeSpec,
    coeffs: ModeCoefficients,
    grid: PeriodicGrid,
    eta: float = 0.0,
    kind: str = "p",
    blocks: Sequence[Optional[Wedge]] = WEDGE_BLOCKS,
) -> np.ndarray:
    """Sample a mode on the constant-``eta`` slice, one row per wedge block.

    The mode vanishes identically outside its own wedge's block.
    """
    out = np.zeros((len(blocks), grid.n), dtype=complex)
    if spec.wedge not in blocks:
        raise ValueError(f"mode wedge {spec.wedge} is not one of the blocks {blocks}")
    row = list(blocks).index(spec.wedge)
    fn = p_mode if kind == "p" else q_mode
    out[row] = fn(spec, coeffs, eta, grid.points)
    return out


def inner_product_weight(
    grid: PeriodicGrid, chart: "ChartId | str" = ChartId.CONFORMAL, eta: float = 0.0, **params
) -> np.ndarray:
    """``sqrt|g| g^{tt}`` at each grid point; identically 1 up to rounding in the conformal chart."""
    chart = ChartId(chart)
    if chart is ChartId.MINKOWSKI:
        return np.ones(grid.n)
    out = np.empty(grid.n)
    for i, s in enumerate(grid.points):
        if chart is ChartId.CONFORMAL:
            p = SpacetimePoint.conformal(eta, s, params.get("wedge", "R"), params.get("a", 1.0))
        else:
            p = SpacetimePoint.polar(eta, s, params.get("wedge", "R"), params.get("alpha", 1.0))
        g = metric_at(p)
        out[i] = math.sqrt(abs(np.linalg.det(g))) / g[0, 0]
    return out


def inner_product(
    f: np.ndarray, g: np.ndarray, grid: PeriodicGrid, weight: Optional[np.ndarray] = None
) -> complex:
    """``sum dx w f^* g`` over every block of the slice."""
    f = np.atleast_2d(f)
    g = np.atleast_2d(g)
    if f.shape != g.shape:
        raise ValueError("sample arrays differ in shape")
    w = np.ones(grid.n) if weight is None else np.asarray(weight)
    return complex(np.sum(np.conj(f) * g * w) * grid.dx)


def gram_matrix(
    modes: DiscretizedModeSet,
    grid: PeriodicGrid,
    eta: float = 0.0,
    weight: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Inner products of the unit-amplitude plane waves ``e^{i(k xi - s omega eta)}``."""
    unit = ModeCoefficients(1.0)
    samples = [slice_samples(s, unit, grid, eta, blocks=modes.blocks) for s in modes.specs]
    n = len(samples)
    out = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            out[i, j] = inner_product(samples[i], samples[j], grid, weight)
    return out


def wedge_orthogonality_check(
    left: Sequence[ModeSpec],
    right: Sequence[ModeSpec],
    grid: PeriodicGrid,
    eta: float = 0.0,
) -> float:
    """Largest ``|<f_L, f_R>|`` and ``|<f_L^*, f_R>|`` between the two families."""
    unit = ModeCoefficients(1.0)
    worst = 0.0
    for sl in left:
        fl = slice_samples(sl, unit, grid, eta)
        for sr in right:
            fr = slice_samples(sr, unit, grid, eta)
            worst = max(
                worst,
                abs(inner_product(fl, fr, grid)),
                abs(inner_product(np.conj(fl), fr, grid)),
            )
    return worst
