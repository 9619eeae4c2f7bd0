"""
Field operators of the reduced 1D electromagnetic field and their consistency checks.

For every mode ``m`` of a :class:`~rqft.modes.DiscretizedModeSet` the scalar
field operators are::

    E_lambda = sum_m  p_m(eta, xi) b_m + h.c.
    B_lambda = sum_m  q_m(eta, xi) b_m + h.c.

with box-normalised ``p_m = i sqrt(omega / 2L) e^{i(k xi - s omega eta)}``
and ``q_m = s (k / omega) p_m``. Only the modes of the wedge that contains
the evaluation point contribute.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
import scipy.sparse as sp

from .coordinates import ChartId, SpacetimePoint, Wedge
from .electrodynamics import (
    FIELD_FD_STEP,
    PeriodicGrid,
    conformal_to_polar_scalars,
    reduced_1d_maxwell_residual,
)
from .fock import (
    FockSpace,
    FockState,
    ModeIndex,
    QuantumOperator,
    eta_generator,
    expectation,
    hamiltonian,
)
from .modes import DiscretizedModeSet, time_sign

OperatorFamily = Callable[[float], QuantumOperator]


@dataclass
class FieldOperatorSpec:
    """Mode set, truncation and phase convention shared by ``E`` and ``B``.

    ``left_time_sign`` is the sign ``s`` used in left-wedge phases. The
    physical value is -1; +1 reproduces a left-wedge mode with the wrong
    frequency sign and exists for negative tests.
    """

    modes: DiscretizedModeSet
    n_max: int = 6
    chart: ChartId = ChartId.CONFORMAL
    phase: complex = 1j
    a: float = 1.0
    left_time_sign: int = -1
    space: FockSpace = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.chart = ChartId(self.chart)
        if self.chart is ChartId.POLAR:
            raise ValueError("field operators are built in the conformal or Minkowski chart")
        if self.modes.is_inertial != (self.chart is ChartId.MINKOWSKI):
            raise ValueError("inertial modes go with the Minkowski chart and Rindler modes with a Rindler chart")
        if abs(abs(self.phase) - 1.0) > 1e-12:
            raise ValueError("phase must have unit modulus")
        self.space = FockSpace(self.modes.indices, self.n_max)

    @property
    def length(self) -> float:
        return self.modes.length

    def sign(self, m: ModeIndex) -> int:
        if m.wedge is Wedge.LEFT:
            return self.left_time_sign
        return time_sign(m.wedge)

    def amplitude(self, m: ModeIndex) -> complex:
        return self.phase * math.sqrt(m.omega(self.length) / (2.0 * self.length))

    def mode_values(self, m: ModeIndex, eta, xi) -> tuple:
        """``(p_m, q_m)`` at ``(eta, xi)``; accepts arrays."""
        k = m.k(self.length)
        w = abs(k)
        s = self.sign(m)
        p = self.amplitude(m) * np.exp(1j * (k * np.asarray(xi) - s * w * np.asarray(eta)))
        q = time_sign(m.wedge) * math.copysign(1.0, k) * p
        return p, q

    def wedge_modes(self, wedge: Optional[Wedge], polarization: Optional[int] = None) -> list[ModeIndex]:
        w = Wedge.parse(wedge) if wedge is not None else None
        return [
            m
            for m in self.modes.indices
            if m.wedge is w and (polarization is None or m.polarization == polarization)
        ]


def _linear_operator(spec: FieldOperatorSpec, coeffs: dict) -> QuantumOperator:
    space = spec.space
    mat = sp.csr_matrix((space.dim, space.dim), dtype=complex)
    for m, c in coeffs.items():
        b = space.annihilation(m)
        mat = mat + c * b + np.conj(c) * b.T
    return QuantumOperator(mat, space)


def _field_coefficients(spec, kind, eta, xi, wedge, polarization) -> dict:
    out = {}
    for m in spec.wedge_modes(wedge, polarization):
        p, q = spec.mode_values(m, eta, xi)
        out[m] = complex(p if kind == "E" else q)
    return out


def electric_operator(
    spec: FieldOperatorSpec,
    eta: float,
    xi: float,
    wedge: "Wedge | str | None" = Wedge.RIGHT,
    polarization: int = 1,
) -> QuantumOperator:
    """Scalar ``E_lambda`` at ``(eta, xi)`` in ``wedge``; self-adjoint by construction."""
    return _linear_operator(spec, _field_coefficients(spec, "E", eta, xi, wedge, polarization))


def magnetic_operator(
    spec: FieldOperatorSpec,
    eta: float,
    xi: float,
    wedge: "Wedge | str | None" = Wedge.RIGHT,
    polarization: int = 1,
) -> QuantumOperator:
    return _linear_operator(spec, _field_coefficients(spec, "B", eta, xi, wedge, polarization))


def field_vector_operators(
    spec: FieldOperatorSpec, eta: float, xi: float, wedge: "Wedge | str | None" = Wedge.RIGHT
) -> tuple[list[QuantumOperator], list[QuantumOperator]]:
    """Cartesian components ``(E_x, E_y, E_z), (B_x, B_y, B_z)`` for propagation along ``xi``."""
    zero = QuantumOperator(sp.csr_matrix((spec.space.dim, spec.space.dim)), spec.space)
    E1 = electric_operator(spec, eta, xi, wedge, 1)
    E2 = electric_operator(spec, eta, xi, wedge, 2)
    B1 = magnetic_operator(spec, eta, xi, wedge, 1)
    B2 = magnetic_operator(spec, eta, xi, wedge, 2)
    return [zero, E1, E2], [zero, -1.0 * B2, B1]


def minkowski_field_operators(
    spec: FieldOperatorSpec, t: float, x: float, polarization: int = 1
) -> tuple[QuantumOperator, QuantumOperator]:
    """``(E, B)`` of an inertial mode set at ``(t, x)``."""
    if spec.chart is not ChartId.MINKOWSKI:
        raise ValueError("spec is not inertial")
    return (
        electric_operator(spec, t, x, None, polarization),
        magnetic_operator(spec, t, x, None, polarization),
    )


# ---------------------------------------------------------------------------
# expectations and dynamics
# ---------------------------------------------------------------------------


def ladder_expectations(spec: FieldOperatorSpec, state: "FockState | np.ndarray") -> dict:
    """``<b_m>`` for every mode."""
    v = spec.space.vector(state) if isinstance(state, FockState) else np.asarray(state)
    return {m: complex(np.vdot(v, spec.space.annihilation(m) @ v)) for m in spec.modes.indices}


@dataclass
class ExpectationField:
    """Classical fields ``<E>``, ``<B>`` obtained by linearity from ``<b_m>``."""

    spec: FieldOperatorSpec
    amplitudes: dict

    def _value(self, kind, eta, xi, wedge, polarization):
        total = 0.0
        for m in self.spec.wedge_modes(wedge, polarization):
            p, q = self.spec.mode_values(m, eta, xi)
            c = p if kind == "E" else q
            total = total + 2.0 * np.real(c * self.amplitudes[m])
        return total

    def electric(self, wedge=Wedge.RIGHT, polarization: int = 1) -> Callable[[float, float], float]:
        w = Wedge.parse(wedge) if wedge is not None else None
        return lambda eta, xi: self._value("E", eta, xi, w, polarization)

    def magnetic(self, wedge=Wedge.RIGHT, polarization: int = 1) -> Callable[[float, float], float]:
        w = Wedge.parse(wedge) if wedge is not None else None
        return lambda eta, xi: self._value("B", eta, xi, w, polarization)


def expectation_field(spec: FieldOperatorSpec, state: "FockState | np.ndarray") -> ExpectationField:
    return ExpectationField(spec, ladder_expectations(spec, state))


def heisenberg_residual(
    op_family: OperatorFamily,
    generator: QuantumOperator,
    state: "FockState | np.ndarray",
    eta: float,
    h: float = FIELD_FD_STEP,
) -> complex:
    """``d_eta <O> + i <[O, G]>`` with a central difference in ``eta``."""
    O = op_family(eta)
    d = (expectation(state, op_family(eta + h)) - expectation(state, op_family(eta - h))) / (2 * h)
    return d + 1j * expectation(state, O.commutator(generator))


def heisenberg_check(
    spec: FieldOperatorSpec,
    state: "FockState | np.ndarray",
    eta: float,
    xi: float,
    wedge: "Wedge | str | None" = Wedge.RIGHT,
    kind: str = "E",
    polarization: int = 1,
    h: float = FIELD_FD_STEP,
    generator: Optional[QuantumOperator] = None,
) -> complex:
    """Heisenberg residual of ``E`` or ``B`` with the ``eta``-translation generator by default.

    For right-wedge or inertial modes the generator equals the physical
    Hamiltonian up to its constant, so the two choices agree.
    """
    builder = electric_operator if kind == "E" else magnetic_operator
    if generator is None:
        generator = eta_generator(spec.space, spec.length)
    return heisenberg_residual(
        lambda e: builder(spec, e, xi, wedge, polarization), generator, state, eta, h
    )


@dataclass
class MaxwellCheck:
    max_residual: float
    residuals: np.ndarray  # (wedge, polarization, eta, xi, 2)
    etas: np.ndarray
    xis: np.ndarray


def maxwell_expectation_check(
    spec: FieldOperatorSpec,
    state: "FockState | np.ndarray",
    n_eta: int = 32,
    n_xi: int = 32,
    eta_range: tuple[float, float] = (0.0, 1.0),
    h: float = FIELD_FD_STEP,
    target: "ChartId | str | None" = None,
    alpha: float = 1.0,
) -> MaxwellCheck:
    """Reduced Maxwell residuals of ``<E>``, ``<B>`` on an ``n_eta x n_xi`` grid per wedge and polarisation.

    ``target="polar"`` carries the conformal-chart expectations over to the
    polar chart with parameter ``alpha`` and checks the polar equations at
    the images of the same grid points.
    """
    polar = target is not None and ChartId(target) is ChartId.POLAR
    if polar and spec.chart is not ChartId.CONFORMAL:
        raise ValueError("polar checks start from conformal-chart operators")
    fields = expectation_field(spec, state)
    etas = np.linspace(eta_range[0], eta_range[1], n_eta)
    xis = PeriodicGrid(spec.length, n_xi).points
    blocks = spec.modes.blocks
    pols = sorted({m.polarization for m in spec.modes.indices})
    out = np.zeros((len(blocks), len(pols), n_eta, n_xi, 2))
    for bi, w in enumerate(blocks):
        for li, lam in enumerate(pols):
            E = fields.electric(w, lam)
            B = fields.magnetic(w, lam)
            if polar:
                E, B = conformal_to_polar_scalars(E, B, spec.a, alpha)
            for i, eta in enumerate(etas):
                for j, xi in enumerate(xis):
                    if w is None:
                        p = SpacetimePoint.minkowski(eta, xi)
                    elif polar:
                        p = SpacetimePoint.polar(spec.a * eta / alpha, math.exp(spec.a * xi) / spec.a, w, alpha)
                    else:
                        p = SpacetimePoint.conformal(eta, xi, w, spec.a)
                    r1, r2 = reduced_1d_maxwell_residual(E, B, p, h)
                    out[bi, li, i, j] = abs(r1), abs(r2)
    return MaxwellCheck(float(out.max()) if out.size else 0.0, out, etas, xis)


# ---------------------------------------------------------------------------
# Hamiltonian equivalence
# ---------------------------------------------------------------------------


@dataclass
class EquivalenceResult:
    deviation: float
    zero_point: float
    expected_zero_point: float
    cross_block_max: float
    quadrature: sp.csr_matrix = field(repr=False)  # operator on the retained subspace
    target: sp.csr_matrix = field(repr=False)


def _ladder_terms(spec: FieldOperatorSpec, grid: PeriodicGrid, eta: float, kind: str):
    """Rows ``f_j`` sampled over all wedge blocks for the terms ``f_j O_j`` of one field."""
    blocks = spec.modes.blocks
    rows, terms = [], []
    for m in spec.modes.indices:
        p, q = spec.mode_values(m, eta, grid.points)
        vals = p if kind == "E" else q
        row = np.zeros((len(blocks), grid.n), dtype=complex)
        row[blocks.index(m.wedge)] = vals
        rows.append(row.ravel())
        terms.append((m, False))
        rows.append(np.conj(row).ravel())
        terms.append((m, True))
    return np.array(rows), terms


def hamiltonian_equivalence(
    spec: FieldOperatorSpec,
    grid: Optional[PeriodicGrid] = None,
    eta: float = 0.0,
    points_per_wavelength: int = 16,
) -> EquivalenceResult:
    """Compare ``1/2 sum_lambda int (E^2 + B^2) dxi`` with ``sum omega b^dagger b + H_0``.

    The quadratic form is assembled in a space padded by one quantum per
    mode so that every product ``O_j O_j'`` is exact, then restricted to
    occupations ``<= n_max``. Only same-polarisation pairs enter because the
    polarisation vectors are orthonormal.
    """
    if grid is None:
        grid = PeriodicGrid(spec.length, spec.modes.min_points(points_per_wavelength))
    if abs(grid.length - spec.length) > 1e-12 * spec.length:
        raise ValueError("grid must span the mode box")
    if grid.n < spec.modes.min_points(points_per_wavelength):
        raise ValueError(
            f"grid of {grid.n} points does not resolve the shortest wavelength "
            f"({points_per_wavelength} points per wavelength needed)"
        )
    padded = FockSpace(spec.modes.indices, spec.n_max + 1)
    weights = {}
    terms = None
    for kind in ("E", "B"):
        rows, terms = _ladder_terms(spec, grid, eta, kind)
        weights[kind] = rows @ rows.T * grid.dx
    coeff = 0.5 * (weights["E"] + weights["B"])

    ops = [padded.creation(m) if dag else padded.annihilation(m) for m, dag in terms]
    mat = sp.csr_matrix((padded.dim, padded.dim), dtype=complex)
    cross = 0.0
    for j, (mj, _) in enumerate(terms):
        for jj, (mjj, _) in enumerate(terms):
            if mj.polarization != mjj.polarization:
                continue
            c = coeff[j, jj]
            if mj.wedge is not mjj.wedge:
                cross = max(cross, abs(c))
            if c != 0:
                mat = mat + c * (ops[j] @ ops[jj])

    keep = padded.safe_indices(spec.n_max)
    quad = mat[keep][:, keep].tocsr()
    target_op = hamiltonian(spec.space, spec.length, zero_point=True)
    # the retained padded basis has the same ordering as the unpadded one
    target = target_op.matrix
    diff = (quad - target).tocsr()
    deviation = float(np.max(np.abs(diff.data))) if diff.nnz else 0.0
    return EquivalenceResult(
        deviation=deviation,
        zero_point=float(quad[0, 0].real),
        expected_zero_point=target_op.zero_point,
        cross_block_max=cross,
        quadrature=quad,
        target=target,
    )


def pointwise_field_energy(spec: FieldOperatorSpec, grid: PeriodicGrid, eta: float = 0.0) -> sp.csr_matrix:
    """Brute-force ``1/2 sum_x dx (E(x)^2 + B(x)^2)`` with operators squared point by point.

    Matrix products are taken in a padded space and restricted like
    :func:`hamiltonian_equivalence`; slow, intended for small cross-checks.
    """
    padded_spec = FieldOperatorSpec(
        spec.modes, spec.n_max + 1, spec.chart, spec.phase, spec.a, spec.left_time_sign
    )
    dim = padded_spec.space.dim
    total = sp.csr_matrix((dim, dim), dtype=complex)
    pols = sorted({m.polarization for m in spec.modes.indices})
    for w in spec.modes.blocks:
        for lam in pols:
            if not padded_spec.wedge_modes(w, lam):
                continue
            for x in grid.points:
                E = electric_operator(padded_spec, eta, x, w, lam).matrix
                B = magnetic_operator(padded_spec, eta, x, w, lam).matrix
                total = total + E @ E + B @ B
    keep = padded_spec.space.safe_indices(spec.n_max)
    return (0.5 * grid.dx * total[keep][:, keep]).tocsr()
