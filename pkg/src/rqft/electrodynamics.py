"""
Classical electrodynamics on the shipped charts.

Field strength layout (all charts)::

    F_{mu nu} = [[  0,   E1,  E2,  E3],
                 [-E1,    0, -B3,  B2],
                 [-E2,   B3,    0, -B1],
                 [-E3,  -B2,   B1,   0]]

so a chart's "E" and "B" are simply the components of the covariant tensor in
that chart's coordinate basis.

Residual evaluators take *field samplers*, callables mapping a
:class:`~rqft.coordinates.SpacetimePoint` to :class:`EMFields`, and own the
central-difference stencils.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .coordinates import (
    ChartError,
    ChartId,
    SpacetimePoint,
    interchange_jacobian,
    jacobian_at,
    metric_at,
    polar_conformal_interchange,
    rindler_to_minkowski,
)

#: Default central-difference step for field derivatives.
FIELD_FD_STEP = 1e-4


@dataclass(frozen=True)
class EMFields:
    """Electric and magnetic 3-vectors, interpreted in ``chart``."""

    E: np.ndarray
    B: np.ndarray
    chart: ChartId = ChartId.MINKOWSKI

    def __post_init__(self) -> None:
        E = np.asarray(self.E, dtype=float).reshape(3)
        B = np.asarray(self.B, dtype=float).reshape(3)
        if not (np.all(np.isfinite(E)) and np.all(np.isfinite(B))):
            raise ValueError("field components must be finite")
        object.__setattr__(self, "E", E)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "chart", ChartId(self.chart))

    @classmethod
    def zero(cls, chart: ChartId = ChartId.MINKOWSKI) -> "EMFields":
        return cls(np.zeros(3), np.zeros(3), chart)


@dataclass(frozen=True)
class FieldStrength:
    covariant: np.ndarray
    chart: ChartId = ChartId.MINKOWSKI

    def __post_init__(self) -> None:
        F = np.asarray(self.covariant, dtype=float)
        if F.shape != (4, 4):
            raise ValueError("field strength must be 4x4")
        if not np.array_equal(F, -F.T):
            raise ValueError("field strength must be antisymmetric")
        object.__setattr__(self, "covariant", F)


@dataclass(frozen=True)
class StressEnergy:
    components: np.ndarray  # T_{mu nu}
    metric: np.ndarray = field(repr=False)

    @property
    def mixed(self) -> np.ndarray:
        """``T^mu_nu``."""
        return np.linalg.inv(self.metric) @ self.components

    @property
    def trace(self) -> float:
        return float(np.trace(self.mixed))


# ---------------------------------------------------------------------------
# tensor layout
# ---------------------------------------------------------------------------


def _layout(E: Sequence[float], B: Sequence[float]) -> np.ndarray:
    E1, E2, E3 = E
    B1, B2, B3 = B
    return np.array(
        [
            [0.0, E1, E2, E3],
            [-E1, 0.0, -B3, B2],
            [-E2, B3, 0.0, -B1],
            [-E3, -B2, B1, 0.0],
        ]
    )


def assemble_field_strength(f: EMFields) -> FieldStrength:
    return FieldStrength(_layout(f.E, f.B), f.chart)


def extract_fields(F: "FieldStrength | np.ndarray", chart: Optional[ChartId] = None) -> EMFields:
    if isinstance(F, FieldStrength):
        chart = F.chart if chart is None else chart
        F = F.covariant
    F = np.asarray(F, dtype=float)
    return EMFields(
        E=F[0, 1:],
        B=np.array([-F[2, 3], F[1, 3], -F[1, 2]]),
        chart=chart or ChartId.MINKOWSKI,
    )


def raise_field_strength(F: "FieldStrength | np.ndarray", g: np.ndarray) -> np.ndarray:
    """``F^{mu nu} = g^{mu sig} g^{nu rho} F_{sig rho}``.

    Raises ``ChartError`` for a singular metric (e.g. ``rho = 0`` in the polar chart).
    """
    Fc = F.covariant if isinstance(F, FieldStrength) else np.asarray(F, dtype=float)
    g = np.asarray(g, dtype=float)
    det = np.linalg.det(g)
    if not math.isfinite(det) or abs(det) < 1e-300:
        raise ChartError("metric is singular, cannot raise indices")
    ginv = np.linalg.inv(g)
    return ginv @ Fc @ ginv.T


def contravariant_closed_form(f: EMFields, p: SpacetimePoint) -> np.ndarray:
    """Hand-derived ``F^{mu nu}`` tables for the diagonal shipped metrics."""
    E1, E2, E3 = f.E
    B1, B2, B3 = f.B
    if p.chart is ChartId.MINKOWSKI:
        e_long = e_tr = b_tr = 1.0
    elif p.chart is ChartId.CONFORMAL:
        e2 = math.exp(-2.0 * p.a * p.coords[1])  # type: ignore[operator]
        e_long, e_tr, b_tr = e2 * e2, e2, e2
    else:
        inv = 1.0 / (p.alpha * p.coords[1]) ** 2  # type: ignore[operator]
        e_long, e_tr, b_tr = inv, inv, 1.0
    return np.array(
        [
            [0.0, -E1 * e_long, -E2 * e_tr, -E3 * e_tr],
            [E1 * e_long, 0.0, -B3 * b_tr, B2 * b_tr],
            [E2 * e_tr, B3 * b_tr, 0.0, -B1],
            [E3 * e_tr, -B2 * b_tr, B1, 0.0],
        ]
    )


# ---------------------------------------------------------------------------
# frame transformations
# ---------------------------------------------------------------------------


def pull_back(F: np.ndarray, J: np.ndarray) -> np.ndarray:
    """``F'_{mu nu} = J[mu, a] J[nu, b] F_{ab}``."""
    return J @ F @ J.T


def _transform_closed_form(f: EMFields, p: SpacetimePoint) -> EMFields:
    E1, E2, E3 = f.E
    B1, B2, B3 = f.B
    s = p.wedge.sign  # type: ignore[union-attr]
    u, v = p.coords[:2]
    if p.chart is ChartId.POLAR:
        ch, sh = math.cosh(p.alpha * u), math.sinh(p.alpha * u)  # type: ignore[operator]
        lapse = p.alpha * v  # type: ignore[operator]
        boost_scale = 1.0
    else:
        ch, sh = math.cosh(p.a * u), math.sinh(p.a * u)  # type: ignore[operator]
        lapse = boost_scale = math.exp(p.a * v)  # type: ignore[operator]
    # E1 and B1 are even in the wedge sign; the transverse rows pick up one factor s
    E = (
        E1 * lapse * boost_scale,
        s * lapse * (E2 * ch - B3 * sh),
        s * lapse * (E3 * ch + B2 * sh),
    )
    B = (
        B1,
        s * boost_scale * (B2 * ch + E3 * sh),
        s * boost_scale * (B3 * ch - E2 * sh),
    )
    return EMFields(np.array(E), np.array(B), p.chart)


def transform_fields(f_mink: EMFields, p: SpacetimePoint, method: str = "closed") -> EMFields:
    """Express inertial fields in the Rindler chart of ``p``.

    ``method="closed"`` uses hand-derived component lists; ``"jacobian"``
    contracts the covariant tensor with :func:`~rqft.coordinates.jacobian_at`.
    """
    if not p.chart.is_rindler:
        raise ChartError("transform_fields needs a Rindler point")
    if method == "jacobian":
        F = pull_back(assemble_field_strength(f_mink).covariant, jacobian_at(p))
        return extract_fields(F, p.chart)
    if method != "closed":
        raise ValueError(f"unknown method {method!r}")
    return _transform_closed_form(f_mink, p)


FieldSampler = Callable[[SpacetimePoint], EMFields]


def rindler_sampler(minkowski_sampler: FieldSampler) -> FieldSampler:
    """Wrap an inertial-frame sampler so it can be evaluated at Rindler points."""

    def sample(p: SpacetimePoint) -> EMFields:
        return transform_fields(minkowski_sampler(rindler_to_minkowski(p)), p, method="jacobian")

    return sample


def interchanged_sampler(sampler: FieldSampler) -> FieldSampler:
    """Evaluate a sampler defined on one Rindler chart at points of the other one."""

    def sample(p: SpacetimePoint) -> EMFields:
        q = polar_conformal_interchange(p)
        F = assemble_field_strength(sampler(q)).covariant
        # d x_q / d x_p is the interchange Jacobian taken at p
        return extract_fields(pull_back(F, interchange_jacobian(p)), p.chart)

    return sample


# ---------------------------------------------------------------------------
# residuals
# ---------------------------------------------------------------------------


def _derivatives(sampler: FieldSampler, p: SpacetimePoint, h: float):
    """Central differences of E and B along each coordinate: arrays of shape (4, 3)."""
    dE = np.empty((4, 3))
    dB = np.empty((4, 3))
    for mu in range(4):
        fp = sampler(p.shifted(mu, h))
        fm = sampler(p.shifted(mu, -h))
        dE[mu] = (fp.E - fm.E) / (2 * h)
        dB[mu] = (fp.B - fm.B) / (2 * h)
    return dE, dB


def maxwell_residual(sampler: FieldSampler, p: SpacetimePoint, h: float = FIELD_FD_STEP) -> np.ndarray:
    """Residuals (LHS - RHS) of the four source-free Maxwell equations in ``p``'s chart.

    Row 0 is the Gauss law, rows 1-3 the Ampere components, written in the
    component form native to each chart (the conformal form keeps its
    ``-2 a E1 e^{-2 a xi}`` term; the polar form its ``1/rho`` terms).
    """
    f = sampler(p)
    E1, E2, E3 = f.E
    _, B2, B3 = f.B
    dE, dB = _derivatives(sampler, p, h)
    d0, d1, d2, d3 = 0, 1, 2, 3
    r = np.empty(4)
    if p.chart is ChartId.MINKOWSKI:
        r[0] = dE[d1, 0] + dE[d2, 1] + dE[d3, 2]
        r[1] = dE[d0, 0] - (dB[d2, 2] - dB[d3, 1])
        r[2] = dE[d0, 1] - (dB[d3, 0] - dB[d1, 2])
        r[3] = dE[d0, 2] - (dB[d1, 1] - dB[d2, 0])
    elif p.chart is ChartId.CONFORMAL:
        a, xi = p.a, p.coords[1]
        em2 = math.exp(-2.0 * a * xi)  # type: ignore[operator]
        ep2 = 1.0 / em2
        r[0] = em2 * dE[d1, 0] - 2.0 * a * E1 * em2 + dE[d2, 1] + dE[d3, 2]  # type: ignore[operator]
        r[1] = em2 * dE[d0, 0] - (dB[d2, 2] - dB[d3, 1])
        r[2] = dE[d0, 1] - (ep2 * dB[d3, 0] - dB[d1, 2])
        r[3] = dE[d0, 2] - (dB[d1, 1] - ep2 * dB[d2, 0])
    else:
        rho = p.coords[1]
        lapse2 = (p.alpha * rho) ** 2  # type: ignore[operator]
        r[0] = dE[d1, 0] - E1 / rho + dE[d2, 1] + dE[d3, 2]
        r[1] = dE[d0, 0] / lapse2 - (dB[d2, 2] - dB[d3, 1])
        r[2] = dE[d0, 1] / lapse2 - (dB[d3, 0] - dB[d1, 2] - B3 / rho)
        r[3] = dE[d0, 2] / lapse2 - (dB[d1, 1] + B2 / rho - dB[d2, 0])
    return r


def covariant_maxwell_residual(
    sampler: FieldSampler, p: SpacetimePoint, h: float = FIELD_FD_STEP
) -> np.ndarray:
    """``|g|^{-1/2} d_mu (|g|^{1/2} F^{mu nu})`` by central differences, for any chart.

    Chart-independent cross-check of :func:`maxwell_residual`; the two agree
    up to a per-row factor (``+-sqrt|g|`` in the conformal chart,
    ``(alpha rho)^2, -1, -1, -1`` in the polar chart).
    """

    def density(q: SpacetimePoint) -> np.ndarray:
        g = metric_at(q)
        F = assemble_field_strength(sampler(q)).covariant
        return math.sqrt(abs(np.linalg.det(g))) * raise_field_strength(F, g)

    div = np.zeros(4)
    for mu in range(4):
        div += (density(p.shifted(mu, h))[mu] - density(p.shifted(mu, -h))[mu]) / (2 * h)
    return div / math.sqrt(abs(np.linalg.det(metric_at(p))))


def bianchi_residual(sampler: FieldSampler, p: SpacetimePoint, h: float = FIELD_FD_STEP) -> np.ndarray:
    """Homogeneous equations: ``[div B, Faraday_1, Faraday_2, Faraday_3]`` (LHS - RHS).

    These take the flat-space form in every shipped chart, with the chart's
    first coordinate as time and second as the longitudinal direction.
    """
    dE, dB = _derivatives(sampler, p, h)
    return np.array(
        [
            dB[1, 0] + dB[2, 1] + dB[3, 2],
            dB[0, 0] - (dE[3, 1] - dE[2, 2]),
            dB[0, 1] - (dE[1, 2] - dE[3, 0]),
            dB[0, 2] - (dE[2, 0] - dE[1, 1]),
        ]
    )


ScalarField = Callable[[float, float], complex]


def embed_polarization(E: float, B: float, polarization: int, chart: ChartId = ChartId.CONFORMAL) -> EMFields:
    """Transverse 1D fields: ``lambda=1 -> E=(0,E,0), B=(0,0,B)``; ``lambda=2 -> E=(0,0,E), B=(0,-B,0)``."""
    if polarization == 1:
        return EMFields((0.0, E, 0.0), (0.0, 0.0, B), chart)
    if polarization == 2:
        return EMFields((0.0, 0.0, E), (0.0, -B, 0.0), chart)
    raise ValueError("polarization must be 1 or 2")


def reduced_1d_maxwell_residual(
    E: ScalarField,
    B: ScalarField,
    p: SpacetimePoint,
    h: float = FIELD_FD_STEP,
) -> tuple[complex, complex]:
    """Residuals of the two reduced equations for longitudinal propagation.

    ``E`` and ``B`` are scalar functions of ``(time, longitudinal)`` chart
    coordinates, e.g. ``(eta, xi)``. The result is identical for both
    polarisations.

    Conformal / Minkowski chart::

        r1 = d_eta E + d_xi B
        r2 = d_xi E + d_eta B

    Polar chart::

        r1 = d_zeta E / (rho alpha)^2 + d_rho B + B / rho
        r2 = d_rho E + d_zeta B
    """
    u, v = p.coords[:2]
    dE_t = (E(u + h, v) - E(u - h, v)) / (2 * h)
    dE_s = (E(u, v + h) - E(u, v - h)) / (2 * h)
    dB_t = (B(u + h, v) - B(u - h, v)) / (2 * h)
    dB_s = (B(u, v + h) - B(u, v - h)) / (2 * h)
    if p.chart is ChartId.POLAR:
        lapse2 = (p.alpha * v) ** 2  # type: ignore[operator]
        return dE_t / lapse2 + dB_s + B(u, v) / v, dE_s + dB_t
    return dE_t + dB_s, dE_s + dB_t


def conformal_to_polar_scalars(
    E: ScalarField, B: ScalarField, a: float, alpha: float
) -> tuple[ScalarField, ScalarField]:
    """Carry transverse conformal-chart scalars over to the polar chart.

    Tensor transformation with ``d eta / d zeta = alpha / a`` and
    ``d xi / d rho = 1 / (a rho)`` gives ``E_p = (alpha/a) E_c`` and
    ``B_p = B_c / (a rho)``.
    """

    def to_conf(zeta: float, rho: float) -> tuple[float, float]:
        return alpha * zeta / a, math.log(a * rho) / a

    def E_p(zeta: float, rho: float) -> complex:
        return (alpha / a) * E(*to_conf(zeta, rho))

    def B_p(zeta: float, rho: float) -> complex:
        return B(*to_conf(zeta, rho)) / (a * rho)

    return E_p, B_p


# ---------------------------------------------------------------------------
# energy
# ---------------------------------------------------------------------------


def stress_energy_at(F: "FieldStrength | np.ndarray", g: np.ndarray) -> StressEnergy:
    """``T_{mu nu} = F_{mu rho} F^rho_nu + 1/4 g_{mu nu} F_{rho sig} F^{rho sig}``."""
    Fc = F.covariant if isinstance(F, FieldStrength) else np.asarray(F, dtype=float)
    g = np.asarray(g, dtype=float)
    ginv = np.linalg.inv(g)
    F_up = ginv @ Fc @ ginv.T
    F_mixed = ginv @ Fc  # F^rho_nu
    invariant = float(np.sum(Fc * F_up))
    T = Fc @ F_mixed + 0.25 * g * invariant
    T = 0.5 * (T + T.T)  # exact symmetry; the asymmetric part is rounding only
    return StressEnergy(T, g)


@dataclass(frozen=True)
class PeriodicGrid:
    """Uniform grid on ``[0, length)``; trapezoid weights are all ``length / n``."""

    length: float
    n: int

    def __post_init__(self) -> None:
        if not self.length > 0 or self.n < 1:
            raise ValueError("grid needs length > 0 and n >= 1")

    @property
    def points(self) -> np.ndarray:
        return np.arange(self.n) * (self.length / self.n)

    @property
    def dx(self) -> float:
        return self.length / self.n


def _slice_point(chart: ChartId, time: float, s: float, **params) -> SpacetimePoint:
    if chart is ChartId.MINKOWSKI:
        return SpacetimePoint.minkowski(time, s)
    if chart is ChartId.CONFORMAL:
        return SpacetimePoint.conformal(time, s, params.get("wedge", "R"), params["a"])
    return SpacetimePoint.polar(time, s, params.get("wedge", "R"), params["alpha"])


def energy_weight(p: SpacetimePoint) -> float:
    """``sqrt|gamma| n^0 K^0`` on a constant-time slice with ``K`` the chart time translation."""
    g = metric_at(p)
    sqrt_gamma = math.sqrt(abs(np.linalg.det(g[1:, 1:])))
    n0 = 1.0 / math.sqrt(g[0, 0])
    return sqrt_gamma * n0


def classical_hamiltonian(
    sampler: FieldSampler,
    chart: "ChartId | str",
    grid: PeriodicGrid,
    time: float = 0.0,
    density: str = "field_squared",
    **params,
) -> float:
    """Field energy on a constant-time slice, trapezoid rule on a periodic grid.

    ``density="field_squared"`` integrates ``1/2 (E^2 + B^2) sqrt|gamma| n^0 K^0``;
    in the conformal chart the weight is ``e^{a xi} e^{-a xi} = 1``.
    ``density="stress_energy"`` integrates ``sqrt|g| T^0_0`` built from
    :func:`stress_energy_at`; it agrees with the first form for inertial
    fields and for transverse conformal-chart fields.

    Extra keyword arguments (``a``, ``alpha``, ``wedge``) define the chart points.
    """
    chart = ChartId(chart)
    total = 0.0
    for s in grid.points:
        p = _slice_point(chart, time, s, **params)
        f = sampler(p)
        if density == "field_squared":
            total += 0.5 * (f.E @ f.E + f.B @ f.B) * energy_weight(p)
        elif density == "stress_energy":
            g = metric_at(p)
            T = stress_energy_at(assemble_field_strength(f), g)
            total += math.sqrt(abs(np.linalg.det(g))) * T.mixed[0, 0]
        else:
            raise ValueError(f"unknown density {density!r}")
    return total * grid.dx
