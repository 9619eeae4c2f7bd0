r"""
Coordinate charts for flat spacetime and its two Rindler wedges.

Three chart families are shipped:

* ``MINKOWSKI`` with coordinates ``(t, x, y, z)``;
* ``POLAR`` Rindler coordinates ``(zeta, rho, y, z)`` with
  ``t = ±rho sinh(alpha zeta)``, ``x = ±rho cosh(alpha zeta)``;
* ``CONFORMAL`` Rindler coordinates ``(eta, xi, y, z)`` with
  ``t = ±a^{-1} e^{a xi} sinh(a eta)``, ``x = ±a^{-1} e^{a xi} cosh(a eta)``.

The upper sign labels the right wedge (``|t| < x``), the lower sign the left
wedge (``|t| < -x``). Metric signature is ``(+, -, -, -)`` and ``hbar = c = 1``.

Index conventions used throughout the package:

* ``metric_at(p)[mu, nu]`` is ``g_{mu nu}``;
* ``metric_derivatives_at(p)[lam, mu, nu]`` is ``d_lam g_{mu nu}``;
* ``jacobian_at(p)[mu, alpha]`` is ``d x_M^alpha / d x_R^mu``;
* ``christoffel_at(p)[mu, nu, rho]`` is ``Gamma^mu_{nu rho}``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np

#: Default step for metric/Jacobian finite differences.
METRIC_FD_STEP = 1e-5


class ChartId(str, enum.Enum):
    MINKOWSKI = "minkowski"
    POLAR = "polar"
    CONFORMAL = "conformal"

    @property
    def is_rindler(self) -> bool:
        return self is not ChartId.MINKOWSKI


class Wedge(str, enum.Enum):
    LEFT = "L"
    RIGHT = "R"

    @property
    def sign(self) -> int:
        """+1 in the right wedge, -1 in the left wedge."""
        return 1 if self is Wedge.RIGHT else -1

    @classmethod
    def parse(cls, value: "str | Wedge") -> "Wedge":
        if isinstance(value, Wedge):
            return value
        key = str(value).strip().upper()
        if key in ("R", "RIGHT", "RR"):
            return cls.RIGHT
        if key in ("L", "LEFT", "LR"):
            return cls.LEFT
        raise ValueError(f"unknown wedge {value!r}")


class ChartError(ValueError):
    """A point or parameter set is invalid for the requested chart."""


class OutsideWedgeError(ChartError):
    """A Minkowski point lies in neither Rindler wedge (``|t| >= |x|``)."""


@dataclass(frozen=True)
class SpacetimePoint:
    """A coordinate 4-tuple tagged with its chart, wedge and chart parameters.

    ``alpha`` is the acceleration parameter of the polar chart and ``a`` that
    of the conformal chart. A point must carry the parameter of its own chart;
    the other one is optional and only needed for chart interchange.
    """

    chart: ChartId
    coords: tuple[float, float, float, float]
    wedge: Optional[Wedge] = None
    alpha: Optional[float] = None
    a: Optional[float] = None

    def __post_init__(self) -> None:
        coords = tuple(float(c) for c in self.coords)
        if len(coords) != 4:
            raise ChartError("a spacetime point needs exactly 4 coordinates")
        if not all(math.isfinite(c) for c in coords):
            raise ChartError(f"non-finite coordinates {coords}")
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "chart", ChartId(self.chart))
        if self.wedge is not None:
            object.__setattr__(self, "wedge", Wedge.parse(self.wedge))
        for name in ("alpha", "a"):
            val = getattr(self, name)
            if val is not None and not (val > 0 and math.isfinite(val)):
                raise ChartError(f"{name} must be a finite positive number, got {val}")

        if self.chart is ChartId.MINKOWSKI:
            if self.wedge is not None:
                raise ChartError("Minkowski points carry no wedge")
            return
        if self.wedge is None:
            raise ChartError(f"{self.chart.value} points need a wedge")
        if self.chart is ChartId.POLAR:
            if self.alpha is None:
                raise ChartError("polar Rindler points need alpha > 0")
            if not coords[1] > 0:
                raise ChartError(f"polar Rindler points need rho > 0, got {coords[1]}")
        elif self.a is None:
            raise ChartError("conformal Rindler points need a > 0")

    # constructors -------------------------------------------------------

    @classmethod
    def minkowski(cls, t: float, x: float, y: float = 0.0, z: float = 0.0) -> "SpacetimePoint":
        return cls(ChartId.MINKOWSKI, (t, x, y, z))

    @classmethod
    def polar(
        cls,
        zeta: float,
        rho: float,
        wedge: "Wedge | str",
        alpha: float,
        y: float = 0.0,
        z: float = 0.0,
        a: Optional[float] = None,
    ) -> "SpacetimePoint":
        return cls(ChartId.POLAR, (zeta, rho, y, z), Wedge.parse(wedge), alpha=alpha, a=a)

    @classmethod
    def conformal(
        cls,
        eta: float,
        xi: float,
        wedge: "Wedge | str",
        a: float,
        y: float = 0.0,
        z: float = 0.0,
        alpha: Optional[float] = None,
    ) -> "SpacetimePoint":
        return cls(ChartId.CONFORMAL, (eta, xi, y, z), Wedge.parse(wedge), alpha=alpha, a=a)

    # helpers ------------------------------------------------------------

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coords, dtype=float)

    @property
    def param(self) -> float:
        """The acceleration parameter of this point's own chart."""
        if self.chart is ChartId.POLAR:
            return self.alpha  # type: ignore[return-value]
        if self.chart is ChartId.CONFORMAL:
            return self.a  # type: ignore[return-value]
        raise ChartError("Minkowski chart has no acceleration parameter")

    def with_coords(self, coords: Sequence[float]) -> "SpacetimePoint":
        return replace(self, coords=tuple(float(c) for c in coords))

    def shifted(self, index: int, step: float) -> "SpacetimePoint":
        c = list(self.coords)
        c[index] += step
        return self.with_coords(c)


# ---------------------------------------------------------------------------
# point maps
# ---------------------------------------------------------------------------


def _require_rindler(p: SpacetimePoint) -> None:
    if not p.chart.is_rindler:
        raise ChartError(f"expected a Rindler chart point, got {p.chart.value}")


def rindler_to_minkowski(p: SpacetimePoint) -> SpacetimePoint:
    """Map a polar or conformal Rindler point to inertial coordinates."""
    _require_rindler(p)
    s = p.wedge.sign  # type: ignore[union-attr]
    u, v, y, z = p.coords
    if p.chart is ChartId.POLAR:
        if v <= 0:
            raise ChartError("rho must be positive")
        rho, boost = v, p.alpha * u  # type: ignore[operator]
    else:
        a = p.a
        rho, boost = math.exp(a * v) / a, a * u  # type: ignore[operator]
    return SpacetimePoint.minkowski(s * rho * math.sinh(boost), s * rho * math.cosh(boost), y, z)


def minkowski_to_rindler(
    p: SpacetimePoint,
    target: "ChartId | str",
    param: float,
    other_param: Optional[float] = None,
) -> SpacetimePoint:
    """Inverse of :func:`rindler_to_minkowski`.

    ``param`` is the acceleration parameter of ``target`` (``alpha`` for the
    polar chart, ``a`` for the conformal one); ``other_param`` optionally
    records the parameter of the other Rindler chart on the result.
    The wedge is inferred from the sign of ``x``.

    Raises
    ------
    OutsideWedgeError
        If ``|t| >= |x|`` (the point lies on or inside the light cone of the
        origin, outside both wedges).
    """
    target = ChartId(target)
    if p.chart is not ChartId.MINKOWSKI:
        raise ChartError("input must be a Minkowski point")
    if not target.is_rindler:
        raise ChartError("target must be a Rindler chart")
    t, x, y, z = p.coords
    if abs(t) >= abs(x):
        raise OutsideWedgeError(f"(t={t}, x={x}) lies outside both Rindler wedges")
    wedge = Wedge.RIGHT if x > 0 else Wedge.LEFT
    s = wedge.sign
    # (x-t)(x+t) avoids cancellation near the horizon
    rho = math.sqrt((x - t) * (x + t))
    boost = math.atanh(t / x)  # sign of x cancels in t/x for the s=-1 branch
    if target is ChartId.POLAR:
        return SpacetimePoint.polar(boost / param, rho, wedge, param, y, z, a=other_param)
    return SpacetimePoint.conformal(
        boost / param, math.log(param * rho) / param, wedge, param, y, z, alpha=other_param
    )


def polar_conformal_interchange(
    p: SpacetimePoint, *, alpha: Optional[float] = None, a: Optional[float] = None
) -> SpacetimePoint:
    """Switch between polar and conformal Rindler charts.

    Uses ``rho = a^{-1} e^{a xi}`` and ``alpha zeta = a eta``; both parameters
    must be known, either from the point or from the keyword arguments.
    """
    _require_rindler(p)
    alpha = alpha if alpha is not None else p.alpha
    a = a if a is not None else p.a
    if alpha is None or a is None:
        raise ChartError("chart interchange needs both alpha and a")
    u, v, y, z = p.coords
    if p.chart is ChartId.CONFORMAL:
        return SpacetimePoint.polar(a * u / alpha, math.exp(a * v) / a, p.wedge, alpha, y, z, a=a)  # type: ignore[arg-type]
    return SpacetimePoint.conformal(
        alpha * u / a, math.log(a * v) / a, p.wedge, a, y, z, alpha=alpha  # type: ignore[arg-type]
    )


def interchange_jacobian(p: SpacetimePoint) -> np.ndarray:
    """``J[mu, nu] = d x_other^nu / d x_p^mu`` for the polar/conformal interchange at ``p``."""
    _require_rindler(p)
    alpha, a = p.alpha, p.a
    if alpha is None or a is None:
        raise ChartError("chart interchange needs both alpha and a")
    if p.chart is ChartId.CONFORMAL:
        # zeta = a eta / alpha, rho = e^{a xi} / a
        diag = (a / alpha, math.exp(a * p.coords[1]), 1.0, 1.0)
    else:
        # eta = alpha zeta / a, xi = ln(a rho) / a
        diag = (alpha / a, 1.0 / (a * p.coords[1]), 1.0, 1.0)
    return np.diag(diag)


# ---------------------------------------------------------------------------
# metric, Jacobian, connection
# ---------------------------------------------------------------------------

MINKOWSKI_METRIC = np.diag([1.0, -1.0, -1.0, -1.0])


def metric_at(p: SpacetimePoint) -> np.ndarray:
    """Covariant metric ``g_{mu nu}`` at ``p`` (diagonal for all shipped charts)."""
    if p.chart is ChartId.MINKOWSKI:
        return MINKOWSKI_METRIC.copy()
    if p.chart is ChartId.POLAR:
        ar = p.alpha * p.coords[1]  # type: ignore[operator]
        return np.diag([ar * ar, -1.0, -1.0, -1.0])
    e2 = math.exp(2.0 * p.a * p.coords[1])  # type: ignore[operator]
    return np.diag([e2, -e2, -1.0, -1.0])


def metric_derivatives_at(p: SpacetimePoint) -> np.ndarray:
    """Closed-form ``d_lam g_{mu nu}``, shape ``(4, 4, 4)``."""
    d = np.zeros((4, 4, 4))
    if p.chart is ChartId.POLAR:
        d[1, 0, 0] = 2.0 * p.alpha**2 * p.coords[1]  # type: ignore[operator]
    elif p.chart is ChartId.CONFORMAL:
        a = p.a
        e2 = math.exp(2.0 * a * p.coords[1])  # type: ignore[operator]
        d[1, 0, 0] = 2.0 * a * e2  # type: ignore[operator]
        d[1, 1, 1] = -2.0 * a * e2  # type: ignore[operator]
    return d


def numerical_metric_derivatives(p: SpacetimePoint, h: float = METRIC_FD_STEP) -> np.ndarray:
    """Second-order central differences of :func:`metric_at`."""
    d = np.empty((4, 4, 4))
    for lam in range(4):
        d[lam] = (metric_at(p.shifted(lam, h)) - metric_at(p.shifted(lam, -h))) / (2.0 * h)
    return d


def jacobian_at(p: SpacetimePoint) -> np.ndarray:
    """Closed-form ``J[mu, alpha] = d x_M^alpha / d x_R^mu`` (rows: Rindler index)."""
    _require_rindler(p)
    s = p.wedge.sign  # type: ignore[union-attr]
    u, v = p.coords[:2]
    J = np.eye(4)
    if p.chart is ChartId.POLAR:
        alpha = p.alpha
        ch, sh = math.cosh(alpha * u), math.sinh(alpha * u)  # type: ignore[operator]
        J[0, :2] = (s * alpha * v * ch, s * alpha * v * sh)  # type: ignore[operator]
        J[1, :2] = (s * sh, s * ch)
    else:
        a = p.a
        ea = math.exp(a * v)  # type: ignore[operator]
        ch, sh = math.cosh(a * u), math.sinh(a * u)  # type: ignore[operator]
        J[0, :2] = (s * ea * ch, s * ea * sh)
        J[1, :2] = (s * ea * sh, s * ea * ch)
    return J


def numerical_jacobian(p: SpacetimePoint, h: float = METRIC_FD_STEP) -> np.ndarray:
    """Central-difference Jacobian of :func:`rindler_to_minkowski`."""
    _require_rindler(p)
    J = np.empty((4, 4))
    for mu in range(4):
        plus = rindler_to_minkowski(p.shifted(mu, h)).array
        minus = rindler_to_minkowski(p.shifted(mu, -h)).array
        J[mu] = (plus - minus) / (2.0 * h)
    return J


def christoffel_from_metric(g: np.ndarray, dg: np.ndarray) -> np.ndarray:
    """``Gamma^mu_{nu rho} = 1/2 g^{mu sig} (d_nu g_{sig rho} + d_rho g_{sig nu} - d_sig g_{nu rho})``."""
    ginv = np.linalg.inv(g)
    # lower[sig, nu, rho]
    lower = 0.5 * (
        np.transpose(dg, (1, 0, 2)) + np.transpose(dg, (1, 2, 0)) - dg
    )
    return np.einsum("ms,snr->mnr", ginv, lower)


def christoffel_closed_form(p: SpacetimePoint) -> np.ndarray:
    """Hand-derived connection coefficients for the shipped charts."""
    G = np.zeros((4, 4, 4))
    if p.chart is ChartId.CONFORMAL:
        a = p.a
        G[1, 1, 1] = G[1, 0, 0] = a
        G[0, 0, 1] = G[0, 1, 0] = a
    elif p.chart is ChartId.POLAR:
        rho = p.coords[1]
        G[1, 0, 0] = p.alpha**2 * rho  # type: ignore[operator]
        G[0, 0, 1] = G[0, 1, 0] = 1.0 / rho
    return G


def christoffel_at(
    p: SpacetimePoint, method: str = "numeric", h: float = METRIC_FD_STEP
) -> np.ndarray:
    """Connection coefficients ``Gamma^mu_{nu rho}`` at ``p``.

    ``method="numeric"`` differentiates :func:`metric_at` by central
    differences with step ``h``; ``method="closed"`` returns the hand-derived
    table. The two are cross-checked in the test-suite.
    """
    if method == "closed":
        return christoffel_closed_form(p)
    if method != "numeric":
        raise ValueError(f"unknown method {method!r}")
    return christoffel_from_metric(metric_at(p), numerical_metric_derivatives(p, h))


# ---------------------------------------------------------------------------
# Killing vectors and proper time
# ---------------------------------------------------------------------------

VectorField = Callable[[np.ndarray], np.ndarray]


def killing_residual(
    vector_field: VectorField,
    p: SpacetimePoint,
    derivative: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    h: float = METRIC_FD_STEP,
    connection: str = "closed",
) -> np.ndarray:
    """Symmetrised covariant derivative ``nabla_mu V_nu + nabla_nu V_mu``.

    Parameters
    ----------
    vector_field
        Maps a coordinate array of ``p``'s chart to contravariant components
        ``V^mu``.
    derivative
        Optional analytic ``dV[mu, sig] = d_mu V^sig``; central differences
        with step ``h`` are used otherwise.
    connection
        ``"closed"`` or ``"numeric"``, forwarded to :func:`christoffel_at`.
    """
    x = p.array
    V = np.asarray(vector_field(x), dtype=float)
    if derivative is not None:
        dV = np.asarray(derivative(x), dtype=float)
    else:
        dV = np.empty((4, 4))
        for mu in range(4):
            e = np.zeros(4)
            e[mu] = h
            dV[mu] = (np.asarray(vector_field(x + e)) - np.asarray(vector_field(x - e))) / (2 * h)
    g = metric_at(p)
    if connection == "closed":
        dg = metric_derivatives_at(p)
    else:
        dg = numerical_metric_derivatives(p, h)
    gamma = christoffel_at(p, method=connection, h=h)
    V_low = g @ V
    # d_mu V_nu = d_mu g_{nu sig} V^sig + g_{nu sig} d_mu V^sig
    dV_low = np.einsum("mns,s->mn", dg, V) + dV @ g.T
    nabla = dV_low - np.einsum("rmn,r->mn", gamma, V_low)
    return nabla + nabla.T


def timelike_killing_field(wedge: "Wedge | str") -> VectorField:
    """Future-directed time translation: ``d_eta`` in the right wedge, ``-d_eta`` in the left."""
    s = Wedge.parse(wedge).sign
    return lambda x: np.array([float(s), 0.0, 0.0, 0.0])


def proper_time_rate(velocity: Sequence[float], p: SpacetimePoint, tol: float = 1e-14) -> float:
    """``sqrt(g_{mu nu} u^mu u^nu)`` for a timelike tangent ``u``.

    Raises ``ValueError`` for null or spacelike input (norm below ``tol`` times
    the squared Euclidean size of the weighted components).
    """
    u = np.asarray(velocity, dtype=float)
    g = metric_at(p)
    norm = float(u @ g @ u)
    scale = float(np.sum(np.abs(np.diag(g)) * u * u))
    if norm <= tol * max(scale, 1.0):
        kind = "null" if abs(norm) <= tol * max(scale, 1.0) else "spacelike"
        raise ValueError(f"velocity {tuple(u)} is {kind}, proper time undefined")
    return math.sqrt(norm)


def minkowski_interval(x: Sequence[float]) -> float:
    """``x^mu x_mu`` in inertial coordinates, factored as ``(t-x)(t+x) - y^2 - z^2``."""
    t, xx, y, z = (float(c) for c in x)
    return (t - xx) * (t + xx) - y * y - z * z


def hyperbolic_worldline(tau: float, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """Position and 4-velocity of a uniformly accelerated observer at proper time ``tau``."""
    if not alpha > 0:
        raise ChartError("alpha must be positive")
    ch, sh = math.cosh(alpha * tau), math.sinh(alpha * tau)
    return np.array([sh / alpha, ch / alpha, 0.0, 0.0]), np.array([ch, sh, 0.0, 0.0])
