import math
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from rqft.bogoliubov import (
    TruncationWarning,
    coefficients,
    coefficients_direct,
    fit_temperature,
    planck_factor,
    rindler_from_minkowski_ladder,
    squeezed_vacuum,
    unruh_occupation,
    unruh_occupation_oracle,
    unruh_spectrum,
    unruh_temperature,
)
from rqft.fock import FockSpace, ModeIndex

TWO_PI = 2 * math.pi
log_pos = st.floats(-2.0, 2.0).map(lambda e: 10.0**e)


def n_max_for(x, tail=1e-13):
    """Smallest cap whose squeezed-vacuum tail ``e^{-2 x (n+1)}`` is below ``tail``."""
    return max(10, math.ceil(-math.log(tail) / (2 * x)))


class TestCoefficients:
    def test_reference_point(self):
        c = coefficients(1.0, TWO_PI)
        expected = math.sqrt(1 / (2 * math.sinh(0.5))) * math.exp(0.25)
        assert c.alpha == pytest.approx(expected, rel=1e-14)

    def test_symmetric_form(self):
        c = coefficients(0.7, 1.3)
        assert c.alpha_LL == c.alpha_RR and c.beta_LR == c.beta_RL

    @given(log_pos, log_pos)
    def test_matches_extended_precision(self, w, a):
        if math.pi * w / a > 700:
            return
        c = coefficients(w, a)
        al, be = oracles.bogoliubov(w, a)
        assert c.alpha == pytest.approx(float(al), rel=1e-12)
        assert c.beta == pytest.approx(float(be), rel=1e-12, abs=1e-300)

    def test_normalization_grid(self):
        xs = np.logspace(math.log10(0.05), math.log10(20.0), 50)
        ws = np.logspace(-1, 1, 50)
        for w, x in zip(ws, xs):
            assert abs(coefficients(w, math.pi * w / x).normalization() - 1.0) < 1e-12

    @given(log_pos, log_pos)
    def test_ratio(self, w, a):
        x = math.pi * w / a
        if x > 700:
            return
        c = coefficients(w, a)
        assert c.beta / c.alpha == pytest.approx(math.exp(-x), rel=1e-14, abs=1e-300)
        if x < 30:
            assert math.tanh(c.squeezing) == pytest.approx(math.exp(-x), rel=1e-12)

    def test_direct_form_agrees_at_moderate_argument(self):
        for w, a in [(1.0, TWO_PI), (0.3, 1.0), (2.0, 0.5)]:
            al, be = coefficients_direct(w, a)
            c = coefficients(w, a)
            assert al == pytest.approx(c.alpha, rel=1e-13) and be == pytest.approx(c.beta, rel=1e-13)

    def test_large_argument_stays_finite(self):
        c = coefficients(699.0 / math.pi, 1.0)
        assert math.isfinite(c.alpha) and c.normalization() == pytest.approx(1.0, abs=1e-12)
        with pytest.raises(OverflowError):
            coefficients(701.0 / math.pi, 1.0)

    @pytest.mark.parametrize("w, a", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0), (1.0, math.inf)])
    def test_domain(self, w, a):
        with pytest.raises(ValueError):
            coefficients(w, a)


class TestLadderRelation:
    def test_coefficients(self):
        rel = rindler_from_minkowski_ladder(1.3, 2.0)
        c = coefficients(1.3, 2.0)
        assert rel.alpha == c.alpha and rel.beta == c.beta

    @pytest.mark.parametrize("w, a", [(0.5, 1.0), (1.0, TWO_PI), (3.0, 2.0)])
    def test_commutator(self, w, a):
        rel = rindler_from_minkowski_ladder(w, a)
        assert rel.commutator_value() == pytest.approx(1 / w**2, rel=1e-12)
        assert rel.commutator_deviation(6) < 1e-10

    def test_operator_realisation(self):
        rel = rindler_from_minkowski_ladder(1.0, 2.0)
        R, L = ModeIndex("R", 1), ModeIndex("L", -1)
        space = FockSpace((R, L), 3)
        bR, bL = rel.operators(space, R, L)
        # b^R acting on |0, 0> only sees the c^{L dagger} term
        v = np.zeros(space.dim)
        v[0] = 1.0
        out = bR.apply_vector(v)
        assert out[space.index_of((0, 1))] == pytest.approx(rel.beta)
        out = bL.apply_vector(v)
        assert out[space.index_of((1, 0))] == pytest.approx(rel.beta)


class TestOccupation:
    def test_reference_value(self):
        occ = unruh_occupation(1.0, TWO_PI)
        assert occ.planck == pytest.approx(1 / (math.e - 1), rel=1e-15)
        assert occ.planck == pytest.approx(0.581977, abs=1e-6)
        assert occ.density == occ.planck

    def test_density_carries_inverse_square(self):
        occ = unruh_occupation(2.0, TWO_PI)
        assert occ.density == pytest.approx(occ.planck / 4)
        assert occ.regularized(TWO_PI) == pytest.approx(occ.density)

    def test_limits(self):
        assert planck_factor(1e4, 1.0) == 0.0
        assert planck_factor(1.0, 1e-6) == 0.0
        assert planck_factor(1e-3, 1.0) > 100

    @given(log_pos, log_pos)
    def test_detailed_balance(self, w, a):
        x = 2 * math.pi * w / a
        if x > 700:
            return
        n = planck_factor(w, a)
        assert n * math.expm1(x) == pytest.approx(1.0, rel=1e-14)

    @given(log_pos, log_pos)
    def test_extended_precision(self, w, a):
        if 2 * math.pi * w / a > 700:
            return
        assert planck_factor(w, a) == pytest.approx(float(oracles.planck(w, a)), rel=1e-13)

    def test_vectorised(self):
        out = planck_factor(np.array([0.5, 1.0, 2.0]), TWO_PI)
        np.testing.assert_allclose(out, 1 / np.expm1([0.5, 1.0, 2.0]), rtol=1e-15)
        with pytest.raises(ValueError):
            planck_factor(np.array([1.0, -1.0]), 1.0)


class TestOracle:
    def test_reference_points(self):
        for w, expected in [(1.0, 1 / math.expm1(1.0)), (2.0, 1 / math.expm1(2.0))]:
            res = unruh_occupation_oracle(w, TWO_PI, 40)
            assert abs(res.planck - expected) < 1e-10
            assert res.vacuum_residual < 1e-10
        assert unruh_occupation_oracle(2.0, TWO_PI).planck == pytest.approx(0.156518, abs=1e-6)

    @pytest.mark.parametrize("x", [0.3, 0.5, 1.0, 2.0, 3.5, 5.0])
    def test_agrees_with_closed_form(self, x):
        a = 1.7
        w = x * a / math.pi
        n_max = n_max_for(x)
        res = unruh_occupation_oracle(w, a, n_max)
        assert abs(res.planck - planck_factor(w, a)) < 1e-10
        assert res.planck == pytest.approx(float(oracles.squeezed_occupation(w, a, n_max)), rel=1e-12)
        assert res.density == pytest.approx(res.planck / w**2)

    def test_tail_warning(self):
        with pytest.warns(TruncationWarning):
            _, tail = squeezed_vacuum(0.1, 1.0, 5)
        assert tail == pytest.approx(math.exp(-2 * math.pi * 0.1 * 6))

    def test_no_warning_when_converged(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            state, tail = squeezed_vacuum(1.0, TWO_PI, 40)
        assert tail < 1e-12 and state.norm() == pytest.approx(1.0, abs=1e-15)

    def test_state_structure(self):
        state, _ = squeezed_vacuum(1.0, 1.0, 6)
        assert all(o[0] == o[1] for o in state.amplitudes)
        t = math.exp(-math.pi)
        assert state.amplitudes[(1, 1)] / state.amplitudes[(0, 0)] == pytest.approx(t)


class TestTemperature:
    def test_analytic(self):
        assert unruh_temperature(1.0) == pytest.approx(0.159155, abs=1e-6)
        with pytest.raises(ValueError):
            unruh_temperature(0.0)

    @pytest.mark.parametrize("a", [0.5, 1.0, TWO_PI, 20.0])
    def test_fit_recovers_temperature(self, a):
        ws = np.linspace(0.1, 2.0, 20)
        fit = fit_temperature(ws, planck_factor(ws, a))
        assert abs(fit.temperature - a / TWO_PI) / (a / TWO_PI) < 1e-10
        assert fit.spread < 1e-9

    @pytest.mark.filterwarnings("ignore::rqft.bogoliubov.TruncationWarning")
    def test_fit_on_oracle_spectrum(self):
        # the lowest frequency keeps a tail of ~6e-12 at this cap
        rows, fit = unruh_spectrum(1.0, np.linspace(0.1, 2.0, 20), oracle=True, n_max=40)
        assert abs(fit.temperature - unruh_temperature(1.0)) / unruh_temperature(1.0) < 1e-8
        for r in rows:
            assert abs(r.oracle - r.planck) < 1e-8

    def test_rejections(self):
        with pytest.raises(ValueError):
            fit_temperature([1, 2, 3, 4], [4, 3, 2, 1])
        with pytest.raises(ValueError):
            fit_temperature([1, 2, 3, 4, 5], [1, 2, 1, 0.5, 0.1])
        with pytest.raises(ValueError):
            fit_temperature([1, 2, 3, 4, 5], [1, 0.5, 0, -1, -2])

    def test_spectrum_rows_keep_input_order(self):
        ws = [2.0, 0.5, 1.0, 1.5, 0.25]
        rows, fit = unruh_spectrum(1.0, ws)
        assert [r.omega for r in rows] == ws
        for r in rows:
            assert r.oracle is None
            assert r.temperature == pytest.approx(1 / TWO_PI, rel=1e-10)
        assert fit.per_point.shape == (5,)

    @settings(max_examples=20, deadline=None)
    @given(st.floats(0.2, 50.0))
    def test_fit_property(self, a):
        ws = np.linspace(0.1, 2.0, 8)
        fit = fit_temperature(ws, planck_factor(ws, a))
        assert fit.temperature == pytest.approx(a / TWO_PI, rel=1e-9)


def test_extended_precision_oracle_is_self_consistent():
    al, be = oracles.bogoliubov(0.8, 1.1)
    assert abs(mpmath.mpf(0.8) ** 2 * (al**2 - be**2) - 1) < mpmath.mpf("1e-40")
