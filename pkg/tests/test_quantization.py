import math

import numpy as np
import pytest

import oracles
from rqft.coordinates import ChartId, Wedge
from rqft.electrodynamics import PeriodicGrid, classical_hamiltonian, embed_polarization
from rqft.fock import (
    FockState,
    ModeIndex,
    QuantumOperator,
    coherent_product_state,
    expectation,
    hamiltonian,
)
from rqft.modes import DiscretizedModeSet
from rqft.quantization import (
    FieldOperatorSpec,
    electric_operator,
    expectation_field,
    field_vector_operators,
    hamiltonian_equivalence,
    heisenberg_check,
    heisenberg_residual,
    ladder_expectations,
    magnetic_operator,
    maxwell_expectation_check,
    minkowski_field_operators,
    pointwise_field_energy,
)

L = 2 * math.pi
R1, Rm1, Lm2, L1 = ModeIndex("R", 1), ModeIndex("R", -1), ModeIndex("L", -2), ModeIndex("L", 1)


def make_spec(indices, n_max=6, **kw):
    return FieldOperatorSpec(DiscretizedModeSet(L, tuple(indices)), n_max, **kw)


def coherent(spec, amps):
    return coherent_product_state(amps, spec.modes.indices, spec.n_max)


class TestSpec:
    def test_validation(self):
        ms = DiscretizedModeSet(L, (R1,))
        with pytest.raises(ValueError):
            FieldOperatorSpec(ms, chart="polar")
        with pytest.raises(ValueError):
            FieldOperatorSpec(ms, chart="minkowski")
        with pytest.raises(ValueError):
            FieldOperatorSpec(DiscretizedModeSet(L, (ModeIndex(None, 1),)))
        with pytest.raises(ValueError):
            FieldOperatorSpec(ms, phase=0.5)

    def test_signs(self):
        spec = make_spec((R1, L1))
        assert spec.sign(R1) == 1 and spec.sign(L1) == -1
        assert make_spec((L1,), left_time_sign=1).sign(L1) == 1

    def test_mode_values(self):
        spec = make_spec((R1, Lm2))
        p, q = spec.mode_values(R1, 0.0, 0.0)
        assert p == pytest.approx(1j * math.sqrt(1 / (2 * L))) and q == p
        p, q = spec.mode_values(Lm2, 0.3, 0.1)
        # left wedge: q = s sign(k) p = (+1) p for k < 0
        assert q == p


class TestOperators:
    def test_self_adjoint(self):
        spec = make_spec((R1, Rm1, Lm2, L1), n_max=3)
        for w in ("L", "R"):
            for build in (electric_operator, magnetic_operator):
                assert build(spec, 0.37, 1.2, w).hermiticity_defect() == 0.0

    def test_vacuum_expectation(self):
        spec = make_spec((R1, Lm2), n_max=4)
        vac = FockState.vacuum(spec.modes.indices, 4)
        for eta, xi in [(0, 0), (0.4, 2.0), (-1.0, 5.5)]:
            for w in ("L", "R"):
                assert expectation(vac, electric_operator(spec, eta, xi, w)) == 0
                assert expectation(vac, magnetic_operator(spec, eta, xi, w)) == 0

    def test_coherent_closed_form(self):
        spec = make_spec((R1,), n_max=20)
        z = 0.5
        state = coherent(spec, {R1: z})
        b = ladder_expectations(spec, state)[R1]
        assert b == pytest.approx(z, abs=1e-8)
        w = 1.0
        for eta, xi in [(0.0, 0.3), (0.7, 2.1), (1.3, 4.0)]:
            expected = -2 * math.sqrt(w / (2 * L)) * z * math.sin(xi - w * eta)
            E = expectation(state, electric_operator(spec, eta, xi)).real
            B = expectation(state, magnetic_operator(spec, eta, xi)).real
            assert E == pytest.approx(expected, abs=1e-8)
            assert B == pytest.approx(E, abs=1e-14)

    @pytest.mark.parametrize("mode, sign", [(Rm1, -1), (L1, -1), (Lm2, 1)])
    def test_magnetic_sign_pattern(self, mode, sign):
        spec = make_spec((mode,), n_max=12)
        state = coherent(spec, {mode: 0.6 - 0.2j})
        f = expectation_field(spec, state)
        E, B = f.electric(mode.wedge), f.magnetic(mode.wedge)
        for eta, xi in [(0.1, 0.2), (0.9, 3.3)]:
            assert B(eta, xi) == pytest.approx(sign * E(eta, xi), abs=1e-15)

    def test_expectation_field_matches_operators(self, rng):
        spec = make_spec((R1, Rm1, Lm2), n_max=5)
        state = coherent(spec, {R1: 0.3, Rm1: -0.2j, Lm2: 0.4 + 0.1j})
        f = expectation_field(spec, state)
        for w in ("L", "R"):
            for eta, xi in rng.uniform(0, 3, size=(4, 2)):
                E = expectation(state, electric_operator(spec, eta, xi, w))
                assert abs(E.imag) < 1e-14
                assert f.electric(w)(eta, xi) == pytest.approx(E.real, abs=1e-13)

    def test_vector_components(self):
        spec = make_spec((ModeIndex("R", 1, 1), ModeIndex("R", 1, 2)), n_max=3)
        Es, Bs = field_vector_operators(spec, 0.2, 0.4)
        assert Es[0].matrix.nnz == 0 and Bs[0].matrix.nnz == 0
        np.testing.assert_array_equal(Bs[1].to_dense(), -magnetic_operator(spec, 0.2, 0.4, "R", 2).to_dense())
        np.testing.assert_array_equal(Bs[2].to_dense(), magnetic_operator(spec, 0.2, 0.4, "R", 1).to_dense())

    def test_minkowski_operators(self):
        ms = DiscretizedModeSet(L, (ModeIndex(None, 1), ModeIndex(None, -2)))
        spec = FieldOperatorSpec(ms, 6, chart="minkowski")
        rspec = make_spec((R1, ModeIndex("R", -2)))
        E, B = minkowski_field_operators(spec, 0.3, 1.1)
        Er = electric_operator(rspec, 0.3, 1.1)
        np.testing.assert_array_equal(E.to_dense(), Er.to_dense())
        vac = FockState.vacuum(ms.indices, 6)
        assert expectation(vac, E) == 0 and expectation(vac, B) == 0
        with pytest.raises(ValueError):
            minkowski_field_operators(rspec, 0.0, 0.0)


class TestHeisenberg:
    def test_right_wedge_coherent(self):
        spec = make_spec((R1,), n_max=20)
        state = coherent(spec, {R1: 0.5})
        for kind in ("E", "B"):
            assert abs(heisenberg_check(spec, state, 0.3, 0.7, "R", kind)) < 1e-6

    def test_left_wedge_coherent(self):
        spec = make_spec((Lm2, L1), n_max=10)
        state = coherent(spec, {Lm2: 0.4j, L1: 0.3})
        for kind in ("E", "B"):
            assert abs(heisenberg_check(spec, state, 0.3, 0.7, "L", kind)) < 1e-6

    def test_identity(self):
        spec = make_spec((R1,), n_max=4)
        ident = QuantumOperator(spec.space.identity(), spec.space)
        H = hamiltonian(spec.space, L)
        state = FockState.vacuum(spec.modes.indices, 4)
        assert heisenberg_residual(lambda e: ident, H, state, 0.5) == 0

    def test_wrong_sign_left_phase(self):
        good = make_spec((L1,), n_max=10)
        bad = make_spec((L1,), n_max=10, left_time_sign=1)
        state = coherent(good, {L1: 0.5})
        r = heisenberg_check(bad, state, 0.3, 0.7, "L")
        # derivative of <E> flips sign while the commutator does not
        h = 1e-4
        Ef = lambda e: expectation(state, electric_operator(bad, e, 0.7, "L")).real
        d = (Ef(0.3 + h) - Ef(0.3 - h)) / (2 * h)
        assert abs(r) == pytest.approx(2 * abs(d), rel=1e-6)
        assert abs(r) > 0.1

    def test_step_convergence(self):
        spec = make_spec((R1,), n_max=20)
        state = coherent(spec, {R1: 0.5})
        r1 = abs(heisenberg_check(spec, state, 0.3, 0.7, h=0.02))
        r2 = abs(heisenberg_check(spec, state, 0.3, 0.7, h=0.01))
        assert r1 / r2 >= 3.9

    def test_minkowski(self):
        m = ModeIndex(None, 2)
        spec = FieldOperatorSpec(DiscretizedModeSet(L, (m,)), 16, chart="minkowski")
        state = coherent(spec, {m: 0.6})
        H = hamiltonian(spec.space, L)
        assert abs(heisenberg_check(spec, state, 0.2, 0.4, None, generator=H)) < 1e-6


class TestMaxwellExpectation:
    def test_vacuum(self):
        spec = make_spec((R1, Lm2), n_max=3)
        res = maxwell_expectation_check(spec, FockState.vacuum(spec.modes.indices, 3), 4, 16)
        assert res.max_residual == 0.0

    def test_single_right_mode(self):
        spec = make_spec((R1,), n_max=12)
        res = maxwell_expectation_check(spec, coherent(spec, {R1: 0.8}))
        assert res.max_residual < 1e-6
        assert res.residuals.shape == (2, 1, 32, 32, 2)

    def test_superposition(self):
        spec = make_spec((R1, Lm2), n_max=10)
        res = maxwell_expectation_check(spec, coherent(spec, {R1: 0.8, Lm2: 0.5j}))
        assert res.max_residual < 1e-6

    def test_polar_image(self):
        spec = make_spec((R1, Lm2), n_max=10, a=0.8)
        res = maxwell_expectation_check(spec, coherent(spec, {R1: 0.8, Lm2: 0.5j}), 6, 16, target="polar", alpha=1.3)
        assert res.max_residual < 1e-5

    def test_wrong_sign_fails(self):
        bad = make_spec((L1,), n_max=10, left_time_sign=1)
        res = maxwell_expectation_check(bad, coherent(bad, {L1: 0.8}), 4, 16)
        assert res.max_residual > 0.01

    @pytest.mark.parametrize("phase", [1.0, -1j, np.exp(0.7j)])
    def test_global_phase_invariance(self, phase):
        ref = make_spec((R1, Lm2), n_max=3)
        spec = make_spec((R1, Lm2), n_max=3, phase=phase)
        state = coherent(spec, {R1: 0.4, Lm2: 0.3j})
        assert maxwell_expectation_check(spec, state, 4, 16).max_residual < 1e-6
        assert hamiltonian_equivalence(spec).deviation < 1e-10
        # a global phase is a unitary relabelling, so vacuum fluctuations are unchanged
        vac = FockState.vacuum(spec.modes.indices, 3)
        sq = lambda sp_: electric_operator(sp_, 0.1, 0.2) @ electric_operator(sp_, 0.1, 0.2)
        assert expectation(vac, sq(spec)) == pytest.approx(expectation(vac, sq(ref)), abs=1e-14)


class TestEquivalence:
    def test_single_mode(self):
        spec = make_spec((R1,), n_max=6)
        res = hamiltonian_equivalence(spec, PeriodicGrid(L, 256))
        assert res.deviation < 1e-10
        assert res.zero_point == pytest.approx(0.5, abs=1e-12)
        assert res.expected_zero_point == 0.5

    def test_same_wedge_pair(self):
        spec = make_spec((R1, ModeIndex("R", 2)), n_max=5)
        assert hamiltonian_equivalence(spec).deviation < 1e-10

    def test_mixed_wedges(self):
        spec = make_spec((R1, Rm1, Lm2, L1), n_max=3)
        res = hamiltonian_equivalence(spec)
        assert res.deviation < 1e-10 and res.cross_block_max == 0.0
        assert res.zero_point == pytest.approx(0.5 * (1 + 1 + 2 + 1), abs=1e-12)

    def test_two_polarisations(self):
        spec = make_spec((R1, ModeIndex("R", 1, 2), ModeIndex("L", -1, 2)), n_max=3)
        assert hamiltonian_equivalence(spec).deviation < 1e-10

    def test_matches_dense_oracle(self):
        idx = (Lm2, R1, Rm1)
        spec = make_spec(idx, n_max=2)
        res = hamiltonian_equivalence(spec)
        order = spec.modes.indices
        ks = [m.k(L) for m in order]
        ws = [1 if m.wedge is Wedge.RIGHT else -1 for m in order]
        ref = oracles.dense_field_energy(ks, ws, L, 2, spec.modes.min_points())
        np.testing.assert_allclose(res.quadrature.toarray(), ref, atol=1e-12)

    def test_pointwise_brute_force(self):
        spec = make_spec((R1, Lm2), n_max=2)
        res = hamiltonian_equivalence(spec, eta=0.4)
        brute = pointwise_field_energy(spec, PeriodicGrid(L, spec.modes.min_points()), eta=0.4)
        np.testing.assert_allclose(brute.toarray(), res.quadrature.toarray(), atol=1e-12)

    def test_coarse_grid_rejected(self):
        spec = make_spec((ModeIndex("R", 3),), n_max=2)
        with pytest.raises(ValueError):
            hamiltonian_equivalence(spec, PeriodicGrid(L, 32))
        with pytest.raises(ValueError):
            hamiltonian_equivalence(spec, PeriodicGrid(2 * L, 256))

    def test_classical_energy_of_expectation(self):
        spec = make_spec((R1, Lm2), n_max=14)
        state = coherent(spec, {R1: 0.7, Lm2: 0.4 - 0.3j})
        amps = ladder_expectations(spec, state)
        f = expectation_field(spec, state)
        grid = PeriodicGrid(L, 64)
        total = 0.0
        for w in ("L", "R"):
            E, B = f.electric(w), f.magnetic(w)
            sampler = lambda p, E=E, B=B: embed_polarization(E(*p.coords[:2]), B(*p.coords[:2]), 1, ChartId.CONFORMAL)
            total += classical_hamiltonian(sampler, "conformal", grid, time=0.3, wedge=w, a=1.0)
        expected = sum(m.omega(L) * abs(amps[m]) ** 2 for m in spec.modes.indices)
        assert total == pytest.approx(expected, rel=1e-12)
