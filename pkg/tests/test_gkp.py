import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tfsdc.combs import CombSpec, TruncationOverflowError, make_single_photon_comb, overlap
from tfsdc.gkp import (
    D_f,
    D_t,
    Displacement,
    LogicalQudit,
    OffLatticeError,
    apply_displacement,
    commutator_phase,
    expected_commutator,
    lattice_fraction,
    logical_X,
    logical_Z,
    relative_phase,
)


def wide(trunc=6, guard=4):
    return CombSpec(0.0, 1.0, truncation=trunc, guard=guard)


class TestDisplacement:
    def test_composition(self):
        assert (D_t(1.0) + D_t(2.5)).amount == 3.5
        assert (3 * D_f(0.5)).amount == 1.5
        with pytest.raises(ValueError):
            D_t(1.0) + D_f(1.0)

    def test_bad_kind(self):
        with pytest.raises(ValueError):
            Displacement("space", 1.0)

    @settings(max_examples=40, deadline=None)
    @given(a=st.integers(-12, 12), b=st.integers(-12, 12), den=st.sampled_from([1, 2, 3, 5]))
    def test_group_action_frequency(self, a, b, den):
        psi = make_single_photon_comb(wide(guard=26))
        step_ab = apply_displacement(apply_displacement(psi, D_f(a / den)), D_f(b / den))
        once = apply_displacement(psi, D_f(a / den) + D_f(b / den))
        assert abs(overlap(step_ab, once)) == pytest.approx(1.0, abs=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(a=st.floats(-10, 10), b=st.floats(-10, 10))
    def test_group_action_time(self, a, b):
        psi = make_single_photon_comb(wide())
        step_ab = apply_displacement(apply_displacement(psi, D_t(a)), D_t(b))
        once = apply_displacement(psi, D_t(a + b))
        assert overlap(step_ab, once) == pytest.approx(1.0, abs=1e-9)

    def test_inverse(self):
        psi = make_single_photon_comb(wide())
        back = apply_displacement(apply_displacement(psi, D_f(1 / 3)), D_f(-1 / 3))
        assert overlap(psi, back) == pytest.approx(1.0)

    def test_overflow_policies(self):
        psi = make_single_photon_comb(CombSpec(0.0, 1.0, truncation=4, guard=1))
        with pytest.raises(TruncationOverflowError):
            apply_displacement(psi, D_f(3.0))
        cut = apply_displacement(psi, D_f(3.0), overflow="truncate")
        assert cut.dropped == 2
        assert cut.norm() == pytest.approx(7 / 9)

    def test_off_lattice_shift(self):
        with pytest.raises(OffLatticeError):
            lattice_fraction(math.sqrt(2) / 1000, 1.0)
        assert lattice_fraction(0.25, 1.0) == 0.25

    def test_time_shift_needs_frequency_basis(self, unit_spec):
        from tfsdc.combs import to_time_basis

        with pytest.raises(ValueError):
            apply_displacement(to_time_basis(make_single_photon_comb(unit_spec)), D_t(1.0))


class TestCommutator:
    @pytest.mark.parametrize("df,dt", [(0.25, 2 * math.pi / 3), (0.5, 1.0), (1 / 3, 0.7), (2.0, -1.3)])
    def test_heisenberg_weyl(self, df, dt):
        got = commutator_phase(D_f(df), D_t(dt), CombSpec(0.0, 1.0, truncation=8))
        assert abs(got - cmath.exp(1j * df * dt)) < 1e-10
        assert abs(expected_commutator(D_f(df), D_t(dt)) - got) < 1e-10

    def test_requires_kinds(self):
        with pytest.raises(ValueError):
            commutator_phase(D_t(1.0), D_t(1.0))


class TestLogicalQudit:
    @pytest.mark.parametrize("d", [2, 3, 5, 8])
    def test_zx_relation(self, d):
        q = LogicalQudit(d, CombSpec(0.0, 1.0, truncation=6))
        X, Z = logical_X(q), logical_Z(q)
        for j in range(d):
            s = q.basis_state(j)
            assert relative_phase(X(Z(s)), Z(X(s))) == pytest.approx(cmath.exp(-2j * math.pi / d), abs=1e-10)

    @pytest.mark.parametrize("d", [2, 3, 4, 7])
    def test_powers_are_identity(self, d):
        q = LogicalQudit(d, CombSpec(0.0, 1.0, truncation=10))
        zero = q.zero()
        # X^d shifts by one full tooth; the truncated edge costs 1/n_teeth
        fx = abs(overlap(zero, logical_X(q, d)(zero)))
        assert fx == pytest.approx(1 - 1 / q.base_comb.n_teeth, abs=1e-12)
        assert overlap(zero, logical_Z(q, d)(zero)) == pytest.approx(1.0, abs=1e-12)

    def test_basis_states_orthonormal(self):
        q = LogicalQudit(4, CombSpec(0.0, 1.0, truncation=5))
        states = [q.basis_state(j) for j in range(4)]
        gram = np.array([[abs(overlap(a, b)) for b in states] for a in states])
        assert np.allclose(gram, np.eye(4), atol=1e-12)

    def test_z_is_diagonal_phase(self):
        q = LogicalQudit(3, CombSpec(0.0, 1.0, truncation=5))
        for j in range(3):
            s = q.basis_state(j)
            # basis state j sits j/d above the lattice: Z gives exp(-2 pi i j/d)
            phase = relative_phase(s, logical_Z(q)(s))
            assert phase == pytest.approx(cmath.exp(-2j * math.pi * j / 3), abs=1e-12)

    def test_dimension_guard(self):
        with pytest.raises(ValueError):
            LogicalQudit(1, CombSpec(0.0, 1.0))
