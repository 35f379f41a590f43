import numpy as np
import pytest

from kdscope.bases import dft, mub4, perturbed, spin_transition
from kdscope.diagram import dft_min_states, mub4_edge_states
from kdscope.errors import (
    DimensionMismatchError,
    InternalInconsistencyError,
    NotNormalizedError,
)
from kdscope.kdcore import (
    StateVector,
    bound_report,
    is_kd_classical,
    kd_distribution,
    nonclassicality,
    random_state,
    support,
)

SQ2 = np.sqrt(2.0)


def basis_state(d, i):
    amps = np.zeros(d, dtype=complex)
    amps[i] = 1.0
    return StateVector(d, amps)


class TestStateVector:
    def test_norm_enforced(self):
        with pytest.raises(NotNormalizedError):
            StateVector(2, np.array([1.0, 1.0]))

    def test_from_amplitudes_normalizes(self):
        st = StateVector.from_amplitudes([3.0, 4.0])
        assert abs(np.linalg.norm(st.amps) - 1.0) < 1e-15

    def test_b_coordinate_round_trip(self):
        u = mub4(1j)
        st = random_state(4, 11)
        back = StateVector.from_b_coordinates(u, st.b_coordinates(u))
        assert np.abs(back.amps - st.amps).max() < 1e-12


class TestKDDistribution:
    def test_basis_state_dft2(self):
        q = kd_distribution(dft(2), basis_state(2, 0)).q
        assert np.abs(q - np.array([[0.5, 0.5], [0.0, 0.0]])).max() < 1e-15

    def test_hand_computed_complex_case(self):
        # psi = (1, i)/sqrt(2) against the d = 2 DFT, worked out by hand:
        # Q = ((1-i, 1+i), (1+i, 1-i)) / 4
        st = StateVector(2, np.array([1.0, 1j]) / SQ2)
        q = kd_distribution(dft(2), st).q
        want = 0.25 * np.array([[1 - 1j, 1 + 1j], [1 + 1j, 1 - 1j]])
        assert np.abs(q - want).max() < 1e-14

    def test_edge_state_matrix_golden(self):
        # KD matrices of the d = 4 MUB edge states, worked out by hand from
        # the defining product: the b-side factors <psi|b_j> and <b_j|a_i>
        # enter conjugated, so the complex entries of row i pick up s in
        # column 0 and conj(s) in column 2.
        s = 1j
        plus, minus = mub4_edge_states(s)
        q = kd_distribution(mub4(s), plus).q
        want = 0.25 * np.array(
            [
                [1, 0, 1, 0],
                [0, 0, 0, 0],
                [0.5 * (1 + s), 0, 0.5 * (1 + np.conj(s)), 0],
                [0.5 * (1 - s), 0, 0.5 * (1 - np.conj(s)), 0],
            ]
        )
        assert np.abs(q - want).max() < 1e-12
        q_minus = kd_distribution(mub4(s), minus).q
        want_minus = 0.25 * np.array(
            [
                [0, 0, 0, 0],
                [1, 0, 1, 0],
                [0.5 * (1 - s), 0, 0.5 * (1 - np.conj(s)), 0],
                [0.5 * (1 + s), 0, 0.5 * (1 + np.conj(s)), 0],
            ]
        )
        assert np.abs(q_minus - want_minus).max() < 1e-12
        # the entry moduli (all the classification machinery uses) also match
        # the same template with the two placements swapped
        assert np.abs(np.abs(q) - np.abs(want.conj())).max() < 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            kd_distribution(dft(3), basis_state(2, 0))

    def test_global_phase_invariance(self):
        u = dft(5)
        rng = np.random.default_rng(3)
        st = random_state(5, 21)
        for _ in range(5):
            theta = rng.uniform(0, 2 * np.pi)
            rotated = StateVector(5, np.exp(1j * theta) * st.amps)
            dev = np.abs(
                kd_distribution(u, rotated).q - kd_distribution(u, st).q
            ).max()
            assert dev < 1e-12


class TestNonclassicality:
    def test_basis_state_unit_mass(self):
        for u in (dft(3), mub4(1j), spin_transition(1.5)):
            assert abs(nonclassicality(kd_distribution(u, basis_state(u.d, 0))) - 1.0) < 1e-12

    def test_edge_state_value(self):
        plus, _ = mub4_edge_states(1j)
        ncc = nonclassicality(kd_distribution(mub4(1j), plus))
        assert abs(ncc - (1 + SQ2) / 2) < 1e-12

    def test_dft6_min_states_classical(self):
        u = dft(6)
        for m in range(2):
            for s in range(3):
                st = dft_min_states(6, 2, 3, m, s)
                assert abs(nonclassicality(kd_distribution(u, st)) - 1.0) < 1e-10


class TestClassicality:
    def test_basis_state_classical(self):
        check = is_kd_classical(kd_distribution(mub4(1j), basis_state(4, 2)))
        assert check.classical

    def test_edge_state_not_classical_with_witness(self):
        plus, _ = mub4_edge_states(1j)
        check = is_kd_classical(kd_distribution(mub4(1j), plus))
        assert not check.classical
        # worst entries are (1 +- i)/8: imaginary part sqrt(2)/8 in modulus
        assert abs(abs(check.value.imag) - 0.125) < 1e-12
        assert abs(abs(check.value) - SQ2 / 8) < 1e-12

    def test_dft6_min_state_classical(self):
        st = dft_min_states(6, 2, 3, 0, 0)
        assert is_kd_classical(kd_distribution(dft(6), st)).classical

    def test_consistency_with_unit_mass(self):
        # sum |Q| = 1 within 1e-8 exactly when classicality holds
        mats = [dft(4), dft(5), mub4(np.exp(1.3j)), spin_transition(2)]
        states = [basis_state(4, 1), random_state(5, 5), random_state(4, 6), random_state(5, 7)]
        for u, st in zip(mats, states):
            q = kd_distribution(u, st)
            mass_unit = abs(nonclassicality(q) - 1.0) <= 1e-8
            assert mass_unit == is_kd_classical(q, 1e-8).classical


class TestSupport:
    def test_basis_state_dft5(self):
        prof = support(dft(5), basis_state(5, 0))
        assert (prof.n_a, prof.n_b) == (1, 5)
        assert prof.total == 6

    def test_edge_state_supports(self):
        plus, _ = mub4_edge_states(1j)
        prof = support(mub4(1j), plus)
        assert prof.S == (0, 2, 3)
        assert prof.T == (0, 2)

    def test_dft6_min_state_supports(self):
        prof = support(dft(6), dft_min_states(6, 2, 3, 0, 0))
        assert prof.S == (0, 2, 4)
        assert prof.T == (0, 3)
        assert (prof.n_a, prof.n_b) == (3, 2)


class TestBoundReport:
    def test_saturated_chain_dft4(self):
        u = dft(4)
        st = dft_min_states(4, 2, 2, 0, 0)
        rep = bound_report(u, st)
        assert rep.n_a * rep.n_b == 4
        assert abs(rep.product_lower_bound - 4.0) < 1e-12
        assert abs(rep.ncc - 1.0) < 1e-10

    def test_edge_state_bounds(self):
        plus, _ = mub4_edge_states(1j)
        rep = bound_report(mub4(1j), plus)
        assert abs(rep.ncc - (1 + SQ2) / 2) < 1e-12
        assert abs(rep.ncc_upper_bound - 0.5 * np.sqrt(6.0)) < 1e-12
        assert rep.ncc <= rep.ncc_upper_bound
        assert rep.edge_value == 5

    def test_random_states_satisfy_chain(self):
        u = dft(5)
        for k in range(50):
            rep = bound_report(u, random_state(5, 100 + k))
            assert 1.0 - 1e-9 <= rep.ncc <= rep.ncc_upper_bound + 1e-9
            assert rep.n_a * rep.n_b >= rep.product_lower_bound - 1e-9


class TestRandomState:
    def test_deterministic(self):
        a = random_state(6, 42)
        b = random_state(6, 42)
        assert np.array_equal(a.amps, b.amps)

    def test_unit_norm(self):
        for k in range(20):
            assert abs(np.linalg.norm(random_state(7, k).amps) - 1.0) < 1e-12

    def test_generic_states_have_full_support(self):
        u = dft(5)
        for k in range(100):
            prof = support(u, random_state(5, k))
            assert (prof.n_a, prof.n_b) == (5, 5)


class TestMarginalIdentities:
    def test_thousand_random_pairs(self):
        rng = np.random.default_rng(17)
        mats = [
            dft(2), dft(3), dft(4), dft(5), dft(6),
            mub4(1j), mub4(np.exp(2.2j)),
            perturbed(mub4(1j), 0.1), perturbed(dft(5), 0.07),
            spin_transition(1), spin_transition(1.5), spin_transition(2),
        ]
        count = 0
        while count < 1000:
            u = mats[count % len(mats)]
            st = random_state(u.d, int(rng.integers(0, 2**31)))
            q = kd_distribution(u, st).q
            b = st.b_coordinates(u)
            assert abs(q.sum() - 1.0) < 1e-10
            assert np.abs(q.sum(axis=1) - np.abs(st.amps) ** 2).max() < 1e-10
            assert np.abs(q.sum(axis=0) - np.abs(b) ** 2).max() < 1e-10
            count += 1


class TestTheoremOneProperty:
    def test_above_edge_states_are_nonclassical(self):
        from kdscope.incompat import is_stroinc

        mats = [dft(5), dft(6), mub4(1j), perturbed(mub4(1j), 0.1)]
        for idx, u in enumerate(mats):
            assert is_stroinc(u)
            for k in range(100):
                st = random_state(u.d, 2000 + 100 * idx + k)
                if support(u, st).total > u.d + 1:
                    assert not is_kd_classical(kd_distribution(u, st)).classical
