import numpy as np
import pytest

from kdscope.bases import dft, mub4, spin_transition
from kdscope.diagram import (
    CLASSICAL,
    MIXED,
    NONCLASSICAL,
    SearchConfig,
    classify_point,
    dft6_two_support,
    dft_min_states,
    generic_support,
    minimize_ncc_over_subspace,
    mub4_edge_states,
    support_subspace,
    uncertainty_diagram,
)
from kdscope.errors import (
    EmptySubspaceError,
    IndexOutOfRangeError,
    InvalidFactorizationError,
)
from kdscope.kdcore import kd_distribution, is_kd_classical, nonclassicality, support

CFG = SearchConfig(seed=11, restarts=20, max_iter=2000, conv_tol=1e-10)


class TestSupportSubspace:
    def test_dimensional_lower_bound(self):
        u = mub4(np.exp(0.6j))
        for s_set, t_set in [((0, 1, 2), (0, 1, 2, 3)), ((0, 1), (0, 2, 3)), ((0, 1, 2, 3), (0, 1, 2, 3))]:
            dim = support_subspace(u, s_set, t_set).dim
            assert dim >= len(s_set) + len(t_set) - 4

    def test_dft6_one_dimensional_cell(self):
        basis = support_subspace(dft(6), (0, 2, 4), (0, 3))
        assert basis.dim == 1
        target = np.array([1, 0, 1, 0, 1, 0]) / np.sqrt(3)
        assert abs(abs(np.vdot(target, basis.columns[:, 0])) - 1.0) < 1e-10

    def test_dft5_trivial_below_edge(self):
        u = dft(5)
        from itertools import combinations

        for n_a in range(1, 5):
            for n_b in range(1, 6 - n_a):
                for s_set in combinations(range(5), n_a):
                    for t_set in combinations(range(5), n_b):
                        assert support_subspace(u, s_set, t_set).dim == 0

    def test_rejects_empty_or_out_of_range(self):
        with pytest.raises(IndexOutOfRangeError):
            support_subspace(dft(3), (), (0,))
        with pytest.raises(IndexOutOfRangeError):
            support_subspace(dft(3), (0, 5), (0,))


class TestGenericSupport:
    def test_dim_one_equals_state_support(self):
        u = dft(6)
        basis = support_subspace(u, (0, 2, 4), (0, 3))
        prof = generic_support(basis, u)
        assert prof.S == (0, 2, 4)
        assert prof.T == (0, 3)
        assert (prof.n_a, prof.n_b) == (3, 2)

    def test_full_space(self):
        u = mub4(1j)
        basis = support_subspace(u, (0, 1, 2, 3), (0, 1, 2, 3))
        prof = generic_support(basis, u)
        assert prof.S == (0, 1, 2, 3)
        assert prof.T == (0, 1, 2, 3)

    def test_monotone(self):
        u = spin_transition(2)
        from itertools import combinations

        rng = np.random.default_rng(1)
        pairs = [
            (tuple(sorted(rng.choice(5, size=rng.integers(1, 6), replace=False))),
             tuple(sorted(rng.choice(5, size=rng.integers(1, 6), replace=False))))
            for _ in range(40)
        ]
        for s_set, t_set in pairs:
            basis = support_subspace(u, s_set, t_set)
            if basis.dim:
                prof = generic_support(basis, u)
                assert set(prof.S) <= set(s_set)
                assert set(prof.T) <= set(t_set)

    def test_empty_rejected(self):
        u = dft(5)
        basis = support_subspace(u, (0,), (0,))
        assert basis.dim == 0
        with pytest.raises(EmptySubspaceError):
            generic_support(basis, u)


class TestSpecialStates:
    def test_dft_min_state_explicit(self):
        st = dft_min_states(6, 2, 3, 0, 0)
        target = np.array([1, 0, 1, 0, 1, 0]) / np.sqrt(3)
        assert np.abs(st.amps - target).max() < 1e-15

    def test_dft_min_states_orthonormal_family(self):
        states = [dft_min_states(6, 2, 3, m, s) for m in range(2) for s in range(3)]
        g = np.array([[np.vdot(a.amps, b.amps) for b in states] for a in states])
        assert np.abs(g - np.eye(6)).max() < 1e-12

    def test_dft_min_states_supports_and_mass(self):
        for d, p, q in ((4, 2, 2), (6, 2, 3), (6, 3, 2)):
            u = dft(d)
            for m in range(p):
                for s in range(q):
                    st = dft_min_states(d, p, q, m, s)
                    prof = support(u, st)
                    assert (prof.n_a, prof.n_b) == (q, p)
                    assert prof.n_a * prof.n_b == d
                    assert abs(nonclassicality(kd_distribution(u, st)) - 1.0) < 1e-10

    def test_dft_min_states_validation(self):
        with pytest.raises(InvalidFactorizationError):
            dft_min_states(6, 2, 2, 0, 0)
        with pytest.raises(InvalidFactorizationError):
            dft_min_states(6, 1, 6, 0, 0)
        with pytest.raises(InvalidFactorizationError):
            dft_min_states(6, 2, 3, 2, 0)

    def test_mub4_edge_states_nonclassical(self):
        for s in (1j, np.exp(2.5j)):
            u = mub4(s)
            for st in mub4_edge_states(s):
                q = kd_distribution(u, st)
                assert not is_kd_classical(q).classical
                assert nonclassicality(q) > 1 + 1e-6

    def test_dft6_two_support_zero_amplitude(self):
        for k1, k2, i1 in [(0, 1, 0), (1, 4, 3), (2, 5, 5), (0, 3, 2)]:
            st = dft6_two_support(k1, k2, i1)
            assert abs(st.amps[i1]) < 1e-12
            prof = support(dft(6), st)
            assert prof.n_b == 2
            assert prof.T == (k1, k2)

    def test_dft6_two_support_a_support_rule(self):
        u = dft(6)
        for k1, k2, i1 in [(0, 1, 0), (0, 5, 2), (1, 3, 0), (0, 3, 1), (2, 4, 0)]:
            st = dft6_two_support(k1, k2, i1)
            extra = [
                i2
                for i2 in range(6)
                if i2 != i1 and ((k2 - k1) * (i2 - i1)) % 6 == 0
            ]
            expected_n_a = 5 - len(extra)
            assert support(u, st).n_a == expected_n_a

    def test_dft6_two_support_classical_case(self):
        # separation 3 with two extra zeros lands on support (3, 2), where
        # the states coincide with the product-bound-saturating family
        st = dft6_two_support(0, 3, 0)
        u = dft(6)
        prof = support(u, st)
        assert (prof.n_a, prof.n_b) == (3, 2)
        assert abs(nonclassicality(kd_distribution(u, st)) - 1.0) < 1e-10

    def test_dft6_two_support_validation(self):
        with pytest.raises(IndexOutOfRangeError):
            dft6_two_support(3, 3, 0)
        with pytest.raises(IndexOutOfRangeError):
            dft6_two_support(0, 1, 7)


class TestMinimize:
    def test_dim_one_exact(self):
        u = mub4(1j)
        basis = support_subspace(u, (0, 2, 3), (0, 2))
        assert basis.dim == 1
        value, state = minimize_ncc_over_subspace(u, basis, CFG)
        assert abs(value - (1 + np.sqrt(2)) / 2) < 1e-12
        assert abs(value - nonclassicality(kd_distribution(u, state))) < 1e-12

    def test_mub4_two_two_cell_reaches_unit_mass(self):
        u = mub4(1j)
        from itertools import combinations

        found = False
        for s_set in combinations(range(4), 2):
            for t_set in combinations(range(4), 2):
                basis = support_subspace(u, s_set, t_set)
                if basis.dim >= 1:
                    value, _ = minimize_ncc_over_subspace(u, basis, CFG)
                    assert value >= 1 - 1e-10
                    if value < 1 + 1e-6:
                        found = True
        assert found

    def test_dft5_edge_cell_stays_above_unit(self):
        u = dft(5)
        basis = support_subspace(u, (0, 1, 2), (0, 1, 2))
        assert basis.dim == 1
        value, _ = minimize_ncc_over_subspace(u, basis, CFG)
        assert value > 1 + 1e-6

    def test_empty_subspace_rejected(self):
        u = dft(5)
        basis = support_subspace(u, (0,), (0,))
        with pytest.raises(EmptySubspaceError):
            minimize_ncc_over_subspace(u, basis, CFG)

    def test_deterministic_given_seed(self):
        u = dft(5)
        basis = support_subspace(u, (0, 1, 2, 3), (0, 1, 2, 3))
        assert basis.dim >= 2
        v1, s1 = minimize_ncc_over_subspace(u, basis, CFG)
        v2, s2 = minimize_ncc_over_subspace(u, basis, CFG)
        assert v1 == v2
        assert np.array_equal(s1.amps, s2.amps)


class TestClassifyPoint:
    def test_mub4_two_two_classical(self):
        p = classify_point(mub4(1j), 2, 2, CFG)
        assert p.classification == CLASSICAL
        assert abs(p.min_ncc_found - 1.0) <= 1e-8
        assert p.classical_witness is not None
        assert p.nonclassical_witness is None

    def test_dft5_three_three_nonclassical(self):
        p = classify_point(dft(5), 3, 3, CFG)
        assert p.classification == NONCLASSICAL
        assert p.min_ncc_found > 1 + 1e-6
        assert p.cells == 100

    def test_dft6_three_three_empty(self):
        p = classify_point(dft(6), 3, 3, CFG)
        assert p.classification == "EMPTY"
        assert p.cells == 0

    def test_spin2_mixed_point(self):
        p = classify_point(spin_transition(2), 2, 4, CFG)
        assert p.classification == MIXED
        assert p.classical_witness is not None
        assert p.nonclassical_witness is not None
        # both witnesses really live at (2, 4)
        u = spin_transition(2)
        for st in (p.classical_witness, p.nonclassical_witness):
            prof = support(u, st)
            assert (prof.n_a, prof.n_b) == (2, 4)
        assert is_kd_classical(kd_distribution(u, p.classical_witness)).classical
        assert not is_kd_classical(kd_distribution(u, p.nonclassical_witness)).classical

    def test_reproducible_bit_for_bit(self):
        p1 = classify_point(dft(5), 2, 4, CFG)
        p2 = classify_point(dft(5), 2, 4, CFG)
        assert p1.min_ncc_found == p2.min_ncc_found
        assert np.array_equal(p1.nonclassical_witness.amps, p2.nonclassical_witness.amps)


@pytest.fixture(scope="module")
def mub_diagram():
    return uncertainty_diagram(mub4(1j), CFG)


class TestUncertaintyDiagram:
    def test_realized_points(self, mub_diagram):
        # independent oracle: one explicit state per point, supports checked
        # with plain numpy (norms of amplitude vectors), constructed by hand
        u = mub4(1j).u
        explicit = {
            (1, 4): [1, 0, 0, 0],
            (4, 1): u[:, 0],
            (2, 2): [1, -1, 0, 0],
            (2, 3): [1, 0, -1, 0],
            (3, 2): [2, 0, 1 + 1j, 1 - 1j],
            (2, 4): [1, 2j, 0, 0],
            (4, 2): u[:, 0] + 2j * u[:, 2],
            (3, 3): [1, 1, -2, 0],
            (3, 4): [1, 2, 4, 0],
            (4, 3): u[:, 0] + 2 * u[:, 1] + 4 * u[:, 2],
            (4, 4): [1, 2j, 3, 4j],
        }
        for point, amps in explicit.items():
            v = np.asarray(amps, dtype=complex)
            v = v / np.linalg.norm(v)
            b = u.conj().T @ v
            got = (int((np.abs(v) > 1e-9).sum()), int((np.abs(b) > 1e-9).sum()))
            assert got == point, f"oracle state for {point} has supports {got}"
        assert mub_diagram.realized() == set(explicit)

    def test_classifications(self, mub_diagram):
        classical = {(p.n_a, p.n_b) for p in mub_diagram.points if p.classification == CLASSICAL}
        assert classical == {(1, 4), (4, 1), (2, 2)}
        assert all(
            p.classification == NONCLASSICAL
            for p in mub_diagram.points
            if (p.n_a, p.n_b) not in classical
        )

    def test_summary_fields(self, mub_diagram):
        assert mub_diagram.n_min == 4
        assert mub_diagram.edge == 5
        assert abs(mub_diagram.hyperbola_constant - 4.0) < 1e-12

    def test_product_bound_holds(self, mub_diagram):
        for p in mub_diagram.points:
            assert p.n_a * p.n_b >= mub_diagram.hyperbola_constant - 1e-9

    def test_edge_state_value_is_reached(self, mub_diagram):
        p = mub_diagram.point(3, 2)
        assert abs(p.min_ncc_found - (1 + np.sqrt(2)) / 2) < 1e-9

    def test_mirror_symmetry(self, mub_diagram):
        mirrored = uncertainty_diagram(mub4(1j).adjoint(), CFG)
        got = {(p.n_a, p.n_b): p.classification for p in mirrored.points}
        want = {(p.n_b, p.n_a): p.classification for p in mub_diagram.points}
        assert got == want

    def test_parallel_matches_serial(self, mub_diagram):
        par = uncertainty_diagram(mub4(1j), CFG, jobs=2)
        assert len(par.points) == len(mub_diagram.points)
        for a, b in zip(par.points, mub_diagram.points):
            assert (a.n_a, a.n_b, a.classification, a.cells) == (b.n_a, b.n_b, b.classification, b.cells)
            assert a.min_ncc_found == b.min_ncc_found


class TestCoincDiagramProperty:
    def test_dft5_no_points_below_edge(self):
        diagram = uncertainty_diagram(dft(5), CFG)
        assert all(p.n_a + p.n_b >= 6 for p in diagram.points)
        assert diagram.n_min == 6
