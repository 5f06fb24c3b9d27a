"""Actions: representations, structural validation, fixed points, isometry."""

import numpy as np
import pytest

from qha.algebra import AlgebraElement, random_element, sup_distance, trace
from qha.actions import (
    ActionError,
    GridError,
    MeasureError,
    RepresentationError,
    UnitaryRep,
    WaveletDesign,
    automorphism_defect,
    commutant_dimension,
    conjugation_action,
    coset_action,
    cyclic_character_rep,
    dual_action,
    finite_weyl_heisenberg,
    fixed_point_dimension,
    heisenberg_cocycle,
    homomorphism_defect,
    induced_action,
    is_trace_preserving,
    isometry_defect,
    left_translation_action,
    permutation_action,
    s3_irreps,
    trivial_rep,
    twisted_regular_rep,
    wavelet_action,
)
from qha.groups import cyclic, product


SMALL_WAVELET = WaveletDesign(steps_per_octave=8, octaves=4, max_shift=8,
                              b_extent=2.0, n_b=32, support_octaves=0.5)


class TestUnitaryRep:
    def test_rejects_non_unitary(self):
        G = cyclic(2)
        mats = np.array([np.eye(2), [[1.0, 1.0], [0.0, 1.0]]], dtype=complex)
        with pytest.raises(RepresentationError):
            UnitaryRep(G, mats)

    def test_rejects_wrong_product_law(self):
        G = cyclic(2)
        mats = np.array([np.eye(1), [[1.0]]], dtype=complex)  # chi(1) should be -1-able
        # constant family is a valid rep of c2 (trivial); break it with a fake cocycle
        with pytest.raises(RepresentationError):
            UnitaryRep(G, mats, cocycle=lambda a, b: -1.0 if (a, b) == (1, 1) else 1.0)

    def test_s3_irreps_validate(self):
        reps = s3_irreps()
        assert sorted(reps) == ["sign", "std", "trivial"]
        assert reps["std"].dim == 2

    def test_cyclic_character(self):
        rep = cyclic_character_rep(cyclic(8), 3)
        assert rep.dim == 1
        assert rep.matrix(1)[0, 0] == pytest.approx(np.exp(2j * np.pi * 3 / 8))


class TestWeylHeisenberg:
    def test_identity_matrix(self):
        rep = finite_weyl_heisenberg(3)
        e = rep.group.identity
        assert np.allclose(rep.matrix(e), np.eye(3))

    def test_product_phase_matches_cocycle_exactly(self):
        # derived check: matrix product phase against the stated cocycle
        rep = finite_weyl_heisenberg(4)
        G = rep.group
        for a in G.elements():
            for b in G.elements():
                lhs = rep.matrix(a) @ rep.matrix(b)
                rhs = complex(rep.cocycle(a, b)) * rep.matrix(G.compose(a, b))
                assert np.abs(lhs - rhs).max() < 1e-12

    def test_cocycle_formula(self):
        rep = finite_weyl_heisenberg(5)
        G = rep.group
        a = G.index_of_tuple((2, 3))
        b = G.index_of_tuple((4, 1))
        assert rep.cocycle(a, b) == pytest.approx(np.exp(2j * np.pi * 3 * 4 / 5))

    @pytest.mark.parametrize("n", range(2, 9))
    def test_irreducible(self, n):
        rep = finite_weyl_heisenberg(n)
        assert commutant_dimension(rep.matrices) == 1

    def test_rejects_small_n(self):
        with pytest.raises(RepresentationError):
            finite_weyl_heisenberg(1)


class TestConjugationAction:
    def test_trivial_rep_identity_action(self):
        act = conjugation_action(trivial_rep(cyclic(3), dim=2))
        rng = np.random.default_rng(0)
        x = random_element(act.shape, rng)
        for g in act.group.elements():
            assert sup_distance(act.apply(g, x), x) < 1e-14

    def test_unit_preserved(self):
        act = conjugation_action(finite_weyl_heisenberg(3))
        one = act.shape.identity()
        for g in act.group.elements():
            assert sup_distance(act.apply(g, one), one) < 1e-12

    def test_pauli_action_is_ergodic(self):
        # nullspace oracle: the fixed-point space of the n=2 family is the scalars
        act = conjugation_action(finite_weyl_heisenberg(2))
        assert fixed_point_dimension(act) == 1

    def test_trivial_action_fixed_dimension(self):
        act = conjugation_action(trivial_rep(cyclic(2), dim=2))
        assert fixed_point_dimension(act) == 4


class TestPermutationAction:
    def test_translation_transitive_ergodic(self):
        act = left_translation_action(cyclic(5))
        orbit = {0}
        frontier = [0]
        while frontier:
            t = frontier.pop()
            for g in act.group.elements():
                s = int(act.point_table[g, t])
                if s not in orbit:
                    orbit.add(s)
                    frontier.append(s)
        assert orbit == set(range(5))  # transitivity oracle
        assert fixed_point_dimension(act) == 1

    def test_coset_action_ergodic_orbit_oracle(self):
        act = coset_action(cyclic(6), [0, 2, 4])
        seen = {int(act.point_table[g, 0]) for g in act.group.elements()}
        assert seen == {0, 1}
        assert fixed_point_dimension(act) == 1

    def test_trivial_group_not_ergodic(self):
        G = cyclic(1)
        act = permutation_action(G, np.array([[0, 1]]), np.array([1.0, 1.0]))
        assert fixed_point_dimension(act) == 2

    def test_rejects_non_invariant_measure(self):
        G = cyclic(2)
        with pytest.raises(MeasureError):
            permutation_action(G, G.table, np.array([1.0, 2.0]))

    def test_validate_escape_for_fixtures(self):
        G = cyclic(2)
        act = permutation_action(G, G.table, np.array([1.0, 2.0]), validate=False)
        rep = is_trace_preserving(act)
        assert not rep.passed


class TestTwistedRegularRep:
    def test_untwisted_c2_is_swap(self):
        rep = twisted_regular_rep(cyclic(2), lambda a, b: 1.0)
        assert np.allclose(rep.matrix(1), [[0.0, 1.0], [1.0, 0.0]])

    def test_trace_is_order_times_delta(self):
        G = product(cyclic(3), cyclic(3))
        rep = twisted_regular_rep(G, heisenberg_cocycle(G))
        for g in G.elements():
            tr = np.trace(rep.matrix(g))
            expect = G.order if g == G.identity else 0.0
            assert abs(tr - expect) < 1e-12

    def test_heisenberg_twist_has_trivial_center(self):
        # commutant solve restricted to the span of the twisted translates
        G = product(cyclic(3), cyclic(3))
        rep = twisted_regular_rep(G, heisenberg_cocycle(G))
        lam = rep.matrices
        n = G.order
        rows = []
        for h in G.elements():
            block = np.array([(lam[g] @ lam[h] - lam[h] @ lam[g]).ravel()
                              for g in G.elements()]).T
            rows.append(block)
        stacked = np.vstack(rows)
        s = np.linalg.svd(stacked, compute_uv=False)
        assert int(np.sum(s <= 1e-8)) == 1

    def test_rejects_cocycle_identity_violation(self):
        G = product(cyclic(2), cyclic(2))

        def bad(a, b):
            return -1.0 if (a, b) == (1, 2) else 1.0

        with pytest.raises(RepresentationError):
            twisted_regular_rep(G, bad)


class TestDualAction:
    def test_trivial_character_is_identity(self):
        act = dual_action(product(cyclic(2), cyclic(2)), 0)
        rng = np.random.default_rng(1)
        x = random_element(act.shape, rng)
        e = act.group.identity
        assert sup_distance(act.apply(e, x), x) < 1e-14

    def test_trace_evaluates_symbol_at_identity(self):
        # trace of a symbol element is its value at the group identity
        G = product(cyclic(2), cyclic(2))
        act = dual_action(G, 0)
        rng = np.random.default_rng(2)
        f = rng.standard_normal(G.order) + 1j * rng.standard_normal(G.order)
        x = act.from_symbol(f)
        assert trace(x) == pytest.approx(f[G.identity])
        for omega in act.group.elements():
            moved = act.apply(omega, x)
            assert trace(moved) == pytest.approx(f[G.identity])

    def test_permutation_matches_symbol_formula(self):
        # oracle: translate the symbol pointwise and rebuild, per the definition
        G = product(cyclic(2), cyclic(4))
        act = dual_action(G, 0)
        rng = np.random.default_rng(3)
        f = rng.standard_normal(G.order) + 1j * rng.standard_normal(G.order)
        x = act.from_symbol(f)
        for omega in act.group.elements():
            twisted = act.characters.table[omega] * f
            direct = act.from_symbol(twisted)
            assert sup_distance(act.apply(omega, x), direct) < 1e-11

    def test_symbol_round_trip(self):
        G = product(cyclic(4), cyclic(4))
        act = dual_action(G, 0)
        rng = np.random.default_rng(4)
        f = rng.standard_normal(G.order) + 1j * rng.standard_normal(G.order)
        assert np.abs(act.symbol(act.from_symbol(f)) - f).max() < 1e-11

    def test_full_dual_is_ergodic(self):
        for G in (cyclic(4), product(cyclic(4), cyclic(4))):
            act = dual_action(G, 0)
            assert fixed_point_dimension(act) == 1

    def test_twisted_dual_is_inner_conjugation(self):
        # oracle: for coprime twist the dual action is conjugation by a translate
        n, m = 4, 1
        act = dual_action(product(cyclic(n), cyclic(n)), m)
        G = act.base_group
        rng = np.random.default_rng(5)
        x = random_element(act.shape, rng)
        for s in range(n):
            for t in range(n):
                omega = G.index_of_tuple((s, t))
                # omega(a, b) = exp(2 pi i (s a + t b)/n) matches conjugation by
                # Lambda(c, d) with d = s/m, c = -t/m mod n
                c = (-t * pow(m, -1, n)) % n
                d = (s * pow(m, -1, n)) % n
                U = act.lambdas[G.index_of_tuple((c, d))]
                direct = AlgebraElement(act.shape, [U @ x.blocks[0] @ U.conj().T])
                assert sup_distance(act.apply(omega, x), direct) < 1e-10

    def test_twisted_dual_ergodic(self):
        act = dual_action(product(cyclic(3), cyclic(3)), 1)
        assert fixed_point_dimension(act) == 1

    def test_rejects_degenerate_twist(self):
        with pytest.raises(ActionError):
            dual_action(product(cyclic(4), cyclic(4)), 2)


def _builtin_induced():
    G = product(cyclic(2), cyclic(4))
    h_indices = [G.index_of_tuple((a, b)) for a in range(2) for b in (0, 2)]
    rep = finite_weyl_heisenberg(2)
    inner = conjugation_action(rep)
    iso = []
    for g in h_indices:
        a, b = G.tuple_of_index(g)
        iso.append(rep.group.index_of_tuple((a, b // 2)))
    return G, h_indices, inner, iso


class TestInducedAction:
    def test_whole_group_recovers_inner(self):
        rep = finite_weyl_heisenberg(2)
        G = rep.group
        inner = conjugation_action(rep)
        act = induced_action(G, list(G.elements()), inner, list(G.elements()))
        assert act.coset_count == 1
        rng = np.random.default_rng(6)
        x = random_element(act.shape, rng)
        for g in G.elements():
            expect = inner.apply(g, AlgebraElement(inner.shape, x.blocks))
            got = act.apply(g, x)
            assert sup_distance(got, AlgebraElement(act.shape, expect.blocks)) < 1e-12

    def test_builtin_instance_ergodic(self):
        G, h, inner, iso = _builtin_induced()
        act = induced_action(G, h, inner, iso)
        assert act.shape.block_dims == (2, 2)
        assert fixed_point_dimension(act) == 1

    def test_trace_of_identity(self):
        G, h, inner, iso = _builtin_induced()
        act = induced_action(G, h, inner, iso)
        index = G.order // len(h)
        assert trace(act.shape.identity()) == pytest.approx(index * trace(inner.shape.identity()))

    def test_homomorphism_all_pairs(self):
        G, h, inner, iso = _builtin_induced()
        act = induced_action(G, h, inner, iso)
        rng = np.random.default_rng(7)
        assert homomorphism_defect(act, rng) < 1e-12

    def test_rejects_bad_iso(self):
        G, h, inner, iso = _builtin_induced()
        bad = list(iso)
        bad[1] = bad[0]  # not injective, so not an isomorphism
        with pytest.raises(ActionError):
            induced_action(G, h, inner, bad)


class TestWaveletAction:
    def test_identity_matrix(self):
        act = wavelet_action(SMALL_WAVELET)
        U = act.matrix(act.group.identity)
        assert np.abs(U - np.eye(act.grid_size)).max() < 1e-12

    def test_node_unitarity(self):
        # every node operator is exactly unitary on the cyclic grid
        act = wavelet_action(SMALL_WAVELET)
        rng = np.random.default_rng(8)
        xi = rng.standard_normal(act.grid_size) + 1j * rng.standard_normal(act.grid_size)
        for i in range(0, act.group.node_count, 97):
            U = act.matrix(act.group.nodes[i])
            assert abs(np.linalg.norm(U @ xi) - np.linalg.norm(xi)) < 1e-10

    def test_composition_on_window_rows(self):
        # derived check: matrix products agree on unwrapped rows
        act = wavelet_action(SMALL_WAVELET)
        g = np.array([2.0 ** (2 / 8), 0.3])
        h = np.array([2.0 ** (-1 / 8), -0.2])
        Ug, Uh = act.matrix(g), act.matrix(h)
        Ugh = act.matrix(act.group.compose(g, h))
        rows = act.window
        assert np.abs((Ug @ Uh - Ugh)[rows, :]).max() < 1e-10

    def test_apply_matches_matrix_conjugation(self):
        act = wavelet_action(SMALL_WAVELET)
        rng = np.random.default_rng(9)
        x = act.windowed_element(rng)
        g = act.group.nodes[7]
        U = act.matrix(g)
        direct = AlgebraElement(act.shape, [U @ x.blocks[0] @ U.conj().T])
        assert sup_distance(act.apply(g, x), direct) < 1e-12

    def test_rejects_off_grid_dilation(self):
        act = wavelet_action(SMALL_WAVELET)
        with pytest.raises(GridError):
            act.matrix((1.3, 0.0))

    def test_sampled_ergodicity(self):
        act = wavelet_action(SMALL_WAVELET)
        assert fixed_point_dimension(act) == 1

    def test_bracket_values_match_generic_loop(self):
        act = wavelet_action(SMALL_WAVELET)
        rng = np.random.default_rng(10)
        x, y = act.windowed_positive(rng), act.windowed_positive(rng)
        fast = act.bracket_values(x, y)
        slow = np.array([trace(act.apply(g, y).adjoint() @ x)
                         for g in act.node_elements()])
        assert np.abs(fast - slow).max() < 1e-10 * (1 + np.abs(slow).max())

    def test_orbit_sum_matches_generic_loop(self):
        act = wavelet_action(SMALL_WAVELET)
        rng = np.random.default_rng(11)
        x = act.windowed_positive(rng)
        coeffs = rng.standard_normal(act.group.node_count)
        fast = act.orbit_sum(coeffs, x)
        slow = act.shape.zero()
        for c, g in zip(coeffs, act.node_elements()):
            slow = slow + complex(c) * act.apply(g, x)
        assert sup_distance(fast, slow) < 1e-9 * (1 + slow.max_abs_entry())

    def test_bracket_integral_matches_weighted_values(self):
        act = wavelet_action(SMALL_WAVELET)
        rng = np.random.default_rng(12)
        x, y = act.windowed_positive(rng), act.windowed_positive(rng)
        w = act.group.haar_weights
        fast = act.bracket_integral(x, y, w)
        slow = np.dot(w, act.bracket_values(x, y))
        assert abs(fast - slow) < 1e-9 * (1 + abs(slow))


class TestStructuralCheckers:
    def test_trace_preserving_conjugation(self):
        act = conjugation_action(finite_weyl_heisenberg(3))
        rep = is_trace_preserving(act)
        assert rep.passed and rep.lhs < 1e-12

    def test_trace_preserving_invariant_measure(self):
        act = left_translation_action(cyclic(4))
        assert is_trace_preserving(act).passed

    def test_homomorphism_small_groups_all_pairs(self):
        rng = np.random.default_rng(13)
        for act in (conjugation_action(finite_weyl_heisenberg(3)),
                    left_translation_action(cyclic(6)),
                    dual_action(product(cyclic(2), cyclic(2)), 0)):
            assert homomorphism_defect(act, rng) <= 1e-10

    def test_automorphism_defects(self):
        rng = np.random.default_rng(14)
        act = conjugation_action(s3_irreps()["std"])
        assert automorphism_defect(act, rng) <= 1e-10

    def test_isometry_on_p_norms(self):
        rng = np.random.default_rng(15)
        for act in (conjugation_action(finite_weyl_heisenberg(4)),
                    coset_action(cyclic(6), [0, 2, 4])):
            assert isometry_defect(act, rng) <= 1e-9
