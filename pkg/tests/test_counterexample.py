from fractions import Fraction

import numpy as np
import pytest

from conftest import get_classes, get_group, get_table
from tqrgroups import (AbelianGroup, AutAction, abelian_structure, build_group,
                       build_counterexample_rep, center, character_value,
                       compute_char_table, conjugacy_classes, decompose,
                       default_epsilon, dual_action, induce_character,
                       inner_product, invariant_small_doubling_set,
                       m_fold_sumset, normal_subgroups, plancherel_frac,
                       translate_cover, verify_vtheta_partition)
from tqrgroups.chartable import ClassFunction
from tqrgroups.counterexample import conjugation_action_on_center
from tqrgroups.groups import center_of_subset, subgroup_from_members


# ---------------------------------------------------------------------------
# abelian structures


def test_abelian_group_basics():
    K = AbelianGroup((2, 4))
    assert K.order == 8
    assert K.add((1, 3), (1, 2)) == (0, 1)
    assert K.neg((1, 3)) == (1, 1)
    with pytest.raises(ValueError):
        AbelianGroup((4, 2))   # not a divisibility chain


def test_abelian_structure_cyclic12():
    G = get_group("C12")
    dec = abelian_structure(G, range(12))
    assert dec.group.factors == (12,)
    assert len(dec.to_parent) == 12


def test_abelian_structure_q8_center():
    G = get_group("Q8")
    dec = abelian_structure(G, center(G).members)
    assert dec.group.factors == (2,)
    assert dec.to_parent[(0,)] == 0 and dec.to_parent[(1,)] == 1


def test_abelian_structure_klein_and_mixed():
    V4 = build_group({"family": "dihedral", "params": {"n": 2}})
    dec = abelian_structure(V4, range(4))
    assert dec.group.factors == (2, 2)
    C2xC4 = build_group({"family": "product",
                         "params": {"left": {"family": "cyclic", "params": {"n": 2}},
                                    "right": {"family": "cyclic", "params": {"n": 4}}}})
    dec2 = abelian_structure(C2xC4, range(8))
    assert dec2.group.factors == (2, 4)
    C6xC15 = build_group({"family": "product",
                          "params": {"left": {"family": "cyclic", "params": {"n": 6}},
                                     "right": {"family": "cyclic", "params": {"n": 15}}}})
    dec3 = abelian_structure(C6xC15, range(90))
    assert dec3.group.factors == (3, 30)


def test_abelian_structure_rejects_nonabelian():
    G = get_group("S3")
    with pytest.raises(Exception):
        abelian_structure(G, range(6))


def test_character_values_are_roots_of_unity():
    K = AbelianGroup((3, 6))
    for theta in K.elements:
        for x in K.elements:
            v = character_value(K.factors, theta, x)
            assert abs(abs(v) - 1) < 1e-12
    # multiplicativity
    v1 = character_value((12,), (5,), (3,))
    v2 = character_value((12,), (5,), (4,))
    v12 = character_value((12,), (5,), (7,))
    assert abs(v1 * v2 - v12) < 1e-12


def test_dual_action_is_adjoint():
    K = AbelianGroup((5, 5))
    rot = {t: (t[1], (-t[0]) % 5) for t in K.elements}
    act = AutAction(K, [rot])
    assert len(act) == 4
    dual = dual_action(act)
    for p, q in zip(act.perms, dual.perms):
        for theta in K.elements:
            for x in K.elements:
                lhs = character_value(K.factors, q[theta], x)
                rhs = character_value(K.factors, theta, p[x])
                assert abs(lhs - rhs) < 1e-10


# ---------------------------------------------------------------------------
# sumsets and covers


def test_m_fold_sumset_examples():
    K = AbelianGroup((12,))
    assert m_fold_sumset(K, [(0,)], 5) == {(0,)}
    S = m_fold_sumset(K, [(0,), (1,), (2,)], 2)
    assert S == {(0,), (1,), (2,), (3,), (4,)}
    full = m_fold_sumset(K, K.elements, 2)
    assert full == set(K.elements)


def test_translate_cover_interval():
    tc = translate_cover([(0,), (1,)], 2, 3)
    assert tc.count == 3
    assert tc.bound == 30
    assert tc.mn_set_size == 7


def test_translate_cover_m_equals_one():
    tc = translate_cover([(0,), (1,), (5,)], 4, 1)
    assert tc.count == 1


def test_translate_cover_rank2():
    tc = translate_cover([(0, 0), (1, 0), (0, 1)], 4, 2)
    assert tc.count <= (10 * 2 * 2) ** 2
    assert tc.mn_set_size == len(m_fold_sumset(None, [(0, 0), (1, 0), (0, 1)], 8))


def test_translate_cover_seeded_batch():
    rng = np.random.default_rng(2024)
    checked = 0
    for _ in range(40):
        k = int(rng.integers(1, 4))
        m = int(rng.integers(1, 5))
        n = int(rng.integers(1, 7))
        if rng.random() < 0.5:
            pts = {tuple(int(v) for v in rng.integers(-4, 5, k))
                   for _ in range(k + 1)}
            while len(pts) < k + 1:
                pts.add(tuple(int(v) for v in rng.integers(-4, 5, k)))
            tc = translate_cover(sorted(pts), n, m)
        else:
            factors = tuple(sorted(int(f) for f in rng.choice([2, 3, 4, 6, 12], k)))
            factors = tuple(int(np.lcm.reduce(factors[:i + 1])) for i in range(k))
            K = AbelianGroup(factors)
            pts = set()
            while len(pts) < k + 1:
                pts.add(K.elements[int(rng.integers(K.order))])
            tc = translate_cover(sorted(pts), n, m, group=K)
        assert tc.count <= tc.bound
        checked += 1
    assert checked == 40


# ---------------------------------------------------------------------------
# the small-doubling algorithm


def test_small_doubling_z12_interval():
    K = AbelianGroup((12,))
    L = AutAction(K, [])
    A, diag = invariant_small_doubling_set(K, L, 2, epsilon=Fraction(1, 4))
    assert A == {(0,), (1,), (2,)}
    assert diag["m_fold_size"] == 5
    assert diag["m_fold_size"] <= 6


def test_small_doubling_small_group_branch():
    K = AbelianGroup((2,))
    L = AutAction(K, [])
    A, diag = invariant_small_doubling_set(K, L, 3)
    assert A == {(0,)}
    assert diag["small_branch"]


def test_small_doubling_default_epsilon():
    assert default_epsilon(1, 2) == Fraction(1, 2 * 20 ** 2)
    K = AbelianGroup((12,))
    L = AutAction(K, [])
    A, diag = invariant_small_doubling_set(K, L, 2)
    assert A == {(0,)}   # 12 <= 1/epsilon puts us in the small branch


def test_small_doubling_invariant_under_rotation_small_branch():
    # |K| = 25 sits below 1/epsilon for any epsilon meeting the proof bound,
    # so the output is {0}: invariant, and trivially |2A| <= 12
    K = AbelianGroup((5, 5))
    rot = {t: (t[1], (-t[0]) % 5) for t in K.elements}
    L = AutAction(K, [rot])
    assert len(L) == 4
    A, diag = invariant_small_doubling_set(K, L, 2)
    assert A == {(0, 0)} and diag["small_branch"]
    assert len(m_fold_sumset(K, A, 2)) <= 12
    for p in L.perms:
        assert {p[x] for x in A} == A


def test_small_doubling_invariant_under_rotation_nontrivial():
    K = AbelianGroup((13, 13))
    rot = {t: (t[1], (-t[0]) % 13) for t in K.elements}
    L = AutAction(K, [rot])
    A, diag = invariant_small_doubling_set(K, L, 2, epsilon=Fraction(2, 169))
    assert len(A) >= 2
    for p in L.perms:
        assert {p[x] for x in A} == A
    assert 2 * len(m_fold_sumset(K, A, 2)) <= K.order


def test_small_doubling_rejects_overridden_epsilon_that_breaks_contract():
    K = AbelianGroup((4,))
    L = AutAction(K, [])
    with pytest.raises(RuntimeError):
        invariant_small_doubling_set(K, L, 2, epsilon=Fraction(9, 10))


# ---------------------------------------------------------------------------
# the induced-representation construction


def test_counterexample_cyclic12():
    G, C, T = get_group("C12"), get_classes("C12"), get_table("C12")
    N = [s for s in normal_subgroups(G, C) if s.order == 12][0]
    V, rep = build_counterexample_rep(G, C, T, N, 2, epsilon=Fraction(1, 4))
    assert rep["set_size"] == 3
    assert plancherel_frac(T, V) == Fraction(1, 4)
    assert rep["measure_identity_ok"]
    assert rep["power_measure_at_most_half"]
    assert Fraction(*rep["measure_v_exact"]) == Fraction(1, 4)
    # the tensor-square support sits inside the sumset of character exponents
    assert rep["measure_v_power_m"] <= rep["m_fold_set_size"] / 12


def test_counterexample_q8_small_branch():
    G, C, T = get_group("Q8"), get_classes("Q8"), get_table("Q8")
    N = [s for s in normal_subgroups(G, C) if s.order == 8][0]
    V, rep = build_counterexample_rep(G, C, T, N, 3)
    assert rep["algorithm"]["small_branch"]
    assert rep["set_size"] == 1
    # induced from the trivial central character: the four 1-dim irreps
    assert V.support() == (0, 1, 2, 3)
    assert plancherel_frac(T, V) == Fraction(1, 2)
    assert rep["power_measure_at_most_half"]


def test_counterexample_c2xs3():
    G, C, T = get_group("C2xS3"), get_classes("C2xS3"), get_table("C2xS3")
    N = [s for s in normal_subgroups(G, C) if s.order == 12][0]
    V, rep = build_counterexample_rep(G, C, T, N, 4, epsilon=Fraction(1, 2))
    assert rep["center_order"] == 2
    assert plancherel_frac(T, V) == Fraction(1, 2)
    # V is pulled back from the quotient by C2, so every tensor power keeps
    # the C2 factor acting trivially
    assert rep["measure_v_power_m"] == 0.5


def test_counterexample_orbit_blocks_partition():
    # D4 over its rotation subgroup: the dual orbits {0},{2},{1,3} of the
    # C4 characters induce blocks partitioning the five irreducibles with
    # measures 1/4, 1/4, 1/2
    G, C, T = get_group("D4"), get_classes("D4"), get_table("D4")
    N = [s for s in normal_subgroups(G, C)
         if s.order == 4 and set(s.members) == {0, 1, 2, 3}][0]
    V, rep = build_counterexample_rep(G, C, T, N, 2, epsilon=Fraction(1, 4))
    assert rep["orbit_partition_ok"] and rep["orbit_measures_ok"]
    assert sorted(b["orbit_size"] for b in rep["orbit_blocks"]) == [1, 1, 2]
    assert sorted(b["measure"] for b in rep["orbit_blocks"]) == [0.25, 0.25, 0.5]


def test_counterexample_requires_nontrivial_center():
    G, C, T = get_group("S3"), get_classes("S3"), get_table("S3")
    N = [s for s in normal_subgroups(G, C) if s.order == 6][0]
    with pytest.raises(Exception, match="center"):
        build_counterexample_rep(G, C, T, N, 2)


@pytest.mark.parametrize("name,n_order", [("Q8", 8), ("D4", 8), ("ES3", 27),
                                          ("D4", 4)])
def test_induced_block_matches_orbit_sum_formula(name, n_order):
    # character of Ind_K^G(theta): zero off K and
    # (|N|/|K|) * sum over cosets of theta composed with conjugation on K
    G, C, T = get_group(name), get_classes(name), get_table(name)
    N = [s for s in normal_subgroups(G, C) if s.order == n_order]
    N = [s for s in N if len(center_of_subset(G, s.members)) > 1][0]
    K_members = center_of_subset(G, N.members)
    dec = abelian_structure(G, K_members)
    action = conjugation_action_on_center(G, N, dec)
    kk = len(K_members)
    coset_count = G.order // N.order
    for theta in dec.group.elements:
        values = {dec.to_parent[t]: character_value(dec.group.factors, theta, t)
                  for t in dec.group.elements}
        ind = induce_character(G, C, sorted(values),
                               [values[e] for e in sorted(values)])
        # orbit-sum formula, assembled from the coset automorphisms; the
        # induction here goes K -> G so the prefactor is |G|/(|K| |G/N|)
        for cid, rep_el in enumerate(C.representatives):
            rep_el = int(rep_el)
            if rep_el in values:
                t = dec.from_parent[rep_el]
                expect = (N.order / kk) * sum(
                    character_value(dec.group.factors, theta, p[t])
                    for p in action.perms) * (coset_count / len(action))
                assert abs(ind.values[cid] - expect) < 1e-9
            else:
                assert abs(ind.values[cid]) < 1e-9


def test_induced_blocks_orthogonal_iff_distinct_orbit():
    # D4 with N = the rotation subgroup: the reflection flips the characters
    # of C4, giving dual orbits {0}, {2}, {1,3}
    G, C, T = get_group("D4"), get_classes("D4"), get_table("D4")
    N = [s for s in normal_subgroups(G, C)
         if s.order == 4 and set(s.members) == {0, 1, 2, 3}][0]
    K_members = center_of_subset(G, N.members)
    assert len(K_members) == 4
    dec = abelian_structure(G, K_members)
    action = conjugation_action_on_center(G, N, dec)
    dual = dual_action(action)
    chars = {}
    for theta in dec.group.elements:
        values = {dec.to_parent[t]: character_value(dec.group.factors, theta, t)
                  for t in dec.group.elements}
        chars[theta] = induce_character(G, C, sorted(values),
                                        [values[e] for e in sorted(values)])
    for t1 in dec.group.elements:
        for t2 in dec.group.elements:
            same_orbit = t2 in dual.orbit(t1)
            ip = inner_product(chars[t1], chars[t2])
            if same_orbit:
                assert np.allclose(chars[t1].values, chars[t2].values)
            else:
                assert abs(ip) < 1e-9


def test_vtheta_partition_q8_d4():
    for name in ["Q8", "D4"]:
        G, C, T = get_group(name), get_classes(name), get_table(name)
        out = verify_vtheta_partition(G, C, T, center(G).members)
        assert out["partition_ok"] and out["measures_exact"]
        assert [b["measure"] for b in out["blocks"]] == [0.5, 0.5]
    q8 = verify_vtheta_partition(get_group("Q8"), get_classes("Q8"),
                                 get_table("Q8"), center(get_group("Q8")).members)
    assert q8["blocks"][0]["support"] == [0, 1, 2, 3]
    assert q8["blocks"][1]["support"] == [4]


def test_vtheta_partition_abelian_self_dual():
    G, C, T = get_group("C6"), get_classes("C6"), get_table("C6")
    out = verify_vtheta_partition(G, C, T, tuple(range(6)))
    assert out["partition_ok"] and out["measures_exact"]
    assert all(len(b["support"]) == 1 for b in out["blocks"])


def test_vtheta_partition_requires_central():
    G, C, T = get_group("S3"), get_classes("S3"), get_table("S3")
    with pytest.raises(Exception, match="central"):
        verify_vtheta_partition(G, C, T, (0, 3, 4))   # the 3-cycle subgroup
