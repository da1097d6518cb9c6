import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracle
from conftest import FIXTURE_SPECS, get_classes, get_group
from tqrgroups import (GroupError, build_group, center,
                       center_free_quotient_chain, conjugacy_classes,
                       derived_subgroup, normal_subgroups, quotient,
                       subgroup_from_members, subgroup_table)


def test_family_orders():
    assert get_group("S3").order == 6
    assert get_group("Q8").order == 8
    assert build_group({"family": "affine", "params": {"p": 5}}).order == 20
    assert build_group({"family": "alternating", "params": {"n": 4}}).order == 12
    assert build_group({"family": "extraspecial", "params": {"p": 3}}).order == 27
    assert get_group("C2xS4").order == 48


def test_affine_elements_enumerate_all_pairs():
    G = build_group({"family": "affine", "params": {"p": 5}})
    assert G.order == 5 * 4
    assert G.labels[0] == "x->1x+0"
    assert G.identity == 0


def test_affine_requires_prime():
    with pytest.raises(GroupError):
        build_group({"family": "affine", "params": {"p": 6}})
    with pytest.raises(GroupError):
        build_group({"family": "extraspecial", "params": {"p": 4}})


def test_cayley_rejects_non_associative():
    table = [[0, 1, 2], [1, 2, 0], [2, 1, 0]]  # broken on purpose
    with pytest.raises(GroupError):
        build_group({"type": "cayley", "table": table})


def test_cayley_accepts_klein_four():
    table = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]]
    G = build_group({"type": "cayley", "table": table})
    assert G.order == 4 and G.is_abelian()


def test_permutation_closure_s3():
    G = build_group({"type": "permutation", "degree": 3,
                     "generators": [[1, 0, 2], [1, 2, 0]]})
    assert G.order == 6
    C = conjugacy_classes(G)
    assert C.sizes.tolist() == [1, 3, 2]


def test_permutation_closure_cap(monkeypatch):
    from tqrgroups import config
    monkeypatch.setattr(config, "MAX_ORDER", 10)
    with pytest.raises(GroupError, match="closure exceeds"):
        build_group({"type": "permutation", "degree": 4,
                     "generators": [[1, 0, 2, 3], [1, 2, 3, 0]]})


def test_conjugacy_classes_s3():
    C = get_classes("S3")
    assert C.sizes.tolist() == [1, 3, 2]
    assert C.min_nontrivial_size == 2


def test_conjugacy_classes_q8():
    C = get_classes("Q8")
    assert C.sizes.tolist() == [1, 1, 2, 2, 2]
    assert C.min_nontrivial_size == 1


def test_conjugacy_classes_affine5():
    C = get_classes("aff5")
    assert C.sizes.tolist() == [1, 4, 5, 5, 5]
    assert C.min_nontrivial_size == 4


@pytest.mark.parametrize("name", sorted(FIXTURE_SPECS))
def test_classes_match_brute_force(name):
    G = get_group(name)
    if G.order > 64:
        pytest.skip("brute oracle kept small")
    C = get_classes(name)
    expect = oracle.brute_conjugacy_classes(G)
    got = [c.tolist() for c in C.classes]
    assert got == expect


@pytest.mark.parametrize("name", sorted(FIXTURE_SPECS))
def test_class_structure_invariants(name):
    G, C = get_group(name), get_classes(name)
    # partition, identity first, sizes divide |G|
    assert C.sizes.sum() == G.order
    assert C.classes[0].tolist() == [G.identity]
    for s in C.sizes.tolist():
        assert G.order % s == 0
    # class_of consistent under conjugation on a seeded sample
    rng = np.random.default_rng(3)
    for _ in range(200):
        g = int(rng.integers(G.order))
        x = int(rng.integers(G.order))
        assert C.class_of[G.conjugate(g, x)] == C.class_of[x]


def test_center_q8_s3_c7():
    assert center(get_group("Q8")).order == 2
    assert sorted(center(get_group("Q8")).members) == [0, 1]  # 1 and -1
    assert center(get_group("S3")).order == 1
    C7 = build_group({"family": "cyclic", "params": {"n": 7}})
    assert center(C7).order == 7


def test_normal_subgroups_s3():
    G = get_group("S3")
    subs = normal_subgroups(G)
    assert [s.order for s in subs] == [1, 3, 6]
    a3 = subs[1]
    assert a3.is_normal and a3.index == 2


def test_normal_subgroups_cyclic6():
    G = get_group("C6")
    assert [s.order for s in normal_subgroups(G)] == [1, 2, 3, 6]


def test_normal_subgroups_a5_simple():
    G = get_group("A5")
    assert [s.order for s in normal_subgroups(G)] == [1, 60]


@pytest.mark.parametrize("name", ["S3", "S4", "A4", "Q8", "D4", "C12", "C2xS3"])
def test_normal_subgroups_match_brute_force(name):
    G = get_group(name)
    got = {frozenset(s.members) for s in normal_subgroups(G)}
    expect = set(oracle.brute_normal_subgroups(G))
    assert got == expect


@pytest.mark.parametrize("name", ["S3", "S4", "Q8", "D4", "A4"])
def test_normal_iff_class_union(name):
    G, C = get_group(name), get_classes(name)
    class_sets = [set(c.tolist()) for c in C.classes]
    for H in oracle.brute_all_subgroups(G):
        is_union = all(cs <= H or not (cs & H) for cs in class_sets)
        sub = subgroup_from_members(G, C, H)
        assert sub.is_normal == is_union


def test_quotient_orders_and_identity():
    G = get_group("S3")
    subs = normal_subgroups(G)
    for N in subs:
        Q = quotient(G, N)
        assert Q.order * N.order == G.order
    trivial = subs[0]
    Q = quotient(G, trivial)
    assert np.array_equal(Q.mul, G.mul)


def test_quotient_q8_center_is_klein_four():
    G = get_group("Q8")
    Q = quotient(G, center(G))
    assert Q.order == 4 and Q.is_abelian()
    assert all(Q.element_order(x) <= 2 for x in range(4))


def test_quotient_requires_normal():
    G = get_group("S3")
    C = get_classes("S3")
    H = subgroup_from_members(G, C, [0, 1])  # <transposition>, not normal
    assert not H.is_normal
    with pytest.raises(GroupError):
        quotient(G, H)


def test_center_free_quotient_chain():
    chain_q8 = center_free_quotient_chain(get_group("Q8"))
    assert [g.order for g in chain_q8] == [8, 4, 1]
    chain_s3 = center_free_quotient_chain(get_group("S3"))
    assert [g.order for g in chain_s3] == [6]
    C5 = build_group({"family": "cyclic", "params": {"n": 5}})
    assert [g.order for g in center_free_quotient_chain(C5)] == [5, 1]


def test_derived_subgroup():
    # [S3, S3] = A3; affine(5) derived = translations
    D = derived_subgroup(get_group("S3"))
    assert D.order == 3
    Da = derived_subgroup(get_group("aff5"))
    assert Da.order == 5
    assert derived_subgroup(get_group("A5")).order == 60


def test_subgroup_table_affine_translations():
    G = get_group("aff5")
    members = [b for b in range(5)]  # (1, b) have indices 0..4
    H, elems = subgroup_table(G, members)
    assert H.order == 5 and H.is_abelian()
    assert elems == members
    assert all(H.element_order(x) in (1, 5) for x in range(5))


@given(st.integers(min_value=1, max_value=40))
def test_cyclic_props(n):
    G = build_group({"family": "cyclic", "params": {"n": n}})
    C = conjugacy_classes(G)
    assert C.num_classes == n
    assert center(G).order == n


@given(st.integers(min_value=1, max_value=12), st.integers(min_value=1, max_value=12))
def test_product_order_multiplies(a, b):
    G = build_group({"family": "product",
                     "params": {"left": {"family": "cyclic", "params": {"n": a}},
                                "right": {"family": "dihedral", "params": {"n": b}}}})
    assert G.order == a * 2 * b
    for s in conjugacy_classes(G).sizes.tolist():
        assert G.order % s == 0


@given(st.integers(min_value=1, max_value=10))
def test_dihedral_center(n):
    G = build_group({"family": "dihedral", "params": {"n": n}})
    z = center(G).order
    if n <= 2:
        assert z == 2 * n       # abelian
    else:
        assert z == (2 if n % 2 == 0 else 1)
