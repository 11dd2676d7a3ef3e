import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weylcorr import building
from weylcorr.coxeter import (
    Subgroup,
    compose,
    enumerate_subgroups,
    generated_subgroup,
    make_involution_product,
    trivial_subgroup,
    whole_group,
)
from weylcorr.errors import DomainError, SizeError, StructuralError
from weylcorr.galois import (
    PairAction,
    Partition,
    UnionFind,
    audit_correspondence,
    check_adjunction,
    close_quotient,
    close_subgroup,
    enumerate_closed,
    finest_invariant_quotient,
    hasse_edges,
    partition_join,
    partition_leq,
    partition_meet,
    product_pair_action,
    product_projection,
    sample_partitions,
    stabilizer_subgroup,
)


def all_partitions(size):
    """Oracle: every set partition of range(size) as a label list (restricted growth strings)."""
    def grow(prefix, top):
        if len(prefix) == size:
            yield Partition.from_labels(prefix)
            return
        for b in range(top + 2):
            yield from grow(prefix + [b], max(top, b))

    return list(grow([], -1)) if size else [Partition(())]


def stabilizer_oracle(A, p):
    """W_p straight from the definition, one pair at a time."""
    keep = []
    for g, w in enumerate(A.group.elements):
        ok = True
        for d, (x, _) in enumerate(A.domain):
            x2 = A.domain[int(A.action_table[g, d])][0]
            if p.block_id[x2] != p.block_id[x]:
                ok = False
                break
        if ok:
            keep.append(g)
    return Subgroup(A.group, tuple(keep))


def finest_oracle(A, V):
    """p^V as the finest partition whose stabilizer contains V, by exhaustive search."""
    candidates = [p for p in all_partitions(A.num_points) if V.issubset(stabilizer_oracle(A, p))]
    finest = [p for p in candidates if all(partition_leq(c, p) for c in candidates)]
    assert len(finest) == 1
    return finest[0]


def small_actions():
    return [
        ("product 2x2", product_pair_action(2, 2)),
        ("product 2x3", product_pair_action(2, 3)),
        ("flag n=2 q=2", building.opposite_pair_action(2, 2)),
        ("flag n=2 q=3", building.opposite_pair_action(2, 3)),
    ]


def test_bell_numbers():
    assert [len(all_partitions(k)) for k in range(6)] == [1, 1, 2, 5, 15, 52]


def test_partition_canonical_labels():
    assert Partition.from_labels("bab") == Partition((0, 1, 0))
    assert Partition.from_blocks([[2], [0, 1]], 3).block_id == (0, 0, 1)
    assert Partition.one_block(3).num_blocks == 1
    assert Partition.discrete(4).num_blocks == 4
    assert Partition.from_labels([5, 5, 7]).blocks() == [[0, 1], [2]]
    with pytest.raises(DomainError):
        Partition.from_blocks([[0]], 2)


def test_partition_order_examples():
    one, disc = Partition.one_block(4), Partition.discrete(4)
    p = Partition((0, 0, 1, 1))
    assert partition_leq(one, p) and partition_leq(p, disc)
    assert not partition_leq(disc, p)
    assert partition_meet(p, Partition((0, 1, 1, 2))) == one
    assert partition_join(p, Partition((0, 1, 0, 1))) == disc
    with pytest.raises(DomainError):
        partition_leq(Partition.one_block(2), one)


def test_meet_join_against_brute_force():
    parts = all_partitions(4)
    for a, b in itertools.product(parts, repeat=2):
        lower = [c for c in parts if partition_leq(c, a) and partition_leq(c, b)]
        upper = [c for c in parts if partition_leq(a, c) and partition_leq(b, c)]
        glb = [c for c in lower if all(partition_leq(d, c) for d in lower)]
        lub = [c for c in upper if all(partition_leq(c, d) for d in upper)]
        assert [partition_meet(a, b)] == glb
        assert [partition_join(a, b)] == lub


labelings = st.integers(1, 7).flatmap(lambda n: st.tuples(
    st.lists(st.integers(0, 3), min_size=n, max_size=n),
    st.lists(st.integers(0, 3), min_size=n, max_size=n),
    st.lists(st.integers(0, 3), min_size=n, max_size=n),
))


@settings(max_examples=200, deadline=None)
@given(labelings)
def test_partition_lattice_laws(data):
    a, b, c = (Partition.from_labels(x) for x in data)
    assert partition_meet(a, b) == partition_meet(b, a)
    assert partition_join(a, b) == partition_join(b, a)
    assert partition_meet(a, partition_meet(b, c)) == partition_meet(partition_meet(a, b), c)
    assert partition_join(a, partition_join(b, c)) == partition_join(partition_join(a, b), c)
    assert partition_meet(a, partition_join(a, b)) == a
    assert partition_join(a, partition_meet(a, b)) == a
    assert partition_leq(a, b) == (partition_meet(a, b) == a)


def test_union_find():
    uf = UnionFind(5)
    assert uf.union(0, 3) and uf.union(3, 4)
    assert not uf.union(0, 4)
    assert uf.find(4) == uf.find(0)
    assert Partition.from_labels(uf.labels()) == Partition((0, 1, 2, 0, 0))


@pytest.mark.parametrize("name,A", small_actions())
def test_stabilizer_against_definition(name, A):
    for p in all_partitions(A.num_points):
        assert stabilizer_subgroup(A, p) == stabilizer_oracle(A, p)


@pytest.mark.parametrize("name,A", small_actions())
def test_finest_invariant_quotient_against_search(name, A):
    for V in enumerate_subgroups(A.group):
        assert finest_invariant_quotient(A, V) == finest_oracle(A, V)


@pytest.mark.parametrize("name,A", small_actions())
def test_adjunction_exhaustive(name, A):
    parts = all_partitions(A.num_points)
    audit = audit_correspondence(A, parts)
    assert audit.ok, audit
    for V in enumerate_subgroups(A.group):
        for p in parts:
            assert check_adjunction(A, V, p)
            assert V.issubset(stabilizer_oracle(A, p)) == partition_leq(p, finest_oracle(A, V))


def test_trivial_and_whole():
    A = building.opposite_pair_action(3, 2)
    W = A.group
    assert finest_invariant_quotient(A, trivial_subgroup(W)) == Partition.discrete(21)
    assert finest_invariant_quotient(A, whole_group(W)) == Partition.one_block(21)
    assert stabilizer_subgroup(A, Partition.one_block(21)) == whole_group(W)
    assert stabilizer_subgroup(A, Partition.discrete(21)) == trivial_subgroup(W)


def test_flag_line_quotient_example():
    A = building.opposite_pair_action(3, 2)
    V = generated_subgroup(A.group, [(1, 0, 2)])
    pV = finest_invariant_quotient(A, V)
    assert pV.num_blocks == 7
    assert all(len(b) == 3 for b in pV.blocks())
    # chambers with the same plane collapse
    assert pV == building.partial_flag_quotient(3, 2, [2])
    assert stabilizer_subgroup(A, pV) == V


def test_product_example():
    A = product_pair_action(3, 4)
    lat = enumerate_closed(A)
    expected = [Partition.one_block(12), product_projection(3, 4, 1),
                product_projection(3, 4, 2), Partition.discrete(12)]
    assert sorted(lat.closed_quotients, key=Partition.sort_key) == sorted(expected, key=Partition.sort_key)
    W = A.group
    flip = generated_subgroup(W, [W.flip])
    assert close_subgroup(A, flip) == whole_group(W)
    assert finest_invariant_quotient(A, flip) == Partition.one_block(12)
    assert stabilizer_subgroup(A, product_projection(3, 4, 1)).members != flip.members


def test_product_points_and_table():
    A = product_pair_action(2, 3)
    W = A.group
    w1, w2 = W.generators
    for d, (x, y) in enumerate(A.domain):
        (a, b), (a2, b2) = divmod(x, 3), divmod(y, 3)
        assert A.domain[A.action_table[W.index(w1), d]] == (a2 * 3 + b, a * 3 + b2)
        assert A.domain[A.action_table[W.index(w2), d]] == (a * 3 + b2, a2 * 3 + b)


def test_product_caps():
    with pytest.raises(DomainError):
        product_pair_action(0, 3)
    with pytest.raises(SizeError):
        product_pair_action(17, 17)
    with pytest.raises(DomainError):
        product_projection(2, 2, 3)


def test_pair_action_rejects_broken_table():
    W = make_involution_product(1)
    domain = ((0, 1), (1, 0))
    good = np.array([[0, 1], [1, 0]])
    PairAction(2, domain, W, good)
    with pytest.raises(StructuralError):
        PairAction(2, domain, W, np.array([[0, 1], [0, 0]]))
    with pytest.raises(StructuralError):
        PairAction(2, domain, W, np.array([[1, 0], [1, 0]]))
    with pytest.raises(StructuralError):
        PairAction(2, domain, W, np.array([[0, 1]]))


@pytest.mark.parametrize("n,count", [(2, 2), (3, 4), (4, 8)])
def test_closed_lattice_flag(n, count):
    A = building.opposite_pair_action(n, 2)
    lat = enumerate_closed(A)
    assert len(lat.closed_subgroups) == len(lat.closed_quotients) == count
    assert lat.is_sublattice()
    assert lat.exchanges_meets_and_joins()
    for V, k in zip(lat.closed_subgroups, lat.pairing):
        assert close_subgroup(A, V) == V
        assert close_quotient(A, lat.closed_quotients[k]) == lat.closed_quotients[k]
        assert finest_invariant_quotient(A, V) == lat.closed_quotients[k]


def test_hasse_edges_chain_and_square():
    assert hasse_edges([1, 2, 3], lambda a, b: a <= b) == [(0, 1), (1, 2)]
    sets = [frozenset(), frozenset({1}), frozenset({2}), frozenset({1, 2})]
    assert sorted(hasse_edges(sets, frozenset.issubset)) == [(0, 1), (0, 2), (1, 3), (2, 3)]


def test_sample_partitions_reproducible():
    structured = [product_projection(3, 4, 1)]
    a = sample_partitions(12, 30, seed=5, structured=structured)
    assert a == sample_partitions(12, 30, seed=5, structured=structured)
    assert a != sample_partitions(12, 30, seed=6, structured=structured)
    assert all(p.size == 12 for p in a)
    assert all(partition_leq(p, structured[0]) for p in a[1::2])


point_labels = st.lists(st.integers(0, 4), min_size=6, max_size=6)


@settings(max_examples=150, deadline=None)
@given(point_labels, st.integers(0, 4))
def test_galois_laws_product(labels, which):
    A = product_pair_action(2, 3)
    V = enumerate_subgroups(A.group)[which]
    p = Partition.from_labels(labels)
    Wp, pV = stabilizer_subgroup(A, p), finest_invariant_quotient(A, V)
    assert V.issubset(Wp) == partition_leq(p, pV)
    cl = close_quotient(A, p)
    assert partition_leq(p, cl)
    assert close_quotient(A, cl) == cl
    assert stabilizer_subgroup(A, cl) == Wp


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 5), min_size=21, max_size=21), st.integers(0, 5))
def test_galois_laws_flag(labels, which):
    A = building.opposite_pair_action(3, 2)
    V = enumerate_subgroups(A.group)[which]
    p = Partition.from_labels(labels)
    Wp, pV = stabilizer_subgroup(A, p), finest_invariant_quotient(A, V)
    assert V.issubset(Wp) == partition_leq(p, pV)
    clV = close_subgroup(A, V)
    assert V.issubset(clV) and close_subgroup(A, clV) == clV
    assert partition_leq(p, close_quotient(A, p))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=21, max_size=21), st.lists(st.integers(0, 3), min_size=21, max_size=21))
def test_quotient_closure_monotone(l1, l2):
    A = building.opposite_pair_action(3, 2)
    p1 = Partition.from_labels(l1)
    p2 = partition_meet(p1, Partition.from_labels(l2))
    assert partition_leq(p2, p1)
    assert partition_leq(close_quotient(A, p2), close_quotient(A, p1))
    assert stabilizer_subgroup(A, p1).issubset(stabilizer_subgroup(A, p2))


def test_subgroup_closure_is_group():
    A = product_pair_action(2, 2)
    for V in enumerate_subgroups(A.group):
        cl = close_subgroup(A, V)
        elems = set(cl.elements)
        assert all(compose(a, b) in elems for a in elems for b in elems)
