import itertools

import pytest

from weylcorr.coxeter import (
    Subgroup,
    compose,
    cycle_string,
    enumerate_homomorphisms,
    enumerate_subgroups,
    generated_subgroup,
    identity_perm,
    inverse,
    inversions,
    is_irreducible,
    is_normal,
    longest_element,
    make_involution_product,
    make_symmetric_group,
    relations_hold,
    transposition,
    trivial_subgroup,
    whole_group,
)
from weylcorr.errors import DomainError, SizeError, UnsupportedError


def subgroups_by_subsets(W):
    """Oracle: every subset containing the identity that is closed under products."""
    elems = W.elements
    e = W.identity
    others = [g for g in elems if g != e]
    found = set()
    for k in range(len(others) + 1):
        for extra in itertools.combinations(others, k):
            s = {e, *extra}
            if all(compose(a, b) in s for a in s for b in s):
                found.add(frozenset(s))
    return found


def subgroups_by_pairs(W):
    """Oracle for 2-generated groups (true of every subgroup of S_4)."""
    def close(gens):
        s = {W.identity}
        while True:
            new = {compose(a, g) for a in s for g in gens} | s
            if new == s:
                return frozenset(s)
            s = new

    return {close([a, b]) for a in W.elements for b in W.elements}


def homs_by_brute_force(W1, W2, pin=None, injective_only=False):
    """Oracle: all maps W1 -> W2 (as tables) that respect every product."""
    results = []
    for images in itertools.product(W2.elements, repeat=len(W1)):
        f = dict(zip(W1.elements, images))
        if all(f[compose(a, b)] == compose(f[a], f[b]) for a in W1.elements for b in W1.elements):
            if pin is not None and f[pin[0]] != pin[1]:
                continue
            if injective_only and len(set(images)) != len(images):
                continue
            results.append(f)
    return results


def homs_by_generator_pairs(W1, W2, pin):
    """Oracle for (Z/2)^2 sources: f(w1^i w2^j) = a^i b^j for all pairs (a, b)."""
    w1, w2 = W1.generators
    out = []
    for a, b in itertools.product(W2.elements, repeat=2):
        f = {}
        for i, j in itertools.product((0, 1), repeat=2):
            x = compose(w1 if i else W1.identity, w2 if j else W1.identity)
            y = compose(a if i else W2.identity, b if j else W2.identity)
            f[x] = y
        if all(f[compose(x, y)] == compose(f[x], f[y]) for x in f for y in f) and f[pin[0]] == pin[1]:
            out.append(f)
    return out


@pytest.mark.parametrize("n", range(1, 7))
def test_symmetric_group_is_all_permutations(n):
    W = make_symmetric_group(n)
    assert set(W.elements) == set(itertools.permutations(range(n)))
    assert W.rank == n - 1
    assert relations_hold(W)


def test_symmetric_group_examples():
    assert len(make_symmetric_group(1)) == 1
    S3 = make_symmetric_group(3)
    assert len(S3) == 6 and len(S3.generators) == 2 and S3.coxeter_matrix[0][1] == 3
    assert len(make_symmetric_group(4)) == 24


def test_symmetric_group_caps():
    with pytest.raises(SizeError):
        make_symmetric_group(9)
    with pytest.raises(DomainError):
        make_symmetric_group(0)


def test_involution_product_examples():
    Z1 = make_involution_product(1)
    assert len(Z1) == 2 and Z1.flip == Z1.generators[0]
    Z2 = make_involution_product(2)
    assert len(Z2) == 4
    assert Z2.flip == compose(*Z2.generators)
    Z3 = make_involution_product(3)
    assert len(Z3) == 8
    assert all(compose(g, g) == Z3.identity for g in Z3.elements)
    assert relations_hold(Z3)
    with pytest.raises(SizeError):
        make_involution_product(11)


def test_elements_closed_under_products_and_inverses():
    for W in (make_symmetric_group(4), make_involution_product(3)):
        s = set(W.elements)
        assert W.identity in s
        assert all(compose(a, b) in s for a in s for b in s)
        assert all(inverse(a) in s for a in s)


def test_longest_element_examples():
    assert longest_element(make_symmetric_group(2)) == (1, 0)
    assert cycle_string(longest_element(make_symmetric_group(3))) == "(1 3)"
    S4 = make_symmetric_group(4)
    by_argmax = max(S4.elements, key=inversions)
    assert longest_element(S4) == by_argmax == (3, 2, 1, 0)
    assert sum(1 for g in S4.elements if inversions(g) == inversions(by_argmax)) == 1


@pytest.mark.parametrize("n", range(2, 7))
def test_longest_element_is_diagram_automorphism(n):
    W = make_symmetric_group(n)
    w0 = longest_element(W)
    assert compose(w0, w0) == identity_perm(n)
    for i, s in enumerate(W.generators):
        assert compose(compose(w0, s), inverse(w0)) == W.generators[n - 2 - i]


def test_longest_element_rejects_other_types():
    with pytest.raises(UnsupportedError):
        longest_element(make_involution_product(2))


@pytest.mark.parametrize(
    "W,count",
    [(make_symmetric_group(2), 2), (make_symmetric_group(3), 6), (make_involution_product(2), 5)],
)
def test_subgroup_counts_against_subset_oracle(W, count):
    subs = enumerate_subgroups(W)
    assert len(subs) == count
    assert {frozenset(V.elements) for V in subs} == subgroups_by_subsets(W)


def test_subgroups_of_s4_against_pair_oracle():
    W = make_symmetric_group(4)
    subs = enumerate_subgroups(W)
    assert {frozenset(V.elements) for V in subs} == subgroups_by_pairs(W)
    assert len(subs) == 30


def test_subgroup_order_is_canonical():
    subs = enumerate_subgroups(make_symmetric_group(4))
    keys = [(len(V), V.members) for V in subs]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)
    assert len(subs[0]) == 1 and len(subs[-1]) == 24
    assert all(V.is_closed_under_products() for V in subs)


def test_subgroup_search_cap():
    # (Z/2)^10 has 1024 elements: at the cap, so it would run; build a fake oversize check instead
    import weylcorr.coxeter as cox

    W = make_involution_product(3)
    old = cox.MAX_SUBGROUP_SEARCH
    cox.MAX_SUBGROUP_SEARCH = 4
    try:
        with pytest.raises(SizeError):
            enumerate_subgroups(W)
    finally:
        cox.MAX_SUBGROUP_SEARCH = old


def test_homomorphisms_injective_s4_to_s3_empty():
    assert enumerate_homomorphisms(make_symmetric_group(4), make_symmetric_group(3), injective_only=True) == []


def test_klein_to_s3_pinned_flip():
    Z, S3 = make_involution_product(2), make_symmetric_group(3)
    pin = (Z.flip, longest_element(S3))
    homs = enumerate_homomorphisms(Z, S3, pin=pin)
    oracle = homs_by_generator_pairs(Z, S3, pin)
    assert len(homs) == len(oracle) == 2
    assert {tuple(h(g) for g in Z.elements) for h in homs} == {tuple(f[g] for g in Z.elements) for f in oracle}
    kernels = {frozenset(Z.label(g) for g in h.kernel.elements) for h in homs}
    assert kernels == {frozenset({"id", "w1"}), frozenset({"id", "w2"})}


def test_s3_pinned_automorphisms():
    S3 = make_symmetric_group(3)
    pin = ((2, 1, 0), (2, 1, 0))
    homs = enumerate_homomorphisms(S3, S3, pin=pin, injective_only=True)
    oracle = homs_by_brute_force(S3, S3, pin=pin, injective_only=True)
    assert len(homs) == len(oracle) == 2


@pytest.mark.parametrize("src,tgt", [(3, 2), (3, 3), (2, 3)])
def test_all_homomorphisms_match_brute_force(src, tgt):
    W1, W2 = make_symmetric_group(src), make_symmetric_group(tgt)
    homs = enumerate_homomorphisms(W1, W2)
    oracle = homs_by_brute_force(W1, W2)
    assert {tuple(h(g) for g in W1.elements) for h in homs} == {
        tuple(f[g] for g in W1.elements) for f in oracle
    }


@pytest.mark.parametrize(
    "W1,W2",
    [
        (make_symmetric_group(4), make_symmetric_group(3)),
        (make_symmetric_group(3), make_symmetric_group(4)),
        (make_involution_product(2), make_symmetric_group(4)),
        (make_involution_product(3), make_symmetric_group(3)),
    ],
)
def test_homomorphism_properties(W1, W2):
    homs = enumerate_homomorphisms(W1, W2)
    trivial = tuple([W2.identity_index] * len(W1))
    assert trivial in {h.images for h in homs}
    for h in homs:
        assert is_normal(h.kernel, W1)
        assert h.images[W1.identity_index] == W2.identity_index
        for a, b in itertools.product(W1.elements, repeat=2):
            assert h(compose(a, b)) == compose(h(a), h(b))
    assert [h.images for h in homs] == sorted(h.images for h in homs)


def test_homomorphism_search_cap():
    with pytest.raises(SizeError):
        enumerate_homomorphisms(make_symmetric_group(8), make_symmetric_group(8))


def test_is_irreducible():
    assert is_irreducible(make_symmetric_group(3))
    assert not is_irreducible(make_involution_product(2))
    assert is_irreducible(make_symmetric_group(4))
    assert not is_irreducible(make_symmetric_group(1))


def test_is_normal_examples():
    S3 = make_symmetric_group(3)
    assert is_normal(trivial_subgroup(S3), S3)
    assert is_normal(whole_group(S3), S3)
    assert not is_normal(generated_subgroup(S3, [transposition(3, 0, 1)]), S3)
    assert is_normal(generated_subgroup(S3, [(1, 2, 0)]), S3)


def test_is_normal_domain_errors():
    S3, S4 = make_symmetric_group(3), make_symmetric_group(4)
    with pytest.raises(DomainError):
        is_normal(trivial_subgroup(S4), S3)
    with pytest.raises(DomainError):
        is_normal(Subgroup(S3, (S3.identity_index, S3.index((1, 0, 2)), S3.index((0, 2, 1)))), S3)


def test_labels_and_cycles():
    Z = make_involution_product(2)
    assert Z.label(Z.flip) == "w1w2"
    assert Z.label(Z.identity) == "id"
    assert cycle_string((1, 2, 0)) == "(1 2 3)"
    assert cycle_string((0, 1)) == "()"
