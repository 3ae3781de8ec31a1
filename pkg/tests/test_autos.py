import itertools
import math

import pytest

from bipcayley.autos import (
    Automorphism,
    automorphism_from_generator_images,
    count_automorphisms,
    enumerate_automorphisms,
    example1_automorphism,
    example2_automorphism,
    fix_invert_decomposition,
    index2_subgroups,
    inversion_automorphism,
    is_exceptional_pair,
    prime_index_subgroups,
    prime_order_subgroups,
    stabilizing_automorphisms,
)
from bipcayley.bounds import iter_inverse_closed_subsets
from bipcayley.errors import AutCapExceeded, BadParameter
from bipcayley.groups import (
    bits_of,
    build_group,
    generated_subgroup,
    involution_subgroup,
)


def brute_force_automorphism_count(group):
    """Filter all vertex permutations for the homomorphism property."""
    count = 0
    elements = list(group.elements())
    for perm in itertools.permutations(elements[1:]):
        image = (0,) + perm
        ok = True
        for a in elements:
            if not ok:
                break
            for b in elements:
                if image[group.add(a, b)] != group.add(image[a], image[b]):
                    ok = False
                    break
        count += ok
    return count


def test_inversion_examples():
    g = build_group([2, 2, 2])
    assert inversion_automorphism(g).is_identity

    g = build_group([4, 2])
    iota = inversion_automorphism(g)
    assert iota(g.encode((1, 1))) == g.encode((3, 1))

    g = build_group([6])
    iota = inversion_automorphism(g)
    assert not iota.is_identity
    assert iota.compose(iota).is_identity
    assert iota.order() == 2


@pytest.mark.parametrize("orders,count", [
    ([6], 2),          # phi(6)
    ([4, 2], 8),
    ([2, 2, 2], 168),  # |GL_3(2)|
    ([2, 2], 6),
    ([3, 6], 48),      # C3^2 x C2, so |GL_2(3)|
])
def test_enumeration_counts(orders, count):
    g = build_group(orders)
    assert count_automorphisms(g) == count


@pytest.mark.parametrize("orders", [[6], [2, 2], [4, 2], [2, 2, 2]])
def test_enumeration_matches_brute_force(orders):
    g = build_group(orders)
    assert count_automorphisms(g) == brute_force_automorphism_count(g)


def test_enumeration_unique_and_homomorphic():
    g = build_group([4, 2])
    seen = set()
    for alpha in enumerate_automorphisms(g):
        assert alpha.image not in seen
        seen.add(alpha.image)
        for a in g.elements():
            for b in g.elements():
                assert alpha(g.add(a, b)) == g.add(alpha(a), alpha(b))
            assert g.element_order(alpha(a)) == g.element_order(a)


def test_enumeration_cap():
    g = build_group([2] * 7)
    with pytest.raises(AutCapExceeded):
        list(enumerate_automorphisms(g, cap=64))


def test_aut_order_bound(small_groups):
    for g in small_groups:
        n = g.size
        assert count_automorphisms(g) <= n ** math.floor(math.log2(n))


def test_stabilizing_automorphisms_examples():
    g = build_group([4, 2])
    a2 = involution_subgroup(g)
    assert len(list(stabilizing_automorphisms(g, a2))) == 8  # characteristic

    g6 = build_group([6])
    b = generated_subgroup(g6, [2])
    assert len(list(stabilizing_automorphisms(g6, b))) == 2

    g22 = build_group([2, 2])
    b = generated_subgroup(g22, [g22.encode((1, 0))])
    assert len(list(stabilizing_automorphisms(g22, b))) == 2
    assert count_automorphisms(g22) == 6


def test_index2_subgroups():
    g = build_group([6])
    subs = index2_subgroups(g)
    assert len(subs) == 1 and subs[0].order == 3

    g = build_group([4, 2])
    subs = index2_subgroups(g)
    assert len(subs) == 3
    assert sorted(s.invariant_factors() for s in subs) == [(2, 2), (4,), (4,)]

    g = build_group([2, 2, 2])
    assert len(index2_subgroups(g)) == 7

    assert index2_subgroups(build_group([3, 3])) == []


def test_prime_order_and_index_subgroups():
    g = build_group([6])
    po = prime_order_subgroups(g)
    assert sorted(s.order for s in po) == [2, 3]
    pi = prime_index_subgroups(g)
    assert sorted(s.index for s in pi) == [2, 3]

    g = build_group([4])
    assert len(prime_order_subgroups(g)) == 1

    g = build_group([2, 2])
    assert len(prime_order_subgroups(g)) == 3

    for g in (build_group([4, 2]), build_group([3, 6])):
        assert len(prime_order_subgroups(g)) <= g.size
        assert len(prime_index_subgroups(g)) <= g.size


def test_fix_invert_decomposition():
    g = build_group([4, 2])
    a2 = involution_subgroup(g)
    ident = Automorphism(g, tuple(range(g.size)))
    fid = fix_invert_decomposition(g, ident)
    assert fid.fixed.order == g.size
    assert fid.inverted.bits == a2.bits

    iota = inversion_automorphism(g)
    fid = fix_invert_decomposition(g, iota)
    assert fid.fixed.bits == a2.bits
    assert fid.inverted.order == g.size


def test_example1_fix_invert():
    group, sub, alpha = example1_automorphism(1)
    fid = fix_invert_decomposition(group, alpha)
    assert fid.fixed.order == 4 and fid.inverted.order == 4
    # T1 = <x*y1>, T-1 = <x>
    assert fid.fixed.bits == generated_subgroup(
        group, [group.encode((1, 1))]).bits
    assert fid.inverted.bits == generated_subgroup(
        group, [group.encode((1, 0))]).bits


@pytest.mark.parametrize("ell", [1, 2, 3])
def test_example1_invariants(ell):
    group, sub, alpha = example1_automorphism(ell)
    iota = inversion_automorphism(group)
    assert alpha.compose(alpha).is_identity
    assert not alpha.is_identity and alpha.image != iota.image
    assert alpha.stabilizes(sub)
    assert sub.index == 2
    for a in bits_of(sub.complement_bits()):
        pair = (1 << a) | (1 << group.neg(a))
        assert alpha.apply_to_set(pair) == pair


@pytest.mark.parametrize("ell", [0, 1, 2])
def test_example2_invariants(ell):
    group, sub, alpha = example2_automorphism(ell)
    iota = inversion_automorphism(group)
    assert alpha.compose(alpha).is_identity
    assert not alpha.is_identity and alpha.image != iota.image
    assert alpha.stabilizes(sub)
    assert sub.index == 2
    for a in bits_of(sub.complement_bits()):
        pair = (1 << a) | (1 << group.neg(a))
        assert alpha.apply_to_set(pair) == pair


def test_example2_inverts_x1x2():
    group, _, alpha = example2_automorphism(0)
    x1x2 = group.encode((1, 1))
    assert alpha(x1x2) == group.neg(x1x2)


@pytest.mark.parametrize("builder,ell", [(example1_automorphism, 3),
                                         (example2_automorphism, 1)])
def test_examples_fix_every_inverse_closed_set(builder, ell):
    group, sub, alpha = builder(ell)
    for bits in iter_inverse_closed_subsets(group, sub.complement_bits()):
        assert alpha.apply_to_set(bits) == bits


def test_example_bad_parameters():
    with pytest.raises(BadParameter):
        example1_automorphism(0)
    with pytest.raises(BadParameter):
        example2_automorphism(-1)


def test_is_exceptional_pair():
    g = build_group([4, 2])
    assert is_exceptional_pair(g, involution_subgroup(g))
    c4 = generated_subgroup(g, [g.encode((1, 0))])
    assert not is_exceptional_pair(g, c4)

    g6 = build_group([6])
    assert not is_exceptional_pair(g6, generated_subgroup(g6, [2]))

    g44 = build_group([4, 4])
    b = generated_subgroup(g44, [g44.encode((2, 0)), g44.encode((0, 1))])
    assert b.order == 8 and is_exceptional_pair(g44, b)

    ex1 = example1_automorphism(2)
    assert is_exceptional_pair(ex1[0], ex1[1])
    ex2 = example2_automorphism(1)
    assert is_exceptional_pair(ex2[0], ex2[1])


def test_two_aut_orbits_on_index2_subgroups():
    """The exceptional-family groups have exactly two orbits of index-2
    subgroups (checked empirically at small rank)."""
    for orders, expected in ([(4, 2), 2], [(4, 2, 2), 2],
                             [(4, 4), 1], [(4, 4, 2), 2]):
        group = build_group(list(orders))
        subs = index2_subgroups(group)
        auts = list(enumerate_automorphisms(group))
        seen = set()
        orbits = 0
        for s in subs:
            if s.bits in seen:
                continue
            orbits += 1
            orbit = {s.bits}
            frontier = [s.bits]
            while frontier:
                nxt = []
                for bts in frontier:
                    for alpha in auts:
                        im = alpha.apply_to_set(bts)
                        if im not in orbit:
                            orbit.add(im)
                            nxt.append(im)
                frontier = nxt
            seen |= orbit
        assert orbits == expected


def test_automorphism_from_generator_images_validation():
    g = build_group([4, 2])
    with pytest.raises(BadParameter):
        automorphism_from_generator_images(g, [g.encode((1, 0))])
    with pytest.raises(BadParameter):
        # x -> order-2 element cannot be a bijection on C4 x C2
        automorphism_from_generator_images(
            g, [g.encode((2, 0)), g.encode((0, 1))])
