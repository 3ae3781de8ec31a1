import math
from fractions import Fraction

import pytest

from bipcayley.autos import (
    index2_subgroups,
    inversion_automorphism,
    prime_index_subgroups,
    prime_order_subgroups,
)
from bipcayley.bounds import (
    Bound,
    bounds_suite,
    brute_count_inverse_closed,
    ceil_exponent,
    count_inverse_closed,
    count_product_triples,
    inverse_closed_count_report,
    iter_inverse_closed_subsets,
    lemma_bound,
    log2_dyadic_interval,
    logsq_below,
    prelim_facts_check,
    theorem_lower_bound,
    threshold_scan,
    _threshold_inequality_holds,
)
from bipcayley.errors import HypothesisViolated
from bipcayley.groups import (
    bits_of,
    build_group,
    coset_decompose,
    factor_multisets,
    generated_subgroup,
    involution_subgroup,
)


def test_count_inverse_closed_examples():
    g = build_group([4, 2])
    a2 = involution_subgroup(g)
    assert count_inverse_closed(g, a2) == 4
    rep = inverse_closed_count_report(g, a2)
    assert rep["a2_contained_in_b"] and rep["case"] == "2^(|A|/4)"

    g = build_group([2, 2, 2, 2])
    b = index2_subgroups(g)[0]
    assert count_inverse_closed(g, b) == 2 ** (g.size // 2)  # exponent 2

    g = build_group([2, 4])
    b = [s for s in index2_subgroups(g) if s.invariant_factors() == (4,)][0]
    assert count_inverse_closed(g, b) == 8


def test_count_formula_matches_brute_force_small():
    for n in range(2, 13, 2):
        for orders in factor_multisets(n):
            g = build_group(list(orders))
            for b in index2_subgroups(g):
                assert count_inverse_closed(g, b) == \
                    brute_count_inverse_closed(g, b)


def test_iter_inverse_closed_subsets_complete():
    g = build_group([2, 4])
    for b in index2_subgroups(g):
        seen = set(iter_inverse_closed_subsets(g, b.complement_bits()))
        assert len(seen) == count_inverse_closed(g, b)
        for bits in seen:
            assert g.negate_set(bits) == bits
            assert bits & b.bits == 0


def test_alpha_invariant_lemma():
    g = build_group([6])
    b = generated_subgroup(g, [2])
    iota = inversion_automorphism(g)
    rep = lemma_bound("alpha-invariant", g, b, alpha=iota)
    assert rep.exact == 4          # orbits {1,5} and {3} outside B
    assert abs(rep.bound.log2_float() - 2.25) < 1e-12
    assert rep.holds
    # oracle: enumerate all subsets of A \ B fixed by iota
    outside = [1, 3, 5]
    fixed = 0
    for mask in range(8):
        bits = sum(1 << outside[i] for i in range(3) if (mask >> i) & 1)
        if iota.apply_to_set(bits) == bits:
            fixed += 1
    assert fixed == rep.exact


def test_alpha_invariant_hypotheses():
    g = build_group([6])
    b = generated_subgroup(g, [2])
    from bipcayley.autos import identity_automorphism
    with pytest.raises(HypothesisViolated):
        lemma_bound("alpha-invariant", g, b, alpha=identity_automorphism(g))


def test_a1_directed_lemma():
    g = build_group([6])
    b = generated_subgroup(g, [2])
    rep = lemma_bound("A1-directed", g, b)
    assert rep.exact == 2          # the empty set and {3}
    assert rep.holds
    # oracle: direct enumeration over all subsets of A \ B
    count = 0
    for mask in range(8):
        bits = sum(1 << [1, 3, 5][i] for i in range(3) if (mask >> i) & 1)
        span = generated_subgroup(g, list(bits_of(bits)))
        count += span.order < g.size
    assert count == rep.exact


def test_hk_cosets_lemma_exact_formula():
    g = build_group([6])
    b = generated_subgroup(g, [2])
    h = generated_subgroup(g, [2])   # order 3, inside B
    rep = lemma_bound("HK-cosets", g, b, small=h, big=h)
    assert rep.exact == 2 and rep.holds
    # oracle: enumerate subsets of A \ B whose part outside K is H-cosets
    count = 0
    for mask in range(8):
        bits = sum(1 << [1, 3, 5][i] for i in range(3) if (mask >> i) & 1)
        if coset_decompose(g, h, bits & ~h.bits):
            count += 1
    assert count == rep.exact


def test_hk_undirected_requires_non_two_group():
    g = build_group([4, 2])
    b = involution_subgroup(g)
    h = prime_order_subgroups(g)[0]
    k = prime_index_subgroups(g)[0]
    if h.bits & ~k.bits or h.bits & ~b.bits:
        pytest.skip("pair not admissible for this enumeration order")
    with pytest.raises(HypothesisViolated):
        lemma_bound("HK-undirected", g, b, small=h, big=k)


def test_triples_lemma():
    g = build_group([6])
    b = generated_subgroup(g, [2])
    rep = lemma_bound("triples", g, b)
    # only the empty product set arises from the C6 x 1 decomposition
    assert rep.exact == 1
    assert rep.holds
    assert count_product_triples(g, b) == 1

    g = build_group([4, 2])
    b = generated_subgroup(g, [g.encode((1, 0))])
    rep = lemma_bound("triples", g, b)
    assert rep.exact >= 1 and rep.holds


def test_theorem_lower_bounds():
    g8 = build_group([8])
    b8 = index2_subgroups(g8)[0]
    assert theorem_lower_bound("directed", g8, b8) < 0   # vacuous at |A|=8

    g1024 = build_group([2] * 10)
    b1024 = index2_subgroups(g1024)[0]
    v = theorem_lower_bound("directed", g1024, b1024)
    assert v > 0
    # conservative rounding: value is at most the float estimate
    float_est = 2.0 ** 512 - 3 * 2.0 ** (384 + math.log2(1024) ** 2)
    assert v <= float_est

    g6 = build_group([6])
    b6 = index2_subgroups(g6)[0]
    v = theorem_lower_bound("undirected", g6, b6)
    assert v == count_inverse_closed(g6, b6) - (1 << ceil_exponent(
        Fraction(11 * 6, 48) + Fraction(1, 2) + 2, 6, 1))


def test_threshold_scan_values():
    assert not _threshold_inequality_holds("directed", 100)
    directed = threshold_scan("directed")
    assert directed.paper_value == 744
    assert directed.computed_value == 744
    assert directed.largest_failing == 742

    undirected = threshold_scan("undirected", scan_limit=9000)
    assert undirected.paper_value == 8214
    assert undirected.computed_value == 8214


def test_prelim_facts():
    g = build_group([2, 2, 2])
    reports = {r.name: r for r in prelim_facts_check(g)}
    assert reports["aut-order"].exact == 168
    assert reports["aut-order"].holds          # 168 <= 8^3
    assert reports["prime-order-count"].exact == 7
    assert reports["prime-index-count"].holds
    assert reports["z-minus-y"].holds

    g6 = build_group([6])
    reports = {r.name: r for r in prelim_facts_check(g6)}
    assert reports["prime-order-count"].exact == 2
    assert reports["prime-order-count"].holds

    g42 = build_group([4, 2])
    reports = {r.name: r for r in prelim_facts_check(g42)}
    assert reports["z-minus-y"].exact == 2     # |Z \ Y| in {0, 2} <= |A|/4
    assert reports["z-minus-y"].holds


def test_bound_exact_comparisons():
    b = Bound(1, 6, 0, Fraction(9, 4))        # 2^2.25
    assert b.admits(4)
    assert not b.admits(5)                    # 5^4 = 625 > 2^9 = 512
    b = Bound(3, 6, 1, Fraction(1, 2))        # 3 * 6 * sqrt(2) ~ 25.45
    assert b.admits(25)
    assert not b.admits(26)
    b = Bound(1, 6, 0, Fraction(0), 1)        # 2^(log2 6)^2 ~ 102.75
    assert b.admits(102)
    assert not b.admits(103)


def test_log2_interval_and_ceil():
    lo, hi = log2_dyadic_interval(6, 16)
    assert float(lo) <= math.log2(6) <= float(hi)
    assert hi - lo == Fraction(1, 1 << 16)
    lo, hi = log2_dyadic_interval(8, 10)
    assert lo == hi == 3
    assert ceil_exponent(Fraction(1, 2), 8, 1) == 10   # 0.5 + 9
    assert ceil_exponent(Fraction(0), 6, 1) == 7       # (log2 6)^2 = 6.68...
    assert logsq_below(6, Fraction(7))
    assert not logsq_below(6, Fraction(6))


def test_theorem_bound_below_exhaustive_drr_count():
    from bipcayley.cayley import build_cayley, connection_set
    from bipcayley.stabilizer import vertex_stabilizer
    from bipcayley.survey import iter_admissible_sets
    for orders in ([6], [2, 4], [10], [2, 6]):
        g = build_group(orders)
        for b in index2_subgroups(g):
            drr = sum(
                vertex_stabilizer(
                    build_cayley(g, connection_set(g, m))).cayley_index == 1
                for m in iter_admissible_sets(g, b, "directed"))
            assert theorem_lower_bound("directed", g, b) <= drr


def test_bounds_suite_all_hold():
    for orders in ([6], [4, 2], [2, 2, 2], [3, 6]):
        g = build_group(orders)
        for b in index2_subgroups(g):
            for rep in bounds_suite(g, b):
                assert rep.holds is not False, (orders, rep.name)
