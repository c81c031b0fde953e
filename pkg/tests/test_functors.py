import numpy as np
import pytest

from framecat.bits import has_bit, iter_bits, mask_of
from framecat.corpus import (chain_frame, empty_category, monoid_category,
                             parity_pair_groupoid)
from framecat.duality import validate_rqf_morphism
from framecat.functors import (c_morphism, c_object,
                               filter_plus, filter_product, filter_star,
                               identity_space_vs_pt, omega_morphism,
                               omega_object)
from framecat.order import enumerate_cp_filters, frame_from_leq, subframe
from framecat.quantale import (frame_as_quantale, partial_isometries,
                               validate_rqf)
from framecat.reports import BoundExceeded
from framecat.topcat import (identity_functor, is_etale, validate_category,
                             validate_covering_functor, validate_topcategory)


def principal_filter_at(calc, element):
    for k, f in enumerate(calc.filters):
        if f.members == calc.upset[element]:
            return k
    raise AssertionError("no principal filter at that element")


# ---------------------------------------------------------------------------
# omega on objects

def test_omega_of_pair2_is_the_16_element_relation_quantale(omega_pair2):
    assert omega_pair2.n == 16
    assert validate_rqf(omega_pair2.rqf).ok
    assert len(partial_isometries(omega_pair2.rqf)) == 7


def test_omega_of_pair3_counts(omega_pair3):
    assert omega_pair3.n == 512
    assert len(partial_isometries(omega_pair3.rqf)) == 34


def test_omega_of_two_element_monoid():
    om = omega_object(monoid_category([[0, 1], [1, 1]]))
    assert om.n == 4
    assert validate_rqf(om.rqf).ok


def test_omega_of_empty_category_is_degenerate():
    om = omega_object(empty_category())
    assert om.n == 1
    assert om.rqf.bottom == om.rqf.top == om.rqf.unit
    assert validate_rqf(om.rqf).ok


def test_omega_mul_matches_pointwise_products(omega_pair2, pair2):
    om = omega_pair2
    cat = pair2.cat
    for i, u in enumerate(om.opens[:16]):
        for j, v in enumerate(om.opens[:16]):
            expected = 0
            for a in iter_bits(u):
                for b in iter_bits(v):
                    if cat.comp[a, b] >= 0:
                        expected |= 1 << int(cat.comp[a, b])
            assert om.opens[int(om.rqf.mul[i, j])] == expected


def test_omega_of_nondiscrete_parity_topology():
    om = omega_object(parity_pair_groupoid())
    assert om.n == 4
    assert validate_rqf(om.rqf).ok
    swap = om.index[0b0110]
    assert int(om.rqf.mul[swap, swap]) == om.index[0b1001]


def test_omega_rejects_non_etale_input():
    from framecat.corpus import indiscrete_pair_groupoid
    with pytest.raises(ValueError):
        omega_object(indiscrete_pair_groupoid())


def test_omega_respects_element_bound(pair3):
    with pytest.raises(BoundExceeded):
        omega_object(pair3, max_elements=100)


# ---------------------------------------------------------------------------
# omega on morphisms

def test_omega_of_identity_is_identity(pair2, omega_pair2):
    m = omega_morphism(identity_functor(pair2.cat), omega_pair2, omega_pair2)
    assert np.array_equal(m, np.arange(16))


def test_omega_of_swap_is_an_involution(pair2, omega_pair2):
    swap = np.array([3, 2, 1, 0], dtype=np.int64)
    m = omega_morphism(swap, omega_pair2, omega_pair2)
    assert validate_rqf_morphism(m, omega_pair2.rqf, omega_pair2.rqf).ok
    assert not np.array_equal(m, np.arange(16))
    assert np.array_equal(m[m], np.arange(16))


def test_omega_contravariant_composition(pair2, omega_pair2):
    swap = np.array([3, 2, 1, 0], dtype=np.int64)
    ident = identity_functor(pair2.cat)
    for f in (swap, ident):
        for g in (swap, ident):
            comp = f[g]  # f after g
            lhs = omega_morphism(comp, omega_pair2, omega_pair2)
            rhs = omega_morphism(g, omega_pair2, omega_pair2)[
                omega_morphism(f, omega_pair2, omega_pair2)]
            assert np.array_equal(lhs, rhs)


# ---------------------------------------------------------------------------
# the filter calculus

def test_identity_filter_is_fixed_by_star(fc_pair2):
    calc = fc_pair2.calc
    for f in calc.filters:
        if calc.is_identity_filter(f.members):
            assert filter_star(calc, f) == f
            assert filter_plus(calc, f) == f


def test_filter_star_on_principal_filters(fc_pair2):
    calc = fc_pair2.calc
    f01 = principal_filter_at(calc, 1 << 1)   # singleton open {(0,1)}
    f11 = principal_filter_at(calc, 1 << 3)   # singleton open {(1,1)}
    assert filter_star(calc, calc.filters[f01]) == calc.filters[f11]


def test_filter_product_of_singletons(fc_pair2):
    calc = fc_pair2.calc
    f01 = calc.filters[principal_filter_at(calc, 1 << 1)]
    f10 = calc.filters[principal_filter_at(calc, 1 << 2)]
    f00 = calc.filters[principal_filter_at(calc, 1 << 0)]
    assert filter_product(calc, f01, f10) == f00
    assert filter_product(calc, f01, f01) is None


def test_filter_product_with_own_domain(fc_pair2):
    calc = fc_pair2.calc
    for f in calc.filters:
        assert filter_product(calc, f, filter_star(calc, f)) == f
        assert filter_product(calc, filter_plus(calc, f), f) == f


def test_star_image_set_equality_is_the_product_condition(fc_pair2):
    calc = fc_pair2.calc
    for a in calc.filters:
        for b in calc.filters:
            cond1 = calc.star_set(a.members) == calc.plus_set(b.members)
            cond2 = calc.d_members(a.members) == calc.r_members(b.members)
            assert cond1 == cond2


def test_filter_product_associative_where_defined(fc_pair2):
    calc = fc_pair2.calc
    fs = calc.filters
    for a in fs:
        for b in fs:
            ab = filter_product(calc, a, b)
            for c in fs:
                bc = filter_product(calc, b, c)
                lhs = filter_product(calc, ab, c) if ab is not None else None
                rhs = filter_product(calc, a, bc) if bc is not None else None
                assert lhs == rhs


def test_filter_construction_lemma_items(fc_pair2):
    q = fc_pair2.calc.q
    calc = fc_pair2.calc
    pis = set(partial_isometries(q))
    for f in calc.filters:
        members = list(iter_bits(f.members))
        star_set = calc.star_set(f.members)
        # products a.x for x in the star image stay in the filter
        for a in members:
            for x in iter_bits(star_set):
                assert has_bit(f.members, int(q.mul[a, x]))
        # an isometry member regenerates the filter
        for a in members:
            if a in pis:
                gen = calc.up_close(mask_of(int(q.mul[a, x]) for x in iter_bits(star_set)))
                assert gen == f.members
    # two filters sharing an isometry with equal domain are equal
    for f in calc.filters:
        for g in calc.filters:
            if calc.d_members(f.members) != calc.d_members(g.members):
                continue
            common = f.members & g.members
            if any(x in pis for x in iter_bits(common)):
                assert f == g


def test_filters_built_from_identity_filter_and_isometry(fc_pair2):
    # for an identity filter A and an isometry a with a* in A, the up-closure
    # of aA is a completely prime filter with domain A
    calc = fc_pair2.calc
    q = calc.q
    pis = partial_isometries(q)
    for f in calc.filters:
        if not calc.is_identity_filter(f.members):
            continue
        for a in pis:
            if not has_bit(f.members, int(q.star[a])):
                continue
            built = calc.up_close(mask_of(int(q.mul[a, x]) for x in iter_bits(f.members)))
            k = calc.index.get(built)
            assert k is not None
            assert calc.d_members(built) == f.members


# ---------------------------------------------------------------------------
# c on objects

def test_filter_category_of_relation_quantale(fc_pair2, pair2):
    from framecat.duality import find_category_isomorphism
    assert fc_pair2.n == 4
    assert validate_category(fc_pair2.topcat.cat).ok
    assert is_etale(fc_pair2.topcat)[0]
    assert find_category_isomorphism(fc_pair2.topcat.cat, pair2.cat) is not None


def test_filter_category_identities_are_projection_filters(fc_pair2):
    calc = fc_pair2.calc
    cat = fc_pair2.topcat.cat
    for k, f in enumerate(calc.filters):
        assert cat.is_identity(k) == calc.is_identity_filter(f.members)


def test_filter_category_of_degenerate_quantale():
    q = frame_as_quantale(frame_from_leq([[1]]))
    fc = c_object(q)
    assert fc.n == 0


def test_filter_category_of_chain_quantale():
    q = frame_as_quantale(chain_frame(3))
    fc = c_object(q)
    assert fc.n == 2
    assert sorted(fc.topcat.cat.identities()) == [0, 1]
    assert validate_topcategory(fc.topcat).ok
    assert is_etale(fc.topcat)[0]


def test_base_sets_are_open_local_bisections(fc_pair2):
    from framecat.topcat import is_local_bisection
    for a, x in fc_pair2.base.items():
        assert fc_pair2.topcat.topology.is_open(x)
        assert is_local_bisection(fc_pair2.topcat.cat, x)


def test_d_image_of_base_is_base_of_star(fc_pair2):
    # d(X_s) = X_{s*} for partial isometries s
    calc = fc_pair2.calc
    cat = fc_pair2.topcat.cat
    for s, x in fc_pair2.base.items():
        image = mask_of(int(cat.d[k]) for k in iter_bits(x))
        assert image == calc.x_mask(int(calc.q.star[s]))


def test_x_set_laws(fc_pair2):
    calc = fc_pair2.calc
    q = calc.q
    full = (1 << fc_pair2.n) - 1
    assert calc.x_mask(q.top) == full
    id_mask = mask_of(k for k, f in enumerate(calc.filters)
                      if calc.is_identity_filter(f.members))
    assert calc.x_mask(q.unit) == id_mask
    for a in range(q.n):
        for b in range(q.n):
            assert calc.x_mask(a) & calc.x_mask(b) == calc.x_mask(int(q.meet[a, b]))
            assert calc.x_mask(a) | calc.x_mask(b) == calc.x_mask(int(q.join[a, b]))


def test_identity_space_matches_points_of_projections(fc_pair2):
    assert identity_space_vs_pt(fc_pair2.calc.q, fc_pair2) == (True, "")


def test_identity_space_vs_pt_on_corpus():
    for q in (frame_as_quantale(chain_frame(3)),
              omega_object(monoid_category([[0, 1], [1, 1]])).rqf,
              omega_object(parity_pair_groupoid()).rqf):
        ok, why = identity_space_vs_pt(q)
        assert ok, why


def test_identity_filter_bijection_with_projection_filters(fc_pair2):
    # F -> F^up is a bijection from points of e-down onto identity filters
    calc = fc_pair2.calc
    q = calc.q
    projs = q.projections()
    pframe, pos = subframe(q.frame, projs)
    inv = {v: k for k, v in pos.items()}
    images = set()
    for f in enumerate_cp_filters(pframe):
        lifted = calc.up_close(mask_of(inv[x] for x in iter_bits(f.members)))
        k = calc.index[lifted]
        assert calc.is_identity_filter(calc.filters[k].members)
        images.add(k)
    identity_filters = {k for k, f in enumerate(calc.filters)
                        if calc.is_identity_filter(f.members)}
    assert images == identity_filters


# ---------------------------------------------------------------------------
# c on morphisms

def test_c_of_identity_is_identity(fc_pair2, omega_pair2):
    ident = np.arange(16, dtype=np.int64)
    m = c_morphism(ident, fc_pair2, fc_pair2)
    assert np.array_equal(m, np.arange(4))


def test_c_of_swap_is_the_swap_functor(fc_pair2, pair2, omega_pair2):
    swap = np.array([3, 2, 1, 0], dtype=np.int64)
    psi = omega_morphism(swap, omega_pair2, omega_pair2)
    m = c_morphism(psi, fc_pair2, fc_pair2)
    rep = validate_covering_functor(m, fc_pair2.topcat.cat, fc_pair2.topcat.cat)
    assert rep.ok
    assert not np.array_equal(m, np.arange(4))
    assert np.array_equal(m[m], np.arange(4))
    # identity filters map to identity filters, d commutes with preimage
    cat = fc_pair2.topcat.cat
    for k in range(4):
        if cat.is_identity(k):
            assert cat.is_identity(int(m[k]))
        assert int(cat.d[m[k]]) == int(m[cat.d[k]])


def test_c_contravariant_composition(fc_pair2, omega_pair2):
    swap = np.array([3, 2, 1, 0], dtype=np.int64)
    psi = omega_morphism(swap, omega_pair2, omega_pair2)
    ident = np.arange(16, dtype=np.int64)
    for p1 in (psi, ident):
        for p2 in (psi, ident):
            comp = p2[p1]  # p2 after p1 as element maps
            lhs = c_morphism(comp, fc_pair2, fc_pair2)
            rhs = c_morphism(p1, fc_pair2, fc_pair2)[c_morphism(p2, fc_pair2, fc_pair2)]
            assert np.array_equal(lhs, rhs)
