import numpy as np
import pytest

from framecat.bits import mask_of
from framecat.corpus import (chain_frame, cyclic2_category, empty_category,
                             monoid_category, pair_groupoid,
                             parallel_pair_category, parity_pair_groupoid)
from framecat.duality import (build_chi, build_omega_map,
                              check_naturality_in_category,
                              check_naturality_in_quantale, chi_is_isomorphism,
                              enumerate_covering_functors,
                              enumerate_rqf_morphisms,
                              find_category_isomorphism, is_sober, is_spatial,
                              omega_is_isomorphism, quantale_isomorphism_ok,
                              transpose_backward, transpose_forward,
                              validate_rqf_morphism, verify_adjunction_I)
from framecat.functors import c_object, omega_morphism, omega_object
from framecat.quantale import frame_as_quantale


# ---------------------------------------------------------------------------
# morphism validation

def test_identity_is_an_rqf_morphism(omega_pair2):
    q = omega_pair2.rqf
    assert validate_rqf_morphism(np.arange(16), q, q).ok


def test_swap_induced_automorphism_is_a_morphism(pair2, omega_pair2):
    swap = np.array([3, 2, 1, 0], dtype=np.int64)
    psi = omega_morphism(swap, omega_pair2, omega_pair2)
    assert validate_rqf_morphism(psi, omega_pair2.rqf, omega_pair2.rqf).ok


def test_map_crushing_isometries_fails_condition_five(omega_pair2):
    q = omega_pair2.rqf
    theta = np.full(16, q.top, dtype=np.int64)
    theta[0] = q.bottom
    rep = validate_rqf_morphism(theta, q, q)
    assert "morphism.preserves_isometries" in rep.laws()
    wit = next(v.witness for v in rep.violations
               if v.law == "morphism.preserves_isometries")
    assert len(wit) == 2


# ---------------------------------------------------------------------------
# chi

def test_chi_is_an_isomorphism_for_relation_quantale(omega_pair2):
    chi = build_chi(omega_pair2.rqf)
    assert chi.report.ok
    assert chi_is_isomorphism(chi) == (True, "")
    assert chi.om.n == 16


def test_chi_at_bottom_top_unit(omega_pair2):
    q = omega_pair2.rqf
    chi = build_chi(q)
    assert chi.om.opens[chi.chi[q.bottom]] == 0
    assert chi.om.opens[chi.chi[q.top]] == (1 << chi.fc.n) - 1
    id_mask = mask_of(k for k, f in enumerate(chi.fc.filters)
                      if chi.fc.calc.is_identity_filter(f.members))
    assert chi.om.opens[chi.chi[q.unit]] == id_mask


def test_chi_on_frame_quantales():
    for q in (frame_as_quantale(chain_frame(3)), frame_as_quantale(chain_frame(5))):
        chi = build_chi(q)
        assert chi.report.ok
        assert chi_is_isomorphism(chi)[0]


def test_spatiality_of_corpus_quantales(omega_pair2):
    assert is_spatial(omega_pair2.rqf) == (True, None)
    assert is_spatial(frame_as_quantale(chain_frame(4)))[0]
    assert is_spatial(omega_object(parity_pair_groupoid()).rqf)[0]


def test_spatial_iff_projection_frame_spatial(omega_pair2):
    # both sides are always true at finite scale; check they agree anyway
    from framecat.order import frame_spatial_check, subframe
    q = omega_pair2.rqf
    ok_q, _ = is_spatial(q)
    pframe, _ = subframe(q.frame, q.projections())
    ok_p, _ = frame_spatial_check(pframe)
    assert ok_q == ok_p is True


# ---------------------------------------------------------------------------
# omega map and sobriety

def test_omega_map_is_bijective_covering_functor(pair2):
    res = build_omega_map(pair2)
    assert res.report.ok
    assert is_sober(pair2, res) == (True, None)
    assert omega_is_isomorphism(pair2, res) == (True, "")


def test_omega_map_identities_to_identity_filters(pair2):
    res = build_omega_map(pair2)
    for e in pair2.cat.identities():
        k = int(res.omega[e])
        assert res.fc.calc.is_identity_filter(res.fc.filters[k].members)


def test_omega_filter_contains_exactly_the_opens_containing_the_arrow(pair2):
    res = build_omega_map(pair2)
    for x in range(pair2.n):
        members = res.fc.filters[int(res.omega[x])].members
        for i, u in enumerate(res.om.opens):
            assert bool(members >> i & 1) == bool(u >> x & 1)


def test_parity_groupoid_is_not_sober():
    tc = parity_pair_groupoid()
    res = build_omega_map(tc)
    assert res.report.ok  # still a continuous covering functor
    ok, wit = is_sober(tc, res)
    assert not ok


def test_sober_iff_identity_space_sober():
    # the parity groupoid's identity space is indiscrete: both fail together
    tc = parity_pair_groupoid()
    res = build_omega_map(tc)
    assert not is_sober(tc, res)[0]
    disc = pair_groupoid(2)
    assert is_sober(disc, build_omega_map(disc))[0]


# ---------------------------------------------------------------------------
# hom-set enumeration and transposes

def test_covering_functor_enumeration_finds_both_automorphisms(pair2, fc_pair2):
    funcs = enumerate_covering_functors(pair2, fc_pair2.topcat)
    assert len(funcs) == 2


def test_rqf_morphism_enumeration(omega_pair2):
    morphs = enumerate_rqf_morphisms(omega_pair2.rqf, omega_pair2.rqf)
    assert len(morphs) == 2
    keys = {m.tobytes() for m in morphs}
    assert np.arange(16, dtype=np.int64).tobytes() in keys


def test_transpose_of_omega_map_is_the_identity(pair2, omega_pair2):
    # alpha = omega : C -> C(Omega(C)) transposes to the identification of Q
    # with Omega(C): q |-> {c : q in O_c} = opens[q]
    q = omega_pair2.rqf
    fc = c_object(q)
    om = omega_pair2
    res = build_omega_map(pair2, om)
    beta = transpose_forward(res.omega, pair2, q, fc, om)
    assert np.array_equal(beta, np.arange(16))
    assert validate_rqf_morphism(beta, q, om.rqf).ok


def test_transpose_of_identity_morphism_is_omega(pair2, omega_pair2):
    # beta = id : Q -> Omega(C) with Q = Omega(C) transposes to omega
    q = omega_pair2.rqf
    fc = c_object(q)
    alpha = transpose_backward(np.arange(16), pair2, q, fc, omega_pair2)
    res = build_omega_map(pair2, omega_pair2)
    assert np.array_equal(alpha, res.omega)


def test_transposes_are_mutually_inverse_on_all_pairs(pair2, omega_pair2):
    q = omega_pair2.rqf
    fc = c_object(q)
    om = omega_pair2
    for alpha in enumerate_covering_functors(pair2, fc.topcat):
        beta = transpose_forward(alpha, pair2, q, fc, om)
        assert validate_rqf_morphism(beta, q, om.rqf).ok
        assert np.array_equal(transpose_backward(beta, pair2, q, fc, om), alpha)
    for beta in enumerate_rqf_morphisms(q, om.rqf):
        alpha = transpose_backward(beta, pair2, q, fc, om)
        assert np.array_equal(transpose_forward(alpha, pair2, q, fc, om), beta)


@pytest.mark.parametrize("make,expected", [
    (lambda: pair_groupoid(2), (2, 2)),
    (lambda: pair_groupoid(1), (1, 1)),
    (lambda: cyclic2_category(), (1, 1)),
    (lambda: parallel_pair_category(), (2, 2)),
    (lambda: empty_category(), (1, 1)),
])
def test_adjunction_on_corpus_pairs(make, expected):
    tc = make()
    q = omega_object(tc).rqf
    adj = verify_adjunction_I(tc, q)
    assert adj.ok, adj.failures
    assert adj.sizes == expected


def test_adjunction_with_degenerate_quantale():
    # C(1-element RQF) is empty, so both hom-sets are empty for a non-empty C
    triv_q = omega_object(empty_category()).rqf
    adj = verify_adjunction_I(monoid_category([[0]]), triv_q)
    assert adj.ok
    assert adj.sizes == (0, 0)
    adj = verify_adjunction_I(empty_category(), triv_q)
    assert adj.sizes == (1, 1)


def test_adjunction_cross_pair():
    adj = verify_adjunction_I(pair_groupoid(1), omega_object(pair_groupoid(2)).rqf)
    assert adj.ok
    assert adj.sizes == (0, 0)


def test_naturality_squares(pair2, omega_pair2):
    q = omega_pair2.rqf
    swap = np.array([3, 2, 1, 0], dtype=np.int64)
    assert check_naturality_in_category(swap, pair2, pair2, q) == (True, None)
    psi = omega_morphism(swap, omega_pair2, omega_pair2)
    assert check_naturality_in_quantale(psi, q, q, pair2) == (True, None)


# ---------------------------------------------------------------------------
# isomorphism search

def test_category_isomorphism_search(pair2, fc_pair2):
    assert find_category_isomorphism(pair2.cat, fc_pair2.topcat.cat) is not None
    assert find_category_isomorphism(pair2.cat, pair_groupoid(3).cat) is None
    mono = monoid_category([[0, 1], [1, 1]]).cat
    cyc = cyclic2_category().cat
    assert find_category_isomorphism(mono, cyc) is None


def test_quantale_isomorphism_check(omega_pair2):
    q = omega_pair2.rqf
    assert quantale_isomorphism_ok(np.arange(16), q, q)
    swap = np.array([3, 2, 1, 0], dtype=np.int64)
    psi = omega_morphism(swap, omega_pair2, omega_pair2)
    assert quantale_isomorphism_ok(psi, q, q)
    not_bij = np.zeros(16, dtype=np.int64)
    assert not quantale_isomorphism_ok(not_bij, q, q)
