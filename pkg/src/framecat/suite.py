"""The standard check suite over the generated corpus.

Check builders return pending (instance, check, thunk) triples; run_pending
executes them, streaming each CheckReport as it completes, and returns the
canonically sorted list.  All checks are exact; the only tolerances anywhere
are wall-clock budgets, asserted by the acceptance suite.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, Iterable, Optional

import numpy as np

from . import corpus as cor
from .bits import iter_bits, mask_of
from .crm import (l_vee, pi_restriction_monoid, preserves_finite_meets,
                  s_filter_bijection, s_filters, validate_crm,
                  validate_crm_morphism, verify_adjunction_II)
from .duality import (build_chi, build_omega_map, check_naturality_in_category,
                      check_naturality_in_quantale, chi_is_isomorphism,
                      is_sober, is_spatial, omega_is_isomorphism,
                      quantale_isomorphism_ok, verify_adjunction_I)
from .functors import c_object, omega_object
from .order import (FiniteFrame, cp_filters_bruteforce, enumerate_cp_filters,
                    frame_spatial_check, validate_frame, validate_poset)
from .quantale import (compatibility_lemma_check, every_element_is_join_of_pi,
                       partial_isometries, pi_is_order_ideal, validate_rqf)
from .reports import CheckReport, Report, run_check, sort_reports
from .topcat import (is_etale, local_bisections, validate_covering_functor,
                     validate_topcategory)

Pending = tuple[str, str, Callable[[], tuple[bool, Optional[tuple], str]]]

ADJUNCTION_I_PAIRS = ("pair2", "cyclic2-monoid", "parallel-pair",
                      "semilattice-monoid", "empty")


def run_pending(pending: list[Pending], jobs: int = 1,
                stream: Optional[Callable[[CheckReport], None]] = None) -> list[CheckReport]:
    out: list[CheckReport] = []
    if jobs <= 1:
        for inst, name, fn in pending:
            r = run_check(inst, name, fn)
            if stream:
                stream(r)
            out.append(r)
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = {pool.submit(run_check, inst, name, fn): (inst, name)
                       for inst, name, fn in pending}
            for fut in as_completed(futures):
                r = fut.result()
                if stream:
                    stream(r)
                out.append(r)
    return sort_reports(out)


def _simple(ok_wit, detail: str = "") -> tuple[bool, Optional[tuple], str]:
    ok, wit = ok_wit
    return ok, (None if ok else (wit if isinstance(wit, tuple) else (wit,))), detail


def _from_report(rep: Report) -> tuple[bool, Optional[tuple], str]:
    if rep.ok:
        return True, None, ""
    v = rep.violations[0]
    return False, v.witness, v.law


def _etale_check(tc) -> tuple[bool, Optional[tuple], str]:
    ok, law, wit = is_etale(tc)
    return ok, (None if ok else (wit,)), law or ""


def check_positive_corpus() -> list[Pending]:
    out: list[Pending] = []
    for inst in cor.etale_categories():
        out.append((inst.name, "topcategory-axioms",
                    lambda tc=inst.obj: _from_report(validate_topcategory(tc))))
        out.append((inst.name, "etale", lambda tc=inst.obj: _etale_check(tc)))
    for inst in cor.corpus_frames():
        out.append((inst.name, "frame-axioms",
                    lambda f=inst.obj: _from_report(validate_frame(f))))
        out.append((inst.name, "spatial",
                    lambda f=inst.obj: _simple(frame_spatial_check(f))))
    for inst in cor.corpus_rqfs():
        out.append((inst.name, "rqf-axioms",
                    lambda q=inst.obj: _from_report(validate_rqf(q))))
    for inst in cor.corpus_crms():
        out.append((inst.name, "crm-axioms",
                    lambda s=inst.obj: _from_report(validate_crm(s))))
    return out


def check_negative_fixtures() -> list[Pending]:
    out: list[Pending] = []
    for inst in cor.negative_fixtures() + [cor.negative_crm_fixture()]:
        def fn(inst=inst) -> tuple[bool, Optional[tuple], str]:
            rep = _validate_any(inst)
            if rep.ok:
                return False, ("accepted",), "fixture was accepted"
            if inst.expect_fail not in rep.laws():
                return False, tuple(rep.laws()[:3]), f"expected {inst.expect_fail}"
            v = next(v for v in rep.violations if v.law == inst.expect_fail)
            if len(v.witness) == 0:
                return False, (), "violation carries no witness"
            return True, None, ""
        out.append((inst.name, "rejected-with-witness", fn))
    return out


def _validate_any(inst: cor.CorpusInstance) -> Report:
    if inst.kind == "poset":
        return validate_poset(inst.obj)
    if inst.kind == "lattice":
        return validate_frame(FiniteFrame(inst.obj))
    if inst.kind == "frame":
        return validate_frame(inst.obj)
    if inst.kind == "rqf":
        return validate_rqf(inst.obj)
    if inst.kind == "category":
        return validate_topcategory(inst.obj)
    if inst.kind == "etale-category":
        rep = validate_topcategory(inst.obj)
        ok, law, wit = is_etale(inst.obj)
        if not ok:
            rep.add(law, (wit,))
        return rep
    if inst.kind == "crm":
        return validate_crm(inst.obj)
    raise ValueError(inst.kind)


def check_filter_oracle(limit: int = 64) -> list[Pending]:
    """enumerate_cp_filters equals the subset-by-subset oracle, element for
    element, on every corpus frame with at most `limit` elements."""
    out: list[Pending] = []
    frames = [(i.name, i.obj) for i in cor.corpus_frames()]
    frames += [(f"frame-of-{i.name}", i.obj.frame) for i in cor.corpus_rqfs()]
    for name, f in frames:
        if f.n > limit:
            continue

        def fn(f=f) -> tuple[bool, Optional[tuple], str]:
            fast = enumerate_cp_filters(f)
            brute = cp_filters_bruteforce(f)
            if [(c.cogenerator, c.members) for c in fast] != \
               [(c.cogenerator, c.members) for c in brute]:
                return False, (len(fast), len(brute)), "filter sets differ"
            return True, None, ""
        out.append((name, "filter-oracle", fn))
    return out


def check_pi_characterization() -> list[Pending]:
    """PI(Omega(C)) is exactly the set of open local bisections of C."""
    out: list[Pending] = []
    for inst in cor.etale_categories():
        tc = inst.obj
        if tc.n > 12:
            continue

        def fn(tc=tc) -> tuple[bool, Optional[tuple], str]:
            om = omega_object(tc)
            pis = {om.opens[p] for p in partial_isometries(om.rqf)}
            olbs = {m for m in local_bisections(tc.cat) if tc.topology.is_open(m)}
            if pis != olbs:
                return False, (len(pis), len(olbs)), "sets differ"
            return True, None, ""
        out.append((inst.name, "isometries-are-open-bisections", fn))
    return out


def check_compatibility_lemma() -> list[Pending]:
    out: list[Pending] = []
    for inst in cor.corpus_rqfs():
        out.append((inst.name, "compatible-join-lemma",
                    lambda q=inst.obj: _simple(compatibility_lemma_check(q))))
        out.append((inst.name, "isometries-order-ideal",
                    lambda q=inst.obj: _simple(pi_is_order_ideal(q))))
        out.append((inst.name, "elements-are-joins-of-isometries",
                    lambda q=inst.obj: _simple(every_element_is_join_of_pi(q))))
    return out


def check_chi_roundtrips(max_elements: int = 1024) -> list[Pending]:
    out: list[Pending] = []
    for inst in cor.corpus_rqfs():
        q = inst.obj
        if q.n > max_elements:
            continue

        def fn(q=q) -> tuple[bool, Optional[tuple], str]:
            chi = build_chi(q)
            ok, why = chi_is_isomorphism(chi)
            if not ok:
                return False, (q.n,), why
            sp, wit = is_spatial(q, chi.fc)
            if not sp:
                return False, wit, "not spatial"
            return True, None, ""
        out.append((inst.name, "chi-isomorphism", fn))
    return out


def check_omega_roundtrips() -> list[Pending]:
    out: list[Pending] = []
    for inst in cor.etale_categories():
        if inst.sober:
            def fn(tc=inst.obj) -> tuple[bool, Optional[tuple], str]:
                res = build_omega_map(tc)
                ok, why = omega_is_isomorphism(tc, res)
                if not ok:
                    return False, (tc.n,), why
                sober, wit = is_sober(tc, res)
                if not sober:
                    return False, wit, "not sober"
                return True, None, ""
            out.append((inst.name, "omega-isomorphism", fn))
        else:
            # not sober: omega is still a continuous covering functor and
            # sobriety must be reported false
            def fn(tc=inst.obj) -> tuple[bool, Optional[tuple], str]:
                res = build_omega_map(tc)
                if not res.report.ok:
                    return False, res.report.violations[0].witness, \
                        res.report.violations[0].law
                sober, _ = is_sober(tc, res)
                if sober:
                    return False, (tc.n,), "expected a non-sober instance"
                return True, None, ""
            out.append((inst.name, "omega-covering-functor-nonsober", fn))
    return out


def check_crm_roundtrips(max_elements: int = 1024) -> list[Pending]:
    out: list[Pending] = []
    for inst in cor.corpus_rqfs():
        q = inst.obj
        if q.n > max_elements:
            continue

        def fn_a(q=q) -> tuple[bool, Optional[tuple], str]:
            s, carrier = pi_restriction_monoid(q)
            lv = l_vee(s, max_elements=max_elements)
            iso = np.array([q.frame.join_fold([carrier[x] for x in iter_bits(m)])
                            for m in lv.ideals], dtype=np.int64)
            if not quantale_isomorphism_ok(iso, lv.rqf, q):
                return False, (lv.rqf.n, q.n), "explicit isomorphism fails"
            return True, None, ""
        out.append((inst.name, "ideals-of-isometries-roundtrip", fn_a))
    for inst in cor.corpus_crms():
        s = inst.obj

        def fn_b(s=s) -> tuple[bool, Optional[tuple], str]:
            lv = l_vee(s, max_elements=max_elements)
            s2, carrier2 = pi_restriction_monoid(lv.rqf)
            pos = {e: i for i, e in enumerate(carrier2)}
            iso = np.array([pos[lv.principal(x)] for x in range(s.n)], dtype=np.int64)
            if sorted(iso.tolist()) != list(range(s2.n)):
                return False, (s.n, s2.n), "not bijective"
            if not validate_crm_morphism(iso, s, s2).ok:
                return False, (s.n,), "not a morphism"
            ok, wit = preserves_finite_meets(iso, s, s2)
            if not ok:
                return False, wit, "meets not preserved"
            return True, None, ""
        out.append((inst.name, "isometries-of-ideals-roundtrip", fn_b))

        def fn_c(s=s) -> tuple[bool, Optional[tuple], str]:
            lv = l_vee(s, max_elements=max_elements)
            sf = s_filters(s)
            fc = c_object(lv.rqf)
            bij = s_filter_bijection(sf, lv)
            if sorted(bij.tolist()) != list(range(fc.n)):
                return False, (sf.n, fc.n), "filter map not bijective"
            rep = validate_covering_functor(bij, sf.topcat.cat, fc.topcat.cat)
            if not rep.ok:
                return False, rep.violations[0].witness, "not a functor isomorphism"
            for a in range(s.n):
                lhs = mask_of(int(bij[k]) for k in iter_bits(sf.x_mask(a)))
                if lhs != fc.calc.x_mask(lv.principal(a)):
                    return False, (a,), "X-set correspondence fails"
            return True, None, ""
        out.append((inst.name, "filter-category-correspondence", fn_c))
    return out


def check_adjunction_I(names: Iterable[str] = ADJUNCTION_I_PAIRS) -> list[Pending]:
    out: list[Pending] = []
    cats = {i.name: i.obj for i in cor.etale_categories()}
    for name in names:
        tc = cats[name]

        def fn(tc=tc) -> tuple[bool, Optional[tuple], str]:
            q = omega_object(tc).rqf
            adj = verify_adjunction_I(tc, q)
            if not adj.ok:
                return False, tuple(adj.failures[0]), "transposes not mutually inverse"
            return True, None, f"homset sizes {adj.sizes}"
        out.append((name, "adjunction-homsets", fn))

    def fn_nat() -> tuple[bool, Optional[tuple], str]:
        tc = cats["pair2"]
        om = omega_object(tc)
        q = om.rqf
        swap = np.array([3, 2, 1, 0], dtype=np.int64)
        ok1, w1 = check_naturality_in_category(swap, tc, tc, q)
        if not ok1:
            return False, w1, "naturality square in the category argument"
        from .functors import omega_morphism
        psi = omega_morphism(swap, om, om)
        ok2, w2 = check_naturality_in_quantale(psi, q, q, tc)
        if not ok2:
            return False, w2, "naturality square in the quantale argument"
        return True, None, ""
    out.append(("pair2", "adjunction-naturality", fn_nat))
    return out


def check_adjunction_II() -> list[Pending]:
    def fn() -> tuple[bool, Optional[tuple], str]:
        tc = cor.pair_groupoid(2)
        q = omega_object(tc).rqf
        s, _ = pi_restriction_monoid(q)
        adj2 = verify_adjunction_II(tc, s)
        if not adj2.ok:
            return False, tuple(adj2.failures[0]), "transposes not mutually inverse"
        lv = l_vee(s)
        adj1 = verify_adjunction_I(tc, lv.rqf)
        if adj1.sizes != adj2.sizes:
            return False, adj1.sizes + adj2.sizes, "sizes differ from translated pair"
        return True, None, f"homset sizes {adj2.sizes}"
    return [("pair2/partial-bijections", "adjunction-II-homsets", fn)]


def full_suite_pending() -> list[Pending]:
    out: list[Pending] = []
    out += check_positive_corpus()
    out += check_negative_fixtures()
    out += check_filter_oracle()
    out += check_pi_characterization()
    out += check_compatibility_lemma()
    out += check_chi_roundtrips()
    out += check_omega_roundtrips()
    out += check_crm_roundtrips()
    out += check_adjunction_I()
    out += check_adjunction_II()
    return out
