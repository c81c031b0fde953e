"""Unital quantales over finite frames, Ehresmann structure, partial isometries.

A restriction quantal frame is an Ehresmann quantal frame that is etale
(the top element is a join of partial isometries) and whose partial
isometries are closed under multiplication.  The restriction identities
f.a = a.(f.a)* and a.f = (a.f)+.a hold automatically for every partial
isometry a; `validate_rqf` checks them there, which is exactly the content
of "the partial isometries form a restriction monoid".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bits import mask_of
from .order import FiniteFrame, validate_frame
from .reports import Report


@dataclass(frozen=True, eq=False)
class FiniteQuantale:
    frame: FiniteFrame
    mul: np.ndarray  # (n, n) int
    unit: int

    @property
    def n(self) -> int:
        return self.frame.n

    @property
    def leq(self) -> np.ndarray:
        return self.frame.leq

    @property
    def meet(self) -> np.ndarray:
        return self.frame.meet

    @property
    def join(self) -> np.ndarray:
        return self.frame.join

    @property
    def bottom(self) -> int:
        return self.frame.bottom

    @property
    def top(self) -> int:
        return self.frame.top


@dataclass(frozen=True, eq=False)
class EhresmannQuantale:
    """Ehresmann quantal frame; star and plus land in the projections e-down."""

    quantale: FiniteQuantale
    star: np.ndarray  # (n,) int
    plus: np.ndarray  # (n,) int

    @property
    def frame(self) -> FiniteFrame:
        return self.quantale.frame

    @property
    def n(self) -> int:
        return self.quantale.n

    @property
    def leq(self) -> np.ndarray:
        return self.quantale.leq

    @property
    def meet(self) -> np.ndarray:
        return self.quantale.meet

    @property
    def join(self) -> np.ndarray:
        return self.quantale.join

    @property
    def mul(self) -> np.ndarray:
        return self.quantale.mul

    @property
    def unit(self) -> int:
        return self.quantale.unit

    @property
    def bottom(self) -> int:
        return self.quantale.bottom

    @property
    def top(self) -> int:
        return self.quantale.top

    def projections(self) -> list[int]:
        """P = e-down, never stored."""
        return [int(i) for i in np.flatnonzero(self.leq[:, self.unit])]

    def projection_mask(self) -> int:
        return mask_of(self.projections())


# The restriction quantal frames are the EhresmannQuantale instances for
# which validate_rqf passes; no extra fields are involved.
RestrictionQuantalFrame = EhresmannQuantale


def make_eq(frame: FiniteFrame, mul, unit: int, star, plus) -> EhresmannQuantale:
    mul = np.array(mul, dtype=np.int64)
    star = np.array(star, dtype=np.int64)
    plus = np.array(plus, dtype=np.int64)
    for a in (mul, star, plus):
        a.flags.writeable = False
    return EhresmannQuantale(FiniteQuantale(frame, mul, int(unit)), star, plus)


def frame_as_quantale(frame: FiniteFrame) -> EhresmannQuantale:
    """Every frame is an Ehresmann quantale over itself: mul = meet, e = top."""
    n = frame.n
    ident = np.arange(n, dtype=np.int64)
    return make_eq(frame, frame.meet.copy(), frame.top, ident.copy(), ident.copy())


# ---------------------------------------------------------------------------
# validators

def validate_quantale(q: FiniteQuantale) -> Report:
    rep = validate_frame(q.frame)
    if not rep.ok:
        return rep
    rep.subject = "quantale"
    rep.layers_run.append("quantale")
    n, mul, join, bot = q.n, q.mul, q.join, q.bottom
    if mul.shape != (n, n) or (mul < 0).any() or (mul >= n).any():
        rep.add("quantale.mul_table_range", (0,))
        return rep
    for a in range(n):
        lhs = mul[mul[a, :], :]       # (a b) c
        rhs = mul[a, mul]             # a (b c)
        diff = lhs != rhs
        if diff.any():
            b, c = np.argwhere(diff)[0]
            rep.add("quantale.associativity", (a, int(b), int(c)))
            break
    e = q.unit
    bad = np.flatnonzero(mul[e, :] != np.arange(n))
    if bad.size:
        rep.add("quantale.unit_left", (int(bad[0]),))
    bad = np.flatnonzero(mul[:, e] != np.arange(n))
    if bad.size:
        rep.add("quantale.unit_right", (int(bad[0]),))
    for a in range(n):
        lhs = mul[a, join]                       # a (b \/ c)
        rhs = join[np.ix_(mul[a, :], mul[a, :])]  # a b \/ a c
        diff = lhs != rhs
        if diff.any():
            b, c = np.argwhere(diff)[0]
            rep.add("quantale.join_distributivity_left", (a, int(b), int(c)))
            break
        lhs = mul[join, a]
        rhs = join[np.ix_(mul[:, a], mul[:, a])]
        diff = lhs != rhs
        if diff.any():
            b, c = np.argwhere(diff)[0]
            rep.add("quantale.join_distributivity_right", (int(b), int(c), a))
            break
    bad = np.flatnonzero(mul[:, bot] != bot)
    if bad.size:
        rep.add("quantale.zero_right", (int(bad[0]),))
    bad = np.flatnonzero(mul[bot, :] != bot)
    if bad.size:
        rep.add("quantale.zero_left", (int(bad[0]),))
    return rep


def validate_ehresmann(q: EhresmannQuantale) -> Report:
    rep = validate_quantale(q.quantale)
    if not rep.ok:
        return rep
    rep.subject = "ehresmann"
    rep.layers_run.append("ehresmann")
    n, mul, star, plus, join = q.n, q.mul, q.star, q.plus, q.join
    leq = q.leq
    projs = np.array(q.projections())

    # projections form a commutative subsemigroup of idempotents
    pm = mul[np.ix_(projs, projs)]
    if (pm != pm.T).any():
        i, j = np.argwhere(pm != pm.T)[0]
        rep.add("ehresmann.projections_commute", (int(projs[i]), int(projs[j])))
        return rep
    diag = mul[projs, projs]
    bad = np.flatnonzero(diag != projs)
    if bad.size:
        rep.add("ehresmann.projections_idempotent", (int(projs[bad[0]]),))
        return rep

    # star/plus land in projections and fix them
    for name, m in (("star", star), ("plus", plus)):
        if m.shape != (n,) or (m < 0).any() or (m >= n).any():
            rep.add(f"ehresmann.{name}_range", (0,))
            return rep
        bad = np.flatnonzero(~leq[m, q.unit])
        if bad.size:
            rep.add(f"ehresmann.{name}_lands_in_projections", (int(bad[0]),))
        bad = np.flatnonzero(m[projs] != projs)
        if bad.size:
            rep.add(f"ehresmann.{name}_fixes_projections", (int(projs[bad[0]]),))
    if not rep.ok:
        return rep

    bad = np.flatnonzero(mul[np.arange(n), star] != np.arange(n))
    if bad.size:
        rep.add("ehresmann.a_mul_star", (int(bad[0]),))
    bad = np.flatnonzero(mul[plus, np.arange(n)] != np.arange(n))
    if bad.size:
        rep.add("ehresmann.plus_mul_a", (int(bad[0]),))

    # congruence identities (ab)* = (a*b)* and (ab)+ = (ab+)+
    lhs = star[mul]
    rhs = star[mul[star, :]]
    diff = lhs != rhs
    if diff.any():
        a, b = np.argwhere(diff)[0]
        rep.add("ehresmann.congruence_star", (int(a), int(b)))
    lhs = plus[mul]
    rhs = plus[mul[:, plus]]
    diff = lhs != rhs
    if diff.any():
        a, b = np.argwhere(diff)[0]
        rep.add("ehresmann.congruence_plus", (int(a), int(b)))

    # star and plus preserve joins (binary plus the empty join)
    for name, m in (("star", star), ("plus", plus)):
        if m[q.bottom] != q.bottom:
            rep.add(f"ehresmann.{name}_join_map", (q.bottom,))
            continue
        lhs = m[join]
        rhs = join[np.ix_(m, m)]
        diff = lhs != rhs
        if diff.any():
            a, b = np.argwhere(diff)[0]
            rep.add(f"ehresmann.{name}_join_map", (int(a), int(b)))
    return rep


def partial_isometries(q: EhresmannQuantale) -> list[int]:
    """All a such that every b <= a satisfies b = b+.a = a.b*."""
    n, mul, star, plus, leq = q.n, q.mul, q.star, q.plus, q.leq
    out = []
    for a in range(n):
        below = np.flatnonzero(leq[:, a])
        ok = (mul[plus[below], a] == below).all() and (mul[a, star[below]] == below).all()
        if ok:
            out.append(a)
    return out


def pi_is_order_ideal(q: EhresmannQuantale) -> tuple[bool, Optional[tuple[int, int]]]:
    pis = set(partial_isometries(q))
    for a in pis:
        for b in np.flatnonzero(q.leq[:, a]):
            if int(b) not in pis:
                return False, (int(b), a)
    return True, None


def compatible(q: EhresmannQuantale, a: int, b: int) -> bool:
    """a ~ b: a.b* = b.a* and b+.a = a+.b."""
    mul, star, plus = q.mul, q.star, q.plus
    return bool(mul[a, star[b]] == mul[b, star[a]] and mul[plus[b], a] == mul[plus[a], b])


def compatibility_lemma_check(q: EhresmannQuantale) -> tuple[bool, Optional[tuple[int, int]]]:
    """For partial isometries a, b: a \\/ b is a partial isometry iff a ~ b."""
    pis = partial_isometries(q)
    pi_set = set(pis)
    for a in pis:
        for b in pis:
            join_is_pi = int(q.join[a, b]) in pi_set
            if join_is_pi != compatible(q, a, b):
                return False, (a, b)
    return True, None


def every_element_is_join_of_pi(q: EhresmannQuantale) -> tuple[bool, Optional[tuple[int]]]:
    pis = partial_isometries(q)
    for x in range(q.n):
        below = [p for p in pis if q.leq[p, x]]
        if q.frame.join_fold(below) != x:
            return False, (x,)
    return True, None


def validate_rqf(q: EhresmannQuantale) -> Report:
    """Layered composite: poset, lattice, frame, quantale, Ehresmann,
    restriction identities on partial isometries, etale, PI closed under mul."""
    rep = validate_ehresmann(q)
    if not rep.ok:
        return rep
    rep.subject = "rqf"
    rep.layers_run.append("rqf")
    mul, star, plus = q.mul, q.star, q.plus
    pis = partial_isometries(q)
    pi_set = set(pis)

    for f in q.projections():
        fa = mul[f, :]
        bad = np.flatnonzero(mul[np.arange(q.n), star[fa]] != fa)
        bad = [b for b in bad if b in pi_set]
        if bad:
            rep.add("rqf.restriction_identity_star", (f, int(bad[0])))
            break
        af = mul[:, f]
        bad = np.flatnonzero(mul[plus[af], np.arange(q.n)] != af)
        bad = [b for b in bad if b in pi_set]
        if bad:
            rep.add("rqf.restriction_identity_plus", (int(bad[0]), f))
            break

    top_join = q.frame.join_fold(pis)
    if top_join != q.top:
        rep.add("rqf.etale_top_is_join_of_isometries", (q.top, top_join))
    for a in pis:
        prods = mul[a, pis]
        bad = [int(p) for p in prods if int(p) not in pi_set]
        if bad:
            b = pis[int(np.flatnonzero(prods == bad[0])[0])]
            rep.add("rqf.isometries_closed_under_mul", (a, b, bad[0]))
            break
    return rep


def cat_of_ehresmann(q: EhresmannQuantale):
    """The category with arrows = elements, a.b defined iff a* = b+,
    d(a) = a*, r(a) = a+, identities = projections; discrete topology."""
    from .topcat import FiniteCategory, FiniteTopCategory, Topology

    n = q.n
    comp = np.full((n, n), -1, dtype=np.int64)
    eq_dr = q.star[:, None] == q.plus[None, :]
    comp[eq_dr] = q.mul[eq_dr]
    cat = FiniteCategory(
        n=n,
        identity_mask=q.projection_mask(),
        d=q.star.copy(),
        r=q.plus.copy(),
        comp=comp,
    )
    return FiniteTopCategory(cat=cat, topology=Topology(n, None))
