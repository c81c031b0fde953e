"""Finite small categories, finite topologies on the arrow set, etale checks,
local bisections and covering functors.

Arrows are integer indices.  Composition is a partial table with -1 for
"undefined"; comp[a, b] is defined exactly when d(a) = r(b).  Topologies
store the full open-set family as bitmasks, or None for the discrete
topology (kept symbolic so large discrete instances stay cheap).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

import numpy as np

from .bits import full_mask, has_bit, iter_bits, is_submask, mask_of
from .reports import BoundExceeded, Report

UNDEF = -1


@dataclass(frozen=True, eq=False)
class FiniteCategory:
    n: int
    identity_mask: int
    d: np.ndarray  # (n,) int: right identity of each arrow
    r: np.ndarray  # (n,) int: left identity of each arrow
    comp: np.ndarray  # (n, n) int, UNDEF where d(a) != r(b)

    def identities(self) -> list[int]:
        return list(iter_bits(self.identity_mask))

    def is_identity(self, a: int) -> bool:
        return has_bit(self.identity_mask, a)

    def composable_pairs(self) -> Iterator[tuple[int, int]]:
        for a, b in np.argwhere(self.comp != UNDEF):
            yield int(a), int(b)


@dataclass(frozen=True)
class Topology:
    n: int
    opens: Optional[frozenset]  # frozenset[int] of bitmasks; None = discrete

    @property
    def is_discrete(self) -> bool:
        return self.opens is None or len(self.opens) == 1 << self.n

    def is_open(self, mask: int) -> bool:
        if self.opens is None:
            return True
        return mask in self.opens

    def open_count(self) -> int:
        return (1 << self.n) if self.opens is None else len(self.opens)

    def iter_opens(self, max_opens: int = 1 << 20) -> Iterator[int]:
        if self.open_count() > max_opens:
            raise BoundExceeded(f"topology has {self.open_count()} opens > {max_opens}")
        if self.opens is None:
            yield from range(1 << self.n)
        else:
            yield from sorted(self.opens)


def topology_from_base(n: int, base: Iterable[int]) -> Topology:
    """Close a family of basic open masks under union; adds the empty set."""
    base = sorted(set(base) | {0})
    opens = {0}
    frontier = list(base)
    while frontier:
        new = []
        for b in frontier:
            for o in list(opens):
                u = o | b
                if u not in opens:
                    opens.add(u)
                    new.append(u)
        frontier = new
    return Topology(n, frozenset(opens))


@dataclass(frozen=True, eq=False)
class FiniteTopCategory:
    cat: FiniteCategory
    topology: Topology

    @property
    def n(self) -> int:
        return self.cat.n


def make_category(n: int, identities, d, r, comp_entries=None, comp_table=None) -> FiniteCategory:
    d = np.array(d, dtype=np.int64)
    r = np.array(r, dtype=np.int64)
    if comp_table is not None:
        comp = np.array(comp_table, dtype=np.int64)
    else:
        comp = np.full((n, n), UNDEF, dtype=np.int64)
        for a, b, c in comp_entries or []:
            comp[a, b] = c
    for arr in (d, r, comp):
        arr.flags.writeable = False
    return FiniteCategory(n=n, identity_mask=mask_of(identities), d=d, r=r, comp=comp)


# ---------------------------------------------------------------------------
# validation

def validate_category(c: FiniteCategory) -> Report:
    rep = Report(subject="category")
    rep.layers_run.append("category")
    n, d, r, comp = c.n, c.d, c.r, c.comp
    ids = c.identities()
    if n == 0:
        return rep
    for arr, name in ((d, "d"), (r, "r")):
        if arr.shape != (n,) or (arr < 0).any() or (arr >= n).any():
            rep.add(f"category.{name}_range", (0,))
            return rep
    for e in ids:
        if d[e] != e or r[e] != e:
            rep.add("category.identity_fixed_by_d_r", (e,))
            return rep
    bad = [a for a in range(n) if not c.is_identity(int(d[a]))]
    if bad:
        rep.add("category.d_lands_in_identities", (bad[0],))
        return rep
    bad = [a for a in range(n) if not c.is_identity(int(r[a]))]
    if bad:
        rep.add("category.r_lands_in_identities", (bad[0],))
        return rep
    # an arrow fixed by d must be an identity
    bad = [a for a in range(n) if int(d[a]) == a and not c.is_identity(a)]
    if bad:
        rep.add("category.d_fixed_points_are_identities", (bad[0],))

    defined = comp != UNDEF
    should = d[:, None] == r[None, :]
    diff = defined != should
    if diff.any():
        a, b = np.argwhere(diff)[0]
        law = "category.composability" if defined[a, b] else "category.missing_composite"
        rep.add(law, (int(a), int(b)))
        return rep
    if defined.any():
        vals = comp[defined]
        if (vals < 0).any() or (vals >= n).any():
            rep.add("category.comp_range", (0,))
            return rep
    ab = np.argwhere(defined)
    if ab.size:
        prod = comp[defined]
        bad = np.flatnonzero(d[prod] != d[ab[:, 1]])
        if bad.size:
            a, b = ab[bad[0]]
            rep.add("category.d_of_composite", (int(a), int(b)))
        bad = np.flatnonzero(r[prod] != r[ab[:, 0]])
        if bad.size:
            a, b = ab[bad[0]]
            rep.add("category.r_of_composite", (int(a), int(b)))
    arange = np.arange(n)
    bad = np.flatnonzero(comp[arange, d] != arange)
    if bad.size:
        rep.add("category.right_identity_law", (int(bad[0]),))
    bad = np.flatnonzero(comp[r, arange] != arange)
    if bad.size:
        rep.add("category.left_identity_law", (int(bad[0]),))
    if not rep.ok:
        return rep
    # associativity over composable triples, one row of a at a time
    comp0 = np.maximum(comp, 0)
    for a in range(n):
        row = comp[a, :]
        lhs = comp[np.maximum(row, 0), :]       # (ab) c
        rhs = comp[a, comp0]                    # a (bc)
        valid = (row[:, None] != UNDEF) & (comp != UNDEF)
        diff = valid & (lhs != rhs)
        if diff.any():
            b, cc = np.argwhere(diff)[0]
            rep.add("category.associativity", (a, int(b), int(cc)))
            break
    return rep


def validate_topology(t: Topology) -> Report:
    rep = Report(subject="topology")
    rep.layers_run.append("topology")
    if t.opens is None:
        return rep
    full = full_mask(t.n)
    if 0 not in t.opens:
        rep.add("topology.contains_empty", ())
    if full not in t.opens:
        rep.add("topology.contains_all", ())
    opens = sorted(t.opens)
    for i, a in enumerate(opens):
        for b in opens[i:]:
            if a | b not in t.opens:
                rep.add("topology.union_closed", (a, b))
                return rep
            if a & b not in t.opens:
                rep.add("topology.intersection_closed", (a, b))
                return rep
    return rep


def _preimage(fmap: np.ndarray, mask: int) -> int:
    return mask_of(a for a in range(len(fmap)) if has_bit(mask, int(fmap[a])))


def _image(fmap: np.ndarray, mask: int) -> int:
    return mask_of(int(fmap[a]) for a in iter_bits(mask))


def validate_topcategory(tc: FiniteTopCategory, base: Optional[list[int]] = None) -> Report:
    """Category laws, topology laws, and continuity of d, r and m.

    m's continuity is taken in the subspace of the product topology on the
    composable pairs: each pair in the preimage of an open must sit in an
    open box whose composable part maps into that open.
    """
    rep = validate_category(tc.cat)
    if not rep.ok:
        return rep
    trep = validate_topology(tc.topology)
    rep.extend(trep)
    rep.subject = "topcategory"
    if not rep.ok:
        return rep
    if tc.topology.is_discrete:
        return rep
    cat, top = tc.cat, tc.topology
    for o in top.iter_opens():
        if not top.is_open(_preimage(cat.d, o)):
            rep.add("topcategory.d_continuous", (o,))
            return rep
        if not top.is_open(_preimage(cat.r, o)):
            rep.add("topcategory.r_continuous", (o,))
            return rep
    boxes = sorted(top.opens) if base is None else sorted(base)
    for w in (boxes if base is not None else top.iter_opens()):
        for a, b in cat.composable_pairs():
            if not has_bit(w, int(cat.comp[a, b])):
                continue
            if not _box_exists(cat, top, boxes, a, b, w):
                rep.add("topcategory.m_continuous", (int(a), int(b), w))
                return rep
    return rep


def _box_exists(cat: FiniteCategory, top: Topology, boxes: list[int], a: int, b: int, w: int) -> bool:
    for u in boxes:
        if not has_bit(u, a):
            continue
        for v in boxes:
            if not has_bit(v, b):
                continue
            ok = True
            for x in iter_bits(u):
                for y in iter_bits(v):
                    z = int(cat.comp[x, y])
                    if z != UNDEF and not has_bit(w, z):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                return True
    return False


# ---------------------------------------------------------------------------
# local bisections and etale structure

def is_local_bisection(c: FiniteCategory, mask: int) -> bool:
    seen_d, seen_r = set(), set()
    for a in iter_bits(mask):
        da, ra = int(c.d[a]), int(c.r[a])
        if da in seen_d or ra in seen_r:
            return False
        seen_d.add(da)
        seen_r.add(ra)
    return True


def local_bisections(c: FiniteCategory, max_arrows: int = 20) -> list[int]:
    """All arrow subsets on which both d and r are injective."""
    if c.n > max_arrows:
        raise BoundExceeded(f"{c.n} arrows > {max_arrows}; refusing 2^n enumeration")
    return [m for m in range(1 << c.n) if is_local_bisection(c, m)]


def open_local_bisections(tc: FiniteTopCategory) -> list[int]:
    if tc.topology.opens is None:
        return local_bisections(tc.cat)
    return [o for o in sorted(tc.topology.opens) if is_local_bisection(tc.cat, o)]


def is_etale(tc: FiniteTopCategory) -> tuple[bool, Optional[str], Optional[int]]:
    """(i) every open is a union of open local bisections, (ii) d and r are open.

    Returns (ok, failed-law, witness-open).  Discrete topologies are always
    etale: singletons are open local bisections and images are open.
    """
    if tc.topology.is_discrete:
        return True, None, None
    cat, top = tc.cat, tc.topology
    olbs = open_local_bisections(tc)
    for o in top.iter_opens():
        cover = 0
        for b in olbs:
            if is_submask(b, o):
                cover |= b
        if cover != o:
            return False, "etale.open_not_union_of_bisections", o
    for o in top.iter_opens():
        if not top.is_open(_image(cat.d, o)):
            return False, "etale.d_not_open", o
        if not top.is_open(_image(cat.r, o)):
            return False, "etale.r_not_open", o
    return True, None, None


def c_o_is_open(tc: FiniteTopCategory) -> bool:
    return tc.topology.is_open(tc.cat.identity_mask)


# ---------------------------------------------------------------------------
# functors

def identity_functor(c: FiniteCategory) -> np.ndarray:
    return np.arange(c.n, dtype=np.int64)


def compose_functors(f2: np.ndarray, f1: np.ndarray) -> np.ndarray:
    """Arrow map of (f2 after f1)."""
    return f2[f1]


def validate_covering_functor(fmap, src: FiniteCategory, dst: FiniteCategory) -> Report:
    """Functoriality, then d/r-injectivity and d/r-surjectivity, with witnesses."""
    fmap = np.asarray(fmap, dtype=np.int64)
    rep = Report(subject="covering-functor")
    rep.layers_run.append("functor")
    n = src.n
    if fmap.shape != (n,) or ((fmap < 0) | (fmap >= max(dst.n, 1))).any():
        if n:
            rep.add("functor.map_range", (int(np.flatnonzero((fmap < 0) | (fmap >= max(dst.n, 1)))[0]),))
            return rep
    for e in src.identities():
        if not dst.is_identity(int(fmap[e])):
            rep.add("functor.preserves_identities", (e,))
            break
    for a in range(n):
        if int(dst.d[fmap[a]]) != int(fmap[src.d[a]]):
            rep.add("functor.preserves_d", (a,))
            break
    for a in range(n):
        if int(dst.r[fmap[a]]) != int(fmap[src.r[a]]):
            rep.add("functor.preserves_r", (a,))
            break
    if rep.ok:
        for a, b in src.composable_pairs():
            lhs = int(dst.comp[fmap[a], fmap[b]])
            rhs = int(fmap[src.comp[a, b]])
            if lhs != rhs:
                rep.add("functor.preserves_composition", (a, b))
                break
    if not rep.ok:
        return rep
    rep.layers_run.append("covering")
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n) if fmap[a] == fmap[b]]
    wit = next(((a, b) for a, b in pairs if src.d[a] == src.d[b]), None)
    if wit:
        rep.add("covering.d_injective", wit)
    wit = next(((a, b) for a, b in pairs if src.r[a] == src.r[b]), None)
    if wit:
        rep.add("covering.r_injective", wit)

    def _surj(proj_src, proj_dst, law):
        for e in src.identities():
            fe = int(fmap[e])
            for y in range(dst.n):
                if int(proj_dst[y]) != fe:
                    continue
                if not any(int(proj_src[x]) == e and int(fmap[x]) == y for x in range(n)):
                    rep.add(law, (e, y))
                    return

    _surj(src.d, dst.d, "covering.d_surjective")
    _surj(src.r, dst.r, "covering.r_surjective")
    return rep


def continuity_check(fmap, tc_src: FiniteTopCategory, tc_dst: FiniteTopCategory
                     ) -> tuple[bool, Optional[int]]:
    """Preimage of every open of the target is open in the source.

    Preimages commute with unions, so for a discrete target the singletons
    suffice.
    """
    fmap = np.asarray(fmap, dtype=np.int64)
    if tc_src.topology.is_discrete:
        return True, None
    if tc_dst.topology.opens is None:
        opens = (1 << y for y in range(tc_dst.n))
    else:
        opens = iter(sorted(tc_dst.topology.opens))
    for o in opens:
        if not tc_src.topology.is_open(_preimage(fmap, o)):
            return False, o
    return True, None
