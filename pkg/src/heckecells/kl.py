"""Kazhdan-Lusztig basis, structure constants, and the a-function oracle.

For each w the KL basis element C_w is the unique bar-invariant element
congruent to T_w modulo strictly-negative-degree lower terms:

    C_w = T_w + sum_{y < w} p_{y,w} T_y,   deg p_{y,w} < 0,  bar(C_w) = C_w.

Rows are computed by the multiplicative recursion: for w = z.s with l(w) =
l(z) + 1, the product C_z (T_s + q^{-L(s)}) is bar-invariant with unit leading
coefficient, so it equals C_w plus a combination of lower C_u with
bar-invariant coefficients.  Peeling its T-expansion downward splits each
coefficient uniquely into a bar-invariant correction and a strictly-negative
tail; the tails assemble the row of w and the corrections are exactly the
C-expansion of C_z C_s.  One pass therefore fills both caches and never
touches a Bruhat interval.  A missing unit leading term raises
InvariantViolationError rather than silently producing a wrong basis.

Structure constants h_{x,y,z} (C_x C_y = sum h_{x,y,z} C_z) are computed in
C-coordinates by a product recursion over the last letter of y, driven by the
one-generator table C_z C_s; this keeps supports cell-sized instead of
Bruhat-interval-sized and is what makes ball-scale scans tractable.

a_oracle(w, r) is the brute-force a-function: max deg h_{x,y,w} over all x, y
in the length-r ball.  It underestimates a(w) for small r and stabilizes once
the ball contains a maximizing pair; the stratification module provides the
structural value it is checked against.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Tuple

from . import hecke
from .coxeter import CoxeterSystem, Element
from .errors import ConfigError, InvariantViolationError
from .laurent import NEG_INF, LaurentPoly

_ONE = LaurentPoly.one()
_ZERO = LaurentPoly.zero()

CACHE_FORMAT_VERSION = 1


@dataclass
class AValueRecord:
    w: Element
    a: int
    method: str  # "structural" | "oracle"
    witness: Optional[Tuple[Element, Element]] = None  # (x, y) with deg h_{x,y,w} = a
    factor: Optional[Element] = None  # maximizing distinguished factor (structural)


def _sort_key(el: Element):
    return (el.length, el.word)


class KLTable:
    """Per-system store of KL rows plus memoized C-basis products."""

    def __init__(self, sys: CoxeterSystem):
        self.system = sys
        self._rows: dict[Element, dict[Element, LaurentPoly]] = {}
        self._ctg: dict = {}  # (word, s) -> tuple[(Element, poly)]
        self._hprod: dict = {}  # (word, word) -> dict[Element, poly]
        self.dirty = False

    # -- KL rows -----------------------------------------------------------

    def kl_row(self, w: Element) -> dict[Element, LaurentPoly]:
        """{y: p_{y,w}} over y <= w with nonzero p, including p_{w,w} = 1."""
        row = self._rows.get(w)
        if row is not None:
            return row
        if not w.word:
            row = {w: _ONE}
            self._rows[w] = row
            return row
        sys = self.system
        self._extend_row(sys._intern(w.word[:-1]), w.word[-1])
        return self._rows[w]

    def _extend_row(self, z: Element, s: int) -> tuple:
        """Peel C_z C_s = C_{zs} + sum_u m_u C_u for s not a descent of z.

        The left side is bar-invariant, so each remainder coefficient, taken
        in decreasing (length, ShortLex) order, splits uniquely into a
        bar-invariant correction m_u and a strictly-negative part p_{u,zs};
        the corrections are subtracted as they appear.  Fills the KL row of
        zs and the one-generator product cache in a single pass."""
        sys = self.system
        w = sys.right_mul(z, s)
        zrow = self.kl_row(z)
        rem = dict(hecke.tmul_gen(sys, zrow, s))
        qinv = LaurentPoly.q_power(-sys.weight(s))
        for u, p in zrow.items():
            cur = rem.get(u)
            prod = p * qinv
            rem[u] = prod if cur is None else cur + prod
        rem = hecke.clean(rem)
        if rem.pop(w, None) != _ONE:
            raise InvariantViolationError(
                f"C_z C_s lacks unit leading term at z={sys.word_str(z)}, s={s}"
            )
        row = {w: _ONE}
        conv = [(w, _ONE)]
        while rem:
            u = max(rem, key=_sort_key)
            alpha = rem.pop(u)
            pos = alpha.positive_part()
            m = alpha - alpha.negative_part() + pos.bar()
            p_u = alpha - m
            if p_u:
                row[u] = p_u
            if m:
                conv.append((u, m))
                for y, p in self.kl_row(u).items():
                    if y == u:
                        continue
                    cur = rem.get(y, _ZERO) - m * p
                    if cur:
                        rem[y] = cur
                    else:
                        rem.pop(y, None)
        self._rows[w] = row
        self.dirty = True
        res = tuple(sorted(conv, key=lambda kv: _sort_key(kv[0])))
        self._ctg[(z.word, s)] = res
        return res

    def p(self, y: Element, w: Element) -> LaurentPoly:
        return self.kl_row(w).get(y, _ZERO)

    # -- basis conversion ----------------------------------------------------

    def to_c_basis(self, tterms: dict[Element, LaurentPoly]) -> dict[Element, LaurentPoly]:
        """Rewrite a T-basis dict in the C basis by peeling leading terms
        in strictly decreasing (length, ShortLex) order."""
        rem = {w: p for w, p in tterms.items() if p}
        out: dict[Element, LaurentPoly] = {}
        while rem:
            zmax = max(rem, key=_sort_key)
            c = rem[zmax]
            out[zmax] = c
            for y, p in self.kl_row(zmax).items():
                cur = rem.get(y, _ZERO) - c * p
                if cur:
                    rem[y] = cur
                else:
                    rem.pop(y, None)
        return out

    def c_t_terms(self, w: Element) -> dict[Element, LaurentPoly]:
        """T-basis dict of C_w (alias of the KL row)."""
        return self.kl_row(w)

    # -- one-generator C products ---------------------------------------------

    def c_times_gen(self, z: Element, s: int) -> tuple:
        """C-basis expansion of C_z C_s as a tuple of (element, coefficient)."""
        key = (z.word, s)
        res = self._ctg.get(key)
        if res is not None:
            return res
        sys = self.system
        if s in sys.right_descents(z):
            w = sys.weight(s)
            res = ((z, LaurentPoly({w: 1, -w: 1})),)
            self._ctg[key] = res
            return res
        return self._extend_row(z, s)

    # -- full C products --------------------------------------------------------

    def h_product(self, x: Element, y: Element) -> dict[Element, LaurentPoly]:
        """C_x C_y in C-coordinates: {z: h_{x,y,z}}."""
        if not y.word:
            return {x: _ONE}
        if not x.word:
            return {y: _ONE}
        key = (x.word, y.word)
        res = self._hprod.get(key)
        if res is not None:
            return res
        sys = self.system
        if y.length == 1:
            res = dict(self.c_times_gen(x, y.word[0]))
        else:
            s = y.word[-1]
            y1 = sys._intern(y.word[:-1])
            base = self.h_product(x, y1)
            acc: dict[Element, LaurentPoly] = {}
            for z, hz in base.items():
                for u, c in self.c_times_gen(z, s):
                    cur = acc.get(u)
                    prod = hz * c
                    acc[u] = prod if cur is None else cur + prod
            # C_{y1} C_s = C_y + corrections; subtract x-products of corrections
            for u, m in self.c_times_gen(y1, s):
                if u is y or u.word == y.word:
                    continue
                sub = self.h_product(x, u)
                for z2, h2 in sub.items():
                    cur = acc.get(z2)
                    prod = h2 * m
                    acc[z2] = (-prod) if cur is None else cur - prod
            res = hecke.clean(acc)
        self._hprod[key] = res
        return res

    def h(self, x: Element, y: Element, z: Element) -> LaurentPoly:
        return self.h_product(x, y).get(z, _ZERO)

    def drop_product_slice(self, x: Element) -> None:
        """Forget the memoized products C_x C_y (every y).  The h recursion
        peels letters of y with x fixed, so a slice is self-contained and can
        be dropped once a scan is done with it; KL rows and one-generator
        products stay (they are shared across slices)."""
        xw = x.word
        stale = [k for k in self._hprod if k[0] == xw]
        for k in stale:
            del self._hprod[k]

    # -- persistence -------------------------------------------------------------

    def save_cache(self, path) -> None:
        sys = self.system
        rows = []
        for w in sorted(self._rows, key=_sort_key):
            row = self._rows[w]
            rows.append(
                [
                    list(w.word),
                    [
                        [list(y.word), list(map(list, p.to_pairs()))]
                        for y, p in sorted(row.items(), key=lambda kv: _sort_key(kv[0]))
                    ],
                ]
            )
        payload = {
            "format_version": CACHE_FORMAT_VERSION,
            "system_hash": sys.content_hash(),
            "rows": rows,
        }
        with open(path, "w") as fh:
            json.dump(payload, fh)
        self.dirty = False

    def load_cache(self, path) -> int:
        """Load rows from a cache file; returns number of rows loaded.

        Refuses (ConfigError) on format-version or system-hash mismatch.
        """
        with open(path) as fh:
            payload = json.load(fh)
        if payload.get("format_version") != CACHE_FORMAT_VERSION:
            raise ConfigError(
                f"cache format {payload.get('format_version')!r} != {CACHE_FORMAT_VERSION}"
            )
        if payload.get("system_hash") != self.system.content_hash():
            raise ConfigError("cache was built for a different system (hash mismatch)")
        sys = self.system
        n = 0
        for w_word, entries in payload["rows"]:
            w = sys.element([int(s) for s in w_word])
            row = {}
            for y_word, pairs in entries:
                row[sys.element([int(s) for s in y_word])] = LaurentPoly.from_pairs(
                    (int(e), int(c)) for e, c in pairs
                )
            self._rows[w] = row
            n += 1
        return n


def get_table(sys: CoxeterSystem) -> KLTable:
    """The per-system shared table (modules that cooperate on one system reuse it)."""
    t = sys._extra_caches.get("kl_table")
    if t is None:
        t = KLTable(sys)
        sys._extra_caches["kl_table"] = t
    return t


# -- spec-level operations -------------------------------------------------------


def kl_basis(sys: CoxeterSystem, table: KLTable, w: Element) -> hecke.HeckeElement:
    """C_w expanded in the T basis."""
    return hecke.HeckeElement("T", dict(table.kl_row(w)))


def h_const(sys: CoxeterSystem, table: KLTable, x: Element, y: Element, z: Element) -> LaurentPoly:
    return table.h(x, y, z)


def a_oracle(
    sys: CoxeterSystem,
    table: KLTable,
    w: Element,
    search_radius: int,
    prune: bool = True,
) -> AValueRecord:
    """Brute-force a(w): max deg h_{x,y,w} over x, y of length <= search_radius.

    With prune=True the scan uses descent monotonicity (a nonzero h_{x,y,w}
    forces L(x) <= L(w) and R(y) <= R(w)), which is exact and cuts the pair
    domain by roughly rank^2; prune=False scans everything.
    """
    if search_radius < w.length:
        raise ValueError("search_radius must be at least l(w)")
    ball = sys.ball(search_radius)
    lw = sys.left_descents(w)
    rw = sys.right_descents(w)
    xs = [x for x in ball if not prune or sys.left_descents(x) <= lw]
    ys = [y for y in ball if not prune or sys.right_descents(y) <= rw]
    best = NEG_INF
    witness = None
    for x in xs:
        for y in ys:
            h = table.h_product(x, y).get(w)
            if h is not None:
                d = h.degree()
                if d > best:
                    best = d
                    witness = (x, y)
    if witness is None:
        raise InvariantViolationError("oracle found no nonzero h_{x,y,w} at all")
    return AValueRecord(w=w, a=int(best), method="oracle", witness=witness)


def a_oracle_scan(
    sys: CoxeterSystem,
    table: KLTable,
    targets,
    domain,
    pair_radius: Optional[dict] = None,
) -> dict[Element, AValueRecord]:
    """Brute-force a(w) for many targets in one sweep over (x, y) pairs.

    Equivalent to running a_oracle per target with the given pair domain,
    but each product row C_x C_y is computed exactly once and the per-x
    product slice is dropped afterwards, so memory stays proportional to
    one slice instead of |domain|^2 rows.  With pair_radius, a pair only
    counts toward target w when both factors lie in the length-
    pair_radius[w] ball, so one sweep evaluates per-target oracles at
    different radii.  Targets that no pair reaches are absent from the
    result (the caller decides whether that is an error for its domain).
    """
    best: dict[Element, tuple] = {w: (NEG_INF, None) for w in targets}
    for x in domain:
        for y in domain:
            pl = max(x.length, y.length)
            for w, h in table.h_product(x, y).items():
                slot = best.get(w)
                if slot is not None and (
                    pair_radius is None or pl <= pair_radius[w]
                ):
                    d = h.degree()
                    if d > slot[0]:
                        best[w] = (d, (x, y))
        table.drop_product_slice(x)
    return {
        w: AValueRecord(w=w, a=int(d), method="oracle", witness=wit)
        for w, (d, wit) in best.items()
        if wit is not None
    }


def delta_and_n(sys: CoxeterSystem, table: KLTable, w: Element) -> tuple[int, int]:
    """(Delta(w), n_w) from p_{e,w} = n_w q^{-Delta(w)} + lower order."""
    p_e = table.p(sys.identity, w) if w.word else _ONE
    if not p_e:
        raise InvariantViolationError(
            f"p_(e,w) = 0 at w={sys.word_str(w)}; Delta undefined"
        )
    delta = -p_e.degree()
    return int(delta), p_e.coefficient(-int(delta))


def gamma(
    sys: CoxeterSystem,
    table: KLTable,
    x: Element,
    y: Element,
    z: Element,
    a_of_z: int,
) -> int:
    """gamma_{x,y,z^-1}: the q^{a(z)} coefficient of h_{x,y,z}."""
    return table.h(x, y, z).coefficient(a_of_z)


def distinguished_involutions_in_ball(
    sys: CoxeterSystem, table: KLTable, radius: int
) -> list[Element]:
    """All z with l(z) <= radius and a(z) = Delta(z), i.e. the set D cap ball."""
    from .strata import get_stratification  # local: avoids import cycle

    strat = get_stratification(sys)
    out = []
    for z in sys.ball(radius):
        delta, _ = delta_and_n(sys, table, z)
        if strat.omega_level(z) == delta:
            out.append(z)
    return out
