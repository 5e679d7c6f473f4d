"""Hecke algebra of a weighted Coxeter system, in the standard T-basis.

The algebra H over A = Z[q, q^-1] has basis {T_w} with

    T_w T_w' = T_{ww'}            when l(ww') = l(w) + l(w'),
    T_s^2    = 1 + xi_s T_s,      xi_s = q^{L(s)} - q^{-L(s)}.

So T_s is invertible: T_s^{-1} = T_s - xi_s.  The bar involution is the ring
involution q -> q^-1 extended by bar(T_w) = (T_{w^-1})^{-1}; on a reduced word
w = s_1...s_k this is the ordered product (T_{s_1} - xi_{s_1})...(T_{s_k} - xi_{s_k}).

tau is the coefficient-of-T_e functional; f_{x,y,z} denotes the T_z coefficient
of T_x T_y, so tau(T_x T_y T_z) = f_{x,y,z^-1} is symmetric under cyclic shifts.

Products of basis elements are memoized per system (keyed off the system's
cache dict), because the downstream KL / quotient machinery hits the same small
products enormously often.
"""

from __future__ import annotations

from .coxeter import CoxeterSystem, Element
from .errors import BasisMismatchError
from .laurent import LaurentPoly, add_scaled_into, xi

_ONE = LaurentPoly.one()


class HeckeElement:
    """A finitely supported A-linear combination of basis symbols.

    basis is one of "T", "C" (full algebra) or "NT", "NC" (quotient images);
    mixing bases in arithmetic raises BasisMismatchError.
    """

    __slots__ = ("basis", "terms")

    def __init__(self, basis: str, terms: dict[Element, LaurentPoly]):
        self.basis = basis
        self.terms = {w: p for w, p in terms.items() if p}

    def __eq__(self, other):
        return (
            isinstance(other, HeckeElement)
            and self.basis == other.basis
            and self.terms == other.terms
        )

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if not isinstance(other, HeckeElement):
            return NotImplemented
        if self.basis != other.basis:
            raise BasisMismatchError(f"{self.basis} + {other.basis}")
        terms = dict(self.terms)
        for w, p in other.terms.items():
            terms[w] = terms.get(w, LaurentPoly.zero()) + p
        return HeckeElement(self.basis, terms)

    def __sub__(self, other):
        if not isinstance(other, HeckeElement):
            return NotImplemented
        if self.basis != other.basis:
            raise BasisMismatchError(f"{self.basis} - {other.basis}")
        terms = dict(self.terms)
        for w, p in other.terms.items():
            terms[w] = terms.get(w, LaurentPoly.zero()) - p
        return HeckeElement(self.basis, terms)

    def scale(self, factor) -> "HeckeElement":
        if isinstance(factor, int):
            factor = LaurentPoly.from_int(factor)
        return HeckeElement(self.basis, {w: p * factor for w, p in self.terms.items()})

    def coefficient(self, w: Element) -> LaurentPoly:
        return self.terms.get(w, LaurentPoly.zero())

    def support(self) -> list[Element]:
        return sorted(self.terms)

    def degree(self):
        """Max Laurent degree over all coefficients (NEG_INF if zero)."""
        degs = [p.degree() for p in self.terms.values()]
        return max(degs) if degs else LaurentPoly.zero().degree()

    def pretty(self, sys: CoxeterSystem) -> str:
        if not self.terms:
            return "0"
        bits = []
        for w in sorted(self.terms):
            p = self.terms[w]
            bits.append(f"({p}) {self.basis}[{sys.word_str(w)}]")
        return " + ".join(bits)

    def __repr__(self):
        return f"HeckeElement({self.basis}, {len(self.terms)} terms)"


# -- per-system caches ---------------------------------------------------------


def _caches(sys: CoxeterSystem) -> dict:
    c = sys._extra_caches.get("hecke")
    if c is None:
        c = {
            "xi": {},
            "tmul_gen": {},  # (word, s) -> tuple of (Element, poly)
            "tprod": {},  # (word, word) -> dict
            "bar_t": {},  # word -> dict
        }
        sys._extra_caches["hecke"] = c
    return c


def xi_poly(sys: CoxeterSystem, s: int) -> LaurentPoly:
    cache = _caches(sys)["xi"]
    p = cache.get(s)
    if p is None:
        p = xi(sys.weights[s])
        cache[s] = p
    return p


# -- raw dict arithmetic (internal) --------------------------------------------


def acc_add(acc: dict, w: Element, p: LaurentPoly) -> None:
    cur = acc.get(w)
    acc[w] = p if cur is None else cur + p


def acc_add_scaled(acc: dict, terms: dict, factor: LaurentPoly) -> None:
    if not factor:
        return
    for w, p in terms.items():
        cur = acc.get(w)
        prod = p * factor
        acc[w] = prod if cur is None else cur + prod


def clean(acc: dict) -> dict:
    return {w: p for w, p in acc.items() if p}


def tmul_gen(sys: CoxeterSystem, terms: dict, s: int) -> dict:
    """Right-multiply a T-basis dict by T_s."""
    cache = _caches(sys)["tmul_gen"]
    out: dict[Element, LaurentPoly] = {}
    for u, p in terms.items():
        key = (u.word, s)
        exp = cache.get(key)
        if exp is None:
            us = sys.right_mul(u, s)
            if us.length > u.length:
                exp = ((us, _ONE),)
            else:
                exp = ((us, _ONE), (u, xi_poly(sys, s)))
            cache[key] = exp
        for w, c in exp:
            cur = out.get(w)
            prod = p * c
            out[w] = prod if cur is None else cur + prod
    return clean(out)


def t_product(sys: CoxeterSystem, x: Element, y: Element) -> dict:
    """T_x T_y as a T-basis dict; memoized on (x, y)."""
    if not y.word:
        return {x: _ONE}
    if not x.word:
        return {y: _ONE}
    cache = _caches(sys)["tprod"]
    key = (x.word, y.word)
    res = cache.get(key)
    if res is None:
        s = y.word[-1]
        y1 = sys._intern(y.word[:-1])
        res = tmul_gen(sys, t_product(sys, x, y1), s)
        cache[key] = res
    return res


def bar_t_dict(sys: CoxeterSystem, w: Element) -> dict:
    """bar(T_w) as a T-basis dict (the R-matrix column of w); memoized."""
    cache = _caches(sys)["bar_t"]
    res = cache.get(w.word)
    if res is None:
        if not w.word:
            res = {w: _ONE}
        else:
            s = w.word[-1]
            w1 = sys._intern(w.word[:-1])
            prev = bar_t_dict(sys, w1)
            out = dict(tmul_gen(sys, prev, s))
            neg_xi = -xi_poly(sys, s)
            for u, p in prev.items():
                cur = out.get(u)
                prod = p * neg_xi
                out[u] = prod if cur is None else cur + prod
            res = clean(out)
        cache[w.word] = res
    return res


# -- public T-basis operations -------------------------------------------------


def t_one(sys: CoxeterSystem) -> HeckeElement:
    return HeckeElement("T", {sys.identity: _ONE})


def t_element(sys: CoxeterSystem, w: Element) -> HeckeElement:
    return HeckeElement("T", {w: _ONE})


def mul_T(sys: CoxeterSystem, h1: HeckeElement, h2: HeckeElement) -> HeckeElement:
    if h1.basis != "T" or h2.basis != "T":
        raise BasisMismatchError("mul_T needs both operands in the T basis")
    acc: dict[Element, LaurentPoly] = {}
    for x, p in h1.terms.items():
        for y, r in h2.terms.items():
            factor = p * r
            if factor:
                acc_add_scaled(acc, t_product(sys, x, y), factor)
    return HeckeElement("T", clean(acc))


def f_const(sys: CoxeterSystem, x: Element, y: Element, z: Element) -> LaurentPoly:
    """f_{x,y,z}: the T_z coefficient of T_x T_y."""
    return t_product(sys, x, y).get(z, LaurentPoly.zero())


def bar_involution(sys: CoxeterSystem, h: HeckeElement) -> HeckeElement:
    if h.basis != "T":
        raise BasisMismatchError("bar_involution operates on the T basis")
    acc: dict[Element, LaurentPoly] = {}
    for w, p in h.terms.items():
        acc_add_scaled(acc, bar_t_dict(sys, w), p.bar())
    return HeckeElement("T", clean(acc))


def tau(sys: CoxeterSystem, h: HeckeElement) -> LaurentPoly:
    """Coefficient of the identity basis element."""
    return h.terms.get(sys.identity, LaurentPoly.zero())


def anti_involution(sys: CoxeterSystem, h: HeckeElement) -> HeckeElement:
    """The A-linear anti-automorphism T_w -> T_{w^-1} (flat map)."""
    acc: dict[Element, LaurentPoly] = {}
    for w, p in h.terms.items():
        acc_add(acc, sys.inverse(w), p)
    return HeckeElement(h.basis, clean(acc))
