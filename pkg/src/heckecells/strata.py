"""Stratification of W by distinguished factors, and the structural a-function.

The finite set D of distinguished elements depends on the diagram family:

* complete graph: the longest elements w_J of the finite standard parabolics
  (rank <= 2: the identity, each generator, and w_{st} for each finite bond)
  together with one subregular element per even finite bond with unequal
  weights: d_{st} = t s t ... t of length m_st - 1 starting with the heavier
  generator t.  Its level is a'(d) = L(t) + (m_st/2 - 1)(L(t) - L(s)).
* right-angled: the products of commuting cliques of generators, with
  a'(d) = L(d).

The stratum level of w is

    omega_level(w) = max { a'(d) : some reduced word of w contains some
                           reduced word of d as a contiguous factor },

and Omega_N = {w : omega_level(w) = N}.  The structural a-function is
a(w) = omega_level(w); the oracle in `kl` provides the independent check.

U_d = {y : dy in Omega_{a'(d)}, lengths additive} indexes a right-cell slice,
and B_d those b with b^{-1} in U_d such that every proper length-additive
prefix of bd lies strictly below level a'(d).  Right cells are the sets
b d U_d; each w in Omega_N has a unique such label (b, d).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Tuple

from .coxeter import INFINITY, FAMILY_COMPLETE, CoxeterSystem, Element
from .errors import InvariantViolationError
from .kl import AValueRecord


@dataclass(frozen=True)
class DistinguishedElement:
    element: Element
    a_prime: int
    kind: str  # "longest_wj" | "subregular" | "clique"
    support: Tuple[int, ...]  # generator indices of the defining subset

    def __repr__(self):
        sys = self.element.system
        return f"D({sys.word_str(self.element)}; a'={self.a_prime}; {self.kind})"


@dataclass(frozen=True)
class BallSet:
    """A set computed inside a length ball; carries the radius it is valid for."""

    elements: Tuple[Element, ...]
    radius: int

    def __iter__(self) -> Iterator[Element]:
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in self.elements


def _alternating_word(first: int, second: int, length: int) -> tuple[int, ...]:
    return tuple((first, second)[k % 2] for k in range(length))


def _build_d(sys: CoxeterSystem) -> list[DistinguishedElement]:
    out = [DistinguishedElement(sys.identity, 0, "longest_wj", ())]
    n = sys.rank
    if sys.family == FAMILY_COMPLETE:
        for s in range(n):
            out.append(
                DistinguishedElement(sys.generator(s), sys.weight(s), "longest_wj", (s,))
            )
        for s in range(n):
            for t in range(s + 1, n):
                m = sys.m(s, t)
                if m is INFINITY:
                    continue
                wj = sys.element(_alternating_word(s, t, m))
                out.append(
                    DistinguishedElement(wj, wj.weight_length, "longest_wj", (s, t))
                )
                if m % 2 == 0 and sys.weight(s) != sys.weight(t):
                    lo, hi = (s, t) if sys.weight(s) < sys.weight(t) else (t, s)
                    d = sys.element(_alternating_word(hi, lo, m - 1))
                    level = sys.weight(hi) + (m // 2 - 1) * (
                        sys.weight(hi) - sys.weight(lo)
                    )
                    out.append(DistinguishedElement(d, level, "subregular", (s, t)))
    else:
        # right-angled: enumerate commuting cliques (the identity is the empty one)
        cliques: list[tuple[int, ...]] = []

        def grow(base: tuple[int, ...], candidates: list[int]) -> None:
            for i, s in enumerate(candidates):
                cl = base + (s,)
                cliques.append(cl)
                grow(cl, [t for t in candidates[i + 1 :] if sys.m(s, t) == 2])

        grow((), list(range(n)))
        for cl in cliques:
            d = sys.element(cl)
            out.append(DistinguishedElement(d, d.weight_length, "clique", cl))
    out.sort(key=lambda de: (de.a_prime, de.element.length, de.element.word))
    return out


class Stratification:
    def __init__(self, sys: CoxeterSystem):
        self.system = sys
        self.D = _build_d(sys)
        self.n0 = max(de.a_prime for de in self.D)
        self.levels = sorted({de.a_prime for de in self.D})
        self._level_cache: dict[Element, int] = {}
        self._factor_cache: dict = {}
        self._label_cache: dict = {}
        # reduced-word sets of the distinguished elements, precomputed
        self._dwords = {
            de.element: sorted(sys.reduced_words(de.element)) for de in self.D
        }

    def d_at_level(self, n: int) -> list[DistinguishedElement]:
        return [de for de in self.D if de.a_prime == n]

    def d_record(self, d: Element) -> DistinguishedElement:
        for de in self.D:
            if de.element == d:
                return de
        raise ValueError(f"{d!r} is not a distinguished element")

    # -- factor containment and levels ---------------------------------------

    def contains_reduced_factor(self, w: Element, d: Element) -> bool:
        """Does some reduced word of w contain some reduced word of d as a
        contiguous subword?"""
        if not d.word:
            return True
        if d.length > w.length:
            return False
        key = (w, d)
        res = self._factor_cache.get(key)
        if res is None:
            dwords = self._dwords.get(d)
            if dwords is None:
                dwords = sorted(self.system.reduced_words(d))
            dset = set(dwords)
            k = d.length
            res = False
            for u in self.system.reduced_words(w):
                for i in range(len(u) - k + 1):
                    if u[i : i + k] in dset:
                        res = True
                        break
                if res:
                    break
            self._factor_cache[key] = res
        return res

    def omega_level(self, w: Element) -> int:
        lvl = self._level_cache.get(w)
        if lvl is None:
            lvl = 0
            for de in self.D:  # sorted ascending by a'
                if de.a_prime > lvl and self.contains_reduced_factor(w, de.element):
                    lvl = de.a_prime
            self._level_cache[w] = lvl
        return lvl

    def a_structural(self, w: Element, with_witness: bool = False) -> AValueRecord:
        n = self.omega_level(w)
        factor = None
        witness = None
        for de in self.d_at_level(n):
            if self.contains_reduced_factor(w, de.element):
                factor = de.element
                break
        if with_witness:
            b, d, y = self.right_label(w)
            sys = self.system
            witness = (sys.mul(b, d), sys.mul(d, y))
        return AValueRecord(w=w, a=n, method="structural", witness=witness, factor=factor)

    # -- U_d, B_d ---------------------------------------------------------------

    def in_U(self, d: Element, y: Element) -> bool:
        sys = self.system
        dy = sys.mul(d, y)
        return dy.length == d.length + y.length and self.omega_level(dy) == self.omega_level(d)

    def in_B(self, d: Element, b: Element) -> bool:
        sys = self.system
        n = self.omega_level(d)
        bd = sys.mul(b, d)
        if bd.length != b.length + d.length or self.omega_level(bd) != n:
            return False
        # every proper length-additive factorization bd = w v (v != e) needs
        # omega_level(w) < n; the w are exactly proper prefixes of reduced words
        seen: set[tuple] = set()
        for u in sys.reduced_words(bd):
            for k in range(len(u) - 1, 0, -1):
                pref = u[:k]
                if pref in seen:
                    break  # shorter prefixes of this word already recorded
                seen.add(pref)
        for pref in seen:
            if self.omega_level(sys._intern_reduced(pref)) >= n:
                return False
        return True

    def compute_Ud(self, d: Element, radius: int) -> BallSet:
        els = tuple(y for y in self.system.ball(radius) if self.in_U(d, y))
        return BallSet(els, radius)

    def compute_Bd(self, d: Element, radius: int) -> BallSet:
        els = tuple(b for b in self.system.ball(radius) if self.in_B(d, b))
        return BallSet(els, radius)

    # -- cell labels ---------------------------------------------------------------

    def right_label(self, w: Element) -> tuple[Element, Element, Element]:
        """The unique (b, d, y) with w = b d y length-additively, d in D at
        omega_level(w), b in B_d, y in U_d."""
        res = self._label_cache.get(w)
        if res is None:
            sys = self.system
            n = self.omega_level(w)
            found = {}
            for de in self.d_at_level(n):
                d = de.element
                k = d.length
                if k > w.length:
                    continue
                dset = set(self._dwords[d])
                cands = set()
                for u in sys.reduced_words(w):
                    for i in range(len(u) - k + 1):
                        if u[i : i + k] in dset:
                            cands.add((u[:i], u[i + k :]))
                for pre, post in sorted(cands):
                    b = sys._intern_reduced(pre)
                    y = sys._intern_reduced(post)
                    if (b, d) in found:
                        continue
                    if self.in_B(d, b) and self.in_U(d, y):
                        found[(b, d)] = y
            if len(found) != 1:
                labels = sorted(
                    f"({sys.word_str(b)}, {sys.word_str(d)})" for b, d in found
                )
                raise InvariantViolationError(
                    f"element {w!r} has {len(found)} right-cell labels: {labels}"
                )
            (b, d), y = next(iter(found.items()))
            res = (b, d, y)
            self._label_cache[w] = res
        return res

    def left_label(self, w: Element) -> tuple[Element, Element, Element]:
        """(b, d, y) for w^-1; w lies in the left cell (U_d^-1) d b^-1."""
        return self.right_label(self.system.inverse(w))


def get_stratification(sys: CoxeterSystem) -> Stratification:
    st = sys._extra_caches.get("strat")
    if st is None:
        st = Stratification(sys)
        sys._extra_caches["strat"] = st
    return st


# -- spec-level wrappers -----------------------------------------------------------


def build_D(sys: CoxeterSystem) -> list[DistinguishedElement]:
    return get_stratification(sys).D


def omega_level(sys: CoxeterSystem, w: Element) -> int:
    return get_stratification(sys).omega_level(w)


def a_structural(sys: CoxeterSystem, w: Element, with_witness: bool = False) -> AValueRecord:
    return get_stratification(sys).a_structural(w, with_witness)


def contains_reduced_factor(sys: CoxeterSystem, w: Element, d: Element) -> bool:
    return get_stratification(sys).contains_reduced_factor(w, d)


def compute_Ud(sys: CoxeterSystem, d: Element, radius: int) -> BallSet:
    return get_stratification(sys).compute_Ud(d, radius)


def compute_Bd(sys: CoxeterSystem, d: Element, radius: int) -> BallSet:
    return get_stratification(sys).compute_Bd(d, radius)
