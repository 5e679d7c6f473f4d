"""Closed-form oracle for finite dihedral groups.

Conventions.  The group has generators s, t with (st)^m = e, m >= 3 finite,
and weights a = L(s) <= b = L(t); inputs with a > b are relabeled on entry.
Unequal weights force m even.  w(r, n) denotes the alternating word of length
n starting with r; w(n, r) the one ending with r.  w_I is the longest element
(length m) and, when a < b, d_I = w(t, m - 1) is the t-heavy element of
length m - 1.  The signed weight L' negates the light generator:

    L'(w) = (#t in w) * b - (#s in w) * a,

well defined because even-bond braid moves preserve letter counts.  On the
a-function side: with equal weights the two-sided cells are {e}, the middle,
{w_I} with a-values 0, a, L(w_I); with a < b they are {e}, {s}, the middle,
{d_I}, {w_I} with a-values 0, a, b, L'(d_I), L(w_I).

The F-recursion.  For u, v != w_I set

    F(u, v) = f_{u,v,d_I} - p_{d_I,w_I} f_{u,v,w_I},

the coefficient of T_{u^-1} in T_v (T_{d_I} - q^{-a} T_{w_I}).  Writing
U_{m-1-k} = T_{x} - q^{-a} T_{y} for the pair obtained by stripping k letters
from the left of (d_I, w_I), one has a triangular matrix (lambda_{i,j}) with

    T_{w(i, t)} U_{m-1} = sum_j lambda_{i,j} U_{m-1-j},

and F(u, v) = lambda_{l(v), m-1-l(u)} when su > u and vs > v; a factor
-q^{-a} strips an s from either side otherwise.  With mu_i = lambda_{i,0}:

    mu_0 = 1,
    mu_i = -q^{-a} mu_{i-1}                                   (i > 0 even),
    mu_i = xi_b sum_n mu_{i-1-4n} + xi_a sum_n mu_{i-3-4n}    (i odd),

    lambda_{i,j} = mu_{i-j}          if i + j even, or i odd and j even,
    lambda_{i,j} = xi_a              if i even, j odd, i - j = 1,
    lambda_{i,j} = q^{-2a} mu_{i-j-2} if i even, j odd, i - j >= 3,

and deg mu_k = L'(w(k, t)).  Everything here is checked against the general
engine in the tests; the closed forms are the point of the module.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coxeter import CoxeterSystem, Element
from .errors import ConfigError
from .laurent import NEG_INF, LaurentPoly, xi


class DihedralParams:
    """A finite dihedral system with the lighter generator named s."""

    def __init__(self, m: int, a: int, b: int):
        if not isinstance(m, int) or m < 3:
            raise ConfigError("m must be a finite integer >= 3")
        if a > b:
            a, b = b, a
        if a != b and m % 2 == 1:
            raise ConfigError("odd m forces equal weights")
        self.m = m
        self.a = a
        self.b = b
        self.system = CoxeterSystem(["s", "t"], [[1, m], [m, 1]], [a, b], "complete")
        self.s = self.system.generator(0)
        self.t = self.system.generator(1)
        self.w_I = self.w_from("t", m)
        self.d_I = self.w_from("t", m - 1) if a < b else None
        self._mu: dict[int, LaurentPoly] = {0: LaurentPoly.one()}

    # -- words ------------------------------------------------------------------

    def w_from(self, r: str, n: int) -> Element:
        """Alternating word of length n starting with r."""
        i = self.system.gen_index(r)
        return self.system.element(tuple((i, 1 - i)[k % 2] for k in range(n)))

    def w_to(self, n: int, r: str) -> Element:
        """Alternating word of length n ending with r."""
        i = self.system.gen_index(r)
        return self.system.element(tuple((i, 1 - i)[(n - 1 - k) % 2] for k in range(n)))

    def lprime(self, w: Element) -> int:
        nt = sum(1 for i in w.word if i == 1)
        return nt * self.b - (len(w.word) - nt) * self.a

    def lprime_k(self, k: int) -> int:
        """L'(w(k, t)): the k-letter word ending in t."""
        return (k + 1) // 2 * self.b - k // 2 * self.a

    # -- cells -------------------------------------------------------------------

    def cells(self) -> list[tuple[frozenset, int]]:
        """Two-sided cells with their a-values, ascending."""
        sys = self.system
        everyone = set(sys.full_group(self.m + 1))
        e = sys.identity
        if self.a == self.b:
            middle = everyone - {e, self.w_I}
            out = [
                (frozenset({e}), 0),
                (frozenset(middle), self.a),
                (frozenset({self.w_I}), self.w_I.weight_length),
            ]
        else:
            middle = everyone - {e, self.s, self.d_I, self.w_I}
            out = [
                (frozenset({e}), 0),
                (frozenset({self.s}), self.a),
                (frozenset(middle), self.b),
                (frozenset({self.d_I}), self.lprime(self.d_I)),
                (frozenset({self.w_I}), self.w_I.weight_length),
            ]
        return out

    def deg_p_to_dI(self, v: Element) -> int:
        """deg p_{v, d_I} = L'(v) - L'(d_I)."""
        if self.a == self.b:
            raise ValueError("d_I requires unequal weights")
        if not self.system.bruhat_leq(v, self.d_I):
            raise ValueError(f"'{self.system.word_str(v)}' is not below d_I")
        return self.lprime(v) - self.lprime(self.d_I)

    # -- the mu / lambda / F recursions -------------------------------------------

    def mu(self, i: int) -> LaurentPoly:
        if i < 0:
            return LaurentPoly.zero()
        res = self._mu.get(i)
        if res is None:
            if i % 2 == 0:
                res = self.mu(i - 1) * LaurentPoly({-self.a: -1})
            else:
                res = LaurentPoly.zero()
                n = 0
                while i - 1 - 4 * n >= 0:
                    res = res + xi(self.b) * self.mu(i - 1 - 4 * n)
                    n += 1
                n = 0
                while i - 3 - 4 * n >= 0:
                    res = res + xi(self.a) * self.mu(i - 3 - 4 * n)
                    n += 1
            self._mu[i] = res
        return res

    def lam(self, i: int, j: int) -> LaurentPoly:
        if j > i:
            return LaurentPoly.zero()
        if (i + j) % 2 == 0 or (i % 2 == 1 and j % 2 == 0):
            return self.mu(i - j)
        if i - j == 1:
            return xi(self.a)
        return self.mu(i - j - 2) * LaurentPoly.q_power(-2 * self.a)

    def F_uv(self, u: Element, v: Element) -> LaurentPoly:
        """f_{u,v,d_I} - p_{d_I,w_I} f_{u,v,w_I} by the lambda recursion."""
        if self.a == self.b:
            raise ValueError("F(u, v) requires unequal weights")
        if u == self.w_I or v == self.w_I:
            raise ValueError("F(u, v) is defined for u, v != w_I")
        sys = self.system
        factor = LaurentPoly.one()
        minus_qa = LaurentPoly({-self.a: -1})
        while v.word and v.word[-1] == 0:  # vs < v
            factor = factor * minus_qa
            v = sys.right_mul(v, 0)
        while u.word and u.word[0] == 0:  # su < u
            factor = factor * minus_qa
            u = sys.left_mul(0, u)
        return factor * self.lam(v.length, self.m - 1 - u.length)


@dataclass
class NFDegreeCase:
    """Outcome of classifying one quotient structure constant {}^N f_{u,v,z}."""

    case: str  # "i", "ii", or "iii-1" ... "iii-5"
    degree: object  # actual degree (int, or NEG_INF when zero)
    bound: int
    consistent: bool
    matches: tuple = ()


def classify_nf_degree(p: DihedralParams, N: int, u: Element, v: Element, z: Element) -> NFDegreeCase:
    """Which case of the degree trichotomy a triple falls in.

    z must be one of e, s, t, st, ts.  The actual degree comes from the
    general quotient engine; the record states the case plus whether the
    actual degree obeys the case's bound and side conditions.
    """
    from .quotient import QuotientContext  # deferred: avoids import cycle

    sys = p.system
    ctx = QuotientContext(sys, N, radius=2 * p.m + 2)
    actual = ctx.nf_const(u, v, z).degree()
    e = sys.identity

    if z == e:
        return NFDegreeCase("i", actual, 0, actual <= 0)

    if z.length == 1:
        r = z.word[0]
        bound = sys.weight(r)
        if actual < bound:
            return NFDegreeCase("ii", actual, bound, True)
        side = r in sys.right_descents(v) and r in sys.left_descents(u)
        return NFDegreeCase("ii", actual, bound, actual == bound and side)

    if z.length != 2:
        raise ValueError("z must be one of e, s, t, st, ts")
    s1, s2 = z.word
    L1, L2 = sys.weight(s1), sys.weight(s2)
    if actual <= 0:
        return NFDegreeCase("iii-1", actual, 0, True)
    matches = []
    if actual == L1 + L2 and u == p.w_I and v == p.w_I:
        matches.append("iii-2")
    if actual == L1 and s1 in sys.left_descents(u) and v == sys.right_mul(sys.inverse(u), s2):
        matches.append("iii-3")
    if actual == L2 and s2 in sys.right_descents(v) and u == sys.left_mul(s1, sys.inverse(v)):
        matches.append("iii-4")
    if actual == abs(L1 - L2) and p.d_I is not None and u == p.d_I and v == p.d_I:
        matches.append("iii-5")
    if not matches:
        return NFDegreeCase("iii-?", actual, 0, False)
    return NFDegreeCase(matches[0], actual, actual, True, tuple(matches))


def dihedral_cells(p: DihedralParams) -> list[tuple[frozenset, int]]:
    return p.cells()


def deg_p_to_dI(p: DihedralParams, v: Element) -> int:
    return p.deg_p_to_dI(v)


def F_uv(p: DihedralParams, u: Element, v: Element) -> LaurentPoly:
    return p.F_uv(u, v)
