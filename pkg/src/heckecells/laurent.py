"""Sparse integer Laurent polynomials in one indeterminate q.

This is the coefficient ring A = Z[q, q^-1] underlying the whole package.
Polynomials are immutable-by-convention dicts {exponent: coefficient} with all
zero coefficients stripped, so equality and degree are well defined.  The
degree of the zero polynomial is a distinguished NEG_INF value (never an
integer), which makes `max` over term degrees behave correctly in the many
"degree bound" arguments downstream.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Tuple

NEG_INF = float("-inf")


class LaurentPoly:
    __slots__ = ("c",)

    def __init__(self, coeffs: dict[int, int] | None = None, *, _trusted: bool = False):
        if coeffs is None:
            self.c = {}
        elif _trusted:
            self.c = coeffs
        else:
            self.c = {int(e): int(v) for e, v in coeffs.items() if v}

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return _ZERO

    @classmethod
    def one(cls) -> "LaurentPoly":
        return _ONE

    @classmethod
    def q_power(cls, n: int, coeff: int = 1) -> "LaurentPoly":
        if coeff == 0:
            return _ZERO
        return cls({n: coeff}, _trusted=True)

    @classmethod
    def from_int(cls, n: int) -> "LaurentPoly":
        return cls.q_power(0, n)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[int, int]]) -> "LaurentPoly":
        c: dict[int, int] = {}
        for e, v in pairs:
            c[e] = c.get(e, 0) + v
        return cls(c)

    # -- ring operations --------------------------------------------------

    def __add__(self, other) -> "LaurentPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.c:
            return other
        if not other.c:
            return self
        c = dict(self.c)
        for e, v in other.c.items():
            nv = c.get(e, 0) + v
            if nv:
                c[e] = nv
            elif e in c:
                del c[e]
        return LaurentPoly(c, _trusted=True)

    __radd__ = __add__

    def __sub__(self, other) -> "LaurentPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "LaurentPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -v for e, v in self.c.items()}, _trusted=True)

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            if other == 0:
                return _ZERO
            return LaurentPoly({e: v * other for e, v in self.c.items()}, _trusted=True)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = self.c, other.c
        if not a or not b:
            return _ZERO
        if len(a) > len(b):
            a, b = b, a
        c: dict[int, int] = {}
        for ea, va in a.items():
            for eb, vb in b.items():
                e = ea + eb
                nv = c.get(e, 0) + va * vb
                if nv:
                    c[e] = nv
                elif e in c:
                    del c[e]
        return LaurentPoly(c, _trusted=True)

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self.c)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.c == ({0: other} if other else {})
        if isinstance(other, LaurentPoly):
            return self.c == other.c
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.c.items()))

    # -- queries ----------------------------------------------------------

    def degree(self):
        """Max exponent with nonzero coefficient; NEG_INF for the zero polynomial."""
        return max(self.c) if self.c else NEG_INF

    def min_degree(self):
        return min(self.c) if self.c else NEG_INF

    def coefficient(self, n: int) -> int:
        return self.c.get(n, 0)

    def leading_coefficient(self) -> int:
        return self.c[max(self.c)] if self.c else 0

    def constant_term(self) -> int:
        return self.c.get(0, 0)

    # -- structure maps ---------------------------------------------------

    def bar(self) -> "LaurentPoly":
        """Ring involution q -> q^-1."""
        return LaurentPoly({-e: v for e, v in self.c.items()}, _trusted=True)

    def shift(self, n: int) -> "LaurentPoly":
        """Multiply by q^n."""
        if not n:
            return self
        return LaurentPoly({e + n: v for e, v in self.c.items()}, _trusted=True)

    def negative_part(self) -> "LaurentPoly":
        """Terms with strictly negative exponent."""
        return LaurentPoly({e: v for e, v in self.c.items() if e < 0}, _trusted=True)

    def positive_part(self) -> "LaurentPoly":
        return LaurentPoly({e: v for e, v in self.c.items() if e > 0}, _trusted=True)

    def is_bar_antisymmetric(self) -> bool:
        """True when bar(p) == -p (forces zero constant term)."""
        return all(self.c.get(-e, 0) == -v for e, v in self.c.items())

    def truncate_above(self, n: int) -> "LaurentPoly":
        """Drop all terms with exponent > n (reduction mod q^{n+1} Z[q^-1])."""
        return LaurentPoly({e: v for e, v in self.c.items() if e <= n}, _trusted=True)

    # -- serialization / display -------------------------------------------

    def to_pairs(self) -> Tuple[Tuple[int, int], ...]:
        """Canonical form: (exponent, coefficient) pairs sorted by exponent."""
        return tuple(sorted(self.c.items()))

    def items(self) -> Iterator[Tuple[int, int]]:
        return iter(self.c.items())

    def __str__(self) -> str:
        if not self.c:
            return "0"
        parts = []
        for e, v in sorted(self.c.items(), reverse=True):
            if e == 0:
                term = str(abs(v))
            else:
                qp = "q" if e == 1 else f"q^{e}"
                term = qp if abs(v) == 1 else f"{abs(v)}*{qp}"
            if not parts:
                parts.append(term if v > 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if v > 0 else f"- {term}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"


_ZERO = LaurentPoly()
_ONE = LaurentPoly({0: 1}, _trusted=True)


def _coerce(x):
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly.from_int(x)
    return NotImplemented


def xi(weight: int) -> LaurentPoly:
    """The quadratic-relation coefficient q^w - q^-w for a generator of weight w."""
    if weight <= 0:
        raise ValueError("generator weights must be positive")
    return LaurentPoly({weight: 1, -weight: -1}, _trusted=True)


def add_scaled_into(acc: dict[int, int], p: "LaurentPoly", factor: "LaurentPoly") -> None:
    """acc += p * factor, on a raw exponent->coefficient accumulator dict.

    Hot path for Hecke products: avoids allocating intermediate polynomials.
    """
    for ea, va in p.c.items():
        for eb, vb in factor.c.items():
            e = ea + eb
            nv = acc.get(e, 0) + va * vb
            if nv:
                acc[e] = nv
            elif e in acc:
                del acc[e]
