"""The quotient algebra H_{<=N} and its decomposition machinery.

For a threshold N, the span of {C_w : omega_level(w) > N} is a two-sided
ideal H_{>N}; the quotient H_{<=N} has basis the images {}^N T_w with
omega_level(w) <= N.  An over-ideal T_w rewrites through C_w = 0:

    {}^N T_w  =  - sum_{y < w} p_{y,w} {}^N T_y,

applied by induction on Bruhat order.  Multiplication is the T-basis product
followed by this reduction; the structure constants {}^N f_{x,y,z} and the
functionals {}^N tau (coefficient of {}^N T_e) and {}^N beta (coefficient of
q^N in {}^N f_{x,y,z^-1}) live here, as do the C-basis images {}^N C_w.

The decomposition machinery: for d distinguished at level N, b in B_d and
y in U_d, the element {}^N C_d {}^N T_y has Bruhat-leading term {}^N T_{dy}
with unit coefficient, and the family A_y = {}^N C_d {}^N T_y (y in U_d) is
linearly independent.  A triangular bar-fixing recursion over this family
produces the unique

    F_y = {}^N T_y + sum_{y' < y, y' in U_d} g_{y',y} {}^N T_{y'},
    deg g_{y',y} < 0,

with {}^N C_d F_y bar-invariant, whence {}^N C_{dy} = {}^N C_d F_y.  The left
factor is obtained by the anti-automorphism: E_b = flat(F_{b^-1}), using that
distinguished elements are involutions.  The decomposition identities

    {}^N C_{bd}  = E_b {}^N C_d,
    {}^N C_{dy}  = {}^N C_d F_y,
    {}^N C_{bdy} = E_b {}^N C_d F_y,
    {}^N C_{bd} {}^N C_{dy} = eta_d {}^N C_{bdy},   eta_d = h_{d,d,d},

are checked exactly by verify_decomposition.

Ball-relative soundness: a context carries a radius, and any rewriting chain
that would touch an element outside ball(radius) raises OutOfBallError
naming the offender.  Silent truncation would fabricate results.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .coxeter import CoxeterSystem, Element
from .errors import InvariantViolationError, OutOfBallError
from .hecke import HeckeElement, bar_t_dict, t_product
from .kl import KLTable, get_table
from .laurent import LaurentPoly
from .strata import Stratification, get_stratification

_ZERO = LaurentPoly.zero()
_ONE = LaurentPoly.one()


def _sort_key(el: Element):
    return (el.length, el.word)


def _acc_add(acc: dict, w: Element, p: LaurentPoly) -> None:
    cur = acc.get(w)
    acc[w] = p if cur is None else cur + p


def _clean(acc: dict) -> dict:
    return {w: p for w, p in acc.items() if p}


class QuotientContext:
    """H_{<=N} over one system, with a configured working ball."""

    def __init__(
        self,
        sys: CoxeterSystem,
        N: int,
        radius: int,
        table: KLTable | None = None,
        strat: Stratification | None = None,
    ):
        self.system = sys
        self.N = N
        self.radius = radius
        self.table = table if table is not None else get_table(sys)
        self.strat = strat if strat is not None else get_stratification(sys)
        self._nt: dict[Element, dict[Element, LaurentPoly]] = {}
        self._solvers: dict[Element, _FactorSolver] = {}

    def over_ideal(self, w: Element) -> bool:
        return self.strat.omega_level(w) > self.N

    def _check_ball(self, w: Element) -> None:
        if w.length > self.radius:
            raise OutOfBallError(
                f"element '{self.system.word_str(w)}' of length {w.length} "
                f"leaves the configured ball of radius {self.radius}"
            )

    # -- the NT basis ----------------------------------------------------------

    def nt_image_dict(self, w: Element) -> dict[Element, LaurentPoly]:
        if not self.over_ideal(w):
            return {w: _ONE}
        res = self._nt.get(w)
        if res is None:
            self._check_ball(w)
            acc: dict[Element, LaurentPoly] = {}
            for y, p in self.table.kl_row(w).items():
                if y == w:
                    continue
                for u, c in self.nt_image_dict(y).items():
                    _acc_add(acc, u, -(p * c))
            res = _clean(acc)
            self._nt[w] = res
        return res

    def reduce(self, tdict: dict[Element, LaurentPoly]) -> dict[Element, LaurentPoly]:
        """Rewrite a T-expansion into the {}^N T basis."""
        acc: dict[Element, LaurentPoly] = {}
        for w, p in tdict.items():
            if not p:
                continue
            self._check_ball(w)
            if self.over_ideal(w):
                for u, c in self.nt_image_dict(w).items():
                    _acc_add(acc, u, p * c)
            else:
                _acc_add(acc, w, p)
        return _clean(acc)

    def nt_image(self, w: Element) -> HeckeElement:
        return HeckeElement("NT", self.nt_image_dict(w))

    def nc_image_dict(self, w: Element) -> dict[Element, LaurentPoly]:
        if self.over_ideal(w):
            return {}
        return self.reduce(self.table.kl_row(w))

    def nc_image(self, w: Element) -> HeckeElement:
        return HeckeElement("NT", self.nc_image_dict(w))

    # -- products and functionals ------------------------------------------------

    def mul_dicts(
        self, a: dict[Element, LaurentPoly], b: dict[Element, LaurentPoly]
    ) -> dict[Element, LaurentPoly]:
        sys = self.system
        acc: dict[Element, LaurentPoly] = {}
        for x, px in a.items():
            for y, py in b.items():
                factor = px * py
                if not factor:
                    continue
                for z, c in t_product(sys, x, y).items():
                    _acc_add(acc, z, factor * c)
        return self.reduce(_clean(acc))

    def mul_nt(self, h1: HeckeElement, h2: HeckeElement) -> HeckeElement:
        return HeckeElement("NT", self.mul_dicts(h1.terms, h2.terms))

    def nf_const(self, x: Element, y: Element, z: Element) -> LaurentPoly:
        for arg in (x, y, z):
            if self.over_ideal(arg):
                raise ValueError(
                    f"'{self.system.word_str(arg)}' is over the ideal at N={self.N}"
                )
        prod = self.mul_dicts({x: _ONE}, {y: _ONE})
        return prod.get(z, _ZERO)

    def n_tau(self, h) -> LaurentPoly:
        terms = h.terms if isinstance(h, HeckeElement) else h
        return terms.get(self.system.identity, _ZERO)

    def n_beta(self, x: Element, y: Element, z: Element) -> int:
        return self.nf_const(x, y, self.system.inverse(z)).coefficient(self.N)

    def bar_reduce(self, tdict: dict[Element, LaurentPoly]) -> dict[Element, LaurentPoly]:
        """Image of the bar involution: bar-conjugate coefficients against
        the bar expansion of each T_w, then reduce.  Well defined on the
        quotient because the ideal is spanned by bar-invariant elements."""
        sys = self.system
        acc: dict[Element, LaurentPoly] = {}
        for w, p in tdict.items():
            pb = p.bar()
            for u, c in bar_t_dict(sys, w).items():
                _acc_add(acc, u, pb * c)
        return self.reduce(_clean(acc))

    def flat_dict(self, tdict: dict[Element, LaurentPoly]) -> dict[Element, LaurentPoly]:
        """The anti-automorphism {}^N T_z -> {}^N T_{z^-1} on reduced dicts."""
        sys = self.system
        return {sys.inverse(w): p for w, p in tdict.items()}

    # -- decomposition ------------------------------------------------------------

    def eta(self, d: Element) -> LaurentPoly:
        return self.table.h(d, d, d)

    def _solver(self, d: Element) -> "_FactorSolver":
        solver = self._solvers.get(d)
        if solver is None:
            self.strat.d_record(d)  # raises ValueError if d not distinguished
            if self.strat.omega_level(d) != self.N:
                raise ValueError(
                    f"'{self.system.word_str(d)}' is not at stratum level {self.N}"
                )
            solver = _FactorSolver(self, d)
            self._solvers[d] = solver
        return solver

    def build_factor_pair(self, d: Element, b: Element, y: Element) -> "NFactorPair":
        strat, sys = self.strat, self.system
        if not strat.in_B(d, b):
            raise ValueError(f"'{sys.word_str(b)}' is not in B_d for this d")
        if not strat.in_U(d, y):
            raise ValueError(f"'{sys.word_str(y)}' is not in U_d for this d")
        solver = self._solver(d)
        f_terms = solver.factor(y)
        e_terms = self.flat_dict(solver.factor(sys.inverse(b)))
        return NFactorPair(
            d=d,
            b=b,
            y=y,
            E_b=HeckeElement("NT", e_terms),
            F_y=HeckeElement("NT", f_terms),
            eta_d=self.eta(d),
        )

    def verify_decomposition(self, d: Element, b: Element, y: Element):
        """Check the four decomposition identities exactly; returns
        (ok, DecompositionReport)."""
        sys = self.system
        pair = self.build_factor_pair(d, b, y)
        e, f = pair.E_b.terms, pair.F_y.terms
        ncd = self.nc_image_dict(d)
        nc_bd = self.nc_image_dict(sys.mul(b, d))
        nc_dy = self.nc_image_dict(sys.mul(d, y))
        nc_bdy = self.nc_image_dict(sys.mul(sys.mul(b, d), y))

        e_ncd = self.mul_dicts(e, ncd)
        ncd_f = self.mul_dicts(ncd, f)
        e_ncd_f = self.mul_dicts(e_ncd, f)
        lhs4 = self.mul_dicts(nc_bd, nc_dy)
        rhs4 = _clean({w: pair.eta_d * p for w, p in nc_bdy.items()})

        report = DecompositionReport(pair=pair)
        report.record(sys, "E_b NC_d = NC_bd", e_ncd, nc_bd)
        report.record(sys, "NC_d F_y = NC_dy", ncd_f, nc_dy)
        report.record(sys, "E_b NC_d F_y = NC_bdy", e_ncd_f, nc_bdy)
        report.record(sys, "NC_bd NC_dy = eta_d NC_bdy", lhs4, rhs4)
        return report.ok, report


@dataclass
class NFactorPair:
    """One-sided decomposition data at a distinguished element d."""

    d: Element
    b: Element
    y: Element
    E_b: HeckeElement
    F_y: HeckeElement
    eta_d: LaurentPoly


@dataclass
class DecompositionReport:
    pair: NFactorPair
    ok: bool = True
    checked: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    def record(self, sys, name, got, want):
        self.checked.append(name)
        if got == want:
            return
        self.ok = False
        for w in sorted(set(got) | set(want), key=_sort_key):
            g, e = got.get(w, _ZERO), want.get(w, _ZERO)
            if g != e:
                self.failures.append((name, sys.word_str(w), str(g), str(e)))
                break

    def lines(self) -> list[str]:
        out = []
        for name in self.checked:
            bad = next((f for f in self.failures if f[0] == name), None)
            if bad is None:
                out.append(f"ok    {name}")
            else:
                out.append(
                    f"FAIL  {name}: at T[{bad[1]}] got {bad[2]}, expected {bad[3]}"
                )
        return out


class _FactorSolver:
    """Builds the factors F_w for one distinguished d via bar-fixing over
    the family A_u = {}^N C_d {}^N T_u, u in U_d.

    Each A_u is Bruhat-triangular with unit leading term at du (du is
    length-additive for u in U_d, and every other support element is
    strictly Bruhat-below du, a property preserved by reduction).  So an
    element of the right ideal expands in the A-family by peeling maximal
    terms, and a bar-invariant combination with prescribed leading term is
    found by the usual descending recursion, taking at each step the unique
    solution of c - bar(c) = alpha with deg c < 0.
    """

    def __init__(self, ctx: QuotientContext, d: Element):
        self.ctx = ctx
        self.d = d
        self.d_inv = ctx.system.inverse(d)
        self.ncd = ctx.nc_image_dict(d)
        self._a: dict[Element, dict[Element, LaurentPoly]] = {}
        self._f: dict[Element, dict[Element, LaurentPoly]] = {}

    def a_family(self, u: Element) -> dict[Element, LaurentPoly]:
        res = self._a.get(u)
        if res is None:
            res = self.ctx.mul_dicts(self.ncd, {u: _ONE})
            self._a[u] = res
        return res

    def expand_in_a(self, terms: dict[Element, LaurentPoly]) -> dict[Element, LaurentPoly]:
        """Coordinates of an element of the right ideal in the A-family."""
        ctx, sys = self.ctx, self.ctx.system
        rem = dict(terms)
        coords: dict[Element, LaurentPoly] = {}
        prev_key = None
        while rem:
            top = max(rem, key=_sort_key)
            key = _sort_key(top)
            if prev_key is not None and key >= prev_key:
                raise InvariantViolationError(
                    "A-family expansion failed to make progress"
                )
            prev_key = key
            u = sys.mul(self.d_inv, top)
            if (
                u.length + self.d.length != top.length
                or sys.mul(self.d, u) != top
                or not ctx.strat.in_U(self.d, u)
            ):
                raise InvariantViolationError(
                    f"leading term '{sys.word_str(top)}' does not factor through "
                    f"d = '{sys.word_str(self.d)}': the A-family is not triangular "
                    "as claimed"
                )
            c = rem[top]
            coords[u] = c
            for w, p in self.a_family(u).items():
                cur = rem.get(w, _ZERO) - c * p
                if cur:
                    rem[w] = cur
                else:
                    rem.pop(w, None)
        return coords

    def factor(self, w: Element) -> dict[Element, LaurentPoly]:
        """F_w = {}^N T_w + lower U_d terms, with {}^N C_d F_w bar-invariant."""
        res = self._f.get(w)
        if res is not None:
            return res
        ctx, sys = self.ctx, self.ctx.system
        index = [y for y in sys.bruhat_interval(w) if ctx.strat.in_U(self.d, y)]
        if index[-1] != w:  # bruhat_interval sorts by (length, word)
            raise InvariantViolationError(
                f"factor target '{sys.word_str(w)}' is not in U_d"
            )
        # r-matrix: bar(A_u) = A_u + sum_{y < u} r_{y,u} A_y
        rmat: dict[Element, dict[Element, LaurentPoly]] = {}
        for u in index:
            coords = self.expand_in_a(ctx.bar_reduce(self.a_family(u)))
            if coords.get(u) != _ONE:
                raise InvariantViolationError(
                    f"bar(A_u) lacks unit diagonal at u = '{sys.word_str(u)}'"
                )
            for y in coords:
                if y != u and not sys.bruhat_leq(y, u):
                    raise InvariantViolationError(
                        "bar(A_u) expansion is not Bruhat-triangular"
                    )
            rmat[u] = coords
        # descending solve: c_y - bar(c_y) = sum_{u > y} bar(c_u) r_{y,u}
        coeff: dict[Element, LaurentPoly] = {w: _ONE}
        for y in reversed(index[:-1]):
            alpha = _ZERO
            for u, cu in coeff.items():
                r = rmat[u].get(y)
                if r is not None and u != y:
                    alpha = alpha + cu.bar() * r
            if not alpha.is_bar_antisymmetric():
                raise InvariantViolationError(
                    f"bar-fixing defect at '{sys.word_str(y)}' is not antisymmetric"
                )
            coeff[y] = alpha.negative_part()
        res = _clean(coeff)
        self._f[w] = res
        return res


# -- operation surface ---------------------------------------------------------


def nt_image(ctx: QuotientContext, w: Element) -> HeckeElement:
    return ctx.nt_image(w)


def nf_const(ctx: QuotientContext, x: Element, y: Element, z: Element) -> LaurentPoly:
    return ctx.nf_const(x, y, z)


def nc_image(ctx: QuotientContext, w: Element) -> HeckeElement:
    return ctx.nc_image(w)


def n_tau(ctx: QuotientContext, h) -> LaurentPoly:
    return ctx.n_tau(h)


def n_beta(ctx: QuotientContext, x: Element, y: Element, z: Element) -> int:
    return ctx.n_beta(x, y, z)


def build_factor_pair(ctx: QuotientContext, d: Element, b: Element, y: Element) -> NFactorPair:
    return ctx.build_factor_pair(d, b, y)


def verify_decomposition(ctx: QuotientContext, d: Element, b: Element, y: Element):
    return ctx.verify_decomposition(d, b, y)
