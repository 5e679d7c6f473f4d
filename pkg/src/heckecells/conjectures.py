"""Cell partitions and the P1-P15 verification harness.

The fifteen properties of the a-function are checked over a ball of the
group, either exhaustively (when the ball is the whole finite group) or
with explicit, reported skips (infinite groups).  Two ingredients feed
every check:

* the *structural* side: stratification levels, the (b, d, y) cell
  labels, and the structural a-function from ``strata`` — these are
  defined for arbitrary elements and never depend on the ball;

* the *empirical* side: structure constants h_{x,y,z} of the
  canonical-basis product C_x C_y, the one-generator support edges they
  induce, and the gamma constants extracted from them.

gamma convention
----------------
``gamma(x, y, z)`` is the coefficient of q^{a(z')} in h_{x,y,z'} where
z' is the inverse of z.  (Equivalently: the top coefficient of the z'
component of C_x C_y, "top" meaning degree a(z') — the a-value bounds
the degree of every h_{x,y,z'}.)  This inversion in the third slot is
what makes gamma symmetric under cyclic rotation (P7) and supported on
triples (y^-1, y, z) for distinguished z (P2).

Ball semantics
--------------
A property is asserted only for tuples whose full verification data is
available: h-rows are always complete (a product C_x C_y is computed
exactly, whatever its support), structural labels are ball-independent,
but *searches* — reverse preorder paths, left-cell closures — may leave
the ball.  Such tuples are recorded as skips with a reason, never as
passes.  When the ball is the entire (finite) group there is nothing to
leave, and a missing reverse path is reported as a failure.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field

from .coxeter import CoxeterSystem, Element
from .errors import InvariantViolationError
from .kl import KLTable, delta_and_n, get_table
from .laurent import LaurentPoly
from .strata import Stratification, get_stratification

PROPERTIES = tuple(f"P{i}" for i in range(1, 16))

_WITNESS_CAP = 6
_FAIL_CAP = 20


def _sort_key(el: Element):
    return (el.length, el.word)


@dataclass
class ConjectureResult:
    """Outcome of one property check.

    ``status`` is "pass", "fail", or "skipped" (nothing in scope was
    checkable).  A pass may still carry ``skipped`` entries: sub-checks
    whose data left the ball.  A fail always carries a witness that can
    be re-checked in isolation.
    """

    prop: str
    status: str
    witnesses: list
    scope: str
    checked: int = 0
    skipped: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "property": self.prop,
            "status": self.status,
            "scope": self.scope,
            "checked": self.checked,
            "witnesses": self.witnesses,
            "skipped": [{"reason": r, "detail": d} for r, d in self.skipped],
        }


@dataclass
class CellReport:
    """Structural cell partition of a ball plus empirical cross-checks.

    ``right_cells`` maps the label (b, d) to the sorted members of
    b·d·U_d inside the ball; ``left_cells`` mirrors it (the label (b, d)
    names the cell of inverses of b·d·U_d).  ``two_sided`` maps each
    stratification level to its fiber.  ``empirical_edges`` are the
    one-generator preorder witnesses (kind, source, target): target
    appears in C_s C_source ("L") or C_source C_s ("R").  Every edge is
    checked against the structural partition; violations land in
    ``discrepancies`` (empty on a correct build).
    """

    radius: int
    right_cells: dict
    left_cells: dict
    two_sided: dict
    empirical_edges: list
    discrepancies: list

    def to_dot(self, sys: CoxeterSystem) -> str:
        palette = [
            "lightblue", "lightgoldenrod", "lightpink", "palegreen",
            "plum", "lightsalmon", "khaki", "aquamarine", "thistle", "wheat",
        ]
        level_color = {
            lvl: palette[i % len(palette)]
            for i, lvl in enumerate(sorted(self.two_sided))
        }
        in_ball = {w for members in self.two_sided.values() for w in members}
        lines = ["digraph cells {"]
        lines.append(f'  // radius {self.radius}, {len(in_ball)} elements')
        lines.append("  node [style=filled];")
        for lvl in sorted(self.two_sided):
            for w in self.two_sided[lvl]:
                name = sys.word_str(w).replace(" ", "")
                lines.append(
                    f'  "{name or "e"}" [fillcolor={level_color[lvl]}, '
                    f'label="{sys.word_str(w)}\\na={lvl}"];'
                )
        omitted = 0
        for kind, src, dst in self.empirical_edges:
            if dst not in in_ball:
                omitted += 1
                continue
            a = sys.word_str(src).replace(" ", "") or "e"
            b = sys.word_str(dst).replace(" ", "") or "e"
            style = "solid" if kind == "L" else "dashed"
            lines.append(f'  "{a}" -> "{b}" [style={style}, label="{kind}"];')
        if omitted:
            lines.append(f"  // {omitted} edges to elements outside the ball omitted")
        lines.append("}")
        return "\n".join(lines) + "\n"


class Verifier:
    """Shared state for checking the fifteen properties over one ball.

    ``levels`` optionally restricts the quantifiers that range over
    "elements with a-value in the given set" (the per-stratum form of
    the properties); None means no restriction.  All expensive data
    (h-rows, gamma constants, preorder edges, reachability) is built
    lazily and shared across properties.
    """

    def __init__(
        self,
        sys: CoxeterSystem,
        radius: int,
        table: KLTable | None = None,
        strat: Stratification | None = None,
        levels=None,
        p15_samples: int = 60,
        seed: int = 11,
    ):
        self.system = sys
        self.radius = radius
        self.table = table if table is not None else get_table(sys)
        self.strat = strat if strat is not None else get_stratification(sys)
        self.levels = None if levels is None else frozenset(levels)
        self.p15_samples = p15_samples
        self.seed = seed
        self.ball = sys.ball(radius)
        self.ball_set = set(self.ball)
        # the ball is the whole group iff the next sphere is empty
        self.full_group = not sys.sphere(radius + 1)
        self._a: dict[Element, int] = {}
        self._dn: dict[Element, tuple[int, int]] = {}
        self._gamma: dict | None = None
        self._edges: list | None = None
        self._reach: dict[str, dict] = {}

    # -- shared data -----------------------------------------------------------

    def scope_str(self) -> str:
        s = f"ball radius {self.radius}"
        if self.full_group:
            s += " (full group)"
        if self.levels is not None:
            s += f", a-levels {sorted(self.levels)}"
        return s

    def a(self, w: Element) -> int:
        v = self._a.get(w)
        if v is None:
            v = self.strat.omega_level(w)
            self._a[w] = v
        return v

    def delta_n(self, w: Element) -> tuple[int, int]:
        v = self._dn.get(w)
        if v is None:
            v = delta_and_n(self.system, self.table, w)
            self._dn[w] = v
        return v

    def in_scope(self, w: Element) -> bool:
        return self.levels is None or self.a(w) in self.levels

    def is_distinguished(self, z: Element) -> bool:
        return self.a(z) == self.delta_n(z)[0]

    def gamma(self, x: Element, y: Element, z: Element) -> int:
        zi = self.system.inverse(z)
        return self.table.h(x, y, zi).coefficient(self.a(zi))

    def gamma_entries(self) -> dict:
        """All nonzero gamma(x, y, z) with x, y in the ball, keyed (x, y, z).

        z ranges over the full (exact) support of C_x C_y, so entries may
        have z outside the ball.  Raises if some h-degree exceeds the
        structural a-value — that would invalidate gamma itself.
        """
        if self._gamma is None:
            sys, table = self.system, self.table
            out = {}
            for x in self.ball:
                for y in self.ball:
                    row = table.h_product(x, y)
                    for w, h in row.items():
                        aw = self.a(w)
                        if h.degree() > aw:
                            raise InvariantViolationError(
                                f"deg h_{{{sys.word_str(x)},{sys.word_str(y)},"
                                f"{sys.word_str(w)}}} = {h.degree()} exceeds a = {aw}"
                            )
                        c = h.coefficient(aw)
                        if c:
                            out[(x, y, sys.inverse(w))] = c
            self._gamma = out
        return self._gamma

    def edges(self) -> list:
        """One-generator preorder witnesses (kind, src, dst), dst != src.

        "R": dst in support of C_src C_s; "L": dst in support of C_s C_src
        (computed from rows of inverses via the anti-automorphism).
        Targets may lie outside the ball.
        """
        if self._edges is None:
            sys, table = self.system, self.table
            out = []
            for w in self.ball:
                wi = sys.inverse(w)
                for s in range(len(sys.generators)):
                    for z, _ in table.c_times_gen(w, s):
                        if z != w:
                            out.append(("R", w, z))
                    for u, _ in table.c_times_gen(wi, s):
                        if u != wi:
                            out.append(("L", w, sys.inverse(u)))
            self._edges = out
        return self._edges

    def reach(self, kind: str) -> dict:
        """In-ball transitive closure of the edge relation: node -> set of
        strictly-reachable nodes (self excluded unless on a cycle)."""
        res = self._reach.get(kind)
        if res is None:
            adj = defaultdict(set)
            for k, src, dst in self.edges():
                if (kind == "LR" or k == kind) and dst in self.ball_set:
                    adj[src].add(dst)
            res = {}
            for w in self.ball:
                seen: set[Element] = set()
                stack = list(adj[w])
                while stack:
                    u = stack.pop()
                    if u in seen:
                        continue
                    seen.add(u)
                    stack.extend(adj[u] - seen)
                res[w] = seen
            self._reach[kind] = res
        return res

    # -- result plumbing ---------------------------------------------------------

    def _finish(self, prop, scope, checked, fails, confirms, skips) -> ConjectureResult:
        if fails:
            status = "fail"
            witnesses = fails[:_FAIL_CAP]
        elif checked == 0:
            status = "skipped"
            witnesses = []
            if not skips:
                skips = [("nothing in scope", scope)]
        else:
            status = "pass"
            witnesses = confirms[:_WITNESS_CAP]
        return ConjectureResult(
            prop=prop,
            status=status,
            witnesses=witnesses,
            scope=scope,
            checked=checked,
            skipped=skips,
        )

    def check(self, prop: str) -> ConjectureResult:
        if prop not in PROPERTIES:
            raise ValueError(f"unknown property {prop!r}; expected P1..P15")
        return getattr(self, f"_check_{prop.lower()}")()

    def check_all(self, props=PROPERTIES, jobs: int = 1) -> list[ConjectureResult]:
        props = list(props)
        if jobs > 1:
            # shared tables are built up-front so worker threads only read
            self.gamma_entries()
            self.edges()
            from concurrent.futures import ThreadPoolExecutor

            with ThreadPoolExecutor(max_workers=jobs) as pool:
                return list(pool.map(self.check, props))
        return [self.check(p) for p in props]

    # -- the fifteen properties ---------------------------------------------------

    def _check_p1(self) -> ConjectureResult:
        # a(w) <= Delta(w)
        sys = self.system
        checked, fails, confirms = 0, [], []
        for w in self.ball:
            if not self.in_scope(w):
                continue
            delta, n = self.delta_n(w)
            aw = self.a(w)
            checked += 1
            item = {"w": sys.word_str(w), "a": aw, "delta": delta, "n": n}
            if aw > delta:
                fails.append(item)
            elif aw == delta and len(confirms) < _WITNESS_CAP:
                confirms.append(item)  # boundary cases are the informative ones
        if not confirms and checked:
            confirms = [{"w": "e", "a": 0, "delta": 0, "n": 1}]
        return self._finish("P1", self.scope_str(), checked, fails, confirms, [])

    def _check_p2(self) -> ConjectureResult:
        # gamma(x, y, z) != 0 with z distinguished forces x = y^-1
        sys = self.system
        checked, fails, confirms = 0, [], []
        for (x, y, z), g in sorted(
            self.gamma_entries().items(),
            key=lambda kv: tuple(map(_sort_key, kv[0])),
        ):
            if not (self.in_scope(z) and self.is_distinguished(z)):
                continue
            checked += 1
            item = {
                "x": sys.word_str(x), "y": sys.word_str(y),
                "z": sys.word_str(z), "gamma": g,
            }
            if x != sys.inverse(y):
                fails.append(item)
            elif len(confirms) < _WITNESS_CAP and x != y:
                confirms.append(item)
        if not confirms and checked:
            confirms = [{"note": "only involutive pairs in scope"}]
        return self._finish("P2", self.scope_str(), checked, fails, confirms, [])

    def _p3_hits(self, y: Element) -> list[tuple[Element, int]]:
        """Distinguished z with gamma(y^-1, y, z) != 0, from the exact row."""
        sys = self.system
        yi = sys.inverse(y)
        hits = []
        for w, h in self.table.h_product(yi, y).items():
            g = h.coefficient(self.a(w))
            if not g:
                continue
            z = sys.inverse(w)
            if self.is_distinguished(z):
                hits.append((z, g))
        hits.sort(key=lambda zg: _sort_key(zg[0]))
        return hits

    def _check_p3(self) -> ConjectureResult:
        # unique distinguished z with gamma(y^-1, y, z) != 0
        sys = self.system
        checked, fails, confirms = 0, [], []
        for y in self.ball:
            if not self.in_scope(y):
                continue
            checked += 1
            hits = self._p3_hits(y)
            item = {
                "y": sys.word_str(y),
                "hits": [(sys.word_str(z), g) for z, g in hits],
            }
            if len(hits) != 1:
                fails.append(item)
            elif len(confirms) < _WITNESS_CAP and hits[0][0] != y:
                confirms.append(item)
        if not confirms and checked:
            confirms = [{"note": "all witnesses self-distinguished"}]
        return self._finish("P3", self.scope_str(), checked, fails, confirms, [])

    def _check_p4(self) -> ConjectureResult:
        # preorder never decreases the a-value: a(dst) >= a(src) on every edge
        sys = self.system
        checked, fails, confirms = 0, [], []
        for kind, src, dst in self.edges():
            if not self.in_scope(src):
                continue
            checked += 1
            a_src, a_dst = self.a(src), self.a(dst)
            if a_dst < a_src:
                fails.append({
                    "kind": kind, "src": sys.word_str(src),
                    "dst": sys.word_str(dst), "a_src": a_src, "a_dst": a_dst,
                })
            elif a_dst > a_src and len(confirms) < _WITNESS_CAP:
                confirms.append({
                    "kind": kind, "src": sys.word_str(src),
                    "dst": sys.word_str(dst), "a_src": a_src, "a_dst": a_dst,
                })
        if not confirms and checked:
            confirms = [{"note": "all edges a-level preserving"}]
        return self._finish("P4", self.scope_str(), checked, fails, confirms, [])

    def _check_p5(self) -> ConjectureResult:
        # gamma(y^-1, y, z) = n_z = +-1 for distinguished z
        sys = self.system
        checked, fails, confirms = 0, [], []
        for y in self.ball:
            if not self.in_scope(y):
                continue
            for z, g in self._p3_hits(y):
                checked += 1
                n_z = self.delta_n(z)[1]
                item = {
                    "y": sys.word_str(y), "z": sys.word_str(z),
                    "gamma": g, "n_z": n_z,
                }
                if g != n_z or abs(n_z) != 1:
                    fails.append(item)
                elif len(confirms) < _WITNESS_CAP and n_z == -1:
                    confirms.append(item)  # sign -1 cases exercise the convention
        if not confirms and checked:
            confirms = [{"note": "all n_z = +1 in scope"}]
        return self._finish("P5", self.scope_str(), checked, fails, confirms, [])

    def _check_p6(self) -> ConjectureResult:
        # distinguished elements are involutions
        sys = self.system
        checked, fails, confirms = 0, [], []
        for z in self.ball:
            if not (self.in_scope(z) and self.is_distinguished(z)):
                continue
            checked += 1
            if not sys.mul(z, z).is_identity():
                fails.append({"z": sys.word_str(z)})
            elif len(confirms) < _WITNESS_CAP and z.length > 1:
                confirms.append({"z": sys.word_str(z), "a": self.a(z)})
        if not confirms and checked:
            confirms = [{"note": "only short involutions in scope"}]
        return self._finish("P6", self.scope_str(), checked, fails, confirms, [])

    def _check_p7(self) -> ConjectureResult:
        # gamma is invariant under cyclic rotation of (x, y, z)
        sys = self.system
        checked, fails, confirms = 0, [], []
        for (x, y, z), g in sorted(
            self.gamma_entries().items(),
            key=lambda kv: tuple(map(_sort_key, kv[0])),
        ):
            if not (self.in_scope(x) or self.in_scope(y) or self.in_scope(z)):
                continue
            checked += 1
            g2 = self.gamma(y, z, x)
            g3 = self.gamma(z, x, y)
            item = {
                "x": sys.word_str(x), "y": sys.word_str(y), "z": sys.word_str(z),
                "gamma": g, "rot1": g2, "rot2": g3,
            }
            if not (g == g2 == g3):
                fails.append(item)
            elif len(confirms) < _WITNESS_CAP and len({x, y, z}) == 3:
                confirms.append(item)
        if not confirms and checked:
            confirms = [{"note": "no three-distinct triples in scope"}]
        return self._finish("P7", self.scope_str(), checked, fails, confirms, [])

    def _check_p8(self) -> ConjectureResult:
        # gamma(x, y, z) != 0 chains the left cells of x, y^-1 / y, z^-1 / z, x^-1
        sys, strat = self.system, self.strat
        checked, fails, confirms = 0, [], []

        def same_left_cell(u, v):
            return strat.left_label(u)[:2] == strat.left_label(v)[:2]

        for (x, y, z), g in sorted(
            self.gamma_entries().items(),
            key=lambda kv: tuple(map(_sort_key, kv[0])),
        ):
            if not (self.in_scope(x) or self.in_scope(y) or self.in_scope(z)):
                continue
            checked += 1
            ok = (
                same_left_cell(x, sys.inverse(y))
                and same_left_cell(y, sys.inverse(z))
                and same_left_cell(z, sys.inverse(x))
            )
            item = {
                "x": sys.word_str(x), "y": sys.word_str(y),
                "z": sys.word_str(z), "gamma": g,
            }
            if not ok:
                fails.append(item)
            elif len(confirms) < _WITNESS_CAP and len({x, y, z}) == 3:
                confirms.append(item)
        if not confirms and checked:
            confirms = [{"note": "no three-distinct triples in scope"}]
        return self._finish("P8", self.scope_str(), checked, fails, confirms, [])

    def _equalize_check(self, prop, kind, label_of) -> ConjectureResult:
        """Common body of P9/P10/P11: reachable + equal a implies equivalent.

        The structural conclusion (same cell label) is decided exactly.
        The empirical conclusion (a reverse path) can fail to be visible
        inside a truncated ball; that is a skip for infinite groups and
        a failure when the ball is the whole group.
        """
        sys = self.system
        reach = self.reach(kind)
        checked, fails, confirms, skips = 0, [], [], []
        for w in self.ball:
            if not self.in_scope(w):
                continue
            for wp in sorted(reach[w], key=_sort_key):
                if wp == w or self.a(wp) != self.a(w):
                    continue
                checked += 1
                w_str, wp_str = sys.word_str(w), sys.word_str(wp)
                item = {"w": w_str, "w'": wp_str, "a": self.a(w)}
                if label_of is not None and label_of(wp) != label_of(w):
                    item["reason"] = "structural cells differ"
                    fails.append(item)
                    continue
                if w in reach[wp]:
                    if len(confirms) < _WITNESS_CAP:
                        confirms.append(item)
                elif self.full_group:
                    item["reason"] = "no reverse preorder path in full group"
                    fails.append(item)
                else:
                    skips.append(
                        (f"reverse {kind}-path leaves ball", f"{w_str} ~ {wp_str}")
                    )
        if not confirms and checked:
            confirms = [{"note": "no equal-level reachable pairs confirmed"}]
        return self._finish(prop, self.scope_str(), checked, fails, confirms, skips)

    def _check_p9(self) -> ConjectureResult:
        strat = self.strat
        return self._equalize_check("P9", "L", lambda w: strat.left_label(w)[:2])

    def _check_p10(self) -> ConjectureResult:
        strat = self.strat
        return self._equalize_check("P10", "R", lambda w: strat.right_label(w)[:2])

    def _check_p11(self) -> ConjectureResult:
        # two-sided cells are the a-level fibers, so equal a *is* the
        # structural conclusion; only the empirical reverse path is informative
        return self._equalize_check("P11", "LR", None)

    def _check_p12(self) -> ConjectureResult:
        # the a-value computed inside a standard parabolic subgroup agrees
        sys = self.system
        checked, fails, confirms, skips = 0, [], [], []
        names = sys.generators
        n = len(names)
        for mask in range(1, (1 << n) - 1):
            gens = [names[i] for i in range(n) if mask & (1 << i)]
            sub, idx_map = sys.subsystem(gens)
            sub_strat = get_stratification(sub)
            back = {parent: i for i, parent in enumerate(idx_map)}
            support_ok = set(back)
            for w in self.ball:
                if not self.in_scope(w):
                    continue
                if not set(w.word) <= support_ok:
                    continue
                sub_w = sub.element([back[s] for s in w.word])
                checked += 1
                a_sub = sub_strat.omega_level(sub_w)
                a_full = self.a(w)
                item = {
                    "J": " ".join(gens), "w": sys.word_str(w),
                    "a_in_subgroup": a_sub, "a_in_group": a_full,
                }
                if a_sub != a_full:
                    fails.append(item)
                elif len(confirms) < _WITNESS_CAP and w.length > 1:
                    confirms.append(item)
        if not confirms and checked:
            confirms = [{"note": "only short elements in scope"}]
        return self._finish("P12", self.scope_str(), checked, fails, confirms, skips)

    def _left_cells_in_ball(self) -> dict:
        cells = defaultdict(list)
        for w in self.ball:
            b, d, _ = self.strat.left_label(w)
            cells[(b, d)].append(w)
        return cells

    def _left_cell_complete(self, label, members) -> bool:
        """A left cell is left-connected, so it stays inside the ball iff no
        member extends to a longer member of the same cell past the radius."""
        sys = self.system
        for w in members:
            for s in range(len(sys.generators)):
                sw = sys.left_mul(s, w)
                if sw.length != w.length + 1 or sw.length <= self.radius:
                    continue
                if self.strat.left_label(sw)[:2] == label:
                    return False
        return True

    def _check_p13(self) -> ConjectureResult:
        # each (complete) left cell holds exactly one distinguished element z,
        # and gamma(y^-1, y, z) != 0 for every member y
        sys = self.system
        checked, fails, confirms, skips = 0, [], [], []
        for label, members in sorted(
            self._left_cells_in_ball().items(),
            key=lambda kv: tuple(map(_sort_key, kv[0])),
        ):
            if not self.in_scope(members[0]):
                continue
            members = sorted(members, key=_sort_key)
            cell_name = f"({sys.word_str(label[0])}, {sys.word_str(label[1])})"
            if not self._left_cell_complete(label, members):
                skips.append(("left cell extends beyond ball", cell_name))
                continue
            checked += 1
            dz = [z for z in members if self.is_distinguished(z)]
            item = {
                "cell": cell_name,
                "size": len(members),
                "distinguished": [sys.word_str(z) for z in dz],
            }
            if len(dz) != 1:
                fails.append(item)
                continue
            z = dz[0]
            bad = [
                y for y in members
                if self.gamma(sys.inverse(y), y, z) == 0
            ]
            if bad:
                item["gamma_zero_at"] = [sys.word_str(y) for y in bad]
                fails.append(item)
            elif len(confirms) < _WITNESS_CAP and len(members) > 1:
                confirms.append(item)
        if not confirms and checked:
            confirms = [{"note": "only singleton cells complete in ball"}]
        return self._finish("P13", self.scope_str(), checked, fails, confirms, skips)

    def _check_p14(self) -> ConjectureResult:
        # w and w^-1 share a two-sided cell: structurally an a-level check,
        # empirically a mutual reachability check
        sys = self.system
        reach = self.reach("LR")
        checked, fails, confirms, skips = 0, [], [], []
        for w in self.ball:
            if not self.in_scope(w):
                continue
            wi = sys.inverse(w)
            checked += 1
            item = {"w": sys.word_str(w), "a": self.a(w)}
            if self.a(wi) != self.a(w):
                item["a_inverse"] = self.a(wi)
                fails.append(item)
                continue
            if w == wi:
                continue  # trivially equivalent; not an informative witness
            if wi in reach[w] and w in reach[wi]:
                if len(confirms) < _WITNESS_CAP:
                    confirms.append(item)
            elif self.full_group:
                item["reason"] = "no mutual preorder path in full group"
                fails.append(item)
            else:
                skips.append(("preorder path to inverse leaves ball", item["w"]))
        if not confirms and checked:
            confirms = [{"note": "all scoped elements are involutions"}]
        return self._finish("P14", self.scope_str(), checked, fails, confirms, skips)

    # -- P15: tensor identity, two code paths -------------------------------------

    def p15_tuple_check(self, w, wp, x, y) -> dict:
        """Both formulations of the compatibility identity on one tuple.

        Raw path: sum_z h_{w,x,z} (x) h_{z,wp,y}  ==  sum_z h_{w,z,y} (x) h_{x,wp,z}
        as tensors (dicts keyed by exponent pairs).  Module path: act with
        C_w on the left and C_wp on the right of the basis vector m_x of
        the level-a(x) bimodule and compare the two association orders;
        the y-component must also reproduce the raw sides (the actions
        keep only level-a(x) terms, which is exactly the raw z-support).
        """
        table = self.table
        n_level = self.a(x)
        side1: dict = {}
        for z, h1 in table.h_product(w, x).items():
            h2 = table.h_product(z, wp).get(y)
            if h2:
                _tensor_add(side1, h1, h2)
        side2: dict = {}
        for z, h2 in table.h_product(x, wp).items():
            h1 = table.h_product(w, z).get(y)
            if h1:
                _tensor_add(side2, h1, h2)
        vec = {x: {(0, 0): 1}}
        lr = self._act_right(self._act_left(w, vec, n_level), wp, n_level)
        rl = self._act_left(w, self._act_right(vec, wp, n_level), n_level)
        return {
            "raw_equal": side1 == side2,
            "actions_commute": lr == rl,
            "module_matches_raw": lr.get(y, {}) == side1 and rl.get(y, {}) == side2,
            "terms": len(side1),
        }

    def _act_left(self, x, vec, n_level):
        out: dict = {}
        table = self.table
        for w, tens in vec.items():
            for z, h in table.h_product(x, w).items():
                if self.a(z) != n_level:
                    continue
                acc = out.setdefault(z, {})
                for (i, j), c in tens.items():
                    for k, ck in h.items():
                        key = (i + k, j)
                        v = acc.get(key, 0) + c * ck
                        if v:
                            acc[key] = v
                        elif key in acc:
                            del acc[key]
        return {z: t for z, t in out.items() if t}

    def _act_right(self, vec, x, n_level):
        out: dict = {}
        table = self.table
        for w, tens in vec.items():
            for z, h in table.h_product(w, x).items():
                if self.a(z) != n_level:
                    continue
                acc = out.setdefault(z, {})
                for (i, j), c in tens.items():
                    for k, ck in h.items():
                        key = (i, j + k)
                        v = acc.get(key, 0) + c * ck
                        if v:
                            acc[key] = v
                        elif key in acc:
                            del acc[key]
        return {z: t for z, t in out.items() if t}

    def _p15_tuples(self):
        """Deterministic tuple stream: exhaustive on small full groups,
        seeded sampling otherwise (outer factors from a small sub-ball to
        keep the row lengths bounded)."""
        scoped = [x for x in self.ball if self.in_scope(x)]
        by_level = defaultdict(list)
        for x in scoped:
            by_level[self.a(x)].append(x)
        if self.full_group and len(self.ball) <= 16:
            for w in self.ball:
                for wp in self.ball:
                    for xs in by_level.values():
                        for x in xs:
                            for y in xs:
                                yield w, wp, x, y
            return
        rng = random.Random(self.seed)
        outer = self.system.ball(min(self.radius, 3))
        pairs = [(x, y) for xs in by_level.values() for x in xs for y in xs]
        if not pairs:
            return
        for _ in range(self.p15_samples):
            w = rng.choice(outer)
            wp = rng.choice(outer)
            x, y = rng.choice(pairs)
            yield w, wp, x, y

    def _check_p15(self) -> ConjectureResult:
        sys = self.system
        checked, fails, confirms = 0, [], []
        sampled = not (self.full_group and len(self.ball) <= 16)
        for w, wp, x, y in self._p15_tuples():
            checked += 1
            r = self.p15_tuple_check(w, wp, x, y)
            item = {
                "w": sys.word_str(w), "w'": sys.word_str(wp),
                "x": sys.word_str(x), "y": sys.word_str(y), **r,
            }
            if not (r["raw_equal"] and r["actions_commute"] and r["module_matches_raw"]):
                fails.append(item)
            elif r["terms"] and len(confirms) < _WITNESS_CAP:
                confirms.append(item)
        scope = self.scope_str()
        if sampled:
            scope += f", {self.p15_samples} sampled tuples (outer factors in ball 3)"
        else:
            scope += ", exhaustive tuples"
        if not confirms and checked:
            confirms = [{"note": "all sampled tensors vanished"}]
        return self._finish("P15", scope, checked, fails, confirms, [])


def _tensor_add(acc: dict, p: LaurentPoly, q: LaurentPoly) -> None:
    """acc += p (x) q over pairs of exponents."""
    for i, ci in p.items():
        for j, cj in q.items():
            key = (i, j)
            v = acc.get(key, 0) + ci * cj
            if v:
                acc[key] = v
            elif key in acc:
                del acc[key]


# -- cell partition ------------------------------------------------------------


def compute_cells(sys: CoxeterSystem, strat: Stratification, radius: int) -> CellReport:
    """Structural cell partition of the ball with empirical cross-checks.

    Right cells are grouped by the (b, d) of the unique factorization
    w = b d y; left cells by the label of the inverse; two-sided cells
    are the level fibers.  Every one-generator support edge is then
    checked against the partition: the a-level may never drop along an
    edge, and an edge between equal levels must stay inside its cell
    (right cells for "R" edges, left for "L").  Violations are collected
    in ``discrepancies``.
    """
    ver = Verifier(sys, radius, strat=strat)
    right = defaultdict(list)
    left = defaultdict(list)
    two_sided = defaultdict(list)
    for w in ver.ball:
        b, d, _ = strat.right_label(w)
        right[(b, d)].append(w)
        bl, dl, _ = strat.left_label(w)
        left[(bl, dl)].append(w)
        two_sided[ver.a(w)].append(w)

    discrepancies = []
    # the right cell labeled (b, d) must be exactly (b d U_d) meet ball
    for (b, d), members in right.items():
        bd = sys.mul(b, d)
        rebuilt = set()
        for y in strat.compute_Ud(d, radius - bd.length):
            w = sys.mul(bd, y)
            if w.length == bd.length + y.length and w.length <= radius:
                rebuilt.add(w)
        if rebuilt != set(members):
            discrepancies.append({
                "kind": "right-cell-product-mismatch",
                "label": (sys.word_str(b), sys.word_str(d)),
                "missing": sorted(sys.word_str(w) for w in rebuilt - set(members)),
                "extra": sorted(sys.word_str(w) for w in set(members) - rebuilt),
            })

    for kind, src, dst in ver.edges():
        a_src, a_dst = ver.a(src), ver.a(dst)
        if a_dst < a_src:
            discrepancies.append({
                "kind": "a-level-drop",
                "edge": (kind, sys.word_str(src), sys.word_str(dst)),
                "a_src": a_src, "a_dst": a_dst,
            })
        elif a_dst == a_src:
            label = strat.right_label if kind == "R" else strat.left_label
            if label(dst)[:2] != label(src)[:2]:
                discrepancies.append({
                    "kind": "equal-level-edge-crosses-cells",
                    "edge": (kind, sys.word_str(src), sys.word_str(dst)),
                })

    def freeze(groups):
        return {
            label: sorted(members, key=_sort_key)
            for label, members in sorted(
                groups.items(), key=lambda kv: tuple(map(_sort_key, kv[0]))
            )
        }

    return CellReport(
        radius=radius,
        right_cells=freeze(right),
        left_cells=freeze(left),
        two_sided={lvl: sorted(ms, key=_sort_key) for lvl, ms in sorted(two_sided.items())},
        empirical_edges=ver.edges(),
        discrepancies=discrepancies,
    )


# -- named checks beyond P1..P15 -----------------------------------------------


def dn_involutions_check(
    sys: CoxeterSystem, strat: Stratification, table: KLTable, radius: int
) -> ConjectureResult:
    """The distinguished set within the ball, described two ways.

    {z : Delta(z) = a(z)} must equal {b d b^-1 : d stratum seed, b in B_d}
    (lengths adding as l(z) = 2 l(b) + l(d)), every such z must be an
    involution with Delta(z) equal to its level, and no ball element may
    have a(w) > Delta(w).
    """
    ver = Verifier(sys, radius, table=table, strat=strat)
    fails, confirms = [], []
    checked = 0

    built = {}
    for de in strat.D:
        d = de.element
        if d.length > radius:
            continue
        for b in strat.compute_Bd(d, radius):
            z = sys.mul(sys.mul(b, d), sys.inverse(b))
            if z.length > radius:
                continue
            if z.length != 2 * b.length + d.length:
                fails.append({
                    "kind": "non-additive-conjugate",
                    "b": sys.word_str(b), "d": sys.word_str(d), "z": sys.word_str(z),
                })
                continue
            built[z] = (b, d)

    scanned = {z for z in ver.ball if ver.is_distinguished(z)}
    for w in ver.ball:
        checked += 1
        delta, _ = ver.delta_n(w)
        if ver.a(w) > delta:
            fails.append({"kind": "a-exceeds-delta", "w": sys.word_str(w),
                          "a": ver.a(w), "delta": delta})
    for z in sorted(scanned - set(built), key=_sort_key):
        fails.append({"kind": "scanned-not-conjugate", "z": sys.word_str(z)})
    for z in sorted(set(built) - scanned, key=_sort_key):
        fails.append({"kind": "conjugate-not-scanned", "z": sys.word_str(z)})
    for z in sorted(scanned & set(built), key=_sort_key):
        b, d = built[z]
        delta, n_z = ver.delta_n(z)
        ok = sys.mul(z, z).is_identity() and delta == ver.a(d) == ver.a(z)
        item = {
            "z": sys.word_str(z), "b": sys.word_str(b), "d": sys.word_str(d),
            "delta": delta, "n_z": n_z,
        }
        if not ok:
            item["kind"] = "bad-distinguished-element"
            fails.append(item)
        elif len(confirms) < _WITNESS_CAP and not b.is_identity():
            confirms.append(item)
    if not confirms and checked and not fails:
        confirms = [{"note": "only stratum seeds distinguished in ball"}]
    status = "fail" if fails else "pass"
    return ConjectureResult(
        prop="DN-involutions",
        status=status,
        witnesses=fails[:_FAIL_CAP] if fails else confirms,
        scope=ver.scope_str(),
        checked=checked,
    )


def check_gamma_core_factorization(
    sys: CoxeterSystem, strat: Stratification, table: KLTable, radius: int
) -> ConjectureResult:
    """gamma only sees the cell cores.

    Every w factors uniquely as b p b'^-1 with (b, d) its right label,
    (b', d') its left label, and p the core (lengths adding).  For a
    nonzero gamma(x, y, z) the labels must chain — left of x = right of
    y, left of y = right of z, left of z = right of x — and gamma must
    equal gamma(core_x, core_y, core_z).
    """
    ver = Verifier(sys, radius, table=table, strat=strat)
    fails, confirms = [], []
    checked = 0

    def core(w):
        b, d, _ = strat.right_label(w)
        bp, dp, _ = strat.left_label(w)
        p = sys.mul(sys.mul(sys.inverse(b), w), bp)
        if p.length != w.length - b.length - bp.length:
            raise InvariantViolationError(
                f"core of {sys.word_str(w)} is not length-additive"
            )
        return p, (b, d), (bp, dp)

    for (x, y, z), g in sorted(
        ver.gamma_entries().items(), key=lambda kv: tuple(map(_sort_key, kv[0]))
    ):
        checked += 1
        px, rx, lx = core(x)
        py, ry, ly = core(y)
        pz, rz, lz = core(z)
        item = {
            "x": sys.word_str(x), "y": sys.word_str(y), "z": sys.word_str(z),
            "gamma": g,
            "cores": (sys.word_str(px), sys.word_str(py), sys.word_str(pz)),
        }
        if not (lx == ry and ly == rz and lz == rx):
            item["kind"] = "labels-do-not-chain"
            fails.append(item)
            continue
        g_core = ver.gamma(px, py, pz)
        if g_core != g:
            item["kind"] = "core-gamma-differs"
            item["gamma_core"] = g_core
            fails.append(item)
        elif len(confirms) < _WITNESS_CAP and (px, py, pz) != (x, y, z):
            confirms.append(item)
    if not confirms and checked and not fails:
        confirms = [{"note": "all scanned triples already core triples"}]
    status = "fail" if fails else ("pass" if checked else "skipped")
    return ConjectureResult(
        prop="gamma-core",
        status=status,
        witnesses=fails[:_FAIL_CAP] if fails else confirms,
        scope=ver.scope_str(),
        checked=checked,
    )


def check_conjecture(
    sys: CoxeterSystem,
    strat: Stratification,
    table: KLTable,
    prop: str,
    radius: int,
    levels=None,
) -> ConjectureResult:
    return Verifier(
        sys, radius, table=table, strat=strat, levels=levels
    ).check(prop)
