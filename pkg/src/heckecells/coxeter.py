"""Weighted Coxeter systems with exact word arithmetic.

Supports two diagram families:

* ``complete``: every pair of generators has bond m_st >= 3 (possibly infinite),
  so the Coxeter diagram is a complete graph and every finite standard parabolic
  subgroup has rank <= 2.
* ``right-angled``: every bond is 2 (commuting) or infinite, so finite standard
  parabolics are exactly the commuting cliques.

Elements are interned per system and carry their ShortLex-minimal reduced word
(least word under length-then-lexicographic order on generator indices).  The
word problem is solved by Tits' theorem: a word is reduced iff no sequence of
braid moves exposes an adjacent equal pair, and two reduced words represent the
same element iff they are connected by braid moves.  Braid-equivalence classes
are enumerated by BFS with a configurable cap that fails loudly on overflow.

A weight function L assigns each generator a positive integer, constant on
conjugacy classes: L(s) = L(t) whenever m_st is odd and finite.
"""

from __future__ import annotations

import hashlib
import json
import math
from typing import Iterable, Sequence

from .errors import BraidOverflowError, ConfigError

INFINITY = math.inf

FAMILY_COMPLETE = "complete"
FAMILY_RIGHT_ANGLED = "right-angled"


class Element:
    """Group element, identified by its ShortLex-canonical reduced word."""

    __slots__ = ("system", "word", "length", "weight_length", "_rdesc", "_ldesc", "_hash")

    def __init__(self, system: "CoxeterSystem", word: tuple[int, ...]):
        self.system = system
        self.word = word
        self.length = len(word)
        self.weight_length = sum(system.weights[s] for s in word)
        self._rdesc = None
        self._ldesc = None
        self._hash = hash(word)

    def __eq__(self, other):
        return self is other or (
            isinstance(other, Element)
            and self.word == other.word
            and self.system is other.system
        )

    def __hash__(self):
        return self._hash

    def __lt__(self, other):  # ShortLex order; used for deterministic output
        return (self.length, self.word) < (other.length, other.word)

    def __le__(self, other):
        return (self.length, self.word) <= (other.length, other.word)

    def is_identity(self) -> bool:
        return not self.word

    def __repr__(self):
        return f"<{self.system.word_str(self)}>"


def _validate_matrix(generators, m, family):
    n = len(generators)
    if n == 0:
        raise ConfigError("at least one generator required")
    if len(set(generators)) != n:
        raise ConfigError("generator names must be distinct")
    if len(m) != n or any(len(row) != n for row in m):
        raise ConfigError("Coxeter matrix must be square of rank len(generators)")
    for i in range(n):
        if m[i][i] != 1:
            raise ConfigError("Coxeter matrix diagonal must be 1")
        for j in range(n):
            if m[i][j] != m[j][i]:
                raise ConfigError("Coxeter matrix must be symmetric")
            if i == j:
                continue
            v = m[i][j]
            if v is not INFINITY and (not isinstance(v, int) or v < 2):
                raise ConfigError(f"m[{i}][{j}] must be an integer >= 2 or infinity")
            if family == FAMILY_COMPLETE and v is not INFINITY and v < 3:
                raise ConfigError("complete-graph family requires m_st >= 3 for s != t")
            if family == FAMILY_RIGHT_ANGLED and v is not INFINITY and v != 2:
                raise ConfigError("right-angled family requires m_st in {2, infinity}")


class CoxeterSystem:
    def __init__(
        self,
        generators: Sequence[str],
        coxeter_matrix: Sequence[Sequence],
        weights: Sequence[int],
        family: str,
        max_braid_class: int = 100_000,
    ):
        if family not in (FAMILY_COMPLETE, FAMILY_RIGHT_ANGLED):
            raise ConfigError(f"unknown family {family!r}")
        generators = tuple(str(g) for g in generators)
        m = tuple(
            tuple(INFINITY if x in (0, INFINITY) else x for x in row)
            for row in coxeter_matrix
        )
        _validate_matrix(generators, m, family)
        weights = tuple(weights)
        if len(weights) != len(generators):
            raise ConfigError("need one weight per generator")
        if any(not isinstance(w, int) or w < 1 for w in weights):
            raise ConfigError("weights must be positive integers")
        n = len(generators)
        for i in range(n):
            for j in range(i + 1, n):
                mij = m[i][j]
                if mij is not INFINITY and mij % 2 == 1 and weights[i] != weights[j]:
                    raise ConfigError(
                        f"odd bond m({generators[i]},{generators[j]})={mij} "
                        "forces equal weights"
                    )
        self.generators = generators
        self.coxeter_matrix = m
        self.weights = weights
        self.family = family
        self.max_braid_class = max_braid_class
        self._index = {g: i for i, g in enumerate(generators)}
        # braid substitution patterns (s,t) -> (pattern, replacement), finite bonds only
        self._patterns = {}
        for i in range(n):
            for j in range(n):
                if i != j and m[i][j] is not INFINITY:
                    k = m[i][j]
                    pat = tuple((i, j)[x % 2] for x in range(k))
                    rep = tuple((j, i)[x % 2] for x in range(k))
                    self._patterns[(i, j)] = (pat, rep)
        self._elements: dict[tuple, Element] = {}
        self._canon: dict[tuple, tuple] = {(): ()}
        self._closures: dict[tuple, frozenset] = {(): frozenset({()})}
        self._rmul: dict = {}
        self._lmul: dict = {}
        self._inv: dict = {}
        self._bruhat: dict = {}
        self._intervals: dict = {}
        self._spheres: list[list[Element]] | None = None
        self._finite_size: int | None = None
        self._extra_caches: dict = {}
        self.identity = self._intern(())

    # -- configuration ----------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.generators)

    def m(self, s: int, t: int):
        return self.coxeter_matrix[s][t]

    def weight(self, s: int) -> int:
        return self.weights[s]

    def gen_index(self, g) -> int:
        if isinstance(g, int):
            if not 0 <= g < self.rank:
                raise ConfigError(f"generator index {g} out of range")
            return g
        try:
            return self._index[g]
        except KeyError:
            raise ConfigError(f"unknown generator {g!r}") from None

    @classmethod
    def from_config(cls, cfg: dict) -> "CoxeterSystem":
        try:
            gens = cfg["generators"]
            m = cfg["m"]
            weights = cfg["weights"]
            family = cfg["family"]
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"missing config key: {exc}") from None
        kwargs = {}
        if "max_braid_class" in cfg:
            kwargs["max_braid_class"] = cfg["max_braid_class"]
        return cls(gens, m, weights, family, **kwargs)

    def to_config(self) -> dict:
        return {
            "generators": list(self.generators),
            "m": [
                [0 if x is INFINITY else x for x in row] for row in self.coxeter_matrix
            ],
            "weights": list(self.weights),
            "family": self.family,
        }

    def content_hash(self) -> str:
        blob = json.dumps(self.to_config(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()

    # -- word problem -----------------------------------------------------

    def _bfs_closure(self, word: tuple) -> frozenset:
        cap = self.max_braid_class
        patterns = self._patterns
        seen = {word}
        frontier = [word]
        while frontier:
            nxt = []
            for w in frontier:
                for i in range(len(w) - 1):
                    key = (w[i], w[i + 1])
                    pr = patterns.get(key)
                    if pr is None:
                        continue
                    pat, rep = pr
                    k = len(pat)
                    if w[i : i + k] == pat:
                        u = w[:i] + rep + w[i + k :]
                        if u not in seen:
                            seen.add(u)
                            nxt.append(u)
                            if len(seen) > cap:
                                raise BraidOverflowError(
                                    f"braid class exceeds cap {cap} "
                                    f"(word length {len(word)})"
                                )
            frontier = nxt
        return frozenset(seen)

    def _closure_of_reduced(self, word: tuple) -> frozenset:
        canon = self._canon.get(word)
        if canon is not None:
            return self._closures[canon]
        fs = self._bfs_closure(word)
        canon = min(fs)
        if canon not in self._closures:
            self._closures[canon] = fs
        self._canon[word] = canon
        self._canon[canon] = canon
        return self._closures[canon]

    def canonical_word(self, word: Iterable) -> tuple[int, ...]:
        """ShortLex-minimal reduced word for the element the input word spells."""
        w = tuple(self.gen_index(g) for g in word)
        known = self._canon.get(w)
        if known is not None:
            return known
        orig = w
        while True:
            fs = self._bfs_closure(w)
            shorter = None
            for u in fs:
                for i in range(len(u) - 1):
                    if u[i] == u[i + 1]:
                        shorter = u[:i] + u[i + 2 :]
                        break
                if shorter is not None:
                    break
            if shorter is None:
                canon = min(fs)
                if canon not in self._closures:
                    self._closures[canon] = fs
                self._canon[canon] = canon
                self._canon[orig] = canon
                return canon
            w = shorter

    def _intern(self, canon_word: tuple) -> Element:
        el = self._elements.get(canon_word)
        if el is None:
            el = Element(self, canon_word)
            self._elements[canon_word] = el
        return el

    def _intern_reduced(self, word: tuple) -> Element:
        return self._intern(min(self._closure_of_reduced(word)))

    def element(self, word) -> Element:
        """Canonicalize an arbitrary word (string, name list, or index list)."""
        if isinstance(word, Element):
            if word.system is not self:
                raise ConfigError("element belongs to a different system")
            return word
        if isinstance(word, str):
            word = word.split()
        return self._intern(self.canonical_word(word))

    def generator(self, g) -> Element:
        return self._intern((self.gen_index(g),))

    def word_str(self, el: Element) -> str:
        if not el.word:
            return "e"
        return " ".join(self.generators[s] for s in el.word)

    def reduced_words(self, el: Element) -> frozenset:
        """All reduced words of el (its braid-equivalence class)."""
        return self._closure_of_reduced(el.word)

    # -- multiplication ---------------------------------------------------

    def right_mul(self, el: Element, s: int) -> Element:
        key = (el.word, s)
        res = self._rmul.get(key)
        if res is None:
            if s in self.right_descents(el):
                for u in self.reduced_words(el):
                    if u[-1] == s:
                        res = self._intern_reduced(u[:-1])
                        break
            else:
                res = self._intern_reduced(el.word + (s,))
            self._rmul[key] = res
        return res

    def left_mul(self, s: int, el: Element) -> Element:
        key = (s, el.word)
        res = self._lmul.get(key)
        if res is None:
            if s in self.left_descents(el):
                for u in self.reduced_words(el):
                    if u[0] == s:
                        res = self._intern_reduced(u[1:])
                        break
            else:
                res = self._intern_reduced((s,) + el.word)
            self._lmul[key] = res
        return res

    def mul(self, a: Element, b: Element) -> Element:
        for s in b.word:
            a = self.right_mul(a, s)
        return a

    def inverse(self, el: Element) -> Element:
        res = self._inv.get(el)
        if res is None:
            res = self._intern_reduced(el.word[::-1])
            self._inv[el] = res
        return res

    # -- descents and Bruhat order -----------------------------------------

    def right_descents(self, el: Element) -> frozenset:
        if el._rdesc is None:
            el._rdesc = frozenset(u[-1] for u in self.reduced_words(el) if u)
        return el._rdesc

    def left_descents(self, el: Element) -> frozenset:
        if el._ldesc is None:
            el._ldesc = frozenset(u[0] for u in self.reduced_words(el) if u)
        return el._ldesc

    def bruhat_leq(self, y: Element, w: Element) -> bool:
        if not y.word:
            return True
        if y.length > w.length:
            return False
        if y is w or y.word == w.word:
            return True
        key = (y.word, w.word)
        res = self._bruhat.get(key)
        if res is None:
            s = min(self.left_descents(w))
            sw = self.left_mul(s, w)
            sy = self.left_mul(s, y)
            if sy.length < y.length:
                res = self.bruhat_leq(sy, sw)
            else:
                res = self.bruhat_leq(y, sw)
            self._bruhat[key] = res
        return res

    def bruhat_interval(self, w: Element) -> list[Element]:
        """All y <= w in Bruhat order, ShortLex-sorted (subword enumeration)."""
        cached = self._intervals.get(w)
        if cached is None:
            cur = {self.identity}
            for s in w.word:
                cur |= {self.right_mul(x, s) for x in cur}
            cached = sorted(cur)
            self._intervals[w] = cached
        return cached

    # -- balls --------------------------------------------------------------

    def sphere(self, k: int) -> list[Element]:
        if self._spheres is None:
            self._spheres = [[self.identity]]
        spheres = self._spheres
        while len(spheres) <= k:
            if self._finite_size is not None and not spheres[-1]:
                spheres.append([])
                continue
            prev = spheres[-1]
            nxt = set()
            for x in prev:
                for s in range(self.rank):
                    z = self.right_mul(x, s)
                    if z.length == len(spheres):
                        nxt.add(z)
            spheres.append(sorted(nxt))
            if not nxt and self._finite_size is None:
                self._finite_size = sum(len(sp) for sp in spheres)
        return spheres[k]

    def ball(self, radius: int) -> list[Element]:
        """All elements of length <= radius, sorted by (length, word)."""
        out: list[Element] = []
        for k in range(radius + 1):
            out.extend(self.sphere(k))
        return out

    def full_group(self, max_length: int = 64) -> list[Element]:
        """Enumerate a finite group; raises if no empty sphere shows up in time."""
        for k in range(max_length + 1):
            if not self.sphere(k):
                return self.ball(k)
        raise BraidOverflowError(
            f"group not exhausted within length {max_length}; is it infinite?"
        )

    # -- parabolic subsystems -------------------------------------------------

    def subsystem(self, gens: Sequence) -> "tuple[CoxeterSystem, tuple[int, ...]]":
        """Standard parabolic subsystem on a generator subset.

        Returns (subsystem, index_map) where index_map[i] is the parent index of
        the subsystem's generator i.
        """
        idx = tuple(self.gen_index(g) for g in gens)
        if len(set(idx)) != len(idx):
            raise ConfigError("duplicate generators in subsystem")
        sub = CoxeterSystem(
            [self.generators[i] for i in idx],
            [[self.coxeter_matrix[i][j] for j in idx] for i in idx],
            [self.weights[i] for i in idx],
            self.family,
            self.max_braid_class,
        )
        return sub, idx

    def embed(self, sub_el: Element, index_map: tuple[int, ...]) -> Element:
        return self.element([index_map[s] for s in sub_el.word])


# -- spec-level convenience wrappers ------------------------------------------


def canonicalize(sys: CoxeterSystem, word) -> Element:
    return sys.element(word)


def descent_sets(sys: CoxeterSystem, w: Element) -> tuple[frozenset, frozenset]:
    """(left descents, right descents)."""
    return sys.left_descents(w), sys.right_descents(w)


def bruhat_leq(sys: CoxeterSystem, y: Element, w: Element) -> bool:
    return sys.bruhat_leq(y, w)


def all_reduced_words(sys: CoxeterSystem, w: Element) -> list[tuple[int, ...]]:
    return sorted(sys.reduced_words(w))
