"""Word problem, lengths, Bruhat order, and configuration.

The independent oracle here is the reflection representation: each
generator acts on the root-space basis by an exact matrix (integer entries
when every 2cos(pi/m) is an integer, Z[sqrt(2)] entries when m = 4 shows
up).  This representation is faithful for every Coxeter system, so

  * two words spell the same element  iff  their matrices are equal, and
  * l(w) = Cayley-graph distance of rep(w) from the identity matrix,

neither of which goes anywhere near the package's braid-move machinery.
The Bruhat oracle is the subword property, enumerated brute-force over all
2^l subsequences of one fixed reduced word.
"""

import itertools

import pytest

from heckecells.coxeter import INFINITY, CoxeterSystem
from heckecells.errors import BraidOverflowError, ConfigError

# -- exact scalars in Z[sqrt(2)]: (a, b) means a + b*sqrt(2) --------------------


def q2_add(x, y):
    return (x[0] + y[0], x[1] + y[1])


def q2_mul(x, y):
    return (x[0] * y[0] + 2 * x[1] * y[1], x[0] * y[1] + x[1] * y[0])


Q2_ZERO = (0, 0)
Q2_ONE = (1, 0)


def two_cos(m):
    """2cos(pi/m) in Z[sqrt(2)], for m in {2, 3, 4, infinity}."""
    if m == 2:
        return Q2_ZERO
    if m == 3:
        return Q2_ONE
    if m == 4:
        return (0, 1)
    if m is INFINITY:
        return (2, 0)
    raise ValueError(f"oracle does not support m = {m}")


def reflection_matrices(sys):
    """One matrix per generator; entry [k][j] = coeff of alpha_k in s_i(alpha_j)."""
    n = sys.rank
    mats = []
    for i in range(n):
        rows = [[Q2_ONE if k == j else Q2_ZERO for j in range(n)] for k in range(n)]
        for j in range(n):
            rows[i][j] = (-1, 0) if j == i else two_cos(sys.m(i, j))
        mats.append(tuple(map(tuple, rows)))
    return mats


def mat_mul(a, b):
    n = len(a)
    return tuple(
        tuple(
            _dot(a[k], [b[x][j] for x in range(n)])
            for j in range(n)
        )
        for k in range(n)
    )


def _dot(row, col):
    acc = Q2_ZERO
    for x, y in zip(row, col):
        acc = q2_add(acc, q2_mul(x, y))
    return acc


def rep(sys, mats, word):
    n = sys.rank
    m = tuple(
        tuple(Q2_ONE if k == j else Q2_ZERO for j in range(n)) for k in range(n)
    )
    for s in word:
        m = mat_mul(m, mats[s])
    return m


def cayley_bfs(sys, mats, radius):
    """Independent ball: {matrix: distance} by BFS over the representation."""
    n = sys.rank
    ident = tuple(
        tuple(Q2_ONE if k == j else Q2_ZERO for j in range(n)) for k in range(n)
    )
    dist = {ident: 0}
    frontier = [ident]
    for k in range(1, radius + 1):
        nxt = []
        for m in frontier:
            for s in range(sys.rank):
                m2 = mat_mul(m, mats[s])
                if m2 not in dist:
                    dist[m2] = k
                    nxt.append(m2)
        frontier = nxt
    return dist


BALL_RADII = {"sys_m3": 5, "sys_mixed": 5, "sys_ra": 6}


@pytest.fixture(params=sorted(BALL_RADII), scope="module")
def system_and_radius(request):
    return request.getfixturevalue(request.param), BALL_RADII[request.param]


def test_word_problem_against_reflection_representation(system_and_radius):
    sys, radius = system_and_radius
    mats = reflection_matrices(sys)
    oracle = cayley_bfs(sys, mats, radius)
    ball = sys.ball(radius)
    seen = {}
    for el in ball:
        m = rep(sys, mats, el.word)
        # faithfulness: distinct elements, distinct matrices
        assert m not in seen, f"{el} collides with {seen[m]}"
        seen[m] = el
        # length = Cayley distance
        assert oracle[m] == el.length
    # completeness both ways: the package ball is exactly the oracle ball
    assert len(seen) == len(oracle)


def test_sphere_sizes_match_oracle(system_and_radius):
    sys, radius = system_and_radius
    mats = reflection_matrices(sys)
    oracle = cayley_bfs(sys, mats, radius)
    by_dist = {}
    for d in oracle.values():
        by_dist[d] = by_dist.get(d, 0) + 1
    for k in range(radius + 1):
        assert len(sys.sphere(k)) == by_dist.get(k, 0)


def test_canonical_word_is_shortlex_minimal(sys_m3, sys_mixed):
    for sys in (sys_m3, sys_mixed):
        for el in sys.ball(5):
            words = sys.reduced_words(el)
            assert el.word == min(words)
            assert all(len(u) == el.length for u in words)


def test_element_parsing_round_trips(sys_m3):
    el = sys_m3.element("s2 s1 s3 s2")
    assert sys_m3.element(el.word) is el
    assert sys_m3.element(sys_m3.word_str(el).split()) is el
    assert sys_m3.element("") is sys_m3.identity
    assert sys_m3.word_str(sys_m3.identity) == "e"


def test_involution_relations(sys_m3):
    s1, s2 = sys_m3.generator(0), sys_m3.generator(1)
    assert sys_m3.mul(s1, s1) is sys_m3.identity
    braid = sys_m3.element("s1 s2 s1")
    assert braid is sys_m3.element("s2 s1 s2")
    assert sys_m3.mul(braid, braid) is sys_m3.identity


def test_inverse_is_word_reversal(system_and_radius):
    sys, radius = system_and_radius
    for el in sys.ball(min(radius, 4)):
        inv = sys.inverse(el)
        assert sys.mul(el, inv) is sys.identity
        assert inv.length == el.length
        assert sys.inverse(inv) is el


def test_descents_via_lengths(system_and_radius):
    sys, radius = system_and_radius
    for el in sys.ball(min(radius, 4)):
        left = {s for s in range(sys.rank) if sys.left_mul(s, el).length < el.length}
        right = {s for s in range(sys.rank) if sys.right_mul(el, s).length < el.length}
        assert sys.left_descents(el) == left
        assert sys.right_descents(el) == right


def test_bruhat_order_against_subword_oracle(system_and_radius):
    sys, radius = system_and_radius
    ball = sys.ball(min(radius, 4))
    for w in ball:
        below = set()
        for k in range(w.length + 1):
            for positions in itertools.combinations(range(w.length), k):
                below.add(sys.element([w.word[i] for i in positions]))
        for y in ball:
            assert sys.bruhat_leq(y, w) == (y in below), (y, w)
        assert set(sys.bruhat_interval(w)) == below


def test_bruhat_is_a_partial_order(sys_m3):
    ball = sys_m3.ball(3)
    for y in ball:
        assert sys_m3.bruhat_leq(y, y)
    for y in ball:
        for w in ball:
            if y is not w and sys_m3.bruhat_leq(y, w) and sys_m3.bruhat_leq(w, y):
                raise AssertionError(f"antisymmetry broken at {y}, {w}")


def test_weight_length_is_additive_on_reduced_words(sys_mixed):
    for el in sys_mixed.ball(5):
        assert el.weight_length == sum(sys_mixed.weights[s] for s in el.word)
        # all reduced words carry the same multiset of weights
        for u in sys_mixed.reduced_words(el):
            assert sum(sys_mixed.weights[s] for s in u) == el.weight_length


def test_right_angled_commuting_pair(sys_ra):
    # m(s1, s3) = 2: the pair commutes, nothing else does
    assert sys_ra.element("s1 s3") is sys_ra.element("s3 s1")
    assert sys_ra.element("s1 s2") is not sys_ra.element("s2 s1")
    # infinite bond: alternating words never shorten
    w = sys_ra.element("s1 s2 s1 s2 s1 s2")
    assert w.length == 6


def test_dihedral_longest_element_identification():
    sys = CoxeterSystem(["s", "t"], [[1, 4], [4, 1]], [1, 2], family="complete")
    assert sys.element("s t s t") is sys.element("t s t s")
    assert not sys.sphere(5)
    assert len(sys.full_group()) == 8


def test_subsystem_embeds_isometrically(sys_mixed):
    sub, idx = sys_mixed.subsystem(["s1", "s3"])
    assert sub.m(0, 1) == 4
    assert sub.weights == (1, 2)
    for el in sub.ball(4):
        parent = sys_mixed.embed(el, idx)
        assert parent.length == el.length
        assert parent.weight_length == el.weight_length


def test_config_round_trip(sys_ra):
    cfg = sys_ra.to_config()
    assert cfg["m"][0][1] == 0  # infinity encodes as 0
    clone = CoxeterSystem.from_config(cfg)
    assert clone.to_config() == cfg
    assert clone.content_hash() == sys_ra.content_hash()


def test_content_hash_separates_systems(sys_m3, sys_mixed):
    assert sys_m3.content_hash() != sys_mixed.content_hash()
    reweighted = CoxeterSystem(
        ["s1", "s2", "s3"],
        [[1, 3, 3], [3, 1, 3], [3, 3, 1]],
        [2, 2, 2],
        family="complete",
    )
    assert reweighted.content_hash() != sys_m3.content_hash()


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(generators=[], coxeter_matrix=[], weights=[], family="complete"),
        dict(generators=["s", "s"], coxeter_matrix=[[1, 3], [3, 1]], weights=[1, 1], family="complete"),
        dict(generators=["s", "t"], coxeter_matrix=[[1, 3], [4, 1]], weights=[1, 1], family="complete"),
        dict(generators=["s", "t"], coxeter_matrix=[[2, 3], [3, 1]], weights=[1, 1], family="complete"),
        dict(generators=["s", "t"], coxeter_matrix=[[1, 1], [1, 1]], weights=[1, 1], family="complete"),
        dict(generators=["s", "t"], coxeter_matrix=[[1, 2], [2, 1]], weights=[1, 1], family="complete"),
        dict(generators=["s", "t"], coxeter_matrix=[[1, 3], [3, 1]], weights=[1, 1], family="right-angled"),
        dict(generators=["s", "t"], coxeter_matrix=[[1, 3], [3, 1]], weights=[1, 2], family="complete"),
        dict(generators=["s", "t"], coxeter_matrix=[[1, 3], [3, 1]], weights=[1], family="complete"),
        dict(generators=["s", "t"], coxeter_matrix=[[1, 3], [3, 1]], weights=[0, 0], family="complete"),
        dict(generators=["s", "t"], coxeter_matrix=[[1, 3], [3, 1]], weights=[1, 1], family="affine"),
    ],
)
def test_config_validation_rejects(kwargs):
    with pytest.raises(ConfigError):
        CoxeterSystem(**kwargs)


def test_braid_class_cap_is_enforced():
    capped = CoxeterSystem(
        ["s1", "s2", "s3"],
        [[1, 3, 3], [3, 1, 3], [3, 3, 1]],
        [1, 1, 1],
        family="complete",
        max_braid_class=2,
    )
    with pytest.raises(BraidOverflowError):
        capped.ball(6)


def test_sorted_ball_order_is_shortlex(sys_m3):
    ball = sys_m3.ball(4)
    keys = [(el.length, el.word) for el in ball]
    assert keys == sorted(keys)
    assert ball == sorted(ball)
