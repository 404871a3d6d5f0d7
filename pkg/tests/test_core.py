import itertools

import pytest

from matroid_hom import bits
from matroid_hom.catalog import CatalogSpec, enumerate_matroids, theta
from matroid_hom.core import (
    GroundSet,
    Matroid,
    coloops,
    corank,
    cycle_matroid,
    in_series,
    is_binary,
    is_connected,
    is_crk,
    is_crk_on,
    is_refinement,
    is_single_circuit,
    isomorphic,
    loops,
    nonbinary_pair,
    rank,
    restrict,
    series_partition,
    series_quotient,
    subdivide,
    uniform,
    validate_circuits,
    vector_matroid_gf2,
)
from matroid_hom.errors import (
    ElementNotInGround,
    EliminationFails,
    EmptyCircuit,
    EmptyFiber,
    EmptyGround,
    FiberOverlap,
    HasColoops,
    InvalidParameters,
    InvalidVertex,
    NotAntichain,
    NotConnected,
)


def labelled(M: Matroid) -> set[frozenset[str]]:
    return {frozenset(c) for c in M.circuit_labels()}


# validation


def test_validate_single_circuit():
    M = validate_circuits(GroundSet(("a", "b")), [("a", "b")])
    assert M == uniform(1, 2, labels=["a", "b"])


def test_validate_uniform_family():
    ground = GroundSet(tuple("abcd"))
    M = validate_circuits(ground, itertools.combinations("abcd", 3))
    assert M == uniform(2, 4, labels=list("abcd"))


def test_validate_rejects_nested_circuits():
    with pytest.raises(NotAntichain) as info:
        validate_circuits(GroundSet(tuple("abc")), [("a", "b"), ("a", "b", "c")])
    assert set(info.value.sets) == {("a", "b", "c"), ("a", "b")}


def test_validate_rejects_empty_circuit():
    with pytest.raises(EmptyCircuit):
        validate_circuits(GroundSet(tuple("ab")), [()])


def test_validate_rejects_failed_elimination():
    # {a,b} and {b,c} need a circuit inside {a,c}
    with pytest.raises(EliminationFails) as info:
        validate_circuits(GroundSet(tuple("abc")), [("a", "b"), ("b", "c")])
    assert info.value.element == "b"


def test_validate_rejects_unknown_label():
    with pytest.raises(ElementNotInGround):
        validate_circuits(GroundSet(tuple("ab")), [("a", "q")])


def test_ground_set_rejects_duplicates():
    with pytest.raises(InvalidParameters):
        GroundSet(("a", "a"))


def test_circuits_are_canonical():
    ground = GroundSet(tuple("abc"))
    first = Matroid(ground, (ground.mask("b", "c"), ground.mask("a", "b"), ground.mask("a", "c")))
    second = Matroid(ground, (ground.mask("a", "c"), ground.mask("a", "b"), ground.mask("b", "c")))
    assert first == second
    assert first.circuits == tuple(sorted(first.circuits, key=bits.key))


def _brute_force_matroid(ground: GroundSet, family: tuple[int, ...]) -> bool:
    sets = [set(bits.indices(c)) for c in family]
    if any(not s for s in sets):
        return False
    for s, t in itertools.permutations(sets, 2):
        if s <= t:
            return False
    for s, t in itertools.combinations(sets, 2):
        for e in s & t:
            if not any(u <= (s | t) - {e} for u in sets):
                return False
    return True


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_validation_matches_brute_force(n):
    ground = GroundSet.range(n)
    subsets = list(range(1, 1 << n))
    accepted = 0
    for choice in range(1 << len(subsets)):
        family = tuple(s for i, s in enumerate(subsets) if choice >> i & 1)
        expected = _brute_force_matroid(ground, family)
        try:
            validate_circuits(ground, family)
        except (NotAntichain, EliminationFails, EmptyCircuit):
            assert not expected, family
        else:
            assert expected, family
            accepted += 1
    assert accepted == {1: 2, 2: 5, 3: 16, 4: 68}[n]


# queries


def test_restrict(u24, theta_m):
    assert labelled(restrict(u24, u24.ground.mask("a", "b", "c"))) == {frozenset("abc")}
    assert restrict(u24, u24.ground.full) == u24
    part = restrict(theta_m, theta_m.ground.mask("a1", "a2", "b1", "b2"))
    assert is_single_circuit(part)


def test_restrict_outside_ground(u24):
    with pytest.raises(ElementNotInGround):
        restrict(u24, 1 << 7)


def test_rank_and_corank(u24, theta_m):
    assert rank(u24) == 2
    assert rank(u24, 0) == 0
    assert rank(theta_m) == 4
    assert corank(u24) == 2
    assert corank(theta_m) == 2
    assert corank(uniform(3, 3)) == 0


def test_rank_is_monotone_and_unit_increasing():
    for M in enumerate_matroids(CatalogSpec(4)):
        full = M.ground.full
        for A in range(full + 1):
            for x in bits.indices(full & ~A):
                grown = rank(M, A | (1 << x))
                assert rank(M, A) <= grown <= rank(M, A) + 1


def test_connectivity(u24, two_circuits, theta_m):
    assert is_connected(u24)
    assert not is_connected(two_circuits)
    assert is_connected(theta_m)
    assert is_connected(uniform(0, 1))
    assert is_connected(uniform(1, 1))


def test_crk(u24):
    assert is_crk(u24, 2)
    assert is_crk(uniform(2, 3), 1)
    assert not is_crk(u24, 3)
    assert is_crk_on(u24, u24.ground.mask("a", "b", "c"), 1)
    with pytest.raises(InvalidParameters):
        is_crk(u24, 0)


def test_series_partition(theta_m, u24):
    partition = series_partition(theta_m)
    assert [theta_m.labels(block) for block in partition.classes] == [
        ("a1", "a2"),
        ("b1", "b2"),
        ("c1", "c2"),
    ]
    assert partition.loops == partition.coloops == 0
    assert len(series_partition(u24).classes) == 4
    single = uniform(2, 3)
    assert series_partition(single).classes == (single.ground.full,)


def test_series_partition_reports_loops_and_coloops():
    ground = GroundSet(tuple("abcd"))
    M = Matroid(ground, (ground.mask("a"), ground.mask("b", "c")))
    partition = series_partition(M)
    assert M.labels(partition.loops) == ("a",)
    assert M.labels(partition.coloops) == ("d",)
    assert partition.classes == (ground.mask("b", "c"),)
    assert loops(M) == partition.loops
    assert coloops(M) == partition.coloops


def test_in_series(theta_m):
    index = theta_m.ground.index
    assert in_series(theta_m, index("a1"), index("a2"))
    assert not in_series(theta_m, index("a1"), index("b1"))
    assert in_series(theta_m, index("c1"), index("c1"))


def test_in_series_is_the_partition_relation():
    for M in enumerate_matroids(CatalogSpec(4)):
        partition = series_partition(M)
        for x, y in itertools.combinations(bits.indices(M.ground.full & ~partition.loops & ~partition.coloops), 2):
            same = partition.class_of(x) == partition.class_of(y)
            assert in_series(M, x, y) == same


def test_binary(u24, mk4_m):
    assert not is_binary(u24)
    assert nonbinary_pair(u24) == (u24.ground.mask("a", "b", "c"), u24.ground.mask("a", "b", "d"))
    assert is_binary(mk4_m)
    assert is_binary(uniform(4, 5))


def test_single_circuit():
    assert is_single_circuit(uniform(2, 3))
    assert not is_single_circuit(uniform(1, 3))
    assert not is_single_circuit(uniform(3, 3))


def test_refinement(u13):
    ground = u13.ground
    coarse = Matroid(ground, (ground.mask("x", "y"),))
    assert is_refinement(coarse, u13)
    assert not is_refinement(u13, coarse)


# GF(2) oracle


def _gf2_rank(rows: list[int]) -> int:
    rows = list(rows)
    r = 0
    for bit in range(max((v.bit_length() for v in rows), default=0)):
        pivot = next((i for i in range(r, len(rows)) if rows[i] >> bit & 1), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] >> bit & 1:
                rows[i] ^= rows[r]
        r += 1
    return r


def _binary_by_representation(M: Matroid) -> bool:
    """Build the GF(2) representation from fundamental circuits and compare."""
    n = len(M.ground)
    basis: list[int] = []
    chosen = 0
    for i in range(n):
        candidate = chosen | (1 << i)
        if not any(bits.is_subset(c, candidate) for c in M.circuits):
            chosen = candidate
            basis.append(i)
    row = {b: k for k, b in enumerate(basis)}
    columns = [0] * n
    for i in range(n):
        if i in row:
            columns[i] = 1 << row[i]
            continue
        circuit = next(c for c in M.circuits if bits.is_subset(c, chosen | (1 << i)))
        for b in bits.indices(circuit & ~(1 << i)):
            columns[i] |= 1 << row[b]
    dependent = [
        s for s in range(1, 1 << n)
        if _gf2_rank([columns[i] for i in bits.indices(s)]) < bits.popcount(s)
    ]
    minimal = {s for s in dependent if not any(t != s and bits.is_subset(t, s) for t in dependent)}
    return minimal == M.circuit_set


def test_binary_matches_gf2_oracle():
    for M in enumerate_matroids(CatalogSpec(5)):
        assert is_binary(M) == _binary_by_representation(M), M


@pytest.mark.slow
def test_binary_matches_gf2_oracle_on_six_elements():
    for M in enumerate_matroids(CatalogSpec(6, min_ground_size=6)):
        assert is_binary(M) == _binary_by_representation(M), M


def test_vector_matroid_gf2():
    # columns 1, 2, 3 over GF(2): the only circuit is all three
    M = vector_matroid_gf2([1, 2, 3], list("abc"))
    assert M == uniform(2, 3, labels=list("abc"))
    with_zero = vector_matroid_gf2([0, 1, 1])
    assert labelled(with_zero) == {frozenset({"e0"}), frozenset({"e1", "e2"})}


# constructors


def test_uniform():
    assert labelled(uniform(1, 3, labels=list("xyz"))) == {
        frozenset("xy"),
        frozenset("xz"),
        frozenset("yz"),
    }
    assert len(uniform(2, 4).circuits) == 4
    assert uniform(3, 3).circuits == ()
    with pytest.raises(InvalidParameters):
        uniform(4, 3)


def test_cycle_matroid():
    triangle = cycle_matroid(3, [(0, 1), (1, 2), (0, 2)])
    assert triangle.circuits == (triangle.ground.full,)
    parallel = cycle_matroid(2, [(0, 1), (0, 1)])
    assert is_single_circuit(parallel)
    loop = cycle_matroid(1, [(0, 0)])
    assert loop.circuits == (1,)
    assert len(theta().circuits) == 3
    with pytest.raises(InvalidVertex):
        cycle_matroid(2, [(0, 2)])


def test_subdivide(u13):
    M, collapse = subdivide(u13, {"x": ["x1", "x2"], "y": ["y"], "z": ["z"]})
    assert labelled(M) == {
        frozenset({"x1", "x2", "y"}),
        frozenset({"x1", "x2", "z"}),
        frozenset({"y", "z"}),
    }
    assert collapse.to_labels() == {"x1": "x", "x2": "x", "y": "y", "z": "z"}


def test_subdivide_singletons_is_a_copy(u24):
    M, _ = subdivide(u24, {label: [label] for label in u24.ground})
    assert M == u24


def test_subdivide_doubles_into_theta(u13, theta_m):
    M, _ = subdivide(u13, {label: [f"{label}1", f"{label}2"] for label in u13.ground})
    assert isomorphic(M, theta_m) is not None


def test_subdivide_errors(u13):
    with pytest.raises(FiberOverlap):
        subdivide(u13, {"x": ["p"], "y": ["p"], "z": ["z"]})
    with pytest.raises(EmptyFiber):
        subdivide(u13, {"x": ["x"], "y": []})
    with pytest.raises(ElementNotInGround):
        subdivide(u13, {"w": ["w"], "x": ["x"], "y": ["y"], "z": ["z"]})


def test_series_quotient(theta_m):
    H, g = series_quotient(theta_m)
    assert isomorphic(H, uniform(1, 3)) is not None
    assert H.ground.elements == ("a1", "b1", "c1")
    assert g.to_labels()["a2"] == "a1"


def test_series_quotient_of_reduced_matroid(u24):
    H, g = series_quotient(u24)
    assert H == u24
    assert g.is_injective


def test_series_quotient_of_single_circuit():
    H, _ = series_quotient(uniform(4, 5))
    assert len(H.ground) == 1
    assert H.circuits == (1,)


def test_series_quotient_errors(two_circuits):
    with pytest.raises(NotConnected):
        series_quotient(two_circuits)
    with pytest.raises(HasColoops):
        series_quotient(uniform(1, 1))


def test_isomorphic(u24, theta_m):
    iso = isomorphic(u24, u24)
    assert iso is not None and iso.assignment == (0, 1, 2, 3)
    assert isomorphic(uniform(1, 3), uniform(2, 3)) is None
    assert isomorphic(uniform(1, 3), uniform(1, 4)) is None
    M, _ = subdivide(uniform(1, 3, labels=list("xyz")), {"x": ["p", "q"], "y": ["r", "s"], "z": ["t", "u"]})
    iso = isomorphic(theta_m, M)
    assert iso is not None
    assert {frozenset(M.labels(sum(1 << iso(i) for i in bits.indices(c)))) for c in theta_m.circuits} == labelled(M)


def test_isomorphic_needs_a_nonempty_ground(u24):
    empty = Matroid(GroundSet(()), ())
    with pytest.raises(EmptyGround):
        isomorphic(empty, empty)
    with pytest.raises(EmptyGround):
        isomorphic(empty, u24)
