import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from matroid_hom import bits
from matroid_hom.catalog import CatalogSpec, enumerate_matroids
from matroid_hom.core import GroundSet, Matroid, uniform
from matroid_hom.errors import (
    ElementNotInGround,
    EmptyGround,
    GroundMismatch,
    SizeMismatch,
)
from matroid_hom.maps import (
    GroundMap,
    all_homomorphisms,
    all_surjections,
    compose,
    identity,
    image_of_set,
    is_circuit_injection,
    is_homeomorphism,
    is_homomorphism,
    preimage_of_set,
)


@pytest.fixture
def small_map() -> GroundMap:
    """1,2 -> x; 3 -> y."""
    return GroundMap.from_labels(
        GroundSet(("1", "2", "3")), GroundSet(("x", "y")), {"1": "x", "2": "x", "3": "y"}
    )


def test_image_of_set(small_map):
    S, T = small_map.source, small_map.target
    assert image_of_set(small_map, S.mask("1", "3")) == T.mask("x", "y")
    assert image_of_set(small_map, 0) == 0
    A, B = S.mask("1"), S.mask("2", "3")
    fA, fB = image_of_set(small_map, A), image_of_set(small_map, B)
    assert fA ^ fB == T.mask("y")
    assert bits.is_subset(fA ^ fB, image_of_set(small_map, A ^ B))


def test_image_outside_ground(small_map):
    with pytest.raises(ElementNotInGround):
        image_of_set(small_map, 1 << 5)


def test_preimage_of_set(collapse, theta_m, u13):
    T = u13.ground
    assert theta_m.labels(preimage_of_set(collapse, T.mask("x"))) == ("a1", "a2")
    assert preimage_of_set(collapse, T.full) == theta_m.ground.full
    assert theta_m.labels(preimage_of_set(collapse, T.mask("x", "y"))) == (
        "a1",
        "a2",
        "b1",
        "b2",
    )


def test_ground_map_rejects_partial_and_unknown(u13, theta_m):
    with pytest.raises(GroundMismatch):
        GroundMap.from_labels(theta_m.ground, u13.ground, {"a1": "x"})
    with pytest.raises(ElementNotInGround):
        GroundMap.from_labels(
            theta_m.ground, u13.ground, {label: "w" for label in theta_m.ground}
        )
    with pytest.raises(EmptyGround):
        GroundMap(GroundSet(()), u13.ground, ())


def test_ground_map_properties(collapse, u13):
    assert collapse.is_surjective
    assert not collapse.is_injective
    assert [collapse.source.labels(f) for f in collapse.fibers()] == [
        ("a1", "a2"),
        ("b1", "b2"),
        ("c1", "c2"),
    ]
    assert identity(u13.ground).is_injective


def test_collapse_is_a_homeomorphism(collapse, theta_m, u13):
    assert is_homomorphism(collapse, theta_m, u13)
    assert is_homeomorphism(collapse, theta_m, u13)
    verdict = is_circuit_injection(collapse, theta_m, u13)
    assert not verdict
    assert verdict.reason == "NotInjective"


def test_fold_is_not_a_homeomorphism(fold, theta_m, u12):
    assert is_homomorphism(fold, theta_m, u12)
    verdict = is_homeomorphism(fold, theta_m, u12)
    assert not verdict
    assert verdict.reason == "PreimageNotCircuit"
    assert verdict.circuit == u12.ground.full
    assert verdict.image == theta_m.ground.full


def test_identity_is_everything(theta_m):
    f = identity(theta_m.ground)
    assert is_homomorphism(f, theta_m, theta_m)
    assert is_homeomorphism(f, theta_m, theta_m)
    assert is_circuit_injection(f, theta_m, theta_m)


def test_circuit_injection_into_refinement(u13):
    ground = u13.ground
    coarse = Matroid(ground, (ground.mask("x", "y"),))
    assert is_circuit_injection(identity(ground), coarse, u13)
    assert not is_circuit_injection(identity(ground), u13, coarse)


def test_not_onto(u13):
    ground = u13.ground
    f = GroundMap(ground, ground, (0, 0, 1))
    verdict = is_homomorphism(f, u13, u13)
    assert verdict.reason == "NotOnto"
    assert verdict.element == ground.index("z")


def test_circuit_not_preserved(u24, u13):
    f = GroundMap.from_labels(u24.ground, u13.ground, {"a": "x", "b": "x", "c": "y", "d": "z"})
    verdict = is_homomorphism(f, u24, u13)
    assert verdict.reason == "CircuitNotPreserved"
    assert u24.labels(verdict.circuit) == ("a", "c", "d")
    assert u13.labels(verdict.image) == ("x", "y", "z")


def test_ground_mismatch(collapse, u24, u13):
    with pytest.raises(GroundMismatch):
        is_homomorphism(collapse, u24, u13)


def test_compose(collapse, theta_m, u13):
    assert compose(identity(u13.ground), collapse) == collapse
    assert compose(collapse, identity(theta_m.ground)) == collapse
    with pytest.raises(GroundMismatch):
        compose(collapse, collapse)


def test_composition_of_homomorphisms_is_a_homomorphism():
    for M in enumerate_matroids(CatalogSpec(3, connected_only=True)):
        for H in enumerate_matroids(CatalogSpec(3)):
            for g in all_homomorphisms(M, H):
                for N in enumerate_matroids(CatalogSpec(len(H.ground))):
                    for h in all_homomorphisms(H, N):
                        assert is_homomorphism(compose(h, g), M, N)


def test_all_surjections_counts():
    def count(n, m):
        return sum(1 for _ in all_surjections(GroundSet.range(n), GroundSet.range(m)))

    assert count(2, 2) == 2
    assert count(3, 2) == 6
    assert count(3, 3) == 6
    assert count(4, 3) == 36
    with pytest.raises(SizeMismatch):
        list(all_surjections(GroundSet.range(2), GroundSet.range(3)))


def test_all_surjections_are_lexicographic_and_onto():
    maps = list(all_surjections(GroundSet.range(4), GroundSet.range(2)))
    assignments = [f.assignment for f in maps]
    assert assignments == sorted(assignments)
    assert len(set(assignments)) == len(assignments) == 14
    assert all(f.is_surjective for f in maps)


def test_all_homomorphisms_examples(u24, u13, collapse, theta_m):
    assert all_homomorphisms(u24, u13) == []
    assert identity(theta_m.ground) in all_homomorphisms(theta_m, theta_m)
    assert collapse in all_homomorphisms(theta_m, u13)


def test_all_homomorphisms_is_the_filtered_surjection_stream():
    for M in enumerate_matroids(CatalogSpec(4, min_ground_size=3)):
        for N in enumerate_matroids(CatalogSpec(3, min_ground_size=2)):
            if len(N.ground) > len(M.ground):
                continue
            expected = [
                f
                for f in all_surjections(M.ground, N.ground)
                if is_homomorphism(f, M, N)
            ]
            assert all_homomorphisms(M, N) == expected


def test_homeomorphism_and_injection_imply_homomorphism():
    for M in enumerate_matroids(CatalogSpec(3)):
        for N in enumerate_matroids(CatalogSpec(len(M.ground))):
            for f in all_surjections(M.ground, N.ground):
                if is_homeomorphism(f, M, N) or is_circuit_injection(f, M, N):
                    assert is_homomorphism(f, M, N)


# image algebra, on arbitrary functions between small sets


@st.composite
def functions(draw):
    n = draw(st.integers(1, 6))
    m = draw(st.integers(1, 6))
    assignment = tuple(draw(st.lists(st.integers(0, m - 1), min_size=n, max_size=n)))
    A = draw(st.integers(0, (1 << n) - 1))
    B = draw(st.integers(0, (1 << n) - 1))
    return n, m, assignment, A, B


def _image(assignment, A):
    return bits.from_indices(assignment[i] for i in bits.indices(A))


@given(functions())
def test_symmetric_difference_of_images(case):
    _, _, f, A, B = case
    assert bits.is_subset(_image(f, A) ^ _image(f, B), _image(f, A ^ B))
    assert bits.is_subset(_image(f, A) & ~_image(f, B), _image(f, A & ~B))
    assert _image(f, A | B) == _image(f, A) | _image(f, B)


@given(functions())
def test_preimage_of_image_contains_the_set(case):
    n, m, assignment, A, _ = case
    f = GroundMap(GroundSet.range(n), GroundSet.range(m), assignment)
    assert bits.is_subset(A, preimage_of_set(f, image_of_set(f, A)))


def test_image_identities_over_all_small_functions():
    for n, m in itertools.product(range(1, 4), repeat=2):
        for f in itertools.product(range(m), repeat=n):
            for A, B in itertools.product(range(1 << n), repeat=2):
                assert bits.is_subset(_image(f, A) ^ _image(f, B), _image(f, A ^ B))
