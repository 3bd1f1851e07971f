import logging

import pytest

from src.constructions import point_inclusion
from src.errors import InvalidStructureError, PreconditionError
from src.groupoid import cyclic, identity_map
from src.simpset import (
    FiniteCategory,
    SimplicialMap,
    classify_sset_map,
    enumerate_maps,
    has_rlp,
    inclusion,
    is_isomorphic_sset,
    is_quasi_category,
    nerve_of_category,
    nerve_of_functor,
    pushout_sset,
    shape,
    terminal_map,
    validate_sset,
)


@pytest.mark.parametrize("params,census", [
    (("simplex", 2), [3, 3, 1]),
    (("boundary", 2), [3, 3]),
    (("horn", 2, 1), [3, 2]),
    (("spine", 3), [4, 3]),
    (("J2",), [2, 2, 1]),
    (("K",), [2, 3, 2]),
])
def test_shape_census(params, census):
    x = shape(*params)
    assert x.nondegenerate_census() == census
    assert validate_sset(x).ok


def test_shape_rejects_bad_parameters():
    with pytest.raises(PreconditionError):
        shape("horn", 2, 3)
    with pytest.raises(PreconditionError):
        shape("torus", 2)


def test_truncation_below_dimension_is_refused():
    with pytest.raises(PreconditionError):
        shape("simplex", 3, trunc=2)


def test_k_has_two_maximal_triangles():
    assert [cell[0] for cell in shape("K").maximal_cells] == [2, 2]


def test_boundary_includes_into_simplex():
    i = inclusion(shape("boundary", 2), shape("simplex", 2))
    assert i.is_injective()


def test_maps_between_intervals():
    edge = shape("simplex", 1)
    assert len(enumerate_maps(edge, edge)) == 3


def test_isomorphism_detection():
    assert is_isomorphic_sset(shape("J2"), shape("J2"))
    assert is_isomorphic_sset(shape("spine", 1), shape("simplex", 1))
    assert not is_isomorphic_sset(shape("boundary", 2), shape("horn", 2, 1))


def test_pushout_of_two_edges_is_a_spine():
    point = shape("simplex", 0, trunc=2)
    left, right = shape("simplex", 1), shape("simplex", 1)
    f = SimplicialMap.from_nondegenerate(point, left, {(0, "0"): "1"})
    g = SimplicialMap.from_nondegenerate(point, right, {(0, "0"): "0"})
    glued = pushout_sset(f, g)
    assert glued.nondegenerate_census() == [3, 2]


def test_nerve_of_chain_poset_is_a_triangle():
    chain = FiniteCategory.poset(["a", "b", "c"], [("a", "b"), ("b", "c")])
    nerve = nerve_of_category(chain)
    assert nerve.nondegenerate_census() == [3, 3, 1]
    assert nerve.skeletal


def test_poset_must_be_antisymmetric():
    with pytest.raises(InvalidStructureError):
        FiniteCategory.poset(["a", "b"], [("a", "b"), ("b", "a")])


def test_rlp_needs_injective_map():
    edge = shape("simplex", 1)
    with pytest.raises(PreconditionError):
        has_rlp(terminal_map(edge), terminal_map(edge))


def test_nerve_of_groupoid_is_quasi_category(codiscrete2):
    nerve = nerve_of_category(FiniteCategory.of_groupoid(codiscrete2), trunc=3)
    assert is_quasi_category(nerve, 3)


def test_spine_is_not_quasi_category():
    assert not is_quasi_category(shape("spine", 2), 2)


def test_nerve_of_identity_is_quasi_fibration(caplog):
    with caplog.at_level(logging.WARNING):
        profile = classify_sset_map(nerve_of_functor(identity_map(cyclic(2))))
    assert profile.mid_fibration and profile.quasi_fibration
    assert profile.caveat
    assert "truncated" in caplog.text


def test_point_inclusion_is_mid_fibration_but_not_quasi_fibration(codiscrete2):
    profile = classify_sset_map(nerve_of_functor(point_inclusion(codiscrete2, "0")))
    assert profile.mid_fibration
    assert not profile.quasi_fibration
    assert profile.witness == {"against": "{1} -> K"}


def test_classify_refuses_low_truncation():
    f = nerve_of_functor(identity_map(cyclic(2)), trunc=2)
    with pytest.raises(PreconditionError):
        classify_sset_map(f, dim_bound=3)
