import pytest

from src.constructions import (
    are_equivalent,
    enumerate_functors,
    equalizer,
    eso_ff_factorize,
    factorize,
    fiberwise_path_object,
    functor_label,
    functor_of_label,
    generators,
    group_homomorphisms,
    hom_groupoid,
    natural_isos,
    constant_map,
    path_object,
    point_inclusion,
    product,
    pullback,
    transport_map,
    unique_map,
)
from src.errors import PreconditionError
from src.groupoid import (
    GroupoidMap,
    codiscrete,
    compose_maps,
    cyclic,
    discrete,
    group_groupoid,
    identity_map,
    is_equivalence,
    is_essentially_surjective,
    is_fully_faithful,
    is_isofibration,
    terminal,
    validate_groupoid,
)


def test_product_sizes(z2, codiscrete2):
    limit = product(z2, codiscrete2)
    assert len(limit.apex.objects) == 2
    assert len(limit.apex.morphisms) == 8
    assert validate_groupoid(limit.apex).ok
    assert limit.left.validated().cod is z2


def test_pullback_over_point_is_product(z2, codiscrete2):
    point = terminal()
    limit = pullback(unique_map(z2, point), unique_map(codiscrete2, point))
    assert set(limit.apex.objects) == {("*", "0"), ("*", "1")}
    assert len(limit.apex.morphisms) == 8


def test_pullback_needs_common_codomain(z2, codiscrete2):
    with pytest.raises(PreconditionError):
        pullback(unique_map(z2), unique_map(codiscrete2))


def test_equalizer_of_identity_and_inversion():
    z3 = cyclic(3)
    inversion = GroupoidMap(z3, z3, {"*": "*"}, {"e": "e", "r": "r2", "r2": "r"}).validated()
    limit = equalizer(identity_map(z3), inversion)
    assert limit.apex.morphisms == ("e",)


def test_generators_of_s3():
    assert generators(group_groupoid("S3"), "*") == ["(01)", "(02)"]


@pytest.mark.parametrize("source,target,count", [
    ("Z2", "Z2", 2),
    ("Z3", "Z2", 1),
    ("Z2", "S3", 4),
    ("Z3", "Z3", 3),
])
def test_group_homomorphism_counts(source, target, count):
    g, h = group_groupoid(source), group_groupoid(target)
    assert len(list(group_homomorphisms(g, "*", h, "*"))) == count


def test_enumerate_functors_counts(z2, codiscrete2):
    assert len(enumerate_functors(codiscrete2, codiscrete2)) == 4
    assert len(enumerate_functors(z2, z2)) == 2
    for f in enumerate_functors(codiscrete2, z2):
        assert f.issues() == []


def test_functor_labels_round_trip(codiscrete2):
    f = enumerate_functors(codiscrete2, codiscrete2)[-1]
    g = functor_of_label(codiscrete2, codiscrete2, functor_label(f))
    assert g.on_objects == f.on_objects
    assert g.on_morphisms == f.on_morphisms


def test_hom_groupoid_from_point(z2):
    hom = hom_groupoid(discrete(1), z2)
    assert len(hom.objects) == 1
    assert len(hom.morphisms) == 2


def test_hom_groupoid_of_z2(z2):
    hom = hom_groupoid(z2, z2)
    assert len(hom.objects) == 2
    assert len(hom.morphisms) == 4
    assert len(hom.components) == 2
    assert validate_groupoid(hom).ok


def test_natural_isos_between_constant_maps(codiscrete2):
    a = discrete(1)
    isos = natural_isos(constant_map(a, codiscrete2, "0"), constant_map(a, codiscrete2, "1"))
    assert [dict(iso.components) for iso in isos] == [{"0": "0>1"}]


@pytest.mark.parametrize("g,h,expected", [
    (codiscrete(3), discrete(1), True),
    (cyclic(2), discrete(1), False),
    (group_groupoid("S3"), cyclic(6), False),
    (discrete(2), codiscrete(2), False),
])
def test_are_equivalent(g, h, expected):
    assert are_equivalent(g, h) is expected


def test_path_object_legs(codiscrete2):
    paths = path_object(codiscrete2)
    assert len(paths.apex.objects) == 4
    assert validate_groupoid(paths.apex).ok
    assert is_equivalence(paths.r.validated())
    assert is_isofibration(paths.boundary.validated())


def test_fiberwise_path_object_requires_isofibration(codiscrete2):
    with pytest.raises(PreconditionError):
        fiberwise_path_object(point_inclusion(codiscrete2, "0"))


def test_factorization_of_point_inclusion(codiscrete2):
    f = point_inclusion(codiscrete2, "0")
    fz = factorize(f)
    assert len(fz.middle.objects) == 2
    assert is_equivalence(fz.j.validated())
    assert is_isofibration(fz.q.validated())
    assert compose_maps(fz.q, fz.j).on_objects == f.on_objects


def test_eso_ff_factorization_of_two_points():
    f = unique_map(discrete(2))
    fz = eso_ff_factorize(f)
    assert is_essentially_surjective(fz.e)
    assert is_fully_faithful(fz.m)
    assert is_isofibration(fz.m)


@pytest.mark.parametrize("which", ["point_in_codiscrete", "point_in_z2", "two_points",
                                   "z2_identity", "z2_to_point"])
def test_transport_is_equivalence_iff_fully_faithful(which, z2, codiscrete2):
    f = {
        "point_in_codiscrete": lambda: point_inclusion(codiscrete2, "0"),
        "point_in_z2": lambda: point_inclusion(z2, "*"),
        "two_points": lambda: unique_map(discrete(2)),
        "z2_identity": lambda: identity_map(z2),
        "z2_to_point": lambda: unique_map(z2),
    }[which]()
    comparison, target = transport_map(f)
    assert comparison.cod is target.apex
    assert is_equivalence(comparison) == is_fully_faithful(f)
