import pytest

from src.constructions import (
    are_equivalent,
    enumerate_functors,
    hom_groupoid,
    natural_isos,
    point_inclusion,
    product,
)
from src.errors import InvalidStructureError, PreconditionError
from src.fibrations import (
    Fibration,
    FibrationSquare,
    classify,
    fiber_of_endpoints,
    fiber_to_hom,
    fun_map,
    fun_of,
    grothendieck,
    identity_fibration,
    identity_square,
    is_bm_equivalence,
    is_fiberwise_isomorphism,
    is_univalent_fibration,
    over_isomorphism,
    pullback_fibration,
    terminal_fibration,
    univalence_oracle,
    univalence_witness,
    univalent_complete,
    verify_homotopy_cartesian,
)
from src.groupoid import (
    GroupoidMap,
    codiscrete,
    cyclic,
    discrete,
    group_delooping,
    identity_map,
    is_equivalence,
    is_essentially_surjective,
)


def test_non_isofibration_is_rejected(codiscrete2):
    with pytest.raises(PreconditionError):
        Fibration(point_inclusion(codiscrete2, "0"))


def test_fibers_of_universe(u2):
    pi = u2.pi
    assert [len(pi.fiber(k).objects) for k in ("0", "1", "2")] == [0, 1, 2]
    assert pi.total.objects[0] == ("1", "0")


def test_transport_swaps_fiber(u2):
    swap = u2.pi.transport("2:10")
    assert swap.obj(("2", "0")) == ("2", "1")
    assert swap.obj(("2", "1")) == ("2", "0")


def test_grothendieck_requires_every_fiber(z2):
    with pytest.raises(PreconditionError):
        grothendieck(z2, {}, {})


def test_grothendieck_rejects_non_functorial_action():
    base = cyclic(3)
    fiber = discrete(2)
    swap = GroupoidMap(fiber, fiber, {"0": "1", "1": "0"}, {"id_0": "id_1", "id_1": "id_0"})
    with pytest.raises(InvalidStructureError):
        grothendieck(base, {"*": fiber}, {"r": swap})


def test_grothendieck_of_z2_swap(z2):
    fiber = discrete(2)
    swap = GroupoidMap(fiber, fiber, {"0": "1", "1": "0"}, {"id_0": "id_1", "id_1": "id_0"})
    p = grothendieck(z2, {"*": fiber}, {"t": swap}, name="swap")
    assert len(p.total.objects) == 2
    assert len(p.total.components) == 1
    assert p.profile.is_isofibration


def test_identity_over_points_is_not_univalent(p0):
    assert univalence_witness(p0)["kind"] == "not_hit"
    assert not univalence_oracle(p0)
    assert is_univalent_fibration(p0, oracle=True) is False


def test_identity_over_contractible_base_is_univalent():
    p = identity_fibration(codiscrete(2))
    assert univalence_oracle(p)
    assert is_univalent_fibration(p, oracle=True)


def test_set_universe_is_univalent(u1):
    assert is_univalent_fibration(u1.pi, oracle=True)


def test_fun_of_identity_over_points(p0):
    fun = fun_of(p0)
    assert len(fun.arrows.objects) == 4
    assert fun.r.validated().cod is fun.arrows


def test_square_must_commute(p0):
    b0 = p0.base
    swap = GroupoidMap(b0, b0, {"0": "1", "1": "0"}, {"id_0": "id_1", "id_1": "id_0"})
    with pytest.raises(InvalidStructureError):
        FibrationSquare(p0, p0, swap, identity_map(b0))


def test_identity_square_is_bm_equivalence(p0):
    sq = identity_square(p0)
    assert is_fiberwise_isomorphism(sq)
    assert is_bm_equivalence(sq)


def test_pullback_square_is_cartesian_but_not_bm(u1):
    q, sq = pullback_fibration(u1.pi, point_inclusion(u1.pi.base, "1"))
    assert len(q.total.objects) == 1
    assert verify_homotopy_cartesian(sq)
    assert not is_bm_equivalence(sq)


def test_pullback_fibration_checks_base(p0, z2):
    with pytest.raises(PreconditionError):
        pullback_fibration(p0, identity_map(z2))


def test_classify_and_complete(p0, u1):
    found = classify(p0, u1)
    assert found is not None
    b, square = found
    assert b.on_objects == {"0": "1", "1": "1"}
    assert verify_homotopy_cartesian(square)

    result = univalent_complete(p0, u1, b)
    assert len(result.up.base.objects) == 2
    assert are_equivalent(result.up.base, codiscrete(2))
    assert is_essentially_surjective(result.iota)
    assert is_univalent_fibration(result.up)
    assert is_bm_equivalence(result.square)


def test_complete_needs_a_classifying_map(p0, u1):
    wrong = GroupoidMap(p0.base, u1.pi.base, {"0": "0", "1": "0"}, {"id_0": "0:", "id_1": "0:"})
    with pytest.raises(PreconditionError):
        univalent_complete(p0, u1, wrong)


def _z2_product(base, delooping):
    return Fibration(product(base, delooping).left, name=delooping.name)


def test_fun_is_independent_of_the_cleavage():
    base = codiscrete(2)
    renamed = group_delooping(["z", "a"], lambda g, f: "z" if g == f else "a", "z", name="BZ2'")
    p1, p2 = _z2_product(base, cyclic(2)), _z2_product(base, renamed)
    assert p1.lift("0>1", ("0", "*")) == ("0>1", "e")
    assert p2.lift("0>1", ("0", "*")) == ("0>1", "a")
    rename = {"e": "z", "t": "a"}
    top = GroupoidMap.from_functions(p1.total, p2.total, lambda x: x,
                                     lambda m: (m[0], rename[m[1]]), name="rename")
    sq = FibrationSquare(p1, p2, top, identity_map(base))
    fun1, fun2 = fun_of(p1), fun_of(p2)
    f = fun_map(sq, fun1, fun2).validated()
    assert len(set(f.on_objects.values())) == len(fun1.arrows.objects) == len(fun2.arrows.objects)
    assert len(set(f.on_morphisms.values())) == len(fun1.arrows.morphisms) \
        == len(fun2.arrows.morphisms)
    for x in fun1.arrows.objects:
        assert (fun2.s.obj(f.obj(x)), fun2.t.obj(f.obj(x))) == (fun1.s.obj(x), fun1.t.obj(x))
    assert is_univalent_fibration(p1) == is_univalent_fibration(p2)
    assert univalence_oracle(p1) == univalence_oracle(p2)


def test_fun_fiber_over_a_pair_is_the_hom_groupoid(z2):
    p = terminal_fibration(z2)
    fun = fun_of(p)
    (a,) = p.base.objects
    hom = hom_groupoid(p.fiber(a), p.fiber(a))
    relabel = fiber_to_hom(fun, a, a, hom).validated()
    assert len(fiber_of_endpoints(fun, a, a).objects) == len(hom.objects) == 2
    assert set(relabel.on_objects.values()) == hom.object_set
    assert set(relabel.on_morphisms.values()) == hom.morphism_set
    assert len(relabel.on_morphisms) == len(hom.morphisms) == 4


def test_fun_fiber_between_sets(u2):
    pi = u2.pi
    fun = fun_of(pi)
    fiber = fiber_of_endpoints(fun, "1", "2")
    hom = hom_groupoid(pi.fiber("1"), pi.fiber("2"))
    assert len(fiber.objects) == len(hom.objects) == 2
    assert len(fiber.morphisms) == 2
    relabel = fiber_to_hom(fun, "1", "2", hom)
    assert set(relabel.on_objects.values()) == hom.object_set


def test_completions_over_isomorphic_classifying_maps_agree(u2):
    p = Fibration(product(codiscrete(2), discrete(2)).left, name="p2")
    maps = [b for b in enumerate_functors(p.base, u2.pi.base)
            if set(b.on_objects.values()) == {"2"}]
    assert len(maps) == 2
    first, second = maps
    assert natural_isos(first, second)
    one, two = univalent_complete(p, u2, first), univalent_complete(p, u2, second)
    assert are_equivalent(one.up.base, two.up.base)
    assert are_equivalent(one.up.total, two.up.total)
    assert is_univalent_fibration(one.up) and is_univalent_fibration(two.up)


def test_over_isomorphism_of_identical_fibrations(p0):
    q, _ = pullback_fibration(p0, identity_map(p0.base))
    f = over_isomorphism(p0, q)
    assert f is not None
    assert is_equivalence(f)
    assert over_isomorphism(terminal_fibration(codiscrete(2)),
                            terminal_fibration(discrete(1))) is None
