import pytest

from src.budget import Budget, budget_scope
from src.errors import BudgetExceeded, PreconditionError
from src.fibrations import (
    FibrationSquare,
    identity_fibration,
    identity_square,
    is_fiberwise_isomorphism,
    terminal_fibration,
)
from src.groupoid import GroupoidMap, codiscrete, discrete, identity_map, is_equivalence
from src.segal import (
    alternative_unit,
    cech_nerve,
    constant,
    dk_classify,
    equiv_map,
    equiv_to_k_comparison,
    fiber_power,
    induced_nerve_map,
    inv_object,
    is_complete,
    is_reedy_fibrant,
    is_segal,
    is_univalent_segal,
    j2_strict_limit,
    j2_to_inv,
    levelwise_product,
    matching_map,
    nerve,
    reedy_fibrancy_witness,
    reedy_replace,
    section_into_product,
    segal_map,
    sufficient_fibrancy,
    univalence_witness_segal,
    validate_simplicial_groupoid,
    weighted_limit,
)
from src.simpset import shape


def test_cech_nerve_levels(codiscrete2):
    x = cech_nerve(codiscrete2, 2)
    assert [len(level.objects) for level in x.levels] == [2, 4, 8]
    assert validate_simplicial_groupoid(x).ok
    assert is_segal(x)


def test_constant_object_is_segal(z2):
    x = constant(z2, 3)
    assert validate_simplicial_groupoid(x).ok
    assert is_segal(x)


def test_constant_delooping_is_not_sufficiently_fibrant(z2):
    x = constant(z2, 2)
    assert not sufficient_fibrancy(x)
    with pytest.raises(PreconditionError):
        is_univalent_segal(x)


def test_segal_map_index_range(p0):
    x = nerve(p0, 2)
    with pytest.raises(PreconditionError):
        segal_map(x, 1)
    with pytest.raises(PreconditionError):
        segal_map(x, 3)


def test_nerve_truncates(p0):
    x = nerve(p0, 3)
    assert x.m == 3
    assert x.truncate(2).m == 2
    with pytest.raises(PreconditionError):
        x.truncate(4)


def test_nerve_of_fibration_is_sufficiently_fibrant(p0):
    x = nerve(p0, 2)
    assert validate_simplicial_groupoid(x).ok
    assert sufficient_fibrancy(x)
    assert is_segal(x)


def test_nerve_of_p0_is_neither_univalent_nor_complete(p0):
    x = nerve(p0, 3)
    assert not is_univalent_segal(x.truncate(2))
    assert univalence_witness_segal(x.truncate(2))["kind"] == "not_hit"
    assert not is_complete(reedy_replace(x).obj)


def test_nerve_of_universe_is_univalent_and_complete(u1):
    x = nerve(u1.pi, 3)
    assert is_univalent_segal(x.truncate(2))
    assert is_complete(reedy_replace(x).obj)


def test_completeness_needs_level_three(p0):
    with pytest.raises(PreconditionError):
        is_complete(nerve(p0, 2))


def test_weighted_limit_needs_enough_levels(p0):
    with pytest.raises(PreconditionError):
        weighted_limit(shape("simplex", 2), nerve(p0, 2))


def test_vertex_leg_of_interval_is_not_an_isomorphism(p0):
    x = nerve(p0, 2)
    leg = weighted_limit(shape("simplex", 1, trunc=2), x).leg(0, "0")
    assert len(leg.dom.objects) != len(leg.cod.objects)


def test_reedy_replacement_is_levelwise_equivalence(p0):
    replacement = reedy_replace(nerve(p0, 3))
    assert replacement.tau.is_levelwise_equivalence()


def test_section_into_delooping_product_breaks_univalence(u1, z2):
    x = nerve(u1.pi, 2)
    prod = levelwise_product(x, cech_nerve(z2, 2))
    section = section_into_product(prod, [("*",) * (n + 1) for n in range(3)])
    assert not section.is_levelwise_equivalence()
    assert is_univalent_segal(x)
    assert not is_univalent_segal(prod.obj)


def test_section_into_contractible_product_is_levelwise_equivalence(p0, codiscrete2):
    x = nerve(p0, 2)
    prod = levelwise_product(x, cech_nerve(codiscrete2, 2))
    section = section_into_product(prod, [("0",) * (n + 1) for n in range(3)])
    assert section.validated().is_levelwise_equivalence()


def test_collapse_to_point_is_dk_but_not_levelwise(p0):
    point = identity_fibration(discrete(1, name="pt", labels=("1",)))
    collapse = GroupoidMap.from_functions(p0.base, point.base, lambda x: "1",
                                          lambda u: "id_1", name="collapse")
    sq = FibrationSquare(p0, point, collapse, collapse)
    induced = induced_nerve_map(sq, 2)
    assert not induced.strictified
    assert dk_classify(induced.map).dk
    assert not induced.map.is_levelwise_equivalence()


def test_collapse_of_points_is_bm_but_not_levelwise():
    three = identity_fibration(discrete(3, name="B3"))
    two = identity_fibration(discrete(2, name="B2"))
    collapse = GroupoidMap.from_functions(
        three.base, two.base, lambda x: "0" if x != "2" else "1",
        lambda u: "id_0" if u != "id_2" else "id_1")
    sq = FibrationSquare(three, two, collapse, collapse)
    assert not induced_nerve_map(sq, 2).map.is_levelwise_equivalence()


def test_identity_nerve_map_of_contractible_base():
    p = identity_fibration(codiscrete(2))
    induced = induced_nerve_map(identity_square(p), 2)
    assert all(is_equivalence(f) for f in induced.map.components)


def test_collapsing_top_is_replaced_by_an_isomorphism(codiscrete2):
    p = terminal_fibration(codiscrete2)
    squash = GroupoidMap.from_functions(p.total, p.total, lambda x: "0", lambda m: "0>0",
                                        name="squash")
    sq = FibrationSquare(p, p, squash, identity_map(p.base), name="squash")
    assert not is_fiberwise_isomorphism(sq)
    induced = induced_nerve_map(sq, 2)
    assert induced.retopped and not induced.strictified
    assert induced.square.p is p
    assert induced.map.dom.levels[0] is p.base
    assert is_fiberwise_isomorphism(induced.square)
    assert induced.map.is_levelwise_equivalence()


def test_square_onto_smaller_fibers_is_strictified(codiscrete2):
    p = terminal_fibration(codiscrete2)
    q = terminal_fibration(discrete(1, name="pt"))
    (point,) = q.total.objects
    (star,) = q.base.objects
    top = GroupoidMap.from_functions(p.total, q.total, lambda x: point,
                                     lambda m: q.total.ident[point], name="squash")
    bottom = GroupoidMap.from_functions(p.base, q.base, lambda x: star,
                                        lambda m: q.base.ident[star], name="b")
    induced = induced_nerve_map(FibrationSquare(p, q, top, bottom), 2)
    assert induced.strictified and not induced.retopped
    assert induced.square.p is not p
    assert is_fiberwise_isomorphism(induced.square)


def test_fiber_power_is_guarded_before_it_is_built(p0, monkeypatch):
    x = nerve(p0, 2)
    seen = []
    monkeypatch.setattr("src.segal.guard_cells", lambda what, size: seen.append(size))
    power = fiber_power(x, 3)
    assert seen[-1] == len(power.objects) + len(power.morphisms)
    monkeypatch.undo()
    with budget_scope(Budget(max_cells=seen[-1] - 1)):
        with pytest.raises(BudgetExceeded):
            fiber_power(x, 3)


def test_cech_level_is_guarded_before_it_is_built(z2, monkeypatch):
    seen = []
    monkeypatch.setattr("src.segal.guard_cells", lambda what, size: seen.append(size))
    x = cech_nerve(z2, 2)
    assert seen == [len(level.objects) + len(level.morphisms) for level in x.levels]


def test_j2_limit_lands_in_inv_over_both_edges(u1):
    x = nerve(u1.pi, 3)
    bundle = inv_object(x)
    j2 = j2_strict_limit(x)
    into = j2_to_inv(x, j2, bundle).validated()
    for a in j2.apex.objects:
        image = into.obj(a)
        assert bundle.linv.obj(image) == j2.value(a, "g")
        assert bundle.rinv.obj(image) == j2.value(a, "f")


def test_equiv_compares_to_k_limit_over_edges(u1):
    x = nerve(u1.pi, 3)
    replacement = reedy_replace(x)
    bundle = inv_object(x)
    k = weighted_limit(shape("K"), replacement.obj)
    comparison = equiv_to_k_comparison(x, replacement, bundle, k)
    for a in bundle.equiv.apex.objects:
        assert k.value(comparison.obj(a), "f") == bundle.to_edges.obj(a)
    assert is_equivalence(comparison)


def test_k_comparison_needs_the_plain_replacement(u1):
    x = nerve(u1.pi, 3)
    with pytest.raises(PreconditionError):
        equiv_to_k_comparison(x, reedy_replace(x, 2, special_level2=True))


@pytest.mark.parametrize("which", ["p0", "u1", "u2"])
def test_alternative_unit_gives_the_same_verdict(which, p0, u1, u2):
    p = {"p0": p0, "u1": u1.pi, "u2": u2.pi}[which]
    x = nerve(p, 2)
    bundle = inv_object(x)
    with budget_scope(Budget(max_objects=400, max_morphisms=4000)):
        other = alternative_unit(bundle)
    if other is None:
        return
    assert dict(other.on_objects) != dict(bundle.unit.on_objects) \
        or dict(other.on_morphisms) != dict(bundle.unit.on_morphisms)
    for a in x.levels[0].objects:
        assert bundle.to_edges.obj(other.obj(a)) == x.s(0, 0).obj(a)
    assert is_equivalence(other) == is_equivalence(bundle.unit)


def test_equiv_map_of_contractible_section(p0, codiscrete2):
    x = nerve(p0, 2)
    prod = levelwise_product(x, cech_nerve(codiscrete2, 2))
    section = section_into_product(prod, [("0",) * (n + 1) for n in range(3)])
    source, target = inv_object(x), inv_object(prod.obj)
    f = equiv_map(section, source, target)
    edges = section.components[1]
    for a in source.equiv.apex.objects:
        assert target.to_edges.obj(f.obj(a)) == edges.obj(source.to_edges.obj(a))
    assert is_equivalence(f)


@pytest.mark.parametrize("special", [False, True])
def test_boundary_projection_is_the_level2_matching_map(p0, special):
    replacement = reedy_replace(nerve(p0, 3), 2, special_level2=special)
    assert replacement.special_level2 is special
    projection = replacement.boundary_projection()
    match = matching_map(replacement.obj, 2)
    assert dict(projection.on_objects) == dict(match.on_objects)
    assert dict(projection.on_morphisms) == dict(match.on_morphisms)
    assert validate_simplicial_groupoid(replacement.obj).ok
    assert is_reedy_fibrant(replacement.obj)


def test_constant_delooping_fails_reedy_fibrancy_at_level1(z2):
    x = constant(z2, 2)
    witness = reedy_fibrancy_witness(x)
    assert witness["level"] == 1
    assert not is_reedy_fibrant(x)
    assert witness["object"] == "*"
