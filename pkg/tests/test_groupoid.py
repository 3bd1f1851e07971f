import pytest
from hypothesis import given, strategies as st

from src.budget import Budget, budget_scope
from src.errors import BudgetExceeded, InvalidStructureError
from src.groupoid import (
    Groupoid,
    GroupoidMap,
    NatIso,
    codiscrete,
    compose_maps,
    coproduct,
    cyclic,
    discrete,
    find_unliftable,
    full_subgroupoid,
    functor_classify,
    group_groupoid,
    has_target_lifts,
    identity_map,
    inverse_map,
    is_equivalence,
    is_essentially_surjective,
    is_fully_faithful,
    is_isofibration,
    validate_groupoid,
)

GROUPS = st.sampled_from(["trivial", "Z2", "Z3", "Z4", "S3"])


def z3_table(square_of_r="r2"):
    comp = {("r", "r"): square_of_r, ("r", "r2"): "e", ("r2", "r"): "e", ("r2", "r2"): "r"}
    return Groupoid.from_tables(
        ["*"], {"e": ("*", "*"), "r": ("*", "*"), "r2": ("*", "*")}, {"*": "e"}, comp,
        name="Z3 table")


@given(GROUPS)
def test_named_groups_are_valid(name):
    g = group_groupoid(name)
    assert validate_groupoid(g).ok
    assert g.objects == ("*",)


@given(st.integers(min_value=1, max_value=4))
def test_codiscrete_is_valid_and_connected(n):
    g = codiscrete(n)
    assert validate_groupoid(g).ok
    assert len(g.morphisms) == n * n
    assert len(g.components) == 1


@given(st.integers(min_value=0, max_value=5))
def test_discrete_has_one_component_per_object(n):
    g = discrete(n)
    assert validate_groupoid(g).ok
    assert len(g.components) == n


@given(st.integers(min_value=1, max_value=6), st.data())
def test_cyclic_composition_is_associative(n, data):
    g = cyclic(n)
    h, k, f = (data.draw(st.sampled_from(g.morphisms)) for _ in range(3))
    assert g.compose(h, g.compose(k, f)) == g.compose(g.compose(h, k), f)
    assert g.compose(g.inverse(f), f) == g.ident["*"]


def test_table_groupoid_validates():
    assert validate_groupoid(z3_table()).ok


def test_broken_associativity_is_reported():
    report = validate_groupoid(z3_table(square_of_r="r"))
    assert not report.ok
    assert any(issue.startswith("associativity fails") for issue in report.issues)
    with pytest.raises(InvalidStructureError):
        report.raise_if_failed()


def test_missing_inverse_is_reported():
    g = Groupoid.from_tables(
        ["a", "b"],
        {"id_a": ("a", "a"), "id_b": ("b", "b"), "f": ("a", "b")},
        {"a": "id_a", "b": "id_b"},
        {},
    )
    report = validate_groupoid(g)
    assert "inverse law fails for 'f'" in report.issues
    assert report.to_dict()["ok"] is False


def test_compose_rejects_non_composable_pair(codiscrete2):
    with pytest.raises(InvalidStructureError):
        codiscrete2.compose("0>1", "0>1")


def test_compose_all_reads_right_to_left():
    g = codiscrete(3)
    assert g.compose_all("1>2", "0>1", "2>0") == "2>2"


def test_unknown_group_name():
    with pytest.raises(InvalidStructureError):
        group_groupoid("Q8")


def test_coproduct_labels_and_components(z2, codiscrete2):
    g = coproduct(z2, codiscrete2)
    assert (0, "*") in g.object_set and (1, "0>1") in g.morphism_set
    assert len(g.components) == 2
    assert validate_groupoid(g).ok


def test_full_subgroupoid_keeps_order():
    g = full_subgroupoid(codiscrete(3), ["2", "0"])
    assert g.objects == ("0", "2")
    assert set(g.morphisms) == {"0>0", "0>2", "2>0", "2>2"}


def test_spanning_paths_start_at_root():
    g = codiscrete(3)
    paths = g.spanning_paths
    assert paths["0"] == "0>0"
    assert paths["2"] == "0>2"
    assert g.root_of("2") == "0"


def test_budget_refuses_oversized_groupoid():
    with budget_scope(Budget(max_cells=10)):
        with pytest.raises(BudgetExceeded):
            codiscrete(4)


# -- functors ------------------------------------------------------------------

def point_into(g, x):
    pt = discrete(1, name="pt")
    return GroupoidMap(pt, g, {"0": x}, {"id_0": g.ident[x]}, name="pt")


def test_functor_preserving_composition_has_no_issues(z2):
    assert identity_map(z2).issues() == []


def test_broken_functor_is_reported(z2):
    bad = GroupoidMap(z2, z2, {"*": "*"}, {"e": "t", "t": "t"}, name="bad")
    assert "identity at '*' is not preserved" in bad.issues()
    with pytest.raises(InvalidStructureError):
        bad.validated()


def test_point_into_codiscrete_is_equivalence_but_not_isofibration(codiscrete2):
    f = point_into(codiscrete2, "0")
    assert is_equivalence(f)
    assert find_unliftable(f) == ("0", "0>1")
    profile = functor_classify(f)
    assert profile.is_equivalence and not profile.is_isofibration
    assert not profile.is_trivial_fibration


def test_target_lifts_agree_with_isofibrations(codiscrete2, z2):
    collapse = GroupoidMap.from_functions(codiscrete2, discrete(1), lambda x: "0",
                                          lambda m: "id_0")
    spread = GroupoidMap.from_functions(discrete(2), codiscrete2, lambda x: x,
                                        lambda m: f"{m[3:]}>{m[3:]}")
    maps = [point_into(codiscrete2, "0"), identity_map(z2), collapse, spread]
    for f in maps:
        assert has_target_lifts(f) == is_isofibration(f)
    assert not has_target_lifts(point_into(codiscrete2, "0"))
    assert not has_target_lifts(spread)
    assert has_target_lifts(collapse)


def test_codiscrete_to_point_is_trivial_fibration(codiscrete2):
    pt = discrete(1)
    f = GroupoidMap.from_functions(codiscrete2, pt, lambda x: "0", lambda m: "id_0")
    profile = functor_classify(f)
    assert profile.is_trivial_fibration
    assert profile.as_dict()["is_minus1_connected"]


def test_two_points_into_point_is_not_fully_faithful():
    pt = discrete(1)
    f = GroupoidMap.from_functions(discrete(2), pt, lambda x: "0", lambda m: "id_0")
    assert not is_fully_faithful(f)
    assert is_essentially_surjective(f)
    assert is_isofibration(f)


def test_delooping_map_to_point_is_not_faithful(z2):
    pt = discrete(1)
    f = GroupoidMap.from_functions(z2, pt, lambda x: "0", lambda m: "id_0")
    assert not is_fully_faithful(f)


def test_compose_and_invert_maps(z2):
    swap = GroupoidMap(z2, z2, {"*": "*"}, {"e": "e", "t": "t"}, name="s")
    both = compose_maps(swap, identity_map(z2))
    assert both.on_morphisms == {"e": "e", "t": "t"}
    assert inverse_map(swap).on_objects == {"*": "*"}
    with pytest.raises(InvalidStructureError):
        compose_maps(identity_map(cyclic(3)), swap)


def test_inverse_of_non_bijection_raises(codiscrete2):
    with pytest.raises(InvalidStructureError):
        inverse_map(point_into(codiscrete2, "0"))


def test_natural_iso_between_points(codiscrete2):
    a, b = point_into(codiscrete2, "0"), point_into(codiscrete2, "1")
    b = GroupoidMap(a.dom, codiscrete2, b.on_objects, b.on_morphisms)
    assert NatIso(a, b, {"0": "0>1"}).issues() == []
    assert NatIso(a, b, {"0": "1>0"}).issues() == ["component at '0' has wrong endpoints"]
