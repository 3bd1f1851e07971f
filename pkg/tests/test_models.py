import pytest
from pydantic import ValidationError

from src.groupoid import codiscrete, validate_groupoid
from src.models import (
    Budget,
    DegenerateFace,
    GenConfig,
    GroupoidMapModel,
    GroupoidModel,
    SUITES,
    SimplicialSetModel,
    label_text,
)
from src.simpset import shape


def test_groupoid_model_rebuilds_table(codiscrete2):
    model = GroupoidModel.from_groupoid(codiscrete2)
    assert model.identities == {"0": "0>0", "1": "1>1"}
    assert ["0>1", "1>0", "1>1"] in [list(row) for row in model.composition]
    rebuilt = model.to_groupoid()
    assert validate_groupoid(rebuilt).ok
    assert rebuilt.compose("1>0", "0>1") == "0>0"


def test_groupoid_model_rejects_duplicate_objects():
    with pytest.raises(ValidationError):
        GroupoidModel(objects=["a", "a"], morphisms={"id": ("a", "a")}, identities={"a": "id"})


def test_groupoid_model_rejects_undeclared_identity():
    with pytest.raises(ValidationError):
        GroupoidModel(objects=["a"], morphisms={}, identities={"a": "id_a"})


def test_map_model_validates_against_groupoids():
    g = codiscrete(2)
    model = GroupoidMapModel(dom="C", cod="C", objects={"0": "1", "1": "0"},
                             morphisms={"0>0": "1>1", "0>1": "1>0", "1>0": "0>1", "1>1": "0>0"})
    assert model.to_groupoid_map(g, g).obj("0") == "1"
    broken = model.model_copy(update={"morphisms": {**model.morphisms, "0>0": "0>0"}})
    with pytest.raises(Exception):
        broken.to_groupoid_map(g, g)


def test_label_text_spells_tuples_with_repr():
    assert label_text("x") == "x"
    assert label_text(("a", 1)) == "('a', 1)"


def test_simplicial_set_model_builds_j2():
    model = SimplicialSetModel(name="J2", cells=[
        {"name": "0", "dim": 0},
        {"name": "1", "dim": 0},
        {"name": "g", "dim": 1, "faces": ["1", "0"]},
        {"name": "f", "dim": 1, "faces": ["0", "1"]},
        {"name": "sigma", "dim": 2, "faces": ["f", {"cell": "0", "eta": [0, 0]}, "g"]},
    ])
    assert model.to_simplicial_set().nondegenerate_census() == [2, 2, 1]


def test_simplicial_set_model_from_shape():
    model = SimplicialSetModel.from_simplicial_set(shape("K"))
    assert model.trunc == 3
    assert model.to_simplicial_set().nondegenerate_census() == [2, 3, 2]


def test_degenerate_face_needs_surjection():
    with pytest.raises(ValidationError):
        DegenerateFace(cell="0", eta=[1, 1])


def test_gen_config_defaults_cover_every_suite():
    cfg = GenConfig()
    assert set(cfg.counts) == set(SUITES)
    assert GenConfig.zero(seed=3).count("dk_levelwise") == 0


@pytest.mark.parametrize("kwargs", [
    {"counts": {"no_such_suite": 1}},
    {"counts": {"shape_census": -1}},
    {"group_pool": ["Q8"]},
    {"group_pool": []},
    {"segal_level": 1},
    {"max_base_objects": 0},
    {"fault_injection": "nonsense"},
])
def test_gen_config_rejects_bad_settings(kwargs):
    with pytest.raises(ValidationError):
        GenConfig(**kwargs)


def test_budget_scaling():
    budget = Budget().scaled(0.5)
    assert budget.max_objects == 6
    assert budget.max_cells == 30_000
    with pytest.raises(ValidationError):
        Budget(max_objects=0)
