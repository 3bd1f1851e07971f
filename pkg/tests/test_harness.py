import pytest
from hypothesis import given, settings, strategies as st

from src.budget import Budget, budget_scope
from src.fibrations import is_univalent_fibration
from src.harness import (
    example_p0,
    gen_equivalent_pair,
    gen_fibration,
    gen_univalent,
    run_theorem_suite,
)
from src.models import GenConfig


def _rows(report):
    return report.rows.drop(columns=["seconds"]).to_dict("records")


def test_no_suites_selected():
    report = run_theorem_suite(GenConfig.zero(seed=5))
    assert report.rows.empty
    assert report.passed
    payload = report.to_dict(timing=False)
    assert payload == {"seed": 5, "passed": True, "suites": []}


def test_shape_census_suite():
    report = run_theorem_suite(GenConfig(counts={"shape_census": 1}))
    (suite,) = report.to_dict()["suites"]
    assert report.passed
    assert (suite["instances"], suite["passes"], suite["controls"]) == (2, 2, 1)
    assert "elapsed_seconds" in report.to_dict()


def test_fault_injection_fails_the_suite():
    cfg = GenConfig(counts={"shape_census": 1}, fault_injection="shape_census")
    report = run_theorem_suite(cfg)
    assert not report.passed
    (suite,) = report.to_dict()["suites"]
    assert [f["label"] for f in suite["failures"]] == ["J2", "K"]


def test_same_seed_same_rows():
    cfg = GenConfig(seed=7, counts={"oracle_agreement": 3})
    first, second = run_theorem_suite(cfg), run_theorem_suite(cfg)
    assert _rows(first) == _rows(second)
    assert first.passed


@pytest.mark.parametrize("index", range(4))
def test_generated_fibrations_are_reproducible(index):
    cfg = GenConfig(seed=11)
    p, q = gen_fibration(cfg, index), gen_fibration(cfg, index)
    assert p.base.objects == q.base.objects
    assert p.total.objects == q.total.objects


def test_restricted_universes_are_univalent():
    cfg = GenConfig(seed=2, max_fiber_objects=2)
    assert is_univalent_fibration(gen_univalent(cfg, 0))
    assert not is_univalent_fibration(example_p0())


def test_equivalent_pair_kinds():
    cfg = GenConfig(seed=1, max_fiber_objects=2)
    assert gen_equivalent_pair(cfg, 0).kind == "contractible"
    pair = gen_equivalent_pair(cfg, 1)
    assert pair.kind == "replacement"
    assert pair.map.dom is pair.source


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=0, max_value=500))
def test_generated_fibrations_over_groups_build(seed, index):
    p = gen_fibration(GenConfig(seed=seed), index, fiber_limit=2)
    assert p.base.objects
    q = gen_fibration(GenConfig(seed=seed), index, sets_only=True, fiber_limit=2)
    for a in q.base.objects:
        fiber = q.fiber(a)
        assert len(fiber.morphisms) == len(fiber.objects)


def test_budget_exhaustion_is_recorded_per_instance():
    cfg = GenConfig(counts={"oracle_agreement": 3})
    with budget_scope(Budget(max_cells=3)):
        report = run_theorem_suite(cfg)
    assert len(report.rows) == 4
    assert set(report.rows["status"]) == {"budget"}
    assert report.passed
    (suite,) = report.to_dict()["suites"]
    assert [c["label"] for c in suite["budget_exhausted"]] == ["p0", "p1", "p2", "p0"]


def test_weighted_limits_suite_passes_on_the_fixed_nerve():
    report = run_theorem_suite(GenConfig(counts={"weighted_limits": 1}))
    (suite,) = report.to_dict()["suites"]
    assert report.passed
    assert (suite["instances"], suite["passes"], suite["controls"]) == (1, 1, 1)
    (detail,) = report.rows[report.rows["label"] == "N(p0)"]["detail"]
    assert detail["spine_3"] and detail["stable_K"] and detail["stable_J2"]
    assert detail["simplex_3"]


def test_rezk_suite_checks_the_completion_square():
    report = run_theorem_suite(GenConfig(counts={"rezk_completion": 1}))
    (detail,) = report.rows[report.rows["label"] == "p0 over U1"]["detail"]
    assert detail["bm"]
    assert detail["univalent"]
    assert report.passed
