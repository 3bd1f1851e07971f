"""Random instance generation and the theorem property suites.

Every generator is deterministic in (seed, index): it draws from a
``random.Random`` seeded with a string built from both. Suites run their
instances one after another; the report only depends on the rows, never on
their order.
"""

import logging
import random
import time
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import pandas as pd

from .budget import current_budget
from .constructions import (
    are_equivalent,
    enumerate_functors,
    generators,
    group_homomorphisms,
    point_inclusion,
)
from .errors import BudgetExceeded, GroupoidError
from .fibrations import (
    Fibration,
    FibrationSquare,
    UniverseData,
    grothendieck,
    identity_fibration,
    is_bm_equivalence,
    is_univalent_fibration,
    pullback_fibration,
    set_universe,
    univalence_oracle,
    univalent_complete,
)
from .groupoid import (
    Groupoid,
    GroupoidMap,
    codiscrete,
    coproduct,
    discrete,
    full_subgroupoid,
    group_groupoid,
    identity_map,
    is_equivalence,
    is_fully_faithful,
)
from .models import SUITES, GenConfig
from .segal import (
    TruncatedSimplicialGroupoid,
    SimplicialGroupoidMap,
    WeightedLimit,
    cech_nerve,
    dk_classify,
    equiv_map,
    fiber_power,
    induced_nerve_map,
    inv_map,
    inv_object,
    is_complete,
    is_univalent_segal,
    levelwise_product,
    nerve,
    reedy_replace,
    rezk_complete_nerve,
    section_into_product,
    segal_map,
    weighted_limit,
    weighted_limit_map,
)
from .simpset import classify_sset_map, inclusion, nerve_of_functor, shape, validate_sset

logger = logging.getLogger(__name__)

# Fibers of fibrations that go through the nerve stay this small.
NERVE_FIBER_LIMIT = 2

# Weights whose limits must not change when the weight is truncated one level higher.
STABILITY_WEIGHTS = [("spine", (2,)), ("boundary", (2,)), ("horn", (2, 1)), ("J2", ()), ("K", ())]


def _rng(cfg: GenConfig, what: str, index: int) -> random.Random:
    return random.Random(f"{cfg.seed}:{what}:{index}")


# -- generators --------------------------------------------------------------

def _base_components(cfg: GenConfig, rng: random.Random) -> List[Groupoid]:
    budget = cfg.max_base_objects
    kind = rng.choice(["discrete", "codiscrete", "groups"])
    if kind == "discrete":
        return [discrete(1, name=f"b{i}", labels=("0",))
                for i in range(rng.randint(1, min(budget, 3)))]
    if kind == "codiscrete":
        return [codiscrete(rng.randint(1, min(budget, 3)))]
    count = rng.randint(1, min(budget, 2))
    return [group_groupoid(rng.choice(cfg.group_pool)) for _ in range(count)]


def _permutation_action(fiber: Groupoid, component: Groupoid, rng: random.Random,
                        universe: UniverseData) -> Dict:
    """Generators of the component's vertex group acting on a discrete fiber by permutations."""
    root = component.objects[0]
    size = str(len(fiber.objects))
    homs = list(group_homomorphisms(component, root, universe.pi.base, size))
    phi = rng.choice(homs)
    action = {}
    position = fiber.object_position
    for g in generators(component, root):
        perm = [int(ch) for ch in phi[g].split(":")[1]]
        action[g] = GroupoidMap.from_functions(
            fiber, fiber, lambda x, perm=perm: fiber.objects[perm[position[x]]],
            lambda m, perm=perm: fiber.ident[fiber.objects[perm[position[fiber.src[m]]]]],
            name=phi[g])
    return action


def gen_fibration(cfg: GenConfig, index: int, sets_only: bool = False,
                  fiber_limit: Optional[int] = None) -> Fibration:
    """A fibration from the Grothendieck construction over a sampled base.

    Fibers are constant along connected components; over a group delooping a
    discrete fiber is permuted through a sampled homomorphism into the
    symmetric group, other fibers are acted on trivially.
    """
    rng = _rng(cfg, "fibration", index)
    parts = _base_components(cfg, rng)
    base = coproduct(*parts, name="B")
    limit = min(cfg.max_fiber_objects, fiber_limit or cfg.max_fiber_objects)
    universe = set_universe(limit)
    assignment: Dict = {}
    action: Dict = {}
    for i, part in enumerate(parts):
        permutable = sets_only or rng.random() < 0.6
        if permutable:
            fiber = discrete(rng.randint(0 if sets_only else 1, limit), name=f"F{i}")
        else:
            fiber = group_groupoid(rng.choice(cfg.group_pool))
        for x in part.objects:
            assignment[(i, x)] = fiber
        if len(part.objects) == 1 and len(part.morphisms) > 1:
            if permutable and fiber.objects:
                local = _permutation_action(fiber, part, rng, universe)
            else:
                local = {g: identity_map(fiber) for g in generators(part, part.objects[0])}
            action.update({(i, g): f for g, f in local.items()})
        else:
            root = part.objects[0]
            for x in part.objects[1:]:
                action[(i, next(m for m in part.hom(root, x)))] = identity_map(fiber)
    p = grothendieck(base, assignment, action, name=f"p{index}")
    logger.debug("Generated %r", p)
    return p


def example_p0() -> Fibration:
    """Two base points with singleton fibers: the standard non-univalent fibration."""
    return identity_fibration(discrete(2, name="B0"))


def gen_univalent(cfg: GenConfig, index: int) -> Fibration:
    """The restriction of π over U_n to a nonempty set of sizes."""
    rng = _rng(cfg, "univalent", index)
    u = set_universe(min(cfg.max_fiber_objects, NERVE_FIBER_LIMIT))
    sizes = [x for x in u.pi.base.objects if rng.random() < 0.6] or [rng.choice(u.pi.base.objects)]
    sub = full_subgroupoid(u.pi.base, sizes, name="S")
    incl = GroupoidMap(sub, u.pi.base, {x: x for x in sub.objects},
                       {m: m for m in sub.morphisms}, name="incl")
    q, _ = pullback_fibration(u.pi, incl)
    return Fibration(q.map, name=f"u{index}")


@dataclass(frozen=True, eq=False)
class GeneratedSquare:
    square: FibrationSquare
    kind: str
    cartesian: bool


def gen_square(cfg: GenConfig, index: int) -> GeneratedSquare:
    """A pullback square (cartesian) or a labelled broken square."""
    rng = _rng(cfg, "square", index)
    kind = ["identity", "point", "map", "broken"][index % 4]
    p = gen_fibration(cfg, index)
    if kind == "identity":
        _, sq = pullback_fibration(p, identity_map(p.base))
    elif kind == "point":
        _, sq = pullback_fibration(p, point_inclusion(p.base, rng.choice(p.base.objects)))
    elif kind == "map":
        source = coproduct(*_base_components(cfg, rng), name="A")
        f = rng.choice(enumerate_functors(source, p.base))
        _, sq = pullback_fibration(p, f)
    else:
        # every fiber of q has two points, so id_E → q is not cartesian
        two = discrete(2, name="two")
        q = grothendieck(p.base, {x: two for x in p.base.objects},
                         {u: identity_map(two) for u in p.base.morphisms
                          if not p.base.is_identity(u)}, name="q")
        sq = FibrationSquare(identity_fibration(q.total), q, identity_map(q.total), q.map,
                             name="broken")
    return GeneratedSquare(sq, kind, kind != "broken")


def gen_segal_object(cfg: GenConfig, index: int, m: Optional[int] = None
                     ) -> Tuple[TruncatedSimplicialGroupoid, str]:
    """A nerve, or a nerve times the Čech nerve of codiscrete(2) or of BZ2."""
    rng = _rng(cfg, "segal", index)
    m = m or cfg.segal_level
    p = gen_fibration(cfg, index, fiber_limit=NERVE_FIBER_LIMIT)
    x = nerve(p, m)
    kind = rng.choice(["nerve", "nerve", "contractible", "delooping"])
    if kind == "nerve" or len(x.levels[m].morphisms) > 40:
        return x, "nerve"
    factor = codiscrete(2) if kind == "contractible" else group_groupoid("Z2")
    return levelwise_product(x, cech_nerve(factor, m)).obj, kind


@dataclass(frozen=True, eq=False)
class EquivalentPair:
    source: TruncatedSimplicialGroupoid
    target: TruncatedSimplicialGroupoid
    map: SimplicialGroupoidMap
    kind: str


def gen_equivalent_pair(cfg: GenConfig, index: int, m: int = 2) -> EquivalentPair:
    """Pointwise-equivalent sufficiently fibrant objects with the comparison map."""
    p = gen_fibration(cfg, index, fiber_limit=NERVE_FIBER_LIMIT)
    x = nerve(p, m)
    if index % 2 == 0:
        prod = levelwise_product(x, cech_nerve(codiscrete(2), m))
        point = [("0",) * (n + 1) for n in range(m + 1)]
        return EquivalentPair(x, prod.obj, section_into_product(prod, point), "contractible")
    replacement = reedy_replace(x, m)
    return EquivalentPair(x, replacement.obj, replacement.tau, "replacement")


# -- reports -----------------------------------------------------------------

@dataclass
class Report:
    """Per-instance rows and their per-suite aggregation."""
    seed: int
    rows: pd.DataFrame
    elapsed: float

    def summary(self) -> pd.DataFrame:
        if self.rows.empty:
            return pd.DataFrame(columns=["suite", "instances", "passes", "failures",
                                         "budget_exhausted", "controls"])
        frame = self.rows.assign(
            is_instance=self.rows["role"] == "instance",
            is_pass=(self.rows["role"] == "instance") & (self.rows["status"] == "pass"),
            is_fail=self.rows["status"] == "fail",
            is_budget=self.rows["status"] == "budget",
            is_control=self.rows["role"] == "control")
        grouped = frame.groupby("suite", sort=False).agg(
            instances=("is_instance", "sum"), passes=("is_pass", "sum"),
            failures=("is_fail", "sum"), budget_exhausted=("is_budget", "sum"),
            controls=("is_control", "sum"))
        return grouped.reset_index()

    @property
    def passed(self) -> bool:
        return bool(self.rows.empty or not (self.rows["status"] == "fail").any())

    def to_dict(self, timing: bool = True) -> dict:
        suites = []
        for row in self.summary().to_dict("records"):
            name = row["suite"]
            mine = self.rows[self.rows["suite"] == name]
            suites.append({
                "suite": name,
                "instances": int(row["instances"]),
                "passes": int(row["passes"]),
                "controls": int(row["controls"]),
                "failures": [_certificate(r) for r in mine.to_dict("records")
                             if r["status"] == "fail"],
                "budget_exhausted": [_certificate(r) for r in mine.to_dict("records")
                                     if r["status"] == "budget"],
            })
        payload = {"seed": self.seed, "passed": self.passed, "suites": suites}
        if timing:
            payload["elapsed_seconds"] = round(self.elapsed, 3)
        return payload


def _certificate(row: dict) -> dict:
    return {"index": int(row["index"]), "label": row["label"], "role": row["role"],
            "detail": row["detail"]}


# -- suites ------------------------------------------------------------------

Check = Callable[[], Tuple[bool, dict]]


class TheoremSuiteRunner:
    """Runs the property suites for one configuration and collects rows."""

    def __init__(self, cfg: GenConfig):
        self.cfg = cfg
        self.rows: List[dict] = []

    def run(self) -> Report:
        start = time.perf_counter()
        for suite in SUITES:
            count = self.cfg.count(suite)
            if count <= 0:
                continue
            logger.info("Running suite %s with %d instances", suite, count)
            getattr(self, f"suite_{suite}")(count)
        frame = pd.DataFrame(self.rows, columns=["suite", "index", "label", "role", "status",
                                                 "detail", "seconds"])
        report = Report(self.cfg.seed, frame, time.perf_counter() - start)
        logger.info("Theorem suites finished: %s", "pass" if report.passed else "FAIL")
        return report

    def verdict(self, suite: str, value: bool) -> bool:
        """The suite's primary check, negated when a fault is injected into it."""
        return not value if self.cfg.fault_injection == suite else value

    def record(self, suite: str, index: int, label: str, check: Check,
               role: str = "instance") -> None:
        start = time.perf_counter()
        try:
            ok, detail = check()
            status = "pass" if ok else "fail"
        except BudgetExceeded as exc:
            status, detail = "budget", exc.to_dict()
            logger.warning("%s #%d (%s): %s", suite, index, label, exc)
        except GroupoidError as exc:
            status, detail = "fail", exc.to_dict()
            logger.warning("%s #%d (%s) raised: %s", suite, index, label, exc)
        self.rows.append({"suite": suite, "index": index, "label": label, "role": role,
                          "status": status, "detail": detail,
                          "seconds": time.perf_counter() - start})

    def coverage(self, suite: str, key: str, count: int) -> None:
        """Both sides of a biconditional must be hit by passing instances."""
        need = min(10, count // 5)
        sides = Counter(bool(row["detail"].get(key)) for row in self.rows
                        if row["suite"] == suite and row["role"] == "instance"
                        and row["status"] == "pass")

        def check():
            return sides[True] >= need and sides[False] >= need, {
                "true": sides[True], "false": sides[False], "needed": need}

        self.record(suite, count + 1, f"{key} coverage", check, role="coverage")

    # univalence of the fibration ⟺ completeness of the replaced nerve
    def suite_univalent_iff_complete(self, count: int) -> None:
        suite = "univalent_iff_complete"
        m = max(self.cfg.segal_level, 3)

        def fibration_check(i: int) -> Check:
            def check():
                p = gen_fibration(self.cfg, i, fiber_limit=NERVE_FIBER_LIMIT)
                univalent = self.verdict(suite, is_univalent_fibration(p))
                complete = is_complete(reedy_replace(nerve(p, m)).obj)
                return univalent == complete, {"univalent": univalent, "complete": complete}
            return check

        def segal_check(i: int) -> Check:
            def check():
                x, kind = gen_segal_object(self.cfg, i, m)
                univalent = self.verdict(suite, is_univalent_segal(x))
                complete = is_complete(reedy_replace(x).obj)
                return univalent == complete, {"kind": kind, "univalent": univalent,
                                               "complete": complete}
            return check

        for i in range(count):
            if i % 4 == 3:
                self.record(suite, i, f"segal{i}", segal_check(i))
            else:
                self.record(suite, i, f"p{i}", fibration_check(i))

        def control():
            p0 = example_p0()
            univalent = is_univalent_fibration(p0)
            complete = is_complete(reedy_replace(nerve(p0, m)).obj)
            return not univalent and not complete, {"univalent": univalent, "complete": complete}

        self.record(suite, count, "p0", control, role="control")

    # the Linv × Rinv route agrees with the Eq(p) oracle
    def suite_oracle_agreement(self, count: int) -> None:
        suite = "oracle_agreement"

        def check_for(i: int) -> Check:
            def check():
                p = gen_fibration(self.cfg, i, fiber_limit=NERVE_FIBER_LIMIT)
                segal = self.verdict(suite, is_univalent_fibration(p))
                oracle = univalence_oracle(p)
                return segal == oracle, {"segal": segal, "oracle": oracle}
            return check

        for i in range(count):
            self.record(suite, i, f"p{i}", check_for(i))

        def control():
            p0 = example_p0()
            return not univalence_oracle(p0) and not is_univalent_fibration(p0), {}

        self.record(suite, count, "p0", control, role="control")

    # pullbacks of univalent fibrations: univalent ⟺ base map fully faithful
    def suite_pullback_univalence(self, count: int) -> None:
        suite = "pullback_univalence"

        def check_for(i: int) -> Check:
            def check():
                rng = _rng(self.cfg, suite, i)
                target = gen_univalent(self.cfg, i)
                base = target.base
                if i % 2 == 0:
                    keep = [x for x in base.objects if rng.random() < 0.5] or [base.objects[-1]]
                    source = full_subgroupoid(base, keep, name="A")
                    f = GroupoidMap(source, base, {x: x for x in source.objects},
                                    {u: u for u in source.morphisms}, name="ff")
                else:
                    source = coproduct(*_base_components(self.cfg, rng), name="A")
                    f = rng.choice(enumerate_functors(source, base))
                q, _ = pullback_fibration(target, f)
                univalent = self.verdict(suite, is_univalent_fibration(q))
                ff = is_fully_faithful(f)
                return univalent == ff, {"univalent": univalent, "fully_faithful": ff}
            return check

        for i in range(count):
            self.record(suite, i, f"u{i}:{'ff' if i % 2 == 0 else 'random'}", check_for(i))
        self.coverage(suite, "fully_faithful", count)

        def control():
            return not is_univalent_fibration(example_p0()), {"univalent": False}

        self.record(suite, count, "p0", control, role="control")

    # BM-equivalences between univalent fibrations are levelwise equivalences
    def suite_bm_levelwise(self, count: int) -> None:
        suite = "bm_levelwise"
        m = 2

        def check_for(i: int) -> Check:
            def check():
                rng = _rng(self.cfg, suite, i)
                target = gen_univalent(self.cfg, i)
                base = target.base
                keep = [comp[0] for comp in base.components]
                keep += [x for x in base.objects if x not in keep and rng.random() < 0.5]
                sub = full_subgroupoid(base, keep, name="S")
                b = GroupoidMap(sub, base, {x: x for x in sub.objects},
                                {u: u for u in sub.morphisms}, name="b")
                _, sq = pullback_fibration(target, b)
                bm = is_bm_equivalence(sq)
                levelwise = self.verdict(
                    suite, induced_nerve_map(sq, m).map.is_levelwise_equivalence())
                return bm and levelwise, {"bm": bm, "levelwise": levelwise}
            return check

        for i in range(count):
            self.record(suite, i, f"u{i}", check_for(i))

        def control():
            three = identity_fibration(discrete(3, name="B3"))
            two = identity_fibration(discrete(2, name="B2"))
            collapse = GroupoidMap.from_functions(
                three.base, two.base, lambda x: "0" if x != "2" else "1",
                lambda u: "id_0" if u != "id_2" else "id_1", name="collapse")
            sq = FibrationSquare(three, two, collapse, collapse, name="collapse")
            bm = is_bm_equivalence(sq)
            levelwise = induced_nerve_map(sq, m).map.is_levelwise_equivalence()
            return bm and not levelwise, {"bm": bm, "levelwise": levelwise}

        self.record(suite, count, "collapse", control, role="control")

    def _completion_check(self, suite: str, p: Fibration, u: UniverseData,
                          b: Optional[GroupoidMap] = None) -> Tuple[bool, dict]:
        result = rezk_complete_nerve(p, u, b)
        completion = result.completion
        bm = is_bm_equivalence(completion.square)
        univalent = is_univalent_fibration(completion.up)
        dk = self.verdict(suite, result.profile.dk)
        source = result.dk_map.dom.levels[0] is p.base
        return bm and univalent and dk and result.complete and source, {
            "bm": bm, "univalent": univalent, "dk": dk, "complete": result.complete,
            "from_nerve_of_p": source}

    # completion of nerve-type objects is a DK-equivalence into a complete object
    def suite_rezk_completion(self, count: int) -> None:
        suite = "rezk_completion"

        def worked():
            p0, u1 = example_p0(), set_universe(1)
            b = GroupoidMap.from_functions(p0.base, u1.pi.base, lambda x: "1",
                                           lambda m: u1.pi.base.ident["1"], name="b")
            completion = univalent_complete(p0, u1, b)
            base_ok = are_equivalent(completion.up.base, codiscrete(2)) \
                and len(completion.up.base.objects) == 2
            ok, detail = self._completion_check(suite, p0, u1, b)
            return base_ok and ok, {"codiscrete_base": base_ok, **detail}

        def check_for(i: int) -> Check:
            def check():
                p = gen_fibration(self.cfg, i, sets_only=True, fiber_limit=NERVE_FIBER_LIMIT)
                return self._completion_check(suite, p, set_universe(NERVE_FIBER_LIMIT))
            return check

        self.record(suite, 0, "p0 over U1", worked)
        for i in range(1, count):
            self.record(suite, i, f"p{i}", check_for(i))

        def control():
            return not is_complete(reedy_replace(nerve(example_p0(), 3)).obj), {}

        self.record(suite, count, "p0 uncompleted", control, role="control")

    # between univalent nerves: DK ⟺ levelwise equivalence
    def suite_dk_levelwise(self, count: int) -> None:
        suite = "dk_levelwise"
        m = 2

        def check_for(i: int) -> Check:
            def check():
                rng = _rng(self.cfg, suite, i)
                target = gen_univalent(self.cfg, i)
                base = target.base
                if i % 2 == 0:
                    keep = base.objects
                else:
                    keep = [x for x in base.objects if rng.random() < 0.5] or [base.objects[0]]
                sub = full_subgroupoid(base, keep, name="S")
                b = GroupoidMap(sub, base, {x: x for x in sub.objects},
                                {u: u for u in sub.morphisms}, name="b")
                _, sq = pullback_fibration(target, b)
                f = induced_nerve_map(sq, m).map
                dk = self.verdict(suite, dk_classify(f).dk)
                levelwise = f.is_levelwise_equivalence()
                return dk == levelwise, {"dk": dk, "levelwise": levelwise}
            return check

        for i in range(count):
            self.record(suite, i, f"u{i}:{'all' if i % 2 == 0 else 'part'}", check_for(i))
        self.coverage(suite, "levelwise", count)

        def control():
            point = identity_fibration(discrete(1, name="pt", labels=("1",)))
            p0 = example_p0()
            collapse = GroupoidMap.from_functions(p0.base, point.base, lambda x: "1",
                                                  lambda u: "id_1", name="collapse")
            sq = FibrationSquare(p0, point, collapse, collapse, name="collapse")
            f = induced_nerve_map(sq, m).map
            dk = dk_classify(f).dk
            levelwise = f.is_levelwise_equivalence()
            return dk and not levelwise, {"dk": dk, "levelwise": levelwise}

        self.record(suite, count, "p0 -> point", control, role="control")

    # univalence is invariant under pointwise equivalence
    def suite_homotopy_invariance(self, count: int) -> None:
        suite = "homotopy_invariance"

        def check_for(i: int) -> Check:
            def check():
                pair = gen_equivalent_pair(self.cfg, i)
                source, target = inv_object(pair.source), inv_object(pair.target)
                same = is_univalent_segal(pair.source, source) == \
                    is_univalent_segal(pair.target, target)
                inv_equivalence = self.verdict(
                    suite, is_equivalence(inv_map(pair.map, source, target)))
                equiv_equivalence = is_equivalence(equiv_map(pair.map, source, target))
                levelwise = pair.map.is_levelwise_equivalence()
                return same and inv_equivalence and equiv_equivalence and levelwise, {
                    "kind": pair.kind, "same_verdict": same, "inv_equivalence": inv_equivalence,
                    "equiv_equivalence": equiv_equivalence}
            return check

        for i in range(count):
            self.record(suite, i, "contractible" if i % 2 == 0 else "replacement", check_for(i))

        def control():
            p = gen_univalent(self.cfg, count)
            x = nerve(p, 2)
            prod = levelwise_product(x, cech_nerve(group_groupoid("Z2"), 2))
            section = section_into_product(prod, [("*",) * (n + 1) for n in range(3)])
            levelwise = section.is_levelwise_equivalence()
            before, after = is_univalent_segal(x), is_univalent_segal(prod.obj)
            return not levelwise and before and not after, {
                "levelwise": levelwise, "univalent_before": before, "univalent_after": after}

        self.record(suite, count, "x BZ2", control, role="control")

    # Δⁿ-weighted limits recover levels; spine limits match the Segal maps
    def suite_weighted_limits(self, count: int) -> None:
        suite = "weighted_limits"
        m = max(self.cfg.segal_level, 4)

        def check_on(x: TruncatedSimplicialGroupoid) -> Tuple[bool, dict]:
            detail = {}
            for n in range(m):
                lim = weighted_limit(shape("simplex", n, trunc=n + 1), x)
                leg = lim.leg(n, "".join(str(v) for v in range(n + 1)))
                detail[f"simplex_{n}"] = self.verdict(suite, _is_isomorphism(leg))
            for n in range(2, m):
                spine = shape("spine", n, trunc=n + 1)
                lim = weighted_limit(spine, x)
                restrict = weighted_limit_map(
                    inclusion(spine, shape("simplex", n, trunc=n + 1)), x, target=lim)
                detail[f"spine_{n}"] = _is_isomorphism(_spine_edges(lim, fiber_power(x, n), n)) \
                    and is_equivalence(restrict) == is_equivalence(segal_map(x, n))
            for kind, params in STABILITY_WEIGHTS:
                low = shape(kind, *params)
                high = shape(kind, *params, trunc=low.trunc_level + 1)
                detail[f"stable_{low.name}"] = _is_isomorphism(
                    weighted_limit_map(inclusion(low, high), x))
            return all(detail.values()), detail

        def check_for(i: int) -> Check:
            def check():
                x, kind = gen_segal_object(self.cfg, i, m)
                ok, detail = check_on(x)
                return ok, {"kind": kind, **detail}
            return check

        self.record(suite, 0, "N(p0)", lambda: check_on(nerve(example_p0(), m)))
        for i in range(1, count):
            self.record(suite, i, f"segal{i}", check_for(i))

        def control():
            x = nerve(example_p0(), 2)
            # a vertex leg of Δ¹ forgets the edge, so it cannot be an isomorphism here
            leg = weighted_limit(shape("simplex", 1, trunc=2), x).leg(0, "0")
            return not _is_isomorphism(leg), {
                "limit_objects": len(leg.dom.objects), "level_objects": len(leg.cod.objects)}

        self.record(suite, count, "vertex leg", control, role="control")

    def suite_shape_census(self, count: int) -> None:
        suite = "shape_census"
        expected = {"J2": [2, 2, 1], "K": [2, 3, 2]}
        for name, census in expected.items():
            def check(name=name, census=census):
                a = shape(name)
                got = a.nondegenerate_census()
                valid = validate_sset(a).ok
                return self.verdict(suite, got == census) and valid, {
                    "census": got, "valid": valid}

            self.record(suite, 0 if name == "J2" else 1, name, check)

        def control():
            got = shape("horn", 2, 0).nondegenerate_census()
            return got != expected["J2"], {"census": got}

        self.record(suite, 2, "horn(2,0)", control, role="control")

    # nerves of isofibrations are quasi-fibrations
    def suite_nerve_quasi_fibration(self, count: int) -> None:
        suite = "nerve_quasi_fibration"
        for i in range(count):
            def check(i=i):
                p = gen_fibration(self.cfg, i, fiber_limit=NERVE_FIBER_LIMIT)
                profile = classify_sset_map(nerve_of_functor(p.map, 3), 3)
                quasi = self.verdict(suite, profile.quasi_fibration)
                return quasi, profile.as_dict()

            self.record(suite, i, f"p{i}", check)

        def control():
            point = discrete(1, name="pt")
            equivalence = GroupoidMap.from_functions(
                point, codiscrete(2), lambda x: "0", lambda m: "0>0", name="pick")
            profile = classify_sset_map(nerve_of_functor(equivalence, 3), 3)
            return profile.mid_fibration and not profile.quasi_fibration, profile.as_dict()

        self.record(suite, count, "pt -> codiscrete(2)", control, role="control")


def _is_isomorphism(f: GroupoidMap) -> bool:
    return len(set(f.on_objects.values())) == len(f.dom.objects) == len(f.cod.objects) and \
        len(set(f.on_morphisms.values())) == len(f.dom.morphisms) == len(f.cod.morphisms)


def _spine_edges(lim: WeightedLimit, power: Groupoid, n: int) -> GroupoidMap:
    """Spine(n)∖X → X_1 ×_{X_0} ... ×_{X_0} X_1, keeping the edge coordinates."""
    edges = [f"{i}{i + 1}" for i in range(n)]
    return GroupoidMap.from_functions(
        lim.apex, power,
        lambda a: tuple(lim.value(a, e) for e in edges),
        lambda u: tuple(lim.value(u, e) for e in edges), name=f"edges_{n}")


def run_theorem_suite(cfg: GenConfig) -> Report:
    """Run every suite with a nonzero count; budget-exhausted instances get their own bucket."""
    logger.info("Theorem suites: seed %d, budget %s", cfg.seed, current_budget())
    return TheoremSuiteRunner(cfg).run()
