"""Truncated simplicial groupoids: nerves, Segal and Reedy structure, weighted
limits, the object of biinvertible edges, completeness and DK-equivalences."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .budget import guard_cells
from .constructions import (
    Factorization,
    Limit,
    PathObject,
    enumerate_functors,
    factorize,
    fiberwise_path_object,
    pairing,
    product,
    product_map,
    pullback,
)
from .errors import InvalidStructureError, PreconditionError
from .fibrations import (
    CompletionResult,
    Fibration,
    FibrationSquare,
    InternalCategory,
    UniverseData,
    classify,
    fun_map,
    fun_of,
    is_fiberwise_isomorphism,
    over_isomorphism,
    pullback_fibration,
    univalent_complete,
    verify_homotopy_cartesian,
)
from .groupoid import (
    FunctorProfile,
    Groupoid,
    GroupoidMap,
    Label,
    ValidationReport,
    compose_maps,
    find_unliftable,
    functor_classify,
    identity_map,
    is_equivalence,
    is_essentially_surjective,
    is_fully_faithful,
    is_isofibration,
)
from .simpset import (
    Cell,
    FiniteSimplicialSet,
    LevelView,
    Operator,
    apply_operator,
    compatible_families,
    face_at,
    shape,
    simplicial_identity_issues,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TruncatedSimplicialGroupoid:
    """Levels X_0..X_m with faces d(n, i): X_n → X_(n-1) and degeneracies s(n, i): X_n → X_(n+1)."""
    levels: Tuple[Groupoid, ...]
    faces: Mapping[Tuple[int, int], GroupoidMap] = field(repr=False)
    degeneracies: Mapping[Tuple[int, int], GroupoidMap] = field(repr=False)
    name: str = ""

    @property
    def m(self) -> int:
        return len(self.levels) - 1

    def level(self, n: int) -> Groupoid:
        return self.levels[n]

    def d(self, n: int, i: int) -> GroupoidMap:
        return self.faces[(n, i)]

    def s(self, n: int, i: int) -> GroupoidMap:
        return self.degeneracies[(n, i)]

    def object_view(self) -> LevelView:
        return LevelView(lambda n: self.levels[n].objects,
                         lambda n, i, x: self.faces[(n, i)].obj(x),
                         lambda n, i, x: self.degeneracies[(n, i)].obj(x), self.m)

    def morphism_view(self) -> LevelView:
        return LevelView(lambda n: self.levels[n].morphisms,
                         lambda n, i, u: self.faces[(n, i)].mor(u),
                         lambda n, i, u: self.degeneracies[(n, i)].mor(u), self.m)

    def face_object(self, x: Label, n: int, vertices: Sequence[int]) -> Label:
        return face_at(lambda k, i, y: self.faces[(k, i)].obj(y), x, n, vertices)

    def face_morphism(self, u: Label, n: int, vertices: Sequence[int]) -> Label:
        return face_at(lambda k, i, v: self.faces[(k, i)].mor(v), u, n, vertices)

    def act_object(self, x: Label, n: int, theta: Operator) -> Label:
        view = self.object_view()
        return apply_operator(view.face, view.degeneracy, x, n, theta)

    def act_morphism(self, u: Label, n: int, theta: Operator) -> Label:
        view = self.morphism_view()
        return apply_operator(view.face, view.degeneracy, u, n, theta)

    def truncate(self, m: int) -> "TruncatedSimplicialGroupoid":
        if m > self.m:
            raise PreconditionError(f"{self.name} stops at level {self.m}, cannot truncate at {m}")
        return TruncatedSimplicialGroupoid(
            self.levels[:m + 1],
            {k: f for k, f in self.faces.items() if k[0] <= m},
            {k: f for k, f in self.degeneracies.items() if k[0] < m},
            name=self.name)

    def __repr__(self) -> str:
        sizes = ", ".join(f"{len(g.objects)}/{len(g.morphisms)}" for g in self.levels)
        return f"TruncatedSimplicialGroupoid({self.name or '?'}: {sizes})"


def validate_simplicial_groupoid(x: TruncatedSimplicialGroupoid) -> ValidationReport:
    report = ValidationReport(x.name or "simplicial groupoid")
    for (n, i), f in sorted(x.faces.items()):
        if f.dom is not x.levels[n] or f.cod is not x.levels[n - 1]:
            report.issues.append(f"d{i} at level {n} has the wrong endpoints")
        report.issues.extend(f"d{i} at level {n}: {p}" for p in f.issues())
    for (n, i), f in sorted(x.degeneracies.items()):
        if f.dom is not x.levels[n] or f.cod is not x.levels[n + 1]:
            report.issues.append(f"s{i} at level {n} has the wrong endpoints")
        report.issues.extend(f"s{i} at level {n}: {p}" for p in f.issues())
    if report.issues:
        return report
    report.issues.extend(simplicial_identity_issues(x.object_view(), "objects: "))
    report.issues.extend(simplicial_identity_issues(x.morphism_view(), "morphisms: "))
    return report


@dataclass(frozen=True, eq=False)
class SimplicialGroupoidMap:
    dom: TruncatedSimplicialGroupoid
    cod: TruncatedSimplicialGroupoid
    components: Tuple[GroupoidMap, ...]
    name: str = ""

    def issues(self) -> List[str]:
        problems = []
        x, y = self.dom, self.cod
        if len(self.components) != min(x.m, y.m) + 1:
            return ["one component per common level is required"]
        for n, f in enumerate(self.components):
            problems.extend(f"level {n}: {p}" for p in f.issues())
        if problems:
            return problems
        top = len(self.components) - 1
        for n in range(top + 1):
            f = self.components[n]
            for i in range(n + 1):
                pairs = []
                if n > 0:
                    pairs.append((f"d{i}", x.d(n, i), y.d(n, i), self.components[n - 1]))
                if n < top:
                    pairs.append((f"s{i}", x.s(n, i), y.s(n, i), self.components[n + 1]))
                for op, ox, oy, g in pairs:
                    for a in x.levels[n].objects:
                        if g.obj(ox.obj(a)) != oy.obj(f.obj(a)):
                            problems.append(f"{op} not preserved at object {a!r} of level {n}")
                    for u in x.levels[n].morphisms:
                        if g.mor(ox.mor(u)) != oy.mor(f.mor(u)):
                            problems.append(f"{op} not preserved at morphism {u!r} of level {n}")
        return problems

    def validated(self) -> "SimplicialGroupoidMap":
        problems = self.issues()
        if problems:
            raise InvalidStructureError(f"invalid simplicial map {self.name}".strip(), problems)
        return self

    def is_levelwise_equivalence(self) -> bool:
        return all(is_equivalence(f) for f in self.components)


def identity_simplicial_map(x: TruncatedSimplicialGroupoid) -> SimplicialGroupoidMap:
    return SimplicialGroupoidMap(x, x, tuple(identity_map(g) for g in x.levels), name="id")


def compose_simplicial_maps(after: SimplicialGroupoidMap,
                            before: SimplicialGroupoidMap) -> SimplicialGroupoidMap:
    if before.cod is not after.dom:
        raise PreconditionError("cannot compose simplicial maps: codomain mismatch")
    return SimplicialGroupoidMap(
        before.dom, after.cod,
        tuple(compose_maps(g, f) for f, g in zip(before.components, after.components)),
        name=f"{after.name}.{before.name}")


def _assemble(levels: Sequence[Groupoid], face, degeneracy, name: str
              ) -> TruncatedSimplicialGroupoid:
    """Build face and degeneracy functors from label-level callables."""
    m = len(levels) - 1
    faces, degeneracies = {}, {}
    for n in range(1, m + 1):
        for i in range(n + 1):
            faces[(n, i)] = GroupoidMap.from_functions(
                levels[n], levels[n - 1],
                lambda x, n=n, i=i: face(n, i, x, False),
                lambda u, n=n, i=i: face(n, i, u, True), name=f"d{i}")
    for n in range(m):
        for i in range(n + 1):
            degeneracies[(n, i)] = GroupoidMap.from_functions(
                levels[n], levels[n + 1],
                lambda x, n=n, i=i: degeneracy(n, i, x, False),
                lambda u, n=n, i=i: degeneracy(n, i, u, True), name=f"s{i}")
    return TruncatedSimplicialGroupoid(tuple(levels), faces, degeneracies, name=name)


# -- nerves and other sources ------------------------------------------------

def _chain(n: int, x) -> tuple:
    return (x,) if n == 1 else x


def _unchain(items: tuple):
    return items[0] if len(items) == 1 else items


def _chain_level(fun: InternalCategory, n: int, name: str) -> Groupoid:
    """Strict n-fold fiber product Fun ×_B ... ×_B Fun, labelled by tuples."""
    arrows = fun.arrows
    by_source: Dict[Label, List[Label]] = {}
    for x in arrows.objects:
        by_source.setdefault(x[0], []).append(x)
    by_base: Dict[Label, List[Label]] = {}
    for u in arrows.morphisms:
        by_base.setdefault(u[2], []).append(u)
    objects = [(x,) for x in arrows.objects]
    morphisms = [(u,) for u in arrows.morphisms]
    for _ in range(n - 1):
        guard_cells(name, sum(len(by_source.get(c[-1][1], ())) for c in objects)
                    + sum(len(by_base.get(c[-1][3], ())) for c in morphisms))
        objects = [c + (x,) for c in objects for x in by_source.get(c[-1][1], ())]
        morphisms = [c + (u,) for c in morphisms for u in by_base.get(c[-1][3], ())]

    def composer(g, f):
        if tuple(arrows.tgt[u] for u in f) != tuple(arrows.src[u] for u in g):
            return None
        return tuple(arrows.compose(v, u) for v, u in zip(g, f))

    return Groupoid.build(
        objects, morphisms,
        {c: tuple(arrows.src[u] for u in c) for c in morphisms},
        {c: tuple(arrows.tgt[u] for u in c) for c in morphisms},
        {c: tuple(arrows.ident[x] for x in c) for c in objects},
        composer,
        inv={c: tuple(arrows.inv[u] for u in c) for c in morphisms},
        name=name)


def nerve(p: Fibration, m: int = 3, fun: Optional[InternalCategory] = None
          ) -> TruncatedSimplicialGroupoid:
    """N(p): level 0 is the base, level 1 is Fun(p), level n composable n-chains.

    d_0 and d_n drop the first and last arrow, inner faces compose with μ and
    s_i inserts the identity r(vertex i).
    """
    if m < 1:
        raise PreconditionError("nerve needs at least levels 0 and 1")
    fun = fun or fun_of(p)
    label = f"N({p.name})"
    levels = [fun.base, fun.arrows] + [_chain_level(fun, n, f"{label}_{n}")
                                       for n in range(2, m + 1)]

    def face(n, i, x, is_morphism):
        if n == 1:
            f = fun.t if i == 0 else fun.s
            return f.mor(x) if is_morphism else f.obj(x)
        chain = _chain(n, x)
        if i == 0:
            return _unchain(chain[1:])
        if i == n:
            return _unchain(chain[:-1])
        pair = (chain[i - 1], chain[i])
        composite = fun.mu.mor(pair) if is_morphism else fun.mu.obj(pair)
        return _unchain(chain[:i - 1] + (composite,) + chain[i + 1:])

    def degeneracy(n, i, x, is_morphism):
        r = fun.r.mor if is_morphism else fun.r.obj
        if n == 0:
            return r(x)
        chain = _chain(n, x)
        if is_morphism:
            vertex = chain[0][2] if i == 0 else chain[i - 1][3]
        else:
            vertex = chain[0][0] if i == 0 else chain[i - 1][1]
        return chain[:i] + (r(vertex),) + chain[i:]

    result = _assemble(levels, face, degeneracy, label)
    logger.debug("Built %r", result)
    return result


def constant(g: Groupoid, m: int = 3) -> TruncatedSimplicialGroupoid:
    """The constant simplicial groupoid at g, every operator the identity."""
    return _assemble([g] * (m + 1), lambda n, i, x, _: x, lambda n, i, x, _: x,
                     name=f"const({g.name})")


def cech_nerve(g: Groupoid, m: int = 3) -> TruncatedSimplicialGroupoid:
    """Level n is g^(n+1) (tuples); faces drop a coordinate, degeneracies repeat one."""
    levels = []
    for n in range(m + 1):
        guard_cells(f"cech({g.name})_{n}",
                    len(g.objects) ** (n + 1) + len(g.morphisms) ** (n + 1))
        objects = [()]
        morphisms = [()]
        for _ in range(n + 1):
            objects = [t + (x,) for t in objects for x in g.objects]
            morphisms = [t + (u,) for t in morphisms for u in g.morphisms]

        def composer(v, u):
            parts = [g.composer(b, a) for b, a in zip(v, u)]
            return None if any(c is None for c in parts) else tuple(parts)

        levels.append(Groupoid.build(
            objects, morphisms,
            {t: tuple(g.src[u] for u in t) for t in morphisms},
            {t: tuple(g.tgt[u] for u in t) for t in morphisms},
            {t: tuple(g.ident[x] for x in t) for t in objects},
            composer, inv={t: tuple(g.inv[u] for u in t) for t in morphisms},
            name=f"cech({g.name})_{n}"))
    return _assemble(levels, lambda n, i, x, _: x[:i] + x[i + 1:],
                     lambda n, i, x, _: x[:i + 1] + x[i:], name=f"cech({g.name})")


def from_simplicial_set(a: FiniteSimplicialSet) -> TruncatedSimplicialGroupoid:
    """a viewed as a simplicial groupoid with discrete levels."""
    levels = []
    for n, simplices in enumerate(a.levels):
        ident = {x: ("id", x) for x in simplices}
        ends = {f: x for x, f in ident.items()}
        levels.append(Groupoid.build(simplices, ident.values(), ends, ends, ident,
                                     lambda g, f: f if g == f else None,
                                     inv={f: f for f in ident.values()},
                                     name=f"{a.name}_{n}"))

    def lift(op):
        def apply(n, i, x, is_morphism):
            if is_morphism:
                return ("id", op(n, i, x[1]))
            return op(n, i, x)
        return apply

    return _assemble(levels, lift(a.face), lift(a.degeneracy), name=a.name)


@dataclass(frozen=True, eq=False)
class LevelwiseProduct:
    obj: TruncatedSimplicialGroupoid
    first: SimplicialGroupoidMap
    second: SimplicialGroupoidMap
    limits: Tuple[Limit, ...] = field(repr=False)


def levelwise_product(x: TruncatedSimplicialGroupoid, y: TruncatedSimplicialGroupoid
                      ) -> LevelwiseProduct:
    top = min(x.m, y.m)
    limits = tuple(product(x.levels[n], y.levels[n]) for n in range(top + 1))
    faces = {(n, i): product_map(x.d(n, i), y.d(n, i), limits[n], limits[n - 1])
             for n in range(1, top + 1) for i in range(n + 1)}
    degeneracies = {(n, i): product_map(x.s(n, i), y.s(n, i), limits[n], limits[n + 1])
                    for n in range(top) for i in range(n + 1)}
    obj = TruncatedSimplicialGroupoid(tuple(lim.apex for lim in limits), faces, degeneracies,
                                      name=f"{x.name} x {y.name}")
    first = SimplicialGroupoidMap(obj, x.truncate(top) if top < x.m else x,
                                  tuple(lim.left for lim in limits), name="pr1")
    second = SimplicialGroupoidMap(obj, y.truncate(top) if top < y.m else y,
                                   tuple(lim.right for lim in limits), name="pr2")
    return LevelwiseProduct(obj, first, second, limits)


def section_into_product(prod: LevelwiseProduct, point: Sequence[Label]
                         ) -> SimplicialGroupoidMap:
    """x ↦ (x, point[n]) at level n; ``point`` must be a vertex-compatible family."""
    x = prod.first.cod
    y = prod.second.cod
    components = []
    for n, lim in enumerate(prod.limits):
        c = point[n]
        components.append(GroupoidMap.from_functions(
            x.levels[n], lim.apex, lambda a, c=c: (a, c),
            lambda u, c=c, n=n: (u, y.levels[n].ident[c]), name="section"))
    return SimplicialGroupoidMap(x, prod.obj, tuple(components), name="section")


# -- Segal maps and fibrancy -------------------------------------------------

def fiber_power(x: TruncatedSimplicialGroupoid, n: int) -> Groupoid:
    """X_1 ×_{X_0} ... ×_{X_0} X_1 (n factors), labelled by tuples of edges."""
    x1 = x.levels[1]
    d0, d1 = x.d(1, 0), x.d(1, 1)
    objects_from: Dict[Label, List[Label]] = {}
    for e in x1.objects:
        objects_from.setdefault(d1.obj(e), []).append(e)
    morphisms_from: Dict[Label, List[Label]] = {}
    for u in x1.morphisms:
        morphisms_from.setdefault(d1.mor(u), []).append(u)
    objects = [(e,) for e in x1.objects]
    morphisms = [(u,) for u in x1.morphisms]
    name = f"{x.name}_1^({n})"
    for _ in range(n - 1):
        guard_cells(name, sum(len(objects_from.get(d0.obj(t[-1]), ())) for t in objects)
                    + sum(len(morphisms_from.get(d0.mor(t[-1]), ())) for t in morphisms))
        objects = [t + (e,) for t in objects for e in objects_from.get(d0.obj(t[-1]), ())]
        morphisms = [t + (u,) for t in morphisms for u in morphisms_from.get(d0.mor(t[-1]), ())]

    def composer(g, f):
        if tuple(x1.tgt[u] for u in f) != tuple(x1.src[u] for u in g):
            return None
        return tuple(x1.compose(v, u) for v, u in zip(g, f))

    return Groupoid.build(
        objects, morphisms,
        {t: tuple(x1.src[u] for u in t) for t in morphisms},
        {t: tuple(x1.tgt[u] for u in t) for t in morphisms},
        {t: tuple(x1.ident[e] for e in t) for t in objects},
        composer, inv={t: tuple(x1.inv[u] for u in t) for t in morphisms}, name=name)


def segal_map(x: TruncatedSimplicialGroupoid, n: int) -> GroupoidMap:
    """ξ_n: X_n → X_1 ×_{X_0} ... ×_{X_0} X_1 through the essential edges."""
    if not 2 <= n <= x.m:
        raise PreconditionError(f"Segal map index {n} out of range 2..{x.m}")
    target = fiber_power(x, n)
    return GroupoidMap.from_functions(
        x.levels[n], target,
        lambda a: tuple(x.face_object(a, n, (i, i + 1)) for i in range(n)),
        lambda u: tuple(x.face_morphism(u, n, (i, i + 1)) for i in range(n)),
        name=f"xi_{n}")


def is_segal(x: TruncatedSimplicialGroupoid) -> bool:
    return all(is_equivalence(segal_map(x, n)) for n in range(2, x.m + 1))


def endpoint_map(x: TruncatedSimplicialGroupoid) -> Tuple[GroupoidMap, Limit]:
    """(d_1, d_0): X_1 → X_0 × X_0."""
    ends = product(x.levels[0], x.levels[0])
    return pairing(x.d(1, 1), x.d(1, 0), ends), ends


def sufficient_fibrancy(x: TruncatedSimplicialGroupoid) -> bool:
    if x.m < 2:
        raise PreconditionError("sufficient fibrancy needs levels up to 2")
    ends, _ = endpoint_map(x)
    return is_isofibration(ends) and is_isofibration(segal_map(x, 2))


# -- weighted limits ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class WeightedLimit:
    """A∖X: families indexed by the nondegenerate simplices of A, in ``cells`` order."""
    weight: FiniteSimplicialSet
    diagram: TruncatedSimplicialGroupoid
    apex: Groupoid
    cells: Tuple[Cell, ...]

    def coordinate(self, simplex: Label) -> int:
        for i, (_, y) in enumerate(self.cells):
            if y == simplex:
                return i
        raise PreconditionError(f"{simplex!r} is not a nondegenerate simplex of {self.weight.name}")

    def value(self, family: tuple, simplex: Label) -> Label:
        return family[self.coordinate(simplex)]

    def family(self, values: Mapping[Label, Label]) -> tuple:
        return tuple(values[y] for _, y in self.cells)

    def leg(self, n: int, simplex: Label) -> GroupoidMap:
        """The projection A∖X → X_n at any n-simplex of A."""
        k, y, eta = self.weight.decompose(n, simplex)
        i = self.coordinate(y)
        x = self.diagram
        theta = tuple(eta)
        return GroupoidMap.from_functions(
            self.apex, x.levels[n],
            lambda a: x.act_object(a[i], k, theta),
            lambda u: x.act_morphism(u[i], k, theta),
            name=f"leg_{simplex}")


def _weighted_limit(a: FiniteSimplicialSet, x: TruncatedSimplicialGroupoid) -> WeightedLimit:
    cells = a.nondegenerate
    name = f"{a.name}\\{x.name}"
    objects = [tuple(f[c] for c in cells)
               for f in compatible_families(a, x.object_view(), what=f"{name} objects")]
    morphisms = [tuple(f[c] for c in cells)
                 for f in compatible_families(a, x.morphism_view(), what=f"{name} morphisms")]
    guard_cells(name, len(objects) + len(morphisms))
    level = [x.levels[n] for n, _ in cells]

    def composer(g, f):
        parts = []
        for grp, v, u in zip(level, g, f):
            c = grp.composer(v, u) if grp.tgt[u] == grp.src[v] else None
            if c is None:
                return None
            parts.append(c)
        return tuple(parts)

    apex = Groupoid.build(
        objects, morphisms,
        {t: tuple(grp.src[u] for grp, u in zip(level, t)) for t in morphisms},
        {t: tuple(grp.tgt[u] for grp, u in zip(level, t)) for t in morphisms},
        {t: tuple(grp.ident[e] for grp, e in zip(level, t)) for t in objects},
        composer,
        inv={t: tuple(grp.inv[u] for grp, u in zip(level, t)) for t in morphisms},
        name=name)
    logger.debug("Weighted limit %s: %d objects, %d morphisms", name, len(objects), len(morphisms))
    return WeightedLimit(a, x, apex, cells)


def weighted_limit(a: FiniteSimplicialSet, x: TruncatedSimplicialGroupoid) -> WeightedLimit:
    if x.m < a.trunc_level:
        raise PreconditionError(
            f"{a.name} is truncated at {a.trunc_level} but {x.name} stops at level {x.m}")
    return _weighted_limit(a, x)


def weighted_limit_map(g, x: TruncatedSimplicialGroupoid,
                       source: Optional[WeightedLimit] = None,
                       target: Optional[WeightedLimit] = None) -> GroupoidMap:
    """A′∖X → A∖X induced by a simplicial map g: A → A′."""
    source = source or weighted_limit(g.cod, x)
    target = target or weighted_limit(g.dom, x)
    plan = []
    for n, y in target.cells:
        k, z, eta = g.cod.decompose(n, g.image(n, y))
        plan.append((source.coordinate(z), k, tuple(eta)))
    return GroupoidMap.from_functions(
        source.apex, target.apex,
        lambda a: tuple(x.act_object(a[i], k, theta) for i, k, theta in plan),
        lambda u: tuple(x.act_morphism(u[i], k, theta) for i, k, theta in plan),
        name=f"{g.name}\\{x.name}")


def _vertices(simplex: str) -> Tuple[int, ...]:
    return tuple(int(ch) for ch in simplex)


def _matching_map(x: TruncatedSimplicialGroupoid, n: int, limit: WeightedLimit,
                  tau=None) -> GroupoidMap:
    """x ↦ its family of proper faces, passed through ``tau(k, label, is_morphism)``."""
    plan = [(k, _vertices(y)) for k, y in limit.cells]
    tau = tau or (lambda k, v, _: v)
    return GroupoidMap.from_functions(
        x.levels[n], limit.apex,
        lambda a: tuple(tau(k, x.face_object(a, n, vs), False) for k, vs in plan),
        lambda u: tuple(tau(k, x.face_morphism(u, n, vs), True) for k, vs in plan),
        name=f"match_{n}")


def matching_map(x: TruncatedSimplicialGroupoid, n: int) -> GroupoidMap:
    """X_n → ∂Δⁿ∖X."""
    if not 0 <= n <= x.m:
        raise PreconditionError(f"matching map index {n} out of range 0..{x.m}")
    return _matching_map(x, n, _weighted_limit(shape("boundary", n), x.truncate(max(n - 1, 0))))


def reedy_fibrancy_witness(x: TruncatedSimplicialGroupoid, top: Optional[int] = None
                           ) -> Optional[dict]:
    """The first level whose matching map is not an isofibration, with an unliftable pair."""
    top = x.m if top is None else min(top, x.m)
    for n in range(top + 1):
        witness = find_unliftable(matching_map(x, n))
        if witness is not None:
            return {"level": n, "object": witness[0], "morphism": witness[1]}
    return None


def is_reedy_fibrant(x: TruncatedSimplicialGroupoid, top: Optional[int] = None) -> bool:
    return reedy_fibrancy_witness(x, top) is None


# -- Reedy replacement -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ReedyReplacement:
    """X̃ with τ: X → X̃; levels 0 and 1 are kept, levels 2 and 3 are iso-commas."""
    obj: TruncatedSimplicialGroupoid
    tau: SimplicialGroupoidMap
    factorizations: Mapping[int, Factorization] = field(repr=False)
    matching: Mapping[int, WeightedLimit] = field(repr=False)
    level2_target: Optional[Limit] = None

    @property
    def special_level2(self) -> bool:
        return self.level2_target is not None

    def boundary_projection(self) -> GroupoidMap:
        """X̃_2 → M_2X: the matching part of the level-2 fibration."""
        q = self.factorizations[2].q
        if self.level2_target is None:
            return q
        return compose_maps(self.level2_target.left, q)


REPLACEMENT_TOP = 3


def reedy_replace(x: TruncatedSimplicialGroupoid, m: Optional[int] = None,
                  special_level2: bool = False) -> ReedyReplacement:
    """Replace levels 2 and 3 by reduced iso-comma factorizations of the matching maps.

    Degeneracies into level 3 send y = (x, β) to the representative of
    (s_i x, θ*(N_y)) where N_y: (x, id) → (x, β) and θ runs over the faces of
    ∂Δ³ composed with σ_i. With ``special_level2`` the level-2 map factored
    is (∂, s_0 d_1 d_1): X_2 → M_2X ×_{X_0} Δ*X_1.
    """
    if x.m < 2 or not sufficient_fibrancy(x):
        raise PreconditionError(f"{x.name} is not sufficiently fibrant")
    top = min(x.m if m is None else m, x.m, REPLACEMENT_TOP)
    levels: List[Groupoid] = [x.levels[0], x.levels[1]]
    faces = {(1, i): x.d(1, i) for i in range(2)}
    degeneracies = {(0, 0): x.s(0, 0)}
    factorizations: Dict[int, Factorization] = {}
    matching: Dict[int, WeightedLimit] = {}
    taus = [identity_map(x.levels[0]), identity_map(x.levels[1])]
    level2_target = None

    m2 = _weighted_limit(shape("boundary", 2), x.truncate(1))
    matching[2] = m2
    pi2 = _matching_map(x, 2, m2)
    if special_level2:
        ends = product(x.levels[0], x.levels[0])
        diagonal = pairing(identity_map(x.levels[0]), identity_map(x.levels[0]), ends)
        bnd = pairing(x.d(1, 1), x.d(1, 0), ends)
        loops = pullback(diagonal, bnd)
        level2_target = pullback(m2.leg(0, "0"), loops.left)
        s0 = x.s(0, 0)
        i0 = m2.coordinate("0")
        f2 = GroupoidMap.from_functions(
            x.levels[2], level2_target.apex,
            lambda a: (pi2.obj(a), (pi2.obj(a)[i0], s0.obj(pi2.obj(a)[i0]))),
            lambda u: (pi2.mor(u), (pi2.mor(u)[i0], s0.mor(pi2.mor(u)[i0]))),
            name="(match, s0d1d1)")

        def boundary(label):
            return label[0]
    else:
        f2 = pi2

        def boundary(label):
            return label

    fz2 = factorize(f2, reduced=True)
    factorizations[2] = fz2
    x2, cod2 = fz2.middle, f2.cod
    for j in range(3):
        k = m2.coordinate(_face_name(2, j))
        faces[(2, j)] = GroupoidMap.from_functions(
            x2, x.levels[1],
            lambda a, k=k: boundary(cod2.tgt[a[1]])[k],
            lambda u, k=k: boundary(u[2])[k], name=f"d{j}")
    for i in range(2):
        degeneracies[(1, i)] = compose_maps(fz2.j, x.s(1, i))
    levels.append(x2)
    taus.append(fz2.j)

    if top >= 3:
        lower = TruncatedSimplicialGroupoid(tuple(levels), dict(faces), dict(degeneracies),
                                            name=f"{x.name}~")
        m3 = _weighted_limit(shape("boundary", 3), lower)
        matching[3] = m3

        def tau_label(k, label, is_morphism):
            if k < 2:
                return label
            return fz2.j.mor(label) if is_morphism else fz2.j.obj(label)

        pi3 = _matching_map(x, 3, m3, tau_label)
        fz3 = factorize(pi3, reduced=True)
        factorizations[3] = fz3
        x3, cod3 = fz3.middle, m3.apex
        for j in range(4):
            k = m3.coordinate(_face_name(3, j))
            faces[(3, j)] = GroupoidMap.from_functions(
                x3, x2,
                lambda a, k=k: cod3.tgt[a[1]][k],
                lambda u, k=k: u[2][k], name=f"d{j}")
        for i in range(3):
            degeneracies[(2, i)] = _level3_degeneracy(x, lower, m3, fz2, fz3, i)
        levels.append(x3)
        taus.append(fz3.j)

    obj = TruncatedSimplicialGroupoid(tuple(levels), faces, degeneracies, name=f"{x.name}~")
    source = x.truncate(top) if top < x.m else x
    tau = SimplicialGroupoidMap(source, obj, tuple(taus), name="tau")
    logger.info("Reedy replacement of %s: %r", x.name, obj)
    return ReedyReplacement(obj, tau, factorizations, matching, level2_target)


def _face_name(n: int, j: int) -> str:
    return "".join(str(v) for v in range(n + 1) if v != j)


def _level3_degeneracy(x: TruncatedSimplicialGroupoid, lower: TruncatedSimplicialGroupoid,
                       m3: WeightedLimit, fz2: Factorization, fz3: Factorization,
                       i: int) -> GroupoidMap:
    x2 = fz2.middle
    x3_level = x.levels[3]
    s_i = x.s(2, i)
    f2 = fz2.f
    thetas = []
    for _, label in m3.cells:
        thetas.append(tuple(v if v <= i else v - 1 for v in _vertices(label)))

    def connecting(y):
        a, beta = y
        return ((a, f2.cod.ident[f2.obj(a)]), f2.dom.ident[a], beta)

    def normalized(y):
        family = tuple(lower.act_morphism(connecting(y), 2, theta) for theta in thetas)
        return fz3.normalize(s_i.obj(y[0]), family)

    def on_object(y):
        return normalized(y)[0]

    def on_morphism(u):
        y, alpha, _ = u
        y2 = x2.tgt[u]
        z, n1 = normalized(y)
        _, n2 = normalized(y2)
        gamma = tuple(lower.act_morphism(u, 2, theta) for theta in thetas)
        return (z, x3_level.compose_all(n2, s_i.mor(alpha), x3_level.inverse(n1)), gamma)

    return GroupoidMap.from_functions(x2, fz3.middle, on_object, on_morphism, name=f"s{i}")


# -- Inv, Equiv and univalence -----------------------------------------------

@dataclass(frozen=True, eq=False)
class EquivBundle:
    """Inv(X) as a pullback of the fiberwise path object of Δ*X_1, and Equiv(X).

    An Inv object is (((x, e), σ), θ): a 2-simplex σ whose d_1 is the loop e
    at x, and a fiberwise path θ: e → s_0 x.
    """
    source: TruncatedSimplicialGroupoid
    loops: Limit
    two_simplices: Limit
    paths: PathObject
    inv: Limit
    linv: GroupoidMap
    rinv: GroupoidMap
    equiv: Limit
    to_edges: GroupoidMap
    unit: GroupoidMap


def inv_object(x: TruncatedSimplicialGroupoid) -> EquivBundle:
    if not sufficient_fibrancy(x):
        raise PreconditionError(f"{x.name} is not sufficiently fibrant")
    x0, x1, x2 = x.levels[0], x.levels[1], x.levels[2]
    ends = product(x0, x0)
    diagonal = pairing(identity_map(x0), identity_map(x0), ends)
    bnd = pairing(x.d(1, 1), x.d(1, 0), ends)
    loops = pullback(diagonal, bnd, name=f"D*{x.name}_1")
    two = pullback(loops.right, x.d(2, 1), name=f"D*{x.name}_2")
    paths = fiberwise_path_object(loops.left)
    s0 = x.s(0, 0)
    pair = GroupoidMap.from_functions(
        two.apex, paths.ends.apex,
        lambda w: (w[0], (w[0][0], s0.obj(w[0][0]))),
        lambda u: (u[0], (u[0][0], s0.mor(u[0][0]))),
        name="(d1, s0d1d1)")
    inv = pullback(pair, paths.boundary, name=f"Inv({x.name})")
    d2, d0 = x.d(2, 2), x.d(2, 0)
    linv = GroupoidMap.from_functions(inv.apex, x1, lambda a: d2.obj(a[0][1]),
                                      lambda u: d2.mor(u[0][1]), name="Linv")
    rinv = GroupoidMap.from_functions(inv.apex, x1, lambda a: d0.obj(a[0][1]),
                                      lambda u: d0.mor(u[0][1]), name="Rinv")
    equiv = pullback(linv, rinv, name=f"Equiv({x.name})")
    to_edges = GroupoidMap.from_functions(equiv.apex, x1, lambda a: linv.obj(a[0]),
                                          lambda u: linv.mor(u[0]), name="Equiv->X1")
    s00 = x.s(1, 0)

    def witness(a):
        loop = (a, s0.obj(a))
        return ((loop, s00.obj(s0.obj(a))), loops.apex.ident[loop])

    def witness_morphism(u):
        a = x0.src[u]
        step = (u, s0.mor(u))
        return ((step, s00.mor(s0.mor(u))), (loops.apex.ident[(a, s0.obj(a))], step, step))

    unit = GroupoidMap.from_functions(
        x0, equiv.apex, lambda a: (witness(a), witness(a)),
        lambda u: (witness_morphism(u), witness_morphism(u)), name="unit")
    for a in x0.objects:
        if to_edges.obj(unit.obj(a)) != s0.obj(a):
            raise InvalidStructureError(f"unit does not lie over s0 at {a!r}")
    logger.debug("Equiv(%s): %d objects, %d morphisms", x.name,
                 len(equiv.apex.objects), len(equiv.apex.morphisms))
    return EquivBundle(x, loops, two, paths, inv, linv, rinv, equiv, to_edges, unit)


def inv_map(f: SimplicialGroupoidMap, source: Optional[EquivBundle] = None,
            target: Optional[EquivBundle] = None) -> GroupoidMap:
    """Inv(X) → Inv(Y) induced levelwise by f."""
    source = source or inv_object(f.dom)
    target = target or inv_object(f.cod)
    f0, f1, f2 = f.components[:3]

    def step(u):
        return (f0.mor(u[0]), f1.mor(u[1]))

    return GroupoidMap.from_functions(
        source.inv.apex, target.inv.apex,
        lambda a: (((f0.obj(a[0][0][0]), f1.obj(a[0][0][1])), f2.obj(a[0][1])), step(a[1])),
        lambda u: ((step(u[0][0]), f2.mor(u[0][1])),
                   (step(u[1][0]), step(u[1][1]), step(u[1][2]))),
        name=f"Inv({f.name})")


def equiv_map(f: SimplicialGroupoidMap, source: Optional[EquivBundle] = None,
              target: Optional[EquivBundle] = None) -> GroupoidMap:
    source = source or inv_object(f.dom)
    target = target or inv_object(f.cod)
    inner = inv_map(f, source, target)
    return GroupoidMap.from_functions(
        source.equiv.apex, target.equiv.apex,
        lambda a: (inner.obj(a[0]), inner.obj(a[1])),
        lambda u: (inner.mor(u[0]), inner.mor(u[1])), name=f"Equiv({f.name})")


def is_univalent_segal(x: TruncatedSimplicialGroupoid,
                       bundle: Optional[EquivBundle] = None) -> bool:
    """The unit X_0 → Equiv(X) is an equivalence of groupoids."""
    bundle = bundle or inv_object(x)
    verdict = is_equivalence(bundle.unit)
    logger.debug("%s univalent: %s", x.name, verdict)
    return verdict


def univalence_witness_segal(x: TruncatedSimplicialGroupoid,
                             bundle: Optional[EquivBundle] = None) -> Optional[dict]:
    """An Equiv object outside the essential image of the unit, or a non-full vertex group."""
    bundle = bundle or inv_object(x)
    unit, equiv = bundle.unit, bundle.equiv.apex
    if not is_fully_faithful(unit):
        for comp in x.levels[0].components:
            a = comp[0]
            if len(equiv.automorphisms(unit.obj(a))) != len(x.levels[0].automorphisms(a)):
                return {"kind": "not_full", "object": a, "edge": bundle.to_edges.obj(unit.obj(a))}
        return {"kind": "not_full"}
    hit = {equiv.component_index[unit.obj(a)] for a in x.levels[0].objects}
    for comp in equiv.components:
        if equiv.component_index[comp[0]] not in hit:
            return {"kind": "not_hit", "equivalence": comp[0],
                    "edge": bundle.to_edges.obj(comp[0])}
    return None


def alternative_unit(bundle: EquivBundle) -> Optional[GroupoidMap]:
    """Another lift of s_0 through Equiv(X) → X_1, found by search, if one exists."""
    x = bundle.source
    for lift in enumerate_functors(x.levels[0], bundle.equiv.apex,
                                   over=(x.s(0, 0), bundle.to_edges)):
        if dict(lift.on_objects) != dict(bundle.unit.on_objects) \
                or dict(lift.on_morphisms) != dict(bundle.unit.on_morphisms):
            return lift
    return None


# -- completeness ------------------------------------------------------------

COMPLETENESS_VERTEX = "1"


def _k_leg(x: TruncatedSimplicialGroupoid) -> Tuple[WeightedLimit, GroupoidMap]:
    if x.m < 3:
        raise PreconditionError(f"completeness needs levels up to 3, {x.name} stops at {x.m}")
    if not is_reedy_fibrant(x, 3):
        raise PreconditionError(f"{x.name} is not Reedy fibrant; replace it first")
    k = weighted_limit(shape("K"), x)
    return k, k.leg(0, COMPLETENESS_VERTEX)


def is_complete(x: TruncatedSimplicialGroupoid) -> bool:
    """K∖X → X_0 at the endpoint {1} is a trivial fibration."""
    _, leg = _k_leg(x)
    verdict = functor_classify(leg).is_trivial_fibration
    logger.debug("%s complete: %s", x.name, verdict)
    return verdict


def complete_witness(x: TruncatedSimplicialGroupoid) -> Optional[dict]:
    """Why K∖X → X_0 is not a trivial fibration, or None."""
    k, leg = _k_leg(x)
    profile: FunctorProfile = functor_classify(leg)
    if profile.is_trivial_fibration:
        return None
    if not profile.is_surjective_on_objects:
        hit = set(leg.on_objects.values())
        missed = next(a for a in x.levels[0].objects if a not in hit)
        return {"kind": "not_surjective", "object": missed}
    if not profile.is_isofibration:
        a, u = find_unliftable(leg)
        return {"kind": "not_isofibration", "object": a, "morphism": u}
    apex = k.apex
    for comp in apex.components:
        a = comp[0]
        if len(apex.automorphisms(a)) != len(x.levels[0].automorphisms(leg.obj(a))):
            return {"kind": "not_full", "object": a}
    for i, comp in enumerate(apex.components):
        for other in apex.components[i + 1:]:
            if x.levels[0].connected(leg.obj(comp[0]), leg.obj(other[0])):
                return {"kind": "not_full", "object": comp[0], "other": other[0]}
    return {"kind": "not_equivalence"}


def j2_strict_limit(x: TruncatedSimplicialGroupoid) -> WeightedLimit:
    """J2∖X: strict 2-simplices σ with d_1 σ = s_0 x."""
    return weighted_limit(shape("J2"), x)


def j2_to_inv(x: TruncatedSimplicialGroupoid, j2: Optional[WeightedLimit] = None,
              bundle: Optional[EquivBundle] = None) -> GroupoidMap:
    """The inclusion J2∖X → Inv(X) with identity paths."""
    j2 = j2 or j2_strict_limit(x)
    bundle = bundle or inv_object(x)
    loops = bundle.loops.apex
    s0 = x.s(0, 0)
    iv, isg = j2.coordinate("0"), j2.coordinate("sigma")

    def on_object(a):
        loop = (a[iv], s0.obj(a[iv]))
        return ((loop, a[isg]), loops.ident[loop])

    def on_morphism(u):
        v = u[iv]
        step = (v, s0.mor(v))
        start = (x.levels[0].src[v], s0.obj(x.levels[0].src[v]))
        return ((step, u[isg]), (loops.ident[start], step, step))

    return GroupoidMap.from_functions(j2.apex, bundle.inv.apex, on_object, on_morphism,
                                      name="J2->Inv")


def equiv_to_k_comparison(x: TruncatedSimplicialGroupoid, replacement: ReedyReplacement,
                          bundle: Optional[EquivBundle] = None,
                          k_limit: Optional[WeightedLimit] = None) -> GroupoidMap:
    """Equiv(X) → K∖X̃ over X_1.

    The Linv half becomes the 2-simplex tau and the Rinv half the 2-simplex
    sigma of K; each is moved into X̃_2 by the path θ on its d_1 face.
    """
    if replacement.special_level2:
        raise PreconditionError("the comparison is built for the plain level-2 replacement")
    bundle = bundle or inv_object(x)
    xt = replacement.obj
    k_limit = k_limit or weighted_limit(shape("K"), xt)
    fz2 = replacement.factorizations[2]
    m2 = replacement.matching[2]
    x0, x1, x2 = x.levels[0], x.levels[1], x.levels[2]
    d0, d2 = x.d(2, 0), x.d(2, 2)
    e0, e1 = x.d(1, 0), x.d(1, 1)
    s0 = x.s(0, 0)

    def beta(sigma, path):
        values = {"0": x0.ident[x.face_object(sigma, 2, (0,))],
                  "1": x0.ident[x.face_object(sigma, 2, (1,))],
                  "2": x0.ident[x.face_object(sigma, 2, (2,))],
                  "01": x1.ident[d2.obj(sigma)], "12": x1.ident[d0.obj(sigma)],
                  "02": path[1]}
        return m2.family(values)

    def gamma(mu):
        v = x.face_morphism(mu, 2, (0,))
        values = {"0": v, "1": x.face_morphism(mu, 2, (1,)), "2": x.face_morphism(mu, 2, (2,)),
                  "01": d2.mor(mu), "12": d0.mor(mu), "02": s0.mor(v)}
        return m2.family(values)

    def moved(inv_obj):
        (_, sigma), path = inv_obj
        return fz2.normalize(sigma, beta(sigma, path))

    def moved_morphism(inv_mor):
        (_, mu), _ = inv_mor
        source = bundle.inv.apex.src[inv_mor]
        target = bundle.inv.apex.tgt[inv_mor]
        z, n1 = moved(source)
        _, n2 = moved(target)
        return (z, x2.compose_all(n2, mu, x2.inverse(n1)), gamma(mu))

    def on_object(a):
        first, second = a
        edge = d2.obj(first[0][1])
        return k_limit.family({
            "0": e0.obj(edge), "1": e1.obj(edge), "f": edge,
            "g": d2.obj(second[0][1]), "h": d0.obj(first[0][1]),
            "sigma": moved(second)[0], "tau": moved(first)[0]})

    def on_morphism(u):
        first, second = u
        edge = d2.mor(first[0][1])
        return k_limit.family({
            "0": e0.mor(edge), "1": e1.mor(edge), "f": edge,
            "g": d2.mor(second[0][1]), "h": d0.mor(first[0][1]),
            "sigma": moved_morphism(second), "tau": moved_morphism(first)})

    return GroupoidMap.from_functions(bundle.equiv.apex, k_limit.apex, on_object, on_morphism,
                                      name="Equiv->K")


# -- DK-equivalences ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MObject:
    """Mf = (f↓Y) ×_{Y_1} Equiv(Y) with its map to Y_0."""
    over: Limit
    apex: Limit
    to_base: GroupoidMap
    bundle: EquivBundle


def m_object(f: SimplicialGroupoidMap, bundle: Optional[EquivBundle] = None) -> MObject:
    y = f.cod
    bundle = bundle or inv_object(y)
    x0, y0 = f.dom.levels[0], y.levels[0]
    f0 = f.components[0]
    pairs_y = product(y0, y0)
    pairs_xy = product(x0, y0)
    along = product_map(f0, identity_map(y0), pairs_xy, pairs_y)
    bnd = pairing(y.d(1, 1), y.d(1, 0), pairs_y)
    over = pullback(along, bnd, name=f"{f.name}/Y")
    apex = pullback(over.right, bundle.to_edges, name=f"M({f.name})")
    to_base = GroupoidMap.from_functions(apex.apex, y0, lambda a: a[0][0][1],
                                         lambda u: u[0][0][1], name="Mf->Y0")
    return MObject(over, apex, to_base, bundle)


@dataclass(frozen=True)
class DKProfile:
    fully_faithful: bool
    essentially_surjective: bool

    @property
    def dk(self) -> bool:
        return self.fully_faithful and self.essentially_surjective

    def as_dict(self) -> Dict[str, bool]:
        return {"fully_faithful": self.fully_faithful,
                "essentially_surjective": self.essentially_surjective, "dk": self.dk}


def hom_comparison(f: SimplicialGroupoidMap) -> GroupoidMap:
    """X_1 → (f_0 × f_0)*Y_1."""
    x, y = f.dom, f.cod
    f0, f1 = f.components[0], f.components[1]
    pairs_x = product(x.levels[0], x.levels[0])
    pairs_y = product(y.levels[0], y.levels[0])
    target = pullback(product_map(f0, f0, pairs_x, pairs_y),
                      pairing(y.d(1, 1), y.d(1, 0), pairs_y))
    return GroupoidMap.from_functions(
        x.levels[1], target.apex,
        lambda e: ((x.d(1, 1).obj(e), x.d(1, 0).obj(e)), f1.obj(e)),
        lambda u: ((x.d(1, 1).mor(u), x.d(1, 0).mor(u)), f1.mor(u)),
        name="hom comparison")


def dk_classify(f: SimplicialGroupoidMap, bundle: Optional[EquivBundle] = None) -> DKProfile:
    if not sufficient_fibrancy(f.cod):
        raise PreconditionError(f"{f.cod.name} is not sufficiently fibrant")
    profile = DKProfile(is_equivalence(hom_comparison(f)),
                        is_essentially_surjective(m_object(f, bundle).to_base))
    logger.debug("DK profile of %s: %s", f.name, profile)
    return profile


@dataclass(frozen=True, eq=False)
class InducedNerveMap:
    """N(q) → N(p′) for the square actually used.

    q is p itself when the top is an isomorphism on fibers or can be replaced
    by one over the same bottom map (``retopped``); otherwise q is bottom*p′
    (``strictified``).
    """
    map: SimplicialGroupoidMap
    square: FibrationSquare
    strictified: bool
    retopped: bool = False


def _fiberwise_square(sq: FibrationSquare) -> Tuple[FibrationSquare, bool, bool]:
    if is_fiberwise_isomorphism(sq):
        return sq, False, False
    q, pulled = pullback_fibration(sq.p2, sq.bottom)
    f = over_isomorphism(sq.p, q)
    if f is not None:
        top = compose_maps(pulled.top, f)
        return FibrationSquare(sq.p, sq.p2, top, sq.bottom, name=sq.name), False, True
    logger.info("No fiberwise isomorphism onto the pullback for %s; using bottom*p'", sq.name)
    return pulled, True, False


def induced_nerve_map(sq: FibrationSquare, m: int = 3) -> InducedNerveMap:
    """The levelwise map of nerves induced by a homotopy-cartesian square.

    A square whose top is not an isomorphism on fibers gets a new top: an
    isomorphism from E onto the pullback of p′ along the bottom map, followed
    by the pullback projection. Only when no such isomorphism exists is the
    square replaced by the pullback square itself.
    """
    if not verify_homotopy_cartesian(sq):
        raise PreconditionError("induced nerve map needs a homotopy-cartesian square")
    square, strictified, retopped = _fiberwise_square(sq)
    source_fun, target_fun = fun_of(square.p), fun_of(square.p2)
    x = nerve(square.p, m, source_fun)
    y = nerve(square.p2, m, target_fun)
    f1 = fun_map(square, source_fun, target_fun)
    components = [square.bottom, f1]
    for n in range(2, m + 1):
        components.append(GroupoidMap.from_functions(
            x.levels[n], y.levels[n],
            lambda c: tuple(f1.obj(a) for a in c),
            lambda c: tuple(f1.mor(u) for u in c), name=f"N_{n}"))
    induced = SimplicialGroupoidMap(x, y, tuple(components), name=f"N({sq.name or 'sq'})")
    return InducedNerveMap(induced, square, strictified, retopped)


@dataclass(frozen=True, eq=False)
class RezkCompletion:
    completion: CompletionResult
    induced: InducedNerveMap
    replacement: ReedyReplacement
    dk_map: SimplicialGroupoidMap
    profile: DKProfile
    complete: bool

    @property
    def obj(self) -> TruncatedSimplicialGroupoid:
        return self.replacement.obj


def rezk_complete_nerve(p: Fibration, u: UniverseData, b: Optional[GroupoidMap] = None,
                        m: int = 3) -> RezkCompletion:
    """Univalent completion of p, then the nerve map into the replaced N(u(p))."""
    if b is None:
        found = classify(p, u)
        if found is None:
            raise PreconditionError(f"{p.name} is not classified by {u.name}")
        b = found[0]
    completion = univalent_complete(p, u, b)
    induced = induced_nerve_map(completion.square, m)
    replacement = reedy_replace(induced.map.cod, m)
    dk_map = compose_simplicial_maps(replacement.tau, induced.map)
    profile = dk_classify(dk_map)
    complete = is_complete(replacement.obj)
    logger.info("Rezk completion of %s: %s, complete=%s", p.name, profile.as_dict(), complete)
    return RezkCompletion(completion, induced, replacement, dk_map, profile, complete)
