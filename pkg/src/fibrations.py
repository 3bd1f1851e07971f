"""Isofibrations of finite groupoids: Fun(p), classification and univalent completion."""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations
from typing import Dict, List, Mapping, Optional, Tuple

from .budget import guard_cells, guard_search_input
from .constructions import (
    EsoFFFactorization,
    Limit,
    enumerate_functors,
    eso_ff_factorize,
    functor_label,
    natural_families,
    pullback,
    unique_map,
)
from .errors import InvalidStructureError, PreconditionError
from .groupoid import (
    FunctorProfile,
    Groupoid,
    GroupoidMap,
    Label,
    compose_maps,
    discrete,
    find_unliftable,
    full_subgroupoid,
    functor_classify,
    identity_map,
    inverse_map,
    is_equivalence,
    is_essentially_surjective,
    is_fully_faithful,
    sort_key,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Fibration:
    """An isofibration p: E → B with a fixed cleavage.

    The cleavage picks, for u: a → a' in B and x over a, the lift out of x
    with the smallest ``repr``; identities lift to identities.
    """
    map: GroupoidMap
    name: str = ""

    def __post_init__(self):
        self.map.validated()
        witness = find_unliftable(self.map)
        if witness is not None:
            raise PreconditionError(
                f"{self.name or self.map.name or 'map'} is not an isofibration: "
                f"{witness[1]!r} out of the image of {witness[0]!r} has no lift")

    @property
    def total(self) -> Groupoid:
        return self.map.dom

    @property
    def base(self) -> Groupoid:
        return self.map.cod

    @cached_property
    def profile(self) -> FunctorProfile:
        return functor_classify(self.map)

    @cached_property
    def _fibers(self) -> Dict[Label, Groupoid]:
        p, e, b = self.map, self.total, self.base
        objects: Dict[Label, List[Label]] = {a: [] for a in b.objects}
        morphisms: Dict[Label, List[Label]] = {a: [] for a in b.objects}
        for x in e.objects:
            objects[p.obj(x)].append(x)
        for m in e.morphisms:
            u = p.mor(m)
            if b.is_identity(u):
                morphisms[b.src[u]].append(m)
        return {
            a: Groupoid.build(
                objects[a], morphisms[a],
                {m: e.src[m] for m in morphisms[a]}, {m: e.tgt[m] for m in morphisms[a]},
                {x: e.ident[x] for x in objects[a]}, e.composer,
                inv={m: e.inv[m] for m in morphisms[a]}, name=f"{self.name or e.name}_{a}")
            for a in b.objects
        }

    def fiber(self, a: Label) -> Groupoid:
        return self._fibers[a]

    @cached_property
    def _lifts(self) -> Dict[Tuple[Label, Label], Label]:
        p, e, b = self.map, self.total, self.base
        lifts: Dict[Tuple[Label, Label], Label] = {}
        for x in e.objects:
            for m in e.out_of(x):
                key = (p.mor(m), x)
                current = lifts.get(key)
                if current is None or sort_key(m) < sort_key(current):
                    lifts[key] = m
            lifts[(b.ident[p.obj(x)], x)] = e.ident[x]
        return lifts

    def lift(self, u: Label, x: Label) -> Label:
        return self._lifts[(u, x)]

    def transport(self, u: Label) -> GroupoidMap:
        """The functor ℓ_u: E_a → E_a' induced by the cleavage."""
        e, b = self.total, self.base
        dom, cod = self.fiber(b.src[u]), self.fiber(b.tgt[u])
        return GroupoidMap.from_functions(
            dom, cod,
            lambda x: e.tgt[self.lift(u, x)],
            lambda m: e.conjugate(m, self.lift(u, e.tgt[m]), self.lift(u, e.src[m])),
            name=f"transport_{u}")

    def __repr__(self) -> str:
        return f"Fibration({self.name or '?'}: {self.total.name} -> {self.base.name})"


@dataclass(frozen=True, eq=False)
class FibrationSquare:
    """p′∘top = bottom∘p, strictly."""
    p: Fibration
    p2: Fibration
    top: GroupoidMap
    bottom: GroupoidMap
    name: str = ""

    def __post_init__(self):
        if self.top.dom is not self.p.total or self.top.cod is not self.p2.total:
            raise PreconditionError("square: top does not connect the total groupoids")
        if self.bottom.dom is not self.p.base or self.bottom.cod is not self.p2.base:
            raise PreconditionError("square: bottom does not connect the bases")
        for x in self.p.total.objects:
            if self.p2.map.obj(self.top.obj(x)) != self.bottom.obj(self.p.map.obj(x)):
                raise InvalidStructureError(f"square does not commute at object {x!r}")
        for m in self.p.total.morphisms:
            if self.p2.map.mor(self.top.mor(m)) != self.bottom.mor(self.p.map.mor(m)):
                raise InvalidStructureError(f"square does not commute at morphism {m!r}")


@dataclass(frozen=True, eq=False)
class UniverseData:
    pi: Fibration
    name: str = ""


# -- constructors ------------------------------------------------------------

def grothendieck(base: Groupoid, assignment: Mapping[Label, Groupoid],
                 action: Mapping[Label, GroupoidMap], name: str = "") -> Fibration:
    """Total groupoid of a strict functor base → groupoids given on generators.

    Objects are (b, x) with x in assignment[b]; a morphism (u, φ) goes from
    (b, x) to (b', x') where φ: action[u](x) → x' lies in assignment[b'].
    """
    for b in base.objects:
        if b not in assignment:
            raise PreconditionError(f"no fiber assigned to {b!r}")
    act: Dict[Label, GroupoidMap] = {base.ident[b]: identity_map(assignment[b])
                                     for b in base.objects}
    steps: Dict[Label, GroupoidMap] = {}
    for u, f in action.items():
        if f.dom is not assignment[base.src[u]] or f.cod is not assignment[base.tgt[u]]:
            raise InvalidStructureError(f"action of {u!r} has the wrong fibers")
        f.validated()
        steps[u] = f
        steps.setdefault(base.inverse(u), inverse_map(f))

    def same(f: GroupoidMap, g: GroupoidMap) -> bool:
        return dict(f.on_objects) == dict(g.on_objects) and dict(f.on_morphisms) == dict(g.on_morphisms)

    queue = list(act)
    while queue:
        w = queue.pop(0)
        for g, step in steps.items():
            if base.src[g] != base.tgt[w]:
                continue
            h = base.compose(g, w)
            composite = compose_maps(step, act[w])
            if h in act:
                if not same(act[h], composite):
                    raise InvalidStructureError(
                        f"action not functorial: {g!r} after {w!r} disagrees with {h!r}")
            else:
                act[h] = composite
                queue.append(h)
    missing = [u for u in base.morphisms if u not in act]
    if missing:
        raise InvalidStructureError(f"action does not generate morphism {missing[0]!r}")

    back = {u: {y: x for x, y in act[u].on_objects.items()} for u in base.morphisms}
    objects = [(b, x) for b in base.objects for x in assignment[b].objects]
    label = name or f"int({base.name})"
    guard_cells(label, len(objects) + sum(
        len(assignment[base.tgt[u]].morphisms) for u in base.morphisms))
    morphisms, src, tgt = [], {}, {}
    for u in base.morphisms:
        fiber = assignment[base.tgt[u]]
        for phi in fiber.morphisms:
            m = (u, phi)
            morphisms.append(m)
            src[m] = (base.src[u], back[u][fiber.src[phi]])
            tgt[m] = (base.tgt[u], fiber.tgt[phi])

    def composer(g, f):
        if tgt[f] != src[g]:
            return None
        fiber = assignment[base.tgt[g[0]]]
        return (base.compose(g[0], f[0]), fiber.compose(g[1], act[g[0]].mor(f[1])))

    def inverse(m):
        u, phi = m
        u_inv = base.inverse(u)
        return (u_inv, act[u_inv].mor(assignment[base.tgt[u]].inverse(phi)))

    total = Groupoid.build(
        objects, morphisms, src, tgt,
        {(b, x): (base.ident[b], assignment[b].ident[x]) for b, x in objects},
        composer, inv={m: inverse(m) for m in morphisms}, name=label)
    projection = GroupoidMap.from_functions(total, base, lambda x: x[0], lambda m: m[0],
                                            name=f"p_{label}")
    return Fibration(projection, name=name or label)


def identity_fibration(b: Groupoid) -> Fibration:
    return Fibration(identity_map(b), name=f"id_{b.name}")


def terminal_fibration(e: Groupoid) -> Fibration:
    return Fibration(unique_map(e), name=f"{e.name}->1")


def set_universe(n: int) -> UniverseData:
    """Finite sets of size ≤ n: base objects "0".."n" with symmetric groups.

    A morphism of size k is labelled "k:" followed by the permutation's images;
    the fiber over k is discrete(k).
    """
    objects = [str(k) for k in range(n + 1)]
    perms = {k: [tuple(p) for p in permutations(range(k))] for k in range(n + 1)}

    def label(k, p):
        return f"{k}:" + "".join(str(i) for i in p)

    morphisms = {label(k, p): (str(k), str(k)) for k in range(n + 1) for p in perms[k]}
    comp = {}
    for k in range(n + 1):
        for p in perms[k]:
            for q in perms[k]:
                comp[(label(k, q), label(k, p))] = label(k, tuple(q[p[i]] for i in range(k)))
    ident = {str(k): label(k, tuple(range(k))) for k in range(n + 1)}
    base = Groupoid.from_tables(objects, morphisms, ident, comp, name=f"U{n}")
    fibers = {str(k): discrete(k, name=f"[{k}]") for k in range(n + 1)}
    action = {}
    for k in range(n + 1):
        fiber = fibers[str(k)]
        for p in perms[k]:
            action[label(k, p)] = GroupoidMap.from_functions(
                fiber, fiber, lambda x, p=p: str(p[int(x)]), lambda m, p=p: f"id_{p[int(m[3:])]}",
                name=label(k, p))
    pi = grothendieck(base, fibers, action, name=f"pi_U{n}")
    return UniverseData(pi, name=f"U{n}")



# -- Fun(p) ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class InternalCategory:
    """Fun(p) over B with source, target, identities and composition.

    Objects of ``arrows`` are (a, b, F) with F a functor label E_a → E_b. A
    morphism (x, y, u, v, φ) lists φ_z: F(z) → F′(ℓ_u z), lying over v, for z
    in the object order of E_a.
    """
    fibration: Fibration
    arrows: Groupoid
    base: Groupoid
    s: GroupoidMap
    t: GroupoidMap
    r: GroupoidMap
    composable: Limit
    mu: GroupoidMap
    functors: Mapping[Tuple[Label, Label, Label], GroupoidMap] = field(repr=False)

    def functor(self, obj: Tuple[Label, Label, Label]) -> GroupoidMap:
        return self.functors[obj]

    def component(self, m, z: Label) -> Label:
        return m[4][self.functors[m[0]].dom.object_position[z]]


def fun_of(p: Fibration) -> InternalCategory:
    e, b = p.total, p.base
    functors: Dict[Tuple[Label, Label, Label], GroupoidMap] = {}
    by_pair: Dict[Tuple[Label, Label], List[Tuple[Label, Label, Label]]] = {}
    for a in b.objects:
        for c in b.objects:
            by_pair[(a, c)] = []
            for f in enumerate_functors(p.fiber(a), p.fiber(c)):
                key = (a, c, functor_label(f))
                functors[key] = f
                by_pair[(a, c)].append(key)
    objects = [key for keys in by_pair.values() for key in keys]
    transports = {u: p.transport(u) for u in b.morphisms}

    def component(m, z):
        return m[4][functors[m[0]].dom.object_position[z]]

    morphisms, src, tgt = [], {}, {}
    for x in objects:
        a, c, _ = x
        f = functors[x]
        for u in b.out_of(a):
            ell = transports[u]
            for v in b.out_of(c):
                for y in by_pair[(b.tgt[u], b.tgt[v])]:
                    g = functors[y]
                    families = natural_families(
                        f.dom, f.obj, f.mor,
                        lambda z, g=g, ell=ell: g.obj(ell.obj(z)),
                        lambda m, g=g, ell=ell: g.mor(ell.mor(m)),
                        e, admissible=lambda z, phi, v=v: p.map.mor(phi) == v)
                    for family in families:
                        m = (x, y, u, v, tuple(family[z] for z in f.dom.objects))
                        morphisms.append(m)
                        src[m] = x
                        tgt[m] = y
        guard_cells(f"Fun({p.name})", len(objects) + len(morphisms))

    def composer(g, f):
        if tgt[f] != g[0]:
            return None
        x, _, u, v, _ = f
        _, y2, u2, v2, _ = g
        h = functors[y2]
        uu = b.compose(u2, u)
        chi = []
        for z in functors[x].dom.objects:
            lz = transports[u].obj(z)
            # c: ℓ_u2(ℓ_u z) → ℓ_(u2 u)(z) inside the fiber
            c = e.compose(p.lift(uu, z), e.inverse(e.compose(p.lift(u2, lz), p.lift(u, z))))
            chi.append(e.compose_all(h.mor(c), component(g, lz), component(f, z)))
        return (x, y2, uu, b.compose(v2, v), tuple(chi))

    def identity(x):
        f = functors[x]
        return (x, x, b.ident[x[0]], b.ident[x[1]],
                tuple(e.ident[f.obj(z)] for z in f.dom.objects))

    arrows = Groupoid.build(objects, morphisms, src, tgt, {x: identity(x) for x in objects},
                            composer, name=f"Fun({p.name})")
    logger.debug("Fun(%s): %d objects, %d morphisms", p.name, len(objects), len(morphisms))

    s = GroupoidMap.from_functions(arrows, b, lambda x: x[0], lambda m: m[2], name="s")
    t = GroupoidMap.from_functions(arrows, b, lambda x: x[1], lambda m: m[3], name="t")

    def identity_functor(a):
        fiber = p.fiber(a)
        return (a, a, (tuple(fiber.objects), tuple(fiber.morphisms)))

    def r_mor(u):
        fiber = p.fiber(b.src[u])
        return (identity_functor(b.src[u]), identity_functor(b.tgt[u]), u, u,
                tuple(p.lift(u, z) for z in fiber.objects))

    r = GroupoidMap.from_functions(b, arrows, identity_functor, r_mor, name="r")
    composable = pullback(t, s, name=f"Fun({p.name}) x_B Fun({p.name})")

    def mu_obj(pair):
        first, second = pair
        f, g = functors[first], functors[second]
        return (first[0], second[1], (tuple(g.obj(f.obj(z)) for z in f.dom.objects),
                                      tuple(g.mor(f.mor(m)) for m in f.dom.morphisms)))

    def mu_mor(pair):
        m1, m2 = pair
        x, y, u, v, _ = m1
        g2 = functors[m2[1]]
        f = functors[x]
        chi = []
        for z in f.dom.objects:
            fz = f.obj(z)
            delta = e.compose(component(m1, z), e.inverse(p.lift(v, fz)))
            chi.append(e.compose(g2.mor(delta), component(m2, fz)))
        return (mu_obj((x, m2[0])), mu_obj((y, m2[1])), u, m2[3], tuple(chi))

    mu = GroupoidMap.from_functions(composable.apex, arrows, mu_obj, mu_mor, name="mu")
    return InternalCategory(p, arrows, b, s, t, r, composable, mu, functors)


def fiber_of_endpoints(fun: InternalCategory, a: Label, c: Label) -> Groupoid:
    """Strict fiber of (s, t) over (a, c)."""
    arrows, b = fun.arrows, fun.base
    objects = [x for x in arrows.objects if x[0] == a and x[1] == c]
    morphisms = [m for m in arrows.morphisms
                 if m[0][:2] == (a, c) and m[2] == b.ident[a] and m[3] == b.ident[c]]
    return Groupoid.build(
        objects, morphisms,
        {m: arrows.src[m] for m in morphisms}, {m: arrows.tgt[m] for m in morphisms},
        {x: arrows.ident[x] for x in objects}, arrows.composer,
        inv={m: arrows.inv[m] for m in morphisms}, name=f"Fun_{a},{c}")


def fiber_to_hom(fun: InternalCategory, a: Label, c: Label, hom: Groupoid) -> GroupoidMap:
    """Relabel the strict fiber over (a, c) into hom_groupoid(E_a, E_c)."""
    fiber = fiber_of_endpoints(fun, a, c)
    return GroupoidMap.from_functions(
        fiber, hom, lambda x: x[2], lambda m: (m[0][2], m[1][2], m[4]),
        name=f"Fun_{a},{c} -> hom")


def equivalence_subgroupoid(fun: InternalCategory) -> Groupoid:
    """Eq(p): the full subgroupoid of Fun(p) on fiber functors that are equivalences."""
    keep = [x for x in fun.arrows.objects if is_equivalence(fun.functor(x))]
    return full_subgroupoid(fun.arrows, keep, name=f"Eq({fun.fibration.name})")


def univalence_oracle(p: Fibration, fun: Optional[InternalCategory] = None) -> bool:
    """r: B → Eq(p) is fully faithful and essentially surjective."""
    return univalence_witness(p, fun) is None


def univalence_witness(p: Fibration, fun: Optional[InternalCategory] = None) -> Optional[dict]:
    """Why r: B → Eq(p) fails to be an equivalence, or None when it is one."""
    fun = fun or fun_of(p)
    eq = equivalence_subgroupoid(fun)
    r = GroupoidMap(fun.base, eq, fun.r.on_objects, fun.r.on_morphisms, name="r")
    if not is_fully_faithful(r):
        for comp in fun.base.components:
            x = comp[0]
            if len(eq.automorphisms(r.obj(x))) != len(fun.base.automorphisms(x)):
                return {"kind": "not_full", "base_object": x, "equivalence": r.obj(x)}
        return {"kind": "not_full"}
    hit = {eq.component_index[r.obj(x)] for x in fun.base.objects}
    for comp in eq.components:
        if eq.component_index[comp[0]] not in hit:
            return {"kind": "not_hit", "equivalence": comp[0]}
    return None


def is_univalent_fibration(p: Fibration, oracle: bool = False) -> bool:
    """Univalence of p, decided through the nerve; ``oracle`` cross-checks via Eq(p)."""
    from .segal import is_univalent_segal, nerve

    verdict = is_univalent_segal(nerve(p, 2))
    if oracle:
        direct = univalence_oracle(p)
        if direct != verdict:
            raise InvalidStructureError(
                f"univalence routes disagree for {p.name}: nerve={verdict}, oracle={direct}")
    logger.info("Fibration %s univalent: %s", p.name, verdict)
    return verdict


# -- squares -----------------------------------------------------------------

def pullback_fibration(p: Fibration, f: GroupoidMap) -> Tuple[Fibration, FibrationSquare]:
    if f.cod is not p.base:
        raise PreconditionError("pullback_fibration: map does not land in the base of p")
    limit = pullback(f, p.map, name=f"{f.dom.name} x_{p.base.name} {p.total.name}")
    q = Fibration(limit.left, name=f"{f.name or 'f'}*{p.name}")
    return q, FibrationSquare(q, p, limit.right, f)


def comparison_map(sq: FibrationSquare) -> GroupoidMap:
    """dom(p) → bottom*dom(p′), x ↦ (p x, top x)."""
    target = pullback(sq.bottom, sq.p2.map)
    return GroupoidMap.from_functions(
        sq.p.total, target.apex,
        lambda x: (sq.p.map.obj(x), sq.top.obj(x)),
        lambda m: (sq.p.map.mor(m), sq.top.mor(m)),
        name="comparison")


def verify_homotopy_cartesian(sq: FibrationSquare) -> bool:
    return is_equivalence(comparison_map(sq))


def is_bm_equivalence(sq: FibrationSquare) -> bool:
    return verify_homotopy_cartesian(sq) and is_essentially_surjective(sq.bottom)


def identity_square(p: Fibration) -> FibrationSquare:
    return FibrationSquare(p, p, identity_map(p.total), identity_map(p.base))


def is_fiberwise_isomorphism(sq: FibrationSquare) -> bool:
    """top restricts to a bijection E_a → E′_(bottom a) on every fiber."""
    for a in sq.p.base.objects:
        fiber, target = sq.p.fiber(a), sq.p2.fiber(sq.bottom.obj(a))
        objects = {sq.top.obj(x) for x in fiber.objects}
        morphisms = {sq.top.mor(m) for m in fiber.morphisms}
        if len(objects) != len(fiber.objects) or objects != target.object_set:
            return False
        if len(morphisms) != len(fiber.morphisms) or morphisms != target.morphism_set:
            return False
    return True


def fun_map(sq: FibrationSquare, source: Optional[InternalCategory] = None,
            target: Optional[InternalCategory] = None) -> GroupoidMap:
    """Fun(p) → Fun(p′) for a square whose top is an isomorphism on fibers.

    A functor F: E_a → E_c goes to top∘F∘top⁻¹; components are moved to the
    cleavage of p′ by the fiber isomorphism between the two chosen lifts.
    """
    if not is_fiberwise_isomorphism(sq):
        raise PreconditionError("fun_map needs a square that is an isomorphism on fibers")
    source = source or fun_of(sq.p)
    target = target or fun_of(sq.p2)
    p, p2, top, bottom = sq.p, sq.p2, sq.top, sq.bottom
    e2 = p2.total
    back = {}
    for a in p.base.objects:
        back[a] = {top.obj(x): x for x in p.fiber(a).objects}
        back[a].update({top.mor(m): m for m in p.fiber(a).morphisms})

    def image_label(x):
        a, c, _ = x
        f = source.functor(x)
        fiber = p2.fiber(bottom.obj(a))
        return (bottom.obj(a), bottom.obj(c), (
            tuple(top.obj(f.obj(back[a][y])) for y in fiber.objects),
            tuple(top.mor(f.mor(back[a][m])) for m in fiber.morphisms)))

    def image_morphism(m):
        x, y, u, v, _ = m
        a = x[0]
        target_y = image_label(y)
        g2 = target.functor(target_y)
        iu = bottom.mor(u)
        chi = []
        for w in p2.fiber(bottom.obj(a)).objects:
            z = back[a][w]
            raw = top.mor(source.component(m, z))
            c = e2.compose(p2.lift(iu, w), e2.inverse(top.mor(p.lift(u, z))))
            chi.append(e2.compose(g2.mor(c), raw))
        return (image_label(x), target_y, iu, bottom.mor(v), tuple(chi))

    return GroupoidMap.from_functions(source.arrows, target.arrows, image_label,
                                      image_morphism, name=f"Fun({sq.name or 'sq'})")


# -- classification and completion -------------------------------------------

def _bijective(f: GroupoidMap) -> bool:
    return len(set(f.on_objects.values())) == len(f.cod.objects) and \
        len(set(f.on_morphisms.values())) == len(f.cod.morphisms)


def _over_equivalence(p: Fibration, q: Fibration) -> Optional[GroupoidMap]:
    """A functor E → E_q over the bases that is an equivalence.

    An isomorphism is returned when one exists; otherwise the first
    equivalence in enumeration order.
    """
    guard_search_input(f"classifier domain {p.name}", len(p.total.objects), len(p.total.morphisms))
    same_size = len(p.total.objects) == len(q.total.objects) and \
        len(p.total.morphisms) == len(q.total.morphisms)
    first = None
    for f in enumerate_functors(p.total, q.total, over=(p.map, q.map)):
        if same_size and _bijective(f):
            return f
        if first is None and is_equivalence(f):
            if not same_size:
                return f
            first = f
    return first


def over_isomorphism(p: Fibration, q: Fibration) -> Optional[GroupoidMap]:
    """An isomorphism E → E_q commuting with the projections, if any."""
    f = _over_equivalence(p, q)
    return f if f is not None and _bijective(f) and \
        len(f.dom.objects) == len(f.cod.objects) else None


def classifying_square(p: Fibration, u: UniverseData, b: GroupoidMap) -> Optional[FibrationSquare]:
    """A homotopy-cartesian square from p to π with bottom b, if one exists."""
    pi = u.pi
    if b.dom is not p.base or b.cod is not pi.base:
        raise PreconditionError("classifying map must go from the base of p to the universe")
    from .constructions import are_equivalent

    for comp in p.base.components:
        if not are_equivalent(p.fiber(comp[0]), pi.fiber(b.obj(comp[0]))):
            return None
    q, pulled = pullback_fibration(pi, b)
    f = _over_equivalence(p, q)
    if f is None:
        return None
    return FibrationSquare(p, pi, compose_maps(pulled.top, f), b, name="classifying")


def classify(p: Fibration, u: UniverseData) -> Optional[Tuple[GroupoidMap, FibrationSquare]]:
    """First classifying map cod(p) → U (in enumeration order) with its square."""
    guard_search_input(f"base {p.base.name}", len(p.base.objects), len(p.base.morphisms))
    guard_search_input(f"universe {u.name}", len(u.pi.base.objects), len(u.pi.base.morphisms))
    for b in enumerate_functors(p.base, u.pi.base):
        square = classifying_square(p, u, b)
        if square is not None:
            logger.info("Classified %s into %s", p.name, u.name)
            return b, square
    logger.info("No classifying map for %s into %s", p.name, u.name)
    return None


@dataclass(frozen=True, eq=False)
class CompletionResult:
    """Univalent completion p → up over the eso part of the classifying map."""
    up: Fibration
    square: FibrationSquare
    factorization: EsoFFFactorization
    classifying: FibrationSquare

    @property
    def iota(self) -> GroupoidMap:
        return self.square.bottom


def univalent_complete(p: Fibration, u: UniverseData, b: GroupoidMap) -> CompletionResult:
    classifying = classifying_square(p, u, b)
    if classifying is None:
        raise PreconditionError(
            f"{b.name or 'b'} does not classify {p.name}: no homotopy-cartesian square")
    fz = eso_ff_factorize(b)
    up, _ = pullback_fibration(u.pi, fz.m)
    e = fz.e
    top = GroupoidMap.from_functions(
        p.total, up.total,
        lambda x: (e.obj(p.map.obj(x)), classifying.top.obj(x)),
        lambda m: (e.mor(p.map.mor(m)), classifying.top.mor(m)),
        name="top")
    square = FibrationSquare(p, up, top, e, name="completion")
    logger.info("Completed %s: base %d -> %d objects", p.name,
                len(p.base.objects), len(up.base.objects))
    return CompletionResult(up, square, fz, classifying)
