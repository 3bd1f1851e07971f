"""Finite limits, path objects, factorizations and functor groupoids."""

import logging
from dataclasses import dataclass
from itertools import product as cartesian
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .budget import guard_candidates, guard_cells, guard_search_input
from .errors import PreconditionError
from .groupoid import (
    Groupoid,
    GroupoidMap,
    Label,
    NatIso,
    compose_maps,
    discrete,
    is_isofibration,
    sort_key,
    terminal,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Limit:
    """Apex of a strict limit together with its legs."""
    apex: Groupoid
    legs: Tuple[GroupoidMap, ...]

    @property
    def left(self) -> GroupoidMap:
        return self.legs[0]

    @property
    def right(self) -> GroupoidMap:
        return self.legs[1]


def _pair_composer(a: Groupoid, b: Groupoid):
    def composer(g, f):
        first = a.composer(g[0], f[0])
        second = b.composer(g[1], f[1])
        if first is None or second is None:
            return None
        return (first, second)
    return composer


def pullback(f: GroupoidMap, g: GroupoidMap, name: str = "") -> Limit:
    """Strict pullback of f: A → C and g: B → C; labels are pairs (a, b)."""
    if f.cod is not g.cod:
        raise PreconditionError(
            f"pullback needs maps into the same groupoid, got {f.cod.name} and {g.cod.name}")
    a, b = f.dom, g.dom
    objects_over: Dict[Label, List[Label]] = {}
    for y in b.objects:
        objects_over.setdefault(g.obj(y), []).append(y)
    morphisms_over: Dict[Label, List[Label]] = {}
    for v in b.morphisms:
        morphisms_over.setdefault(g.mor(v), []).append(v)
    label = name or f"{a.name} x_{f.cod.name} {b.name}"
    guard_cells(label, sum(len(objects_over.get(f.obj(x), ())) for x in a.objects)
                + sum(len(morphisms_over.get(f.mor(u), ())) for u in a.morphisms))
    objects = [(x, y) for x in a.objects for y in objects_over.get(f.obj(x), ())]
    morphisms = [(u, v) for u in a.morphisms for v in morphisms_over.get(f.mor(u), ())]
    apex = Groupoid.build(
        objects, morphisms,
        {m: (a.src[m[0]], b.src[m[1]]) for m in morphisms},
        {m: (a.tgt[m[0]], b.tgt[m[1]]) for m in morphisms},
        {x: (a.ident[x[0]], b.ident[x[1]]) for x in objects},
        _pair_composer(a, b),
        inv={m: (a.inv[m[0]], b.inv[m[1]]) for m in morphisms},
        name=label,
    )
    return Limit(apex, (_projection(apex, a, 0), _projection(apex, b, 1)))


def _projection(apex: Groupoid, factor: Groupoid, index: int) -> GroupoidMap:
    return GroupoidMap(apex, factor,
                       {x: x[index] for x in apex.objects},
                       {m: m[index] for m in apex.morphisms},
                       name=f"pr{index + 1}")


def product(a: Groupoid, b: Groupoid, name: str = "") -> Limit:
    label = name or f"{a.name} x {b.name}"
    guard_cells(label, len(a.objects) * len(b.objects) + len(a.morphisms) * len(b.morphisms))
    objects = [(x, y) for x in a.objects for y in b.objects]
    morphisms = [(u, v) for u in a.morphisms for v in b.morphisms]
    apex = Groupoid.build(
        objects, morphisms,
        {m: (a.src[m[0]], b.src[m[1]]) for m in morphisms},
        {m: (a.tgt[m[0]], b.tgt[m[1]]) for m in morphisms},
        {x: (a.ident[x[0]], b.ident[x[1]]) for x in objects},
        _pair_composer(a, b),
        inv={m: (a.inv[m[0]], b.inv[m[1]]) for m in morphisms},
        name=label,
    )
    return Limit(apex, (_projection(apex, a, 0), _projection(apex, b, 1)))


def pairing(f: GroupoidMap, g: GroupoidMap, target: Limit) -> GroupoidMap:
    """The map (f, g) into a product or pullback apex whose labels are pairs."""
    return GroupoidMap(
        f.dom, target.apex,
        {x: (f.obj(x), g.obj(x)) for x in f.dom.objects},
        {m: (f.mor(m), g.mor(m)) for m in f.dom.morphisms},
        name=f"({f.name}, {g.name})",
    )


def product_map(f: GroupoidMap, g: GroupoidMap, dom: Limit, cod: Limit) -> GroupoidMap:
    """f × g between pair-labelled limits."""
    return GroupoidMap(
        dom.apex, cod.apex,
        {x: (f.obj(x[0]), g.obj(x[1])) for x in dom.apex.objects},
        {m: (f.mor(m[0]), g.mor(m[1])) for m in dom.apex.morphisms},
        name=f"{f.name} x {g.name}",
    )


def equalizer(f: GroupoidMap, g: GroupoidMap, name: str = "") -> Limit:
    if f.dom is not g.dom or f.cod is not g.cod:
        raise PreconditionError("equalizer needs parallel functors")
    a = f.dom
    objects = [x for x in a.objects if f.obj(x) == g.obj(x)]
    morphisms = [m for m in a.morphisms if f.mor(m) == g.mor(m)]
    apex = Groupoid.build(
        objects, morphisms,
        {m: a.src[m] for m in morphisms}, {m: a.tgt[m] for m in morphisms},
        {x: a.ident[x] for x in objects}, a.composer,
        inv={m: a.inv[m] for m in morphisms},
        name=name or f"Eq({f.name}, {g.name})",
    )
    inclusion = GroupoidMap(apex, a, {x: x for x in objects}, {m: m for m in morphisms},
                            name="incl")
    return Limit(apex, (inclusion,))


def unique_map(a: Groupoid, point: Optional[Groupoid] = None) -> GroupoidMap:
    point = point or terminal()
    (star,) = point.objects
    return GroupoidMap(a, point, {x: star for x in a.objects},
                       {m: point.ident[star] for m in a.morphisms}, name="!")


# -- path objects ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PathObject:
    """Objects are morphisms θ; a morphism (θ, a, b): θ → bθa⁻¹ is a commuting square."""
    apex: Groupoid
    base: Groupoid
    r: GroupoidMap
    source: GroupoidMap
    target: GroupoidMap
    boundary: GroupoidMap
    ends: Limit


def _square_groupoid(e: Groupoid, keep: Callable[[Label], bool],
                     admissible: Callable[[Label, Label], bool], name: str) -> Groupoid:
    objects = [t for t in e.morphisms if keep(t)]
    guard_cells(name, len(objects) + sum(
        len(e.out_of(e.src[t])) * len(e.out_of(e.tgt[t])) for t in objects))
    morphisms, src, tgt = [], {}, {}
    for t in objects:
        for a in e.out_of(e.src[t]):
            for b in e.out_of(e.tgt[t]):
                if not admissible(a, b):
                    continue
                m = (t, a, b)
                morphisms.append(m)
                src[m] = t
                tgt[m] = e.conjugate(t, b, a)

    def composer(g, f):
        if tgt[f] != g[0]:
            return None
        return (f[0], e.compose(g[1], f[1]), e.compose(g[2], f[2]))

    return Groupoid.build(
        objects, morphisms, src, tgt,
        {t: (t, e.ident[e.src[t]], e.ident[e.tgt[t]]) for t in objects},
        composer,
        inv={m: (tgt[m], e.inverse(m[1]), e.inverse(m[2])) for m in morphisms},
        name=name,
    )


def _path_legs(e: Groupoid, apex: Groupoid, ends: Limit) -> Tuple[GroupoidMap, ...]:
    r = GroupoidMap.from_functions(
        e, apex, lambda x: e.ident[x], lambda u: (e.ident[e.src[u]], u, u), name="r")
    source = GroupoidMap.from_functions(apex, e, lambda t: e.src[t], lambda m: m[1], name="s")
    target = GroupoidMap.from_functions(apex, e, lambda t: e.tgt[t], lambda m: m[2], name="t")
    boundary = GroupoidMap.from_functions(
        apex, ends.apex, lambda t: (e.src[t], e.tgt[t]), lambda m: (m[1], m[2]),
        name="boundary")
    return r, source, target, boundary


def path_object(b: Groupoid) -> PathObject:
    apex = _square_groupoid(b, lambda t: True, lambda x, y: True, name=f"P({b.name})")
    ends = product(b, b)
    r, source, target, boundary = _path_legs(b, apex, ends)
    return PathObject(apex, b, r, source, target, boundary, ends)


def fiberwise_path_object(q: GroupoidMap, base: Optional[Groupoid] = None) -> PathObject:
    """Path object of dom(q) relative to q: paths lying over identities of the base."""
    if base is not None and base is not q.cod:
        raise PreconditionError("fiberwise path object: base is not the codomain of q")
    if not is_isofibration(q):
        raise PreconditionError(f"{q.name or 'q'} is not an isofibration")
    e = q.dom
    apex = _square_groupoid(
        e, lambda t: q.cod.is_identity(q.mor(t)), lambda x, y: q.mor(x) == q.mor(y),
        name=f"P_{q.cod.name}({e.name})")
    ends = pullback(q, q)
    r, source, target, boundary = _path_legs(e, apex, ends)
    return PathObject(apex, e, r, source, target, boundary, ends)


# -- factorizations --------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Factorization:
    """f = q ∘ j with j an equivalence injective on objects and q an isofibration.

    Objects of ``middle`` are pairs (a, β: f(a) → b); a morphism
    ((a, β), α, γ) goes to (tgt α, γ∘β∘f(α)⁻¹).
    """
    f: GroupoidMap
    middle: Groupoid
    j: GroupoidMap
    q: GroupoidMap
    reduced: bool
    _reps: Dict[Tuple[Label, Label], Label]

    def representative(self, a: Label, beta: Label) -> Label:
        if not self.reduced:
            return beta
        return self._reps[(a, beta)]

    def normalize(self, a: Label, beta: Label) -> Tuple[Tuple[Label, Label], Label]:
        """The middle object representing (a, β) and α with f(α) = ρ⁻¹∘β.

        In the iso-comma, ((a, β), α, id) connects (a, β) to the returned
        representative (a, ρ).
        """
        dom, cod = self.f.dom, self.f.cod
        rho = self.representative(a, beta)
        if rho == beta:
            return (a, rho), dom.ident[a]
        wanted = cod.compose(cod.inverse(rho), beta)
        for alpha in dom.automorphisms(a):
            if self.f.mor(alpha) == wanted:
                return (a, rho), alpha
        raise PreconditionError(f"no normalizing automorphism for ({a!r}, {beta!r})")


def _coset_representatives(f: GroupoidMap) -> Dict[Tuple[Label, Label], Label]:
    dom, cod = f.dom, f.cod
    reps: Dict[Tuple[Label, Label], Label] = {}
    for a in dom.objects:
        fa = f.obj(a)
        image = {f.mor(alpha) for alpha in dom.automorphisms(a)}
        for beta in cod.out_of(fa):
            if (a, beta) in reps:
                continue
            coset = [cod.compose(beta, h) for h in image]
            if cod.ident[fa] in coset:
                rho = cod.ident[fa]
            else:
                rho = min(coset, key=sort_key)
            for other in coset:
                reps[(a, other)] = rho
    return reps


def factorize(f: GroupoidMap, reduced: bool = False) -> Factorization:
    """Mapping-path factorization through the iso-comma A ×_B PB.

    With ``reduced`` the middle groupoid is the full subgroupoid on one
    representative per coset Hom(f a, b)/f(Aut a); (a, id) is always kept.
    """
    a_, b_ = f.dom, f.cod
    reps = _coset_representatives(f) if reduced else {}
    objects = [(a, beta) for a in a_.objects for beta in b_.out_of(f.obj(a))
               if not reduced or reps[(a, beta)] == beta]
    object_set = set(objects)
    name = f"{a_.name} x_{b_.name} P{b_.name}" + ("~" if reduced else "")
    guard_cells(name, len(objects) + sum(
        len(a_.out_of(a)) * len(b_.out_of(b_.tgt[beta])) for a, beta in objects))
    morphisms, src, tgt = [], {}, {}
    for x in objects:
        a, beta = x
        for alpha in a_.out_of(a):
            f_alpha_inv = b_.inverse(f.mor(alpha))
            for gamma in b_.out_of(b_.tgt[beta]):
                y = (a_.tgt[alpha], b_.compose_all(gamma, beta, f_alpha_inv))
                if reduced and y not in object_set:
                    continue
                m = (x, alpha, gamma)
                morphisms.append(m)
                src[m] = x
                tgt[m] = y

    def composer(g, h):
        if tgt[h] != g[0]:
            return None
        return (h[0], a_.compose(g[1], h[1]), b_.compose(g[2], h[2]))

    middle = Groupoid.build(
        objects, morphisms, src, tgt,
        {x: (x, a_.ident[x[0]], b_.ident[b_.tgt[x[1]]]) for x in objects},
        composer,
        inv={m: (tgt[m], a_.inverse(m[1]), b_.inverse(m[2])) for m in morphisms},
        name=name,
    )
    j = GroupoidMap.from_functions(
        a_, middle,
        lambda a: (a, b_.ident[f.obj(a)]),
        lambda alpha: ((a_.src[alpha], b_.ident[f.obj(a_.src[alpha])]), alpha, f.mor(alpha)),
        name="j")
    q = GroupoidMap.from_functions(
        middle, b_, lambda x: b_.tgt[x[1]], lambda m: m[2], name="q")
    return Factorization(f, middle, j, q, reduced, reps)


@dataclass(frozen=True, eq=False)
class EsoFFFactorization:
    """f = m ∘ e with e essentially surjective and m a fully faithful isofibration."""
    image: Groupoid
    middle: Groupoid
    e: GroupoidMap
    m: GroupoidMap
    factorization: Factorization


def full_image(f: GroupoidMap) -> Tuple[Groupoid, GroupoidMap, GroupoidMap]:
    """Objects of dom(f) with the hom-sets of cod(f); returns (I, e0, i)."""
    a_, b_ = f.dom, f.cod
    pairs = [(x, y) for x in a_.objects for y in a_.objects]
    guard_cells(f"im({f.name})", len(a_.objects)
                + sum(len(b_.hom(f.obj(x), f.obj(y))) for x, y in pairs))
    morphisms = [(x, y, g) for x, y in pairs for g in b_.hom(f.obj(x), f.obj(y))]

    def composer(g, h):
        if h[1] != g[0]:
            return None
        return (h[0], g[1], b_.compose(g[2], h[2]))

    image = Groupoid.build(
        a_.objects, morphisms,
        {m: m[0] for m in morphisms}, {m: m[1] for m in morphisms},
        {x: (x, x, b_.ident[f.obj(x)]) for x in a_.objects},
        composer,
        inv={m: (m[1], m[0], b_.inverse(m[2])) for m in morphisms},
        name=f"im({f.name})",
    )
    e0 = GroupoidMap.from_functions(
        a_, image, lambda x: x, lambda u: (a_.src[u], a_.tgt[u], f.mor(u)), name="e0")
    i = GroupoidMap.from_functions(image, b_, f.obj, lambda m: m[2], name="i")
    return image, e0, i


def eso_ff_factorize(f: GroupoidMap) -> EsoFFFactorization:
    image, e0, i = full_image(f)
    fz = factorize(i)
    return EsoFFFactorization(image, fz.middle, compose_maps(fz.j, e0), fz.q, fz)


# -- functor search --------------------------------------------------------

def _generated(g: Groupoid, r: Label, gens: Sequence[Label]) -> Dict[Label, Tuple[Label, int]]:
    """Cayley-graph spanning tree of the subgroup generated by ``gens``.

    Maps each reached element x to (predecessor, generator index) with
    x = gens[i] ∘ predecessor; the identity maps to (None, -1).
    """
    tree = {g.ident[r]: (None, -1)}
    frontier = [g.ident[r]]
    while frontier:
        nxt = []
        for x in frontier:
            for i, s in enumerate(gens):
                y = g.compose(s, x)
                if y not in tree:
                    tree[y] = (x, i)
                    nxt.append(y)
        frontier = nxt
    return tree


def generators(g: Groupoid, r: Label) -> List[Label]:
    """A greedy generating set of Aut(r), in morphism order."""
    gens: List[Label] = []
    reached = {g.ident[r]}
    for x in g.automorphisms(r):
        if x not in reached:
            gens.append(x)
            reached = set(_generated(g, r, gens))
    return gens


def group_homomorphisms(g: Groupoid, r: Label, h: Groupoid, s: Label,
                        allowed: Optional[Callable[[Label], Iterable[Label]]] = None
                        ) -> Iterator[Dict[Label, Label]]:
    """All homomorphisms Aut_g(r) → Aut_h(s), as full element tables.

    ``allowed(x)`` restricts the candidate images of a generator x.
    """
    gens = generators(g, r)
    tree = _generated(g, r, gens)
    order = sorted(tree, key=lambda x: _depth(tree, x))
    candidates = [list(allowed(x)) if allowed else list(h.automorphisms(s)) for x in gens]
    for images in cartesian(*candidates):
        phi = {g.ident[r]: h.ident[s]}
        for x in order:
            pred, i = tree[x]
            if pred is not None:
                phi[x] = h.compose(images[i], phi[pred])
        if all(phi[g.compose(t, x)] == h.compose(phi[t], phi[x]) for t in gens for x in tree):
            yield phi


def _depth(tree, x) -> int:
    d = 0
    while tree[x][0] is not None:
        x = tree[x][0]
        d += 1
    return d


def functor_label(f: GroupoidMap) -> Tuple[Tuple[Label, ...], Tuple[Label, ...]]:
    return (tuple(f.obj(x) for x in f.dom.objects), tuple(f.mor(m) for m in f.dom.morphisms))


def functor_of_label(a: Groupoid, b: Groupoid, label, name: str = "") -> GroupoidMap:
    objects, morphisms = label
    return GroupoidMap(a, b, dict(zip(a.objects, objects)), dict(zip(a.morphisms, morphisms)),
                       name=name)


def enumerate_functors(a: Groupoid, b: Groupoid,
                       over: Optional[Tuple[GroupoidMap, GroupoidMap]] = None
                       ) -> List[GroupoidMap]:
    """All functors a → b, optionally only those F with Q∘F = P for over=(P, Q).

    Per component of ``a`` a functor is determined by the image y of the root,
    a homomorphism of vertex groups and a morphism out of y for every other
    object (the image of its spanning path).
    """
    guard_search_input(f"functors {a.name} -> {b.name}", len(b.objects), len(b.morphisms))
    p, q = over if over else (None, None)
    paths = a.spanning_paths
    per_component = []
    for comp in a.components:
        r = comp[0]
        options = []
        for y in b.objects:
            if p is not None and q.obj(y) != p.obj(r):
                continue
            allowed = None
            if p is not None:
                def allowed(x, y=y):
                    return [h for h in b.automorphisms(y) if q.mor(h) == p.mor(x)]
            homs = list(group_homomorphisms(a, r, b, y, allowed))
            beta_choices = []
            for x in comp[1:]:
                outs = b.out_of(y)
                if p is not None:
                    outs = [u for u in outs if q.mor(u) == p.mor(paths[x])]
                beta_choices.append(outs)
            count = len(homs)
            for c in beta_choices:
                count *= len(c)
            guard_candidates(f"functor components {a.name} -> {b.name}", count)
            for phi in homs:
                for betas in cartesian(*beta_choices):
                    options.append((y, phi, dict(zip(comp[1:], betas))))
        per_component.append(options)
    total = 1
    for options in per_component:
        total *= len(options)
    guard_candidates(f"functors {a.name} -> {b.name}", total)
    result = []
    for choice in cartesian(*per_component):
        result.append(_assemble_functor(a, b, choice))
    logger.debug("Enumerated %d functors %s -> %s", len(result), a.name, b.name)
    return result


def _assemble_functor(a: Groupoid, b: Groupoid, choice) -> GroupoidMap:
    paths = a.spanning_paths
    beta: Dict[Label, Label] = {}
    phi: Dict[Label, Label] = {}
    on_objects: Dict[Label, Label] = {}
    for comp, (y, hom, betas) in zip(a.components, choice):
        beta[comp[0]] = b.ident[y]
        beta.update(betas)
        phi.update(hom)
        for x in comp:
            on_objects[x] = b.tgt[beta[x]]
    on_morphisms = {}
    for m in a.morphisms:
        x, x2 = a.src[m], a.tgt[m]
        k = a.compose_all(a.inverse(paths[x2]), m, paths[x])
        on_morphisms[m] = b.compose_all(beta[x2], phi[k], b.inverse(beta[x]))
    return GroupoidMap(a, b, on_objects, on_morphisms)


def natural_families(a: Groupoid, s_obj, s_mor, t_obj, t_mor, c: Groupoid,
                     admissible: Optional[Callable[[Label, Label], bool]] = None
                     ) -> List[Dict[Label, Label]]:
    """Natural isomorphisms S ⇒ T between functors a → c given as callables."""
    paths = a.spanning_paths
    per_component = []
    for comp in a.components:
        r = comp[0]
        gens = generators(a, r)
        options = []
        for phi_r in c.hom(s_obj(r), t_obj(r)):
            if admissible and not admissible(r, phi_r):
                continue
            if any(c.compose(phi_r, s_mor(g)) != c.compose(t_mor(g), phi_r) for g in gens):
                continue
            family = {r: phi_r}
            ok = True
            for x in comp[1:]:
                gamma = paths[x]
                phi_x = c.compose_all(t_mor(gamma), phi_r, c.inverse(s_mor(gamma)))
                if admissible and not admissible(x, phi_x):
                    ok = False
                    break
                family[x] = phi_x
            if ok:
                options.append(family)
        per_component.append(options)
    result = []
    for choice in cartesian(*per_component):
        merged: Dict[Label, Label] = {}
        for family in choice:
            merged.update(family)
        result.append(merged)
    return result


def natural_isos(f: GroupoidMap, g: GroupoidMap) -> List[NatIso]:
    if f.dom is not g.dom or f.cod is not g.cod:
        raise PreconditionError("natural isomorphisms need parallel functors")
    families = natural_families(f.dom, f.obj, f.mor, g.obj, g.mor, f.cod)
    return [NatIso(f, g, family) for family in families]


def hom_groupoid(a: Groupoid, b: Groupoid, name: str = "") -> Groupoid:
    """Functors a → b and natural isomorphisms between them.

    Objects are ``functor_label`` tuples; a morphism is (F, G, components in
    the object order of ``a``).
    """
    guard_search_input(f"hom source {a.name}", len(a.objects), len(a.morphisms))
    guard_search_input(f"hom target {b.name}", len(b.objects), len(b.morphisms))
    functors = enumerate_functors(a, b)
    labels = [functor_label(f) for f in functors]
    buckets: Dict[Tuple[int, ...], List[int]] = {}
    for i, f in enumerate(functors):
        key = tuple(b.component_index[f.obj(comp[0])] for comp in a.components)
        buckets.setdefault(key, []).append(i)
    morphisms, src, tgt = [], {}, {}
    for members in buckets.values():
        for i in members:
            for k in members:
                for family in natural_families(a, functors[i].obj, functors[i].mor,
                                               functors[k].obj, functors[k].mor, b):
                    m = (labels[i], labels[k], tuple(family[x] for x in a.objects))
                    morphisms.append(m)
                    src[m] = labels[i]
                    tgt[m] = labels[k]
    guard_cells(name or f"[{a.name}, {b.name}]", len(labels) + len(morphisms))

    def composer(g, f):
        if f[1] != g[0]:
            return None
        return (f[0], g[1], tuple(b.compose(y, x) for x, y in zip(f[2], g[2])))

    def identity(label):
        return (label, label, tuple(b.ident[y] for y in label[0]))

    return Groupoid.build(
        labels, morphisms, src, tgt, {x: identity(x) for x in labels}, composer,
        inv={m: (m[1], m[0], tuple(b.inverse(c) for c in m[2])) for m in morphisms},
        name=name or f"[{a.name}, {b.name}]",
    )


# -- equivalence of groupoids ------------------------------------------------

def _element_orders(g: Groupoid, r: Label) -> List[int]:
    orders = []
    for x in g.automorphisms(r):
        k, y = 1, x
        while y != g.ident[r]:
            y = g.compose(x, y)
            k += 1
        orders.append(k)
    return sorted(orders)


def vertex_groups_isomorphic(g: Groupoid, r: Label, h: Groupoid, s: Label) -> bool:
    if len(g.automorphisms(r)) != len(h.automorphisms(s)):
        return False
    if _element_orders(g, r) != _element_orders(h, s):
        return False
    n = len(g.automorphisms(r))
    return any(len(set(phi.values())) == n for phi in group_homomorphisms(g, r, h, s))


def are_equivalent(g: Groupoid, h: Groupoid) -> bool:
    """Equivalence of groupoids: same multiset of vertex-group isomorphism types."""
    if len(g.components) != len(h.components):
        return False
    unmatched = [comp[0] for comp in h.components]
    for comp in g.components:
        r = comp[0]
        for i, s in enumerate(unmatched):
            if vertex_groups_isomorphic(g, r, h, s):
                del unmatched[i]
                break
        else:
            return False
    return True


def transport_map(f: GroupoidMap) -> Tuple[GroupoidMap, Limit]:
    """The comparison P(A) → P(B) ×_{B×B} (A×A) sending a path to its image and ends."""
    pa, pb = path_object(f.dom), path_object(f.cod)
    ends = product_map(f, f, pa.ends, pb.ends)
    target = pullback(pb.boundary, ends)
    comparison = GroupoidMap.from_functions(
        pa.apex, target.apex,
        lambda t: (f.mor(t), (f.dom.src[t], f.dom.tgt[t])),
        lambda m: ((f.mor(m[0]), f.mor(m[1]), f.mor(m[2])), (m[1], m[2])),
        name="transport")
    return comparison, target


def constant_map(a: Groupoid, b: Groupoid, y: Label) -> GroupoidMap:
    return GroupoidMap(a, b, {x: y for x in a.objects},
                       {m: b.ident[y] for m in a.morphisms}, name=f"const_{y}")


def point_inclusion(b: Groupoid, y: Label) -> GroupoidMap:
    """The functor from the one-object discrete groupoid picking y."""
    point = discrete(1, name="pt", labels=(y,))
    return GroupoidMap(point, b, {y: y}, {point.ident[y]: b.ident[y]}, name=f"incl_{y}")
