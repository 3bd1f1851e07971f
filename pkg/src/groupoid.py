"""Finite groupoids given by explicit tables, functors and natural isomorphisms.

Labels of objects and morphisms are arbitrary hashable values. Groupoids built
by the constructions in this package use tuples as labels; builders and the DSL
use strings. Ordering is always the insertion order of ``objects`` and
``morphisms``; where a canonical choice is needed the key is ``repr``.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from .budget import guard_cells
from .errors import InvalidStructureError

logger = logging.getLogger(__name__)

Label = Hashable
Composer = Callable[[Label, Label], Optional[Label]]


def sort_key(label: Label) -> str:
    return repr(label)


@dataclass(frozen=True, eq=False)
class Groupoid:
    """A finite groupoid.

    ``composer(g, f)`` returns g∘f for composable pairs (tgt f = src g) and
    None when the table has no entry.
    """
    objects: Tuple[Label, ...]
    morphisms: Tuple[Label, ...]
    src: Mapping[Label, Label]
    tgt: Mapping[Label, Label]
    ident: Mapping[Label, Label]
    inv: Mapping[Label, Label]
    composer: Composer = field(repr=False)
    name: str = ""

    @classmethod
    def build(cls, objects: Iterable[Label], morphisms: Iterable[Label],
              src: Mapping[Label, Label], tgt: Mapping[Label, Label],
              ident: Mapping[Label, Label], composer: Composer,
              inv: Optional[Mapping[Label, Label]] = None, name: str = "") -> "Groupoid":
        objects = tuple(objects)
        morphisms = tuple(morphisms)
        guard_cells(name or "groupoid", len(objects) + len(morphisms))
        g = cls(objects, morphisms, dict(src), dict(tgt), dict(ident),
                dict(inv) if inv is not None else {}, composer, name)
        if inv is None:
            object.__setattr__(g, "inv", _search_inverses(g))
        logger.debug("Built groupoid %s with %d objects, %d morphisms",
                     name or "<anonymous>", len(objects), len(morphisms))
        return g

    @classmethod
    def from_tables(cls, objects: Sequence[Label], morphisms: Mapping[Label, Tuple[Label, Label]],
                    ident: Mapping[Label, Label], comp: Mapping[Tuple[Label, Label], Label],
                    name: str = "") -> "Groupoid":
        """Build from explicit tables; identity rows of ``comp`` are filled in.

        ``morphisms`` maps every morphism label (identities included) to its
        (source, target). Inverses are found by search; a broken table still
        builds and ``validate_groupoid`` reports what fails.
        """
        table = dict(comp)
        for f, (a, b) in morphisms.items():
            table.setdefault((ident[b], f), f)
            table.setdefault((f, ident[a]), f)
        return cls.build(
            objects,
            morphisms.keys(),
            {f: ends[0] for f, ends in morphisms.items()},
            {f: ends[1] for f, ends in morphisms.items()},
            ident,
            lambda g, f: table.get((g, f)),
            name=name,
        )

    # -- queries ---------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.objects) + len(self.morphisms)

    @cached_property
    def object_set(self) -> frozenset:
        return frozenset(self.objects)

    @cached_property
    def morphism_set(self) -> frozenset:
        return frozenset(self.morphisms)

    @cached_property
    def _hom_index(self) -> Dict[Tuple[Label, Label], Tuple[Label, ...]]:
        index: Dict[Tuple[Label, Label], List[Label]] = {}
        for f in self.morphisms:
            index.setdefault((self.src[f], self.tgt[f]), []).append(f)
        return {k: tuple(v) for k, v in index.items()}

    @cached_property
    def _out_index(self) -> Dict[Label, Tuple[Label, ...]]:
        index: Dict[Label, List[Label]] = {x: [] for x in self.objects}
        for f in self.morphisms:
            index[self.src[f]].append(f)
        return {k: tuple(v) for k, v in index.items()}

    def hom(self, a: Label, b: Label) -> Tuple[Label, ...]:
        return self._hom_index.get((a, b), ())

    def out_of(self, a: Label) -> Tuple[Label, ...]:
        return self._out_index.get(a, ())

    def automorphisms(self, a: Label) -> Tuple[Label, ...]:
        return self.hom(a, a)

    def is_identity(self, f: Label) -> bool:
        return self.ident[self.src[f]] == f

    def compose(self, g: Label, f: Label) -> Label:
        """Return g∘f."""
        if self.tgt[f] != self.src[g]:
            raise InvalidStructureError(
                f"cannot compose {g!r} after {f!r} in {self.name or 'groupoid'}")
        h = self.composer(g, f)
        if h is None:
            raise InvalidStructureError(f"composition of {g!r} after {f!r} is undefined")
        return h

    def compose_all(self, *ms: Label) -> Label:
        """compose_all(h, g, f) = h∘g∘f."""
        result = ms[-1]
        for m in reversed(ms[:-1]):
            result = self.compose(m, result)
        return result

    def inverse(self, f: Label) -> Label:
        try:
            return self.inv[f]
        except KeyError:
            raise InvalidStructureError(f"morphism {f!r} has no inverse") from None

    def conjugate(self, m: Label, by_after: Label, by_before: Label) -> Label:
        """by_after ∘ m ∘ by_before⁻¹."""
        return self.compose_all(by_after, m, self.inverse(by_before))

    @cached_property
    def components(self) -> Tuple[Tuple[Label, ...], ...]:
        seen = set()
        result = []
        for x in self.objects:
            if x in seen:
                continue
            comp = [x]
            seen.add(x)
            queue = deque([x])
            while queue:
                y = queue.popleft()
                for f in self.out_of(y):
                    z = self.tgt[f]
                    if z not in seen:
                        seen.add(z)
                        comp.append(z)
                        queue.append(z)
            result.append(tuple(comp))
        return tuple(result)

    @cached_property
    def component_index(self) -> Dict[Label, int]:
        return {x: i for i, comp in enumerate(self.components) for x in comp}

    @cached_property
    def spanning_paths(self) -> Dict[Label, Label]:
        """For every object x a chosen morphism root(x) → x, identity at roots."""
        paths: Dict[Label, Label] = {}
        for comp in self.components:
            root = comp[0]
            paths[root] = self.ident[root]
            queue = deque([root])
            while queue:
                y = queue.popleft()
                for f in self.out_of(y):
                    z = self.tgt[f]
                    if z not in paths:
                        paths[z] = self.compose(f, paths[y])
                        queue.append(z)
        return paths

    @cached_property
    def object_position(self) -> Dict[Label, int]:
        return {x: i for i, x in enumerate(self.objects)}

    def root_of(self, x: Label) -> Label:
        return self.components[self.component_index[x]][0]

    def connected(self, a: Label, b: Label) -> bool:
        return self.component_index[a] == self.component_index[b]

    @cached_property
    def comp_table(self) -> Dict[Tuple[Label, Label], Label]:
        table = {}
        for f in self.morphisms:
            for g in self.out_of(self.tgt[f]):
                h = self.composer(g, f)
                if h is not None:
                    table[(g, f)] = h
        return table

    def __repr__(self) -> str:
        return f"Groupoid({self.name or '?'}: {len(self.objects)} objects, {len(self.morphisms)} morphisms)"


def _search_inverses(g: Groupoid) -> Dict[Label, Label]:
    inverses = {}
    for f in g.morphisms:
        a, b = g.src[f], g.tgt[f]
        for h in g.hom(b, a):
            try:
                if g.composer(h, f) == g.ident.get(a) and g.composer(f, h) == g.ident.get(b):
                    inverses[f] = h
                    break
            except KeyError:
                continue
    return inverses


@dataclass
class ValidationReport:
    """Violated axioms of a groupoid, functor or simplicial object."""
    subject: str
    issues: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def raise_if_failed(self) -> None:
        if self.issues:
            raise InvalidStructureError(f"{self.subject} is invalid", self.issues)

    def to_dict(self) -> dict:
        return {"subject": self.subject, "ok": self.ok, "issues": list(self.issues)}


def validate_groupoid(g: Groupoid) -> ValidationReport:
    """List every violated groupoid axiom; never raises."""
    report = ValidationReport(g.name or "groupoid")
    issues = report.issues
    objects = g.object_set
    for f in g.morphisms:
        if g.src.get(f) not in objects or g.tgt.get(f) not in objects:
            issues.append(f"morphism {f!r} has an unknown endpoint")
    if issues:
        return report
    for x in g.objects:
        i = g.ident.get(x)
        if i not in g.morphism_set or g.src[i] != x or g.tgt[i] != x:
            issues.append(f"identity at {x!r} is missing or not an endomorphism")
    if issues:
        return report

    def comp(h, f):
        try:
            return g.composer(h, f)
        except (KeyError, TypeError):
            return None

    for f in g.morphisms:
        a, b = g.src[f], g.tgt[f]
        if comp(g.ident[b], f) != f or comp(f, g.ident[a]) != f:
            issues.append(f"identity law fails for {f!r}")
        for h in g.out_of(b):
            k = comp(h, f)
            if k is None:
                issues.append(f"composition undefined for ({h!r}, {f!r})")
            elif k not in g.morphism_set or g.src[k] != a or g.tgt[k] != g.tgt[h]:
                issues.append(f"composite of ({h!r}, {f!r}) has wrong endpoints")
    if issues:
        return report
    for f in g.morphisms:
        for h in g.out_of(g.tgt[f]):
            hf = comp(h, f)
            for k in g.out_of(g.tgt[h]):
                if comp(k, hf) != comp(comp(k, h), f):
                    issues.append(f"associativity fails for ({k!r}, {h!r}, {f!r})")
    for f in g.morphisms:
        a, b = g.src[f], g.tgt[f]
        h = g.inv.get(f)
        if h is None or comp(h, f) != g.ident[a] or comp(f, h) != g.ident[b]:
            issues.append(f"inverse law fails for {f!r}")
    return report


# -- standard groupoids ----------------------------------------------------

def terminal() -> Groupoid:
    return discrete(1, name="1", labels=("*",))


def empty() -> Groupoid:
    return Groupoid.build((), (), {}, {}, {}, lambda g, f: None, inv={}, name="0")


def discrete(n: int, name: str = "", labels: Optional[Sequence[Label]] = None) -> Groupoid:
    """Objects "0".."n-1" (or ``labels``) with identities only."""
    objects = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
    ids = {x: f"id_{x}" for x in objects}
    ends = {f: x for x, f in ids.items()}
    return Groupoid.build(
        objects, ids.values(), ends, ends, ids,
        lambda g, f: f if g == f else None,
        inv={f: f for f in ids.values()},
        name=name or f"discrete({n})",
    )


def codiscrete(n: int, name: str = "") -> Groupoid:
    """Objects "0".."n-1" with exactly one morphism "i>j" between any two."""
    objects = tuple(str(i) for i in range(n))
    arrows = {(a, b): f"{a}>{b}" for a in objects for b in objects}
    src = {f: a for (a, _), f in arrows.items()}
    tgt = {f: b for (_, b), f in arrows.items()}

    def composer(g, f):
        return arrows[(src[f], tgt[g])] if tgt[f] == src[g] else None

    return Groupoid.build(
        objects, arrows.values(), src, tgt, {x: arrows[(x, x)] for x in objects},
        composer, inv={f: arrows[(tgt[f], src[f])] for f in arrows.values()},
        name=name or f"codiscrete({n})",
    )


def group_delooping(elements: Sequence[Label], multiply: Callable[[Label, Label], Label],
                    unit: Label, name: str) -> Groupoid:
    """One-object groupoid "*" whose morphisms are the group elements."""
    elements = tuple(elements)
    table = {(g, f): multiply(g, f) for g in elements for f in elements}
    inverses = {f: next(g for g in elements if table[(g, f)] == unit) for f in elements}
    ends = {f: "*" for f in elements}
    return Groupoid.build(("*",), elements, ends, ends, {"*": unit},
                          lambda g, f: table.get((g, f)), inv=inverses, name=name)


def cyclic(n: int) -> Groupoid:
    if n == 2:
        names = ["e", "t"]
    else:
        names = ["e"] + [f"r{k}" if k > 1 else "r" for k in range(1, n)]
    index = {x: k for k, x in enumerate(names)}
    return group_delooping(names, lambda g, f: names[(index[g] + index[f]) % n], "e",
                           name=f"BZ{n}")


def _symmetric3() -> Groupoid:
    perms = {
        "e": (0, 1, 2), "(01)": (1, 0, 2), "(02)": (2, 1, 0),
        "(12)": (0, 2, 1), "(012)": (1, 2, 0), "(021)": (2, 0, 1),
    }
    by_perm = {p: k for k, p in perms.items()}

    def multiply(g, f):
        pg, pf = perms[g], perms[f]
        return by_perm[tuple(pg[pf[i]] for i in range(3))]

    return group_delooping(list(perms), multiply, "e", name="BS3")


GROUP_NAMES = ("trivial", "Z2", "Z3", "S3")


def group_groupoid(name: str) -> Groupoid:
    """Delooping of one of the named groups: trivial, Z2, Z3, S3 (or Zn)."""
    if name == "trivial":
        return group_delooping(["e"], lambda g, f: "e", "e", name="B1")
    if name == "S3":
        return _symmetric3()
    if name.startswith("Z") and name[1:].isdigit() and int(name[1:]) >= 1:
        return cyclic(int(name[1:]))
    raise InvalidStructureError(f"unknown group {name!r}")


def coproduct(*parts: Groupoid, name: str = "") -> Groupoid:
    """Disjoint union; labels become (index, label)."""
    objects = [(i, x) for i, g in enumerate(parts) for x in g.objects]
    morphisms = [(i, f) for i, g in enumerate(parts) for f in g.morphisms]

    def composer(g, f):
        if g[0] != f[0]:
            return None
        h = parts[g[0]].composer(g[1], f[1])
        return None if h is None else (g[0], h)

    return Groupoid.build(
        objects, morphisms,
        {(i, f): (i, parts[i].src[f]) for i, f in morphisms},
        {(i, f): (i, parts[i].tgt[f]) for i, f in morphisms},
        {(i, x): (i, parts[i].ident[x]) for i, x in objects},
        composer,
        inv={(i, f): (i, parts[i].inv[f]) for i, f in morphisms if f in parts[i].inv},
        name=name or " + ".join(g.name for g in parts),
    )


def full_subgroupoid(g: Groupoid, keep: Iterable[Label], name: str = "") -> Groupoid:
    """Full subgroupoid on the given objects (labels unchanged, order of ``g``)."""
    keep = set(keep)
    objects = [x for x in g.objects if x in keep]
    morphisms = [f for f in g.morphisms if g.src[f] in keep and g.tgt[f] in keep]
    return Groupoid.build(
        objects, morphisms,
        {f: g.src[f] for f in morphisms}, {f: g.tgt[f] for f in morphisms},
        {x: g.ident[x] for x in objects}, g.composer,
        inv={f: g.inv[f] for f in morphisms if f in g.inv},
        name=name or f"{g.name}|full",
    )


# -- functors --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GroupoidMap:
    """A functor between finite groupoids."""
    dom: Groupoid
    cod: Groupoid
    on_objects: Mapping[Label, Label]
    on_morphisms: Mapping[Label, Label]
    name: str = ""

    @classmethod
    def from_functions(cls, dom: Groupoid, cod: Groupoid, fo: Callable[[Label], Label],
                       fm: Callable[[Label], Label], name: str = "") -> "GroupoidMap":
        return cls(dom, cod, {x: fo(x) for x in dom.objects},
                   {f: fm(f) for f in dom.morphisms}, name)

    def obj(self, x: Label) -> Label:
        return self.on_objects[x]

    def mor(self, f: Label) -> Label:
        return self.on_morphisms[f]

    def issues(self) -> List[str]:
        """Violated preservation laws (empty for a valid functor)."""
        problems = []
        dom, cod = self.dom, self.cod
        for x in dom.objects:
            if x not in self.on_objects or self.on_objects[x] not in cod.object_set:
                problems.append(f"object {x!r} has no image in the codomain")
        for f in dom.morphisms:
            if f not in self.on_morphisms or self.on_morphisms[f] not in cod.morphism_set:
                problems.append(f"morphism {f!r} has no image in the codomain")
        if problems:
            return problems
        for f in dom.morphisms:
            u = self.on_morphisms[f]
            if cod.src[u] != self.on_objects[dom.src[f]] or cod.tgt[u] != self.on_objects[dom.tgt[f]]:
                problems.append(f"endpoints of {f!r} are not preserved")
        for x in dom.objects:
            if self.on_morphisms[dom.ident[x]] != cod.ident[self.on_objects[x]]:
                problems.append(f"identity at {x!r} is not preserved")
        if problems:
            return problems
        for (g, f), h in dom.comp_table.items():
            if cod.composer(self.on_morphisms[g], self.on_morphisms[f]) != self.on_morphisms[h]:
                problems.append(f"composition ({g!r}, {f!r}) is not preserved")
        return problems

    def validated(self) -> "GroupoidMap":
        problems = self.issues()
        if problems:
            raise InvalidStructureError(f"invalid functor {self.name or ''}".strip(), problems)
        return self

    def __repr__(self) -> str:
        return f"GroupoidMap({self.name or '?'}: {self.dom.name} -> {self.cod.name})"


def identity_map(g: Groupoid) -> GroupoidMap:
    return GroupoidMap(g, g, {x: x for x in g.objects}, {f: f for f in g.morphisms},
                       name=f"id_{g.name}")


def compose_maps(after: GroupoidMap, before: GroupoidMap) -> GroupoidMap:
    """after ∘ before."""
    if before.cod is not after.dom:
        raise InvalidStructureError(
            f"cannot compose {after.name or 'map'} after {before.name or 'map'}: codomain mismatch")
    return GroupoidMap(
        before.dom, after.cod,
        {x: after.on_objects[y] for x, y in before.on_objects.items()},
        {f: after.on_morphisms[u] for f, u in before.on_morphisms.items()},
        name=f"{after.name}.{before.name}",
    )


def inverse_map(f: GroupoidMap) -> GroupoidMap:
    """Inverse of a functor that is bijective on objects and morphisms."""
    on_objects = {y: x for x, y in f.on_objects.items()}
    on_morphisms = {v: u for u, v in f.on_morphisms.items()}
    if len(on_objects) != len(f.cod.objects) or len(on_morphisms) != len(f.cod.morphisms):
        raise InvalidStructureError(f"{f.name or 'functor'} is not an isomorphism")
    return GroupoidMap(f.cod, f.dom, on_objects, on_morphisms, name=f"{f.name}^-1")


@dataclass(frozen=True, eq=False)
class NatIso:
    """A natural isomorphism between parallel functors."""
    source: GroupoidMap
    target: GroupoidMap
    components: Mapping[Label, Label]

    def issues(self) -> List[str]:
        problems = []
        cod = self.source.cod
        if self.source.dom is not self.target.dom or cod is not self.target.cod:
            return ["functors are not parallel"]
        for x in self.source.dom.objects:
            c = self.components.get(x)
            if c is None or cod.src[c] != self.source.obj(x) or cod.tgt[c] != self.target.obj(x):
                problems.append(f"component at {x!r} has wrong endpoints")
        if problems:
            return problems
        for f in self.source.dom.morphisms:
            a, b = self.source.dom.src[f], self.source.dom.tgt[f]
            left = cod.compose(self.components[b], self.source.mor(f))
            right = cod.compose(self.target.mor(f), self.components[a])
            if left != right:
                problems.append(f"naturality fails at {f!r}")
        return problems


# -- classification --------------------------------------------------------

@dataclass(frozen=True)
class FunctorProfile:
    is_fully_faithful: bool
    is_essentially_surjective: bool
    is_isofibration: bool
    is_surjective_on_objects: bool

    @property
    def is_equivalence(self) -> bool:
        return self.is_fully_faithful and self.is_essentially_surjective

    @property
    def is_trivial_fibration(self) -> bool:
        return self.is_equivalence and self.is_isofibration and self.is_surjective_on_objects

    @property
    def is_minus1_truncated(self) -> bool:
        return self.is_fully_faithful

    @property
    def is_minus1_connected(self) -> bool:
        return self.is_essentially_surjective

    def as_dict(self) -> Dict[str, bool]:
        return {
            "is_fully_faithful": self.is_fully_faithful,
            "is_essentially_surjective": self.is_essentially_surjective,
            "is_isofibration": self.is_isofibration,
            "is_surjective_on_objects": self.is_surjective_on_objects,
            "is_equivalence": self.is_equivalence,
            "is_trivial_fibration": self.is_trivial_fibration,
            "is_minus1_truncated": self.is_minus1_truncated,
            "is_minus1_connected": self.is_minus1_connected,
        }


def is_fully_faithful(f: GroupoidMap) -> bool:
    dom, cod = f.dom, f.cod
    # Faithful and full on vertex groups, and no new morphisms between components.
    for comp in dom.components:
        r = comp[0]
        images = {f.mor(g) for g in dom.automorphisms(r)}
        if len(images) != len(dom.automorphisms(r)) or len(images) != len(cod.automorphisms(f.obj(r))):
            return False
    roots = [comp[0] for comp in dom.components]
    for i, a in enumerate(roots):
        for b in roots[i + 1:]:
            if cod.connected(f.obj(a), f.obj(b)):
                return False
    return True


def is_essentially_surjective(f: GroupoidMap) -> bool:
    hit = {f.cod.component_index[y] for y in f.on_objects.values()}
    return len(hit) == len(f.cod.components)


def find_unliftable(f: GroupoidMap) -> Optional[Tuple[Label, Label]]:
    """An object a and a morphism out of f(a) with no lift out of a, if any."""
    for a in f.dom.objects:
        lifted = {f.mor(g) for g in f.dom.out_of(a)}
        for u in f.cod.out_of(f.obj(a)):
            if u not in lifted:
                return a, u
    return None


def has_target_lifts(f: GroupoidMap) -> bool:
    """Lifting with prescribed target: every u into f(b) lifts to a morphism into b."""
    for b in f.dom.objects:
        lifted = {f.mor(g) for g in f.dom.morphisms if f.dom.tgt[g] == b}
        for u in f.cod.morphisms:
            if f.cod.tgt[u] == f.obj(b) and u not in lifted:
                return False
    return True


def is_isofibration(f: GroupoidMap) -> bool:
    return find_unliftable(f) is None


def is_injective_on_objects(f: GroupoidMap) -> bool:
    return len(set(f.on_objects.values())) == len(f.dom.objects)


def functor_classify(f: GroupoidMap) -> FunctorProfile:
    f.validated()
    profile = FunctorProfile(
        is_fully_faithful=is_fully_faithful(f),
        is_essentially_surjective=is_essentially_surjective(f),
        is_isofibration=is_isofibration(f),
        is_surjective_on_objects=set(f.on_objects.values()) == f.cod.object_set,
    )
    logger.debug("Classified %r: %s", f, profile)
    return profile


def is_equivalence(f: GroupoidMap) -> bool:
    return is_fully_faithful(f) and is_essentially_surjective(f)
