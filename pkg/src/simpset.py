"""Finite truncated simplicial sets, shapes, pushouts and lifting deciders.

Simplices generated from a presentation are labelled by the name of a
nondegenerate simplex, or by ``(name, η)`` for its degeneracy along the
surjection η: [n] → [k] written as a nondecreasing tuple. Everything keyed by
level is keyed by ``(n, label)``.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .budget import current_budget, guard_cells
from .errors import BudgetExceeded, InvalidStructureError, PreconditionError
from .groupoid import Groupoid, GroupoidMap, Label, ValidationReport, sort_key

logger = logging.getLogger(__name__)

Cell = Tuple[int, Label]
Operator = Tuple[int, ...]
FaceFn = Callable[[int, int, Label], Label]
DegeneracyFn = Callable[[int, int, Label], Label]

_MISSING = object()


# -- simplicial operators ----------------------------------------------------

def surjections(n: int, k: int) -> List[Operator]:
    """Monotone surjections [n] → [k], in lexicographic order of their jumps."""
    result = []
    for jumps in combinations(range(1, n + 1), k):
        value, eta = 0, []
        for t in range(n + 1):
            if t in jumps:
                value += 1
            eta.append(value)
        result.append(tuple(eta))
    return result


def identity_operator(n: int) -> Operator:
    return tuple(range(n + 1))


def face_at(face: FaceFn, x: Label, n: int, vertices: Sequence[int]) -> Label:
    """The face of the n-simplex x spanned by the sorted ``vertices``."""
    keep = set(vertices)
    level = n
    for j in reversed(range(n + 1)):
        if j not in keep:
            x = face(level, j, x)
            level -= 1
    return x


def degenerate(degeneracy: DegeneracyFn, x: Label, k: int, eta: Operator) -> Label:
    """η*(x) for a k-simplex x and a monotone surjection η: [n] → [k]."""
    level = k
    for t in range(len(eta) - 1):
        if eta[t + 1] == eta[t]:
            x = degeneracy(level, t, x)
            level += 1
    return x


def apply_operator(face: FaceFn, degeneracy: DegeneracyFn, x: Label, n: int,
                   theta: Operator) -> Label:
    """θ*(x) for an n-simplex x and a monotone θ: [k] → [n]."""
    image = sorted(set(theta))
    y = face_at(face, x, n, image)
    return degenerate(degeneracy, y, len(image) - 1, tuple(image.index(v) for v in theta))


def section_face(face: FaceFn, y: Label, n: int, eta: Operator) -> Label:
    """The face of y along the first-vertex section of η."""
    firsts = [eta.index(v) for v in range(eta[-1] + 1)]
    return face_at(face, y, n, firsts)


# -- simplicial sets ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FiniteSimplicialSet:
    """Levels 0..trunc_level with explicit face and degeneracy tables.

    ``skeletal`` is False for truncated nerves, which keep nondegenerate
    simplices above ``declared_dim``.
    """
    trunc_level: int
    declared_dim: int
    levels: Tuple[Tuple[Label, ...], ...]
    faces: Mapping[Tuple[int, int, Label], Label] = field(repr=False)
    degeneracies: Mapping[Tuple[int, int, Label], Label] = field(repr=False)
    name: str = ""
    skeletal: bool = True

    def face(self, n: int, i: int, x: Label) -> Label:
        return self.faces[(n, i, x)]

    def degeneracy(self, n: int, i: int, x: Label) -> Label:
        return self.degeneracies[(n, i, x)]

    def face_at(self, x: Label, n: int, vertices: Sequence[int]) -> Label:
        return face_at(self.face, x, n, vertices)

    def degenerate(self, x: Label, k: int, eta: Operator) -> Label:
        return degenerate(self.degeneracy, x, k, eta)

    def apply_operator(self, x: Label, n: int, theta: Operator) -> Label:
        return apply_operator(self.face, self.degeneracy, x, n, theta)

    @cached_property
    def _level_sets(self) -> Tuple[frozenset, ...]:
        return tuple(frozenset(level) for level in self.levels)

    def contains(self, n: int, x: Label) -> bool:
        return n <= self.trunc_level and x in self._level_sets[n]

    @cached_property
    def _decompositions(self) -> Dict[Cell, Tuple[int, Label, Operator]]:
        table: Dict[Cell, Tuple[int, Label, Operator]] = {}
        for n, level in enumerate(self.levels):
            for x in level:
                table[(n, x)] = (n, x, identity_operator(n))
                if n == 0:
                    continue
                for i in range(n):
                    z = self.face(n, i, x)
                    if self.degeneracy(n - 1, i, z) == x:
                        k, y, inner = table[(n - 1, z)]
                        sigma = tuple(t if t <= i else t - 1 for t in range(n + 1))
                        table[(n, x)] = (k, y, tuple(inner[s] for s in sigma))
                        break
        return table

    def decompose(self, n: int, x: Label) -> Tuple[int, Label, Operator]:
        """Eilenberg-Zilber normal form: x = η*(y) with y nondegenerate of dimension k."""
        return self._decompositions[(n, x)]

    def is_degenerate(self, n: int, x: Label) -> bool:
        return self.decompose(n, x)[0] != n

    @cached_property
    def nondegenerate(self) -> Tuple[Cell, ...]:
        return tuple((n, x) for n, level in enumerate(self.levels) for x in level
                     if not self.is_degenerate(n, x))

    def nondegenerate_census(self) -> List[int]:
        top = max([n for n, _ in self.nondegenerate], default=-1)
        counts = [0] * (top + 1)
        for n, _ in self.nondegenerate:
            counts[n] += 1
        return counts

    @cached_property
    def nondegenerate_faces(self) -> Dict[Cell, List[Tuple[int, Cell, Operator]]]:
        """For each nondegenerate cell, (j, τ, η) with d_j = η*(τ)."""
        result: Dict[Cell, List[Tuple[int, Cell, Operator]]] = {}
        for n, x in self.nondegenerate:
            entries = []
            if n > 0:
                for j in range(n + 1):
                    k, y, eta = self.decompose(n - 1, self.face(n, j, x))
                    entries.append((j, (k, y), eta))
            result[(n, x)] = entries
        return result

    @cached_property
    def maximal_cells(self) -> Tuple[Cell, ...]:
        """Nondegenerate cells that are not faces of a nondegenerate cell."""
        covered = {tau for entries in self.nondegenerate_faces.values() for _, tau, _ in entries}
        position = {cell: i for i, cell in enumerate(self.nondegenerate)}
        cells = [c for c in self.nondegenerate if c not in covered]
        return tuple(sorted(cells, key=lambda c: (-c[0], position[c])))

    def presentation(self, rename: Optional[Mapping[Label, Label]] = None
                     ) -> List[Tuple[Label, int, List[Label]]]:
        """Nondegenerate cells with their faces, relabelled through ``rename``."""
        rename = rename or {}

        def relabel(n, x):
            k, y, eta = self.decompose(n, x)
            y = rename.get(y, y)
            return y if k == n else (y, eta)

        return [(rename.get(x, x), n, [relabel(n - 1, self.face(n, j, x)) for j in range(n + 1)]
                 if n > 0 else [])
                for n, x in self.nondegenerate]

    @classmethod
    def from_presentation(cls, cells: Sequence[Tuple[Label, int, Sequence[Label]]],
                          trunc: Optional[int] = None, name: str = "") -> "FiniteSimplicialSet":
        """Generate all degeneracies of the given nondegenerate cells.

        Each cell is (label, dimension, faces d_0..d_n); a face is the label
        of a nondegenerate cell or ``(label, η)`` for a degeneracy of one.
        """
        dims = {label: dim for label, dim, _ in cells}
        declared = max(dims.values(), default=-1)
        trunc = declared + 1 if trunc is None else trunc
        if trunc < declared + 1:
            raise PreconditionError(
                f"truncation level {trunc} is below declared dimension {declared} + 1")
        face_labels = {label: list(faces) for label, _, faces in cells}
        for label, dim, faces in cells:
            if len(faces) != (dim + 1 if dim > 0 else 0):
                raise InvalidStructureError(f"cell {label!r} of dimension {dim} has {len(faces)} faces")

        def make(y, eta):
            return y if eta == identity_operator(dims[y]) else (y, eta)

        ez: Dict[Cell, Tuple[Label, Operator]] = {}
        levels: List[List[Label]] = []
        for n in range(trunc + 1):
            level = []
            for label, dim, _ in cells:
                if dim > n:
                    continue
                for eta in surjections(n, dim):
                    x = make(label, eta)
                    ez[(n, x)] = (label, eta)
                    level.append(x)
            levels.append(level)
        guard_cells(name or "simplicial set", sum(len(level) for level in levels))

        faces: Dict[Tuple[int, int, Label], Label] = {}
        degeneracies: Dict[Tuple[int, int, Label], Label] = {}
        for n in range(trunc + 1):
            for x in levels[n]:
                y, eta = ez[(n, x)]
                if n < trunc:
                    for i in range(n + 1):
                        degeneracies[(n, i, x)] = make(y, eta[:i + 1] + eta[i:])
                if n == 0:
                    continue
                for i in range(n + 1):
                    rest = eta[:i] + eta[i + 1:]
                    k = dims[y]
                    if set(rest) == set(range(k + 1)):
                        faces[(n, i, x)] = make(y, rest)
                        continue
                    j = eta[i]
                    z = face_labels[y][j]
                    if (k - 1, z) not in ez:
                        raise InvalidStructureError(
                            f"face {j} of {y!r} is not a simplex of level {k - 1}: {z!r}")
                    w, zeta = ez[(k - 1, z)]
                    shifted = tuple(v if v < j else v - 1 for v in rest)
                    faces[(n, i, x)] = make(w, tuple(zeta[v] for v in shifted))
        result = cls(trunc, declared, tuple(tuple(level) for level in levels), faces,
                     degeneracies, name=name)
        validate_sset(result).raise_if_failed()
        logger.debug("Built %s: census %s, truncated at %d", name or "simplicial set",
                     result.nondegenerate_census(), trunc)
        return result

    def __repr__(self) -> str:
        return f"FiniteSimplicialSet({self.name or '?'}: census {self.nondegenerate_census()})"


def validate_sset(a: FiniteSimplicialSet) -> ValidationReport:
    """Simplicial identities, degenerate top levels and unique EZ forms."""
    report = ValidationReport(a.name or "simplicial set")
    issues = report.issues
    top = a.trunc_level
    for n in range(top + 1):
        for x in a.levels[n]:
            for i in range(n + 1):
                if n > 0 and not a.contains(n - 1, a.faces.get((n, i, x), _MISSING)):
                    issues.append(f"face d{i} of {x!r} is missing")
                if n < top and not a.contains(n + 1, a.degeneracies.get((n, i, x), _MISSING)):
                    issues.append(f"degeneracy s{i} of {x!r} is missing")
    if issues:
        return report
    issues.extend(simplicial_identity_issues(sset_view(a)))
    d, s = a.face, a.degeneracy
    if a.skeletal:
        for n in range(a.declared_dim + 1, top + 1):
            for x in a.levels[n]:
                if not a.is_degenerate(n, x):
                    issues.append(f"nondegenerate {x!r} above declared dimension")
    for n in range(1, top + 1):
        for x in a.levels[n]:
            forms = set()
            for i in range(n):
                z = d(n, i, x)
                if s(n - 1, i, z) == x:
                    k, y, inner = a.decompose(n - 1, z)
                    sigma = tuple(t if t <= i else t - 1 for t in range(n + 1))
                    forms.add((k, y, tuple(inner[v] for v in sigma)))
            if len(forms) > 1:
                issues.append(f"{x!r} has more than one Eilenberg-Zilber form")
    return report


# -- maps --------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SimplicialMap:
    """Levelwise map on levels ≤ min of the two truncations."""
    dom: FiniteSimplicialSet
    cod: FiniteSimplicialSet
    on_simplices: Mapping[Cell, Label] = field(repr=False)
    name: str = ""

    @property
    def top(self) -> int:
        return min(self.dom.trunc_level, self.cod.trunc_level)

    def image(self, n: int, x: Label) -> Label:
        return self.on_simplices[(n, x)]

    @classmethod
    def from_nondegenerate(cls, dom: FiniteSimplicialSet, cod: FiniteSimplicialSet,
                           images: Mapping[Cell, Label], name: str = "") -> "SimplicialMap":
        top = min(dom.trunc_level, cod.trunc_level)
        table = {}
        for n in range(top + 1):
            for x in dom.levels[n]:
                k, y, eta = dom.decompose(n, x)
                table[(n, x)] = cod.degenerate(images[(k, y)], k, eta)
        return cls(dom, cod, table, name)

    def issues(self) -> List[str]:
        problems = []
        dom, cod, top = self.dom, self.cod, self.top
        for n in range(top + 1):
            for x in dom.levels[n]:
                fx = self.on_simplices.get((n, x), _MISSING)
                if not cod.contains(n, fx):
                    problems.append(f"{x!r} has no image at level {n}")
                    continue
                for i in range(n + 1):
                    if n > 0 and self.image(n - 1, dom.face(n, i, x)) != cod.face(n, i, fx):
                        problems.append(f"d{i} not preserved at {x!r}")
                    if n < top and self.on_simplices.get((n + 1, dom.degeneracy(n, i, x))) \
                            != cod.degeneracy(n, i, fx):
                        problems.append(f"s{i} not preserved at {x!r}")
        return problems

    def validated(self) -> "SimplicialMap":
        problems = self.issues()
        if problems:
            raise InvalidStructureError(f"invalid simplicial map {self.name}".strip(), problems)
        return self

    def is_injective(self) -> bool:
        for n in range(self.top + 1):
            if len({self.image(n, x) for x in self.dom.levels[n]}) != len(self.dom.levels[n]):
                return False
        return True


def inclusion(a: FiniteSimplicialSet, b: FiniteSimplicialSet) -> SimplicialMap:
    """The identity-on-labels map of a sub-simplicial set a ⊆ b."""
    top = min(a.trunc_level, b.trunc_level)
    for n in range(top + 1):
        for x in a.levels[n]:
            if not b.contains(n, x):
                raise PreconditionError(f"{x!r} of {a.name} is not a simplex of {b.name}")
    table = {(n, x): x for n in range(top + 1) for x in a.levels[n]}
    return SimplicialMap(a, b, table, name=f"{a.name} -> {b.name}").validated()


def vertex_inclusion(b: FiniteSimplicialSet, v: Label) -> SimplicialMap:
    """Δ⁰ → b picking the vertex v."""
    point = shape("simplex", 0, trunc=b.trunc_level)
    return SimplicialMap.from_nondegenerate(point, b, {(0, "0"): v}, name=f"{{{v}}}")


def terminal_map(a: FiniteSimplicialSet) -> SimplicialMap:
    point = shape("simplex", 0, trunc=a.trunc_level)
    return SimplicialMap.from_nondegenerate(
        a, point, {cell: point.degenerate("0", 0, (0,) * (cell[0] + 1))
                   for cell in a.nondegenerate}, name="!")


# -- shapes ------------------------------------------------------------------

def _vertex_name(vertices: Sequence[int]) -> str:
    return "".join(str(v) for v in vertices)


def _subset_presentation(subsets: Iterable[Tuple[int, ...]]):
    subsets = sorted(set(subsets), key=lambda s: (len(s), s))
    return [(_vertex_name(s), len(s) - 1,
             [_vertex_name(s[:j] + s[j + 1:]) for j in range(len(s))] if len(s) > 1 else [])
            for s in subsets]


def _nonempty_subsets(n: int) -> List[Tuple[int, ...]]:
    return [s for r in range(1, n + 2) for s in combinations(range(n + 1), r)]


_J2_CELLS = [
    ("0", 0, []), ("1", 0, []),
    ("g", 1, ["1", "0"]),
    ("f", 1, ["0", "1"]),
    ("sigma", 2, ["f", ("0", (0, 0)), "g"]),
]


def shape(kind: str, *params: int, trunc: Optional[int] = None) -> FiniteSimplicialSet:
    """Standard weights: simplex n, boundary n, horn n k, spine n, J2, K.

    Simplices of the Δⁿ family are named by their vertex strings ("012").
    J2 has vertices 0, 1, edges g: 0 → 1 and f: 1 → 0 and one 2-simplex sigma
    with d1 = s0(0). K glues a second copy along f; its extra edge is h: 0 → 1
    and its extra 2-simplex is tau.
    """
    if kind in ("simplex", "boundary", "spine"):
        if len(params) != 1 or params[0] < 0:
            raise PreconditionError(f"{kind} takes one natural number")
        n = params[0]
        if kind == "simplex":
            subsets = _nonempty_subsets(n)
        elif kind == "boundary":
            subsets = [s for s in _nonempty_subsets(n) if len(s) <= n]
        else:
            subsets = [(i,) for i in range(n + 1)] + [(i, i + 1) for i in range(n)]
        return FiniteSimplicialSet.from_presentation(
            _subset_presentation(subsets), trunc, name=f"{kind}({n})")
    if kind == "horn":
        if len(params) != 2:
            raise PreconditionError("horn takes n and k")
        n, k = params
        if n < 1 or not 0 <= k <= n:
            raise PreconditionError(f"horn({n}, {k}): k must lie in 0..{n} with n >= 1")
        missing = tuple(v for v in range(n + 1) if v != k)
        subsets = [s for s in _nonempty_subsets(n) if len(s) <= n and s != missing]
        return FiniteSimplicialSet.from_presentation(
            _subset_presentation(subsets), trunc, name=f"horn({n},{k})")
    if kind == "J2":
        return FiniteSimplicialSet.from_presentation(_J2_CELLS, trunc, name="J2")
    if kind == "K":
        return _walking_biinvertible(trunc)
    raise PreconditionError(f"unknown shape {kind!r}")


def _walking_biinvertible(trunc: Optional[int]) -> FiniteSimplicialSet:
    first = shape("J2", trunc=trunc)
    second = shape("J2", trunc=trunc)
    edge = shape("simplex", 1, trunc=first.trunc_level)
    pick_f = SimplicialMap.from_nondegenerate(
        edge, first, {(0, "0"): "1", (0, "1"): "0", (1, "01"): "f"}, name="f")
    pick_g = SimplicialMap.from_nondegenerate(
        edge, second, {(0, "0"): "0", (0, "1"): "1", (1, "01"): "g"}, name="g")
    glued = pushout_sset(pick_f, pick_g)
    rename = {(0, "0"): "0", (0, "1"): "1", (0, "g"): "g", (0, "f"): "f",
              (0, "sigma"): "sigma", (1, "f"): "h", (1, "sigma"): "tau"}
    return FiniteSimplicialSet.from_presentation(
        glued.presentation(rename), glued.trunc_level, name="K")


def pushout_sset(f: SimplicialMap, g: SimplicialMap, name: str = "") -> FiniteSimplicialSet:
    """Levelwise pushout of f: C → A and g: C → B; labels are (0, a) and (1, b)."""
    if f.dom is not g.dom:
        raise PreconditionError("pushout needs two maps out of the same simplicial set")
    a, b, c = f.cod, g.cod, f.dom
    top = min(f.top, g.top)
    parent: Dict[Cell, Cell] = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            keep, drop = sorted((rx, ry), key=lambda z: (z[1][0], sort_key(z[1][1])))
            parent[drop] = keep

    for n in range(top + 1):
        for x in a.levels[n]:
            parent[(n, (0, x))] = (n, (0, x))
        for y in b.levels[n]:
            parent[(n, (1, y))] = (n, (1, y))
        for z in c.levels[n]:
            union((n, (0, f.image(n, z))), (n, (1, g.image(n, z))))

    levels = []
    for n in range(top + 1):
        seen, level = set(), []
        for x in [(0, x) for x in a.levels[n]] + [(1, y) for y in b.levels[n]]:
            r = find((n, x))[1]
            if r not in seen:
                seen.add(r)
                level.append(r)
        levels.append(tuple(level))
    sides = (a, b)
    faces, degeneracies = {}, {}
    for n in range(top + 1):
        for side, x in levels[n]:
            part = sides[side]
            for i in range(n + 1):
                if n > 0:
                    faces[(n, i, (side, x))] = find((n - 1, (side, part.face(n, i, x))))[1]
                if n < top:
                    degeneracies[(n, i, (side, x))] = find((n + 1, (side, part.degeneracy(n, i, x))))[1]
    result = FiniteSimplicialSet(
        top, max(a.declared_dim, b.declared_dim), tuple(levels), faces, degeneracies,
        name=name or f"{a.name} + {b.name}", skeletal=a.skeletal and b.skeletal)
    validate_sset(result).raise_if_failed()
    return result


# -- family search -----------------------------------------------------------

@dataclass(frozen=True)
class LevelView:
    """Read access to the levels of a simplicial object for the family search."""
    elements: Callable[[int], Sequence[Label]]
    face: FaceFn
    degeneracy: DegeneracyFn
    top: int


def sset_view(x: FiniteSimplicialSet) -> LevelView:
    return LevelView(lambda n: x.levels[n], x.face, x.degeneracy, x.trunc_level)


def simplicial_identity_issues(view: LevelView, what: str = "") -> List[str]:
    """Every failure of the simplicial identities on levels ≤ view.top."""
    issues = []
    d, s, top = view.face, view.degeneracy, view.top
    for n in range(top + 1):
        for x in view.elements(n):
            for i in range(n + 1):
                for j in range(i + 1, n + 1):
                    if n >= 2 and d(n - 1, i, d(n, j, x)) != d(n - 1, j - 1, d(n, i, x)):
                        issues.append(f"{what}d{i}d{j} != d{j - 1}d{i} at {x!r}")
            if n + 2 <= top:
                for i in range(n + 1):
                    for j in range(i, n + 1):
                        if s(n + 1, i, s(n, j, x)) != s(n + 1, j + 1, s(n, i, x)):
                            issues.append(f"{what}s{i}s{j} != s{j + 1}s{i} at {x!r}")
            if n + 1 <= top:
                for j in range(n + 1):
                    y = s(n, j, x)
                    for i in range(n + 2):
                        got = d(n + 1, i, y)
                        if i in (j, j + 1):
                            want = x
                        elif i < j:
                            want = s(n - 1, j - 1, d(n, i, x))
                        else:
                            want = s(n - 1, j, d(n, i - 1, x))
                        if got != want:
                            issues.append(f"{what}d{i}s{j} identity fails at {x!r}")
    return issues


def compatible_families(weight: FiniteSimplicialSet, view: LevelView,
                        fixed: Optional[Mapping[Cell, Label]] = None,
                        allowed: Optional[Callable[[int, Label, Label], bool]] = None,
                        what: str = "families") -> Iterator[Dict[Cell, Label]]:
    """Assignments of nondegenerate cells of ``weight`` compatible with all faces.

    A family is searched over the maximal cells, highest dimension first;
    every lower cell is forced through its faces, so degenerate faces are
    checked against η* of the forced value. ``fixed`` pins cells in advance
    and ``allowed(n, cell, value)`` filters values.
    """
    needed = max((n for n, _ in weight.nondegenerate), default=-1)
    if needed > view.top:
        raise PreconditionError(
            f"{weight.name} needs level {needed} but the target stops at {view.top}")
    faces_of = weight.nondegenerate_faces
    limit = current_budget().max_candidates
    indexes: Dict[Tuple[int, int], Dict[Label, List[Label]]] = {}
    assignment: Dict[Cell, Label] = {}
    tried = 0

    def index(n, j):
        table = indexes.get((n, j))
        if table is None:
            table = {}
            for x in view.elements(n):
                table.setdefault(view.face(n, j, x), []).append(x)
            indexes[(n, j)] = table
        return table

    def assign(cell, value, trail) -> bool:
        current = assignment.get(cell, _MISSING)
        if current is not _MISSING:
            return current == value
        n = cell[0]
        if allowed is not None and not allowed(n, cell[1], value):
            return False
        assignment[cell] = value
        trail.append(cell)
        for j, tau, eta in faces_of[cell]:
            y = view.face(n, j, value)
            candidate = section_face(view.face, y, n - 1, eta)
            if degenerate(view.degeneracy, candidate, tau[0], eta) != y:
                return False
            if not assign(tau, candidate, trail):
                return False
        return True

    def search(pos):
        nonlocal tried
        if pos == len(maximal):
            yield dict(assignment)
            return
        cell = maximal[pos]
        if cell in assignment:
            yield from search(pos + 1)
            return
        n = cell[0]
        candidates = None
        for j, tau, eta in faces_of[cell]:
            if tau in assignment:
                wanted = degenerate(view.degeneracy, assignment[tau], tau[0], eta)
                candidates = index(n, j).get(wanted, ())
                break
        if candidates is None:
            candidates = view.elements(n)
        for value in candidates:
            tried += 1
            if tried > limit:
                logger.warning("Budget exhausted searching %s", what)
                raise BudgetExceeded(what, limit, tried)
            trail: List[Cell] = []
            if assign(cell, value, trail):
                yield from search(pos + 1)
            for c in trail:
                del assignment[c]

    maximal = weight.maximal_cells
    trail: List[Cell] = []
    for cell, value in (fixed or {}).items():
        if not assign(cell, value, trail):
            return
    yield from search(0)


def enumerate_maps(a: FiniteSimplicialSet, x: FiniteSimplicialSet,
                   fixed: Optional[Mapping[Cell, Label]] = None,
                   allowed: Optional[Callable[[int, Label, Label], bool]] = None
                   ) -> List[SimplicialMap]:
    """All simplicial maps a → x, in search order."""
    result = [SimplicialMap.from_nondegenerate(a, x, family)
              for family in compatible_families(a, sset_view(x), fixed, allowed,
                                                what=f"maps {a.name} -> {x.name}")]
    logger.debug("Enumerated %d maps %s -> %s", len(result), a.name, x.name)
    return result


def is_isomorphic_sset(a: FiniteSimplicialSet, b: FiniteSimplicialSet) -> bool:
    if a.nondegenerate_census() != b.nondegenerate_census():
        return False
    sizes = [len(level) for level in b.levels]
    for f in enumerate_maps(a, b):
        if f.is_injective() and all(len(a.levels[n]) == sizes[n] for n in range(f.top + 1)):
            return True
    return False


# -- lifting -----------------------------------------------------------------

@dataclass
class LiftingResult:
    """``witness`` is a lift when ``holds`` and the failing square (a, b) otherwise."""
    holds: bool
    witness: Optional[object] = None
    squares: int = 0


def has_rlp(f: SimplicialMap, i: SimplicialMap) -> LiftingResult:
    """Does f: E → B have the right lifting property against i: A → A′?"""
    if not i.is_injective():
        raise PreconditionError(f"{i.name or 'i'} is not levelwise injective")
    e, base = f.dom, f.cod
    a, a2 = i.dom, i.cod
    first_lift = None
    squares = 0
    for b in enumerate_maps(a2, base):
        tops = enumerate_maps(
            a, e, allowed=lambda n, x, v, b=b: f.image(n, v) == b.image(n, i.image(n, x)))
        for top in tops:
            squares += 1
            fixed = {(n, i.image(n, x)): top.image(n, x) for n, x in a.nondegenerate}
            lifts = compatible_families(
                a2, sset_view(e), fixed,
                allowed=lambda n, x, v, b=b: f.image(n, v) == b.image(n, x),
                what=f"lifts against {i.name}")
            lift = next(lifts, None)
            if lift is None:
                logger.debug("No lift for square %d against %s", squares, i.name)
                return LiftingResult(False, (top, b), squares)
            if first_lift is None:
                first_lift = SimplicialMap.from_nondegenerate(a2, e, lift, name="lift")
    return LiftingResult(True, first_lift, squares)


# -- nerves of finite categories ---------------------------------------------

@dataclass(frozen=True, eq=False)
class FiniteCategory:
    """A finite category by tables; ``composer(g, f)`` is g∘f."""
    objects: Tuple[Label, ...]
    morphisms: Tuple[Label, ...]
    src: Mapping[Label, Label]
    tgt: Mapping[Label, Label]
    ident: Mapping[Label, Label]
    composer: Callable[[Label, Label], Label] = field(repr=False)
    name: str = ""

    @classmethod
    def poset(cls, elements: Sequence[Label], relations: Iterable[Tuple[Label, Label]],
              name: str = "") -> "FiniteCategory":
        """The poset generated by ``relations``; the morphism a ≤ b is labelled "a<=b"."""
        elements = tuple(elements)
        leq = {(x, x) for x in elements} | set(relations)
        changed = True
        while changed:
            changed = False
            for a, b in list(leq):
                for c, d in list(leq):
                    if b == c and (a, d) not in leq:
                        leq.add((a, d))
                        changed = True
        for a, b in leq:
            if a != b and (b, a) in leq:
                raise InvalidStructureError(f"relations are not antisymmetric at {a!r}, {b!r}")
        pairs = [(a, b) for a in elements for b in elements if (a, b) in leq]
        labels = {pair: f"{pair[0]}<={pair[1]}" for pair in pairs}
        ends = {labels[pair]: pair for pair in pairs}
        return cls(elements, tuple(labels.values()),
                   {m: ends[m][0] for m in ends}, {m: ends[m][1] for m in ends},
                   {x: labels[(x, x)] for x in elements},
                   lambda g, f: labels[(ends[f][0], ends[g][1])],
                   name=name or "poset")

    @classmethod
    def of_groupoid(cls, g: Groupoid) -> "FiniteCategory":
        return cls(g.objects, g.morphisms, g.src, g.tgt, g.ident, g.compose, name=g.name)


def nerve_of_category(c: FiniteCategory, trunc: Optional[int] = None,
                      name: str = "") -> FiniteSimplicialSet:
    """N(C) up to ``trunc``: level n holds composable strings (f1, ..., fn).

    Without ``trunc`` the nerve must be finite dimensional; it is then cut at
    its dimension + 1.
    """
    out: Dict[Label, List[Label]] = {x: [] for x in c.objects}
    for m in c.morphisms:
        out[c.src[m]].append(m)
    identities = set(c.ident.values())
    cap = trunc if trunc is not None else len(c.objects) + 1
    levels: List[List[Label]] = [list(c.objects), [(m,) for m in c.morphisms]]
    top_nondegenerate = 1 if any(m not in identities for m in c.morphisms) else 0
    n = 1
    while n < cap:
        if trunc is None and top_nondegenerate < n:
            break
        nxt = [chain + (m,) for chain in levels[n] for m in out[c.tgt[chain[-1]]]]
        guard_cells(name or f"N({c.name})", sum(len(level) for level in levels) + len(nxt))
        levels.append(nxt)
        n += 1
        if any(all(m not in identities for m in chain) for chain in nxt):
            top_nondegenerate = n
    if trunc is None:
        if top_nondegenerate >= n:
            raise PreconditionError(
                f"N({c.name}) has nondegenerate simplices in every dimension; pass trunc")
        levels = levels[:top_nondegenerate + 2]
        trunc = top_nondegenerate + 1
    else:
        levels = levels[:trunc + 1]
        while len(levels) < trunc + 1:
            levels.append([])

    def vertex(n, x, i):
        if n == 0:
            return x
        return c.src[x[0]] if i == 0 else c.tgt[x[i - 1]]

    faces, degeneracies = {}, {}
    for n, level in enumerate(levels):
        for x in level:
            if n < trunc:
                for i in range(n + 1):
                    unit = c.ident[vertex(n, x, i)]
                    degeneracies[(n, i, x)] = (unit,) if n == 0 else x[:i] + (unit,) + x[i:]
            if n == 0:
                continue
            for i in range(n + 1):
                if n == 1:
                    faces[(n, i, x)] = c.tgt[x[0]] if i == 0 else c.src[x[0]]
                elif i == 0:
                    faces[(n, i, x)] = x[1:]
                elif i == n:
                    faces[(n, i, x)] = x[:-1]
                else:
                    faces[(n, i, x)] = x[:i - 1] + (c.composer(x[i], x[i - 1]),) + x[i + 1:]
    skeletal = top_nondegenerate < trunc
    declared = top_nondegenerate if skeletal else trunc - 1
    return FiniteSimplicialSet(trunc, declared, tuple(tuple(level) for level in levels),
                               faces, degeneracies, name=name or f"N({c.name})",
                               skeletal=skeletal)


def nerve_of_functor(f: GroupoidMap, trunc: int = 3) -> SimplicialMap:
    """N(f) between the truncated nerves of two groupoids."""
    dom = nerve_of_category(FiniteCategory.of_groupoid(f.dom), trunc)
    cod = nerve_of_category(FiniteCategory.of_groupoid(f.cod), trunc)
    table = {}
    for n, level in enumerate(dom.levels):
        for x in level:
            table[(n, x)] = f.obj(x) if n == 0 else tuple(f.mor(m) for m in x)
    return SimplicialMap(dom, cod, table, name=f"N({f.name})")


# -- deciders ----------------------------------------------------------------

def inner_horn_inclusions(dim_bound: int) -> Iterator[SimplicialMap]:
    for n in range(2, dim_bound + 1):
        for k in range(1, n):
            yield inclusion(shape("horn", n, k), shape("simplex", n))


def is_quasi_category(x: FiniteSimplicialSet, dim_bound: int) -> bool:
    to_point = terminal_map(x)
    return all(has_rlp(to_point, i).holds for i in inner_horn_inclusions(dim_bound))


@dataclass
class SSetMapProfile:
    mid_fibration: bool
    quasi_fibration: bool
    dim_bound: int
    caveat: str = ""
    witness: Optional[dict] = None

    def as_dict(self) -> dict:
        return {"mid_fibration": self.mid_fibration, "quasi_fibration": self.quasi_fibration,
                "dim_bound": self.dim_bound, "caveat": self.caveat}


def classify_sset_map(f: SimplicialMap, dim_bound: int = 3) -> SSetMapProfile:
    """Mid-fibration (inner horns up to ``dim_bound``) and quasi-fibration ({1}: Δ⁰ → K)."""
    for side in (f.dom, f.cod):
        if side.trunc_level < dim_bound:
            raise PreconditionError(
                f"{side.name} is truncated at {side.trunc_level}, below dim_bound {dim_bound}")
        if not is_quasi_category(side, dim_bound):
            raise PreconditionError(
                f"{side.name} fails inner horn filling up to dimension {dim_bound}")
    caveat = ""
    if not (f.dom.skeletal and f.cod.skeletal):
        caveat = f"inputs are truncated; verdict holds up to dimension {dim_bound}"
        logger.warning("Classifying %s: %s", f.name or "map", caveat)
    witness = None
    mid = True
    for i in inner_horn_inclusions(dim_bound):
        result = has_rlp(f, i)
        if not result.holds:
            mid = False
            witness = {"against": i.dom.name}
            break
    quasi = mid
    if mid:
        k = shape("K")
        quasi = has_rlp(f, vertex_inclusion(k, "1")).holds
        if not quasi:
            witness = {"against": "{1} -> K"}
    return SSetMapProfile(mid, quasi, dim_bound, caveat, witness)
