"""Pydantic models: harness configuration and the JSON interchange format."""

from typing import Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, Field, field_validator

from .budget import Budget
from .groupoid import Groupoid, GroupoidMap, Label, sort_key
from .simpset import FiniteSimplicialSet

GROUP_POOL = ("trivial", "Z2", "Z3", "S3")

SUITES = (
    "univalent_iff_complete",
    "oracle_agreement",
    "pullback_univalence",
    "bm_levelwise",
    "rezk_completion",
    "dk_levelwise",
    "homotopy_invariance",
    "weighted_limits",
    "shape_census",
    "nerve_quasi_fibration",
)

DEFAULT_COUNTS = {
    "univalent_iff_complete": 200,
    "oracle_agreement": 200,
    "pullback_univalence": 100,
    "bm_levelwise": 60,
    "rezk_completion": 50,
    "dk_levelwise": 50,
    "homotopy_invariance": 25,
    "weighted_limits": 20,
    "shape_census": 1,
    "nerve_quasi_fibration": 30,
}


class GenConfig(BaseModel):
    """Settings for the random instance generators and the theorem suites."""
    seed: int = 0
    max_base_objects: int = 4
    max_fiber_objects: int = 3
    group_pool: List[str] = Field(default_factory=lambda: ["trivial", "Z2", "Z3"])
    counts: Dict[str, int] = Field(default_factory=lambda: dict(DEFAULT_COUNTS))
    segal_level: int = 3
    fault_injection: Optional[str] = None

    @field_validator("max_base_objects", "max_fiber_objects")
    @classmethod
    def validate_bounds(cls, v):
        if v <= 0:
            raise ValueError("Generator bounds must be positive")
        return v

    @field_validator("group_pool")
    @classmethod
    def validate_pool(cls, v):
        if not v:
            raise ValueError("Group pool cannot be empty")
        unknown = [g for g in v if g not in GROUP_POOL]
        if unknown:
            raise ValueError(f"Unknown groups in pool: {', '.join(unknown)}")
        return v

    @field_validator("counts")
    @classmethod
    def validate_counts(cls, v):
        unknown = [s for s in v if s not in SUITES]
        if unknown:
            raise ValueError(f"Unknown suites: {', '.join(unknown)}")
        if any(n < 0 for n in v.values()):
            raise ValueError("Suite counts cannot be negative")
        return v

    @field_validator("segal_level")
    @classmethod
    def validate_level(cls, v):
        if v < 2:
            raise ValueError("Segal truncation level must be at least 2")
        return v

    @field_validator("fault_injection")
    @classmethod
    def validate_fault(cls, v):
        if v is not None and v not in SUITES:
            raise ValueError(f"Cannot inject a fault into unknown suite {v!r}")
        return v

    def count(self, suite: str) -> int:
        return self.counts.get(suite, 0)

    @classmethod
    def zero(cls, **kwargs) -> "GenConfig":
        return cls(counts={s: 0 for s in SUITES}, **kwargs)


def label_text(label: Label) -> str:
    """Interchange spelling of a label: strings stay, anything else is repr'd."""
    return label if isinstance(label, str) else sort_key(label)


class GroupoidModel(BaseModel):
    """A groupoid as explicit tables; composition rows are [g, f, g∘f]."""
    name: str = ""
    objects: List[str]
    morphisms: Dict[str, Tuple[str, str]]
    identities: Dict[str, str]
    composition: List[Tuple[str, str, str]] = Field(default_factory=list)

    @field_validator("objects")
    @classmethod
    def validate_objects(cls, v):
        if len(set(v)) != len(v):
            raise ValueError("Object labels must be distinct")
        return v

    @field_validator("identities")
    @classmethod
    def validate_identities(cls, v, info):
        morphisms = info.data.get("morphisms", {})
        for obj, ident in v.items():
            if ident not in morphisms:
                raise ValueError(f"Identity of {obj!r} is not a declared morphism")
        return v

    def to_groupoid(self) -> Groupoid:
        """Build the groupoid; law violations surface through validate_groupoid."""
        return Groupoid.from_tables(
            self.objects, dict(self.morphisms), dict(self.identities),
            {(g, f): h for g, f, h in self.composition}, name=self.name)

    @classmethod
    def from_groupoid(cls, g: Groupoid) -> "GroupoidModel":
        rows = [(label_text(h), label_text(f), label_text(c))
                for (h, f), c in sorted(g.comp_table.items(), key=sort_key)
                if not g.is_identity(h) and not g.is_identity(f)]
        return cls(
            name=g.name,
            objects=[label_text(x) for x in g.objects],
            morphisms={label_text(f): (label_text(g.src[f]), label_text(g.tgt[f]))
                       for f in g.morphisms},
            identities={label_text(x): label_text(g.ident[x]) for x in g.objects},
            composition=rows)


class GroupoidMapModel(BaseModel):
    name: str = ""
    dom: str
    cod: str
    objects: Dict[str, str]
    morphisms: Dict[str, str]

    def to_groupoid_map(self, dom: Groupoid, cod: Groupoid) -> GroupoidMap:
        """Resolve labels against the given groupoids and validate the functor."""
        return GroupoidMap(dom, cod, dict(self.objects), dict(self.morphisms),
                           name=self.name).validated()

    @classmethod
    def from_map(cls, f: GroupoidMap) -> "GroupoidMapModel":
        return cls(
            name=f.name, dom=f.dom.name, cod=f.cod.name,
            objects={label_text(x): label_text(y) for x, y in f.on_objects.items()},
            morphisms={label_text(u): label_text(v) for u, v in f.on_morphisms.items()})


class DegenerateFace(BaseModel):
    """A face that is η*(cell) for a monotone surjection η."""
    cell: str
    eta: List[int]

    @field_validator("eta")
    @classmethod
    def validate_eta(cls, v):
        if not v or v[0] != 0 or any(b - a not in (0, 1) for a, b in zip(v, v[1:])):
            raise ValueError("eta must be a monotone surjection starting at 0")
        return v


class CellModel(BaseModel):
    name: str
    dim: int
    faces: List[Union[str, DegenerateFace]] = Field(default_factory=list)

    @field_validator("dim")
    @classmethod
    def validate_dim(cls, v):
        if v < 0:
            raise ValueError("Cell dimension cannot be negative")
        return v


class SimplicialSetModel(BaseModel):
    """Nondegenerate cells with their faces d_0..d_n."""
    name: str = ""
    trunc: Optional[int] = None
    cells: List[CellModel]

    def to_simplicial_set(self) -> FiniteSimplicialSet:
        presentation = []
        for cell in self.cells:
            faces = [face if isinstance(face, str) else (face.cell, tuple(face.eta))
                     for face in cell.faces]
            presentation.append((cell.name, cell.dim, faces))
        return FiniteSimplicialSet.from_presentation(presentation, self.trunc, name=self.name)

    @classmethod
    def from_simplicial_set(cls, a: FiniteSimplicialSet) -> "SimplicialSetModel":
        cells = []
        for label, dim, faces in a.presentation():
            cells.append(CellModel(
                name=label_text(label), dim=dim,
                faces=[label_text(face) if not isinstance(face, tuple) or len(face) != 2
                       or not isinstance(face[1], tuple)
                       else DegenerateFace(cell=label_text(face[0]), eta=list(face[1]))
                       for face in faces]))
        return cls(name=a.name, trunc=a.trunc_level, cells=cells)


__all__ = [
    "Budget",
    "GenConfig",
    "GroupoidModel",
    "GroupoidMapModel",
    "SimplicialSetModel",
    "CellModel",
    "DegenerateFace",
    "label_text",
]
