"""JSON payloads for library objects and file exporters for harness reports."""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional

import pandas as pd

from .fibrations import CompletionResult, Fibration, FibrationSquare
from .groupoid import FunctorProfile, Groupoid, GroupoidMap, ValidationReport, sort_key
from .harness import Report
from .models import GroupoidMapModel, GroupoidModel, SimplicialSetModel, label_text
from .segal import DKProfile, TruncatedSimplicialGroupoid, WeightedLimit
from .simpset import FiniteSimplicialSet, SSetMapProfile

logger = logging.getLogger(__name__)


def jsonable(value: Any) -> Any:
    """Labels and witnesses as JSON: tuples become lists, other labels their repr."""
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, dict):
        return {label_text(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return sort_key(value)


def groupoid_payload(g: Groupoid) -> Dict[str, Any]:
    return GroupoidModel.from_groupoid(g).model_dump()


def groupoid_summary(g: Groupoid) -> Dict[str, Any]:
    return {
        "name": g.name,
        "objects": len(g.objects),
        "morphisms": len(g.morphisms),
        "components": [[label_text(x) for x in comp] for comp in g.components],
    }


def map_payload(f: GroupoidMap) -> Dict[str, Any]:
    return GroupoidMapModel.from_map(f).model_dump()


def profile_payload(profile) -> Dict[str, Any]:
    if isinstance(profile, (FunctorProfile, DKProfile, SSetMapProfile)):
        return jsonable(profile.as_dict())
    raise TypeError(f"no payload for {type(profile).__name__}")


def fibration_payload(p: Fibration) -> Dict[str, Any]:
    return {
        "name": p.name,
        "total": groupoid_summary(p.total),
        "base": groupoid_summary(p.base),
        "fibers": {label_text(a): len(p.fiber(a).objects) for a in p.base.objects},
    }


def square_payload(sq: FibrationSquare) -> Dict[str, Any]:
    return {
        "name": sq.name,
        "left": sq.p.name,
        "right": sq.p2.name,
        "top": map_payload(sq.top),
        "bottom": map_payload(sq.bottom),
    }


def completion_payload(result: CompletionResult) -> Dict[str, Any]:
    return {
        "classifying_map": map_payload(result.classifying.bottom),
        "completed": fibration_payload(result.up),
        "iota": map_payload(result.iota),
    }


def simplicial_groupoid_payload(x: TruncatedSimplicialGroupoid) -> Dict[str, Any]:
    return {
        "name": x.name,
        "truncation": x.m,
        "levels": [groupoid_summary(level) for level in x.levels],
    }


def sset_payload(a: FiniteSimplicialSet) -> Dict[str, Any]:
    payload = SimplicialSetModel.from_simplicial_set(a).model_dump()
    payload["census"] = a.nondegenerate_census()
    return payload


def weighted_limit_payload(lim: WeightedLimit, full: bool = False) -> Dict[str, Any]:
    payload = {
        "weight": lim.weight.name,
        "diagram": lim.diagram.name,
        "coordinates": [[n, label_text(y)] for n, y in lim.cells],
        "apex": groupoid_summary(lim.apex),
    }
    if full:
        payload["apex_tables"] = groupoid_payload(lim.apex)
    return payload


def report_payload(report: ValidationReport) -> Dict[str, Any]:
    return report.to_dict()


class JsonExporter:
    """Write any payload dict as stable-ordered JSON."""

    def __init__(self, payload: Dict[str, Any]):
        self.payload = payload

    def dumps(self) -> str:
        return json.dumps(jsonable(self.payload), indent=2, sort_keys=True, ensure_ascii=False)

    def export(self, file_path: str) -> None:
        Path(file_path).write_text(self.dumps() + "\n", encoding="utf-8")
        logger.info("Wrote %s", file_path)


class ReportExporter:
    """Export a theorem-suite report as JSON, with the per-instance rows as CSV."""

    def __init__(self, report: Report):
        self.report = report

    def export(self, file_path: Optional[str] = None, rows_path: Optional[str] = None,
               timing: bool = True) -> None:
        """Write the JSON report and/or the CSV rows; either path may be left out."""
        if file_path:
            JsonExporter(self.report.to_dict(timing=timing)).export(file_path)
        if rows_path:
            self.export_rows(rows_path, timing)

    def export_rows(self, rows_path: str, timing: bool = True) -> None:
        frame: pd.DataFrame = self.report.rows.copy()
        frame["detail"] = frame["detail"].map(lambda d: json.dumps(jsonable(d), sort_keys=True))
        if not timing:
            frame = frame.drop(columns=["seconds"])
        frame.to_csv(rows_path, index=False)
        logger.info("Wrote %d instance rows to %s", len(frame), rows_path)
