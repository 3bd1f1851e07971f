import functools
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import click
from pydantic import ValidationError

from . import __version__
from .budget import Budget, budget_scope
from .dsl import ModelFile, parse
from .errors import GroupoidError, PreconditionError
from .exporters import (
    JsonExporter,
    ReportExporter,
    completion_payload,
    fibration_payload,
    jsonable,
    map_payload,
    report_payload,
    simplicial_groupoid_payload,
    sset_payload,
    weighted_limit_payload,
)
from .fibrations import (
    classify,
    is_bm_equivalence,
    is_univalent_fibration,
    univalence_witness,
    univalent_complete,
    verify_homotopy_cartesian,
)
from .groupoid import is_essentially_surjective, validate_groupoid
from .harness import run_theorem_suite
from .models import DEFAULT_COUNTS, SUITES, GenConfig, GroupoidModel, SimplicialSetModel
from .segal import (
    TruncatedSimplicialGroupoid,
    complete_witness,
    dk_classify,
    induced_nerve_map,
    is_complete,
    is_reedy_fibrant,
    is_univalent_segal,
    nerve,
    reedy_replace,
    rezk_complete_nerve,
    univalence_witness_segal,
    validate_simplicial_groupoid,
    weighted_limit,
)
from .simpset import FiniteSimplicialSet, shape, validate_sset

logger = logging.getLogger(__name__)

Outcome = Tuple[bool, Dict, List[str]]


def emit_option(func):
    return click.option('--emit', type=click.Choice(['text', 'json']), default='text',
                        help='Output format')(func)


def _finish(emit: str, passed: bool, payload: Dict, lines: List[str]) -> None:
    if emit == 'json':
        click.echo(JsonExporter({"passed": passed, **payload}).dumps())
    else:
        for line in lines:
            click.echo(line)
    if not passed:
        sys.exit(1)


def _error(emit: str, payload: Dict) -> None:
    if emit == 'json':
        click.echo(JsonExporter(payload).dumps())
    else:
        click.echo(f"✗ Error ({payload['error']}): {payload['reason']}", err=True)
    sys.exit(2)


def verdict_command(func):
    """Run a command body under the active budget and map its outcome to 0/1/2."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        emit = kwargs.get('emit', 'text')
        ctx = click.get_current_context()
        try:
            with budget_scope(ctx.obj['budget']):
                passed, payload, lines = func(*args, **kwargs)
        except GroupoidError as e:
            logger.info("Command failed: %s", e)
            _error(emit, e.to_dict())
        except ValidationError as e:
            _error(emit, {"error": "config", "reason": str(e)})
        _finish(emit, passed, payload, lines)
    return wrapper


def _mark(ok: bool) -> str:
    return "✓" if ok else "✗"


def _load(model_file: str) -> ModelFile:
    return parse(Path(model_file).read_text(encoding='utf-8'))


def _segal_object(model: ModelFile, name: str, level: int) -> TruncatedSimplicialGroupoid:
    """A declared segal object, or the nerve of a declared fibration."""
    if name in model.segal:
        return model.build_segal(name)
    if name in model.fibrations:
        return nerve(model.fibrations[name], level)
    raise PreconditionError(f"{name!r} is neither a segal object nor a fibration")


def _shape(words: Sequence[str], trunc: Optional[int]) -> FiniteSimplicialSet:
    if not words:
        raise PreconditionError("no shape given")
    try:
        params = [int(w) for w in words[1:]]
    except ValueError:
        raise PreconditionError(f"shape parameters must be numbers: {' '.join(words[1:])}")
    return shape(words[0], *params, trunc=trunc)


@click.group()
@click.version_option(version=__version__)
@click.option('--verbose', '-v', is_flag=True, help='Log progress at INFO level')
@click.option('--budget', '-b', default=1.0, type=float,
              help='Scale every enumeration and size bound by this factor')
@click.pass_context
def cli(ctx, verbose: bool, budget: float):
    """Finite groupoid toolkit: univalent fibrations and complete Segal objects.

    Model files use the .gpd language; every command accepts --emit json and
    exits with 0 (pass), 1 (fail) or 2 (error).
    """
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING)
    if budget <= 0:
        raise click.BadParameter("must be positive", param_hint="--budget")
    ctx.obj = {"budget": Budget().scaled(budget)}


@cli.command()
@click.argument('model_file', type=click.Path(exists=True))
@emit_option
@verdict_command
def validate(model_file: str, emit: str) -> Outcome:
    """Validate every groupoid and functor of a .gpd file (or a JSON groupoid/simplicial set)."""
    if model_file.endswith('.json'):
        data = json.loads(Path(model_file).read_text(encoding='utf-8'))
        if "cells" in data:
            reports = [validate_sset(SimplicialSetModel(**data).to_simplicial_set())]
        else:
            reports = [validate_groupoid(GroupoidModel(**data).to_groupoid())]
    else:
        model = _load(model_file)
        reports = model.validate()
        reports.extend(validate_simplicial_groupoid(model.build_segal(name))
                       for name in model.segal)
    passed = all(r.ok for r in reports)
    lines = [f"{_mark(passed)} {model_file}: {len(reports)} structures checked"]
    for report in reports:
        lines.append(f"  {_mark(report.ok)} {report.subject}")
        lines.extend(f"      {issue}" for issue in report.issues)
    return passed, {"reports": [report_payload(r) for r in reports]}, lines


@cli.command('check-univalent')
@click.argument('model_file', type=click.Path(exists=True))
@click.argument('name')
@click.option('--oracle', is_flag=True, help='Cross-check a fibration against the Eq(p) route')
@emit_option
@verdict_command
def check_univalent(model_file: str, name: str, oracle: bool, emit: str) -> Outcome:
    """Decide univalence of a fibration or of a declared segal object."""
    model = _load(model_file)
    if name in model.fibrations:
        p = model.fibrations[name]
        verdict = is_univalent_fibration(p, oracle=oracle)
        witness = None if verdict else univalence_witness(p)
    else:
        x = _segal_object(model, name, 2)
        verdict = is_univalent_segal(x)
        witness = None if verdict else univalence_witness_segal(x)
    lines = [f"{_mark(verdict)} {name} is {'' if verdict else 'not '}univalent"]
    if witness:
        lines.append(f"  witness: {jsonable(witness)}")
    return verdict, {"name": name, "univalent": verdict, "witness": witness}, lines


@cli.command('check-complete')
@click.argument('model_file', type=click.Path(exists=True))
@click.argument('name')
@click.option('--replace', is_flag=True, help='Reedy-replace the object before checking')
@click.option('--level', default=3, type=int, help='Truncation level for nerves')
@emit_option
@verdict_command
def check_complete(model_file: str, name: str, replace: bool, level: int, emit: str) -> Outcome:
    """Decide completeness; without --replace the object must already be Reedy fibrant."""
    x = _segal_object(_load(model_file), name, level)
    if replace:
        x = reedy_replace(x).obj
    elif not is_reedy_fibrant(x):
        raise PreconditionError(f"{x.name} is not Reedy fibrant; use --replace")
    verdict = is_complete(x)
    witness = None if verdict else complete_witness(x)
    lines = [f"{_mark(verdict)} {name} is {'' if verdict else 'not '}complete"]
    if witness:
        lines.append(f"  witness: {jsonable(witness)}")
    return verdict, {"name": name, "complete": verdict, "replaced": replace,
                     "witness": witness}, lines


@cli.command('nerve')
@click.argument('model_file', type=click.Path(exists=True))
@click.argument('fibration')
@click.option('--level', '-m', default=3, type=int, help='Truncation level')
@emit_option
@verdict_command
def nerve_command(model_file: str, fibration: str, level: int, emit: str) -> Outcome:
    """Build the truncated nerve of a fibration and check its simplicial identities."""
    model = _load(model_file)
    x = nerve(model.get("fibration", fibration), level)
    report = validate_simplicial_groupoid(x)
    lines = [f"{_mark(report.ok)} {x!r}"]
    lines.extend(f"  level {n}: {len(g.objects)} objects, {len(g.morphisms)} morphisms"
                 for n, g in enumerate(x.levels))
    return report.ok, {"nerve": simplicial_groupoid_payload(x),
                       "validation": report_payload(report)}, lines


@cli.command()
@click.argument('model_file', type=click.Path(exists=True))
@click.option('--weight', '-w', required=True, help='Weight shape, e.g. "K" or "horn 2 1"')
@click.option('--object', '-x', 'obj', required=True, help='Segal object or fibration name')
@click.option('--trunc', type=int, help='Truncation level of the weight')
@click.option('--full', is_flag=True, help='Include the apex composition tables')
@emit_option
@verdict_command
def wlim(model_file: str, weight: str, obj: str, trunc: Optional[int], full: bool,
         emit: str) -> Outcome:
    """Compute the weighted limit A∖X."""
    a = _shape(weight.split(), trunc)
    x = _segal_object(_load(model_file), obj, max(3, a.trunc_level))
    lim = weighted_limit(a, x)
    lines = [f"✓ {a.name}\\{x.name}: {len(lim.apex.objects)} objects, "
             f"{len(lim.apex.morphisms)} morphisms"]
    return True, {"limit": weighted_limit_payload(lim, full)}, lines


@cli.command('shape')
@click.argument('kind')
@click.argument('params', nargs=-1, type=int)
@click.option('--trunc', type=int, help='Truncation level (default: dimension + 1)')
@emit_option
@verdict_command
def shape_command(kind: str, params: Tuple[int, ...], trunc: Optional[int], emit: str) -> Outcome:
    """Build a standard weight: simplex n, boundary n, horn n k, spine n, J2 or K."""
    a = shape(kind, *params, trunc=trunc)
    report = validate_sset(a)
    census = a.nondegenerate_census()
    lines = [f"{_mark(report.ok)} {a.name}: nondegenerate census {census}"]
    lines.extend(f"  {issue}" for issue in report.issues)
    return report.ok, {"shape": sset_payload(a), "validation": report_payload(report)}, lines


@cli.command('check-bm')
@click.argument('model_file', type=click.Path(exists=True))
@click.argument('square')
@emit_option
@verdict_command
def check_bm(model_file: str, square: str, emit: str) -> Outcome:
    """Decide whether a fibration square is a BM-equivalence."""
    sq = _load(model_file).get("square", square)
    cartesian = verify_homotopy_cartesian(sq)
    verdict = is_bm_equivalence(sq)
    surjective = is_essentially_surjective(sq.bottom)
    lines = [f"{_mark(verdict)} {square} is {'' if verdict else 'not '}a BM-equivalence",
             f"  homotopy cartesian: {cartesian}",
             f"  bottom essentially surjective: {surjective}"]
    return verdict, {"square": square, "bm_equivalence": verdict, "cartesian": cartesian,
                     "essentially_surjective": surjective}, lines


@cli.command('check-dk')
@click.argument('model_file', type=click.Path(exists=True))
@click.argument('square')
@click.option('--level', '-m', default=2, type=int, help='Truncation level of the nerves')
@emit_option
@verdict_command
def check_dk(model_file: str, square: str, level: int, emit: str) -> Outcome:
    """Decide whether the nerve map induced by a cartesian square is a DK-equivalence."""
    sq = _load(model_file).get("square", square)
    induced = induced_nerve_map(sq, level)
    profile = dk_classify(induced.map)
    levelwise = induced.map.is_levelwise_equivalence()
    lines = [f"{_mark(profile.dk)} N({square}) is {'' if profile.dk else 'not '}a DK-equivalence",
             f"  fully faithful: {profile.fully_faithful}",
             f"  essentially surjective: {profile.essentially_surjective}",
             f"  levelwise equivalence: {levelwise}"]
    if induced.strictified:
        lines.append("  (square replaced by the pullback along its bottom map)")
    elif induced.retopped:
        lines.append("  (top replaced by an isomorphism onto the pullback)")
    return profile.dk, {"square": square, "profile": profile.as_dict(), "levelwise": levelwise,
                        "strictified": induced.strictified,
                        "retopped": induced.retopped}, lines


@cli.command()
@click.argument('model_file', type=click.Path(exists=True))
@click.argument('fibration')
@click.option('--universe', '-u', required=True, help='Universe name')
@click.option('--classifier', '-c', help='Classifying functor; searched for when omitted')
@click.option('--nerve', 'with_nerve', is_flag=True,
              help='Also check the induced nerve map into the replaced completion')
@emit_option
@verdict_command
def complete(model_file: str, fibration: str, universe: str, classifier: Optional[str],
             with_nerve: bool, emit: str) -> Outcome:
    """Univalently complete a fibration inside a universe."""
    model = _load(model_file)
    p = model.get("fibration", fibration)
    u = model.get("universe", universe)
    if classifier:
        b = model.get("functor", classifier)
    else:
        found = classify(p, u)
        if found is None:
            raise PreconditionError(f"{p.name} is not classified by {u.name}")
        b = found[0]
    result = univalent_complete(p, u, b)
    univalent = is_univalent_fibration(result.up)
    payload = {"completion": completion_payload(result), "univalent": univalent}
    lines = [f"{_mark(univalent)} completed {p.name}: base {len(p.base.objects)} -> "
             f"{len(result.up.base.objects)} objects, univalent: {univalent}"]
    passed = univalent
    if with_nerve:
        rezk = rezk_complete_nerve(p, u, b)
        payload["nerve"] = {"profile": rezk.profile.as_dict(), "complete": rezk.complete}
        lines.append(f"  {_mark(rezk.profile.dk)} nerve map DK-equivalence: {rezk.profile.dk}")
        lines.append(f"  {_mark(rezk.complete)} completion complete: {rezk.complete}")
        passed = passed and rezk.profile.dk and rezk.complete
    return passed, payload, lines


@cli.command('classify')
@click.argument('model_file', type=click.Path(exists=True))
@click.argument('fibration')
@click.option('--universe', '-u', required=True, help='Universe name')
@emit_option
@verdict_command
def classify_command(model_file: str, fibration: str, universe: str, emit: str) -> Outcome:
    """Search for a classifying map from the base of a fibration into a universe."""
    model = _load(model_file)
    p = model.get("fibration", fibration)
    u = model.get("universe", universe)
    found = classify(p, u)
    if found is None:
        return False, {"fibration": p.name, "classifying_map": None}, [
            f"✗ {p.name} is not classified by {u.name}"]
    b, _ = found
    lines = [f"✓ {p.name} is classified by {u.name}"]
    lines.extend(f"  {x} |-> {b.obj(x)}" for x in p.base.objects)
    return True, {"fibration": fibration_payload(p), "classifying_map": map_payload(b)}, lines


@cli.command()
@click.option('--seed', '-s', default=0, type=int, help='Generator seed')
@click.option('--suite', 'suites', multiple=True, type=click.Choice(SUITES),
              help='Run only these suites (repeatable)')
@click.option('--count', '-n', type=int, help='Instances per suite (default: suite defaults)')
@click.option('--max-base', default=4, type=int, help='Largest base groupoid')
@click.option('--max-fiber', default=3, type=int, help='Largest fiber')
@click.option('--fault', type=click.Choice(SUITES), help='Negate the primary check of a suite')
@click.option('--output', '-o', help='Write the JSON report to this file')
@click.option('--rows', help='Write the per-instance rows to this CSV file')
@click.option('--no-timing', is_flag=True, help='Leave timing fields out of the report')
@emit_option
@verdict_command
def harness(seed: int, suites: Tuple[str, ...], count: Optional[int], max_base: int,
            max_fiber: int, fault: Optional[str], output: Optional[str], rows: Optional[str],
            no_timing: bool, emit: str) -> Outcome:
    """Run the theorem property suites on generated instances."""
    chosen = suites or SUITES
    counts = {s: (count if count is not None else DEFAULT_COUNTS[s]) if s in chosen else 0
              for s in SUITES}
    cfg = GenConfig(seed=seed, max_base_objects=max_base, max_fiber_objects=max_fiber,
                    counts=counts, fault_injection=fault)
    report = run_theorem_suite(cfg)
    if output or rows:
        ReportExporter(report).export(output, rows, timing=not no_timing)
    payload = report.to_dict(timing=not no_timing)
    lines = []
    for suite in payload["suites"]:
        ok = not suite["failures"]
        lines.append(f"{_mark(ok)} {suite['suite']}: {suite['passes']}/{suite['instances']} "
                     f"passed, {len(suite['budget_exhausted'])} over budget, "
                     f"{suite['controls']} controls")
        lines.extend(f"    failed #{f['index']} ({f['label']}): {jsonable(f['detail'])}"
                     for f in suite["failures"])
    if not payload["suites"]:
        lines.append("✓ no suites selected")
    return report.passed, payload, lines


if __name__ == '__main__':
    cli()
