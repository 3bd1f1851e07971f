import pytest

from src.dsl import emit_model, parse, tokenize
from src.errors import DSLError, GroupoidError


def test_tokenizer_tracks_lines_and_columns():
    tokens = tokenize('groupoid A = discrete(2);\n  "x y" |-> b;')
    quoted = next(t for t in tokens if t.text == "x y")
    assert (quoted.kind, quoted.line, quoted.column) == ("name", 2, 3)
    assert tokens[-1].kind == "eof"


def test_sample_p0(samples_dir):
    model = parse((samples_dir / "p0_over_u1.gpd").read_text())
    p = model.get("fibration", "p")
    assert p.base is model.get("groupoid", "B")
    assert model.get("universe", "U").pi.base.objects == ("0", "1")
    assert model.build_segal("X").m == 3


def test_sample_universe(samples_dir):
    model = parse((samples_dir / "universe.gpd").read_text())
    swap = model.get("fibration", "swap")
    assert len(swap.total.components) == 1
    assert swap.map.mor("id_x") == "e"
    cech = model.build_segal("C")
    assert len(cech.levels[1].morphisms) == 4


def test_sample_squares(samples_dir):
    model = parse((samples_dir / "squares.gpd").read_text())
    assert set(model.squares) == {"S", "T"}
    assert model.squares["S"].bottom.obj("2") == "1"


def test_broken_table_parses_but_fails_validation(samples_dir):
    model = parse((samples_dir / "broken_table.gpd").read_text())
    (report,) = model.validate()
    assert not report.ok
    assert any(issue.startswith("associativity fails") for issue in report.issues)


def test_bad_argument_position():
    with pytest.raises(DSLError) as excinfo:
        parse("groupoid A = discrete(x);")
    assert (excinfo.value.line, excinfo.value.column) == (1, 23)
    assert str(excinfo.value).startswith("line 1, column 23:")


def test_unknown_name_on_second_line():
    with pytest.raises(DSLError) as excinfo:
        parse("groupoid A = discrete(2);\nfunctor F: A -> B { }")
    assert (excinfo.value.line, excinfo.value.column) == (2, 17)
    assert "unknown name 'B'" in excinfo.value.message


@pytest.mark.parametrize("text", [
    "widget A;",
    "groupoid A = discrete(2); groupoid A = discrete(1);",
    "groupoid A = discrete(2) @",
    "groupoid A = torus(2);",
    "groupoid A { objects: a; mor f: a -> b; }",
    "groupoid A { objects: a, a; }",
    "groupoid A = discrete(2); fibration p = A;",
    "groupoid A = group Q8;",
    "groupoid P = discrete(1); groupoid C = codiscrete(2);"
    " functor J: P -> C { 0 |-> 0; } fibration j = J;",
    "groupoid A = discrete(2); functor F: A -> A { 0 |-> 0; }",
    "groupoid A = discrete(1); segal X = nerve(A);",
])
def test_rejected_models(text):
    with pytest.raises(DSLError):
        parse(text)


def test_functor_must_preserve_composition():
    text = """
    groupoid Z = cyclic(3);
    functor F: Z -> Z { "*" |-> "*"; r |-> r; r2 |-> r; }
    """
    with pytest.raises(DSLError) as excinfo:
        parse(text)
    assert excinfo.value.line == 3


def test_missing_model_entries():
    model = parse("groupoid A = discrete(1);")
    with pytest.raises(GroupoidError):
        model.get("fibration", "A")
    with pytest.raises(GroupoidError):
        model.build_segal("X")


def test_emitted_model_parses_to_the_same_declarations(samples_dir):
    model = parse((samples_dir / "universe.gpd").read_text())
    again = parse(emit_model(model))
    assert [(d.kind, d.name) for d in again.declarations] == \
        [(d.kind, d.name) for d in model.declarations]
    assert emit_model(again) == emit_model(model)
