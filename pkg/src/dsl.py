"""The ``.gpd`` model language: tokenizer, parser and canonical emitter.

A model file is a sequence of declarations::

    # comments run to the end of the line
    groupoid B = discrete(2);
    groupoid E { objects: x, y; mor f: x -> y; mor g: y -> x; comp g.f = id_x; comp f.g = id_y; }
    functor P: E -> B { x |-> 0; y |-> 0; f |-> id_0; g |-> id_0; }
    fibration p = P;
    universe U = sets(1);
    square S { top: T; bottom: F; left: p; right: q; }
    segal X = nerve(p, 3);

Identities default to ``id_<object>`` and identity rows of composition
tables are filled in; inverses are found by search. Law violations in a
table are not parse errors: they are reported by ``ModelFile.validate``.
"""

import logging
import re
from dataclasses import dataclass, field, replace
from typing import Dict, List, NamedTuple, Optional, Tuple

from .errors import DSLError, GroupoidError
from .fibrations import (
    Fibration,
    FibrationSquare,
    UniverseData,
    identity_fibration,
    pullback_fibration,
    set_universe,
    terminal_fibration,
)
from .groupoid import (
    Groupoid,
    GroupoidMap,
    Label,
    ValidationReport,
    codiscrete,
    cyclic,
    discrete,
    group_groupoid,
    validate_groupoid,
)
from .segal import TruncatedSimplicialGroupoid, cech_nerve, constant, nerve

logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(r"""
    (?P<space>[ \t\r]+)
  | (?P<newline>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<mapsto>\|->)
  | (?P<arrow>->)
  | (?P<string>"[^"\n]*")
  | (?P<name>[A-Za-z0-9_'*]+)
  | (?P<punct>[{}();:,.=])
""", re.VERBOSE)

_BARE_NAME = re.compile(r"[A-Za-z0-9_'*]+\Z")

KEYWORDS = ("groupoid", "functor", "fibration", "square", "universe", "segal")


class Token(NamedTuple):
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    line, start = 1, 0
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise DSLError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = match.lastgroup
        value = match.group()
        if kind == "newline":
            line += 1
            start = match.end()
        elif kind == "string":
            tokens.append(Token("name", value[1:-1], line, pos - start + 1))
        elif kind not in ("space", "comment"):
            tokens.append(Token(kind, value, line, pos - start + 1))
        pos = match.end()
    tokens.append(Token("eof", "", line, pos - start + 1))
    return tokens


@dataclass(frozen=True)
class Declaration:
    """One top-level declaration; ``expr`` keeps builtin expressions for re-emission."""
    kind: str
    name: str
    expr: Optional[Tuple[str, Tuple[str, ...]]]
    line: int
    column: int


@dataclass
class SegalDeclaration:
    builder: str
    source: str
    level: int


@dataclass
class ModelFile:
    """Everything a model file declares, keyed by name."""
    groupoids: Dict[str, Groupoid] = field(default_factory=dict)
    functors: Dict[str, GroupoidMap] = field(default_factory=dict)
    fibrations: Dict[str, Fibration] = field(default_factory=dict)
    squares: Dict[str, FibrationSquare] = field(default_factory=dict)
    universes: Dict[str, UniverseData] = field(default_factory=dict)
    segal: Dict[str, SegalDeclaration] = field(default_factory=dict)
    declarations: List[Declaration] = field(default_factory=list)

    def kind_of(self, name: str) -> Optional[str]:
        for decl in self.declarations:
            if decl.name == name:
                return decl.kind
        return None

    def get(self, kind: str, name: str):
        table = {
            "groupoid": self.groupoids, "functor": self.functors,
            "fibration": self.fibrations, "square": self.squares,
            "universe": self.universes,
        }[kind]
        if name not in table:
            raise GroupoidError(f"no {kind} named {name!r} in the model")
        return table[name]

    def build_segal(self, name: str) -> TruncatedSimplicialGroupoid:
        if name not in self.segal:
            raise GroupoidError(f"no segal object named {name!r} in the model")
        decl = self.segal[name]
        if decl.builder == "nerve":
            result = nerve(self.fibrations[decl.source], decl.level)
        elif decl.builder == "constant":
            result = constant(self.groupoids[decl.source], decl.level)
        else:
            result = cech_nerve(self.groupoids[decl.source], decl.level)
        return result

    def validate(self) -> List[ValidationReport]:
        reports = [validate_groupoid(g) for g in self.groupoids.values()]
        for name, f in self.functors.items():
            reports.append(ValidationReport(f"functor {name}", f.issues()))
        return reports


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self.model = ModelFile()

    # -- token stream --------------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind != "eof":
            self.pos += 1
        return token

    def error(self, message: str, token: Optional[Token] = None) -> DSLError:
        token = token or self.peek()
        return DSLError(message, token.line, token.column)

    def expect(self, text: str) -> Token:
        token = self.advance()
        if token.text != text or token.kind == "name":
            raise self.error(f"expected {text!r}, found {token.text or 'end of file'!r}", token)
        return token

    def accept(self, text: str) -> bool:
        token = self.peek()
        if token.text == text and token.kind not in ("name", "eof"):
            self.advance()
            return True
        return False

    def name(self) -> Token:
        token = self.advance()
        if token.kind != "name":
            raise self.error(f"expected a name, found {token.text or 'end of file'!r}", token)
        return token

    # -- declarations --------------------------------------------------------

    def parse(self) -> ModelFile:
        while self.peek().kind != "eof":
            token = self.name()
            handler = getattr(self, f"_{token.text}", None)
            if token.text not in KEYWORDS or handler is None:
                raise self.error(f"unknown declaration {token.text!r}", token)
            handler(token)
        logger.debug("Parsed %d declarations", len(self.model.declarations))
        return self.model

    def declare(self, kind: str, name: Token, expr=None) -> None:
        if self.model.kind_of(name.text) is not None:
            raise self.error(f"{name.text!r} is already declared", name)
        self.model.declarations.append(Declaration(kind, name.text, expr, name.line, name.column))

    def resolve(self, kind: str, token: Token):
        found = self.model.kind_of(token.text)
        if found is None:
            raise self.error(f"unknown name {token.text!r}", token)
        if found != kind:
            raise self.error(f"{token.text!r} is a {found}, not a {kind}", token)
        if kind == "segal":
            return self.model.segal[token.text]
        return self.model.get(kind, token.text)

    def call(self) -> Tuple[Token, List[Token]]:
        head = self.name()
        args: List[Token] = []
        if self.accept("("):
            if not self.accept(")"):
                args.append(self.name())
                while self.accept(","):
                    args.append(self.name())
                self.expect(")")
        elif head.text == "group" and self.peek().kind == "name":
            args.append(self.name())
        return head, args

    def guarded(self, token: Token, build):
        try:
            return build()
        except DSLError:
            raise
        except GroupoidError as exc:
            raise self.error(str(exc), token) from exc

    def _groupoid(self, keyword: Token) -> None:
        name = self.name()
        if self.accept("="):
            head, args = self.call()
            self.expect(";")
            g = self.guarded(head, lambda: self._builtin_groupoid(head, args, name.text))
            self.declare("groupoid", name, (head.text, tuple(a.text for a in args)))
        else:
            self.expect("{")
            g = self._groupoid_block(name)
            self.declare("groupoid", name)
        self.model.groupoids[name.text] = g

    def _builtin_groupoid(self, head: Token, args: List[Token], name: str) -> Groupoid:
        arity = {"discrete": 1, "codiscrete": 1, "cyclic": 1, "group": 1}
        if head.text not in arity:
            raise self.error(f"unknown groupoid builder {head.text!r}", head)
        if len(args) != arity[head.text]:
            raise self.error(f"{head.text} takes {arity[head.text]} argument", head)
        arg = args[0]
        if head.text == "group":
            return replace(group_groupoid(arg.text), name=name)
        if not arg.text.isdigit():
            raise self.error(f"expected a natural number, found {arg.text!r}", arg)
        n = int(arg.text)
        if head.text == "discrete":
            return discrete(n, name=name)
        if head.text == "codiscrete":
            return codiscrete(n, name=name)
        return replace(cyclic(n), name=name)

    def _groupoid_block(self, name: Token) -> Groupoid:
        objects: List[str] = []
        ends: Dict[str, Tuple[str, str]] = {}
        ident: Dict[str, str] = {}
        comp: Dict[Tuple[str, str], str] = {}
        rows: List[Tuple[Token, Token, Token]] = []
        while not self.accept("}"):
            head = self.name()
            if head.text == "objects":
                self.expect(":")
                objects.append(self._new_label(self.name(), objects, ends))
                while self.accept(","):
                    objects.append(self._new_label(self.name(), objects, ends))
            elif head.text == "mor":
                label = self.name()
                self._new_label(label, objects, ends)
                self.expect(":")
                a = self._object(self.name(), objects)
                self.expect("->")
                b = self._object(self.name(), objects)
                ends[label.text] = (a, b)
            elif head.text == "id":
                a = self._object(self.name(), objects)
                self.expect("=")
                ident[a] = self.name().text
            elif head.text == "comp":
                g = self.name()
                self.expect(".")
                f = self.name()
                self.expect("=")
                h = self.name()
                rows.append((g, f, h))
            else:
                raise self.error(f"unknown groupoid statement {head.text!r}", head)
            self.expect(";")
        for a in objects:
            label = ident.setdefault(a, f"id_{a}")
            if label not in ends:
                ends[label] = (a, a)
            elif ends[label] != (a, a):
                raise self.error(f"identity {label!r} of {a!r} is not a loop at {a!r}", name)
        for g, f, h in rows:
            for token in (g, f, h):
                if token.text not in ends:
                    raise self.error(f"unknown morphism {token.text!r}", token)
            if ends[f.text][1] != ends[g.text][0]:
                raise self.error(f"{g.text} and {f.text} are not composable", g)
            if ends[h.text] != (ends[f.text][0], ends[g.text][1]):
                raise self.error(f"{h.text} does not go from {ends[f.text][0]} to "
                                 f"{ends[g.text][1]}", h)
            if comp.get((g.text, f.text), h.text) != h.text:
                raise self.error(f"conflicting entries for {g.text}.{f.text}", g)
            comp[(g.text, f.text)] = h.text
        return Groupoid.from_tables(objects, ends, ident, comp, name=name.text)

    def _new_label(self, token: Token, objects: List[str], ends) -> str:
        if token.text in objects or token.text in ends:
            raise self.error(f"label {token.text!r} is declared twice", token)
        return token.text

    def _object(self, token: Token, objects: List[str]) -> str:
        if token.text not in objects:
            raise self.error(f"unknown object {token.text!r}", token)
        return token.text

    def _functor(self, keyword: Token) -> None:
        name = self.name()
        self.expect(":")
        dom = self.resolve("groupoid", self.name())
        self.expect("->")
        cod = self.resolve("groupoid", self.name())
        self.expect("{")
        on_objects: Dict[Label, Label] = {}
        on_morphisms: Dict[Label, Label] = {}
        while not self.accept("}"):
            source = self.name()
            self.expect("|->")
            target = self.name()
            self.expect(";")
            if source.text in dom.object_set:
                if target.text not in cod.object_set:
                    raise self.error(f"{target.text!r} is not an object of {cod.name}", target)
                on_objects[source.text] = target.text
            elif source.text in dom.morphism_set:
                if target.text not in cod.morphism_set:
                    raise self.error(f"{target.text!r} is not a morphism of {cod.name}", target)
                on_morphisms[source.text] = target.text
            else:
                raise self.error(f"{source.text!r} is not a label of {dom.name}", source)
        for x in dom.objects:
            if x not in on_objects:
                raise self.error(f"object {x!r} has no image", name)
            on_morphisms.setdefault(dom.ident[x], cod.ident[on_objects[x]])
        for f in dom.morphisms:
            if f not in on_morphisms:
                raise self.error(f"morphism {f!r} has no image", name)
        functor = GroupoidMap(dom, cod, on_objects, on_morphisms, name=name.text)
        problems = functor.issues()
        if problems:
            raise self.error(f"functor {name.text}: {problems[0]}", name)
        self.declare("functor", name)
        self.model.functors[name.text] = functor

    def _fibration(self, keyword: Token) -> None:
        name = self.name()
        self.expect("=")
        head, args = self.call()
        self.expect(";")
        if not args and head.text not in ("identity", "terminal", "pullback"):
            f = self.resolve("functor", head)
            p = self.guarded(head, lambda: Fibration(f, name=name.text))
            self.declare("fibration", name, ("functor", (head.text,)))
        else:
            p = self.guarded(head, lambda: self._builtin_fibration(head, args, name.text))
            self.declare("fibration", name, (head.text, tuple(a.text for a in args)))
        self.model.fibrations[name.text] = p

    def _builtin_fibration(self, head: Token, args: List[Token], name: str) -> Fibration:
        if head.text in ("identity", "terminal") and len(args) == 1:
            g = self.resolve("groupoid", args[0])
            base = identity_fibration(g) if head.text == "identity" else terminal_fibration(g)
            return Fibration(base.map, name=name)
        if head.text == "pullback" and len(args) == 2:
            p = self.resolve("fibration", args[0])
            f = self.resolve("functor", args[1])
            q, _ = pullback_fibration(p, f)
            return Fibration(q.map, name=name)
        raise self.error(f"cannot build a fibration from {head.text}", head)

    def _universe(self, keyword: Token) -> None:
        name = self.name()
        self.expect("=")
        head, args = self.call()
        self.expect(";")
        if head.text == "sets" and len(args) == 1:
            u = self.guarded(head, lambda: set_universe(int(args[0].text)))
            self.declare("universe", name, ("sets", (args[0].text,)))
        elif not args:
            u = UniverseData(self.resolve("fibration", head), name=name.text)
            self.declare("universe", name, ("fibration", (head.text,)))
        else:
            raise self.error(f"cannot build a universe from {head.text}", head)
        self.model.universes[name.text] = u

    def _square(self, keyword: Token) -> None:
        name = self.name()
        self.expect("{")
        parts: Dict[str, Token] = {}
        while not self.accept("}"):
            key = self.name()
            if key.text not in ("top", "bottom", "left", "right"):
                raise self.error(f"unknown square component {key.text!r}", key)
            self.expect(":")
            parts[key.text] = self.name()
            self.expect(";")
        for key in ("top", "bottom", "left", "right"):
            if key not in parts:
                raise self.error(f"square {name.text} has no {key}", name)
        top = self.resolve("functor", parts["top"])
        bottom = self.resolve("functor", parts["bottom"])
        p = self.resolve("fibration", parts["left"])
        q = self.resolve("fibration", parts["right"])
        sq = self.guarded(name, lambda: FibrationSquare(p, q, top, bottom, name=name.text))
        self.declare("square", name, ("parts", tuple(parts[k].text for k in
                                                      ("top", "bottom", "left", "right"))))
        self.model.squares[name.text] = sq

    def _segal(self, keyword: Token) -> None:
        name = self.name()
        self.expect("=")
        head, args = self.call()
        self.expect(";")
        if head.text not in ("nerve", "constant", "cech") or len(args) not in (1, 2):
            raise self.error(f"cannot build a segal object from {head.text}", head)
        self.resolve("fibration" if head.text == "nerve" else "groupoid", args[0])
        level = 3
        if len(args) == 2:
            if not args[1].text.isdigit() or int(args[1].text) < 1:
                raise self.error("truncation level must be a positive number", args[1])
            level = int(args[1].text)
        self.declare("segal", name, (head.text, tuple(a.text for a in args)))
        self.model.segal[name.text] = SegalDeclaration(head.text, args[0].text, level)


def parse(text: str) -> ModelFile:
    """Parse a model file; every error carries its line and column."""
    return _Parser(text).parse()


# -- emitter ---------------------------------------------------------------

def _quote(label: Label) -> str:
    text = str(label)
    return text if _BARE_NAME.match(text) else f'"{text}"'


def _emit_groupoid(g: Groupoid) -> List[str]:
    lines = [f"groupoid {_quote(g.name)} {{"]
    lines.append("  objects: " + ", ".join(_quote(x) for x in g.objects) + ";")
    for f in g.morphisms:
        if not g.is_identity(f):
            lines.append(f"  mor {_quote(f)}: {_quote(g.src[f])} -> {_quote(g.tgt[f])};")
    for x in g.objects:
        if g.ident[x] != f"id_{x}":
            lines.append(f"  id {_quote(x)} = {_quote(g.ident[x])};")
    for (h, f), c in g.comp_table.items():
        if not g.is_identity(h) and not g.is_identity(f):
            lines.append(f"  comp {_quote(h)}.{_quote(f)} = {_quote(c)};")
    lines.append("}")
    return lines


def _emit_functor(name: str, f: GroupoidMap, dom: str, cod: str) -> List[str]:
    lines = [f"functor {_quote(name)}: {_quote(dom)} -> {_quote(cod)} {{"]
    for x in f.dom.objects:
        lines.append(f"  {_quote(x)} |-> {_quote(f.obj(x))};")
    for u in f.dom.morphisms:
        if not f.dom.is_identity(u):
            lines.append(f"  {_quote(u)} |-> {_quote(f.mor(u))};")
    lines.append("}")
    return lines


def _call(head: str, args: Tuple[str, ...]) -> str:
    return f"{head}(" + ", ".join(_quote(a) for a in args) + ")"


def emit_model(model: ModelFile) -> str:
    """Canonical text for a model; parse(emit_model(m)) declares the same things."""
    owner = {id(g): name for name, g in model.groupoids.items()}
    lines: List[str] = []
    for decl in model.declarations:
        name = _quote(decl.name)
        if decl.kind == "groupoid":
            if decl.expr is None:
                lines.extend(_emit_groupoid(model.groupoids[decl.name]))
            else:
                lines.append(f"groupoid {name} = {_call(*decl.expr)};")
        elif decl.kind == "functor":
            f = model.functors[decl.name]
            lines.extend(_emit_functor(decl.name, f, owner[id(f.dom)], owner[id(f.cod)]))
        elif decl.kind == "fibration":
            head, args = decl.expr
            text = _quote(args[0]) if head == "functor" else _call(head, args)
            lines.append(f"fibration {name} = {text};")
        elif decl.kind == "universe":
            head, args = decl.expr
            text = _quote(args[0]) if head == "fibration" else _call(head, args)
            lines.append(f"universe {name} = {text};")
        elif decl.kind == "square":
            top, bottom, left, right = (_quote(a) for a in decl.expr[1])
            lines.append(f"square {name} {{ top: {top}; bottom: {bottom}; "
                         f"left: {left}; right: {right}; }}")
        elif decl.kind == "segal":
            segal = model.segal[decl.name]
            lines.append(f"segal {name} = {segal.builder}({_quote(segal.source)}, {segal.level});")
    return "\n".join(lines) + "\n"
