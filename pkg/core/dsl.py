"""
Construction scripts: a ledger of ``let``, ``assert`` and ``print``
statements over the catalog, the operations and the pipelines.

    let A = block("S_hat")
    let B = block("X(3,1)")
    let Z = sum(A, "Rtilde", B, "Sigma6")
    assert Z.e == 52

There are no loops or conditionals, and a name is bound at most once.
"""
import json
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken

from core.catalog import catalog_block
from core.constructions import blow_up, knot_surgery, luttinger, rename_surface, resolve, symplectic_sum
from core.domain import NON_INTEGRAL, LuttingerSpec, ManifoldState, pi1_summary
from core.errors import (
    ArityMismatch,
    CalculusError,
    DslError,
    DslRuntimeError,
    DslSyntaxError,
    NonIntegralValue,
    RebindingError,
    UnboundName,
)
from core.geography import exotic_threshold, threshold_n
from core.invariants import HomeomorphismType, homeomorphism_type
from core.pipelines import run_named_pipeline

logger = logging.getLogger(__name__)

GRAMMAR = r"""
    start: stmt*

    ?stmt: "let" IDENT "=" expr         -> let_stmt
         | "assert" expr CMP expr       -> assert_stmt
         | "print" expr                 -> print_stmt

    ?expr: atom
         | expr "." IDENT               -> member

    ?atom: IDENT "(" [args] ")"         -> call
         | IDENT                        -> name
         | SIGNED_INT                   -> int_lit
         | ESCAPED_STRING               -> str_lit

    args: expr ("," expr)*

    CMP: "==" | "!=" | "<=" | ">="
    IDENT: /[A-Za-z_][A-Za-z0-9_]*/
    COMMENT: /#[^\n]*/

    %import common.SIGNED_INT
    %import common.ESCAPED_STRING
    %import common.WS
    %ignore WS
    %ignore COMMENT
"""


# === SYNTAX TREE ===

@dataclass(frozen=True)
class Span:
    line: int = 0
    column: int = 0


@dataclass(frozen=True)
class Name:
    ident: str
    span: Span = field(default=Span(), compare=False)


@dataclass(frozen=True)
class IntLit:
    value: int
    span: Span = field(default=Span(), compare=False)


@dataclass(frozen=True)
class StrLit:
    value: str
    span: Span = field(default=Span(), compare=False)


@dataclass(frozen=True)
class Call:
    function: str
    args: Tuple["Expr", ...] = ()
    span: Span = field(default=Span(), compare=False)


@dataclass(frozen=True)
class Member:
    target: "Expr"
    member: str
    span: Span = field(default=Span(), compare=False)


Expr = Union[Name, IntLit, StrLit, Call, Member]


@dataclass(frozen=True)
class Let:
    name: str
    expr: Expr
    span: Span = field(default=Span(), compare=False)


@dataclass(frozen=True)
class Assert:
    left: Expr
    op: str
    right: Expr
    span: Span = field(default=Span(), compare=False)


@dataclass(frozen=True)
class Print:
    expr: Expr
    span: Span = field(default=Span(), compare=False)


Statement = Union[Let, Assert, Print]


@dataclass(frozen=True)
class Script:
    statements: Tuple[Statement, ...] = ()


def _span(token) -> Span:
    return Span(token.line, token.column)


def _meta_span(meta) -> Span:
    return Span(getattr(meta, "line", 0), getattr(meta, "column", 0))


class _ToAst(Transformer):
    @v_args(meta=True)
    def let_stmt(self, meta, children):
        name, expr = children
        return Let(str(name), expr, _meta_span(meta))

    @v_args(meta=True)
    def assert_stmt(self, meta, children):
        left, op, right = children
        return Assert(left, str(op), right, _meta_span(meta))

    @v_args(meta=True)
    def print_stmt(self, meta, children):
        return Print(children[0], _meta_span(meta))

    def member(self, children):
        target, ident = children
        return Member(target, str(ident), _span(ident))

    def call(self, children):
        ident, args = children
        return Call(str(ident), tuple(args or ()), _span(ident))

    def args(self, children):
        return list(children)

    def name(self, children):
        return Name(str(children[0]), _span(children[0]))

    def int_lit(self, children):
        return IntLit(int(children[0]), _span(children[0]))

    def str_lit(self, children):
        return StrLit(json.loads(str(children[0])), _span(children[0]))

    def start(self, children):
        return Script(tuple(children))


_parser = Lark(GRAMMAR, parser="lalr", propagate_positions=True)


# === BUILTINS ===

@dataclass(frozen=True)
class ThresholdResult:
    k: int
    n: int

    def __str__(self) -> str:
        return f"k={self.k} n={self.n}"


def _state(value: Any, what: str) -> ManifoldState:
    if not isinstance(value, ManifoldState):
        raise DslError(f"{what} must be a manifold state, got {type(value).__name__}")
    return value


def _str(value: Any, what: str) -> str:
    if not isinstance(value, str):
        raise DslError(f"{what} must be a string, got {type(value).__name__}")
    return value


def _int(value: Any, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DslError(f"{what} must be an integer, got {type(value).__name__}")
    return value


def _block(name, *params):
    return catalog_block(_str(name, "block name"), *(_int(p, "block parameter") for p in params))


def _blowup(state, surface=None, rename=None):
    return blow_up(
        _state(state, "blowup argument"),
        _str(surface, "surface") if surface is not None else None,
        _str(rename, "new name") if rename is not None else None,
    )


def _resolve(state, *names):
    return resolve(_state(state, "resolve argument"), [_str(n, "surface") for n in names])


def _sum(a, surf_a, b, surf_b):
    return symplectic_sum(_state(a, "sum argument"), _str(surf_a, "surface"), _state(b, "sum argument"),
                          _str(surf_b, "surface"))


def _luttinger(state, torus, curve, m, q=1):
    m, q = _int(m, "surgery coefficient"), _int(q, "surgery denominator")
    spec = LuttingerSpec(_str(torus, "torus"), _str(curve, "curve"), (abs(m), q), -1 if m < 0 else 1)
    return luttinger(_state(state, "luttinger argument"), spec)


def _knot(state, torus, index):
    return knot_surgery(_state(state, "knot argument"), _str(torus, "torus"), _int(index, "family index"))


def _pipeline(name):
    return run_named_pipeline(_str(name, "pipeline name")).state


def _homeo(state):
    return homeomorphism_type(_state(state, "homeo argument").invariants)


def _threshold(*args):
    if len(args) == 1:
        state = _state(args[0], "threshold argument")
        if state.b2plus is None:
            raise NonIntegralValue(f"b2+ of a state with e={state.e}, sigma={state.sigma} is not an integer")
        b2_plus, sigma_X, sigma = state.b2plus, state.sigma, state.sigma
    else:
        b2_plus, sigma_X, sigma = (_int(a, "threshold argument") for a in args)
    k = exotic_threshold(b2_plus, sigma_X, sigma)
    return ThresholdResult(k, threshold_n(k))


def _rename(state, old, new):
    return rename_surface(_state(state, "rename argument"), _str(old, "surface"), _str(new, "new name"))


@dataclass(frozen=True)
class Builtin:
    function: Callable[..., Any]
    arity: Tuple[int, ...]  # allowed argument counts; empty means one or more

    def accepts(self, count: int) -> bool:
        return count in self.arity if self.arity else count >= 1

    def describe(self) -> str:
        if not self.arity:
            return "at least 1"
        return " or ".join(str(a) for a in self.arity)


BUILTINS: Dict[str, Builtin] = {
    "block": Builtin(_block, ()),
    "blowup": Builtin(_blowup, (1, 2, 3)),
    "resolve": Builtin(_resolve, ()),
    "sum": Builtin(_sum, (4,)),
    "luttinger": Builtin(_luttinger, (4, 5)),
    "knot": Builtin(_knot, (3,)),
    "pipeline": Builtin(_pipeline, (1,)),
    "homeo": Builtin(_homeo, (1,)),
    "threshold": Builtin(_threshold, (1, 3)),
    "rename": Builtin(_rename, (3,)),
}

MEMBERS = {
    ManifoldState: ("e", "sigma", "c1sq", "chi_h", "b1", "b2plus", "b2minus", "spin", "simply_connected"),
    HomeomorphismType: ("a", "b"),
    ThresholdResult: ("k", "n"),
}


# === PARSING ===

def _expected(names) -> frozenset:
    return frozenset(str(n) for n in names)


def _check(script: Script) -> None:
    bound = set()

    def visit(expr: Expr) -> None:
        if isinstance(expr, Name):
            if expr.ident not in bound:
                raise UnboundName(f"name {expr.ident!r} is not bound", expr.span.line, expr.span.column)
        elif isinstance(expr, Member):
            visit(expr.target)
        elif isinstance(expr, Call):
            builtin = BUILTINS.get(expr.function)
            if builtin is None:
                raise UnboundName(f"unknown function {expr.function!r}", expr.span.line, expr.span.column)
            if not builtin.accepts(len(expr.args)):
                raise ArityMismatch(
                    f"{expr.function} takes {builtin.describe()} argument(s), got {len(expr.args)}",
                    expr.span.line,
                    expr.span.column,
                )
            for arg in expr.args:
                visit(arg)

    for stmt in script.statements:
        if isinstance(stmt, Let):
            visit(stmt.expr)
            if stmt.name in bound:
                raise RebindingError(f"name {stmt.name!r} is already bound", stmt.span.line, stmt.span.column)
            bound.add(stmt.name)
        elif isinstance(stmt, Assert):
            visit(stmt.left)
            visit(stmt.right)
        else:
            visit(stmt.expr)


def parse(text: str) -> Script:
    """Parses and statically checks a script."""
    try:
        tree = _parser.parse(text)
    except UnexpectedToken as e:
        token = "end of input" if e.token.type == "$END" else str(e.token)
        raise DslSyntaxError(e.line, e.column, token, _expected(e.expected)) from None
    except UnexpectedCharacters as e:
        raise DslSyntaxError(e.line, e.column, e.char, _expected(e.allowed or ())) from None
    except UnexpectedEOF as e:
        raise DslSyntaxError(e.line, e.column, "end of input", _expected(e.expected)) from None
    except UnexpectedInput as e:
        raise DslSyntaxError(e.line, e.column, "?", frozenset()) from None
    script = _ToAst().transform(tree)
    _check(script)
    return script


def render_expr(expr: Expr) -> str:
    if isinstance(expr, Name):
        return expr.ident
    if isinstance(expr, IntLit):
        return str(expr.value)
    if isinstance(expr, StrLit):
        return json.dumps(expr.value)
    if isinstance(expr, Member):
        return f"{render_expr(expr.target)}.{expr.member}"
    return f"{expr.function}({', '.join(render_expr(a) for a in expr.args)})"


def render(script: Script) -> str:
    """Canonical text of a script."""
    lines = []
    for stmt in script.statements:
        if isinstance(stmt, Let):
            lines.append(f"let {stmt.name} = {render_expr(stmt.expr)}")
        elif isinstance(stmt, Assert):
            lines.append(f"assert {render_expr(stmt.left)} {stmt.op} {render_expr(stmt.right)}")
        else:
            lines.append(f"print {render_expr(stmt.expr)}")
    return "\n".join(lines) + ("\n" if lines else "")


# === EVALUATION ===

def format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is NON_INTEGRAL:
        return "non-integral"
    if value is None:
        return "n/a"
    if isinstance(value, ManifoldState):
        return (
            f"e={value.e} sigma={value.sigma} c1sq={value.c1sq} chi_h={format_value(value.chi_h)} "
            f"b2+={format_value(value.b2plus)} b2-={format_value(value.b2minus)} "
            f"spin={value.spin} pi1={pi1_summary(value)}"
        )
    return str(value)


_NEGATED = {"==": "!=", "!=": "==", "<=": ">", ">=": "<"}


def _compare(left: Any, op: str, right: Any) -> bool:
    if op == "==":
        return left == right
    if op == "!=":
        return left != right
    if not all(isinstance(v, int) for v in (left, right)):
        raise DslError(f"{op} needs integers, got {format_value(left)} and {format_value(right)}")
    return left <= right if op == "<=" else left >= right


@dataclass
class RunResult:
    transcript: List[str]
    exit_code: int
    bindings: Dict[str, Any]
    error: Optional[DslError] = None

    @property
    def text(self) -> str:
        return "\n".join(self.transcript) + ("\n" if self.transcript else "")


class Interpreter:
    """Evaluates statements in order, stopping at the first failed assert."""

    def __init__(self):
        self.bindings: Dict[str, Any] = {}

    def evaluate(self, expr: Expr) -> Any:
        if isinstance(expr, Name):
            return self.bindings[expr.ident]
        if isinstance(expr, (IntLit, StrLit)):
            return expr.value
        if isinstance(expr, Member):
            target = self.evaluate(expr.target)
            allowed = MEMBERS.get(type(target), ())
            if expr.member not in allowed:
                raise DslError(
                    f"{type(target).__name__} has no member {expr.member!r}", expr.span.line, expr.span.column
                )
            return getattr(target, expr.member)
        args = [self.evaluate(a) for a in expr.args]
        try:
            return BUILTINS[expr.function].function(*args)
        except DslError as e:
            if not e.line:
                e.line, e.column = expr.span.line, expr.span.column
            raise
        except CalculusError as e:
            raise DslRuntimeError(e, expr.span.line, expr.span.column) from e

    def run(self, script: Script) -> RunResult:
        transcript: List[str] = []
        for stmt in script.statements:
            try:
                if isinstance(stmt, Let):
                    value = self.evaluate(stmt.expr)
                    self.bindings[stmt.name] = value
                    transcript.append(f"{stmt.name} = {format_value(value)}")
                elif isinstance(stmt, Print):
                    transcript.append(format_value(self.evaluate(stmt.expr)))
                else:
                    left, right = self.evaluate(stmt.left), self.evaluate(stmt.right)
                    if not _compare(left, stmt.op, right):
                        message = f"{format_value(left)} {_NEGATED[stmt.op]} {format_value(right)}"
                        transcript.append(f"assertion failed at line {stmt.span.line}: {message}")
                        return RunResult(transcript, 1, dict(self.bindings))
                    transcript.append(f"ok: {format_value(left)} {stmt.op} {format_value(right)}")
            except DslError as e:
                if not e.line:
                    e.line, e.column = stmt.span.line, stmt.span.column
                transcript.append(f"error: {e}")
                logger.debug("script stopped: %s", e)
                return RunResult(transcript, 1, dict(self.bindings), e)
        return RunResult(transcript, 0, dict(self.bindings))


def run(script: Union[Script, str]) -> RunResult:
    if isinstance(script, str):
        script = parse(script)
    return Interpreter().run(script)
