"""A small expression language for surface, curve and normal definitions.

Grammar (whitespace ignored, left associative, ``^`` binds tightest)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | base ('^' integer)?
    base   := number | variable | function '(' expr ')' | '(' expr ')'

Variables are ``u``, ``v`` and ``t``; functions are ``sin cos tan exp log
sqrt``.  Exponents are integer literals.  Trees evaluate over floats or over
jets, and can be differentiated symbolically.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

from . import jets
from .errors import EvaluationError, ParseError, SpecError

__all__ = [
    "Num",
    "Var",
    "Neg",
    "BinOp",
    "Pow",
    "Call",
    "parse_expr",
    "to_text",
    "eval_ast",
    "evaluate",
    "diff",
    "variables",
    "SurfaceSpec",
    "parse_spec",
    "format_spec",
]

VARIABLES = ("u", "v", "t")
FUNCTIONS = ("sin", "cos", "tan", "exp", "log", "sqrt")


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Num, Var, Neg, BinOp, Pow, Call]

# ----------------------------------------------------------------------
# tokenizer

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()−])
    """,
    re.VERBOSE,
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            value = m.group()
            if value == "−":
                value = "-"
            tokens.append((kind, value, pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.peek()
        if val != value or kind not in ("op",):
            raise ParseError(f"expected {value!r}", pos)
        return self.advance()

    def _describe(self, tok):
        kind, val, _ = tok
        return "end of input" if kind == "end" else repr(val)

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"expected operator or end of input, got {self._describe(tok)}", tok[2])
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.advance()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        kind, val, pos = self.peek()
        if kind == "op" and val == "-":
            self.advance()
            return Neg(self.factor())
        node = self.base()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.advance()
            sign = 1
            if self.peek()[0] == "op" and self.peek()[1] == "-":
                self.advance()
                sign = -1
            kind, val, pos = self.peek()
            if kind != "number" or not val.isdigit():
                raise ParseError("expected integer exponent", pos)
            self.advance()
            node = Pow(node, sign * int(val))
        return node

    def base(self):
        kind, val, pos = self.peek()
        if kind == "number":
            self.advance()
            return Num(float(val))
        if kind == "name":
            self.advance()
            if val in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(val, arg)
            if val in VARIABLES:
                return Var(val)
            raise ParseError(f"unknown identifier {val!r}", pos)
        if kind == "op" and val == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"expected number, variable, function or '(', got {self._describe(self.peek())}", pos)


def parse_expr(text: str) -> Node:
    """Parse ``text`` into an expression tree.

    >>> parse_expr("u^2/2 - v")
    BinOp(op='-', left=BinOp(op='/', left=Pow(base=Var(name='u'), exponent=2), right=Num(value=2.0)), right=Var(name='v'))
    """
    try:
        return _Parser(text).parse()
    except ParseError as exc:
        # report 1-based columns; the end of input is one past the last character
        raise ParseError(exc.message, exc.position + 1, exc.line) from None


# ----------------------------------------------------------------------
# printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def to_text(node: Node) -> str:
    """Render a tree as text that parses back to the same tree."""
    return _text(node, 0)


def _text(node, ctx):
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({_text(node.arg, 0)})"
    if isinstance(node, Pow):
        s = f"{_text(node.base, 5)}^{node.exponent}"
        return f"({s})" if ctx > 4 else s
    if isinstance(node, Neg):
        s = "-" + _text(node.arg, 3)
        return f"({s})" if ctx > 3 else s
    if isinstance(node, BinOp):
        p = _PREC[node.op]
        # left associativity: right operand of equal precedence needs parentheses
        s = f"{_text(node.left, p)} {node.op} {_text(node.right, p + 1)}"
        return f"({s})" if ctx > p else s
    raise TypeError(f"not an expression node: {node!r}")


def variables(node: Node) -> set:
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, Num):
        return set()
    if isinstance(node, (Neg, Call)):
        return variables(node.arg)
    if isinstance(node, Pow):
        return variables(node.base)
    return variables(node.left) | variables(node.right)


# ----------------------------------------------------------------------
# evaluation

_FLOAT_FUNCS = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "exp": math.exp,
    "log": math.log,
    "sqrt": math.sqrt,
}


def evaluate(node: Node, bindings: dict) -> float:
    """Plain floating-point evaluation."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        try:
            return float(bindings[node.name])
        except KeyError:
            raise EvaluationError(f"unbound variable {node.name!r}") from None
    if isinstance(node, Neg):
        return -evaluate(node.arg, bindings)
    if isinstance(node, Pow):
        return evaluate(node.base, bindings) ** node.exponent
    if isinstance(node, Call):
        try:
            return _FLOAT_FUNCS[node.func](evaluate(node.arg, bindings))
        except ValueError as exc:
            raise EvaluationError(f"{node.func}: {exc}") from None
    a = evaluate(node.left, bindings)
    b = evaluate(node.right, bindings)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if b == 0:
        raise EvaluationError("division by zero")
    return a / b


def eval_ast(node: Node, bindings: dict):
    """Evaluate over jets; every binding must be a jet of the same kind and base."""
    kinds = {(type(j), j.base) for j in bindings.values()}
    if len(kinds) > 1:
        raise EvaluationError("all bindings must be jets of the same kind and base point")
    if not bindings:
        raise EvaluationError("eval_ast needs at least one jet binding")
    like = next(iter(bindings.values()))
    return _eval(node, bindings, like)


def _eval(node, b, like):
    if isinstance(node, Num):
        return like.constant(node.value, like.degree, like.base)
    if isinstance(node, Var):
        try:
            return b[node.name]
        except KeyError:
            raise EvaluationError(f"unbound variable {node.name!r}") from None
    if isinstance(node, Neg):
        return -_eval(node.arg, b, like)
    if isinstance(node, Pow):
        return jets.pow_int(_eval(node.base, b, like), node.exponent)
    if isinstance(node, Call):
        return jets.ELEMENTARY[node.func](_eval(node.arg, b, like))
    x = _eval(node.left, b, like)
    y = _eval(node.right, b, like)
    if node.op == "+":
        return x + y
    if node.op == "-":
        return x - y
    if node.op == "*":
        return x * y
    return x / y


# ----------------------------------------------------------------------
# symbolic differentiation (with light simplification)

ZERO = Num(0.0)
ONE = Num(1.0)


def _is_num(node, value=None):
    return isinstance(node, Num) and (value is None or node.value == value)


def _add(a, b):
    if _is_num(a, 0.0):
        return b
    if _is_num(b, 0.0):
        return a
    if _is_num(a) and _is_num(b):
        return Num(a.value + b.value)
    return BinOp("+", a, b)


def _sub(a, b):
    if _is_num(b, 0.0):
        return a
    if _is_num(a, 0.0):
        return _neg(b)
    if _is_num(a) and _is_num(b):
        return Num(a.value - b.value)
    return BinOp("-", a, b)


def _neg(a):
    if _is_num(a):
        return Num(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def _mul(a, b):
    if _is_num(a, 0.0) or _is_num(b, 0.0):
        return ZERO
    if _is_num(a, 1.0):
        return b
    if _is_num(b, 1.0):
        return a
    if _is_num(a) and _is_num(b):
        return Num(a.value * b.value)
    return BinOp("*", a, b)


def _div(a, b):
    if _is_num(a, 0.0):
        return ZERO
    if _is_num(b, 1.0):
        return a
    return BinOp("/", a, b)


def _pow(a, n):
    if n == 0:
        return ONE
    if n == 1:
        return a
    if _is_num(a) and n > 0:
        return Num(a.value**n)
    return Pow(a, n)


def diff(node: Node, var: str) -> Node:
    """Symbolic partial derivative with respect to ``var``."""
    if isinstance(node, Num):
        return ZERO
    if isinstance(node, Var):
        return ONE if node.name == var else ZERO
    if isinstance(node, Neg):
        return _neg(diff(node.arg, var))
    if isinstance(node, BinOp):
        da, db = diff(node.left, var), diff(node.right, var)
        a, b = node.left, node.right
        if node.op == "+":
            return _add(da, db)
        if node.op == "-":
            return _sub(da, db)
        if node.op == "*":
            return _add(_mul(da, b), _mul(a, db))
        # quotient rule as a'/b - a b'/b^2
        return _sub(_div(da, b), _div(_mul(a, db), _pow(b, 2)))
    if isinstance(node, Pow):
        da = diff(node.base, var)
        n = node.exponent
        return _mul(_mul(Num(float(n)), _pow(node.base, n - 1)), da)
    if isinstance(node, Call):
        a = node.arg
        da = diff(a, var)
        if _is_num(da, 0.0):
            return ZERO
        f = node.func
        if f == "sin":
            outer = Call("cos", a)
        elif f == "cos":
            outer = _neg(Call("sin", a))
        elif f == "tan":
            outer = _pow(Call("cos", a), -2)
        elif f == "exp":
            outer = node
        elif f == "log":
            outer = _pow(a, -1)
        else:  # sqrt
            outer = _div(Num(0.5), node)
        return _mul(outer, da)
    raise TypeError(f"not an expression node: {node!r}")


# ----------------------------------------------------------------------
# surface files


@dataclass(frozen=True)
class SurfaceSpec:
    """A frontal germ given by text: the map, its normal and the singular curve."""

    name: str
    f: tuple
    nu: object  # "auto" or a tuple of three trees
    gamma: tuple
    source: str = ""

    @property
    def auto_normal(self) -> bool:
        return isinstance(self.nu, str)

    def base_point(self):
        return tuple(evaluate(g, {"t": 0.0}) for g in self.gamma)


def _split_tuple(text, n, key, lineno, col0):
    s = text.strip()
    lead = len(text) - len(text.lstrip())
    if not (s.startswith("(") and s.endswith(")")):
        raise SpecError(f"{key} must be a parenthesised {n}-tuple", col0 + lead + 1, lineno)
    body = s[1:-1]
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append((body[start:i], start))
            start = i + 1
    parts.append((body[start:], start))
    if len(parts) != n:
        raise SpecError(f"{key} needs {n} components, got {len(parts)}", col0 + lead + 1, lineno)
    out = []
    for piece, off in parts:
        try:
            out.append(parse_expr(piece))
        except ParseError as exc:
            pos = col0 + lead + 1 + off + (exc.position or 0)
            raise SpecError(f"in {key}: {exc.message}", pos, lineno) from None
    return tuple(out)


_SECTIONS = {"surface": ("name", "f", "nu"), "curve": ("gamma",)}


def parse_spec(text: str, validate: bool = True) -> SurfaceSpec:
    """Parse a surface file (format documented in the README)."""
    found = {}
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise SpecError("malformed section header", 1, lineno)
            section = stripped[1:-1].strip()
            if section not in _SECTIONS:
                raise SpecError(f"unknown section [{section}]", 1, lineno)
            if section in found:
                raise SpecError(f"duplicate section [{section}]", 1, lineno)
            found[section] = {}
            continue
        if "=" not in line:
            raise SpecError("expected 'key = value'", 1, lineno)
        if section is None:
            raise SpecError("key outside of any section", 1, lineno)
        key, value = line.split("=", 1)
        key = key.strip()
        if key not in _SECTIONS[section]:
            raise SpecError(f"unknown key {key!r} in [{section}]", 1, lineno)
        if key in found[section]:
            raise SpecError(f"duplicate key {key!r}", 1, lineno)
        found[section][key] = (value, lineno, line.index("=") + 1)
    for sec in _SECTIONS:
        if sec not in found:
            raise SpecError(f"missing section [{sec}]")
    for sec, keys in _SECTIONS.items():
        for key in keys:
            if key not in found[sec]:
                raise SpecError(f"missing key {key!r} in [{sec}]")

    name = found["surface"]["name"][0].strip()
    f_text, f_line, f_col = found["surface"]["f"]
    f = _split_tuple(f_text, 3, "f", f_line, f_col)
    nu_text, nu_line, nu_col = found["surface"]["nu"]
    if nu_text.strip() == "auto":
        nu = "auto"
    else:
        nu = _split_tuple(nu_text, 3, "nu", nu_line, nu_col)
    g_text, g_line, g_col = found["curve"]["gamma"]
    gamma = _split_tuple(g_text, 2, "gamma", g_line, g_col)

    for key, trees, allowed in (("f", f, {"u", "v"}), ("gamma", gamma, {"t"})):
        for tree in trees:
            extra = variables(tree) - allowed
            if extra:
                raise SpecError(f"{key} uses variable(s) {sorted(extra)}; allowed: {sorted(allowed)}")
    if nu != "auto":
        for tree in nu:
            extra = variables(tree) - {"u", "v"}
            if extra:
                raise SpecError(f"nu uses variable(s) {sorted(extra)}; allowed: ['u', 'v']")

    spec = SurfaceSpec(name=name, f=f, nu=nu, gamma=gamma, source=text)
    if validate:
        _validate(spec)
    return spec


def _validate(spec: SurfaceSpec, half_width=0.1, n=5, tol=1e-8):
    try:
        u0, v0 = spec.base_point()
        for tree in spec.f:
            evaluate(tree, {"u": u0, "v": v0})
    except (EvaluationError, OverflowError, ZeroDivisionError) as exc:
        raise SpecError(f"surface does not evaluate at the base point: {exc}") from None
    if spec.auto_normal:
        return
    fu = [diff(c, "u") for c in spec.f]
    fv = [diff(c, "v") for c in spec.f]
    for i in range(n):
        for j in range(n):
            du = -half_width + 2 * half_width * i / (n - 1)
            dv = -half_width + 2 * half_width * j / (n - 1)
            at = {"u": u0 + du, "v": v0 + dv}
            try:
                nu = [evaluate(c, at) for c in spec.nu]
                a = [evaluate(c, at) for c in fu]
                b = [evaluate(c, at) for c in fv]
            except (EvaluationError, OverflowError, ZeroDivisionError) as exc:
                raise SpecError(f"evaluation failed at (u, v) = ({at['u']:g}, {at['v']:g}): {exc}") from None
            norm = math.sqrt(sum(x * x for x in nu))
            if abs(norm - 1.0) > tol:
                raise SpecError(f"|nu| = {norm:.12g} != 1 at (u, v) = ({at['u']:g}, {at['v']:g})")
            pa = sum(x * y for x, y in zip(nu, a))
            pb = sum(x * y for x, y in zip(nu, b))
            if abs(pa) > tol or abs(pb) > tol:
                raise SpecError(
                    "frontal condition violated: "
                    f"<nu, f_u> = {pa:.3e}, <nu, f_v> = {pb:.3e} at (u, v) = ({at['u']:g}, {at['v']:g})"
                )


def format_spec(name, f, nu, gamma, comment=None) -> str:
    """Render surface-file text from expression strings."""
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines += [
        "[surface]",
        f"name = {name}",
        f"f = ({', '.join(f)})",
        "nu = auto" if nu == "auto" else f"nu = ({', '.join(nu)})",
        "[curve]",
        f"gamma = ({', '.join(gamma)})",
        "",
    ]
    return "\n".join(lines)
