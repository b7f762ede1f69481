"""Expression language for parametric surfaces f(u,v) in R^3.

The grammar is a small precedence-climbing arithmetic language over the free
variables u, v, declared named constants, numeric literals, the operators
+ - * / ^ and the smooth functions sin, cos, exp, sqrt.  ``^`` takes a
numeric-literal exponent, is right associative and binds tighter than unary
minus.  Non-smooth functions (abs, sign, ...) are rejected by name so that
every parsed surface is differentiable wherever it evaluates.

Surface files are UTF-8 ``key = value`` lines:

    const R = 2
    x = (R + cos(u)) * cos(v)
    y = (R + cos(u)) * sin(v)
    z = sin(u)
    domain = 0 6.283185307179586 0 6.283185307179586

with optional ``nx``/``ny``/``nz`` lines supplying an explicit unit normal
field (required to classify frontal normal forms whose f_u x f_v vanishes).
Unknown keys are rejected.  ``#`` starts a comment.

Expressions evaluate over plain floats and over :class:`~liesurf.jets.Jet2`
(scalar or grid-batched) through the same AST.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from . import jets
from .errors import (
    DivisionByZeroConstantTerm,
    EvaluationDomainError,
    NegativeSqrtConstantTerm,
    NonSmoothFunction,
    NotIsotropic,
    NotUnitNormal,
    SurfaceFileError,
    SurfaceSyntaxError,
    UnknownIdentifier,
)

FUNCTIONS = {
    "sin": jets.sin,
    "cos": jets.cos,
    "exp": jets.exp,
    "sqrt": jets.sqrt,
}

NON_SMOOTH = {"abs", "sign", "floor", "ceil", "min", "max", "mod", "heaviside"}


# -- AST ---------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str  # "u" or "v"


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Bin:
    op: str  # + - * /
    lhs: object
    rhs: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: float


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Call:
    fn: str
    arg: object


# -- tokenizer -----------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise SurfaceSyntaxError(f"unexpected character {text[pos]!r}", position=pos)
        if m.lastgroup != "ws":
            kind = m.lastgroup
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    """Pratt parser: binding powers  +,- : 10   *,/ : 20   ^ : 30   unary - : 25."""

    def __init__(self, tokens, constants):
        self.tokens = tokens
        self.i = 0
        self.constants = constants

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text):
        kind, val, pos = self.peek()
        if val != text:
            raise SurfaceSyntaxError(f"expected {text!r}", position=pos)
        return self.advance()

    def parse_expression(self, rbp=0):
        left = self.parse_prefix()
        while True:
            kind, val, pos = self.peek()
            lbp = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 30}.get(val, 0)
            if kind != "op" or lbp <= rbp:
                return left
            self.advance()
            if val == "^":
                left = Pow(left, self.parse_exponent(pos))
            else:
                left = Bin(val, left, self.parse_expression(lbp))

    def parse_exponent(self, op_pos):
        kind, val, pos = self.peek()
        sign = 1.0
        if kind == "op" and val == "-":
            self.advance()
            sign = -1.0
            kind, val, pos = self.peek()
        if kind != "num":
            raise SurfaceSyntaxError("exponent must be a numeric literal", position=pos)
        self.advance()
        return sign * float(val)

    def parse_prefix(self):
        kind, val, pos = self.advance()
        if kind == "num":
            return Num(float(val))
        if kind == "ident":
            if val in ("u", "v"):
                return Var(val)
            if val in FUNCTIONS or val in NON_SMOOTH:
                nkind, nval, npos = self.peek()
                if nval != "(":
                    raise SurfaceSyntaxError(f"function {val} requires an argument list",
                                             position=npos)
                if val in NON_SMOOTH:
                    raise NonSmoothFunction(f"{val} is not smooth and is not allowed",
                                            position=pos)
                self.advance()
                arg = self.parse_expression()
                self.expect(")")
                return Call(val, arg)
            if val in self.constants:
                return Const(val)
            raise UnknownIdentifier(f"unknown identifier {val!r}", position=pos)
        if kind == "op" and val == "(":
            inner = self.parse_expression()
            self.expect(")")
            return inner
        if kind == "op" and val == "-":
            return Neg(self.parse_expression(25))
        if kind == "end":
            raise SurfaceSyntaxError("expected expression, found end of input", position=pos)
        raise SurfaceSyntaxError(f"expected expression, found {val!r}", position=pos)


def parse(text: str, constants=()):
    """Parse one expression; raises SurfaceSyntaxError with a position."""
    parser = _Parser(_tokenize(text), frozenset(constants))
    expr = parser.parse_expression()
    kind, val, pos = parser.peek()
    if kind != "end":
        raise SurfaceSyntaxError(f"unexpected trailing input {val!r}", position=pos)
    return expr


# -- pretty printer ---------------------------------------------------------------


def _prec(node):
    if isinstance(node, Bin):
        return 10 if node.op in "+-" else 20
    if isinstance(node, Neg):
        return 25
    if isinstance(node, Pow):
        return 30
    return 100


def pretty(node) -> str:
    if isinstance(node, Num):
        return repr(node.value) if node.value != int(node.value) else str(int(node.value))
    if isinstance(node, (Var, Const)):
        return node.name
    if isinstance(node, Bin):
        lhs, rhs = pretty(node.lhs), pretty(node.rhs)
        if _prec(node.lhs) < _prec(node):
            lhs = f"({lhs})"
        # all four operators parse left associative: an equal-precedence rhs
        # must keep its parentheses to reproduce the same tree
        if _prec(node.rhs) <= _prec(node):
            rhs = f"({rhs})"
        if node.op in "+-" and isinstance(node.rhs, Neg):
            rhs = f"({rhs})"
        return f"{lhs} {node.op} {rhs}"
    if isinstance(node, Pow):
        base = pretty(node.base)
        if _prec(node.base) <= _prec(node):
            base = f"({base})"
        exp = node.exponent
        e = repr(exp) if exp != int(exp) else str(int(exp))
        return f"{base}^{e}" if exp >= 0 else f"{base}^-{e.lstrip('-')}"
    if isinstance(node, Neg):
        arg = pretty(node.arg)
        if _prec(node.arg) < _prec(node):
            arg = f"({arg})"
        return f"-{arg}"
    if isinstance(node, Call):
        return f"{node.fn}({pretty(node.arg)})"
    raise TypeError(f"not an AST node: {node!r}")


# -- evaluation --------------------------------------------------------------------


def evaluate(node, env):
    """Evaluate over whatever number type env['u'], env['v'] carry."""
    try:
        return _eval(node, env)
    except (DivisionByZeroConstantTerm, NegativeSqrtConstantTerm, ZeroDivisionError) as e:
        raise EvaluationDomainError(str(e)) from e


def _eval(node, env):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return env[node.name]
    if isinstance(node, Const):
        return env["consts"][node.name]
    if isinstance(node, Bin):
        a, b = _eval(node.lhs, env), _eval(node.rhs, env)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        return a / b
    if isinstance(node, Pow):
        base = _eval(node.base, env)
        e = node.exponent
        if isinstance(base, jets.Jet2):
            return base ** (int(e) if float(e).is_integer() else e)
        if float(e).is_integer():
            return float(base) ** int(e)
        if base <= 0:
            raise EvaluationDomainError(f"real power of non-positive base {base}")
        return float(base) ** e
    if isinstance(node, Neg):
        return -_eval(node.arg, env)
    if isinstance(node, Call):
        return FUNCTIONS[node.fn](_eval(node.arg, env))
    raise TypeError(f"not an AST node: {node!r}")


# -- surfaces -------------------------------------------------------------------------


@dataclass(frozen=True)
class SurfaceExpr:
    """Parsed parametric surface, optionally with an explicit unit normal."""

    components: tuple  # 3 ASTs
    normal: tuple | None = None  # 3 ASTs or None
    constants: dict = field(default_factory=dict)
    domain: tuple = (-1.0, 1.0, -1.0, 1.0)
    source: str = ""

    def _env(self, u, v):
        return {"u": u, "v": v, "consts": self.constants}

    def eval_point(self, u: float, v: float) -> np.ndarray:
        env = self._env(float(u), float(v))
        return np.array([evaluate(c, env) for c in self.components])

    def eval_jet(self, u0, v0, order=jets.DEFAULT_ORDER):
        """Component jets of f (and of the normal, if declared) at (u0, v0).

        Batched base points (numpy arrays u0, v0 of equal shape) produce
        grid-valued jets.
        """
        u = jets.Jet2.variable("u", u0, order)
        v = jets.Jet2.variable("v", v0, order)
        env = self._env(u, v)
        f = [_as_jet(evaluate(c, env), order, u0) for c in self.components]
        n = None
        if self.normal is not None:
            n = [_as_jet(evaluate(c, env), order, u0) for c in self.normal]
        return f, n

    def pretty(self) -> str:
        lines = [f"const {k} = {v!r}" for k, v in self.constants.items()]
        for key, ast in zip(("x", "y", "z"), self.components):
            lines.append(f"{key} = {pretty(ast)}")
        if self.normal is not None:
            for key, ast in zip(("nx", "ny", "nz"), self.normal):
                lines.append(f"{key} = {pretty(ast)}")
        lines.append("domain = " + " ".join(repr(d) for d in self.domain))
        return "\n".join(lines) + "\n"


def _as_jet(value, order, base_like):
    if isinstance(value, jets.Jet2):
        return value
    value = np.asarray(value, dtype=float)
    if value.ndim == 0 and np.ndim(base_like) > 0:
        value = np.broadcast_to(value, np.shape(base_like)).copy()
    return jets.Jet2.constant(value, order)


_KEYS = ("x", "y", "z", "nx", "ny", "nz")


def parse_surface(text: str, validate: bool = True) -> SurfaceExpr:
    """Parse a surface definition file."""
    constants: dict[str, float] = {}
    parts: dict[str, object] = {}
    domain = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SurfaceFileError(f"line {lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key.startswith("const "):
            name = key[6:].strip()
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name) or name in ("u", "v"):
                raise SurfaceFileError(f"line {lineno}: bad constant name {name!r}")
            try:
                constants[name] = float(value)
            except ValueError as e:
                raise SurfaceFileError(f"line {lineno}: constant value must be numeric") from e
        elif key == "domain":
            nums = value.split()
            if len(nums) != 4:
                raise SurfaceFileError(f"line {lineno}: domain needs 4 numbers")
            domain = tuple(float(x) for x in nums)
            if not (domain[0] < domain[1] and domain[2] < domain[3]) or not all(
                    np.isfinite(domain)):
                raise SurfaceFileError(f"line {lineno}: domain must be finite and ordered")
        elif key in _KEYS:
            if key in parts:
                raise SurfaceFileError(f"line {lineno}: duplicate key {key!r}")
            try:
                parts[key] = parse(value, constants)
            except SurfaceSyntaxError as e:
                raise SurfaceSyntaxError(
                    f"line {lineno}, column {e.position + 1}: {e.args[0]}",
                    position=e.position, line=lineno) from e
        else:
            raise SurfaceFileError(f"line {lineno}: unknown key {key!r}")
    missing = [k for k in ("x", "y", "z") if k not in parts]
    if missing:
        raise SurfaceFileError(f"missing component(s): {', '.join(missing)}")
    nkeys = [k for k in ("nx", "ny", "nz") if k in parts]
    if nkeys and len(nkeys) != 3:
        raise SurfaceFileError("normal requires all of nx, ny, nz")
    surf = SurfaceExpr(
        components=tuple(parts[k] for k in ("x", "y", "z")),
        normal=tuple(parts[k] for k in ("nx", "ny", "nz")) if nkeys else None,
        constants=constants,
        domain=domain or (-1.0, 1.0, -1.0, 1.0),
        source=text,
    )
    if validate and surf.normal is not None:
        _validate_normal(surf)
    return surf


def _validate_normal(surf: SurfaceExpr, samples: int = 5, tol: float = 1e-8):
    """Check |n| = 1 and <df, n> = 0 on a sample grid at load time."""
    u0, u1, v0, v1 = surf.domain
    us = np.linspace(u0, u1, samples)
    vs = np.linspace(v0, v1, samples)
    uu, vv = [a.ravel() for a in np.meshgrid(us, vs)]
    f, n = surf.eval_jet(uu, vv, order=1)
    nval = np.stack([c.value() for c in n])
    norm = np.sqrt((nval ** 2).sum(axis=0))
    if np.nanmax(np.abs(norm - 1.0)) > tol:
        raise NotUnitNormal(
            f"supplied normal has length error {np.nanmax(np.abs(norm - 1.0)):.2e} on the sample grid")
    fu = np.stack([c.partial(1, 0) for c in f])
    fv = np.stack([c.partial(0, 1) for c in f])
    scale = 1.0 + max(np.nanmax(np.abs(fu)), np.nanmax(np.abs(fv)))
    worst = max(np.nanmax(np.abs((fu * nval).sum(axis=0))),
                np.nanmax(np.abs((fv * nval).sum(axis=0))))
    if worst > tol * scale:
        raise NotIsotropic(
            f"supplied normal is not tangent-orthogonal: residual {worst:.2e} on the sample grid")
