"""Expression language for parameter functions.

Solution families are instantiated by user-supplied smooth functions (a time
profile, a shear profile, mode envelopes ...).  This module parses them from a
small calculator grammar, differentiates them symbolically, and evaluates them
either as plain floats or as jets.  Symbolic differentiation is what keeps
field-level jets at order three: second derivatives of parameter functions are
expanded into their own expression trees before any jet arithmetic happens.

Nodes are immutable and compared by identity; evaluation memoizes per call on
node identity, so deliberately shared subtrees (a profile referenced from many
places in an assembled field) are evaluated once.

Grammar::

    expr  := term (('+'|'-') term)*
    term  := unary (('*'|'/') unary)*
    unary := '-' unary | power
    power := atom ('^' unary)?
    atom  := number | 'pi' | 'e' | ident | ident '(' expr ')' | '(' expr ')'

with identifiers drawn from  {t, x, y, z, w, varpi}  for variables and
{exp, ln, sin, cos, sqrt, tan}  for functions.  `^` is right-associative and
binds tighter than unary minus; exponents must be constants.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Mapping

from .errors import DomainError, ParseError, UsageError
from .jets import Jet, compose_univariate, jet_pow
from .quadrature import CumulativeIntegral

VARIABLES = ("t", "x", "y", "z", "w", "varpi")
FUNCTIONS = ("exp", "ln", "sin", "cos", "sqrt", "tan")
NAMED_CONSTANTS = {"pi": math.pi, "e": math.e}


class Expr:
    """Base node; arithmetic operators build folded nodes."""

    def __add__(self, other):
        return add(self, _as_expr(other))

    def __radd__(self, other):
        return add(_as_expr(other), self)

    def __sub__(self, other):
        return sub(self, _as_expr(other))

    def __rsub__(self, other):
        return sub(_as_expr(other), self)

    def __mul__(self, other):
        return mul(self, _as_expr(other))

    def __rmul__(self, other):
        return mul(_as_expr(other), self)

    def __truediv__(self, other):
        return div(self, _as_expr(other))

    def __rtruediv__(self, other):
        return div(_as_expr(other), self)

    def __neg__(self):
        return neg(self)

    def __repr__(self):
        return f"<{type(self).__name__} {to_source(self)}>"


@dataclass(eq=False, frozen=True)
class Const(Expr):
    value: float


@dataclass(eq=False, frozen=True)
class NamedConst(Expr):
    name: str  # 'pi' | 'e'


@dataclass(eq=False, frozen=True)
class Var(Expr):
    name: str


@dataclass(eq=False, frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(eq=False, frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(eq=False, frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(eq=False, frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(eq=False, frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(eq=False, frozen=True)
class Pow(Expr):
    base: Expr
    exponent: Expr  # constant-valued node


@dataclass(eq=False, frozen=True)
class Call(Expr):
    fn: str
    arg: Expr


@dataclass(eq=False, frozen=True)
class Integral(Expr):
    """Antiderivative of `integrand` in `var` from `lower`, as a function of `var`.

    Produced only by the library (never by the parser); the integrand must be
    univariate in `var`.  The attached evaluator caches cumulative values.
    """

    integrand: Expr
    var: str
    lower: float
    tol: float = 1e-12
    evaluator: CumulativeIntegral = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        extra = free_vars(self.integrand) - {self.var}
        if extra:
            raise UsageError(
                f"integrand may only depend on {self.var!r}, found {sorted(extra)}"
            )
        fn = lambda s: eval_value(self.integrand, {self.var: s})
        object.__setattr__(
            self, "evaluator", CumulativeIntegral(fn, base=self.lower, tol=self.tol)
        )


ZERO = Const(0.0)
ONE = Const(1.0)


def _as_expr(v) -> Expr:
    if isinstance(v, Expr):
        return v
    return Const(float(v))


def _const_value(e: Expr):
    if isinstance(e, Const):
        return e.value
    if isinstance(e, NamedConst):
        return NAMED_CONSTANTS[e.name]
    return None


# -- folding constructors (constant folding only, no algebraic rewriting) ----

def add(a: Expr, b: Expr) -> Expr:
    va, vb = _const_value(a), _const_value(b)
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    if va == 0.0 and isinstance(a, Const):
        return b
    if vb == 0.0 and isinstance(b, Const):
        return a
    return Add(a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    if isinstance(b, Const) and b.value == 0.0:
        return a
    if isinstance(a, Const) and a.value == 0.0:
        return neg(b)
    return Sub(a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    if isinstance(a, Const):
        if a.value == 0.0:
            return ZERO
        if a.value == 1.0:
            return b
    if isinstance(b, Const):
        if b.value == 0.0:
            return ZERO
        if b.value == 1.0:
            return a
    return Mul(a, b)


def div(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const) and b.value != 0.0:
        return Const(a.value / b.value)
    if isinstance(a, Const) and a.value == 0.0:
        return ZERO
    if isinstance(b, Const) and b.value == 1.0:
        return a
    return Div(a, b)


def neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return Const(-a.value)
    return Neg(a)


def pow_(base: Expr, exponent) -> Expr:
    e = _as_expr(exponent)
    ev = _const_value(e)
    if ev is None:
        raise UsageError("power exponent must be a constant")
    if ev == 0.0:
        return ONE
    if ev == 1.0:
        return base
    if isinstance(base, Const):
        try:
            return Const(float(base.value**ev))
        except (ValueError, OverflowError):
            pass
    return Pow(base, e)


def call(fn: str, arg: Expr) -> Expr:
    if fn not in FUNCTIONS:
        raise UsageError(f"unknown function {fn!r}")
    return Call(fn, arg)


# -- parser -------------------------------------------------------------------

_TOKEN = re.compile(
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()])"
)


class _Tokenizer:
    def __init__(self, source: str):
        self.source = source
        self.pos = 0
        self.tokens: list[tuple[str, str, int]] = []
        i, n = 0, len(source)
        while i < n:
            if source[i].isspace():
                i += 1
                continue
            m = _TOKEN.match(source, i)
            if not m:
                raise ParseError(f"unexpected character {source[i]!r}", i)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(), i))
            i = m.end()
        self.tokens.append(("end", "", n))

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok


class _Parser:
    def __init__(self, source: str, allowed_vars):
        self.toks = _Tokenizer(source)
        self.allowed = frozenset(allowed_vars)

    def parse(self) -> Expr:
        e = self.expr()
        kind, text, off = self.toks.peek()
        if kind != "end":
            raise ParseError(f"unexpected {text!r}", off)
        return e

    def expr(self) -> Expr:
        e = self.term()
        while True:
            kind, text, _ = self.toks.peek()
            if kind == "op" and text in "+-":
                self.toks.next()
                rhs = self.term()
                e = Add(e, rhs) if text == "+" else Sub(e, rhs)
            else:
                return e

    def term(self) -> Expr:
        e = self.unary()
        while True:
            kind, text, _ = self.toks.peek()
            if kind == "op" and text in "*/":
                self.toks.next()
                rhs = self.unary()
                e = Mul(e, rhs) if text == "*" else Div(e, rhs)
            else:
                return e

    def unary(self) -> Expr:
        kind, text, _ = self.toks.peek()
        if kind == "op" and text == "-":
            self.toks.next()
            inner = self.unary()
            if isinstance(inner, Const):
                return Const(-inner.value)
            return Neg(inner)
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        kind, text, off = self.toks.peek()
        if kind == "op" and text == "^":
            self.toks.next()
            exponent = self.unary()
            if _const_value(exponent) is None:
                # fold closed compound exponents like 3^2; reject variable ones
                if free_vars(exponent):
                    raise ParseError("exponent must be a constant", off)
                exponent = Const(eval_value(exponent, {}))
            return Pow(base, exponent)
        return base

    def atom(self) -> Expr:
        kind, text, off = self.toks.next()
        if kind == "num":
            return Const(float(text))
        if kind == "ident":
            if text in NAMED_CONSTANTS:
                return NamedConst(text)
            if text in FUNCTIONS:
                k2, t2, o2 = self.toks.next()
                if not (k2 == "op" and t2 == "("):
                    raise ParseError(f"function {text!r} requires '('", o2)
                arg = self.expr()
                k3, t3, o3 = self.toks.next()
                if not (k3 == "op" and t3 == ")"):
                    raise ParseError("missing ')'", o3)
                return Call(text, arg)
            if text in VARIABLES:
                if text not in self.allowed:
                    raise ParseError(f"variable {text!r} not allowed here", off)
                return Var(text)
            raise ParseError(f"unknown identifier {text!r}", off)
        if kind == "op" and text == "(":
            e = self.expr()
            k2, t2, o2 = self.toks.next()
            if not (k2 == "op" and t2 == ")"):
                raise ParseError("missing ')'", o2)
            return e
        raise ParseError(f"unexpected {text!r}" if text else "unexpected end of input", off)


def parse_expr(source: str, allowed_vars) -> Expr:
    """Parse `source`; only variables in `allowed_vars` may appear."""
    if not source or not source.strip():
        raise ParseError("empty expression", 0)
    return _Parser(source, allowed_vars).parse()


# -- pretty printer -------------------------------------------------------------

def _format_number(v: float) -> str:
    if v == int(v) and abs(v) < 1e16:
        return repr(v)
    return repr(v)


def to_source(e: Expr) -> str:
    """Minimal-parenthesis rendering that re-parses to the same structure."""
    if isinstance(e, Const):
        return _format_number(e.value)
    if isinstance(e, NamedConst):
        return e.name
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        inner = to_source(e.arg)
        if isinstance(e.arg, (Add, Sub, Mul, Div)):
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(e, (Add, Sub)):
        op = "+" if isinstance(e, Add) else "-"
        left = to_source(e.left)
        right = to_source(e.right)
        if isinstance(e.right, (Add, Sub)):
            right = f"({right})"
        return f"{left} {op} {right}"
    if isinstance(e, (Mul, Div)):
        op = "*" if isinstance(e, Mul) else "/"
        left = to_source(e.left)
        if isinstance(e.left, (Add, Sub)):
            left = f"({left})"
        right = to_source(e.right)
        if isinstance(e.right, (Add, Sub, Mul, Div)):
            right = f"({right})"
        return f"{left}{op}{right}"
    if isinstance(e, Pow):
        base = to_source(e.base)
        if not (
            isinstance(e.base, (Var, NamedConst, Call))
            or (isinstance(e.base, Const) and e.base.value >= 0)
        ):
            base = f"({base})"
        return f"{base}^{to_source(e.exponent)}"
    if isinstance(e, Call):
        return f"{e.fn}({to_source(e.arg)})"
    if isinstance(e, Integral):
        return f"integral({to_source(e.integrand)}, {e.var}, {_format_number(e.lower)})"
    raise UsageError(f"cannot print {type(e).__name__}")


def ast_equal(a: Expr, b: Expr) -> bool:
    """Structural equality (node identity is deliberately not value equality)."""
    if type(a) is not type(b):
        return False
    if isinstance(a, Const):
        return a.value == b.value
    if isinstance(a, (NamedConst, Var)):
        return a.name == b.name
    if isinstance(a, Neg):
        return ast_equal(a.arg, b.arg)
    if isinstance(a, (Add, Sub, Mul, Div)):
        return ast_equal(a.left, b.left) and ast_equal(a.right, b.right)
    if isinstance(a, Pow):
        return ast_equal(a.base, b.base) and ast_equal(a.exponent, b.exponent)
    if isinstance(a, Call):
        return a.fn == b.fn and ast_equal(a.arg, b.arg)
    if isinstance(a, Integral):
        return (
            a.var == b.var
            and a.lower == b.lower
            and ast_equal(a.integrand, b.integrand)
        )
    return False


# -- free variables / substitution ----------------------------------------------

def free_vars(e: Expr) -> frozenset[str]:
    if isinstance(e, Var):
        return frozenset({e.name})
    if isinstance(e, (Const, NamedConst)):
        return frozenset()
    if isinstance(e, Neg):
        return free_vars(e.arg)
    if isinstance(e, (Add, Sub, Mul, Div)):
        return free_vars(e.left) | free_vars(e.right)
    if isinstance(e, Pow):
        return free_vars(e.base)
    if isinstance(e, Call):
        return free_vars(e.arg)
    if isinstance(e, Integral):
        return free_vars(e.integrand) | {e.var}
    raise UsageError(f"cannot inspect {type(e).__name__}")


def substitute(e: Expr, mapping: Mapping[str, Expr], _memo=None) -> Expr:
    """Replace variables by expressions; untouched subtrees keep their identity."""
    if _memo is None:
        _memo = {}
    hit = _memo.get(id(e))
    if hit is not None:
        return hit

    if isinstance(e, Var):
        out = mapping.get(e.name, e)
    elif isinstance(e, (Const, NamedConst)):
        out = e
    elif isinstance(e, Neg):
        arg = substitute(e.arg, mapping, _memo)
        out = e if arg is e.arg else Neg(arg)
    elif isinstance(e, (Add, Sub, Mul, Div)):
        left = substitute(e.left, mapping, _memo)
        right = substitute(e.right, mapping, _memo)
        out = e if (left is e.left and right is e.right) else type(e)(left, right)
    elif isinstance(e, Pow):
        base = substitute(e.base, mapping, _memo)
        out = e if base is e.base else Pow(base, e.exponent)
    elif isinstance(e, Call):
        arg = substitute(e.arg, mapping, _memo)
        out = e if arg is e.arg else Call(e.fn, arg)
    elif isinstance(e, Integral):
        if e.var in mapping or (free_vars(e.integrand) & set(mapping)):
            raise UsageError("cannot substitute into an integral")
        out = e
    else:
        raise UsageError(f"cannot substitute in {type(e).__name__}")
    _memo[id(e)] = out
    return out


# -- symbolic differentiation ----------------------------------------------------

def diff_expr(e: Expr, var: str, _memo=None) -> Expr:
    """Exact symbolic derivative; shared input subtrees yield shared output."""
    if _memo is None:
        _memo = {}
    hit = _memo.get(id(e))
    if hit is not None:
        return hit

    if isinstance(e, (Const, NamedConst)):
        out = ZERO
    elif isinstance(e, Var):
        out = ONE if e.name == var else ZERO
    elif isinstance(e, Neg):
        out = neg(diff_expr(e.arg, var, _memo))
    elif isinstance(e, Add):
        out = add(diff_expr(e.left, var, _memo), diff_expr(e.right, var, _memo))
    elif isinstance(e, Sub):
        out = sub(diff_expr(e.left, var, _memo), diff_expr(e.right, var, _memo))
    elif isinstance(e, Mul):
        da = diff_expr(e.left, var, _memo)
        db = diff_expr(e.right, var, _memo)
        out = add(mul(da, e.right), mul(e.left, db))
    elif isinstance(e, Div):
        da = diff_expr(e.left, var, _memo)
        db = diff_expr(e.right, var, _memo)
        out = div(sub(mul(da, e.right), mul(e.left, db)), mul(e.right, e.right))
    elif isinstance(e, Pow):
        a = _const_value(e.exponent)
        du = diff_expr(e.base, var, _memo)
        out = mul(mul(Const(a), pow_(e.base, Const(a - 1.0))), du)
    elif isinstance(e, Call):
        du = diff_expr(e.arg, var, _memo)
        u = e.arg
        if e.fn == "exp":
            out = mul(e, du)
        elif e.fn == "ln":
            out = div(du, u)
        elif e.fn == "sin":
            out = mul(Call("cos", u), du)
        elif e.fn == "cos":
            out = neg(mul(Call("sin", u), du))
        elif e.fn == "sqrt":
            out = div(du, mul(Const(2.0), e))
        elif e.fn == "tan":
            out = mul(add(ONE, mul(e, e)), du)
        else:
            raise UsageError(f"no derivative rule for {e.fn!r}")
    elif isinstance(e, Integral):
        if var == e.var:
            out = e.integrand
        else:
            out = Integral(diff_expr(e.integrand, var, _memo), e.var, e.lower, e.tol)
    else:
        raise UsageError(f"cannot differentiate {type(e).__name__}")
    _memo[id(e)] = out
    return out


# -- evaluation -------------------------------------------------------------------

_JET_CALLS: dict[str, Callable[[Jet], Jet]] = {
    "exp": Jet.exp,
    "ln": Jet.log,
    "sin": Jet.sin,
    "cos": Jet.cos,
    "sqrt": Jet.sqrt,
    "tan": Jet.tan,
}


def _value_call(fn: str, x: float) -> float:
    if fn == "exp":
        return math.exp(x)
    if fn == "ln":
        if x <= 0.0:
            raise DomainError(f"log of non-positive value {x!r}")
        return math.log(x)
    if fn == "sin":
        return math.sin(x)
    if fn == "cos":
        return math.cos(x)
    if fn == "sqrt":
        if x < 0.0:
            raise DomainError(f"sqrt of negative value {x!r}")
        return math.sqrt(x)
    if fn == "tan":
        return math.tan(x)
    raise UsageError(f"unknown function {fn!r}")


def _attach(err: DomainError, node: Expr) -> DomainError:
    if err.where is None:
        err.where = to_source(node)
    return err


def eval_jet(e: Expr, env: Mapping[str, Jet], vars: tuple[str, ...], order: int, _memo=None) -> Jet:
    """Evaluate to a jet over `vars`; `env` binds every free variable to a jet."""
    if _memo is None:
        _memo = {}
    hit = _memo.get(id(e))
    if hit is not None:
        return hit

    if isinstance(e, Const):
        out = Jet.constant(e.value, vars, order)
    elif isinstance(e, NamedConst):
        out = Jet.constant(NAMED_CONSTANTS[e.name], vars, order)
    elif isinstance(e, Var):
        try:
            out = env[e.name]
        except KeyError:
            raise UsageError(f"unbound variable {e.name!r}") from None
    elif isinstance(e, Neg):
        out = -eval_jet(e.arg, env, vars, order, _memo)
    elif isinstance(e, Add):
        out = eval_jet(e.left, env, vars, order, _memo) + eval_jet(e.right, env, vars, order, _memo)
    elif isinstance(e, Sub):
        out = eval_jet(e.left, env, vars, order, _memo) - eval_jet(e.right, env, vars, order, _memo)
    elif isinstance(e, Mul):
        out = eval_jet(e.left, env, vars, order, _memo) * eval_jet(e.right, env, vars, order, _memo)
    elif isinstance(e, Div):
        num = eval_jet(e.left, env, vars, order, _memo)
        den = eval_jet(e.right, env, vars, order, _memo)
        try:
            out = num / den
        except DomainError as err:
            raise _attach(err, e)
    elif isinstance(e, Pow):
        base = eval_jet(e.base, env, vars, order, _memo)
        try:
            out = jet_pow(base, _const_value(e.exponent))
        except DomainError as err:
            raise _attach(err, e)
    elif isinstance(e, Call):
        arg = eval_jet(e.arg, env, vars, order, _memo)
        try:
            out = _JET_CALLS[e.fn](arg)
        except DomainError as err:
            raise _attach(err, e)
    elif isinstance(e, Integral):
        u = env.get(e.var)
        if u is None:
            raise UsageError(f"unbound variable {e.var!r}")
        c = u.value
        inner_order = max(order - 1, 0)
        fj = eval_jet(
            e.integrand,
            {e.var: Jet.variable(e.var, c, (e.var,), inner_order)},
            (e.var,),
            inner_order,
        )
        series = [e.evaluator.value_at(c)]
        for k in range(1, order + 1):
            series.append(float(fj.coeffs[k - 1]) / k)
        out = compose_univariate(series, u)
    else:
        raise UsageError(f"cannot evaluate {type(e).__name__}")
    _memo[id(e)] = out
    return out


def eval_value(e: Expr, env: Mapping[str, float], _memo=None) -> float:
    """Plain float evaluation; the independent path used by finite differences."""
    if _memo is None:
        _memo = {}
    hit = _memo.get(id(e))
    if hit is not None:
        return hit

    if isinstance(e, Const):
        out = e.value
    elif isinstance(e, NamedConst):
        out = NAMED_CONSTANTS[e.name]
    elif isinstance(e, Var):
        try:
            out = float(env[e.name])
        except KeyError:
            raise UsageError(f"unbound variable {e.name!r}") from None
    elif isinstance(e, Neg):
        out = -eval_value(e.arg, env, _memo)
    elif isinstance(e, Add):
        out = eval_value(e.left, env, _memo) + eval_value(e.right, env, _memo)
    elif isinstance(e, Sub):
        out = eval_value(e.left, env, _memo) - eval_value(e.right, env, _memo)
    elif isinstance(e, Mul):
        out = eval_value(e.left, env, _memo) * eval_value(e.right, env, _memo)
    elif isinstance(e, Div):
        den = eval_value(e.right, env, _memo)
        if den == 0.0:
            raise _attach(DomainError("division by zero"), e)
        out = eval_value(e.left, env, _memo) / den
    elif isinstance(e, Pow):
        base = eval_value(e.base, env, _memo)
        a = _const_value(e.exponent)
        if a != int(a) and base <= 0.0:
            raise _attach(
                DomainError(f"non-integer power {a!r} of non-positive base {base!r}"), e
            )
        if base == 0.0 and a < 0:
            raise _attach(DomainError("zero base with negative exponent"), e)
        out = float(base**a)
    elif isinstance(e, Call):
        x = eval_value(e.arg, env, _memo)
        try:
            out = _value_call(e.fn, x)
        except DomainError as err:
            raise _attach(err, e)
    elif isinstance(e, Integral):
        try:
            s = float(env[e.var])
        except KeyError:
            raise UsageError(f"unbound variable {e.var!r}") from None
        out = e.evaluator.value_at(s)
    else:
        raise UsageError(f"cannot evaluate {type(e).__name__}")
    _memo[id(e)] = out
    return out


def eval_expr_jet(e: Expr, point: Mapping[str, float], vars, order: int) -> Jet:
    """Evaluate `e` as a function of `vars` about `point` (other bindings are constants)."""
    vars = tuple(vars)
    missing = free_vars(e) - set(point)
    if missing:
        raise UsageError(f"unassigned variables: {sorted(missing)}")
    env = {}
    for name, value in point.items():
        if name in vars:
            env[name] = Jet.variable(name, float(value), vars, order)
        else:
            env[name] = Jet.constant(float(value), vars, order)
    return eval_jet(e, env, vars, order)
