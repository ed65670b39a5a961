"""Expression language for surface components: parse, differentiate, lower.

Grammar (precedence high to low: ^, unary -, * /, + -; left associative):

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := ['-'] base ('^' int)?
    base   := number | 'pi' | 't' | 'j' | func '(' expr ')' | '(' expr ')'
    func   := sin | cos | sinh | cosh | exp

Only entire functions are admitted, so the componentwise null-basis
extension of any well-formed expression is its unique holomorphic
extension.  The literal j lowers to the constants -1 / +1 on the two null
axes (j = qbar - q).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dnum import DNum, J, elementary
from .errors import ParseError

FUNCTIONS = ("sin", "cos", "sinh", "cosh", "exp")

_NP_FUNC = {name: getattr(np, name) for name in FUNCTIONS}


# -- AST -----------------------------------------------------------------

class Expr:
    __slots__ = ()


@dataclass(frozen=True)
class Num(Expr):
    value: float


@dataclass(frozen=True)
class Pi(Expr):
    pass


@dataclass(frozen=True)
class Var(Expr):
    """The variable t."""


@dataclass(frozen=True)
class Jay(Expr):
    """The hyperbolic unit j."""


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Bin(Expr):
    op: str  # one of + - * /
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exp: int


@dataclass(frozen=True)
class App(Expr):
    func: str
    arg: Expr


# -- folding constructors ------------------------------------------------

def _num(e) -> float | None:
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Pi):
        return math.pi
    if isinstance(e, Neg):
        v = _num(e.arg)
        return None if v is None else -v
    return None


def add(a: Expr, b: Expr) -> Expr:
    va, vb = _num(a), _num(b)
    if va is not None and vb is not None:
        return Num(va + vb)
    if va == 0.0:
        return b
    if vb == 0.0:
        return a
    return Bin("+", a, b)


def sub(a: Expr, b: Expr) -> Expr:
    va, vb = _num(a), _num(b)
    if va is not None and vb is not None:
        return Num(va - vb)
    if vb == 0.0:
        return a
    if va == 0.0:
        return neg(b)
    return Bin("-", a, b)


def mul(a: Expr, b: Expr) -> Expr:
    va, vb = _num(a), _num(b)
    if va is not None and vb is not None:
        return Num(va * vb)
    if va == 0.0 or vb == 0.0:
        return Num(0.0)
    if va == 1.0:
        return b
    if vb == 1.0:
        return a
    if isinstance(b, Neg):
        return mul(neg(a), b.arg)
    return Bin("*", a, b)


def div(a: Expr, b: Expr) -> Expr:
    va, vb = _num(a), _num(b)
    if vb is not None and va is not None and vb != 0.0:
        return Num(va / vb)
    if va == 0.0:
        return Num(0.0)
    if vb == 1.0:
        return a
    return Bin("/", a, b)


def neg(a: Expr) -> Expr:
    va = _num(a)
    if va is not None:
        return Num(-va)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def powi(a: Expr, k: int) -> Expr:
    if k == 0:
        return Num(1.0)
    if k == 1:
        return a
    va = _num(a)
    if va is not None:
        return Num(va**k)
    return Pow(a, k)


# -- parser --------------------------------------------------------------

class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            raise ParseError(f"expected {ch!r}", self.pos)
        self.pos += 1


def parse(text: str) -> Expr:
    """Parse an expression in the variable t; errors carry byte offsets."""
    toks = _Tokens(text)
    e = _parse_expr(toks)
    toks.skip_ws()
    if toks.pos != len(text):
        raise ParseError(f"unexpected trailing input {text[toks.pos:]!r}", toks.pos)
    return e


def _parse_expr(toks: _Tokens) -> Expr:
    e = _parse_term(toks)
    while toks.peek() in ("+", "-"):
        op = toks.peek()
        toks.pos += 1
        rhs = _parse_term(toks)
        e = Bin(op, e, rhs)
    return e


def _parse_term(toks: _Tokens) -> Expr:
    e = _parse_factor(toks)
    while toks.peek() in ("*", "/"):
        op = toks.peek()
        op_pos = toks.pos
        toks.pos += 1
        rhs = _parse_factor(toks)
        if op == "/" and _is_literal_zero(rhs):
            raise ParseError("division by the literal 0", op_pos)
        e = Bin(op, e, rhs)
    return e


def _is_literal_zero(e: Expr) -> bool:
    return isinstance(e, Num) and e.value == 0.0


def _parse_factor(toks: _Tokens) -> Expr:
    if toks.peek() == "-":
        toks.pos += 1
        return Neg(_parse_factor(toks))
    e = _parse_base(toks)
    if toks.peek() == "^":
        toks.pos += 1
        e = Pow(e, _parse_int(toks))
    return e


def _parse_int(toks: _Tokens) -> int:
    toks.skip_ws()
    start = toks.pos
    text = toks.text
    while toks.pos < len(text) and text[toks.pos].isdigit():
        toks.pos += 1
    if toks.pos == start:
        raise ParseError("expected integer exponent", start)
    if toks.pos < len(text) and text[toks.pos] in ".eE":
        raise ParseError("non-integer exponent", start)
    return int(text[start : toks.pos])


def _parse_base(toks: _Tokens) -> Expr:
    ch = toks.peek()
    if ch == "":
        raise ParseError("unexpected end of input", toks.pos)
    if ch == "(":
        open_pos = toks.pos
        toks.pos += 1
        e = _parse_expr(toks)
        if toks.peek() != ")":
            raise ParseError("unbalanced parentheses", open_pos)
        toks.pos += 1
        return e
    if ch.isdigit() or ch == ".":
        return _parse_number(toks)
    if ch.isalpha():
        return _parse_ident(toks)
    raise ParseError(f"unexpected character {ch!r}", toks.pos)


def _parse_number(toks: _Tokens) -> Expr:
    text = toks.text
    start = toks.pos
    i = toks.pos
    while i < len(text) and (text[i].isdigit() or text[i] == "."):
        i += 1
    if i < len(text) and text[i] in "eE":
        k = i + 1
        if k < len(text) and text[k] in "+-":
            k += 1
        if k < len(text) and text[k].isdigit():
            i = k
            while i < len(text) and text[i].isdigit():
                i += 1
    try:
        value = float(text[start:i])
    except ValueError:
        raise ParseError(f"malformed number {text[start:i]!r}", start) from None
    toks.pos = i
    return Num(value)


def _parse_ident(toks: _Tokens) -> Expr:
    text = toks.text
    start = toks.pos
    i = toks.pos
    while i < len(text) and text[i].isalnum():
        i += 1
    name = text[start:i]
    toks.pos = i
    if name == "t":
        return Var()
    if name == "j":
        return Jay()
    if name == "pi":
        return Pi()
    if name in FUNCTIONS:
        toks.expect("(")
        arg = _parse_expr(toks)
        if toks.peek() != ")":
            raise ParseError("unbalanced parentheses", start)
        toks.pos += 1
        return App(name, arg)
    raise ParseError(f"unknown identifier {name!r}", start)


# -- serialization -------------------------------------------------------

def serialize(e: Expr) -> str:
    return _ser(e, 0)


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _ser(e: Expr, prec: int) -> str:
    if isinstance(e, Num):
        return f"{e.value:.17g}"
    if isinstance(e, Pi):
        return "pi"
    if isinstance(e, Var):
        return "t"
    if isinstance(e, Jay):
        return "j"
    if isinstance(e, Neg):
        s = "-" + _ser(e.arg, 3)
        return f"({s})" if prec > 2 else s
    if isinstance(e, Bin):
        p = _PREC[e.op]
        s = _ser(e.left, p) + e.op + _ser(e.right, p + 1)
        return f"({s})" if prec > p else s
    if isinstance(e, Pow):
        return _ser(e.base, 4) + f"^{e.exp}"
    if isinstance(e, App):
        return f"{e.func}({_ser(e.arg, 0)})"
    raise TypeError(f"not an Expr: {e!r}")


# -- calculus ------------------------------------------------------------

_DERIV = {
    "sin": lambda a: App("cos", a),
    "cos": lambda a: neg(App("sin", a)),
    "sinh": lambda a: App("cosh", a),
    "cosh": lambda a: App("sinh", a),
    "exp": lambda a: App("exp", a),
}


def diff_t(e: Expr) -> Expr:
    """Symbolic derivative with respect to t; j is a constant."""
    if isinstance(e, (Num, Pi, Jay)):
        return Num(0.0)
    if isinstance(e, Var):
        return Num(1.0)
    if isinstance(e, Neg):
        return neg(diff_t(e.arg))
    if isinstance(e, Bin):
        da, db = diff_t(e.left), diff_t(e.right)
        if e.op == "+":
            return add(da, db)
        if e.op == "-":
            return sub(da, db)
        if e.op == "*":
            return add(mul(da, e.right), mul(e.left, db))
        return div(sub(mul(da, e.right), mul(e.left, db)), powi(e.right, 2))
    if isinstance(e, Pow):
        return mul(mul(Num(float(e.exp)), powi(e.base, e.exp - 1)), diff_t(e.base))
    if isinstance(e, App):
        return mul(_DERIV[e.func](e.arg), diff_t(e.arg))
    raise TypeError(f"not an Expr: {e!r}")


def subst_j(e: Expr, jval: float) -> Expr:
    """Replace j by a real constant, folding as we go."""
    if isinstance(e, Jay):
        return Num(jval)
    if isinstance(e, (Num, Pi, Var)):
        return e
    if isinstance(e, Neg):
        return neg(subst_j(e.arg, jval))
    if isinstance(e, Bin):
        a, b = subst_j(e.left, jval), subst_j(e.right, jval)
        return {"+": add, "-": sub, "*": mul, "/": div}[e.op](a, b)
    if isinstance(e, Pow):
        return powi(subst_j(e.base, jval), e.exp)
    if isinstance(e, App):
        return App(e.func, subst_j(e.arg, jval))
    raise TypeError(f"not an Expr: {e!r}")


def subst_t(e: Expr, repl: Expr) -> Expr:
    """Replace the variable t by another expression."""
    if isinstance(e, Var):
        return repl
    if isinstance(e, (Num, Pi, Jay)):
        return e
    if isinstance(e, Neg):
        return neg(subst_t(e.arg, repl))
    if isinstance(e, Bin):
        a, b = subst_t(e.left, repl), subst_t(e.right, repl)
        return {"+": add, "-": sub, "*": mul, "/": div}[e.op](a, b)
    if isinstance(e, Pow):
        return powi(subst_t(e.base, repl), e.exp)
    if isinstance(e, App):
        return App(e.func, subst_t(e.arg, repl))
    raise TypeError(f"not an Expr: {e!r}")


def as_affine(e: Expr) -> tuple[float, float] | None:
    """If e == k*t + c with constant k, c, return (k, c); else None."""
    v = _const_value(e)
    if v is not None:
        return (0.0, v)
    if isinstance(e, Var):
        return (1.0, 0.0)
    if isinstance(e, Neg):
        kc = as_affine(e.arg)
        return None if kc is None else (-kc[0], -kc[1])
    if isinstance(e, Bin):
        la, ra = as_affine(e.left), as_affine(e.right)
        if la is None or ra is None:
            return None
        if e.op == "+":
            return (la[0] + ra[0], la[1] + ra[1])
        if e.op == "-":
            return (la[0] - ra[0], la[1] - ra[1])
        if e.op == "*":
            if la[0] == 0.0:
                return (la[1] * ra[0], la[1] * ra[1])
            if ra[0] == 0.0:
                return (ra[1] * la[0], ra[1] * la[1])
            return None
        if e.op == "/":
            if ra[0] == 0.0 and ra[1] != 0.0:
                return (la[0] / ra[1], la[1] / ra[1])
            return None
    return None


def _const_value(e: Expr) -> float | None:
    """Numeric value of a t-free, j-free expression, else None."""
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Pi):
        return math.pi
    if isinstance(e, (Var, Jay)):
        return None
    if isinstance(e, Neg):
        v = _const_value(e.arg)
        return None if v is None else -v
    if isinstance(e, Bin):
        a, b = _const_value(e.left), _const_value(e.right)
        if a is None or b is None:
            return None
        if e.op == "/" and b == 0.0:
            return None
        return {"+": a + b, "-": a - b, "*": a * b, "/": a / b if b else None}[e.op]
    if isinstance(e, Pow):
        v = _const_value(e.base)
        return None if v is None else v**e.exp
    if isinstance(e, App):
        v = _const_value(e.arg)
        return None if v is None else float(_NP_FUNC[e.func](v))
    return None


_ANTIDERIV = {
    "sin": lambda a: neg(App("cos", a)),
    "cos": lambda a: App("sin", a),
    "sinh": lambda a: App("cosh", a),
    "cosh": lambda a: App("sinh", a),
    "exp": lambda a: App("exp", a),
}


def antiderivative(e: Expr) -> Expr | None:
    """Symbolic antiderivative of a j-free expression, or None.

    Handles constants, powers of t, the entire elementary functions with
    affine arguments, and linear combinations thereof.  Anything else falls
    back to numeric quadrature in the caller.
    """
    v = _const_value(e)
    if v is not None:
        return mul(Num(v), Var())
    if isinstance(e, Var):
        return div(powi(Var(), 2), Num(2.0))
    if isinstance(e, Neg):
        F = antiderivative(e.arg)
        return None if F is None else neg(F)
    if isinstance(e, Pow) and isinstance(e.base, Var) and e.exp != -1:
        return div(powi(Var(), e.exp + 1), Num(float(e.exp + 1)))
    if isinstance(e, App):
        kc = as_affine(e.arg)
        if kc is not None and kc[0] != 0.0:
            return div(_ANTIDERIV[e.func](e.arg), Num(kc[0]))
        return None
    if isinstance(e, Bin):
        if e.op in "+-":
            Fa, Fb = antiderivative(e.left), antiderivative(e.right)
            if Fa is None or Fb is None:
                return None
            return add(Fa, Fb) if e.op == "+" else sub(Fa, Fb)
        if e.op == "*":
            ca, cb = _const_value(e.left), _const_value(e.right)
            if ca is not None:
                F = antiderivative(e.right)
                return None if F is None else mul(Num(ca), F)
            if cb is not None:
                F = antiderivative(e.left)
                return None if F is None else mul(Num(cb), F)
            return None
        if e.op == "/":
            cb = _const_value(e.right)
            if cb not in (None, 0.0):
                F = antiderivative(e.left)
                return None if F is None else div(F, Num(cb))
            return None
    return None


# -- evaluation ----------------------------------------------------------

def eval_expr(e: Expr, t, jval=None):
    """Evaluate e at t.

    t may be a float, a numpy array (with jval = +-1 fixed by the caller),
    or a DNum for direct evaluation over the algebra (jval defaults to j).
    """
    if isinstance(t, DNum):
        return _eval_dnum(e, t)
    return _eval_real(e, t, jval if jval is not None else 1.0)


def _eval_real(e: Expr, x, jval: float):
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Pi):
        return math.pi
    if isinstance(e, Var):
        return x
    if isinstance(e, Jay):
        return jval
    if isinstance(e, Neg):
        return -_eval_real(e.arg, x, jval)
    if isinstance(e, Bin):
        a = _eval_real(e.left, x, jval)
        b = _eval_real(e.right, x, jval)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        return a / b
    if isinstance(e, Pow):
        return _eval_real(e.base, x, jval) ** e.exp
    if isinstance(e, App):
        return _NP_FUNC[e.func](_eval_real(e.arg, x, jval))
    raise TypeError(f"not an Expr: {e!r}")


def _eval_dnum(e: Expr, t: DNum) -> DNum:
    if isinstance(e, Num):
        return DNum(e.value)
    if isinstance(e, Pi):
        return DNum(math.pi)
    if isinstance(e, Var):
        return t
    if isinstance(e, Jay):
        return J
    if isinstance(e, Neg):
        return -_eval_dnum(e.arg, t)
    if isinstance(e, Bin):
        a = _eval_dnum(e.left, t)
        b = _eval_dnum(e.right, t)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        return a / b
    if isinstance(e, Pow):
        return DNum.from_null(_eval_dnum(e.base, t).p ** e.exp, _eval_dnum(e.base, t).m ** e.exp)
    if isinstance(e, App):
        return elementary(e.func, _eval_dnum(e.arg, t))
    raise TypeError(f"not an Expr: {e!r}")
