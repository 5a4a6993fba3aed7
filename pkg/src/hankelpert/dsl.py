"""A small expression language for perturbation factors h(x).

Grammar (whitespace-insensitive):

    expr   :=  term  (('+' | '-') term)*
    term   :=  unary (('*' | '/') unary)*
    unary  :=  '-' unary | power
    power  :=  atom ('^' unary)?          # right-associative
    atom   :=  NUMBER | 'x' | NAME '(' expr ')' | '(' expr ')'

NUMBER is a nonnegative integer or decimal literal (stored exactly as a
rational), NAME is one of exp, log, sqrt, cosh, sinh. Exponents must
constant-fold to a rational; 'x^x' is rejected at parse time. Parse errors
carry the byte offset and the token kinds that would have been accepted.

Evaluation is exact-rational-in, arbitrary-precision-out: numeric leaves are
Fractions, arithmetic on them stays exact until a transcendental call or an
mpf argument forces the current mpmath working precision. Domain faults
(log of a nonpositive value, sqrt of a negative, 0 to a negative power,
negative base to a fractional power) raise EvalDomainError with the point.

``to_source`` prints an expression with minimal parentheses such that
reparsing reproduces the identical tree; ``validate_positive`` samples a
Chebyshev point set (endpoints included) and certifies h > 0 there or
raises PositivityError with the witnessing point.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, replace
from fractions import Fraction

import mpmath
from mpmath import mpf

from .errors import DomainError, EvalDomainError, ParseError, PositivityError
from .precision import BigReal, Precision, to_mpf

FUNCTION_NAMES = ("exp", "log", "sqrt", "cosh", "sinh")


# --- syntax tree ---

@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class Add:
    left: object
    right: object


@dataclass(frozen=True)
class Sub:
    left: object
    right: object


@dataclass(frozen=True)
class Mul:
    left: object
    right: object


@dataclass(frozen=True)
class Div:
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: Fraction


@dataclass(frozen=True)
class Call:
    name: str
    argument: object


# --- evaluation ---

def _coerce(a, b):
    """Align operand types: exact stays exact, but mpf contaminates the pair.

    mpmath accepts Fraction in some mixed operations and rejects it in
    others (notably division), so the conversion is made explicit.
    """
    a_is_mp = isinstance(a, mpf)
    b_is_mp = isinstance(b, mpf)
    if a_is_mp and not b_is_mp:
        return a, to_mpf(b)
    if b_is_mp and not a_is_mp:
        return to_mpf(a), b
    return a, b


def evaluate(node, x):
    """Value of the expression at x; Fraction-exact where possible."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return x
    if isinstance(node, Neg):
        return -evaluate(node.operand, x)
    if isinstance(node, (Add, Sub, Mul, Div)):
        a, b = _coerce(evaluate(node.left, x), evaluate(node.right, x))
        if isinstance(node, Add):
            return a + b
        if isinstance(node, Sub):
            return a - b
        if isinstance(node, Mul):
            return a * b
        if b == 0:
            raise EvalDomainError("division by zero", x)
        return a / b
    if isinstance(node, Pow):
        base = evaluate(node.base, x)
        q = node.exponent
        if base == 0 and q < 0:
            raise EvalDomainError("zero raised to a negative power", x)
        if q.denominator == 1:
            return base ** q.numerator
        if base < 0:
            raise EvalDomainError("negative base with a fractional exponent", x)
        return mpmath.power(to_mpf(base), to_mpf(q))
    if isinstance(node, Call):
        v = evaluate(node.argument, x)
        if node.name == "exp":
            return mpmath.exp(to_mpf(v))
        if node.name == "log":
            if v <= 0:
                raise EvalDomainError("log of a nonpositive value", x)
            return mpmath.log(to_mpf(v))
        if node.name == "sqrt":
            if v < 0:
                raise EvalDomainError("sqrt of a negative value", x)
            return mpmath.sqrt(to_mpf(v))
        if node.name == "cosh":
            return mpmath.cosh(to_mpf(v))
        if node.name == "sinh":
            return mpmath.sinh(to_mpf(v))
    raise DomainError(f"cannot evaluate node {node!r}")


# --- printing ---

def _decimal_repr(q: Fraction):
    """Finite decimal string for q >= 0, or None if the denominator is not 2^a 5^b."""
    if q.denominator == 1:
        return str(q.numerator)
    d = q.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return None
    scale = max(twos, fives)
    digits = str(q.numerator * 10 ** scale // q.denominator).rjust(scale + 1, "0")
    return digits[:-scale] + "." + digits[-scale:]


def _precedence(node) -> int:
    if isinstance(node, (Add, Sub)):
        return 1
    if isinstance(node, (Mul, Div)):
        return 2
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Pow):
        return 4
    return 5


def _exponent_repr(q: Fraction) -> str:
    mag = abs(q)
    text = _decimal_repr(mag)
    if text is None:
        text = f"{mag.numerator}/{mag.denominator}"
    if q < 0:
        return f"(-{text})"
    if "/" in text:
        return f"({text})"
    return text


def to_source(node) -> str:
    """Render with minimal parentheses; reparsing yields a structurally equal tree."""
    def wrap(child, minimum):
        text = to_source(child)
        return f"({text})" if _precedence(child) < minimum else text

    if isinstance(node, Num):
        if node.value < 0:
            raise DomainError("negative literal; wrap it in a unary minus")
        text = _decimal_repr(node.value)
        if text is None:
            return f"({node.value.numerator}/{node.value.denominator})"
        return text
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Neg):
        return "-" + wrap(node.operand, 3)
    if isinstance(node, Add):
        return f"{wrap(node.left, 1)} + {wrap(node.right, 2)}"
    if isinstance(node, Sub):
        return f"{wrap(node.left, 1)} - {wrap(node.right, 2)}"
    if isinstance(node, Mul):
        return f"{wrap(node.left, 2)}*{wrap(node.right, 3)}"
    if isinstance(node, Div):
        return f"{wrap(node.left, 2)}/{wrap(node.right, 3)}"
    if isinstance(node, Pow):
        return f"{wrap(node.base, 5)}^{_exponent_repr(node.exponent)}"
    if isinstance(node, Call):
        return f"{node.name}({to_source(node.argument)})"
    raise DomainError(f"cannot print node {node!r}")


# --- parsing ---

_TOKEN_RE = re.compile(r"\s*(?:(\d+\.\d+|\d+)|([A-Za-z_][A-Za-z_0-9]*)|([-+*/^()]))")


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(source: str):
    tokens = []
    i = 0
    while i < len(source):
        rest = source[i:]
        if not rest.strip():
            break
        m = _TOKEN_RE.match(source, i)
        if m is None:
            at = len(source) - len(rest.lstrip())
            raise ParseError(f"unexpected character {source[at]!r}", at)
        if m.group(1) is not None:
            tokens.append(_Token("number", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(_Token("name", m.group(2), m.start(2)))
        else:
            tokens.append(_Token(m.group(3), m.group(3), m.start(3)))
        i = m.end()
    tokens.append(_Token("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.index = 0

    def peek(self) -> _Token:
        return self.tokens[self.index]

    def advance(self) -> _Token:
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            shown = tok.text or "end of input"
            raise ParseError(f"expected {kind!r}, found {shown!r}", tok.pos, (kind,))
        return self.advance()

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"unexpected trailing input {tok.text!r}", tok.pos,
                             ("+", "-", "*", "/", "^"))
        return node

    def expr(self):
        node = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.advance()
            right = self.term()
            node = Add(node, right) if op.kind == "+" else Sub(node, right)
        return node

    def term(self):
        node = self.unary()
        while self.peek().kind in ("*", "/"):
            op = self.advance()
            right = self.unary()
            node = Mul(node, right) if op.kind == "*" else Div(node, right)
        return node

    def unary(self):
        if self.peek().kind == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek().kind == "^":
            caret = self.advance()
            exponent = self.unary()
            folded = _fold_rational(exponent)
            if folded is None:
                raise ParseError("exponent must be a rational constant",
                                 caret.pos, ("number",))
            return Pow(base, folded)
        return base

    def atom(self):
        tok = self.peek()
        if tok.kind == "number":
            self.advance()
            return Num(Fraction(tok.text))
        if tok.kind == "name":
            self.advance()
            if tok.text == "x":
                return Var()
            if tok.text in FUNCTION_NAMES:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(tok.text, arg)
            raise ParseError(f"unknown name {tok.text!r}", tok.pos,
                             ("x",) + FUNCTION_NAMES)
        if tok.kind == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        shown = tok.text or "end of input"
        raise ParseError(f"expected a value, found {shown!r}", tok.pos,
                         ("number", "x", "("))


def _fold_rational(node):
    """Fraction value of a constant subtree, or None if it involves x or a call."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Neg):
        v = _fold_rational(node.operand)
        return None if v is None else -v
    if isinstance(node, (Add, Sub, Mul, Div)):
        lv = _fold_rational(node.left)
        rv = _fold_rational(node.right)
        if lv is None or rv is None:
            return None
        if isinstance(node, Add):
            return lv + rv
        if isinstance(node, Sub):
            return lv - rv
        if isinstance(node, Mul):
            return lv * rv
        if rv == 0:
            return None
        return lv / rv
    if isinstance(node, Pow):
        bv = _fold_rational(node.base)
        if bv is None or (bv == 0 and node.exponent < 0):
            return None
        if node.exponent.denominator == 1:
            return bv ** node.exponent.numerator
        return None
    return None


# --- public surface ---

@dataclass(frozen=True)
class PositivityCertificate:
    """Record that h was sampled positive: point count, minimum, and its location."""

    samples: int
    min_value: object
    argmin: object


@dataclass(frozen=True)
class PerturbationFn:
    """A positive perturbation factor: callable tree plus its normalized source."""

    source: str
    ast: object
    positivity_certificate: PositivityCertificate = None

    def __call__(self, x) -> BigReal:
        v = evaluate(self.ast, x)
        return v if isinstance(v, mpf) else to_mpf(v)

    def exact(self, x) -> Fraction:
        """Evaluate without rounding; only trees free of transcendental calls qualify."""
        v = evaluate(self.ast, Fraction(x))
        if isinstance(v, Fraction):
            return v
        raise DomainError("expression does not evaluate exactly")

    def with_certificate(self, cert: PositivityCertificate) -> "PerturbationFn":
        return replace(self, positivity_certificate=cert)


def parse_h(source: str) -> PerturbationFn:
    """Parse an expression into a callable perturbation (no positivity check yet)."""
    ast = _Parser(source).parse()
    return PerturbationFn(to_source(ast), ast)


def validate_positive(h: PerturbationFn, samples: int = 257,
                      p: Precision = None) -> PositivityCertificate:
    """Certify h > 0 on a Chebyshev point set including both endpoints.

    Samples cos(pi j / (samples-1)) for j = 0..samples-1; the clustering near
    +-1 targets where admissible perturbations degenerate first. Raises
    PositivityError with the witnessing point on any nonpositive value.
    EvalDomainError from the expression itself propagates unchanged.
    """
    if samples < 3:
        raise DomainError(f"need at least 3 sample points, got {samples}")
    ctx = p.workdps() if p is not None else mpmath.workdps(mpmath.mp.dps)
    with ctx:
        best_v = None
        best_x = None
        for j in range(samples):
            if j == 0:
                x = mpf(1)
            elif j == samples - 1:
                x = mpf(-1)
            else:
                x = mpmath.cos(mpmath.pi * j / (samples - 1))
            v = h(x)
            if not v > 0:
                raise PositivityError(
                    f"h({mpmath.nstr(x, 8)}) = {mpmath.nstr(v, 6)} is not positive",
                    witness=x, value=v)
            if best_v is None or v < best_v:
                best_v, best_x = v, x
    return PositivityCertificate(samples, best_v, best_x)


# --- ready-made perturbations ---

def _num_node(q) -> object:
    """Literal node for a rational constant; negatives get a unary minus."""
    q = Fraction(q)
    neg = q < 0
    mag = abs(q)
    if _decimal_repr(mag) is None:
        node = Div(Num(Fraction(mag.numerator)), Num(Fraction(mag.denominator)))
    else:
        node = Num(mag)
    return Neg(node) if neg else node


def h_one() -> PerturbationFn:
    """The trivial perturbation h = 1."""
    ast = Num(Fraction(1))
    return PerturbationFn(to_source(ast), ast)


def h_const(c) -> PerturbationFn:
    """Constant perturbation h = c, c > 0 rational."""
    c = Fraction(c)
    if c <= 0:
        raise DomainError(f"constant perturbation must be positive, got {c}")
    ast = _num_node(c)
    return PerturbationFn(to_source(ast), ast)


def h_exp_linear(t) -> PerturbationFn:
    """h = exp(t x), entire and positive for every rational t."""
    t = Fraction(t)
    if t == 1:
        inner = Var()
    elif t == -1:
        inner = Neg(Var())
    else:
        inner = Mul(_num_node(t), Var())
    ast = Call("exp", inner)
    return PerturbationFn(to_source(ast), ast)


def h_exp_cheb2(t) -> PerturbationFn:
    """h = exp(t (2x^2 - 1)), the degree-two pure-oscillation perturbation."""
    t = Fraction(t)
    poly = Sub(Mul(Num(Fraction(2)), Pow(Var(), Fraction(2))), Num(Fraction(1)))
    inner = poly if t == 1 else Mul(_num_node(t), poly)
    ast = Call("exp", inner)
    return PerturbationFn(to_source(ast), ast)


def h_one_plus_square(c) -> PerturbationFn:
    """h = 1 + c x^2, positive on [-1, 1] for rational c > -1."""
    c = Fraction(c)
    if c <= -1:
        raise DomainError(f"1 + c x^2 must stay positive on [-1, 1], got c = {c}")
    if c == 0:
        return h_one()
    mag = abs(c)
    square = Pow(Var(), Fraction(2))
    if mag != 1:
        square = Mul(_num_node(mag), square)
    one = Num(Fraction(1))
    ast = Add(one, square) if c > 0 else Sub(one, square)
    return PerturbationFn(to_source(ast), ast)
