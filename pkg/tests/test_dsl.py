"""Expression grammar for perturbation factors: parsing, printing, evaluation,
and the positivity screen."""
from fractions import Fraction

import mpmath
import pytest

from hankelpert.dsl import (Add, Call, Div, Mul, Num, Pow, Var, evaluate,
                            h_const, h_exp_cheb2, h_exp_linear, h_one,
                            h_one_plus_square, parse_h, to_source,
                            validate_positive)
from hankelpert.errors import (DomainError, EvalDomainError, ParseError,
                               PositivityError)
from hankelpert.precision import Precision

ROUND_TRIP_CORPUS = (
    "exp(0.5*x)",
    "1 + x^2/2",
    "2*(1 - x/3) + x^2",
    "exp(x)/(2 + x)",
    "sqrt(4 + x)",
    "cosh(x)/2 + sinh(x)^2 + 1",
    "(1 + x^2/2)^(3/2)",
    "1 - 0.999*x^2",
    "exp(0.25*(2*x^2 - 1))",
    "2 - -x",
    "x^2^3 + 2",
)


def test_parse_builds_expected_trees():
    assert parse_h("exp(0.5*x)").ast == Call("exp", Mul(Num(Fraction(1, 2)), Var()))
    assert parse_h("1 + x^2/2").ast == Add(
        Num(Fraction(1)), Div(Pow(Var(), Fraction(2)), Num(Fraction(2))))


def test_parse_error_carries_offset_and_expectation():
    with pytest.raises(ParseError) as err:
        parse_h("2*(1-x")
    assert err.value.position == 6
    assert err.value.expected == (")",)


def test_parse_rejects_symbolic_exponent():
    with pytest.raises(ParseError, match="rational constant"):
        parse_h("x^x")


def test_parse_rejects_unknown_names():
    with pytest.raises(ParseError, match="unknown name"):
        parse_h("foo(x)")
    with pytest.raises(ParseError, match="unknown name"):
        parse_h("y + 1")


def test_parse_rejects_truncated_input():
    for src in ("exp()", "1 + ", "(", "1 2"):
        with pytest.raises(ParseError):
            parse_h(src)


def test_precedence_and_associativity():
    h = parse_h("1 + 2*x^2")
    assert h.exact(Fraction(3)) == 19
    # unary minus binds looser than the power
    assert evaluate(parse_h("2 - x^2").ast, Fraction(3)) == -7
    # left-assoc chain: 8/4/2 = 1
    assert evaluate(parse_h("8/4/2 + x").ast, Fraction(0)) == 1
    # power tower folds right-assoc: x^2^3 = x^8
    assert parse_h("x^2^3 + 1").exact(Fraction(2)) == 257


def test_round_trip_preserves_tree():
    for src in ROUND_TRIP_CORPUS:
        h = parse_h(src)
        again = parse_h(h.source)
        assert again.ast == h.ast, src
        assert to_source(again.ast) == h.source, src


def test_builtin_sources_round_trip():
    fns = (h_one(), h_const(Fraction(3, 2)), h_exp_linear(1),
           h_exp_linear(Fraction(-1, 2)), h_exp_cheb2(1),
           h_one_plus_square(Fraction(1, 2)), h_one_plus_square(Fraction(-1, 2)))
    for h in fns:
        assert parse_h(h.source).ast == h.ast, h.source


def test_exact_evaluation_stays_rational():
    h = parse_h("1 + x^2/2")
    assert h.exact(Fraction(1, 3)) == Fraction(19, 18)
    assert parse_h("(1 + x)^(-2)").exact(Fraction(1)) == Fraction(1, 4)


def test_mpf_evaluation_values():
    with mpmath.workdps(50):
        x = mpmath.mpf("0.5")
        assert float(abs(h_exp_linear(1)(x) - mpmath.exp(x))) < 1e-45
        assert float(abs(h_exp_cheb2(1)(x) - mpmath.exp(2 * x * x - 1))) < 1e-45
        assert float(abs(parse_h("sqrt(4 + x)")(x) - mpmath.sqrt(x + 4))) < 1e-45
        assert float(abs(h_one()(x) - 1)) < 1e-48


def test_evaluation_is_deterministic():
    with mpmath.workdps(64):
        h = parse_h("exp(x)/(2 + x) + cosh(x)^2")
        x = mpmath.mpf(1) / 7
        assert h(x) == h(x)


def test_evaluation_domain_guards():
    with pytest.raises(EvalDomainError):
        evaluate(parse_h("log(x)").ast, Fraction(-1, 2))
    with pytest.raises(EvalDomainError):
        evaluate(parse_h("1/x").ast, Fraction(0))
    with pytest.raises(EvalDomainError):
        evaluate(parse_h("x^(-1)").ast, Fraction(0))
    with pytest.raises(EvalDomainError):
        evaluate(parse_h("(x - 2)^(1/2)").ast, Fraction(0))
    with pytest.raises(EvalDomainError):
        evaluate(parse_h("sqrt(x)").ast, Fraction(-1))


def test_validate_accepts_positive_functions():
    cert = validate_positive(parse_h("exp(x)"), samples=257, p=Precision(64))
    with mpmath.workdps(40):
        assert float(abs(cert.min_value - mpmath.exp(-1))) < 1e-30
        assert float(abs(cert.argmin + 1)) < 1e-30
    assert cert.samples >= 257


def test_validate_thin_positive_margin():
    cert = validate_positive(parse_h("1 - 0.999*x^2"))
    assert 0 < float(cert.min_value) < 0.0011


def test_validate_rejects_sign_changes():
    with pytest.raises(PositivityError) as err:
        validate_positive(parse_h("x"))
    assert err.value.witness is not None
    assert float(err.value.value) <= 0
    with pytest.raises(PositivityError):
        validate_positive(parse_h("log(x)"))  # hits h(1) = 0


def test_validate_propagates_evaluation_failures():
    with pytest.raises(EvalDomainError):
        validate_positive(parse_h("log(x - 2)"))


def test_certificate_attachment():
    h = parse_h("2 + x")
    assert h.positivity_certificate is None
    cert = validate_positive(h)
    h2 = h.with_certificate(cert)
    assert h2.positivity_certificate is cert
    assert h2.ast == h.ast


def test_builtin_constructor_guards():
    with pytest.raises(DomainError):
        h_const(0)
    with pytest.raises(DomainError):
        h_const(-2)
    with pytest.raises(DomainError):
        h_one_plus_square(-1)
    with pytest.raises(DomainError):
        h_one_plus_square(Fraction(-3, 2))
