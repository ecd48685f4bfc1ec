"""
Unit Tests for coefficient expressions
"""
import pickle

import numpy as np
import pytest

from engine.coefficients.expression import parse_coefficient, tokenize
from engine.errors import DomainError, ExpressionSyntaxError

pytestmark = pytest.mark.unit


def test_evaluates_on_arrays_and_scalars():
    """Test vectorized and scalar evaluation"""
    rho = parse_coefficient("u*(1-u)")
    u = np.array([0.0, 0.25, 0.5, 1.0])

    np.testing.assert_allclose(rho(u), [0.0, 0.1875, 0.25, 0.0])
    assert rho(0.5) == pytest.approx(0.25)
    assert isinstance(rho(0.5), float)


def test_constant_broadcasts():
    """Test that a constant expression returns one value per point"""
    g = parse_coefficient("1")
    assert g(np.linspace(0, 1, 5)).shape == (5,)


def test_precedence():
    """Test operator precedence and associativity"""
    assert parse_coefficient("1 + 2*3")(0.0) == pytest.approx(7.0)
    assert parse_coefficient("2^3^2")(0.0) == pytest.approx(512.0)
    # Unary minus binds looser than '^'
    assert parse_coefficient("-u^2")(3.0) == pytest.approx(-9.0)
    assert parse_coefficient("(1-u)^2")(0.5) == pytest.approx(0.25)
    assert parse_coefficient("8/4/2")(0.0) == pytest.approx(1.0)


def test_functions():
    """Test the built-in functions"""
    assert parse_coefficient("exp(0)")(0.3) == pytest.approx(1.0)
    assert parse_coefficient("log(u)")(np.e) == pytest.approx(1.0)
    assert parse_coefficient("sqrt(u)")(0.25) == pytest.approx(0.5)
    assert parse_coefficient("pow(u, 0.5)*pow(1-u, 0.5)")(0.5) == pytest.approx(0.5)
    assert parse_coefficient("2.5e-1 + .75")(0.0) == pytest.approx(1.0)


def test_syntax_errors_report_position():
    """Test that parse errors carry their offset"""
    with pytest.raises(ExpressionSyntaxError, match="unexpected end of input at offset 5") as info:
        parse_coefficient("u*(1-")
    assert info.value.position == 5

    with pytest.raises(ExpressionSyntaxError, match="unknown name 'v'"):
        parse_coefficient("u + v")

    with pytest.raises(ExpressionSyntaxError, match="unexpected character"):
        parse_coefficient("u # 2")

    with pytest.raises(ExpressionSyntaxError, match="takes 2 argument"):
        parse_coefficient("pow(u)")

    with pytest.raises(ExpressionSyntaxError, match="empty expression"):
        parse_coefficient("   ")


def test_domain_errors():
    """Test evaluation outside the domain"""
    with pytest.raises(DomainError, match="log of a negative"):
        parse_coefficient("log(u - 2)")(0.5)

    with pytest.raises(DomainError, match="non-integer power"):
        parse_coefficient("(u - 1)^0.5")(0.5)

    with pytest.raises(DomainError, match="undefined at u=0"):
        parse_coefficient("u/u")(np.array([0.0, 0.5]))


def test_tokenize_offsets():
    """Test token offsets"""
    tokens = tokenize("u + 12.5")
    assert [t.where for t in tokens] == [0, 2, 4]
    assert tokens[2].value == 12.5


def test_pickles_by_source():
    """Test that coefficients survive a trip to a worker process"""
    d = parse_coefficient("u^2 + 1")
    clone = pickle.loads(pickle.dumps(d))
    assert clone.source == "u^2 + 1"
    assert clone(2.0) == pytest.approx(5.0)
