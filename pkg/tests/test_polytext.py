import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CLASSICAL, cached_structures, cached_table
from qmink import qalgebra as qa
from qmink.catalog import CaseSpec
from qmink.polytext import ParseError, format_complex, format_poly, parse_poly

SPECS = [CLASSICAL, CaseSpec(1, t=0.7), CaseSpec(2, c=1.0), CaseSpec(7, t=0.3)]


def test_parse_basic():
    rt = cached_table(CLASSICAL)
    p = parse_poly("(2+3i)*x0^2*x1 - x3 + 1", rt)
    assert p.coeff((2, 1, 0, 0)) == 2 + 3j
    assert p.coeff((0, 0, 0, 1)) == -1
    assert p.coeff((0, 0, 0, 0)) == 1
    assert parse_poly(" x1 * x0 ", rt) == parse_poly("x0*x1", rt)
    assert parse_poly("2i*x2", rt).coeff((0, 0, 1, 0)) == 2j
    assert parse_poly("-(x0 + 1e-1)", rt).coeff((0, 0, 0, 0)) == -0.1


@pytest.mark.parametrize(
    "text, column",
    [("x0^", 3), ("x4", 2), ("", 1), ("x0 +", 5), ("(x1", 4), ("x0 $ x1", 4), ("2*", 3)],
)
def test_parse_errors(text, column):
    with pytest.raises(ParseError) as err:
        parse_poly(text, cached_table(CLASSICAL))
    assert err.value.column == column


def test_format_examples():
    rt = cached_table(CLASSICAL)
    assert format_poly(qa.Poly(), rt) == "0"
    assert format_poly(2 * qa.Poly.gen(0), rt) == "2*x0"
    assert format_poly(parse_poly("x0^2*x1 - x3 + 1", rt), rt) == "x0^2*x1 - x3 + 1"
    assert format_poly(parse_poly("(1-2i)*x2", rt), rt) == "(1-2i)*x2"
    assert format_complex(1 / 3 + 0j) == "0.333333333333"
    assert format_complex(1 - 0.5j) == "1-0.5i"


def test_derive_text_examples():
    ss, rt = cached_structures(CLASSICAL), cached_table(CLASSICAL)
    assert format_poly(qa.derive(0, parse_poly("x0^2", rt), ss, rt), rt) == "2*x0"
    assert format_poly(qa.derive(2, parse_poly("1", rt), ss, rt), rt) == "0"


@st.composite
def normal_forms(draw):
    terms = {}
    for _ in range(draw(st.integers(1, 5))):
        m = draw(st.sampled_from(qa.monomials(draw(st.integers(0, 3)))))
        terms[m] = complex(draw(st.floats(-5, 5)), draw(st.sampled_from([0.0, 1.0, -2.5])))
    return qa.Poly(terms)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SPECS), normal_forms())
def test_print_parse_round_trip(spec, p):
    rt = cached_table(spec)
    again = parse_poly(format_poly(p, rt), rt)
    assert again.close_to(p, 1e-10 * max(1.0, p.max_abs()))
    # printing is a fixed point after one pass
    assert format_poly(again, rt) == format_poly(parse_poly(format_poly(again, rt), rt), rt)
