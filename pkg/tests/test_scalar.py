"""Field arithmetic in Q(L): normal forms, evaluation, text round trips.

The derived expectations below are produced by a deliberately naive
polynomial oracle (plain coefficient lists, schoolbook Euclid) that is
independent of the library's representation.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from homlie.scalar import (
    DivisionByZero,
    L,
    ONE,
    PoleAtPoint,
    Poly,
    Scalar,
    ZERO,
    parse_scalar,
    render_scalar,
    sc,
    scalar_arith,
    scalar_eval,
    scalar_is_invertible,
)


# --- independent oracle: naive dense polynomials over Fraction lists --------

def o_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def o_mul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return o_trim(out)


def o_divmod(p, q):
    p = list(p)
    dq = len(q) - 1
    quot = [Fraction(0)] * max(len(p) - dq, 0)
    while len(p) - 1 >= dq and o_trim(p):
        k = len(p) - 1 - dq
        c = p[-1] / q[-1]
        quot[k] = c
        for i, b in enumerate(q):
            p[k + i] -= c * b
        o_trim(p)
    return o_trim(quot), p


def o_gcd(p, q):
    p, q = list(p), list(q)
    while o_trim(q):
        p, q = q, o_divmod(p, q)[1]
    if p:
        lead = p[-1]
        p = [c / lead for c in p]
    return p


def test_oracle_self_check():
    # (L - 1)(L + 1) = L^2 - 1, and gcd(L^2 - 1, L + 1) = L + 1
    assert o_mul([Fraction(-1), Fraction(1)], [Fraction(1), Fraction(1)]) == [
        Fraction(-1),
        Fraction(0),
        Fraction(1),
    ]
    g = o_gcd([Fraction(-1), Fraction(0), Fraction(1)], [Fraction(1), Fraction(1)])
    assert g == [Fraction(1), Fraction(1)]


# --- frozen arithmetic examples ---------------------------------------------

def test_mul_inverse_pair():
    assert scalar_arith(L, ONE / L, "mul") == ONE


def test_mul_difference_of_squares():
    got = scalar_arith(L + ONE, L - ONE, "mul")
    assert got == L * L - ONE


def test_add_after_cancellation():
    # oracle: gcd(L^2 - 1, L + 1) = L + 1, so (L^2-1)/(L+1) reduces to L - 1
    num = [Fraction(-1), Fraction(0), Fraction(1)]
    den = [Fraction(1), Fraction(1)]
    g = o_gcd(num, den)
    reduced, rem = o_divmod(num, g)
    assert rem == [] and reduced == [Fraction(-1), Fraction(1)]
    a = (L * L - ONE) / (L + ONE)
    assert a == L - ONE  # normal form reached eagerly
    assert scalar_arith(a, ONE, "add") == L


def test_eval_examples():
    assert scalar_eval(ONE / L, Fraction(2)) == Fraction(1, 2)
    assert scalar_eval(L * L - ONE, Fraction(3)) == 8
    with pytest.raises(PoleAtPoint):
        scalar_eval(ONE / (L - ONE), Fraction(1))


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        scalar_arith(ONE, ZERO, "div")
    with pytest.raises(DivisionByZero):
        ZERO.inverse()


def test_is_invertible():
    assert scalar_is_invertible(L - ONE)
    assert scalar_is_invertible(sc(Fraction(-7, 3)))
    assert not scalar_is_invertible(ZERO)
    assert not scalar_is_invertible(L - L)


# --- normal form -------------------------------------------------------------

def test_normal_form_unique():
    a = (L * L - ONE) / (L + ONE)
    b = L - ONE
    assert a == b and hash(a) == hash(b)
    assert (sc(2) * L) / sc(2) == L


def test_denominator_monic():
    s = L / (sc(2) * L + sc(2))
    assert s.den.leading == 1
    assert s == (L * sc(Fraction(1, 2))) / (L + ONE)


def test_zero_canonical():
    z = (L - L) / (L * L + ONE)
    assert z == ZERO and z.is_zero()
    assert z.den == Poly((1,))


def test_power_negative():
    assert L ** -2 == ONE / (L * L)
    assert (L + ONE) ** 0 == ONE
    with pytest.raises(DivisionByZero):
        ZERO ** -1


# --- field axioms (property-based) -------------------------------------------

fracs = st.fractions(
    min_value=Fraction(-4), max_value=Fraction(4), max_denominator=3
)


@st.composite
def scalars(draw):
    num = draw(st.lists(fracs, min_size=1, max_size=3))
    den = draw(st.lists(fracs, min_size=1, max_size=3))
    d = Poly(den)
    if d.is_zero():
        d = Poly((1, 1))
    return Scalar(Poly(num), d)


@settings(max_examples=120, deadline=None)
@given(scalars(), scalars(), scalars())
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a + ZERO == a and a * ONE == a
    assert a + (-a) == ZERO
    if not a.is_zero():
        assert a * a.inverse() == ONE


@settings(max_examples=100, deadline=None)
@given(scalars(), scalars(), st.integers(min_value=-3, max_value=5))
def test_eval_is_ring_homomorphism(a, b, r):
    at = Fraction(r)
    try:
        ea, eb = a.eval(at), b.eval(at)
    except PoleAtPoint:
        return
    assert (a + b).eval(at) == ea + eb
    assert (a * b).eval(at) == ea * eb
    assert (a - b).eval(at) == ea - eb


@settings(max_examples=80, deadline=None)
@given(scalars())
def test_render_parse_round_trip(a):
    assert parse_scalar(render_scalar(a)) == a


# --- text form ----------------------------------------------------------------

def test_parse_examples():
    assert parse_scalar("L") == L
    assert parse_scalar("1/2") == sc(Fraction(1, 2))
    assert parse_scalar("-3*L^2 + L - 1") == sc(-3) * L ** 2 + L - ONE
    assert parse_scalar("(L^2 - 1)/(L + 1)") == L - ONE
    assert parse_scalar("L^-2") == ONE / (L * L)
    assert parse_scalar("2*3") == sc(6)
    assert parse_scalar("-(L + 1)") == -(L + ONE)


def test_render_examples():
    assert render_scalar(L - ONE) == "L - 1"
    assert render_scalar(ONE / L) == "(1)/(L)"
    assert render_scalar(sc(Fraction(-1, 2)) * L ** 2) == "-1/2*L^2"
    assert render_scalar(ZERO) == "0"
    assert render_scalar((L + ONE) / (L - ONE)) == "(L + 1)/(L - 1)"


def test_parse_rejects_garbage():
    from homlie.scalar import ScalarSyntaxError

    for bad in ["", "L +", "2**3", "(L", "x", "1 2", "^2", "3/0"]:
        with pytest.raises(ScalarSyntaxError):
            parse_scalar(bad)
