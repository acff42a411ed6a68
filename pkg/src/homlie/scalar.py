"""Exact arithmetic in the rational function field Q(L).

Every quantity the library computes with lives in the field of rational
functions in one formal variable ``L`` over the rationals.  A value is a
quotient ``num/den`` of two polynomials held in normal form, so equality
of values is plain structural equality of coefficient tuples.

Representation invariants:

* ``Poly``: coefficients are ``fractions.Fraction``, stored ascending by
  degree in a tuple with no trailing zeros.  The zero polynomial is the
  empty tuple and has degree -1.
* ``Scalar``: ``num`` and ``den`` are ``Poly``; ``den`` is monic and
  nonzero; ``gcd(num, den) == 1``; the zero scalar is ``0/1``.

Normalisation happens on construction, never lazily, so two scalars are
equal exactly when their coefficient tuples are equal, and hashing is
safe.  Floating point never appears anywhere.

The canonical text form (used by the definition-file grammar and the
JSON reports) writes polynomials with descending powers of ``L``, e.g.
``(L^2 - 1)/(L + 1)``; ``parse_scalar``/``render_scalar`` round-trip.
"""

from __future__ import annotations

from fractions import Fraction

__all__ = [
    "DivisionByZero",
    "PoleAtPoint",
    "Poly",
    "Scalar",
    "Rational",
    "ZERO",
    "ONE",
    "L",
    "sc",
    "scalar_arith",
    "scalar_eval",
    "scalar_is_invertible",
    "parse_scalar",
    "render_scalar",
]

Rational = Fraction


class HomLieError(Exception):
    """Base class for the library's typed errors."""


class DivisionByZero(HomLieError):
    """Division by the zero scalar (or a zero denominator polynomial)."""


class PoleAtPoint(HomLieError):
    """Evaluation of a scalar at a rational point where its denominator vanishes."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to a rational coefficient")


class Poly:
    """Univariate polynomial over Q, ascending coefficient tuple."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):  # immutable
        raise AttributeError("Poly is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def const(cls, c) -> "Poly":
        return cls((_frac(c),))

    @classmethod
    def x_pow(cls, k: int, c=1) -> "Poly":
        """The monomial c * L^k, k >= 0."""
        if k < 0:
            raise ValueError("x_pow exponent must be nonnegative")
        return cls((0,) * k + (_frac(c),))

    # -- structure ---------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def _valuation(self) -> int:
        """Index of the lowest nonzero coefficient (order at L = 0)."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        raise ValueError("zero polynomial has no valuation")

    def _is_monomial(self) -> bool:
        return bool(self.coeffs) and all(c == 0 for c in self.coeffs[:-1])

    # -- arithmetic --------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return _P_ZERO
        if len(a) == 1:
            return self._scale_other(a[0], b)
        if len(b) == 1:
            return self._scale_other(b[0], a)
        # monomial fast path: most scalars in practice are c * L^k
        if self._is_monomial():
            k, c = len(a) - 1, a[-1]
            return Poly((0,) * k + tuple(c * x for x in b))
        if other._is_monomial():
            k, c = len(b) - 1, b[-1]
            return Poly((0,) * k + tuple(c * x for x in a))
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca == 0:
                continue
            for j, cb in enumerate(b):
                if cb != 0:
                    out[i + j] += ca * cb
        return Poly(out)

    @staticmethod
    def _scale_other(c: Fraction, coeffs) -> "Poly":
        if c == 0:
            return _P_ZERO
        return Poly(tuple(c * x for x in coeffs))

    def scale(self, c) -> "Poly":
        return self._scale_other(_frac(c), self.coeffs)

    def __divmod__(self, other: "Poly"):
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        if self.is_zero():
            return _P_ZERO, _P_ZERO
        if other.degree == 0:
            inv = 1 / other.coeffs[0]
            return self.scale(inv), _P_ZERO
        rem = list(self.coeffs)
        dn, dd = len(rem) - 1, other.degree
        if dn < dd:
            return _P_ZERO, self
        lead = other.leading
        quot = [Fraction(0)] * (dn - dd + 1)
        for k in range(dn - dd, -1, -1):
            q = rem[k + dd] / lead
            if q != 0:
                quot[k] = q
                for i, c in enumerate(other.coeffs):
                    if c != 0:
                        rem[k + i] -= q * c
        return Poly(quot), Poly(rem[:dd])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        if self.leading == 1:
            return self
        return self.scale(1 / self.leading)

    def gcd(self, other: "Poly") -> "Poly":
        """Monic greatest common divisor."""
        a, b = self, other
        if a.is_zero():
            return b.monic()
        if b.is_zero():
            return a.monic()
        # Monomial fast path: gcd(c*L^k, p) = L^min(k, ord_0(p)).
        if a._is_monomial():
            return Poly.x_pow(min(a.degree, b._valuation()))
        if b._is_monomial():
            return Poly.x_pow(min(b.degree, a._valuation()))
        while not b.is_zero():
            a, b = b, (a % b).monic()
        return a.monic()

    def eval(self, at: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * at + c
        return acc

    def __repr__(self):
        return f"Poly({list(self.coeffs)!r})"


_P_ZERO = Poly(())
_P_ONE = Poly((1,))


class Scalar:
    """An element of Q(L) in normal form (see module docstring)."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly = _P_ONE):
        if not isinstance(num, Poly) or not isinstance(den, Poly):
            raise TypeError("Scalar takes Poly numerator and denominator")
        if den.is_zero():
            raise DivisionByZero("scalar with zero denominator")
        if num.is_zero():
            num, den = _P_ZERO, _P_ONE
        else:
            g = num.gcd(den)
            if g.degree > 0:
                num, den = num // g, den // g
            lead = den.leading
            if lead != 1:
                inv = 1 / lead
                num, den = num.scale(inv), den.scale(inv)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num == _P_ONE and self.den == _P_ONE

    def is_rational(self) -> bool:
        return self.num.degree <= 0 and self.den == _P_ONE

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not a rational constant")
        return self.num.coeffs[0] if self.num.coeffs else Fraction(0)

    # -- arithmetic ----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = sc(other)
        return (
            isinstance(other, Scalar)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other: "Scalar") -> "Scalar":
        other = sc(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.den == other.den:
            return Scalar(self.num + other.num, self.den)
        return Scalar(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return self._raw(-self.num, self.den)

    def __sub__(self, other: "Scalar") -> "Scalar":
        return self + (-sc(other))

    def __rsub__(self, other):
        return sc(other) + (-self)

    def __mul__(self, other: "Scalar") -> "Scalar":
        other = sc(other)
        if self.is_zero() or other.is_zero():
            return ZERO
        # cross-cancel so the final normalisation gcd is trivial
        g1 = self.num.gcd(other.den)
        g2 = other.num.gcd(self.den)
        n1 = self.num // g1 if g1.degree > 0 else self.num
        d2 = other.den // g1 if g1.degree > 0 else other.den
        n2 = other.num // g2 if g2.degree > 0 else other.num
        d1 = self.den // g2 if g2.degree > 0 else self.den
        num, den = n1 * n2, d1 * d2
        lead = den.leading
        if lead != 1:
            inv = 1 / lead
            num, den = num.scale(inv), den.scale(inv)
        return self._raw(num, den)

    __rmul__ = __mul__

    def __truediv__(self, other: "Scalar") -> "Scalar":
        other = sc(other)
        if other.is_zero():
            raise DivisionByZero("division by the zero scalar")
        return self * other.inverse()

    def __rtruediv__(self, other):
        return sc(other) / self

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise DivisionByZero("the zero scalar has no inverse")
        num, den = self.den, self.num
        lead = den.leading
        if lead != 1:
            inv = 1 / lead
            num, den = num.scale(inv), den.scale(inv)
        return self._raw(num, den)

    def __pow__(self, k: int) -> "Scalar":
        if not isinstance(k, int):
            raise TypeError("scalar exponents must be integers")
        if k == 0:
            return ONE
        base = self if k > 0 else self.inverse()
        out = ONE
        for _ in range(abs(k)):
            out = out * base
        return out

    @classmethod
    def _raw(cls, num: Poly, den: Poly) -> "Scalar":
        """Bypass normalisation for results already known to be reduced."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "num", num)
        object.__setattr__(obj, "den", den)
        return obj

    # -- evaluation ----------------------------------------------------------

    def eval(self, at) -> Fraction:
        at = _frac(at)
        d = self.den.eval(at)
        if d == 0:
            raise PoleAtPoint(f"denominator vanishes at L = {at}")
        return self.num.eval(at) / d

    def __repr__(self):
        return f"Scalar({render_scalar(self)!r})"

    def __str__(self):
        return render_scalar(self)


ZERO = Scalar(_P_ZERO)
ONE = Scalar(_P_ONE)
L = Scalar(Poly((0, 1)))


def sc(x) -> Scalar:
    """Coerce an int, Fraction, or canonical-text string to a Scalar."""
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Scalar(Poly((x,)))
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to Scalar")


def scalar_arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    """Field arithmetic dispatch; op is one of add, sub, mul, div."""
    a, b = sc(a), sc(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def scalar_eval(a: Scalar, at) -> Fraction:
    """Evaluate at a rational point; raises PoleAtPoint on a pole."""
    return sc(a).eval(at)


def scalar_is_invertible(a: Scalar) -> bool:
    return not sc(a).is_zero()


# ---------------------------------------------------------------------------
# canonical text form
# ---------------------------------------------------------------------------

def _render_poly(p: Poly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        if k == 0:
            body = str(abs(c))
        else:
            lpart = "L" if k == 1 else f"L^{k}"
            body = lpart if abs(c) == 1 else f"{abs(c)}*{lpart}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


def render_scalar(s: Scalar) -> str:
    """Canonical text: descending powers of L, `(num)/(den)` when den != 1."""
    if s.den == _P_ONE:
        return _render_poly(s.num)
    return f"({_render_poly(s.num)})/({_render_poly(s.den)})"


# Token kinds shared with the definition-file parser: each token is a
# (kind, value, (line, col)) triple with kind in
# {"int", "L", "op", "lparen", "rparen", "ident", "end"}.

class ScalarSyntaxError(HomLieError):
    def __init__(self, message: str, pos):
        super().__init__(message)
        self.pos = pos  # (line, col), 1-based


def tokenize_scalar(text: str):
    toks = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        pos = (line, col)
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            toks.append(("int", int(text[i:j]), pos))
            col += j - i
            i = j
            continue
        if ch == "L":
            toks.append(("L", "L", pos))
            i += 1
            col += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(("ident", text[i:j], pos))
            col += j - i
            i = j
            continue
        if ch in "+-*/^":
            toks.append(("op", ch, pos))
            i += 1
            col += 1
            continue
        if ch == "(":
            toks.append(("lparen", ch, pos))
            i += 1
            col += 1
            continue
        if ch == ")":
            toks.append(("rparen", ch, pos))
            i += 1
            col += 1
            continue
        raise ScalarSyntaxError(f"unexpected character {ch!r}", pos)
    toks.append(("end", None, (line, col)))
    return toks


def parse_scalar_tokens(toks, i: int, stop_before_ident: bool = False):
    """Parse a scalar expression from a token list; returns (Scalar, next index).

    With ``stop_before_ident`` the multiplicative chain stops in front of a
    ``*`` whose right operand is an identifier, which is how the definition
    grammar splits the coefficient off a term like ``2*e``.
    """

    def expect(kind, j):
        if toks[j][0] != kind:
            raise ScalarSyntaxError(
                f"expected {kind}, found {toks[j][1]!r}", toks[j][2]
            )

    def parse_sum(j):
        val, j = parse_product(j)
        while toks[j][0] == "op" and toks[j][1] in "+-":
            op = toks[j][1]
            rhs, j = parse_product(j + 1)
            val = val + rhs if op == "+" else val - rhs
        return val, j

    def parse_product(j):
        val, j = parse_unary(j)
        while toks[j][0] == "op" and toks[j][1] in "*/":
            if (
                stop_before_ident
                and toks[j][1] == "*"
                and toks[j + 1][0] == "ident"
            ):
                break
            op = toks[j][1]
            rhs, j = parse_unary(j + 1)
            if op == "/" and rhs.is_zero():
                raise ScalarSyntaxError("division by zero", toks[j - 1][2])
            val = val * rhs if op == "*" else val / rhs
        return val, j

    def parse_unary(j):
        if toks[j][0] == "op" and toks[j][1] == "-":
            val, j = parse_unary(j + 1)
            return -val, j
        if toks[j][0] == "op" and toks[j][1] == "+":
            return parse_unary(j + 1)
        return parse_power(j)

    def parse_power(j):
        base, j = parse_atom(j)
        if toks[j][0] == "op" and toks[j][1] == "^":
            j += 1
            sign = 1
            if toks[j][0] == "op" and toks[j][1] == "-":
                sign = -1
                j += 1
            expect("int", j)
            exp = sign * toks[j][1]
            j += 1
            if exp < 0 and base.is_zero():
                raise ScalarSyntaxError("zero to a negative power", toks[j - 1][2])
            return base ** exp, j
        return base, j

    def parse_atom(j):
        kind, value, pos = toks[j]
        if kind == "int":
            return sc(value), j + 1
        if kind == "L":
            return L, j + 1
        if kind == "lparen":
            val, j = parse_sum(j + 1)
            expect("rparen", j)
            return val, j + 1
        raise ScalarSyntaxError(
            f"expected a number, 'L', or '(', found {value!r}", pos
        )

    return parse_sum(i)


def parse_scalar(text: str) -> Scalar:
    """Parse the canonical text form (integers, fractions, L, ^, + - * /, parens)."""
    toks = tokenize_scalar(text)
    val, i = parse_scalar_tokens(toks, 0)
    if toks[i][0] != "end":
        raise ScalarSyntaxError(f"trailing input {toks[i][1]!r}", toks[i][2])
    return val
