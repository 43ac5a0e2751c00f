"""Exact scalars: rationals and rational functions in the deformation parameter q.

Two carriers are used throughout the package:

* ``Rat`` (an alias for :class:`gmpy2.mpq`) for exact rationals, and
* :class:`QScalar`, an element of the field Q(q) kept in a canonical
  Laurent-fraction form.

Downstream code never branches on the carrier.  It talks to a *field
context* (:class:`SymbolicField` or :class:`SampledField`) which hands out
``q``, constants and powers of ``q`` in the right carrier.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache

import flint
from gmpy2 import mpq

Rat = mpq

__all__ = [
    "Rat",
    "QScalar",
    "CoeffError",
    "parse_rat",
    "qscalar_arith",
    "qscalar_eval",
    "SymbolicField",
    "SampledField",
    "make_field",
]


class CoeffError(ArithmeticError):
    pass


def parse_rat(text) -> mpq:
    """Parse ``"3/2"``, ``"-2"`` or ``"0.5"`` into an exact rational."""
    if isinstance(text, (int, type(mpq(0)))):
        return mpq(text)
    try:
        return mpq(Fraction(str(text).strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise CoeffError(f"not a rational number: {text!r}") from exc


def _fq(x) -> flint.fmpq:
    x = mpq(x)
    return flint.fmpq(int(x.numerator), int(x.denominator))


def _to_mpq(x: flint.fmpq) -> mpq:
    return mpq(int(x.p), int(x.q))


def _strip_q(poly: flint.fmpq_poly) -> tuple[flint.fmpq_poly, int]:
    """Split off the largest power of q dividing ``poly``."""
    if poly == 0:
        return poly, 0
    coeffs = poly.coeffs()
    k = 0
    while coeffs[k] == 0:
        k += 1
    if k == 0:
        return poly, 0
    return flint.fmpq_poly(coeffs[k:]), k


_ZERO = flint.fmpq_poly([])
_ONE = flint.fmpq_poly([1])


class QScalar:
    """Element of Q(q) stored as ``q**shift * num(q) / den(q)``.

    Canonical form: ``num`` and ``den`` are coprime polynomials, neither is
    divisible by ``q``, and ``den`` is monic.  Zero is ``num == 0`` with
    ``shift == 0`` and ``den == 1``.  Equal field elements therefore have
    identical representations, which makes hashing safe.
    """

    __slots__ = ("shift", "num", "den", "_hash")

    def __init__(self, num=0, den=None, shift: int = 0, *, _canon: bool = True):
        if not isinstance(num, flint.fmpq_poly):
            num = flint.fmpq_poly([_fq(num)]) if num else _ZERO
        if den is None:
            den = _ONE
        elif not isinstance(den, flint.fmpq_poly):
            den = flint.fmpq_poly([_fq(den)])
        if _canon:
            num, den, shift = self._canon(num, den, shift)
        self.num = num
        self.den = den
        self.shift = shift
        self._hash = None

    @staticmethod
    def _canon(num, den, shift):
        if den == 0:
            raise CoeffError("zero denominator")
        if num == 0:
            return _ZERO, _ONE, 0
        num, kn = _strip_q(num)
        den, kd = _strip_q(den)
        shift += kn - kd
        if den.degree() > 0:
            g = num.gcd(den)
            if g.degree() > 0:
                num = num // g
                den = den // g
        lead = den.coeffs()[-1]
        if lead != 1:
            num = num / lead
            den = den / lead
        return num, den, shift

    # construction helpers
    @classmethod
    def q(cls) -> "QScalar":
        return cls(_ONE, _ONE, 1, _canon=False)

    @classmethod
    def qpow(cls, n: int) -> "QScalar":
        return cls(_ONE, _ONE, int(n), _canon=False)

    @classmethod
    def laurent(cls, terms: dict) -> "QScalar":
        """Build from an exponent -> coefficient mapping."""
        terms = {int(e): mpq(c) for e, c in terms.items() if c}
        if not terms:
            return cls()
        lo = min(terms)
        coeffs = [0] * (max(terms) - lo + 1)
        for e, c in terms.items():
            coeffs[e - lo] = _fq(c)
        return cls(flint.fmpq_poly(coeffs), _ONE, lo)

    def _coerce(self, other):
        if isinstance(other, QScalar):
            return other
        if isinstance(other, (int, type(mpq(0)), Fraction, flint.fmpq)):
            if isinstance(other, flint.fmpq):
                return QScalar(flint.fmpq_poly([other]))
            return QScalar(other)
        return None

    # arithmetic
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.num:
            return self
        if not self.num:
            return o
        m = min(self.shift, o.shift)
        a = self.num if self.shift == m else self.num * flint.fmpq_poly([0] * (self.shift - m) + [1])
        b = o.num if o.shift == m else o.num * flint.fmpq_poly([0] * (o.shift - m) + [1])
        if self.den == o.den:
            return QScalar(a + b, self.den, m)
        return QScalar(a * o.den + b * self.den, self.den * o.den, m)

    __radd__ = __add__

    def __neg__(self):
        return QScalar(-self.num, self.den, self.shift, _canon=False)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.num or not o.num:
            return QScalar()
        if self.den == _ONE and o.den == _ONE:
            return QScalar(self.num * o.num, _ONE, self.shift + o.shift, _canon=False)
        return QScalar(self.num * o.num, self.den * o.den, self.shift + o.shift)

    __rmul__ = __mul__

    def inverse(self) -> "QScalar":
        if not self.num:
            raise CoeffError("zero denominator")
        return QScalar(self.den, self.num, -self.shift)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        n = int(n)
        if n < 0:
            return self.inverse() ** (-n)
        if self.den == _ONE and self.num == _ONE:
            return QScalar.qpow(self.shift * n)
        return QScalar(self.num ** n, self.den ** n, self.shift * n)

    # comparison
    def __bool__(self):
        return bool(self.num != 0)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.shift == o.shift and self.num == o.num and self.den == o.den

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.shift, tuple(self.num.coeffs()), tuple(self.den.coeffs())))
        return self._hash

    def is_constant(self) -> bool:
        return self.den == _ONE and (not self.num or (self.shift == 0 and self.num.degree() == 0))

    def constant_value(self) -> mpq:
        if not self.is_constant():
            raise CoeffError("not a constant")
        return _to_mpq(self.num.coeffs()[0]) if self.num else mpq(0)

    # evaluation and text
    def eval(self, q0) -> mpq:
        return qscalar_eval(self, q0)

    def numerator_terms(self) -> dict[int, mpq]:
        return {self.shift + i: _to_mpq(c) for i, c in enumerate(self.num.coeffs()) if c != 0}

    def denominator_terms(self) -> dict[int, mpq]:
        return {i: _to_mpq(c) for i, c in enumerate(self.den.coeffs()) if c != 0}

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"QScalar({render(self)!r})"


def _render_laurent(terms: dict[int, mpq]) -> str:
    if not terms:
        return "0"
    out = []
    for e in sorted(terms, reverse=True):
        c = terms[e]
        sign = "-" if c < 0 else "+"
        a = -c if c < 0 else c
        if e == 0:
            body = str(a)
        else:
            qpart = "q" if e == 1 else f"q^{e}"
            body = qpart if a == 1 else f"{a}*{qpart}"
        out.append((sign, body))
    first_sign, first = out[0]
    text = ("-" + first) if first_sign == "-" else first
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


def render(x) -> str:
    """Text form of a scalar (QScalar or rational)."""
    if not isinstance(x, QScalar):
        return str(mpq(x))
    num = _render_laurent(x.numerator_terms())
    if x.den == _ONE:
        return num
    return f"({num})/({_render_laurent(x.denominator_terms())})"


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|(q)|(\^)|(\*)|(/)|(\+)|(-)|(\()|(\)))")


def parse_qscalar(text: str) -> QScalar:
    """Parse the rendered grammar back (sums, products, quotients, powers of q)."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise CoeffError(f"cannot parse scalar at {text[pos:]!r}")
        pos = m.end()
        for kind, val in zip(("num", "q", "^", "*", "/", "+", "-", "(", ")"), m.groups()):
            if val is not None:
                tokens.append((kind, val))
    tokens.append(("end", ""))
    idx = 0

    def peek():
        return tokens[idx][0]

    def take(kind=None):
        nonlocal idx
        tok = tokens[idx]
        if kind and tok[0] != kind:
            raise CoeffError(f"expected {kind!r} in {text!r}")
        idx += 1
        return tok

    def expr():
        val = term()
        while peek() in ("+", "-"):
            op = take()[0]
            rhs = term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term():
        val = unary()
        while peek() in ("*", "/"):
            op = take()[0]
            rhs = unary()
            val = val * rhs if op == "*" else val / rhs
        return val

    def unary():
        if peek() == "-":
            take()
            return -unary()
        if peek() == "+":
            take()
            return unary()
        return power()

    def power():
        base = atom()
        if peek() == "^":
            take()
            sign = 1
            if peek() == "-":
                take()
                sign = -1
            exp = int(take("num")[1])
            return base ** (sign * exp)
        return base

    def atom():
        kind, val = tokens[idx]
        if kind == "num":
            take()
            return QScalar(parse_rat(val))
        if kind == "q":
            take()
            return QScalar.q()
        if kind == "(":
            take()
            v = expr()
            take(")")
            return v
        raise CoeffError(f"unexpected token {val!r} in {text!r}")

    result = expr()
    if peek() != "end":
        raise CoeffError(f"trailing input in {text!r}")
    return result


def qscalar_arith(a: QScalar, b: QScalar, op: str) -> QScalar:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if not b:
            raise CoeffError("zero denominator")
        return a / b
    raise ValueError(f"unknown op {op!r}")


def check_sample(q0) -> mpq:
    q0 = parse_rat(q0)
    if q0 in (0, 1, -1):
        raise CoeffError("excluded parameter")
    return q0


def qscalar_eval(a, q0) -> mpq:
    q0 = check_sample(q0)
    if not isinstance(a, QScalar):
        return mpq(a)
    x = _fq(q0)
    d = a.den(x)
    if d == 0:
        raise CoeffError("evaluation pole")
    return _to_mpq(a.num(x) / d) * q0 ** a.shift


class SymbolicField:
    """Arithmetic context over Q(q)."""

    mode = "symbolic"

    def __init__(self):
        self.q = QScalar.q()
        self.zero = QScalar()
        self.one = QScalar(1)

    @lru_cache(maxsize=None)
    def qpow(self, n: int) -> QScalar:
        return QScalar.qpow(n)

    def const(self, x) -> QScalar:
        if isinstance(x, QScalar):
            return x
        return QScalar(mpq(x))

    def lift(self, x: QScalar) -> QScalar:
        """Bring an exact Q(q) expression into this field."""
        return x

    def text(self, x) -> str:
        return render(x)

    def parse(self, text: str) -> QScalar:
        return parse_qscalar(text)

    @property
    def label(self) -> str:
        return "symbolic"

    def __repr__(self):
        return "SymbolicField()"


class SampledField:
    """Arithmetic context with q replaced by a fixed rational sample."""

    mode = "sampled"

    def __init__(self, q0):
        self.q0 = check_sample(q0)
        self.q = self.q0
        self.zero = mpq(0)
        self.one = mpq(1)
        self._pow = {}

    def qpow(self, n: int) -> mpq:
        v = self._pow.get(n)
        if v is None:
            v = self._pow[n] = self.q0 ** n
        return v

    def const(self, x) -> mpq:
        if isinstance(x, QScalar):
            return qscalar_eval(x, self.q0)
        return mpq(x)

    def lift(self, x) -> mpq:
        return qscalar_eval(x, self.q0) if isinstance(x, QScalar) else mpq(x)

    def text(self, x) -> str:
        return str(mpq(x))

    def parse(self, text: str) -> mpq:
        if "q" in text:
            return qscalar_eval(parse_qscalar(text), self.q0)
        return parse_rat(text)

    @property
    def label(self) -> str:
        return f"sampled q={self.q0}"

    def __repr__(self):
        return f"SampledField({self.q0})"


def make_field(mode: str, q0=None):
    if mode == "symbolic":
        return SymbolicField()
    if mode == "sampled":
        return SampledField(q0 if q0 is not None else mpq(3, 2))
    raise ValueError(f"unknown mode {mode!r}")
