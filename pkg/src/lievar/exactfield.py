"""Exact scalar domains.

Four concrete fields share one duck-typed interface (``+ - * /``, unary
minus, ``==``, ``bool`` for "nonzero"):

* ``QQ``  -- rationals, backed by :class:`fractions.Fraction`
* ``QQW`` -- the quadratic extension Q[w]/(w^2 - w + 1), see :class:`QuadExt`
* ``FunctionField(QQ, "t")`` and ``FunctionField(QQW, "t")`` -- univariate
  rational functions, see :class:`RatFunc`

Every field descriptor knows how to coerce integers / rationals into its
elements, so generic code (linear algebra, cohomology) never needs to know
which field it runs over.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping


class ArithmeticError_(ArithmeticError):
    pass


class PoleError(ArithmeticError_):
    """Evaluation hit a zero denominator."""


class LimitError(ArithmeticError_):
    """A rational function has a pole at t = 0."""

    def __init__(self, order: int, msg: str | None = None):
        self.order = order
        super().__init__(msg or f"limit does not exist (order {order} at 0)")


# ---------------------------------------------------------------------------
# field descriptors


class RationalField:
    name = "QQ"
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, QuadExt) and not x.b:
            return x.a
        if isinstance(x, RatFunc) and x.is_constant():
            return self(x.constant_value())
        raise TypeError(f"cannot coerce {x!r} into QQ")

    def contains(self, x) -> bool:
        return isinstance(x, (int, Fraction))

    def __repr__(self):
        return "QQ"

    def __reduce__(self):
        return (_field_by_name, ("QQ",))


class QuadraticField:
    """Q[w] with w^2 = w - 1 (w is a primitive sixth root of unity)."""

    name = "QQ[w]"

    @property
    def zero(self):
        return QuadExt(0, 0)

    @property
    def one(self):
        return QuadExt(1, 0)

    @property
    def gen(self):
        return QuadExt(0, 1)

    def __call__(self, x) -> "QuadExt":
        if isinstance(x, QuadExt):
            return x
        if isinstance(x, (int, Fraction)):
            return QuadExt(x, 0)
        if isinstance(x, RatFunc) and x.is_constant():
            return self(x.constant_value())
        raise TypeError(f"cannot coerce {x!r} into QQ[w]")

    def contains(self, x) -> bool:
        return isinstance(x, (int, Fraction, QuadExt))

    def __repr__(self):
        return "QQW"

    def __reduce__(self):
        return (_field_by_name, ("QQW",))


QQ = RationalField()
QQW = QuadraticField()


def _field_by_name(name):
    return {"QQ": QQ, "QQW": QQW}[name]


class FunctionField:
    """Field of rational functions ``base(var)``."""

    def __init__(self, base, var: str = "t"):
        if isinstance(base, FunctionField):
            raise TypeError("only univariate function fields are supported")
        self.base = base
        self.var = var
        self.name = f"{base.name}({var})"

    def __eq__(self, other):
        return (isinstance(other, FunctionField) and other.base is self.base
                and other.var == self.var)

    def __hash__(self):
        return hash((self.base.name, self.var))

    def __repr__(self):
        return f"FunctionField({self.base!r}, {self.var!r})"

    @property
    def zero(self):
        return RatFunc.constant(self.base.zero, self.base, self.var)

    @property
    def one(self):
        return RatFunc.constant(self.base.one, self.base, self.var)

    @property
    def gen(self):
        return RatFunc(Poly((self.base.zero, self.base.one), self.base, self.var))

    def __call__(self, x) -> "RatFunc":
        if isinstance(x, RatFunc):
            if x.var != self.var and not x.is_constant():
                raise TypeError(f"variable mismatch: {x.var} vs {self.var}")
            if x.base is self.base and x.var == self.var:
                return x
            return RatFunc(Poly(tuple(map(self.base, x.num.coeffs)), self.base, self.var),
                           Poly(tuple(map(self.base, x.den.coeffs)), self.base, self.var))
        if isinstance(x, Poly):
            return RatFunc(Poly(tuple(map(self.base, x.coeffs)), self.base, self.var))
        return RatFunc.constant(self.base(x), self.base, self.var)

    def contains(self, x) -> bool:
        return self.base.contains(x) or isinstance(x, RatFunc)


def join_fields(a, b):
    """Smallest of the supported fields containing both ``a`` and ``b``."""
    if a == b:
        return a
    fa, fb = isinstance(a, FunctionField), isinstance(b, FunctionField)
    if fa and fb:
        if a.var != b.var:
            raise TypeError("only one active parameter at a time "
                            f"({a.var!r} and {b.var!r})")
        base = QQW if QQW in (a.base, b.base) else QQ
        return FunctionField(base, a.var)
    if fa or fb:
        ff, other = (a, b) if fa else (b, a)
        return FunctionField(join_fields(ff.base, other), ff.var)
    return QQW if QQW in (a, b) else QQ


def field_of(x):
    if isinstance(x, (int, Fraction)):
        return QQ
    if isinstance(x, QuadExt):
        return QQW
    if isinstance(x, RatFunc):
        return FunctionField(x.base, x.var)
    raise TypeError(f"not a scalar: {x!r}")


# ---------------------------------------------------------------------------
# Q[w]


class QuadExt:
    """Element ``a + b*w`` of Q[w], w^2 = w - 1."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = a if isinstance(a, Fraction) else Fraction(a)
        self.b = b if isinstance(b, Fraction) else Fraction(b)

    def _co(self, other):
        if isinstance(other, QuadExt):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExt(other, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return QuadExt(-self.a, -self.b)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadExt(self.a * other, self.b * other)
        o = self._co(other)
        if o is NotImplemented:
            return o
        bd = self.b * o.b
        return QuadExt(self.a * o.a - bd, self.a * o.b + self.b * o.a + bd)

    __rmul__ = __mul__

    def conj(self) -> "QuadExt":
        # w -> 1 - w
        return QuadExt(self.a + self.b, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a + self.a * self.b + self.b * self.b

    def inverse(self) -> "QuadExt":
        n = self.norm()
        if not n:
            raise ZeroDivisionError("inverse of zero in QQ[w]")
        c = self.conj()
        return QuadExt(c.a / n, c.b / n)

    def __truediv__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._co(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        r, b = QuadExt(1, 0), self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return not self.b and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash(self.a) if not self.b else hash((self.a, self.b))

    def __repr__(self):
        return f"QuadExt({self.a}, {self.b})"

    def __str__(self):
        return format_scalar(self)


# ---------------------------------------------------------------------------
# polynomials


def _nz(c):
    return bool(c)


class Poly:
    """Dense univariate polynomial, coefficients in ascending degree."""

    __slots__ = ("coeffs", "base", "var")

    def __init__(self, coeffs: Iterable, base=QQ, var: str = "t"):
        cs = [base(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)
        self.base = base
        self.var = var

    @classmethod
    def _raw(cls, coeffs, base, var):
        p = object.__new__(cls)
        cs = list(coeffs)
        while cs and not cs[-1]:
            cs.pop()
        p.coeffs = tuple(cs)
        p.base = base
        p.var = var
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def lc(self):
        return self.coeffs[-1]

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs and (self.var == other.var or self.degree < 1)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly._raw(out, self.base, self.var)

    def __neg__(self):
        return Poly._raw([-c for c in self.coeffs], self.base, self.var)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = self.base(other)
            return Poly._raw([x * c for x in self.coeffs], self.base, self.var)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._raw((), self.base, self.var)
        out = [self.base.zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if y:
                    out[i + j] = out[i + j] + x * y
        return Poly._raw(out, self.base, self.var)

    def scale(self, c):
        return Poly._raw([x * c for x in self.coeffs], self.base, self.var)

    def divmod(self, other: "Poly"):
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        db = other.degree
        inv = 1 / other.lc() if not isinstance(other.lc(), QuadExt) else other.lc().inverse()
        q = [self.base.zero] * max(len(r) - db, 0)
        for k in range(len(r) - db - 1, -1, -1):
            c = r[k + db] * inv
            q[k] = c
            if c:
                for j, y in enumerate(other.coeffs):
                    r[k + j] = r[k + j] - c * y
        return Poly._raw(q, self.base, self.var), Poly._raw(r[:db] if db > 0 else [], self.base, self.var)

    def exquo(self, other):
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError_("inexact polynomial division")
        return q

    def monic(self):
        if not self:
            return self
        lc = self.lc()
        if lc == 1:
            return self
        inv = lc.inverse() if isinstance(lc, QuadExt) else 1 / lc
        return self.scale(inv)

    def __call__(self, x):
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        return self.base.zero if acc is None else acc

    def order_at_zero(self) -> int:
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        raise ArithmeticError_("order of the zero polynomial is infinite")

    def shift_down(self, k: int):
        return Poly._raw(self.coeffs[k:], self.base, self.var)

    def __repr__(self):
        return f"Poly({list(map(str, self.coeffs))}, {self.var})"


def subresultant_prs(f: Poly, g: Poly) -> list[Poly]:
    """Subresultant polynomial remainder sequence of ``f`` and ``g``.

    Works over the coefficient domain without division except the exact
    divisions by the subresultant factors, so coefficients stay small.
    """
    if f.degree < g.degree:
        f, g = g, f
    if not g:
        return [f]
    seq = [f, g]
    d = f.degree - g.degree
    beta = -1 if d % 2 == 0 else 1
    beta = f.base(beta)
    psi = f.base(-1)
    while True:
        a, b = seq[-2], seq[-1]
        d = a.degree - b.degree
        r = _prem(a, b)
        if not r:
            break
        r = r.scale(1 / beta if not isinstance(beta, QuadExt) else beta.inverse())
        seq.append(r)
        lc = b.lc()
        # psi update: psi_{i+1} = (-lc)^d / psi^(d-1)
        psi = _pow(-lc, d) * _pow(psi, 1 - d) if d != 1 else -lc
        d2 = b.degree - r.degree
        beta = -lc * _pow(psi, d2)
    return seq


def _pow(x, k):
    if k >= 0:
        return x ** k
    return (x.inverse() if isinstance(x, QuadExt) else 1 / x) ** (-k)


def _prem(a: Poly, b: Poly) -> Poly:
    """Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b."""
    r = list(a.coeffs)
    db = b.degree
    lc = b.lc()
    e = a.degree - db + 1
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k]
        r = [x * lc for x in r]
        if c:
            for j, y in enumerate(b.coeffs):
                r[k - db + j] = r[k - db + j] - c * y
        r.pop()
        e -= 1
    p = Poly._raw(r, a.base, a.var)
    return p.scale(_pow(lc, e)) if e else p


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd; the zero polynomial only when both inputs are zero."""
    if not f:
        return g.monic()
    if not g:
        return f.monic()
    if f.degree == 0 or g.degree == 0:
        return Poly((1,), f.base, f.var)
    return subresultant_prs(f, g)[-1].monic()


# ---------------------------------------------------------------------------
# rational functions


class RatFunc:
    """Reduced quotient ``num/den`` with ``den`` monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, *, reduce: bool = True):
        if den is None:
            den = Poly((1,), num.base, num.var)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if reduce:
            if not num:
                den = Poly((1,), num.base, num.var)
            elif den.degree > 0:
                g = poly_gcd(num, den)
                if g.degree > 0:
                    num, den = num.exquo(g), den.exquo(g)
            lc = den.lc()
            if lc != 1:
                inv = lc.inverse() if isinstance(lc, QuadExt) else 1 / lc
                num, den = num.scale(inv), den.scale(inv)
        self.num = num
        self.den = den

    @classmethod
    def constant(cls, c, base=QQ, var="t"):
        return cls(Poly((c,), base, var), Poly((1,), base, var), reduce=False)

    @property
    def base(self):
        return self.num.base

    @property
    def var(self):
        return self.num.var

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def constant_value(self):
        return self.num.coeffs[0] if self.num else self.base.zero

    def _co(self, other):
        if isinstance(other, RatFunc):
            if other.var != self.var and not (other.is_constant() or self.is_constant()):
                raise TypeError("only one active parameter at a time "
                                f"({self.var!r} and {other.var!r})")
            if other.base is not self.base or other.var != self.var:
                if other.is_constant():
                    return RatFunc.constant(self.base(other.constant_value()), self.base, self.var)
                raise TypeError("mixed coefficient fields")
            return other
        if isinstance(other, (int, Fraction, QuadExt)):
            return RatFunc.constant(self.base(other), self.base, self.var)
        return NotImplemented

    def _promote(self, other):
        # allow Q(t) op Q[w] -> Q[w](t)
        if isinstance(other, QuadExt) and self.base is QQ:
            return FunctionField(QQW, self.var)(self), other
        if isinstance(other, RatFunc) and other.base is not self.base:
            f = join_fields(FunctionField(self.base, self.var), FunctionField(other.base, other.var))
            return f(self), f(other)
        return self, other

    def __add__(self, other):
        s, other = self._promote(other)
        if s is not self:
            return s + other
        o = self._co(other)
        if o is NotImplemented:
            return o
        if not o.num:
            return self
        if not self.num:
            return o
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        s, other = self._promote(other)
        if s is not self:
            return s - other
        o = self._co(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        s, other = self._promote(other)
        if s is not self:
            return s * other
        o = self._co(other)
        if o is NotImplemented:
            return o
        if not self.num or not o.num:
            return RatFunc.constant(self.base.zero, self.base, self.var)
        if o.is_constant():
            return RatFunc(self.num.scale(o.constant_value()), self.den, reduce=False)
        if self.is_constant():
            return RatFunc(o.num.scale(self.constant_value()), o.den, reduce=False)
        # cross-cancel before multiplying
        g1 = poly_gcd(self.num, o.den)
        g2 = poly_gcd(o.num, self.den)
        n1, d2 = (self.num.exquo(g1), o.den.exquo(g1)) if g1.degree > 0 else (self.num, o.den)
        n2, d1 = (o.num.exquo(g2), self.den.exquo(g2)) if g2.degree > 0 else (o.num, self.den)
        return RatFunc(n1 * n2, d1 * d2, reduce=False)._normalize_lc()

    __rmul__ = __mul__

    def _normalize_lc(self):
        lc = self.den.lc()
        if lc != 1:
            inv = lc.inverse() if isinstance(lc, QuadExt) else 1 / lc
            return RatFunc(self.num.scale(inv), self.den.scale(inv), reduce=False)
        return self

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num, reduce=False)._normalize_lc()

    def __truediv__(self, other):
        s, other = self._promote(other)
        if s is not self:
            return s / other
        o = self._co(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc(_ppow(self.num, k), _ppow(self.den, k), reduce=False)

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            if self.is_constant() and other.is_constant():
                return self.constant_value() == other.constant_value()
            return self.var == other.var and self.num.coeffs == other.num.coeffs \
                and self.den.coeffs == other.den.coeffs
        if isinstance(other, (int, Fraction, QuadExt)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_value())
        return hash((self.num.coeffs, self.den.coeffs))

    def __repr__(self):
        return f"RatFunc({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)

    # -- valuation at zero ------------------------------------------------

    def order_at_zero(self) -> int:
        if not self.num:
            raise ArithmeticError_("order at 0 of the zero function is +infinity")
        return self.num.order_at_zero() - self.den.order_at_zero()

    def limit_at_zero(self):
        if not self.num:
            return self.base.zero
        k = self.order_at_zero()
        if k < 0:
            raise LimitError(k)
        if k > 0:
            return self.base.zero
        n = self.num.shift_down(self.num.order_at_zero())
        d = self.den.shift_down(self.den.order_at_zero())
        return n.coeffs[0] / d.coeffs[0]

    def specialize(self, value):
        d = self.den(value)
        if not d:
            raise PoleError(f"denominator of {self} vanishes at {format_scalar(value)}")
        return self.num(value) / d


def _ppow(p: Poly, k: int) -> Poly:
    r = Poly((1,), p.base, p.var)
    while k:
        if k & 1:
            r = r * p
        p = p * p
        k >>= 1
    return r


def order_at_zero(f) -> int:
    """t-adic valuation; constants have order 0."""
    if isinstance(f, RatFunc):
        return f.order_at_zero()
    if not f:
        raise ArithmeticError_("order at 0 of zero is +infinity")
    return 0


def limit_at_zero(f):
    if isinstance(f, RatFunc):
        return f.limit_at_zero()
    return f


def specialize(f, value):
    if isinstance(f, RatFunc):
        return f.specialize(value)
    return f


# ---------------------------------------------------------------------------
# literal grammar: integers, p/q, identifiers, + - * / ^, parentheses; w = omega

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


class ScalarSyntaxError(ValueError):
    def __init__(self, msg, text, pos):
        self.pos = pos
        super().__init__(f"{msg} at column {pos + 1} in {text!r}")


def _tokenize(text):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        if m.group(0).strip() == "":
            break
        if m.group(1):
            out.append(("num", int(m.group(1)), m.start(1)))
        elif m.group(2):
            out.append(("id", m.group(2), m.start(2)))
        else:
            out.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text, field, env):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.field = field
        self.env = env

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, op):
        t = self.take()
        if t[0] != "op" or t[1] != op:
            raise ScalarSyntaxError(f"expected {op!r}", self.text, t[2])

    def parse(self):
        v = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ScalarSyntaxError("unexpected token", self.text, t[2])
        return v

    def expr(self):
        t = self.peek()
        neg = False
        if t[0] == "op" and t[1] in "+-":
            self.take()
            neg = t[1] == "-"
        v = self.term()
        if neg:
            v = -v
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] in "+-":
                self.take()
                w = self.term()
                v = v + w if t[1] == "+" else v - w
            else:
                return v

    def term(self):
        v = self.factor()
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] in "*/":
                self.take()
                w = self.factor()
                if t[1] == "*":
                    v = v * w
                else:
                    if not w:
                        raise ZeroDivisionError(f"division by zero in {self.text!r}")
                    v = v / w
            else:
                return v

    def factor(self):
        v = self.atom()
        t = self.peek()
        if t[0] == "op" and t[1] == "^":
            self.take()
            sign = 1
            t = self.peek()
            if t[0] == "op" and t[1] in "+-":
                self.take()
                sign = -1 if t[1] == "-" else 1
            t = self.take()
            if t[0] == "op" and t[1] == "(":
                # allow t^(-3)
                sign2 = 1
                t2 = self.take()
                if t2[0] == "op" and t2[1] in "+-":
                    sign2 = -1 if t2[1] == "-" else 1
                    t2 = self.take()
                if t2[0] != "num":
                    raise ScalarSyntaxError("expected integer exponent", self.text, t2[2])
                self.expect(")")
                k = sign * sign2 * t2[1]
            elif t[0] == "num":
                k = sign * t[1]
            else:
                raise ScalarSyntaxError("expected integer exponent", self.text, t[2])
            if k < 0 and not v:
                raise ZeroDivisionError(f"negative power of zero in {self.text!r}")
            v = v ** k
        return v

    def atom(self):
        t = self.take()
        if t[0] == "num":
            return self.field(t[1])
        if t[0] == "id":
            name = t[1]
            if name in self.env:
                return self.field(self.env[name])
            if name == "w":
                return self.field(QQW.gen)
            if isinstance(self.field, FunctionField) and name == self.field.var:
                return self.field.gen
            raise ScalarSyntaxError(f"unknown symbol {name!r}", self.text, t[2])
        if t[0] == "op" and t[1] == "(":
            v = self.expr()
            self.expect(")")
            return v
        raise ScalarSyntaxError("unexpected token", self.text, t[2])


def parse_scalar(text: str, field=QQ, env: Mapping | None = None):
    """Parse a scalar literal into ``field``; ``env`` binds free symbols."""
    if "w" in _identifiers(text) and (field is QQ or
                                       (isinstance(field, FunctionField) and field.base is QQ)):
        field = join_fields(field, QQW)
    return _Parser(text, field, dict(env or {})).parse()


def _identifiers(text):
    return {t[1] for t in _tokenize(text) if t[0] == "id"}


def symbols_in(text: str) -> set[str]:
    return _identifiers(text)


def infer_field(text: str, params: Iterable[str] = ()):
    ids = _identifiers(text)
    base = QQW if "w" in ids else QQ
    free = [p for p in params if p in ids]
    if len(free) > 1:
        raise TypeError(f"only one active parameter at a time: {free}")
    return FunctionField(base, free[0]) if free else base


def _fmt_frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _fmt_coeff_term(c, mono: str) -> tuple[str, str]:
    """Return (sign, body) for coefficient ``c`` times monomial ``mono``."""
    if isinstance(c, QuadExt):
        if not c.b:
            c = c.a
        elif not c.a:
            sign, body = _fmt_coeff_term(c.b, "w")
            if mono:
                return sign, f"{body}*{mono}"
            return sign, body
        else:
            s = format_scalar(c)
            return "+", f"({s})*{mono}" if mono else f"({s})"
    sign = "-" if c < 0 else "+"
    a = abs(c)
    if not mono:
        return sign, _fmt_frac(a)
    if a == 1:
        return sign, mono
    if a.denominator == 1:
        return sign, f"{a.numerator}*{mono}"
    return sign, f"{a.numerator}/{a.denominator}*{mono}"


def _join_terms(terms) -> str:
    if not terms:
        return "0"
    out = ""
    for k, (sign, body) in enumerate(terms):
        if k == 0:
            out = ("-" if sign == "-" else "") + body
        else:
            out += f" {sign} {body}"
    return out


def format_poly(p: Poly) -> str:
    terms = []
    for k in range(len(p.coeffs) - 1, -1, -1):
        c = p.coeffs[k]
        if not c:
            continue
        mono = "" if k == 0 else (p.var if k == 1 else f"{p.var}^{k}")
        terms.append(_fmt_coeff_term(c, mono))
    return _join_terms(terms)


def format_scalar(x) -> str:
    """Canonical text form; ``parse_scalar(format_scalar(x)) == x``."""
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return _fmt_frac(x)
    if isinstance(x, QuadExt):
        if not x.b:
            return _fmt_frac(x.a)
        terms = []
        if x.b:
            terms.append(_fmt_coeff_term(x.b, "w"))
        if x.a:
            terms.append(_fmt_coeff_term(x.a, ""))
        return _join_terms(terms)
    if isinstance(x, RatFunc):
        num = format_poly(x.num)
        if x.den.degree == 0:
            return num
        nterms = sum(1 for c in x.num.coeffs if c)
        if nterms > 1 or (nterms == 1 and isinstance(x.num.coeffs[x.num.degree], QuadExt)
                          and x.num.coeffs[x.num.degree].b and x.num.coeffs[x.num.degree].a):
            num = f"({num})"
        return f"{num}/({format_poly(x.den)})"
    raise TypeError(f"not a scalar: {x!r}")
