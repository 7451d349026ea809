"""Exact scalars for the machine: rationals, dyadic intervals, rational functions.

Every value the VM computes with is a :data:`Rational` (a ``gmpy2.mpq``); no
floating point is used anywhere in the core.  Rational functions over named
variables carry symbolic intermediate results when some reals are only known
through approximations.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import isqrt
from typing import Callable, Iterable, Mapping

import gmpy2
import sympy

Rational = type(gmpy2.mpq(0))

ZERO = gmpy2.mpq(0)
ONE = gmpy2.mpq(1)

OPS = ("add", "sub", "mul", "div")


class DivisionByZero(ZeroDivisionError):
    """Exact division by the rational 0 or by the zero polynomial."""


class ApproximationFailure(ValueError):
    """An approximation scheme could not deliver the requested precision."""


# -- rationals ---------------------------------------------------------------

_RAT_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def rational(value) -> Rational:
    """Coerce ``value`` (int, ``"p/q"`` text, mpq, Fraction) to a Rational."""
    if isinstance(value, Rational):
        return value
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a 'p/q' string instead")
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return gmpy2.mpq(int(value.numerator), int(value.denominator))
    return gmpy2.mpq(value)


def parse_rational(text: str) -> Rational:
    m = _RAT_RE.match(text)
    if not m:
        raise ValueError(f"not a rational: {text!r}")
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return gmpy2.mpq(int(m.group(1)), den)


def format_rational(q: Rational) -> str:
    """Serialize as ``"p/q"``; the denominator is always written."""
    return f"{q.numerator}/{q.denominator}"


def rat_op(a: Rational, b: Rational, op: str) -> Rational:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b == 0:
            raise DivisionByZero("rational division by zero")
        return a / b
    raise ValueError(f"unknown op {op!r}")


def is_dyadic(q: Rational) -> bool:
    d = int(q.denominator)
    return d & (d - 1) == 0


def dyadic_round(q: Rational, n: int) -> Rational:
    """Largest multiple of 2^-n not above ``q`` (ties go toward -infinity)."""
    if n < 0:
        raise ValueError("precision must be >= 0")
    num, den = int(q.numerator), int(q.denominator)
    return gmpy2.mpq((num << n) // den, 1 << n)


# -- intervals ---------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    """Closed rational interval, used for interval evaluation."""

    lo: Rational
    hi: Rational

    @classmethod
    def point(cls, q: Rational) -> Interval:
        return cls(q, q)

    def __contains__(self, q) -> bool:
        return self.lo <= q <= self.hi

    def __add__(self, other: Interval) -> Interval:
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __sub__(self, other: Interval) -> Interval:
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __mul__(self, other: Interval) -> Interval:
        ps = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return Interval(min(ps), max(ps))

    def scale(self, c: Rational) -> Interval:
        a, b = self.lo * c, self.hi * c
        return Interval(a, b) if a <= b else Interval(b, a)

    def __truediv__(self, other: Interval) -> Interval:
        if other.lo <= 0 <= other.hi:
            raise DivisionByZero("interval divisor contains 0")
        return self * Interval(1 / other.hi, 1 / other.lo)

    def power(self, e: int) -> Interval:
        if e == 0:
            return Interval(ONE, ONE)
        a, b = self.lo ** e, self.hi ** e
        if e % 2 == 1:
            return Interval(a, b)
        if self.lo <= 0 <= self.hi:
            return Interval(ZERO, max(a, b))
        return Interval(min(a, b), max(a, b))


@dataclass(frozen=True)
class DyadicInterval:
    """Interval with dyadic endpoints and width at most 2^-precision."""

    lo: Rational
    hi: Rational
    precision: int

    def __post_init__(self):
        if not (is_dyadic(self.lo) and is_dyadic(self.hi)):
            raise ValueError("endpoints must be dyadic")
        if self.lo > self.hi:
            raise ValueError("lo > hi")
        if self.hi - self.lo > gmpy2.mpq(1, 1 << self.precision):
            raise ValueError("interval wider than 2^-precision")

    @classmethod
    def around(cls, q: Rational, n: int) -> DyadicInterval:
        lo = dyadic_round(q, n + 1)
        hi = lo if lo == q else lo + gmpy2.mpq(1, 1 << (n + 1))
        return cls(lo, hi, n)

    def as_interval(self) -> Interval:
        return Interval(self.lo, self.hi)


class RealApprox:
    """A real number known through dyadic enclosures of any requested width.

    ``supplier(n)`` must return a :class:`DyadicInterval` of width <= 2^-n that
    contains the number.  Exactly known rationals pass ``exact``.
    """

    def __init__(self, supplier: Callable[[int], DyadicInterval], name: str = "",
                 exact: Rational | None = None):
        self._supplier = supplier
        self.name = name
        self.exact = exact

    def __repr__(self):
        return f"RealApprox({self.name or '?'})"

    def interval(self, n: int) -> DyadicInterval:
        try:
            iv = self._supplier(n)
        except ApproximationFailure:
            raise
        except Exception as exc:  # scheme bugs surface uniformly
            raise ApproximationFailure(f"{self.name}: precision {n}: {exc}") from exc
        if not isinstance(iv, DyadicInterval) or iv.precision < n:
            raise ApproximationFailure(f"{self.name}: could not deliver precision {n}")
        return iv

    @classmethod
    def of_rational(cls, q) -> RealApprox:
        q = rational(q)
        return cls(lambda n: DyadicInterval.around(q, n), name=format_rational(q), exact=q)

    @classmethod
    def sqrt(cls, q) -> RealApprox:
        """Square root of a non-negative rational, by integer square roots."""
        q = rational(q)
        if q < 0:
            raise ValueError("sqrt of a negative number")
        num, den = int(q.numerator), int(q.denominator)
        r = isqrt(num * den)
        exact = gmpy2.mpq(r, den) if r * r == num * den else None

        def supplier(n: int) -> DyadicInterval:
            a = isqrt((num << (2 * n)) // den)
            return DyadicInterval(gmpy2.mpq(a, 1 << n), gmpy2.mpq(a + 1, 1 << n), n)

        return cls(supplier, name=f"sqrt({format_rational(q)})", exact=exact)


# -- polynomials -------------------------------------------------------------

_VAR_RE = re.compile(r"^([A-Za-z_]+)(\d*)$")


def var_key(name: str):
    m = _VAR_RE.match(name)
    if not m:
        raise ValueError(f"bad variable name {name!r}")
    return (m.group(1), int(m.group(2)) if m.group(2) else -1)


Monomial = tuple  # ((var, exp), ...) sorted by var_key


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items(), key=lambda t: var_key(t[0])))


class Polynomial:
    """Sparse multivariate polynomial with Rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Rational] | None = None):
        self.terms = {m: c for m, c in (terms or {}).items() if c != 0}

    @classmethod
    def constant(cls, q) -> Polynomial:
        return cls({(): rational(q)})

    @classmethod
    def variable(cls, name: str) -> Polynomial:
        var_key(name)
        return cls({((name, 1),): ONE})

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def constant_value(self) -> Rational:
        return self.terms.get((), ZERO)

    def variables(self) -> list[str]:
        vs = {v for m in self.terms for v, _ in m}
        return sorted(vs, key=var_key)

    def degree(self) -> int:
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    def _grlex_key(self, variables):
        def key(m):
            exps = dict(m)
            return (sum(exps.values()), tuple(exps.get(v, 0) for v in variables))
        return key

    def leading_coefficient(self) -> Rational:
        if not self.terms:
            return ZERO
        lead = max(self.terms, key=self._grlex_key(self.variables()))
        return self.terms[lead]

    def __add__(self, other: Polynomial) -> Polynomial:
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, ZERO) + c
        return Polynomial(out)

    def __neg__(self) -> Polynomial:
        return Polynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self + (-other)

    def __mul__(self, other: Polynomial) -> Polynomial:
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, ZERO) + c1 * c2
        return Polynomial(out)

    def scale(self, c: Rational) -> Polynomial:
        return Polynomial({m: k * c for m, k in self.terms.items()})

    def evaluate(self, values: Mapping[str, Rational]) -> Rational:
        total = ZERO
        for m, c in self.terms.items():
            t = c
            for v, e in m:
                t *= values[v] ** e
            total += t
        return total

    def substitute(self, values: Mapping[str, Rational]) -> Polynomial:
        """Partially evaluate: replace the given variables by rationals."""
        out: dict = {}
        for m, c in self.terms.items():
            rest = []
            for v, e in m:
                if v in values:
                    c = c * values[v] ** e
                else:
                    rest.append((v, e))
            key = tuple(rest)
            out[key] = out.get(key, ZERO) + c
        return Polynomial(out)

    def interval(self, boxes: Mapping[str, Interval]) -> Interval:
        total = Interval(ZERO, ZERO)
        for m, c in self.terms.items():
            t = Interval(c, c)
            for v, e in m:
                t = t * boxes[v].power(e)
            total = total + t
        return total

    def __str__(self):
        if not self.terms:
            return "0"
        variables = self.variables()
        parts = []
        for m in sorted(self.terms, key=self._grlex_key(variables), reverse=True):
            c = self.terms[m]
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__

    # sympy is used only for exact multivariate gcd / division
    def _to_sympy(self, gens):
        data = {}
        for m, c in self.terms.items():
            exps = dict(m)
            data[tuple(exps.get(v, 0) for v in gens)] = sympy.Rational(int(c.numerator), int(c.denominator))
        return sympy.Poly.from_dict(data, *[sympy.Symbol(g) for g in gens], domain=sympy.QQ)

    @classmethod
    def _from_sympy(cls, poly, gens) -> Polynomial:
        out = {}
        for exps, c in poly.as_dict().items():
            c = sympy.Rational(c)
            m = tuple((g, e) for g, e in zip(gens, exps) if e)
            out[m] = gmpy2.mpq(int(c.p), int(c.q))
        return cls(out)


def _cancel(num: Polynomial, den: Polynomial) -> tuple[Polynomial, Polynomial]:
    if den.is_zero():
        raise DivisionByZero("division by the zero polynomial")
    if num.is_zero():
        return Polynomial(), Polynomial.constant(1)
    if not den.is_constant() and not num.is_constant():
        gens = sorted(set(num.variables()) | set(den.variables()), key=var_key)
        pn, pd = num._to_sympy(gens), den._to_sympy(gens)
        g = sympy.gcd(pn, pd)
        if g.total_degree() > 0:
            num = Polynomial._from_sympy(sympy.div(pn, g)[0], gens)
            den = Polynomial._from_sympy(sympy.div(pd, g)[0], gens)
    lc = den.leading_coefficient()
    if lc != 1:
        num, den = num.scale(1 / lc), den.scale(1 / lc)
    return num, den


class RationalFunction:
    """Quotient of polynomials in canonical form.

    Common factors are cancelled and the denominator is monic with respect to
    graded-lexicographic order, so structural equality is functional equality.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial | None = None, *, _canonical=False):
        if den is None:
            den = Polynomial.constant(1)
        if not _canonical:
            num, den = _cancel(num, den)
        self.num = num
        self.den = den

    @classmethod
    def variable(cls, name: str) -> RationalFunction:
        return cls(Polynomial.variable(name), _canonical=True)

    @classmethod
    def constant(cls, q) -> RationalFunction:
        return cls(Polynomial.constant(q), _canonical=True)

    @classmethod
    def parse(cls, text: str) -> RationalFunction:
        """Parse an expression over ``x<k>``/``c<k>`` variables with + - * / ^."""
        expr = sympy.sympify(text.replace("^", "**"), rational=True)
        num, den = sympy.fraction(sympy.together(expr))
        return cls(_sympy_expr_poly(num)) / cls(_sympy_expr_poly(den))

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Rational)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Rational:
        return self.num.constant_value() / self.den.constant_value()

    def variables(self) -> list[str]:
        return sorted(set(self.num.variables()) | set(self.den.variables()), key=var_key)

    def __add__(self, other):
        other = _lift(other)
        if self.den == other.den and self.den.is_constant():
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        other = _lift(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _lift(other)
        if other.is_zero():
            raise DivisionByZero("symbolic division by the zero function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _lift(other) / self

    def evaluate(self, values: Mapping[str, Rational]) -> Rational:
        d = self.den.evaluate(values)
        if d == 0:
            raise DivisionByZero("denominator vanishes at this point")
        return self.num.evaluate(values) / d

    def substitute(self, values: Mapping[str, Rational]) -> RationalFunction:
        return RationalFunction(self.num.substitute(values), self.den.substitute(values))

    def interval(self, boxes: Mapping[str, Interval]) -> Interval:
        return self.num.interval(boxes) / self.den.interval(boxes)

    def __str__(self):
        if self.den == Polynomial.constant(1):
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RationalFunction({self})"


def _lift(value) -> RationalFunction:
    if isinstance(value, RationalFunction):
        return value
    return RationalFunction.constant(value)


def _sympy_expr_poly(expr) -> Polynomial:
    names = sorted((str(s) for s in expr.free_symbols), key=var_key)
    if not names:
        c = sympy.Rational(expr)
        return Polynomial.constant(gmpy2.mpq(int(c.p), int(c.q)))
    return Polynomial._from_sympy(sympy.Poly(expr, *[sympy.Symbol(n) for n in names]), names)


def ratfun_op(a: RationalFunction, b: RationalFunction, op: str) -> RationalFunction:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def interval_sign(iv: Interval) -> int | None:
    if iv.lo > 0:
        return 1
    if iv.hi < 0:
        return -1
    return None


def exact_values(approx: Mapping[str, RealApprox]) -> dict[str, Rational]:
    return {k: a.exact for k, a in approx.items() if a.exact is not None}


def all_rationals(values: Iterable) -> list[Rational]:
    return [rational(v) for v in values]
