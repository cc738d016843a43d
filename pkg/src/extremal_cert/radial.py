"""Exact calculus for radial functions on the unit ball of R^N.

A :class:`LogPolynomial` is a finite sum of terms ``c * r**q * ln(r)**k`` with
rational ``c`` and ``q``.  The class is closed under the radial Laplacian

    Δf = f'' + (N - 1)/r * f',

so bilaplacians of the test functions used in the singularity proof can be
computed with no rounding at all.  :class:`Expr` trees compose
log-polynomials with exp, products and quotients and evaluate them over
intervals, returning forward-mode derivative enclosures alongside values.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Union

import mpmath

from .interval import (
    EMPTY,
    DomainError,
    Interval,
    as_interval,
    exp_i,
    ipow,
    ln_i,
    pow_i,
)

Rational = Union[Fraction, int]
Key = tuple[Fraction, int]


def _q(x: Union[Rational, float, str]) -> Fraction:
    # floats are read through their shortest repr, so 3.5 -> 7/2 and 0.1 -> 1/10
    return Fraction(repr(x)) if isinstance(x, float) else Fraction(x)


class LogPolynomial:
    """Canonical sum of ``c * r**q * ln(r)**k`` terms.

    Terms are stored as a tuple sorted by (q, k); zero coefficients are
    dropped, so structural equality is mathematical equality.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Union[Mapping[Key, Rational], Iterable[tuple[Rational, Rational, int]]] = ()):
        acc: dict[Key, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else (((q, k), c) for c, q, k in terms)
        for (q, k), c in items:
            k = int(k)
            if k < 0:
                raise ValueError("log power must be nonnegative")
            key = (Fraction(q), k)
            acc[key] = acc.get(key, Fraction(0)) + Fraction(c)
        self.terms: tuple[tuple[Fraction, int, Fraction], ...] = tuple(
            (q, k, c) for (q, k), c in sorted(acc.items()) if c != 0
        )
        self._hash = hash(self.terms)

    # constructors -----------------------------------------------------------
    @classmethod
    def const(cls, c: Rational) -> LogPolynomial:
        return cls({(Fraction(0), 0): c})

    @classmethod
    def monomial(cls, q: Rational, c: Rational = 1, k: int = 0) -> LogPolynomial:
        return cls({(Fraction(q), k): c})

    @classmethod
    def log(cls, c: Rational = 1) -> LogPolynomial:
        return cls({(Fraction(0), 1): c})

    # algebra ----------------------------------------------------------------
    def as_dict(self) -> dict[Key, Fraction]:
        return {(q, k): c for q, k, c in self.terms}

    def __add__(self, other: Union[LogPolynomial, Rational]) -> LogPolynomial:
        other = _as_poly(other)
        acc = self.as_dict()
        for q, k, c in other.terms:
            acc[(q, k)] = acc.get((q, k), Fraction(0)) + c
        return LogPolynomial(acc)

    __radd__ = __add__

    def __neg__(self) -> LogPolynomial:
        return LogPolynomial({(q, k): -c for q, k, c in self.terms})

    def __sub__(self, other: Union[LogPolynomial, Rational]) -> LogPolynomial:
        return self + (-_as_poly(other))

    def __rsub__(self, other: Union[LogPolynomial, Rational]) -> LogPolynomial:
        return _as_poly(other) - self

    def __mul__(self, other: Union[LogPolynomial, Rational]) -> LogPolynomial:
        other = _as_poly(other)
        acc: dict[Key, Fraction] = {}
        for q1, k1, c1 in self.terms:
            for q2, k2, c2 in other.terms:
                key = (q1 + q2, k1 + k2)
                acc[key] = acc.get(key, Fraction(0)) + c1 * c2
        return LogPolynomial(acc)

    __rmul__ = __mul__

    def shift(self, q: Rational) -> LogPolynomial:
        """Multiply by r**q."""
        q = Fraction(q)
        return LogPolynomial({(e + q, k): c for e, k, c in self.terms})

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LogPolynomial.const(other)
        return isinstance(other, LogPolynomial) and self.terms == other.terms

    def __hash__(self) -> int:
        return self._hash

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def min_exponent(self) -> Fraction:
        return min(q for q, _, _ in self.terms) if self.terms else Fraction(0)

    @property
    def has_logs(self) -> bool:
        return any(k for _, k, _ in self.terms)

    def value_at_one(self) -> Fraction:
        """Exact value at r = 1 (every ln term vanishes there)."""
        return sum((c for _, k, c in self.terms if k == 0), Fraction(0))

    # calculus ---------------------------------------------------------------
    def derivative(self) -> LogPolynomial:
        acc: dict[Key, Fraction] = {}
        for q, k, c in self.terms:
            if q != 0:
                key = (q - 1, k)
                acc[key] = acc.get(key, Fraction(0)) + c * q
            if k > 0:
                key = (q - 1, k - 1)
                acc[key] = acc.get(key, Fraction(0)) + c * k
        return LogPolynomial(acc)

    # evaluation -------------------------------------------------------------
    def __call__(self, r):
        if isinstance(r, Interval):
            return self.interval(r)
        if isinstance(r, Fraction) and not self.has_logs and all(q.denominator == 1 for q, _, _ in self.terms):
            return sum((c * r**int(q) for q, _, c in self.terms), Fraction(0))
        if isinstance(r, mpmath.mpf):
            return self.mp(r)
        return self.mp(mpmath.mpf(r)) if isinstance(r, (Fraction, str)) else self.float(float(r))

    def float(self, r: float) -> float:
        lr = math.log(r) if self.has_logs else 0.0
        return math.fsum(float(c) * r ** float(q) * lr**k for q, k, c in self.terms)

    def mp(self, r) -> mpmath.mpf:
        r = mpmath.mpf(r)
        lr = mpmath.log(r) if self.has_logs else mpmath.mpf(0)
        total = mpmath.mpf(0)
        for q, k, c in self.terms:
            total += mpmath.mpf(c.numerator) / c.denominator * _mp_pow(r, q) * lr**k
        return total

    def interval(self, x: Interval) -> Interval:
        if x.is_empty:
            return EMPTY
        total = Interval(0.0, 0.0)
        for q, k, c in self.terms:
            total = total + _coef(c) * _term(x, q, k)
        return total

    # text -------------------------------------------------------------------
    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for q, k, c in self.terms:
            s = str(c)
            if q != 0:
                s += f"*r^({q})"
            if k:
                s += f"*ln(r)^{k}"
            parts.append(s)
        return " + ".join(parts)

    @classmethod
    def parse(cls, text: str) -> LogPolynomial:
        text = text.strip()
        if text == "0":
            return cls()
        terms = []
        for part in text.split(" + "):
            m = _TERM_RE.fullmatch(part.strip())
            if not m:
                raise ValueError(f"cannot parse term {part!r}")
            c, q, k = m.group("c"), m.group("q"), m.group("k")
            terms.append((Fraction(c), Fraction(q) if q else Fraction(0), int(k) if k else 0))
        return cls(terms)

    def __repr__(self) -> str:
        return f"LogPolynomial({self.to_text()!r})"


_TERM_RE = re.compile(r"(?P<c>-?\d+(?:/\d+)?)(?:\*r\^\((?P<q>-?\d+(?:/\d+)?)\))?(?:\*ln\(r\)\^(?P<k>\d+))?")


def _as_poly(x: Union[LogPolynomial, Rational]) -> LogPolynomial:
    return x if isinstance(x, LogPolynomial) else LogPolynomial.const(x)


def _mp_pow(r, q: Fraction):
    if q == 0:
        return mpmath.mpf(1)
    if q.denominator == 1:
        return r ** int(q)
    return r ** (mpmath.mpf(q.numerator) / q.denominator)


_COEF_CACHE: dict[Fraction, Interval] = {}


def _coef(c: Fraction) -> Interval:
    iv = _COEF_CACHE.get(c)
    if iv is None:
        iv = _COEF_CACHE[c] = Interval.exact(c)
    return iv


def _term(x: Interval, q: Fraction, k: int) -> Interval:
    """Enclosure of r**q * ln(r)**k over x (x.lo >= 0)."""
    if k == 0:
        return pow_i(x, q)
    if x.lo < 0:
        raise DomainError("log term evaluated at negative radius")
    if x.lo == 0.0 and q > 0:
        return _log_term_at_zero(x, q, k)
    return pow_i(x, q) * ipow(ln_i(x), k)


def _log_term_at_zero(x: Interval, q: Fraction, k: int) -> Interval:
    # g(r) = r^q ln(r)^k -> 0 as r -> 0, with sign (-1)^k on (0, 1); |g| is
    # increasing up to r = exp(-k/q), where it peaks at (k/(q e))^k.
    if x.hi > 1.0:
        return _hull(_log_term_at_zero(Interval(0.0, 1.0), q, k), _term(Interval(1.0, x.hi), q, k))
    at_hi = _term(Interval(x.hi, x.hi), q, k) if x.hi > 0 else Interval(0.0, 0.0)
    mag = max(abs(at_hi.lo), abs(at_hi.hi))
    turn = exp_i(Interval.exact(-Fraction(k) / q))
    if x.hi >= turn.lo:
        peak = ipow(Interval.exact(Fraction(k) / q) * exp_i(Interval(-1.0, -1.0)), k)
        mag = max(mag, peak.hi)
    return Interval(-mag, 0.0) if k % 2 else Interval(0.0, mag)


def _hull(a: Interval, b: Interval) -> Interval:
    return Interval(min(a.lo, b.lo), max(a.hi, b.hi))


# ---------------------------------------------------------------------------
# radial operators

@dataclass(frozen=True)
class Dimension:
    """Spatial dimension N with the Hardy-Rellich constant H_N = N^2 (N-4)^2 / 16."""

    N: int

    def __post_init__(self) -> None:
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.N}")

    @property
    def H(self) -> Fraction:
        return Fraction(self.N**2 * (self.N - 4) ** 2, 16)


def _n(N: Union[int, Dimension]) -> int:
    return N.N if isinstance(N, Dimension) else int(N)


def laplacian(p: LogPolynomial, N: Union[int, Dimension]) -> LogPolynomial:
    """Radial Laplacian, exact.

    Δ(r^q ln^k r) = r^(q-2) [q(q+N-2) ln^k + k(2q+N-2) ln^(k-1) + k(k-1) ln^(k-2)].
    """
    n = _n(N)
    acc: dict[Key, Fraction] = {}

    def put(q: Fraction, k: int, c: Fraction) -> None:
        if c:
            acc[(q, k)] = acc.get((q, k), Fraction(0)) + c

    for q, k, c in p.terms:
        put(q - 2, k, c * q * (q + n - 2))
        if k >= 1:
            put(q - 2, k - 1, c * k * (2 * q + n - 2))
        if k >= 2:
            put(q - 2, k - 2, c * k * (k - 1))
    return LogPolynomial(acc)


def bilaplacian(p: LogPolynomial, N: Union[int, Dimension]) -> LogPolynomial:
    return laplacian(laplacian(p, N), N)


def derivative(p: LogPolynomial) -> LogPolynomial:
    return p.derivative()


R = LogPolynomial.monomial(1)
LN = LogPolynomial.log()


def make_w(m: Union[Rational, float]) -> LogPolynomial:
    """w_m = -4 ln r - 4/m + (4/m) r^m, singular at 0 and clamped at r = 1."""
    m = _q(m)
    if m <= 0:
        raise DomainError(f"m must be positive, got {m}")
    return LogPolynomial([(-4, 0, 1), (-4 / m, 0, 0), (4 / m, m, 0)])


def phi(N: int) -> LogPolynomial:
    """r^(1-N/2) - 9/10."""
    return LogPolynomial([(1, 1 - Fraction(N, 2), 0), (Fraction(-9, 10), 0, 0)])


def psi(N: int) -> LogPolynomial:
    """r^(2-N/2) - 1."""
    return LogPolynomial([(1, 2 - Fraction(N, 2), 0), (-1, 0, 0)])


def improved_denominator(N: int) -> LogPolynomial:
    """r^2 - (9/10) r^(N/2+1)."""
    return LogPolynomial([(1, 2, 0), (Fraction(-9, 10), Fraction(N, 2) + 1, 0)])


def classical_denominator(N: int) -> LogPolynomial:
    """r^2 - r^(N/2)."""
    return LogPolynomial([(1, 2, 0), (-1, Fraction(N, 2), 0)])


def hr1_constants(N: int) -> tuple[Fraction, Fraction]:
    """The two constants (N-2)^2 (N-4)^2 / 16 and (N-1)(N-4)^2 / 4."""
    return Fraction((N - 2) ** 2 * (N - 4) ** 2, 16), Fraction((N - 1) * (N - 4) ** 2, 4)


def _check_hr_dimension(N: int) -> None:
    if N < 5:
        raise DomainError(f"improved Hardy-Rellich weights need N >= 5, got {N}")


def hr1_weight(N: int) -> Expr:
    _check_hr_dimension(N)
    a, b = hr1_constants(N)
    d1, d2 = improved_denominator(N), classical_denominator(N)
    return Poly.const(a) / (Poly(d1) * Poly(d2)) + Poly.const(b) / (Poly(R * R) * Poly(d2))


def hr2_weight(N: int) -> Expr:
    _check_hr_dimension(N)
    return Poly.const(Dimension(N).H) / (Poly(R * R) * Poly(classical_denominator(N)))


# ---------------------------------------------------------------------------
# expression trees

Pair = tuple[Interval, Interval]


class Expr:
    """Radial expression over (0, 1) with interval and derivative evaluation.

    Calling an expression on an :class:`Interval` returns the tightest of the
    natural extension, the mean-value form and (when the derivative has a
    sign) the monotone endpoint enclosure.
    """

    def pair(self, x: Interval) -> Pair:
        """(value, derivative) enclosures over x."""
        raise NotImplementedError

    def mp(self, r) -> mpmath.mpf:
        raise NotImplementedError

    def to_text(self) -> str:
        raise NotImplementedError

    # enclosures ----------------------------------------------------------
    def natural(self, x: Interval) -> Interval:
        return self.pair(x)[0]

    def __call__(self, x: Union[Interval, float]) -> Interval:
        if not isinstance(x, Interval):
            x = Interval(float(x), float(x))
        value, deriv = self.pair(x)
        if x.lo == x.hi or value.is_empty or deriv.is_empty:
            return value
        if deriv.lo >= 0:
            lo = self.pair(Interval(x.lo, x.lo))[0].lo
            hi = self.pair(Interval(x.hi, x.hi))[0].hi
            return value.intersect(Interval(lo, hi)) if lo <= hi else value
        if deriv.hi <= 0:
            lo = self.pair(Interval(x.hi, x.hi))[0].lo
            hi = self.pair(Interval(x.lo, x.lo))[0].hi
            return value.intersect(Interval(lo, hi)) if lo <= hi else value
        c = x.mid
        fc = self.pair(Interval(c, c))[0]
        mv = fc + deriv * (x - c)
        tight = value.intersect(mv)
        return tight if not tight.is_empty else value

    # construction helpers --------------------------------------------------
    def __add__(self, other: ExprLike) -> Expr:
        return Sum((self, _as_expr(other)))

    def __radd__(self, other: ExprLike) -> Expr:
        return Sum((_as_expr(other), self))

    def __sub__(self, other: ExprLike) -> Expr:
        return Sum((self, Neg(_as_expr(other))))

    def __rsub__(self, other: ExprLike) -> Expr:
        return Sum((_as_expr(other), Neg(self)))

    def __mul__(self, other: ExprLike) -> Expr:
        return Prod((self, _as_expr(other)))

    def __rmul__(self, other: ExprLike) -> Expr:
        return Prod((_as_expr(other), self))

    def __truediv__(self, other: ExprLike) -> Expr:
        return Quot(self, _as_expr(other))

    def __rtruediv__(self, other: ExprLike) -> Expr:
        return Quot(_as_expr(other), self)

    def __neg__(self) -> Expr:
        return Neg(self)

    def __pow__(self, n: int) -> Expr:
        return IntPow(self, int(n))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.to_text()!r})"


ExprLike = Union[Expr, LogPolynomial, Rational]


def _as_expr(x: ExprLike) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, LogPolynomial):
        return Poly(x)
    return Poly.const(x)


class Poly(Expr):
    """Leaf holding a canonical log-polynomial."""

    def __init__(self, poly: LogPolynomial):
        self.poly = poly

    @classmethod
    def const(cls, c: Rational) -> Poly:
        return cls(LogPolynomial.const(c))

    @cached_property
    def _d(self) -> LogPolynomial:
        return self.poly.derivative()

    def pair(self, x: Interval) -> Pair:
        return self.poly.interval(x), self._d.interval(x)

    def mp(self, r):
        return self.poly.mp(r)

    def to_text(self) -> str:
        return "[" + self.poly.to_text() + "]"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Poly) and other.poly == self.poly

    def __hash__(self) -> int:
        return hash(self.poly)


class Sum(Expr):
    def __init__(self, children: Iterable[Expr]):
        self.children = tuple(children)

    def pair(self, x: Interval) -> Pair:
        v = Interval(0.0, 0.0)
        d = Interval(0.0, 0.0)
        for ch in self.children:
            cv, cd = ch.pair(x)
            v, d = v + cv, d + cd
        return v, d

    def mp(self, r):
        return mpmath.fsum(ch.mp(r) for ch in self.children)

    def to_text(self) -> str:
        return "(sum " + " ".join(ch.to_text() for ch in self.children) + ")"


class Prod(Expr):
    def __init__(self, children: Iterable[Expr]):
        self.children = tuple(children)

    def pair(self, x: Interval) -> Pair:
        v, d = Interval(1.0, 1.0), Interval(0.0, 0.0)
        for ch in self.children:
            cv, cd = ch.pair(x)
            v, d = v * cv, d * cv + v * cd
        return v, d

    def mp(self, r):
        out = mpmath.mpf(1)
        for ch in self.children:
            out *= ch.mp(r)
        return out

    def to_text(self) -> str:
        return "(prod " + " ".join(ch.to_text() for ch in self.children) + ")"


class Quot(Expr):
    def __init__(self, num: Expr, den: Expr):
        self.num, self.den = num, den

    def pair(self, x: Interval) -> Pair:
        nv, nd = self.num.pair(x)
        dv, dd = self.den.pair(x)
        v = nv / dv
        return v, (nd - v * dd) / dv

    def mp(self, r):
        return self.num.mp(r) / self.den.mp(r)

    def to_text(self) -> str:
        return f"(quot {self.num.to_text()} {self.den.to_text()})"


class Neg(Expr):
    def __init__(self, arg: Expr):
        self.arg = arg

    def pair(self, x: Interval) -> Pair:
        v, d = self.arg.pair(x)
        return -v, -d

    def mp(self, r):
        return -self.arg.mp(r)

    def to_text(self) -> str:
        return f"(neg {self.arg.to_text()})"


class Exp(Expr):
    def __init__(self, arg: ExprLike):
        self.arg = _as_expr(arg)

    def pair(self, x: Interval) -> Pair:
        v, d = self.arg.pair(x)
        ev = exp_i(v)
        return ev, ev * d

    def mp(self, r):
        return mpmath.exp(self.arg.mp(r))

    def to_text(self) -> str:
        return f"(exp {self.arg.to_text()})"


class IntPow(Expr):
    def __init__(self, arg: Expr, n: int):
        self.arg, self.n = arg, n

    def pair(self, x: Interval) -> Pair:
        v, d = self.arg.pair(x)
        if self.n == 0:
            return Interval(1.0, 1.0), Interval(0.0, 0.0)
        return ipow(v, self.n), as_interval(self.n) * ipow(v, self.n - 1) * d

    def mp(self, r):
        return self.arg.mp(r) ** self.n

    def to_text(self) -> str:
        return f"(pow {self.arg.to_text()} {self.n})"


def parse_expr(text: str) -> Expr:
    """Inverse of ``Expr.to_text``."""
    pos = 0

    def skip() -> None:
        nonlocal pos
        while pos < len(text) and text[pos] == " ":
            pos += 1

    def node() -> Expr:
        nonlocal pos
        skip()
        if text[pos] == "[":
            end = text.index("]", pos)
            leaf = Poly(LogPolynomial.parse(text[pos + 1 : end]))
            pos = end + 1
            return leaf
        if text[pos] != "(":
            raise ValueError(f"unexpected {text[pos]!r} at {pos}")
        pos += 1
        end = pos
        while text[end] not in " )":
            end += 1
        head = text[pos:end]
        pos = end
        args: list[Expr] = []
        n = None
        while True:
            skip()
            if text[pos] == ")":
                pos += 1
                break
            if head == "pow" and args:
                end = pos
                while text[end] not in " )":
                    end += 1
                n = int(text[pos:end])
                pos = end
                continue
            args.append(node())
        if head == "sum":
            return Sum(args)
        if head == "prod":
            return Prod(args)
        if head == "quot":
            return Quot(*args)
        if head == "neg":
            return Neg(args[0])
        if head == "exp":
            return Exp(args[0])
        if head == "pow":
            return IntPow(args[0], n if n is not None else 1)
        raise ValueError(f"unknown node {head!r}")

    out = node()
    skip()
    if pos != len(text):
        raise ValueError("trailing text after expression")
    return out


def exp_w(m: Union[Rational, float]) -> Expr:
    """e^{w_m} as an expression tree (unregularized; singular at r = 0)."""
    return Exp(make_w(m))
