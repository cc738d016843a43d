"""Outward-rounded interval arithmetic and 1-D branch-and-bound bounds.

Rounding is done without touching the FPU rounding mode: every primitive
operation computes the round-to-nearest result together with its exact
error term (TwoSum / TwoProduct), and an endpoint is only moved by one ulp
when the error term shows the float result lies on the wrong side of the
true value.  Exact results therefore stay exact, which matters for claims
that are tight at an endpoint (e.g. a residual that is identically 0 at r=0).

Transcendental functions use the platform libm (< 1 ulp error) followed by a
one-ulp widening, except at points where the value is known exactly.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

INF = math.inf

_SPLITTER = 134217729.0  # 2**27 + 1
_SPLIT_LIMIT = 2.0**996
_TINY = 2.0**-969


def _down(x: float) -> float:
    return math.nextafter(x, -INF)


def _up(x: float) -> float:
    return math.nextafter(x, INF)


def _two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _split(a: float) -> tuple[float, float]:
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a: float, b: float) -> tuple[float, float]:
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


def _exact_ok(*xs: float) -> bool:
    # Error-free transformations need finite, non-extreme operands.
    for x in xs:
        ax = abs(x)
        if not ax < _SPLIT_LIMIT or (ax != 0.0 and ax < _TINY):
            return False
    return True


def _round_pair(value: float, err: float) -> tuple[float, float]:
    """Tight float bounds of value + err (err is the exact residual)."""
    if err > 0:
        return value, _up(value)
    if err < 0:
        return _down(value), value
    return value, value


def add_down(a: float, b: float) -> float:
    return _add(a, b)[0]


def add_up(a: float, b: float) -> float:
    return _add(a, b)[1]


def _add(a: float, b: float) -> tuple[float, float]:
    s = a + b
    if math.isinf(s) or math.isnan(s):
        if math.isnan(s):
            return -INF, INF
        if math.isfinite(a) and math.isfinite(b):
            # overflow: the exact sum is finite but beyond the largest float
            return (_down(s), s) if s > 0 else (s, _up(s))
        return s, s
    if not _exact_ok(a, b, s):
        return _down(s), _up(s)
    return _round_pair(*_two_sum(a, b))


def _mul(a: float, b: float) -> tuple[float, float]:
    if a == 0.0 or b == 0.0:
        return 0.0, 0.0
    p = a * b
    if math.isinf(p):
        if math.isfinite(a) and math.isfinite(b):
            return (_down(p), p) if p > 0 else (p, _up(p))
        return p, p
    if p == 0.0 or not _exact_ok(a, b, p):
        # p == 0 here means underflow of a nonzero product
        return _down(p), _up(p)
    return _round_pair(*_two_prod(a, b))


def _div(a: float, b: float) -> tuple[float, float]:
    if a == 0.0:
        return 0.0, 0.0
    q = a / b
    if math.isinf(q) or q == 0.0 or not _exact_ok(a, b, q):
        return _down(q), _up(q)
    p, e = _two_prod(q, b)
    # a - q*b = (a - p) - e; a - p is exact (Sterbenz) since p ~ a.
    rem = (a - p) - e
    if rem == 0.0:
        return q, q
    # sign(a/b - q) = sign(rem) * sign(b)
    if (rem > 0) == (b > 0):
        return q, _up(q)
    return _down(q), q


def _sqrt(x: float) -> tuple[float, float]:
    if x == 0.0:
        return 0.0, 0.0
    s = math.sqrt(x)
    if math.isinf(s) or not _exact_ok(s, x):
        return _down(s), _up(s)
    p, e = _two_prod(s, s)
    rem = (x - p) - e
    if rem > 0:
        return s, _up(s)
    if rem < 0:
        return _down(s), s
    return s, s


def _float_bounds(x: Fraction | int) -> tuple[float, float]:
    """Tightest floats bracketing an exact rational."""
    x = Fraction(x)
    f = float(x)
    fx = Fraction(f)
    if fx == x:
        return f, f
    if fx < x:
        return f, _up(f)
    return _down(f), f


@dataclass(frozen=True, slots=True)
class Interval:
    """Closed interval [lo, hi] of extended reals.

    The empty set is the module-level ``EMPTY`` sentinel (both endpoints NaN);
    a non-empty interval always satisfies lo <= hi.
    """

    lo: float
    hi: float

    def __post_init__(self) -> None:
        lo, hi = float(self.lo), float(self.hi)
        if not (math.isnan(lo) and math.isnan(hi)):
            if math.isnan(lo) or math.isnan(hi) or lo > hi:
                raise ValueError(f"invalid interval [{self.lo}, {self.hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    # construction ---------------------------------------------------------
    @classmethod
    def point(cls, x: float) -> Interval:
        return cls(x, x)

    @classmethod
    def exact(cls, x: Union[Fraction, int, float, str]) -> Interval:
        """Enclosure of an exact rational (floats are taken at face value)."""
        lo, hi = _float_bounds(Fraction(x))
        return cls(lo, hi)

    @classmethod
    def hull(cls, *values: float) -> Interval:
        return cls(min(values), max(values))

    # predicates -----------------------------------------------------------
    @property
    def is_empty(self) -> bool:
        return math.isnan(self.lo)

    @property
    def is_bounded(self) -> bool:
        return not self.is_empty and math.isfinite(self.lo) and math.isfinite(self.hi)

    @property
    def width(self) -> float:
        if self.is_empty:
            return 0.0
        return add_up(self.hi, -self.lo)

    @property
    def mid(self) -> float:
        if math.isinf(self.lo) or math.isinf(self.hi):
            if self.lo == -INF and self.hi == INF:
                return 0.0
            return self.lo if math.isfinite(self.lo) else self.hi
        m = 0.5 * self.lo + 0.5 * self.hi
        return min(max(m, self.lo), self.hi)

    def __contains__(self, x: object) -> bool:
        if self.is_empty:
            return False
        if isinstance(x, Interval):
            return x.is_empty or (self.lo <= x.lo and x.hi <= self.hi)
        return self.lo <= x <= self.hi  # type: ignore[operator]

    def contains_exact(self, x: Fraction) -> bool:
        return not self.is_empty and Fraction(self.lo) <= x <= Fraction(self.hi)

    def intersect(self, other: Interval) -> Interval:
        if self.is_empty or other.is_empty:
            return EMPTY
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return Interval(lo, hi) if lo <= hi else EMPTY

    def split(self) -> tuple[Interval, Interval]:
        m = self.mid
        return Interval(self.lo, m), Interval(m, self.hi)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other: IntervalLike) -> Interval:
        b = as_interval(other)
        if self.is_empty or b.is_empty:
            return EMPTY
        return Interval(_add(self.lo, b.lo)[0], _add(self.hi, b.hi)[1])

    __radd__ = __add__

    def __neg__(self) -> Interval:
        if self.is_empty:
            return EMPTY
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other: IntervalLike) -> Interval:
        return self + (-as_interval(other))

    def __rsub__(self, other: IntervalLike) -> Interval:
        return as_interval(other) + (-self)

    def __mul__(self, other: IntervalLike) -> Interval:
        b = as_interval(other)
        if self.is_empty or b.is_empty:
            return EMPTY
        los, his = [], []
        for x in (self.lo, self.hi):
            for y in (b.lo, b.hi):
                if (x == 0.0 and math.isinf(y)) or (y == 0.0 and math.isinf(x)):
                    # 0 * inf: the endpoint is a limit, contributes 0.
                    los.append(0.0)
                    his.append(0.0)
                    continue
                lo, hi = _mul(x, y)
                los.append(lo)
                his.append(hi)
        return Interval(min(los), max(his))

    __rmul__ = __mul__

    def reciprocal(self) -> Interval:
        if self.is_empty:
            return EMPTY
        lo, hi = self.lo, self.hi
        if lo > 0 or hi < 0:
            return Interval(_div(1.0, hi)[0], _div(1.0, lo)[1])
        if lo == 0.0 and hi == 0.0:
            return EMPTY
        if lo == 0.0:
            return Interval(_div(1.0, hi)[0], INF)
        if hi == 0.0:
            return Interval(-INF, _div(1.0, lo)[1])
        return Interval(-INF, INF)

    def __truediv__(self, other: IntervalLike) -> Interval:
        b = as_interval(other)
        if self.is_empty or b.is_empty:
            return EMPTY
        if b.lo > 0 or b.hi < 0:
            los, his = [], []
            for x in (self.lo, self.hi):
                for y in (b.lo, b.hi):
                    if math.isinf(x) and math.isinf(y):
                        los.append(0.0)
                        his.append(0.0)
                        continue
                    lo, hi = _div(x, y)
                    los.append(lo)
                    his.append(hi)
            return Interval(min(los), max(his))
        return self * b.reciprocal()

    def __rtruediv__(self, other: IntervalLike) -> Interval:
        return as_interval(other) / self

    def __pow__(self, n: int) -> Interval:
        return ipow(self, n)

    def __repr__(self) -> str:
        if self.is_empty:
            return "Interval.EMPTY"
        return f"Interval({self.lo!r}, {self.hi!r})"

    def to_json(self) -> dict[str, str]:
        """Decimal strings that round-trip to the exact endpoint floats."""
        return {
            "lo": repr(self.lo),
            "hi": repr(self.hi),
            "lo_rounding": "toward -inf",
            "hi_rounding": "toward +inf",
        }

    @classmethod
    def from_json(cls, data: dict[str, str]) -> Interval:
        return cls(float(data["lo"]), float(data["hi"]))


EMPTY = object.__new__(Interval)
object.__setattr__(EMPTY, "lo", math.nan)
object.__setattr__(EMPTY, "hi", math.nan)

IntervalLike = Union[Interval, float, int, Fraction]


def as_interval(x: IntervalLike) -> Interval:
    if isinstance(x, Interval):
        return x
    if isinstance(x, float):
        return Interval(x, x)
    return Interval.exact(x)


# elementary functions -------------------------------------------------------

def ipow(a: Interval, n: int) -> Interval:
    """Integer power with exact sign handling (a^0 = [1, 1])."""
    if a.is_empty:
        return EMPTY
    if n < 0:
        return ipow(a, -n).reciprocal()
    if n == 0:
        return Interval(1.0, 1.0)
    if n % 2 == 1 or a.lo >= 0:
        return _pow_monotone(a, n)
    if a.hi <= 0:
        return _pow_monotone(-a, n)
    m = _pow_monotone(Interval(0.0, max(-a.lo, a.hi)), n)
    return Interval(0.0, m.hi)


def _pow_monotone(a: Interval, n: int) -> Interval:
    # odd n, or a >= 0: x -> x^n is increasing
    lo = _pow_point(a.lo, n)[0]
    hi = _pow_point(a.hi, n)[1]
    return Interval(lo, hi)


def _pow_point(x: float, n: int) -> tuple[float, float]:
    result = Interval(1.0, 1.0)
    base = Interval(x, x)
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result.lo, result.hi


def sqrt_i(a: Interval) -> Interval:
    if a.is_empty or a.hi < 0:
        raise DomainError(f"sqrt of negative interval {a!r}")
    lo = _sqrt(max(a.lo, 0.0))[0]
    hi = INF if a.hi == INF else _sqrt(a.hi)[1]
    return Interval(lo, hi)


def exp_i(a: Interval) -> Interval:
    if a.is_empty:
        return EMPTY
    return Interval(_exp_down(a.lo), _exp_up(a.hi))


def _exp_down(x: float) -> float:
    if x == 0.0:
        return 1.0
    if x == -INF:
        return 0.0
    try:
        v = math.exp(x)
    except OverflowError:
        return _down(INF)
    return max(_down(v), 0.0)


def _exp_up(x: float) -> float:
    if x == 0.0:
        return 1.0
    if x == -INF:
        return 0.0
    try:
        v = math.exp(x)
    except OverflowError:
        return INF
    return _up(v)


def ln_i(a: Interval) -> Interval:
    if a.is_empty:
        return EMPTY
    if a.hi <= 0:
        raise DomainError(f"ln of non-positive interval {a!r}")
    lo = -INF if a.lo <= 0 else _ln_down(a.lo)
    return Interval(lo, _ln_up(a.hi))


def _ln_down(x: float) -> float:
    if x == 1.0:
        return 0.0
    if x == INF:
        return INF
    return _down(math.log(x))


def _ln_up(x: float) -> float:
    if x == 1.0:
        return 0.0
    if x == INF:
        return INF
    return _up(math.log(x))


def pow_i(a: Interval, q: Union[Fraction, int]) -> Interval:
    """a**q for an exact rational q on a >= 0.

    Limit conventions at 0: 0**q = 0 for q > 0 and +inf for q < 0.
    Integer exponents use exact-rounding multiplication; other exponents go
    through libm pow with one-ulp widening (exact at 0 and 1).
    """
    q = Fraction(q)
    if a.is_empty:
        return EMPTY
    if q.denominator == 1:
        return ipow(a, int(q))
    if a.hi < 0:
        raise DomainError(f"non-integer power of negative interval {a!r}")
    if a.lo < 0:
        a = Interval(0.0, a.hi)
    if q.denominator == 2 and a.lo == a.hi:
        # exact square roots (e.g. 4**(1/2)) stay exact
        return ipow(sqrt_i(a), q.numerator)
    # x**q is monotone in q, so a non-dyadic q is bracketed by two floats
    exps = sorted(set(_float_bounds(q)))
    if q > 0:
        lo = min(_rpow_down(a.lo, e) for e in exps)
        hi = max(_rpow_up(a.hi, e) for e in exps)
    else:
        lo = min(_rpow_down(a.hi, e) for e in exps)
        hi = max(_rpow_up(a.lo, e) for e in exps)
    return Interval(lo, hi)


def _rpow_down(x: float, q: float) -> float:
    if x == 0.0:
        return 0.0 if q > 0 else INF
    if x == 1.0:
        return 1.0
    if x == INF:
        return INF if q > 0 else 0.0
    return max(_down(math.pow(x, q)), 0.0)


def _rpow_up(x: float, q: float) -> float:
    if x == 0.0:
        return 0.0 if q > 0 else INF
    if x == 1.0:
        return 1.0
    if x == INF:
        return INF if q > 0 else 0.0
    try:
        return _up(math.pow(x, q))
    except OverflowError:
        return INF


class DomainError(ValueError):
    """Argument outside the domain of a function."""


# stored constants -------------------------------------------------------------

# e and e^2, tightest float brackets (checked against mpmath in the tests).
E = Interval(2.718281828459045, 2.7182818284590455)
E_SQUARED = Interval(7.3890560989306495, 7.38905609893065)


# branch and bound ---------------------------------------------------------------

IntervalFunction = Callable[[Interval], Interval]


@dataclass(frozen=True)
class BoundEnclosure:
    """Rigorous enclosure of sup (or inf) of a function over a domain.

    ``converged`` is False when the depth/box budget ran out before the
    enclosure reached the requested tolerance; ``value`` is still valid.
    """

    value: Interval
    argmax_box: Interval
    subdivisions: int
    depth: int
    converged: bool = True

    def to_json(self) -> dict:
        return {
            "value": self.value.to_json(),
            "argmax_box": self.argmax_box.to_json(),
            "subdivisions": self.subdivisions,
            "depth": self.depth,
            "converged": self.converged,
        }


def _tolerance(tol: float, reference: float) -> float:
    return tol * max(1.0, abs(reference))


def certified_sup(
    f: IntervalFunction,
    domain: Interval,
    tol: float = 1e-6,
    max_depth: int = 60,
    max_boxes: int = 200_000,
) -> BoundEnclosure:
    """Enclose ``sup f`` over ``domain`` by best-first branch and bound.

    ``tol`` is relative to max(1, |sup|).  The box with the largest upper
    bound is split at its midpoint (ties: leftmost box first); a box is
    discarded once its upper bound falls below the best point value seen.
    """
    if domain.is_empty:
        raise ValueError("empty domain")

    def upper(box: Interval, parent_hi: float) -> float:
        # Natural extensions are inclusion-isotone; the min guards against
        # rounding noise ever widening a child past its parent.
        return min(f(box).hi, parent_hi)

    def witness(x: float) -> float:
        return f(Interval(x, x)).lo

    best_lo = -INF
    best_x = domain.lo
    for x in (domain.lo, domain.mid, domain.hi):
        w = witness(x)
        if w > best_lo:
            best_lo, best_x = w, x

    root_hi = f(domain).hi
    # heap entries: (-upper, lo, depth, box); (upper, lo) is unique per live box
    heap: list[tuple[float, float, int, Interval]] = [(-root_hi, domain.lo, 0, domain)]
    frozen: list[tuple[float, Interval]] = []
    subdivisions = 0
    deepest = 0
    converged = True

    while heap:
        neg_hi, _, depth, box = heap[0]
        global_hi = max(-neg_hi, max((h for h, _ in frozen), default=-INF))
        if global_hi - best_lo <= _tolerance(tol, best_lo):
            break
        heapq.heappop(heap)
        if depth >= max_depth or subdivisions >= max_boxes or box.width == 0.0:
            frozen.append((-neg_hi, box))
            if subdivisions >= max_boxes:
                converged = False
            continue
        left, right = box.split()
        if left.hi == box.lo or right.lo == box.hi:
            frozen.append((-neg_hi, box))
            continue
        subdivisions += 1
        deepest = max(deepest, depth + 1)
        for child in (left, right):
            w = witness(child.mid)
            if w > best_lo:
                best_lo, best_x = w, child.mid
            hi = upper(child, -neg_hi)
            if hi >= best_lo:
                heapq.heappush(heap, (-hi, child.lo, depth + 1, child))

    candidates = [(neg_hi, lo, box) for neg_hi, lo, _, box in heap] + [(-h, box.lo, box) for h, box in frozen]
    if candidates:
        top = min(candidates, key=lambda c: (c[0], c[1]))
        global_hi, arg_box = -top[0], top[2]
        holding = [c[2] for c in candidates if c[2].lo <= best_x <= c[2].hi]
        if holding:
            arg_box = min(holding, key=lambda b: (b.width, b.lo))
    else:
        global_hi, arg_box = best_lo, Interval(best_x, best_x)
    global_hi = max(global_hi, best_lo)
    if global_hi - best_lo > _tolerance(tol, best_lo):
        converged = False
    return BoundEnclosure(
        value=Interval(best_lo, global_hi),
        argmax_box=arg_box,
        subdivisions=subdivisions,
        depth=deepest,
        converged=converged,
    )


def certified_inf(
    f: IntervalFunction,
    domain: Interval,
    tol: float = 1e-6,
    max_depth: int = 60,
    max_boxes: int = 200_000,
) -> BoundEnclosure:
    """Enclose ``inf f`` over ``domain``; mirror image of :func:`certified_sup`."""
    res = certified_sup(lambda x: -f(x), domain, tol=tol, max_depth=max_depth, max_boxes=max_boxes)
    return BoundEnclosure(
        value=-res.value,
        argmax_box=res.argmax_box,
        subdivisions=res.subdivisions,
        depth=res.depth,
        converged=res.converged,
    )
