"""Certified midpoint-radius arithmetic on top of mpmath bigfloats.

A ``RealBall`` is a pair (mid, rad) of raw mpf values enclosing every real
number in [mid - rad, mid + rad].  Midpoints are rounded to the working
precision passed to each operation; the half-ulp rounding error is absorbed
into the radius, and all radius arithmetic is done at 53 bits with rounding
away from zero, so enclosures are rigorous.

A ``ComplexBall`` is a rectangle: a pair of real balls for the real and
imaginary parts.  Rectangles compose rigorously under field operations and
are what the root-isolation, Gram and orbit-product code build on.
"""

from __future__ import annotations

from fractions import Fraction

from mpmath.libmp import (
    from_int,
    from_rational,
    fzero,
    mpf_abs,
    mpf_add,
    mpf_cmp,
    mpf_div,
    mpf_mul,
    mpf_mul_int,
    mpf_neg,
    mpf_pi,
    mpf_shift,
    mpf_sqrt,
    mpf_sub,
    to_float,
    to_int,
)

__all__ = [
    "PrecisionError",
    "RealBall",
    "ComplexBall",
    "pi_ball",
    "cos_ball",
    "sin_ball",
    "root_of_unity_ball",
    "ball_det",
    "ball_prod",
]

# Radius arithmetic precision; 'u' rounds away from zero so radii only grow.
_RP = 53
_UP = "u"
_DOWN = "d"
_FLOOR = "f"
_CEIL = "c"
_NEAR = "n"


class PrecisionError(ArithmeticError):
    """Raised when an operation cannot be certified at the working precision."""


def _radd(a, b):
    return mpf_add(a, b, _RP, _UP)


def _rmul(a, b):
    return mpf_mul(a, b, _RP, _UP)


def _half_ulp(mid, prec):
    # |mid| * 2^-prec bounds the rounding error of a to-nearest operation.
    if mid == fzero:
        return fzero
    return mpf_shift(mpf_abs(mid), -prec)


class RealBall:
    __slots__ = ("mid", "rad")

    def __init__(self, mid, rad=fzero):
        self.mid = mid
        self.rad = rad

    # ------------------------------------------------------------------ build
    @staticmethod
    def exact_int(n: int) -> "RealBall":
        return RealBall(from_int(n), fzero)

    @staticmethod
    def from_fraction(q, prec: int) -> "RealBall":
        if isinstance(q, int):
            return RealBall.exact_int(q)
        lo = from_rational(q.numerator, q.denominator, prec, _FLOOR)
        hi = from_rational(q.numerator, q.denominator, prec, _CEIL)
        return RealBall.from_endpoints(lo, hi)

    @staticmethod
    def from_endpoints(lo, hi) -> "RealBall":
        mid = mpf_shift(mpf_add(lo, hi, 0, _NEAR), -1)
        rad = _radd(mpf_shift(mpf_sub(hi, lo, _RP, _UP), -1), fzero)
        return RealBall(mid, rad)

    @staticmethod
    def zero() -> "RealBall":
        return RealBall(fzero, fzero)

    # ------------------------------------------------------------- arithmetic
    def add(self, o: "RealBall", prec: int) -> "RealBall":
        mid = mpf_add(self.mid, o.mid, prec, _NEAR)
        rad = _radd(_radd(self.rad, o.rad), _half_ulp(mid, prec))
        return RealBall(mid, rad)

    def sub(self, o: "RealBall", prec: int) -> "RealBall":
        mid = mpf_sub(self.mid, o.mid, prec, _NEAR)
        rad = _radd(_radd(self.rad, o.rad), _half_ulp(mid, prec))
        return RealBall(mid, rad)

    def neg(self) -> "RealBall":
        return RealBall(mpf_neg(self.mid), self.rad)

    def mul(self, o: "RealBall", prec: int) -> "RealBall":
        mid = mpf_mul(self.mid, o.mid, prec, _NEAR)
        rad = _radd(_rmul(mpf_abs(self.mid), o.rad), _rmul(mpf_abs(o.mid), self.rad))
        rad = _radd(rad, _rmul(self.rad, o.rad))
        rad = _radd(rad, _half_ulp(mid, prec))
        return RealBall(mid, rad)

    def mul_int(self, n: int, prec: int) -> "RealBall":
        if n == 0:
            return RealBall.zero()
        mid = mpf_mul_int(self.mid, n, prec, _NEAR)
        an = from_int(abs(n))
        rad = _radd(_rmul(self.rad, an), _half_ulp(mid, prec))
        return RealBall(mid, rad)

    def sqr(self, prec: int) -> "RealBall":
        return self.mul(self, prec)

    def div(self, o: "RealBall", prec: int) -> "RealBall":
        den_lo = mpf_sub(mpf_abs(o.mid), o.rad, _RP, _DOWN)
        if mpf_cmp(den_lo, fzero) <= 0:
            raise PrecisionError("division by a ball containing zero")
        mid = mpf_div(self.mid, o.mid, prec, _NEAR)
        # |a/b - mid| <= (rad_a + |mid|*rad_b)/|b|_lo + roundoff
        num = _radd(self.rad, _rmul(mpf_abs(mid), o.rad))
        rad = mpf_div(num, den_lo, _RP, _UP)
        rad = _radd(rad, _half_ulp(mid, prec))
        return RealBall(mid, rad)

    def sqrt(self, prec: int) -> "RealBall":
        lo = mpf_sub(self.mid, self.rad, _RP, _FLOOR)
        hi = mpf_add(self.mid, self.rad, _RP, _CEIL)
        if mpf_cmp(hi, fzero) < 0:
            raise PrecisionError("sqrt of a negative ball")
        if mpf_cmp(lo, fzero) < 0:
            lo = fzero
        slo = mpf_sqrt(lo, prec, _FLOOR)
        shi = mpf_sqrt(hi, prec, _CEIL)
        return RealBall.from_endpoints(slo, shi)

    def shift(self, k: int) -> "RealBall":
        """Exact multiplication by 2**k."""
        return RealBall(mpf_shift(self.mid, k), mpf_shift(self.rad, k))

    def abs_enclosure(self) -> "RealBall":
        lo = mpf_sub(mpf_abs(self.mid), self.rad, _RP, _FLOOR)
        hi = mpf_add(mpf_abs(self.mid), self.rad, _RP, _CEIL)
        if mpf_cmp(lo, fzero) < 0:
            lo = fzero
        return RealBall.from_endpoints(lo, hi)

    def pow_int(self, k: int, prec: int) -> "RealBall":
        if k < 0:
            raise ValueError("negative exponent")
        out = RealBall.exact_int(1)
        base = self
        while k:
            if k & 1:
                out = out.mul(base, prec)
            k >>= 1
            if k:
                base = base.mul(base, prec)
        return out

    # ------------------------------------------------------------- endpoints
    def lower(self):
        return mpf_sub(self.mid, self.rad, 0, _FLOOR)

    def upper(self):
        return mpf_add(self.mid, self.rad, 0, _CEIL)

    # ------------------------------------------------------------ predicates
    def lt(self, o: "RealBall") -> bool:
        """Certified self < o."""
        return mpf_cmp(self.upper(), o.lower()) < 0

    def gt(self, o: "RealBall") -> bool:
        return o.lt(self)

    def le(self, o: "RealBall") -> bool:
        """Certified self <= o."""
        return mpf_cmp(self.upper(), o.lower()) <= 0

    def disjoint(self, o: "RealBall") -> bool:
        return self.lt(o) or o.lt(self)

    def contains_zero(self) -> bool:
        return mpf_cmp(self.lower(), fzero) <= 0 and mpf_cmp(self.upper(), fzero) >= 0

    def excludes_zero(self) -> bool:
        return mpf_cmp(self.lower(), fzero) > 0 or mpf_cmp(self.upper(), fzero) < 0

    def contains_int(self, n: int) -> bool:
        x = from_int(n)
        return mpf_cmp(self.lower(), x) <= 0 and mpf_cmp(x, self.upper()) <= 0

    def unique_integer(self):
        """The single integer contained in the ball, or None."""
        lo = to_int(self.lower(), _CEIL)
        hi = to_int(self.upper(), _FLOOR)
        if lo == hi:
            return lo
        return None

    # --------------------------------------------------------------- numeric
    def mid_float(self) -> float:
        return to_float(self.mid)

    def rad_float(self) -> float:
        return to_float(self.rad, rnd=_UP)

    def rel_width_below(self, tol: Fraction) -> bool:
        """Certified rad/|mid| < tol (requires ball excluding zero)."""
        if not self.excludes_zero():
            return False
        bound = RealBall.from_fraction(tol, _RP).mul(self.abs_enclosure(), _RP)
        return mpf_cmp(mpf_add(self.rad, self.rad, _RP, _UP), bound.lower()) < 0

    def __repr__(self):
        return f"RealBall({self.mid_float()!r} +/- {self.rad_float():.3e})"


class ComplexBall:
    __slots__ = ("re", "im")

    def __init__(self, re: RealBall, im: RealBall):
        self.re = re
        self.im = im

    @staticmethod
    def exact_int(n: int) -> "ComplexBall":
        return ComplexBall(RealBall.exact_int(n), RealBall.zero())

    @staticmethod
    def from_real(b: RealBall) -> "ComplexBall":
        return ComplexBall(b, RealBall.zero())

    def add(self, o: "ComplexBall", prec: int) -> "ComplexBall":
        return ComplexBall(self.re.add(o.re, prec), self.im.add(o.im, prec))

    def sub(self, o: "ComplexBall", prec: int) -> "ComplexBall":
        return ComplexBall(self.re.sub(o.re, prec), self.im.sub(o.im, prec))

    def neg(self) -> "ComplexBall":
        return ComplexBall(self.re.neg(), self.im.neg())

    def conj(self) -> "ComplexBall":
        return ComplexBall(self.re, self.im.neg())

    def mul(self, o: "ComplexBall", prec: int) -> "ComplexBall":
        re = self.re.mul(o.re, prec).sub(self.im.mul(o.im, prec), prec)
        im = self.re.mul(o.im, prec).add(self.im.mul(o.re, prec), prec)
        return ComplexBall(re, im)

    def mul_real(self, r: RealBall, prec: int) -> "ComplexBall":
        return ComplexBall(self.re.mul(r, prec), self.im.mul(r, prec))

    def mul_int(self, n: int, prec: int) -> "ComplexBall":
        return ComplexBall(self.re.mul_int(n, prec), self.im.mul_int(n, prec))

    def div(self, o: "ComplexBall", prec: int) -> "ComplexBall":
        den = o.abs_sq(prec)
        num = self.mul(o.conj(), prec)
        return ComplexBall(num.re.div(den, prec), num.im.div(den, prec))

    def abs_sq(self, prec: int) -> RealBall:
        return self.re.sqr(prec).add(self.im.sqr(prec), prec)

    def pow_int(self, k: int, prec: int) -> "ComplexBall":
        out = ComplexBall.exact_int(1)
        base = self
        while k:
            if k & 1:
                out = out.mul(base, prec)
            k >>= 1
            if k:
                base = base.mul(base, prec)
        return out

    def overlaps(self, o: "ComplexBall") -> bool:
        return not (self.re.disjoint(o.re) or self.im.disjoint(o.im))

    def contains_zero(self) -> bool:
        return self.re.contains_zero() and self.im.contains_zero()

    def excludes_zero(self) -> bool:
        return self.re.excludes_zero() or self.im.excludes_zero()

    def mid_complex(self) -> complex:
        return complex(self.re.mid_float(), self.im.mid_float())

    def rad_upper(self) -> float:
        # Half-diagonal of the rectangle, a disk radius around the midpoint.
        import math

        return math.hypot(self.re.rad_float(), self.im.rad_float()) * (1 + 1e-12)

    def __repr__(self):
        return f"ComplexBall({self.mid_complex()!r} +/- {self.rad_upper():.3e})"


def pi_ball(prec: int) -> RealBall:
    return RealBall.from_endpoints(mpf_pi(prec, _FLOOR), mpf_pi(prec, _CEIL))


def _lipschitz_trig(fn_name: str, x: RealBall, prec: int) -> RealBall:
    # |sin'|, |cos'| <= 1, so the midpoint image +- (rad + ulp slack) encloses.
    import mpmath

    with mpmath.workprec(prec + 10):
        mid = getattr(mpmath, fn_name)(mpmath.mpf(x.mid))
    m = mid._mpf_
    slack = _radd(x.rad, mpf_shift(from_int(1), -(prec + 4)))
    return RealBall(m, slack)


def cos_ball(x: RealBall, prec: int) -> RealBall:
    return _lipschitz_trig("cos", x, prec)


def sin_ball(x: RealBall, prec: int) -> RealBall:
    return _lipschitz_trig("sin", x, prec)


def root_of_unity_ball(k: int, n: int, prec: int) -> ComplexBall:
    """Certified enclosure of exp(2 pi i k / n)."""
    k = k % n
    angle = pi_ball(prec).mul(RealBall.from_fraction(Fraction(2 * k, n), prec), prec)
    return ComplexBall(cos_ball(angle, prec), sin_ball(angle, prec))


def ball_prod(balls, prec: int) -> ComplexBall:
    out = ComplexBall.exact_int(1)
    for b in balls:
        out = out.mul(b, prec)
    return out


def ball_det(rows, prec: int) -> ComplexBall:
    """Determinant of a square ComplexBall matrix by elimination.

    Pivots by largest midpoint modulus; raises PrecisionError when a pivot
    ball cannot be certified nonzero (caller escalates or falls back to
    expansion for structurally-zero determinants).
    """
    n = len(rows)
    if n == 0:
        return ComplexBall.exact_int(1)
    if n == 1:
        return rows[0][0]
    if n == 2:
        a, b = rows[0]
        c, d = rows[1]
        return a.mul(d, prec).sub(b.mul(c, prec), prec)
    m = [list(r) for r in rows]
    det = ComplexBall.exact_int(1)
    sign = 1
    for col in range(n):
        piv, best = None, -1.0
        for r in range(col, n):
            z = m[r][col].mid_complex()
            mag = z.real * z.real + z.imag * z.imag
            if mag > best:
                best, piv = mag, r
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        pivot = m[col][col]
        if not pivot.excludes_zero():
            raise PrecisionError("pivot ball contains zero")
        det = det.mul(pivot, prec)
        for r in range(col + 1, n):
            factor = m[r][col].div(pivot, prec)
            for c in range(col + 1, n):
                m[r][c] = m[r][c].sub(factor.mul(m[col][c], prec), prec)
    if sign < 0:
        det = det.neg()
    return det


def ball_det_expansion(rows, prec: int) -> ComplexBall:
    """Cofactor-expansion determinant; no pivoting, tolerates zero balls."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    out = ComplexBall.exact_int(0)
    for j in range(n):
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        term = rows[0][j].mul(ball_det_expansion(minor, prec), prec)
        if j % 2:
            term = term.neg()
        out = out.add(term, prec)
    return out
