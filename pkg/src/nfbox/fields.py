"""Number field construction and certified complex embeddings.

A field is built from a monic integer polynomial.  Irreducibility is
established by sufficient tests only (rational-root exclusion for degree
<= 3, Eisenstein after an integer shift, irreducibility mod a prime <= 101,
or exact identity with a cyclotomic polynomial); fields that pass no test
carry an ``unverified`` flag.  The maximal order is certified by the
Dedekind criterion at every prime whose square divides disc(f); otherwise a
user-supplied basis is required and is validated exactly (ring closure,
containment of Z[theta], trace-form discriminant).

Embeddings are returned as certified rectangles: float roots are polished
by Newton iteration and validated with the disk bound d*|f(z)/f'(z)|, then
pairwise disjointness pins exactly one root per rectangle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
from mpmath.libmp import from_man_exp, fzero, mpf_cmp, mpf_div, mpf_mul_int

from . import modp
from .balls import ComplexBall, PrecisionError, RealBall
from .exact import (
    IntMatrix,
    IntPolynomial,
    bareiss_det,
    discriminant,
    rational_matrix_det,
    rational_matrix_inverse,
    rational_solve,
)

__all__ = [
    "FieldError",
    "ReducibleError",
    "NonMonogenicError",
    "NumberField",
    "EmbeddingSet",
    "build_field",
    "cyclotomic_polynomial",
    "cyclotomic_field",
    "quadratic_field",
    "pure_cubic_field",
    "is_squarefree",
    "embed",
    "evaluate_element",
]

DEFAULT_PRECISION = 128
PRECISION_CEILING = 8192


class FieldError(ValueError):
    pass


class ReducibleError(FieldError):
    pass


class NonMonogenicError(FieldError):
    def __init__(self, p: int):
        super().__init__(f"non-monogenic at {p}: supply an integral basis")
        self.p = p


# --------------------------------------------------------------------------
# small number theory helpers


def prime_factors(n: int) -> list:
    n = abs(n)
    out = []
    for p in itertools.chain([2], range(3, 10**6, 2)):
        if p * p > n:
            break
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_upto(n: int) -> list:
    sieve = bytearray([1]) * (n + 1)
    sieve[:2] = b"\x00\x00"
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = b"\x00" * len(sieve[p * p :: p])
    return [i for i, v in enumerate(sieve) if v]


# --------------------------------------------------------------------------
# irreducibility (sufficient tests only)


def _eisenstein_at(f: IntPolynomial, p: int) -> bool:
    if f.lead % p == 0:
        return False
    if any(c % p for c in f.coeffs[:-1]):
        return False
    return f.coeffs[0] % (p * p) != 0


def irreducibility_certificate(f: IntPolynomial) -> Optional[str]:
    """A sufficient irreducibility witness, or None (meaning: unverified)."""
    d = f.degree
    if d == 1:
        return "linear"
    if discriminant(f) == 0:
        raise ReducibleError("repeated factor: discriminant is zero")
    if d <= 3:
        # no rational root => irreducible for degrees 2 and 3 (f is monic)
        a0 = f.coeffs[0]
        if a0 == 0:
            raise ReducibleError("root at 0")
        candidates = set()
        r = 1
        while r * r <= abs(a0):
            if a0 % r == 0:
                candidates.update({r, -r, abs(a0) // r, -(abs(a0) // r)})
            r += 1
        if any(f.eval_int(c) == 0 for c in candidates):
            raise ReducibleError("rational root found")
        return "no-rational-root"
    for shift in range(-10, 11):
        g = f.shift_argument(shift) if shift else f
        for p in prime_factors(g.coeffs[0]) if g.coeffs[0] else []:
            if _eisenstein_at(g, p):
                return f"eisenstein(p={p}, shift={shift})"
    for p in primes_upto(101):
        if f.lead % p == 0 or f.coeffs[0] % p == 0:
            continue
        if modp.irreducible_mod_p(f, p):
            return f"irreducible-mod-{p}"
    return None


# --------------------------------------------------------------------------
# cyclotomic polynomials


def _poly_divexact(f: IntPolynomial, g: IntPolynomial) -> IntPolynomial:
    """Exact division f / g for integer polynomials with g monic-led."""
    fc = list(f.coeffs)
    gc = g.coeffs
    dg = g.degree
    out = [0] * (len(fc) - dg)
    for i in reversed(range(len(out))):
        q, r = divmod(fc[i + dg], gc[-1])
        if r:
            raise ArithmeticError("inexact polynomial division")
        out[i] = q
        for j, b in enumerate(gc):
            fc[i + j] -= q * b
    if any(fc):
        raise ArithmeticError("inexact polynomial division")
    return IntPolynomial(out)


def cyclotomic_polynomial(n: int) -> IntPolynomial:
    f = IntPolynomial([-1] + [0] * (n - 1) + [1])
    for d in range(1, n):
        if n % d == 0:
            f = _poly_divexact(f, cyclotomic_polynomial(d))
    return f


# --------------------------------------------------------------------------
# Dedekind criterion


def dedekind_maximal_at(f: IntPolynomial, p: int) -> bool:
    """True iff p does not divide [o : Z[theta]] (Dedekind's criterion)."""
    _, factors = modp.factor_mod_p(f, p)
    g_star = IntPolynomial([1])
    h_star = IntPolynomial([1])
    for gi, e in factors:
        g_star = g_star.mul(gi)
        for _ in range(e - 1):
            h_star = h_star.mul(gi)
    g_star = modp.reduce_mod_p(g_star, p)
    h_star = modp.reduce_mod_p(h_star, p)
    gh = g_star.mul(h_star)
    diff = gh.add(f.scale(-1))
    t_coeffs = []
    for c in diff.coeffs:
        q, r = divmod(c, p)
        if r:
            raise ArithmeticError("Dedekind: g*h - f not divisible by p")
        t_coeffs.append(q)
    t_poly = IntPolynomial(t_coeffs)
    u = modp.gcd_mod_p(t_poly, g_star, p)
    u = modp.gcd_mod_p(u, h_star, p)
    return u.degree == 0


# --------------------------------------------------------------------------
# the field object


class NumberField:
    """Immutable number field data: polynomial, integral basis, discriminant."""

    def __init__(
        self,
        poly: IntPolynomial,
        basis: Sequence[Sequence[Fraction]],
        disc: int,
        index: int,
        irreducibility: Optional[str],
        label: Optional[str] = None,
        cyclotomic_n: Optional[int] = None,
    ):
        self.poly = poly
        self.degree = poly.degree
        self.basis = tuple(tuple(Fraction(x) for x in row) for row in basis)
        self.disc = disc
        self.index = index
        self.irreducibility = irreducibility
        self.unverified = irreducibility is None
        self.label = label or f"deg{self.degree}-poly{list(poly.coeffs)}"
        self.cyclotomic_n = cyclotomic_n
        d = self.degree
        self._basis_t_inv = rational_matrix_inverse(
            [[self.basis[i][k] for i in range(d)] for k in range(d)]
        )
        self._power_sums = self._newton_power_sums(2 * d - 1)
        self._basis_traces = tuple(
            sum((row[k] * self._power_sums[k] for k in range(d)), Fraction(0))
            for row in self.basis
        )
        self._mult_table = self._build_mult_table()
        self._embeddings_cache: dict = {}
        self._conj_matrix = None  # set by constructors for CM fields
        self._prime_cache: dict = {}
        self._prime_overrides: dict = {}

    # -------------------------------------------------------------- algebra
    def _newton_power_sums(self, upto: int) -> list:
        d = self.degree
        a = self.poly.coeffs  # ascending, a[d] == 1
        p = [Fraction(d)]
        for k in range(1, upto + 1):
            s = Fraction(0)
            for i in range(1, min(k - 1, d) + 1):
                s += a[d - i] * p[k - i]
            if k <= d:
                s += k * a[d - k]
            p.append(-s)
        return p

    def theta_poly(self, coords: Sequence) -> list:
        """Element as polynomial coefficients in theta (ascending, length d)."""
        d = self.degree
        out = [Fraction(0)] * d
        for i, c in enumerate(coords):
            if c:
                fc = Fraction(c)
                for k in range(d):
                    out[k] += fc * self.basis[i][k]
        return out

    def coords_from_theta(self, poly_coeffs: Sequence) -> list:
        d = self.degree
        padded = [Fraction(poly_coeffs[k]) if k < len(poly_coeffs) else Fraction(0) for k in range(d)]
        return [
            sum((self._basis_t_inv[i][k] * padded[k] for k in range(d)), Fraction(0))
            for i in range(d)
        ]

    def _reduce_theta_product(self, coeffs: list) -> list:
        """Reduce a theta-polynomial (degree may exceed d-1) mod the defining poly."""
        d = self.degree
        fc = self.poly.coeffs
        out = [Fraction(c) for c in coeffs]
        for k in reversed(range(d, len(out))):
            c = out[k]
            if c:
                for j in range(d):
                    out[k - d + j] -= c * fc[j]
                out[k] = Fraction(0)
        return out[:d]

    def _build_mult_table(self):
        d = self.degree
        table = [[None] * d for _ in range(d)]
        for i in range(d):
            for j in range(i, d):
                prod = [Fraction(0)] * (2 * d - 1)
                bi, bj = self.basis[i], self.basis[j]
                for a in range(d):
                    if bi[a]:
                        for b in range(d):
                            if bj[b]:
                                prod[a + b] += bi[a] * bj[b]
                coords = self.coords_from_theta(self._reduce_theta_product(prod))
                if any(c.denominator != 1 for c in coords):
                    raise FieldError("basis is not closed under multiplication")
                entry = tuple(int(c) for c in coords)
                table[i][j] = entry
                table[j][i] = entry
        return tuple(tuple(row) for row in table)

    def mul_coords(self, x: Sequence, y: Sequence) -> tuple:
        d = self.degree
        out = [Fraction(0)] * d
        for i in range(d):
            xi = x[i]
            if xi:
                for j in range(d):
                    yj = y[j]
                    if yj:
                        t = self._mult_table[i][j]
                        f = Fraction(xi) * Fraction(yj)
                        for k in range(d):
                            if t[k]:
                                out[k] += f * t[k]
        if all(c.denominator == 1 for c in out):
            return tuple(int(c) for c in out)
        return tuple(out)

    def mult_matrix(self, x: Sequence) -> list:
        """Matrix of multiplication by x on the integral basis (columns b_j -> x*b_j)."""
        d = self.degree
        cols = []
        for j in range(d):
            ej = [0] * d
            ej[j] = 1
            cols.append(self.mul_coords(x, ej))
        return [[cols[j][i] for j in range(d)] for i in range(d)]

    def norm(self, coords: Sequence):
        m = self.mult_matrix(coords)
        if all(isinstance(v, int) for row in m for v in row):
            return bareiss_det(IntMatrix(m))
        return rational_matrix_det([[Fraction(v) for v in row] for row in m])

    def trace(self, coords: Sequence):
        return sum((Fraction(c) * t for c, t in zip(coords, self._basis_traces)), Fraction(0))

    def inverse(self, coords: Sequence) -> tuple:
        d = self.degree
        m = [[Fraction(v) for v in row] for row in self.mult_matrix(coords)]
        one = [Fraction(int(i == 0)) for i in range(d)]
        sol = rational_solve(m, one)
        if sol is None:
            raise ZeroDivisionError("element is zero")
        return tuple(sol)

    def rational_value(self, coords: Sequence) -> Optional[Fraction]:
        """The element as a rational number, when it is one."""
        if all(Fraction(c) == 0 for c in coords[1:]):
            return Fraction(coords[0])
        return None

    def conj_automorphism(self):
        """Coordinate matrix of complex conjugation for CM fields, else None."""
        return self._conj_matrix

    def apply_automorphism(self, matrix, coords: Sequence) -> tuple:
        d = self.degree
        out = [Fraction(0)] * d
        for j, c in enumerate(coords):
            if c:
                fc = Fraction(c)
                for i in range(d):
                    out[i] += fc * matrix[i][j]
        if all(c.denominator == 1 for c in out):
            return tuple(int(c) for c in out)
        return tuple(out)

    def __repr__(self):
        return f"NumberField({self.label}, disc={self.disc})"


def _trace_form_disc(field: NumberField) -> Fraction:
    d = field.degree
    gram = [[Fraction(0)] * d for _ in range(d)]
    for i in range(d):
        for j in range(i, d):
            prod = [Fraction(0)] * (2 * d - 1)
            bi, bj = field.basis[i], field.basis[j]
            for a in range(d):
                if bi[a]:
                    for b in range(d):
                        if bj[b]:
                            prod[a + b] += bi[a] * bj[b]
            tr = sum((prod[k] * field._power_sums[k] for k in range(len(prod))), Fraction(0))
            gram[i][j] = gram[j][i] = tr
    return rational_matrix_det(gram)


def build_field(
    f: IntPolynomial,
    basis_override: Optional[Sequence[Sequence[Fraction]]] = None,
    label: Optional[str] = None,
    cyclotomic_n: Optional[int] = None,
) -> NumberField:
    if not f.is_monic():
        raise FieldError("defining polynomial must be monic")
    if f.degree < 2:
        raise FieldError("degree must be at least 2")
    cert = irreducibility_certificate(f)
    if cyclotomic_n is not None:
        if f != cyclotomic_polynomial(cyclotomic_n):
            raise FieldError(f"polynomial is not the cyclotomic polynomial of order {cyclotomic_n}")
        cert = cert or f"cyclotomic({cyclotomic_n})"
    disc_f = discriminant(f)
    if disc_f == 0:
        raise ReducibleError("repeated factor: discriminant is zero")
    d = f.degree

    if basis_override is None:
        for p in prime_factors(disc_f):
            if disc_f % (p * p) == 0 and not dedekind_maximal_at(f, p):
                raise NonMonogenicError(p)
        basis = [[Fraction(int(i == k)) for k in range(d)] for i in range(d)]
        field = NumberField(f, basis, disc_f, 1, cert, label, cyclotomic_n)
    else:
        basis = [[Fraction(x) for x in row] for row in basis_override]
        if len(basis) != d or any(len(r) != d for r in basis):
            raise FieldError("basis override must be a d x d matrix")
        if basis[0] != [Fraction(int(k == 0)) for k in range(d)]:
            raise FieldError("first basis element must be 1")
        det = rational_matrix_det(basis)
        if det == 0:
            raise FieldError("basis override is singular")
        index_fr = 1 / abs(det)
        if index_fr.denominator != 1:
            raise FieldError("basis override does not contain Z[theta] with integer index")
        index = int(index_fr)
        inv = rational_matrix_inverse([[basis[i][k] for i in range(d)] for k in range(d)])
        for k in range(d):
            if any(inv[i][k].denominator != 1 for i in range(d)):
                raise FieldError("basis override does not contain Z[theta]")
        if disc_f % (index * index):
            raise FieldError("disc(f) is not index^2 times an integer")
        field = NumberField(f, basis, disc_f // (index * index), index, cert, label, cyclotomic_n)

    tf = _trace_form_disc(field)
    if tf != field.disc:
        raise FieldError(f"trace-form discriminant {tf} != disc(f)/index^2 = {field.disc}")

    # complex-conjugation automorphism, where cheaply available
    if cyclotomic_n is not None:
        field._conj_matrix = _power_automorphism_matrix(field, cyclotomic_n - 1)
    elif d == 2 and field.disc < 0:
        a1 = f.coeffs[1]
        conj_theta = field.coords_from_theta([Fraction(-a1), Fraction(-1)])
        field._conj_matrix = _automorphism_matrix_from_theta_image(field, conj_theta)
    return field


def _power_automorphism_matrix(field: NumberField, k: int):
    # theta |-> theta^k mod f, extended to the whole basis
    d = field.degree
    power = [Fraction(1)] + [Fraction(0)] * (d - 1)
    for _ in range(k):
        power = field._reduce_theta_product([Fraction(0)] + power)
    return _automorphism_matrix_from_theta_image(field, field.coords_from_theta(power))


def _automorphism_matrix_from_theta_image(field: NumberField, image_coords):
    """Matrix (columns = images of basis elements) of theta |-> image."""
    d = field.degree
    img_theta_poly = field.theta_poly(image_coords)
    # powers of the image in theta-representation
    powers = [[Fraction(1)] + [Fraction(0)] * (d - 1)]
    for _ in range(1, d):
        prev = powers[-1]
        prod = [Fraction(0)] * (2 * d - 1)
        for a in range(d):
            if prev[a]:
                for b in range(d):
                    if img_theta_poly[b]:
                        prod[a + b] += prev[a] * img_theta_poly[b]
        powers.append(field._reduce_theta_product(prod))
    cols = []
    for i in range(d):
        acc = [Fraction(0)] * d
        for k in range(d):
            if field.basis[i][k]:
                for t in range(d):
                    acc[t] += field.basis[i][k] * powers[k][t]
        cols.append(field.coords_from_theta(acc))
    return [[cols[j][i] for j in range(d)] for i in range(d)]


def cyclotomic_field(n: int, label: Optional[str] = None) -> NumberField:
    return build_field(cyclotomic_polynomial(n), label=label or f"Q(zeta{n})", cyclotomic_n=n)


def is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    for p in prime_factors(n):
        if n % (p * p) == 0:
            return False
    return True


def quadratic_field(m: int, label: Optional[str] = None) -> NumberField:
    """Q(sqrt m) for squarefree m, with the (1 + theta)/2 basis when m = 1 mod 4."""
    if m in (0, 1) or not is_squarefree(m):
        raise FieldError("m must be squarefree and not 0 or 1")
    f = IntPolynomial([-m, 0, 1])
    label = label or f"Q(sqrt({m}))"
    if m % 4 == 1:
        basis = [[1, 0], [Fraction(1, 2), Fraction(1, 2)]]
        return build_field(f, basis_override=basis, label=label)
    return build_field(f, label=label)


def pure_cubic_field(m: int, label: Optional[str] = None) -> NumberField:
    """Q(m^(1/3)) for squarefree m; finds the index-3 basis when Z[theta] is
    not maximal (m = +-1 mod 9), by validated search over (theta^2+a*theta+b)/3."""
    if not is_squarefree(m) or m in (0, 1, -1):
        raise FieldError("m must be squarefree with |m| > 1")
    f = IntPolynomial([-m, 0, 0, 1])
    label = label or f"Q(cbrt({m}))"
    try:
        return build_field(f, label=label)
    except NonMonogenicError:
        pass
    for a in range(3):
        for b in range(3):
            basis = [
                [1, 0, 0],
                [0, 1, 0],
                [Fraction(b, 3), Fraction(a, 3), Fraction(1, 3)],
            ]
            try:
                return build_field(f, basis_override=basis, label=label)
            except FieldError:
                continue
    raise NonMonogenicError(3)


# --------------------------------------------------------------------------
# certified embeddings


@dataclass(frozen=True)
class EmbeddingSet:
    field: NumberField
    precision: int
    work_prec: int
    enclosures: tuple  # ComplexBall per embedding, canonical (Re, Im) order
    conj: tuple  # involution on indices
    signature: tuple  # (r1, r2)
    blocks: tuple  # ('r', i) and ('c', i, j) with Im_i < 0 < Im_j
    basis_balls: tuple  # [sigma][basis element] -> ComplexBall

    def real_indices(self):
        return [i for i, c in enumerate(self.conj) if c == i]


class _Unresolved(Exception):
    pass


def _point_ball(z) -> ComplexBall:
    if isinstance(z, mpmath.mpc):
        return ComplexBall(RealBall(z.real._mpf_, fzero), RealBall(z.imag._mpf_, fzero))
    return ComplexBall(RealBall(z._mpf_, fzero), RealBall(fzero, fzero))


def _horner_ball(coeffs, z: ComplexBall, prec: int) -> ComplexBall:
    out = ComplexBall.exact_int(0)
    for c in reversed(coeffs):
        out = out.mul(z, prec)
        if isinstance(c, int):
            out = out.add(ComplexBall.exact_int(c), prec)
        else:
            out = out.add(
                ComplexBall.from_real(RealBall.from_fraction(Fraction(c), prec)), prec
            )
    return out


def _certify_root(f: IntPolynomial, fprime: IntPolynomial, z, prec: int):
    """A rectangle certified to contain a root of f near the point z.

    Uses the disk bound min_i |z - r_i| <= d*|f(z)/f'(z)| for monic f.
    Returns (rectangle, radius) with the radius as a raw mpf.
    """
    zb = _point_ball(z)
    fv = _horner_ball(f.coeffs, zb, prec)
    dv = _horner_ball(fprime.coeffs, zb, prec)
    fv_hi = fv.abs_sq(prec).sqrt(prec).upper()
    dv_lo = dv.abs_sq(prec).sqrt(prec).lower()
    if mpf_cmp(dv_lo, fzero) <= 0:
        raise PrecisionError("derivative not certified nonzero at approximate root")
    r = mpf_mul_int(mpf_div(fv_hi, dv_lo, 53, "u"), f.degree, 53, "u")
    return ComplexBall(RealBall(zb.re.mid, r), RealBall(zb.im.mid, r)), r


def _newton_polish(f, fprime, z, steps, prec):
    with mpmath.workprec(prec):
        fc = [mpmath.mpf(c) for c in reversed(f.coeffs)]
        dc = [mpmath.mpf(c) for c in reversed(fprime.coeffs)]
        z = mpmath.mpc(z)
        for _ in range(steps):
            fv = mpmath.polyval(fc, z)
            dv = mpmath.polyval(dc, z)
            if dv == 0:
                break
            z = z - fv / dv
        return z


def _canonical_order(rects, conj):
    """Sort indices by (Re, Im); raises _Unresolved if not certified."""

    def cmp(i, j):
        if i == j:
            return 0
        if conj[i] == j:
            # exactly equal real parts; order by imaginary part
            if rects[i].im.lt(rects[j].im):
                return -1
            if rects[j].im.lt(rects[i].im):
                return 1
            raise _Unresolved
        if rects[i].re.lt(rects[j].re):
            return -1
        if rects[j].re.lt(rects[i].re):
            return 1
        raise _Unresolved

    import functools

    return sorted(range(len(rects)), key=functools.cmp_to_key(cmp))


def embed(field: NumberField, precision: int = DEFAULT_PRECISION, seed_roots=None) -> EmbeddingSet:
    """Certified enclosures of all complex embeddings, radius <= 2^(-precision/2).

    seed_roots (optional) are approximate roots to polish instead of running
    the simultaneous float solver; certification is identical either way.
    """
    if precision < 64:
        raise ValueError("precision must be at least 64")
    cached = field._embeddings_cache.get(precision)
    if cached is not None:
        return cached
    f = field.poly
    fprime = f.derivative()
    d = field.degree
    target = from_man_exp(1, -(precision // 2))
    work = max(2 * precision, 192)
    last_error = None
    while work <= PRECISION_CEILING * 4:
        try:
            emb = _embed_at(field, f, fprime, d, target, precision, work, seed_roots)
            field._embeddings_cache[precision] = emb
            return emb
        except (_Unresolved, PrecisionError) as e:
            last_error = e
            work *= 2
    raise PrecisionError(f"embedding certification failed below ceiling: {last_error}")


def _embed_at(field, f, fprime, d, target, precision, work, seed_roots=None):
    if seed_roots is not None and len(seed_roots) == d:
        roots = list(seed_roots)
    else:
        with mpmath.workprec(work):
            coeffs = [mpmath.mpf(c) for c in reversed(f.coeffs)]
            roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=work // 2)
    roots = [_newton_polish(f, fprime, z, max(4, work.bit_length()), 2 * work) for z in roots]
    rects = []
    for z in roots:
        rect, rad = _certify_root(f, fprime, z, work)
        if mpf_cmp(rad, target) > 0:
            raise PrecisionError("enclosure radius above target")
        rects.append(rect)
    for i in range(d):
        for j in range(i + 1, d):
            if rects[i].overlaps(rects[j]):
                raise _Unresolved
    # conjugation pairing via certified matching
    conj = [None] * d
    for i in range(d):
        cands = [j for j in range(d) if rects[i].conj().overlaps(rects[j])]
        if len(cands) != 1:
            raise _Unresolved
        conj[i] = cands[0]
    if any(conj[conj[i]] != i for i in range(d)):
        raise _Unresolved
    # exact realness / exact mirror symmetry
    fixed = []
    for i in range(d):
        if conj[i] == i:
            fixed.append(ComplexBall(rects[i].re, RealBall.zero()))
        elif conj[i] > i:
            fixed.append(rects[i])
        else:
            fixed.append(rects[conj[i]].conj())
    rects = fixed
    for i in range(d):
        for j in range(i + 1, d):
            if rects[i].overlaps(rects[j]):
                raise _Unresolved
    order = _canonical_order(rects, conj)
    inv = {old: new for new, old in enumerate(order)}
    rects = [rects[i] for i in order]
    conj = tuple(inv[conj[i]] for i in order)
    r1 = sum(1 for i in range(d) if conj[i] == i)
    r2 = (d - r1) // 2
    blocks = []
    seen = set()
    for i in range(d):
        if i in seen:
            continue
        if conj[i] == i:
            blocks.append(("r", i))
            seen.add(i)
        else:
            j = conj[i]
            lo, hi = (i, j) if rects[i].im.mid_float() < rects[j].im.mid_float() else (j, i)
            blocks.append(("c", lo, hi))
            seen.update((i, j))
    basis_balls = _basis_balls(field, rects, conj, work)
    return EmbeddingSet(
        field=field,
        precision=precision,
        work_prec=work,
        enclosures=tuple(rects),
        conj=conj,
        signature=(r1, r2),
        blocks=tuple(blocks),
        basis_balls=basis_balls,
    )


def _basis_balls(field, rects, conj, prec):
    d = field.degree
    rows = []
    for s in range(d):
        if conj[s] < s:
            rows.append(tuple(b.conj() for b in rows[conj[s]]))
            continue
        row = []
        for i in range(d):
            row.append(_horner_ball(field.basis[i], rects[s], prec))
        rows.append(tuple(row))
    return tuple(rows)


def evaluate_element(field: NumberField, coords: Sequence, emb: EmbeddingSet, prec: Optional[int] = None):
    """Certified enclosures (sigma(x)) for x given in integral-basis coordinates."""
    prec = prec or emb.work_prec
    d = field.degree
    out = []
    for s in range(d):
        if emb.conj[s] < s:
            out.append(out[emb.conj[s]].conj())
            continue
        acc = ComplexBall.exact_int(0)
        for j, c in enumerate(coords):
            if c:
                if isinstance(c, int):
                    acc = acc.add(emb.basis_balls[s][j].mul_int(c, prec), prec)
                else:
                    cb = RealBall.from_fraction(Fraction(c), prec)
                    acc = acc.add(emb.basis_balls[s][j].mul_real(cb, prec), prec)
        out.append(acc)
    return out
