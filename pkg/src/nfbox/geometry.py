"""Geometry of embedded ideal lattices: Gram matrices under the standard
Hermitian metric on C^Sigma, exact box volumes, certified box point counts,
and rigorous successive minima.

Metric convention (fixed once): the inner product is the restriction of the
standard Hermitian metric of C^Sigma to the real subspace, so the ring of
integers has covolume |disc|^(1/2) and a complex-pair disk |z| <= B has
induced area 2*pi*B^2.

Enumeration is float-guided but certified: LLL runs on float64, the search
region comes from a ball-arithmetic Cholesky factor widened to outward-
rounded float intervals (so coverage is rigorous), and every candidate point
is accepted or rejected by ball arithmetic with exact algebraic tie-breaking
at boundaries.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from mpmath.libmp import fzero, mpf_cmp

from .balls import ComplexBall, PrecisionError, RealBall, ball_det
from .exact import integer_rank
from .fields import EmbeddingSet, NumberField, PRECISION_CEILING, embed, evaluate_element
from .ramification import IdealLattice

__all__ = [
    "BoxBody",
    "BoxCount",
    "MinimaProfile",
    "EmbeddedLattice",
    "box_volume",
    "count_box",
    "count_box_bruteforce",
    "successive_minima",
    "gram_check",
    "compare_t2",
]


# --------------------------------------------------------------------------
# outward-rounded float intervals (used only to steer enumeration coverage)

_INF = math.inf


def _up(x: float) -> float:
    return math.nextafter(x, _INF)


def _dn(x: float) -> float:
    return math.nextafter(x, -_INF)


def _iv_add(a, b):
    return (_dn(a[0] + b[0]), _up(a[1] + b[1]))


def _iv_sub(a, b):
    return (_dn(a[0] - b[1]), _up(a[1] - b[0]))


def _iv_mul(a, b):
    ps = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (_dn(min(ps)), _up(max(ps)))


def _iv_div_pos(a, b):
    # b strictly positive
    lo = min(a[0] / b[0], a[0] / b[1])
    hi = max(a[1] / b[0], a[1] / b[1])
    return (_dn(lo), _up(hi))


def _iv_sqrt_nonneg(a):
    lo = max(a[0], 0.0)
    return (_dn(math.sqrt(lo)), _up(math.sqrt(max(a[1], 0.0))))


def _ball_to_iv(b: RealBall):
    m = b.mid_float()
    r = b.rad_float()
    return (_dn(_dn(m) - _up(r)), _up(_up(m) + _up(r)))


# --------------------------------------------------------------------------
# box bodies


@dataclass(frozen=True)
class BoxBody:
    """Radii B_sigma (positive rationals), conjugate-symmetric by construction."""

    radii: tuple  # one Fraction per embedding, in canonical embedding order

    @staticmethod
    def from_blocks(emb: EmbeddingSet, block_radii: Sequence) -> "BoxBody":
        values = [Fraction(b) for b in block_radii]
        if len(values) != len(emb.blocks):
            raise ValueError(f"expected {len(emb.blocks)} radii (one per real embedding / conjugate pair)")
        if any(v <= 0 for v in values):
            raise ValueError("radii must be positive")
        radii = [None] * len(emb.conj)
        for blk, v in zip(emb.blocks, values):
            if blk[0] == "r":
                radii[blk[1]] = v
            else:
                radii[blk[1]] = v
                radii[blk[2]] = v
        return BoxBody(tuple(radii))

    @staticmethod
    def cube(emb: EmbeddingSet, r) -> "BoxBody":
        return BoxBody.from_blocks(emb, [Fraction(r)] * len(emb.blocks))

    def block_radii(self, emb: EmbeddingSet) -> list:
        return [self.radii[blk[1]] for blk in emb.blocks]

    def scale(self, factor: Fraction) -> "BoxBody":
        return BoxBody(tuple(r * Fraction(factor) for r in self.radii))

    def validate(self, emb: EmbeddingSet) -> None:
        if len(self.radii) != len(emb.conj):
            raise ValueError("radius count does not match the number of embeddings")
        for i, j in enumerate(emb.conj):
            if self.radii[i] != self.radii[j]:
                raise ValueError("radii must be conjugation-symmetric")


def box_volume(field: NumberField, box: BoxBody, emb: Optional[EmbeddingSet] = None):
    """Exact volume as (rational, r2) meaning rational * pi^r2.

    vol = prod_real(2 B) * prod_pairs(2 pi B^2) under the fixed metric.
    """
    emb = emb or embed(field)
    box.validate(emb)
    q = Fraction(1)
    r2 = 0
    for blk in emb.blocks:
        b = box.radii[blk[1]]
        if blk[0] == "r":
            q *= 2 * b
        else:
            q *= 2 * b * b
            r2 += 1
    return q, r2


# --------------------------------------------------------------------------
# embedded lattice data (cached per ideal and precision)


class EmbeddedLattice:
    """Certified embedding data for an ideal: sigma balls, block Grams, LLL."""

    def __init__(self, ideal: IdealLattice, prec: int):
        self.ideal = ideal
        self.field = ideal.field
        self.prec = prec
        self.emb = embed(self.field, max(128, min(prec, 256)))
        d = self.field.degree
        cols = ideal.basis_columns()
        self.vector_coords = [list(c) for c in cols]
        # sigma balls for each ideal basis vector
        self.sigma = [evaluate_element(self.field, c, self.emb, prec) for c in cols]
        # per-block real Gram contributions
        self.block_grams = []
        for blk in self.emb.blocks:
            s = blk[1]
            mat = [[None] * d for _ in range(d)]
            for i in range(d):
                for j in range(i, d):
                    zi, zj = self.sigma[i][s], self.sigma[j][s]
                    if blk[0] == "r":
                        g = zi.re.mul(zj.re, prec)
                    else:
                        g = zi.re.mul(zj.re, prec).add(zi.im.mul(zj.im, prec), prec).shift(1)
                    mat[i][j] = mat[j][i] = g
            self.block_grams.append(mat)
        self.gram = self._sum_blocks([Fraction(1)] * len(self.emb.blocks))
        self._lll_u = None
        self._reduced_vectors = None

    def _sum_blocks(self, weights) -> list:
        d = self.field.degree
        out = [[RealBall.zero() for _ in range(d)] for _ in range(d)]
        for w, mat in zip(weights, self.block_grams):
            if w == 1:
                for i in range(d):
                    for j in range(d):
                        out[i][j] = out[i][j].add(mat[i][j], self.prec)
            else:
                wb = RealBall.from_fraction(Fraction(w), self.prec)
                for i in range(d):
                    for j in range(i, d):
                        t = mat[i][j].mul(wb, self.prec)
                        out[i][j] = out[i][j].add(t, self.prec)
                        if i != j:
                            out[j][i] = out[i][j]
        return out

    def weighted_gram(self, box: BoxBody) -> list:
        weights = [1 / (b * b) for b in box.block_radii(self.emb)]
        return self._sum_blocks(weights)

    def lll_unimodular(self):
        if self._lll_u is None:
            g = np.array([[x.mid_float() for x in row] for row in self.gram])
            self._lll_u = _lll_on_gram(g)
            h = self.ideal.hnf_basis.entries
            d = self.field.degree
            self._reduced_vectors = [
                [sum(int(self._lll_u[i][k]) * h[r][k] for k in range(d)) for r in range(d)]
                for i in range(d)
            ]
        return self._lll_u, self._reduced_vectors

    def transform_gram(self, gram, u) -> list:
        d = len(gram)
        ug = [[None] * d for _ in range(d)]
        for i in range(d):
            for j in range(d):
                acc = RealBall.zero()
                for k in range(d):
                    if u[i][k]:
                        acc = acc.add(gram[k][j].mul_int(int(u[i][k]), self.prec), self.prec)
                ug[i][j] = acc
        out = [[None] * d for _ in range(d)]
        for i in range(d):
            for j in range(i, d):
                acc = RealBall.zero()
                for k in range(d):
                    if u[j][k]:
                        acc = acc.add(ug[i][k].mul_int(int(u[j][k]), self.prec), self.prec)
                out[i][j] = out[j][i] = acc
        return out

    def t2_ball(self, coords, prec: Optional[int] = None) -> RealBall:
        """Certified squared Euclidean norm of an element (o-coordinates)."""
        prec = prec or self.prec
        vals = evaluate_element(self.field, coords, self.emb, prec)
        acc = RealBall.zero()
        for blk in self.emb.blocks:
            a = vals[blk[1]].abs_sq(prec)
            if blk[0] == "c":
                a = a.shift(1)
            acc = acc.add(a, prec)
        return acc


def _geom(ideal: IdealLattice, prec: int) -> EmbeddedLattice:
    cache = ideal._geom
    if cache is None:
        cache = {}
        ideal._geom = cache
    el = cache.get(prec)
    if el is None:
        el = EmbeddedLattice(ideal, prec)
        cache[prec] = el
    return el


# --------------------------------------------------------------------------
# LLL on a float Gram (unimodular transform only; results re-certified later)


def _lll_on_gram(g: np.ndarray, delta: float = 0.75, max_rounds: int = 4000):
    d = g.shape[0]
    u = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    b = g.copy()

    def gso():
        mu = np.zeros((d, d))
        bstar = np.zeros(d)
        gs = b.copy()
        for i in range(d):
            for j in range(i):
                mu[i][j] = gs[i][j] / bstar[j] if bstar[j] else 0.0
                for k in range(d):
                    gs[i][k] -= mu[i][j] * gs[j][k]
                gs[:, i] = gs[:, i]  # keep symmetric lazily
            bstar[i] = gs[i][i]
        return mu, bstar

    def row_op(i, j, q):
        # b_i <- b_i - q b_j on the Gram and on u
        if q == 0:
            return
        for k in range(d):
            u[i][k] -= q * u[j][k]
        b[i, :] -= q * b[j, :]
        b[:, i] -= q * b[:, j]

    def swap(i, j):
        u[i], u[j] = u[j], u[i]
        b[[i, j], :] = b[[j, i], :]
        b[:, [i, j]] = b[:, [j, i]]

    rounds = 0
    k = 1
    mu, bstar = gso()
    while k < d and rounds < max_rounds:
        rounds += 1
        for j in reversed(range(k)):
            q = round(mu[k][j])
            if q:
                row_op(k, j, int(q))
                mu, bstar = gso()
        if bstar[k] >= (delta - mu[k][k - 1] ** 2) * bstar[k - 1]:
            k += 1
        else:
            swap(k, k - 1)
            mu, bstar = gso()
            k = max(k - 1, 1)
    return u


# --------------------------------------------------------------------------
# ball Cholesky and rigorous enumeration


def _ball_cholesky(gram, prec: int) -> list:
    d = len(gram)
    r = [[RealBall.zero() for _ in range(d)] for _ in range(d)]
    for j in range(d):
        acc = gram[j][j]
        for k in range(j):
            acc = acc.sub(r[k][j].sqr(prec), prec)
        lo = acc.lower()
        if mpf_cmp(lo, fzero) <= 0:
            raise PrecisionError("Cholesky pivot not certified positive")
        r[j][j] = acc.sqrt(prec)
        for l in range(j + 1, d):
            acc = gram[j][l]
            for k in range(j):
                acc = acc.sub(r[k][j].mul(r[k][l], prec), prec)
            r[j][l] = acc.div(r[j][j], prec)
    return r


def _enumerate_qf(chol, bound_hi: float, limit: Optional[int] = None):
    """All nonzero integer x (up to sign; highest nonzero coordinate positive)
    with x^T G x possibly <= bound, where G = R^T R, rigorously over-covered
    via outward-rounded float intervals."""
    d = len(chol)
    riv = [[_ball_to_iv(chol[i][j]) for j in range(d)] for i in range(d)]
    out = []
    x = [0] * d
    c_iv = (0.0, _up(bound_hi))

    def rec(level, rem, all_zero_above):
        if limit is not None and len(out) > limit:
            raise PrecisionError("enumeration exceeded its candidate cap")
        if level < 0:
            if not all_zero_above:
                out.append(tuple(x))
            return
        # s = sum_{j>level} R[level][j] x_j
        s = (0.0, 0.0)
        for j in range(level + 1, d):
            if x[j]:
                s = _iv_add(s, _iv_mul(riv[level][j], (float(x[j]), float(x[j]))))
        rt = _iv_sqrt_nonneg(rem)
        rll = riv[level][level]
        lo_iv = _iv_div_pos(_iv_sub((-rt[1], -rt[0]), s), rll)
        hi_iv = _iv_div_pos(_iv_sub(rt, s), rll)
        lo = math.ceil(lo_iv[0] - 1e-12)
        hi = math.floor(hi_iv[1] + 1e-12)
        if all_zero_above:
            lo = max(lo, 0)
        for v in range(lo, hi + 1):
            x[level] = v
            term = _iv_add(_iv_mul(rll, (float(v), float(v))), s)
            t2 = _iv_mul(term, term)
            new_rem = _iv_sub(rem, t2)
            if new_rem[1] >= 0:
                rec(level - 1, (max(new_rem[0], 0.0), new_rem[1]), all_zero_above and v == 0)
        x[level] = 0

    rec(d - 1, c_iv, True)
    return out


# --------------------------------------------------------------------------
# certified per-coordinate box membership


class _Undecided(Exception):
    pass


def _abs_le_ball(val: ComplexBall, bsq_ball: RealBall, prec: int):
    a = val.abs_sq(prec)
    if a.le(bsq_ball):
        return True
    if bsq_ball.lt(a):
        return False
    raise _Undecided


def _exact_boundary_tie(field: NumberField, emb: EmbeddingSet, coords, blk, bsq: Fraction):
    """True/False when |sigma(x)|^2 == B^2 is exactly decidable, else None."""
    if blk[0] == "r":
        q = field.rational_value(coords)
        return q is not None and q * q == bsq
    cm = field.conj_automorphism()
    if cm is not None:
        y = field.mul_coords(coords, field.apply_automorphism(cm, coords))
        qy = field.rational_value(y)
        return qy is not None and Fraction(qy) == bsq
    r1, r2 = emb.signature
    if field.degree == 3 and r2 == 1:
        # |sigma(x)|^2 = N(x)/sigma0(x); equality iff N(x) = B^2 * x in k
        nrm = field.norm(coords)
        q = field.rational_value(coords)
        return q is not None and Fraction(nrm) == bsq * Fraction(q)
    return None


def point_in_box(field, emb, coords, box: BoxBody, start_prec: int = 96, ceiling: int = PRECISION_CEILING):
    """Certified decision: |sigma(x)| <= B_sigma for all sigma (closed box)."""
    bsqs = {}
    for blk in emb.blocks:
        b = box.radii[blk[1]]
        bsqs[blk] = b * b
    undecided = list(emb.blocks)
    tie_checked = set()
    prec = start_prec
    while undecided and prec <= ceiling:
        vals = evaluate_element(field, coords, emb, prec)
        still = []
        for blk in undecided:
            bb = RealBall.from_fraction(bsqs[blk], prec)
            try:
                ok = _abs_le_ball(vals[blk[1]], bb, prec)
                if not ok:
                    return False
            except _Undecided:
                if blk not in tie_checked:
                    tie_checked.add(blk)
                    tie = _exact_boundary_tie(field, emb, coords, blk, bsqs[blk])
                    if tie is True:
                        continue  # boundary point, included
                    # tie False or None: keep escalating
                still.append(blk)
        undecided = still
        prec *= 2
    if undecided:
        raise PrecisionError("box membership undecided at the precision ceiling")
    return True


# --------------------------------------------------------------------------
# box counting


@dataclass(frozen=True)
class BoxCount:
    points: tuple  # integral-basis coordinate tuples, sorted
    count: int
    rank: int


def count_box(n: IdealLattice, box: BoxBody, prec: int = 96) -> BoxCount:
    """Exact list of ideal elements inside the closed box (Fincke-Pohst inside
    the weighted circumscribed ellipsoid, then certified per-coordinate
    filtering)."""
    field = n.field
    el = _geom(n, prec)
    box.validate(el.emb)
    u, reduced = el.lll_unimodular()
    gw = el.transform_gram(el.weighted_gram(box), u)
    chol = None
    p = prec
    while chol is None:
        try:
            chol = _ball_cholesky(gw, p)
        except PrecisionError:
            p *= 2
            if p > PRECISION_CEILING:
                raise
            el2 = _geom(n, p)
            gw = el2.transform_gram(el2.weighted_gram(box), u)
    d = field.degree
    cands = _enumerate_qf(chol, float(d) * (1 + 1e-9))
    pts = [tuple(0 for _ in range(d))]
    accepted = _filter_candidates(field, el.emb, reduced, cands, box, prec)
    for c in accepted:
        pts.append(c)
        pts.append(tuple(-x for x in c))
    pts = sorted(set(pts))
    nonzero = [p_ for p_ in pts if any(p_)]
    rank = integer_rank(nonzero) if nonzero else 0
    return BoxCount(tuple(pts), len(pts), rank)


def _filter_candidates(field, emb, reduced_vectors, cands, box, prec):
    """Vectorized float prefilter with rigorous margins, ball/exact fallback."""
    if not cands:
        return []
    d = field.degree
    red = np.array(reduced_vectors, dtype=float)
    ys = np.array(cands, dtype=float)
    coords = ys @ red  # o-coordinates, exact integers in float (small)
    exact_coords = [
        tuple(sum(int(y[i]) * reduced_vectors[i][r] for i in range(d)) for r in range(d))
        for y in cands
    ]
    l1 = np.abs(coords).sum(axis=1)
    keep = np.ones(len(cands), dtype=bool)
    boundary = np.zeros(len(cands), dtype=bool)
    for blk in emb.blocks:
        s = blk[1]
        svec = np.array([emb.basis_balls[s][j].mid_complex() for j in range(d)])
        srad = max(emb.basis_balls[s][j].rad_upper() for j in range(d))
        kconst = (srad + (d + 2) * 2.2e-16 * (np.abs(svec).max() + 1.0)) * 4 + 1e-290
        vals = coords @ svec
        absq = vals.real**2 + vals.imag**2
        delta = kconst * l1
        margin = 2.0 * (np.abs(vals) + delta) * delta + absq * 1e-14
        bsq = float(box.radii[s] * box.radii[s])
        bslack = 4 * 2.2e-16 * bsq + 1e-290
        inside = absq + margin < bsq - bslack
        outside = absq - margin > bsq + bslack
        keep &= ~outside
        boundary |= keep & ~inside & ~outside
    out = []
    for idx in range(len(cands)):
        if not keep[idx]:
            continue
        c = exact_coords[idx]
        if boundary[idx]:
            if point_in_box(field, emb, c, box, start_prec=prec):
                out.append(c)
        else:
            out.append(c)
    return out


def count_box_bruteforce(n: IdealLattice, box: BoxBody, prec: int = 96) -> BoxCount:
    """Independent oracle: iterate the integer coordinate box derived from the
    inverse embedding matrix, filter with the same certified primitive."""
    field = n.field
    el = _geom(n, prec)
    box.validate(el.emb)
    d = field.degree
    a = np.array([[el.sigma[j][s].mid_complex() for j in range(d)] for s in range(d)])
    ainv = np.linalg.inv(a)
    radii = np.array([float(box.radii[s]) for s in range(d)])
    bounds = [int(math.floor((np.abs(ainv[j]) @ radii) * (1 + 1e-9) + 1e-9)) for j in range(d)]
    pts = []
    h = n.hnf_basis.entries
    for combo in itertools.product(*[range(-b, b + 1) for b in bounds]):
        coords = tuple(sum(h[r][k] * combo[k] for k in range(d)) for r in range(d))
        if not any(coords):
            pts.append(coords)
            continue
        if point_in_box(field, el.emb, coords, box, start_prec=prec):
            pts.append(coords)
    pts = sorted(set(pts))
    nonzero = [p_ for p_ in pts if any(p_)]
    return BoxCount(tuple(pts), len(pts), integer_rank(nonzero) if nonzero else 0)


# --------------------------------------------------------------------------
# exact / certified norm comparisons


def exact_t2(field: NumberField, emb: EmbeddingSet, coords) -> Optional[Fraction]:
    """T2(x) as an exact rational, for totally real and CM fields."""
    if emb.signature[1] == 0:
        return field.trace(field.mul_coords(coords, coords))
    cm = field.conj_automorphism()
    if cm is not None:
        return field.trace(field.mul_coords(coords, field.apply_automorphism(cm, coords)))
    return None


def _t2_proxy_element(field: NumberField, coords):
    """q with sigma_real(q) = T2(x), for cubic fields with one real embedding."""
    sq = field.mul_coords(coords, coords)
    nrm = field.norm(coords)
    inv = field.inverse(coords)
    return tuple(Fraction(a) + 2 * Fraction(nrm) * Fraction(b) for a, b in zip(sq, inv))


def compare_t2(field, emb, v, w, start_prec: int = 96, ceiling: int = PRECISION_CEILING):
    """Certified comparison of squared norms: -1, 0, or 1."""
    ev = exact_t2(field, emb, v)
    if ev is not None:
        ew = exact_t2(field, emb, w)
        return (ev > ew) - (ev < ew)
    r1, r2 = emb.signature
    exact_diff = None
    if field.degree == 3 and r2 == 1 and any(v) and any(w):
        qv = _t2_proxy_element(field, v)
        qw = _t2_proxy_element(field, w)
        exact_diff = tuple(a - b for a, b in zip(qv, qw))
        if not any(exact_diff):
            return 0
    prec = start_prec
    while prec <= ceiling:
        if exact_diff is not None:
            real_idx = next(b[1] for b in emb.blocks if b[0] == "r")
            val = evaluate_element(field, exact_diff, emb, prec)[real_idx].re
            if val.excludes_zero():
                return 1 if mpf_cmp(val.lower(), fzero) > 0 else -1
        else:
            tv = _t2_ball_plain(field, emb, v, prec)
            tw = _t2_ball_plain(field, emb, w, prec)
            if tv.lt(tw):
                return -1
            if tw.lt(tv):
                return 1
        prec *= 2
    raise PrecisionError("norm comparison undecided at the precision ceiling")


def _t2_ball_plain(field, emb, coords, prec) -> RealBall:
    vals = evaluate_element(field, coords, emb, prec)
    acc = RealBall.zero()
    for blk in emb.blocks:
        a = vals[blk[1]].abs_sq(prec)
        if blk[0] == "c":
            a = a.shift(1)
        acc = acc.add(a, prec)
    return acc


# --------------------------------------------------------------------------
# successive minima


@dataclass(frozen=True)
class MinimaProfile:
    lambdas: tuple  # RealBall per minimum, ascending
    witnesses: tuple  # o-coordinate tuples, Q-linearly independent
    norms_sq: tuple  # RealBall of T2 for each witness


def successive_minima(n: IdealLattice, prec: int = 128) -> MinimaProfile:
    """Certified successive minima with witness vectors.

    Complete enumeration below the largest LLL basis norm guarantees no
    shorter vector is missed; greedy independent selection over the
    certified-sorted list realizes the minima; ties are broken
    lexicographically on coordinates (sign-canonicalized)."""
    field = n.field
    el = _geom(n, prec)
    d = field.degree
    u, reduced = el.lll_unimodular()
    g = el.transform_gram(el.gram, u)
    bound = 0.0
    for i in range(d):
        bound = max(bound, _ball_to_iv(g[i][i])[1])
    p = prec
    while True:
        try:
            chol = _ball_cholesky(g, p)
            break
        except PrecisionError:
            p *= 2
            if p > PRECISION_CEILING:
                raise
            el = _geom(n, p)
            g = el.transform_gram(el.gram, u)
    cands = _enumerate_qf(chol, _up(bound))
    vectors = []
    for y in cands:
        coords = tuple(sum(y[i] * reduced[i][r] for i in range(d)) for r in range(d))
        vectors.append(_canonical_sign(coords))
    vectors = sorted(set(vectors))
    ordered = _certified_norm_sort(field, el.emb, vectors, prec)
    witnesses = []
    for coords in ordered:
        if len(witnesses) == d:
            break
        if integer_rank(witnesses + [list(coords)]) > len(witnesses):
            witnesses.append(list(coords))
    if len(witnesses) < d:
        raise PrecisionError("enumeration did not produce d independent vectors")
    norms = tuple(el.t2_ball(w, max(prec, 192)) for w in witnesses)
    lambdas = tuple(t.sqrt(max(prec, 192)) for t in norms)
    return MinimaProfile(lambdas=lambdas, witnesses=tuple(tuple(w) for w in witnesses), norms_sq=norms)


def _canonical_sign(coords):
    for c in coords:
        if c > 0:
            return tuple(coords)
        if c < 0:
            return tuple(-x for x in coords)
    return tuple(coords)


def _certified_norm_sort(field, emb, vectors, prec):
    """Sort by certified T2, ties (certified equal) lexicographic."""
    keyed = []
    for v in vectors:
        t = _t2_ball_plain(field, emb, v, prec)
        keyed.append((t.mid_float(), v, t))
    keyed.sort(key=lambda kv: (kv[0], kv[1]))
    # verify adjacent ordering; group certified-equal runs lexicographically
    out = [kv[1] for kv in keyed]
    i = 0
    while i + 1 < len(out):
        c = compare_t2(field, emb, out[i], out[i + 1], start_prec=prec)
        if c > 0:
            out[i], out[i + 1] = out[i + 1], out[i]
            i = max(i - 1, 0)
            continue
        i += 1
    return out


# --------------------------------------------------------------------------
# Gram identity


def gram_check(n: IdealLattice, prec: int = 256) -> RealBall:
    """Certify det(Gram) encloses |disc| * index^2; returns the det ball."""
    el = _geom(n, prec)
    d = n.field.degree
    rows = [[ComplexBall.from_real(el.gram[i][j]) for j in range(d)] for i in range(d)]
    det = ball_det(rows, prec).re
    expected = abs(n.field.disc) * n.index * n.index
    if not det.contains_int(expected):
        raise PrecisionError(
            f"Gram determinant ball does not contain |disc|*index^2 = {expected}"
        )
    return det
