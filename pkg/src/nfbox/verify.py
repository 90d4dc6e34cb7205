"""Theorem harness: certified-integer Galois orbit products, exact
divisibility checks, explicit-constant counting inequalities, minima bound
reports, Mahler basis searches, root-of-unity minor nonvanishing, and
family scans with exponent fitting.

Orbit products are evaluated in ball arithmetic and rounded to the unique
integer once the enclosure radius drops below 1/2 (their integrality is a
theorem); precision is seeded from a float64 magnitude estimate and
escalates geometrically on failure.  Full-size (m = d) and singleton
(m = 1) products have exact big-integer fast paths which the test suite
cross-checks against the ball route.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .balls import (
    ComplexBall,
    PrecisionError,
    RealBall,
    ball_det,
    ball_det_expansion,
    pi_ball,
    root_of_unity_ball,
)
from .exact import IntMatrix, bareiss_det, integer_rank
from .fields import NumberField, PRECISION_CEILING, embed, evaluate_element
from .galois import GaloisAction, is_two_homogeneous, subset_orbit_multiset
from .geometry import (
    BoxBody,
    BoxCount,
    MinimaProfile,
    box_volume,
    count_box,
    successive_minima,
)
from .ramification import IdealLattice, tame_discriminant

__all__ = [
    "CertifiedInteger",
    "DivisibilityReport",
    "CountingReport",
    "MinimaReport",
    "MahlerReport",
    "ChebotarevReport",
    "orbit_minor_product",
    "all_subsets_minor_product",
    "verify_thm3",
    "verify_thm4",
    "verify_counting",
    "verify_minima",
    "verify_mahler_basis",
    "chebotarev_minors",
    "scan_family",
    "sample_x",
    "sample_subset",
]


@dataclass(frozen=True)
class CertifiedInteger:
    value: int
    ball: RealBall
    exact: bool  # True when computed without numerics

    @staticmethod
    def from_exact(n: int) -> "CertifiedInteger":
        return CertifiedInteger(n, RealBall.exact_int(n), True)


@dataclass(frozen=True)
class DivisibilityReport:
    theorem: str
    product: CertifiedInteger
    required_divisor: int
    passed: bool
    zero_flag: bool
    uncertified_group_flag: bool

    def as_record(self) -> dict:
        return {
            "theorem": self.theorem,
            "product": str(self.product.value),
            "divisor": str(self.required_divisor),
            "pass": self.passed,
            "zero": self.zero_flag,
            "uncertified_group": self.uncertified_group_flag,
        }


# --------------------------------------------------------------------------
# orbit minor products


def _check_x_in_ideal(n: IdealLattice, xs) -> None:
    for x in xs:
        if not n.contains(x):
            raise ValueError(f"element {x} is not in the ideal")


def _coords_matrix(xs) -> IntMatrix:
    d = len(xs[0])
    return IntMatrix([[int(x[j]) for x in xs] for j in range(d)])


def _exact_full_det_sq(field: NumberField, xs) -> int:
    """det^2 over S = Sigma equals disc * det(coordinates)^2, exactly."""
    c = bareiss_det(_coords_matrix(xs))
    return field.disc * c * c


def orbit_minor_product(
    field: NumberField,
    n: IdealLattice,
    xs: Sequence,
    subset: Sequence[int],
    action: GaloisAction,
    method: str = "auto",
) -> CertifiedInteger:
    """prod over g in G of det^2(sigma(x))_{sigma in gS, x in X} as a
    certified integer."""
    xs = [tuple(int(v) for v in x) for x in xs]
    m = len(xs)
    s = frozenset(int(i) for i in subset)
    if len(s) != m or not (1 <= m <= field.degree):
        raise ValueError("need |X| = |S| = m with 1 <= m <= d")
    if len(set(xs)) != m:
        raise ValueError("X must consist of distinct elements")
    _check_x_in_ideal(n, xs)
    g_order = action.order
    d = field.degree
    if integer_rank([list(x) for x in xs]) < m:
        return CertifiedInteger.from_exact(0)
    if method in ("auto", "exact"):
        if m == 1:
            nrm = field.norm(xs[0])
            return CertifiedInteger.from_exact(nrm ** (2 * g_order // d))
        if m == d:
            return CertifiedInteger.from_exact(_exact_full_det_sq(field, xs) ** g_order)
        if method == "exact":
            raise ValueError("no exact route for 1 < m < d")
    orbit = subset_orbit_multiset(action, s)
    return _ball_orbit_product(field, xs, orbit)


def all_subsets_minor_product(field: NumberField, n: IdealLattice, xs, method: str = "auto") -> CertifiedInteger:
    """prod over all m-subsets S of Sigma of det^2(sigma(x)), certified."""
    xs = [tuple(int(v) for v in x) for x in xs]
    m = len(xs)
    d = field.degree
    if not (2 <= m <= d):
        raise ValueError("need 2 <= m <= d")
    if len(set(xs)) != m:
        raise ValueError("X must consist of distinct elements")
    _check_x_in_ideal(n, xs)
    if integer_rank([list(x) for x in xs]) < m:
        return CertifiedInteger.from_exact(0)
    if method in ("auto", "exact") and m == d:
        return CertifiedInteger.from_exact(_exact_full_det_sq(field, xs))
    if method == "exact":
        raise ValueError("no exact route for m < d")
    subsets = [(frozenset(c), 1) for c in itertools.combinations(range(d), m)]
    return _ball_orbit_product(field, xs, subsets)


def _ball_orbit_product(field: NumberField, xs, subsets_with_mult) -> CertifiedInteger:
    prec = _initial_precision(field, xs, subsets_with_mult)
    while prec <= 16 * PRECISION_CEILING:
        emb = embed(field, min(max(128, prec // 2), 4096))
        cols = [evaluate_element(field, x, emb, prec) for x in xs]
        try:
            prod = ComplexBall.exact_int(1)
            for subset, mult in subsets_with_mult:
                rows = sorted(subset)
                matrix = [[cols[j][s] for j in range(len(xs))] for s in rows]
                try:
                    det = ball_det(matrix, prec)
                except PrecisionError:
                    det = ball_det_expansion(matrix, prec)
                prod = prod.mul(det.pow_int(2 * mult, prec), prec)
            if prod.im.contains_zero():
                value = prod.re.unique_integer()
                if value is not None and prod.im.rad_float() < 0.5:
                    return CertifiedInteger(value, prod.re, False)
        except PrecisionError:
            pass
        prec *= 2
    raise PrecisionError("orbit product did not certify below the precision ceiling")


def _initial_precision(field: NumberField, xs, subsets_with_mult) -> int:
    emb = embed(field, 128)
    d = field.degree
    mids = np.array(
        [[emb.basis_balls[s][j].mid_complex() for j in range(d)] for s in range(d)]
    )
    cols = mids @ np.array([[float(v) for v in x] for x in xs]).T
    bits = 0.0
    for subset, mult in subsets_with_mult:
        rows = sorted(subset)
        sub = cols[rows, :]
        sign, logdet = np.linalg.slogdet(sub)
        if np.isfinite(logdet):
            bits += 2 * mult * max(0.0, logdet / math.log(2))
    return max(192, int(bits) + 96)


# --------------------------------------------------------------------------
# Theorems: divisibility


def verify_thm3(
    field: NumberField,
    n: IdealLattice,
    xs,
    subset,
    action: GaloisAction,
) -> DivisibilityReport:
    d = field.degree
    m = len(xs)
    tame = tame_discriminant(field)
    g_order = action.order
    if is_two_homogeneous(action):
        exp_tame = Fraction(g_order * m * (m - 1), d * (d - 1))
    else:
        exp_tame = Fraction(g_order) * max(Fraction(0), Fraction(2 * m, d) - 1)
    exp_index = Fraction(g_order * 2 * m, d)
    if exp_tame.denominator != 1 or exp_index.denominator != 1:
        raise ArithmeticError("divisor exponents must be integers")
    divisor = tame ** int(exp_tame) * n.index ** int(exp_index)
    product = orbit_minor_product(field, n, xs, subset, action)
    zero = product.value == 0
    passed = zero or product.value % divisor == 0
    return DivisibilityReport("thm3", product, divisor, passed, zero, not action.certified)


def verify_thm4(field: NumberField, n: IdealLattice, xs) -> DivisibilityReport:
    d = field.degree
    m = len(xs)
    if m < 2:
        raise ValueError("the all-subsets product needs m >= 2")
    tame = tame_discriminant(field)
    divisor = tame ** math.comb(d - 2, m - 2) * n.index ** (2 * math.comb(d - 1, m - 1))
    product = all_subsets_minor_product(field, n, xs)
    zero = product.value == 0
    passed = zero or product.value % divisor == 0
    return DivisibilityReport("thm4", product, divisor, passed, zero, False)


# --------------------------------------------------------------------------
# counting inequalities


@dataclass(frozen=True)
class CountingReport:
    count: int
    rank: int
    volume: tuple  # (Fraction, pi power)
    lower_ok: bool
    upper_ok: Optional[bool]  # None when rank < d (bound not applicable)

    @property
    def passed(self) -> bool:
        return self.lower_ok and self.upper_ok is not False

    def as_record(self) -> dict:
        return {
            "count": self.count,
            "rank": self.rank,
            "volume": f"{self.volume[0]}*pi^{self.volume[1]}",
            "lower_ok": self.lower_ok,
            "upper_ok": self.upper_ok,
        }


def _cmp_int_vs_pi_multiple(
    lhs_int_times: tuple, rhs: tuple, prec0: int = 128
):
    """Certified sign of A*sqrt(s) - Q*pi^k  (A, s integers; Q rational).

    lhs_int_times = (A, s); rhs = (Q, k).  Equality cannot occur unless both
    sides vanish (pi is transcendental, sqrt(s) algebraic), which callers
    exclude, so escalation terminates."""
    a, s = lhs_int_times
    q, k = rhs
    if q == 0:
        return 1 if a > 0 else (0 if a == 0 else -1)
    prec = prec0
    while prec <= PRECISION_CEILING:
        lhs = RealBall.exact_int(a).mul(RealBall.exact_int(s).sqrt(prec), prec)
        rhs_ball = RealBall.from_fraction(q, prec).mul(pi_ball(prec).pow_int(k, prec), prec)
        if lhs.lt(rhs_ball):
            return -1
        if rhs_ball.lt(lhs):
            return 1
        prec *= 2
    raise PrecisionError("pi-multiple comparison undecided")


def verify_counting(field: NumberField, n: IdealLattice, box: BoxBody, prec: int = 96) -> CountingReport:
    """Certified lower bound count >= vol/(2^d covol) and, in the full-rank
    case, the simplex upper bound count <= d! vol/covol + d."""
    d = field.degree
    bc = count_box(n, box, prec=prec)
    q, k = box_volume(field, box, embed(field))
    absd = abs(field.disc)
    # lower: count * 2^d * sqrt(|disc|) * idx >= q * pi^k
    lower_ok = (
        _cmp_int_vs_pi_multiple((bc.count * (1 << d) * n.index, absd), (q, k)) >= 0
    )
    upper_ok = None
    if bc.rank == d:
        # count <= d! vol / covol + d <=> (count - d) * covol <= d! * q * pi^k
        lhs_a = (bc.count - d) * n.index
        upper_ok = (
            _cmp_int_vs_pi_multiple((lhs_a, absd), (q * math.factorial(d), k)) <= 0
        )
    return CountingReport(bc.count, bc.rank, (q, k), lower_ok, upper_ok)


# --------------------------------------------------------------------------
# minima reports


@dataclass(frozen=True)
class MinimaReport:
    lambdas: tuple  # floats (midpoints) for reporting
    minkowski_ok: bool
    eq28_ratio: float
    general_ratios: tuple  # per m in 1..d: lambda_1..m / (|disc|^e * idx^(m/d))
    two_homogeneous_ratios: Optional[tuple]

    def as_record(self) -> dict:
        return {
            "lambdas": [f"{x:.12g}" for x in self.lambdas],
            "minkowski_ok": self.minkowski_ok,
            "eq_product_ratio": f"{self.eq28_ratio:.12g}",
            "general_ratios": [f"{x:.12g}" for x in self.general_ratios],
            "two_homogeneous_ratios": (
                None
                if self.two_homogeneous_ratios is None
                else [f"{x:.12g}" for x in self.two_homogeneous_ratios]
            ),
        }


def unit_ball_volume(d: int) -> tuple:
    """V_d as (rational, pi power)."""
    if d % 2 == 0:
        return Fraction(1, math.factorial(d // 2)), d // 2
    dfac = 1
    for k in range(d, 0, -2):
        dfac *= k
    return Fraction(2 ** ((d + 1) // 2), dfac), (d - 1) // 2


def check_minkowski_second(field: NumberField, n: IdealLattice, profile: MinimaProfile, prec: int = 192) -> bool:
    """(2^d/d!) covol <= lambda_1...lambda_d V_d <= 2^d covol, certified."""
    d = field.degree
    vq, vk = unit_ball_volume(d)
    absd = abs(field.disc)
    p = prec
    while p <= PRECISION_CEILING:
        lam = RealBall.exact_int(1)
        for nb in profile.norms_sq:
            lam = lam.mul(nb, p)
        lam = lam.sqrt(p)  # product of lambdas
        vd = RealBall.from_fraction(vq, p).mul(pi_ball(p).pow_int(vk, p), p)
        middle = lam.mul(vd, p)
        covol = RealBall.exact_int(n.index).mul(RealBall.exact_int(absd).sqrt(p), p)
        lo = covol.mul(RealBall.from_fraction(Fraction(1 << d, math.factorial(d)), p), p)
        hi = covol.mul_int(1 << d, p)
        if lo.le(middle) and middle.le(hi):
            return True
        if middle.lt(lo) or hi.lt(middle):
            return False
        p *= 2
    raise PrecisionError("Minkowski bound comparison undecided")


def verify_minima(field: NumberField, n: IdealLattice, action: Optional[GaloisAction] = None) -> MinimaReport:
    profile = successive_minima(n)
    d = field.degree
    ok = check_minkowski_second(field, n, profile, 192)
    lam = [b.mid_float() for b in profile.lambdas]
    absd = abs(field.disc)
    eq28 = _prod(lam) / (math.sqrt(absd) * n.index)
    gen = []
    for m in range(1, d + 1):
        e = max(0.0, m / d - 0.5)
        gen.append(_prod(lam[:m]) / (absd**e * n.index ** (m / d)))
    twoh = None
    if action is not None and is_two_homogeneous(action):
        twoh = tuple(
            _prod(lam[:m]) / (absd ** (m * (m - 1) / (2 * d * (d - 1))) * n.index ** (m / d))
            for m in range(1, d + 1)
        )
    return MinimaReport(tuple(lam), ok, eq28, tuple(gen), twoh)


def _prod(xs):
    out = 1.0
    for x in xs:
        out *= x
    return out


# --------------------------------------------------------------------------
# Mahler basis property


@dataclass(frozen=True)
class MahlerReport:
    premise: bool
    basis: Optional[tuple]
    passed: bool
    skipped: bool

    def as_record(self) -> dict:
        return {
            "premise": self.premise,
            "basis": None if self.basis is None else [list(b) for b in self.basis],
            "pass": self.passed,
            "skipped": self.skipped,
        }


def verify_mahler_basis(
    field: NumberField, n: IdealLattice, box: BoxBody, attempt_cap: int = 200000
) -> MahlerReport:
    """If (1/d)B contains d independent elements of n, then B contains a
    lattice basis of n (exhaustive search over d-subsets, determinant +-1
    over the ideal basis)."""
    d = field.degree
    small = count_box(n, box.scale(Fraction(1, d)))
    if small.rank < d:
        return MahlerReport(False, None, True, False)
    big = count_box(n, box)
    reps = []
    seen = set()
    for p in big.points:
        if not any(p):
            continue
        canon = p if next(v for v in p if v) > 0 else tuple(-x for x in p)
        if canon not in seen:
            seen.add(canon)
            reps.append(canon)
    attempts = 0
    for combo in itertools.combinations(reps, d):
        attempts += 1
        if attempts > attempt_cap:
            return MahlerReport(True, None, False, True)
        mat = IntMatrix([list(n.solve(p)) for p in combo])
        if abs(bareiss_det(mat)) == 1:
            return MahlerReport(True, tuple(combo), True, False)
    return MahlerReport(True, None, False, False)


# --------------------------------------------------------------------------
# root-of-unity minors


@dataclass(frozen=True)
class ChebotarevReport:
    p: int
    minors_checked: int
    all_nonzero: bool

    def as_record(self) -> dict:
        return {"p": self.p, "minors": self.minors_checked, "pass": self.all_nonzero}


def chebotarev_minors(p: int, prec: int = 160) -> ChebotarevReport:
    """Every square minor of (zeta_p^{ab})_{a,b in 1..p-1} is nonzero,
    certified by ball arithmetic."""
    if p < 2 or not all(p % k for k in range(2, int(p**0.5) + 1)):
        raise ValueError("p must be prime")
    size = p - 1
    checked = 0
    work = prec
    while work <= PRECISION_CEILING:
        zs = [[root_of_unity_ball(a * b, p, work) for b in range(1, p)] for a in range(1, p)]
        ok = True
        checked = 0
        for k in range(1, size + 1):
            for rows in itertools.combinations(range(size), k):
                for cols_ in itertools.combinations(range(size), k):
                    sub = [[zs[r][c] for c in cols_] for r in rows]
                    try:
                        det = ball_det(sub, work)
                    except PrecisionError:
                        det = ball_det_expansion(sub, work)
                    checked += 1
                    if not det.excludes_zero():
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            return ChebotarevReport(p, checked, True)
        work *= 2
    raise PrecisionError(f"minor nonvanishing not certified for p={p}")


# --------------------------------------------------------------------------
# family scans


@dataclass(frozen=True)
class ScanRow:
    label: str
    disc: int
    tame: int
    index: int
    lambdas: tuple
    error: Optional[str] = None


@dataclass(frozen=True)
class ScanResult:
    rows: tuple
    slopes: dict  # m -> fitted slope of log lambda_m vs log |disc|, or None


def scan_family(fields_with_labels) -> ScanResult:
    """fields_with_labels: iterable of (label, NumberField or Exception)."""
    rows = []
    for label, fld in fields_with_labels:
        if isinstance(fld, Exception):
            rows.append(ScanRow(label, 0, 0, 0, (), error=str(fld)))
            continue
        try:
            tame = tame_discriminant(fld)
            o = IdealLattice.ring_of_integers(fld)
            profile = successive_minima(o)
            lam = tuple(b.mid_float() for b in profile.lambdas)
            rows.append(ScanRow(label, fld.disc, tame, 1, lam))
        except Exception as e:  # per-field failures recorded, scan continues
            rows.append(ScanRow(label, getattr(fld, "disc", 0), 0, 0, (), error=repr(e)))
    good = [r for r in rows if r.error is None]
    slopes = {}
    if good:
        d = len(good[0].lambdas)
        for m in range(1, d + 1):
            pts = [
                (math.log(abs(r.disc)), math.log(r.lambdas[m - 1]))
                for r in good
                if r.lambdas and r.lambdas[m - 1] > 0
            ]
            slopes[m] = _least_squares_slope(pts)
    return ScanResult(tuple(rows), slopes)


def _least_squares_slope(pts) -> Optional[float]:
    if len(pts) < 2:
        return None
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    xbar = sum(xs) / len(xs)
    ybar = sum(ys) / len(ys)
    var = sum((x - xbar) ** 2 for x in xs)
    if var == 0:
        return None
    cov = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
    return cov / var


# --------------------------------------------------------------------------
# randomized instance generation (shared by the CLI suites and tests)


def sample_x(field: NumberField, n: IdealLattice, m: int, rng, height: int = 5, dependent_rate: float = 0.05):
    """m distinct ideal elements, coordinates uniform in [-height, height]
    over the ideal's HNF basis; with probability dependent_rate the sample is
    made deliberately Q-linearly dependent."""
    h = n.hnf_basis.entries
    d = field.degree

    def draw():
        y = [rng.randint(-height, height) for _ in range(d)]
        return tuple(sum(h[r][k] * y[k] for k in range(d)) for r in range(d))

    force_dependent = rng.random() < dependent_rate
    for _ in range(200):
        xs = []
        seen = set()
        while len(xs) < m:
            v = draw()
            if v not in seen:
                seen.add(v)
                xs.append(v)
        if force_dependent:
            if m == 1:
                return [tuple(0 for _ in range(d))]
            base = xs[0]
            dep = tuple(2 * c for c in base)
            if dep not in seen:
                xs[-1] = dep
            return xs
        if integer_rank([list(x) for x in xs]) == m:
            return xs
    raise RuntimeError("failed to sample an independent X")


def sample_subset(d: int, m: int, rng):
    return tuple(sorted(rng.sample(range(d), m)))
