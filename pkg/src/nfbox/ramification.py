"""Prime factorization in the ring of integers, tame discriminants, and
exact ideal arithmetic on Hermite-normal-form lattices.

Ideals are d x d integer matrices in column HNF over the integral basis;
the index [o:n] is the product of the pivots.  Prime ideals above p are read
off from the factorization of the defining polynomial mod p (valid whenever
p does not divide [o : Z[theta]]); primes dividing the index must be
registered explicitly and are validated on registration.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .exact import IntMatrix, hnf
from .fields import NumberField, primes_upto, prime_factors
from . import modp

__all__ = [
    "IdealError",
    "PrimeDataUnavailable",
    "IdealLattice",
    "PrimeData",
    "ideal_from_generators",
    "principal_ideal",
    "factor_prime",
    "register_prime_data",
    "tame_discriminant",
    "ideal_valuation",
    "small_ideals",
]


class IdealError(ValueError):
    pass


class PrimeDataUnavailable(IdealError):
    def __init__(self, p: int):
        super().__init__(f"prime data unavailable at {p} (p divides the index; register override data)")
        self.p = p


class IdealLattice:
    """A nonzero ideal of o as an integer lattice in integral-basis coordinates."""

    __slots__ = ("field", "hnf_basis", "index", "_geom")

    def __init__(self, field: NumberField, hnf_basis: IntMatrix, index: int):
        self.field = field
        self.hnf_basis = hnf_basis
        self.index = index
        self._geom = None  # embedding-geometry cache, filled lazily

    @staticmethod
    def ring_of_integers(field: NumberField) -> "IdealLattice":
        return IdealLattice(field, IntMatrix.identity(field.degree), 1)

    @staticmethod
    def from_columns(field: NumberField, columns: Sequence[Sequence[int]], validate: bool = False) -> "IdealLattice":
        h, rank, _ = hnf(IntMatrix.from_columns(columns))
        if rank != field.degree:
            raise IdealError("generators do not span a full-rank lattice")
        index = 1
        for i in range(field.degree):
            index *= h.entries[i][i]
        ideal = IdealLattice(field, h, index)
        if validate and not ideal.is_ideal():
            raise IdealError("lattice is not closed under multiplication by o")
        return ideal

    def key(self) -> tuple:
        return self.hnf_basis.entries

    def __eq__(self, other):
        return isinstance(other, IdealLattice) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def basis_columns(self) -> list:
        return self.hnf_basis.columns()

    def contains(self, coords: Sequence[int]) -> bool:
        return self.solve(coords) is not None

    def solve(self, coords: Sequence[int]) -> Optional[tuple]:
        """Integer coefficients of coords over the HNF basis, or None."""
        h = self.hnf_basis.entries
        d = self.field.degree
        v = [int(c) for c in coords]
        out = [0] * d
        for i in range(d):
            q, r = divmod(v[i], h[i][i])
            if r:
                return None
            out[i] = q
            for k in range(i + 1, d):
                v[k] -= q * h[k][i]
        return tuple(out)

    def is_sublattice_of(self, other: "IdealLattice") -> bool:
        return all(other.contains(c) for c in self.basis_columns())

    def is_ideal(self) -> bool:
        d = self.field.degree
        for col in self.basis_columns():
            for i in range(d):
                e = [0] * d
                e[i] = 1
                if not self.contains(self.field.mul_coords(col, e)):
                    return False
        return True

    def multiply(self, other: "IdealLattice") -> "IdealLattice":
        if self.field is not other.field:
            raise IdealError("ideals of different fields")
        cols = []
        for a in self.basis_columns():
            for b in other.basis_columns():
                cols.append(self.field.mul_coords(a, b))
        return IdealLattice.from_columns(self.field, cols)

    def power(self, k: int) -> "IdealLattice":
        out = IdealLattice.ring_of_integers(self.field)
        base = self
        while k:
            if k & 1:
                out = out.multiply(base)
            k >>= 1
            if k:
                base = base.multiply(base)
        return out

    def __repr__(self):
        return f"IdealLattice({self.field.label}, index={self.index})"


def ideal_from_generators(field: NumberField, gens: Sequence[Sequence[int]]) -> IdealLattice:
    """The ideal generated by the given elements (integral-basis coordinates)."""
    nonzero = [g for g in gens if any(g)]
    if not nonzero:
        raise IdealError("all generators are zero")
    d = field.degree
    cols = []
    for g in nonzero:
        for i in range(d):
            e = [0] * d
            e[i] = 1
            cols.append(field.mul_coords(g, e))
    ideal = IdealLattice.from_columns(field, cols, validate=True)
    return ideal


def principal_ideal(field: NumberField, coords: Sequence[int]) -> IdealLattice:
    return ideal_from_generators(field, [coords])


@dataclass(frozen=True)
class PrimeData:
    p: int
    factors: tuple  # of (e, f, IdealLattice)
    source: str  # 'kummer' or 'registered'

    @property
    def f_sum(self) -> int:
        return sum(f for _, f, _ in self.factors)

    @property
    def residue_degree_total(self) -> int:
        return self.f_sum


def _validate_prime_data(field: NumberField, p: int, factors) -> PrimeData:
    d = field.degree
    if sum(e * f for e, f, _ in factors) != d:
        raise IdealError(f"sum of e*f above {p} must equal {d}")
    product = IdealLattice.ring_of_integers(field)
    for e, f, ideal in factors:
        if ideal.index != p**f:
            raise IdealError(f"prime above {p} has index {ideal.index}, expected {p**f}")
        if not ideal.is_ideal():
            raise IdealError(f"registered lattice above {p} is not an ideal")
        product = product.multiply(ideal.power(e))
    p_ideal = principal_ideal(field, [p] + [0] * (d - 1))
    if product.key() != p_ideal.key():
        raise IdealError(f"product of prime powers above {p} is not (p)")
    return PrimeData(p, tuple(factors), "registered")


def register_prime_data(field: NumberField, p: int, factors: Sequence) -> PrimeData:
    """Register externally supplied prime data (p, [(e, f, hnf columns)]).

    Needed when p divides [o : Z[theta]].  The data is validated: indices,
    ideal closure, and the product of prime powers reconstructing (p).
    """
    built = []
    for e, f, h in factors:
        ideal = h if isinstance(h, IdealLattice) else IdealLattice.from_columns(field, IntMatrix(h).columns())
        built.append((int(e), int(f), ideal))
    data = _validate_prime_data(field, p, built)
    field._prime_overrides[p] = data
    return data


def factor_prime(field: NumberField, p: int) -> PrimeData:
    """Ramification data above p via factorization of f mod p.

    Requires p not to divide the index [o : Z[theta]] unless override data
    was registered.
    """
    cached = field._prime_cache.get(p)
    if cached is not None:
        return cached
    if p in field._prime_overrides:
        return field._prime_overrides[p]
    if field.index % p == 0:
        raise PrimeDataUnavailable(p)
    d = field.degree
    _, factors = modp.factor_mod_p(field.poly, p)
    out = []
    p_gen = [p] + [0] * (d - 1)
    for g, e in factors:
        f_deg = g.degree
        reduced = field._reduce_theta_product([int(c) for c in g.coeffs])
        frac_coords = field.coords_from_theta(reduced)
        if any(c.denominator != 1 for c in frac_coords):
            raise IdealError("generator not integral over the basis")
        g_coords = [int(c) for c in frac_coords]
        ideal = ideal_from_generators(field, [p_gen, g_coords])
        if ideal.index != p**f_deg:
            raise IdealError(
                f"factor of {field.label} above {p} has index {ideal.index}, expected {p**f_deg}"
            )
        out.append((e, f_deg, ideal))
    data = PrimeData(p, tuple(out), "kummer")
    if sum(e * f for e, f, _ in data.factors) != d:
        raise IdealError(f"inconsistent ramification data above {p}")
    field._prime_cache[p] = data
    return data


def tame_discriminant(field: NumberField) -> int:
    """prod_p p^(d - f_p) over ramified p; divides disc and obeys the crude
    2^(d^3) gap bound (both asserted)."""
    d = field.degree
    out = 1
    for p in prime_factors(field.disc):
        data = factor_prime(field, p)
        out *= p ** (d - data.f_sum)
    if field.disc % out:
        raise IdealError(f"tame discriminant {out} does not divide {field.disc}")
    if abs(field.disc) >= (1 << d**3) * out:
        raise IdealError("discriminant exceeds the 2^(d^3) tame bound")
    return out


def ideal_valuation(n: IdealLattice, prime: IdealLattice) -> int:
    """Largest k with n contained in prime^k (membership in successive powers)."""
    k = 0
    power = prime
    while n.is_sublattice_of(power):
        k += 1
        if k > 64:
            raise IdealError("valuation exceeds sanity bound")
        power = power.multiply(prime)
    return k


def small_ideals(
    field: NumberField,
    index_cap: int,
    coord_height: int = 2,
    include_primes: bool = True,
) -> list:
    """Deterministic list of ideals of index <= index_cap built from small data:
    the ring itself, prime ideals of small norm, their pairwise products and
    powers, and principal ideals of small elements."""
    d = field.degree
    found = {}

    def add(ideal):
        if 0 < ideal.index <= index_cap:
            found.setdefault(ideal.key(), ideal)

    add(IdealLattice.ring_of_integers(field))
    primes = []
    if include_primes:
        for p in primes_upto(index_cap):
            try:
                data = factor_prime(field, p)
            except PrimeDataUnavailable:
                continue
            for _, _, ideal in data.factors:
                if ideal.index <= index_cap:
                    primes.append(ideal)
                    add(ideal)
        for i, a in enumerate(primes):
            for b in primes[i:]:
                if a.index * b.index <= index_cap:
                    add(a.multiply(b))
    for coords in _small_elements(d, coord_height):
        nrm = field.norm(coords)
        if nrm and abs(nrm) <= index_cap:
            add(principal_ideal(field, coords))
    out = sorted(found.values(), key=lambda i: (i.index, i.key()))
    return out


def _small_elements(d: int, height: int):
    """Small integer coordinate vectors; full box for d <= 4, else sparse."""
    if d <= 4:
        ranges = [range(-height, height + 1)] * d
        import itertools

        for coords in itertools.product(*ranges):
            if any(coords):
                yield list(coords)
    else:
        import itertools

        for positions in itertools.combinations(range(d), 2):
            for a in range(-height, height + 1):
                for b in range(-height, height + 1):
                    if a or b:
                        coords = [0] * d
                        coords[positions[0]] = a
                        coords[positions[1]] = b
                        yield coords
