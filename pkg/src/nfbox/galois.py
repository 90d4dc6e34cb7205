"""Galois actions on the embeddings as finite permutation groups.

Supported sources: explicit generator permutations, cyclotomic fields
(multiplication on root-of-unity labels, matched to enclosures by certified
ball arithmetic), pure fields x^d - m with d prime (the affine group on
root labels), and an assume-symmetric fallback (full S_d, flagged as
heuristic after Frobenius cycle-type sampling).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

from .balls import ComplexBall, PrecisionError, root_of_unity_ball
from .exact import IntPolynomial
from .fields import EmbeddingSet, NumberField, embed, primes_upto
from . import modp

__all__ = ["GaloisAction", "GroupError", "build_action", "is_two_homogeneous", "subset_orbit_multiset"]

GROUP_ORDER_CAP = 5040


class GroupError(ValueError):
    pass


def _compose(p, q):
    # (p*q)(x) = p(q(x))
    return tuple(p[q[i]] for i in range(len(p)))


def _closure(generators, cap=GROUP_ORDER_CAP):
    d = len(generators[0])
    identity = tuple(range(d))
    elements = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for g in frontier:
            for gen in generators:
                h = _compose(gen, g)
                if h not in elements:
                    elements.add(h)
                    nxt.append(h)
                    if len(elements) > cap:
                        raise GroupError(f"group order exceeds the cap {cap}")
        frontier = nxt
    return elements


@dataclass(frozen=True)
class GaloisAction:
    degree: int
    generators: tuple
    provenance: str  # user | cyclotomic | pure-field | heuristic-symmetric
    _elements: tuple = dc_field(default=None, compare=False, repr=False)

    @property
    def certified(self) -> bool:
        return self.provenance != "heuristic-symmetric"

    def elements(self) -> tuple:
        object.__setattr__(
            self, "_elements", self._elements or tuple(sorted(_closure(self.generators)))
        )
        return self._elements

    @property
    def order(self) -> int:
        return len(self.elements())

    def orbit_of_point(self, x: int) -> set:
        orbit = {x}
        frontier = [x]
        while frontier:
            nxt = []
            for y in frontier:
                for g in self.generators:
                    z = g[y]
                    if z not in orbit:
                        orbit.add(z)
                        nxt.append(z)
            frontier = nxt
        return orbit

    def is_transitive(self) -> bool:
        return len(self.orbit_of_point(0)) == self.degree

    def order_by_stabilizer_chain(self) -> int:
        """Product of orbit sizes along a point stabilizer chain (Schreier)."""
        gens = list(self.generators)
        total = 1
        for base in range(self.degree):
            if not gens:
                break
            orbit = {base: tuple(range(self.degree))}
            frontier = [base]
            while frontier:
                nxt = []
                for y in frontier:
                    for g in gens:
                        z = g[y]
                        if z not in orbit:
                            orbit[z] = _compose(g, orbit[y])
                            nxt.append(z)
                frontier = nxt
            total *= len(orbit)
            stab = set()
            for y, t in orbit.items():
                for g in gens:
                    rep = orbit[g[y]]
                    rep_inv = tuple(sorted(range(self.degree), key=lambda i: rep[i]))
                    stab.add(_compose(rep_inv, _compose(g, t)))
            identity = tuple(range(self.degree))
            gens = [s for s in stab if s != identity]
        return total


def is_two_homogeneous(action: GaloisAction) -> bool:
    """Single orbit on 2-element subsets of the domain."""
    if not action.is_transitive():
        raise GroupError("action must be transitive")
    d = action.degree
    if d == 2:
        return True
    start = frozenset((0, 1))
    orbit = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for s in frontier:
            for g in action.generators:
                t = frozenset(g[i] for i in s)
                if t not in orbit:
                    orbit.add(t)
                    nxt.append(t)
        frontier = nxt
    return len(orbit) == d * (d - 1) // 2


def subset_orbit_multiset(action: GaloisAction, subset) -> list:
    """The multiset {gS : g in G} as (frozenset, multiplicity) pairs.

    Multiplicities are |G|/|orbit| each and sum to |G|.
    """
    s = frozenset(subset)
    if not s:
        raise GroupError("subset must be nonempty")
    counts = {}
    for g in action.elements():
        t = frozenset(g[i] for i in s)
        counts[t] = counts.get(t, 0) + 1
    mults = set(counts.values())
    if len(mults) != 1:
        raise GroupError("orbit multiplicities are not uniform")
    out = sorted(counts.items(), key=lambda kv: tuple(sorted(kv[0])))
    return out


# --------------------------------------------------------------------------
# building actions


def build_action(field: NumberField, source, emb: Optional[EmbeddingSet] = None) -> GaloisAction:
    """source: ('explicit', perms 1-based) | ('cyclotomic', n) | ('pure', m) |
    ('symmetric',)."""
    kind = source[0]
    if kind == "explicit":
        perms = [tuple(i - 1 for i in p) for p in source[1]]
        d = field.degree
        for p in perms:
            if sorted(p) != list(range(d)):
                raise GroupError(f"not a permutation of 1..{d}: {p}")
        action = GaloisAction(d, tuple(perms), "user")
        if not action.is_transitive():
            raise GroupError("explicit generators do not act transitively")
        return action
    if kind == "cyclotomic":
        return _cyclotomic_action(field, int(source[1]), emb)
    if kind == "pure":
        return _pure_field_action(field, int(source[1]), emb)
    if kind == "symmetric":
        return _symmetric_action(field)
    raise GroupError(f"unknown Galois source {source!r}")


def _match_ball(target: ComplexBall, enclosures) -> int:
    hits = [j for j, e in enumerate(enclosures) if target.overlaps(e)]
    if len(hits) != 1:
        raise PrecisionError("ambiguous root matching")
    return hits[0]


def _cyclotomic_action(field: NumberField, n: int, emb) -> GaloisAction:
    if field.cyclotomic_n != n:
        raise GroupError("field was not built with this cyclotomic order")
    units = [a for a in range(1, n) if math.gcd(a, n) == 1]
    d = field.degree
    prec = 128
    while True:
        emb_p = embed(field, prec)
        try:
            zeta = emb_p.enclosures[0]
            labels = {}
            for a in units:
                za = zeta.pow_int(a, emb_p.work_prec)
                labels[a] = _match_ball(za, emb_p.enclosures)
            if sorted(labels.values()) != list(range(d)):
                raise PrecisionError("labels are not a bijection")
            perms = []
            for a in units:
                if a == 1:
                    continue
                perm = [None] * d
                for b in units:
                    perm[labels[b]] = labels[(a * b) % n]
                perms.append(tuple(perm))
            return GaloisAction(d, tuple(perms), "cyclotomic")
        except PrecisionError:
            prec *= 2
            if prec > 4096:
                raise


def _pure_field_action(field: NumberField, m: int, emb) -> GaloisAction:
    d = field.degree
    expected = IntPolynomial([-m] + [0] * (d - 1) + [1])
    if field.poly != expected:
        raise GroupError(f"field polynomial is not x^{d} - ({m})")
    if d == 2:
        return GaloisAction(2, ((1, 0),), "pure-field")
    if not _is_prime_int(d):
        raise GroupError("pure-field action requires prime degree")
    prec = 128
    while True:
        emb_p = embed(field, prec)
        try:
            real_idx = [i for i, blk in enumerate(emb_p.conj) if blk == i]
            if len(real_idx) != 1:
                raise GroupError("pure field of odd prime degree must have one real root")
            theta0 = emb_p.enclosures[real_idx[0]]
            labels = {}
            wp = emb_p.work_prec
            for j in range(d):
                zj = root_of_unity_ball(j, d, wp)
                labels[j] = _match_ball(theta0.mul(zj, wp), emb_p.enclosures)
            if sorted(labels.values()) != list(range(d)):
                raise PrecisionError("labels are not a bijection")
            shift = [None] * d
            for j in range(d):
                shift[labels[j]] = labels[(j + 1) % d]
            g = _primitive_root(d)
            mult = [None] * d
            for j in range(d):
                mult[labels[j]] = labels[(g * j) % d]
            return GaloisAction(d, (tuple(shift), tuple(mult)), "pure-field")
        except PrecisionError:
            prec *= 2
            if prec > 4096:
                raise


def _is_prime_int(n: int) -> bool:
    return n >= 2 and all(n % k for k in range(2, int(n**0.5) + 1))


def _primitive_root(p: int) -> int:
    factors = set()
    x = p - 1
    k = 2
    while k * k <= x:
        if x % k == 0:
            factors.add(k)
            while x % k == 0:
                x //= k
        k += 1
    if x > 1:
        factors.add(x)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise GroupError("no primitive root found")


def _symmetric_action(field: NumberField) -> GaloisAction:
    """Full S_d after sampling Frobenius cycle types mod small primes.

    Requires evidence of a d-cycle and of an odd cycle type among 20 good
    primes; this is consistency checking, not certification, and the result
    is flagged heuristic."""
    d = field.degree
    patterns = []
    count = 0
    for p in primes_upto(10**4):
        if count >= 20:
            break
        if field.disc % p == 0 or field.index % p == 0:
            continue
        _, factors = modp.factor_mod_p(field.poly, p)
        if any(e > 1 for _, e in factors):
            continue
        patterns.append(tuple(sorted(g.degree for g, _ in factors)))
        count += 1
    has_dcycle = (d,) in patterns
    has_odd = any(sum(k - 1 for k in pat) % 2 == 1 for pat in patterns)
    if not (has_dcycle and has_odd):
        raise GroupError(
            "sampled factorization patterns lack S_d evidence "
            f"(d-cycle: {has_dcycle}, odd type: {has_odd})"
        )
    transposition = tuple([1, 0] + list(range(2, d)))
    cycle = tuple(list(range(1, d)) + [0])
    return GaloisAction(d, (transposition, cycle), "heuristic-symmetric")
