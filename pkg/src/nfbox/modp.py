"""Polynomial arithmetic over F_p, backed by sympy's dense GF routines.

Factor lists are canonically sorted so results are deterministic even though
the underlying equal-degree splitting is randomized.
"""

from __future__ import annotations

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor, gf_gcd, gf_irreducible_p

from .exact import IntPolynomial

__all__ = ["factor_mod_p", "irreducible_mod_p", "gcd_mod_p", "reduce_mod_p"]


def _to_dense(f: IntPolynomial, p: int):
    # sympy wants descending coefficients reduced mod p
    return [ZZ(int(c) % p) for c in reversed(f.coeffs)]


def _from_dense(coeffs) -> IntPolynomial:
    return IntPolynomial([int(c) for c in reversed(coeffs)])


def reduce_mod_p(f: IntPolynomial, p: int) -> IntPolynomial:
    return IntPolynomial([c % p for c in f.coeffs])


def factor_mod_p(f: IntPolynomial, p: int):
    """Monic factorization of f mod p: (lead, [(factor, multiplicity), ...]).

    Factors are monic IntPolynomials with coefficients in [0, p), sorted by
    (degree, coefficient tuple).
    """
    lead, factors = gf_factor(_to_dense(f, p), p, ZZ)
    out = [(_from_dense(g), int(k)) for g, k in factors]
    out.sort(key=lambda t: (t[0].degree, t[0].coeffs))
    return int(lead), out


def irreducible_mod_p(f: IntPolynomial, p: int) -> bool:
    if f.lead % p == 0:
        return False
    return bool(gf_irreducible_p(_to_dense(f, p), p, ZZ))


def gcd_mod_p(f: IntPolynomial, g: IntPolynomial, p: int) -> IntPolynomial:
    df = _to_dense(f, p)
    dg = _to_dense(g, p)
    return _from_dense(gf_gcd(df, dg, p, ZZ))
