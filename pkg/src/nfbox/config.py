"""Corpus configuration: field specifications, suite parameters, polynomial
parsing, and the default verification corpus.

The config file is JSON.  A field spec gives either a cyclotomic order or a
monic integer polynomial (string like "x^3-2" or ascending coefficient
list), an optional rational basis matrix (entries as strings like "1/2"),
and an optional Galois source.  Labels must be unique; a fixed seed makes
every report byte-identical.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional, Sequence

from .exact import IntPolynomial
from .fields import (
    FieldError,
    NumberField,
    build_field,
    cyclotomic_field,
    pure_cubic_field,
    quadratic_field,
)
from .galois import GaloisAction, build_action

__all__ = [
    "FieldSpec",
    "SuiteParams",
    "CorpusConfig",
    "parse_polynomial",
    "load_config",
    "default_corpus",
    "DEFAULT_SUITES",
]

DEFAULT_SUITES = ("thm1", "thm3", "thm4", "thm5", "minima", "mahler", "chebotarev", "scan")

_TERM_RE = re.compile(r"([+-]?[^+-]+)")


def parse_polynomial(text) -> IntPolynomial:
    """Parse "x^3-2", "x^2 + 1", or an ascending coefficient list."""
    if isinstance(text, (list, tuple)):
        return IntPolynomial([int(c) for c in text])
    s = str(text).replace(" ", "").replace("**", "^")
    if not s:
        raise ValueError("empty polynomial")
    coeffs = {}
    for term in _TERM_RE.findall(s):
        m = re.fullmatch(r"([+-]?)(\d*)\*?([a-zA-Z]\^?(\d+)?)?", term)
        if not m or (not m.group(2) and not m.group(3)):
            raise ValueError(f"cannot parse term {term!r} of {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        coef = int(m.group(2)) if m.group(2) else 1
        if m.group(3):
            deg = int(m.group(4)) if m.group(4) else 1
        else:
            deg = 0
        coeffs[deg] = coeffs.get(deg, 0) + sign * coef
    n = max(coeffs)
    return IntPolynomial([coeffs.get(k, 0) for k in range(n + 1)])


@dataclass(frozen=True)
class FieldSpec:
    label: str
    coeffs: Optional[tuple] = None  # ascending; None for cyclotomic shorthand
    cyclotomic: Optional[int] = None
    basis: Optional[tuple] = None  # rows of Fractions
    galois: Optional[tuple] = None  # ('pure', m) | ('cyclotomic', n) | ('symmetric',) | ('explicit', perms)
    quadratic_m: Optional[int] = None
    pure_cubic_m: Optional[int] = None

    def build(self) -> NumberField:
        if self.cyclotomic is not None:
            return cyclotomic_field(self.cyclotomic, label=self.label)
        if self.quadratic_m is not None:
            return quadratic_field(self.quadratic_m, label=self.label)
        if self.pure_cubic_m is not None:
            return pure_cubic_field(self.pure_cubic_m, label=self.label)
        basis = None
        if self.basis is not None:
            basis = [[Fraction(x) for x in row] for row in self.basis]
        return build_field(IntPolynomial(list(self.coeffs)), basis_override=basis, label=self.label)

    def galois_source(self) -> Optional[tuple]:
        if self.galois is not None:
            return self.galois
        if self.cyclotomic is not None:
            return ("cyclotomic", self.cyclotomic)
        if self.quadratic_m is not None:
            return ("pure", self.quadratic_m)
        if self.pure_cubic_m is not None:
            return ("pure", self.pure_cubic_m)
        return None

    def build_action(self, field: NumberField) -> GaloisAction:
        src = self.galois_source()
        if src is None:
            raise FieldError(f"no Galois source configured for {self.label}")
        return build_action(field, src)


@dataclass(frozen=True)
class SuiteParams:
    seed: int = 20260809
    ideal_index_cap: int = 50
    minima_index_cap: int = 100
    box_trials: int = 500
    x_per_instance: int = 25
    coordinate_height: int = 5
    dependent_rate: float = 0.05
    box_radius_min: Fraction = Fraction(1, 2)
    box_radius_max: Fraction = Fraction(6)
    mahler_trials: int = 100
    chebotarev_primes: tuple = (3, 5, 7)
    scan_pure_degree: int = 3
    scan_pure_pmax: int = 97
    scan_quadratic_mmax: int = 50
    precision_ceiling: int = 8192


@dataclass(frozen=True)
class CorpusConfig:
    fields: tuple
    suite: SuiteParams = dc_field(default_factory=SuiteParams)

    def __post_init__(self):
        labels = [f.label for f in self.fields]
        if len(set(labels)) != len(labels):
            raise ValueError("field labels must be unique")

    def field_by_label(self, label: str) -> FieldSpec:
        for f in self.fields:
            if f.label == label:
                return f
        raise KeyError(label)


def _parse_galois(obj) -> tuple:
    kind = obj["type"]
    if kind == "pure":
        return ("pure", int(obj["m"]))
    if kind == "cyclotomic":
        return ("cyclotomic", int(obj["n"]))
    if kind == "symmetric":
        return ("symmetric",)
    if kind == "explicit":
        return ("explicit", [list(map(int, p)) for p in obj["perms"]])
    raise ValueError(f"unknown galois source type {kind!r}")


def _spec_from_json(obj) -> FieldSpec:
    label = obj["label"]
    galois = _parse_galois(obj["galois"]) if "galois" in obj else None
    if "cyclotomic" in obj:
        return FieldSpec(label=label, cyclotomic=int(obj["cyclotomic"]), galois=galois)
    if "quadratic" in obj:
        return FieldSpec(label=label, quadratic_m=int(obj["quadratic"]), galois=galois)
    if "pure_cubic" in obj:
        return FieldSpec(label=label, pure_cubic_m=int(obj["pure_cubic"]), galois=galois)
    poly = parse_polynomial(obj["poly"])
    basis = None
    if obj.get("basis") is not None:
        basis = tuple(tuple(Fraction(x) for x in row) for row in obj["basis"])
    return FieldSpec(label=label, coeffs=tuple(poly.coeffs), basis=basis, galois=galois)


def load_config(path) -> CorpusConfig:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    fields = tuple(_spec_from_json(o) for o in data["fields"])
    suite_kwargs = {}
    raw = data.get("suite", {})
    for key in SuiteParams.__dataclass_fields__:
        if key in raw:
            val = raw[key]
            if key in ("box_radius_min", "box_radius_max"):
                val = Fraction(str(val))
            elif key == "chebotarev_primes":
                val = tuple(int(x) for x in val)
            suite_kwargs[key] = val
    return CorpusConfig(fields=fields, suite=SuiteParams(**suite_kwargs))


def default_corpus(seed: int = 20260809) -> CorpusConfig:
    """The standard verification corpus: quadratics x^2 - m for squarefree
    m in {+-2, +-3, +-5, +-6, +-7, +-10}, the 5th/7th/8th/12th cyclotomic
    fields, and the pure cubics x^3 - 2, -5, -7."""
    fields = []
    for m in (2, -2, 3, -3, 5, -5, 6, -6, 7, -7, 10, -10):
        fields.append(FieldSpec(label=f"sqrt({m})", quadratic_m=m))
    for n in (5, 7, 8, 12):
        fields.append(FieldSpec(label=f"zeta{n}", cyclotomic=n))
    for p in (2, 5, 7):
        fields.append(FieldSpec(label=f"cbrt({p})", pure_cubic_m=p))
    return CorpusConfig(fields=tuple(fields), suite=SuiteParams(seed=seed))
