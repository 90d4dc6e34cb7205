"""Command line front end.

Subcommands: field, ideal, count, minima, galois, verify, scan.
Exit codes: 0 success, 1 verification failure, 2 input error.

Reports are line-delimited JSON records plus a CSV summary; wall-clock
timings go to a separate .log stream so report bytes are reproducible for a
fixed config and seed.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from fractions import Fraction

import mpmath

from . import fields as fields_mod
from .config import (
    CorpusConfig,
    DEFAULT_SUITES,
    FieldSpec,
    SuiteParams,
    default_corpus,
    load_config,
    parse_polynomial,
)
from .exact import IntPolynomial
from .fields import FieldError, NumberField, build_field, embed
from .galois import GroupError, build_action, is_two_homogeneous
from .geometry import BoxBody, count_box, gram_check, successive_minima
from .ramification import (
    IdealLattice,
    PrimeDataUnavailable,
    factor_prime,
    ideal_from_generators,
    prime_factors,
    small_ideals,
    tame_discriminant,
)
from .verify import (
    chebotarev_minors,
    sample_subset,
    sample_x,
    scan_family,
    verify_counting,
    verify_mahler_basis,
    verify_minima,
    verify_thm3,
    verify_thm4,
)

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_INPUT = 2


def _derived_rng(seed: int, *parts) -> random.Random:
    h = hashlib.sha256(("|".join([str(seed)] + [str(p) for p in parts])).encode()).digest()
    return random.Random(int.from_bytes(h[:8], "big"))


def _digest(obj) -> str:
    return hashlib.sha256(repr(obj).encode()).hexdigest()[:12]


def _field_from_args(args) -> NumberField:
    basis = None
    if getattr(args, "basis", None):
        basis = [[Fraction(x) for x in row.split(",")] for row in args.basis.split(";")]
    return build_field(parse_polynomial(args.poly), basis_override=basis)


def _parse_gens(text: str):
    return [[int(x) for x in row.split(",")] for row in text.split(";")]


def _parse_galois_source(text: str):
    if text == "symmetric":
        return ("symmetric",)
    kind, _, rest = text.partition(":")
    if kind == "pure":
        return ("pure", int(rest))
    if kind == "cyclotomic":
        return ("cyclotomic", int(rest))
    if kind == "perms":
        return ("explicit", [[int(x) for x in p.split(",")] for p in rest.split(";")])
    raise ValueError(f"unknown galois source {text!r}")


# --------------------------------------------------------------------------
# embedding seed cache


def _load_root_seeds(cache_dir, field: NumberField) -> None:
    if not cache_dir:
        return
    seeds = {}
    prefix = hashlib.sha256(repr((field.poly.coeffs, field.basis)).encode()).hexdigest()[:16]
    path = os.path.join(cache_dir, f"roots-{prefix}.json")
    if not os.path.exists(path):
        return
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        for work_str, roots in data.items():
            vals = []
            for re_t, im_t in roots:
                re = mpmath.mpf((re_t[0], int(re_t[1], 16), re_t[2], re_t[3]))
                im = mpmath.mpf((im_t[0], int(im_t[1], 16), im_t[2], im_t[3]))
                vals.append(mpmath.mpc(re, im))
            seeds[int(work_str)] = vals
        field._seed_roots = seeds
    except (ValueError, KeyError, OSError):
        return


def _store_root_seeds(cache_dir, field: NumberField) -> None:
    if not cache_dir or not field._embeddings_cache:
        return
    os.makedirs(cache_dir, exist_ok=True)
    prefix = hashlib.sha256(repr((field.poly.coeffs, field.basis)).encode()).hexdigest()[:16]
    path = os.path.join(cache_dir, f"roots-{prefix}.json")
    data = {}
    for emb in field._embeddings_cache.values():
        roots = []
        for rect in emb.enclosures:
            re_t = rect.re.mid
            im_t = rect.im.mid
            roots.append(
                [
                    [re_t[0], hex(int(re_t[1])), re_t[2], re_t[3]],
                    [im_t[0], hex(int(im_t[1])), im_t[2], im_t[3]],
                ]
            )
        data[str(emb.work_prec)] = roots
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, sort_keys=True)


# --------------------------------------------------------------------------
# simple subcommands


def cmd_field(args) -> int:
    try:
        field = _field_from_args(args)
    except FieldError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    emb = embed(field)
    print(f"degree        {field.degree}")
    print(f"polynomial    {list(field.poly.coeffs)} (ascending)")
    print(f"discriminant  {field.disc}")
    print(f"index [o:Z[theta]] {field.index}")
    print(f"signature     (r1, r2) = {emb.signature}")
    print(f"irreducible   {field.irreducibility or 'UNVERIFIED'}")
    basis_rows = [" + ".join(f"{c}*t^{k}" for k, c in enumerate(row) if c) or "0" for row in field.basis]
    print("integral basis " + "; ".join(basis_rows))
    try:
        print(f"tame disc     {tame_discriminant(field)}")
        print("ramified primes:")
        for p in prime_factors(field.disc):
            data = factor_prime(field, p)
            desc = ", ".join(f"(e={e}, f={f})" for e, f, _ in data.factors)
            print(f"  p={p}: {desc}")
    except PrimeDataUnavailable as e:
        print(f"tame disc     unavailable: {e}")
    return EXIT_OK


def cmd_ideal(args) -> int:
    try:
        field = _field_from_args(args)
        ideal = ideal_from_generators(field, _parse_gens(args.gens))
    except (FieldError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    print(f"index [o:n]  {ideal.index}")
    print("hnf columns  " + "; ".join(",".join(map(str, c)) for c in ideal.basis_columns()))
    return EXIT_OK


def _resolve_ideal(field, args) -> IdealLattice:
    if getattr(args, "ideal_gens", None):
        return ideal_from_generators(field, _parse_gens(args.ideal_gens))
    return IdealLattice.ring_of_integers(field)


def cmd_count(args) -> int:
    try:
        field = _field_from_args(args)
        ideal = _resolve_ideal(field, args)
        emb = embed(field)
        radii = [Fraction(r) for r in args.radii.split(",")]
        if len(radii) == 1:
            box = BoxBody.cube(emb, radii[0])
        else:
            box = BoxBody.from_blocks(emb, radii)
    except (FieldError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    bc = count_box(ideal, box)
    print(f"count {bc.count}")
    print(f"rank  {bc.rank}")
    if args.points:
        for p in bc.points:
            print(" ", ",".join(map(str, p)))
    return EXIT_OK


def cmd_minima(args) -> int:
    try:
        field = _field_from_args(args)
        ideal = _resolve_ideal(field, args)
    except (FieldError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    profile = successive_minima(ideal)
    for i, (lam, w) in enumerate(zip(profile.lambdas, profile.witnesses), 1):
        print(f"lambda_{i} = {lam.mid_float():.12g}   witness {','.join(map(str, w))}")
    det = gram_check(ideal)
    print(f"gram det encloses |disc|*index^2 = {abs(field.disc) * ideal.index**2}")
    return EXIT_OK


def cmd_galois(args) -> int:
    try:
        field = _field_from_args(args)
        action = build_action(field, _parse_galois_source(args.source))
    except (FieldError, GroupError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    print(f"order         {action.order}")
    print(f"provenance    {action.provenance}")
    print(f"certified     {action.certified}")
    print(f"2-homogeneous {is_two_homogeneous(action)}")
    print("generators    " + "; ".join(" ".join(str(i + 1) for i in g) for g in action.generators))
    return EXIT_OK


# --------------------------------------------------------------------------
# verification suites


def _sample_radius(rng: random.Random, lo: Fraction, hi: Fraction) -> Fraction:
    den = rng.choice((1, 2, 4, 8))
    lo_num = math.ceil(lo * den)
    hi_num = math.floor(hi * den)
    return Fraction(rng.randint(lo_num, hi_num), den)


def run_field_suites(spec: FieldSpec, params: SuiteParams, suites) -> tuple:
    """All requested per-field suite records for one field; deterministic in
    (spec, params, suites)."""
    records = []
    logs = []
    t0 = time.perf_counter()
    field = spec.build()
    d = field.degree

    def emit(suite, key, rec, started):
        rec = {"instance": f"{spec.label}/{suite}/{key}", "suite": suite, **rec}
        records.append(rec)
        logs.append(f"{rec['instance']} {1000 * (time.perf_counter() - started):.1f}ms")

    needs_action = any(s in suites for s in ("thm3",))
    action = spec.build_action(field) if needs_action else None

    if "thm3" in suites or "thm4" in suites:
        ideals = small_ideals(field, params.ideal_index_cap, coord_height=2)
        if "thm3" in suites:
            rng = _derived_rng(params.seed, spec.label, "thm3")
            for ideal in ideals:
                ikey = f"idl{ideal.index}-{_digest(ideal.key())}"
                for m in range(1, d + 1):
                    for trial in range(params.x_per_instance):
                        t = time.perf_counter()
                        xs = sample_x(field, ideal, m, rng, params.coordinate_height, params.dependent_rate)
                        s = sample_subset(d, m, rng)
                        rep = verify_thm3(field, ideal, xs, s, action)
                        rec = rep.as_record()
                        rec["inputs"] = _digest((xs, s))
                        emit("thm3", f"{ikey}/m{m}/t{trial}", rec, t)
        if "thm4" in suites:
            rng = _derived_rng(params.seed, spec.label, "thm4")
            for ideal in ideals:
                ikey = f"idl{ideal.index}-{_digest(ideal.key())}"
                for m in range(2, d + 1):
                    for trial in range(params.x_per_instance):
                        t = time.perf_counter()
                        xs = sample_x(field, ideal, m, rng, params.coordinate_height, params.dependent_rate)
                        rep = verify_thm4(field, ideal, xs)
                        rec = rep.as_record()
                        rec["inputs"] = _digest(tuple(xs))
                        emit("thm4", f"{ikey}/m{m}/t{trial}", rec, t)

    if "thm1" in suites or "thm5" in suites:
        rng = _derived_rng(params.seed, spec.label, "counting")
        emb = embed(field)
        box_ideals = [i for i in small_ideals(field, 12, coord_height=1) ]
        for trial in range(params.box_trials):
            t = time.perf_counter()
            ideal = rng.choice(box_ideals)
            radii = [
                _sample_radius(rng, params.box_radius_min, params.box_radius_max)
                for _ in emb.blocks
            ]
            box = BoxBody.from_blocks(emb, radii)
            rep = verify_counting(field, ideal, box)
            base = {
                "ideal_index": ideal.index,
                "radii": [str(r) for r in radii],
                "count": rep.count,
                "rank": rep.rank,
                "volume": f"{rep.volume[0]}*pi^{rep.volume[1]}",
                "inputs": _digest((ideal.key(), tuple(radii))),
            }
            if "thm1" in suites:
                emit("thm1", f"t{trial}", {**base, "pass": rep.lower_ok}, t)
            if "thm5" in suites and rep.rank == d:
                emit("thm5", f"t{trial}", {**base, "pass": bool(rep.upper_ok)}, t)

    if "minima" in suites:
        ideals = small_ideals(field, params.minima_index_cap, coord_height=2)
        for ideal in ideals:
            t = time.perf_counter()
            ikey = f"idl{ideal.index}-{_digest(ideal.key())}"
            rep = verify_minima(field, ideal, action)
            det = gram_check(ideal)
            rec = rep.as_record()
            rec["pass"] = rep.minkowski_ok
            rec["gram_ok"] = True
            rec["gram_rel_width"] = f"{2 * det.rad_float() / abs(det.mid_float()):.3e}"
            emit("minima", ikey, rec, t)

    if "mahler" in suites and d <= 3:
        rng = _derived_rng(params.seed, spec.label, "mahler")
        emb = embed(field)
        o = IdealLattice.ring_of_integers(field)
        lam_hint = successive_minima(o).lambdas[-1].mid_float()
        trials = params.mahler_trials if d <= 2 else max(10, params.mahler_trials // 10)
        done = 0
        attempts = 0
        while done < trials and attempts < 30 * trials:
            attempts += 1
            t = time.perf_counter()
            scale = Fraction(rng.randint(4, 16), 4)
            radius = Fraction(math.ceil(d * lam_hint * 4), 4) * scale / 2
            radii = [radius * Fraction(rng.randint(4, 8), 4) for _ in emb.blocks]
            box = BoxBody.from_blocks(emb, radii)
            rep = verify_mahler_basis(field, o, box)
            if not rep.premise:
                continue
            rec = rep.as_record()
            rec["radii"] = [str(r) for r in radii]
            emit("mahler", f"t{done}", rec, t)
            done += 1

    if "chebotarev" in suites and spec is not None:
        pass  # global suite, handled once outside the per-field loop

    logs.append(f"{spec.label} total {time.perf_counter() - t0:.2f}s")
    return records, logs


def _field_job(payload):
    spec, params, suites, cache_dir = payload
    if cache_dir:
        field_probe = spec.build()
        _load_root_seeds(cache_dir, field_probe)
        # the freshly built field carries the seeds through module caches only
    records, logs = run_field_suites(spec, params, suites)
    return spec.label, records, logs


def run_global_suites(config: CorpusConfig, suites) -> tuple:
    """Suites that are not per-field: chebotarev and the family scans."""
    records = []
    logs = []
    params = config.suite
    if "chebotarev" in suites:
        for p in params.chebotarev_primes:
            t = time.perf_counter()
            rep = chebotarev_minors(p)
            records.append(
                {"instance": f"chebotarev/p{p}", "suite": "chebotarev", **rep.as_record()}
            )
            logs.append(f"chebotarev/p{p} {time.perf_counter() - t:.2f}s")
    if "scan" in suites:
        t = time.perf_counter()
        rows, slopes = run_pure_scan(params.scan_pure_degree, params.scan_pure_pmax)
        target = Fraction(1, params.scan_pure_degree * (params.scan_pure_degree - 1))
        slope2 = slopes.get(2)
        ok = slope2 is not None and abs(slope2 - float(target)) <= 0.05
        records.append(
            {
                "instance": f"scan/pure-d{params.scan_pure_degree}",
                "suite": "scan",
                "fields": len(rows),
                "slope_lambda2": None if slope2 is None else f"{slope2:.6f}",
                "target": f"{float(target):.6f}",
                "pass": ok,
            }
        )
        logs.append(f"scan {time.perf_counter() - t:.2f}s")
    return records, logs


def run_pure_scan(d: int, pmax: int):
    from .fields import pure_cubic_field, primes_upto

    entries = []
    for p in primes_upto(pmax):
        if p < 5:
            continue
        if d == 3:
            try:
                entries.append((f"x^3-{p}", pure_cubic_field(p)))
            except FieldError as e:
                entries.append((f"x^3-{p}", e))
        else:
            try:
                entries.append((f"x^{d}-{p}", build_field(parse_polynomial(f"x^{d}-{p}"))))
            except FieldError as e:
                entries.append((f"x^{d}-{p}", e))
    result = scan_family(entries)
    return result.rows, result.slopes


def run_quadratic_scan(mmax: int):
    from .fields import is_squarefree, quadratic_field

    entries = []
    for m in range(2, mmax + 1):
        if is_squarefree(m):
            entries.append((f"x^2-{m}", quadratic_field(m)))
    result = scan_family(entries)
    return result.rows, result.slopes


def cmd_verify(args) -> int:
    try:
        config = load_config(args.config) if args.config else default_corpus()
        if args.seed is not None:
            config = CorpusConfig(fields=config.fields, suite=replace(config.suite, seed=args.seed))
        if args.precision_ceiling is not None:
            config = CorpusConfig(
                fields=config.fields,
                suite=replace(config.suite, precision_ceiling=args.precision_ceiling),
            )
        suites = tuple(args.suites.split(",")) if args.suites else DEFAULT_SUITES
        unknown = set(suites) - set(DEFAULT_SUITES)
        if unknown:
            raise ValueError(f"unknown suites: {sorted(unknown)}")
        if not config.fields:
            raise ValueError("config declares no fields")
    except (OSError, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT

    os.makedirs(args.out, exist_ok=True)
    all_records = []
    all_logs = []
    per_field = [s for s in suites if s not in ("chebotarev", "scan")]
    if per_field:
        payloads = [(spec, config.suite, tuple(per_field), args.cache_dir) for spec in config.fields]
        if args.workers > 1:
            with ProcessPoolExecutor(max_workers=args.workers) as pool:
                results = {label: (recs, logs) for label, recs, logs in pool.map(_field_job, payloads)}
            for spec in config.fields:
                recs, logs = results[spec.label]
                all_records.extend(recs)
                all_logs.extend(logs)
        else:
            for payload in payloads:
                _, recs, logs = _field_job(payload)
                all_records.extend(recs)
                all_logs.extend(logs)
    grecords, glogs = run_global_suites(config, suites)
    all_records.extend(grecords)
    all_logs.extend(glogs)

    by_suite = {}
    for rec in all_records:
        by_suite.setdefault(rec["suite"], []).append(rec)
    failures = 0
    tainted = 0
    zeros = 0
    summary_rows = []
    for suite in suites:
        recs = by_suite.get(suite, [])
        path = os.path.join(args.out, f"verify_{suite}.jsonl")
        with open(path, "w", encoding="utf-8") as fh:
            for rec in recs:
                fh.write(json.dumps(rec, sort_keys=True) + "\n")
        n_fail = sum(1 for r in recs if r.get("pass") is False)
        n_zero = sum(1 for r in recs if r.get("zero"))
        n_taint = sum(1 for r in recs if r.get("uncertified_group"))
        failures += n_fail
        zeros += n_zero
        tainted += n_taint
        summary_rows.append([suite, len(recs), len(recs) - n_fail, n_fail, n_zero, n_taint])
    with open(os.path.join(args.out, "summary.csv"), "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["suite", "instances", "passes", "failures", "zero_flags", "tainted"])
        w.writerows(summary_rows)
    with open(os.path.join(args.out, "run.log"), "w", encoding="utf-8") as fh:
        fh.write("\n".join(all_logs) + "\n")
    total = sum(r[1] for r in summary_rows)
    print(
        f"suites={','.join(suites)} instances={total} failures={failures} "
        f"zero_flags={zeros} tainted={tainted}"
    )
    return EXIT_VERIFY_FAIL if failures else EXIT_OK


def cmd_scan(args) -> int:
    try:
        if args.pure_d:
            rows, slopes = run_pure_scan(args.pure_d, args.pmax)
        elif args.quadratic_mmax:
            rows, slopes = run_quadratic_scan(args.quadratic_mmax)
        else:
            raise ValueError("choose --pure-d with --pmax, or --quadratic-mmax")
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        w = csv.writer(out)
        dmax = max((len(r.lambdas) for r in rows if r.error is None), default=0)
        w.writerow(["label", "disc", "tame_disc", "index"] + [f"lambda_{i}" for i in range(1, dmax + 1)])
        for r in rows:
            if r.error is not None:
                w.writerow([r.label, "ERROR", r.error, "", *[""] * dmax])
            else:
                w.writerow(
                    [r.label, r.disc, r.tame, r.index]
                    + [f"{x:.12f}" for x in r.lambdas]
                )
        slope_cells = []
        for m in range(1, dmax + 1):
            s = slopes.get(m)
            slope_cells.append("n/a" if s is None else f"{s:.6f}")
        w.writerow(["slopes(log lambda_m vs log |disc|)", "", "", ""] + slope_cells)
    finally:
        if args.out:
            out.close()
    return EXIT_OK


# --------------------------------------------------------------------------


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="nfbox",
        description="Exact and certified counting of bounded elements in ideal lattices of number fields.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field", help="field invariants: discriminant, tame discriminant, signature")
    p.add_argument("poly", help="monic integer polynomial, e.g. 'x^2+1'")
    p.add_argument("--basis", help="integral basis rows 'a,b;c,d' (rational entries)")
    p.set_defaults(fn=cmd_field)

    p = sub.add_parser("ideal", help="HNF and index of an ideal from generators")
    p.add_argument("poly")
    p.add_argument("--basis")
    p.add_argument("--gens", required=True, help="generators 'c0,c1;d0,d1' over the integral basis")
    p.set_defaults(fn=cmd_ideal)

    p = sub.add_parser("count", help="exact lattice point count in a symmetric box")
    p.add_argument("poly")
    p.add_argument("--basis")
    p.add_argument("--ideal-gens")
    p.add_argument("--radii", required=True, help="one rational per real embedding/conjugate pair, comma separated (single value broadcast)")
    p.add_argument("--points", action="store_true", help="print the points")
    p.set_defaults(fn=cmd_count)

    p = sub.add_parser("minima", help="certified successive minima and Gram check")
    p.add_argument("poly")
    p.add_argument("--basis")
    p.add_argument("--ideal-gens")
    p.set_defaults(fn=cmd_minima)

    p = sub.add_parser("galois", help="Galois action on embeddings")
    p.add_argument("poly")
    p.add_argument("--basis")
    p.add_argument("--source", required=True, help="pure:M | cyclotomic:N | symmetric | perms:1,2;2,1")
    p.set_defaults(fn=cmd_galois)

    p = sub.add_parser("verify", help="run verification suites over a corpus")
    p.add_argument("--config", help="corpus JSON (defaults to the built-in corpus)")
    p.add_argument("--suites", help=f"comma list from {','.join(DEFAULT_SUITES)}")
    p.add_argument("--out", default="reports", help="output directory")
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--precision-ceiling", type=int)
    p.add_argument("--cache-dir", help="embedding seed cache directory")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("scan", help="family scans with exponent fitting (CSV)")
    p.add_argument("--pure-d", type=int, help="pure fields x^d - p")
    p.add_argument("--pmax", type=int, default=97)
    p.add_argument("--quadratic-mmax", type=int)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.set_defaults(fn=cmd_scan)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except FieldError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
