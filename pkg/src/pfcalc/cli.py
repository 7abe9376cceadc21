"""Command-line front end: JSON job configs in, deterministic reports out.

Eight commands cover the library surface: ring-of-module, schur-table,
dimfn, image-closure, dim-per-prime, good-primes, equivariance, taylor.
Primary output (text or json) is byte-identical across reruns of the same
config; csv additionally carries wall-clock timings.  Groebner bases for
image closures are cached on disk keyed by a content hash of the graph
ideal, the monomial order, and the field tag.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import time
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import geometry
from .coordring import generator_varset, graded_piece
from .fpmod import FPModule
from .functors import binomial_eval, dimension_function, parse_functor
from .geometry import (ClosedSubsetAtRank, PolyTransformation, SizeGuards,
                       SizeGuardExceeded, closed_subset, dimension_per_prime,
                       equivariance_check, good_primes, image_closure,
                       sum_of_powers, target_varset)
from .groebner import GroebnerBasis, ideal_dimension
from .poly import Grevlex, MultiPoly, VarSet, format_poly, parse_poly
from .rings import ZZ, BaseRing, QuotientRing, fraction_field_reduction, \
    parse_quotient_payload, ring_from_tag

COMMANDS = ("ring-of-module", "schur-table", "dimfn", "image-closure",
            "dim-per-prime", "good-primes", "equivariance", "taylor")

CACHE_VERSION = "1"


class ConfigError(ValueError):
    """Invalid job config; the message names the offending key."""


# ---------------------------------------------------------------------------
# Config plumbing


def _check_keys(cfg: dict, allowed: Sequence[str], where: str = "config"):
    unknown = sorted(set(cfg) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown {where} key {unknown[0]!r}")


def _need(cfg: dict, key: str, typ, where: str = "config"):
    if key not in cfg:
        raise ConfigError(f"missing {where} key {key!r}")
    val = cfg[key]
    if typ is not None and not isinstance(val, typ):
        raise ConfigError(f"{where} key {key!r} has the wrong type "
                          f"({type(val).__name__})")
    return val


def _opt(cfg: dict, key: str, typ, default, where: str = "config"):
    if key not in cfg:
        return default
    return _need(cfg, key, typ, where)


def _prime_list(cfg: dict, key: str = "primes") -> List[int]:
    primes = _need(cfg, key, list)
    for p in primes:
        if not isinstance(p, int) or p < 2:
            raise ConfigError(f"config key {key!r} must list primes >= 2, got {p!r}")
    return primes


def _ring_from_config(cfg: dict, key: str = "ring") -> BaseRing:
    tag = _need(cfg, key, str)
    try:
        return ring_from_tag(tag)
    except ValueError as exc:
        raise ConfigError(f"config key {key!r}: {exc}") from None


def _field_from_config(cfg: dict, key: str = "field") -> BaseRing:
    ring = _ring_from_config(cfg, key)
    if not ring.is_field():
        raise ConfigError(f"config key {key!r} must name a field, got {ring.tag()}")
    return ring


def _varset_from_config(cfg: dict) -> VarSet:
    names = _need(cfg, "variables", list)
    if not names or not all(isinstance(n, str) for n in names):
        raise ConfigError("config key 'variables' must be a nonempty list of names")
    weights = _opt(cfg, "weights", list, None)
    if weights is None:
        return VarSet(tuple(names))
    if len(weights) != len(names) or not all(
            isinstance(w, int) and w >= 1 for w in weights):
        raise ConfigError("config key 'weights' must list positive integers, "
                          "one per variable")
    return VarSet(tuple(names), tuple(weights))


def _polys_from_config(cfg: dict, key: str, ring: BaseRing,
                       vs: VarSet) -> List[MultiPoly]:
    texts = _need(cfg, key, list)
    out = []
    for t in texts:
        if not isinstance(t, str):
            raise ConfigError(f"config key {key!r} must list polynomial strings")
        try:
            out.append(parse_poly(t, ring, vs))
        except ValueError as exc:
            raise ConfigError(f"config key {key!r}: {exc}") from None
    return out


def _module_from_config(cfg: dict, ring: BaseRing) -> FPModule:
    mod = _need(cfg, "module", dict)
    _check_keys(mod, ("ngens", "relations"), "module")
    ngens = _need(mod, "ngens", int, "module")
    if ngens < 1:
        raise ConfigError("module key 'ngens' must be >= 1")
    relations = _opt(mod, "relations", list, [], "module")
    rows = []
    for row in relations:
        if not isinstance(row, list) or len(row) != ngens:
            raise ConfigError(f"module key 'relations': row {row!r} must have "
                              f"{ngens} entries")
        rows.append(tuple(_scalar_from_config(x, ring) for x in row))
    return FPModule(ring, ngens, tuple(rows))


def _scalar_from_config(x, ring: BaseRing):
    if isinstance(x, int):
        return ring.from_int(x)
    if isinstance(x, str):
        try:
            if isinstance(ring, QuotientRing):
                return parse_quotient_payload(ring, x)
            return ring.coerce(Fraction(x))
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"bad scalar {x!r}: {exc}") from None
    raise ConfigError(f"bad scalar {x!r}: expected int or string")


TRANSFORMATION_SHORTCUTS = {
    "cube-sum": (2, 3, 1),
    "four-squares": (4, 2, 2),
}


def _transformation_from_config(cfg: dict) -> PolyTransformation:
    tr = _need(cfg, "transformation", (str, dict))
    if isinstance(tr, str):
        if tr not in TRANSFORMATION_SHORTCUTS:
            raise ConfigError(
                f"config key 'transformation': unknown template {tr!r}; "
                f"known: {sorted(TRANSFORMATION_SHORTCUTS)}")
        return sum_of_powers(*TRANSFORMATION_SHORTCUTS[tr])
    _check_keys(tr, ("template", "num_forms", "power", "form_degree"),
                "transformation")
    template = _need(tr, "template", str, "transformation")
    if template != "sum-of-powers":
        raise ConfigError(f"transformation key 'template': unknown value "
                          f"{template!r}; known: ['sum-of-powers']")
    num_forms = _need(tr, "num_forms", int, "transformation")
    power = _need(tr, "power", int, "transformation")
    form_degree = _opt(tr, "form_degree", int, 1, "transformation")
    if num_forms < 1 or power < 1 or form_degree < 1:
        raise ConfigError("transformation sizes must be >= 1")
    return sum_of_powers(num_forms, power, form_degree)


# ---------------------------------------------------------------------------
# Groebner basis disk cache


def serialize_basis(gb: GroebnerBasis) -> bytes:
    doc = {
        "version": CACHE_VERSION,
        "ring": gb.ring.tag(),
        "order": gb.order.tag(),
        "names": list(gb.varset.names),
        "weights": list(gb.varset.weights),
        "generators": [format_poly(g) for g in gb.generators],
    }
    return json.dumps(doc, sort_keys=True).encode()


def deserialize_basis(blob: bytes) -> GroebnerBasis:
    from .poly import order_from_tag
    doc = json.loads(blob.decode())
    if doc.get("version") != CACHE_VERSION:
        raise ValueError(f"cache version {doc.get('version')!r} != {CACHE_VERSION}")
    ring = ring_from_tag(doc["ring"])
    vs = VarSet(tuple(doc["names"]), tuple(doc["weights"]))
    order = order_from_tag(doc["order"])
    gens = tuple(parse_poly(t, ring, vs) for t in doc["generators"])
    return GroebnerBasis(gens, order,
                         frozenset(g.leading(order)[0] for g in gens), ring, vs)


class GBCache:
    """Content-addressed Groebner basis store under a directory."""

    def __init__(self, directory: str):
        self.directory = directory

    @staticmethod
    def key(generator_texts: Sequence[str], order_tag: str, ring_tag: str) -> str:
        h = hashlib.sha256()
        h.update(CACHE_VERSION.encode())
        h.update(b"\x00" + order_tag.encode())
        h.update(b"\x00" + ring_tag.encode())
        for t in generator_texts:
            h.update(b"\x00" + t.encode())
        return h.hexdigest()

    def _path(self, key: str) -> str:
        return os.path.join(self.directory, f"gb-{key}.json")

    def lookup(self, key: str) -> Optional[GroebnerBasis]:
        path = self._path(key)
        if not os.path.exists(path):
            return None
        try:
            with open(path, "rb") as fh:
                return deserialize_basis(fh.read())
        except (ValueError, KeyError, OSError) as exc:
            print(f"warning: ignoring corrupt cache entry {path}: {exc}",
                  file=sys.stderr)
            return None

    def store(self, key: str, gb: GroebnerBasis):
        os.makedirs(self.directory, exist_ok=True)
        path = self._path(key)
        tmp = path + ".tmp"
        with open(tmp, "wb") as fh:
            fh.write(serialize_basis(gb))
        os.replace(tmp, path)


def _cached_image_closure(alpha: PolyTransformation, n: int, ring: BaseRing,
                          guards: SizeGuards,
                          cache: Optional[GBCache]) -> ClosedSubsetAtRank:
    if cache is None:
        return image_closure(alpha, n, ring, guards)
    src_vs, coords = alpha.rule(n, ring)
    graph_texts = [f"y{i + 1} - ({format_poly(c)})"
                   for i, c in enumerate(coords)]
    key = GBCache.key(graph_texts, f"elim({len(src_vs)})", ring.tag())
    hit = cache.lookup(key)
    if hit is not None:
        return closed_subset(alpha.target, n, ring, list(hit.generators))
    subset = image_closure(alpha, n, ring, guards)
    cache.store(key, subset.gb)
    return subset


# ---------------------------------------------------------------------------
# Command handlers.  Each returns (json_doc, text_lines, csv_spec) where
# csv_spec is None or (header, rows).


def _cmd_ring_of_module(cfg: dict, args) -> tuple:
    _check_keys(cfg, ("ring", "module", "degrees", "max_degree"))
    ring = _ring_from_config(cfg)
    module = _module_from_config(cfg, ring)
    if "degrees" in cfg:
        degrees = _need(cfg, "degrees", list)
        if not all(isinstance(d, int) and d >= 0 for d in degrees):
            raise ConfigError("config key 'degrees' must list integers >= 0")
    elif "max_degree" in cfg:
        top = _need(cfg, "max_degree", int)
        if top < 0:
            raise ConfigError("config key 'max_degree' must be >= 0")
        degrees = list(range(top + 1))
    else:
        raise ConfigError("missing config key 'degrees' (or 'max_degree')")
    if max(degrees, default=0) > args.max_degree:
        raise SizeGuardExceeded("degree exceeds the size guard",
                                degree=max(degrees), limit=args.max_degree)

    lines = [f"coordinate ring of a module over {ring.tag()}, "
             f"{module.ngens} generator(s), {len(module.relations)} relation(s)",
             "degree  dimension  spanning set"]
    rows = []
    for d in sorted(degrees):
        piece = graded_piece(module, d)
        span = ", ".join(format_poly(b) for b in piece.basis) or "0"
        lines.append(f"{d:>6}  {piece.dimension:>9}  {span}")
        rows.append({"degree": d, "dimension": piece.dimension,
                     "basis": [format_poly(b) for b in piece.basis]})
    doc = {"command": "ring-of-module", "ring": ring.tag(),
           "ngens": module.ngens, "pieces": rows}
    csv_spec = (("degree", "dimension", "basis_size"),
                [(r["degree"], r["dimension"], len(r["basis"])) for r in rows])
    return doc, lines, csv_spec


def _cmd_schur_table(cfg: dict, args) -> tuple:
    from .schur import SchurAlgebra
    _check_keys(cfg, ("n", "d", "ring"))
    n = _need(cfg, "n", int)
    d = _need(cfg, "d", int)
    if n < 1 or d < 0:
        raise ConfigError("config keys 'n' and 'd' must be positive")
    if d > args.max_degree:
        raise SizeGuardExceeded("degree exceeds the size guard",
                                degree=d, limit=args.max_degree)
    ring = _ring_from_config(cfg) if "ring" in cfg else ZZ
    algebra = SchurAlgebra(n, d, ring)
    lines = [f"structure constants of S_<={d}(U), dim U = {n}, "
             f"over {ring.tag()} ({algebra.dimension()} basis elements)"]
    triples = []
    basis = algebra.basis
    for alpha in basis:
        for beta in basis:
            prod = algebra.structure_constants(alpha, beta)
            for gamma in sorted(prod.coeffs):
                c = ring.fmt(prod.coeffs[gamma])
                triples.append((alpha, beta, gamma, c))
                lines.append(f"({alpha}, {beta}, {gamma}) -> {c}")
    doc = {"command": "schur-table", "n": n, "d": d, "ring": ring.tag(),
           "dimension": algebra.dimension(),
           "triples": [{"alpha": list(a), "beta": list(b),
                        "gamma": list(g), "c": c} for a, b, g, c in triples]}
    csv_spec = (("alpha", "beta", "gamma", "c"),
                [(" ".join(map(str, a)), " ".join(map(str, b)),
                  " ".join(map(str, g)), c) for a, b, g, c in triples])
    return doc, lines, csv_spec


def _cmd_dimfn(cfg: dict, args) -> tuple:
    _check_keys(cfg, ("functor", "primes", "window"))
    text = _need(cfg, "functor", str)
    try:
        expr = parse_functor(text)
    except ValueError as exc:
        raise ConfigError(f"config key 'functor': {exc}") from None
    primes = _prime_list(cfg)
    window = _need(cfg, "window", int)
    if expr.degree() > args.max_degree:
        raise SizeGuardExceeded("functor degree exceeds the size guard",
                                degree=expr.degree(), limit=args.max_degree)
    try:
        report = dimension_function(expr, primes, window)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    lines = [f"dimension function of {expr}, window 0..{window}"]
    header = "prime  " + "  ".join(f"n={n}" for n in range(window + 1))
    lines.append(header)
    for p in sorted(report.table):
        label = "QQ" if p == 0 else f"F{p}"
        vals = "  ".join(f"{v:>{len(f'n={i}')}}" for i, v in
                         enumerate(report.table[p]))
        lines.append(f"{label:>5}  {vals}")
    for p in sorted(report.coefficients):
        label = "QQ" if p == 0 else f"F{p}"
        lines.append(f"binomial coefficients over {label}: "
                     f"{list(report.coefficients[p])}")
    lines.append(f"jumping primes: {list(report.jumping_primes)}")
    doc = {"command": "dimfn", "functor": str(expr), "window": window,
           "table": {str(p): list(v) for p, v in report.table.items()},
           "coefficients": {str(p): list(v)
                            for p, v in report.coefficients.items()},
           "jumping_primes": list(report.jumping_primes)}
    csv_spec = (("prime", "rank", "dimension"),
                [(p, n, v) for p in sorted(report.table)
                 for n, v in enumerate(report.table[p])])
    return doc, lines, csv_spec


def _geometry_guards(args) -> SizeGuards:
    return SizeGuards(max_variables=args.max_variables,
                      max_basis=args.max_basis, max_degree=args.max_degree)


def _cmd_image_closure(cfg: dict, args) -> tuple:
    _check_keys(cfg, ("transformation", "rank", "field"))
    alpha = _transformation_from_config(cfg)
    n = _need(cfg, "rank", int)
    if n < 1:
        raise ConfigError("config key 'rank' must be >= 1")
    ring = _field_from_config(cfg)
    subset = _cached_image_closure(alpha, n, ring, _geometry_guards(args),
                                   args.cache)
    dim = ideal_dimension(subset.gb)
    lines = [f"image closure of {alpha.name} at rank {n} over {ring.tag()}",
             f"ideal generators ({len(subset.generators)}):"]
    lines.extend(f"  {format_poly(g)}" for g in subset.generators)
    lines.append(f"dimension: {dim}")
    doc = {"command": "image-closure", "transformation": alpha.name,
           "rank": n, "field": ring.tag(), "dimension": dim,
           "generators": [format_poly(g) for g in subset.generators]}
    csv_spec = (("prime", "dimension", "basis_size", "time_ms"),
                [(ring.characteristic(), dim, len(subset.gb.generators),
                  args.elapsed_ms())])
    return doc, lines, csv_spec


def _cmd_dim_per_prime(cfg: dict, args) -> tuple:
    _check_keys(cfg, ("transformation", "rank", "primes"))
    alpha = _transformation_from_config(cfg)
    n = _need(cfg, "rank", int)
    if n < 1:
        raise ConfigError("config key 'rank' must be >= 1")
    primes = _prime_list(cfg)
    guards = _geometry_guards(args)

    def one(p: int):
        ring = fraction_field_reduction(ZZ, p)
        t0 = time.perf_counter()
        subset = _cached_image_closure(alpha, n, ring, guards, args.cache)
        ms = int((time.perf_counter() - t0) * 1000)
        return p, ideal_dimension(subset.gb), len(subset.gb.generators), ms

    plist = [0] + [p for p in primes if p != 0]
    if args.threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            results = list(pool.map(one, plist))
    else:
        results = [one(p) for p in plist]
    lines = [f"dimension of the image closure of {alpha.name} at rank {n}",
             "field  dimension"]
    for p, dim, _, _ in results:
        label = "QQ" if p == 0 else f"F{p}"
        lines.append(f"{label:>5}  {dim:>9}")
    doc = {"command": "dim-per-prime", "transformation": alpha.name, "rank": n,
           "dimensions": {str(p): dim for p, dim, _, _ in results}}
    csv_spec = (("prime", "dimension", "basis_size", "time_ms"),
                [(p, dim, sz, ms) for p, dim, sz, ms in results])
    return doc, lines, csv_spec


def _cmd_good_primes(cfg: dict, args) -> tuple:
    _check_keys(cfg, ("variables", "weights", "generators", "primes"))
    vs = _varset_from_config(cfg)
    if len(vs) > args.max_variables:
        raise SizeGuardExceeded("too many variables",
                                variables=len(vs), limit=args.max_variables)
    gens = _polys_from_config(cfg, "generators", ZZ, vs)
    primes = _prime_list(cfg)
    t0 = time.perf_counter()
    try:
        report = good_primes(gens, primes)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    ms = int((time.perf_counter() - t0) * 1000)
    lines = [f"prime specialization of the ideal "
             f"<{', '.join(format_poly(g) for g in gens)}>",
             f"generic basis over QQ ({len(report.generic_basis)} elements), "
             f"dimension {report.generic_dimension}, r = {report.r}"]
    for v in report.verdicts:
        status = "good" if v.good else "BAD"
        how = "recomputed" if v.recomputed else "verified by specialization"
        lines.append(f"p={v.prime}: {status} (dimension {v.dimension}, {how})")
    doc = {"command": "good-primes", "r": report.r,
           "generic_dimension": report.generic_dimension,
           "generic_basis": [format_poly(g) for g in report.generic_basis],
           "verdicts": [{"prime": v.prime, "good": v.good,
                         "dimension": v.dimension,
                         "recomputed": v.recomputed} for v in report.verdicts]}
    csv_spec = (("prime", "dimension", "basis_size", "time_ms"),
                [(v.prime, v.dimension, len(report.generic_basis), ms)
                 for v in report.verdicts])
    return doc, lines, csv_spec


def _cmd_equivariance(cfg: dict, args) -> tuple:
    _check_keys(cfg, ("transformation", "rank", "field"))
    alpha = _transformation_from_config(cfg)
    n = _need(cfg, "rank", int)
    if n < 1:
        raise ConfigError("config key 'rank' must be >= 1")
    ring = _field_from_config(cfg)
    subset = _cached_image_closure(alpha, n, ring, _geometry_guards(args),
                                   args.cache)
    ok = equivariance_check(subset)
    dim = ideal_dimension(subset.gb)
    verdict = "PASS" if ok else "FAIL"
    lines = [f"equivariance of the image closure of {alpha.name} at rank {n} "
             f"over {ring.tag()}",
             f"checked on generators: {verdict}"]
    doc = {"command": "equivariance", "transformation": alpha.name, "rank": n,
           "field": ring.tag(), "equivariant_on_generators": ok}
    csv_spec = (("prime", "dimension", "basis_size", "time_ms"),
                [(ring.characteristic(), dim, len(subset.gb.generators),
                  args.elapsed_ms())])
    return doc, lines, csv_spec


def _cmd_taylor(cfg: dict, args) -> tuple:
    _check_keys(cfg, ("variables", "weights", "polynomial", "direction_count",
                      "field"))
    vs = _varset_from_config(cfg)
    ring = _field_from_config(cfg) if "field" in cfg else \
        fraction_field_reduction(ZZ, 0)
    text = _need(cfg, "polynomial", str)
    try:
        f = parse_poly(text, ring, vs)
    except ValueError as exc:
        raise ConfigError(f"config key 'polynomial': {exc}") from None
    m = _need(cfg, "direction_count", int)
    if not 1 <= m <= len(vs):
        raise ConfigError("config key 'direction_count' must lie in "
                          f"1..{len(vs)}")
    p = ring.characteristic()
    try:
        e, hs = geometry.taylor_directional(f, m, p)
    except geometry.NoDependence as exc:
        raise ConfigError(str(exc)) from None
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    q = p ** e if p else 1
    lines = [f"directional expansion of {format_poly(f)} over {ring.tag()} "
             f"in the first {m} variable(s)",
             f"lowest order: t^{q}" + (f" = t^({p}^{e})" if p else ""),
             "coefficients h_i with sum h_i * y_i^q:"]
    lines.extend(f"  h_{i + 1} = {format_poly(h)}" for i, h in enumerate(hs))
    doc = {"command": "taylor", "polynomial": format_poly(f),
           "field": ring.tag(), "e": e, "q": q,
           "h": [format_poly(h) for h in hs]}
    return doc, lines, None


HANDLERS = {
    "ring-of-module": _cmd_ring_of_module,
    "schur-table": _cmd_schur_table,
    "dimfn": _cmd_dimfn,
    "image-closure": _cmd_image_closure,
    "dim-per-prime": _cmd_dim_per_prime,
    "good-primes": _cmd_good_primes,
    "equivariance": _cmd_equivariance,
    "taylor": _cmd_taylor,
}


# ---------------------------------------------------------------------------
# Rendering and entry point


def _render_csv(csv_spec) -> str:
    if csv_spec is None:
        return ""
    header, rows = csv_spec
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def _emit(args, doc: dict, lines: List[str], csv_spec):
    if args.format == "json":
        primary = json.dumps(doc, indent=2, sort_keys=True) + "\n"
        ext = "json"
    elif args.format == "csv":
        if csv_spec is None:
            raise ConfigError(f"command {doc['command']!r} has no csv output")
        primary = _render_csv(csv_spec)
        ext = "csv"
    else:
        primary = "\n".join(lines) + "\n"
        ext = "txt"
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        base = os.path.join(args.out, doc["command"])
        with open(f"{base}.{ext}", "w") as fh:
            fh.write(primary)
        if csv_spec is not None and ext != "csv":
            with open(f"{base}.csv", "w") as fh:
                fh.write(_render_csv(csv_spec))
    else:
        sys.stdout.write(primary)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pfcalc",
        description="Exact computations with coordinate rings of modules, "
                    "Schur algebras, polynomial functors, and closed subsets "
                    "of functor spaces at finite rank.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True,
                        help="JSON job config file")
    parser.add_argument("--out", default=None,
                        help="directory for output files (default: stdout)")
    parser.add_argument("--format", choices=("text", "csv", "json"),
                        default="text")
    parser.add_argument("--cache-dir", default=None,
                        help="Groebner basis cache directory "
                             "(default: $PFCALC_CACHE_DIR)")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker threads for per-prime loops")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for randomized property commands")
    parser.add_argument("--max-variables", type=int, default=40)
    parser.add_argument("--max-basis", type=int, default=5000)
    parser.add_argument("--max-degree", type=int, default=8)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    cache_dir = args.cache_dir or os.environ.get("PFCALC_CACHE_DIR")
    args.cache = GBCache(cache_dir) if cache_dir else None
    start = time.perf_counter()
    args.elapsed_ms = lambda: int((time.perf_counter() - start) * 1000)
    try:
        with open(args.config) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"error: config is not valid JSON: {exc}", file=sys.stderr)
        return 2
    if not isinstance(cfg, dict):
        print("error: config must be a JSON object", file=sys.stderr)
        return 2
    import random
    random.seed(args.seed)
    try:
        doc, lines, csv_spec = HANDLERS[args.command](cfg, args)
        _emit(args, doc, lines, csv_spec)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SizeGuardExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
