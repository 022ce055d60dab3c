"""Command-line front end: ``lievar {invariants,table,verify,compare,hasse}``.

Exit codes: 0 success, 1 verification or check failure, 2 usage or lookup
error, 3 parse error.
"""

from __future__ import annotations

import argparse
import os
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .catalog import (Catalog, CatalogError, CatalogParseError, UnknownLabelError, default_catalog,
                      format_ref, get_set, parse_ref)
from .degeneration import (CertificateParseError, CertStore, Comparator, certificate_paths,
                           fingerprint, load_certificate, verify_paths)
from .exactfield import ScalarSyntaxError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PARSE = 0, 1, 2, 3
EXPECTED_DIR = Path(__file__).parent / "data" / "expected"


class UsageError(Exception):
    pass


def _catalog(args) -> Catalog:
    if getattr(args, "catalog", None):
        os.environ["LIEVAR_CATALOG"] = str(args.catalog)
    return default_catalog()


def _params(items) -> dict:
    out = {}
    for item in items or ():
        k, sep, v = item.partition("=")
        if not sep or not k.strip() or not v.strip():
            raise UsageError(f"bad --param {item!r} (want name=value)")
        out[k.strip()] = v.strip().replace(" ", "")
    return out


def bind(ref: str, params: dict, catalog: Catalog, strict: bool = True) -> str:
    """Attach the --param values that ``ref``'s catalog entry actually has."""
    label, b = parse_ref(ref)
    entry = catalog.entry(label)
    used = {k: v for k, v in params.items() if k in entry.param_names}
    if strict and len(used) != len(params):
        extra = sorted(set(params) - set(used))
        raise UsageError(f"{entry.label} has no parameter {', '.join(extra)}")
    b.update(used)
    return format_ref(label, b)


def _row(ref: str, catalog: Catalog) -> str:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        L = catalog.get(ref)
    return fingerprint(L).check().table_row()


def _row_job(ref):
    return _row(ref, default_catalog())


def _header(n: int) -> str:
    return f"# ref\th0..h{n} | b1..b{n} | nil_class solv_class orbit_dim"


def cmd_invariants(args) -> int:
    cat = _catalog(args)
    ref = bind(args.ref, _params(args.param), cat)
    L = cat.get(ref)
    print(_header(L.n))
    print(f"{ref}\t{_row(ref, cat)}")
    return EXIT_OK


def read_expected(name: str) -> dict:
    """ref -> 'h.. | b.. | n s orbit' from the shipped table for set ``name``."""
    path = EXPECTED_DIR / f"{name}.tsv"
    if not path.exists():
        raise UsageError(f"no expected table for set {name!r}")
    out = {}
    for line in path.read_text(encoding="utf-8").splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        ref, h, b, n, s, orbit = cols[:6]
        out[ref] = f"{h} | {b} | {n} {s} {orbit}"
    return out


def cmd_table(args) -> int:
    cat = _catalog(args)
    aset = get_set(args.set)
    refs = list(aset.refs)
    jobs = args.jobs or os.cpu_count() or 1
    if jobs > 1 and len(refs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            rows = list(ex.map(_row_job, refs))
    else:
        rows = [_row(r, cat) for r in refs]
    n = cat.get(refs[0]).n if refs else 0
    print(_header(n))
    for r, row in zip(refs, rows):
        print(f"{r}\t{row}")
    if not args.check:
        return EXIT_OK
    expected = read_expected(aset.name)
    bad = 0
    for r, row in zip(refs, rows):
        want = expected.get(r)
        if want is None:
            print(f"MISSING\t{r}\tno expected row", file=sys.stderr)
            bad += 1
        elif want != row:
            print(f"MISMATCH\t{r}\tgot {row}\texpected {want}", file=sys.stderr)
            bad += 1
    for r in sorted(set(expected) - set(refs)):
        print(f"MISSING\t{r}\tnot computed", file=sys.stderr)
        bad += 1
    print(f"# check: {len(refs) - bad if bad <= len(refs) else 0}/{len(expected)} rows match",
          file=sys.stderr)
    return EXIT_FAIL if bad else EXIT_OK


def cmd_verify(args) -> int:
    _catalog(args)
    if args.all:
        paths = certificate_paths()
    elif args.paths:
        paths = [Path(p) for p in args.paths]
    else:
        raise UsageError("give certificate paths or --all")
    for p in paths:
        if not p.exists():
            raise UsageError(f"no such file: {p}")
        load_certificate(p)          # parse errors surface here with line numbers
    verdicts = verify_paths(paths, None, args.jobs)
    for v in verdicts:
        print(v.line())
    return EXIT_OK if all(v.ok for v in verdicts) else EXIT_FAIL


def cmd_compare(args) -> int:
    cat = _catalog(args)
    params = _params(args.param)
    src = bind(args.src, params, cat, strict=False)
    dst = bind(args.dst, params, cat, strict=False)
    used = {k for r in (src, dst) for k in parse_ref(r)[1]}
    if set(params) - used:
        raise UsageError(f"unused --param {', '.join(sorted(set(params) - used))}")
    store = CertStore.load(jobs=args.jobs, catalog=cat)
    res = Comparator(cat, store).compare(src, dst)
    print(res.line())
    return EXIT_OK


def cmd_hasse(args) -> int:
    from .hasse import build, emit_dot, emit_tsv, transitive_reduction
    cat = _catalog(args)
    aset = get_set(args.set)
    store = CertStore.load(jobs=args.jobs, catalog=cat)
    g = build(aset, store, cat)
    if args.reduce:
        g = transitive_reduction(g)
    dot = emit_dot(g, show_unknown=args.unknown)
    if args.output:
        Path(args.output).write_text(dot, encoding="utf-8")
    else:
        sys.stdout.write(dot)
    if args.tsv:
        Path(args.tsv).write_text(emit_tsv(g), encoding="utf-8")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lievar", description=__doc__.splitlines()[0])
    p.add_argument("--catalog", help="catalog directory (default: $LIEVAR_CATALOG or shipped data)")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("invariants", help="fingerprint row of one algebra")
    s.add_argument("ref")
    s.add_argument("--param", action="append", metavar="NAME=VALUE")
    s.set_defaults(func=cmd_invariants)

    s = sub.add_parser("table", help="fingerprint rows of a named set")
    s.add_argument("set")
    s.add_argument("--check", action="store_true", help="diff against the shipped expected table")
    s.add_argument("--jobs", type=int, default=None)
    s.set_defaults(func=cmd_table)

    s = sub.add_parser("verify", help="verify degeneration certificates")
    s.add_argument("paths", nargs="*")
    s.add_argument("--all", action="store_true", help="the shipped certificate corpus")
    s.add_argument("--jobs", type=int, default=None)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("compare", help="decide src ->deg dst where possible")
    s.add_argument("src")
    s.add_argument("dst")
    s.add_argument("--param", action="append", metavar="NAME=VALUE")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("hasse", help="DOT diagram of the degeneration order on a set")
    s.add_argument("set")
    s.add_argument("--reduce", action="store_true", help="transitive reduction")
    s.add_argument("--unknown", action="store_true", help="draw undecided pairs dashed")
    s.add_argument("-o", "--output")
    s.add_argument("--tsv", help="also write the pair table here")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_hasse)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.func(args)
    except (CatalogParseError, CertificateParseError, ScalarSyntaxError) as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (UnknownLabelError, UsageError, CatalogError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
