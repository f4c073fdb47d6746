"""Command-line interface: ``baranyai <command> [options]``.

Exit status: 0 ok, 1 usage error, 2 invalid input, 3 verification failure,
4 seed search timeout.
"""

from __future__ import annotations

import argparse
import logging
import random
import re
import sys
import time
from pathlib import Path
from typing import Sequence

from . import builder, enumcode, formats, seeds
from .core import Design, DesignError, Kind
from .doubling import type_counts
from .exactcover import SearchTimeout
from .quadrupling import case_counts
from .verify import type_census, verify_design

log = logging.getLogger("baranyai")

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_VERIFY, EXIT_TIMEOUT = range(5)


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def label_width(d_or_n, provenance: str = "") -> int:
    """First-coordinate modulus for ``(x,i)`` labels: t of the last construction step."""
    if isinstance(d_or_n, Design):
        n, provenance = d_or_n.n, d_or_n.provenance
    else:
        n = d_or_n
    m = re.match(r"(double|quadruple)\(t=(\d+)", provenance)
    return int(m[2]) if m else n


# ---------------------------------------------------------------------------
# commands


def _emit(d: Design, out: Path | None, labeled: bool) -> None:
    if labeled:
        t = label_width(d)
        lines = [formats.header_line(d)] + [formats.format_class(c, t) for c in d.classes.tolist()]
        text = "\n".join(lines) + "\n"
        if out:
            out.write_text(text, encoding="ascii")
        else:
            sys.stdout.write(text)
    elif out:
        formats.save(d, out)
    else:
        formats.write(d, sys.stdout)


def _report(d: Design, workers: int) -> tuple[bool, str]:
    report = verify_design(d, workers=workers)
    labels = {label for label, _ in d.segments}
    if d.kind is Kind.BP and d.k == 4 and labels:
        expected = None
        m = re.match(r"(double|quadruple)\(t=(\d+)", d.provenance)
        if m and m[1] == "double":
            expected = type_counts(int(m[2]))
        elif m:
            try:
                expected = case_counts(int(m[2]))
            except DesignError:
                pass
        census, errors = type_census(d, None if labels <= {"S", "T", "F"} else d.n // 4, expected)
        report.census.update(census)
        report.census_errors.extend(errors)
    return report.ok, report.to_text()


def cmd_generate(args) -> int:
    start = time.perf_counter()
    d = builder.bp4(args.n)
    log.info("built BP(%d,4) with %d classes via %s in %.2fs", args.n, len(d), builder.plan(args.n), time.perf_counter() - start)
    if args.verify:
        ok, text = _report(d, args.workers)
        log.info("%s", text)
        if not ok:
            sys.stderr.write(text + "\n")
            return EXIT_VERIFY
    _emit(d, args.out, args.labeled)
    return EXIT_OK


def cmd_column(args) -> int:
    c = enumcode.column(args.n, args.i)
    print(formats.format_class(c, label_width(args.n, _chain_provenance(args.n)) if args.labeled else None))
    return EXIT_OK


def cmd_entry(args) -> int:
    b = enumcode.entry(args.n, args.i, args.j)
    print(formats.format_block(b, label_width(args.n, _chain_provenance(args.n)) if args.labeled else None))
    return EXIT_OK


def _chain_provenance(n: int) -> str:
    return f"double(t={n // 2})" if n >= 16 else ""


def cmd_verify(args) -> int:
    d = formats.load(args.file)
    ok, text = _report(d, args.workers)
    print(text)
    return EXIT_OK if ok else EXIT_VERIFY


_SEED_KINDS = {"bp4": (Kind.BP, 4), "bp3": (Kind.BP, 3), "rsqs": (Kind.RSQS, 4)}


def cmd_seed(args) -> int:
    kind, k = _SEED_KINDS[args.kind]
    cache = seeds.SeedCache(args.cache) if args.cache else seeds.SeedCache()
    key = (kind, args.n, k)
    if key in seeds.SEARCHES:
        if args.force:
            d = seeds.SEARCHES[key](args.timeout)
            ok, text = _report(d, 1)
            if not ok:
                sys.stderr.write(text + "\n")
                return EXIT_VERIFY
            cache.store(d)
        else:
            d = seeds.searched_seed(kind, args.n, k, timeout=args.timeout, cache=cache)
    elif kind is Kind.RSQS:
        d = seeds.rsqs_provider(args.n)
    elif k == 3:
        d = seeds.bp3_provider(args.n)
    else:
        d = seeds.bp4_seed(args.n)
    ok, text = _report(d, 1)
    if not ok:
        sys.stderr.write(text + "\n")
        return EXIT_VERIFY
    if args.out:
        formats.save(d, args.out)
    where = "built in"
    if key in seeds.SEARCHES:
        shipped = seeds.SeedCache(seeds.DATA_DIR).path(kind, args.n, k)
        where = shipped if shipped.exists() and not args.force else cache.path(kind, args.n, k)
    print(f"{kind.value}({args.n},{k}) classes={len(d)} provenance={formats.provenance_tag(d)} source={where}")
    return EXIT_OK


def cmd_bench(args) -> int:
    rng = random.Random(args.seed)
    for n in args.n:
        total = enumcode.column_count(n)
        idx = [rng.randint(1, total) for _ in range(args.queries)]
        ents = [rng.randint(1, n // 4) for _ in range(args.queries)]
        enumcode.column(n, idx[0])  # warm seed caches
        start = time.perf_counter()
        for i in idx:
            enumcode.column(n, i)
        col = (time.perf_counter() - start) / len(idx)
        start = time.perf_counter()
        for i, j in zip(idx, ents):
            enumcode.entry(n, i, j)
        ent = (time.perf_counter() - start) / len(idx)
        print(f"n={n} queries={args.queries} column_us={col * 1e6:.1f} entry_us={ent * 1e6:.1f}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {v}")
    return v


def build_parser() -> Parser:
    # -q / -v are accepted before or after the command name
    common = Parser(add_help=False)
    noise = common.add_mutually_exclusive_group()
    noise.add_argument("-q", "--quiet", action="store_true", default=argparse.SUPPRESS, help="only errors on stderr")
    noise.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS, help="progress and timing on stderr")
    p = Parser(prog="baranyai", description="Construct, query and verify Baranyai partitions BP(n,4).", parents=[common])
    p.set_defaults(quiet=False, verbose=False)
    sub = p.add_subparsers(dest="command", required=True, parser_class=Parser)

    g = sub.add_parser("generate", parents=[common], help="list every class of BP(N,4)")
    g.add_argument("--n", type=_positive, required=True)
    g.add_argument("--out", type=Path)
    g.add_argument("--labeled", action="store_true", help="print points as (x,i)")
    g.add_argument("--verify", action="store_true", help="verify before writing")
    g.add_argument("--workers", type=_positive, default=1)
    g.set_defaults(func=cmd_generate)

    c = sub.add_parser("column", parents=[common], help="print column I of BP(N,4) without listing")
    c.add_argument("--n", type=_positive, required=True)
    c.add_argument("--i", type=_positive, required=True)
    c.add_argument("--labeled", action="store_true")
    c.set_defaults(func=cmd_column)

    e = sub.add_parser("entry", parents=[common], help="print block J of column I")
    e.add_argument("--n", type=_positive, required=True)
    e.add_argument("--i", type=_positive, required=True)
    e.add_argument("--j", type=_positive, required=True)
    e.add_argument("--labeled", action="store_true")
    e.set_defaults(func=cmd_entry)

    v = sub.add_parser("verify", parents=[common], help="certify a design file")
    v.add_argument("--file", type=Path, required=True)
    v.add_argument("--workers", type=_positive, default=1)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("seed", parents=[common], help="build or search a seed design and cache it")
    s.add_argument("--kind", choices=sorted(_SEED_KINDS), required=True)
    s.add_argument("--n", type=_positive, required=True)
    s.add_argument("--timeout", type=float, default=seeds.DEFAULT_TIMEOUT, help="search budget in seconds")
    s.add_argument("--cache", type=Path, help="cache directory (default: $BARANYAI_CACHE)")
    s.add_argument("--force", action="store_true", help="search even when a cached copy exists")
    s.add_argument("--out", type=Path)
    s.set_defaults(func=cmd_seed)

    b = sub.add_parser("bench", parents=[common], help="time column and entry queries")
    b.add_argument("--n", type=_positive, nargs="+", required=True)
    b.add_argument("--queries", type=_positive, default=200)
    b.add_argument("--seed", type=int, default=0)
    b.set_defaults(func=cmd_bench)
    return p


def _configure_logging(level: int) -> None:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    log.handlers[:] = [handler]
    log.setLevel(level)
    log.propagate = False


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.ERROR if args.quiet else logging.INFO if args.verbose else logging.WARNING
    _configure_logging(level)
    try:
        return args.func(args)
    except SearchTimeout as exc:
        log.error("seed search timed out: %s", exc)
        return EXIT_TIMEOUT
    except (DesignError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_INVALID
    except BrokenPipeError:  # pragma: no cover - e.g. piping into head
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
