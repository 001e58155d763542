"""Command-line entry point: ``aindex {compute,compare,sweep,fetch,validate}``.

Exit codes: 0 success, 2 input/usage error, 3 invariant violation,
4 remote failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from decimal import ROUND_HALF_EVEN, Decimal
from pathlib import Path

from . import __version__
from .analysis import compare, sweep
from .bibfetch import FetchError, fetch_pages, load_provider_config, map_record, save_cache
from .errata import lookup as lookup_errata
from .ingestion import (
    ParseError,
    Publication,
    UnknownFormatError,
    build_profile,
    derive_inputs,
    guess_format,
    normalize_author,
    parse_records,
    parse_records_collecting,
)
from .metrics import (
    DEFAULT_WEIGHTS,
    FIELDS,
    InvalidInputsError,
    MetricInputs,
    WeightVector,
    a_index,
    validate_inputs,
)

log = logging.getLogger("aindex")

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_REMOTE = 0, 2, 3, 4
PROVIDER_ENV = "AINDEX_PROVIDER_CONFIG"
CAVEAT = "authors are matched by normalized name strings only; initials, name variants and ORCID are not reconciled"
PAPER_COLUMNS = (
    "papers",
    "citations",
    "h_index",
    "single_papers",
    "single_citations",
    "single_h_index",
)
MU_COLUMNS = tuple(f"mu{i}" for i in range(1, 7))


class UsageError(Exception):
    pass


def fmt3(x: float) -> str:
    """Render with three decimals, ties to even."""
    return str(Decimal(repr(float(x))).quantize(Decimal("0.001"), rounding=ROUND_HALF_EVEN))


# ---------------------------------------------------------------- argument helpers


def _int_list(text: str, what: str, allow_blank_at: int | None = None) -> list[int | None]:
    out = []
    for i, part in enumerate(text.split(",")):
        part = part.strip()
        if not part and i == allow_blank_at:
            out.append(None)
            continue
        try:
            out.append(int(part))
        except ValueError:
            raise UsageError(f"{what}: {part!r} is not an integer") from None
    return out


def _float_list(text, n: int, what: str) -> list[float]:
    parts = text if isinstance(text, list) else str(text).split(",")
    if len(parts) != n:
        raise UsageError(f"{what} needs exactly {n} comma-separated values, got {len(parts)}")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise UsageError(f"{what}: values must be numbers") from None


def _weights(args) -> WeightVector:
    config = {}
    if getattr(args, "config", None):
        try:
            config = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(config, dict) or set(config) - {"weights", "thresholds"}:
            raise UsageError("config must be an object with optional keys 'weights' and 'thresholds'")
    weights = args.weights or config.get("weights")
    thresholds = args.thresholds or config.get("thresholds")
    w = _float_list(weights, 6, "--weights") if weights is not None else list(DEFAULT_WEIGHTS.weights)
    t = _float_list(thresholds, 4, "--thresholds") if thresholds is not None else list(DEFAULT_WEIGHTS.thresholds)
    try:
        return WeightVector.from_weights(w, t)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _base(text: str, blank_field: str | None = None) -> MetricInputs:
    blank_at = FIELDS.index(blank_field) if blank_field else None
    values = _int_list(text, "--base", blank_at)
    if len(values) != 6:
        raise UsageError(f"--base needs 6 values n1..n6, got {len(values)}")
    return MetricInputs(*(0 if v is None else v for v in values))


def _load_corpus(args) -> list[Publication]:
    path = Path(args.input)
    fmt = args.format or guess_format(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_records(data, fmt)
    except ParseError as exc:
        raise ParseError(exc.message, f"{path}: {exc.position}" if exc.position else str(path)) from None


def _author_inputs(pubs, author: str, args) -> tuple[str, MetricInputs, list[int]]:
    profile = build_profile(pubs, author)
    inputs = derive_inputs(profile, indexed_only_for_single=args.indexed_only)
    return profile.author_key, inputs, [p.citations for p in profile.publications]


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _table_text(header, rows) -> str:
    cells = [list(map(str, header))] + [list(map(str, r)) for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    lines = []
    for n, row in enumerate(cells):
        lines.append("  ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(row, widths))).rstrip())
        if n == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- subcommands


def cmd_compute(args) -> int:
    weights = _weights(args)
    citations = None
    if args.base:
        if args.input:
            raise UsageError("give either --input/--author or --base, not both")
        label, inputs = "inline", _base(args.base)
    elif args.input:
        if not args.author or len(args.author) != 1:
            raise UsageError("compute needs exactly one --author with --input")
        label, inputs, citations = _author_inputs(_load_corpus(args), args.author[0], args)
    else:
        raise UsageError("compute needs --input and --author, or --base")

    report = a_index(inputs, weights, citations)
    notes = [e.describe() for e in lookup_errata(inputs, weights)]
    caveats = [CAVEAT] if args.input else []
    g = "" if report.g_all is None else str(report.g_all)
    fmt = args.output_format or "table"
    if fmt == "json":
        text = _json_text({"author": label, "report": report.to_dict(), "notes": notes, "caveats": caveats})
    elif fmt == "csv":
        header = ("author", *FIELDS, *MU_COLUMNS, "a_index", "normalized", "h_index", "g_index", "asf")
        row = (label, *inputs.as_tuple(), *map(fmt3, report.mu), fmt3(report.a_index),
               fmt3(report.normalized), report.h_all, g, fmt3(report.asf))
        text = _csv_text(header, [row])
    else:
        lines = [
            f"author      {label}",
            "inputs      " + " ".join(f"{k}={v}" for k, v in zip(FIELDS, inputs.as_tuple())),
            f"A-index     {fmt3(report.a_index)}  (normalized {fmt3(report.normalized)} / 100)",
        ]
        lines += [f"{name:<12}{fmt3(m)}" for name, m in zip(MU_COLUMNS, report.mu)]
        lines += [f"h-index     {report.h_all}", f"g-index     {g or 'n/a'}", f"AsF         {fmt3(report.asf)}"]
        lines += [f"note: {n}" for n in notes] + [f"caveat: {c}" for c in caveats]
        text = "\n".join(lines) + "\n"
    _emit(args, text)
    return EXIT_OK


def cmd_compare(args) -> int:
    weights = _weights(args)
    entries = []
    for spec in args.entry or []:
        label, sep, values = spec.partition("=")
        if not sep or not label.strip():
            raise UsageError(f"--entry must look like LABEL=n1,n2,n3,n4,n5,n6, got {spec!r}")
        entries.append((label.strip(), _base(values)))
    if args.author:
        if not args.input:
            raise UsageError("--author in compare needs --input")
        pubs = _load_corpus(args)
        for author in args.author:
            key, inputs, _ = _author_inputs(pubs, author, args)
            if inputs.n1 == 0:
                raise UsageError(f"unknown author {author!r}: no publications in {args.input}")
            entries.append((key, inputs))
    if len(entries) < 2:
        raise UsageError("compare needs at least two authors or entries")
    try:
        rows = compare(entries, weights)
    except InvalidInputsError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    fmt = args.output_format or "table"
    if fmt == "json":
        text = _json_text([
            {"rank": r.rank, "label": r.label, "inputs": r.inputs.to_dict(), "mu": list(r.mu),
             "a_index": r.a_index, "normalized": r.normalized}
            for r in rows
        ])
    else:
        header = ("rank", "label", *PAPER_COLUMNS, *MU_COLUMNS, "a_index")
        table = [(r.rank, r.label, *r.inputs.as_tuple(), *map(fmt3, r.mu), fmt3(r.a_index)) for r in rows]
        text = _csv_text(header, table) if fmt == "csv" else _table_text(header, table)
    _emit(args, text)
    return EXIT_OK


def cmd_sweep(args) -> int:
    weights = _weights(args)
    if args.field not in FIELDS:
        raise UsageError(f"invalid field {args.field!r}; expected one of {', '.join(FIELDS)}")
    values = _int_list(args.values, "--values")
    if args.base:
        base = _base(args.base, blank_field=args.field)
    elif args.input and args.author and len(args.author) == 1:
        _, base, _ = _author_inputs(_load_corpus(args), args.author[0], args)
    else:
        raise UsageError("sweep needs --base, or --input with one --author")

    series = sweep(base, args.field, values, weights)
    for value, problems in series.rejected:
        print(f"rejected {args.field}={value}: {'; '.join(problems)}", file=sys.stderr)

    fmt = args.output_format or "csv"
    if fmt == "json":
        text = _json_text({
            "field": series.field,
            "base": base.to_dict(),
            "points": [{"field_value": p.value, "a_index": p.a_index, "mu": list(p.mu)} for p in series.points],
            "rejected": [{"field_value": v, "violations": list(pr)} for v, pr in series.rejected],
        })
    else:
        header = ("field_value", "a_index", *MU_COLUMNS)
        rows = [(p.value, fmt3(p.a_index), *map(fmt3, p.mu)) for p in series.points]
        text = _csv_text(header, rows) if fmt == "csv" else _table_text(header, rows)
    _emit(args, text)
    return EXIT_INVALID if series.rejected else EXIT_OK


def cmd_fetch(args) -> int:
    cfg_path = args.provider_config or os.environ.get(PROVIDER_ENV)
    if not cfg_path:
        raise UsageError(f"fetch needs --provider-config (or {PROVIDER_ENV})")
    if not args.author or len(args.author) != 1:
        raise UsageError("fetch needs exactly one --author identifier")
    if not args.out:
        raise UsageError("fetch needs --out for the cache file")
    try:
        cfg = load_provider_config(cfg_path)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    records = []
    for page in fetch_pages(cfg, args.author[0]):
        records.extend(map_record(cfg, raw) for raw in page)
    save_cache(records, args.out)
    print(f"{len(records)} record(s) from {cfg.name} written to {args.out}")
    return EXIT_OK


def cmd_validate(args) -> int:
    if not args.input:
        raise UsageError("validate needs --input")
    path = Path(args.input)
    fmt = args.format or guess_format(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    problems = []
    try:
        pubs, errors = parse_records_collecting(data, fmt)
    except ParseError as exc:
        pubs, errors = [], [exc]
    problems += [f"{path}: {e}" for e in errors]

    if args.author:
        authors = [normalize_author(a) for a in args.author]
    else:
        authors = sorted({normalize_author(a) for p in pubs for a in p.authors})
    for author in authors:
        _, inputs, _ = _author_inputs(pubs, author, args)
        problems += [f"author {author}: {v}" for v in validate_inputs(inputs)]

    if problems:
        print("\n".join(problems))
        print(f"{len(problems)} violation(s)")
        return EXIT_INVALID
    print(f"ok: {len(pubs)} record(s), {len(authors)} author(s)")
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="corpus file (CSV or JSON)")
    common.add_argument("--format", choices=("csv", "json"), help="corpus format (default: from extension)")
    common.add_argument("--author", action="append", help="author name (or provider id for fetch); repeatable")
    common.add_argument("--weights", help="w1,...,w6")
    common.add_argument("--thresholds", help="t2,s2,t5,s5")
    common.add_argument("--config", help="JSON file with 'weights' and/or 'thresholds'; flags win")
    common.add_argument("--indexed-only", action="store_true", help="count only indexed single-author papers")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--output-format", choices=("table", "csv", "json"))
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="aindex", description="Composite A-index and citation indices.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", parents=[common], help="A-index report for one author")
    p.add_argument("--base", help="inline inputs n1,...,n6 instead of a corpus")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("compare", parents=[common], help="rank several authors")
    p.add_argument("--entry", action="append", help="inline LABEL=n1,...,n6; repeatable")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", parents=[common], help="vary one input, emit plot data")
    p.add_argument("--field", required=True, help="one of n1..n6")
    p.add_argument("--values", required=True, help="comma-separated values")
    p.add_argument("--base", help="inline inputs n1,...,n6; the swept slot may be blank")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fetch", parents=[common], help="download an author's works into a cache file")
    p.add_argument("--provider-config", help=f"provider JSON config (default: ${PROVIDER_ENV})")
    p.set_defaults(func=cmd_fetch)

    p = sub.add_parser("validate", parents=[common], help="check a corpus and the derived inputs")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    log.info("aindex %s", __version__)
    try:
        return args.func(args)
    except (UsageError, ParseError, UnknownFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidInputsError as exc:
        print(f"invalid inputs: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except FetchError as exc:
        print(f"fetch failed: {exc}", file=sys.stderr)
        return EXIT_REMOTE


if __name__ == "__main__":
    sys.exit(main())
