"""Publication corpora: parsing, author attribution and derivation of n1..n6.

Two on-disk formats share one schema.

CSV (UTF-8, header line first)::

    id,title,authors,citations,year,venue,indexed
    p1,Title,"A. Smith|B. Jones",12,2010,J.Phys,true

``authors`` joins names with ``|``; ``year`` and ``venue`` may be empty and
an empty ``indexed`` means true.

JSON is a top-level array of objects with keys ``id``, ``title``,
``authors`` (array of strings), ``citations`` (integer) and optionally
``year``, ``venue``, ``indexed``.
"""
from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .metrics import MetricInputs, h_index

__all__ = [
    "CSV_COLUMNS",
    "FORMATS",
    "ParseError",
    "UnknownFormatError",
    "Publication",
    "AuthorProfile",
    "parse_records",
    "parse_records_collecting",
    "serialize_records",
    "normalize_author",
    "build_profile",
    "derive_inputs",
    "guess_format",
]

CSV_COLUMNS = ("id", "title", "authors", "citations", "year", "venue", "indexed")
FORMATS = ("csv", "json")
AUTHOR_SEP = "|"


class ParseError(ValueError):
    """A malformed record, carrying its position (CSV line or JSON path)."""

    def __init__(self, message: str, position: str | None = None):
        self.message = message
        self.position = position
        super().__init__(f"{position}: {message}" if position else message)


class UnknownFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Publication:
    id: str
    title: str
    authors: tuple[str, ...]
    citations: int
    year: int | None = None
    venue: str | None = None
    indexed: bool = True

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise ValueError("id must be a non-empty string")
        if not isinstance(self.title, str):
            raise ValueError("title must be a string")
        if isinstance(self.authors, str):
            raise ValueError("authors must be a sequence of names, not a single string")
        authors = tuple(self.authors)
        if not authors:
            raise ValueError("author list is empty")
        for name in authors:
            if not isinstance(name, str) or not name.strip():
                raise ValueError(f"blank or non-string author name {name!r}")
        object.__setattr__(self, "authors", authors)
        if isinstance(self.citations, bool) or not isinstance(self.citations, int) or self.citations < 0:
            raise ValueError(f"citations must be a nonnegative integer, got {self.citations!r}")
        if self.year is not None and (isinstance(self.year, bool) or not isinstance(self.year, int)):
            raise ValueError(f"year must be an integer, got {self.year!r}")
        if self.venue == "":
            object.__setattr__(self, "venue", None)
        if not isinstance(self.indexed, bool):
            raise ValueError(f"indexed must be a boolean, got {self.indexed!r}")

    @property
    def is_single_author(self) -> bool:
        return len(self.authors) == 1

    def to_dict(self) -> dict:
        out = {"id": self.id, "title": self.title, "authors": list(self.authors), "citations": self.citations}
        if self.year is not None:
            out["year"] = self.year
        if self.venue is not None:
            out["venue"] = self.venue
        out["indexed"] = self.indexed
        return out


@dataclass(frozen=True)
class AuthorProfile:
    author_key: str
    publications: tuple[Publication, ...] = ()


def guess_format(path: str) -> str:
    lower = str(path).lower()
    if lower.endswith(".csv"):
        return "csv"
    if lower.endswith(".json"):
        return "json"
    raise UnknownFormatError(f"cannot infer format from {path!r}; pass one of {', '.join(FORMATS)}")


# ---------------------------------------------------------------- parsing


def _parse_int(text: str, what: str) -> int:
    if not re.fullmatch(r"[+-]?\d+", text.strip()):
        raise ValueError(f"{what} must be an integer, got {text!r}")
    return int(text)


def _parse_csv(text: str, errors: list[ParseError] | None) -> list[Publication]:
    reader = csv.reader(io.StringIO(text, newline=""))
    try:
        header = next(reader)
    except StopIteration:
        return []
    header = [h.strip() for h in header]
    if header and header[0].startswith("\ufeff"):
        header[0] = header[0][1:]
    missing = [c for c in CSV_COLUMNS if c not in header]
    if missing:
        raise ParseError(f"header lacks column(s) {', '.join(missing)}", "line 1")
    col = {name: header.index(name) for name in CSV_COLUMNS}

    records = []
    start = reader.line_num + 1
    for row in reader:
        position = f"line {start}"
        start = reader.line_num + 1
        if not row:
            continue
        try:
            if len(row) != len(header):
                raise ValueError(f"expected {len(header)} fields, got {len(row)}")
            citations_text = row[col["citations"]].strip()
            if not citations_text:
                raise ValueError("citations field is missing")
            citations = _parse_int(citations_text, "citations")
            if citations < 0:
                raise ValueError(f"citations must be nonnegative, got {citations}")
            authors = [a.strip() for a in row[col["authors"]].split(AUTHOR_SEP)]
            authors = [a for a in authors if a]
            if not authors:
                raise ValueError("author list is empty")
            year_text = row[col["year"]].strip()
            indexed_text = row[col["indexed"]].strip().lower()
            if indexed_text not in ("", "true", "false"):
                raise ValueError(f"indexed must be true, false or empty, got {indexed_text!r}")
            records.append(
                Publication(
                    id=row[col["id"]].strip(),
                    title=row[col["title"]],
                    authors=tuple(authors),
                    citations=citations,
                    year=_parse_int(year_text, "year") if year_text else None,
                    venue=row[col["venue"]] or None,
                    indexed=indexed_text != "false",
                )
            )
        except ValueError as exc:
            err = ParseError(str(exc), position)
            if errors is None:
                raise err from None
            errors.append(err)
    return records


def _parse_json(text: str, errors: list[ParseError] | None) -> list[Publication]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    if not isinstance(data, list):
        raise ParseError("top level must be an array of records", "$")

    records = []
    for i, item in enumerate(data):
        path = f"$[{i}]"
        try:
            if not isinstance(item, dict):
                raise ParseError("record must be an object", path)
            for key in ("id", "title", "authors", "citations"):
                if key not in item:
                    raise ParseError("required key is missing", f"{path}.{key}")
            citations = item["citations"]
            if isinstance(citations, bool) or not isinstance(citations, int):
                raise ParseError(f"must be an integer, got {citations!r}", f"{path}.citations")
            if citations < 0:
                raise ParseError(f"must be nonnegative, got {citations}", f"{path}.citations")
            authors = item["authors"]
            if not isinstance(authors, list) or not authors:
                raise ParseError("must be a non-empty array of names", f"{path}.authors")
            for j, name in enumerate(authors):
                if not isinstance(name, str) or not name.strip():
                    raise ParseError(f"blank or non-string name {name!r}", f"{path}.authors[{j}]")
            if not isinstance(item["id"], str):
                raise ParseError("must be a string", f"{path}.id")
            indexed = item.get("indexed", True)
            if indexed is None:
                indexed = True
            try:
                pub = Publication(
                    id=item["id"],
                    title=item["title"],
                    authors=tuple(a.strip() for a in authors),
                    citations=citations,
                    year=item.get("year"),
                    venue=item.get("venue"),
                    indexed=indexed,
                )
            except ValueError as exc:
                raise ParseError(str(exc), path) from None
            records.append(pub)
        except ParseError as err:
            if errors is None:
                raise
            errors.append(err)
    return records


def _dedupe(records: Iterable[Publication]) -> list[Publication]:
    # keep the first position, the max citation count wins (counts only grow across snapshots)
    best: dict[str, Publication] = {}
    for rec in records:
        held = best.get(rec.id)
        if held is None or rec.citations > held.citations:
            best[rec.id] = rec
    return list(best.values())


def _decode(data: bytes | str) -> str:
    if isinstance(data, str):
        return data
    try:
        return data.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise ParseError(f"input is not valid UTF-8 ({exc.reason})", f"byte {exc.start}") from None


def _parser(fmt: str):
    fmt = fmt.lower()
    if fmt == "csv":
        return _parse_csv
    if fmt == "json":
        return _parse_json
    raise UnknownFormatError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")


def parse_records(data: bytes | str, fmt: str) -> list[Publication]:
    """Parse a corpus, stopping at the first malformed record.

    Records sharing an id collapse into the one with the highest citation count.
    """
    parse = _parser(fmt)
    return _dedupe(parse(_decode(data), None))


def parse_records_collecting(data: bytes | str, fmt: str) -> tuple[list[Publication], list[ParseError]]:
    """Like :func:`parse_records` but gathers every record-level error instead of raising.

    Errors that make the whole document unreadable (bad header, invalid JSON)
    still raise.
    """
    parse = _parser(fmt)
    errors: list[ParseError] = []
    records = parse(_decode(data), errors)
    return _dedupe(records), errors


def serialize_records(records: Sequence[Publication], fmt: str) -> str:
    fmt = fmt.lower()
    if fmt == "json":
        return json.dumps([r.to_dict() for r in records], indent=2, ensure_ascii=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in records:
            if any(AUTHOR_SEP in a for a in r.authors):
                raise ValueError(f"record {r.id}: author names cannot contain {AUTHOR_SEP!r} in CSV")
            writer.writerow(
                [
                    r.id,
                    r.title,
                    AUTHOR_SEP.join(r.authors),
                    r.citations,
                    "" if r.year is None else r.year,
                    r.venue or "",
                    "true" if r.indexed else "false",
                ]
            )
        return buf.getvalue()
    raise UnknownFormatError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")


# ---------------------------------------------------------------- authors

_WS = re.compile(r"\s+")
_INITIAL_DOTS = re.compile(r"(?<![^\s,.\-])(\w)\.{2,}")


def normalize_author(name: str) -> str:
    """Canonical matching key for an author name.

    Trims and collapses whitespace, case-folds, and reduces runs of periods
    after an initial to one (``"J.."`` becomes ``"j."``).
    """
    key = _WS.sub(" ", name.strip()).casefold()
    key = _INITIAL_DOTS.sub(r"\1.", key)
    if not key:
        raise ValueError(f"author name {name!r} is empty after normalization")
    return key


def build_profile(pubs: Iterable[Publication], author: str) -> AuthorProfile:
    key = normalize_author(author)
    matched = tuple(p for p in pubs if key in {normalize_author(a) for a in p.authors})
    return AuthorProfile(author_key=key, publications=matched)


def derive_inputs(
    profile: AuthorProfile,
    indexed_only_for_single: bool = False,
    indexed_only_for_all: bool = False,
) -> MetricInputs:
    """Compute n1..n6 for an author profile.

    ``indexed_only_for_single`` restricts the single-author subset (n4..n6) to
    indexed venues; ``indexed_only_for_all`` restricts every count.
    """
    pubs = [p for p in profile.publications if p.indexed or not indexed_only_for_all]
    single = [p for p in pubs if p.is_single_author and (p.indexed or not indexed_only_for_single)]
    cites = [p.citations for p in pubs]
    single_cites = [p.citations for p in single]
    return MetricInputs(
        n1=len(pubs),
        n2=sum(cites),
        n3=h_index(cites),
        n4=len(single),
        n5=sum(single_cites),
        n6=h_index(single_cites),
    )
