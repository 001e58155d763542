"""Paginated retrieval of an author's works from a bibliographic web API.

The defaults describe an OpenAlex-style ``/works`` endpoint (cursor
pagination, ``results`` array, ``meta.next_cursor``). Any other provider is
reached by configuration alone.

When ``base_url`` names a local directory (or a ``file://`` URL) the client
runs in fixture mode: page ``k`` for author ``X`` is read from
``<base>/<X>/page-<k>.json`` (``X`` percent-encoded), falling back to
``<base>/page-<k>.json`` when no per-author directory exists. Fixture pages
have the same shape as wire pages.
"""
from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterator
from urllib.parse import quote, unquote, urlencode, urlparse

from .ingestion import ParseError, Publication, parse_records, serialize_records

log = logging.getLogger(__name__)

__all__ = [
    "DEFAULT_FIELD_MAP",
    "FetchError",
    "TransportError",
    "HTTPStatusError",
    "MalformedPageError",
    "MappingError",
    "CacheError",
    "ProviderConfig",
    "load_provider_config",
    "fetch_pages",
    "fetch_works",
    "map_record",
    "save_cache",
    "load_cache",
    "cache_roundtrip",
]

DEFAULT_FIELD_MAP = {
    "id": "id",
    "title": "display_name",
    "authors": "authorships[].author.display_name",
    "citations": "cited_by_count",
    "year": "publication_year",
    "venue": "primary_location.source.display_name",
}
REQUIRED_FIELDS = ("id", "authors", "citations")
_MISSING = object()


class FetchError(RuntimeError):
    """Base class for remote failures."""


class TransportError(FetchError):
    """The request never produced a response; retryable."""

    retryable = True

    def __init__(self, message: str, page: int, attempts: int):
        self.page = page
        self.attempts = attempts
        super().__init__(f"page {page}: {message} (after {attempts} attempt(s))")


class HTTPStatusError(FetchError):
    def __init__(self, status: int, body: str, page: int, attempts: int = 1):
        self.status = status
        self.body = body[:200]
        self.page = page
        self.attempts = attempts
        super().__init__(f"page {page}: HTTP {status} (after {attempts} attempt(s)): {self.body}")


class MalformedPageError(FetchError):
    def __init__(self, message: str, page: int):
        self.page = page
        super().__init__(f"page {page}: malformed payload: {message}")


class MappingError(FetchError):
    def __init__(self, field_name: str, path: str, message: str = "missing required field"):
        self.field = field_name
        self.path = path
        super().__init__(f"{field_name} ({path}): {message}")


class CacheError(FetchError):
    pass


@dataclass
class ProviderConfig:
    base_url: str
    author_query_template: str = "filter=author.id:{author_id}"
    page_size: int = 100
    rate_limit: int = 200  # minimum milliseconds between requests
    field_map: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_FIELD_MAP))
    name: str = "openalex"
    results_path: str = "results"
    next_cursor_path: str | None = "meta.next_cursor"
    next_link_path: str | None = None
    cursor_param: str = "cursor"
    initial_cursor: str = "*"
    page_size_param: str = "per-page"
    headers: dict[str, str] = field(default_factory=dict)
    max_retries: int = 3
    timeout: float = 30.0

    def __post_init__(self):
        if self.page_size < 1:
            raise ValueError("page_size must be at least 1")
        if self.rate_limit < 0:
            raise ValueError("rate_limit must be nonnegative")
        if self.max_retries < 1:
            raise ValueError("max_retries must be at least 1")
        missing = [f for f in REQUIRED_FIELDS if f not in self.field_map]
        if missing:
            raise ValueError(f"field_map lacks required field(s): {', '.join(missing)}")

    @property
    def fixture_dir(self) -> Path | None:
        url = urlparse(self.base_url)
        if url.scheme == "file":
            return Path(unquote(url.path))
        if url.scheme in ("http", "https"):
            return None
        return Path(self.base_url)


def load_provider_config(path: str | Path) -> ProviderConfig:
    """Read a JSON provider config; a relative fixture ``base_url`` resolves against the file."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ValueError(f"cannot read provider config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict) or "base_url" not in data:
        raise ValueError(f"{path}: provider config must be an object with a base_url")
    if "field_map" in data:
        data["field_map"] = {**DEFAULT_FIELD_MAP, **data["field_map"]}
    try:
        cfg = ProviderConfig(**data)
    except TypeError as exc:
        raise ValueError(f"{path}: {exc}") from None
    base = cfg.base_url
    if urlparse(base).scheme == "" and not Path(base).is_absolute():
        cfg.base_url = str((path.parent / base).resolve())
    return cfg


def _resolve(doc: Any, path: str) -> Any:
    """Look up a dotted path; a ``[]`` suffix maps the rest of the path over a list."""
    if not path:
        return doc
    head, _, rest = path.partition(".")
    if head.endswith("[]"):
        seq = _resolve(doc, head[:-2]) if head[:-2] else doc
        if not isinstance(seq, list):
            return _MISSING
        out = []
        for item in seq:
            value = _resolve(item, rest)
            if value is not _MISSING and value is not None:
                out.append(value)
        return out
    if not isinstance(doc, dict) or head not in doc:
        return _MISSING
    value = doc[head]
    if rest:
        if value is None:
            return _MISSING
        return _resolve(value, rest)
    return value


# ---------------------------------------------------------------- transport


class _Throttle:
    def __init__(self, interval_ms: int, clock: Callable[[], float], sleep: Callable[[float], None]):
        self.interval = interval_ms / 1000.0
        self.clock = clock
        self.sleep = sleep
        self.last: float | None = None

    def wait(self):
        if self.last is not None:
            remaining = self.interval - (self.clock() - self.last)
            if remaining > 0:
                self.sleep(remaining)
        self.last = self.clock()


def _http_get(url: str, headers: dict[str, str], timeout: float) -> tuple[int, str]:
    import requests

    try:
        resp = requests.get(url, headers=headers, timeout=timeout)
    except requests.RequestException as exc:
        raise ConnectionError(str(exc)) from exc
    return resp.status_code, resp.text


def _fixture_page(cfg: ProviderConfig, author_id: str, page: int) -> tuple[int, str]:
    root = cfg.fixture_dir
    author_dir = root / quote(author_id, safe="")
    base = author_dir if author_dir.is_dir() else root
    target = base / f"page-{page}.json"
    try:
        return 200, target.read_text(encoding="utf-8")
    except FileNotFoundError:
        return 404, f"no fixture page {target}"
    except OSError as exc:
        raise ConnectionError(f"cannot read {target}: {exc.strerror}") from None


def _page_url(cfg: ProviderConfig, author_id: str, cursor: str | None) -> str:
    query = cfg.author_query_template.format(author_id=author_id)
    params = {cfg.page_size_param: cfg.page_size}
    if cursor is not None and cfg.cursor_param:
        params[cfg.cursor_param] = cursor
    sep = "&" if "?" in cfg.base_url else "?"
    return f"{cfg.base_url}{sep}{query}&{urlencode(params)}"


def fetch_pages(
    cfg: ProviderConfig,
    author_id: str,
    *,
    get: Callable[[str, dict[str, str], float], tuple[int, str]] | None = None,
    clock: Callable[[], float] = time.monotonic,
    sleep: Callable[[float], None] = time.sleep,
) -> Iterator[list[dict]]:
    """Yield the raw result list of every page, in retrieval order.

    ``get(url, headers, timeout) -> (status, body)`` replaces the HTTP layer;
    it should raise ``ConnectionError`` or ``OSError`` on transport failure.
    """
    fixture = cfg.fixture_dir is not None and get is None
    throttle = _Throttle(cfg.rate_limit, clock, sleep)
    cursor_mode = bool(cfg.next_cursor_path) and not cfg.next_link_path
    url = _page_url(cfg, author_id, cfg.initial_cursor if cursor_mode else None)
    page = 1
    while True:
        status, body = None, ""
        for attempt in range(1, cfg.max_retries + 1):
            throttle.wait()
            try:
                if fixture:
                    status, body = _fixture_page(cfg, author_id, page)
                else:
                    status, body = (get or _http_get)(url, cfg.headers, cfg.timeout)
            except (ConnectionError, OSError, TimeoutError) as exc:
                log.warning("page %d attempt %d failed: %s", page, attempt, exc)
                if attempt == cfg.max_retries:
                    raise TransportError(str(exc), page, attempt) from exc
                continue
            if status == 429 or 500 <= status < 600:
                log.warning("page %d attempt %d: HTTP %d", page, attempt, status)
                if attempt == cfg.max_retries:
                    raise HTTPStatusError(status, body, page, attempt)
                continue
            break
        if not 200 <= status < 300:
            raise HTTPStatusError(status, body, page)

        try:
            doc = json.loads(body)
        except json.JSONDecodeError as exc:
            raise MalformedPageError(exc.msg, page) from None
        results = _resolve(doc, cfg.results_path)
        if not isinstance(results, list) or not all(isinstance(r, dict) for r in results):
            raise MalformedPageError(f"{cfg.results_path!r} is not an array of objects", page)
        log.info("page %d: %d record(s)", page, len(results))
        if not results:
            return
        yield results

        if cfg.next_link_path:
            nxt = _resolve(doc, cfg.next_link_path)
            if nxt in (_MISSING, None, ""):
                return
            url = str(nxt)
        elif cfg.next_cursor_path:
            nxt = _resolve(doc, cfg.next_cursor_path)
            if nxt in (_MISSING, None, ""):
                return
            url = _page_url(cfg, author_id, str(nxt))
        else:
            return
        page += 1


def fetch_works(cfg: ProviderConfig, author_id: str, **kwargs) -> list[dict]:
    """All raw records for ``author_id``, following pagination to the end."""
    records = []
    for results in fetch_pages(cfg, author_id, **kwargs):
        records.extend(results)
    return records


def map_record(cfg: ProviderConfig, raw: dict) -> Publication:
    """Translate one provider record into a Publication via ``cfg.field_map``."""
    if not isinstance(raw, dict):
        raise MappingError("record", "$", "record is not an object")
    fm = cfg.field_map
    values = {}
    for name in ("id", "title", "authors", "citations", "year", "venue", "indexed"):
        path = fm.get(name)
        value = _MISSING if path is None else _resolve(raw, path)
        if value is None:
            value = _MISSING
        if value is _MISSING and name in REQUIRED_FIELDS:
            raise MappingError(name, path)
        values[name] = value

    citations = values["citations"]
    if isinstance(citations, bool) or not isinstance(citations, int):
        raise MappingError("citations", fm["citations"], f"expected an integer, got {citations!r}")
    authors = values["authors"]
    if isinstance(authors, str):
        authors = [authors]
    if not isinstance(authors, list) or not authors:
        raise MappingError("authors", fm["authors"], "no author names")
    if not all(isinstance(a, str) and a.strip() for a in authors):
        raise MappingError("authors", fm["authors"], "author names must be non-empty strings")
    year = values["year"]
    if year is not _MISSING and (isinstance(year, bool) or not isinstance(year, int)):
        year = _MISSING
    indexed = values["indexed"]
    try:
        return Publication(
            id=str(values["id"]),
            title="" if values["title"] is _MISSING else str(values["title"]),
            authors=tuple(a.strip() for a in authors),
            citations=citations,
            year=None if year is _MISSING else year,
            venue=None if values["venue"] is _MISSING else str(values["venue"]),
            indexed=True if indexed is _MISSING else bool(indexed),
        )
    except ValueError as exc:
        raise MappingError("record", "$", str(exc)) from None


# ---------------------------------------------------------------- cache


def save_cache(records: list[Publication], path: str | Path) -> None:
    path = Path(path)
    try:
        path.write_text(serialize_records(records, "json"), encoding="utf-8")
    except OSError as exc:
        raise CacheError(f"{path}: cannot write cache: {exc.strerror}") from None


def load_cache(path: str | Path) -> list[Publication]:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise CacheError(f"{path}: cannot read cache: {exc.strerror}") from None
    try:
        return parse_records(data, "json")
    except ParseError as exc:
        raise CacheError(f"{path}: {exc}") from None


def cache_roundtrip(records: list[Publication], path: str | Path) -> list[Publication]:
    save_cache(records, path)
    return load_cache(path)
