"""Bibliographic corpus: parsing of exported records and eligibility filters.

Three input layouts are supported: field-tagged plain text (two-letter tags,
one record per ``PT``..``ER`` block), tab-delimited text with a header row,
and structured JSON (an array of objects, one per record, or the canonical
corpus serialization produced by :func:`corpus_to_json`).
"""

from __future__ import annotations

import csv
import io
import json
import logging
import re
from dataclasses import dataclass, field
from typing import IO, Mapping, AbstractSet

logger = logging.getLogger(__name__)

FORMATS = ("field-tagged", "delimited", "structured")

# Two-letter export tags mapped onto record fields. FX is the tag real
# exports use for the funding/acknowledgment text; FT is accepted as well.
_TAG_MAP = {
    "UT": "record_id",
    "SO": "journal",
    "PY": "year",
    "AU": "authors",
    "FT": "ack_text",
    "FX": "ack_text",
    "CR": "cited_refs",
    "DT": "doc_type",
}

_CANONICAL_FIELDS = ("record_id", "journal", "year", "authors", "ack_text",
                     "cited_refs", "doc_type")

_PUNCT_RE = re.compile(r"[^\w\s]+", re.UNICODE)
_WS_RE = re.compile(r"\s+")


class CorpusFormatError(ValueError):
    """Raised when an input stream cannot be interpreted in the given format."""


@dataclass(frozen=True)
class BiblioRecord:
    """One publication: identifiers, authors, acknowledgment text, references."""

    record_id: str
    journal: str = ""
    year: int | None = None
    authors: tuple[str, ...] = ()
    ack_text: str | None = None
    cited_refs: frozenset[str] = frozenset()
    doc_type: str = ""

    @property
    def is_article(self) -> bool:
        return self.doc_type.strip().lower() == "article"


@dataclass
class Corpus:
    """An immutable-by-convention collection of records with unique ids."""

    records: list[BiblioRecord] = field(default_factory=list)
    provenance: str = ""

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for rec in self.records:
            if rec.record_id in seen:
                raise ValueError(f"duplicate record_id {rec.record_id!r}")
            seen.add(rec.record_id)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def get(self, record_id: str) -> BiblioRecord | None:
        for rec in self.records:
            if rec.record_id == record_id:
                return rec
        return None

    def articles(self) -> list[BiblioRecord]:
        """Research articles only; non-research types are kept but flagged."""
        return [r for r in self.records if r.is_article]

    def with_ack(self) -> list[BiblioRecord]:
        return [r for r in self.records if r.ack_text is not None]

    def ack_articles(self) -> list[BiblioRecord]:
        """Records entering the analyses: acknowledgment text present and,
        when the corpus carries document types, research articles."""
        return [r for r in self.with_ack() if r.is_article or not r.doc_type]


def reference_key(raw_citation: str) -> str:
    """Normalize a raw cited-reference string to a deterministic key.

    Uppercase, punctuation stripped, internal whitespace collapsed to single
    spaces. Identical raw strings always map to identical keys; the function
    is idempotent on its own output.
    """
    if not raw_citation or not raw_citation.strip():
        raise ValueError("reference_key requires a non-blank citation string")
    key = _PUNCT_RE.sub("", raw_citation.upper())
    return _WS_RE.sub(" ", key).strip()


def eligible_papers(corpus: Corpus,
                    paper_acks: Mapping[str, AbstractSet[str]]) -> list[str]:
    """Record ids of papers with >=1 cited reference and >=1 acknowledgee.

    ``paper_acks`` maps record_id to the paper's canonical acknowledgee set
    (built over the same corpus). Output is sorted by record_id.
    """
    out = []
    for rec in corpus.records:
        if rec.cited_refs and paper_acks.get(rec.record_id):
            out.append(rec.record_id)
    return sorted(out)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def parse_records(source: str | IO[str], format: str) -> Corpus:
    """Parse an exported record stream into a :class:`Corpus`.

    Malformed record blocks are skipped and reported (with a line number)
    through the module logger; an unknown ``format`` raises
    :class:`CorpusFormatError`.
    """
    if format not in FORMATS:
        raise CorpusFormatError(
            f"unknown format {format!r}; expected one of {', '.join(FORMATS)}")
    stream = io.StringIO(source) if isinstance(source, str) else source
    if format == "field-tagged":
        return _parse_field_tagged(stream)
    if format == "delimited":
        return _parse_delimited(stream)
    return _parse_structured(stream)


def _build_record(fields: Mapping[str, list[str]], ordinal: int) -> BiblioRecord:
    """Assemble a BiblioRecord from per-field value lists.

    Raises ValueError when the block cannot form a valid record.
    """
    record_id = " ".join(fields.get("record_id", [])).strip() or f"REC-{ordinal:04d}"
    journal = " ".join(fields.get("journal", [])).strip()
    doc_type = " ".join(fields.get("doc_type", [])).strip()

    year: int | None = None
    year_values = fields.get("year", [])
    if year_values:
        try:
            year = int(year_values[0].strip())
        except ValueError:
            raise ValueError(f"non-integer year {year_values[0]!r}")

    authors = tuple(a.strip() for a in fields.get("authors", []) if a.strip())
    if not authors and doc_type.lower() == "article":
        raise ValueError("research article without authors")

    ack_lines = fields.get("ack_text")
    ack_text = " ".join(line.strip() for line in ack_lines) if ack_lines is not None else None

    refs = frozenset(reference_key(c) for c in fields.get("cited_refs", []) if c.strip())

    return BiblioRecord(record_id=record_id, journal=journal, year=year,
                        authors=authors, ack_text=ack_text,
                        cited_refs=refs, doc_type=doc_type)


def _parse_field_tagged(stream: IO[str]) -> Corpus:
    records: list[BiblioRecord] = []
    seen_ids: set[str] = set()
    fields: dict[str, list[str]] | None = None
    current_field: str | None = None
    block_start = 0
    ordinal = 0

    def close_block(lineno: int) -> None:
        nonlocal fields, current_field, ordinal
        if fields is None:
            return
        ordinal += 1
        try:
            rec = _build_record(fields, ordinal)
            if rec.record_id in seen_ids:
                raise ValueError(f"duplicate record_id {rec.record_id!r}")
        except ValueError as exc:
            logger.warning("skipping malformed record block at line %d: %s",
                           block_start, exc)
        else:
            seen_ids.add(rec.record_id)
            records.append(rec)
        fields = None
        current_field = None

    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip():
            continue
        tag = line[:2]
        rest = line[3:] if len(line) > 3 else ""
        is_tag = len(line) >= 2 and tag.isalnum() and tag.upper() == tag \
            and (len(line) == 2 or line[2] == " ")

        if is_tag and tag == "PT":
            if fields is not None:
                logger.warning("record block at line %d not terminated; skipped",
                               block_start)
                fields = None
                current_field = None
            fields = {}
            current_field = None
            block_start = lineno
            continue
        if is_tag and tag == "ER":
            if fields is None:
                logger.warning("stray record terminator at line %d", lineno)
            close_block(lineno)
            continue
        if is_tag and tag in ("FN", "VR", "EF"):
            continue

        if fields is None:
            logger.warning("field data outside any record at line %d skipped", lineno)
            continue

        if is_tag:
            mapped = _TAG_MAP.get(tag)
            current_field = mapped
            if mapped is not None:
                fields.setdefault(mapped, []).append(rest.strip())
        elif raw[:1].isspace():
            # continuation line: appends to the previous field
            if current_field is not None:
                fields.setdefault(current_field, []).append(line.strip())
        else:
            logger.warning("unrecognized line %d skipped: %r", lineno, line[:40])

    if fields is not None:
        logger.warning("record block at line %d not terminated; skipped", block_start)
    return Corpus(records=records, provenance="field-tagged input")


def _parse_delimited(stream: IO[str]) -> Corpus:
    reader = csv.reader(stream, delimiter="\t")
    try:
        header = next(reader)
    except StopIteration:
        return Corpus(records=[], provenance="delimited input")

    columns: list[str | None] = []
    for name in header:
        key = name.strip()
        mapped = _TAG_MAP.get(key.upper())
        if mapped is None and key.lower() in _CANONICAL_FIELDS:
            mapped = key.lower()
        columns.append(mapped)

    records: list[BiblioRecord] = []
    seen_ids: set[str] = set()
    ordinal = 0
    for lineno, row in enumerate(reader, start=2):
        if not any(cell.strip() for cell in row):
            continue
        fields: dict[str, list[str]] = {}
        for mapped, cell in zip(columns, row):
            if mapped is None or not cell.strip():
                continue
            if mapped in ("authors", "cited_refs"):
                fields.setdefault(mapped, []).extend(
                    part.strip() for part in cell.split(";") if part.strip())
            else:
                fields.setdefault(mapped, []).append(cell.strip())
        ordinal += 1
        try:
            rec = _build_record(fields, ordinal)
            if rec.record_id in seen_ids:
                raise ValueError(f"duplicate record_id {rec.record_id!r}")
        except ValueError as exc:
            logger.warning("skipping malformed record at line %d: %s", lineno, exc)
            continue
        seen_ids.add(rec.record_id)
        records.append(rec)
    return Corpus(records=records, provenance="delimited input")


def _parse_structured(stream: IO[str]) -> Corpus:
    text = stream.read()
    if not text.strip():
        return Corpus(records=[], provenance="structured input")
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorpusFormatError(f"invalid structured input: {exc}") from exc

    provenance = "structured input"
    if isinstance(payload, dict):
        provenance = payload.get("provenance", provenance)
        items = payload.get("records", [])
    elif isinstance(payload, list):
        items = payload
    else:
        raise CorpusFormatError("structured input must be an object or an array")

    records: list[BiblioRecord] = []
    seen_ids: set[str] = set()
    for pos, obj in enumerate(items, start=1):
        try:
            if not isinstance(obj, dict):
                raise ValueError("record is not an object")
            rec = _record_from_dict(obj, pos)
            if rec.record_id in seen_ids:
                raise ValueError(f"duplicate record_id {rec.record_id!r}")
        except ValueError as exc:
            logger.warning("skipping malformed record #%d: %s", pos, exc)
            continue
        seen_ids.add(rec.record_id)
        records.append(rec)
    return Corpus(records=records, provenance=provenance)


def _record_from_dict(obj: Mapping, ordinal: int) -> BiblioRecord:
    fields: dict[str, list[str]] = {}
    for name in _CANONICAL_FIELDS:
        if name not in obj or obj[name] is None:
            continue
        value = obj[name]
        if name in ("authors", "cited_refs"):
            if not isinstance(value, (list, tuple)):
                raise ValueError(f"{name} must be a list")
            fields[name] = [str(v) for v in value]
        else:
            fields[name] = [str(value)]
    return _build_record(fields, ordinal)


# ---------------------------------------------------------------------------
# Canonical serialization
# ---------------------------------------------------------------------------

def record_to_dict(rec: BiblioRecord) -> dict:
    return {
        "record_id": rec.record_id,
        "journal": rec.journal,
        "year": rec.year,
        "authors": list(rec.authors),
        "ack_text": rec.ack_text,
        "cited_refs": sorted(rec.cited_refs),
        "doc_type": rec.doc_type,
    }


def corpus_to_json(corpus: Corpus) -> str:
    payload = {
        "provenance": corpus.provenance,
        "records": [record_to_dict(r) for r in corpus.records],
    }
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def corpus_from_json(text: str) -> Corpus:
    return parse_records(text, "structured")
