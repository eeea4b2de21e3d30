"""Acknowledgee extraction, name-variant merging, self-mention removal.

The default entity extractor is deterministic and rule-based: maximal runs of
capitalized tokens become person candidates, and runs containing
organization/funder marker words are reclassified. Precomputed annotations
(e.g. from an external NER tool) can be supplied through the ``extractor``
hook of :func:`extract_entities`.

Name-variant merging follows the audit workflow: all pairs above the
similarity threshold are candidates, written to an audit file for manual
review; merges are applied either from a curated decision file or, in auto
mode, for every candidate.
"""

from __future__ import annotations

import csv
import logging
import re
from concurrent.futures import ProcessPoolExecutor
from collections import Counter
from dataclasses import dataclass
from difflib import SequenceMatcher
from typing import IO, Callable, Iterable, NamedTuple

from .corpus import BiblioRecord

logger = logging.getLogger(__name__)

CATEGORIES = ("person", "organization", "funder", "location", "other")

# Capitalized token: letters plus common name joiners, no digits.
_CAP_TOKEN_RE = re.compile(r"^[A-Z][A-Za-z'’.\-]*$")
_INITIAL_RE = re.compile(r"^[A-Z](\.[A-Z])*$")
_TOKEN_RE = re.compile(r"\S+")

_FUNDER_MARKERS = frozenset({
    "foundation", "fund", "funds", "council", "agency", "ministry",
    "trust", "endowment", "fellowship",
})
_ORG_MARKERS = frozenset({
    "university", "institute", "institution", "school", "college",
    "department", "center", "centre", "laboratory", "bureau", "bank",
    "association", "society", "committee", "commission", "academy",
    "national", "federal", "economics", "research", "science", "sciences",
    "press", "journal", "quarterly", "seminar", "conference", "workshop",
    "group", "network", "program", "programme", "initiative", "office",
})
_HONORIFICS = frozenset({
    "dr", "dr.", "prof", "prof.", "professor", "mr", "mr.", "mrs", "mrs.",
    "ms", "ms.", "sir", "dame",
})
# Sentence-initial capitalized function words that never start a name.
_LEADING_IGNORE = frozenset({
    "a", "an", "the", "we", "i", "in", "on", "at", "for", "and", "or",
    "but", "our", "my", "his", "her", "their", "this", "that", "these",
    "those", "it", "he", "she", "they", "all", "any", "as", "to", "with",
    "from", "by", "of", "if", "not", "also", "both", "special", "many",
    "finally", "lastly", "first", "second", "thanks", "thank",
})
_TRAILING_TRIM = frozenset({"grant", "grants", "award", "awards", "prize"})
_TRAILING_ROLE_WORDS = frozenset({
    "editor", "coeditor", "co-editor", "referee", "reviewer", "discussant",
})


@dataclass(frozen=True)
class Entity:
    """A named entity found in acknowledgment text."""

    surface: str
    category: str
    span: tuple[int, int]


ExtractorFn = Callable[[str], Iterable]


def extract_entities(ack_text: str, extractor: ExtractorFn | None = None) -> list[Entity]:
    """Extract entities from acknowledgment text, sorted by span start.

    With ``extractor`` given, it must yield ``(start, end, category)`` tuples
    or :class:`Entity` objects over ``ack_text``; overlapping spans are
    rejected. Otherwise the rule-based default is used.
    """
    if not ack_text:
        raise ValueError("extract_entities requires non-empty text")
    if extractor is None:
        entities = _rule_based_entities(ack_text)
    else:
        entities = []
        for item in extractor(ack_text):
            if isinstance(item, Entity):
                start, end = item.span
                category = item.category
            else:
                start, end, category = item
            if category not in CATEGORIES:
                raise ValueError(f"unknown entity category {category!r}")
            if not (0 <= start < end <= len(ack_text)):
                raise ValueError(f"span ({start}, {end}) outside text")
            entities.append(Entity(ack_text[start:end], category, (start, end)))
    entities.sort(key=lambda e: e.span)
    for prev, cur in zip(entities, entities[1:]):
        if cur.span[0] < prev.span[1]:
            raise ValueError(
                f"overlapping entity spans {prev.span} and {cur.span}")
    return entities


def _rule_based_entities(text: str) -> list[Entity]:
    tokens = [(m.group(), m.start(), m.end()) for m in _TOKEN_RE.finditer(text)]
    entities: list[Entity] = []
    run: list[tuple[str, int, int]] = []

    def flush() -> None:
        nonlocal run
        if run:
            ent = _classify_run(text, run)
            if ent is not None:
                entities.append(ent)
            run = []

    for word, start, end in tokens:
        core = word.strip("()[]{},.;:!?\"'’“”")
        if core and _CAP_TOKEN_RE.match(core):
            offset = word.index(core)
            run.append((core, start + offset, start + offset + len(core)))
            # closing punctuation ends the run, except the period of an initial
            trailing = word[offset + len(core):].strip("'’")
            if trailing and not (trailing == "." and _INITIAL_RE.match(core)):
                flush()
        else:
            flush()
    flush()
    return entities


def _classify_run(text: str, run: list[tuple[str, int, int]]) -> Entity | None:
    while run and (run[0][0].lower() in _LEADING_IGNORE
                   or run[0][0].lower() in _HONORIFICS):
        run = run[1:]
    while run and run[-1][0].lower() in _TRAILING_TRIM:
        run = run[:-1]
    if len(run) < 2:
        return None  # single capitalized words are too ambiguous
    words = [w.lower().rstrip(".") for w, _, _ in run]
    is_funder = any(w in _FUNDER_MARKERS for w in words)
    is_org = any(w in _ORG_MARKERS for w in words)
    start, end = run[0][1], run[-1][2]
    if is_funder:
        category = "funder"
    elif is_org:
        category = "organization"
    else:
        category = "person"
    return Entity(text[start:end], category, (start, end))


# ---------------------------------------------------------------------------
# Name similarity and alias table
# ---------------------------------------------------------------------------

def name_similarity(a: str, b: str) -> float:
    """Gestalt pattern-matching similarity ratio in [0, 1].

    2*M / (|a| + |b|), where M is the total length of matched characters over
    recursively found longest common blocks (ties resolved toward the
    earliest block in ``a``). 1.0 iff the strings are identical.
    """
    if not a or not b:
        raise ValueError("name_similarity requires non-empty strings")
    return SequenceMatcher(None, a, b).ratio()


def comparison_key(form: str) -> str:
    """Surface form as compared for aliasing: honorifics and trailing role
    words stripped, whitespace collapsed."""
    tokens = form.split()
    while tokens and tokens[0].lower() in _HONORIFICS:
        tokens = tokens[1:]
    while tokens and tokens[-1].lower().strip("().,") in _TRAILING_ROLE_WORDS:
        tokens = tokens[:-1]
    return " ".join(tokens)


class MergeCandidate(NamedTuple):
    form_a: str
    form_b: str
    ratio: float


def _candidate_chunk(forms: list[str], keys: list[str], threshold: float,
                     lo: int, hi: int) -> list[MergeCandidate]:
    """Candidates (forms[i], forms[j]) for i < j, j in [lo, hi).

    seq2 (the indexed side of the matcher) is fixed per j, so the reported
    ratio is exactly name_similarity(key_i, key_j) in that argument order.
    """
    out: list[MergeCandidate] = []
    lengths = [len(k) for k in keys]
    matcher = SequenceMatcher()
    for j in range(max(lo, 1), hi):
        matcher.set_seq2(keys[j])
        lj = lengths[j]
        for i in range(j):
            li = lengths[i]
            # sound upper bound: ratio <= 2*min(|a|,|b|) / (|a|+|b|)
            if 2.0 * min(li, lj) <= threshold * (li + lj):
                continue
            matcher.set_seq1(keys[i])
            if matcher.quick_ratio() <= threshold:
                continue
            ratio = matcher.ratio()
            if ratio > threshold:
                out.append(MergeCandidate(forms[i], forms[j], ratio))
    return out


def alias_candidates(names: Iterable[str], threshold: float = 0.8,
                     workers: int = 1) -> list[MergeCandidate]:
    """All distinct form pairs whose similarity exceeds ``threshold``.

    Pairs are compared on :func:`comparison_key` and returned sorted by
    (form_a, form_b); the pair loop is chunked over processes when
    ``workers`` > 1, with an order-independent merged result.
    """
    forms = sorted(set(names))
    keys = [comparison_key(f) or f for f in forms]
    n = len(forms)
    if workers <= 1 or n < 256:
        candidates = _candidate_chunk(forms, keys, threshold, 0, n)
    else:
        # chunk j ranges so each carries equal pair work (hi^2 - lo^2)
        bounds = [round(n * (k / workers) ** 0.5) for k in range(workers + 1)]
        candidates = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            jobs = [pool.submit(_candidate_chunk, forms, keys, threshold, lo, hi)
                    for lo, hi in zip(bounds, bounds[1:]) if lo < hi]
            for job in jobs:
                candidates.extend(job.result())
    candidates.sort(key=lambda c: (c.form_a, c.form_b))
    return candidates


@dataclass
class AliasTable:
    """Disjoint clusters of surface forms with one canonical form each."""

    clusters: tuple[frozenset[str], ...]
    canonical: tuple[str, ...]
    merges: tuple[tuple[str, str, float, str], ...] = ()

    def __post_init__(self) -> None:
        self._index: dict[str, int] = {}
        for i, cluster in enumerate(self.clusters):
            if self.canonical[i] not in cluster:
                raise ValueError("canonical form must belong to its cluster")
            for form in cluster:
                if form in self._index:
                    raise ValueError(f"form {form!r} in more than one cluster")
                self._index[form] = i
        self._key_index: dict[str, str] = {}
        for form in sorted(self._index):
            key = comparison_key(form) or form
            canon = self.canonical[self._index[form]]
            if key not in self._key_index or canon < self._key_index[key]:
                self._key_index[key] = canon

    def canonical_for(self, form: str) -> str:
        """Canonical identity of a known surface form."""
        return self.canonical[self._index[form]]

    def resolve(self, form: str) -> str:
        """Canonical identity of any name: table lookup first, then
        comparison-key lookup, else the form itself."""
        if form in self._index:
            return self.canonical_for(form)
        key = comparison_key(form) or form
        return self._key_index.get(key, form)

    def identities(self) -> list[str]:
        return sorted(self.canonical)

    def __contains__(self, form: str) -> bool:
        return form in self._index

    def __len__(self) -> int:
        return len(self.clusters)

    def to_dict(self) -> dict:
        return {
            "clusters": [sorted(c) for c in self.clusters],
            "canonical": list(self.canonical),
            "merges": [list(m) for m in self.merges],
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "AliasTable":
        return cls(
            clusters=tuple(frozenset(c) for c in payload["clusters"]),
            canonical=tuple(payload["canonical"]),
            merges=tuple((a, b, float(r), p) for a, b, r, p in payload.get("merges", [])),
        )


def build_alias_table(names: Iterable[str], threshold: float = 0.8,
                      curated_merges: Iterable[tuple[str, str]] | None = None,
                      auto: bool = False, workers: int = 1) -> AliasTable:
    """Cluster surface forms into identities by similarity above ``threshold``.

    Candidate pairs are merged via transitive closure: every candidate in
    auto mode, otherwise only those listed in ``curated_merges``. The
    canonical form of a cluster is its most frequent member (ties: longest,
    then lexicographically smallest).
    """
    if not 0 < threshold <= 1:
        raise ValueError("threshold must be in (0, 1]")
    counts = Counter(names)
    forms = sorted(counts)
    # the pair scan only matters when something may merge; with curation off
    # and no curated pairs, every form stays its own cluster
    if auto or curated_merges is not None:
        candidates = alias_candidates(forms, threshold, workers=workers)
    else:
        candidates = []

    parent = {f: f for f in forms}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: str, b: str) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    merges: list[tuple[str, str, float, str]] = []
    if auto:
        for cand in candidates:
            union(cand.form_a, cand.form_b)
            merges.append((cand.form_a, cand.form_b, cand.ratio, "auto-merged"))
    elif curated_merges is not None:
        pair_ratio = {(c.form_a, c.form_b): c.ratio for c in candidates}
        for a, b in curated_merges:
            if a not in parent or b not in parent:
                missing = a if a not in parent else b
                raise ValueError(f"curated merge references unknown surface form {missing!r}")
            key = (a, b) if a <= b else (b, a)
            if key not in pair_ratio:
                logger.warning("curated merge %r / %r is not a candidate pair; ignored", a, b)
                continue
            union(a, b)
            merges.append((key[0], key[1], pair_ratio[key], "curated"))

    groups: dict[str, list[str]] = {}
    for f in forms:
        groups.setdefault(find(f), []).append(f)

    clusters = []
    canonical = []
    for members in groups.values():
        canon = min(members, key=lambda f: (-counts[f], -len(f), f))
        clusters.append(frozenset(members))
        canonical.append(canon)
    order = sorted(range(len(clusters)), key=lambda i: canonical[i])
    return AliasTable(
        clusters=tuple(clusters[i] for i in order),
        canonical=tuple(canonical[i] for i in order),
        merges=tuple(sorted(merges)),
    )


def normalize_author_name(raw: str) -> str:
    """Rewrite an inverted by-line name ("Surname, Given") as "Given Surname"."""
    if "," in raw:
        surname, given = raw.split(",", 1)
        raw = f"{given.strip()} {surname.strip()}"
    return " ".join(raw.split())


def remove_self_mentions(record: BiblioRecord, acknowledgees: set[str],
                         aliases: AliasTable) -> set[str]:
    """Drop acknowledgees whose canonical identity matches an author of the record."""
    author_ids = {aliases.resolve(normalize_author_name(a)) for a in record.authors}
    return {a for a in acknowledgees if a not in author_ids}


# ---------------------------------------------------------------------------
# Audit / curated-merge files
# ---------------------------------------------------------------------------

_ACCEPT_DECISIONS = frozenset({"yes", "y", "merge", "true", "1", "accept"})


def write_audit_file(stream: IO[str], candidates: Iterable[MergeCandidate],
                     decisions: dict[tuple[str, str], str] | None = None) -> None:
    """One row per candidate pair: form_a, form_b, ratio, decision."""
    writer = csv.writer(stream, delimiter="\t", lineterminator="\n")
    writer.writerow(["form_a", "form_b", "ratio", "decision"])
    for cand in candidates:
        decision = (decisions or {}).get((cand.form_a, cand.form_b), "")
        writer.writerow([cand.form_a, cand.form_b, f"{cand.ratio:.6f}", decision])


def read_curated_merges(stream: IO[str]) -> list[tuple[str, str]]:
    """Accepted pairs from a curated-merge file (audit layout + decision)."""
    reader = csv.reader(stream, delimiter="\t")
    header = next(reader, None)
    if header is None:
        return []
    pairs = []
    for row in reader:
        if len(row) < 4:
            continue
        if row[3].strip().lower() in _ACCEPT_DECISIONS:
            pairs.append((row[0], row[1]))
    return pairs
