"""Acknowledgment-text statistics: lemma frequencies and keyword families.

Lemmatization maps tokens through a bundled English inflection dictionary
(regular inflections generated from a base vocabulary, plus an irregular
exception list); out-of-dictionary tokens pass through unchanged and letter
case is preserved. Lemma counting is case-sensitive; keyword matching is
case-insensitive token-prefix (phrases match contiguously).
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import IO, Iterable

from .corpus import Corpus, BiblioRecord

# Tokens are maximal runs of unicode alphanumerics; hyphens split.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

_VOWELS = "aeiou"

# Base vocabulary for regular inflection stripping. Deliberately scoped to
# the working vocabulary of acknowledgment texts.
_BASE_VOCAB = (
    "acknowledge", "advice", "advise", "advisor", "agency", "analysis",
    "appendix", "applicate", "apply", "appreciate", "article", "assist",
    "assistance", "assistant", "attend", "attendee", "audience", "author",
    "award", "bank", "benefit", "center", "chapter", "circulate", "coauthor",
    "code", "colleague", "comment", "committee", "communication",
    "conference", "contribute", "contribution", "conversation",
    "correspondence", "council", "dataset", "department", "discuss",
    "discussant", "discussion", "draft", "edit", "editor", "effort",
    "encourage", "error", "express", "feedback", "fellowship", "field",
    "figure", "file", "finance", "find", "finding", "foundation", "fund",
    "funding", "grant", "guide", "have", "help", "host", "hospitality",
    "idea", "improve", "insight", "inspiration", "inspire", "institute",
    "institution", "issue", "journal", "literature", "manuscript", "meet",
    "meeting", "member", "mentor", "minister", "ministry", "mistake",
    "model", "number", "offer", "omission", "opinion", "organize", "owe",
    "paper", "participant", "participate", "point", "present",
    "presentation", "prize", "problem", "professor", "program", "project",
    "provide", "question", "read", "receive", "referee", "remain", "remark",
    "report", "research", "researcher", "respond", "result", "review",
    "reviewer", "scholarship", "school", "section", "seminar", "session",
    "share", "show", "student", "study", "suggest", "suggestion", "support",
    "table", "thank", "topic", "university", "version", "view", "wish",
    "work", "workshop", "write", "year",
)

# Irregular forms the rules above cannot reach.
_EXCEPTIONS = {
    "began": "begin", "begun": "begin", "been": "be", "being": "be",
    "was": "be", "were": "be", "is": "be", "are": "be", "am": "be",
    "brought": "bring", "built": "build", "came": "come", "did": "do",
    "does": "do", "done": "do", "drawn": "draw", "drew": "draw",
    "felt": "feel", "found": "find", "gave": "give", "given": "give",
    "gone": "go", "went": "go", "grew": "grow", "grown": "grow",
    "had": "have", "has": "have", "held": "hold", "kept": "keep",
    "led": "lead", "left": "leave", "made": "make", "met": "meet",
    "ran": "run", "said": "say", "saw": "see", "seen": "see",
    "sent": "send", "shown": "show", "taken": "take", "took": "take",
    "thought": "think", "written": "write", "wrote": "write",
}


def _regular_inflections(base: str) -> set[str]:
    forms: set[str] = set()
    if len(base) > 2 and base.endswith("y") and base[-2] not in _VOWELS:
        forms.update({base[:-1] + "ies", base[:-1] + "ied", base + "ing"})
    elif base.endswith(("s", "x", "z", "ch", "sh")):
        forms.update({base + "es", base + "ed", base + "ing"})
    elif base.endswith("e"):
        forms.update({base + "s", base + "d", base[:-1] + "ing"})
    else:
        forms.update({base + "s", base + "ed", base + "ing"})
    return forms


def _build_lemma_dict() -> dict[str, str]:
    table: dict[str, str] = {}
    for base in _BASE_VOCAB:
        for form in _regular_inflections(base):
            table[form] = base
    # base forms map to themselves, overriding generated collisions
    for base in _BASE_VOCAB:
        table[base] = base
    table.update(_EXCEPTIONS)
    return table


_LEMMA_DICT = _build_lemma_dict()


def _apply_case(lemma: str, token: str) -> str:
    if token.isupper() and len(token) > 1:
        return lemma.upper()
    if token[:1].isupper():
        return lemma[:1].upper() + lemma[1:]
    return lemma


def lemmatize(text: str) -> list[str]:
    """Tokenize ``text`` and strip regular inflections, preserving case."""
    lemmas = []
    for match in _TOKEN_RE.finditer(text):
        token = match.group()
        lemma = _LEMMA_DICT.get(token.lower())
        lemmas.append(_apply_case(lemma, token) if lemma is not None else token)
    return lemmas


def _ack_records(corpus: Corpus) -> list[BiblioRecord]:
    return corpus.ack_articles()


@dataclass(frozen=True)
class LemmaTable:
    """Lemma frequency rows, descending by occurrences."""

    rows: tuple[tuple[str, int], ...]

    def occurrences(self, lemma: str) -> int:
        for name, count in self.rows:
            if name == lemma:
                return count
        return 0

    def total(self) -> int:
        return sum(count for _, count in self.rows)

    def __len__(self) -> int:
        return len(self.rows)


def lemma_table(corpus: Corpus, min_occurrences: int = 1) -> LemmaTable:
    """Aggregate case-sensitive lemma counts over all acknowledgment texts."""
    counts: Counter[str] = Counter()
    for rec in _ack_records(corpus):
        counts.update(lemmatize(rec.ack_text))
    rows = sorted(((lemma, c) for lemma, c in counts.items()
                   if c >= max(min_occurrences, 1)),
                  key=lambda row: (-row[1], row[0]))
    return LemmaTable(rows=tuple(rows))


# ---------------------------------------------------------------------------
# Keyword families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KeywordFamily:
    """A named family of term patterns.

    Single-token terms match any text token by case-insensitive prefix;
    multi-word terms match contiguous token sequences the same way.
    """

    name: str
    terms: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.terms:
            raise ValueError(f"keyword family {self.name!r} has no terms")

    def matches(self, text: str) -> bool:
        tokens = [t.lower() for t in _TOKEN_RE.findall(text)]
        for term in self.terms:
            parts = term.lower().split()
            if len(parts) == 1:
                if any(tok.startswith(parts[0]) for tok in tokens):
                    return True
            else:
                for i in range(len(tokens) - len(parts) + 1):
                    if all(tokens[i + k].startswith(p) for k, p in enumerate(parts)):
                        return True
        return False


# Peer interactive communication vocabulary (18 items).
PIC_TERMS = (
    "comment", "suggestion", "communication", "discussion", "reading",
    "advice", "insight", "inspiration", "inspiring", "correspondence",
    "feedback", "intellectual debt", "intellectual influence",
    "conversation", "remark", "discussant", "helpful", "insightful",
)

DEFAULT_FAMILIES = (
    KeywordFamily("conference_seminar", ("conference", "seminar")),
    KeywordFamily("audience", ("audience",)),
    KeywordFamily("reviewers", ("referee", "reviewer")),
    KeywordFamily("editors", ("editor",)),
    KeywordFamily("peer_interactive_communication", PIC_TERMS),
)

NEGATIVE_FEEDBACK_FAMILY = KeywordFamily("negative_feedback", ("critic",))


@dataclass(frozen=True)
class FamilyCount:
    name: str
    articles: int
    percentage: float


@dataclass(frozen=True)
class KeywordReport:
    n_articles: int
    families: tuple[FamilyCount, ...]
    matching_all: int
    negative: FamilyCount


def keyword_report(corpus: Corpus,
                   families: Iterable[KeywordFamily] = DEFAULT_FAMILIES,
                   negative_family: KeywordFamily = NEGATIVE_FEEDBACK_FAMILY,
                   ) -> KeywordReport:
    """Per-family article counts and percentages over articles with ack_text.

    An article counts once per family regardless of repeated matches; the
    report also carries the number of articles matching every family and the
    counts for the negative-feedback family.
    """
    families = tuple(families)
    records = _ack_records(corpus)
    n = len(records)
    per_family = [0] * len(families)
    matching_all = 0
    negative = 0
    for rec in records:
        hits = [fam.matches(rec.ack_text) for fam in families]
        for i, hit in enumerate(hits):
            per_family[i] += hit
        matching_all += all(hits) if hits else 0
        negative += negative_family.matches(rec.ack_text)

    def pct(count: int) -> float:
        return 100.0 * count / n if n else 0.0

    return KeywordReport(
        n_articles=n,
        families=tuple(FamilyCount(fam.name, cnt, pct(cnt))
                       for fam, cnt in zip(families, per_family)),
        matching_all=matching_all,
        negative=FamilyCount(negative_family.name, negative, pct(negative)),
    )


def load_families(stream: IO[str]) -> list[KeywordFamily]:
    """Read family definitions: one ``[name]`` section per family, one term
    per line; blank lines and ``#`` comments ignored."""
    families: list[KeywordFamily] = []
    name: str | None = None
    terms: list[str] = []

    def close() -> None:
        nonlocal name, terms
        if name is not None:
            families.append(KeywordFamily(name, tuple(terms)))
        name, terms = None, []

    for raw in stream:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            close()
            name = line[1:-1].strip()
        elif name is not None:
            terms.append(line)
        else:
            raise ValueError(f"term {line!r} appears before any [family] header")
    close()
    return families
