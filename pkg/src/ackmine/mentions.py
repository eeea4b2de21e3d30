"""Mention index over acknowledgees and distributional statistics."""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .corpus import Corpus
from .extract import AliasTable, ExtractorFn, extract_entities, remove_self_mentions


@dataclass
class MentionIndex:
    """Per-paper acknowledgee sets and per-acknowledgee mention counts.

    A mention is one paper naming one acknowledgee: each paper contributes at
    most 1 to any acknowledgee's count.
    """

    paper_acks: dict[str, frozenset[str]]
    counts: dict[str, int] = field(init=False)

    def __post_init__(self) -> None:
        counts: dict[str, int] = {}
        for acks in self.paper_acks.values():
            for name in acks:
                counts[name] = counts.get(name, 0) + 1
        self.counts = counts

    def acknowledgees(self) -> list[str]:
        return sorted(self.counts)

    def count(self, name: str) -> int:
        return self.counts.get(name, 0)

    def papers(self) -> list[str]:
        return sorted(self.paper_acks)

    def papers_without_acknowledgees(self) -> list[str]:
        return sorted(p for p, acks in self.paper_acks.items() if not acks)

    def __len__(self) -> int:
        return len(self.counts)


def build_mention_index(corpus: Corpus, aliases: AliasTable,
                        extractor: ExtractorFn | None = None) -> MentionIndex:
    """Extract, canonicalize and de-self-mention acknowledgees per paper.

    Covers every research article with acknowledgment text; papers whose
    acknowledgees all turn out to be the paper's own authors end up with an
    empty set.
    """
    paper_acks: dict[str, frozenset[str]] = {}
    for rec in corpus.ack_articles():
        if not rec.ack_text.strip():
            paper_acks[rec.record_id] = frozenset()
            continue
        entities = extract_entities(rec.ack_text, extractor)
        persons = {aliases.resolve(e.surface) for e in entities
                   if e.category == "person"}
        paper_acks[rec.record_id] = frozenset(
            remove_self_mentions(rec, persons, aliases))
    return MentionIndex(paper_acks=paper_acks)


# ---------------------------------------------------------------------------
# Distribution statistics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DistributionSummary:
    n: int
    mean: float
    median: float
    sd: float
    min: float
    max: float
    skewness: float | None
    excess_kurtosis: float | None


def summarize(values: Sequence[float]) -> DistributionSummary:
    """Moment-based summary; zero-variance input reports the shape statistics
    as undefined (None) rather than NaN."""
    if not values:
        raise ValueError("summarize requires at least one value")
    n = len(values)
    mean = sum(values) / n
    m2 = sum((x - mean) ** 2 for x in values) / n
    m3 = sum((x - mean) ** 3 for x in values) / n
    m4 = sum((x - mean) ** 4 for x in values) / n
    if m2 > 0:
        g1: float | None = m3 / m2 ** 1.5
        g2: float | None = m4 / m2 ** 2 - 3.0
    else:
        g1 = g2 = None
    sd = statistics.stdev(values) if n > 1 else 0.0
    return DistributionSummary(
        n=n, mean=mean, median=float(statistics.median(values)), sd=sd,
        min=float(min(values)), max=float(max(values)),
        skewness=g1, excess_kurtosis=g2)


@dataclass(frozen=True)
class LorenzGini:
    """Lorenz curve (population share, mention share) and sample Gini."""

    curve: tuple[tuple[float, float], ...]
    gini: float


def lorenz_gini(values: Sequence[float]) -> LorenzGini:
    """Lorenz curve from the ascending sort and the uncorrected sample Gini
    G = (2 * sum(i * x_(i))) / (n * sum(x)) - (n + 1) / n."""
    if not values:
        raise ValueError("lorenz_gini requires at least one value")
    if any(x < 0 for x in values):
        raise ValueError("lorenz_gini requires non-negative values")
    total = sum(values)
    if total == 0:
        raise ValueError("lorenz_gini is undefined for an all-zero vector")
    ordered = sorted(values)
    n = len(ordered)
    curve = [(0.0, 0.0)]
    cum = 0.0
    for i, x in enumerate(ordered, start=1):
        cum += x
        curve.append((i / n, cum / total))
    gini = 2.0 * sum(i * x for i, x in enumerate(ordered, start=1)) / (n * total) \
        - (n + 1) / n
    return LorenzGini(curve=tuple(curve), gini=gini)


# ---------------------------------------------------------------------------
# Visibility quotas and rankings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PaperQuota:
    record_id: str
    n_acknowledgees: int
    n_high: int
    n_low: int
    share_high: float
    share_one_mention: float


@dataclass(frozen=True)
class QuotaReport:
    high_threshold: int
    papers: tuple[PaperQuota, ...]
    mean_high: float
    mean_low: float
    mean_share_high: float
    mean_share_one_mention: float
    papers_without_high: int
    mean_size_without_high: float
    papers_only_one_mention: int


def visibility_quotas(index: MentionIndex, high_threshold: int = 10) -> QuotaReport:
    """Per-paper and aggregate quotas of highly visible acknowledgees.

    An acknowledgee is highly visible when its corpus-wide mention count is
    at least ``high_threshold``. Aggregates are means over papers with at
    least one acknowledgee.
    """
    if high_threshold < 1:
        raise ValueError("high_threshold must be >= 1")
    rows: list[PaperQuota] = []
    for rid in sorted(index.paper_acks):
        acks = index.paper_acks[rid]
        if not acks:
            continue
        n = len(acks)
        n_high = sum(1 for a in acks if index.count(a) >= high_threshold)
        n_one = sum(1 for a in acks if index.count(a) == 1)
        rows.append(PaperQuota(
            record_id=rid, n_acknowledgees=n, n_high=n_high, n_low=n - n_high,
            share_high=n_high / n, share_one_mention=n_one / n))

    k = len(rows)
    no_high = [r for r in rows if r.n_high == 0]
    only_one = sum(1 for r in rows if r.share_one_mention == 1.0)

    def mean(xs: list[float]) -> float:
        return sum(xs) / len(xs) if xs else 0.0

    return QuotaReport(
        high_threshold=high_threshold,
        papers=tuple(rows),
        mean_high=mean([r.n_high for r in rows]) if k else 0.0,
        mean_low=mean([r.n_low for r in rows]) if k else 0.0,
        mean_share_high=mean([r.share_high for r in rows]) if k else 0.0,
        mean_share_one_mention=mean([r.share_one_mention for r in rows]) if k else 0.0,
        papers_without_high=len(no_high),
        mean_size_without_high=mean([r.n_acknowledgees for r in no_high]),
        papers_only_one_mention=only_one,
    )


@dataclass(frozen=True)
class RankedAcknowledgee:
    rank: int
    name: str
    mentions: int
    metadata: Mapping[str, str] | None = None


def top_acknowledgees(index: MentionIndex, min_mentions: int,
                      metadata: Mapping[str, Mapping[str, str]] | None = None,
                      ) -> list[RankedAcknowledgee]:
    """Acknowledgees with at least ``min_mentions`` mentions, most mentioned
    first; ties share a (dense) rank and are ordered by canonical name."""
    if min_mentions < 1:
        raise ValueError("min_mentions must be >= 1")
    entries = sorted(((name, cnt) for name, cnt in index.counts.items()
                      if cnt >= min_mentions),
                     key=lambda e: (-e[1], e[0]))
    ranked: list[RankedAcknowledgee] = []
    rank = 0
    prev_count: int | None = None
    for name, cnt in entries:
        if cnt != prev_count:
            rank += 1
            prev_count = cnt
        extra = metadata.get(name) if metadata else None
        ranked.append(RankedAcknowledgee(rank=rank, name=name, mentions=cnt,
                                         metadata=extra))
    return ranked
