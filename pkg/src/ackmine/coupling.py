"""Paper-similarity layers: Jaccard coupling over reference and acknowledgee sets."""

from __future__ import annotations

from dataclasses import dataclass
from typing import AbstractSet

import numpy as np

from .corpus import Corpus, eligible_papers
from .mentions import MentionIndex

LAYERS = ("social", "intellectual")


def jaccard(set_a: AbstractSet, set_b: AbstractSet) -> float:
    """|A n B| / |A u B|; undefined (rejected) when both sets are empty."""
    union = len(set_a | set_b)
    if union == 0:
        raise ValueError("jaccard is undefined for two empty sets")
    return len(set_a & set_b) / union


@dataclass(frozen=True)
class SimilarityMatrix:
    """Symmetric per-paper-pair Jaccard similarities, diagonal 1."""

    ids: tuple[str, ...]
    values: np.ndarray
    layer: str

    def __post_init__(self) -> None:
        n = len(self.ids)
        if self.values.shape != (n, n):
            raise ValueError("matrix shape does not match paper ids")
        if self.layer not in LAYERS:
            raise ValueError(f"unknown layer {self.layer!r}")

    @property
    def n(self) -> int:
        return len(self.ids)

    def value(self, id_a: str, id_b: str) -> float:
        i, j = self.ids.index(id_a), self.ids.index(id_b)
        return float(self.values[i, j])


@dataclass(frozen=True)
class CouplingNetwork:
    """Weighted undirected coupling network: edges where similarity > 0."""

    ids: tuple[str, ...]
    edges: tuple[tuple[str, str, float], ...]
    layer: str

    @property
    def n(self) -> int:
        return len(self.ids)

    def weights(self) -> list[float]:
        return [w for _, _, w in self.edges]


def _paper_sets(corpus: Corpus, index: MentionIndex, layer: str,
                ids: list[str]) -> list[frozenset[str]]:
    if layer == "social":
        return [frozenset(index.paper_acks[rid]) for rid in ids]
    by_id = {rec.record_id: rec for rec in corpus.records}
    return [frozenset(by_id[rid].cited_refs) for rid in ids]


def build_coupling(corpus: Corpus, index: MentionIndex, layer: str,
                   ) -> tuple[SimilarityMatrix, CouplingNetwork]:
    """Similarity matrix and coupling network over the eligible paper set.

    Eligible papers cite at least one reference and mention at least one
    acknowledgee. All pairs are evaluated; the pair loop is row-independent
    and deterministic. The network keeps every strictly positive pair.
    """
    if layer not in LAYERS:
        raise ValueError(f"unknown layer {layer!r}")
    ids = eligible_papers(corpus, index.paper_acks)
    sets = _paper_sets(corpus, index, layer, ids)
    n = len(ids)
    values = np.eye(n, dtype=float)
    edges: list[tuple[str, str, float]] = []
    for i in range(n):
        for j in range(i + 1, n):
            sim = jaccard(sets[i], sets[j])
            values[i, j] = values[j, i] = sim
            if sim > 0.0:
                edges.append((ids[i], ids[j], sim))
    matrix = SimilarityMatrix(ids=tuple(ids), values=values, layer=layer)
    network = CouplingNetwork(ids=tuple(ids), edges=tuple(edges), layer=layer)
    return matrix, network
