"""Association between the social and intellectual similarity layers:
distance correlation, deterministic Louvain communities, contingency
analysis, and mention decomposition by community."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .coupling import CouplingNetwork, SimilarityMatrix
from .mentions import MentionIndex


# ---------------------------------------------------------------------------
# Distance correlation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AssociationResult:
    r_d: float
    sqrt_r_d: float


def _as_dissimilarity(mat: SimilarityMatrix | np.ndarray) -> np.ndarray:
    """Similarity input (unit diagonal) becomes 1 - s; anything else is taken
    as a dissimilarity matrix as-is, so s and 1 - s feed identical values
    into the centering."""
    values = mat.values if isinstance(mat, SimilarityMatrix) else np.asarray(mat, float)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise ValueError("expected a square matrix")
    if np.all(np.diag(values) == 1.0):
        return 1.0 - values
    return np.array(values, dtype=float)


def _double_center(d: np.ndarray) -> np.ndarray:
    row = d.mean(axis=1, keepdims=True)
    col = d.mean(axis=0, keepdims=True)
    return d - row - col + d.mean()


def distance_correlation(mat_a: SimilarityMatrix | np.ndarray,
                         mat_b: SimilarityMatrix | np.ndarray) -> AssociationResult:
    """Squared generalized distance correlation of two similarity layers.

    Each matrix is converted to dissimilarity (1 - s), double-centered, and
    combined through the original V-statistic: dCov^2 = n^-2 sum(A_jk B_jk),
    R_d = dCov^2 / sqrt(dVar_A^2 dVar_B^2), defined 0 when either distance
    variance vanishes. No bias correction.
    """
    if isinstance(mat_a, SimilarityMatrix) and isinstance(mat_b, SimilarityMatrix):
        if mat_a.ids != mat_b.ids:
            raise ValueError("matrices cover different paper sets or orderings")
    d_a = _as_dissimilarity(mat_a)
    d_b = _as_dissimilarity(mat_b)
    if d_a.shape != d_b.shape:
        raise ValueError("matrices have different shapes")
    a = _double_center(d_a)
    b = _double_center(d_b)
    dcov2 = float((a * b).mean())
    # a constant matrix has zero distance variance by definition; detect it
    # directly rather than through centering residue
    dvar_a = 0.0 if np.all(d_a == d_a.flat[0]) else float((a * a).mean())
    dvar_b = 0.0 if np.all(d_b == d_b.flat[0]) else float((b * b).mean())
    if dvar_a == 0.0 or dvar_b == 0.0:
        r_d = 0.0
    else:
        r_d = dcov2 / math.sqrt(dvar_a * dvar_b)
        r_d = min(max(r_d, 0.0), 1.0)
    return AssociationResult(r_d=r_d, sqrt_r_d=math.sqrt(r_d))


# ---------------------------------------------------------------------------
# Deterministic Louvain
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CommunityPartition:
    """Paper -> community assignment with its modularity."""

    membership: dict[str, int]
    modularity: float
    level_modularities: tuple[float, ...] = ()

    def sizes(self) -> dict[int, int]:
        sizes: dict[int, int] = {}
        for cid in self.membership.values():
            sizes[cid] = sizes.get(cid, 0) + 1
        return dict(sorted(sizes.items()))

    def communities(self) -> dict[int, list[str]]:
        out: dict[int, list[str]] = {}
        for node, cid in self.membership.items():
            out.setdefault(cid, []).append(node)
        return {cid: sorted(m) for cid, m in sorted(out.items())}

    def __len__(self) -> int:
        return len(set(self.membership.values()))


def modularity(net: CouplingNetwork, membership: Mapping[str, int],
               resolution: float = 1.0) -> float:
    """Newman modularity of a partition of ``net`` (independent of Louvain's
    internal bookkeeping)."""
    m = sum(w for _, _, w in net.edges)
    if m == 0:
        return 0.0
    degree: dict[str, float] = {v: 0.0 for v in net.ids}
    intra: dict[int, float] = {}
    for u, v, w in net.edges:
        degree[u] += w
        degree[v] += w
        if membership[u] == membership[v]:
            intra[membership[u]] = intra.get(membership[u], 0.0) + w
    tot: dict[int, float] = {}
    for v in net.ids:
        c = membership[v]
        tot[c] = tot.get(c, 0.0) + degree[v]
    q = 0.0
    for c in tot:
        q += intra.get(c, 0.0) / m - resolution * (tot[c] / (2.0 * m)) ** 2
    return q


def _one_level(adj: list[dict[int, float]], loops: list[float],
               resolution: float) -> tuple[list[int], bool]:
    """Greedy local moving, nodes swept in ascending index order."""
    n = len(adj)
    degree = [sum(adj[v].values()) + 2.0 * loops[v] for v in range(n)]
    m = (sum(degree) / 2.0) or 1.0
    comm = list(range(n))
    tot = degree[:]
    moved_any = False
    while True:
        moved_pass = False
        for v in range(n):
            c_old = comm[v]
            tot[c_old] -= degree[v]
            neigh: dict[int, float] = {}
            for u, w in adj[v].items():
                neigh[comm[u]] = neigh.get(comm[u], 0.0) + w

            def gain(c: int) -> float:
                return neigh.get(c, 0.0) \
                    - resolution * tot[c] * degree[v] / (2.0 * m)

            # best candidate community (ties to the smallest id); the node
            # moves only on a strict improvement over staying put
            best_c, best_gain = c_old, gain(c_old)
            for c in sorted(neigh):
                g = gain(c)
                if g > best_gain + 1e-12:
                    best_c, best_gain = c, g
            comm[v] = best_c
            tot[best_c] += degree[v]
            if best_c != c_old:
                moved_pass = moved_any = True
        if not moved_pass:
            break
    return comm, moved_any


def _aggregate(adj: list[dict[int, float]], loops: list[float],
               comm: list[int]) -> tuple[list[dict[int, float]], list[float], list[int]]:
    labels = _compact_labels(comm)
    k = max(labels) + 1
    new_adj: list[dict[int, float]] = [{} for _ in range(k)]
    new_loops = [0.0] * k
    for v, c in enumerate(labels):
        new_loops[c] += loops[v]
        for u, w in adj[v].items():
            if u <= v:
                continue
            cu = labels[u]
            if cu == c:
                new_loops[c] += w
            else:
                new_adj[c][cu] = new_adj[c].get(cu, 0.0) + w
                new_adj[cu][c] = new_adj[cu].get(c, 0.0) + w
    return new_adj, new_loops, labels


def _compact_labels(comm: list[int]) -> list[int]:
    remap: dict[int, int] = {}
    for c in comm:
        if c not in remap:
            remap[c] = len(remap)
    return [remap[c] for c in comm]


def louvain(net: CouplingNetwork, resolution: float = 1.0) -> CommunityPartition:
    """Deterministic Louvain: greedy modularity local moving plus
    aggregation, sweeping nodes in ascending id order, no randomness.

    Final community ids are renumbered by decreasing size (ties by smallest
    member id), so id 0 is the largest community.
    """
    nodes = sorted(net.ids)
    pos = {v: i for i, v in enumerate(nodes)}
    adj: list[dict[int, float]] = [{} for _ in nodes]
    for u, v, w in net.edges:
        iu, iv = pos[u], pos[v]
        adj[iu][iv] = adj[iu].get(iv, 0.0) + w
        adj[iv][iu] = adj[iv].get(iu, 0.0) + w
    loops = [0.0] * len(nodes)

    assignment = list(range(len(nodes)))
    levels: list[float] = []
    while True:
        comm, moved = _one_level(adj, loops, resolution)
        if not moved:
            break
        adj, loops, labels = _aggregate(adj, loops, comm)
        assignment = [labels[a] for a in assignment]
        levels.append(modularity(net, {v: assignment[pos[v]] for v in nodes},
                                 resolution))

    by_node = {v: assignment[pos[v]] for v in nodes}
    sizes: dict[int, int] = {}
    min_member: dict[int, str] = {}
    for v, c in by_node.items():
        sizes[c] = sizes.get(c, 0) + 1
        if c not in min_member or v < min_member[c]:
            min_member[c] = v
    order = sorted(sizes, key=lambda c: (-sizes[c], min_member[c]))
    remap = {c: i for i, c in enumerate(order)}
    membership = {v: remap[c] for v, c in by_node.items()}
    return CommunityPartition(
        membership=membership,
        modularity=modularity(net, membership, resolution),
        level_modularities=tuple(levels),
    )


def top_communities(partition: CommunityPartition, k: int) -> dict[str, int]:
    """Membership restricted to the k largest communities."""
    sizes = partition.sizes()
    min_member: dict[int, str] = {}
    for v, c in partition.membership.items():
        if c not in min_member or v < min_member[c]:
            min_member[c] = v
    keep = set(sorted(sizes, key=lambda c: (-sizes[c], min_member[c]))[:k])
    return {v: c for v, c in partition.membership.items() if c in keep}


# ---------------------------------------------------------------------------
# Contingency analysis
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContingencyResult:
    row_labels: tuple[int, ...]
    col_labels: tuple[int, ...]
    observed: np.ndarray
    expected: np.ndarray
    chi2: float
    dof: int
    cramers_v: float
    residuals: np.ndarray

    @property
    def n(self) -> int:
        return int(self.observed.sum())


def contingency(part_rows: Mapping[str, int] | CommunityPartition,
                part_cols: Mapping[str, int] | CommunityPartition,
                ) -> ContingencyResult:
    """Cross-classification of papers labeled on both layers.

    Expected frequencies are row*col/N; chi2, dof = (r-1)(c-1), Cramer's V
    (uncorrected) and the Pearson residual matrix (f_o - f_e)/sqrt(f_e) are
    derived from the table. A degenerate table (zero marginal or fewer than
    two rows/columns) is rejected.
    """
    rows = getattr(part_rows, "membership", part_rows)
    cols = getattr(part_cols, "membership", part_cols)
    common = sorted(set(rows) & set(cols))
    if not common:
        raise ValueError("no papers classified on both layers")
    row_labels = tuple(sorted({rows[p] for p in common}))
    col_labels = tuple(sorted({cols[p] for p in common}))
    if len(row_labels) < 2 or len(col_labels) < 2:
        raise ValueError("contingency table needs at least 2 rows and 2 columns")
    r_pos = {lab: i for i, lab in enumerate(row_labels)}
    c_pos = {lab: i for i, lab in enumerate(col_labels)}
    observed = np.zeros((len(row_labels), len(col_labels)), dtype=int)
    for p in common:
        observed[r_pos[rows[p]], c_pos[cols[p]]] += 1
    row_tot = observed.sum(axis=1)
    col_tot = observed.sum(axis=0)
    if (row_tot == 0).any() or (col_tot == 0).any():
        raise ValueError("degenerate contingency table: zero marginal")
    total = int(observed.sum())
    # chi2 in exact rational arithmetic: (o - rc/N)^2 / (rc/N) summed; this
    # keeps Cramer's V exactly 1 for identical partitions
    chi2_exact = Fraction(0)
    for i in range(len(row_labels)):
        for j in range(len(col_labels)):
            rc = int(row_tot[i]) * int(col_tot[j])
            chi2_exact += Fraction((int(observed[i, j]) * total - rc) ** 2,
                                   total * rc)
    expected = np.outer(row_tot, col_tot) / total
    residuals = (observed - expected) / np.sqrt(expected)
    chi2 = float(chi2_exact)
    dof = (len(row_labels) - 1) * (len(col_labels) - 1)
    k = min(len(row_labels), len(col_labels)) - 1
    cramers_v = math.sqrt(float(chi2_exact / (total * k)))
    return ContingencyResult(row_labels=row_labels, col_labels=col_labels,
                             observed=observed, expected=expected, chi2=chi2,
                             dof=dof, cramers_v=cramers_v, residuals=residuals)


# ---------------------------------------------------------------------------
# Mention decomposition and correlation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DecompositionRow:
    name: str
    mentions: int
    per_community: dict[int, int]
    other: int
    distinct_communities: int


@dataclass(frozen=True)
class MentionDecomposition:
    communities: tuple[int, ...]
    rows: tuple[DecompositionRow, ...]


def mention_decomposition(index: MentionIndex,
                          partition: Mapping[str, int] | CommunityPartition,
                          min_mentions: int = 1,
                          communities: Sequence[int] | None = None,
                          ) -> MentionDecomposition:
    """Break each acknowledgee's mentions down by the mentioning paper's
    community; papers without a (kept) community label land in ``other``.

    ``distinct_communities`` counts communities with a nonzero cell; row
    community cells sum to the mentions coming from labeled papers.
    """
    labels = getattr(partition, "membership", partition)
    columns = tuple(sorted(communities if communities is not None
                           else set(labels.values())))
    column_set = set(columns)
    rows: list[DecompositionRow] = []
    for name in sorted(index.counts):
        total = index.counts[name]
        if total < min_mentions:
            continue
        per: dict[int, int] = {c: 0 for c in columns}
        other = 0
        for rid, acks in index.paper_acks.items():
            if name not in acks:
                continue
            c = labels.get(rid)
            if c in column_set:
                per[c] += 1
            else:
                other += 1
        rows.append(DecompositionRow(
            name=name, mentions=total, per_community=per, other=other,
            distinct_communities=sum(1 for c in columns if per[c] > 0)))
    rows.sort(key=lambda r: (-r.mentions, r.name))
    return MentionDecomposition(communities=columns, rows=tuple(rows))


def pearson_r2(x: Sequence[float], y: Sequence[float]) -> float:
    """Squared Pearson correlation; constant input is rejected."""
    if len(x) != len(y):
        raise ValueError("vectors must have equal length")
    n = len(x)
    if n < 2:
        raise ValueError("pearson_r2 needs at least two points")
    mx = sum(x) / n
    my = sum(y) / n
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    if sxx == 0 or syy == 0:
        raise ValueError("pearson_r2 is undefined for constant input")
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    return sxy * sxy / (sxx * syy)
