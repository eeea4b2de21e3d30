"""Directed acknowledgment network and its structural analysis.

The network points from acknowledging authors to mentioned acknowledgees,
with arc weights fractioned by the number of co-authors (exact rationals).
Structure is analyzed through the dyad and triad census (16 MAN types, with
expected counts under the dyad-conditional random model), strongly connected
components, the symmetric-acyclic decomposition into partially ranked
clusters, inter-cluster flows, and the symmetric core.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping

from .corpus import Corpus
from .extract import AliasTable, normalize_author_name
from .mentions import MentionIndex

TRIAD_TYPES = ("003", "012", "102", "021D", "021U", "021C", "111D", "111U",
               "030T", "030C", "201", "120D", "120U", "120C", "210", "300")

# Macrostructure model permitting each triad type, per the standard
# balance-theoretic hierarchy; types permitted by no model are Forbidden.
TRIAD_MODELS = {
    "102": "Balance", "300": "Balance",
    "003": "Clusterability",
    "021D": "Ranked Clusters", "021U": "Ranked Clusters",
    "030T": "Ranked Clusters", "120D": "Ranked Clusters",
    "120U": "Ranked Clusters",
    "012": "Transitivity",
    "120C": "Hierarchical Clusters", "210": "Hierarchical Clusters",
    "021C": "Forbidden", "111D": "Forbidden", "111U": "Forbidden",
    "030C": "Forbidden", "201": "Forbidden",
}

# Types containing at least one transitive length-2 path and none broken
# (resp. at least one intransitive path).
TRANSITIVE_TYPES = frozenset({"030T", "120D", "120U", "300"})
INTRANSITIVE_TYPES = frozenset({"021C", "111D", "111U", "030C", "201",
                                "120C", "210"})

DYAD_STATES = ("null", "fwd", "rev", "mutual")


@dataclass(frozen=True)
class Arc:
    weight: Fraction
    count: int = 1


class AckGraph:
    """Directed, arc-weighted scholar graph; immutable once built."""

    def __init__(self, arcs: Mapping[tuple[str, str], Arc],
                 nodes: Iterable[str] = (),
                 authors: frozenset[str] = frozenset(),
                 acknowledgees: frozenset[str] = frozenset()):
        node_set = set(nodes)
        for (u, v), arc in arcs.items():
            if u == v:
                raise ValueError(f"self-loop on {u!r}")
            if arc.weight <= 0:
                raise ValueError(f"non-positive arc weight on ({u!r}, {v!r})")
            node_set.add(u)
            node_set.add(v)
        self.nodes: tuple[str, ...] = tuple(sorted(node_set))
        self.arcs: dict[tuple[str, str], Arc] = dict(arcs)
        self.authors = authors
        self.acknowledgees = acknowledgees
        self._index = {v: i for i, v in enumerate(self.nodes)}
        self._out: dict[str, set[str]] = {v: set() for v in self.nodes}
        self._in: dict[str, set[str]] = {v: set() for v in self.nodes}
        for u, v in self.arcs:
            self._out[u].add(v)
            self._in[v].add(u)

    @classmethod
    def from_arcs(cls, pairs: Iterable[tuple[str, str]],
                  nodes: Iterable[str] = ()) -> "AckGraph":
        """Unit-weight graph from (source, target) pairs; handy in tests."""
        arcs = {(u, v): Arc(Fraction(1)) for u, v in pairs}
        return cls(arcs, nodes=nodes)

    @property
    def n(self) -> int:
        return len(self.nodes)

    def index(self, node: str) -> int:
        return self._index[node]

    def has_arc(self, u: str, v: str) -> bool:
        return (u, v) in self.arcs

    def is_mutual(self, u: str, v: str) -> bool:
        return (u, v) in self.arcs and (v, u) in self.arcs

    def out_neighbors(self, v: str) -> set[str]:
        return self._out[v]

    def in_neighbors(self, v: str) -> set[str]:
        return self._in[v]

    def neighbors(self, v: str) -> set[str]:
        return self._out[v] | self._in[v]

    def weighted_in_degree(self, v: str) -> Fraction:
        return sum((self.arcs[(u, v)].weight for u in self._in[v]),
                   Fraction(0))

    def weighted_out_degree(self, v: str) -> Fraction:
        return sum((self.arcs[(v, u)].weight for u in self._out[v]),
                   Fraction(0))

    def total_weight(self) -> Fraction:
        return sum((a.weight for a in self.arcs.values()), Fraction(0))

    def mutual_pairs(self) -> list[tuple[str, str]]:
        return sorted((u, v) for (u, v) in self.arcs
                      if u < v and (v, u) in self.arcs)

    def role(self, node: str) -> str:
        author = node in self.authors
        acked = node in self.acknowledgees
        if author and acked:
            return "both"
        if author:
            return "author-only"
        if acked:
            return "acknowledgee-only"
        return "unknown"

    def subgraph(self, keep: Iterable[str]) -> "AckGraph":
        keep_set = set(keep)
        arcs = {(u, v): a for (u, v), a in self.arcs.items()
                if u in keep_set and v in keep_set}
        return AckGraph(arcs, nodes=keep_set,
                        authors=self.authors & keep_set,
                        acknowledgees=self.acknowledgees & keep_set)


def build_network(corpus: Corpus, index: MentionIndex,
                  aliases: AliasTable) -> AckGraph:
    """Arcs from each author of a paper to each of its acknowledgees, weight
    1/k for k co-authors; contributions from multiple papers accumulate."""
    by_id = {rec.record_id: rec for rec in corpus.records}
    weights: dict[tuple[str, str], Fraction] = {}
    counts: Counter[tuple[str, str]] = Counter()
    author_ids: set[str] = set()
    ack_ids: set[str] = set()

    for rid in sorted(index.paper_acks):
        acks = index.paper_acks[rid]
        if not acks:
            continue
        rec = by_id.get(rid)
        if rec is None:
            raise ValueError(f"mention index references unknown record {rid!r}")
        paper_authors = sorted({aliases.resolve(normalize_author_name(a))
                                for a in rec.authors})
        if not paper_authors:
            raise ValueError(f"paper {rid!r} has no authors")
        share = Fraction(1, len(paper_authors))
        author_ids.update(paper_authors)
        ack_ids.update(acks)
        for writer in paper_authors:
            for acked in sorted(acks):
                if writer == acked:
                    raise ValueError(
                        f"self-mention {writer!r} survived in paper {rid!r}")
                key = (writer, acked)
                weights[key] = weights.get(key, Fraction(0)) + share
                counts[key] += 1

    arcs = {key: Arc(weight=w, count=counts[key]) for key, w in weights.items()}
    return AckGraph(arcs, nodes=author_ids | ack_ids,
                    authors=frozenset(author_ids),
                    acknowledgees=frozenset(ack_ids))


# ---------------------------------------------------------------------------
# Dyad and triad census
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DyadCensus:
    mutual: int
    asymmetric: int
    null: int

    @property
    def total(self) -> int:
        return self.mutual + self.asymmetric + self.null


def dyad_census(g: AckGraph) -> DyadCensus:
    """Counts of mutual, asymmetric and null unordered node pairs."""
    mutual = asym = 0
    for (u, v) in g.arcs:
        if u < v:
            if (v, u) in g.arcs:
                mutual += 1
            else:
                asym += 1
        elif (v, u) not in g.arcs:
            asym += 1
    pairs = comb(g.n, 2)
    return DyadCensus(mutual=mutual, asymmetric=asym,
                      null=pairs - mutual - asym)


def _classify_arcs(arcs: frozenset[tuple[int, int]]) -> str:
    """MAN label of a labeled triad on nodes {0, 1, 2}."""
    mutual_dyads: list[tuple[int, int]] = []
    asym_arcs: list[tuple[int, int]] = []
    null_count = 0
    for x, y in ((0, 1), (0, 2), (1, 2)):
        fwd, rev = (x, y) in arcs, (y, x) in arcs
        if fwd and rev:
            mutual_dyads.append((x, y))
        elif fwd:
            asym_arcs.append((x, y))
        elif rev:
            asym_arcs.append((y, x))
        else:
            null_count += 1
    base = f"{len(mutual_dyads)}{len(asym_arcs)}{null_count}"
    if base == "021":
        (s1, t1), (s2, t2) = asym_arcs
        if s1 == s2:
            return "021D"
        if t1 == t2:
            return "021U"
        return "021C"
    if base == "030":
        out_deg = Counter(s for s, _ in asym_arcs)
        return "030C" if all(out_deg[v] == 1 for v in (0, 1, 2)) else "030T"
    if base == "111":
        dyad = set(mutual_dyads[0])
        _, target = asym_arcs[0]
        return "111D" if target in dyad else "111U"
    if base == "120":
        dyad = set(mutual_dyads[0])
        (third,) = {0, 1, 2} - dyad
        inward = sum(1 for s, _ in asym_arcs if s == third)
        return {2: "120D", 0: "120U", 1: "120C"}[inward]
    return base


_STATE_ARCS = {
    "null": (),
    "fwd": ((0, 1),),
    "rev": ((1, 0),),
    "mutual": ((0, 1), (1, 0)),
}


def classify_triad(ab: str, ac: str, bc: str) -> str:
    """MAN type of the triad whose dyads (a,b), (a,c), (b,c) have the given
    states; each state is one of "null", "fwd" (first->second), "rev",
    "mutual". The label is invariant under node relabeling."""
    arcs: set[tuple[int, int]] = set()
    for (x, y), state in (((0, 1), ab), ((0, 2), ac), ((1, 2), bc)):
        if state not in _STATE_ARCS:
            raise ValueError(f"invalid dyad state {state!r}")
        for s, t in _STATE_ARCS[state]:
            arcs.add((x, y) if (s, t) == (0, 1) else (y, x))
    return _classify_arcs(frozenset(arcs))


def _census_chunk(n: int, nbrs: list[frozenset[int]],
                  arc_set: frozenset[tuple[int, int]],
                  lo: int, hi: int) -> Counter:
    """Edge-list triad census rows for v in [lo, hi)."""
    census: Counter[str] = Counter()
    for v in range(lo, hi):
        for u in nbrs[v]:
            if u <= v:
                continue
            shared = (nbrs[u] | nbrs[v]) - {u, v}
            pair_type = "102" if ((v, u) in arc_set and (u, v) in arc_set) else "012"
            census[pair_type] += n - len(shared) - 2
            for w in shared:
                if u < w or (v < w < u and v not in nbrs[w]):
                    triple = (v, u, w)
                    arcs = frozenset(
                        (triple.index(s), triple.index(t))
                        for s in triple for t in triple
                        if s != t and (s, t) in arc_set)
                    census[_classify_arcs(arcs)] += 1
    return census


@dataclass(frozen=True)
class TriadCensus:
    n_nodes: int
    dyads: DyadCensus
    observed: dict[str, int]
    expected: dict[str, Fraction]

    def deviation(self, label: str) -> float | None:
        e = self.expected[label]
        if e == 0:
            return None
        return float((self.observed[label] - e) / e)

    def model(self, label: str) -> str:
        return TRIAD_MODELS[label]

    @property
    def transitive_observed(self) -> int:
        return sum(self.observed[t] for t in TRANSITIVE_TYPES)

    @property
    def intransitive_observed(self) -> int:
        return sum(self.observed[t] for t in INTRANSITIVE_TYPES)

    @property
    def transitive_expected(self) -> Fraction:
        return sum((self.expected[t] for t in TRANSITIVE_TYPES), Fraction(0))

    @property
    def intransitive_expected(self) -> Fraction:
        return sum((self.expected[t] for t in INTRANSITIVE_TYPES), Fraction(0))


def expected_triad_counts(n: int, dyads: DyadCensus) -> dict[str, Fraction]:
    """Expected type counts under the dyad-conditional random model.

    Each of a triad's three dyads is independently mutual with probability
    M/D, oriented asymmetric with probability A/(2D) per direction, and null
    with probability N/D; all 4^3 labeled assignments are enumerated exactly.
    """
    d = dyads.total
    if d == 0:
        raise ValueError("expected counts need at least one dyad")
    p_state = {
        "null": Fraction(dyads.null, d),
        "fwd": Fraction(dyads.asymmetric, 2 * d),
        "rev": Fraction(dyads.asymmetric, 2 * d),
        "mutual": Fraction(dyads.mutual, d),
    }
    triads = comb(n, 3)
    expected = {label: Fraction(0) for label in TRIAD_TYPES}
    for ab in DYAD_STATES:
        for ac in DYAD_STATES:
            for bc in DYAD_STATES:
                prob = p_state[ab] * p_state[ac] * p_state[bc]
                if prob:
                    expected[classify_triad(ab, ac, bc)] += prob
    return {label: p * triads for label, p in expected.items()}


def triad_census(g: AckGraph, workers: int = 1) -> TriadCensus:
    """Observed triad counts via edge-list traversal plus expected counts.

    The traversal only visits connected triples; disconnected counts follow
    arithmetically, so the result equals naive enumeration over all C(n,3)
    node triples.
    """
    n = g.n
    if n < 3:
        raise ValueError("triad census requires at least 3 nodes")
    arc_set = frozenset((g.index(u), g.index(v)) for (u, v) in g.arcs)
    nbrs = [frozenset(g.index(w) for w in g.neighbors(v)) for v in g.nodes]

    if workers <= 1 or n < 64:
        census = _census_chunk(n, nbrs, arc_set, 0, n)
    else:
        bounds = [round(k * n / workers) for k in range(workers + 1)]
        census = Counter()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            jobs = [pool.submit(_census_chunk, n, nbrs, arc_set, lo, hi)
                    for lo, hi in zip(bounds, bounds[1:]) if lo < hi]
            for job in jobs:
                census.update(job.result())

    observed = {label: census.get(label, 0) for label in TRIAD_TYPES}
    observed["003"] = comb(n, 3) - sum(
        v for label, v in observed.items() if label != "003")
    dyads = dyad_census(g)
    return TriadCensus(n_nodes=n, dyads=dyads, observed=observed,
                       expected=expected_triad_counts(n, dyads))


# ---------------------------------------------------------------------------
# Components and decomposition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Partition:
    """Assignment of nodes to clusters, ids 0..k-1."""

    membership: dict[str, int]

    def clusters(self) -> dict[int, list[str]]:
        out: dict[int, list[str]] = {}
        for node, cid in self.membership.items():
            out.setdefault(cid, []).append(node)
        return {cid: sorted(members) for cid, members in sorted(out.items())}

    def sizes(self) -> dict[int, int]:
        sizes: dict[int, int] = {}
        for cid in self.membership.values():
            sizes[cid] = sizes.get(cid, 0) + 1
        return dict(sorted(sizes.items()))

    def __len__(self) -> int:
        return len(set(self.membership.values()))


def _tarjan_scc(n: int, out_adj: list[list[int]]) -> list[int]:
    """Strongly connected component id per item (iterative Tarjan)."""
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comp = [-1] * n
    counter = 0
    n_comps = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pos = work.pop()
            if pos == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            for i in range(pos, len(out_adj[v])):
                w = out_adj[v][i]
                if index[w] == -1:
                    work.append((v, i + 1))
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = n_comps
                    if w == v:
                        break
                n_comps += 1
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comp


def _renumber_by_min_member(labels: list[int]) -> list[int]:
    """Compact component ids, ordered by each component's smallest item."""
    first_seen: dict[int, int] = {}
    for pos, lab in enumerate(labels):
        first_seen.setdefault(lab, pos)
    order = sorted(first_seen, key=first_seen.get)
    remap = {lab: i for i, lab in enumerate(order)}
    return [remap[lab] for lab in labels]


def strong_components(g: AckGraph) -> Partition:
    """Standard strongly-connected-component partition."""
    out_adj = [sorted(g.index(w) for w in g.out_neighbors(v)) for v in g.nodes]
    comp = _renumber_by_min_member(_tarjan_scc(g.n, out_adj))
    return Partition(membership={v: comp[i] for i, v in enumerate(g.nodes)})


def _mutual_components(g: AckGraph) -> list[int]:
    """Connected components of the reciprocated-arc subgraph, singletons for
    nodes without mutual arcs; ids ordered by smallest member."""
    n = g.n
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in g.mutual_pairs():
        iu, iv = g.index(u), g.index(v)
        adj[iu].append(iv)
        adj[iv].append(iu)
    comp = [-1] * n
    cid = 0
    for start in range(n):
        if comp[start] != -1:
            continue
        frontier = [start]
        comp[start] = cid
        while frontier:
            x = frontier.pop()
            for y in adj[x]:
                if comp[y] == -1:
                    comp[y] = cid
                    frontier.append(y)
        cid += 1
    return comp


@dataclass(frozen=True)
class SymAcyclicResult:
    """Symmetric-acyclic decomposition: clusters, acyclic quotient, ranks."""

    partition: Partition
    ranks: dict[int, int]
    cluster_dag: dict[tuple[int, int], Fraction]
    error_count: int
    n_direct_symmetric: int
    n_seed_clusters: int

    def cluster_sizes(self) -> dict[int, int]:
        return self.partition.sizes()


def symmetric_acyclic_decomposition(g: AckGraph) -> SymAcyclicResult:
    """Cluster the graph so reciprocated ties are intra-cluster and the
    quotient is acyclic, then rank clusters by longest-path depth.

    Seed clusters are the connected components of the reciprocated-arc
    subgraph; clusters linked by quotient arcs in both directions are merged
    iteratively; remaining directed quotient cycles are merged with their
    internalized one-way arcs counted as errors.
    """
    n = g.n
    if n == 0:
        return SymAcyclicResult(partition=Partition(membership={}), ranks={},
                                cluster_dag={}, error_count=0,
                                n_direct_symmetric=0, n_seed_clusters=0)
    cluster = _mutual_components(g)
    seed_sizes = Counter(cluster)
    n_seed_clusters = sum(1 for s in seed_sizes.values() if s >= 2)
    n_direct = sum(s for s in seed_sizes.values() if s >= 2)

    arc_idx = [(g.index(u), g.index(v)) for (u, v) in sorted(g.arcs)]

    # merge clusters linked in both directions, to fixpoint
    while True:
        quotient = {(cluster[u], cluster[v]) for u, v in arc_idx
                    if cluster[u] != cluster[v]}
        mutual = {(a, b) for (a, b) in quotient if a < b and (b, a) in quotient}
        if not mutual:
            break
        parent = list(range(max(cluster) + 1))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in mutual:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        cluster = _renumber_by_min_member([find(c) for c in cluster])

    # collapse residual directed cycles in the quotient, counting the
    # internalized unreciprocated arcs as errors
    k = max(cluster) + 1 if n else 0
    q_out: list[list[int]] = [[] for _ in range(k)]
    q_arcs = {(cluster[u], cluster[v]) for u, v in arc_idx
              if cluster[u] != cluster[v]}
    for a, b in sorted(q_arcs):
        q_out[a].append(b)
    scc = _tarjan_scc(k, q_out) if k else []
    scc_sizes = Counter(scc)
    error_count = 0
    if any(size > 1 for size in scc_sizes.values()):
        for u, v in arc_idx:
            cu, cv = cluster[u], cluster[v]
            if cu != cv and scc[cu] == scc[cv]:
                error_count += 1
        cluster = _renumber_by_min_member([scc[c] for c in cluster])
        k = max(cluster) + 1

    # final quotient is a DAG; rank = longest-path depth from sources
    dag_arcs: dict[tuple[int, int], Fraction] = {}
    for (u, v), arc in g.arcs.items():
        cu, cv = cluster[g.index(u)], cluster[g.index(v)]
        if cu != cv:
            key = (cu, cv)
            dag_arcs[key] = dag_arcs.get(key, Fraction(0)) + arc.weight

    preds: list[list[int]] = [[] for _ in range(k)]
    succs: list[list[int]] = [[] for _ in range(k)]
    indeg = [0] * k
    for a, b in dag_arcs:
        preds[b].append(a)
        succs[a].append(b)
        indeg[b] += 1
    rank = [0] * k
    ready = sorted(c for c in range(k) if indeg[c] == 0)
    seen = 0
    order: list[int] = []
    while ready:
        c = ready.pop(0)
        order.append(c)
        seen += 1
        for b in sorted(succs[c]):
            rank[b] = max(rank[b], rank[c] + 1)
            indeg[b] -= 1
            if indeg[b] == 0:
                ready.append(b)
        ready.sort()
    if seen != k:
        raise AssertionError("quotient is not acyclic after decomposition")

    # deterministic cluster ids: by (rank, smallest member)
    first_member = {}
    for pos, c in enumerate(cluster):
        first_member.setdefault(c, pos)
    final_order = sorted(range(k), key=lambda c: (rank[c], first_member[c]))
    remap = {c: i for i, c in enumerate(final_order)}

    membership = {v: remap[cluster[i]] for i, v in enumerate(g.nodes)}
    return SymAcyclicResult(
        partition=Partition(membership=membership),
        ranks={remap[c]: rank[c] for c in range(k)},
        cluster_dag={(remap[a], remap[b]): w for (a, b), w in dag_arcs.items()},
        error_count=error_count,
        n_direct_symmetric=n_direct,
        n_seed_clusters=n_seed_clusters,
    )


def cluster_flows(g: AckGraph, partition: Partition) -> dict[tuple[int, int], Fraction]:
    """Aggregate weighted acknowledgments between distinct clusters."""
    missing = [v for v in g.nodes if v not in partition.membership]
    if missing:
        raise ValueError(f"partition does not cover node {missing[0]!r}")
    flows: dict[tuple[int, int], Fraction] = {}
    for (u, v), arc in g.arcs.items():
        cu = partition.membership[u]
        cv = partition.membership[v]
        if cu != cv:
            flows[(cu, cv)] = flows.get((cu, cv), Fraction(0)) + arc.weight
    return flows


@dataclass(frozen=True)
class SymmetricCore:
    """Connected components of the reciprocated-arc subgraph."""

    components: tuple[frozenset[str], ...]
    largest: frozenset[str]
    subgraph: AckGraph


def symmetric_core(g: AckGraph) -> SymmetricCore:
    """All symmetric components (size >= 2) plus the largest one with its
    induced subgraph."""
    comp = _mutual_components(g)
    groups: dict[int, set[str]] = {}
    for i, v in enumerate(g.nodes):
        groups.setdefault(comp[i], set()).add(v)
    components = sorted((frozenset(members) for members in groups.values()
                         if len(members) >= 2),
                        key=lambda c: (-len(c), min(c)))
    largest = components[0] if components else frozenset()
    return SymmetricCore(components=tuple(components), largest=largest,
                         subgraph=g.subgraph(largest))
