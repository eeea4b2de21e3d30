"""Pipeline stages behind the CLI subcommands.

Stages communicate through plain-text artifacts in the output directory, so
each analysis can be re-run and tested in isolation. Re-running a stage on
unchanged inputs reproduces byte-identical outputs.
"""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import graphio
from .acknet import (AckGraph, build_network, cluster_flows, strong_components,
                     symmetric_acyclic_decomposition, symmetric_core,
                     triad_census, TRIAD_TYPES)
from .assoc import (contingency, distance_correlation, louvain,
                    mention_decomposition, modularity, pearson_r2,
                    top_communities)
from .corpus import Corpus, corpus_to_json, parse_records
from .coupling import CouplingNetwork, LAYERS, SimilarityMatrix, build_coupling
from .extract import (AliasTable, alias_candidates, build_alias_table,
                      extract_entities, read_curated_merges,
                      remove_self_mentions, write_audit_file)
from .mentions import (MentionIndex, lorenz_gini, summarize,
                       top_acknowledgees, visibility_quotas)
from .textstats import (DEFAULT_FAMILIES, keyword_report, lemma_table,
                        load_families)

ENV_OUTPUT_DIR = "ACKMINE_OUTPUT_DIR"

SUBCOMMANDS = ("ingest", "extract", "textstats", "mentions", "network",
               "decompose", "triads", "coupling", "compare", "report")

# Appendix-style row order for the triad census table.
_CENSUS_ORDER = ("102", "300", "003", "021D", "021U", "030T", "120D", "120U",
                 "012", "120C", "210", "021C", "111D", "111U", "030C", "201")


class PipelineError(Exception):
    """Data-level pipeline failure (exit code 2)."""


class MissingArtifactError(PipelineError):
    """An upstream artifact is absent; the message names the prerequisite."""


@dataclass(frozen=True)
class PipelineConfig:
    input_path: str = ""
    input_format: str = "field-tagged"
    output_dir: str = "out"
    alias_threshold: float = 0.8
    auto_merge: bool = False
    curated_merges: str | None = None
    high_threshold: int = 10
    keyword_families: str | None = None
    top_cutoff: int = 20
    louvain_resolution: float = 1.0
    binarize_coupling: bool = False
    top_communities_social: int = 6
    top_communities_intellectual: int = 7
    metadata_path: str | None = None
    workers: int = 1

    def validate(self) -> None:
        if not 0 < self.alias_threshold <= 1:
            raise PipelineError("alias_threshold must be in (0, 1]")
        if self.high_threshold < 1:
            raise PipelineError("high_threshold must be >= 1")
        if self.top_cutoff < 1:
            raise PipelineError("top_cutoff must be >= 1")
        if self.louvain_resolution <= 0:
            raise PipelineError("louvain_resolution must be positive")
        if self.workers < 1:
            raise PipelineError("workers must be >= 1")


def load_config(path: str | Path) -> PipelineConfig:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise PipelineError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise PipelineError(f"invalid config file {path}: {exc}")
    known = PipelineConfig.__dataclass_fields__
    unknown = sorted(set(payload) - set(known))
    if unknown:
        raise PipelineError(f"unknown config keys: {', '.join(unknown)}")
    return PipelineConfig(**payload)


def resolve_output_dir(cfg: PipelineConfig) -> PipelineConfig:
    env = os.environ.get(ENV_OUTPUT_DIR)
    return replace(cfg, output_dir=env) if env else cfg


# ---------------------------------------------------------------------------
# Artifact helpers
# ---------------------------------------------------------------------------

_PREREQUISITE = {
    "corpus.json": "ingest",
    "aliases.json": "extract",
    "acknowledgees.json": "extract",
    "alias_audit.tsv": "extract",
    "social_similarity.tsv": "coupling",
    "intellectual_similarity.tsv": "coupling",
    "social_coupling.net": "coupling",
    "intellectual_coupling.net": "coupling",
}


def _path(cfg: PipelineConfig, name: str) -> Path:
    return Path(cfg.output_dir) / name


def _require(cfg: PipelineConfig, name: str) -> Path:
    path = _path(cfg, name)
    if not path.exists():
        stage = _PREREQUISITE.get(name, "the producing stage")
        raise MissingArtifactError(
            f"missing artifact {name}; run `ackmine {stage}` first")
    return path


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _write_json(path: Path, obj) -> None:
    _write_text(path, json.dumps(obj, indent=2, sort_keys=True,
                                 ensure_ascii=False) + "\n")


def _read_json(path: Path):
    return json.loads(path.read_text(encoding="utf-8"))


def _write_summary(cfg: PipelineConfig, stage: str, line: str, numbers: dict) -> None:
    _write_json(_path(cfg, f"summaries/{stage}.json"),
                {"stage": stage, "summary": line, "numbers": numbers})


def _load_corpus(cfg: PipelineConfig) -> Corpus:
    text = _require(cfg, "corpus.json").read_text(encoding="utf-8")
    return parse_records(text, "structured")


def _load_index(cfg: PipelineConfig) -> MentionIndex:
    payload = _read_json(_require(cfg, "acknowledgees.json"))
    return MentionIndex(paper_acks={rid: frozenset(names)
                                    for rid, names in payload.items()})


def _load_aliases(cfg: PipelineConfig) -> AliasTable:
    return AliasTable.from_dict(_read_json(_require(cfg, "aliases.json")))


def _load_graph(cfg: PipelineConfig) -> AckGraph:
    return build_network(_load_corpus(cfg), _load_index(cfg), _load_aliases(cfg))


def _fmt(x) -> str:
    return repr(float(x))


# ---------------------------------------------------------------------------
# Plot-data emission (delimited point and matrix files)
# ---------------------------------------------------------------------------

def write_lorenz_points(curve, path: Path) -> None:
    out = io.StringIO()
    out.write("population_share\tmention_share\n")
    for x, y in curve:
        out.write(f"{_fmt(x)}\t{_fmt(y)}\n")
    _write_text(path, out.getvalue())


def write_matrix_tsv(row_labels, col_labels, values, path: Path,
                     corner: str = "row", formatter=_fmt) -> None:
    out = io.StringIO()
    out.write(corner + "\t" + "\t".join(str(c) for c in col_labels) + "\n")
    for label, row in zip(row_labels, values):
        out.write(str(label) + "\t" + "\t".join(formatter(v) for v in row) + "\n")
    _write_text(path, out.getvalue())


def read_matrix_tsv(path: Path) -> tuple[list[str], list[str], np.ndarray]:
    with path.open(encoding="utf-8") as stream:
        reader = csv.reader(stream, delimiter="\t")
        header = next(reader)
        col_labels = header[1:]
        row_labels = []
        rows = []
        for row in reader:
            row_labels.append(row[0])
            rows.append([float(v) for v in row[1:]])
    return row_labels, col_labels, np.array(rows, dtype=float)


def write_flow_matrix(flows: dict[tuple[int, int], Fraction], path: Path) -> None:
    out = io.StringIO()
    out.write("from_cluster\tto_cluster\tweight\n")
    for (a, b) in sorted(flows):
        out.write(f"{a}\t{b}\t{_fmt(flows[(a, b)])}\n")
    _write_text(path, out.getvalue())


# ---------------------------------------------------------------------------
# Stages
# ---------------------------------------------------------------------------

def run_ingest(cfg: PipelineConfig) -> str:
    src = Path(cfg.input_path)
    if not cfg.input_path or not src.exists():
        raise PipelineError(f"input file not found: {cfg.input_path!r}")
    corpus = parse_records(src.read_text(encoding="utf-8"), cfg.input_format)
    _write_text(_path(cfg, "corpus.json"), corpus_to_json(corpus))
    line = (f"ingest: {len(corpus)} records, {len(corpus.articles())} articles, "
            f"{len(corpus.with_ack())} with acknowledgment text")
    _write_summary(cfg, "ingest", line, {
        "records": len(corpus),
        "articles": len(corpus.articles()),
        "with_ack": len(corpus.with_ack()),
    })
    return line


def run_extract(cfg: PipelineConfig) -> str:
    corpus = _load_corpus(cfg)
    persons_by_record: dict[str, list[str]] = {}
    surfaces: list[str] = []
    for rec in corpus.ack_articles():
        if not rec.ack_text.strip():
            persons_by_record[rec.record_id] = []
            continue
        found = [e.surface for e in extract_entities(rec.ack_text)
                 if e.category == "person"]
        persons_by_record[rec.record_id] = found
        surfaces.extend(found)

    candidates = alias_candidates(surfaces, cfg.alias_threshold,
                                  workers=cfg.workers)
    curated = None
    if cfg.curated_merges:
        with open(cfg.curated_merges, encoding="utf-8") as stream:
            curated = read_curated_merges(stream)
    table = build_alias_table(surfaces, cfg.alias_threshold,
                              curated_merges=curated, auto=cfg.auto_merge,
                              workers=cfg.workers)

    audit = io.StringIO()
    decisions = {(a, b): "yes" for a, b, _, _ in table.merges}
    write_audit_file(audit, candidates, decisions)
    _write_text(_path(cfg, "alias_audit.tsv"), audit.getvalue())
    _write_json(_path(cfg, "aliases.json"), table.to_dict())

    by_id = {rec.record_id: rec for rec in corpus.records}
    paper_acks = {}
    for rid, found in persons_by_record.items():
        canon = {table.resolve(s) for s in found}
        paper_acks[rid] = sorted(remove_self_mentions(by_id[rid], canon, table))
    _write_json(_path(cfg, "acknowledgees.json"), paper_acks)

    identities = sorted({name for acks in paper_acks.values() for name in acks})
    line = (f"extract: {len(paper_acks)} papers scanned, "
            f"{len(identities)} distinct acknowledgees, "
            f"{len(candidates)} variant candidates, {len(table.merges)} merges")
    _write_summary(cfg, "extract", line, {
        "papers_with_ack": len(paper_acks),
        "distinct_acknowledgees": len(identities),
        "variant_candidates": len(candidates),
        "merges": len(table.merges),
        "papers_without_acknowledgees":
            sum(1 for acks in paper_acks.values() if not acks),
    })
    return line


def run_textstats(cfg: PipelineConfig) -> str:
    corpus = _load_corpus(cfg)
    table = lemma_table(corpus, 1)
    out = io.StringIO()
    out.write("lemma\toccurrences\n")
    for lemma, count in table.rows:
        out.write(f"{lemma}\t{count}\n")
    _write_text(_path(cfg, "lemmas.tsv"), out.getvalue())

    if cfg.keyword_families:
        with open(cfg.keyword_families, encoding="utf-8") as stream:
            families = load_families(stream)
    else:
        families = list(DEFAULT_FAMILIES)
    report = keyword_report(corpus, families)
    out = io.StringIO()
    out.write("family\tarticles\tpercentage\n")
    for fam in report.families:
        out.write(f"{fam.name}\t{fam.articles}\t{_fmt(fam.percentage)}\n")
    out.write(f"all_families\t{report.matching_all}\t"
              f"{_fmt(100.0 * report.matching_all / report.n_articles if report.n_articles else 0.0)}\n")
    out.write(f"{report.negative.name}\t{report.negative.articles}\t"
              f"{_fmt(report.negative.percentage)}\n")
    _write_text(_path(cfg, "keywords.tsv"), out.getvalue())

    top = table.rows[0] if table.rows else ("-", 0)
    line = (f"textstats: {len(table)} distinct lemmas over {report.n_articles} "
            f"acknowledgment texts; top lemma {top[0]!r} x{top[1]}")
    _write_summary(cfg, "textstats", line, {
        "distinct_lemmas": len(table),
        "total_tokens": table.total(),
        "articles_with_ack": report.n_articles,
        "families": {f.name: f.articles for f in report.families},
        "matching_all": report.matching_all,
        "negative_feedback": report.negative.articles,
    })
    return line


def run_mentions(cfg: PipelineConfig) -> str:
    index = _load_index(cfg)
    counts = [index.counts[name] for name in sorted(index.counts)]

    out = io.StringIO()
    out.write("acknowledgee\tmentions\n")
    for name in sorted(index.counts, key=lambda n: (-index.counts[n], n)):
        out.write(f"{name}\t{index.counts[name]}\n")
    _write_text(_path(cfg, "mention_counts.tsv"), out.getvalue())

    summary_payload: dict = {
        "acknowledgees": len(index),
        "papers": len(index.paper_acks),
        "papers_without_acknowledgees": len(index.papers_without_acknowledgees()),
        "one_mention": sum(1 for c in counts if c == 1),
        "five_or_more": sum(1 for c in counts if c >= 5),
    }
    gini = None
    if counts:
        dist = summarize(counts)
        per_paper = [len(a) for a in index.paper_acks.values() if a]
        paper_dist = summarize(per_paper) if per_paper else None
        lg = lorenz_gini(counts)
        gini = lg.gini
        write_lorenz_points(lg.curve, _path(cfg, "lorenz.tsv"))
        summary_payload["mentions_per_acknowledgee"] = dist.__dict__
        summary_payload["acknowledgees_per_paper"] = \
            paper_dist.__dict__ if paper_dist else None
        summary_payload["gini"] = gini

    quotas = visibility_quotas(index, cfg.high_threshold)
    out = io.StringIO()
    out.write("record_id\tacknowledgees\thigh\tlow\tshare_high\tshare_one_mention\n")
    for row in quotas.papers:
        out.write(f"{row.record_id}\t{row.n_acknowledgees}\t{row.n_high}\t"
                  f"{row.n_low}\t{_fmt(row.share_high)}\t{_fmt(row.share_one_mention)}\n")
    _write_text(_path(cfg, "paper_quotas.tsv"), out.getvalue())
    _write_json(_path(cfg, "quotas.json"), {
        "high_threshold": quotas.high_threshold,
        "mean_high": quotas.mean_high,
        "mean_low": quotas.mean_low,
        "mean_share_high": quotas.mean_share_high,
        "mean_share_one_mention": quotas.mean_share_one_mention,
        "papers_without_high": quotas.papers_without_high,
        "mean_size_without_high": quotas.mean_size_without_high,
        "papers_only_one_mention": quotas.papers_only_one_mention,
    })

    metadata = None
    if cfg.metadata_path:
        metadata = _read_metadata(Path(cfg.metadata_path))
    ranked = top_acknowledgees(index, cfg.top_cutoff + 1, metadata)
    meta_cols = sorted({k for r in ranked if r.metadata for k in r.metadata})
    out = io.StringIO()
    out.write("rank\tacknowledgee\tmentions")
    for col in meta_cols:
        out.write(f"\t{col}")
    out.write("\n")
    for r in ranked:
        out.write(f"{r.rank}\t{r.name}\t{r.mentions}")
        for col in meta_cols:
            out.write("\t" + (r.metadata or {}).get(col, ""))
        out.write("\n")
    _write_text(_path(cfg, "top_acknowledgees.tsv"), out.getvalue())

    summary_payload["top_acknowledgees"] = len(ranked)
    gini_text = f"{gini:.4f}" if gini is not None else "n/a"
    line = (f"mentions: {len(index)} acknowledgees over "
            f"{len(index.paper_acks)} papers, gini {gini_text}, "
            f"{len(ranked)} above {cfg.top_cutoff} mentions")
    _write_summary(cfg, "mentions", line, summary_payload)
    return line


def _read_metadata(path: Path) -> dict[str, dict[str, str]]:
    with path.open(encoding="utf-8") as stream:
        reader = csv.DictReader(stream, delimiter="\t")
        if not reader.fieldnames or reader.fieldnames[0] != "name":
            raise PipelineError(
                "metadata file must be tab-separated with a leading 'name' column")
        return {row["name"]: {k: v for k, v in row.items() if k != "name"}
                for row in reader}


def run_network(cfg: PipelineConfig) -> str:
    g = _load_graph(cfg)
    out = io.StringIO()
    graphio.write_net(g, out)
    _write_text(_path(cfg, "network.net"), out.getvalue())
    out = io.StringIO()
    graphio.write_edge_list(g, out)
    _write_text(_path(cfg, "network_edges.tsv"), out.getvalue())

    roles = {"author-only": 0, "acknowledgee-only": 0, "both": 0}
    for v in g.nodes:
        roles[g.role(v)] += 1
    _write_json(_path(cfg, "network_stats.json"), {
        "nodes": g.n,
        "arcs": len(g.arcs),
        "roles": roles,
        "total_weight": float(g.total_weight()),
        "authors": len(g.authors),
        "acknowledgees": len(g.acknowledgees),
    })
    line = (f"network: {g.n} scholars, {len(g.arcs)} arcs "
            f"({roles['both']} in both roles)")
    _write_summary(cfg, "network", line, {
        "nodes": g.n, "arcs": len(g.arcs), "roles": roles,
        "total_weight": float(g.total_weight()),
    })
    return line


def run_decompose(cfg: PipelineConfig) -> str:
    g = _load_graph(cfg)
    result = symmetric_acyclic_decomposition(g)
    flows = cluster_flows(g, result.partition)
    strong = strong_components(g)
    core = symmetric_core(g)

    out = io.StringIO()
    graphio.write_clu(result.partition.membership, g.nodes, out)
    _write_text(_path(cfg, "decomposition.clu"), out.getvalue())

    sizes = result.cluster_sizes()
    out = io.StringIO()
    out.write("cluster\trank\tsize\n")
    for cid in sorted(sizes):
        out.write(f"{cid}\t{result.ranks[cid]}\t{sizes[cid]}\n")
    _write_text(_path(cfg, "clusters.tsv"), out.getvalue())

    write_flow_matrix(flows, _path(cfg, "flows.tsv"))

    out = io.StringIO()
    graphio.write_net(core.subgraph, out)
    _write_text(_path(cfg, "symmetric_core.net"), out.getvalue())

    strong_sizes = sorted(strong.sizes().values(), reverse=True)
    _write_json(_path(cfg, "decomposition.json"), {
        "clusters": len(result.partition),
        "error_count": result.error_count,
        "direct_symmetric_nodes": result.n_direct_symmetric,
        "seed_clusters": result.n_seed_clusters,
        "cluster_sizes": {str(c): s for c, s in sizes.items()},
        "cluster_ranks": {str(c): r for c, r in result.ranks.items()},
        "strong_components": len(strong),
        "largest_strong_component": strong_sizes[0] if strong_sizes else 0,
        "symmetric_components": len(core.components),
        "largest_symmetric_component": len(core.largest),
    })
    line = (f"decompose: {len(result.partition)} ranked clusters "
            f"({result.n_seed_clusters} seed clusters over "
            f"{result.n_direct_symmetric} directly symmetric nodes, "
            f"{result.error_count} errors); largest symmetric component "
            f"{len(core.largest)}")
    _write_summary(cfg, "decompose", line, {
        "clusters": len(result.partition),
        "error_count": result.error_count,
        "direct_symmetric_nodes": result.n_direct_symmetric,
        "seed_clusters": result.n_seed_clusters,
        "largest_symmetric_component": len(core.largest),
    })
    return line


def run_triads(cfg: PipelineConfig) -> str:
    g = _load_graph(cfg)
    census = triad_census(g, workers=cfg.workers)
    out = io.StringIO()
    out.write("type\tobserved\texpected\trel_deviation\tmodel\n")
    for label in _CENSUS_ORDER:
        idx = TRIAD_TYPES.index(label) + 1
        dev = census.deviation(label)
        out.write(f"{idx} - {label}\t{census.observed[label]}\t"
                  f"{_fmt(census.expected[label])}\t"
                  f"{_fmt(dev) if dev is not None else 'n/a'}\t"
                  f"{census.model(label)}\n")
    out.write(f"Transitive\t{census.transitive_observed}\t"
              f"{_fmt(census.transitive_expected)}\t\t\n")
    out.write(f"Intransitive\t{census.intransitive_observed}\t"
              f"{_fmt(census.intransitive_expected)}\t\t\n")
    _write_text(_path(cfg, "triad_census.tsv"), out.getvalue())

    dyads = census.dyads
    line = (f"triads: census over {census.n_nodes} nodes "
            f"(M={dyads.mutual}, A={dyads.asymmetric}, N={dyads.null}); "
            f"{census.transitive_observed} transitive, "
            f"{census.intransitive_observed} intransitive triads")
    _write_summary(cfg, "triads", line, {
        "nodes": census.n_nodes,
        "dyads": {"mutual": dyads.mutual, "asymmetric": dyads.asymmetric,
                  "null": dyads.null},
        "observed": census.observed,
        "expected": {k: float(v) for k, v in census.expected.items()},
        "transitive": census.transitive_observed,
        "intransitive": census.intransitive_observed,
    })
    return line


def run_coupling(cfg: PipelineConfig) -> str:
    corpus = _load_corpus(cfg)
    index = _load_index(cfg)
    stats: dict[str, dict] = {}
    n_papers = 0
    for layer in LAYERS:
        matrix, net = build_coupling(corpus, index, layer)
        n_papers = matrix.n
        write_matrix_tsv(matrix.ids, matrix.ids, matrix.values,
                         _path(cfg, f"{layer}_similarity.tsv"),
                         corner="record_id")
        out = io.StringIO()
        graphio.write_net_edges(net, out)
        _write_text(_path(cfg, f"{layer}_coupling.net"), out.getvalue())
        weights = net.weights()
        layer_stats = {"papers": matrix.n, "edges": len(net.edges)}
        if weights:
            dist = summarize(weights)
            layer_stats.update(mean_weight=dist.mean, sd_weight=dist.sd,
                               min_weight=dist.min, max_weight=dist.max)
        stats[layer] = layer_stats
    _write_json(_path(cfg, "coupling_stats.json"), stats)
    line = (f"coupling: {n_papers} eligible papers; "
            f"social edges {stats['social']['edges']}, "
            f"intellectual edges {stats['intellectual']['edges']}")
    _write_summary(cfg, "coupling", line, stats)
    return line


def _load_similarity(cfg: PipelineConfig, layer: str) -> SimilarityMatrix:
    rows, cols, values = read_matrix_tsv(_require(cfg, f"{layer}_similarity.tsv"))
    if rows != cols:
        raise PipelineError(f"{layer} similarity matrix is not square")
    return SimilarityMatrix(ids=tuple(rows), values=values, layer=layer)


def _load_coupling_net(cfg: PipelineConfig, layer: str) -> CouplingNetwork:
    with _require(cfg, f"{layer}_coupling.net").open(encoding="utf-8") as stream:
        labels, links, section = graphio.read_net(stream)
    if section != "edges":
        raise PipelineError(f"{layer} coupling file does not contain edges")
    if cfg.binarize_coupling:
        links = [(u, v, 1.0) for u, v, _ in links]
    return CouplingNetwork(ids=tuple(labels), edges=tuple(links), layer=layer)


def run_compare(cfg: PipelineConfig) -> str:
    mat_s = _load_similarity(cfg, "social")
    mat_i = _load_similarity(cfg, "intellectual")
    if mat_s.n == 0:
        raise PipelineError("no eligible papers; nothing to compare")
    net_s = _load_coupling_net(cfg, "social")
    net_i = _load_coupling_net(cfg, "intellectual")
    index = _load_index(cfg)

    assoc_result = distance_correlation(mat_s, mat_i)
    part_s = louvain(net_s, cfg.louvain_resolution)
    part_i = louvain(net_i, cfg.louvain_resolution)

    for layer, part in (("social", part_s), ("intellectual", part_i)):
        out = io.StringIO()
        out.write("record_id\tcommunity\n")
        for rid in sorted(part.membership):
            out.write(f"{rid}\t{part.membership[rid]}\n")
        _write_text(_path(cfg, f"{layer}_communities.tsv"), out.getvalue())

    top_s = top_communities(part_s, cfg.top_communities_social)
    top_i = top_communities(part_i, cfg.top_communities_intellectual)

    ct = None
    ct_error = None
    try:
        ct = contingency(top_i, top_s)
    except ValueError as exc:
        ct_error = str(exc)
    if ct is not None:
        write_matrix_tsv(ct.row_labels, ct.col_labels, ct.observed,
                         _path(cfg, "contingency.tsv"),
                         corner="intellectual\\social",
                         formatter=lambda v: str(int(v)))
        write_matrix_tsv(ct.row_labels, ct.col_labels, ct.residuals,
                         _path(cfg, "residuals.tsv"),
                         corner="intellectual\\social")

    columns = sorted(set(top_i.values()))
    decomp = mention_decomposition(index, top_i, min_mentions=cfg.top_cutoff + 1,
                                   communities=columns)
    out = io.StringIO()
    out.write("acknowledgee\tmentions")
    for c in decomp.communities:
        out.write(f"\tcommunity_{c}")
    out.write("\tother\tdistinct_communities\n")
    for row in decomp.rows:
        out.write(f"{row.name}\t{row.mentions}")
        for c in decomp.communities:
            out.write(f"\t{row.per_community[c]}")
        out.write(f"\t{row.other}\t{row.distinct_communities}\n")
    _write_text(_path(cfg, "mention_decomposition.tsv"), out.getvalue())

    full = mention_decomposition(index, top_i, min_mentions=1, communities=columns)
    r2 = None
    if len(full.rows) >= 2:
        try:
            r2 = pearson_r2([r.mentions for r in full.rows],
                            [r.distinct_communities for r in full.rows])
        except ValueError:
            r2 = None

    def coverage(top: dict, part) -> float:
        return len(top) / len(part.membership) if part.membership else 0.0

    payload = {
        "r_d": assoc_result.r_d,
        "sqrt_r_d": assoc_result.sqrt_r_d,
        "communities": {
            "social": {"count": len(part_s), "modularity": part_s.modularity,
                       "top": cfg.top_communities_social,
                       "top_coverage": coverage(top_s, part_s)},
            "intellectual": {"count": len(part_i),
                             "modularity": part_i.modularity,
                             "top": cfg.top_communities_intellectual,
                             "top_coverage": coverage(top_i, part_i)},
        },
        "contingency": ({
            "n": ct.n, "chi2": ct.chi2, "dof": ct.dof,
            "cramers_v": ct.cramers_v,
        } if ct is not None else {"error": ct_error}),
        "mentions_vs_distinct_communities_r2": r2,
    }
    _write_json(_path(cfg, "association.json"), payload)

    chi2_text = f"chi2 {ct.chi2:.3f} (dof {ct.dof})" if ct is not None \
        else f"contingency skipped ({ct_error})"
    r2_text = f"{r2:.3f}" if r2 is not None else "n/a"
    line = (f"compare: sqrt(R_d) {assoc_result.sqrt_r_d:.4f}, "
            f"{len(part_s)} social / {len(part_i)} intellectual communities, "
            f"{chi2_text}, R2 {r2_text}")
    _write_summary(cfg, "compare", line, payload)
    return line


def run_report(cfg: PipelineConfig) -> str:
    stages = [s for s in SUBCOMMANDS if s != "report"]
    entries = {}
    for stage in stages:
        path = _path(cfg, f"summaries/{stage}.json")
        if not path.exists():
            raise MissingArtifactError(
                f"missing summary for stage {stage!r}; run `ackmine {stage}` first")
        entries[stage] = _read_json(path)
    lines = [entries[s]["summary"] for s in stages]
    _write_json(_path(cfg, "report.json"), {"stages": entries, "lines": lines})
    return "\n".join(lines + [f"report: all {len(stages)} stages complete"])


_STAGE_FUNCTIONS = {
    "ingest": run_ingest,
    "extract": run_extract,
    "textstats": run_textstats,
    "mentions": run_mentions,
    "network": run_network,
    "decompose": run_decompose,
    "triads": run_triads,
    "coupling": run_coupling,
    "compare": run_compare,
    "report": run_report,
}


def run(subcommand: str, cfg: PipelineConfig) -> str:
    """Run one pipeline stage; returns its one-line summary."""
    if subcommand not in _STAGE_FUNCTIONS:
        raise ValueError(f"unknown subcommand {subcommand!r}")
    cfg = resolve_output_dir(cfg)
    cfg.validate()
    return _STAGE_FUNCTIONS[subcommand](cfg)
