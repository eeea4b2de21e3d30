"""End-to-end pipeline tests: the CLI run over the bundled 30-record fixture
corpus must reproduce the oracle-computed manifest."""

import csv
import json
import math
from math import comb
from pathlib import Path

import pytest

from ackmine.cli import main
from ackmine.graphio import read_net


def _read_json(path: Path):
    return json.loads(path.read_text())


def _read_tsv(path: Path) -> list[dict]:
    with path.open() as stream:
        return list(csv.DictReader(stream, delimiter="\t"))


def _summary(run: Path, stage: str) -> dict:
    return _read_json(run / "summaries" / f"{stage}.json")["numbers"]


class TestStageArtifacts:
    def test_ingest_counts(self, pipeline_run, manifest):
        numbers = _summary(pipeline_run, "ingest")
        assert numbers["records"] == manifest["corpus"]["records"]
        assert numbers["articles"] == manifest["corpus"]["articles"]
        assert numbers["with_ack"] == manifest["corpus"]["with_ack_text"]

    def test_extract_reproduces_gold_acknowledgee_sets(self, pipeline_run,
                                                       manifest):
        acks = _read_json(pipeline_run / "acknowledgees.json")
        assert acks == manifest["paper_acks"]

    def test_alias_audit_and_merges(self, pipeline_run, manifest):
        rows = _read_tsv(pipeline_run / "alias_audit.tsv")
        pairs = [[r["form_a"], r["form_b"]] for r in rows]
        assert pairs == manifest["alias"]["candidates"]
        assert all(r["decision"] == "yes" for r in rows)
        aliases = _read_json(pipeline_run / "aliases.json")
        assert len(aliases["merges"]) == manifest["alias"]["merges"]
        katz_cluster = next(c for c in aliases["clusters"]
                            if manifest["alias"]["canonical"] in c)
        assert "Lawrence Katz" in katz_cluster

    def test_mention_counts(self, pipeline_run, manifest):
        rows = _read_tsv(pipeline_run / "mention_counts.tsv")
        counts = {r["acknowledgee"]: int(r["mentions"]) for r in rows}
        assert counts == manifest["mentions"]["counts"]

    def test_mention_summary_statistics(self, pipeline_run, manifest):
        numbers = _summary(pipeline_run, "mentions")
        expect = manifest["mentions"]
        assert numbers["acknowledgees"] == expect["distinct_acknowledgees"]
        assert numbers["papers_without_acknowledgees"] == \
            expect["papers_without_acknowledgees"]
        assert numbers["one_mention"] == expect["one_mention"]
        assert numbers["five_or_more"] == expect["five_or_more"]
        assert numbers["gini"] == pytest.approx(expect["gini"], abs=1e-12)
        per_paper = numbers["acknowledgees_per_paper"]
        for key in ("n", "mean", "median", "min", "max"):
            assert per_paper[key] == pytest.approx(expect["per_paper"][key])
        assert per_paper["skewness"] == \
            pytest.approx(expect["per_paper"]["skewness"], abs=1e-12)

    def test_lorenz_points(self, pipeline_run):
        rows = _read_tsv(pipeline_run / "lorenz.tsv")
        ys = [float(r["mention_share"]) for r in rows]
        assert rows[0]["population_share"] == "0.0"
        assert float(rows[-1]["population_share"]) == 1.0
        assert float(rows[-1]["mention_share"]) == 1.0
        assert ys == sorted(ys)

    def test_quotas(self, pipeline_run, manifest):
        quotas = _read_json(pipeline_run / "quotas.json")
        for key, value in manifest["quotas"].items():
            if isinstance(value, float):
                assert quotas[key] == pytest.approx(value, abs=1e-12), key
            else:
                assert quotas[key] == value, key

    def test_top_acknowledgees_ranking(self, pipeline_run, manifest):
        rows = _read_tsv(pipeline_run / "top_acknowledgees.tsv")
        got = [[int(r["rank"]), r["acknowledgee"], int(r["mentions"])]
               for r in rows]
        assert got == manifest["mentions"]["top_min3"]

    def test_network_stats_and_roles(self, pipeline_run, manifest):
        stats = _read_json(pipeline_run / "network_stats.json")
        expect = manifest["network"]
        assert stats["nodes"] == expect["nodes"]
        assert stats["arcs"] == expect["arcs"]
        assert stats["total_weight"] == pytest.approx(expect["total_weight"])
        assert stats["roles"]["author-only"] == expect["author_only"]
        assert stats["roles"]["acknowledgee-only"] == expect["acknowledgee_only"]
        assert stats["roles"]["both"] == expect["both"]

    def test_network_export_round_trip(self, pipeline_run, manifest):
        with (pipeline_run / "network.net").open() as stream:
            labels, links, section = read_net(stream)
        assert section == "arcs"
        assert len(labels) == manifest["network"]["nodes"]
        assert len(links) == manifest["network"]["arcs"]
        # weighted in-degree equals the distinct-paper mention count
        indeg: dict[str, float] = {}
        for _, target, weight in links:
            indeg[target] = indeg.get(target, 0.0) + weight
        for name, count in manifest["mentions"]["counts"].items():
            assert indeg[name] == pytest.approx(count, abs=1e-9)

    def test_triad_census_table(self, pipeline_run, manifest):
        rows = _read_tsv(pipeline_run / "triad_census.tsv")
        observed = {}
        for row in rows:
            if row["type"] in ("Transitive", "Intransitive"):
                continue
            label = row["type"].split(" - ")[1]
            observed[label] = int(row["observed"])
        for label, count in manifest["triads_observed"].items():
            assert observed[label] == count, label
        assert sum(observed.values()) == comb(manifest["network"]["nodes"], 3)
        expected_total = sum(float(r["expected"]) for r in rows
                             if r["type"] not in ("Transitive", "Intransitive"))
        assert expected_total == pytest.approx(
            comb(manifest["network"]["nodes"], 3), rel=1e-9)

    def test_dyad_census_summary(self, pipeline_run, manifest):
        numbers = _summary(pipeline_run, "triads")
        assert numbers["dyads"] == manifest["dyads"]

    def test_decomposition_summary(self, pipeline_run, manifest):
        info = _read_json(pipeline_run / "decomposition.json")
        expect = manifest["decomposition"]
        assert info["clusters"] == expect["clusters"]
        assert info["error_count"] == expect["error_count"]
        assert info["seed_clusters"] == expect["seed_clusters"]
        assert info["direct_symmetric_nodes"] == expect["direct_symmetric_nodes"]
        assert info["symmetric_components"] == expect["symmetric_components"]
        assert info["largest_symmetric_component"] == \
            expect["largest_symmetric_component"]
        assert info["strong_components"] == expect["strong_components"]

    def _cluster_membership(self, run: Path) -> dict[str, int]:
        with (run / "network.net").open() as stream:
            labels, _, _ = read_net(stream)
        clu = [int(line) for line in
               (run / "decomposition.clu").read_text().splitlines()[1:]]
        return dict(zip(labels, clu))

    def test_named_clusters_and_ranks(self, pipeline_run, manifest):
        membership = self._cluster_membership(pipeline_run)
        ranks = {int(r["cluster"]): int(r["rank"])
                 for r in _read_tsv(pipeline_run / "clusters.tsv")}
        for info in manifest["decomposition"]["multi_clusters"].values():
            ids = {membership[name] for name in info["members"]}
            assert len(ids) == 1, info["members"]
            assert ranks[ids.pop()] == info["rank"]

    def test_named_flows(self, pipeline_run, manifest):
        membership = self._cluster_membership(pipeline_run)
        anchor = {"A": "Lawrence F. Katz", "B": "Wei Zhang",
                  "C": "Pierre Dubois"}
        flows = {(int(r["from_cluster"]), int(r["to_cluster"])):
                 float(r["weight"])
                 for r in _read_tsv(pipeline_run / "flows.tsv")}
        for name, value in manifest["decomposition"]["named_flows"].items():
            src, dst = name.split("->")
            key = (membership[anchor[src]], membership[anchor[dst]])
            assert flows[key] == pytest.approx(value, abs=1e-9), name

    def test_symmetric_core_export(self, pipeline_run, manifest):
        with (pipeline_run / "symmetric_core.net").open() as stream:
            labels, links, _ = read_net(stream)
        assert len(labels) == \
            manifest["decomposition"]["largest_symmetric_component"]

    def test_coupling_stats(self, pipeline_run, manifest):
        stats = _read_json(pipeline_run / "coupling_stats.json")
        for layer, expect in manifest["coupling"]["layers"].items():
            assert stats[layer]["papers"] == expect["papers"]
            assert stats[layer]["edges"] == expect["edges"]
            for key in ("mean_weight", "min_weight", "max_weight"):
                assert stats[layer][key] == pytest.approx(expect[key],
                                                          abs=1e-12)

    def test_similarity_matrix_spot_values(self, pipeline_run, manifest):
        rows = _read_tsv(pipeline_run / "social_similarity.tsv")
        social = {r["record_id"]: r for r in rows}
        assert float(social["WOS:W001"]["WOS:W002"]) == \
            manifest["coupling"]["spot_values"]["social W001~W002"]
        rows = _read_tsv(pipeline_run / "intellectual_similarity.tsv")
        intel = {r["record_id"]: r for r in rows}
        assert float(intel["WOS:W001"]["WOS:W002"]) == \
            manifest["coupling"]["spot_values"]["intellectual W001~W002"]
        ids = [r["record_id"] for r in rows]
        assert ids == manifest["coupling"]["eligible"]

    def test_association_results(self, pipeline_run, manifest):
        assoc = _read_json(pipeline_run / "association.json")
        assert assoc["sqrt_r_d"] == pytest.approx(
            manifest["association"]["sqrt_r_d"], abs=1e-10)
        ct = assoc["contingency"]
        assert "chi2" in ct
        residual_rows = _read_tsv(pipeline_run / "residuals.tsv")
        total = 0.0
        for row in residual_rows:
            total += sum(float(v) ** 2 for k, v in row.items()
                         if k != "intellectual\\social")
        assert ct["chi2"] == pytest.approx(total, abs=1e-9)

    def test_contingency_marginals(self, pipeline_run):
        rows = _read_tsv(pipeline_run / "contingency.tsv")
        total = sum(int(v) for row in rows
                    for k, v in row.items() if k != "intellectual\\social")
        assoc = _read_json(pipeline_run / "association.json")
        assert total == assoc["contingency"]["n"]

    def test_mention_decomposition_rows(self, pipeline_run, manifest):
        rows = _read_tsv(pipeline_run / "mention_decomposition.tsv")
        by_name = {r["acknowledgee"]: r for r in rows}
        top = {name for _, name, _ in manifest["mentions"]["top_min3"]}
        assert set(by_name) == top
        for name, row in by_name.items():
            cells = [int(v) for k, v in row.items()
                     if k.startswith("community_")]
            assert sum(cells) + int(row["other"]) == int(row["mentions"])
            assert int(row["mentions"]) == \
                manifest["mentions"]["counts"][name]
            assert int(row["distinct_communities"]) == \
                sum(1 for c in cells if c > 0)

    def test_communities_cover_eligible_papers(self, pipeline_run, manifest):
        for layer in ("social", "intellectual"):
            rows = _read_tsv(pipeline_run / f"{layer}_communities.tsv")
            assert [r["record_id"] for r in rows] == \
                manifest["coupling"]["eligible"]

    def test_textstats_lemmas(self, pipeline_run, manifest):
        rows = _read_tsv(pipeline_run / "lemmas.tsv")
        counts = {r["lemma"]: int(r["occurrences"]) for r in rows}
        for lemma, expected in manifest["textstats"]["lemmas"].items():
            assert counts.get(lemma, 0) == expected, lemma

    def test_textstats_keywords(self, pipeline_run, manifest):
        rows = _read_tsv(pipeline_run / "keywords.tsv")
        counts = {r["family"]: int(r["articles"]) for r in rows}
        for family, expected in manifest["textstats"]["keywords"].items():
            assert counts[family] == expected, family
        assert counts["all_families"] == manifest["textstats"]["matching_all"]
        assert counts["negative_feedback"] == \
            manifest["textstats"]["negative_feedback"]

    def test_report_concatenates_all_stages(self, pipeline_run):
        report = _read_json(pipeline_run / "report.json")
        assert len(report["lines"]) == 9
        assert set(report["stages"]) == {
            "ingest", "extract", "textstats", "mentions", "network",
            "decompose", "triads", "coupling", "compare"}


class TestRerunDeterminism:
    def test_byte_identical_outputs(self, pipeline_run):
        targets = ["mention_counts.tsv", "quotas.json", "lorenz.tsv",
                   "top_acknowledgees.tsv"]
        before = {t: (pipeline_run / t).read_bytes() for t in targets}
        rc = main(["mentions", "--high-threshold", "4", "--top-cutoff", "2",
                   "--output-dir", str(pipeline_run)])
        assert rc == 0
        for t in targets:
            assert (pipeline_run / t).read_bytes() == before[t], t


class TestCliBehavior:
    def test_empty_input_gives_empty_corpus_and_zero_exit(self, tmp_path,
                                                          capsys):
        empty = tmp_path / "empty.txt"
        empty.write_text("")
        rc = main(["ingest", "--input", str(empty),
                   "--output-dir", str(tmp_path / "out")])
        assert rc == 0
        corpus = _read_json(tmp_path / "out" / "corpus.json")
        assert corpus["records"] == []

    def test_missing_input_is_data_error(self, tmp_path, capsys):
        rc = main(["ingest", "--input", str(tmp_path / "nope.txt"),
                   "--output-dir", str(tmp_path / "out")])
        assert rc == 2
        assert "not found" in capsys.readouterr().err

    def test_missing_artifact_names_prerequisite(self, tmp_path, capsys):
        rc = main(["mentions", "--output-dir", str(tmp_path / "out")])
        assert rc == 2
        assert "ackmine extract" in capsys.readouterr().err

    def test_report_requires_all_stages(self, tmp_path, fixture_corpus_path,
                                        capsys):
        out = tmp_path / "out"
        main(["ingest", "--input", str(fixture_corpus_path),
              "--output-dir", str(out)])
        rc = main(["report", "--output-dir", str(out)])
        assert rc == 2
        assert "run `ackmine" in capsys.readouterr().err

    def test_usage_errors_exit_one(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(["mentions", "--top-cutoff", "not-a-number"])
        assert excinfo.value.code == 1
        with pytest.raises(SystemExit) as excinfo:
            main(["frobnicate"])
        assert excinfo.value.code == 1
        with pytest.raises(SystemExit) as excinfo:
            main([])
        assert excinfo.value.code == 1

    def test_invalid_config_value_is_data_error(self, tmp_path, capsys):
        rc = main(["mentions", "--alias-threshold", "7",
                   "--output-dir", str(tmp_path)])
        assert rc == 2

    def test_config_file_and_env_override(self, tmp_path, fixture_corpus_path,
                                          monkeypatch, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({
            "input_path": str(fixture_corpus_path),
            "output_dir": str(tmp_path / "ignored"),
        }))
        override = tmp_path / "from_env"
        monkeypatch.setenv("ACKMINE_OUTPUT_DIR", str(override))
        rc = main(["ingest", "--config", str(cfg)])
        assert rc == 0
        assert (override / "corpus.json").exists()
        assert not (tmp_path / "ignored").exists()

    def test_unknown_config_key_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"frobnicate": 1}))
        rc = main(["ingest", "--config", str(cfg)])
        assert rc == 2
        assert "unknown config keys" in capsys.readouterr().err

    def test_metadata_join_appends_columns(self, tmp_path, pipeline_run):
        meta = tmp_path / "meta.tsv"
        meta.write_text("name\tboard\nLawrence F. Katz\tQJE\n")
        out = tmp_path / "out"
        for name in ("corpus.json", "acknowledgees.json", "aliases.json"):
            out.mkdir(exist_ok=True)
            (out / name).write_bytes((pipeline_run / name).read_bytes())
        rc = main(["mentions", "--high-threshold", "4", "--top-cutoff", "2",
                   "--metadata", str(meta), "--output-dir", str(out)])
        assert rc == 0
        rows = _read_tsv(out / "top_acknowledgees.tsv")
        katz = next(r for r in rows if r["acknowledgee"] == "Lawrence F. Katz")
        assert katz["board"] == "QJE"
        others = [r for r in rows if r["acknowledgee"] != "Lawrence F. Katz"]
        assert all(r["board"] == "" for r in others)

    def test_corpus_without_acknowledgees(self, tmp_path, capsys):
        src = tmp_path / "bare.txt"
        src.write_text("PT J\nAU Roe, Jane\nSO J\nDT Article\nPY 2016\n"
                       "FT we thank nobody in particular.\nUT B1\nER\n")
        out = tmp_path / "out"
        assert main(["ingest", "--input", str(src),
                     "--output-dir", str(out)]) == 0
        assert main(["extract", "--output-dir", str(out)]) == 0
        assert main(["mentions", "--output-dir", str(out)]) == 0
        acks = _read_json(out / "acknowledgees.json")
        assert acks == {"B1": []}
        assert not (out / "lorenz.tsv").exists()
