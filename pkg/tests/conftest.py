import json
import sys
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"
sys.path.insert(0, str(FIXTURES))


@pytest.fixture(scope="session")
def fixture_corpus_path() -> Path:
    return FIXTURES / "corpus30.txt"


@pytest.fixture(scope="session")
def manifest() -> dict:
    return json.loads((FIXTURES / "corpus30_manifest.json").read_text())


@pytest.fixture(scope="session")
def ner_metrics() -> dict:
    return json.loads((FIXTURES / "ner_metrics.json").read_text())


@pytest.fixture(scope="session")
def pipeline_run(tmp_path_factory, fixture_corpus_path) -> Path:
    """One full CLI pipeline run over the fixture corpus, shared per session."""
    from ackmine.cli import main

    out = tmp_path_factory.mktemp("pipeline")
    rc = main(["ingest", "--input", str(fixture_corpus_path),
               "--format", "field-tagged", "--output-dir", str(out)])
    assert rc == 0
    for stage in ("extract", "textstats", "mentions", "network", "decompose",
                  "triads", "coupling", "compare", "report"):
        rc = main([stage, "--auto-merge", "--high-threshold", "4",
                   "--top-cutoff", "2", "--output-dir", str(out)])
        assert rc == 0, stage
    return out
