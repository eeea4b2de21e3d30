import numpy as np
import pytest

from ackmine.corpus import BiblioRecord, Corpus, reference_key
from ackmine.coupling import build_coupling, jaccard
from ackmine.mentions import MentionIndex


class TestJaccard:
    def test_identical(self):
        assert jaccard({1, 2}, {1, 2}) == 1.0

    def test_disjoint(self):
        assert jaccard({1}, {2}) == 0.0

    def test_half_overlap(self):
        assert jaccard({1, 2, 3}, {2, 3, 4}) == 0.5

    def test_both_empty_rejected(self):
        with pytest.raises(ValueError):
            jaccard(set(), set())

    def test_one_empty_is_zero(self):
        assert jaccard(set(), {1}) == 0.0


def _fixture():
    refs = {
        "P1": ["r1", "r2", "r3"],
        "P2": ["r2", "r3", "r4"],
        "P3": ["r9"],
        "P4": ["r1"],       # no acknowledgees: ineligible
        "P5": [],           # no refs: ineligible
    }
    acks = {
        "P1": {"Ann One", "Bob Two"},
        "P2": {"Ann One"},
        "P3": {"Cyd Three"},
        "P4": set(),
        "P5": {"Ann One"},
    }
    records = [BiblioRecord(rid, doc_type="Article", authors=("X, Y",),
                            ack_text="t",
                            cited_refs=frozenset(reference_key(r)
                                                 for r in rs))
               for rid, rs in refs.items()]
    return Corpus(records=records), MentionIndex(
        paper_acks={k: frozenset(v) for k, v in acks.items()})


class TestBuildCoupling:
    def test_eligible_restriction(self):
        corpus, index = _fixture()
        matrix, net = build_coupling(corpus, index, "social")
        assert matrix.ids == ("P1", "P2", "P3")
        assert net.ids == matrix.ids

    def test_matrix_invariants(self):
        corpus, index = _fixture()
        for layer in ("social", "intellectual"):
            matrix, net = build_coupling(corpus, index, layer)
            assert np.allclose(matrix.values, matrix.values.T)
            assert np.all(np.diag(matrix.values) == 1.0)
            assert np.all((matrix.values >= 0) & (matrix.values <= 1))
            positive_offdiag = int((matrix.values > 0).sum()) - matrix.n
            assert len(net.edges) == positive_offdiag / 2

    def test_values(self):
        corpus, index = _fixture()
        matrix, net = build_coupling(corpus, index, "intellectual")
        assert matrix.value("P1", "P2") == 0.5  # {r2,r3} over {r1..r4}
        assert matrix.value("P1", "P3") == 0.0
        social, s_net = build_coupling(corpus, index, "social")
        assert social.value("P1", "P2") == 0.5  # {Ann One} over two names
        # papers sharing no acknowledgee are not linked
        assert all({u, v} != {"P1", "P3"} for u, v, _ in s_net.edges)

    def test_permutation_invariance(self):
        corpus, index = _fixture()
        matrix, _ = build_coupling(corpus, index, "social")
        reordered = Corpus(records=list(reversed(corpus.records)))
        matrix2, _ = build_coupling(reordered, index, "social")
        assert matrix.ids == matrix2.ids  # eligible set is id-sorted
        assert np.array_equal(matrix.values, matrix2.values)

    def test_unknown_layer_rejected(self):
        corpus, index = _fixture()
        with pytest.raises(ValueError):
            build_coupling(corpus, index, "temporal")
