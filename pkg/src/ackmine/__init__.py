"""Acknowledgment mining and directed-network analysis toolkit."""

from .corpus import (BiblioRecord, Corpus, CorpusFormatError, corpus_from_json,
                     corpus_to_json, eligible_papers, parse_records,
                     reference_key)
from .extract import (AliasTable, Entity, alias_candidates, build_alias_table,
                      extract_entities, name_similarity, normalize_author_name,
                      remove_self_mentions)
from .textstats import (DEFAULT_FAMILIES, KeywordFamily, keyword_report,
                        lemma_table, lemmatize, load_families)
from .mentions import (MentionIndex, build_mention_index, lorenz_gini,
                       summarize, top_acknowledgees, visibility_quotas)
from .acknet import (AckGraph, DyadCensus, Partition, SymAcyclicResult,
                     TriadCensus, build_network, classify_triad, cluster_flows,
                     dyad_census, expected_triad_counts, strong_components,
                     symmetric_acyclic_decomposition, symmetric_core,
                     triad_census)
from .coupling import CouplingNetwork, SimilarityMatrix, build_coupling, jaccard
from .assoc import (AssociationResult, CommunityPartition, contingency,
                    distance_correlation, louvain, mention_decomposition,
                    modularity, pearson_r2, top_communities)
from .pipeline import PipelineConfig, PipelineError, run

__version__ = "0.1.0"
