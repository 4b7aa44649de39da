"""gradematch: feature profiling and similarity-based subset selection for
rubric-graded short-answer datasets.

The pipeline: load a corpus of graded (context, question, rubric, answer,
label) records, compute an 18-component text-pair feature vector per record,
summarize a reference corpus into a shareable profile, and select the subset
of a candidate corpus closest to the reference under one of three L2-based
methods. Evaluation statistics (Wilcoxon signed-rank, quadratic weighted
kappa, balanced accuracy, feature-mean difference reports) are included.
"""

__version__ = "0.1.0"

from .chunking import ChunkParams, chunk, chunk_documents, segment_sentences
from .cluster import KmeansResult, kmeans, kmeans_pp_init
from .corpus import Corpus, DataPoint, load_corpus, write_corpus
from .embeddings import EmbeddingTable, cosine, load_embeddings
from .exceptions import CorpusError, EmbeddingError, GradematchError, SchemaError
from .features import (
    FEATURE_NAMES,
    FeatureVector,
    LabeledFeatureSet,
    build_idf_model,
    featurize,
    mean_by_label,
    read_features_tsv,
    write_features_tsv,
)
from .lexical import (
    IdfModel,
    answer_length,
    fit_idf,
    jaccard_unigram,
    minus_question_recall,
    ngram_precision,
    ngram_recall,
    tfidf_cosine,
    tokenize,
)
from .postag import LexiconPosTagger, PosTagger, PrecomputedPosTagger, lexical_density
from .selection import (
    ReferenceProfile,
    SelectionResult,
    build_profile,
    load_profile,
    load_selection,
    sample_fewshot,
    save_profile,
    save_selection,
    select_by_label_mean,
    select_by_reference_rank,
    select_by_representatives,
    standardize,
)
from .stats import (
    FeatureMeanDiffReport,
    PairedAccuracySeries,
    WilcoxonOutcome,
    balanced_accuracy,
    feature_mean_diff_report,
    pair_accuracy_runs,
    quadratic_weighted_kappa,
    wilcoxon_signed_rank,
)

__all__ = [name for name in dir() if not name.startswith("_")]
