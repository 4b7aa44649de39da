import numpy as np
import pytest

import oracles
from conftest import (
    FIXTURE_ANSWER_TAGS,
    FIXTURE_RECORDS,
    FIXTURE_VECTORS,
    random_corpus,
    random_embeddings_for,
)
from gradematch.corpus import Corpus
from gradematch.embeddings import EmbeddingTable
from gradematch.exceptions import EmbeddingError, GradematchError, SchemaError
from gradematch.features import (
    FEATURE_INDEX,
    FEATURE_NAMES,
    FeatureVector,
    LabeledFeatureSet,
    build_idf_model,
    featurize,
    mean_by_label,
    read_features_tsv,
    write_features_tsv,
)
from gradematch.postag import LexiconPosTagger, PrecomputedPosTagger


def _fixture_featureset(fixture_corpus, fixture_embeddings):
    idf = build_idf_model(fixture_corpus)
    tagger = PrecomputedPosTagger(dict(FIXTURE_ANSWER_TAGS), fallback=LexiconPosTagger())
    return featurize(fixture_corpus, idf, fixture_embeddings, tagger)


def test_schema_has_18_components():
    assert len(FEATURE_NAMES) == 18
    assert FEATURE_NAMES[0] == "bge_ctx_q"
    assert FEATURE_NAMES[-1] == "recall1_ctx_ans_minus_q"


def test_fixture_matches_straight_line_oracle(fixture_corpus, fixture_embeddings):
    features = _fixture_featureset(fixture_corpus, fixture_embeddings)
    docs = (
        [r["context"] for r in FIXTURE_RECORDS]
        + [r["question"] for r in FIXTURE_RECORDS]
        + [r["answer"] for r in FIXTURE_RECORDS]
    )
    for i, record in enumerate(FIXTURE_RECORDS):
        vectors = {
            field: FIXTURE_VECTORS[(record["id"], field)]
            for field in ("context", "question", "answer", "rubric_fc")
        }
        expected = oracles.oracle_feature_row(record, vectors, docs, FIXTURE_ANSWER_TAGS[record["id"]])
        for name in FEATURE_NAMES:
            assert features.matrix[i, FEATURE_INDEX[name]] == pytest.approx(
                expected[name], abs=1e-10
            ), f"{record['id']}:{name}"


def test_answer_equal_to_question_forces_identities(fixture_corpus, fixture_embeddings):
    features = _fixture_featureset(fixture_corpus, fixture_embeddings)
    row = features.row(features.ids.index("fx2"))  # answer == question
    assert row["jaccard1_q_ans"] == 1.0
    assert row["precision1_q_ans"] == 1.0
    assert row["recall1_q_ans"] == 1.0


def test_empty_rubric_pc_featurizes_normally(fixture_corpus, fixture_embeddings):
    assert "" == fixture_corpus[1].rubric_pc
    features = _fixture_featureset(fixture_corpus, fixture_embeddings)
    assert len(features) == 5


def test_degenerate_flags_for_empty_answer_tokens(fixture_corpus, fixture_embeddings):
    features = _fixture_featureset(fixture_corpus, fixture_embeddings)
    flags = features.degenerate[features.ids.index("fx5")]
    # fx5's answer "?!?" has no tokens and its rubric_fc embedding is all-zero
    assert "lexical_density" in flags
    assert "recall1_q_ans" in flags
    assert "bge_fc_ans" in flags
    row = features.row(features.ids.index("fx5"))
    assert row["answer_len"] == 0.0
    assert row["lexical_density"] == 0.0


def test_missing_embedding_is_an_error(fixture_corpus, fixture_embeddings):
    entries = dict(fixture_embeddings.entries)
    del entries[("fx3", "answer")]
    table = EmbeddingTable(dim=fixture_embeddings.dim, entries=entries)
    idf = build_idf_model(fixture_corpus)
    with pytest.raises(EmbeddingError, match="fx3"):
        featurize(fixture_corpus, idf, table, LexiconPosTagger())


def test_empty_corpus_rejected(fixture_embeddings):
    with pytest.raises(GradematchError, match="empty"):
        featurize(Corpus(datapoints=[], name="x"), None, fixture_embeddings, LexiconPosTagger())


def test_featurize_thread_count_does_not_change_output(fixture_corpus, fixture_embeddings):
    idf = build_idf_model(fixture_corpus)
    tagger = LexiconPosTagger()
    a = featurize(fixture_corpus, idf, fixture_embeddings, tagger, threads=1)
    b = featurize(fixture_corpus, idf, fixture_embeddings, tagger, threads=8)
    assert np.array_equal(a.matrix, b.matrix)
    assert a.degenerate == b.degenerate


class TestMeanByLabel:
    def _set(self, labels, matrix):
        n = len(labels)
        return LabeledFeatureSet(
            ids=[f"i{j}" for j in range(n)],
            domains=["d"] * n,
            labels=np.array(labels),
            matrix=np.asarray(matrix, dtype=np.float64),
            degenerate=[frozenset()] * n,
        )

    def test_single_row_per_label_is_identity(self):
        rng = np.random.default_rng(1)
        matrix = rng.normal(size=(3, 18))
        means = mean_by_label(self._set([0, 1, 2], matrix))
        for label in (0, 1, 2):
            assert np.allclose(means[label], matrix[label])

    def test_symmetric_rows_average_to_zero(self):
        row = np.arange(18, dtype=np.float64)
        means = mean_by_label(self._set([1, 1], np.vstack([row, -row])))
        assert np.allclose(means[1], 0.0)

    def test_matches_summation_oracle(self):
        rng = np.random.default_rng(2)
        matrix = rng.normal(size=(10, 18))
        labels = [0, 1, 2, 0, 1, 2, 0, 1, 2, 0]
        means = mean_by_label(self._set(labels, matrix))
        for label in (0, 1, 2):
            rows = [list(matrix[i]) for i in range(10) if labels[i] == label]
            expected = oracles.oracle_mean(rows)
            assert np.allclose(means[label], expected, atol=1e-12)

    def test_absent_label_rejected(self):
        with pytest.raises(GradematchError, match="label 2"):
            mean_by_label(self._set([0, 0], np.zeros((2, 18))), labels=[2])


class TestTsvRoundTrip:
    def test_round_trip_lossless(self, fixture_corpus, fixture_embeddings, tmp_path):
        features = _fixture_featureset(fixture_corpus, fixture_embeddings)
        path = tmp_path / "f.tsv"
        write_features_tsv(features, path)
        again = read_features_tsv(path)
        assert again.ids == features.ids
        assert again.domains == features.domains
        assert np.array_equal(again.labels, features.labels)
        assert np.array_equal(again.matrix, features.matrix)
        assert again.degenerate == features.degenerate

    def test_header_carries_all_18_columns_in_order(self, fixture_corpus, fixture_embeddings, tmp_path):
        features = _fixture_featureset(fixture_corpus, fixture_embeddings)
        path = tmp_path / "f.tsv"
        write_features_tsv(features, path)
        header = path.read_text(encoding="utf-8").splitlines()[0].split("\t")
        assert header == ["id", "domain", "label", *FEATURE_NAMES, "degenerate"]

    def test_wrong_header_rejected(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("id\tdomain\tlabel\tonly_one\tdegenerate\n", encoding="utf-8")
        with pytest.raises(SchemaError, match="schema"):
            read_features_tsv(path)


def test_feature_vector_validation():
    with pytest.raises(SchemaError):
        FeatureVector(np.zeros(17))
    with pytest.raises(GradematchError):
        FeatureVector(np.full(18, np.nan))
    fv = FeatureVector(np.linspace(0, 1, 18))
    assert fv["bge_ctx_q"] == 0.0
    assert fv.as_dict()["recall1_ctx_ans_minus_q"] == 1.0


def test_random_corpus_features_all_finite_and_bounded():
    rng = np.random.default_rng(42)
    corpus = random_corpus(rng, 50)
    emb = random_embeddings_for(corpus, rng)
    features = featurize(corpus, build_idf_model(corpus), emb, LexiconPosTagger())
    assert np.all(np.isfinite(features.matrix))
    for name in FEATURE_NAMES:
        column = features.matrix[:, FEATURE_INDEX[name]]
        if name == "answer_len":
            assert np.all(column >= 0)
        elif name.startswith("bge_"):
            assert np.all(column >= -1 - 1e-12) and np.all(column <= 1 + 1e-12)
        else:
            assert np.all(column >= 0) and np.all(column <= 1 + 1e-12), name
