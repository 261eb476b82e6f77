import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from word2hyp.corpus import (
    CorpusError,
    Vocabulary,
    build_negative_table,
    build_vocab,
    iter_tokens,
    keep_probability,
    sample_negative,
    subsample,
)
from word2hyp.rng import Lcg


def test_vocab_min_count_one():
    v = build_vocab("a a b".split(), min_count=1)
    assert v.words == ["a", "b"]
    assert v.counts.tolist() == [2, 1]
    assert v.index == {"a": 0, "b": 1}


def test_vocab_min_count_two():
    v = build_vocab("a a b".split(), min_count=2)
    assert v.words == ["a"]
    assert v.total_tokens == 2


def test_vocab_uniform_types_direct_count():
    rng = np.random.default_rng(0)
    toks = [f"w{i}" for i in rng.integers(0, 10, 1000)]
    v = build_vocab(toks, min_count=5)
    assert len(v) == 10
    assert v.total_tokens == 1000
    for w in v.words:
        assert v.count(w) == toks.count(w)


def test_vocab_ties_keep_first_occurrence():
    v = build_vocab("c b a a b c d".split(), min_count=1)
    assert v.words == ["c", "b", "a", "d"]


def test_vocab_errors():
    with pytest.raises(CorpusError):
        build_vocab([], min_count=1)
    with pytest.raises(CorpusError):
        build_vocab("a b".split(), min_count=3)
    with pytest.raises(ValueError):
        build_vocab("a".split(), min_count=0)


@given(st.lists(st.sampled_from("abcdefg"), min_size=1, max_size=200), st.integers(1, 5))
def test_vocab_invariants(tokens, min_count):
    try:
        v = build_vocab(tokens, min_count)
    except CorpusError:
        assert max(tokens.count(t) for t in set(tokens)) < min_count
        return
    assert all(c >= min_count for c in v.counts)
    assert all(v.index[w] == i for i, w in enumerate(v.words))
    assert list(v.counts) == sorted(v.counts, reverse=True)
    again = build_vocab(tokens, min_count)
    assert again.words == v.words and again.counts.tolist() == v.counts.tolist()


def test_encode_drops_oov():
    v = build_vocab("a a b".split(), min_count=1)
    assert v.encode("a z b".split()).tolist() == [0, 1]


def test_iter_tokens_treats_newlines_as_spaces(tmp_path):
    p = tmp_path / "c.txt"
    p.write_text("a b\nc  d\n\ne\n", encoding="utf-8")
    assert list(iter_tokens(p)) == ["a", "b", "c", "d", "e"]


@pytest.mark.parametrize("ratio, expected", [(1.0, 1.0), (100.0, 0.11), (0.25, 1.0)])
def test_keep_probability(ratio, expected):
    t = 1e-3
    total = 10**9
    count = int(ratio * t * total)
    assert keep_probability(count, total, t) == pytest.approx(expected, abs=1e-12)


def test_keep_probability_errors():
    with pytest.raises(ValueError):
        keep_probability(0, 10)
    with pytest.raises(ValueError):
        keep_probability(11, 10)


def test_keep_probabilities_vectorised_agree():
    v = Vocabulary(["a", "b", "c"], [5000, 300, 2])
    p = v.keep_probabilities(1e-3)
    for w, c in zip(v.words, v.counts):
        assert p[v.index[w]] == pytest.approx(keep_probability(int(c), v.total_tokens, 1e-3))
    assert np.all(v.keep_probabilities(0) == 1.0)


def test_subsampling_monte_carlo():
    v = Vocabulary(["a", "b"], [90_000, 10_000])
    keep = v.keep_probabilities(1e-2)
    ids = np.array([0] * 90_000 + [1] * 10_000)
    kept = subsample(ids, keep, Lcg(5))
    for i in (0, 1):
        frac = np.sum(kept == i) / np.sum(ids == i)
        assert frac == pytest.approx(keep[i], abs=0.01)


def test_table_shares_power():
    v = Vocabulary(["a", "b"], [8, 1])
    t = build_negative_table(v, 0.75, 10**6)
    share = np.bincount(t.slots) / t.size
    w = np.array([8**0.75, 1.0])
    assert share == pytest.approx(w / w.sum(), abs=1e-3)
    assert share[0] == pytest.approx(0.826, abs=1e-3)


def test_table_symmetric_counts():
    t = build_negative_table(Vocabulary(["a", "b"], [1, 1]), 0.75, 1001)
    n = np.bincount(t.slots)
    assert abs(n[0] - n[1]) <= 1
    assert n.sum() == 1001


def test_table_single_word():
    t = build_negative_table(Vocabulary(["a"], [5]), 0.75, 100)
    assert t.size == 100 and np.all(t.slots == 0)
    rng = Lcg(3)
    assert {sample_negative(t, rng) for _ in range(50)} == {0}


@given(st.lists(st.integers(1, 1000), min_size=1, max_size=30), st.integers(0, 2000))
def test_table_within_one_slot(counts, extra):
    v = Vocabulary([f"w{i}" for i in range(len(counts))], counts)
    size = len(counts) + extra
    t = build_negative_table(v, 0.75, size)
    assert t.size == size
    w = np.asarray(counts, float) ** 0.75
    n = np.bincount(t.slots, minlength=len(counts))
    assert np.all(np.abs(n - w / w.sum() * size) < 1.0)


def test_table_errors():
    with pytest.raises(ValueError):
        build_negative_table(Vocabulary(["a", "b"], [1, 1]), 0.75, 1)


def test_sample_negative_monte_carlo():
    t = build_negative_table(Vocabulary(["a", "b"], [8, 1]), 0.75, 10**6)
    rng = Lcg(11)
    draws = np.array([sample_negative(t, rng) for _ in range(10**6)])
    assert np.mean(draws == 0) == pytest.approx(0.826, abs=0.01)


def test_sample_negative_deterministic():
    t = build_negative_table(Vocabulary(["a", "b", "c"], [8, 3, 1]), 0.75, 1000)
    a, b = Lcg(42), Lcg(42)
    assert [sample_negative(t, a) for _ in range(100)] == [sample_negative(t, b) for _ in range(100)]
