import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

import w2v_oracle
from word2hyp.corpus import Vocabulary, build_negative_table, build_vocab
from word2hyp.entailment import SIGMOID_TABLE
from word2hyp.rng import stream_seed
from word2hyp.trainer import (
    ModelParams,
    TrainConfig,
    Word2Hyp,
    cbow_step,
    extract_embeddings,
    initial_params,
    lr_schedule,
    skipgram_step,
    step_loss,
    train,
)

MODES = ["posterior", "evidence"]


def small_params(rng, V=7, d=5, mode="posterior", arch="skipgram", dtype=np.float64, scale=1.0):
    emit = rng.normal(0, scale, (V, d)).astype(dtype)
    ctx = rng.normal(0, scale, (V, d)).astype(dtype)
    vocab = Vocabulary([f"w{i}" for i in range(V)], np.arange(V, 0, -1))
    return ModelParams(emit=emit, ctx=ctx, mode=mode, architecture=arch, vocab=vocab)


def fd_grad(params, inputs, target, negatives, score, which, rows, h=1e-6):
    arr = params.emit if which == "emit" else params.ctx
    g = np.zeros((len(rows), arr.shape[1]))
    for a, r in enumerate(rows):
        for c in range(arr.shape[1]):
            old = arr[r, c]
            arr[r, c] = old + h
            up = step_loss(params, inputs, target, negatives, score)
            arr[r, c] = old - h
            down = step_loss(params, inputs, target, negatives, score)
            arr[r, c] = old
            g[a, c] = (up - down) / (2 * h)
    return g


def norm_rel(a, b):
    return np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-8)


def analytic_grad(params, step, lr, emit_rows, ctx_rows):
    before_e, before_c = params.emit.copy(), params.ctx.copy()
    step(params, lr)
    ge = -(params.emit[emit_rows] - before_e[emit_rows]) / lr
    gc = -(params.ctx[ctx_rows] - before_c[ctx_rows]) / lr
    params.emit[:], params.ctx[:] = before_e, before_c
    return ge, gc


# ---------------------------------------------------------------------------
# gradients
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("mode", MODES)
@pytest.mark.parametrize("score", ["entailment", "dot"])
def test_skipgram_gradient_matches_fd(mode, score):
    rng = np.random.default_rng(10)
    worst = 0.0
    for trial in range(100):
        p = small_params(rng, mode=mode)
        center, target, n1, n2 = rng.choice(7, 4, replace=False)
        negs = [n1, n2]
        ge, gc = analytic_grad(
            p, lambda q, lr: skipgram_step(q, center, target, negs, lr, exact=True, score=score),
            1e-7, [center], [target, n1, n2])
        fe = fd_grad(p, [center], target, negs, score, "emit", [center])
        fc = fd_grad(p, [center], target, negs, score, "ctx", [target, n1, n2])
        worst = max(worst, norm_rel(ge, fe), norm_rel(gc, fc))
    assert worst < 1e-4


@pytest.mark.parametrize("mode", MODES)
def test_cbow_gradient_matches_fd(mode):
    rng = np.random.default_rng(11)
    worst = 0.0
    for trial in range(100):
        p = small_params(rng, mode=mode, arch="cbow")
        ids = rng.choice(7, 5, replace=False)
        contexts = [int(ids[0]), int(ids[1]), int(ids[1])] if trial % 2 else [int(ids[0]), int(ids[1])]
        center, negs = int(ids[2]), [int(ids[3]), int(ids[4])]
        rows = sorted(set(contexts))
        ge, gc = analytic_grad(
            p, lambda q, lr: cbow_step(q, contexts, center, negs, lr, exact=True),
            1e-7, rows, [center] + negs)
        fe = fd_grad(p, contexts, center, negs, "entailment", "emit", rows)
        fc = fd_grad(p, contexts, center, negs, "entailment", "ctx", [center] + negs)
        worst = max(worst, norm_rel(ge, fe), norm_rel(gc, fc))
    assert worst < 1e-4


def test_zero_lr_changes_nothing():
    p = small_params(np.random.default_rng(0))
    e, c = p.emit.copy(), p.ctx.copy()
    loss = skipgram_step(p, 0, 1, [2, 3], 0.0)
    assert np.isfinite(loss)
    assert np.array_equal(p.emit, e) and np.array_equal(p.ctx, c)


@pytest.mark.parametrize("mode", MODES)
def test_positive_updates_descend(mode):
    p = small_params(np.random.default_rng(1), d=10, mode=mode, dtype=np.float32, scale=0.1)
    losses = [skipgram_step(p, 0, 1, [], 0.025) for _ in range(12)]
    assert all(b < a for a, b in zip(losses, losses[1:]))


def test_step_returns_pre_update_loss():
    p = small_params(np.random.default_rng(2))
    expected = step_loss(p, [0], 1, [2, 3])
    assert skipgram_step(p, 0, 1, [2, 3], 0.1, exact=True) == pytest.approx(expected, rel=1e-12)


def test_lut_step_close_to_exact():
    rng = np.random.default_rng(3)
    for _ in range(20):
        p = small_params(rng, scale=0.5)
        q = ModelParams(p.emit.copy(), p.ctx.copy(), p.mode, p.architecture, p.vocab)
        la = skipgram_step(p, 0, 1, [2, 3], 0.05)
        lb = skipgram_step(q, 0, 1, [2, 3], 0.05, exact=True)
        assert la == pytest.approx(lb, abs=0.05)
        assert np.max(np.abs(p.emit - q.emit)) < 1e-3
        assert np.max(np.abs(p.ctx - q.ctx)) < 1e-3


@pytest.mark.parametrize("mode", MODES)
def test_cbow_single_context_equals_skipgram(mode):
    p = small_params(np.random.default_rng(4), mode=mode)
    q = ModelParams(p.emit.copy(), p.ctx.copy(), p.mode, "cbow", p.vocab)
    la = skipgram_step(p, 2, 5, [1, 3], 0.1)
    lb = cbow_step(q, [2], 5, [1, 3], 0.1)
    assert la == lb
    assert np.array_equal(p.emit, q.emit) and np.array_equal(p.ctx, q.ctx)


def test_cbow_duplicate_context_splits_gradient():
    p = small_params(np.random.default_rng(5), arch="cbow")
    q = ModelParams(p.emit.copy(), p.ctx.copy(), p.mode, "cbow", p.vocab)
    before = p.emit[2].copy()
    cbow_step(p, [2], 5, [1], 0.1, exact=True)
    cbow_step(q, [2, 2], 5, [1], 0.1, exact=True)
    # two half-gradient updates of the same row add up to the single full one
    np.testing.assert_allclose(q.emit[2] - before, p.emit[2] - before, rtol=1e-12)
    np.testing.assert_allclose(q.ctx, p.ctx, rtol=1e-12)


def test_cbow_empty_context_is_noop():
    p = small_params(np.random.default_rng(6), arch="cbow")
    e = p.emit.copy()
    assert cbow_step(p, [], 1, [2], 0.1) is None
    assert np.array_equal(p.emit, e)


def test_roles_follow_mode():
    rng = np.random.default_rng(7)
    from word2hyp.entailment import pair_score

    for mode in MODES:
        p = small_params(rng, mode=mode)
        loss = step_loss(p, [0], 1, [])
        xe, xp = (p.ctx[1], p.emit[0]) if mode == "posterior" else (p.emit[0], p.ctx[1])
        s = pair_score(xe, xp).total
        assert loss == pytest.approx(np.logaddexp(0, -s), rel=1e-12)


# ---------------------------------------------------------------------------
# classic Word2Vec regression (dot product score)
# ---------------------------------------------------------------------------

def test_dot_step_by_hand():
    emit = np.array([[0.5, -0.25], [0.0, 0.0]], np.float32)
    ctx = np.array([[0.0, 0.0], [0.25, 0.5]], np.float32)
    vocab = Vocabulary(["a", "b"], [2, 1])
    p = ModelParams(emit, ctx, "posterior", "skipgram", vocab)
    skipgram_step(p, 0, 1, [], 0.5, score="dot")
    # f = 0.5*0.25 - 0.25*0.5 = 0 -> sigmoid 0.5 -> g = 0.25
    assert p.ctx[1].tolist() == [np.float32(0.25 + 0.25 * 0.5), np.float32(0.5 - 0.25 * 0.25)]
    assert p.emit[0].tolist() == [np.float32(0.5 + 0.25 * 0.25), np.float32(-0.25 + 0.25 * 0.5)]


def test_five_dot_steps_bit_exact():
    rng = np.random.default_rng(8)
    V, d = 6, 8
    emit = rng.uniform(-0.5, 0.5, (V, d)).astype(np.float32)
    ctx = rng.uniform(-0.5, 0.5, (V, d)).astype(np.float32)
    vocab = Vocabulary([f"w{i}" for i in range(V)], np.arange(V, 0, -1))
    p = ModelParams(emit.copy(), ctx.copy(), "posterior", "skipgram", vocab)
    steps = [(0, 1, [2, 3]), (1, 0, [4, 5]), (2, 3, [0, 1]), (0, 4, [5, 2]), (5, 1, [3, 0])]
    for center, target, negs in steps:
        skipgram_step(p, center, target, negs, 0.025, score="dot")
        w2v_oracle.sg_update(emit, ctx, center, [target] + negs, [1, 0, 0], 0.025, SIGMOID_TABLE)
    assert np.array_equal(p.emit, emit)
    assert np.array_equal(p.ctx, ctx)


def test_dot_training_run_bit_exact_against_oracle():
    corpus = "the cat sat on the mat the dog sat".split()
    config = TrainConfig(dim=6, window=2, negative=2, epochs=1, min_count=1, sample=0,
                         seed=7, score="dot", table_size=50)
    params = train(corpus, config)
    vocab = build_vocab(corpus, 1)
    ids = vocab.encode(corpus)
    table = build_negative_table(vocab, config.power, 50)
    w_in = w2v_oracle.init_input(len(vocab), 6, stream_seed(7, 0xFFFFFFFF))
    w_out = np.zeros_like(w_in)
    trace = w2v_oracle.train(ids, w_in, w_out, table.slots, 2, 2, 0.025,
                             stream_seed(7, 0), SIGMOID_TABLE)
    assert len(trace) >= 5
    assert params.stats.epoch_examples == [len(trace)]
    assert np.array_equal(params.emit, w_in)
    assert np.array_equal(params.ctx, w_out)


# ---------------------------------------------------------------------------
# training driver
# ---------------------------------------------------------------------------

def test_lr_schedule():
    assert lr_schedule(0.0, 0.025) == 0.025
    assert lr_schedule(1.0, 0.025) == pytest.approx(0.025e-4)
    assert lr_schedule(0.5, 0.025) == pytest.approx(0.0125)


def test_initialisation_ranges():
    vocab = Vocabulary(["a", "b", "c"], [3, 2, 1])
    p = initial_params(vocab, TrainConfig(dim=40))
    assert p.emit.dtype == np.float32
    assert np.all(np.abs(p.emit) <= 0.5 / 40)
    assert np.all(p.ctx == 0)


def test_single_token_corpus_makes_no_updates():
    config = TrainConfig(dim=8, min_count=1, epochs=2)
    params = train(["a"], config)
    start = initial_params(params.vocab, config)
    assert np.array_equal(params.emit, start.emit)
    assert np.all(params.ctx == 0)
    assert sum(params.stats.epoch_examples) == 0


@pytest.fixture(scope="module")
def toy_corpus():
    from word2hyp.synthetic import generate_corpus, generate_taxonomy

    return list(generate_corpus(generate_taxonomy(3, 3, seed=1), 30_000, seed=1))


@pytest.mark.parametrize("arch", ["skipgram", "cbow"])
@pytest.mark.parametrize("mode", MODES)
def test_training_is_bit_reproducible(toy_corpus, arch, mode):
    config = TrainConfig(dim=10, epochs=1, arch=arch, mode=mode, seed=3, table_size=10**4)
    a = train(toy_corpus, config)
    b = train(toy_corpus, config)
    assert np.array_equal(a.emit, b.emit) and np.array_equal(a.ctx, b.ctx)
    c = train(toy_corpus, TrainConfig(dim=10, epochs=1, arch=arch, mode=mode, seed=4,
                                      table_size=10**4))
    assert not np.array_equal(a.emit, c.emit)


def test_loss_decreases_and_stats(toy_corpus):
    p = train(toy_corpus, TrainConfig(dim=10, epochs=3, table_size=10**4))
    assert len(p.stats.epoch_loss) == 3
    assert np.all(np.isfinite(p.stats.epoch_loss))
    assert p.stats.epoch_loss[-1] < p.stats.epoch_loss[0]
    in_vocab = len(p.vocab.encode(toy_corpus))
    assert p.stats.words == 3 * in_vocab
    assert np.all(np.isfinite(p.emit)) and np.all(np.isfinite(p.ctx))


def test_multiple_workers_run(toy_corpus):
    p = train(toy_corpus, TrainConfig(dim=10, epochs=1, workers=3, table_size=10**4))
    assert p.stats.words == len(p.vocab.encode(toy_corpus))
    assert np.all(np.isfinite(p.emit))


def test_cbow_counts_skipped_contexts():
    p = train(["a"] * 3, TrainConfig(dim=4, min_count=1, arch="cbow", sample=0,
                                      table_size=10))
    assert p.stats.skipped_contexts == 0
    assert sum(p.stats.epoch_examples) > 0


def test_extract_embeddings_tags_mode():
    p = small_params(np.random.default_rng(9), mode="evidence")
    vectors, mode = extract_embeddings(p)
    assert vectors is p.emit and mode == "evidence"


@pytest.mark.parametrize("bad", [dict(dim=0), dict(negative=0), dict(window=-1),
                                 dict(mode="other"), dict(arch="glove"), dict(alpha=-0.1),
                                 dict(sample=-1.0), dict(workers=0)])
def test_config_validation(bad):
    with pytest.raises(ValueError):
        TrainConfig(**bad)


def test_config_default_alpha():
    assert TrainConfig().alpha == 0.025
    assert TrainConfig(arch="cbow").alpha == 0.05
    assert TrainConfig().dim == 200


def test_params_shape_check():
    with pytest.raises(ValueError):
        ModelParams(np.zeros((2, 3)), np.zeros((2, 4)), "posterior", "skipgram")


# ---------------------------------------------------------------------------
# estimator
# ---------------------------------------------------------------------------

def test_estimator_fit_transform(toy_corpus):
    est = Word2Hyp(dim=8, epochs=1, table_size=10**4)
    assert est.get_params()["dim"] == 8
    est.fit(toy_corpus)
    words = est.vocab_.words[:3]
    out = est.transform(words)
    assert out.shape == (3, 8)
    assert np.array_equal(out[0], est.params_.emit[0])
    with pytest.raises(KeyError):
        est.transform(["not-a-word"])
    twin = clone(est)
    assert twin.get_params() == est.get_params()
    assert not hasattr(twin, "params_")


def test_estimator_not_fitted():
    with pytest.raises(NotFittedError):
        Word2Hyp().transform(["a"])


def test_estimator_rejects_bad_params():
    with pytest.raises(ValueError):
        Word2Hyp(mode="nope").fit(["a"] * 10)
