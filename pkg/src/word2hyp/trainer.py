"""Word2Hyp training: Word2Vec negative sampling with an entailment pair score.

Each word owns two vectors.  ``emit`` is the array handed out as embeddings;
``ctx`` plays the other role.  In ``posterior`` mode the emitted rows are the
posterior vectors ``Xp`` and the ``ctx`` rows are evidence vectors ``Xe'``;
``evidence`` mode swaps the roles.  The logistic classifier of Word2Vec is
kept as is, only its dot product is replaced by
:func:`word2hyp.entailment.pair_score`.

Workers update the shared matrices without locks (Hogwild).  Only a single
worker with a fixed seed is bit-reproducible.
"""

from dataclasses import asdict, dataclass, field
import logging
import threading
import time

import numpy as np
from numba import njit
from sklearn.base import BaseEstimator, TransformerMixin

from . import corpus as _corpus
from ._validation import check_choice, check_is_fitted, check_positive
from .entailment import (
    BINS_PER_UNIT,
    LOG_SIGMOID_TABLE,
    MAX_EXP,
    SIGMOID_TABLE,
    TABLE_SIZE,
    exact_log_sigmoid,
    exact_sigmoid,
    lut_log_sigmoid,
    lut_sigmoid,
)
from .rng import lcg_next, lcg_randint, lcg_uniform, stream_seed

logger = logging.getLogger(__name__)

POSTERIOR, EVIDENCE = 0, 1
SKIPGRAM, CBOW = 0, 1
ENTAILMENT, DOT = 0, 1

MODES = {"posterior": POSTERIOR, "evidence": EVIDENCE}
ARCHITECTURES = {"skipgram": SKIPGRAM, "cbow": CBOW}
SCORES = {"entailment": ENTAILMENT, "dot": DOT}

MAX_SENTENCE_LENGTH = 1000
NEGATIVE_ATTEMPTS = 3
_INIT_STREAM = 0xFFFFFFFF


@dataclass
class TrainConfig:
    """Training hyper-parameters.  ``alpha=None`` picks 0.025 (skipgram) or 0.05 (cbow)."""

    dim: int = 200
    window: int = 5
    negative: int = 5
    epochs: int = 5
    alpha: float = None
    min_count: int = _corpus.DEFAULT_MIN_COUNT
    sample: float = _corpus.DEFAULT_SAMPLE
    seed: int = 1
    workers: int = 1
    arch: str = "skipgram"
    mode: str = "posterior"
    score: str = "entailment"
    table_size: int = _corpus.DEFAULT_TABLE_SIZE
    power: float = _corpus.DEFAULT_POWER
    report_every: int = 100_000

    def __post_init__(self):
        check_choice(self.arch, "arch", ARCHITECTURES)
        check_choice(self.mode, "mode", MODES)
        check_choice(self.score, "score", SCORES)
        for name in ("dim", "window", "negative", "epochs", "min_count", "workers",
                     "table_size", "report_every"):
            check_positive(getattr(self, name), name)
        check_positive(self.sample, "sample", allow_zero=True)
        if self.alpha is None:
            self.alpha = 0.05 if self.arch == "cbow" else 0.025
        check_positive(self.alpha, "alpha")


@dataclass
class TrainStats:
    words: int = 0
    seconds: float = 0.0
    epoch_loss: list = field(default_factory=list)
    epoch_examples: list = field(default_factory=list)
    skipped_contexts: int = 0

    @property
    def words_per_second(self):
        return self.words / self.seconds if self.seconds > 0 else float("inf")


@dataclass
class ModelParams:
    """The two trained arrays plus the tags that give them meaning."""

    emit: np.ndarray
    ctx: np.ndarray
    mode: str
    architecture: str
    vocab: _corpus.Vocabulary = None
    config: TrainConfig = None
    stats: TrainStats = None

    def __post_init__(self):
        if self.emit.shape != self.ctx.shape:
            raise ValueError(f"array shapes differ: {self.emit.shape} vs {self.ctx.shape}")
        check_choice(self.mode, "mode", MODES)
        check_choice(self.architecture, "architecture", ARCHITECTURES)

    @property
    def dim(self):
        return self.emit.shape[1]

    def metadata(self):
        meta = {"mode": self.mode, "architecture": self.architecture, "dim": self.dim}
        if self.config is not None:
            meta.update({f"config.{k}": v for k, v in asdict(self.config).items()})
        if self.stats is not None:
            meta["corpus_tokens"] = self.stats.words
        elif self.vocab is not None:
            meta["corpus_tokens"] = self.vocab.total_tokens
        return meta


def lr_schedule(progress, alpha0):
    """Linearly decayed learning rate, floored at ``alpha0 * 1e-4``."""
    return alpha0 * max(1.0 - progress, 1e-4)


def extract_embeddings(params):
    """Emitted vectors and the role they play (``"posterior"`` or ``"evidence"``)."""
    return params.emit, params.mode


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------

@njit(cache=True, inline="always")
def _dot_grads(l1, ctx, target, g_in, g_out):
    s = 0.0
    for c in range(l1.shape[0]):
        v = np.float64(ctx[target, c])
        s += l1[c] * v
        g_in[c] = v
        g_out[c] = l1[c]
    return s


@njit(cache=True, inline="always")
def _entail_grads_lut(l1, ctx, target, posterior, sig_t, lsig_t, g_in, g_out):
    """Pair score and its per-feature gradients using the lookup tables.

    Branch-free so the loop vectorises.  One table index serves both
    ``sigmoid(xe)`` and ``softplus(xe) = xe - log sigmoid(xe)``.
    """
    s = 0.0
    for c in range(l1.shape[0]):
        v = np.float64(ctx[target, c])
        xe = v if posterior else l1[c]
        xp = l1[c] if posterior else v
        pos = (min(max(xe, -MAX_EXP), MAX_EXP) + MAX_EXP) * BINS_PER_UNIT
        i = min(np.int64(pos), TABLE_SIZE - 1)
        f = pos - i
        ls = lsig_t[i] + f * (lsig_t[i + 1] - lsig_t[i])
        se = sig_t[i] + f * (sig_t[i + 1] - sig_t[i])
        ls = xe if xe < -MAX_EXP else ls
        ls = 0.0 if xe > MAX_EXP else ls
        se = 0.0 if xe < -MAX_EXP else se
        se = 1.0 if xe > MAX_EXP else se
        y = xe - ls + xp
        pos = (min(max(-y, -MAX_EXP), MAX_EXP) + MAX_EXP) * BINS_PER_UNIT
        i = min(np.int64(pos), TABLE_SIZE - 1)
        f = pos - i
        sn = sig_t[i] + f * (sig_t[i + 1] - sig_t[i])
        sn = 1.0 if y < -MAX_EXP else sn
        sn = 0.0 if y > MAX_EXP else sn
        s -= sn * y
        dy = sn * (y * (1.0 - sn) - 1.0)
        g_in[c] = dy if posterior else dy * se
        g_out[c] = dy * se if posterior else dy
    return s


_FAST = {"reassoc", "contract", "nsz", "arcp"}


@njit(cache=True, fastmath=_FAST)
def _entail_grads_lut_posterior(l1, ctx, target, sig_t, lsig_t, g_in, g_out):
    return _entail_grads_lut(l1, ctx, target, True, sig_t, lsig_t, g_in, g_out)


@njit(cache=True, fastmath=_FAST)
def _entail_grads_lut_evidence(l1, ctx, target, sig_t, lsig_t, g_in, g_out):
    return _entail_grads_lut(l1, ctx, target, False, sig_t, lsig_t, g_in, g_out)


@njit(cache=True, inline="always")
def _entail_grads_exact(l1, ctx, target, posterior, g_in, g_out):
    s = 0.0
    for c in range(l1.shape[0]):
        v = np.float64(ctx[target, c])
        if posterior:
            xp = l1[c]
            xe = v
        else:
            xe = l1[c]
            xp = v
        y = -exact_log_sigmoid(-xe) + xp
        sn = exact_sigmoid(-y)
        s -= sn * y
        dy = sn * (y * exact_sigmoid(y) - 1.0)
        if posterior:
            g_in[c] = dy
            g_out[c] = dy * exact_sigmoid(xe)
        else:
            g_in[c] = dy * exact_sigmoid(xe)
            g_out[c] = dy
    return s


@njit(cache=True, inline="always")
def _pair_update(l1, ctx, target, label, lr, mode, kind, exact,
                 sig_t, lsig_t, neu1e, g_in, g_out):
    """Score ``l1`` against ``ctx[target]``, update ``ctx[target]``, accumulate ``neu1e``.

    Returns the logistic loss of this example before the update.
    """
    if kind == DOT:
        s = _dot_grads(l1, ctx, target, g_in, g_out)
    elif exact:
        s = _entail_grads_exact(l1, ctx, target, mode == POSTERIOR, g_in, g_out)
    elif mode == POSTERIOR:
        s = _entail_grads_lut_posterior(l1, ctx, target, sig_t, lsig_t, g_in, g_out)
    else:
        s = _entail_grads_lut_evidence(l1, ctx, target, sig_t, lsig_t, g_in, g_out)
    if exact:
        p = exact_sigmoid(s)
        loss = -exact_log_sigmoid(s) if label == 1 else -exact_log_sigmoid(-s)
    else:
        p = lut_sigmoid(s, sig_t)
        loss = -lut_log_sigmoid(s, lsig_t) if label == 1 else -lut_log_sigmoid(-s, lsig_t)
    g = (label - p) * lr
    for c in range(l1.shape[0]):
        neu1e[c] += g * g_in[c]
        ctx[target, c] += g * g_out[c]
    return loss


@njit(cache=True, inline="always")
def _sg_step(emit, ctx, center, context, negs, n_negs, lr, mode, kind, exact,
             sig_t, lsig_t, l1, neu1e, g_in, g_out):
    d = emit.shape[1]
    for c in range(d):
        l1[c] = emit[center, c]
        neu1e[c] = 0.0
    loss = _pair_update(l1, ctx, context, 1, lr, mode, kind, exact,
                        sig_t, lsig_t, neu1e, g_in, g_out)
    for k in range(n_negs):
        loss += _pair_update(l1, ctx, negs[k], 0, lr, mode, kind, exact,
                             sig_t, lsig_t, neu1e, g_in, g_out)
    for c in range(d):
        emit[center, c] += neu1e[c]
    return loss


@njit(cache=True, inline="always")
def _cbow_step(emit, ctx, contexts, n_ctx, center, negs, n_negs, lr, mode, kind, exact,
               sig_t, lsig_t, l1, neu1e, g_in, g_out):
    d = emit.shape[1]
    for c in range(d):
        l1[c] = 0.0
        neu1e[c] = 0.0
    for j in range(n_ctx):
        w = contexts[j]
        for c in range(d):
            l1[c] += emit[w, c]
    for c in range(d):
        l1[c] /= n_ctx
    loss = _pair_update(l1, ctx, center, 1, lr, mode, kind, exact,
                        sig_t, lsig_t, neu1e, g_in, g_out)
    for k in range(n_negs):
        loss += _pair_update(l1, ctx, negs[k], 0, lr, mode, kind, exact,
                             sig_t, lsig_t, neu1e, g_in, g_out)
    for j in range(n_ctx):
        w = contexts[j]
        for c in range(d):
            emit[w, c] += neu1e[c] / n_ctx
    return loss


@njit(cache=True, inline="always")
def _worker_core(tokens, start, end, emit, ctx, keep, sample_on, neg_slots,
                  window, negative, epochs, alpha0, total_words, progress, worker,
                  seed, arch, mode, kind, sig_t, lsig_t, loss_out, examples_out,
                  skipped_out, max_sentence):
    d = emit.shape[1]
    l1 = np.empty(d)
    neu1e = np.empty(d)
    g_in = np.empty(d)
    g_out = np.empty(d)
    sen = np.empty(max_sentence, np.int64)
    contexts = np.empty(2 * window, np.int64)
    negs = np.empty(negative, np.int64)
    table_size = neg_slots.shape[0]
    planned = epochs * total_words
    state = seed
    done = 0
    for epoch in range(epochs):
        pos = start
        while pos < end:
            n = 0
            raw = 0
            while pos < end and raw < max_sentence:
                w = tokens[pos]
                pos += 1
                raw += 1
                if sample_on:
                    state = lcg_next(state)
                    if lcg_uniform(state) >= keep[w]:
                        continue
                sen[n] = w
                n += 1
            progress[worker] = done
            frac = progress.sum() / planned
            alpha = alpha0 * max(1.0 - frac, 1e-4)
            done += raw
            for i in range(n):
                state = lcg_next(state)
                b = 1 + lcg_randint(state, window)
                lo = max(0, i - b)
                hi = min(n, i + b + 1)
                if arch == SKIPGRAM:
                    for j in range(lo, hi):
                        if j == i:
                            continue
                        target = sen[j]
                        m = 0
                        for _ in range(negative):
                            for _a in range(NEGATIVE_ATTEMPTS):
                                state = lcg_next(state)
                                t = neg_slots[lcg_randint(state, table_size)]
                                if t != target:
                                    negs[m] = t
                                    m += 1
                                    break
                        loss_out[epoch] += _sg_step(
                            emit, ctx, sen[i], target, negs, m, alpha, mode, kind, False,
                            sig_t, lsig_t, l1, neu1e, g_in, g_out)
                        examples_out[epoch] += 1
                else:
                    n_ctx = 0
                    for j in range(lo, hi):
                        if j != i:
                            contexts[n_ctx] = sen[j]
                            n_ctx += 1
                    if n_ctx == 0:
                        skipped_out[0] += 1
                        continue
                    target = sen[i]
                    m = 0
                    for _ in range(negative):
                        for _a in range(NEGATIVE_ATTEMPTS):
                            state = lcg_next(state)
                            t = neg_slots[lcg_randint(state, table_size)]
                            if t != target:
                                negs[m] = t
                                m += 1
                                break
                    loss_out[epoch] += _cbow_step(
                        emit, ctx, contexts, n_ctx, target, negs, m, alpha, mode, kind, False,
                        sig_t, lsig_t, l1, neu1e, g_in, g_out)
                    examples_out[epoch] += 1
    progress[worker] = done


# Everything above is inlined into these entry points: a numba call with many
# array arguments costs more than the arithmetic of a small step.  The table
# path is compiled with reassociation so LLVM vectorises the gathers, and with
# the role flag as a literal so the selects fold away.  The dot path stays
# strict IEEE so it can be compared bit for bit with a plain Word2Vec update.
@njit(cache=True, nogil=True)
def _train_worker_strict(tokens, start, end, emit, ctx, keep, sample_on, neg_slots,
                         window, negative, epochs, alpha0, total_words, progress, worker,
                         seed, arch, mode, sig_t, lsig_t, loss_out, examples_out,
                         skipped_out, max_sentence):
    _worker_core(tokens, start, end, emit, ctx, keep, sample_on, neg_slots, window,
                 negative, epochs, alpha0, total_words, progress, worker, seed, arch,
                 mode, DOT, sig_t, lsig_t, loss_out, examples_out, skipped_out, max_sentence)


@njit(cache=True, nogil=True, fastmath=_FAST)
def _train_worker_posterior(tokens, start, end, emit, ctx, keep, sample_on, neg_slots,
                            window, negative, epochs, alpha0, total_words, progress, worker,
                            seed, arch, mode, sig_t, lsig_t, loss_out, examples_out,
                            skipped_out, max_sentence):
    _worker_core(tokens, start, end, emit, ctx, keep, sample_on, neg_slots, window,
                 negative, epochs, alpha0, total_words, progress, worker, seed, arch,
                 POSTERIOR, ENTAILMENT, sig_t, lsig_t, loss_out, examples_out, skipped_out,
                 max_sentence)


@njit(cache=True, nogil=True, fastmath=_FAST)
def _train_worker_evidence(tokens, start, end, emit, ctx, keep, sample_on, neg_slots,
                           window, negative, epochs, alpha0, total_words, progress, worker,
                           seed, arch, mode, sig_t, lsig_t, loss_out, examples_out,
                           skipped_out, max_sentence):
    _worker_core(tokens, start, end, emit, ctx, keep, sample_on, neg_slots, window,
                 negative, epochs, alpha0, total_words, progress, worker, seed, arch,
                 EVIDENCE, ENTAILMENT, sig_t, lsig_t, loss_out, examples_out, skipped_out,
                 max_sentence)


def _train_worker(tokens, start, end, emit, ctx, keep, sample_on, neg_slots, window,
                  negative, epochs, alpha0, total_words, progress, worker, seed, arch,
                  mode, kind, sig_t, lsig_t, loss_out, examples_out, skipped_out,
                  max_sentence):
    if kind == DOT:
        fn = _train_worker_strict
    elif mode == POSTERIOR:
        fn = _train_worker_posterior
    else:
        fn = _train_worker_evidence
    fn(tokens, start, end, emit, ctx, keep, sample_on, neg_slots, window, negative,
       epochs, alpha0, total_words, progress, worker, seed, arch, mode, sig_t, lsig_t,
       loss_out, examples_out, skipped_out, max_sentence)


@njit(cache=True)
def _sg_step_strict(emit, ctx, center, context, negs, n_negs, lr, mode, kind, exact,
                    sig_t, lsig_t, l1, neu1e, g_in, g_out):
    return _sg_step(emit, ctx, center, context, negs, n_negs, lr, mode, kind, exact,
                    sig_t, lsig_t, l1, neu1e, g_in, g_out)


@njit(cache=True, fastmath=_FAST)
def _sg_step_fast(emit, ctx, center, context, negs, n_negs, lr, mode, kind, exact,
                  sig_t, lsig_t, l1, neu1e, g_in, g_out):
    return _sg_step(emit, ctx, center, context, negs, n_negs, lr, mode, kind, exact,
                    sig_t, lsig_t, l1, neu1e, g_in, g_out)


@njit(cache=True)
def _cbow_step_strict(emit, ctx, contexts, n_ctx, center, negs, n_negs, lr, mode, kind,
                      exact, sig_t, lsig_t, l1, neu1e, g_in, g_out):
    return _cbow_step(emit, ctx, contexts, n_ctx, center, negs, n_negs, lr, mode, kind,
                      exact, sig_t, lsig_t, l1, neu1e, g_in, g_out)


@njit(cache=True, fastmath=_FAST)
def _cbow_step_fast(emit, ctx, contexts, n_ctx, center, negs, n_negs, lr, mode, kind,
                    exact, sig_t, lsig_t, l1, neu1e, g_in, g_out):
    return _cbow_step(emit, ctx, contexts, n_ctx, center, negs, n_negs, lr, mode, kind,
                      exact, sig_t, lsig_t, l1, neu1e, g_in, g_out)


@njit(cache=True)
def _init_emit(n_words, dim, seed):
    out = np.empty((n_words, dim), np.float32)
    state = seed
    for i in range(n_words):
        for c in range(dim):
            state = lcg_next(state)
            out[i, c] = (lcg_uniform(state) - 0.5) / dim
    return out


# ---------------------------------------------------------------------------
# Python-level steps (used by tests and small experiments)
# ---------------------------------------------------------------------------

def _scratch(d):
    return np.empty(d), np.empty(d), np.empty(d), np.empty(d)


def skipgram_step(params, center, context, negatives, lr, exact=False, score="entailment"):
    """One negative-sampling update in place; returns the step loss.

    ``params.emit[center]`` is scored against ``params.ctx[context]`` (label 1)
    and ``params.ctx[n]`` for each negative ``n`` (label 0).
    """
    negs = np.asarray(negatives, dtype=np.int64)
    fn = _sg_step_fast if score == "entailment" and not exact else _sg_step_strict
    return fn(params.emit, params.ctx, int(center), int(context), negs, len(negs),
                    float(lr), MODES[params.mode], SCORES[score], bool(exact),
                    SIGMOID_TABLE, LOG_SIGMOID_TABLE, *_scratch(params.dim))


def cbow_step(params, contexts, center, negatives, lr, exact=False, score="entailment"):
    """CBOW update: the mean of the context words' ``emit`` rows predicts ``center``.

    An empty context list is a no-op returning ``None``.
    """
    ctx_ids = np.asarray(contexts, dtype=np.int64)
    if len(ctx_ids) == 0:
        return None
    negs = np.asarray(negatives, dtype=np.int64)
    fn = _cbow_step_fast if score == "entailment" and not exact else _cbow_step_strict
    return fn(params.emit, params.ctx, ctx_ids, len(ctx_ids), int(center), negs,
                      len(negs), float(lr), MODES[params.mode], SCORES[score], bool(exact),
                      SIGMOID_TABLE, LOG_SIGMOID_TABLE, *_scratch(params.dim))


def step_loss(params, inputs, target, negatives, score="entailment"):
    """Exact-math loss of one step without updating anything.

    ``inputs`` is a list of ``emit`` row ids whose mean is the input vector
    (a single id for skipgram).
    """
    from .entailment import log_sigmoid, pair_score

    l1 = np.mean(np.asarray(params.emit, dtype=np.float64)[list(inputs)], axis=0)
    ctx = np.asarray(params.ctx, dtype=np.float64)

    def score_of(row):
        if score == "dot":
            return float(np.dot(l1, row))
        if params.mode == "posterior":
            return pair_score(row, l1).total
        return pair_score(l1, row).total

    loss = -log_sigmoid(score_of(ctx[target]))
    for n in negatives:
        loss -= log_sigmoid(-score_of(ctx[n]))
    return float(loss)


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

def initial_params(vocab, config):
    emit = _init_emit(len(vocab), config.dim, np.uint64(stream_seed(config.seed, _INIT_STREAM)))
    ctx = np.zeros_like(emit)
    return ModelParams(emit=emit, ctx=ctx, mode=config.mode, architecture=config.arch,
                       vocab=vocab, config=config)


def _materialize(corpus):
    """Re-iterable token source: a path, a flat token list, or a list of token lists."""
    if isinstance(corpus, (str, bytes)) or hasattr(corpus, "__fspath__"):
        return lambda: _corpus.iter_tokens(corpus)
    corpus = list(corpus)
    if all(isinstance(c, str) for c in corpus):
        return lambda: iter(corpus)
    return lambda: (t for sent in corpus for t in sent)


def train(corpus, config=None, vocab=None):
    """Train a Word2Hyp model.

    ``corpus`` is a path, or an iterable of tokens, or an iterable of token
    lists.  Returns :class:`ModelParams` with ``stats`` filled in.
    """
    config = config or TrainConfig()
    tokens = _materialize(corpus)
    if vocab is None:
        vocab = _corpus.build_vocab(tokens(), config.min_count)
    ids = vocab.encode(tokens())
    table = _corpus.build_negative_table(vocab, config.power,
                                         max(config.table_size, len(vocab)))
    params = initial_params(vocab, config)
    params.stats = run_epochs(params, ids, vocab, table, config)
    return params


def run_epochs(params, ids, vocab, table, config):
    """Run ``config.epochs`` passes over the encoded corpus ``ids`` in place."""
    keep = vocab.keep_probabilities(config.sample)
    workers = config.workers
    total = len(ids)
    bounds = np.linspace(0, total, workers + 1).astype(np.int64)
    progress = np.zeros(workers, dtype=np.int64)
    losses = np.zeros((workers, config.epochs))
    examples = np.zeros((workers, config.epochs), dtype=np.int64)
    skipped = np.zeros((workers, 1), dtype=np.int64)
    errors = []

    def work(w):
        try:
            _train_worker(ids, bounds[w], bounds[w + 1], params.emit, params.ctx, keep,
                          config.sample > 0, table.slots, config.window, config.negative,
                          config.epochs, float(config.alpha), max(total, 1), progress, w,
                          np.uint64(stream_seed(config.seed, w)), ARCHITECTURES[config.arch],
                          MODES[config.mode], SCORES[config.score], SIGMOID_TABLE,
                          LOG_SIGMOID_TABLE, losses[w], examples[w], skipped[w],
                          MAX_SENTENCE_LENGTH)
        except BaseException as exc:  # re-raised in the calling thread
            errors.append(exc)

    threads = [threading.Thread(target=work, args=(w,), daemon=True) for w in range(workers)]
    started = time.perf_counter()
    for t in threads:
        t.start()
    planned = config.epochs * total
    last = 0
    while any(t.is_alive() for t in threads):
        threads[0].join(timeout=0.5)
        done = int(progress.sum())
        if done - last >= config.report_every and planned:
            last = done
            elapsed = time.perf_counter() - started
            n = examples.sum()
            logger.info("progress %5.1f%%  words/sec %.0f  alpha %.6f  loss %.4f",
                        100.0 * done / planned, done / max(elapsed, 1e-9),
                        lr_schedule(done / planned, config.alpha),
                        losses.sum() / n if n else float("nan"))
    for t in threads:
        t.join()
    if errors:
        raise RuntimeError("training worker failed") from errors[0]
    elapsed = time.perf_counter() - started
    n_ex = examples.sum(axis=0)
    epoch_loss = [float(l / n) if n else float("nan") for l, n in zip(losses.sum(axis=0), n_ex)]
    stats = TrainStats(words=int(progress.sum()), seconds=elapsed, epoch_loss=epoch_loss,
                       epoch_examples=[int(n) for n in n_ex],
                       skipped_contexts=int(skipped.sum()))
    logger.info("trained %d words in %.1fs (%.0f words/sec), final epoch loss %.4f",
                stats.words, elapsed, stats.words_per_second, epoch_loss[-1])
    return stats


# ---------------------------------------------------------------------------
# estimator
# ---------------------------------------------------------------------------

class Word2Hyp(BaseEstimator, TransformerMixin):
    """Entailment-vector word embeddings with a scikit-learn style interface.

    ``fit`` takes a corpus (path, token list or list of token lists);
    ``transform`` maps a list of words to their emitted vectors.

    Examples
    --------
    >>> model = Word2Hyp(dim=20, epochs=1, min_count=1).fit("a b a c".split() * 50)
    >>> model.transform(["a", "b"]).shape
    (2, 20)
    """

    def __init__(self, dim=200, window=5, negative=5, epochs=5, alpha=None,
                 min_count=_corpus.DEFAULT_MIN_COUNT, sample=_corpus.DEFAULT_SAMPLE, seed=1,
                 workers=1, arch="skipgram", mode="posterior", score="entailment",
                 table_size=_corpus.DEFAULT_TABLE_SIZE, power=_corpus.DEFAULT_POWER,
                 report_every=100_000):
        self.dim = dim
        self.window = window
        self.negative = negative
        self.epochs = epochs
        self.alpha = alpha
        self.min_count = min_count
        self.sample = sample
        self.seed = seed
        self.workers = workers
        self.arch = arch
        self.mode = mode
        self.score = score
        self.table_size = table_size
        self.power = power
        self.report_every = report_every

    def _config(self):
        return TrainConfig(**self.get_params())

    def fit(self, X, y=None):
        self.params_ = train(X, self._config())
        self.vocab_ = self.params_.vocab
        self.embeddings_ = self.params_.emit
        self.n_features_out_ = self.params_.dim
        return self

    def transform(self, X):
        check_is_fitted(self, "params_")
        rows = []
        for word in X:
            if word not in self.vocab_:
                raise KeyError(f"word {word!r} not in vocabulary")
            rows.append(self.vocab_.index[word])
        return self.embeddings_[rows]

    def save(self, path, binary=False):
        from .model_io import save_embeddings

        check_is_fitted(self, "params_")
        save_embeddings(self.params_, path, binary=binary)
