"""Corpus streaming, vocabulary, subsampling and the negative-sampling table."""

from collections import Counter
from dataclasses import dataclass, field
import logging

import numpy as np

logger = logging.getLogger(__name__)

DEFAULT_MIN_COUNT = 5
DEFAULT_SAMPLE = 1e-3
DEFAULT_POWER = 0.75
DEFAULT_TABLE_SIZE = 100_000_000


class CorpusError(ValueError):
    """Raised for empty corpora or vocabularies."""


def iter_tokens(paths):
    """Yield whitespace-delimited tokens from UTF-8 text files.

    Newlines are plain token boundaries; there is no sentence handling.
    """
    if isinstance(paths, (str, bytes)) or hasattr(paths, "__fspath__"):
        paths = [paths]
    for path in paths:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                yield from line.split()


@dataclass
class Vocabulary:
    """Words sorted by descending count, with dense ids ``0..V-1``."""

    words: list
    counts: np.ndarray
    min_count: int = 1
    index: dict = field(init=False, repr=False)

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if len(self.words) != len(self.counts):
            raise ValueError("words and counts differ in length")
        self.index = {w: i for i, w in enumerate(self.words)}
        if len(self.index) != len(self.words):
            raise ValueError("duplicate words in vocabulary")

    def __len__(self):
        return len(self.words)

    def __contains__(self, word):
        return word in self.index

    @property
    def total_tokens(self):
        return int(self.counts.sum())

    def count(self, word):
        return int(self.counts[self.index[word]])

    def keep_probabilities(self, sample=DEFAULT_SAMPLE):
        """Per-word subsampling keep probability; all ones when ``sample <= 0``."""
        if sample <= 0:
            return np.ones(len(self), dtype=np.float64)
        f = self.counts / self.total_tokens
        return np.minimum(1.0, (np.sqrt(f / sample) + 1.0) * (sample / f))

    def encode(self, tokens):
        """Map tokens to ids, dropping out-of-vocabulary tokens."""
        index = self.index
        ids = [index[t] for t in tokens if t in index]
        return np.asarray(ids, dtype=np.int32)


def build_vocab(tokens, min_count=DEFAULT_MIN_COUNT):
    """Count ``tokens`` and keep words seen at least ``min_count`` times.

    Ties in count keep first-occurrence order.
    """
    if min_count < 1:
        raise ValueError(f"min_count must be >= 1, got {min_count}")
    counter = Counter(tokens)
    if not counter:
        raise CorpusError("empty token stream")
    kept = [(w, c) for w, c in counter.items() if c >= min_count]
    if not kept:
        raise CorpusError(f"no word occurs at least min_count={min_count} times")
    kept.sort(key=lambda wc: -wc[1])
    words = [w for w, _ in kept]
    counts = [c for _, c in kept]
    logger.info("vocabulary: %d words, %d tokens", len(words), sum(counts))
    return Vocabulary(words, counts, min_count=min_count)


def keep_probability(count, total, t=DEFAULT_SAMPLE):
    """Probability of keeping one occurrence of a word seen ``count`` times."""
    if not 0 < count <= total:
        raise ValueError("need 0 < count <= total")
    if t <= 0:
        raise ValueError("t must be > 0")
    f = count / total
    return min(1.0, (np.sqrt(f / t) + 1.0) * (t / f))


@dataclass(frozen=True)
class NegativeTable:
    slots: np.ndarray
    power: float

    @property
    def size(self):
        return len(self.slots)


def build_negative_table(vocab, power=DEFAULT_POWER, size=DEFAULT_TABLE_SIZE):
    """Table in which word ``i`` fills a share of slots proportional to ``count_i ** power``.

    Slot counts are rounded with the largest-remainder rule, so every share is
    exact to within one slot.
    """
    size = int(size)
    if len(vocab) == 0:
        raise CorpusError("empty vocabulary")
    if size < len(vocab):
        raise ValueError("table size must be at least the vocabulary size")
    weights = np.asarray(vocab.counts, dtype=np.float64) ** power
    quota = weights / weights.sum() * size
    n = np.floor(quota).astype(np.int64)
    short = size - int(n.sum())
    if short:
        order = np.argsort(-(quota - n), kind="stable")
        n[order[:short]] += 1
    slots = np.repeat(np.arange(len(vocab), dtype=np.int32), n)
    return NegativeTable(slots=slots, power=power)


def sample_negative(table, rng):
    """Uniform draw over the table's slots using an :class:`~word2hyp.rng.Lcg`."""
    return int(table.slots[rng.randint(table.size)])


def subsample(ids, keep, rng):
    """Drop each occurrence independently with probability ``1 - keep[id]``.

    One uniform is drawn per occurrence, kept or not, exactly as the training
    kernels do.
    """
    return np.asarray([i for i in ids if rng.uniform() < keep[i]], dtype=np.int32)
