"""Unsupervised hyponymy detection and abstractness ranking."""

from dataclasses import dataclass, field

import numpy as np

from .entailment import entailment_operator, log_sigmoid, sigmoid

_TRUE = {"true": True, "1": True, "false": False, "0": False}


class PairFormatError(ValueError):
    def __init__(self, path, lineno, message):
        super().__init__(f"{path}:{lineno}: {message}")
        self.lineno = lineno


class NoScorablePairs(ValueError):
    pass


@dataclass(frozen=True)
class LabeledPair:
    """``hypo`` entails ``hyper`` when ``label`` is true."""

    hypo: str
    hyper: str
    label: bool

    def __post_init__(self):
        if not self.hypo or not self.hyper:
            raise ValueError("pair words must be non-empty")


def load_pairs(path):
    """Read ``hypo<TAB>hyper<TAB>label`` lines; ``#`` comments and blanks are skipped."""
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise PairFormatError(path, lineno, f"expected 3 tab-separated fields, got {len(fields)}")
            hypo, hyper, label = (f.strip() for f in fields)
            if label.lower() not in _TRUE:
                raise PairFormatError(path, lineno, f"bad label {label!r}")
            if not hypo or not hyper:
                raise PairFormatError(path, lineno, "empty word")
            pairs.append(LabeledPair(hypo, hyper, _TRUE[label.lower()]))
    return pairs


def save_pairs(pairs, path):
    with open(path, "w", encoding="utf-8") as fh:
        for p in pairs:
            fh.write(f"{p.hypo}\t{p.hyper}\t{p.label}\n")


class Embeddings:
    """Read-only word -> vector lookup with optional corpus counts."""

    def __init__(self, words, vectors, counts=None, mode=None):
        self.words = list(words)
        self.vectors = np.asarray(vectors)
        if self.vectors.ndim != 2 or self.vectors.shape[0] != len(self.words):
            raise ValueError("vectors must be a (len(words), dim) matrix")
        self.index = {w: i for i, w in enumerate(self.words)}
        self.counts = counts
        self.mode = mode

    @classmethod
    def from_params(cls, params):
        vocab = params.vocab
        counts = dict(zip(vocab.words, vocab.counts.tolist()))
        return cls(vocab.words, params.emit, counts=counts, mode=params.mode)

    @property
    def dim(self):
        return self.vectors.shape[1]

    def __contains__(self, word):
        return word in self.index

    def __getitem__(self, word):
        return np.asarray(self.vectors[self.index[word]], dtype=np.float64)

    def __len__(self):
        return len(self.words)


def score_pair(emb, pair):
    """``emb[hypo] >O emb[hyper]``: high when the hyponym's features include the hypernym's.

    Raises ``KeyError`` for out-of-vocabulary words.
    """
    return entailment_operator(emb[pair.hypo], emb[pair.hyper])


def score_pairs(emb, pairs):
    """Score all in-vocabulary pairs.  Returns ``(scores, kept_pairs, n_skipped)``."""
    kept = [p for p in pairs if p.hypo in emb and p.hyper in emb]
    if not kept:
        return np.empty(0), [], len(pairs)
    Y = np.stack([emb[p.hypo] for p in kept])
    X = np.stack([emb[p.hyper] for p in kept])
    scores = np.sum(sigmoid(-Y) * log_sigmoid(-X), axis=1)
    return scores, kept, len(pairs) - len(kept)


def rank(scores):
    """Indices sorting ``scores`` descending; ties keep input order."""
    return np.argsort(-np.asarray(scores, dtype=np.float64), kind="stable")


def accuracy_at_half(labels):
    """Percent correct when the first ``floor(N/2)`` ranked items are called positive."""
    labels = np.asarray(labels, dtype=bool)
    if labels.size == 0:
        raise ValueError("empty ranked list")
    predicted = np.arange(labels.size) < labels.size // 2
    correct = int(np.count_nonzero(predicted == labels))
    return 100.0 * correct / labels.size


def positive_precisions(labels):
    """Precision at the rank of every positive item, in rank order."""
    labels = np.asarray(labels, dtype=bool)
    hits = np.cumsum(labels)
    ranks = np.arange(1, labels.size + 1)
    return (hits / ranks)[labels]


def average_precision(labels):
    """Mean precision over the positives of a ranked list, as a percentage."""
    prec = positive_precisions(labels)
    if prec.size == 0:
        raise ValueError("average precision needs at least one positive")
    return 100.0 * prec.mean()


@dataclass
class EvalReport:
    ranked: list
    acc50: float
    ap: float
    skipped_oov: int = 0
    precisions: np.ndarray = field(default=None, repr=False)
    note: str = ""

    @property
    def n(self):
        return len(self.ranked)


def report_from_scores(pairs, scores, skipped=0):
    order = rank(scores)
    ranked = [(pairs[i], float(scores[i])) for i in order]
    labels = [p.label for p, _ in ranked]
    prec = positive_precisions(labels)
    ap = 100.0 * prec.mean() if prec.size else float("nan")
    return EvalReport(ranked=ranked, acc50=accuracy_at_half(labels), ap=ap,
                      skipped_oov=skipped, precisions=prec)


def evaluate(emb, pairs):
    """Rank ``pairs`` by entailment score and compute 50% accuracy and AP."""
    scores, kept, skipped = score_pairs(emb, pairs)
    if not kept:
        raise NoScorablePairs("no scorable pairs: every pair has an out-of-vocabulary word")
    return report_from_scores(kept, scores, skipped)


def format_report(report):
    """TSV rows ``hypo hyper score label rank`` followed by a ``#`` summary block."""
    lines = ["hypo\thyper\tscore\tlabel\trank"]
    for r, (pair, score) in enumerate(report.ranked, 1):
        lines.append(f"{pair.hypo}\t{pair.hyper}\t{score:.6f}\t{pair.label}\t{r}")
    lines.append(f"# acc50\t{report.acc50:.2f}")
    lines.append(f"# ap\t{report.ap:.2f}")
    lines.append(f"# skipped_oov\t{report.skipped_oov}")
    if report.note:
        lines.append(f"# note\t{report.note}")
    return "\n".join(lines) + "\n"


def abstractness_score(emb, word):
    """``0 >O X``: how well the all-unknown vector entails ``word``.  Higher is more abstract."""
    if word not in emb:
        raise KeyError(f"word {word!r} not in vocabulary")
    X = emb[word]
    return entailment_operator(np.zeros_like(X), X)


def rank_abstractness(emb, counts=None, min_freq=300):
    """Words with count above ``min_freq``, most abstract first; ties alphabetical."""
    counts = emb.counts if counts is None else counts
    if counts is None:
        raise ValueError("word counts are required")
    words = [w for w in emb.words if counts.get(w, 0) > min_freq]
    scored = [(abstractness_score(emb, w), w) for w in words]
    scored.sort(key=lambda sw: (-sw[0], sw[1]))
    return [w for _, w in scored]
