"""Semi-supervised hyponymy: a linear map under which the entailment operator
separates hyponym pairs from the rest, evaluated by lexically disjoint
cross-validation.

The map ``M`` sends word vectors into a new log-odds space and a pair is
scored by ``s = (M v_hypo) >O (M v_hyper)``.  Training minimises the mean
logistic loss of ``s + bias`` by full-batch gradient descent with a
backtracking step, starting from ``M = I`` (the unsupervised solution).  The
bias only calibrates the training loss; rankings use ``s`` alone.
"""

from dataclasses import dataclass, field
import logging

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from ._validation import check_is_fitted, check_positive
from .entailment import log_sigmoid, sigmoid
from .evaluation import report_from_scores

logger = logging.getLogger(__name__)

OBJECTIVE_NOTE = ("supervised objective reconstructed: logistic loss on map scores, "
                  "full-batch gradient descent; acc50 is the per-fold weighted mean")


class FoldError(ValueError):
    pass


@dataclass
class LinearMap:
    """``d_out x d_in`` matrix plus a training-only bias."""

    matrix: np.ndarray
    bias: float = 0.0

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=np.float64)
        if self.matrix.ndim != 2:
            raise ValueError("map matrix must be 2-D")
        if not np.all(np.isfinite(self.matrix)) or not np.isfinite(self.bias):
            raise ValueError("map has non-finite entries")
        self.bias = float(self.bias)

    @classmethod
    def identity(cls, d_in, d_out=None):
        return cls(np.eye(d_out or d_in, d_in))

    @property
    def d_in(self):
        return self.matrix.shape[1]

    @property
    def d_out(self):
        return self.matrix.shape[0]

    def apply(self, V):
        V = np.asarray(V, dtype=np.float64)
        if V.shape[-1] != self.d_in:
            raise ValueError(f"expected vectors of length {self.d_in}, got {V.shape[-1]}")
        return V @ self.matrix.T

    def score(self, Vh, Vp):
        """Entailment scores of mapped pairs, without the bias."""
        A, B = self.apply(Vh), self.apply(Vp)
        return np.sum(sigmoid(-A) * log_sigmoid(-B), axis=-1)


@dataclass
class MapConfig:
    epochs: int = 500
    lr: float = 1.0
    l2: float = 0.0
    tol: float = 1e-6
    d_out: int = None
    max_halvings: int = 60

    def __post_init__(self):
        check_positive(self.epochs, "epochs")
        check_positive(self.lr, "lr")
        check_positive(self.l2, "l2", allow_zero=True)
        check_positive(self.tol, "tol", allow_zero=True)
        if self.d_out is not None:
            check_positive(self.d_out, "d_out")


def map_loss_and_grad(M, bias, Vh, Vp, y, l2=0.0, M0=None):
    """Mean logistic loss of ``s + bias`` and its gradients ``(loss, dM, dbias)``.

    With ``l2 > 0`` the penalty ``l2/2 * ||M - M0||^2`` is added (``M0`` defaults
    to the identity) so regularisation pulls toward the unsupervised space.
    """
    y = np.asarray(y, dtype=np.float64)
    n = len(y)
    A = Vh @ M.T
    B = Vp @ M.T
    not_a = sigmoid(-A)
    log_not_b = log_sigmoid(-B)
    z = np.sum(not_a * log_not_b, axis=1) + bias
    # -log sigmoid(z) for positives, -log sigmoid(-z) for negatives
    loss = float(np.mean(np.where(y > 0, -log_sigmoid(z), -log_sigmoid(-z))))
    w = (sigmoid(z) - y) / n
    dA = -(not_a * sigmoid(A)) * log_not_b
    dB = -not_a * sigmoid(B)
    dM = (w[:, None] * dA).T @ Vh + (w[:, None] * dB).T @ Vp
    if l2 > 0:
        M0 = np.eye(*M.shape) if M0 is None else M0
        diff = M - M0
        loss += 0.5 * l2 * float(np.sum(diff * diff))
        dM = dM + l2 * diff
    return loss, dM, float(w.sum())


def fit_map(Vh, Vp, y, config=None):
    """Fit a :class:`LinearMap` on vector pairs.  Returns ``(map, loss_history)``.

    Each epoch takes one gradient step; a step that would raise the loss is
    halved until it does not, so the history is non-increasing.
    """
    config = config or MapConfig()
    Vh = np.asarray(Vh, dtype=np.float64)
    Vp = np.asarray(Vp, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if Vh.shape != Vp.shape or Vh.ndim != 2 or len(y) != len(Vh):
        raise ValueError("Vh, Vp must be (n, d) and y of length n")
    if not (y > 0).any() or not (y <= 0).any():
        raise ValueError("training pairs need both positive and negative examples")
    d = Vh.shape[1]
    M0 = np.eye(config.d_out or d, d)
    M, bias = M0.copy(), 0.0
    lr = config.lr
    loss, dM, db = map_loss_and_grad(M, bias, Vh, Vp, y, config.l2, M0)
    history = [loss]
    for _ in range(config.epochs):
        for _h in range(config.max_halvings):
            M_new, b_new = M - lr * dM, bias - lr * db
            new_loss, new_dM, new_db = map_loss_and_grad(M_new, b_new, Vh, Vp, y, config.l2, M0)
            if new_loss <= loss:
                break
            lr *= 0.5
        else:
            break  # no descent step found: at a minimum up to rounding
        rel = (loss - new_loss) / max(abs(loss), 1e-300)
        M, bias, loss, dM, db = M_new, b_new, new_loss, new_dM, new_db
        history.append(loss)
        lr *= 1.5
        if rel < config.tol:
            break
    return LinearMap(M, bias), history


def _pair_vectors(pairs, emb):
    kept = [p for p in pairs if p.hypo in emb and p.hyper in emb]
    if not kept:
        return kept, np.empty((0, emb.dim)), np.empty((0, emb.dim)), np.empty(0)
    Vh = np.stack([emb[p.hypo] for p in kept])
    Vp = np.stack([emb[p.hyper] for p in kept])
    y = np.array([p.label for p in kept], dtype=np.float64)
    return kept, Vh, Vp, y


def train_map(train_pairs, emb, config=None):
    """Fit a map on labelled pairs.  Pairs with out-of-vocabulary words are dropped.

    Returns ``(map, loss_history, n_dropped)``.
    """
    kept, Vh, Vp, y = _pair_vectors(train_pairs, emb)
    dropped = len(train_pairs) - len(kept)
    if dropped:
        logger.info("dropped %d training pairs with out-of-vocabulary words", dropped)
    lmap, history = fit_map(Vh, Vp, y, config)
    return lmap, history, dropped


class EntailmentMap(BaseEstimator, ClassifierMixin):
    """Classifier over vector pairs: ``X`` has shape ``(n, 2, d)`` (hyponym, hypernym).

    ``decision_function`` is the mapped entailment score plus the fitted bias.
    """

    def __init__(self, epochs=500, lr=1.0, l2=0.0, tol=1e-6, d_out=None):
        self.epochs = epochs
        self.lr = lr
        self.l2 = l2
        self.tol = tol
        self.d_out = d_out

    @staticmethod
    def _split(X):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 3 or X.shape[1] != 2:
            raise ValueError(f"X must have shape (n, 2, d), got {X.shape}")
        if not np.all(np.isfinite(X)):
            raise ValueError("X contains NaN or infinite values")
        return X[:, 0], X[:, 1]

    def fit(self, X, y):
        Vh, Vp = self._split(X)
        y = np.asarray(y)
        self.classes_ = np.array([False, True])
        config = MapConfig(self.epochs, self.lr, self.l2, self.tol, self.d_out)
        self.map_, self.loss_history_ = fit_map(Vh, Vp, y.astype(bool), config)
        return self

    def decision_function(self, X):
        check_is_fitted(self, "map_")
        Vh, Vp = self._split(X)
        return self.map_.score(Vh, Vp) + self.map_.bias

    def predict_proba(self, X):
        p = sigmoid(self.decision_function(X))
        return np.column_stack([1.0 - p, p])

    def predict(self, X):
        return self.decision_function(X) > 0


# ---------------------------------------------------------------------------
# cross-validation
# ---------------------------------------------------------------------------

@dataclass
class FoldPlan:
    """Per fold: test pair indices and the lexically filtered training indices."""

    k: int
    test: list
    train: list
    removed: list = field(default_factory=list)

    def check_disjoint(self, pairs):
        """Exhaustive check that no training pair shares a word with its fold's test pairs."""
        for f in range(self.k):
            test_words = {w for i in self.test[f] for w in (pairs[i].hypo, pairs[i].hyper)}
            for i in self.train[f]:
                if pairs[i].hypo in test_words or pairs[i].hyper in test_words:
                    return False
        return True


def lexical_filter(pairs, test_idx):
    """Training indices left once every pair sharing a word with the test pairs
    is dropped.  Returns ``(train_idx, n_removed)``."""
    test_idx = np.asarray(test_idx, dtype=np.int64)
    words = {w for i in test_idx for w in (pairs[i].hypo, pairs[i].hyper)}
    rest = np.setdiff1d(np.arange(len(pairs)), test_idx)
    keep = np.array([i for i in rest if pairs[i].hypo not in words
                     and pairs[i].hyper not in words], dtype=np.int64)
    return keep, len(rest) - len(keep)


def make_folds(pairs, k=10, seed=0, attempts=100):
    """Random near-equal partition into ``k`` test folds, then drop every
    training pair that shares a word with the fold's test pairs.

    Positives and negatives are dealt out separately so each fold keeps the
    overall class balance; otherwise a fold's 50% accuracy is capped by its
    own imbalance.  Small vocabularies can leave a filtered training set with
    a single class, which no classifier can be fitted on, so the partition is
    redrawn from the same seeded stream (up to ``attempts`` times) until every
    training set holds both classes.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    n = len(pairs)
    if n < k:
        raise ValueError(f"{n} pairs cannot fill {k} folds")
    rng = np.random.default_rng(seed)
    labels = np.array([bool(p.label) for p in pairs])
    problem = None
    for _ in range(attempts):
        plan, problem = _draw_folds(pairs, labels, k, rng)
        if problem is None:
            return plan
    raise FoldError(f"no viable {k}-fold partition in {attempts} draws; last: {problem}")


def _draw_folds(pairs, labels, k, rng):
    parts = [[] for _ in range(k)]
    for cls in (True, False):
        idx = np.flatnonzero(labels == cls)
        for f, chunk in enumerate(np.array_split(rng.permutation(idx), k)):
            parts[f].extend(chunk.tolist())
    parts = [np.array(sorted(p), dtype=np.int64) for p in parts]
    test, train, removed = [], [], []
    for f, part in enumerate(parts):
        if part.size == 0:
            return None, f"fold {f} is empty"
        keep, n_removed = lexical_filter(pairs, part)
        if keep.size == 0:
            return None, f"fold {f}: no training pairs remain after lexical filtering"
        if len(set(labels[keep].tolist())) < 2:
            return None, f"fold {f}: training pairs hold a single class"
        test.append(part)
        train.append(keep)
        removed.append(n_removed)
    return FoldPlan(k, test, train, removed), None


@dataclass
class CVReport:
    folds: list
    acc50: float
    ap: float
    plan: FoldPlan
    maps: list
    skipped_oov: int = 0
    note: str = OBJECTIVE_NOTE


def pooled_metrics(reports):
    """Per-fold weighted mean acc50 and AP over the union of all folds' positives."""
    sizes = np.array([r.n for r in reports], dtype=np.float64)
    acc = float(np.sum(sizes * [r.acc50 for r in reports]) / sizes.sum())
    prec = np.concatenate([r.precisions for r in reports])
    ap = 100.0 * float(prec.mean()) if prec.size else float("nan")
    return acc, ap


def evaluate_cv(pairs, emb, k=10, config=None, seed=0, fit=True):
    """Lexically disjoint ``k``-fold evaluation of the supervised map.

    With ``fit=False`` every fold uses the identity map, which reproduces the
    unsupervised scores.
    """
    config = config or MapConfig()
    plan = make_folds(pairs, k, seed)
    reports, maps = [], []
    skipped = 0
    for f in range(k):
        test_pairs = [pairs[i] for i in plan.test[f]]
        if fit:
            lmap, _, _ = train_map([pairs[i] for i in plan.train[f]], emb, config)
        else:
            lmap = LinearMap.identity(emb.dim, config.d_out)
        kept, Vh, Vp, _ = _pair_vectors(test_pairs, emb)
        skipped += len(test_pairs) - len(kept)
        if not kept:
            raise FoldError(f"fold {f}: no scorable test pairs")
        rep = report_from_scores(kept, lmap.score(Vh, Vp), len(test_pairs) - len(kept))
        rep.note = OBJECTIVE_NOTE
        reports.append(rep)
        maps.append(lmap)
    acc, ap = pooled_metrics(reports)
    return CVReport(reports, acc, ap, plan, maps, skipped)


def format_cv_report(cv):
    lines = ["fold\tn_test\tn_train\tremoved\tacc50\tap"]
    for f, rep in enumerate(cv.folds):
        lines.append(f"{f}\t{rep.n}\t{len(cv.plan.train[f])}\t{cv.plan.removed[f]}"
                     f"\t{rep.acc50:.2f}\t{rep.ap:.2f}")
    lines.append(f"# pooled_acc50\t{cv.acc50:.2f}")
    lines.append(f"# pooled_ap\t{cv.ap:.2f}")
    lines.append(f"# skipped_oov\t{cv.skipped_oov}")
    lines.append(f"# note\t{cv.note}")
    return "\n".join(lines) + "\n"


def save_map(lmap, path):
    """Text matrix: ``d_out d_in`` header, ``bias <value>``, then one row per line."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{lmap.d_out} {lmap.d_in}\n")
        fh.write(f"bias {lmap.bias!r}\n")
        for row in lmap.matrix:
            fh.write(" ".join(repr(float(v)) for v in row) + "\n")


def load_map(path):
    from .model_io import FormatError

    with open(path, encoding="utf-8") as fh:
        lines = [ln for ln in fh.read().splitlines()]
    try:
        d_out, d_in = (int(v) for v in lines[0].split())
        tag, bias = lines[1].split()
        if tag != "bias":
            raise ValueError
        bias = float(bias)
    except (ValueError, IndexError):
        raise FormatError(path, 1, "malformed map header") from None
    rows = lines[2:2 + d_out]
    if len(rows) != d_out:
        raise FormatError(path, len(lines) + 1, f"expected {d_out} matrix rows")
    matrix = np.empty((d_out, d_in))
    for r, line in enumerate(rows):
        try:
            vals = [float(v) for v in line.split()]
        except ValueError:
            raise FormatError(path, r + 3, "non-numeric value") from None
        if len(vals) != d_in:
            raise FormatError(path, r + 3, f"expected {d_in} values, got {len(vals)}")
        matrix[r] = vals
    return LinearMap(matrix, bias)
