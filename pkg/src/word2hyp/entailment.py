"""Entailment-vector arithmetic.

Vectors hold per-feature log-odds ``X`` with ``P(x_i = 1) = sigmoid(X_i)``.
The entailment operator ``Y >O X = sum_i sigmoid(-Y_i) * log sigmoid(-X_i)``
approximates ``log P(y => x)``.  A word pair is scored by inferring the latent
pseudo-phrase vector ``Y = softplus(Xe') + Xp`` and measuring how well it
satisfies the entailment and prior constraints.

Two arithmetic paths exist.  The exact path (numpy, float64) is used for
evaluation and tests.  The lookup-table path interpolates precomputed sigmoid
and log-sigmoid tables, the same trick the Word2Vec C code uses, and is what
the training kernels call.
"""

from dataclasses import dataclass

import numpy as np
from numba import njit

from ._validation import check_log_odds, check_same_dim

MAX_EXP = 6.0
TABLE_SIZE = 1000

_GRID = np.linspace(-MAX_EXP, MAX_EXP, TABLE_SIZE + 1)
SIGMOID_TABLE = 1.0 / (1.0 + np.exp(-_GRID))
LOG_SIGMOID_TABLE = -np.logaddexp(0.0, -_GRID)
BINS_PER_UNIT = TABLE_SIZE / (2.0 * MAX_EXP)


# ---------------------------------------------------------------------------
# exact math (numpy, vectorised)
# ---------------------------------------------------------------------------

def sigmoid(x):
    """Numerically stable logistic function."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def log_sigmoid(x):
    return -np.logaddexp(0.0, -np.asarray(x, dtype=np.float64))


def softplus_transform(X):
    """Componentwise ``-log sigmoid(-X)``, the non-negative transform of ``X``.

    Every output component is at least ``max(0, X_i)``.
    """
    X = check_log_odds(X, "X")
    return np.logaddexp(0.0, X)


def entailment_operator(Y, X):
    """Score ``Y >O X``, the approximate log-probability that ``y`` entails ``x``.

    Always non-positive.  Non-decreasing in each ``Y_i`` and non-increasing
    in each ``X_i``.
    """
    Y = check_log_odds(Y, "Y")
    X = check_log_odds(X, "X")
    check_same_dim(Y, X)
    return float(np.dot(sigmoid(-Y), log_sigmoid(-X)))


def infer_latent(Xe_prime, Xp):
    """Latent pseudo-phrase vector ``Y = softplus(Xe') + Xp``."""
    Xe_prime = check_log_odds(Xe_prime, "Xe_prime")
    Xp = check_log_odds(Xp, "Xp")
    check_same_dim(Xe_prime, Xp, ("Xe_prime", "Xp"))
    return np.logaddexp(0.0, Xe_prime) + Xp


@dataclass(frozen=True)
class ScoreBreakdown:
    """Pair score split into its entailment and prior terms."""

    total: float
    entail_term: float
    prior_term: float
    latent: np.ndarray


def pair_score(Xe_prime, Xp, lut=False):
    """Score how well a latent vector can satisfy both words' constraints.

    ``Xe_prime`` is the evidence vector of one word and ``Xp`` the posterior
    vector of the other.  The total is ``Y >O Xe' - sigmoid(-Y) . Xp`` with
    ``Y`` from :func:`infer_latent`.  With ``lut=True`` the transcendental
    functions go through the lookup tables used during training.
    """
    Xe_prime = check_log_odds(Xe_prime, "Xe_prime")
    Xp = check_log_odds(Xp, "Xp")
    check_same_dim(Xe_prime, Xp, ("Xe_prime", "Xp"))
    if lut:
        Y = Xe_prime - fast_log_sigmoid(Xe_prime) + Xp
        not_y = fast_sigmoid(-Y)
        entail = float(np.dot(not_y, fast_log_sigmoid(-Xe_prime)))
    else:
        Y = np.logaddexp(0.0, Xe_prime) + Xp
        not_y = sigmoid(-Y)
        entail = float(np.dot(not_y, log_sigmoid(-Xe_prime)))
    prior = float(-np.dot(not_y, Xp))
    return ScoreBreakdown(total=entail + prior, entail_term=entail,
                          prior_term=prior, latent=Y)


def pair_score_simplified(Xe_prime, Xp):
    """The same total in closed form, ``-sum_i sigmoid(-Y_i) * Y_i``."""
    Y = infer_latent(Xe_prime, Xp)
    return float(-np.dot(sigmoid(-Y), Y))


def pair_score_grad(Xe_prime, Xp):
    """Analytic gradient of the pair score total.

    Returns ``(d total / d Xe', d total / d Xp)``.  With
    ``g_i = sigmoid(-Y_i) * (Y_i * sigmoid(Y_i) - 1)`` the two gradients are
    ``g * sigmoid(Xe')`` and ``g``.
    """
    Xe_prime = check_log_odds(Xe_prime, "Xe_prime")
    Xp = check_log_odds(Xp, "Xp")
    check_same_dim(Xe_prime, Xp, ("Xe_prime", "Xp"))
    Y = np.logaddexp(0.0, Xe_prime) + Xp
    dY = sigmoid(-Y) * (Y * sigmoid(Y) - 1.0)
    return dY * sigmoid(Xe_prime), dY


# ---------------------------------------------------------------------------
# lookup-table math
# ---------------------------------------------------------------------------

def _interp(table, x):
    pos = (x + MAX_EXP) * BINS_PER_UNIT
    idx = np.minimum(pos.astype(np.int64), TABLE_SIZE - 1)
    frac = pos - idx
    return table[idx] + frac * (table[idx + 1] - table[idx])


def fast_sigmoid(x):
    """Table-interpolated sigmoid.  Saturates to 0 / 1 outside +-MAX_EXP."""
    x = np.asarray(x, dtype=np.float64)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    inside = np.abs(x) <= MAX_EXP
    out = np.where(x > 0, 1.0, 0.0)
    out[inside] = _interp(SIGMOID_TABLE, x[inside])
    return float(out[0]) if scalar else out


def fast_log_sigmoid(x):
    """Table-interpolated log-sigmoid.  Returns ``x`` below -MAX_EXP and 0 above."""
    x = np.asarray(x, dtype=np.float64)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    inside = np.abs(x) <= MAX_EXP
    out = np.where(x > 0, 0.0, x)
    out[inside] = _interp(LOG_SIGMOID_TABLE, x[inside])
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# scalar kernels for the numba training loops
# ---------------------------------------------------------------------------

@njit(cache=True, inline="always")
def lut_sigmoid(x, table):
    if x > MAX_EXP:
        return 1.0
    if x < -MAX_EXP:
        return 0.0
    pos = (x + MAX_EXP) * BINS_PER_UNIT
    i = int(pos)
    if i >= TABLE_SIZE:
        i = TABLE_SIZE - 1
    frac = pos - i
    return table[i] + frac * (table[i + 1] - table[i])


@njit(cache=True, inline="always")
def lut_log_sigmoid(x, table):
    if x > MAX_EXP:
        return 0.0
    if x < -MAX_EXP:
        return x
    pos = (x + MAX_EXP) * BINS_PER_UNIT
    i = int(pos)
    if i >= TABLE_SIZE:
        i = TABLE_SIZE - 1
    frac = pos - i
    return table[i] + frac * (table[i + 1] - table[i])


@njit(cache=True, inline="always")
def exact_sigmoid(x):
    if x >= 0:
        return 1.0 / (1.0 + np.exp(-x))
    e = np.exp(x)
    return e / (1.0 + e)


@njit(cache=True, inline="always")
def exact_log_sigmoid(x):
    if x >= 0:
        return -np.log1p(np.exp(-x))
    return x - np.log1p(np.exp(x))
