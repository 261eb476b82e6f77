"""Input validation helpers shared by the estimators and free functions."""

import numpy as np


def check_log_odds(X, name="X", ndim=1):
    """Return ``X`` as a finite float64 array with ``ndim`` dimensions.

    Raises ``ValueError`` on NaN/Inf entries, empty input or wrong rank.
    """
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim == 0 and ndim == 1:
        arr = arr.reshape(1)
    if arr.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-D, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} is empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinite values")
    return arr


def check_same_dim(A, B, names=("Y", "X")):
    if A.shape[-1] != B.shape[-1]:
        raise ValueError(
            f"dimension mismatch: {names[0]} has {A.shape[-1]} features, "
            f"{names[1]} has {B.shape[-1]}"
        )


def check_positive(value, name, allow_zero=False):
    if allow_zero:
        if not value >= 0:
            raise ValueError(f"{name} must be >= 0, got {value!r}")
    elif not value > 0:
        raise ValueError(f"{name} must be > 0, got {value!r}")
    return value


def check_choice(value, name, choices):
    if value not in choices:
        raise ValueError(f"{name} must be one of {sorted(choices)}, got {value!r}")
    return value


def check_is_fitted(estimator, attribute):
    from sklearn.exceptions import NotFittedError

    if getattr(estimator, attribute, None) is None:
        raise NotFittedError(
            f"This {type(estimator).__name__} instance is not fitted yet; call fit first."
        )
