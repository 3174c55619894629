"""Input checks for the estimator front end.

sklearn's ``check_array`` refuses complex data, so signals and channel
matrices go through these instead.
"""

from __future__ import annotations

import numpy as np

from .codec import ConfigError

__all__ = ["check_bits", "check_signal", "check_channel"]


def check_bits(X, n_features: int) -> np.ndarray:
    """2-D ``uint8`` array of 0/1 with ``n_features`` columns (a 1-D row is promoted)."""
    arr = np.asarray(X)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D bit array, got shape {arr.shape}")
    if arr.shape[1] != n_features:
        raise ValueError(f"X has {arr.shape[1]} columns, expected {n_features}")
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ValueError("bit arrays may only hold 0 and 1")
    return arr.astype(np.uint8)


def check_signal(X, n_features: int, name: str = "X") -> np.ndarray:
    arr = np.asarray(X)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != n_features:
        raise ValueError(f"{name} must have shape (n_samples, {n_features}), got {arr.shape}")
    if not np.issubdtype(arr.dtype, np.number):
        raise ValueError(f"{name} must be numeric, got dtype {arr.dtype}")
    arr = arr.astype(complex)
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains NaN or inf")
    return arr


def check_channel(H, n_total: int) -> np.ndarray:
    """``(N, N)`` or ``(T, N, N)`` complex effective channel."""
    arr = np.asarray(getattr(H, "h_eff", H))
    if arr.ndim not in (2, 3) or arr.shape[-2:] != (n_total, n_total):
        raise ConfigError(f"channel must be ({n_total}, {n_total}) or stacked, got {arr.shape}")
    arr = arr.astype(complex)
    if not np.isfinite(arr).all():
        raise ValueError("channel contains NaN or inf")
    return arr
