"""Discrete affine Fourier transform and the chirp-periodic prefix."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .codec import ConfigError

__all__ = [
    "DaftOperator",
    "build_daft",
    "daft",
    "idaft",
    "daft_fft",
    "idaft_fft",
    "add_cpp",
    "remove_cpp",
    "cpp_phase",
    "choose_c1",
]


@dataclass(frozen=True)
class DaftOperator:
    """Dense DAFT matrix ``A[m, n] = exp(-j2pi(c1 n^2 + c2 m^2 + m n / N)) / sqrt(N)``."""

    n_total: int
    c1: float
    c2: float
    a_matrix: np.ndarray = field(repr=False)

    @property
    def chirp1(self) -> np.ndarray:
        n = np.arange(self.n_total)
        return np.exp(-2j * np.pi * self.c1 * n**2)

    @property
    def chirp2(self) -> np.ndarray:
        n = np.arange(self.n_total)
        return np.exp(-2j * np.pi * self.c2 * n**2)


def build_daft(n_total: int, c1: float, c2: float) -> DaftOperator:
    if n_total < 2:
        raise ConfigError(f"n_total must be >= 2, got {n_total}")
    n = np.arange(n_total)
    # reduce n^2 * c and m*n/N modulo 1 before exponentiating to keep phases accurate
    phase = (c1 * n[None, :] ** 2) % 1.0 + (c2 * n[:, None] ** 2) % 1.0 + (np.outer(n, n) % n_total) / n_total
    a = np.exp(-2j * np.pi * phase) / np.sqrt(n_total)
    a.setflags(write=False)
    return DaftOperator(n_total, float(c1), float(c2), a)


def daft(r: np.ndarray, op: DaftOperator) -> np.ndarray:
    """Forward transform along the last axis: ``y = A r``."""
    return np.asarray(r) @ op.a_matrix.T


def idaft(x: np.ndarray, op: DaftOperator) -> np.ndarray:
    """Inverse transform along the last axis: ``s = A^H x``."""
    x = np.asarray(x)
    if x.shape[-1] != op.n_total:
        raise ConfigError(f"expected length {op.n_total}, got {x.shape[-1]}")
    return x @ op.a_matrix.conj()


def daft_fft(r: np.ndarray, op: DaftOperator) -> np.ndarray:
    return op.chirp2 * np.fft.fft(op.chirp1 * np.asarray(r), axis=-1, norm="ortho")


def idaft_fft(x: np.ndarray, op: DaftOperator) -> np.ndarray:
    return op.chirp1.conj() * np.fft.ifft(op.chirp2.conj() * np.asarray(x), axis=-1, norm="ortho")


def cpp_phase(n_total: int, cpp_len: int, c1: float) -> np.ndarray:
    """Phase factors applied to the copied tail, for prefix indices ``-L..-1``."""
    n = np.arange(-cpp_len, 0)
    return np.exp(-2j * np.pi * c1 * (n_total**2 + 2 * n_total * n))


def add_cpp(s: np.ndarray, cpp_len: int, c1: float) -> np.ndarray:
    s = np.asarray(s)
    if cpp_len == 0:
        return s.copy()
    n_total = s.shape[-1]
    if cpp_len > n_total:
        raise ConfigError(f"cpp_len={cpp_len} exceeds block length {n_total}")
    prefix = s[..., n_total - cpp_len :] * cpp_phase(n_total, cpp_len, c1)
    return np.concatenate([prefix, s], axis=-1)


def remove_cpp(s_cpp: np.ndarray, cpp_len: int) -> np.ndarray:
    return np.asarray(s_cpp)[..., cpp_len:].copy()


def choose_c1(alpha_max: int, k_eps: int, n_total: int, delays: Sequence[int], min_gap: int | None = None) -> float:
    """Smallest chirp rate keeping per-path channel supports apart.

    ``min_gap`` overrides the smallest spacing between distinct delays; pass 1
    for the common simplification that ignores the actual delay layout.
    """
    if min_gap is None:
        distinct = sorted(set(int(d) for d in delays))
        if not distinct:
            raise ConfigError("choose_c1 needs at least one delay")
        if len(distinct) < 2:
            raise ConfigError("choose_c1 needs two distinct delays or an explicit min_gap")
        min_gap = min(b - a for a, b in zip(distinct, distinct[1:]))
    if min_gap < 1:
        raise ConfigError(f"min_gap must be >= 1, got {min_gap}")
    return (2 * (alpha_max + k_eps) + 1) / (2 * n_total * min_gap)
