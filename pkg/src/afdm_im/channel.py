"""Doubly dispersive channel: time-domain application and DAFT-domain matrices."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .codec import ConfigError
from .daft import DaftOperator

__all__ = [
    "ChannelProfile",
    "PathRealization",
    "EffectiveChannel",
    "split_doppler",
    "standard_profiles",
    "get_profile",
    "draw_gains",
    "apply_time_domain",
    "cpp_gamma",
    "build_path_matrix",
    "path_matrices",
    "closed_form_entry",
    "closed_form_path_matrix",
    "effective_channel",
    "peak_offset",
    "kernel_support",
    "threshold_support",
]

# carrier and subcarrier spacing used by the reference setup; only the
# normalized Doppler values enter the discrete model
CARRIER_HZ = 4e9
SUBCARRIER_SPACING_HZ = 2000.0


def split_doppler(eps: float) -> tuple[int, float]:
    """Split a normalized Doppler into integer ``alpha`` and ``beta`` in (-1/2, 1/2]."""
    alpha = math.ceil(eps - 0.5)
    return alpha, eps - alpha


@dataclass(frozen=True)
class ChannelProfile:
    delays: tuple[int, ...]
    dopplers: tuple[float, ...]
    name: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "delays", tuple(int(d) for d in self.delays))
        object.__setattr__(self, "dopplers", tuple(float(e) for e in self.dopplers))
        if len(self.delays) != len(self.dopplers) or not self.delays:
            raise ConfigError("delays and dopplers must be non-empty and of equal length")
        if min(self.delays) < 0:
            raise ConfigError("delays must be non-negative integers")

    @property
    def n_paths(self) -> int:
        return len(self.delays)

    @property
    def l_max(self) -> int:
        return max(self.delays)

    @property
    def alphas(self) -> tuple[int, ...]:
        return tuple(split_doppler(e)[0] for e in self.dopplers)

    @property
    def betas(self) -> tuple[float, ...]:
        return tuple(split_doppler(e)[1] for e in self.dopplers)

    @property
    def alpha_max(self) -> int:
        return max(abs(a) for a in self.alphas)

    @property
    def eps_max(self) -> float:
        return max(abs(e) for e in self.dopplers)


@dataclass(frozen=True)
class PathRealization:
    gains: np.ndarray


@dataclass(frozen=True)
class EffectiveChannel:
    h_eff: np.ndarray
    per_path: np.ndarray = field(repr=False)


def standard_profiles() -> dict[str, ChannelProfile]:
    return {
        "2-path": ChannelProfile((0, 3), (0.5, 0.8), "2-path"),
        "3-path": ChannelProfile((0, 1, 3), (0.2, 0.5, 0.7), "3-path"),
        "4-path": ChannelProfile((0, 1, 2, 3), (0.2, 0.3, 0.5, 0.7), "4-path"),
    }


def get_profile(name: str) -> ChannelProfile:
    try:
        return standard_profiles()[name]
    except KeyError:
        raise ConfigError(f"unknown channel profile {name!r}; known: {sorted(standard_profiles())}") from None


def draw_gains(n_paths: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """i.i.d. CN(0, 1/P) path gains, shape ``(P,)`` or ``(size, P)``."""
    shape = (n_paths,) if size is None else (size, n_paths)
    z = rng.standard_normal(shape + (2,))
    return (z[..., 0] + 1j * z[..., 1]) * np.sqrt(0.5 / n_paths)


def apply_time_domain(s_cpp: np.ndarray, profile: ChannelProfile, gains, cpp_len: int) -> np.ndarray:
    """Noise-free received block with the prefix already discarded.

    ``s_cpp`` has the prefix in front (shape ``(..., L + N)``); ``gains`` has
    shape ``(..., P)`` broadcasting against the leading axes.
    """
    if cpp_len < profile.l_max:
        raise ConfigError(f"cpp_len={cpp_len} shorter than maximum delay {profile.l_max}")
    s_cpp = np.asarray(s_cpp)
    gains = np.asarray(gains.gains if isinstance(gains, PathRealization) else gains)
    n_total = s_cpp.shape[-1] - cpp_len
    n = np.arange(n_total)
    r = np.zeros(s_cpp.shape[:-1] + (n_total,), dtype=complex)
    for i, (delay, eps) in enumerate(zip(profile.delays, profile.dopplers)):
        doppler = np.exp(-2j * np.pi * eps * n / n_total)
        shifted = s_cpp[..., cpp_len - delay : cpp_len - delay + n_total]
        r += gains[..., i, None] * doppler * shifted
    return r


def cpp_gamma(delay: int, n_total: int, c1: float) -> np.ndarray:
    n = np.arange(n_total)
    return np.where(n < delay, np.exp(-2j * np.pi * c1 * (n_total**2 - 2 * n_total * (delay - n))), 1.0)


def build_path_matrix(delay: int, doppler: float, op: DaftOperator) -> np.ndarray:
    """``H_i = A Gamma_i Delta_i Pi^l A^H`` in the DAFT domain."""
    n_total = op.n_total
    n = np.arange(n_total)
    diag = cpp_gamma(delay, n_total, op.c1) * np.exp(-2j * np.pi * doppler * n / n_total)
    # (Gamma Delta Pi^l) v picks v[(n - l) mod N]
    time_matrix = np.zeros((n_total, n_total), dtype=complex)
    time_matrix[n, (n - delay) % n_total] = diag
    a = op.a_matrix
    return a @ time_matrix @ a.conj().T


def path_matrices(profile: ChannelProfile, op: DaftOperator) -> np.ndarray:
    return np.stack([build_path_matrix(l, e, op) for l, e in zip(profile.delays, profile.dopplers)])


def peak_offset(delay: int, doppler: float, n_total: int, c1: float) -> float:
    """``(alpha + 2 N c1 l) mod N``: column offset of the kernel peak."""
    alpha, _ = split_doppler(doppler)
    return (alpha + 2 * n_total * c1 * delay) % n_total


def closed_form_entry(delay: int, doppler: float, p, q, n_total: int, c1: float, c2: float):
    """Entry ``[p, q]`` of a path matrix from its phase/kernel factorisation.

    The kernel is the normalized Dirichlet ratio
    ``(e^{-j2pi theta} - 1) / (e^{-j2pi theta / N} - 1) / N`` with
    ``theta = p - q + Ind + beta``; at ``theta = 0 mod N`` it equals 1.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    alpha, beta = split_doppler(doppler)
    ind = alpha + 2 * n_total * c1 * delay
    eta = np.exp(
        2j * np.pi / n_total * (n_total * c1 * delay**2 - q * delay + n_total * c2 * (q**2 - p**2))
    )
    theta = p - q + ind + beta
    num = np.exp(-2j * np.pi * theta) - 1
    den = np.exp(-2j * np.pi * theta / n_total) - 1
    near = np.abs(den) < 1e-9
    # exp(-j2pi theta/N) ~ 1 only at theta = 0 mod N, where the ratio -> N
    kernel = np.where(near, n_total, num / np.where(near, 1.0, den))
    out = eta * kernel / n_total
    return out.item() if out.ndim == 0 else out


def closed_form_path_matrix(delay: int, doppler: float, op: DaftOperator) -> np.ndarray:
    idx = np.arange(op.n_total)
    return closed_form_entry(delay, doppler, idx[:, None], idx[None, :], op.n_total, op.c1, op.c2)


def effective_channel(profile: ChannelProfile, gains, op: DaftOperator, per_path: np.ndarray | None = None) -> EffectiveChannel:
    gains = np.asarray(gains.gains if isinstance(gains, PathRealization) else gains)
    if per_path is None:
        per_path = path_matrices(profile, op)
    h_eff = np.tensordot(gains, per_path, axes=(-1, 0))
    return EffectiveChannel(h_eff, per_path)


def kernel_support(delay: int, doppler: float, n_total: int, c1: float, k_eps: int) -> np.ndarray:
    """Boolean ``(N, N)`` mask keeping ``k_eps`` columns either side of each row's peak."""
    ind = peak_offset(delay, doppler, n_total, c1)
    p = np.arange(n_total)[:, None]
    q = np.arange(n_total)[None, :]
    # circular distance of q from p + Ind
    d = (q - p - ind) % n_total
    d = np.minimum(d, n_total - d)
    return d <= k_eps + 1e-9


def threshold_support(matrix: np.ndarray, rel_threshold: float = 1e-3) -> np.ndarray:
    mag = np.abs(matrix)
    return mag > rel_threshold * mag.max()
