"""ML and MMSE detection in the DAFT domain (perfect CSI)."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .codec import ConfigError, ImBlock, ModemConfig, demap_batch, encode_block, pattern_table

__all__ = [
    "ML_MAX_BITS",
    "check_ml_feasible",
    "Codebook",
    "ml_detect",
    "ml_detect_batch",
    "mmse_equalize",
    "mmse_detect",
    "mmse_detect_batch",
]

ML_MAX_BITS = 20


@dataclass(frozen=True)
class Codebook:
    """All ``2**b`` transmit vectors of a config, stored factored per subblock.

    Entry ``v`` is the block generated by the ``b``-bit MSB-first word ``v``.
    """

    config: ModemConfig

    @property
    def size(self) -> int:
        return 1 << self.config.b

    @cached_property
    def patterns(self) -> np.ndarray:
        return pattern_table(self.config)

    def half_table(self, n_groups: int) -> np.ndarray:
        """Concatenated patterns for ``n_groups`` consecutive subblocks, row-major in the joint word."""
        cfg = self.config
        if n_groups == 0:
            return np.zeros((1, 0), dtype=complex)
        table = self.patterns
        rows = table
        for _ in range(n_groups - 1):
            rows = np.concatenate(
                [np.repeat(rows, len(table), axis=0), np.tile(table, (len(rows), 1))], axis=1
            )
        return rows.reshape(len(table) ** n_groups, n_groups * cfg.n_sub)

    @lru_cache(maxsize=4)
    def split_tables(self, n_leading: int) -> tuple[np.ndarray, np.ndarray]:
        return self.half_table(n_leading), self.half_table(self.config.n_groups - n_leading)

    def vectors(self) -> np.ndarray:
        """Materialized ``(2**b, N_F)`` codebook; only for small ``b``."""
        if self.config.b > 16:
            raise ConfigError(f"b={self.config.b} too large to materialize the codebook")
        return self.half_table(self.config.n_groups)


def _left_multiply(x: np.ndarray, mats: np.ndarray) -> np.ndarray:
    """``x @ mats[t]`` for every t as one GEMM; returns ``(T, len(x), k)``."""
    n_trials, n, k = mats.shape
    flat = np.moveaxis(mats, 0, 1).reshape(n, n_trials * k)
    return np.moveaxis((x @ flat).reshape(len(x), n_trials, k), 1, 0)


def _quadratic_forms(x: np.ndarray, mats: np.ndarray) -> np.ndarray:
    """``Re(x_a^H M_t x_a)`` for all rows a and trials t; returns ``(T, len(x))``."""
    n_trials, n, k = mats.shape
    left = (x.conj() @ np.moveaxis(mats, 0, 1).reshape(n, n_trials * k)).reshape(len(x), n_trials, k)
    return np.einsum("atk,ak->ta", left, x).real


def check_ml_feasible(config: ModemConfig) -> None:
    if config.b > ML_MAX_BITS:
        raise ConfigError(f"ML search over 2^{config.b} blocks exceeds the 2^{ML_MAX_BITS} guard rail; use MMSE")


def ml_detect_batch(y: np.ndarray, h_eff: np.ndarray, rho: float, codebook: Codebook) -> np.ndarray:
    """Exhaustive ML over the codebook for a batch.

    ``y`` is ``(T, N_F)``, ``h_eff`` is ``(T, N_F, N_F)``; returns ``(T, b)`` bits.

    The block is split into a leading and trailing half of subblocks so the
    ``2**b`` metrics come out of one ``(2**bA x 2**bB)`` matrix product per
    trial instead of a product with the full codebook.
    """
    cfg = codebook.config
    check_ml_feasible(cfg)
    y = np.asarray(y, dtype=complex)
    h = np.sqrt(rho) * np.asarray(h_eff, dtype=complex)
    n_trials = len(y)
    g_a = cfg.n_groups // 2
    split = g_a * cfg.n_sub
    xa, xb = codebook.split_tables(g_a)
    ha, hb = h[:, :, :split], h[:, :, split:]
    ha_h = np.conj(ha).transpose(0, 2, 1)
    hb_h = np.conj(hb).transpose(0, 2, 1)
    # ||y - Ha xa - Hb xb||^2 - ||y||^2, expanded so that only the cross
    # term is quadratic in the codebook size
    lin_a = np.real((ha_h @ y[:, :, None])[:, :, 0] @ xa.conj().T)
    lin_b = np.real((hb_h @ y[:, :, None])[:, :, 0] @ xb.conj().T)
    row_terms = _quadratic_forms(xa, ha_h @ ha) - 2 * lin_a
    col_terms = _quadratic_forms(xb, hb_h @ hb) - 2 * lin_b
    w = 2 * _left_multiply(xa.conj(), ha_h @ hb)
    # row terms ride along in the GEMM through an extra all-ones row of xb
    n_cols = xb.shape[1]
    rhs_re = np.ones((n_cols + 1, len(xb)))
    rhs_re[:n_cols] = xb.real.T
    lhs_re = np.empty(w.shape[:2] + (n_cols + 1,))
    lhs_re[..., :n_cols] = w.real
    lhs_re[..., n_cols] = row_terms
    rhs_im = np.ascontiguousarray(-xb.imag.T) if xb.imag.any() else None
    words = np.empty(n_trials, dtype=np.int64)
    # chunk so the (chunk, 2**bA, 2**bB) metric stays cache-sized
    chunk = max(1, (1 << 19) // (len(xa) * len(xb)))
    for lo in range(0, n_trials, chunk):
        hi = min(lo + chunk, n_trials)
        metric = lhs_re[lo:hi].reshape(-1, n_cols + 1) @ rhs_re
        if rhs_im is not None:
            metric += np.ascontiguousarray(w[lo:hi].imag).reshape(-1, n_cols) @ rhs_im
        metric = metric.reshape(hi - lo, len(xa), len(xb))
        metric += col_terms[lo:hi, None, :]
        # row-major flattening gives a * 2**bB + b, the joint word
        words[lo:hi] = np.argmin(metric.reshape(hi - lo, -1), axis=1)
    shifts = np.arange(cfg.b - 1, -1, -1)
    return ((words[:, None] >> shifts) & 1).astype(np.uint8)


def ml_detect(y, h_eff, rho: float, codebook: Codebook) -> tuple[ImBlock, np.ndarray]:
    h = getattr(h_eff, "h_eff", h_eff)
    bits = ml_detect_batch(np.asarray(y)[None, :], np.asarray(h)[None, :, :], rho, codebook)[0]
    return encode_block(bits, codebook.config), bits


def mmse_equalize(y, h_eff, n0: float, rho: float = 1.0) -> np.ndarray:
    """Regularized least squares ``(H^H H + (n0/rho) I)^-1 H^H y / sqrt(rho)``.

    Works on single vectors or stacked ``(T, N)`` / ``(T, N, N)`` batches.
    ``n0`` is the noise variance in ``y``.
    """
    h = np.asarray(getattr(h_eff, "h_eff", h_eff), dtype=complex)
    y = np.asarray(y, dtype=complex) / np.sqrt(rho)
    ridge = max(n0 / rho, 1e-12)
    hh = np.conj(np.swapaxes(h, -1, -2))
    gram = hh @ h + ridge * np.eye(h.shape[-1])
    rhs = (hh @ y[..., None])[..., 0]
    try:
        return np.linalg.solve(gram, rhs[..., None])[..., 0]
    except np.linalg.LinAlgError:
        if h.ndim == 2:
            return np.linalg.lstsq(h, y, rcond=None)[0]
        return np.stack([np.linalg.lstsq(hi, yi, rcond=None)[0] for hi, yi in zip(h, y)])


def mmse_detect_batch(y, h_eff, n0: float, rho: float, config: ModemConfig) -> np.ndarray:
    return demap_batch(mmse_equalize(y, h_eff, n0, rho), config)


def mmse_detect(y, h_eff, n0: float, config: ModemConfig, rho: float = 1.0) -> np.ndarray:
    x_est = mmse_equalize(y, h_eff, n0, rho)
    return demap_batch(x_est[None, :], config)[0]
