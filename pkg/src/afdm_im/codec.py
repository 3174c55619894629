"""Bit-to-block mapping for AFDM with index modulation.

Each subblock of ``N`` chirp subcarriers carries ``p = p1 + K*log2(M)`` bits:
the first ``p1`` bits pick which ``K`` subcarriers are active, the rest pick
the PSK symbols placed on them (in increasing index order).

Index mapping
-------------
For ``(N, K) = (4, 2)`` the fixed table below is used verbatim::

    00 -> {1, 2}    01 -> {2, 3}    10 -> {3, 4}    11 -> {1, 4}

For every other ``(N, K)`` the K-subsets of ``{1..N}`` are enumerated in
lexicographic order and the ``p1`` bits, read as an unsigned MSB-first
integer, select the subset at that position. Only the first ``2**p1``
subsets are ever used.

PSK labelling
-------------
Gray-coded. BPSK maps 0 -> +1, 1 -> -1. QPSK is rotated by pi/4 so that
``00 -> exp(j*pi/4)``. Higher orders start at phase 0.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Sequence

import numpy as np

__all__ = [
    "ConfigError",
    "PowerStrategy",
    "ModemConfig",
    "SubblockContent",
    "ImBlock",
    "select_indices",
    "map_psk",
    "psk_constellation",
    "encode_subblock",
    "encode_block",
    "encode_batch",
    "pattern_table",
    "demap_subblock",
    "demap_batch",
    "bits_to_int",
    "int_to_bits",
    "write_golden_vectors",
    "read_golden_vectors",
]


class ConfigError(ValueError):
    """Invalid modem or experiment configuration."""


class PowerStrategy(str, enum.Enum):
    CONVENTIONAL = "conventional"
    PR = "pr"
    PS = "ps"

    @classmethod
    def parse(cls, value: "str | PowerStrategy") -> "PowerStrategy":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ConfigError(f"unknown power strategy {value!r}") from None


TABLE_4_2 = {
    0b00: (1, 2),
    0b01: (2, 3),
    0b10: (3, 4),
    0b11: (1, 4),
}


@dataclass(frozen=True)
class ModemConfig:
    """Waveform parameters of one AFDM(-IM) block.

    ``k_active == n_sub`` is the classic AFDM case (no index bits).
    """

    n_total: int
    n_sub: int
    k_active: int
    mod_order: int
    c1: float = 0.0
    c2: float = 0.0
    cpp_len: int = 0
    power_strategy: PowerStrategy = PowerStrategy.PR

    def __post_init__(self):
        object.__setattr__(self, "power_strategy", PowerStrategy.parse(self.power_strategy))
        problems = []
        if self.n_total < 1 or self.n_sub < 1:
            problems.append("n_total and n_sub must be positive")
        elif self.n_total % self.n_sub:
            problems.append(f"n_total={self.n_total} is not a multiple of n_sub={self.n_sub}")
        if not 1 <= self.k_active <= self.n_sub:
            problems.append(f"k_active={self.k_active} must lie in [1, n_sub={self.n_sub}]")
        m = self.mod_order
        if m < 2 or m & (m - 1):
            problems.append(f"mod_order={m} is not a power of two >= 2")
        if self.cpp_len < 0:
            problems.append("cpp_len must be non-negative")
        if problems:
            raise ConfigError("; ".join(problems))

    @property
    def n_groups(self) -> int:
        return self.n_total // self.n_sub

    @property
    def bits_per_symbol(self) -> int:
        return int(math.log2(self.mod_order))

    @property
    def p1(self) -> int:
        return math.comb(self.n_sub, self.k_active).bit_length() - 1

    @property
    def p2(self) -> int:
        return self.k_active * self.bits_per_symbol

    @property
    def p(self) -> int:
        return self.p1 + self.p2

    @property
    def b(self) -> int:
        return self.p * self.n_groups

    @property
    def is_classic(self) -> bool:
        return self.k_active == self.n_sub

    def with_params(self, **changes) -> "ModemConfig":
        fields = {
            name: getattr(self, name)
            for name in ("n_total", "n_sub", "k_active", "mod_order", "c1", "c2", "cpp_len", "power_strategy")
        }
        fields.update(changes)
        return ModemConfig(**fields)


@dataclass(frozen=True)
class SubblockContent:
    indices: tuple[int, ...]
    symbols: tuple[complex, ...]
    source_bits: tuple[int, ...]


@dataclass(frozen=True)
class ImBlock:
    x: np.ndarray
    subblocks: tuple[SubblockContent, ...]

    @cached_property
    def bits(self) -> np.ndarray:
        return np.array([b for sb in self.subblocks for b in sb.source_bits], dtype=np.uint8)


def _as_bits(bits, length: int | None = None) -> np.ndarray:
    if isinstance(bits, str):
        bits = [int(c) for c in bits]
    arr = np.asarray(bits, dtype=np.int64).reshape(-1)
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ConfigError("bits must be 0 or 1")
    if length is not None and arr.size != length:
        raise ConfigError(f"expected {length} bits, got {arr.size}")
    return arr.astype(np.uint8)


def bits_to_int(bits) -> int:
    value = 0
    for bit in _as_bits(bits):
        value = (value << 1) | int(bit)
    return value


def int_to_bits(value: int, width: int) -> np.ndarray:
    return np.array([(value >> (width - 1 - i)) & 1 for i in range(width)], dtype=np.uint8)


@lru_cache(maxsize=None)
def _index_sets(n_sub: int, k_active: int) -> tuple[tuple[int, ...], ...]:
    p1 = math.comb(n_sub, k_active).bit_length() - 1
    if (n_sub, k_active) == (4, 2):
        return tuple(TABLE_4_2[v] for v in range(4))
    subsets = combinations(range(1, n_sub + 1), k_active)
    return tuple(next(subsets) for _ in range(1 << p1))


def select_indices(p1_bits, n_sub: int, k_active: int) -> tuple[int, ...]:
    """Return the sorted 1-based active positions selected by ``p1_bits``."""
    if not 1 <= k_active <= n_sub:
        raise ConfigError(f"need 1 <= K <= N, got N={n_sub}, K={k_active}")
    p1 = math.comb(n_sub, k_active).bit_length() - 1
    word = bits_to_int(_as_bits(p1_bits, p1))
    return tuple(sorted(_index_sets(n_sub, k_active)[word]))


def _gray_decode(g: int) -> int:
    k = 0
    while g:
        k ^= g
        g >>= 1
    return k


@lru_cache(maxsize=None)
def _psk_table(mod_order: int) -> np.ndarray:
    offset = np.pi / 4 if mod_order == 4 else 0.0
    labels = np.array([_gray_decode(v) for v in range(mod_order)])
    table = np.exp(1j * (2 * np.pi * labels / mod_order + offset))
    # exact zeros keep BPSK at +-1 and axis points of larger orders exact
    table.real[np.abs(table.real) < 1e-12] = 0.0
    table.imag[np.abs(table.imag) < 1e-12] = 0.0
    return table


def psk_constellation(mod_order: int) -> np.ndarray:
    """Symbols indexed by the integer value of their bit label."""
    return _psk_table(mod_order).copy()


def map_psk(bits, mod_order: int) -> complex:
    if mod_order < 2 or mod_order & (mod_order - 1):
        raise ConfigError(f"mod_order={mod_order} is not a power of two >= 2")
    width = int(math.log2(mod_order))
    return complex(_psk_table(mod_order)[bits_to_int(_as_bits(bits, width))])


def encode_subblock(bits, config: ModemConfig) -> tuple[np.ndarray, SubblockContent]:
    bits = _as_bits(bits, config.p)
    indices = select_indices(bits[: config.p1], config.n_sub, config.k_active)
    q = config.bits_per_symbol
    symbol_bits = bits[config.p1 :].reshape(config.k_active, q)
    symbols = tuple(map_psk(chunk, config.mod_order) for chunk in symbol_bits)
    xg = np.zeros(config.n_sub, dtype=complex)
    xg[np.array(indices) - 1] = symbols
    return xg, SubblockContent(indices, symbols, tuple(int(b) for b in bits))


def encode_block(bits, config: ModemConfig) -> ImBlock:
    bits = _as_bits(bits, config.b)
    parts = [encode_subblock(chunk, config) for chunk in bits.reshape(config.n_groups, config.p)]
    x = np.concatenate([xg for xg, _ in parts])
    return ImBlock(x=x, subblocks=tuple(sb for _, sb in parts))


@lru_cache(maxsize=64)
def _pattern_table(config: ModemConfig) -> np.ndarray:
    table = np.stack([encode_subblock(int_to_bits(v, config.p), config)[0] for v in range(1 << config.p)])
    table.setflags(write=False)
    return table


def pattern_table(config: ModemConfig) -> np.ndarray:
    """All ``2**p`` legal subblock vectors, row ``v`` generated by the bits of ``v``."""
    if config.p > 16:
        raise ConfigError(f"p={config.p} too large to tabulate subblock patterns")
    return _pattern_table(config)


def encode_batch(bits: np.ndarray, config: ModemConfig) -> np.ndarray:
    """Vectorised ``encode_block`` for a ``(n_blocks, b)`` bit array; returns x only."""
    bits = np.asarray(bits)
    n = bits.shape[0]
    weights = 1 << np.arange(config.p - 1, -1, -1)
    words = bits.reshape(n, config.n_groups, config.p).astype(np.int64) @ weights
    return pattern_table(config)[words].reshape(n, config.n_total)


def _words_to_bits(words: np.ndarray, width: int) -> np.ndarray:
    shifts = np.arange(width - 1, -1, -1)
    return ((words[..., None] >> shifts) & 1).astype(np.uint8)


def demap_batch(x_est: np.ndarray, config: ModemConfig) -> np.ndarray:
    """Nearest legal subblock pattern for every subblock of every row of ``x_est``.

    Returns bits shaped ``(n_blocks, b)``. Ties go to the lowest pattern value.
    """
    x_est = np.asarray(x_est, dtype=complex)
    n = x_est.shape[0]
    table = pattern_table(config)
    segs = x_est.reshape(n * config.n_groups, config.n_sub)
    dist = (
        np.sum(np.abs(segs) ** 2, axis=1)[:, None]
        - 2 * np.real(segs @ table.conj().T)
        + np.sum(np.abs(table) ** 2, axis=1)[None, :]
    )
    words = np.argmin(dist, axis=1)
    return _words_to_bits(words, config.p).reshape(n, config.b)


def demap_subblock(x_est_g, config: ModemConfig) -> np.ndarray:
    x_est_g = np.asarray(x_est_g, dtype=complex).reshape(-1)
    if x_est_g.size != config.n_sub:
        raise ConfigError(f"expected {config.n_sub} samples, got {x_est_g.size}")
    table = pattern_table(config)
    dist = np.sum(np.abs(table - x_est_g) ** 2, axis=1)
    return int_to_bits(int(np.argmin(dist)), config.p)


# Golden vectors: one case per line,
#   bits | n_total,n_sub,k_active,mod_order | positions (1-based, whole block) | re:im,...


def write_golden_vectors(path, cases: Sequence[tuple[str, ModemConfig]]) -> None:
    lines = ["# bits | n_total,n_sub,k_active,mod_order | nonzero positions | symbols re:im"]
    for bits, cfg in cases:
        block = encode_block(bits, cfg)
        pos = np.flatnonzero(block.x)
        syms = ",".join(f"{float(v.real)!r}:{float(v.imag)!r}" for v in block.x[pos])
        lines.append(
            f"{bits} | {cfg.n_total},{cfg.n_sub},{cfg.k_active},{cfg.mod_order} | "
            f"{','.join(str(i + 1) for i in pos)} | {syms}"
        )
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def read_golden_vectors(path) -> list[dict]:
    cases = []
    with open(path, encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            bits, cfg, pos, syms = (part.strip() for part in line.split("|"))
            n_total, n_sub, k, m = (int(v) for v in cfg.split(","))
            cases.append(
                {
                    "bits": bits,
                    "config": ModemConfig(n_total, n_sub, k, m),
                    "positions": [int(v) for v in pos.split(",")] if pos else [],
                    "symbols": [complex(float(a), float(b)) for a, b in (s.split(":") for s in syms.split(","))]
                    if syms
                    else [],
                }
            )
    return cases
