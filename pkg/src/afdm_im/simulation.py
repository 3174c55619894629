"""Seeded Monte Carlo link simulation.

Every batch of trials draws from its own Philox stream keyed by
``(seed, snr_index, batch_index)``; batches are reduced in index order and
the stopping rule is checked only after fixed-size rounds of batches, so the
output does not depend on how many worker threads ran them.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .analysis import spectral_efficiency
from .channel import ChannelProfile, apply_time_domain, path_matrices
from .codec import ConfigError, ModemConfig, encode_batch
from .daft import add_cpp, build_daft, daft_fft, idaft_fft
from .detection import Codebook, check_ml_feasible, ml_detect_batch, mmse_detect_batch
from .power import allocate_power, time_noise_variance
from .records import BerRecord

__all__ = ["LinkSimulator", "batch_rng", "resolve_workers", "ROUND_BATCHES"]

log = logging.getLogger(__name__)

ROUND_BATCHES = 8
DETECTORS = ("ml", "mmse")


def batch_rng(seed: int, snr_index: int, batch_index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, snr_index, batch_index])))


def resolve_workers(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("SIM_THREADS", "1"))
    if threads < 1:
        raise ConfigError(f"threads must be >= 1, got {threads}")
    return threads


@dataclass
class LinkSimulator:
    """Transmit -> doubly dispersive channel -> receive chain for one system.

    ``detectors`` may list both ``"ml"`` and ``"mmse"``; they then see the
    very same trials. ``eta`` fixes the bits-per-SNR normalisation and
    defaults to the config's own spectral efficiency.
    """

    config: ModemConfig
    profile: ChannelProfile
    detectors: Sequence[str] = ("ml",)
    system: str = "afdm-im"
    e_total: float | None = None
    eta: float | None = None
    batch_size: int = 128
    noiseless: bool = False

    def __post_init__(self):
        self.detectors = tuple(self.detectors)
        unknown = set(self.detectors) - set(DETECTORS)
        if unknown or not self.detectors:
            raise ConfigError(f"detectors must be drawn from {DETECTORS}, got {self.detectors}")
        if self.config.cpp_len < self.profile.l_max:
            raise ConfigError(f"cpp_len={self.config.cpp_len} shorter than maximum delay {self.profile.l_max}")
        if self.e_total is None:
            self.e_total = float(self.config.n_total)
        if self.eta is None:
            self.eta = spectral_efficiency(self.config)
        if "ml" in self.detectors:
            check_ml_feasible(self.config)

    @cached_property
    def op(self):
        return build_daft(self.config.n_total, self.config.c1, self.config.c2)

    @cached_property
    def per_path(self) -> np.ndarray:
        return path_matrices(self.profile, self.op)

    @cached_property
    def plan(self):
        return allocate_power(self.config.power_strategy, self.e_total, self.config)

    @cached_property
    def codebook(self) -> Codebook:
        return Codebook(self.config)

    def noise_variance(self, snr_db: float) -> float:
        """Time-domain AWGN variance ``N0T``; also the DAFT-domain one (unitary transform)."""
        if self.noiseless:
            return 0.0
        return time_noise_variance(snr_db, self.eta, self.e_total, self.config.n_total)

    def simulate_batch(self, snr_db: float, rng: np.random.Generator) -> tuple[int, dict[str, int]]:
        cfg, n_trials = self.config, self.batch_size
        n_paths = self.profile.n_paths
        # fixed draw order keeps gains and noise paired across systems sharing N_F and P
        g = rng.standard_normal((n_trials, n_paths, 2))
        gains = (g[..., 0] + 1j * g[..., 1]) * np.sqrt(0.5 / n_paths)
        w = rng.standard_normal((n_trials, cfg.n_total, 2))
        noise = (w[..., 0] + 1j * w[..., 1]) * np.sqrt(0.5)
        bits = rng.integers(0, 2, size=(n_trials, cfg.b), dtype=np.uint8)

        rho = self.plan.rho
        x = np.sqrt(rho) * encode_batch(bits, cfg)
        s = add_cpp(idaft_fft(x, self.op), cfg.cpp_len, cfg.c1)
        r = apply_time_domain(s, self.profile, gains, cfg.cpp_len)
        n0 = self.noise_variance(snr_db)
        r = r + np.sqrt(n0) * noise
        y = daft_fft(r, self.op)
        h_eff = np.tensordot(gains, self.per_path, axes=(1, 0))

        errors = {}
        for det in self.detectors:
            if det == "ml":
                est = ml_detect_batch(y, h_eff, rho, self.codebook)
            else:
                est = mmse_detect_batch(y, h_eff, n0, rho, cfg)
            errors[det] = int(np.count_nonzero(est != bits))
        return n_trials * cfg.b, errors

    def run_point(
        self,
        snr_db: float,
        snr_index: int,
        seed: int,
        min_errors: int = 200,
        max_bits: int = 10**7,
        min_bits: int = 0,
        workers: int = 1,
    ) -> list[BerRecord]:
        """Simulate one SNR until every detector has ``min_errors`` (and ``min_bits``) or ``max_bits`` is hit."""
        total_bits = 0
        total_errors = dict.fromkeys(self.detectors, 0)
        batch_index = 0

        def job(index):
            return self.simulate_batch(snr_db, batch_rng(seed, snr_index, index))

        pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
        try:
            batch_bits = self.batch_size * self.config.b
            while True:
                # the last round shrinks to what the bit budget still needs; this
                # depends only on counts, never on scheduling
                needed = int(-(-(max_bits - total_bits) // batch_bits))
                indices = range(batch_index, batch_index + max(1, min(ROUND_BATCHES, needed)))
                results = pool.map(job, indices) if pool else map(job, indices)
                for bits, errs in results:
                    total_bits += bits
                    for det, e in errs.items():
                        total_errors[det] += e
                batch_index = indices.stop
                if total_bits >= max_bits:
                    note = "max_bits"
                    break
                if total_bits >= min_bits and min(total_errors.values()) >= min_errors:
                    note = "min_errors"
                    break
        finally:
            if pool:
                pool.shutdown()
        log.info("%s %s snr=%.2f dB bits=%d errors=%s", self.system, self.profile.name, snr_db, total_bits, total_errors)
        return [
            BerRecord.from_counts(snr_db, self.system, det, total_bits, total_errors[det], self.profile.name, note)
            for det in self.detectors
        ]

    def run(self, snr_grid: Sequence[float], seed: int = 0, workers: int = 1, **stopping) -> list[BerRecord]:
        records = []
        for idx, snr in enumerate(snr_grid):
            records.extend(self.run_point(float(snr), idx, seed, workers=workers, **stopping))
        return records
