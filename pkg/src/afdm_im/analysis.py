"""Closed-form error analysis: spectral efficiency, PEP, Chernoff and union bounds.

For a pair ``x -> x_hat`` the received-distance is ``delta = h^H Psi h`` with
``Psi = rho (Phi(x_hat) - Phi(x))^H (Phi(x_hat) - Phi(x))`` and unit-variance
``h``; path gains of variance ``1/P`` put the factor ``P`` next to ``N0``::

    PEP = (1/pi) int_0^{pi/2} prod_i (1 + lambda_i / (4 P N0 sin^2 t))^{-1} dt

with eigenvalues of ``Psi`` counted with multiplicity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .channel import ChannelProfile, path_matrices
from .codec import ConfigError, ModemConfig, pattern_table
from .daft import build_daft

__all__ = [
    "ABEP_MAX_P",
    "QUADRATURE_NODES",
    "spectral_efficiency",
    "classic_spectral_efficiency",
    "build_phi",
    "PairwiseEvent",
    "pairwise_event",
    "eigen_multiplicities",
    "pep_exact",
    "pep_chernoff",
    "pep_exact_eigs",
    "pep_chernoff_eigs",
    "pep_single_eigenvalue",
    "PairwiseSpectrum",
    "abep_union",
    "clamp_abep",
    "diversity_slope",
    "mgf_closed_form",
    "mgf_monte_carlo",
]

ABEP_MAX_P = 12
QUADRATURE_NODES = 64
ZERO_EIG_RTOL = 1e-10


def spectral_efficiency(config: ModemConfig) -> float:
    return config.n_groups * (config.p1 + config.k_active * config.bits_per_symbol) / config.n_total


def classic_spectral_efficiency(mod_order: int) -> float:
    return math.log2(mod_order)


def build_phi(x, per_path) -> np.ndarray:
    """``[H_1 x | ... | H_P x]``; ``x`` may be an ImBlock or a vector."""
    x = np.asarray(getattr(x, "x", x))
    per_path = np.asarray(per_path)
    if per_path.shape[-1] != x.shape[-1]:
        raise ConfigError(f"path matrices are {per_path.shape[-1]} wide, x has length {x.shape[-1]}")
    return np.einsum("pij,j->ip", per_path, x)


@dataclass(frozen=True)
class PairwiseEvent:
    x: np.ndarray
    x_hat: np.ndarray
    psi: np.ndarray
    eigenvalues: tuple[tuple[float, int], ...]
    hamming: int


def _clean_eigs(eigs: np.ndarray) -> np.ndarray:
    eigs = np.clip(np.asarray(eigs, dtype=float), 0.0, None)
    top = eigs.max(axis=-1, keepdims=True) if eigs.size else eigs
    return np.where(eigs < ZERO_EIG_RTOL * top, 0.0, eigs)


def eigen_multiplicities(psi: np.ndarray, rtol: float = 1e-8) -> tuple[tuple[float, int], ...]:
    """Distinct non-zero eigenvalues of a Hermitian PSD matrix with their multiplicities."""
    eigs = np.sort(_clean_eigs(np.linalg.eigvalsh(psi)))[::-1]
    groups: list[list] = []
    for lam in eigs[eigs > 0]:
        if groups and abs(groups[-1][0] - lam) <= rtol * groups[-1][0]:
            groups[-1][1] += 1
        else:
            groups.append([float(lam), 1])
    return tuple((lam, m) for lam, m in groups)


def pairwise_event(x, x_hat, per_path, rho: float, hamming: int = 0) -> PairwiseEvent:
    diff = build_phi(x_hat, per_path) - build_phi(x, per_path)
    psi = rho * diff.conj().T @ diff
    psi = 0.5 * (psi + psi.conj().T)
    x = np.asarray(getattr(x, "x", x))
    x_hat = np.asarray(getattr(x_hat, "x", x_hat))
    return PairwiseEvent(x, x_hat, psi, eigen_multiplicities(psi), int(hamming))


@lru_cache(maxsize=None)
def _quadrature(n_nodes: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(n_nodes)
    theta = (nodes + 1) * np.pi / 4
    return theta, weights * np.pi / 4


def pep_exact_eigs(eigs: np.ndarray, n0: float, n_paths: int, n_nodes: int = QUADRATURE_NODES) -> np.ndarray:
    """Vectorized PEP over the last axis of an eigenvalue array (zeros allowed)."""
    eigs = _clean_eigs(eigs)
    theta, weights = _quadrature(n_nodes)
    scale = 1.0 / (4.0 * n_paths * n0 * np.sin(theta) ** 2)
    # (..., P, nodes)
    factors = 1.0 / (1.0 + eigs[..., None] * scale)
    return np.prod(factors, axis=-2) @ weights / np.pi


def pep_chernoff_eigs(eigs: np.ndarray, n0: float, n_paths: int) -> np.ndarray:
    eigs = _clean_eigs(eigs)
    return np.prod(1.0 / (1.0 + eigs / (4.0 * n_paths * n0)), axis=-1)


def _expand(event: PairwiseEvent) -> np.ndarray:
    return np.array([lam for lam, m in event.eigenvalues for _ in range(m)] or [0.0])


def pep_exact(event: PairwiseEvent, n0: float, n_paths: int) -> float:
    return float(pep_exact_eigs(_expand(event), n0, n_paths))


def pep_chernoff(event: PairwiseEvent, n0: float, n_paths: int) -> float:
    return float(pep_chernoff_eigs(_expand(event), n0, n_paths))


def pep_single_eigenvalue(lam: float, n0: float, n_paths: int) -> float:
    """Closed form of the PEP integral for one simple eigenvalue."""
    c = lam / (4.0 * n_paths * n0)
    return 0.5 * (1.0 - math.sqrt(c / (1.0 + c)))


@dataclass(frozen=True)
class PairwiseSpectrum:
    """Eigenvalues and Hamming weights of every single-subblock error event.

    ``eigs`` has shape ``(n_events, P)``. Events are the ordered pairs of
    distinct subblock patterns placed in each subblock in turn.
    """

    eigs: np.ndarray
    hamming: np.ndarray
    p: int
    n_paths: int
    n_subblocks: int

    @classmethod
    def build(
        cls,
        config: ModemConfig,
        profile: ChannelProfile,
        rho: float,
        per_path: np.ndarray | None = None,
        subblocks: str = "all",
    ) -> "PairwiseSpectrum":
        if config.p > ABEP_MAX_P:
            raise ConfigError(f"p={config.p} exceeds the union-bound guard rail of {ABEP_MAX_P}")
        if per_path is None:
            per_path = path_matrices(profile, build_daft(config.n_total, config.c1, config.c2))
        table = pattern_table(config)
        n_pat = len(table)
        i, j = np.nonzero(~np.eye(n_pat, dtype=bool))
        hamming = np.array([bin(v).count("1") for v in range(n_pat)])[i ^ j]
        groups = range(config.n_groups) if subblocks == "all" else [0]
        all_eigs = []
        for g in groups:
            cols = slice(g * config.n_sub, (g + 1) * config.n_sub)
            # phi[k, n, path] for pattern k placed in subblock g
            phi = np.einsum("pnj,kj->knp", per_path[:, :, cols], table)
            flat = phi.transpose(1, 0, 2).reshape(config.n_total, n_pat * profile.n_paths)
            gram = (flat.conj().T @ flat).reshape(n_pat, profile.n_paths, n_pat, profile.n_paths)
            gram = gram.transpose(0, 2, 1, 3)
            diag = gram[np.arange(n_pat), np.arange(n_pat)]
            psi = rho * (diag[j] + diag[i] - gram[j, i] - gram[i, j])
            psi = 0.5 * (psi + psi.conj().transpose(0, 2, 1))
            all_eigs.append(np.linalg.eigvalsh(psi))
        return cls(
            eigs=_clean_eigs(np.concatenate(all_eigs)),
            hamming=np.tile(hamming, len(all_eigs)),
            p=config.p,
            n_paths=profile.n_paths,
            n_subblocks=len(all_eigs),
        )

    def abep(self, n0: float, bound: str = "exact") -> float:
        if bound == "exact":
            pep = pep_exact_eigs(self.eigs, n0, self.n_paths)
        elif bound == "chernoff":
            pep = pep_chernoff_eigs(self.eigs, n0, self.n_paths)
        else:
            raise ValueError(f"unknown bound {bound!r}")
        total = float(pep @ self.hamming)
        return total / (self.p * 2**self.p * self.n_subblocks)


def abep_union(
    config: ModemConfig,
    profile: ChannelProfile,
    n0: float,
    rho: float = 1.0,
    per_path: np.ndarray | None = None,
    bound: str = "exact",
) -> float:
    """Union bound on the bit error probability (raw, may exceed 1/2).

    ``n0`` is the noise variance of the DAFT-domain observation and ``rho``
    the power per active subcarrier.
    """
    return PairwiseSpectrum.build(config, profile, rho, per_path).abep(n0, bound)


def clamp_abep(value: float) -> tuple[float, bool]:
    return (0.5, True) if value > 0.5 else (value, False)


def diversity_slope(snr_db, values) -> float:
    """Least-squares slope of ``log10(values)`` against ``snr_db / 10``."""
    snr_db = np.asarray(snr_db, dtype=float)
    values = np.asarray(values, dtype=float)
    if snr_db.size < 3 or snr_db.shape != values.shape:
        raise ValueError("need at least three (snr, value) points")
    if np.any(values <= 0):
        raise ValueError("all values must be positive (zero error counts in window)")
    return float(np.polyfit(snr_db / 10.0, np.log10(values), 1)[0])


def mgf_closed_form(psi: np.ndarray, s: float, variance: float = 1.0) -> float:
    """``E[exp(s h^H Psi h)]`` for ``h ~ CN(0, variance I)``."""
    n = psi.shape[0]
    return float(np.real(1.0 / np.linalg.det(np.eye(n) - s * variance * psi)))


def mgf_monte_carlo(psi: np.ndarray, s: float, n_draws: int, rng: np.random.Generator, variance: float = 1.0):
    """Sample mean and standard error of ``exp(s h^H Psi h)``."""
    n = psi.shape[0]
    z = rng.standard_normal((n_draws, n, 2))
    h = (z[..., 0] + 1j * z[..., 1]) * np.sqrt(variance / 2)
    quad = np.einsum("ti,ij,tj->t", h.conj(), psi, h).real
    samples = np.exp(s * quad)
    return float(samples.mean()), float(samples.std(ddof=1) / np.sqrt(n_draws))
