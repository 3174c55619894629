"""Power allocation strategies and SNR-to-noise calibration.

SNR is ``Eb / N0T`` with ``Eb = E_T / (eta * N_F)``; ``N0T`` is the variance
of the time-domain AWGN. Power scaling is applied once, on the transmit side,
as ``x_tx = sqrt(rho) * x``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .codec import ConfigError, ModemConfig, PowerStrategy

__all__ = [
    "PowerStrategy",
    "PowerPlan",
    "allocate_power",
    "energy_efficiency",
    "bit_energy",
    "time_noise_variance",
    "snr_to_noise",
]


@dataclass(frozen=True)
class PowerPlan:
    rho: float
    total_tx_power: float
    strategy: PowerStrategy
    e_total: float


def allocate_power(strategy, e_total: float, config: ModemConfig) -> PowerPlan:
    """Per-active-subcarrier power and resulting block power.

    ``CONVENTIONAL`` and ``PS`` both keep ``rho = E_T / N_F``; ``PR`` hands the
    inactive subcarriers' share to the active ones.
    """
    strategy = PowerStrategy.parse(strategy)
    if e_total <= 0:
        raise ConfigError(f"e_total must be positive, got {e_total}")
    base = e_total / config.n_total
    active = config.n_groups * config.k_active
    if strategy is PowerStrategy.PR:
        rho = config.n_sub * base / config.k_active
    else:
        rho = base
    return PowerPlan(rho=rho, total_tx_power=active * rho, strategy=strategy, e_total=e_total)


def energy_efficiency(strategy, config: ModemConfig) -> float:
    """Fraction of the nominal block energy actually radiated."""
    plan = allocate_power(strategy, 1.0, config)
    return plan.total_tx_power / plan.e_total


def bit_energy(e_total: float, eta: float, n_total: int) -> float:
    if eta <= 0:
        raise ConfigError(f"spectral efficiency must be positive, got {eta}")
    return e_total / (eta * n_total)


def time_noise_variance(snr_db: float, eta: float, e_total: float, n_total: int) -> float:
    """``N0T`` for a given ``Eb/N0T`` in dB."""
    return bit_energy(e_total, eta, n_total) * 10.0 ** (-snr_db / 10.0)


def snr_to_noise(snr_db: float, config: ModemConfig, plan: PowerPlan, eta: float | None = None) -> float:
    """DAFT-domain ``N0 = (K/N) * N0T``.

    With PR power allocation this equals ``N0T / rho`` (for ``E_T = N_F``),
    i.e. the noise variance seen after undoing the transmit power boost.
    """
    if eta is None:
        eta = config.b / config.n_total
    n0t = time_noise_variance(snr_db, eta, plan.e_total, config.n_total)
    return config.k_active / config.n_sub * n0t
