"""Reference systems run through the same chain: classic AFDM and OFDM-IM."""

from __future__ import annotations

import enum
from typing import Sequence

from .channel import ChannelProfile
from .codec import ConfigError, ModemConfig, PowerStrategy
from .records import BerRecord
from .simulation import LinkSimulator

__all__ = [
    "BaselineKind",
    "SYSTEMS",
    "classic_afdm_config",
    "ofdm_im_config",
    "system_config",
    "build_system",
    "run_classic_afdm",
    "run_ofdm_im",
]


class BaselineKind(str, enum.Enum):
    CLASSIC_AFDM = "afdm"
    OFDM_IM = "ofdm-im"


SYSTEMS = ("afdm-im", BaselineKind.CLASSIC_AFDM.value, BaselineKind.OFDM_IM.value)


def classic_afdm_config(config: ModemConfig) -> ModemConfig:
    """All subcarriers active, one symbol per 'subblock', no index bits."""
    return ModemConfig(
        n_total=config.n_total,
        n_sub=1,
        k_active=1,
        mod_order=config.mod_order,
        c1=config.c1,
        c2=config.c2,
        cpp_len=config.cpp_len,
        power_strategy=PowerStrategy.CONVENTIONAL,
    )


def ofdm_im_config(config: ModemConfig) -> ModemConfig:
    """Plain DFT and cyclic prefix: the ``c1 = c2 = 0`` member of the family."""
    return config.with_params(c1=0.0, c2=0.0)


def system_config(system: str, config: ModemConfig) -> ModemConfig:
    if system == "afdm-im":
        return config
    if system == BaselineKind.CLASSIC_AFDM.value:
        return classic_afdm_config(config)
    if system == BaselineKind.OFDM_IM.value:
        return ofdm_im_config(config)
    raise ConfigError(f"unknown system {system!r}; expected one of {SYSTEMS}")


def build_system(
    system: str,
    config: ModemConfig,
    profile: ChannelProfile,
    detectors: Sequence[str] = ("mmse",),
    label: str | None = None,
    **kwargs,
) -> LinkSimulator:
    return LinkSimulator(
        system_config(system, config), profile, detectors=detectors, system=label or system, **kwargs
    )


def run_classic_afdm(
    config: ModemConfig,
    profile: ChannelProfile,
    snr_grid: Sequence[float],
    *,
    seed: int = 0,
    detector: str = "mmse",
    workers: int = 1,
    **stopping,
) -> list[BerRecord]:
    sim = build_system(BaselineKind.CLASSIC_AFDM.value, config, profile, (detector,))
    return sim.run(snr_grid, seed=seed, workers=workers, **stopping)


def run_ofdm_im(
    config: ModemConfig,
    profile: ChannelProfile,
    snr_grid: Sequence[float],
    *,
    seed: int = 0,
    detector: str = "mmse",
    workers: int = 1,
    **stopping,
) -> list[BerRecord]:
    sim = build_system(BaselineKind.OFDM_IM.value, config, profile, (detector,))
    return sim.run(snr_grid, seed=seed, workers=workers, **stopping)
