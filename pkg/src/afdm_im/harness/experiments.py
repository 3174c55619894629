"""Running configured experiments, theory overlays and the named figure recipes."""

from __future__ import annotations

import logging
from typing import Callable

from ..analysis import PairwiseSpectrum, clamp_abep
from ..baselines import build_system
from ..channel import ChannelProfile, get_profile
from ..codec import ModemConfig
from ..daft import choose_c1
from ..records import BerRecord
from ..simulation import LinkSimulator
from .config import ExperimentConfig

__all__ = ["make_simulator", "run_experiment", "theory_records", "RECIPES", "run_recipe"]

log = logging.getLogger(__name__)


def make_simulator(cfg: ExperimentConfig) -> LinkSimulator:
    return build_system(
        cfg.system,
        cfg.modem,
        cfg.profile,
        detectors=cfg.detectors,
        e_total=cfg.e_total,
        batch_size=cfg.batch_size,
        noiseless=cfg.noiseless,
    )


def run_experiment(cfg: ExperimentConfig, workers: int = 1) -> list[BerRecord]:
    sim = make_simulator(cfg)
    return sim.run(
        cfg.snr_db,
        seed=cfg.seed,
        workers=workers,
        min_errors=cfg.min_errors,
        max_bits=cfg.max_bits,
        min_bits=cfg.min_bits,
    )


def _theory(sim: LinkSimulator, snr_grid) -> list[BerRecord]:
    spectrum = PairwiseSpectrum.build(sim.config, sim.profile, sim.plan.rho, sim.per_path)
    out = []
    for snr in snr_grid:
        value, clamped = clamp_abep(spectrum.abep(sim.noise_variance(snr)))
        out.append(
            BerRecord(float(snr), sim.system, "ml", "theory", None, None, value, sim.profile.name, "clamped" if clamped else "")
        )
    return out


def theory_records(cfg: ExperimentConfig) -> list[BerRecord]:
    """ABEP union-bound rows for the configured system and SNR grid."""
    return _theory(make_simulator(cfg), cfg.snr_db)


def _modem(n_total, n_sub, k_active, mod_order, profile: ChannelProfile, strategy, k_eps=1) -> ModemConfig:
    c1 = choose_c1(profile.alpha_max, k_eps, n_total, profile.delays, min_gap=1)
    return ModemConfig(n_total, n_sub, k_active, mod_order, c1, 0.0, profile.l_max, strategy)


def _grid(start, stop, step):
    out, v = [], start
    while v <= stop + 1e-9:
        out.append(float(v))
        v += step
    return out


def fig2a(seed=0, workers=1, max_bits=10**6, min_errors=100):
    """ML simulation and union bound, (32,8,1,2), 2-path."""
    profile = get_profile("2-path")
    sim = LinkSimulator(_modem(32, 8, 1, 2, profile, "pr"), profile, ("ml",))
    snr = _grid(10, 30, 4)
    return sim.run(snr, seed=seed, workers=workers, min_errors=min_errors, max_bits=max_bits) + _theory(sim, snr)


def fig2b(seed=0, workers=1, max_bits=10**6, min_errors=100):
    """Union bounds for the 2-, 3- and 4-path profiles."""
    out = []
    for name in ("2-path", "3-path", "4-path"):
        profile = get_profile(name)
        sim = LinkSimulator(_modem(32, 8, 1, 2, profile, "pr"), profile, ("ml",))
        out.extend(_theory(sim, _grid(10, 40, 2.5)))
    return out


def fig4b_uncoded(seed=0, workers=1, max_bits=10**6, min_errors=100):
    """AFDM-IM (PR) against classic AFDM at 2 bits/s/Hz, MMSE."""
    out = []
    snr = _grid(0, 30, 5)
    for name in ("2-path", "4-path"):
        profile = get_profile(name)
        modem = _modem(64, 4, 3, 4, profile, "pr")
        for system in ("afdm-im", "afdm"):
            sim = build_system(system, modem, profile, ("mmse",))
            out.extend(sim.run(snr, seed=seed, workers=workers, min_errors=min_errors, max_bits=max_bits))
    return out


def fig4c(seed=0, workers=1, max_bits=10**6, min_errors=100):
    """AFDM-IM against OFDM-IM with PS power, 2-path, MMSE, at 2 and 1.5 bits/s/Hz."""
    out = []
    profile = get_profile("2-path")
    snr = _grid(0, 35, 5)
    for dims, label in (((64, 4, 3, 4), "eta=2"), ((128, 2, 1, 4), "eta=1.5")):
        modem = _modem(*dims, profile, "ps")
        for system in ("afdm-im", "ofdm-im"):
            sim = build_system(system, modem, profile, ("mmse",), label=f"{system} {label}")
            out.extend(sim.run(snr, seed=seed, workers=workers, min_errors=min_errors, max_bits=max_bits))
    return out


RECIPES: dict[str, Callable[..., list[BerRecord]]] = {
    "fig2a": fig2a,
    "fig2b": fig2b,
    "fig4b-uncoded": fig4b_uncoded,
    "fig4c": fig4c,
}


def run_recipe(name: str, **kwargs) -> list[BerRecord]:
    return RECIPES[name](**kwargs)
