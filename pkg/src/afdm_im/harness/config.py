"""Experiment files: INI-style sections, one experiment per file.

::

    [experiment]
    system = afdm-im          ; afdm-im | afdm | ofdm-im
    detector = ml             ; ml | mmse | ml, mmse
    seed = 1
    batch_size = 128          ; optional
    e_total = 32              ; optional, defaults to n_total
    noiseless = false         ; optional

    [modem]
    n_total = 32
    n_sub = 8                 ; ignored for system = afdm
    k_active = 1              ; ignored for system = afdm
    mod_order = 2
    c1 = auto                 ; auto -> (2(alpha_max + k_eps) + 1) / (2 n_total)
    k_eps = 1
    c2 = 0
    cpp_len = auto            ; auto -> maximum channel delay
    power_strategy = pr       ; conventional | pr | ps

    [channel]
    profile = 2-path          ; or: delays = 0, 3  and  dopplers = 0.5, 0.8

    [sweep]
    snr_db = 20, 24, 28       ; or start:stop:step, stop included
    min_errors = 200
    max_bits = 10000000
    min_bits = 0
"""

from __future__ import annotations

import configparser
import logging
import os
from dataclasses import dataclass, replace

import numpy as np

from ..baselines import SYSTEMS
from ..channel import ChannelProfile, get_profile
from ..codec import ConfigError, ModemConfig, PowerStrategy
from ..daft import choose_c1

__all__ = ["ExperimentConfig", "parse_config", "load_config"]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExperimentConfig:
    system: str
    modem: ModemConfig
    profile: ChannelProfile
    snr_db: tuple[float, ...]
    detectors: tuple[str, ...] = ("ml",)
    seed: int = 0
    min_errors: int = 200
    max_bits: int = 10**7
    min_bits: int = 0
    e_total: float | None = None
    batch_size: int = 128
    noiseless: bool = False

    def with_seed(self, seed: int) -> "ExperimentConfig":
        return replace(self, seed=seed)


def _floats(text: str) -> list[float]:
    text = text.strip()
    if ":" in text:
        start, stop, step = (float(v) for v in text.split(":"))
        return [float(v) for v in np.arange(start, stop + step / 2, step)]
    return [float(v) for v in text.replace(",", " ").split()]


class _Reader:
    """Collects every field problem before raising, so one run reports them all."""

    def __init__(self, parser: configparser.ConfigParser):
        self.parser = parser
        self.problems: list[str] = []

    def get(self, section, key, convert=str, default=None, required=False):
        if not self.parser.has_option(section, key):
            if required:
                self.problems.append(f"[{section}] {key}: missing")
            return default
        raw = self.parser.get(section, key).strip()
        try:
            return convert(raw)
        except (ValueError, ConfigError) as exc:
            self.problems.append(f"[{section}] {key}: {exc}")
            return default


def _bool(text: str) -> bool:
    low = text.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def parse_config(text: str) -> ExperimentConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    rd = _Reader(parser)

    system = rd.get("experiment", "system", default="afdm-im")
    if system not in SYSTEMS:
        rd.problems.append(f"[experiment] system: {system!r} not one of {SYSTEMS}")
    detectors = tuple(d.strip() for d in rd.get("experiment", "detector", default="ml").split(",") if d.strip())
    if not detectors or set(detectors) - {"ml", "mmse"}:
        rd.problems.append(f"[experiment] detector: {detectors} must be ml and/or mmse")
    seed = rd.get("experiment", "seed", int, 0)
    if seed is not None and seed < 0:
        rd.problems.append("[experiment] seed: must be non-negative")
    batch_size = rd.get("experiment", "batch_size", int, 128)
    e_total = rd.get("experiment", "e_total", float)
    noiseless = rd.get("experiment", "noiseless", _bool, False)

    profile = None
    if parser.has_option("channel", "profile"):
        profile = rd.get("channel", "profile", get_profile)
    elif parser.has_option("channel", "delays") or parser.has_option("channel", "dopplers"):
        delays = rd.get("channel", "delays", lambda t: [int(v) for v in _floats(t)], required=True)
        dopplers = rd.get("channel", "dopplers", _floats, required=True)
        if delays is not None and dopplers is not None:
            try:
                profile = ChannelProfile(tuple(delays), tuple(dopplers), "custom")
            except ConfigError as exc:
                rd.problems.append(f"[channel] delays/dopplers: {exc}")
    else:
        rd.problems.append("[channel] profile: missing (or give delays and dopplers)")

    n_total = rd.get("modem", "n_total", int, required=True)
    mod_order = rd.get("modem", "mod_order", int, required=True)
    if system == "afdm":
        n_sub = k_active = 1
    else:
        n_sub = rd.get("modem", "n_sub", int, required=True)
        k_active = rd.get("modem", "k_active", int, required=True)
    k_eps = rd.get("modem", "k_eps", int, 1)
    c1_raw = rd.get("modem", "c1", default="auto")
    c2 = rd.get("modem", "c2", float, 0.0)
    cpp_raw = rd.get("modem", "cpp_len", default="auto")
    strategy = rd.get("modem", "power_strategy", PowerStrategy.parse, PowerStrategy.PR)

    snr = rd.get("sweep", "snr_db", _floats, required=True)
    if snr is not None and (not snr or any(b <= a for a, b in zip(snr, snr[1:]))):
        rd.problems.append("[sweep] snr_db: must be a non-empty ascending list")
    min_errors = rd.get("sweep", "min_errors", int, 200)
    max_bits = rd.get("sweep", "max_bits", lambda t: int(float(t)), 10**7)
    min_bits = rd.get("sweep", "min_bits", lambda t: int(float(t)), 0)

    modem = None
    if not rd.problems:
        if c1_raw.lower() == "auto":
            c1 = choose_c1(profile.alpha_max, k_eps, n_total, profile.delays, min_gap=1)
        else:
            c1 = rd.get("modem", "c1", float)
        cpp_len = profile.l_max if cpp_raw.lower() == "auto" else rd.get("modem", "cpp_len", int)
        if cpp_len is not None and cpp_len < profile.l_max:
            rd.problems.append(f"[modem] cpp_len: {cpp_len} shorter than maximum delay {profile.l_max}")
        if not rd.problems:
            try:
                modem = ModemConfig(n_total, n_sub, k_active, mod_order, c1, c2, cpp_len, strategy)
            except ConfigError as exc:
                rd.problems.append(f"[modem] {exc}")

    if rd.problems:
        raise ConfigError("invalid experiment config:\n  " + "\n  ".join(rd.problems))
    if min_errors < 100:
        log.warning("min_errors=%d is below 100; points will be statistically weak", min_errors)
    return ExperimentConfig(
        system=system,
        modem=modem,
        profile=profile,
        snr_db=tuple(snr),
        detectors=detectors,
        seed=seed,
        min_errors=min_errors,
        max_bits=max_bits,
        min_bits=min_bits,
        e_total=e_total,
        batch_size=batch_size,
        noiseless=noiseless,
    )


def load_config(path) -> ExperimentConfig:
    if not os.path.isfile(path):
        raise ConfigError(f"config file not found: {path}")
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())

