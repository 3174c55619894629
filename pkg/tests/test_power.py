import numpy as np
import pytest

from afdm_im.codec import ConfigError, ModemConfig, encode_batch
from afdm_im.power import (
    PowerStrategy,
    allocate_power,
    bit_energy,
    energy_efficiency,
    snr_to_noise,
    time_noise_variance,
)

CFG = ModemConfig(64, 4, 3, 4)


def test_pr_boost():
    plan = allocate_power("pr", 64.0, CFG)
    assert plan.rho == pytest.approx(4 / 3)
    assert plan.total_tx_power == pytest.approx(64.0)


def test_ps_saves_a_quarter():
    plan = allocate_power(PowerStrategy.PS, 64.0, CFG)
    assert plan.rho == pytest.approx(1.0)
    assert plan.total_tx_power == pytest.approx(0.75 * 64)
    assert energy_efficiency("ps", CFG) == pytest.approx(0.75)


def test_full_activation_strategies_coincide():
    cfg = ModemConfig(64, 1, 1, 4)
    plans = [allocate_power(s, 64.0, cfg) for s in PowerStrategy]
    assert all(p.rho == pytest.approx(1.0) and p.total_tx_power == pytest.approx(64.0) for p in plans)
    assert energy_efficiency("ps", cfg) == pytest.approx(1.0)
    assert energy_efficiency("conventional", cfg) == pytest.approx(1.0)


def test_pr_efficiency_is_one():
    assert energy_efficiency("pr", CFG) == pytest.approx(1.0)


def test_bad_inputs():
    with pytest.raises(ConfigError):
        allocate_power("pr", 0.0, CFG)
    with pytest.raises(ConfigError):
        allocate_power("waterfill", 1.0, CFG)
    with pytest.raises(ConfigError):
        bit_energy(1.0, 0.0, 64)


def test_noise_chain_example():
    plan = allocate_power("pr", 64.0, CFG)
    assert bit_energy(64.0, 2.0, 64) == pytest.approx(0.5)
    assert time_noise_variance(0.0, 2.0, 64.0, 64) == pytest.approx(0.5)
    assert snr_to_noise(0.0, CFG, plan, eta=2.0) == pytest.approx(0.75 * 0.5)


def test_noise_full_activation_and_scaling():
    cfg = ModemConfig(64, 1, 1, 4)
    plan = allocate_power("conventional", 64.0, cfg)
    assert snr_to_noise(7.0, cfg, plan) == pytest.approx(time_noise_variance(7.0, 2.0, 64.0, 64))
    double = allocate_power("conventional", 128.0, cfg)
    assert snr_to_noise(7.0, cfg, double) == pytest.approx(2 * snr_to_noise(7.0, cfg, plan))


@pytest.mark.parametrize("strategy", list(PowerStrategy))
def test_measured_block_energy(strategy, rng):
    plan = allocate_power(strategy, 64.0, CFG)
    bits = rng.integers(0, 2, (10_000, CFG.b))
    x = np.sqrt(plan.rho) * encode_batch(bits, CFG)
    measured = np.mean(np.sum(np.abs(x) ** 2, axis=1))
    assert measured == pytest.approx(plan.total_tx_power, rel=0.02)
