import numpy as np
import pytest

from afdm_im.analysis import classic_spectral_efficiency, spectral_efficiency
from afdm_im.baselines import (
    SYSTEMS,
    build_system,
    classic_afdm_config,
    ofdm_im_config,
    run_classic_afdm,
    run_ofdm_im,
    system_config,
)
from afdm_im.channel import ChannelProfile, draw_gains, get_profile, path_matrices
from afdm_im.codec import ConfigError, ModemConfig, PowerStrategy
from afdm_im.daft import add_cpp, build_daft, choose_c1


@pytest.fixture
def afdm_im_cfg():
    return ModemConfig(64, 4, 3, 4, choose_c1(1, 1, 64, (0, 3), min_gap=1), 0.0, 3, PowerStrategy.PR)


def test_classic_config(afdm_im_cfg):
    cfg = classic_afdm_config(afdm_im_cfg)
    assert (cfg.n_sub, cfg.k_active, cfg.p1, cfg.b) == (1, 1, 0, 128)
    assert cfg.power_strategy is PowerStrategy.CONVENTIONAL
    assert cfg.c1 == afdm_im_cfg.c1
    assert classic_spectral_efficiency(4) == spectral_efficiency(cfg) == 2.0


def test_ofdm_im_config(afdm_im_cfg):
    cfg = ofdm_im_config(afdm_im_cfg)
    assert cfg.c1 == cfg.c2 == 0.0
    assert (cfg.n_total, cfg.n_sub, cfg.k_active, cfg.mod_order) == (64, 4, 3, 4)
    assert np.allclose(build_daft(64, cfg.c1, cfg.c2).a_matrix, np.fft.fft(np.eye(64), norm="ortho"))
    # zero chirp: the prefix is a plain cyclic prefix
    s = np.arange(64, dtype=complex)
    assert np.allclose(add_cpp(s, 3, cfg.c1)[:3], s[-3:])


def test_unknown_system(afdm_im_cfg):
    with pytest.raises(ConfigError):
        system_config("otfs", afdm_im_cfg)
    assert set(SYSTEMS) == {"afdm-im", "afdm", "ofdm-im"}


def test_ofdm_time_invariant_channel_is_diagonal():
    profile = ChannelProfile((0, 2, 3), (0.0, 0.0, 0.0))
    h = path_matrices(profile, build_daft(32, 0.0, 0.0))
    off = h * (1 - np.eye(32))
    assert np.abs(off).max() < 1e-12


def test_ofdm_doppler_leaks_off_diagonal(rng):
    profile = get_profile("2-path")
    h = np.tensordot(draw_gains(2, rng), path_matrices(profile, build_daft(32, 0.0, 0.0)), axes=(0, 0))
    assert np.sum(np.abs(h * (1 - np.eye(32))) ** 2) > 1e-3


@pytest.mark.parametrize("system", SYSTEMS)
def test_noiseless_is_error_free(system, afdm_im_cfg):
    sim = build_system(system, afdm_im_cfg, get_profile("4-path"), ("mmse",), noiseless=True, batch_size=16)
    (rec,) = sim.run([10.0], seed=3, min_errors=1, max_bits=5000)
    assert rec.errors == 0 and rec.ber == 0.0


def test_ofdm_im_is_zero_chirp_afdm_im(afdm_im_cfg):
    profile = get_profile("2-path")
    a = run_ofdm_im(afdm_im_cfg, profile, [5.0, 10.0], seed=9, max_bits=4000, min_errors=1)
    b = build_system("afdm-im", ofdm_im_config(afdm_im_cfg), profile, ("mmse",), label="ofdm-im").run(
        [5.0, 10.0], seed=9, max_bits=4000, min_errors=1
    )
    assert a == b


def test_classic_runner_labels(afdm_im_cfg):
    recs = run_classic_afdm(afdm_im_cfg, get_profile("2-path"), [0.0], seed=1, max_bits=2000, min_errors=1)
    assert recs[0].system == "afdm" and recs[0].detector == "mmse" and recs[0].errors > 0


class RecordingRng:
    """Wraps a Generator and keeps every array it hands out."""

    def __init__(self, rng):
        self._rng = rng
        self.draws = []

    def __getattr__(self, name):
        method = getattr(self._rng, name)

        def wrapped(*args, **kwargs):
            out = method(*args, **kwargs)
            self.draws.append((name, np.copy(out)))
            return out

        return wrapped


def test_paired_channel_and_noise_draws(afdm_im_cfg):
    from afdm_im.simulation import batch_rng

    profile = get_profile("2-path")
    logs = []
    for system in ("afdm-im", "afdm", "ofdm-im"):
        sim = build_system(system, afdm_im_cfg, profile, ("mmse",), batch_size=8)
        rec = RecordingRng(batch_rng(5, 0, 0))
        sim.simulate_batch(10.0, rec)
        logs.append(rec.draws)
    for other in logs[1:]:
        # gains then noise come out identical for every system with this N_F
        for (name_a, a), (name_b, b) in zip(logs[0][:2], other[:2]):
            assert name_a == name_b and np.array_equal(a, b)
