import numpy as np
import pytest

from afdm_im.channel import (
    ChannelProfile,
    PathRealization,
    apply_time_domain,
    build_path_matrix,
    closed_form_entry,
    closed_form_path_matrix,
    draw_gains,
    effective_channel,
    get_profile,
    kernel_support,
    path_matrices,
    split_doppler,
    standard_profiles,
    threshold_support,
)
from afdm_im.codec import ConfigError, ModemConfig, encode_block
from afdm_im.daft import add_cpp, build_daft, choose_c1, daft, idaft


def test_standard_profiles():
    profiles = standard_profiles()
    assert set(profiles) == {"2-path", "3-path", "4-path"}
    assert (profiles["2-path"].delays, profiles["2-path"].dopplers) == ((0, 3), (0.5, 0.8))
    assert (profiles["3-path"].delays, profiles["3-path"].dopplers) == ((0, 1, 3), (0.2, 0.5, 0.7))
    assert (profiles["4-path"].delays, profiles["4-path"].dopplers) == ((0, 1, 2, 3), (0.2, 0.3, 0.5, 0.7))
    for p in profiles.values():
        assert p.alpha_max == 1 and p.l_max == 3


def test_unknown_profile():
    with pytest.raises(ConfigError, match="unknown channel profile"):
        get_profile("5-path")


@pytest.mark.parametrize(
    "eps, alpha, beta", [(0.5, 0, 0.5), (0.8, 1, -0.2), (0.2, 0, 0.2), (-0.5, -1, 0.5), (1.5, 1, 0.5), (-0.7, -1, 0.3), (2.0, 2, 0.0)]
)
def test_split_doppler(eps, alpha, beta):
    a, b = split_doppler(eps)
    assert a == alpha and b == pytest.approx(beta)
    assert -0.5 < b <= 0.5


def test_profile_validation():
    with pytest.raises(ConfigError):
        ChannelProfile((0, -1), (0.1, 0.2))
    with pytest.raises(ConfigError):
        ChannelProfile((0, 1), (0.1,))


def test_gain_statistics(rng):
    g = draw_gains(4, rng, size=20000)
    assert np.mean(np.sum(np.abs(g) ** 2, axis=1)) == pytest.approx(1.0, rel=0.03)


def test_identity_channel(rng):
    s = rng.standard_normal(16) + 1j * rng.standard_normal(16)
    r = apply_time_domain(s, ChannelProfile((0,), (0.0,)), np.array([1.0]), 0)
    assert np.allclose(r, s)


def test_single_delay_is_chirp_cyclic_shift(rng):
    n, c1 = 16, 0.05
    op = build_daft(n, c1, 0.0)
    s = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    r = apply_time_domain(add_cpp(s, 1, c1), ChannelProfile((1,), (0.0,)), np.array([1.0]), 1)
    expected = np.roll(s, 1)
    expected[0] *= np.exp(-2j * np.pi * c1 * (n**2 - 2 * n))
    assert np.allclose(r, expected)
    # same operation seen through the DAFT-domain path matrix
    assert np.allclose(daft(r, op), build_path_matrix(1, 0.0, op) @ daft(s, op))


def test_short_prefix_rejected():
    with pytest.raises(ConfigError):
        apply_time_domain(np.zeros(18), get_profile("2-path"), np.ones(2), 2)


def test_trivial_and_unitary_path_matrices(rng):
    op = build_daft(32, 0.07, 0.02)
    assert np.allclose(build_path_matrix(0, 0.0, op), np.eye(32), atol=1e-10)
    for delay, eps in [(3, 0.8), (1, -1.3), (2, 0.25)]:
        h = build_path_matrix(delay, eps, op)
        v = rng.standard_normal(32) + 1j * rng.standard_normal(32)
        assert abs(np.linalg.norm(h @ v) - np.linalg.norm(v)) < 1e-10
        assert np.abs(h @ h.conj().T - np.eye(32)).max() < 1e-10


@pytest.mark.parametrize("name", ["2-path", "3-path", "4-path"])
def test_end_to_end_oracle(name, rng):
    profile = get_profile(name)
    for n_total, dims in [(32, (8, 1, 2)), (64, (4, 3, 4)), (16, (4, 2, 2))]:
        cfg = ModemConfig(n_total, *dims, choose_c1(1, 1, n_total, profile.delays, min_gap=1), rng.uniform(0, 0.1), 3)
        op = build_daft(cfg.n_total, cfg.c1, cfg.c2)
        x = encode_block(rng.integers(0, 2, cfg.b), cfg).x
        gains = PathRealization(draw_gains(profile.n_paths, rng))
        r = apply_time_domain(add_cpp(idaft(x, op), cfg.cpp_len, cfg.c1), profile, gains, cfg.cpp_len)
        hx = effective_channel(profile, gains, op).h_eff @ x
        assert np.linalg.norm(daft(r, op) - hx) / np.linalg.norm(hx) < 1e-9


def test_effective_channel_is_gain_weighted_sum(rng):
    profile = get_profile("3-path")
    op = build_daft(32, 5 / 64, 0.0)
    gains = draw_gains(3, rng)
    eff = effective_channel(profile, gains, op)
    assert np.allclose(eff.h_eff, sum(g * h for g, h in zip(gains, eff.per_path)), atol=1e-10)
    single = effective_channel(ChannelProfile((0,), (0.0,)), np.array([1.0]), op)
    assert np.allclose(single.h_eff, np.eye(32), atol=1e-10)


def test_mean_channel_energy(rng):
    profile = get_profile("4-path")
    op = build_daft(16, 5 / 32, 0.0)
    per_path = path_matrices(profile, op)
    gains = draw_gains(4, rng, size=10000)
    h = np.tensordot(gains, per_path, axes=(1, 0))
    assert np.mean(np.sum(np.abs(h) ** 2, axis=(1, 2))) / 16 == pytest.approx(1.0, rel=0.05)


def test_closed_form_integer_doppler_peak():
    n, c1 = 32, 5 / 64
    op = build_daft(n, c1, 0.01)
    delay, eps = 2, 1.0
    ind = int(round(1 + 2 * n * c1 * delay)) % n
    for p in range(n):
        peak = (p + ind) % n
        assert abs(closed_form_entry(delay, eps, p, peak, n, c1, 0.01)) == pytest.approx(1.0)
        others = [q for q in range(n) if q != peak]
        assert np.abs(closed_form_entry(delay, eps, p, np.array(others), n, c1, 0.01)).max() < 1e-10
    assert np.abs(closed_form_path_matrix(delay, eps, op) - build_path_matrix(delay, eps, op)).max() < 1e-9


def test_closed_form_matches_matrix_product(rng):
    for _ in range(10):
        n = int(rng.choice([8, 16, 32, 64]))
        op = build_daft(n, rng.uniform(0, 0.3), rng.uniform(-0.2, 0.2))
        delay, eps = int(rng.integers(0, 6)), float(rng.uniform(-2.5, 2.5))
        assert np.abs(closed_form_path_matrix(delay, eps, op) - build_path_matrix(delay, eps, op)).max() < 1e-9


@pytest.mark.parametrize("name", ["2-path", "3-path", "4-path"])
def test_per_path_kernel_windows_do_not_overlap(name):
    profile = get_profile(name)
    n = 64
    c1 = choose_c1(profile.alpha_max, 1, n, profile.delays, min_gap=1)
    masks = [kernel_support(l, e, n, c1, 1) for l, e in zip(profile.delays, profile.dopplers)]
    for i in range(len(masks)):
        for j in range(i + 1, len(masks)):
            assert not np.any(masks[i] & masks[j])


def test_threshold_support_disjoint_for_integer_doppler():
    n = 32
    profile = ChannelProfile((0, 3), (0.0, 1.0))
    op = build_daft(n, choose_c1(1, 1, n, profile.delays, min_gap=1), 0.0)
    h1, h2 = path_matrices(profile, op)
    assert not np.any(threshold_support(h1) & threshold_support(h2))


def test_fractional_leakage_is_concentrated_near_peak():
    # the kernel window holds most of each row's energy even with beta = 1/2
    n = 64
    op = build_daft(n, 5 / 128, 0.0)
    h = build_path_matrix(0, 0.5, op)
    inside = np.sum(np.abs(h[kernel_support(0, 0.5, n, op.c1, 1)]) ** 2) / n
    assert inside > 0.8
