import itertools
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from afdm_im.codec import (
    ConfigError,
    ModemConfig,
    demap_batch,
    demap_subblock,
    encode_batch,
    encode_block,
    map_psk,
    pattern_table,
    psk_constellation,
    read_golden_vectors,
    select_indices,
    write_golden_vectors,
)

GOLDEN = Path(__file__).parent / "data" / "golden_vectors.txt"


@pytest.mark.parametrize(
    "bits, expected",
    [("00", (1, 2)), ("01", (2, 3)), ("10", (3, 4)), ("11", (1, 4))],
)
def test_index_table_n4_k2(bits, expected):
    assert select_indices(bits, 4, 2) == expected


def test_forced_single_subset():
    assert select_indices("", 1, 1) == (1,)


def test_empty_bits_rejected_when_index_bits_exist():
    # C(2,1) = 2 subsets, so one index bit is required
    with pytest.raises(ConfigError):
        select_indices("", 2, 1)


def test_first_lexicographic_subset():
    assert select_indices("0000", 8, 2) == (1, 2)


@pytest.mark.parametrize("n, k", [(4, 1), (4, 2), (6, 3), (8, 2), (8, 1), (5, 4)])
def test_index_map_injective_and_sorted(n, k):
    p1 = int(math.floor(math.log2(math.comb(n, k))))
    sets = [select_indices(f"{v:0{p1}b}" if p1 else "", n, k) for v in range(1 << p1)]
    assert len(set(sets)) == len(sets) == 1 << p1
    for s in sets:
        assert len(s) == k and list(s) == sorted(set(s)) and 1 <= s[0] and s[-1] <= n


def test_index_length_mismatch():
    with pytest.raises(ConfigError):
        select_indices("0", 4, 2)


def test_psk_conventions():
    assert map_psk("0", 2) == 1
    assert map_psk("1", 2) == -1
    assert np.isclose(map_psk("00", 4), np.exp(1j * np.pi / 4))


@pytest.mark.parametrize("m", [2, 4, 8, 16])
def test_psk_unit_energy_and_gray(m):
    width = int(math.log2(m))
    syms = np.array([map_psk(f"{v:0{width}b}", m) for v in range(m)])
    assert np.allclose(np.abs(syms), 1)
    assert np.isclose(np.mean(np.abs(syms) ** 2), 1.0)
    assert len(set(np.round(syms, 9))) == m
    # Gray: labels of angular neighbours differ in exactly one bit
    order = np.argsort(np.mod(np.angle(syms), 2 * np.pi))
    for a, b in zip(order, np.roll(order, -1)):
        assert bin(int(a) ^ int(b)).count("1") == 1
    assert np.allclose(np.sort_complex(psk_constellation(m)), np.sort_complex(syms))


def test_encode_example_subblock():
    block = encode_block("0001", ModemConfig(4, 4, 2, 2))
    assert np.allclose(block.x, [1, -1, 0, 0])
    assert block.subblocks[0].indices == (1, 2)


def test_zero_bits_structure():
    cfg = ModemConfig(32, 8, 1, 2)
    block = encode_block(np.zeros(cfg.b, dtype=int), cfg)
    nz = np.flatnonzero(block.x)
    assert len(nz) == 4
    assert sorted(nz // 8) == [0, 1, 2, 3]


def test_encode_length_mismatch():
    with pytest.raises(ConfigError):
        encode_block("000", ModemConfig(4, 4, 2, 2))


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(n_total=30, n_sub=8, k_active=1, mod_order=2),
        dict(n_total=32, n_sub=8, k_active=0, mod_order=2),
        dict(n_total=32, n_sub=8, k_active=9, mod_order=2),
        dict(n_total=32, n_sub=8, k_active=1, mod_order=3),
        dict(n_total=32, n_sub=8, k_active=1, mod_order=2, cpp_len=-1),
    ],
)
def test_config_invariants(kwargs):
    with pytest.raises(ConfigError):
        ModemConfig(**kwargs)


def test_config_derived_quantities():
    cfg = ModemConfig(64, 4, 3, 4)
    assert (cfg.n_groups, cfg.p1, cfg.p2, cfg.p, cfg.b) == (16, 2, 6, 8, 128)


@pytest.mark.parametrize("dims", [(4, 4, 2, 2), (8, 4, 2, 2), (8, 8, 2, 2), (4, 4, 3, 4), (6, 6, 2, 2), (8, 8, 1, 4)])
def test_round_trip_exhaustive(dims):
    cfg = ModemConfig(*dims)
    assert cfg.p <= 12
    for word in itertools.product((0, 1), repeat=cfg.p):
        bits = np.array(word * cfg.n_groups)
        block = encode_block(bits, cfg)
        for g in range(cfg.n_groups):
            seg = block.x[g * cfg.n_sub : (g + 1) * cfg.n_sub]
            assert np.array_equal(demap_subblock(seg, cfg), bits[g * cfg.p : (g + 1) * cfg.p])
        assert np.count_nonzero(block.x) == cfg.n_groups * cfg.k_active
        assert np.allclose(np.abs(block.x[block.x != 0]), 1)


def test_demap_under_small_perturbation(rng):
    cfg = ModemConfig(8, 8, 2, 4)
    table = pattern_table(cfg)
    d = np.linalg.norm(table[:, None, :] - table[None, :, :], axis=2)
    d_min = d[d > 0].min()
    for v in rng.integers(0, len(table), 50):
        delta = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        delta *= 0.49 * d_min / np.linalg.norm(delta)
        assert int("".join(map(str, demap_subblock(table[v] + delta, cfg))), 2) == v


def test_demap_tie_goes_to_lowest_value():
    cfg = ModemConfig(4, 4, 2, 2)
    # zero input is equidistant from every pattern
    assert np.array_equal(demap_subblock(np.zeros(4), cfg), [0, 0, 0, 0])


def test_batch_paths_match_scalar(rng):
    cfg = ModemConfig(16, 4, 2, 4)
    bits = rng.integers(0, 2, (20, cfg.b))
    x = encode_batch(bits, cfg)
    for row, xb in zip(bits, x):
        assert np.allclose(encode_block(row, cfg).x, xb)
    assert np.array_equal(demap_batch(x, cfg), bits)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(8, 4, 2, 2), (16, 4, 3, 4), (16, 8, 1, 8), (12, 6, 2, 2)]), st.data())
def test_round_trip_property(dims, data):
    cfg = ModemConfig(*dims)
    bits = np.array(data.draw(st.lists(st.integers(0, 1), min_size=cfg.b, max_size=cfg.b)))
    block = encode_block(bits, cfg)
    assert np.array_equal(block.bits, bits)
    assert np.array_equal(demap_batch(block.x[None], cfg)[0], bits)


def test_golden_vectors():
    cases = read_golden_vectors(GOLDEN)
    assert len(cases) >= 8
    for case in cases:
        x = encode_block(case["bits"], case["config"]).x
        nz = np.flatnonzero(x)
        assert list(nz + 1) == case["positions"], case["bits"]
        assert np.allclose(x[nz], case["symbols"], atol=1e-12), case["bits"]


def test_golden_writer_round_trip(tmp_path):
    path = tmp_path / "g.txt"
    cases = [(c["bits"], c["config"]) for c in read_golden_vectors(GOLDEN)]
    write_golden_vectors(path, cases)
    again = read_golden_vectors(path)
    assert [c["positions"] for c in again] == [c["positions"] for c in read_golden_vectors(GOLDEN)]
