import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from icnho.gf import FieldSpec, GF16
from icnho.rlc import (CodedPacket, DecoderState, SourceBlock, XorShift32, coefficients, decode_all,
                       decode_failure_probability, decode_probability, encode, expected_transmissions,
                       from_symbols, ingest, to_symbols, try_decode)
from oracles import decode_probability_mp, expected_k_single


def random_block(rng, n_src, zeta):
    return SourceBlock.from_array(rng.integers(0, 256, size=(n_src, zeta), dtype=np.uint8))


def _fmix32(x):
    x ^= x >> 16
    x = (x * 0x85EBCA6B) % 2**32
    x ^= x >> 13
    x = (x * 0xC2B2AE35) % 2**32
    return x ^ (x >> 16)


def test_xorshift_reference_sequence():
    # independent restatement of the generator
    x = _fmix32(7 ^ 0x9E3779B9)
    outs = []
    for _ in range(6):
        x ^= (x << 13) % 2**32
        x ^= x >> 17
        x ^= (x << 5) % 2**32
        outs.append((x * 0x2545F491) % 2**32)
    g = XorShift32(7)
    assert [g.next() for _ in range(2)] == outs[4:]


def test_coefficient_vectors_reach_full_rank_at_the_predicted_rate():
    """Package coefficients, not ideal uniform draws, against the product formula."""
    from oracles import batched_rank_gf16
    for n, trials in ((4, 3000), (16, 1500), (32, 600)):
        seeds = np.random.default_rng(n).integers(0, 1 << 16, size=(trials, n))
        mats = np.array([[coefficients(int(s), n) for s in row] for row in seeds])
        rate = (batched_rank_gf16(mats) == n).mean()
        p = decode_probability(n, n, 16)
        assert abs(rate - p) < 4 * math.sqrt(p * (1 - p) / trials), (n, rate, p)


def test_coefficients_are_deterministic_and_in_range():
    c1, c2 = coefficients(1234, 32), coefficients(1234, 32)
    assert np.array_equal(c1, c2)
    assert c1.max() < 16
    assert not np.array_equal(c1, coefficients(1235, 32))


def test_coefficients_roughly_uniform():
    counts = np.bincount(np.concatenate([coefficients(s, 16) for s in range(4096)]), minlength=16)
    expected = 4096 * 16 / 16
    chi2 = ((counts - expected) ** 2 / expected).sum()
    assert chi2 < 40   # 15 dof, p ~ 5e-4


def test_symbol_split_roundtrip():
    buf = np.arange(256, dtype=np.uint8)
    sym = to_symbols(buf)
    assert sym[0] == 0 and sym[2] == 0 and sym[3] == 1      # 0x00, 0x01 -> 0,0,0,1
    assert np.array_equal(from_symbols(sym), buf)


def test_wire_format():
    pkt = CodedPacket(0x1234, b"\xab\xcd")
    assert pkt.to_bytes() == b"\x12\x34\xab\xcd"
    assert CodedPacket.from_bytes(pkt.to_bytes()) == pkt
    with pytest.raises(ValueError):
        CodedPacket.from_bytes(b"\x00\x01")
    with pytest.raises(ValueError):
        CodedPacket(1 << 16, b"x")


def test_encode_is_linear_combination():
    rng = np.random.default_rng(3)
    blk = random_block(rng, 3, 8)
    pkt = encode(blk, 99)
    c = coefficients(99, 3)
    sym = to_symbols(blk.as_array())
    acc = np.zeros(sym.shape[1], dtype=np.uint8)
    for i in range(3):
        acc ^= np.array([GF16.mul(int(c[i]), int(s)) for s in sym[i]], dtype=np.uint8)
    assert from_symbols(acc).tobytes() == pkt.payload


def test_decoder_roundtrip_and_redundant_packets():
    rng = np.random.default_rng(5)
    blk = random_block(rng, 8, 64)
    st_ = DecoderState(8, 64)
    gains = [ingest(st_, encode(blk, s)) for s in range(40)]
    assert st_.complete and sum(gains) == 8
    assert try_decode(st_) == blk


def test_try_decode_before_full_rank_is_none():
    blk = random_block(np.random.default_rng(1), 4, 4)
    st_ = DecoderState(4, 4)
    ingest(st_, encode(blk, 1))
    assert try_decode(st_) is None


def test_length_mismatch_rejected():
    st_ = DecoderState(2, 4)
    with pytest.raises(ValueError):
        ingest(st_, CodedPacket(1, b"abc"))


def test_zero_coefficient_packet_does_not_raise_rank():
    st_ = DecoderState(2, 2)
    assert st_.add_row(np.zeros(2, np.uint8), np.zeros(4, np.uint8)) is False
    assert st_.rank == 0


def test_other_field_sizes_roundtrip():
    rng = np.random.default_rng(2)
    for m in (1, 2, 8):
        f = FieldSpec(m)
        blk = random_block(rng, 5, 16)
        pkts = [encode(blk, s, f) for s in range(200)]
        assert decode_all(pkts, 5, 16, f) == blk


@pytest.mark.parametrize("k,n", [(1, 1), (4, 4), (8, 8), (10, 8), (20, 16), (3, 2)])
def test_decode_probability_matches_high_precision(k, n):
    assert decode_probability(k, n, 16) == pytest.approx(decode_probability_mp(k, n), rel=1e-12)


def test_decode_probability_reference_values():
    assert decode_probability(1, 1, 16) == 0.9375
    assert decode_probability(4, 4, 16) == pytest.approx(0.9335956571, abs=1e-10)
    assert decode_probability(3, 4, 16) == 0.0
    assert decode_failure_probability(60, 4, 16) == pytest.approx(1 - decode_probability_mp(60, 4, dps=120), rel=1e-9)


def test_expected_transmissions():
    assert expected_transmissions(1, 16).k_expected == pytest.approx(expected_k_single(16), abs=1e-9)
    e16 = expected_transmissions(16, 16)
    assert e16.k_expected == pytest.approx(16.0708487118, abs=1e-9)
    assert e16.epsilon == pytest.approx(e16.k_expected / 16 - 1)
    assert expected_transmissions(4, math.inf).epsilon == 0.0
    # binary field: geometric series sum_{i=1}^{n} 1/(1-2^-i)
    n = 5
    assert expected_transmissions(n, 2).k_expected == pytest.approx(sum(1 / (1 - 2.0 ** -i) for i in range(1, n + 1)), rel=1e-10)


def test_expected_transmissions_decreases_with_field_size():
    ks = [expected_transmissions(8, q).k_expected for q in (2, 4, 16, 256)]
    assert ks == sorted(ks, reverse=True)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(1, 40), st.randoms(use_true_random=False))
def test_any_full_rank_subset_decodes_in_any_order(n_src, zeta, rnd):
    rng = np.random.default_rng(rnd.getrandbits(32))
    blk = random_block(rng, n_src, zeta)
    seeds = rng.choice(1 << 16, size=4 * n_src + 8, replace=False)
    pkts = [encode(blk, int(s)) for s in seeds]
    st_ = DecoderState(n_src, zeta)
    useful = [p for p in pkts if ingest(st_, p)]
    if not st_.complete:
        return
    rnd.shuffle(useful)
    assert decode_all(useful, n_src, zeta) == blk
