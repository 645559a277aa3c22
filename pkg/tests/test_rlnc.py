"""Codec behavior: encoding, online Gauss-Jordan decoding, batch kernel."""

import numpy as np
import pytest

from owc_rlnc_noma.rlnc import (
    CodedPacket,
    DecoderState,
    Generation,
    InsufficientRankError,
    batch_rank,
    combine,
    decode_batch,
    encode,
)


def oracle_mul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a & 0x100:
            a ^= 0x11B
    return r


def oracle_det(m: list[list[int]]) -> int:
    """Cofactor-expansion determinant over GF(2^8) (small matrices only)."""
    n = len(m)
    if n == 1:
        return m[0][0]
    det = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        det ^= oracle_mul(m[0][j], oracle_det(minor))  # char 2: no sign terms
    return det


def random_generation(rng, f, payload_len=12):
    return Generation(
        tuple(rng.integers(0, 256, payload_len, dtype=np.uint8).tobytes() for _ in range(f))
    )


def test_generation_validation():
    with pytest.raises(ValueError):
        Generation(())
    with pytest.raises(ValueError):
        Generation((b"",))
    with pytest.raises(ValueError):
        Generation((b"abc", b"ab"))
    gen = Generation((b"abc", b"def"))
    assert gen.f == 2 and gen.payload_len == 3


def test_encode_is_deterministic_per_seed():
    gen = Generation((b"hello world!", b"more payload", b"third packet"))
    p1 = encode(gen, np.random.default_rng(99))
    p2 = encode(gen, np.random.default_rng(99))
    assert p1 == p2
    assert p1 != encode(gen, np.random.default_rng(100))


def test_encode_zero_sources_gives_zero_payload():
    gen = Generation((bytes(8), bytes(8), bytes(8)))
    pkt = encode(gen, np.random.default_rng(1))
    assert pkt.payload == bytes(8)


def test_single_packet_combination_is_scalar_product():
    rng = np.random.default_rng(3)
    payload = rng.integers(0, 256, 10, dtype=np.uint8)
    gen = Generation((payload.tobytes(),))
    pkt = encode(gen, np.random.default_rng(17))
    c = pkt.coeffs[0]
    want = bytes(oracle_mul(c, b) for b in payload)
    assert pkt.payload == want


def test_combine_rejects_wrong_coeff_count():
    gen = Generation((b"ab", b"cd"))
    with pytest.raises(ValueError, match="coefficients"):
        combine(gen, b"\x01")


def test_absorb_unit_vectors_reaches_full_rank():
    f = 5
    rng = np.random.default_rng(0)
    gen = random_generation(rng, f)
    state = DecoderState(f, gen.payload_len)
    for i in range(f):
        coeffs = bytes(1 if j == i else 0 for j in range(f))
        assert state.absorb(CodedPacket(coeffs, gen.payloads[i]))
        assert state.rank == i + 1
    assert state.decode() == list(gen.payloads)


def test_absorb_duplicate_does_not_increase_rank():
    rng = np.random.default_rng(8)
    gen = random_generation(rng, 3)
    state = DecoderState(3, gen.payload_len)
    pkt = encode(gen, rng)
    assert state.absorb(pkt)
    assert not state.absorb(pkt)
    assert state.rank == 1


def test_absorb_rejects_mismatched_lengths():
    state = DecoderState(3, 4)
    with pytest.raises(ValueError, match="coefficient length"):
        state.absorb(CodedPacket(b"\x01\x02", b"\x00" * 4))
    with pytest.raises(ValueError, match="payload length"):
        state.absorb(CodedPacket(b"\x01\x02\x03", b"\x00" * 5))


def test_rank_is_monotone_and_bounded():
    rng = np.random.default_rng(21)
    gen = random_generation(rng, 4)
    state = DecoderState(4, gen.payload_len)
    last = 0
    for _ in range(20):
        state.absorb(encode(gen, rng))
        assert state.rank >= last
        assert state.rank <= 4
        last = state.rank
    assert state.rank == 4


@pytest.mark.parametrize("f", [2, 3, 4])
def test_full_rank_coefficients_give_rank_f(f):
    # any matrix the brute-force determinant calls nonsingular must fill the decoder
    rng = np.random.default_rng(f)
    found = 0
    while found < 5:
        m = rng.integers(0, 256, (f, f), dtype=np.uint8)
        if oracle_det([[int(v) for v in row] for row in m]) == 0:
            continue
        found += 1
        gen = random_generation(rng, f)
        state = DecoderState(f, gen.payload_len)
        for row in m:
            state.absorb(CodedPacket(row.tobytes(), combine(gen, row.tobytes())))
        assert state.rank == f
        assert state.decode() == list(gen.payloads)


def test_singular_coefficients_stay_below_full_rank():
    rng = np.random.default_rng(33)
    gen = random_generation(rng, 3)
    r1 = rng.integers(0, 256, 3, dtype=np.uint8)
    r2 = rng.integers(0, 256, 3, dtype=np.uint8)
    rows = [r1, r2, r1 ^ r2]  # third row is dependent by construction
    assert oracle_det([[int(v) for v in row] for row in rows]) == 0
    state = DecoderState(3, gen.payload_len)
    for row in rows:
        state.absorb(CodedPacket(row.tobytes(), combine(gen, row.tobytes())))
    assert state.rank == 2


@pytest.mark.parametrize("f", list(range(1, 9)))
def test_roundtrip_up_to_f8(f):
    rng = np.random.default_rng(100 + f)
    gen = random_generation(rng, f)
    state = DecoderState(f, gen.payload_len)
    for _ in range(50):
        state.absorb(encode(gen, rng))
        if state.rank == f:
            break
    assert state.rank == f
    assert state.decode() == list(gen.payloads)


def test_decode_below_rank_reports_rank():
    rng = np.random.default_rng(55)
    gen = random_generation(rng, 3)
    state = DecoderState(3, gen.payload_len)
    state.absorb(encode(gen, rng))
    state.absorb(encode(gen, rng))
    assert state.rank == 2
    with pytest.raises(InsufficientRankError) as err:
        state.decode()
    assert err.value.rank == 2
    assert "insufficient degrees of freedom" in str(err.value)


def test_f1_decode_inverts_the_coefficient():
    rng = np.random.default_rng(60)
    payload = rng.integers(1, 256, 6, dtype=np.uint8)
    gen = Generation((payload.tobytes(),))
    pkt = encode(gen, np.random.default_rng(61))
    assert pkt.coeffs[0] != 0
    state = DecoderState(1, 6)
    state.absorb(pkt)
    assert state.decode() == [payload.tobytes()]


def test_dump_shows_rank_and_hex_rows():
    gen = Generation((b"\xde\xad", b"\xbe\xef"))
    state = DecoderState(2, 2)
    state.absorb(CodedPacket(b"\x01\x00", b"\xde\xad"))
    text = state.dump()
    assert "rank=1/2" in text
    assert "pivot 0" in text
    assert "de ad" in text


def test_decode_batch_matches_scalar_path():
    rng = np.random.default_rng(77)
    for _ in range(250):
        f = int(rng.integers(1, 5))
        tau = int(rng.integers(1, 7))
        L = int(rng.integers(1, 5))
        coeffs = rng.integers(0, 256, (1, tau, f), dtype=np.uint8)
        payloads = rng.integers(0, 256, (1, f, L), dtype=np.uint8)
        arrivals = rng.random((1, tau)) < 0.7
        success, rank = decode_batch(coeffs, payloads, arrivals)
        gen = Generation(tuple(payloads[0, k].tobytes() for k in range(f)))
        state = DecoderState(f, L)
        for j in range(tau):
            if arrivals[0, j]:
                c = coeffs[0, j].tobytes()
                state.absorb(CodedPacket(c, combine(gen, c)))
        assert state.rank == rank[0]
        scalar_ok = state.rank == f and state.decode() == list(gen.payloads)
        assert scalar_ok == bool(success[0])


def test_decode_batch_ignores_lost_packets():
    rng = np.random.default_rng(13)
    coeffs = rng.integers(0, 256, (400, 5, 3), dtype=np.uint8)
    payloads = rng.integers(0, 256, (400, 3, 4), dtype=np.uint8)
    nothing = np.zeros((400, 5), dtype=bool)
    success, rank = decode_batch(coeffs, payloads, nothing)
    assert not success.any()
    assert (rank == 0).all()


def test_decode_batch_tau_below_f_never_succeeds():
    rng = np.random.default_rng(14)
    coeffs = rng.integers(0, 256, (500, 2, 3), dtype=np.uint8)
    payloads = rng.integers(0, 256, (500, 3, 4), dtype=np.uint8)
    everything = np.ones((500, 2), dtype=bool)
    success, rank = decode_batch(coeffs, payloads, everything)
    assert not success.any()
    assert (rank <= 2).all()


def test_batch_rank_matches_scalar_rank():
    rng = np.random.default_rng(15)
    mats = rng.integers(0, 256, (100, 4, 3), dtype=np.uint8)
    ranks = batch_rank(mats)
    for i in range(100):
        state = DecoderState(3, 1)
        for row in mats[i]:
            state.absorb(CodedPacket(row.tobytes(), b"\x00"))
        assert state.rank == ranks[i]
