"""
Random linear coding over GF(2^m) with seed-compressed coefficient headers.

A coded packet carries only the 16-bit seed of the generator that produced
its coefficient vector; the receiver regenerates the vector from the seed.
Payload bytes are split into ``8 // m`` symbols each (two nibbles for
GF(16)) so packets stay whole bytes.

The analytic half of the module gives the probability that ``k`` received
packets contain a full-rank set and the expected number of transmissions
until that happens.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field as dfield
from typing import Iterable

import numpy as np

from .gf import GF16, FieldSpec

__all__ = [
    "XorShift32",
    "SourceBlock",
    "CodedPacket",
    "DecoderState",
    "CodingStats",
    "coefficients",
    "encode",
    "ingest",
    "try_decode",
    "decode_probability",
    "decode_failure_probability",
    "expected_transmissions",
]

SEED_BYTES = 2
_MASK32 = 0xFFFFFFFF
_SEED_SALT = 0x9E3779B9
_OUT_MULT = 0x2545F491
_WARMUP = 4


def _fmix32(x: int) -> int:
    """Murmur3 finaliser: a bijective, non-linear scramble of 32 bits."""
    x &= _MASK32
    x ^= x >> 16
    x = (x * 0x85EBCA6B) & _MASK32
    x ^= x >> 13
    x = (x * 0xC2B2AE35) & _MASK32
    x ^= x >> 16
    return x


class XorShift32:
    """
    Xorshift32 with the (13, 17, 5) shift triple and a multiplicative output.

    Plain xorshift is linear over GF(2), so coefficient vectors derived
    linearly from a 16-bit seed would all lie in a space of dimension 17
    at most and large blocks could never reach full rank.  The seed is
    therefore scrambled non-linearly into the state, and each output is
    the state times an odd constant (the xorshift* construction) whose
    high bits are used as symbols.  The first four outputs are discarded.
    """

    __slots__ = ("state",)

    def __init__(self, seed: int):
        if not 0 <= seed <= 0xFFFF:
            raise ValueError(f"seed must fit in 16 bits, got {seed}")
        self.state = _fmix32(seed ^ _SEED_SALT) or _SEED_SALT
        for _ in range(_WARMUP):
            self.next()

    def next(self) -> int:
        x = self.state
        x ^= (x << 13) & _MASK32
        x ^= x >> 17
        x ^= (x << 5) & _MASK32
        self.state = x
        return (x * _OUT_MULT) & _MASK32

    def symbols(self, n: int, m: int) -> np.ndarray:
        """``n`` uniform symbols in ``[0, 2^m)``, taken from the high bits."""
        return np.array([self.next() >> (32 - m) for _ in range(n)], dtype=np.uint8)


def coefficients(seed: int, n_src: int, field: FieldSpec = GF16) -> np.ndarray:
    """Coefficient vector implied by a packet header."""
    return XorShift32(seed).symbols(n_src, field.m)


def _symbols_per_byte(field: FieldSpec) -> int:
    if 8 % field.m:
        raise ValueError(f"payload packing needs m to divide 8, got m={field.m}")
    return 8 // field.m


def to_symbols(buf: np.ndarray, field: FieldSpec = GF16) -> np.ndarray:
    """Split bytes (last axis) into field symbols, most significant first."""
    k = _symbols_per_byte(field)
    buf = np.asarray(buf, dtype=np.uint8)
    if k == 1:
        return buf.copy()
    shifts = np.arange(k - 1, -1, -1, dtype=np.uint8) * field.m
    mask = np.uint8((1 << field.m) - 1)
    sym = (buf[..., None] >> shifts) & mask
    return sym.reshape(*buf.shape[:-1], buf.shape[-1] * k)


def from_symbols(sym: np.ndarray, field: FieldSpec = GF16) -> np.ndarray:
    k = _symbols_per_byte(field)
    sym = np.asarray(sym, dtype=np.uint8)
    if k == 1:
        return sym.copy()
    sym = sym.reshape(*sym.shape[:-1], sym.shape[-1] // k, k)
    shifts = np.arange(k - 1, -1, -1, dtype=np.uint8) * field.m
    return np.bitwise_or.reduce(sym << shifts, axis=-1).astype(np.uint8)


@dataclass(frozen=True)
class SourceBlock:
    """``n_src`` equally sized source packets of ``zeta`` bytes."""

    packets: tuple[bytes, ...]

    def __post_init__(self):
        pkts = tuple(bytes(p) for p in self.packets)
        if not pkts:
            raise ValueError("a source block needs at least one packet")
        sizes = {len(p) for p in pkts}
        if len(sizes) != 1 or 0 in sizes:
            raise ValueError(f"source packets must share one positive length, got {sorted(sizes)}")
        object.__setattr__(self, "packets", pkts)

    @property
    def n_src(self) -> int:
        return len(self.packets)

    @property
    def zeta(self) -> int:
        return len(self.packets[0])

    def as_array(self) -> np.ndarray:
        return np.frombuffer(b"".join(self.packets), dtype=np.uint8).reshape(self.n_src, self.zeta)

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "SourceBlock":
        arr = np.asarray(arr, dtype=np.uint8)
        return cls(tuple(row.tobytes() for row in arr))


@dataclass(frozen=True)
class CodedPacket:
    seed: int
    payload: bytes

    def __post_init__(self):
        if not 0 <= self.seed <= 0xFFFF:
            raise ValueError(f"seed must fit in 16 bits, got {self.seed}")

    def to_bytes(self) -> bytes:
        """Wire layout: 2-byte big-endian seed, then the payload."""
        return struct.pack(">H", self.seed) + bytes(self.payload)

    @classmethod
    def from_bytes(cls, data: bytes) -> "CodedPacket":
        if len(data) <= SEED_BYTES:
            raise ValueError("coded packet shorter than its header")
        (seed,) = struct.unpack(">H", data[:SEED_BYTES])
        return cls(seed, bytes(data[SEED_BYTES:]))


def combine(coeffs: np.ndarray, symbols: np.ndarray, field: FieldSpec = GF16) -> np.ndarray:
    """Sum of ``coeffs[i] * symbols[i]`` over the field, row-wise."""
    prods = field.mul_table[np.asarray(coeffs, dtype=np.uint8)[:, None], symbols]
    return np.bitwise_xor.reduce(prods, axis=0)


def encode(block: SourceBlock, seed: int, field: FieldSpec = GF16) -> CodedPacket:
    c = coefficients(seed, block.n_src, field)
    sym = to_symbols(block.as_array(), field)
    out = combine(c, sym, field)
    return CodedPacket(seed, from_symbols(out, field).tobytes())


@dataclass
class DecoderState:
    """
    Incremental Gaussian elimination kept in reduced row-echelon form.

    Rows ``[:rank]`` of ``basis`` are the received coefficient vectors after
    reduction, each with a leading 1 in column ``pivots[i]`` and zeros in
    every other pivot column; ``partials`` holds the matching payloads.
    """

    n_src: int
    zeta: int
    field: FieldSpec = GF16
    rank: int = 0
    basis: np.ndarray = dfield(init=False, repr=False)
    partials: np.ndarray = dfield(init=False, repr=False)
    pivots: list[int] = dfield(default_factory=list)

    def __post_init__(self):
        if self.n_src < 1 or self.zeta < 1:
            raise ValueError("n_src and zeta must be positive")
        n_sym = self.zeta * _symbols_per_byte(self.field)
        self.basis = np.zeros((self.n_src, self.n_src), dtype=np.uint8)
        self.partials = np.zeros((self.n_src, n_sym), dtype=np.uint8)

    @property
    def complete(self) -> bool:
        return self.rank == self.n_src

    def add_row(self, coeffs: np.ndarray, symbols: np.ndarray) -> bool:
        mul = self.field.mul_table
        c = np.array(coeffs, dtype=np.uint8)
        p = np.array(symbols, dtype=np.uint8)
        r = self.rank
        if r:
            f = c[self.pivots]
            nz = np.flatnonzero(f)
            if nz.size:
                c ^= np.bitwise_xor.reduce(mul[f[nz, None], self.basis[nz]], axis=0)
                p ^= np.bitwise_xor.reduce(mul[f[nz, None], self.partials[nz]], axis=0)
        lead = np.flatnonzero(c)
        if lead.size == 0:
            return False
        j = int(lead[0])
        inv = self.field.inv_table[c[j]]
        c = mul[inv, c]
        p = mul[inv, p]
        if r:
            f = self.basis[:r, j].copy()
            nz = np.flatnonzero(f)
            if nz.size:
                self.basis[nz] ^= mul[f[nz, None], c[None, :]]
                self.partials[nz] ^= mul[f[nz, None], p[None, :]]
        self.basis[r] = c
        self.partials[r] = p
        self.pivots.append(j)
        self.rank = r + 1
        return True


def ingest(state: DecoderState, pkt: CodedPacket, field: FieldSpec | None = None) -> bool:
    """Feed one coded packet; returns whether it raised the rank."""
    field = state.field if field is None else field
    if field != state.field:
        raise ValueError("packet field does not match decoder field")
    if len(pkt.payload) != state.zeta:
        raise ValueError(f"payload length {len(pkt.payload)} != block packet size {state.zeta}")
    if state.complete:
        return False
    c = coefficients(pkt.seed, state.n_src, field)
    p = to_symbols(np.frombuffer(pkt.payload, dtype=np.uint8), field)
    return state.add_row(c, p)


def try_decode(state: DecoderState) -> SourceBlock | None:
    """Recovered block once rank is full, else ``None``; never mutates ``state``."""
    if not state.complete:
        return None
    order = np.argsort(state.pivots)
    sym = state.partials[order]
    return SourceBlock.from_array(from_symbols(sym, state.field))


def decode_all(packets: Iterable[CodedPacket], n_src: int, zeta: int,
               field: FieldSpec = GF16) -> SourceBlock | None:
    state = DecoderState(n_src, zeta, field)
    for pkt in packets:
        ingest(state, pkt)
        if state.complete:
            break
    return try_decode(state)


def decode_probability(k: int, n_src: int, q: float) -> float:
    """Probability that ``k`` uniformly random coded packets span ``n_src`` dimensions."""
    if q < 2 or n_src < 1 or k < 0:
        raise ValueError("need q >= 2, n_src >= 1, k >= 0")
    if k < n_src:
        return 0.0
    return math.exp(_log_decode_probability(k, n_src, q))


def _log_decode_probability(k: int, n_src: int, q: float) -> float:
    return sum(math.log1p(-(q ** -(k - j))) for j in range(n_src))


def decode_failure_probability(k: int, n_src: int, q: float) -> float:
    """``1 - decode_probability`` computed without cancellation for large ``k``."""
    if k < n_src:
        return 1.0
    return -math.expm1(_log_decode_probability(k, n_src, q))


@dataclass(frozen=True)
class CodingStats:
    n_src: int
    q: float
    k_expected: float
    epsilon: float


def expected_transmissions(n_src: int, q: float = 16, tail_tol: float = 1e-12) -> CodingStats:
    """
    Expected number of coded packets until the receiver reaches full rank.

    Uses the tail-sum form ``E[K] = n_src + sum_{k >= n_src} (1 - Pd(k))``.
    The sum stops once the bound ``q^-(k-n_src+1) / (1-1/q)^2`` on the
    remaining tail drops below ``tail_tol``.
    """
    if not 0 < tail_tol < 1:
        raise ValueError("tail_tol must lie in (0, 1)")
    if q < 2 or n_src < 1:
        raise ValueError("need q >= 2 and n_src >= 1")
    if math.isinf(q):
        return CodingStats(n_src, q, float(n_src), 0.0)
    scale = 1.0 / (1.0 - 1.0 / q) ** 2
    total = float(n_src)
    k = n_src
    while q ** -(k - n_src + 1) * scale >= tail_tol:
        total += decode_failure_probability(k, n_src, q)
        k += 1
    return CodingStats(n_src, q, total, total / n_src - 1.0)
