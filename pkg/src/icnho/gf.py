"""
GF(2^m) arithmetic for m <= 8.

Elements are plain integers in ``[0, 2^m)``; bit ``i`` is the coefficient of
``x^i``.  Multiplication goes through log/antilog tables built once per
:class:`FieldSpec`, and full ``q x q`` product / inverse tables are kept as
numpy arrays for the vectorised paths in :mod:`icnho.rlc`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["FieldSpec", "GF16", "gf_add", "gf_mul", "gf_inv", "poly_mod", "is_irreducible"]

_DEFAULT_POLY = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,  # x^4 + x + 1
    5: 0b100101,
    6: 0b1000011,
    7: 0b10000011,
    8: 0b100011101,
}


def _degree(p: int) -> int:
    return p.bit_length() - 1


def poly_mod(a: int, b: int) -> int:
    """Remainder of carry-less polynomial division ``a mod b`` over GF(2)."""
    db = _degree(b)
    while a and _degree(a) >= db:
        a ^= b << (_degree(a) - db)
    return a


def is_irreducible(poly: int) -> bool:
    """Exhaustive factor check; fine for degrees up to 8."""
    m = _degree(poly)
    if m < 1:
        return False
    for d in range(1, m // 2 + 1):
        for cand in range(1 << d, 1 << (d + 1)):
            if poly_mod(poly, cand) == 0:
                return False
    return True


def _clmul_reduce(a: int, b: int, poly: int, m: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a >> m:
            a ^= poly
    return r


@dataclass(frozen=True)
class FieldSpec:
    """
    Parameters of GF(2^m).

    Parameters
    ----------
    m : int
        Bit width, ``1 <= m <= 8``.
    reduction_poly : int or None
        Irreducible polynomial of degree ``m`` including the ``x^m`` bit.
        Defaults to a conventional choice (``0x13`` for ``m = 4``).
    """

    m: int = 4
    reduction_poly: int | None = None
    exp: np.ndarray = field(init=False, repr=False, compare=False)
    log: np.ndarray = field(init=False, repr=False, compare=False)
    mul_table: np.ndarray = field(init=False, repr=False, compare=False)
    inv_table: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 1 <= self.m <= 8:
            raise ValueError(f"m must be in [1, 8], got {self.m}")
        poly = _DEFAULT_POLY[self.m] if self.reduction_poly is None else self.reduction_poly
        if _degree(poly) != self.m:
            raise ValueError(f"reduction polynomial 0x{poly:x} does not have degree {self.m}")
        if not is_irreducible(poly):
            raise ValueError(f"reduction polynomial 0x{poly:x} is reducible")
        object.__setattr__(self, "reduction_poly", poly)

        q = 1 << self.m
        # Find a generator of the multiplicative group; x is not always primitive.
        for g in range(2, q) if q > 2 else [1]:
            exp = np.zeros(2 * q, dtype=np.int64)
            x = 1
            seen = set()
            for i in range(q - 1):
                exp[i] = x
                seen.add(x)
                x = _clmul_reduce(x, g, poly, self.m)
            if len(seen) == q - 1:
                break
        exp[q - 1 : 2 * (q - 1)] = exp[: q - 1]
        log = np.zeros(q, dtype=np.int64)
        log[exp[: q - 1]] = np.arange(q - 1)

        mul = exp[(log[:, None] + log[None, :]) % (q - 1)]
        mul[0, :] = 0
        mul[:, 0] = 0
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = exp[(q - 1 - log[1:]) % (q - 1)]

        for name, arr in (("exp", exp), ("log", log), ("mul_table", mul.astype(np.uint8)),
                          ("inv_table", inv.astype(np.uint8))):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def q(self) -> int:
        return 1 << self.m

    def check(self, a: int) -> int:
        a = int(a)
        if not 0 <= a < self.q:
            raise ValueError(f"{a} is not an element of GF(2^{self.m})")
        return a

    def add(self, a: int, b: int) -> int:
        return self.check(a) ^ self.check(b)

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[self.check(a), self.check(b)])

    def inv(self, a: int) -> int:
        if self.check(a) == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        return int(self.inv_table[a])


GF16 = FieldSpec(4)


def gf_add(a: int, b: int, field: FieldSpec = GF16) -> int:
    return field.add(a, b)


def gf_mul(a: int, b: int, field: FieldSpec = GF16) -> int:
    return field.mul(a, b)


def gf_inv(a: int, field: FieldSpec = GF16) -> int:
    return field.inv(a)
