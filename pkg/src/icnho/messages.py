"""Mobility message sizes in bytes."""

from __future__ import annotations

from dataclasses import asdict, dataclass

__all__ = ["MessageCatalog", "MESSAGE_SIZES", "PFMIPV6", "ICN", "PFMIP_KINDS", "ICN_KINDS"]

PFMIPV6 = "pfmipv6"
ICN = "icn"

PFMIP_KINDS = ("PBU", "PBA", "H_r", "H_a")
ICN_KINDS = ("l_s", "l_u", "l_i")


@dataclass(frozen=True)
class MessageCatalog:
    """
    Sizes of every signalling message and packet header.

    ``phi`` is the PMIPv6 tunnelling header, ``phi_icn`` the ICN payload
    header (both carried on every data packet), ``zeta`` the mean payload.
    The ICN message sizes assume 256-bit FIDs and scope identifiers.
    """

    PBU: int = 76
    PBA: int = 76
    H_r: int = 104
    H_a: int = 168
    phi: int = 40
    zeta: int = 1024
    l_u: int = 102
    l_s: int = 102
    l_i: int = 166
    phi_icn: int = 96

    def __post_init__(self):
        bad = {k: v for k, v in asdict(self).items() if v <= 0}
        if bad:
            raise ValueError(f"message sizes must be positive: {bad}")

    @property
    def PB(self) -> int:
        return self.PBU + self.PBA

    @property
    def H(self) -> int:
        return self.H_r + self.H_a

    def size(self, kind: str) -> int:
        if kind not in PFMIP_KINDS + ICN_KINDS:
            raise KeyError(f"unknown message kind {kind!r}")
        return getattr(self, kind)

    def scheme_of(self, kind: str) -> str:
        if kind in PFMIP_KINDS:
            return PFMIPV6
        if kind in ICN_KINDS:
            return ICN
        raise KeyError(f"unknown message kind {kind!r}")

    @property
    def tunnel_packet(self) -> int:
        return self.phi + self.zeta

    @property
    def icn_packet(self) -> int:
        return self.phi_icn + self.zeta


MESSAGE_SIZES = MessageCatalog()
