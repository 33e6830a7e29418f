"""
Closed-form handover costs and the ledger of simulated costs.

Signalling costs are in Bytes*Hops per handover, delivery costs in
Bytes*Hops per second of traffic at rate ``R`` packets/s.
"""

from __future__ import annotations

import csv
import math
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .messages import ICN, PFMIPV6, MESSAGE_SIZES, MessageCatalog
from .rlc import CodingStats

__all__ = [
    "HopProfile",
    "CostLedger",
    "HandoverRecord",
    "ReconciliationError",
    "ReconciliationReport",
    "pfmip_signalling_cost",
    "pfmip_delivery_cost",
    "pfmip_path_cost",
    "icn_signalling_cost",
    "icn_delivery_cost",
    "icn_path_cost",
    "reconcile",
]


@dataclass(frozen=True)
class HopProfile:
    """
    Hop counts of one handover.

    PFMIPv6: ``h_pm`` pMAG-LMA, ``h_nm`` nMAG-LMA, ``h_pn`` pMAG-nMAG,
    ``h_cm`` CN-LMA, ``h_mp`` LMA-pMAG.  ICN: ``h_ab`` previous NAP to the
    CN's NAP, ``h_cb`` new NAP to the CN's NAP, ``h_bj`` CN's NAP to the
    multicast fan-out node and ``h_jn`` fan-out node to each prepared NAP.
    """

    h_pm: int = 0
    h_nm: int = 0
    h_pn: int = 0
    h_cm: int = 0
    h_mp: int = 0
    h_ab: int = 0
    h_cb: int = 0
    h_bj: int = 0
    h_jn: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "h_jn", tuple(int(h) for h in self.h_jn))
        vals = [self.h_pm, self.h_nm, self.h_pn, self.h_cm, self.h_mp,
                self.h_ab, self.h_cb, self.h_bj, *self.h_jn]
        if any(v < 0 for v in vals):
            raise ValueError("hop counts must be non-negative")


def pfmip_signalling_cost(hp: HopProfile, cat: MessageCatalog = MESSAGE_SIZES, P: float = 0.0) -> float:
    if not 0 <= P <= 1:
        raise ValueError("P must lie in [0, 1]")
    return (1 + P) * (cat.PB * (hp.h_pm + hp.h_nm) + hp.h_pn * (cat.H_r + cat.H_a))


def pfmip_path_cost(hp: HopProfile, cat: MessageCatalog = MESSAGE_SIZES) -> float:
    """Bytes*Hops of one tunnelled packet CN -> LMA -> pMAG -> nMAG."""
    return (hp.h_cm + hp.h_mp + hp.h_pn) * (cat.phi + cat.zeta)


def pfmip_delivery_cost(hp: HopProfile, cat: MessageCatalog = MESSAGE_SIZES, P: float = 0.0,
                        R: float = 1.0) -> float:
    if R < 0:
        raise ValueError("R must be non-negative")
    if not 0 <= P <= 1:
        raise ValueError("P must lie in [0, 1]")
    return (1 + P) * R * pfmip_path_cost(hp, cat)


def icn_signalling_cost(hp: HopProfile, cat: MessageCatalog = MESSAGE_SIZES) -> float:
    return hp.h_ab * cat.l_s + hp.h_cb * cat.l_i + hp.h_bj * cat.l_u + sum(hp.h_jn) * cat.l_u


def icn_path_cost(hp: HopProfile, cat: MessageCatalog = MESSAGE_SIZES) -> float:
    """Bytes*Hops of one coded packet over a single fan-out tree."""
    return (hp.h_bj + sum(hp.h_jn)) * (cat.phi_icn + cat.zeta)


def icn_delivery_cost(hp: HopProfile, cat: MessageCatalog = MESSAGE_SIZES, R: float = 1.0,
                      stats: CodingStats | float = 0.0) -> float:
    eps = stats.epsilon if isinstance(stats, CodingStats) else float(stats)
    if eps < 0:
        raise ValueError("coding overhead must be non-negative")
    if R < 0:
        raise ValueError("R must be non-negative")
    return R * (1 + eps) * icn_path_cost(hp, cat)


# --------------------------------------------------------------------------
# ledger


@dataclass
class CostLedger:
    """Append-only accumulators per scheme, bucketed per whole second."""

    signalling: dict = field(default_factory=lambda: defaultdict(float))
    delivery: dict = field(default_factory=lambda: defaultdict(float))
    buckets: dict = field(default_factory=lambda: defaultdict(lambda: [0.0, 0.0]))

    def add_signalling(self, scheme: str, t: float, bytes_hops: float) -> None:
        if bytes_hops < 0:
            raise ValueError("cost increments must be non-negative")
        self.signalling[scheme] += bytes_hops
        self.buckets[(scheme, int(math.floor(t)))][0] += bytes_hops

    def add_delivery(self, scheme: str, t: float, bytes_hops: float) -> None:
        if bytes_hops < 0:
            raise ValueError("cost increments must be non-negative")
        self.delivery[scheme] += bytes_hops
        self.buckets[(scheme, int(math.floor(t)))][1] += bytes_hops

    def total(self, scheme: str) -> float:
        return self.signalling[scheme] + self.delivery[scheme]

    def series(self, schemes: Sequence[str] | None = None,
               duration: float | None = None) -> list[tuple[int, str, float, float]]:
        """Rows ``(t, scheme, signalling, delivery)``; empty seconds included."""
        schemes = sorted({s for s, _ in self.buckets}) if schemes is None else list(schemes)
        if not self.buckets and duration is None:
            return []
        last = max((t for _, t in self.buckets), default=0)
        if duration is not None:
            last = max(last, int(math.ceil(duration)) - 1)
        rows = []
        for t in range(0, last + 1):
            for s in schemes:
                sig, dl = self.buckets.get((s, t), (0.0, 0.0))
                rows.append((t, s, sig, dl))
        return rows

    def write_csv(self, path: str | Path, schemes: Sequence[str] | None = None,
                  duration: float | None = None) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "scheme", "signalling_bh", "delivery_bh"])
            for t, s, sig, dl in self.series(schemes, duration):
                w.writerow([t, s, f"{sig:.6f}", f"{dl:.6f}"])


@dataclass
class HandoverRecord:
    """
    Event-counted costs of one handover next to what the formulas need.

    ``failure_weight`` is 1 for a handover whose failure draw came up, 0
    otherwise, or ``P`` itself when the run charges failures by expectation.
    ``window`` is the time the scheme's handover data path was active and
    ``packets`` the source packets generated during it.
    """

    scheme: str
    mn_id: int
    index: int
    source: int
    target: int
    t_prepare: float
    t_link_down: float
    t_link_up: float
    profile: HopProfile
    signalling_bh: float = 0.0
    delivery_bh: float = 0.0
    packets: float = 0.0
    window: float = 0.0
    per_packet_bh: float = 0.0
    tree_edges: int = 0
    single_fanout: bool = True
    failure_weight: float = 0.0
    landing_prepared: bool = True

    def as_row(self) -> dict:
        hp = self.profile
        return {
            "scheme": self.scheme, "mn_id": self.mn_id, "index": self.index,
            "source": self.source, "target": self.target,
            "t_prepare": self.t_prepare, "t_link_down": self.t_link_down, "t_link_up": self.t_link_up,
            "h_pm": hp.h_pm, "h_nm": hp.h_nm, "h_pn": hp.h_pn, "h_cm": hp.h_cm, "h_mp": hp.h_mp,
            "h_ab": hp.h_ab, "h_cb": hp.h_cb, "h_bj": hp.h_bj, "h_jn": " ".join(map(str, hp.h_jn)),
            "tree_edges": self.tree_edges, "failure_weight": self.failure_weight,
            "signalling_bh": self.signalling_bh, "delivery_bh": self.delivery_bh,
            "packets": self.packets, "window": self.window, "per_packet_bh": self.per_packet_bh,
        }


class ReconciliationError(AssertionError):
    def __init__(self, report: "ReconciliationReport"):
        super().__init__(report.to_text())
        self.report = report


@dataclass
class ReconciliationReport:
    checks: list = field(default_factory=list)
    offending: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c[3] for c in self.checks) and not self.offending

    def add(self, name: str, expected: float, observed: float, ok: bool) -> None:
        self.checks.append((name, expected, observed, bool(ok)))

    def to_text(self) -> str:
        lines = [f"reconciliation: {'OK' if self.ok else 'FAILED'}"]
        for name, exp, obs, ok in self.checks:
            lines.append(f"  [{'ok' if ok else 'MISMATCH'}] {name}: expected {exp:.6g}, observed {obs:.6g}")
        for rec, why in self.offending:
            lines.append(f"  offending handover {rec.scheme} mn={rec.mn_id} #{rec.index} "
                         f"t={rec.t_prepare:.3f}: {why}")
        return "\n".join(lines)


def _close(a: float, b: float, rel: float = 1e-9) -> bool:
    return math.isclose(a, b, rel_tol=rel, abs_tol=1e-9)


def reconcile(records: Iterable[HandoverRecord], cat: MessageCatalog = MESSAGE_SIZES, P: float = 0.0,
              R: float | None = None, epsilon: float = 0.0, tol: float = 0.02,
              strict: bool = True, min_stochastic: int = 30) -> ReconciliationReport:
    """
    Compare event-counted handover costs against the closed forms.

    Per handover, the deterministic parts must agree exactly: signalling
    given the failure outcome, ICN signalling on single fan-out trees (and
    its per-edge generalisation elsewhere), and per-packet path costs.
    Aggregated over at least ``min_stochastic`` handovers, the mean
    PFMIPv6 signalling must approach its ``(1 + P)`` expectation and,
    when ``R`` is given, delivered Bytes*Hops must approach rate times
    per-packet cost times window, all within relative ``tol``.
    """
    records = list(records)
    rep = ReconciliationReport()
    pf = [r for r in records if r.scheme == PFMIPV6]
    icn = [r for r in records if r.scheme == ICN]

    for r in pf:
        base = pfmip_signalling_cost(r.profile, cat, 0.0)
        exp = base * (1 + r.failure_weight)
        if not _close(r.signalling_bh, exp):
            rep.offending.append((r, f"signalling {r.signalling_bh:.6g} != {exp:.6g}"))
        pkt = pfmip_path_cost(r.profile, cat) * (1 + r.failure_weight)
        if not _close(r.per_packet_bh, pkt):
            rep.offending.append((r, f"per-packet cost {r.per_packet_bh:.6g} != {pkt:.6g}"))
    for r in icn:
        if r.single_fanout:
            exp = icn_signalling_cost(r.profile, cat)
        else:
            hp = r.profile
            exp = hp.h_ab * cat.l_s + hp.h_cb * cat.l_i + r.tree_edges * cat.l_u
        if not _close(r.signalling_bh, exp):
            rep.offending.append((r, f"signalling {r.signalling_bh:.6g} != {exp:.6g}"))
        pkt = r.tree_edges * cat.icn_packet
        if r.single_fanout and not _close(pkt, icn_path_cost(r.profile, cat)):
            rep.offending.append((r, "tree edge count disagrees with h_bj + sum(h_jn)"))
        if not _close(r.per_packet_bh, pkt):
            rep.offending.append((r, f"per-packet cost {r.per_packet_bh:.6g} != {pkt:.6g}"))
        if not r.landing_prepared:
            rep.offending.append((r, "landing NAP was not in the prepared multicast group"))

    rep.add("per-handover deterministic costs", len(records), len(records) - len(rep.offending),
            not rep.offending)

    if len(pf) >= min_stochastic:
        base = sum(pfmip_signalling_cost(r.profile, cat, 0.0) for r in pf)
        obs = sum(r.signalling_bh for r in pf)
        rep.add(f"PFMIPv6 mean signalling / (1+P) expectation (P={P:g})", (1 + P) * base / len(pf),
                obs / len(pf), abs(obs / ((1 + P) * base) - 1) <= tol if base else obs == 0)
    if R is not None:
        for name, group, factor in ((PFMIPV6, pf, None), (ICN, icn, 1 + epsilon)):
            if len(group) < min_stochastic:
                continue
            exp = 0.0
            for r in group:
                pkt = r.per_packet_bh
                if factor is None:
                    exp += R * r.window * pkt
                else:
                    exp += R * factor * r.window * pkt
            obs = sum(r.delivery_bh for r in group)
            rep.add(f"{name} handover delivery vs rate x path x window", exp, obs,
                    abs(obs / exp - 1) <= tol if exp else obs == 0)
    if strict and not rep.ok:
        raise ReconciliationError(rep)
    return rep
