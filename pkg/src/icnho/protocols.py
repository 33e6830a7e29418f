"""
Handover state machines for PFMIPv6 and the IP-over-ICN coded multicast scheme.

Each machine consumes :class:`~icnho.mobility.TriggerEvent` objects in
prepare -> link_down -> link_up -> complete order and returns the signalling
messages it puts on the wire.  The data path in force at any moment is
exposed through :func:`per_packet_cost`, which :func:`data_plane_tick`
integrates over time.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .costs import HopProfile
from .messages import ICN, PFMIPV6, MESSAGE_SIZES, MessageCatalog
from .mobility import COMPLETE, LINK_DOWN, LINK_UP, PREPARE, TriggerEvent
from .rlc import CodingStats
from .topology import Fid, HandoverNamespace, Topology, multicast_fid, tree_edge_count

__all__ = [
    "ProtocolError",
    "UnpreparedTargetError",
    "SignalEmission",
    "PfmipState",
    "IcnHandoverState",
    "pfmip_handover",
    "pfmip_binding_complete",
    "icn_handover",
    "per_packet_cost",
    "data_plane_tick",
    "packet_rate",
]


class ProtocolError(RuntimeError):
    pass


class UnpreparedTargetError(ProtocolError):
    pass


def packet_rate(bits_per_second: float, cat: MessageCatalog = MESSAGE_SIZES) -> float:
    """Mean packet arrival rate for a bit rate carried in ``zeta``-byte payloads."""
    return bits_per_second / 8 / cat.zeta


@dataclass(frozen=True)
class SignalEmission:
    """
    One signalling message crossing ``hops`` links.

    ``weight`` is 1 for real messages; runs that charge handover failure by
    its expectation emit the re-execution set with ``weight = P``.
    """

    time: float
    scheme: str
    mn_id: int
    msg_kind: str
    size: int
    hops: int
    src: int
    dst: int | None = None
    weight: float = 1.0

    @property
    def bytes_hops(self) -> float:
        return self.size * self.hops * self.weight


# --------------------------------------------------------------------------
# PFMIPv6

PF_IDLE = "idle"
PF_INITIATED = "initiated"
PF_TUNNEL_UP = "tunnel_up"
PF_FORWARDING = "forwarding"
PF_DONE = "done"
PF_FAILED = "failed"


@dataclass
class PfmipState:
    """
    PFMIPv6 handover context of one MN.

    ``forward_from`` selects when the pMAG starts tunnelling traffic to the
    nMAG: at ``link_down`` or as soon as the tunnel is acknowledged at
    ``prepare``.  With ``expected_failures`` the failure draw is replaced by
    charging re-execution with weight ``failure_prob``.
    """

    mn_id: int
    lma: int
    cn: int
    serving: int
    failure_prob: float = 0.0
    forward_from: str = LINK_DOWN
    expected_failures: bool = False
    mode: str = "predictive"
    phase: str = PF_IDLE
    pmag: int | None = None
    nmag: int | None = None
    failed: bool = False
    attached: bool = False
    handovers: int = 0

    def __post_init__(self):
        if not 0 <= self.failure_prob <= 1:
            raise ValueError("failure probability must lie in [0, 1]")
        if self.forward_from not in (PREPARE, LINK_DOWN):
            raise ValueError("forward_from must be 'prepare' or 'link_down'")

    @property
    def failure_weight(self) -> float:
        if self.expected_failures:
            return self.failure_prob
        return 1.0 if self.failed else 0.0

    @property
    def forwarding(self) -> bool:
        if self.phase == PF_FORWARDING:
            return True
        return self.phase == PF_TUNNEL_UP and self.forward_from == PREPARE

    def profile(self, t: Topology) -> HopProfile:
        p, n, m = self.pmag, self.nmag, self.lma
        return HopProfile(h_pm=t.hops(p, m), h_nm=t.hops(n, m), h_pn=t.hops(p, n),
                          h_cm=t.hops(self.cn, m), h_mp=t.hops(m, p))


def _pfmip_set(state: PfmipState, t: Topology, time: float, cat: MessageCatalog,
               reactive: bool, weight: float) -> list[SignalEmission]:
    p, n, m = state.pmag, state.nmag, state.lma
    h_pn, h_pm, h_nm = t.hops(p, n), t.hops(p, m), t.hops(n, m)
    # reactive handovers send H_r/H_a in the opposite direction
    req_src, req_dst = (n, p) if reactive else (p, n)
    out = [
        SignalEmission(time, PFMIPV6, state.mn_id, "H_r", cat.H_r, h_pn, req_src, req_dst, weight),
        SignalEmission(time, PFMIPV6, state.mn_id, "H_a", cat.H_a, h_pn, req_dst, req_src, weight),
        SignalEmission(time, PFMIPV6, state.mn_id, "PBU", cat.PBU, h_pm, p, m, weight),
        SignalEmission(time, PFMIPV6, state.mn_id, "PBA", cat.PBA, h_pm, m, p, weight),
        SignalEmission(time, PFMIPV6, state.mn_id, "PBU", cat.PBU, h_nm, n, m, weight),
        SignalEmission(time, PFMIPV6, state.mn_id, "PBA", cat.PBA, h_nm, m, n, weight),
    ]
    return out


def pfmip_handover(state: PfmipState, trigger: TriggerEvent, t: Topology,
                   rng: np.random.Generator | None = None,
                   cat: MessageCatalog = MESSAGE_SIZES) -> list[SignalEmission]:
    """
    Advance the PFMIPv6 machine by one trigger.

    On ``prepare`` the full predictive set (H_r, H_a and the PBU/PBA pairs
    of both MAGs) is sent and the failure draw is taken.  A failed handover
    is found out at ``link_up`` and re-executed reactively, repeating the
    whole set once and re-delivering the tunnelled traffic.
    """
    kind = trigger.kind
    if kind == PREPARE:
        if state.phase not in (PF_IDLE, PF_DONE):
            raise ProtocolError(f"MN {state.mn_id}: prepare while {state.phase}")
        if trigger.source_cell != state.serving:
            raise ProtocolError(f"MN {state.mn_id}: prepare from {trigger.source_cell}, "
                                f"serving MAG is {state.serving}")
        if trigger.target_cell is None:
            raise ProtocolError("predictive PFMIPv6 needs the target cell in the prepare trigger")
        state.pmag, state.nmag = trigger.source_cell, trigger.target_cell
        state.mode = "predictive"
        state.attached = False
        state.phase = PF_INITIATED
        out = _pfmip_set(state, t, trigger.time, cat, reactive=False, weight=1.0)
        if state.expected_failures:
            state.failed = False
        else:
            if rng is None:
                raise ValueError("a generator is needed to draw handover failures")
            state.failed = bool(rng.random() < state.failure_prob)
        state.phase = PF_TUNNEL_UP
        return out
    if kind == LINK_DOWN:
        if state.phase != PF_TUNNEL_UP:
            raise ProtocolError(f"MN {state.mn_id}: link_down while {state.phase}")
        state.phase = PF_FORWARDING
        return []
    if kind == LINK_UP:
        if state.phase != PF_FORWARDING or state.attached:
            raise ProtocolError(f"MN {state.mn_id}: link_up while {state.phase}")
        if trigger.target_cell != state.nmag:
            raise ProtocolError(f"MN {state.mn_id}: attached to {trigger.target_cell}, "
                                f"tunnel was set up towards {state.nmag}")
        state.attached = True
        out = []
        if state.failed or state.expected_failures:
            weight = state.failure_prob if state.expected_failures else 1.0
            if weight > 0:
                state.mode = "reactive"
                state.phase = PF_FAILED
                out = _pfmip_set(state, t, trigger.time, cat, reactive=True, weight=weight)
                state.phase = PF_FORWARDING
        return out
    if kind == COMPLETE:
        if not state.attached:
            raise ProtocolError(f"MN {state.mn_id}: complete before link_up")
        return []
    raise ProtocolError(f"unknown trigger kind {kind!r}")


def pfmip_binding_complete(state: PfmipState) -> None:
    """LMA now routes to the nMAG; the pMAG tunnel is torn down."""
    if state.phase != PF_FORWARDING or not state.attached:
        raise ProtocolError(f"MN {state.mn_id}: binding completes while {state.phase}")
    state.serving = state.nmag
    state.phase = PF_DONE
    state.handovers += 1


# --------------------------------------------------------------------------
# IP over ICN

ICN_IDLE = "idle"
ICN_PREPARED = "prepared"
ICN_EXECUTING = "executing"
ICN_COMPLETING = "completing"
ICN_DONE = "done"


@dataclass
class IcnHandoverState:
    """
    ICN handover context of one MN whose correspondent sits behind ``nap_b``.

    While prepared or executing, ``multicast_fid`` reaches ``nap_a`` and
    every neighbour of it (the CN's own NAP is served locally when it is one
    of them); ``stored_state`` maps each of those NAPs to the Pub/Sub state
    it holds until one of them takes ownership.
    """

    mn_id: int
    nap_b: int
    serving: int
    phase: str = ICN_IDLE
    nap_a: int | None = None
    nap_c: int | None = None
    multicast_fid: Fid | None = None
    fanout: int | None = None
    group: frozenset = frozenset()
    stored_state: dict = field(default_factory=dict)
    owner: int | None = None
    handovers: int = 0

    @property
    def multicasting(self) -> bool:
        return self.phase in (ICN_PREPARED, ICN_EXECUTING)

    @property
    def tree_edges(self) -> int:
        return tree_edge_count(self.multicast_fid) if self.multicast_fid is not None else 0

    def profile(self, t: Topology) -> HopProfile:
        """Hop counts of the current (or last) handover, split at the fan-out node."""
        b, a = self.nap_b, self.nap_a
        h_cb = t.hops(self.nap_c, b) if self.nap_c is not None else 0
        if self.multicast_fid is None:
            return HopProfile(h_ab=t.hops(a, b), h_cb=h_cb)
        f = self.multicast_fid
        dests = sorted(self.group - {b, self.fanout})
        depth_j = len(f.path_to(self.fanout)) - 1
        h_jn = tuple(len(f.path_to(n)) - 1 - depth_j for n in dests)
        return HopProfile(h_ab=t.hops(a, b), h_cb=h_cb, h_bj=depth_j, h_jn=h_jn)

    @property
    def single_fanout(self) -> bool:
        if self.multicast_fid is None:
            return True
        f = self.multicast_fid
        depth_j = len(f.path_to(self.fanout)) - 1
        dests = sorted(self.group - {self.nap_b, self.fanout})
        return self.tree_edges == depth_j + sum(len(f.path_to(n)) - 1 - depth_j for n in dests)


def icn_handover(state: IcnHandoverState, trigger: TriggerEvent, t: Topology,
                 ns: HandoverNamespace, cat: MessageCatalog = MESSAGE_SIZES) -> list[SignalEmission]:
    """
    Advance the ICN machine by one trigger.

    ``prepare``: the serving NAP subscribes its neighbourhood scope at the
    CN's NAP (l_s), which switches to a multicast FID over the whole scope
    and pushes the Pub/Sub state to every member (l_u, one copy per tree
    edge).  ``link_up`` at the new NAP sends the PubiSub (l_i) back to the
    CN's NAP, which reverts to unicast.
    """
    kind, now, mn = trigger.kind, trigger.time, state.mn_id
    b = state.nap_b
    if kind == PREPARE:
        if state.phase not in (ICN_IDLE, ICN_DONE):
            raise ProtocolError(f"MN {mn}: prepare while {state.phase}")
        if trigger.source_cell != state.serving:
            raise ProtocolError(f"MN {mn}: prepare from {trigger.source_cell}, serving NAP is {state.serving}")
        a = trigger.source_cell
        state.nap_a, state.nap_c, state.owner = a, None, None
        state.group = frozenset(ns.group(a))
        dests = state.group - {b}
        out = [SignalEmission(now, ICN, mn, "l_s", cat.l_s, t.hops(a, b), a, b)]
        if dests:
            state.multicast_fid, state.fanout = multicast_fid(t, b, dests)
        else:
            state.multicast_fid, state.fanout = None, b
        state.stored_state = {n: ("pubsub", mn, b) for n in state.group}
        out.append(SignalEmission(now, ICN, mn, "l_u", cat.l_u, state.tree_edges, b, None))
        state.phase = ICN_PREPARED
        return out
    if kind == LINK_DOWN:
        if state.phase != ICN_PREPARED:
            raise ProtocolError(f"MN {mn}: link_down while {state.phase}")
        state.phase = ICN_EXECUTING
        return []
    if kind == LINK_UP:
        if state.phase != ICN_EXECUTING:
            raise ProtocolError(f"MN {mn}: link_up while {state.phase}")
        c = trigger.target_cell
        if c not in state.group:
            raise UnpreparedTargetError(f"MN {mn} landed on NAP {c}, outside the prepared scope "
                                        f"/root/NAP_{state.nap_a}")
        if c != b and (state.multicast_fid is None or c not in state.multicast_fid.reaches()):
            raise UnpreparedTargetError(f"MN {mn} landed on NAP {c}, not reached by the multicast FID")
        state.nap_c = c
        state.owner = c
        state.stored_state = {c: state.stored_state[c]}
        state.serving = c
        state.phase = ICN_COMPLETING
        return [SignalEmission(now, ICN, mn, "l_i", cat.l_i, t.hops(c, b), c, b)]
    if kind == COMPLETE:
        if state.phase != ICN_COMPLETING:
            raise ProtocolError(f"MN {mn}: complete while {state.phase}")
        state.phase = ICN_DONE
        state.handovers += 1
        return []
    raise ProtocolError(f"unknown trigger kind {kind!r}")


# --------------------------------------------------------------------------
# data plane


def per_packet_cost(state: PfmipState | IcnHandoverState, t: Topology,
                    cat: MessageCatalog = MESSAGE_SIZES) -> tuple[float, bool]:
    """
    Bytes*Hops of one source packet on the current path, and whether it is coded.

    A failed PFMIPv6 handover re-delivers its tunnelled traffic, which
    doubles the per-packet cost (or scales it by ``1 + P`` in expectation).
    """
    if isinstance(state, PfmipState):
        m = state.lma
        if state.forwarding:
            hops = t.hops(state.cn, m) + t.hops(m, state.pmag) + t.hops(state.pmag, state.nmag)
            return hops * cat.tunnel_packet * (1 + state.failure_weight), False
        return (t.hops(state.cn, m) + t.hops(m, state.serving)) * cat.tunnel_packet, False
    if state.multicasting:
        return state.tree_edges * cat.icn_packet, True
    return t.hops(state.nap_b, state.serving) * cat.icn_packet, False


def data_plane_tick(state: PfmipState | IcnHandoverState, dt: float, rate: float,
                    coding: CodingStats | None, t: Topology, cat: MessageCatalog = MESSAGE_SIZES,
                    rng: np.random.Generator | None = None,
                    packets: float | None = None) -> tuple[float, float]:
    """
    Delivery cost of the traffic generated during ``dt`` seconds.

    ``packets`` fixes the number of source packets (e.g. a count shared by
    both schemes); otherwise it is drawn as Poisson(rate * dt), or set to its
    mean when ``rng`` is None.  While the ICN scheme multicasts, coded
    packets replace source packets at rate ``rate * (1 + epsilon)``; the
    extra ones are drawn as an independent Poisson(rate * epsilon * dt).

    Returns ``(bytes_hops, packets_sent)``.
    """
    if dt < 0:
        raise ValueError("dt must be non-negative")
    if rate < 0:
        raise ValueError("rate must be non-negative")
    if dt == 0:
        return 0.0, 0.0
    if packets is None:
        packets = float(rng.poisson(rate * dt)) if rng is not None else rate * dt
    cost, coded = per_packet_cost(state, t, cat)
    sent = float(packets)
    if coded and coding is not None and coding.epsilon > 0:
        extra = rate * coding.epsilon * dt
        sent += float(rng.poisson(extra)) if rng is not None else extra
    return sent * cost, sent
