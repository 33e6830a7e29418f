"""
Discrete-event driver running PFMIPv6 and the ICN scheme side by side.

Both schemes consume the same precomputed trajectories, traffic counts and
trigger events (common random numbers), so per-handover differences come
from the protocols alone.  Every random quantity is drawn from a named
stream derived from the scenario seed; the same scenario therefore always
produces byte-identical output files.
"""

from __future__ import annotations

import csv
import heapq
import json
import math
import zlib
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .costs import CostLedger, HandoverRecord, HopProfile, ReconciliationReport, reconcile
from .gf import FieldSpec
from .messages import ICN, PFMIPV6, MESSAGE_SIZES, MessageCatalog
from .mobility import (COMPLETE, LINK_DOWN, LINK_UP, MPH_70, PREPARE, MobileNodeState, Playground,
                       Thresholds, TriggerEvent, handover_schedule, namespace, random_walk,
                       sequent_waypoints, waypoint_walk, write_trajectory_csv)
from .protocols import (IcnHandoverState, PfmipState, SignalEmission, UnpreparedTargetError,
                        data_plane_tick, icn_handover, packet_rate, per_packet_cost,
                        pfmip_binding_complete, pfmip_handover)
from .rlc import CodingStats, expected_transmissions
from .topology import HandoverNamespace, Topology, TopologyParams, generate_topology, load_topology

__all__ = [
    "Scenario",
    "DEFAULT_SOURCES",
    "World",
    "Event",
    "EventQueue",
    "RunReport",
    "stream",
    "build_world",
    "run",
    "write_run",
    "experiment_failure_sweep",
    "experiment_mixed_mode",
    "experiment_sequent_handovers",
    "write_fig5",
    "write_fig6",
    "write_fig7",
]

SCHEMES = (PFMIPV6, ICN)
RANDOM_WALK = "random_walk"
SEQUENT = "sequent"


# --------------------------------------------------------------------------
# scenario


@dataclass(frozen=True)
class Scenario:
    """
    Everything a run depends on.  Defaults reproduce the evaluation setup.

    See :data:`DEFAULT_SOURCES` for where each default comes from.
    """

    seed: int = 1
    duration: float = 1800.0
    n_mns: int = 35
    latency: float = 1.0
    P: float = 0.0
    schemes: tuple[str, ...] = SCHEMES
    rate_bps: float = 1e6
    field_m: int = 4
    n_src: int = 16
    mobility: str = RANDOM_WALK
    handovers_per_mn: int = 10
    speed: float = MPH_70
    walk_epoch: float = 10.0
    dt: float = 1.0
    theta_prep: float = 0.9
    forward_from: str = PREPARE
    residual: float = 0.0
    traffic: str = "poisson"
    failures: str = "draw"
    topology: TopologyParams = field(default_factory=TopologyParams)
    topology_seed: int | None = 3
    topology_file: str | None = None

    def __post_init__(self):
        if not self.duration > 0:
            raise ValueError("duration must be positive")
        if self.n_mns < 1:
            raise ValueError("at least one MN is needed")
        if self.latency < 0:
            raise ValueError("handover latency must be non-negative")
        if not 0 <= self.P <= 1:
            raise ValueError("P must lie in [0, 1]")
        if not self.schemes or any(s not in SCHEMES for s in self.schemes):
            raise ValueError(f"schemes must be a non-empty subset of {SCHEMES}")
        if self.mobility not in (RANDOM_WALK, SEQUENT):
            raise ValueError(f"unknown mobility model {self.mobility!r}")
        if self.traffic not in ("poisson", "mean"):
            raise ValueError("traffic must be 'poisson' or 'mean'")
        if self.failures not in ("draw", "expected"):
            raise ValueError("failures must be 'draw' or 'expected'")
        if self.forward_from not in (PREPARE, LINK_DOWN):
            raise ValueError("forward_from must be 'prepare' or 'link_down'")
        if self.rate_bps < 0 or self.residual < 0 or self.dt <= 0:
            raise ValueError("rate and residual must be non-negative, dt positive")
        if self.handovers_per_mn < 1 or self.n_src < 1:
            raise ValueError("handovers_per_mn and n_src must be positive")
        object.__setattr__(self, "schemes", tuple(self.schemes))

    @property
    def rate(self) -> float:
        """Packets per second."""
        return packet_rate(self.rate_bps, MESSAGE_SIZES)

    def coding(self) -> CodingStats:
        return expected_transmissions(self.n_src, FieldSpec(self.field_m).q)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["schemes"] = list(self.schemes)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Scenario":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown scenario keys: {sorted(unknown)}")
        d = dict(d)
        if "topology" in d and isinstance(d["topology"], dict):
            d["topology"] = TopologyParams(**d["topology"])
        if "schemes" in d:
            d["schemes"] = tuple(d["schemes"])
        return cls(**d)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "Scenario":
        return cls.from_dict(json.loads(Path(path).read_text()))


DEFAULT_SOURCES = {
    "seed": "arbitrary; fixes every random stream",
    "duration": "1800 s mixed-mode evaluation run",
    "n_mns": "35 MNs in the mixed-mode evaluation run",
    "latency": "average handover latency of 1 s",
    "P": "no handover failure in the mixed-mode run; the failure sweep uses 0.2 to 0.6",
    "schemes": "both schemes compared on identical mobility",
    "rate_bps": "1 Mbps Poisson traffic per MN",
    "field_m": "coding over GF(2^4)",
    "n_src": "our choice of generation size (not given); sets the coding overhead",
    "mobility": "random walk; the 100-handover experiments script trajectories instead",
    "handovers_per_mn": "10 MNs x 10 sequent handovers = 100 handovers",
    "speed": "70 mph",
    "walk_epoch": "our choice: heading redrawn every 10 s",
    "dt": "1 s mobility sampling",
    "theta_prep": "our choice: prepare when the MN is beyond 0.9 of the cell radius",
    "forward_from": "pMAG forwards to the nMAG once the tunnel is acknowledged",
    "residual": "our choice: tunnel torn down right at handover completion",
    "traffic": "Poisson arrivals",
    "failures": "one failure draw per handover",
    "topology": "8 core routers, 60 eNodeBs with 500 m cells, one anchor",
    "topology_seed": "calibrated: generator draw 3 of the default topology parameters; None draws it from the scenario seed",
    "topology_file": "generated topology unless an edge-list file is given",
}


def stream(seed: int, name: str, *keys: int) -> np.random.Generator:
    """Independent generator for the named stream (and optional integer keys)."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(zlib.crc32(name.encode()), *map(int, keys)))
    return np.random.Generator(np.random.PCG64(ss))


# --------------------------------------------------------------------------
# world


@dataclass(frozen=True)
class World:
    topology: Topology
    playground: Playground
    namespace: HandoverNamespace


def build_world(s: Scenario) -> World:
    if s.topology_file:
        topo = load_topology(s.topology_file)
    else:
        tseed = s.seed if s.topology_seed is None else s.topology_seed
        topo = generate_topology(s.topology, stream(tseed, "topology"))
    pg = Playground.from_topology(topo, s.topology.cell_radius)
    return World(topo, pg, namespace(pg))


# --------------------------------------------------------------------------
# event queue


@dataclass(frozen=True, order=True)
class Event:
    time: float
    seq: int
    kind: str = field(compare=False)
    mn_id: int = field(compare=False)
    trigger: TriggerEvent | None = field(default=None, compare=False)


class EventQueue:
    """Heap ordered by ``(time, seq)`` that refuses to go back in time."""

    def __init__(self):
        self._heap: list[Event] = []
        self._seq = 0
        self.watermark = -math.inf

    def push(self, time: float, kind: str, mn_id: int, trigger: TriggerEvent | None = None) -> None:
        if time < self.watermark:
            raise RuntimeError(f"event at {time} scheduled behind the clock ({self.watermark})")
        heapq.heappush(self._heap, Event(float(time), self._seq, kind, mn_id, trigger))
        self._seq += 1

    def pop(self) -> Event:
        ev = heapq.heappop(self._heap)
        if ev.time < self.watermark:
            raise RuntimeError("event queue went back in time")
        self.watermark = ev.time
        return ev

    def __len__(self) -> int:
        return len(self._heap)


# --------------------------------------------------------------------------
# trajectories


@dataclass
class _Mobile:
    mn_id: int
    initial_cell: int
    cn_nap: int
    times: np.ndarray
    xy: np.ndarray
    triggers: list[TriggerEvent]


def _plan_random_walk(s: Scenario, w: World, mn_id: int, th: Thresholds) -> _Mobile:
    rng = stream(s.seed, "mobility", mn_id)
    pos = w.playground.sample_uniform(rng)
    cell = w.playground.nearest_covering(pos)
    heading = float(rng.uniform(0, 2 * math.pi))
    mn = MobileNodeState(mn_id, pos, heading, cell, speed=s.speed, epoch_left=s.walk_epoch)
    times, xy = random_walk(mn, w.playground, s.duration, s.dt, rng, s.walk_epoch)
    trig = handover_schedule(mn_id, times, xy, w.playground, cell, s.latency, th)
    return _Mobile(mn_id, cell, _pick_cn(s, w, mn_id), times, xy, trig)


def _plan_sequent(s: Scenario, w: World, mn_id: int, th: Thresholds) -> _Mobile:
    """Hop between neighbouring cell centres until enough handovers happened."""
    rng = stream(s.seed, "mobility", mn_id)
    access = w.topology.access_nodes
    start = access[int(rng.integers(len(access)))]
    legs = s.handovers_per_mn
    while True:
        cells = sequent_waypoints(w.playground, start, legs, stream(s.seed, "legs", mn_id))
        pts = np.array([w.playground.cell(c).center for c in cells])
        times, xy = waypoint_walk(pts, s.speed, s.dt)
        trig = handover_schedule(mn_id, times, xy, w.playground, start, s.latency, th)
        if len(trig) >= 4 * s.handovers_per_mn:
            trig = trig[: 4 * s.handovers_per_mn]
            return _Mobile(mn_id, start, _pick_cn(s, w, mn_id), times, xy, trig)
        legs *= 2


def _pick_cn(s: Scenario, w: World, mn_id: int) -> int:
    access = w.topology.access_nodes
    return access[int(stream(s.seed, "placement", mn_id).integers(len(access)))]


# --------------------------------------------------------------------------
# run


@dataclass
class RunReport:
    scenario: Scenario
    ledger: CostLedger
    records: list[HandoverRecord]
    emissions: list[SignalEmission]
    reconciliation: ReconciliationReport
    end_time: float
    trajectories: list[tuple[int, float, float, float]] = field(default_factory=list)

    def handovers(self, scheme: str) -> list[HandoverRecord]:
        return [r for r in self.records if r.scheme == scheme]

    def totals(self) -> dict:
        return {s: {"signalling": self.ledger.signalling[s], "delivery": self.ledger.delivery[s],
                    "total": self.ledger.total(s), "handovers": len(self.handovers(s))}
                for s in self.scenario.schemes}


class _Runner:
    def __init__(self, s: Scenario, w: World, cat: MessageCatalog):
        self.s, self.w, self.cat = s, w, cat
        self.topo = w.topology
        self.rate = s.rate
        self.coding = s.coding()
        self.ledger = CostLedger()
        self.records: list[HandoverRecord] = []
        self.emissions: list[SignalEmission] = []
        self.states: dict[int, dict[str, object]] = {}
        self.open: dict[tuple[str, int], HandoverRecord] = {}
        self.clock: dict[int, float] = {}
        self.traffic_rng: dict[int, np.random.Generator] = {}
        self.coding_rng: dict[int, np.random.Generator] = {}
        self.failure_rng: dict[int, np.random.Generator] = {}
        self.count: dict[tuple[str, int], int] = {}

    def add_mn(self, m: _Mobile) -> None:
        s = self.s
        st: dict[str, object] = {}
        if PFMIPV6 in s.schemes:
            st[PFMIPV6] = PfmipState(m.mn_id, lma=self.topo.anchor, cn=m.cn_nap, serving=m.initial_cell,
                                     failure_prob=s.P, forward_from=s.forward_from,
                                     expected_failures=s.failures == "expected")
        if ICN in s.schemes:
            st[ICN] = IcnHandoverState(m.mn_id, nap_b=m.cn_nap, serving=m.initial_cell)
        self.states[m.mn_id] = st
        self.clock[m.mn_id] = 0.0
        self.traffic_rng[m.mn_id] = stream(s.seed, "traffic", m.mn_id)
        self.coding_rng[m.mn_id] = stream(s.seed, "coding", m.mn_id)
        self.failure_rng[m.mn_id] = stream(s.seed, "failure", m.mn_id)

    # delivery integration --------------------------------------------------

    def advance(self, mn_id: int, now: float) -> None:
        t = self.clock[mn_id]
        while t < now:
            nxt = min(now, math.floor(t) + 1.0)
            self._piece(mn_id, t, nxt - t)
            t = nxt
        self.clock[mn_id] = max(self.clock[mn_id], now)

    def _piece(self, mn_id: int, t0: float, dt: float) -> None:
        poisson = self.s.traffic == "poisson"
        packets = float(self.traffic_rng[mn_id].poisson(self.rate * dt)) if poisson else self.rate * dt
        for scheme, state in self.states[mn_id].items():
            rng = self.coding_rng[mn_id] if poisson else None
            bh, _ = data_plane_tick(state, dt, self.rate, self.coding, self.topo, self.cat,
                                    rng=rng, packets=packets)
            self.ledger.add_delivery(scheme, t0, bh)
            rec = self.open.get((scheme, mn_id))
            if rec is not None and self._on_handover_path(state):
                rec.delivery_bh += bh
                rec.packets += packets
                rec.window += dt

    @staticmethod
    def _on_handover_path(state) -> bool:
        return state.forwarding if isinstance(state, PfmipState) else state.multicasting

    # triggers ---------------------------------------------------------------

    def emit(self, out: list[SignalEmission], rec: HandoverRecord | None) -> None:
        for e in out:
            self.emissions.append(e)
            self.ledger.add_signalling(e.scheme, e.time, e.bytes_hops)
            if rec is not None:
                rec.signalling_bh += e.bytes_hops

    def trigger(self, tr: TriggerEvent, queue: EventQueue) -> None:
        mn = tr.mn_id
        self.advance(mn, tr.time)
        for scheme, state in self.states[mn].items():
            key = (scheme, mn)
            if tr.kind == PREPARE:
                if isinstance(state, PfmipState) and state.phase == "forwarding":
                    self._finish_pfmip(state)
                idx = self.count.get(key, 0)
                self.count[key] = idx + 1
                rec = HandoverRecord(scheme, mn, idx, tr.source_cell, tr.target_cell,
                                     tr.time, math.nan, math.nan, profile=None)
                self.open[key] = rec
            rec = self.open[key]
            if isinstance(state, PfmipState):
                out = pfmip_handover(state, tr, self.topo, self.failure_rng[mn], self.cat)
            else:
                try:
                    out = icn_handover(state, tr, self.topo, self.w.namespace, self.cat)
                except UnpreparedTargetError:
                    rec.landing_prepared = False
                    raise
            self.emit(out, rec)
            if tr.kind == PREPARE:
                rec.failure_weight = getattr(state, "failure_weight", 0.0)
                if isinstance(state, IcnHandoverState):
                    rec.per_packet_bh = per_packet_cost(state, self.topo, self.cat)[0]
                    rec.tree_edges = state.tree_edges
            elif tr.kind == LINK_DOWN:
                rec.t_link_down = tr.time
                if isinstance(state, PfmipState):
                    rec.per_packet_bh = per_packet_cost(state, self.topo, self.cat)[0]
            elif tr.kind == LINK_UP:
                rec.t_link_up = tr.time
            elif tr.kind == COMPLETE:
                if isinstance(state, PfmipState):
                    rec.profile = state.profile(self.topo)
                    queue.push(tr.time + self.s.residual, "binding", mn)
                else:
                    rec.profile = state.profile(self.topo)
                    rec.single_fanout = state.single_fanout
                    rec.landing_prepared = state.nap_c in state.group
                    self._close(key)

    def _finish_pfmip(self, state: PfmipState) -> None:
        pfmip_binding_complete(state)
        self._close((PFMIPV6, state.mn_id))

    def binding(self, mn: int, now: float) -> None:
        state = self.states[mn].get(PFMIPV6)
        if state is None or state.phase != "forwarding":
            return
        self.advance(mn, now)
        self._finish_pfmip(state)

    def _close(self, key) -> None:
        rec = self.open.pop(key, None)
        if rec is not None:
            self.records.append(rec)


def _plan(s: Scenario, w: World) -> list[_Mobile]:
    th = Thresholds(s.theta_prep)
    plan = _plan_random_walk if s.mobility == RANDOM_WALK else _plan_sequent
    return [plan(s, w, i, th) for i in range(s.n_mns)]


def run(s: Scenario, world: World | None = None, cat: MessageCatalog = MESSAGE_SIZES,
        keep_trajectories: bool = False, strict: bool = False) -> RunReport:
    """
    Simulate the scenario for every enabled scheme.

    Random-walk runs last ``s.duration`` seconds (plus the tail of handovers
    still in flight); scripted runs last until the last MN has completed its
    handovers.  An MN landing outside its prepared ICN neighbourhood aborts
    the run with :class:`~icnho.protocols.UnpreparedTargetError`.
    """
    w = world if world is not None else build_world(s)
    runner = _Runner(s, w, cat)
    mobiles = _plan(s, w)
    queue = EventQueue()
    for m in mobiles:
        runner.add_mn(m)
        for tr in m.triggers:
            queue.push(tr.time, "trigger", m.mn_id, tr)
    while queue:
        ev = queue.pop()
        if ev.kind == "trigger":
            runner.trigger(ev.trigger, queue)
        else:
            runner.binding(ev.mn_id, ev.time)
    if s.mobility == RANDOM_WALK:
        end = max(s.duration, queue.watermark)
    else:
        end = max([queue.watermark, *[float(m.times[-1]) for m in mobiles]])
    for m in mobiles:
        runner.advance(m.mn_id, end)
    # handovers still in flight at the end keep their ledger costs but get no record

    records = sorted(runner.records, key=lambda r: (r.scheme, r.mn_id, r.index))
    rep = reconcile(records, cat, P=s.P, R=s.rate, epsilon=runner.coding.epsilon, strict=strict)
    traj = []
    if keep_trajectories:
        for m in mobiles:
            traj.extend((m.mn_id, float(t), float(x), float(y)) for t, (x, y) in zip(m.times, m.xy))
    return RunReport(s, runner.ledger, records, runner.emissions, rep, end, traj)


# --------------------------------------------------------------------------
# output


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write_rows(path: Path, header: Sequence[str], rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


HANDOVER_COLUMNS = list(HandoverRecord("", 0, 0, 0, 0, 0.0, 0.0, 0.0, HopProfile()).as_row())


def write_run(report: RunReport, out_dir: str | Path) -> dict[str, Path]:
    """
    Write ``timeseries.csv``, ``handovers.csv``, ``emissions.csv``,
    ``reconciliation.txt`` and ``scenario.json`` into ``out_dir``.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {k: out / v for k, v in (("timeseries", "timeseries.csv"), ("handovers", "handovers.csv"),
                                      ("emissions", "emissions.csv"), ("reconciliation", "reconciliation.txt"),
                                      ("scenario", "scenario.json"))}
    series = report.ledger.series(report.scenario.schemes, report.end_time)
    _write_rows(paths["timeseries"], ["t", "scheme", "signalling_bh", "delivery_bh"], series)
    _write_rows(paths["handovers"], HANDOVER_COLUMNS,
                ([r.as_row()[c] for c in HANDOVER_COLUMNS] for r in report.records))
    _write_rows(paths["emissions"], ["time", "scheme", "mn_id", "msg_kind", "bytes", "hops", "bytes_hops"],
                ((e.time, e.scheme, e.mn_id, e.msg_kind, e.size, e.hops, e.bytes_hops)
                 for e in report.emissions))
    paths["reconciliation"].write_text(report.reconciliation.to_text() + "\n")
    report.scenario.save(paths["scenario"])
    if report.trajectories:
        paths["trajectories"] = out / "trajectories.csv"
        write_trajectory_csv(paths["trajectories"], report.trajectories)
    return paths


# --------------------------------------------------------------------------
# experiments


def experiment_failure_sweep(base: Scenario, P_grid: Sequence[float] = (0.2, 0.3, 0.4, 0.5, 0.6),
                             L_grid: Sequence[float] = (1.0, 2.0, 3.0, 4.0, 5.0),
                             world: World | None = None) -> list[dict]:
    """
    Total handover costs of scripted handovers per ``(L, P)`` cell.

    Each cell reuses the same trajectories and failure draws, so costs move
    only with ``L`` and ``P``.  PDC is the delivery cost accrued on the
    handover data path, SC the signalling cost, both summed over all
    handovers.  ICN runs once per latency since it has no failure mode.
    """
    base = replace(base, mobility=SEQUENT)
    w = world if world is not None else build_world(base)
    rows = []
    for L in L_grid:
        icn = None
        if ICN in base.schemes:
            icn = run(replace(base, latency=float(L), schemes=(ICN,), P=0.0), w).handovers(ICN)
        for P in P_grid:
            row = {"latency": float(L), "P": float(P)}
            if PFMIPV6 in base.schemes:
                pf = run(replace(base, latency=float(L), P=float(P), schemes=(PFMIPV6,)), w).handovers(PFMIPV6)
                row.update(pfmipv6_pdc=sum(r.delivery_bh for r in pf), pfmipv6_sc=sum(r.signalling_bh for r in pf),
                           pfmipv6_handovers=len(pf))
            if icn is not None:
                row.update(icn_pdc=sum(r.delivery_bh for r in icn), icn_sc=sum(r.signalling_bh for r in icn),
                           icn_handovers=len(icn))
            rows.append(row)
    return rows


def experiment_mixed_mode(base: Scenario, world: World | None = None) -> tuple[RunReport, list[dict]]:
    """
    Random-walk run with failure-free PFMIPv6; returns the report and the
    per-second total cost of each scheme with running sums.
    """
    s = replace(base, mobility=RANDOM_WALK, P=0.0)
    rep = run(s, world)
    rows, acc = [], {k: 0.0 for k in s.schemes}
    by_t: dict[int, dict] = {}
    for t, scheme, sig, dl in rep.ledger.series(s.schemes, rep.end_time):
        acc[scheme] += sig + dl
        row = by_t.setdefault(t, {"t": t})
        row[f"{scheme}_bh"] = sig + dl
        row[f"{scheme}_cumulative_bh"] = acc[scheme]
    rows = [by_t[t] for t in sorted(by_t)]
    return rep, rows


def experiment_sequent_handovers(base: Scenario, world: World | None = None) -> tuple[RunReport, dict]:
    """
    Scripted consecutive handovers; per-handover PDC and SC and their means.

    PDC here is the delivery cost rate on the handover data path in
    Bytes*Hops/s: ``R`` times the per-packet cost, scaled by ``1 + epsilon``
    for coded ICN traffic.
    """
    s = replace(base, mobility=SEQUENT)
    rep = run(s, world)
    eps = s.coding().epsilon
    summary: dict = {"per_handover": []}
    per = {}
    for scheme in s.schemes:
        recs = rep.handovers(scheme)
        factor = (1 + eps) if scheme == ICN else 1.0
        pdc = [s.rate * r.per_packet_bh * factor for r in recs]
        sc = [r.signalling_bh for r in recs]
        per[scheme] = (pdc, sc)
        summary[f"{scheme}_mean_pdc"] = float(np.mean(pdc)) if pdc else math.nan
        summary[f"{scheme}_mean_sc"] = float(np.mean(sc)) if sc else math.nan
        summary[f"{scheme}_handovers"] = len(recs)
    n = max(len(v[0]) for v in per.values())
    for i in range(n):
        row = {"handover": i + 1}
        for scheme, (pdc, sc) in per.items():
            if i < len(pdc):
                row[f"{scheme}_pdc"] = pdc[i]
                row[f"{scheme}_sc"] = sc[i]
        summary["per_handover"].append(row)
    return rep, summary


def _write_dicts(path: Path, rows: list[dict]) -> None:
    header = list(rows[0]) if rows else []
    _write_rows(path, header, ([r.get(h, "") for h in header] for r in rows))


def write_fig5(rows: list[dict], path: str | Path) -> None:
    """Columns: latency, P, then PDC and SC totals per scheme."""
    _write_dicts(Path(path), rows)


def write_fig6(rows: list[dict], path: str | Path) -> None:
    """Columns: t and per-second plus cumulative total cost per scheme."""
    _write_dicts(Path(path), rows)


def write_fig7(summary: dict, path: str | Path) -> None:
    """Columns: handover number, then PDC and SC per scheme."""
    _write_dicts(Path(path), summary["per_handover"])
