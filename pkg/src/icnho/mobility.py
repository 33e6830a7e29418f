"""
Random-walk mobility over circular cells and handover trigger generation.

Signal strength is proxied by the distance to the serving cell centre: a
handover is prepared once the MN is further than ``theta_prep * radius``
out and the link drops when it leaves the disc.  Re-attachment happens
``latency`` seconds later at the nearest covering cell.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .topology import HandoverNamespace, Topology

__all__ = [
    "MPH_70",
    "CoverageError",
    "Cell",
    "Playground",
    "MobileNodeState",
    "TriggerEvent",
    "Thresholds",
    "step",
    "detect_trigger",
    "attach",
    "neighbor_set",
    "namespace",
    "random_walk",
    "waypoint_walk",
    "sequent_waypoints",
    "handover_schedule",
    "write_trajectory_csv",
]

MPH_70 = 70 * 1609.344 / 3600  # 31.29 m/s

IDLE = "idle"
PREPARED = "ho_prepared"
EXECUTING = "ho_executing"
COMPLETING = "ho_completing"

PREPARE = "prepare"
LINK_DOWN = "link_down"
LINK_UP = "link_up"
COMPLETE = "complete"
TRIGGER_ORDER = (PREPARE, LINK_DOWN, LINK_UP, COMPLETE)


class CoverageError(RuntimeError):
    pass


@dataclass(frozen=True)
class Cell:
    node: int
    center: tuple[float, float]
    radius: float = 500.0


class Playground:
    """
    Rectangle ``[x0, x0 + width] x [y0, y0 + height]`` covered by cells.

    Coverage is verified on construction by sampling a ``resolution`` grid
    and requiring every sample to sit at least ``resolution / sqrt(2)``
    inside some disc, which guarantees the whole rectangle is covered.
    """

    def __init__(self, width: float, height: float, cells: Sequence[Cell],
                 origin: tuple[float, float] = (0.0, 0.0), resolution: float = 10.0,
                 check: bool = True):
        if width <= 0 or height <= 0:
            raise ValueError("playground needs positive width and height")
        if not cells:
            raise ValueError("playground needs at least one cell")
        self.width = float(width)
        self.height = float(height)
        self.origin = (float(origin[0]), float(origin[1]))
        self.cells = tuple(cells)
        self.nodes = np.array([c.node for c in self.cells])
        self.centers = np.array([c.center for c in self.cells], dtype=float)
        self.radii = np.array([c.radius for c in self.cells], dtype=float)
        self._by_node = {c.node: i for i, c in enumerate(self.cells)}
        if check:
            self._check_coverage(resolution)

    def _check_coverage(self, res: float) -> None:
        x0, y0 = self.origin
        xs = np.linspace(x0, x0 + self.width, max(2, int(math.ceil(self.width / res)) + 1))
        ys = np.linspace(y0, y0 + self.height, max(2, int(math.ceil(self.height / res)) + 1))
        step = max(xs[1] - xs[0], ys[1] - ys[0])
        margin = step / math.sqrt(2)
        for y in ys:
            pts = np.stack([xs, np.full_like(xs, y)], axis=1)
            d = np.linalg.norm(pts[:, None, :] - self.centers[None, :, :], axis=-1)
            ok = (d <= (self.radii - margin)[None, :]).any(axis=1)
            if not ok.all():
                bad = pts[np.argmin(ok)]
                raise CoverageError(f"point ({bad[0]:.1f}, {bad[1]:.1f}) is not covered by any cell")

    @classmethod
    def from_topology(cls, topo: Topology, radius: float = 500.0,
                      bounds: tuple[float, float, float, float] | None = None,
                      shrink_step: float = 10.0) -> "Playground":
        """
        Cells from the access nodes of ``topo``.

        Without explicit ``bounds`` the bounding box of the cell centres is
        used, shrunk in ``shrink_step`` increments until it is covered.
        """
        cells = [Cell(n, topo.positions[n], radius) for n in topo.access_nodes]
        if bounds is not None:
            x0, y0, x1, y1 = bounds
            return cls(x1 - x0, y1 - y0, cells, origin=(x0, y0))
        pts = np.array([c.center for c in cells])
        x0, y0 = pts.min(axis=0)
        x1, y1 = pts.max(axis=0)
        if len(cells) == 1:
            h = radius / math.sqrt(2) * 0.9
            return cls(2 * h, 2 * h, cells, origin=(x0 - h, y0 - h))
        # a single row or column of cells has no extent along one axis; give
        # it a band of half a radius on each side before shrinking
        if x1 - x0 < 2 * shrink_step:
            x0, x1 = x0 - radius / 2, x1 + radius / 2
        if y1 - y0 < 2 * shrink_step:
            y0, y1 = y0 - radius / 2, y1 + radius / 2
        last = None
        while x1 - x0 > shrink_step and y1 - y0 > shrink_step:
            try:
                return cls(x1 - x0, y1 - y0, cells, origin=(x0, y0))
            except CoverageError as exc:
                last = exc
            x0, y0, x1, y1 = x0 + shrink_step, y0 + shrink_step, x1 - shrink_step, y1 - shrink_step
        raise CoverageError(f"no covered rectangle inside the cell layout ({last})")

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        x0, y0 = self.origin
        return x0, y0, x0 + self.width, y0 + self.height

    def cell(self, node: int) -> Cell:
        return self.cells[self._by_node[node]]

    def distance(self, pos: Sequence[float], node: int) -> float:
        c = self.centers[self._by_node[node]]
        return math.hypot(pos[0] - c[0], pos[1] - c[1])

    def nearest_covering(self, pos: Sequence[float]) -> int:
        d = np.hypot(self.centers[:, 0] - pos[0], self.centers[:, 1] - pos[1])
        covering = d <= self.radii
        if not covering.any():
            raise CoverageError(f"position ({pos[0]:.1f}, {pos[1]:.1f}) is not covered")
        d = np.where(covering, d, np.inf)
        return int(self.nodes[int(np.argmin(d))])

    def sample_uniform(self, rng: np.random.Generator) -> tuple[float, float]:
        x0, y0, x1, y1 = self.bounds
        return float(rng.uniform(x0, x1)), float(rng.uniform(y0, y1))


@dataclass(frozen=True)
class Thresholds:
    theta_prep: float = 0.9

    def __post_init__(self):
        if not 0 < self.theta_prep < 1:
            raise ValueError("theta_prep must lie in (0, 1)")


@dataclass(frozen=True)
class MobileNodeState:
    id: int
    position: tuple[float, float]
    heading: float
    serving_cell: int
    speed: float = MPH_70
    correspondent: int | None = None
    phase: str = IDLE
    epoch_left: float = 10.0

    def __post_init__(self):
        if self.speed < 0:
            raise ValueError("speed must be non-negative")


@dataclass(frozen=True)
class TriggerEvent:
    mn_id: int
    time: float
    kind: str
    source_cell: int
    target_cell: int | None = None


def step(mn: MobileNodeState, dt: float, playground: Playground, rng: np.random.Generator,
         walk_epoch: float = 10.0) -> MobileNodeState:
    """Advance one random-walk step with specular reflection at the border."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    heading = mn.heading
    epoch_left = mn.epoch_left - dt
    if epoch_left <= 0:
        heading = float(rng.uniform(0.0, 2 * math.pi))
        epoch_left += walk_epoch
    x = mn.position[0] + mn.speed * dt * math.cos(heading)
    y = mn.position[1] + mn.speed * dt * math.sin(heading)
    x0, y0, x1, y1 = playground.bounds
    vx, vy = math.cos(heading), math.sin(heading)
    for _ in range(8):
        if x < x0:
            x, vx = 2 * x0 - x, -vx
        elif x > x1:
            x, vx = 2 * x1 - x, -vx
        elif y < y0:
            y, vy = 2 * y0 - y, -vy
        elif y > y1:
            y, vy = 2 * y1 - y, -vy
        else:
            break
    heading = math.atan2(vy, vx) % (2 * math.pi)
    return replace(mn, position=(x, y), heading=heading, epoch_left=epoch_left)


def detect_trigger(mn: MobileNodeState, playground: Playground, t: float,
                   thresholds: Thresholds = Thresholds()) -> tuple[MobileNodeState, TriggerEvent | None]:
    """
    Check the serving-cell distance and return the updated state and trigger.

    A prepared MN that drifts back inside the threshold is returned to idle
    without any event.
    """
    cell = playground.cell(mn.serving_cell)
    d = playground.distance(mn.position, mn.serving_cell)
    if mn.phase == IDLE:
        if d > thresholds.theta_prep * cell.radius:
            return replace(mn, phase=PREPARED), TriggerEvent(mn.id, t, PREPARE, mn.serving_cell)
        return mn, None
    if mn.phase == PREPARED:
        if d > cell.radius:
            return replace(mn, phase=EXECUTING), TriggerEvent(mn.id, t, LINK_DOWN, mn.serving_cell)
        if d <= thresholds.theta_prep * cell.radius:
            return replace(mn, phase=IDLE), None
    return mn, None


def attach(mn: MobileNodeState, playground: Playground, t: float) -> tuple[MobileNodeState, list[TriggerEvent]]:
    """Layer-2 link up at the nearest covering cell, immediately followed by completion."""
    if mn.phase != EXECUTING:
        raise RuntimeError(f"MN {mn.id} cannot attach from phase {mn.phase}")
    target = playground.nearest_covering(mn.position)
    src = mn.serving_cell
    events = [TriggerEvent(mn.id, t, LINK_UP, src, target), TriggerEvent(mn.id, t, COMPLETE, src, target)]
    return replace(mn, serving_cell=target, phase=IDLE), events


def neighbor_set(playground: Playground, cell: int) -> set[int]:
    """Cells whose coverage discs overlap or touch ``cell``'s disc."""
    i = playground._by_node[cell]
    c = playground.centers[i]
    d = np.hypot(playground.centers[:, 0] - c[0], playground.centers[:, 1] - c[1])
    reach = playground.radii + playground.radii[i]
    mask = d <= reach
    mask[i] = False
    return {int(n) for n in playground.nodes[mask]}


def namespace(playground: Playground) -> HandoverNamespace:
    return HandoverNamespace({int(c.node): tuple(sorted(neighbor_set(playground, c.node)))
                              for c in playground.cells})


# --------------------------------------------------------------------------
# trajectories


def random_walk(mn: MobileNodeState, playground: Playground, duration: float, dt: float,
                rng: np.random.Generator, walk_epoch: float = 10.0) -> tuple[np.ndarray, np.ndarray]:
    """Sample times ``0, dt, ...`` up to ``duration`` and the positions there."""
    n = int(math.floor(duration / dt + 1e-9))
    times = np.arange(n + 1) * dt
    xy = np.empty((n + 1, 2))
    xy[0] = mn.position
    state = mn
    for k in range(1, n + 1):
        state = step(state, dt, playground, rng, walk_epoch)
        xy[k] = state.position
    return times, xy


def sequent_waypoints(playground: Playground, start_cell: int, n_legs: int,
                      rng: np.random.Generator) -> list[int]:
    """Cells visited by a walk hopping to a random neighbour ``n_legs`` times."""
    cells = [start_cell]
    for _ in range(n_legs):
        nbrs = sorted(neighbor_set(playground, cells[-1]))
        if not nbrs:
            raise ValueError(f"cell {cells[-1]} has no neighbours to hand over to")
        cells.append(nbrs[int(rng.integers(len(nbrs)))])
    return cells


def waypoint_walk(points: np.ndarray, speed: float, dt: float) -> tuple[np.ndarray, np.ndarray]:
    """Constant-speed traversal of a polyline sampled every ``dt`` seconds."""
    points = np.asarray(points, dtype=float)
    seg = np.diff(points, axis=0)
    seg_len = np.hypot(seg[:, 0], seg[:, 1])
    cum = np.concatenate([[0.0], np.cumsum(seg_len)])
    total_t = cum[-1] / speed
    n = int(math.ceil(total_t / dt - 1e-9))
    times = np.arange(n + 1) * dt
    s = np.minimum(times * speed, cum[-1])
    xy = np.stack([np.interp(s, cum, points[:, 0]), np.interp(s, cum, points[:, 1])], axis=1)
    return times, xy


def handover_schedule(mn_id: int, times: np.ndarray, xy: np.ndarray, playground: Playground,
                      initial_cell: int, latency: float,
                      thresholds: Thresholds = Thresholds()) -> list[TriggerEvent]:
    """
    Trigger events along a sampled trajectory.

    Link up happens ``latency`` after link down, at the cell nearest to the
    last sampled position not later than that instant.  Prepare events are
    emitted only once the matching link down is confirmed, and carry the
    eventual target cell so an ideal measurement report can name it.
    """
    if latency < 0:
        raise ValueError("latency must be non-negative")
    mn = MobileNodeState(mn_id, tuple(xy[0]), 0.0, initial_cell)
    out: list[TriggerEvent] = []
    pending: TriggerEvent | None = None
    resume_after = -math.inf
    k = 0
    while k < len(times):
        t = float(times[k])
        if t <= resume_after and k:
            k += 1
            continue
        mn = replace(mn, position=(float(xy[k, 0]), float(xy[k, 1])))
        while True:
            mn, ev = detect_trigger(mn, playground, t, thresholds)
            if ev is None:
                if mn.phase == IDLE:
                    pending = None
                break
            if ev.kind == PREPARE:
                pending = ev
                continue
            # link down: resolve the attachment point after the latency
            t_up = t + latency
            j = int(np.searchsorted(times, t_up + 1e-9, side="right") - 1)
            j = max(j, k)
            mn = replace(mn, position=(float(xy[j, 0]), float(xy[j, 1])))
            mn, tail = attach(mn, playground, t_up)
            target = tail[0].target_cell
            out.append(replace(pending, target_cell=target))
            out.append(replace(ev, target_cell=target))
            out.extend(tail)
            pending = None
            resume_after = t_up
            break
        k += 1
    return out


def write_trajectory_csv(path: str | Path, rows: Iterable[tuple[int, float, float, float]]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["mn_id", "t", "x", "y"])
        for mn_id, t, x, y in rows:
            w.writerow([mn_id, f"{t:.3f}", f"{x:.3f}", f"{y:.3f}"])
