"""
Network graph, hop metrics and source-routed forwarding identifiers.

Node ids are integers.  Ties between equal-cost shortest paths are always
broken towards the lowest next-hop id, which makes every FID a pure
function of the topology.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np
from scipy.cluster.vq import kmeans2

__all__ = [
    "ANCHOR",
    "CORE",
    "ACCESS",
    "RELAY",
    "RoutingError",
    "Topology",
    "Fid",
    "HandoverNamespace",
    "TopologyParams",
    "hop_distance",
    "unicast_fid",
    "multicast_fid",
    "tree_edge_count",
    "generate_topology",
    "hex_centers",
    "load_topology",
    "save_topology",
]

ANCHOR = "anchor"
CORE = "core"
ACCESS = "access"
RELAY = "relay"
ROLES = (ANCHOR, CORE, ACCESS, RELAY)

FID_BITS = 256


class RoutingError(LookupError):
    pass


class Topology:
    """
    Immutable undirected graph with role tags.

    Parameters
    ----------
    roles : mapping of node id to one of ``anchor``, ``core``, ``access``,
        ``relay``.  Exactly one anchor is required; it plays both the LMA
        and the TM/RV part.
    edges : iterable of ``(a, b)`` pairs.
    positions : mapping of access node id to ``(x, y)`` in metres.
    """

    __slots__ = ("roles", "edges", "positions", "adj", "_index", "_dist")

    def __init__(self, roles: Mapping[int, str], edges: Iterable[tuple[int, int]],
                 positions: Mapping[int, tuple[float, float]]):
        roles = {int(n): r for n, r in roles.items()}
        for n, r in roles.items():
            if r not in ROLES:
                raise ValueError(f"node {n}: unknown role {r!r}")
        edge_set = set()
        for a, b in edges:
            a, b = int(a), int(b)
            if a == b:
                raise ValueError(f"self loop on node {a}")
            if a not in roles or b not in roles:
                raise ValueError(f"edge ({a}, {b}) references an unknown node")
            edge_set.add((min(a, b), max(a, b)))
        anchors = [n for n, r in roles.items() if r == ANCHOR]
        if len(anchors) != 1:
            raise ValueError(f"expected exactly one anchor node, found {len(anchors)}")
        positions = {int(n): (float(p[0]), float(p[1])) for n, p in positions.items()}
        missing = [n for n, r in roles.items() if r == ACCESS and n not in positions]
        if missing:
            raise ValueError(f"access nodes without a position: {missing}")

        adj: dict[int, list[int]] = {n: [] for n in roles}
        for a, b in edge_set:
            adj[a].append(b)
            adj[b].append(a)
        adj = {n: tuple(sorted(v)) for n, v in adj.items()}

        index, dist = _all_pairs(adj)
        if (dist < 0).any():
            raise ValueError("topology is not connected")
        dist.setflags(write=False)

        object.__setattr__(self, "roles", roles)
        object.__setattr__(self, "edges", frozenset(edge_set))
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "adj", adj)
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_dist", dist)

    def __setattr__(self, name, value):
        raise AttributeError("Topology is immutable")

    def __repr__(self) -> str:
        return f"Topology({self.summary()})"

    @property
    def nodes(self) -> list[int]:
        return sorted(self.roles)

    @property
    def anchor(self) -> int:
        return next(n for n, r in self.roles.items() if r == ANCHOR)

    def with_role(self, role: str) -> list[int]:
        return sorted(n for n, r in self.roles.items() if r == role)

    @property
    def access_nodes(self) -> list[int]:
        return self.with_role(ACCESS)

    @property
    def core_nodes(self) -> list[int]:
        return self.with_role(CORE)

    def hops(self, a: int, b: int) -> int:
        try:
            return int(self._dist[self._index[a], self._index[b]])
        except KeyError as exc:
            raise KeyError(f"unknown node {exc.args[0]}") from None

    def distances_to(self, b: int) -> dict[int, int]:
        col = self._dist[:, self._index[b]]
        return {n: int(col[i]) for n, i in self._index.items()}

    def summary(self) -> dict[str, int]:
        out = {r: len(self.with_role(r)) for r in ROLES}
        out["nodes"] = len(self.roles)
        out["edges"] = len(self.edges)
        return out


def _all_pairs(adj: Mapping[int, Iterable[int]]) -> tuple[dict[int, int], np.ndarray]:
    nodes = sorted(adj)
    index = {n: i for i, n in enumerate(nodes)}
    dist = np.full((len(nodes), len(nodes)), -1, dtype=np.int64)
    for s in nodes:
        row = dist[index[s]]
        row[index[s]] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if row[index[v]] < 0:
                    row[index[v]] = row[index[u]] + 1
                    queue.append(v)
    return index, dist


def hop_distance(t: Topology, a: int, b: int) -> int:
    return t.hops(a, b)


@dataclass(frozen=True)
class Fid:
    """
    Forwarding identifier modelled as an exact directed edge set.

    ``nominal_bits`` is what the identifier would occupy on the wire; only
    used for accounting.
    """

    kind: str
    root: int
    edges: frozenset
    nominal_bits: int = FID_BITS

    def children(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for u, v in self.edges:
            out.setdefault(u, []).append(v)
        return {u: sorted(vs) for u, vs in out.items()}

    def path_to(self, node: int) -> list[int]:
        parent = {v: u for u, v in self.edges}
        path = [node]
        while path[-1] != self.root:
            if path[-1] not in parent:
                raise RoutingError(f"{node} is not reached by this FID")
            path.append(parent[path[-1]])
        return path[::-1]

    def reaches(self) -> set[int]:
        return {self.root} | {v for _, v in self.edges}


def _greedy_path(t: Topology, src: int, dst: int) -> list[int]:
    """Shortest path taking the lowest-id next hop at every step."""
    to_dst = t.distances_to(dst)
    path = [src]
    while path[-1] != dst:
        u = path[-1]
        nxt = [v for v in t.adj[u] if to_dst[v] == to_dst[u] - 1]
        if not nxt:
            raise RoutingError(f"no route from {src} to {dst}")
        path.append(nxt[0])
    return path


def unicast_fid(t: Topology, src: int, dst: int) -> Fid:
    if src == dst:
        raise ValueError("unicast FID needs distinct endpoints")
    t.hops(src, dst)
    path = _greedy_path(t, src, dst)
    return Fid("unicast", src, frozenset(zip(path[:-1], path[1:])))


def multicast_fid(t: Topology, src: int, dsts: Iterable[int]) -> tuple[Fid, int]:
    """
    Shortest-path tree from ``src`` to every destination, plus its fan-out node.

    Destinations are grafted in ascending id order.  Each new branch leaves
    the existing tree at the deepest tree node lying on some shortest path
    to the destination and then follows the lowest-next-hop rule, so every
    root-to-leaf path stays a shortest path and in-degrees stay at one.
    The fan-out node is the last node shared by all root-to-destination
    paths.
    """
    dsts = sorted(set(dsts))
    if not dsts:
        raise ValueError("multicast FID needs at least one destination")
    if src in dsts:
        raise ValueError("the publisher cannot be one of its own destinations")
    for d in dsts:
        t.hops(src, d)

    depth = {src: 0}
    edges: set[tuple[int, int]] = set()
    for d in dsts:
        total = t.hops(src, d)
        graft = max(
            (n for n in depth if depth[n] + t.hops(n, d) == total),
            key=lambda n: (depth[n], -n),
        )
        path = _greedy_path(t, graft, d)
        for u, v in zip(path[:-1], path[1:]):
            if v in depth:
                raise RoutingError(f"branch to {d} re-enters the tree at {v}")
            edges.add((u, v))
            depth[v] = depth[u] + 1

    fid = Fid("multicast", src, frozenset(edges))
    paths = [fid.path_to(d) for d in dsts]
    fanout = src
    for level in zip(*paths):
        if len(set(level)) != 1:
            break
        fanout = level[0]
    return fid, fanout


def tree_edge_count(f: Fid) -> int:
    return len(f.edges)


@dataclass(frozen=True)
class HandoverNamespace:
    """Scope ``/root/NAP_X`` -> ordered neighbour NAP ids, kept symmetric."""

    scopes: Mapping[int, tuple[int, ...]]

    def __post_init__(self):
        scopes = {int(k): tuple(sorted(int(x) for x in v)) for k, v in self.scopes.items()}
        for nap, nbrs in scopes.items():
            if nap in nbrs:
                raise ValueError(f"NAP {nap} lists itself as a neighbour")
            for n in nbrs:
                if nap not in scopes.get(n, ()):
                    raise ValueError(f"neighbour relation {nap}->{n} is not symmetric")
        object.__setattr__(self, "scopes", scopes)

    def __getitem__(self, nap: int) -> tuple[int, ...]:
        return self.scopes[nap]

    def scope_name(self, nap: int) -> str:
        return f"/root/NAP_{nap}"

    def group(self, nap: int) -> set[int]:
        return {nap, *self.scopes[nap]}


# --------------------------------------------------------------------------
# generation and file I/O


@dataclass(frozen=True)
class TopologyParams:
    """
    Knobs for the synthetic operator topology.

    Cells sit on a jittered hexagonal grid whose centre spacing is
    ``spacing_factor * sqrt(3) * cell_radius``; a factor below one leaves
    margin so discs of ``cell_radius`` still cover the playground after
    jitter.  ``anchor_relays`` inserts that many relay nodes between the
    anchor and the core node it hangs off.
    """

    n_core: int = 8
    n_access: int = 60
    cell_radius: float = 500.0
    spacing_factor: float = 0.9
    jitter: float = 20.0
    core_edge_prob: float = 0.3
    anchor_attach: str = "central"
    anchor_relays: int = 0


def hex_centers(n: int, spacing: float) -> np.ndarray:
    """
    ``n`` centres on a hexagonal grid with odd rows offset by half a spacing.

    A full ``cols x rows`` rectangle is used when ``n`` factors into one with
    an aspect ratio below 3; otherwise the last row is left partial.
    """
    dy = spacing * math.sqrt(3) / 2
    best = None
    for cols in range(1, n + 1):
        if n % cols:
            continue
        rows = n // cols
        w = (cols - 1) * spacing + (spacing / 2 if rows > 1 else 0.0)
        h = (rows - 1) * dy
        aspect = max(w, h, 1.0) / max(min(w, h), 1.0)
        if (w == 0 or h == 0) and n > 3:
            continue
        if best is None or aspect < best[0]:
            best = (aspect, cols)
    if best is not None and best[0] <= 3:
        cols = best[1]
    else:
        cols = max(1, math.ceil(math.sqrt(n * 2 / math.sqrt(3))))
    pts = []
    r = 0
    while len(pts) < n:
        for c in range(cols):
            if len(pts) == n:
                break
            pts.append((c * spacing + (spacing / 2 if r % 2 else 0.0), r * dy))
        r += 1
    return np.asarray(pts, dtype=float)


def _connect_core(pos: np.ndarray, p: float, rng: np.random.Generator) -> set[tuple[int, int]]:
    k = len(pos)
    edges = set()
    for i in range(k):
        for j in range(i + 1, k):
            if rng.random() < p:
                edges.add((i, j))
    d = np.linalg.norm(pos[:, None] - pos[None, :], axis=-1)
    np.fill_diagonal(d, np.inf)
    min_deg = min(2, k - 1)
    for i in range(k):
        deg = sum(i in e for e in edges)
        for j in np.argsort(d[i], kind="stable"):
            if deg >= min_deg:
                break
            e = (min(i, int(j)), max(i, int(j)))
            if e not in edges:
                edges.add(e)
                deg += 1
    # join components through their geometrically closest pair
    while True:
        comp = list(range(k))

        def find(x):
            while comp[x] != x:
                comp[x] = comp[comp[x]]
                x = comp[x]
            return x

        for a, b in edges:
            comp[find(a)] = find(b)
        roots = {find(i) for i in range(k)}
        if len(roots) == 1:
            return edges
        first = find(0)
        inside = [i for i in range(k) if find(i) == first]
        outside = [i for i in range(k) if find(i) != first]
        sub = d[np.ix_(inside, outside)]
        a, b = np.unravel_index(np.argmin(sub), sub.shape)
        i, j = inside[a], outside[b]
        edges.add((min(i, j), max(i, j)))


def generate_topology(params: TopologyParams, rng: np.random.Generator) -> Topology:
    """
    Synthetic topology: anchor, core mesh, optional relays, access nodes.

    Ids are assigned anchor first (0), then core nodes, relays and finally
    access nodes in grid order.
    """
    spacing = params.spacing_factor * math.sqrt(3) * params.cell_radius
    centers = hex_centers(params.n_access, spacing)
    centers = centers + rng.uniform(-params.jitter, params.jitter, size=centers.shape)

    k = params.n_core
    core_pos, label = kmeans2(centers, k, seed=rng, minit="++")
    core_pos = np.where(np.isnan(core_pos), centers[:k], core_pos)
    core_edges = _connect_core(core_pos, params.core_edge_prob, rng)

    anchor = 0
    core_ids = list(range(1, k + 1))
    relay_ids = list(range(k + 1, k + 1 + params.anchor_relays))
    first_access = k + 1 + params.anchor_relays
    access_ids = list(range(first_access, first_access + params.n_access))

    roles = {anchor: ANCHOR}
    roles.update({c: CORE for c in core_ids})
    roles.update({r: RELAY for r in relay_ids})
    roles.update({a: ACCESS for a in access_ids})

    edges = [(core_ids[a], core_ids[b]) for a, b in core_edges]
    d = np.linalg.norm(centers[:, None] - core_pos[None, :], axis=-1)
    for i, a in enumerate(access_ids):
        edges.append((a, core_ids[int(np.argmin(d[i]))]))

    if params.anchor_attach == "central":
        core_adj = {c: [] for c in core_ids}
        for a, b in edges[: len(core_edges)]:
            core_adj[a].append(b)
            core_adj[b].append(a)
        idx, cd = _all_pairs(core_adj)
        attach = min(core_ids, key=lambda c: (int(cd[idx[c]].sum()), c))
    elif params.anchor_attach == "random":
        attach = core_ids[int(rng.integers(k))]
    else:
        raise ValueError(f"unknown anchor_attach {params.anchor_attach!r}")
    chain = [attach, *relay_ids, anchor]
    edges.extend(zip(chain[:-1], chain[1:]))

    positions = {a: (float(x), float(y)) for a, (x, y) in zip(access_ids, centers)}
    return Topology(roles, edges, positions)


def save_topology(t: Topology, path: str | Path) -> None:
    """
    Plain-text format::

        [nodes]
        <id> <role> [<x> <y>]
        [edges]
        <a> <b>
    """
    lines = ["[nodes]"]
    for n in t.nodes:
        line = f"{n} {t.roles[n]}"
        if n in t.positions:
            x, y = t.positions[n]
            line += f" {x:.3f} {y:.3f}"
        lines.append(line)
    lines.append("[edges]")
    lines.extend(f"{a} {b}" for a, b in sorted(t.edges))
    Path(path).write_text("\n".join(lines) + "\n")


def load_topology(path: str | Path) -> Topology:
    roles, positions, edges = {}, {}, []
    section = "edges"
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            section = line.strip("[]").strip().lower()
            if section not in ("nodes", "edges"):
                raise ValueError(f"line {lineno}: unknown section {line}")
            continue
        parts = line.split()
        if section == "nodes":
            if len(parts) not in (2, 4):
                raise ValueError(f"line {lineno}: expected '<id> <role> [x y]'")
            n = int(parts[0])
            roles[n] = parts[1]
            if len(parts) == 4:
                positions[n] = (float(parts[2]), float(parts[3]))
        else:
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected '<a> <b>'")
            edges.append((int(parts[0]), int(parts[1])))
    if not roles:
        nodes = {n for e in edges for n in e}
        raise ValueError(f"no [nodes] section; {len(nodes)} nodes have no roles")
    return Topology(roles, edges, positions)
