import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from icnho.topology import (ACCESS, ANCHOR, CORE, RELAY, HandoverNamespace, RoutingError, Topology,
                            TopologyParams, generate_topology, hex_centers, load_topology,
                            multicast_fid, save_topology, tree_edge_count, unicast_fid)
from oracles import to_networkx


@pytest.fixture(scope="module")
def topo():
    return generate_topology(TopologyParams(), np.random.default_rng(3))


def graph_topology(g: nx.Graph) -> Topology:
    roles = {n: ACCESS for n in g.nodes}
    roles[0] = ANCHOR
    return Topology(roles, g.edges, {n: (float(n), 0.0) for n in g.nodes if n != 0})


def check_tree(t, f, src, dsts):
    tree = nx.DiGraph(list(f.edges))
    tree.add_node(src)
    assert nx.is_directed_acyclic_graph(tree)
    assert all(d <= 1 for _, d in tree.in_degree())
    assert tree.in_degree(src) == 0
    for d in dsts:
        path = f.path_to(d)
        assert path[0] == src and path[-1] == d
        assert len(path) - 1 == t.hops(src, d)     # every branch is a shortest path


def test_generated_counts_and_roles(topo):
    s = topo.summary()
    assert (s["nodes"], s[ANCHOR], s[CORE], s[ACCESS], s[RELAY]) == (69, 1, 8, 60, 0)
    g = to_networkx(topo)
    assert nx.is_connected(g)
    core = g.subgraph(topo.core_nodes)
    assert nx.is_connected(core)
    assert min(d for _, d in core.degree()) >= 2
    assert all(g.degree(a) == 1 for a in topo.access_nodes)
    assert topo.anchor == 0


def test_anchor_relays_lengthen_the_anchor_chain():
    t = generate_topology(TopologyParams(anchor_relays=2), np.random.default_rng(3))
    assert t.summary()["nodes"] == 71
    base = generate_topology(TopologyParams(), np.random.default_rng(3))
    a = t.access_nodes[0]
    assert t.hops(a, t.anchor) == base.hops(base.access_nodes[0], base.anchor) + 2


def test_generator_is_deterministic():
    a = generate_topology(TopologyParams(), np.random.default_rng(11))
    b = generate_topology(TopologyParams(), np.random.default_rng(11))
    assert a.edges == b.edges and a.positions == b.positions


def test_hops_match_networkx(topo):
    g = to_networkx(topo)
    ref = dict(nx.all_pairs_shortest_path_length(g))
    for a in topo.nodes:
        for b in topo.nodes:
            assert topo.hops(a, b) == ref[a][b]


def test_unicast_fid_is_lowest_id_shortest_path(topo):
    g = to_networkx(topo)
    a, b = topo.access_nodes[0], topo.access_nodes[-1]
    f = unicast_fid(topo, a, b)
    path = f.path_to(b)
    assert len(path) - 1 == nx.shortest_path_length(g, a, b)
    assert path == min(nx.all_shortest_paths(g, a, b))
    with pytest.raises(ValueError):
        unicast_fid(topo, a, a)


def test_multicast_tree_on_generated_topology(topo):
    src = topo.access_nodes[5]
    dsts = topo.access_nodes[20:27]
    f, fanout = multicast_fid(topo, src, dsts)
    check_tree(topo, f, src, dsts)
    assert f.reaches() >= set(dsts)
    paths = [f.path_to(d) for d in dsts]
    assert all(fanout in p for p in paths)
    depth = paths[0].index(fanout)
    assert len({p[depth + 1] if len(p) > depth + 1 else None for p in paths}) > 1


def test_single_destination_tree_is_the_unicast_path(topo):
    a, b = topo.access_nodes[3], topo.access_nodes[40]
    f, fanout = multicast_fid(topo, a, [b])
    assert f.edges == unicast_fid(topo, a, b).edges
    assert fanout == b
    assert tree_edge_count(f) == topo.hops(a, b)


def test_multicast_argument_errors(topo):
    a = topo.access_nodes[0]
    with pytest.raises(ValueError):
        multicast_fid(topo, a, [])
    with pytest.raises(ValueError):
        multicast_fid(topo, a, [a, topo.access_nodes[1]])
    f = unicast_fid(topo, a, topo.access_nodes[1])
    with pytest.raises(RoutingError):
        f.path_to(topo.access_nodes[30])


def test_hub_tree_shape():
    # B(10) - R(1) - A(11), A hub with leaves 12, 13, 14
    roles = {0: ANCHOR, 1: CORE, 10: ACCESS, 11: ACCESS, 12: ACCESS, 13: ACCESS, 14: ACCESS}
    t = Topology(roles, [(0, 1), (10, 1), (1, 11), (11, 12), (11, 13), (11, 14)],
                 {n: (float(n), 0.0) for n in range(10, 15)})
    f, fanout = multicast_fid(t, 10, [11, 12, 13, 14])
    assert fanout == 11 and tree_edge_count(f) == 5


@settings(max_examples=60, deadline=None)
@given(st.integers(5, 30), st.floats(0.1, 0.5), st.integers(0, 10_000), st.data())
def test_multicast_invariants_on_random_graphs(n, p, seed, data):
    g = nx.gnp_random_graph(n, p, seed=seed)
    if not nx.is_connected(g):
        g = nx.compose(g, nx.path_graph(n))
    t = graph_topology(g)
    src = data.draw(st.integers(0, n - 1))
    dsts = data.draw(st.sets(st.integers(0, n - 1).filter(lambda x: x != src), min_size=1, max_size=n - 1))
    f, fanout = multicast_fid(t, src, dsts)
    check_tree(t, f, src, dsts)
    leaves = {v for _, v in f.edges} - {u for u, _ in f.edges}
    assert leaves <= set(dsts)              # no dangling branches


def test_save_load_roundtrip(topo, tmp_path):
    path = tmp_path / "topo.txt"
    save_topology(topo, path)
    back = load_topology(path)
    assert back.roles == topo.roles and back.edges == topo.edges
    assert back.positions.keys() == topo.positions.keys()
    for n, xy in topo.positions.items():
        assert back.positions[n] == pytest.approx(xy, abs=1e-3)


def test_load_rejects_malformed(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("[nodes]\n0 anchor\n1 access\n[edges]\n0 1 2\n")
    with pytest.raises(ValueError):
        load_topology(path)
    path.write_text("0 1\n")
    with pytest.raises(ValueError):
        load_topology(path)


def test_topology_validation():
    with pytest.raises(ValueError):
        Topology({0: ANCHOR, 1: CORE, 2: CORE}, [(0, 1)], {})        # disconnected
    with pytest.raises(ValueError):
        Topology({0: CORE, 1: CORE}, [(0, 1)], {})                    # no anchor
    with pytest.raises(ValueError):
        Topology({0: ANCHOR, 1: ACCESS}, [(0, 1)], {})                # access without position
    t = Topology({0: ANCHOR, 1: CORE}, [(0, 1)], {})
    with pytest.raises(AttributeError):
        t.edges = frozenset()


def test_namespace_validation():
    ns = HandoverNamespace({1: (2, 3), 2: (1,), 3: (1,)})
    assert ns.group(1) == {1, 2, 3}
    assert ns.scope_name(1) == "/root/NAP_1"
    with pytest.raises(ValueError):
        HandoverNamespace({1: (2,), 2: ()})
    with pytest.raises(ValueError):
        HandoverNamespace({1: (1,)})


def test_hex_centers_full_rectangle():
    pts = hex_centers(60, 779.4)
    assert pts.shape == (60, 2)
    assert len(np.unique(pts[:, 1])) == 10
    d = np.linalg.norm(pts[:, None] - pts[None], axis=-1)
    np.fill_diagonal(d, np.inf)
    assert d.min() == pytest.approx(779.4)
