import json

from icnho.cli import build_parser, main


def test_parser_has_all_subcommands():
    p = build_parser()
    for cmd in ("run", "sweep-failure", "mixed-mode", "sequent-ho"):
        ns = p.parse_args([cmd, "--seed", "3", "--n-mns", "2", "--latency", "2", "-P", "0.3", "--out", "x"])
        assert ns.seed == 3 and ns.n_mns == 2 and ns.latency == 2 and ns.P == 0.3


def test_run_writes_outputs(tmp_path, capsys):
    assert main(["run", "--duration", "30", "--n-mns", "2", "--out", str(tmp_path)]) == 0
    totals = json.loads(capsys.readouterr().out)
    assert set(totals) == {"pfmipv6", "icn"}
    for name in ("timeseries.csv", "handovers.csv", "emissions.csv", "reconciliation.txt",
                 "scenario.json", "trajectories.csv"):
        assert (tmp_path / name).exists()


def test_config_file_and_topology_flag(tmp_path, capsys):
    from icnho.sim import Scenario
    from icnho.topology import TopologyParams, generate_topology, save_topology
    import numpy as np
    topo = tmp_path / "t.txt"
    save_topology(generate_topology(TopologyParams(), np.random.default_rng(5)), topo)
    cfg = tmp_path / "s.json"
    Scenario(n_mns=2, handovers_per_mn=2).save(cfg)
    out = tmp_path / "o"
    assert main(["sequent-ho", "--config", str(cfg), "--topology", str(topo), "--out", str(out)]) == 0
    summ = json.loads(capsys.readouterr().out)
    assert summ["icn_handovers"] == 4
    assert json.loads((out / "scenario.json").read_text())["topology_file"] == str(topo)
    assert (out / "fig7.csv").exists()
