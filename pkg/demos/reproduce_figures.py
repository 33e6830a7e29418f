"""
Reproducing the comparison figures
==================================

Run the three experiments on the default topology and write the
fig5/fig6/fig7 tables to ``out/``. Plotting is left to the reader;
the CSVs have one column per series.
"""

# %%
from pathlib import Path

from icnho.sim import (Scenario, build_world, experiment_failure_sweep, experiment_mixed_mode,
                       experiment_sequent_handovers, write_fig5, write_fig6, write_fig7)

out = Path("out")
world = build_world(Scenario())
print(world.topology)

# %%
# Failure sweep: PDC and SC over failure probability and link latency.
rows = experiment_failure_sweep(Scenario(n_mns=10), (0.2, 0.3, 0.4, 0.5, 0.6),
                                (1.0, 2.0, 3.0, 4.0, 5.0), world=world)
write_fig5(rows, out / "fig5.csv")
for r in rows:
    if r["latency"] == 1.0:
        print(f"P={r['P']:.1f}  PF pdc={r['pfmipv6_pdc']:.3g} sc={r['pfmipv6_sc']:.3g}"
              f"  ICN pdc={r['icn_pdc']:.3g} sc={r['icn_sc']:.3g}")

# %%
# Mixed mobility: 35 random walkers for half an hour.
report, rows = experiment_mixed_mode(Scenario(), world)
write_fig6(rows, out / "fig6.csv")
pf, icn = report.ledger.total("pfmipv6"), report.ledger.total("icn")
print(f"total cost PF {pf:.3g}  ICN {icn:.3g}  ratio {icn / pf:.3f}")

# %%
# Ten successive handovers per node along a chain of cells.
report, summary = experiment_sequent_handovers(Scenario(n_mns=10), world)
write_fig7(summary, out / "fig7.csv")
print({k: v for k, v in summary.items() if k.endswith(("_pdc", "_sc"))})
