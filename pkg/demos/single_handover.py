"""
One handover, two protocols
===========================

Drive each handover state machine through a single move on a small
hand-built topology and tally the signalling in Bytes*Hops.
"""

# %%
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))
from micro import icn_once, pfmip_once  # small reference topologies shared with the tests

# %%
# Information-centric handover. The old access node subscribes its
# neighbours to a multicast group, so packets fan out during the move.
t, st, emitted = icn_once()
for e in emitted:
    print(f"{e.msg_kind:4s} size={e.size:4d} hops={e.hops} bytes*hops={e.bytes_hops:g}")
print("ICN signalling:", sum(e.bytes_hops for e in emitted))

# %%
# Proxy mobile IPv6 with fast handover, no failure.
t, st, emitted = pfmip_once(P=0.0)
for e in emitted:
    print(f"{e.msg_kind:5s} size={e.size:4d} hops={e.hops} bytes*hops={e.bytes_hops:g}")
print("PFMIPv6 signalling:", sum(e.bytes_hops for e in emitted))

# %%
# With failures the predictive exchange is followed by a reactive one.
rng = np.random.default_rng(3)
costs = [sum(e.bytes_hops for e in pfmip_once(P=0.2, rng=rng)[2]) for _ in range(2000)]
print("mean signalling at P=0.2:", np.mean(costs), "(closed form", 1.2 * 1456, ")")
