"""
Handover cost simulator comparing PFMIPv6 with IP over ICN using coded multicast.

Modules
-------
gf
    GF(2^m) arithmetic tables.
rlc
    Random linear coding: encoder, incremental decoder and decode statistics.
topology
    Operator topology, forwarding identifiers and handover namespaces.
mobility
    Cell layout, random-walk and scripted trajectories, handover triggers.
protocols
    PFMIPv6 and ICN handover state machines and their data paths.
costs
    Closed-form costs, the cost ledger and reconciliation.
sim
    Event-driven runs, experiments and CSV output.
"""

from .gf import GF16, FieldSpec
from .messages import ICN, PFMIPV6, MESSAGE_SIZES, MessageCatalog
from .sim import Scenario, run

__all__ = ["FieldSpec", "GF16", "MessageCatalog", "MESSAGE_SIZES", "PFMIPV6", "ICN", "Scenario", "run"]
__version__ = "0.1.0"
