import math

import pytest
from hypothesis import given, strategies as st

from icnho.costs import (CostLedger, HandoverRecord, HopProfile, ReconciliationError, icn_delivery_cost,
                         icn_path_cost, icn_signalling_cost, pfmip_delivery_cost, pfmip_path_cost,
                         pfmip_signalling_cost, reconcile)
from icnho.messages import ICN, PFMIPV6, MESSAGE_SIZES, MessageCatalog
from icnho.rlc import expected_transmissions

PF = HopProfile(h_pm=3, h_nm=3, h_pn=2)
HUB = HopProfile(h_ab=2, h_cb=3, h_bj=2, h_jn=(1, 1, 1))
R = 1e6 / 8 / 1024


def test_catalog():
    assert MESSAGE_SIZES.PB == 152 and MESSAGE_SIZES.H == 272
    assert MESSAGE_SIZES.tunnel_packet == 1064 and MESSAGE_SIZES.icn_packet == 1120
    assert MESSAGE_SIZES.scheme_of("l_u") == ICN and MESSAGE_SIZES.scheme_of("PBU") == PFMIPV6
    with pytest.raises(ValueError):
        MessageCatalog(PBU=0)
    with pytest.raises(KeyError):
        MESSAGE_SIZES.size("BU")


def test_pfmip_signalling_examples():
    assert pfmip_signalling_cost(HopProfile()) == 0
    assert pfmip_signalling_cost(PF) == 1456
    assert pfmip_signalling_cost(PF, P=0.2) == pytest.approx(1747.2)
    assert pfmip_signalling_cost(PF, P=0.6) / pfmip_signalling_cost(PF, P=0.2) == pytest.approx(1.6 / 1.2)
    with pytest.raises(ValueError):
        pfmip_signalling_cost(PF, P=1.5)


def test_pfmip_delivery_examples():
    hp = HopProfile(h_cm=4, h_mp=3, h_pn=2)
    assert pfmip_path_cost(hp) == 9576
    assert pfmip_delivery_cost(hp, P=0.2, R=R) == pytest.approx(1.2 * R * 9576)
    assert pfmip_delivery_cost(hp, P=0.2, R=R) == pytest.approx(1.403e6, rel=1e-3)
    assert pfmip_delivery_cost(HopProfile(h_cm=1, h_mp=1, h_pn=1), R=1) == 3192
    assert pfmip_delivery_cost(hp, R=0) == 0


def test_icn_examples():
    assert icn_signalling_cost(HopProfile()) == 0
    assert icn_signalling_cost(HUB) == 1212
    assert icn_signalling_cost(HopProfile(h_ab=2, h_cb=3, h_bj=2)) == 906
    assert icn_delivery_cost(HUB, R=1) == 5600
    eps1 = expected_transmissions(1, 16)
    assert icn_delivery_cost(HUB, R=1, stats=eps1) == pytest.approx(5600 * 16 / 15)
    assert icn_delivery_cost(HUB, R=0) == 0
    with pytest.raises(ValueError):
        icn_delivery_cost(HUB, stats=-0.1)


def test_hop_profile_rejects_negative():
    with pytest.raises(ValueError):
        HopProfile(h_jn=(1, -1))


hops = st.integers(0, 12)


@given(hops, hops, hops, st.floats(0, 1), st.floats(0, 1))
def test_pfmip_monotone_in_P(a, b, c, p1, p2):
    hp = HopProfile(h_pm=a, h_nm=b, h_pn=c, h_cm=a, h_mp=b)
    lo, hi = sorted((p1, p2))
    assert pfmip_signalling_cost(hp, P=lo) <= pfmip_signalling_cost(hp, P=hi)
    assert pfmip_delivery_cost(hp, P=lo, R=5) <= pfmip_delivery_cost(hp, P=hi, R=5)
    if a + b + c > 0 and hi - lo > 1e-9:  # smaller gaps vanish in float rounding
        assert pfmip_signalling_cost(hp, P=lo) < pfmip_signalling_cost(hp, P=hi)


@given(hops, hops, hops, st.lists(hops, max_size=7), st.floats(0, 500))
def test_linearity(a, b, c, jn, rate):
    hp = HopProfile(h_ab=a, h_cb=b, h_bj=c, h_jn=jn, h_cm=a, h_mp=b, h_pn=c)
    big = MessageCatalog(zeta=2048)
    # doubling zeta doubles only the zeta part of each packet
    assert icn_path_cost(hp, big) - icn_path_cost(hp) == (c + sum(jn)) * 1024
    assert pfmip_path_cost(hp, big) - pfmip_path_cost(hp) == (a + b + c) * 1024
    assert icn_delivery_cost(hp, R=2 * rate) == pytest.approx(2 * icn_delivery_cost(hp, R=rate))


def test_ledger_buckets_and_csv(tmp_path):
    led = CostLedger()
    led.add_signalling(PFMIPV6, 0.5, 10)
    led.add_delivery(PFMIPV6, 2.2, 5)
    led.add_delivery(ICN, 2.9, 7)
    assert led.total(PFMIPV6) == 15
    rows = led.series([PFMIPV6, ICN], duration=4)
    assert len(rows) == 8
    assert rows[0] == (0, PFMIPV6, 10, 0) and rows[5] == (2, ICN, 0, 7)
    with pytest.raises(ValueError):
        led.add_delivery(ICN, 1.0, -1)
    path = tmp_path / "ts.csv"
    led.write_csv(path, [PFMIPV6, ICN], 4)
    assert path.read_text().splitlines()[0] == "t,scheme,signalling_bh,delivery_bh"


def _pf_record(sig, fw=0.0):
    return HandoverRecord(PFMIPV6, 0, 0, 3, 4, 0, 1, 2, PF, signalling_bh=sig,
                          per_packet_bh=pfmip_path_cost(PF) * (1 + fw), failure_weight=fw)


def test_reconcile_exact_and_negative_control():
    assert reconcile([_pf_record(1456.0)]).ok
    assert reconcile([_pf_record(2912.0, fw=1.0)]).ok
    with pytest.raises(ReconciliationError) as exc:
        reconcile([_pf_record(1457.0)])
    assert "offending handover" in str(exc.value)
    rep = reconcile([_pf_record(1457.0)], strict=False)
    assert not rep.ok and len(rep.offending) == 1


def test_reconcile_icn_records():
    good = HandoverRecord(ICN, 0, 0, 11, 12, 0, 1, 2, HUB, signalling_bh=1212.0, per_packet_bh=5600,
                          tree_edges=5)
    assert reconcile([good]).ok
    bad = HandoverRecord(ICN, 0, 0, 11, 12, 0, 1, 2, HUB, signalling_bh=1212.0, per_packet_bh=5600,
                         tree_edges=5, landing_prepared=False)
    assert not reconcile([bad], strict=False).ok


def test_reconcile_aggregate_delivery():
    recs = []
    for i in range(40):
        r = _pf_record(1456.0)
        r.window = 2.0
        r.delivery_bh = R * 2.0 * r.per_packet_bh * (1.01 if i % 2 else 0.99)
        recs.append(r)
    assert reconcile(recs, R=R).ok
    for r in recs:
        r.delivery_bh *= 1.05
    assert not reconcile(recs, R=R, strict=False).ok
