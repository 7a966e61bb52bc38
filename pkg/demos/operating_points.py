#!/usr/bin/env python3
"""Toffoli and qubit counts for the published FeMoCo operating points."""

from ftqc import costs

POINTS = [
    ("thc", dict(N=108, lam=306.3, M=350, aleph=10, beth=16)),
    ("thc", dict(N=152, lam=1201.5, M=450, aleph=10, beth=20)),
    ("sparse", dict(N=108, lam=2135.3, d=705831)),
    ("sparse", dict(N=152, lam=1547.3, d=440501)),
    ("sf", dict(N=108, lam=4258.0, L=200)),
    ("sf", dict(N=152, lam=3071.8, L=275)),
    ("df", dict(N=108, lam=294.8, L=360, Xi_total=13031)),
    ("df", dict(N=152, lam=1171.2, L=394, Xi_total=20115)),
]

FNS = {
    "thc": costs.cost_thc,
    "sparse": costs.cost_sparse,
    "sf": costs.cost_sf,
    "df": costs.cost_df,
}

print(f"{'method':8s} {'N':>4s} {'lambda':>8s} {'per step':>9s} "
      f"{'iterations':>11s} {'Toffoli total':>13s} {'qubits':>7s}")
for method, kw in POINTS:
    r = FNS[method](costs.CostParams(**kw))
    print(f"{method:8s} {kw['N']:4d} {kw['lam']:8.1f} {r.toffoli_per_step:9d} "
          f"{r.iterations:11d} {r.toffoli_total:13.4e} {r.logical_qubits:7d}")

print()
r = costs.cost_thc(costs.CostParams(N=108, lam=306.3, M=350, aleph=10, beth=16))
print("thc N=108 per-step breakdown:")
for bucket, count in r.breakdown.items():
    print(f"  {bucket:12s} {count:6d}")
print(f"  {'chosen k':12s} {r.k_choices}")
