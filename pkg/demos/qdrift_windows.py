#!/usr/bin/env python3
"""Phase-estimation window constants and randomized-compilation costs."""

from ftqc import qdrift

a_cos = qdrift.window_interval("cosine", 0.95)
alpha_k, a_k = qdrift.kaiser_optimum()
alpha_ci, a_ci, delta_ci, ratio = qdrift.ci_optimize()
c_hl, const_hl = qdrift.hl_optimize()

print("95% confidence half-widths (units of phase per sample):")
print(f"  cosine window            a = {a_cos:.6f}")
print(f"  kaiser, optimal shape    a = {a_k:.6f} at alpha = {alpha_k:.6f}")
print(f"  kaiser + tail split      a = {a_ci:.6f} at alpha = {alpha_ci:.6f}, "
      f"delta = {delta_ci:.6f}")
print(f"  CI cost factor a^2/delta = {ratio:.3f}")
print(f"  Hodges-Lehmann capping   c = {c_hl:.6f}, segments = "
      f"{const_hl:.4f} lambda^2/eps^2")
print()

for label, lam, N in (("Reiher", 2183.6, 108), ("Li", 1600.9, 152)):
    print(f"{label}: lambda = {lam}, eps = 0.0016, N = {N}")
    for mode in ("rms", "confidence", "hodges_lehmann"):
        r = qdrift.cost_qdrift(lam, 0.0016, N=N, mode=mode)
        line = (f"  {mode:15s} Toffoli = {r.toffoli_total:.3e}  "
                f"qubits = {r.logical_qubits}")
        if "n_exp" in r.extras:
            line += f"  N_exp = {r.extras['n_exp']:.3e}"
        print(line)
    print()
