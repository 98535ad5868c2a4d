"""Dispatch the upper-tail rate formula across the four behavior classes.

-log Pr[Hom(K, G_n^d) >= (1+delta) p^e n^v] behaves differently depending
on the 2-core of K: forests have a deterministic count (rate infinity),
cycle-union cores follow the clique-planting constant c(lengths; delta),
bad-edge-free patterns get the sharp constant rho(K, delta), and the
K_{2,4}-plus-an-edge pattern picks up a double-log correction.
"""

from regtail import classify_and_rate, cycle_constant, k0_variational_min
from regtail.graphs import Graph, complete_bipartite, cycle_graph, k0_graph

N, P, DELTA = 1e6, 1e-3, 1.0

examples = [
    ("path (forest)", Graph([(0, 1), (1, 2)])),
    ("triangle + pendant", Graph([(0, 1), (1, 2), (2, 0), (2, 3)])),
    ("K_{2,3}", complete_bipartite(2, 3)),
    ("K0 = K_{2,4} + edge", k0_graph()),
    ("C5", cycle_graph(5)),
]

if __name__ == "__main__":
    print(f"delta = {DELTA}, n = {N:g}, p = {P:g}\n")
    for label, g in examples:
        r = classify_and_rate(g, DELTA, N, P)
        print(f"{label:22s} -> {r.classification:12s} gamma={r.gamma}  "
              f"exponent {r.exponent}")
        print(f"{'':22s}    rate {r.rate:.4g}   window {r.validity_window}")
    print()
    print("Cycle constants c(lengths; delta) solve a floor/fractional-power")
    print("product equation; they snap to integers exactly when possible:")
    for lengths, delta in (([3], 1.0), ([3], 0.125), ([3, 4], 3.0)):
        print(f"  c({lengths}; {delta}) = {cycle_constant(lengths, delta):.12g}")
    print()
    print("The K0 variational minimum (exact entropy, not the surrogate):")
    for p in (1e-3, 1e-5):
        value, c1, c2 = k0_variational_min(1.0, p)
        print(f"  p={p:g}: min = {value:.4e} at c1={c1:.4f}, c2={c2:.4f}")
