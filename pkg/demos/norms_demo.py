"""Exact polar norm of L_r against the Holmstedt formula and the round-robin partition.

Run: python3 demos/norms_demo.py
"""
import math

import numpy as np

from polylab import dual_gauge_exact, holmstedt_approx, round_robin_partition, block_l2_sum

rng = np.random.default_rng(1)
n = 200
profiles = {
    "gaussian": rng.standard_normal(n),
    "geometric": 0.9 ** np.arange(n),
    "flat": np.ones(n),
    "sparse": rng.standard_normal(n) * (rng.random(n) < 0.05),
}

print(f"{'profile':>10} {'r':>5} {'exact':>10} {'holmstedt':>10} {'ratio':>7} {'round-robin':>12} {'ratio':>7}")
for name, z in profiles.items():
    for r in (1, 4, 25, 100, n):
        exact = dual_gauge_exact(z, r)
        approx = holmstedt_approx(z, r)
        rr = block_l2_sum(round_robin_partition(z, r))
        print(f"{name:>10} {r:>5} {exact:10.4f} {approx:10.4f} {approx / exact:7.4f} {rr:12.4f} {rr / exact:7.4f}")

print(f"\nHolmstedt ratio stays in [1, sqrt 2 = {math.sqrt(2):.4f}];"
      f" round-robin ratio stays in [1/sqrt 2 = {1 / math.sqrt(2):.4f}, 1].")
