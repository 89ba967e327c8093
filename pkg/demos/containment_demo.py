"""Largest multiple of L_r contained in K = G^T B_1^N for a Gaussian matrix G.

Run: python3 demos/containment_demo.py
"""
import numpy as np

from polylab import ExperimentConfig, InterpolationIndex, certified_containment, gauge_lp, greedy_net
from polylab.experiments import exp_containment
from polylab.nets import DualSphere
from polylab.distributions import SeededStream

cfg = ExperimentConfig(n=10, N=500, alpha=0.5, draws=20, directions=5000, seed=3)
res = exp_containment(cfg)
print(f"n={cfg.n}, N={cfg.N}, r={cfg.r_eff:g}: sampled c_hat over {cfg.draws} draws")
print(f"  min {np.min(res.c_hat):.4f}  median {np.median(res.c_hat):.4f}  max {np.max(res.c_hat):.4f}")

# small dimension: a certified lower bound from a net of the polar sphere
n, r = 3, 2.0
G = np.random.default_rng(0).standard_normal((60, n))
net = greedy_net(DualSphere(n, r), 0.1, 20_000, SeededStream(0, 0, (1,)))
cert = certified_containment(G, InterpolationIndex(n, r), net.points, net.radius_measured)
print(f"\nn={n}, r={r:g}, N=60: net of {len(net)} points, radius {net.radius_measured:.4f}")
print(f"  certified level c = {cert.c_certified:.4f}")

# an extreme point of c L_r, so its gauge must be at most 1
v = cert.c_certified * np.array([1.0, 1.0, 0.0])
print(f"  gauge of c*(1, 1, 0): {gauge_lp(G, v).value:.4f} (<= 1 means inside K)")
