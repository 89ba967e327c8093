"""Net-based union bound plus oscillation control, draw by draw, in dimension 4.

Run: python3 demos/end2end_demo.py   (takes about ten seconds)
"""
from polylab import ExperimentConfig
from polylab.experiments import default_net, end_to_end_report, exp_end_to_end

cfg = ExperimentConfig(n=4, N=400, alpha=0.5, rho=0.12, net_radius=0.07, probe_budget=30_000,
                       c_prime=0.5, draws=20, directions=1000, seed=11)
net = default_net(cfg)
print(f"net: {len(net)} points, measured radius {net.radius_measured:.4f} (rho = {cfg.rho})")
rep = end_to_end_report(cfg, exp_end_to_end(cfg, net))
for key, val in rep.metrics.items():
    print(f"  {key}: {val}")
for key, val in rep.checks.items():
    print(f"  check {key}: {'ok' if val else 'FAILED'}")
