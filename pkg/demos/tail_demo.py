"""Individual tail P(|<X, z>| >= c') for z on the polar sphere of L_r, decaying in r.

Flat directions decay with r; a basis direction does not, since <X, e_1> = X_1
has a fixed tail mass.  Rademacher sums live on a lattice, so p_hat moves
in steps.  Writes tail_demo.svg in the working directory.
Run: python3 demos/tail_demo.py
"""
from pathlib import Path

from polylab import ExperimentConfig
from polylab.experiments import exp_individual_tail
from polylab.plots import tail_curve_svg

for dist, mode in (("gaussian", "flat"), ("rademacher", "flat"), ("gaussian", "basis")):
    cfg = ExperimentConfig(dist=dist, n=32, N=1000, c_prime=0.25, trials=200_000, z_mode=mode, seed=5)
    curve = exp_individual_tail(cfg)
    print(f"{dist} / {mode}: fitted rate {curve.slope:.4f} per unit r (c'^2/2 = {cfg.c_prime ** 2 / 2:.4f})")
    oracle = curve.oracle if curve.oracle is not None else [None] * len(curve.r_values)
    for r, p, lo, hi, orc in zip(curve.r_values, curve.p_hat, curve.ci_low, curve.ci_high, oracle):
        exact = "" if orc is None or not orc == orc else f"  exact {orc:.5f}"
        print(f"  r={r:5.0f}  p_hat={p:.5f}  [{lo:.5f}, {hi:.5f}]{exact}")
    if dist == "gaussian" and mode == "flat":
        Path("tail_demo.svg").write_text(tail_curve_svg(curve), encoding="utf-8")
print("wrote tail_demo.svg")
