"""Gaussian regions: the exact broadcast surface, critical rates, and the
outer-vs-inner comparison for the reversed Markov chain."""

import numpy as np

from ibreg import (
    GaussianCdibModel,
    GaussianTwcibModel,
    cdib_x1x2y_critical_r1,
    cdib_x1x2y_mu,
    cdib_x1x2y_r2,
    cdib_x1yx2_inner,
    cdib_x1yx2_outer_frontier,
    twcib_point_for_variances,
    twcib_rate_for_relevance,
    twcib_relevance_limit,
    twcib_test_channel_variances,
)

# ---------------------------------------------------------------------------
# Chain X1 - X2 - Y (rho 0.8 / 0.8): exact region
# ---------------------------------------------------------------------------
m = GaussianCdibModel.chain_x1_x2_y(0.8, 0.8)
print(f"I(Y;X2) = {m.i_y_x2():.6f},  I(Y;X1) = {m.i_y_x1():.6f}")
print(f"mu(R1=1, R2=1) = {cdib_x1x2y_mu(m, 1.0, 1.0):.9f} bits")

print("\nrate R2 needed per R1 at several relevance targets:")
r1s = np.array([0.0, 0.5, 1.0, 2.0, 4.0])
for mu in (0.15, 0.45, 0.70):
    row = ", ".join(f"{cdib_x1x2y_r2(m, r1, mu):.4f}" for r1 in r1s)
    crit = cdib_x1x2y_critical_r1(m, mu)
    crit_s = "none (needs encoder 2 forever)" if crit is None else f"{crit:.4f}"
    print(f"  mu={mu}: R2 = [{row}]   critical R1: {crit_s}")

# ---------------------------------------------------------------------------
# Chain X1 - Y - X2 (rho 0.8 / 0.6): outer bound vs additive inner bound
# ---------------------------------------------------------------------------
w = GaussianCdibModel.chain_x1_y_x2(0.8, 0.6)
print(f"\nI(Y;X1,X2) = {w.i_y_x1x2():.6f} bits")
print(f"{'R':>5} {'outer':>9} {'inner':>9} {'gap':>8}")
for rate in np.linspace(0.25, 2.0, 8):
    outer = cdib_x1yx2_outer_frontier(w, rate, rate)
    inner = cdib_x1yx2_inner(w, rate, rate)
    print(f"{rate:5.2f} {outer:9.6f} {inner:9.6f} {outer - inner:8.5f}")

# ---------------------------------------------------------------------------
# Two-way model: the closed-form rate bound is met exactly by additive-noise
# test channels V = X + P (round trip through the determinant evaluator)
# ---------------------------------------------------------------------------
t = GaussianTwcibModel(rho_x1x2=0.5, rho_x1y1=0.4, rho_x2y1=0.8,
                       rho_x2y2=0.7, rho_x1y2=0.55)
mu1, mu2 = 0.45, 0.5
print(f"\ntwo-way relevance limits: {twcib_relevance_limit(t, 2):.4f} (mu1), "
      f"{twcib_relevance_limit(t, 1):.4f} (mu2)")
var = twcib_test_channel_variances(t, mu1, mu2)
pt = twcib_point_for_variances(t, var["sigma_p1_sq"], var["sigma_p2_sq"])
print(f"noise variances: {var['sigma_p1_sq']:.6f}, {var['sigma_p2_sq']:.6f}")
print(f"achieved (mu1, mu2) = ({pt['mu1']:.9f}, {pt['mu2']:.9f})")
print(f"R1: channel {pt['R1']:.9f} vs closed form "
      f"{twcib_rate_for_relevance(t, 1, mu2):.9f}")
print(f"R2: channel {pt['R2']:.9f} vs closed form "
      f"{twcib_rate_for_relevance(t, 2, mu1):.9f}")
