"""Two piles of cards: Alice sees the top of her k cards, Bob holds n-k.

With iid uniform cards the median threshold wins with probability
r + (1-r) 2^(-r/(1-r)), r = k/n. The worst ratio sits near 0.587.
With a heavy scale mixture on top, peeking is almost worthless.
"""

import numpy as np

from guessgame import twopile as TP

ratios = np.linspace(0.05, 0.95, 19)
values = np.array([TP.iid_value_of_ratio(r) for r in ratios])
for r, v in zip(ratios, values):
    print(f"r={r:.2f}  {'#' * int(100 * (v - 0.7))} {v:.4f}")

r_star, v_star = TP.worst_ratio()
print(f"worst ratio {r_star:.4f}, value {v_star:.4f}")

# Monte Carlo check of the iid median rule at (n, k) = (5, 2)
cfg = TP.PileConfig(5, 2)
x, y = TP.iid_deals(cfg, 200_000, np.random.default_rng(1))
print("simulated", np.mean((x >= TP.iid_median(cfg)) == (x > y)), "exact", TP.iid_value(cfg))

# scale mixture: the conditional chance is pinned within eps of k/n
eps = 0.01
model = TP.ScaleMixtureModel(TP.select_delta(eps))
print("delta", model.delta)
for n, k in [(4, 1), (4, 2), (4, 3)]:
    cfg = TP.PileConfig(n, k)
    lo, hi = TP.pi_limits(cfg, model)
    print(f"(n,k)=({n},{k}): pi in [{lo:.4f}, {hi:.4f}]  "
          f"best response {TP.best_response_value_quadrature(cfg, model):.4f}  game value {TP.game_value(cfg)}")
