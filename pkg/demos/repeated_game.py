"""Repeated play against a growing consecutive range.

In round r Bob draws from consecutive_uniform(r). A fixed threshold
strategy is eventually useless, so its running win frequency drifts
back toward 1/2.
"""

from guessgame import alice as A
from guessgame import sim
from guessgame.core import StepThreshold

R = 5000
strategies = {
    "step at 3.5": StepThreshold(3.5),
    "logistic(10, 5)": A.random_threshold(A.ThresholdDistribution.logistic(10, 5)),
    "blind 1/2": A.blind(0.5),
}
for name, F in strategies.items():
    trace = sim.repeated_game(F, R, seed=0)
    marks = [trace.running_frequency[i - 1] for i in (10, 100, 1000, R)]
    print(f"{name:16s}", "  ".join(f"{f:.3f}" for f in marks))
print(f"cap after {R} rounds: {sim.repeated_game_bound(R):.4f}")
