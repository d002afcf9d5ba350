"""Guessing the larger of two consecutive integers.

Bob writes k and k+1 with k uniform on 1..m and hands Alice one card.
Alice peeks and keeps it if it clears a random threshold. Below we
compare a few thresholds against the exact game value 1/2 + 1/(2m).
"""

from fractions import Fraction

from guessgame import alice as A
from guessgame import analysis
from guessgame import bob as B
from guessgame.core import StepThreshold

m = 6
bob = B.consecutive_uniform(m)

# a fixed threshold only helps when the hidden pair straddles it
for t in (0.5, 2.5, 3.5, 6.5):
    print(f"step at {t}: {analysis.win_prob_vs_discrete(StepThreshold(t), bob)}")

# any interior step ties here, but only the spread threshold keeps this against every Bob
F = A.random_threshold(A.ThresholdDistribution.discrete_uniform(2, m))
print("uniform threshold on 2..m:", analysis.win_prob_vs_discrete(F, bob))

cert = analysis.finite_game_oracle(m)
print("value", cert.value, "alice guarantee", cert.alice_guarantee, "bob cap", cert.bob_cap)
assert cert.value == Fraction(1, 2) + Fraction(1, 2 * m)

# the best response to Bob's mixture reaches the same number
print("best response:", analysis.best_response(bob).value)
