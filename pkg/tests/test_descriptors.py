import json
from fractions import Fraction

import numpy as np
import pytest

from guessgame import alice as A
from guessgame import analysis
from guessgame import bob as B
from guessgame import descriptors as D
from guessgame.core import Constant, StepThreshold

LOGISTIC = A.random_threshold(A.ThresholdDistribution.logistic(0, 1))

ALICES = [
    Constant(Fraction(1, 3)),
    StepThreshold(2.5),
    LOGISTIC,
    A.random_threshold(A.ThresholdDistribution.normal(1, 2, p_minus=Fraction(1, 10))),
    A.random_threshold(A.ThresholdDistribution.discrete_uniform(2, 9)),
    A.dual(LOGISTIC),
    A.gamma_mixture(LOGISTIC, Fraction(3, 4)),
    A.Mixture(Fraction(1, 2), LOGISTIC, StepThreshold(0)),
    A.poisson_coverage("exponential"),
    A.poisson_coverage("homogeneous", 0.7),
    A.PiecewiseLinear(((-1, 0.0), (1, 1.0))),
    A.q_lattice(0.5),
]

BOBS = [
    B.pure_pair(1, 2),
    B.consecutive_uniform(6),
    B.scaled_consecutive(5, 3),
    B.modular_three({0: Fraction(1, 4), 2: Fraction(3, 4)}),
    B.mixture_of_pairs([(0, 3, Fraction(1, 3)), (1, 2, Fraction(2, 3))]),
    B.zero_pm_one(),
]


@pytest.mark.parametrize("F", ALICES, ids=lambda F: F.kind)
def test_alice_round_trip(F):
    desc = json.loads(json.dumps(D.alice_to_descriptor(F)))
    assert desc["v"] == 1 and desc["role"] == "alice" and "flags" in desc
    G = D.alice_from_descriptor(desc)
    xs = np.linspace(-6, 6, 49)
    assert np.allclose(F(xs), G(xs), atol=1e-15)
    assert G.flags() == F.flags()


@pytest.mark.parametrize("bob", BOBS, ids=lambda b: b.description)
def test_bob_round_trip(bob):
    desc = json.loads(json.dumps(D.bob_to_descriptor(bob)))
    again = D.bob_from_descriptor(desc)
    assert again.outcomes == bob.outcomes


def test_continuous_bob_descriptors():
    for kind, params in [("iid_uniform_pair", {}), ("location_uniform", {"m": 3}),
                         ("scale_uniform_twocards", {"m": 50}), ("arrangement_closest_to_half", {})]:
        bob = D.bob_from_descriptor({"v": 1, "role": "bob", "kind": kind, "params": params})
        assert D.bob_to_descriptor(bob)["kind"] == kind


def test_rationals_survive():
    desc = D.alice_to_descriptor(Constant(Fraction(5, 8)))
    assert desc["params"]["p"] == {"num": "5", "den": "8"}
    F = D.alice_from_descriptor({"kind": "constant", "params": {"p": "5/8"}})
    assert F.at(0) == Fraction(5, 8)
    bob = D.bob_from_descriptor({"kind": "pure_pair", "params": {"a": "1/3", "b": 1}})
    assert analysis.win_prob_vs_discrete(F, bob) == Fraction(1, 2)


def test_parameters_key_accepted():
    F = D.alice_from_descriptor({"kind": "step", "parameters": {"t": 1}})
    assert F == StepThreshold(1)


@pytest.mark.parametrize("bad", [
    {"kind": "nonsense"},
    {"v": 2, "kind": "step", "params": {"t": 0}},
    {"kind": "step", "params": {}},
    {"params": {}},
])
def test_bad_descriptors(bad):
    with pytest.raises(D.DescriptorError):
        D.alice_from_descriptor(bad)


def test_load_from_file(tmp_path):
    path = tmp_path / "bob.json"
    path.write_text(json.dumps({"kind": "consecutive_uniform", "params": {"m": 3}}))
    assert D.load(f"@{path}")["params"]["m"] == 3
    with pytest.raises(D.DescriptorError):
        D.load("{not json")
