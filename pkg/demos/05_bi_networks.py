"""Bi-networks: a probability network and a utility network joined by bridges.

Beliefs live in one net and preferences in the other. Each bridge pairs a
world event with a utility event, and expected utility sums
P(world event) * U(utility event) over the bridges.
"""
from utildist import CUT, BiNetwork, Bridge, NullConditioningError, ProbabilityNetwork, UtilityNetwork, expected_utility_query
from utildist.binet import bridge_terms

weather = ProbabilityNetwork(
    ["Rain", "Wind"],
    [("Rain", "Wind")],
    [CUT("Rain", [], [[0.7, 0.3]]), CUT("Wind", ["Rain"], [[0.8, 0.2], [0.4, 0.6]])],
)
outing = UtilityNetwork(
    ["Dry", "Calm"],
    [("Dry", "Calm")],
    [CUT("Dry", [], [[0.25, 0.75]]), CUT("Calm", ["Dry"], [[0.5, 0.5], [0.2, 0.8]])],
)
b = BiNetwork(
    weather,
    outing,
    [
        Bridge({"Rain": 0, "Wind": 0}, {"Dry": 1, "Calm": 1}),
        Bridge({"Rain": 0, "Wind": 1}, {"Dry": 1, "Calm": 0}),
        Bridge({"Rain": 1}, {"Dry": 0}),
    ],
)

for p, u in bridge_terms(b):
    print(f"P = {p:.3f}  U = {u:.3f}")
print("expected utility         :", round(expected_utility_query(b), 6))
print("... given a windy day    :", round(expected_utility_query(b, p_evidence={"Wind": 1}), 6))
print("... among dry outcomes   :", round(expected_utility_query(b, u_evidence={"Dry": 1}), 6))

# Conditioning on an impossible event is an error, and it says which net.
sure = ProbabilityNetwork(["Sun"], [], [CUT("Sun", [], [[0.0, 1.0]])])
try:
    expected_utility_query(BiNetwork(sure, outing, [({"Sun": 1}, {"Dry": 1})]), p_evidence={"Sun": 0})
except NullConditioningError as exc:
    print("refused:", exc.side, "-", exc)
