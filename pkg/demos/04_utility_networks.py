"""Utility networks: a DAG of conditional utility tables, queried like a Bayes net.

A trip to the museum: an art lover gets utility from seeing a de Kooning at
SFMOMA, a motorbike fan from Golden Gate Park speedways, and money links
what each can afford.
"""
import numpy as np

from utildist import CUT, UEvent, UtilityNetwork, conditional_utility_query, d_separated, marginal_utility, numerically_independent, validate

edges = [
    ("GSPD", "OwnGSPD"),
    ("GSPD", "DirtBike"),
    ("Art", "SFMOMA"),
    ("Art", "deKooning"),
    ("OwnGSPD", "Money"),
    ("deKooning", "Money"),
]
names = ["GSPD", "Art", "OwnGSPD", "DirtBike", "SFMOMA", "deKooning", "Money"]
rng = np.random.default_rng(1)


def cuts():
    out = []
    for v in names:
        parents = [p for p, c in edges if c == v]
        p1 = rng.uniform(0.1, 0.9, size=2 ** len(parents))
        out.append(CUT(v, parents, np.stack([1 - p1, p1], axis=1)))
    return out


net = UtilityNetwork(names, edges, cuts())
print("validation issues:", validate(net) or "none")

# %% Queries. Each row of a CUT splits the parent's utility between 0 and 1,
# so the whole space always carries utility 1.
print("u(everything)           =", round(marginal_utility(net, UEvent()), 12))
print("u(Money=1)              =", round(marginal_utility(net, {"Money": 1}), 6))
print("u(Money=1 | Art=1)      =", round(conditional_utility_query(net, {"Money": 1}, {"Art": 1}), 6))
print("u(Art=1 or GSPD=1)      =", round(marginal_utility(net, [{"Art": 1}, {"GSPD": 1}]), 6))

# %% Graph structure predicts independence, whatever the numbers are.
for X, Y, Z in ((["Money"], ["GSPD"], ["OwnGSPD"]), (["Money"], ["GSPD"], []), (["SFMOMA"], ["DirtBike"], [])):
    sep = d_separated(net, X, Y, Z)
    num = numerically_independent(net, X, Y, Z)
    print(f"{X} vs {Y} given {Z}: d-separated {sep}, numerically independent {num}")
