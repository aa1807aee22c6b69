"""Utility distributions: conditioning and independence on factor sets.

A utility distribution spreads one unit of utility over a set of factors,
the way a probability distribution spreads one unit of mass over outcomes.
"""
from utildist import (
    TioliFunction,
    UtilityDistribution,
    conditional_utility,
    is_subjectively_independent,
    normalize,
    utility,
)

# %% A car buyer cares about reliability, mileage and fun.
cars = UtilityDistribution({"r": 0.1, "m": 0.2, "f": 0.7})
print("u({f, m})      =", round(utility(cars, {"f", "m"}), 9))

# Suppose the buyer is only choosing among cars that are fun or get good
# mileage. How much of what is left does fun account for?
print("u({f} | {f,m}) =", round(conditional_utility(cars, {"f"}, {"f", "m"}), 9))

# %% Independence: learning y does not change the share taken by x.
four = UtilityDistribution({"r": 6 / 30, "m": 3 / 30, "f": 14 / 30, "t": 7 / 30})
fr, rm = {"f", "r"}, {"r", "m"}
print()
print("u({f,r})        =", round(utility(four, fr), 9))
print("u({f,r} | {r,m}) =", round(conditional_utility(four, fr, rm), 9))
print("independent?     ", is_subjectively_independent(four, fr, rm))
print("but {f} vs {f,m}?", is_subjectively_independent(cars, {"f"}, {"f", "m"}))

# %% Additive "take it or leave it" utilities normalize into distributions.
# A negative weight flips its factor to the complement "~label".
t = TioliFunction({"health": 2, "wealth": 1, "debt": -1})
dist, record = normalize(t)
print()
print("normalized:", dict(dist.weights))
print("offset", record.offset, "scale", record.scale, "flipped", sorted(record.flipped))
present = {"health", "debt"}
back = record.restore(utility(dist, record.lift(present, t.weights)))
print(f"t({sorted(present)}) = {t(present)}, restored = {back}")
