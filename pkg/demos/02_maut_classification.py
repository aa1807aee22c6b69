"""Classical independence notions on a tabulated two-attribute utility."""
from utildist import (
    AttributeSpace,
    Lottery,
    TabulatedUtility,
    additive_decomposition,
    classify,
    expected_utility,
)

space = AttributeSpace([("H", ["no", "yes"]), ("W", ["no", "yes"])])


def table(both):
    return TabulatedUtility.from_entries(
        space, {("yes", "yes"): both, ("yes", "no"): 2, ("no", "yes"): 1, ("no", "no"): 0}
    )


# %% Health and wealth are each worth something, and together worth more
# than the sum of their parts.
u = table(5)
report = classify(u)
print("singular:", report.singular, " mutual:", report.mutual, " additive:", report.additive)

# Additivity fails: two lotteries with identical marginals on H and on W
# still get different expected utilities.
w = report.additive_witness
print("uniform over the four states ->", w.eu_uniform)
print("coin flip between both / neither ->", w.eu_diagonal)

# %% With a joint value of 3 the table is the sum of its parts.
v = table(3)
report = classify(v)
print()
print("additive:", report.additive, " TIOLI weights:", dict(report.tioli_strict.weights))
dec = additive_decomposition(v)
print("decomposition constant", dec.constant)
for name, fn in dec.value_functions.items():
    print(f"  v_{name} =", dict(fn))

# %% Expected utility of an explicit lottery.
p = Lottery({("yes", "no"): 0.5, ("no", "yes"): 0.5})
print("EU of a health-or-wealth coin flip:", expected_utility(v, p))

# %% XOR is the textbook table with no independence at all.
xor = TabulatedUtility(AttributeSpace([("X1", [0, 1]), ("X2", [0, 1])]), [[0, 1], [1, 0]])
r = classify(xor)
print()
print("xor: singular", r.singular, "mutual", r.mutual, "additive", r.additive)
for pair, z in r.ui_witnesses.items():
    print("  slices that break", pair, "->", z)
