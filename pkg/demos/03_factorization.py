"""Any utility table can be written as a utility distribution over factors.

The prefix method spends one factor per distinct utility level. The binary
method spends one factor per bit of the largest level, counted in a common
quantum.
"""
import numpy as np

from utildist import AttributeSpace, NonQuantizableError, TabulatedUtility, binary_factorization, prefix_chain

space = AttributeSpace([("H", ["no", "yes"]), ("W", ["no", "yes"])])
u = TabulatedUtility(space, [[0, 1], [2, 3]])

for name, method in (("prefix", prefix_chain), ("binary", binary_factorization)):
    fs = method(u)
    print(f"{name}: {len(fs.distribution)} factors, raw weights {dict(fs.raw_weights)}")
    for state, _ in u.items():
        print(f"   {state} -> {sorted(fs.state_map[state])} -> {fs.reconstruct(state)}")

# %% The gap grows with the range: 16 levels need 15 prefix steps but only 4 bits.
ramp = TabulatedUtility(
    AttributeSpace([("A", list(range(4))), ("B", list(range(4)))]), np.arange(16.0).reshape(4, 4)
)
print()
print("ramp: prefix", len(prefix_chain(ramp).distribution), "factors, binary",
      len(binary_factorization(ramp).distribution), "factors")

# %% Irrational gaps have no common quantum; only the prefix method applies.
odd = TabulatedUtility(space, [[0, 1], [2 ** 0.5, 3]])
try:
    binary_factorization(odd)
except NonQuantizableError as exc:
    print()
    print("binary refused:", exc)
print("prefix still works with", len(prefix_chain(odd).distribution), "factors")
