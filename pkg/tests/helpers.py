"""Random generators and brute-force oracles shared by the tests."""
import itertools
import math
from fractions import Fraction

import numpy as np

from utildist.maut import AttributeSpace, Lottery, TabulatedUtility
from utildist.unet import CUT, UtilityNetwork, joint_utility
from utildist.binet import ProbabilityNetwork

SFMOMA_EDGES = [
    ("GSPD", "OwnGSPD"),
    ("GSPD", "DirtBike"),
    ("Art", "SFMOMA"),
    ("Art", "deKooning"),
    ("OwnGSPD", "Money"),
    ("deKooning", "Money"),
]
SFMOMA_VARS = ["GSPD", "Art", "OwnGSPD", "DirtBike", "SFMOMA", "deKooning", "Money"]


def hw_space():
    return AttributeSpace([("H", ["no", "yes"]), ("W", ["no", "yes"])])


def hw_table(hw=5.0):
    # u(H W), u(H ~W), u(~H W), u(~H ~W)
    return TabulatedUtility.from_entries(
        hw_space(),
        {("yes", "yes"): hw, ("yes", "no"): 2, ("no", "yes"): 1, ("no", "no"): 0},
    )


def xor_table():
    sp = AttributeSpace([("X1", [0, 1]), ("X2", [0, 1])])
    return TabulatedUtility(sp, [[0, 1], [1, 0]])


def random_rows(rng, k, extreme=0.0):
    p = rng.uniform(0.05, 0.95, size=2**k)
    if extreme:
        hit = rng.random(2**k) < extreme
        p[hit] = rng.integers(0, 2, size=hit.sum())
    return np.stack([1 - p, p], axis=1)


def random_dag(rng, names, edge_prob=0.4, max_parents=3):
    edges = []
    for j, child in enumerate(names):
        cands = [p for p in names[:j] if rng.random() < edge_prob]
        rng.shuffle(cands)
        edges += [(p, child) for p in cands[:max_parents]]
    return edges


def network_with(rng, names, edges, cls=UtilityNetwork, extreme=0.0):
    cuts = []
    for v in names:
        parents = [p for p, c in edges if c == v]
        cuts.append(CUT(v, parents, random_rows(rng, len(parents), extreme)))
    return cls(names, edges, cuts)


def random_network(rng, n, cls=UtilityNetwork, edge_prob=0.4, extreme=0.0, prefix="v"):
    names = [f"{prefix}{i}" for i in range(n)]
    order = list(names)
    rng.shuffle(order)
    edges = random_dag(rng, order, edge_prob)
    return network_with(rng, names, edges, cls, extreme)


def sfmoma(rng=None):
    rng = rng or np.random.default_rng(7)
    return network_with(rng, SFMOMA_VARS, SFMOMA_EDGES)


def random_event(rng, names, max_terms=3):
    terms = []
    for _ in range(rng.integers(1, max_terms + 1)):
        k = rng.integers(0, min(len(names), 4) + 1)
        chosen = rng.choice(names, size=k, replace=False)
        terms.append({str(v): int(rng.integers(0, 2)) for v in chosen})
    return terms


def all_assignments(names):
    for bits in itertools.product((0, 1), repeat=len(names)):
        yield dict(zip(names, bits))


def enum_mass(net, pred):
    """Oracle: sum joint utility over complete assignments satisfying ``pred``."""
    return math.fsum(joint_utility(net, a) for a in all_assignments(net.variables) if pred(a))


def matches(term):
    return lambda a: all(a[n] == v for n, v in term.items())


def random_table(rng, max_attrs=3, max_dom=3, integer=False, boolean=False, min_attrs=2):
    n = int(rng.integers(min_attrs, max_attrs + 1))
    attrs = []
    for i in range(n):
        d = 2 if boolean else int(rng.integers(2, max_dom + 1))
        attrs.append((f"A{i}", list(range(d))))
    sp = AttributeSpace(attrs)
    kind = rng.integers(0, 3)
    if integer:
        vals = rng.integers(0, 4, size=sp.shape).astype(float)
    elif kind == 0:
        vals = rng.normal(size=sp.shape)
    elif kind == 1:
        # additive by construction
        vals = sum(
            rng.normal(size=d).reshape([d if j == i else 1 for j in range(n)])
            for i, d in enumerate(sp.shape)
        ) * np.ones(sp.shape)
    else:
        # monotone in each attribute but with interactions (UI-friendly)
        base = [np.sort(rng.normal(size=d)) for d in sp.shape]
        grids = np.meshgrid(*base, indexing="ij")
        vals = sum(grids) + 0.3 * np.prod([g - g.min() for g in grids], axis=0)
    return TabulatedUtility(sp, vals)


def two_point_lotteries(max_den=8):
    """All probabilities k/d with d <= max_den, as Fractions (deduplicated)."""
    return sorted({Fraction(k, d) for d in range(1, max_den + 1) for k in range(d + 1)})


def ui_oracle(u, y_name, z_name, max_den=8):
    """Brute-force classical UI for a 2-attribute boolean table.

    Lotteries on Y are two-point mixtures (p on the second value). For each
    z, record the ordering over every pair of lotteries. A z at which every
    lottery is indifferent is compatible with anything; otherwise all
    orderings must match exactly.
    """
    sp = u.space
    probs = two_point_lotteries(max_den)
    orderings = []
    for z in sp.domain(z_name):
        def eu(p, z=z):
            total = Fraction(0)
            for y, w in zip(sp.domain(y_name), (1 - p, p)):
                st = {y_name: y, z_name: z}
                total += w * Fraction(u[st])
            return total
        vals = [eu(p) for p in probs]
        order = tuple((a > b) - (a < b) for a, b in itertools.product(vals, repeat=2))
        orderings.append(order)
    live = [o for o in orderings if any(o)]
    return all(o == live[0] for o in live)


def matched_marginal_pair(rng, space):
    """Two random lotteries with identical single-attribute marginals."""
    shape = space.shape
    p = rng.dirichlet(np.ones(space.size)).reshape(shape)
    q = p.copy()
    n = len(shape)
    for _ in range(6):
        i, j = sorted(rng.choice(n, size=2, replace=False))
        a0, a1 = rng.choice(shape[i], size=2, replace=False)
        b0, b1 = rng.choice(shape[j], size=2, replace=False)
        ctx = [int(rng.integers(0, d)) for d in shape]
        def at(a, b):
            idx = list(ctx)
            idx[i], idx[j] = a, b
            return tuple(idx)
        plus = [at(a0, b0), at(a1, b1)]
        minus = [at(a0, b1), at(a1, b0)]
        room = min(q[m] for m in minus)
        eps = rng.uniform(0, room)
        for s in plus:
            q[s] += eps
        for s in minus:
            q[s] -= eps
    return Lottery.from_array(space, p), Lottery.from_array(space, q)


def single_marginals(space, lot):
    return [lot.marginal(space, n) for n in space.names]


def dual_oracle(b, p_evidence=None, u_evidence=None):
    """Expected utility by enumerating each net separately and summing bridge products."""
    from utildist.unet import UEvent

    def cond(net, event, evidence):
        if evidence is None:
            return enum_mass(net, event.contains)
        ev = UEvent(evidence)
        den = enum_mass(net, ev.contains)
        return enum_mass(net, lambda a: event.contains(a) and ev.contains(a)) / den

    return math.fsum(
        cond(b.pnet, br.p_event, p_evidence) * cond(b.unet, br.u_event, u_evidence) for br in b.bridges
    )


def random_binet(rng, max_vars=5, extreme=0.1):
    from utildist.binet import BiNetwork, Bridge

    pnet = random_network(rng, int(rng.integers(1, max_vars + 1)), ProbabilityNetwork, prefix="p", extreme=extreme)
    unet = random_network(rng, int(rng.integers(1, max_vars + 1)), UtilityNetwork, prefix="u", extreme=extreme)
    bridges = [
        Bridge(random_event(rng, list(pnet.variables)), random_event(rng, list(unet.variables)))
        for _ in range(int(rng.integers(0, 5)))
    ]
    return BiNetwork(pnet, unet, bridges)
