import itertools

import numpy as np
import pytest

from helpers import (
    SFMOMA_EDGES,
    SFMOMA_VARS,
    all_assignments,
    enum_mass,
    matches,
    network_with,
    random_event,
    random_network,
    sfmoma,
)
from utildist import (
    CUT,
    NullConditioningError,
    UEvent,
    UtilityNetwork,
    ValidationError,
    conditional_utility_query,
    d_separated,
    joint_utility,
    marginal_utility,
    numerically_independent,
    validate,
)
from utildist.unet import elimination_order, enumerate_marginal, marginal_table


@pytest.fixture
def root():
    return UtilityNetwork(["v"], [], [CUT("v", [], [[0.3, 0.7]])])


@pytest.fixture
def chain():
    return UtilityNetwork(
        ["A", "B"],
        [("A", "B")],
        [CUT("A", [], [[0.5, 0.5]]), CUT("B", ["A"], [[1, 0], [0, 1]])],
    )


@pytest.fixture
def two_roots():
    return UtilityNetwork(
        ["v1", "v2"], [], [CUT("v1", [], [[0.4, 0.6]]), CUT("v2", [], [[0.1, 0.9]])]
    )


# -- validation ----------------------------------------------------------------


def test_sfmoma_validates():
    assert validate(sfmoma()) == []


def test_self_loop():
    net = UtilityNetwork(["a"], [("a", "a")], [CUT("a", ["a"], [[0.5, 0.5], [0.5, 0.5]])])
    assert any("cycle" in issue for issue in validate(net))
    with pytest.raises(ValidationError, match="cycle"):
        marginal_utility(net, {})


def test_longer_cycle():
    net = UtilityNetwork(
        ["a", "b"],
        [("a", "b"), ("b", "a")],
        [CUT("a", ["b"], [[1, 0], [0, 1]]), CUT("b", ["a"], [[1, 0], [0, 1]])],
    )
    assert any(issue.startswith("cycle") for issue in validate(net))


def test_bad_normalization_is_located():
    net = UtilityNetwork(
        ["A", "B"],
        [("A", "B")],
        [CUT("A", [], [[0.5, 0.5]]), CUT("B", ["A"], [[0.5, 0.5], [0.3, 0.6]])],
    )
    (issue,) = validate(net)
    assert "'B'" in issue and "A=1" in issue and "0.9" in issue


def test_structural_errors():
    with pytest.raises(ValidationError):
        CUT("B", ["A"], [[0.5, 0.5]])
    with pytest.raises(ValidationError):
        UtilityNetwork(["a"], [("a", "zz")], [])
    net = UtilityNetwork(["a", "b"], [("a", "b")], [CUT("a", [], [[0.5, 0.5]]), CUT("b", [], [[0.5, 0.5]])])
    assert any("do not match" in i for i in validate(net))
    net = UtilityNetwork(["a"], [], [])
    assert validate(net) == ["missing CUT for 'a'"]


# -- joint and marginal ----------------------------------------------------------


def test_joint(root, chain):
    assert joint_utility(root, {"v": 1}) == 0.7
    assert joint_utility(chain, {"A": 1, "B": 1}) == 0.5
    assert sum(joint_utility(chain, a) for a in all_assignments(["A", "B"])) == 1.0
    with pytest.raises(ValidationError):
        joint_utility(chain, {"A": 1})


def test_marginals(root, chain):
    assert marginal_utility(root, {"v": 1}) == pytest.approx(0.7)
    assert marginal_utility(chain, {"B": 1}) == pytest.approx(0.5)
    assert enum_mass(chain, matches({"B": 1})) == pytest.approx(0.5)
    assert marginal_utility(chain, UEvent()) == pytest.approx(1.0)


def test_event_validation(chain):
    with pytest.raises(ValidationError):
        UEvent([])
    with pytest.raises(ValidationError):
        UEvent({"A": 2})
    with pytest.raises(ValidationError):
        marginal_utility(chain, {"Q": 1})


def test_union_event(chain):
    e = UEvent([{"A": 0}, {"B": 1}])
    assert marginal_utility(chain, e) == pytest.approx(1.0)
    e = UEvent([{"A": 0, "B": 0}, {"A": 1, "B": 0}])
    assert marginal_utility(chain, e) == pytest.approx(0.5)


def test_normalization_random():
    rng = np.random.default_rng(0)
    for _ in range(30):
        net = random_network(rng, int(rng.integers(1, 11)))
        total = sum(joint_utility(net, a) for a in all_assignments(net.variables))
        assert total == pytest.approx(1.0, abs=1e-12)
        assert marginal_utility(net, {}) == pytest.approx(1.0, abs=1e-12)


def test_large_network_elimination():
    rng = np.random.default_rng(4)
    names = [f"v{i}" for i in range(40)]
    edges = [(names[i], names[i + 1]) for i in range(39)] + [(names[i], names[i + 2]) for i in range(0, 38, 3)]
    net = network_with(rng, names, edges)
    m = marginal_utility(net, {"v39": 1, "v0": 0})
    assert 0 < m < 1
    assert marginal_utility(net, {"v39": 1, "v0": 0}) + marginal_utility(net, {"v39": 1, "v0": 1}) == pytest.approx(
        marginal_utility(net, {"v39": 1})
    )


# -- conditioning --------------------------------------------------------------------


def test_conditional(chain, two_roots):
    assert conditional_utility_query(chain, {"A": 1}, {"B": 1}) == pytest.approx(1.0)
    assert conditional_utility_query(chain, {"B": 1}, {"B": 1}) == pytest.approx(1.0)
    assert conditional_utility_query(two_roots, {"v1": 1}, {"v2": 1}) == pytest.approx(0.6)
    assert conditional_utility_query(chain, {"A": 1}, {"A": 0}) == 0.0


def test_conditional_null(chain):
    with pytest.raises(NullConditioningError):
        conditional_utility_query(chain, {"A": 1}, {"A": 0, "B": 1})


def test_chain_rule_events():
    rng = np.random.default_rng(8)
    for _ in range(40):
        net = random_network(rng, int(rng.integers(2, 7)), extreme=0.2)
        x = UEvent(random_event(rng, list(net.variables)))
        y = UEvent(random_event(rng, list(net.variables)))
        uy = marginal_utility(net, y)
        if uy > 0:
            both = marginal_utility(net, x & y) if not (x & y).is_empty() else 0.0
            assert both == pytest.approx(conditional_utility_query(net, x, y) * uy, abs=1e-12)


# -- inference oracle ---------------------------------------------------------------


def test_elimination_matches_enumeration():
    rng = np.random.default_rng(12)
    for _ in range(40):
        net = random_network(rng, int(rng.integers(1, 9)), extreme=0.15)
        for _ in range(10):
            terms = random_event(rng, list(net.variables))
            oracle = enum_mass(net, lambda a: any(matches(t)(a) for t in terms))
            assert marginal_utility(net, terms) == pytest.approx(oracle, abs=1e-9)
            assert enumerate_marginal(net, terms) == pytest.approx(oracle, abs=1e-12)


def test_ordering_independence():
    rng = np.random.default_rng(13)
    for _ in range(20):
        net = random_network(rng, 7)
        e = random_event(rng, list(net.variables), max_terms=1)
        ref = marginal_utility(net, e)
        for _ in range(5):
            order = list(rng.permutation(net.variables))
            assert marginal_utility(net, e, order=order) == pytest.approx(ref, abs=1e-12)


def test_min_degree_order_is_deterministic():
    net = sfmoma()
    factors = [(c.parents + (c.variable,), None) for c in net.cuts.values()]
    a = elimination_order(factors, (), net.variables)
    b = elimination_order(list(reversed(factors)), (), net.variables)
    assert a == b and sorted(a) == sorted(SFMOMA_VARS)


def test_marginal_table():
    net = sfmoma()
    t = marginal_table(net, ["Money", "GSPD"])
    assert t.shape == (2, 2) and t.sum() == pytest.approx(1)
    assert t[1, 0] == pytest.approx(enum_mass(net, matches({"Money": 1, "GSPD": 0})))


# -- independence -----------------------------------------------------------------------


def test_sfmoma_dsep():
    net = sfmoma()
    assert d_separated(net, ["Money"], ["GSPD"], ["OwnGSPD"])
    assert not d_separated(net, ["Money"], ["GSPD"], [])
    assert d_separated(net, ["SFMOMA"], ["DirtBike"], [])
    # conditioning on the collider opens the path between the two motivators
    assert d_separated(net, ["GSPD"], ["Art"], [])
    assert not d_separated(net, ["GSPD"], ["Art"], ["Money"])
    assert not d_separated(net, ["SFMOMA"], ["DirtBike"], ["Money"])


def test_dsep_argument_checks():
    net = sfmoma()
    with pytest.raises(ValidationError):
        d_separated(net, ["Money"], ["Money"], [])
    with pytest.raises(ValidationError):
        d_separated(net, ["Money"], ["GSPD"], ["GSPD"])
    with pytest.raises(ValidationError):
        d_separated(net, ["Nope"], ["GSPD"], [])


def test_numeric_independence():
    rng = np.random.default_rng(21)
    for _ in range(10):
        net = network_with(rng, SFMOMA_VARS, SFMOMA_EDGES)
        assert numerically_independent(net, ["Money"], ["GSPD"], ["OwnGSPD", "deKooning"])
        assert not numerically_independent(net, ["Money"], ["GSPD"], [])


def test_numeric_independence_simple(two_roots, chain):
    assert numerically_independent(two_roots, ["v1"], ["v2"])
    assert not numerically_independent(chain, ["A"], ["B"])


def _brute_ci(net, X, Y, Z, tol=1e-9):
    """Oracle: conditional independence by direct enumeration of the joint."""
    for z in itertools.product((0, 1), repeat=len(Z)):
        zd = dict(zip(Z, z))
        uz = enum_mass(net, matches(zd))
        if uz <= 0:
            continue
        for x in itertools.product((0, 1), repeat=len(X)):
            for y in itertools.product((0, 1), repeat=len(Y)):
                xd, yd = dict(zip(X, x)), dict(zip(Y, y))
                uxy = enum_mass(net, matches({**xd, **yd, **zd})) / uz
                ux = enum_mass(net, matches({**xd, **zd})) / uz
                uy = enum_mass(net, matches({**yd, **zd})) / uz
                if abs(uxy - ux * uy) > tol:
                    return False
    return True


def test_dsep_soundness_random():
    rng = np.random.default_rng(99)
    checked = 0
    for _ in range(100):
        n = int(rng.integers(3, 9))
        net = random_network(rng, n)
        names = list(net.variables)
        for _ in range(4):
            perm = list(rng.permutation(names))
            kx, ky = 1 + int(rng.integers(0, 2)), 1 + int(rng.integers(0, 2))
            kz = int(rng.integers(0, max(1, n - kx - ky) + 1))
            X, Y, Z = perm[:kx], perm[kx : kx + ky], perm[kx + ky : kx + ky + kz]
            if not Y:
                continue
            if d_separated(net, X, Y, Z):
                checked += 1
                assert numerically_independent(net, X, Y, Z, 1e-9)
    assert checked > 50


def test_numeric_matches_brute_force():
    rng = np.random.default_rng(5)
    for _ in range(15):
        net = random_network(rng, 5, extreme=0.2)
        names = list(rng.permutation(net.variables))
        X, Y, Z = names[:1], names[1:2], names[2:4]
        assert numerically_independent(net, X, Y, Z) == _brute_ci(net, X, Y, Z)
