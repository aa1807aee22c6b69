"""Utility networks: Bayesian-network-shaped factorizations of a utility distribution.

Every variable is a boolean indicator of a factor-set event (``Art``,
``Money``, ...). Each variable carries a conditional utility table (CUT)
giving ``u(v | parents)`` for every parent assignment, and the product of
the CUT entries assigns each complete assignment its share of utility.
Those shares sum to 1, so the complete assignments are the atomic factors
of a utility distribution and events are queried exactly as in a
probability network.

CUT rows are stored in binary parent-assignment order with the first
listed parent as the most significant bit; each row is ``[u(v=0|pa), u(v=1|pa)]``.

Marginals are computed by variable elimination with a greedy min-degree
ordering; :func:`enumerate_marginal` is the brute-force reference.
"""
from __future__ import annotations

import graphlib
import itertools
import math
from collections import deque
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import NullConditioningError, ResourceError, ValidationError
from .factors import DEFAULT_TOL

__all__ = [
    "CUT",
    "UtilityNetwork",
    "UEvent",
    "validate",
    "joint_utility",
    "marginal_table",
    "marginal_utility",
    "enumerate_marginal",
    "conditional_utility_query",
    "d_separated",
    "numerically_independent",
    "elimination_order",
]

MAX_EVENT_SCOPE = 24
MAX_ENUMERATION = 24


class CUT:
    """Conditional table for one boolean variable; ``rows`` has shape ``(2**k, 2)``."""

    __slots__ = ("variable", "parents", "rows")

    def __init__(self, variable: str, parents: Sequence[str], rows):
        parents = tuple(parents)
        rows = np.array(rows, dtype=float)
        if rows.shape != (2 ** len(parents), 2):
            raise ValidationError(
                f"CUT for {variable!r} needs {2 ** len(parents)} rows of 2 entries, got shape {rows.shape}"
            )
        if len(set(parents)) != len(parents):
            raise ValidationError(f"CUT for {variable!r} lists a parent twice")
        rows.setflags(write=False)
        self.variable = variable
        self.parents = parents
        self.rows = rows

    def __eq__(self, other):
        if not isinstance(other, CUT):
            return NotImplemented
        return (
            self.variable == other.variable
            and self.parents == other.parents
            and np.array_equal(self.rows, other.rows)
        )

    def __repr__(self):
        return f"CUT({self.variable!r}, {list(self.parents)!r}, {self.rows.tolist()!r})"

    def row_index(self, assignment: Mapping[str, int]) -> int:
        r = 0
        for p in self.parents:
            r = 2 * r + assignment[p]
        return r

    def as_array(self) -> np.ndarray:
        """Dense array with axes ``parents + (variable,)``."""
        return self.rows.reshape((2,) * (len(self.parents) + 1))


class UtilityNetwork:
    """DAG of boolean variables with one :class:`CUT` each.

    Construction checks only types and shapes; call :func:`validate` for the
    acyclicity and normalization report. Queries validate on first use and
    raise :class:`~utildist.errors.ValidationError` on a bad network.
    """

    kind = "utility"

    def __init__(self, variables: Sequence[str], edges: Iterable, cuts):
        variables = tuple(variables)
        if not variables:
            raise ValidationError("a network needs at least one variable")
        for v in variables:
            if not isinstance(v, str) or not v:
                raise ValidationError(f"variable names must be nonempty strings, got {v!r}")
        if len(set(variables)) != len(variables):
            raise ValidationError("variable names must be distinct")
        known = set(variables)
        edge_list = []
        for e in edges:
            parent, child = e
            for end in (parent, child):
                if end not in known:
                    raise ValidationError(f"edge {parent}->{child} names unknown variable {end!r}")
            edge_list.append((parent, child))
        if isinstance(cuts, Mapping):
            cuts = [c if isinstance(c, CUT) else CUT(v, *c) for v, c in cuts.items()]
        table = {}
        for c in cuts:
            if c.variable not in known:
                raise ValidationError(f"CUT for unknown variable {c.variable!r}")
            if c.variable in table:
                raise ValidationError(f"two CUTs for {c.variable!r}")
            for p in c.parents:
                if p not in known:
                    raise ValidationError(f"CUT for {c.variable!r} names unknown parent {p!r}")
            table[c.variable] = c
        self.variables = variables
        self.edges = tuple(edge_list)
        self.cuts = {v: table[v] for v in variables if v in table}
        self._issues = None

    def __eq__(self, other):
        if not isinstance(other, UtilityNetwork):
            return NotImplemented
        return (
            type(self) is type(other)
            and self.variables == other.variables
            and sorted(self.edges) == sorted(other.edges)
            and self.cuts == other.cuts
        )

    def __repr__(self):
        return f"{type(self).__name__}(variables={list(self.variables)!r}, edges={list(self.edges)!r})"

    def parents(self, v: str) -> tuple[str, ...]:
        return self.cuts[v].parents

    def children(self, v: str) -> list[str]:
        return [c for p, c in self.edges if p == v]

    def require_valid(self):
        if self._issues is None:
            self._issues = tuple(validate(self))
        if self._issues:
            raise ValidationError("invalid network: " + "; ".join(self._issues))
        return self

    def check_names(self, names: Iterable[str]):
        known = set(self.variables)
        for n in names:
            if n not in known:
                raise ValidationError(f"unknown variable {n!r}")


def validate(net: UtilityNetwork, tol: float = DEFAULT_TOL) -> list[str]:
    """Problems with ``net`` as human-readable strings; empty when valid."""
    issues = []
    for p, c in net.edges:
        if p == c:
            issues.append(f"cycle: self-loop on {p!r}")
    ts = graphlib.TopologicalSorter({v: set() for v in net.variables})
    for p, c in net.edges:
        if p != c:
            ts.add(c, p)
    try:
        ts.prepare()
    except graphlib.CycleError as exc:
        issues.append("cycle: " + " -> ".join(exc.args[1]))
    for v in net.variables:
        if v not in net.cuts:
            issues.append(f"missing CUT for {v!r}")
            continue
        cut = net.cuts[v]
        edge_parents = {p for p, c in net.edges if c == v}
        if set(cut.parents) != edge_parents:
            issues.append(
                f"CUT parents of {v!r} {sorted(cut.parents)} do not match edges {sorted(edge_parents)}"
            )
        for r, row in enumerate(cut.rows):
            where = ", ".join(f"{p}={b}" for p, b in zip(cut.parents, _bits(r, len(cut.parents))))
            where = f"{v!r} | {where}" if where else f"{v!r}"
            if not np.all(np.isfinite(row)) or np.any(row < 0) or np.any(row > 1):
                issues.append(f"CUT entries outside [0, 1] at {where}")
            elif abs(math.fsum(row) - 1.0) > tol:
                issues.append(f"CUT row sums to {math.fsum(row):.12g}, not 1, at {where}")
    return issues


def _bits(r: int, k: int) -> tuple[int, ...]:
    return tuple((r >> (k - 1 - i)) & 1 for i in range(k))


def _as_bit(name, value) -> int:
    if isinstance(value, (bool, int, np.integer)) and value in (0, 1):
        return int(value)
    raise ValidationError(f"value of {name!r} must be 0 or 1, got {value!r}")


class UEvent:
    """A set of complete assignments: the union of one or more partial assignments.

    ``UEvent({"A": 1})`` is every assignment with ``A=1``; ``UEvent({})`` is
    everything; ``UEvent([{"A": 1}, {"B": 0}])`` is their union.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        if terms is None:
            terms = [{}]
        elif isinstance(terms, Mapping):
            terms = [terms]
        clean = []
        for t in terms:
            item = tuple(sorted((n, _as_bit(n, b)) for n, b in dict(t).items()))
            if item not in clean:
                clean.append(item)
        if not clean:
            raise ValidationError("an event needs at least one partial assignment")
        self.terms = tuple(clean)

    @classmethod
    def _from_terms(cls, terms) -> "UEvent":
        e = object.__new__(cls)
        e.terms = tuple(dict.fromkeys(terms))
        return e

    @property
    def scope(self) -> tuple[str, ...]:
        return tuple(sorted({n for t in self.terms for n, _ in t}))

    def is_empty(self) -> bool:
        return not self.terms

    def __and__(self, other: "UEvent") -> "UEvent":
        out = []
        for a in self.terms:
            for b in other.terms:
                merged = dict(a)
                if all(merged.setdefault(n, v) == v for n, v in b):
                    out.append(tuple(sorted(merged.items())))
        return UEvent._from_terms(out)

    def contains(self, assignment: Mapping[str, int]) -> bool:
        return any(all(assignment[n] == v for n, v in t) for t in self.terms)

    def __eq__(self, other):
        return isinstance(other, UEvent) and set(self.terms) == set(other.terms)

    def __hash__(self):
        return hash(frozenset(self.terms))

    def __repr__(self):
        return f"UEvent({[dict(t) for t in self.terms]!r})"


def _event(e) -> UEvent:
    return e if isinstance(e, UEvent) else UEvent(e)


def joint_utility(net: UtilityNetwork, a: Mapping[str, int]) -> float:
    """Product of the CUT entries selected by a complete assignment."""
    net.require_valid()
    net.check_names(a)
    missing = [v for v in net.variables if v not in a]
    if missing:
        raise ValidationError(f"assignment is incomplete; missing {missing}")
    bits = {n: _as_bit(n, b) for n, b in a.items()}
    out = 1.0
    for v in net.variables:
        cut = net.cuts[v]
        out *= cut.rows[cut.row_index(bits), bits[v]]
    return out


# -- factor algebra -----------------------------------------------------------
# A factor is (scope, array) with one length-2 axis per scope variable.


def _align(scope, array, target):
    order = [scope.index(v) for v in target if v in scope]
    arr = np.transpose(array, order) if order else array
    shape = [2 if v in scope else 1 for v in target]
    return arr.reshape(shape)


def _multiply(factors):
    scope = []
    for s, _ in factors:
        for v in s:
            if v not in scope:
                scope.append(v)
    out = np.ones((2,) * len(scope))
    for s, arr in factors:
        out = out * _align(list(s), arr, scope)
    return tuple(scope), out


def _indicator(event: UEvent, net: UtilityNetwork):
    scope = event.scope
    net.check_names(scope)
    if len(scope) > MAX_EVENT_SCOPE:
        raise ResourceError(f"event mentions {len(scope)} variables; limit is {MAX_EVENT_SCOPE}")
    if len(event.terms) == 1:
        return [((n,), np.array([1.0 - b, float(b)])) for n, b in event.terms[0]]
    arr = np.zeros((2,) * len(scope))
    pos = {n: i for i, n in enumerate(scope)}
    for t in event.terms:
        idx = [slice(None)] * len(scope)
        for n, b in t:
            idx[pos[n]] = b
        arr[tuple(idx)] = 1.0
    return [(scope, arr)]


def elimination_order(factors, keep=(), tie_order: Sequence[str] = ()) -> list[str]:
    """Greedy min-degree order over the variables of ``factors`` not in ``keep``.

    Ties go to the variable listed first in ``tie_order`` (then by name).
    """
    rank = {v: i for i, v in enumerate(tie_order)}
    nbrs = {}
    for scope, _ in factors:
        for v in scope:
            nbrs.setdefault(v, set()).update(scope)
    for v in nbrs:
        nbrs[v].discard(v)
    todo = {v for v in nbrs if v not in set(keep)}
    order = []
    while todo:
        v = min(todo, key=lambda x: (len(nbrs[x]), rank.get(x, len(rank)), x))
        order.append(v)
        todo.remove(v)
        for a in nbrs[v]:
            nbrs[a].update(nbrs[v] - {a})
            nbrs[a].discard(v)
        del nbrs[v]
    return order


def _eliminate(factors, keep, order=None, tie_order=()):
    factors = list(factors)
    if order is None:
        order = elimination_order(factors, keep, tie_order)
    for v in order:
        touching = [f for f in factors if v in f[0]]
        if not touching:
            continue
        factors = [f for f in factors if v not in f[0]]
        scope, arr = _multiply(touching)
        ax = scope.index(v)
        factors.append((scope[:ax] + scope[ax + 1 :], arr.sum(axis=ax)))
    scope, arr = _multiply(factors) if factors else ((), np.ones(()))
    extra = tuple(i for i, v in enumerate(scope) if v not in keep)
    if extra:
        arr = arr.sum(axis=extra)
        scope = tuple(v for v in scope if v in keep)
    return _align(list(scope), arr, list(keep)) * np.ones((2,) * len(keep))


def _network_factors(net):
    return [(c.parents + (c.variable,), c.as_array()) for c in net.cuts.values()]


def marginal_table(net: UtilityNetwork, variables: Sequence[str], order=None) -> np.ndarray:
    """Utility of every joint value of ``variables`` (array, one axis each)."""
    net.require_valid()
    variables = list(variables)
    net.check_names(variables)
    if len(set(variables)) != len(variables):
        raise ValidationError("query variables repeat")
    return _eliminate(_network_factors(net), variables, order, net.variables)


def _mass(net, event: UEvent, order=None) -> float:
    if event.is_empty():
        return 0.0
    factors = _network_factors(net) + _indicator(event, net)
    return float(_eliminate(factors, [], order, net.variables))


def marginal_utility(net: UtilityNetwork, e, order: Sequence[str] | None = None) -> float:
    """Total utility of the complete assignments in event ``e``.

    ``order`` overrides the elimination order (it must cover every variable).
    """
    net.require_valid()
    e = _event(e)
    if e.is_empty():
        raise ValidationError("event is empty")
    return _mass(net, e, order)


def enumerate_marginal(net: UtilityNetwork, e) -> float:
    """Brute-force :func:`marginal_utility` by summing :func:`joint_utility`."""
    net.require_valid()
    e = _event(e)
    net.check_names(e.scope)
    if len(net.variables) > MAX_ENUMERATION:
        raise ResourceError(f"enumeration limited to {MAX_ENUMERATION} variables")
    total = []
    for bits in itertools.product((0, 1), repeat=len(net.variables)):
        a = dict(zip(net.variables, bits))
        if e.contains(a):
            total.append(joint_utility(net, a))
    return math.fsum(total)


def conditional_utility_query(net: UtilityNetwork, x, y) -> float:
    """``u(x & y) / u(y)`` over network events."""
    net.require_valid()
    x, y = _event(x), _event(y)
    net.check_names(x.scope)
    uy = _mass(net, y)
    if uy <= 0.0:
        raise NullConditioningError(f"conditioning event {y!r} has {net.kind} 0")
    return _mass(net, x & y) / uy


def _disjoint_sets(net, X, Y, Z):
    sets = []
    for s in (X, Y, Z):
        s = [s] if isinstance(s, str) else list(s)
        net.check_names(s)
        sets.append(s)
    X, Y, Z = sets
    if not X or not Y:
        raise ValidationError("X and Y must be nonempty")
    for a, b, name in ((X, Y, "X and Y"), (X, Z, "X and Z"), (Y, Z, "Y and Z")):
        if set(a) & set(b):
            raise ValidationError(f"{name} overlap on {sorted(set(a) & set(b))}")
    return X, Y, Z


def d_separated(net: UtilityNetwork, X, Y, Z=()) -> bool:
    """Whether ``Z`` blocks every trail between ``X`` and ``Y`` (reachability form)."""
    X, Y, Z = _disjoint_sets(net, X, Y, Z)
    parents = {v: [p for p, c in net.edges if c == v] for v in net.variables}
    children = {v: [c for p, c in net.edges if p == v] for v in net.variables}
    z = set(Z)
    # Z and its ancestors: a collider in this set is an open v-structure
    anc, stack = set(), list(z)
    while stack:
        v = stack.pop()
        if v not in anc:
            anc.add(v)
            stack.extend(parents[v])
    targets = set(Y)
    queue = deque((x, "up") for x in X)
    seen = set()
    while queue:
        v, d = queue.popleft()
        if (v, d) in seen:
            continue
        seen.add((v, d))
        if v not in z and v in targets:
            return False
        if d == "up" and v not in z:
            queue.extend((p, "up") for p in parents[v])
            queue.extend((c, "down") for c in children[v])
        elif d == "down":
            if v not in z:
                queue.extend((c, "down") for c in children[v])
            if v in anc:
                queue.extend((p, "up") for p in parents[v])
    return True


def numerically_independent(net: UtilityNetwork, X, Y, Z=(), tol: float = DEFAULT_TOL) -> bool:
    """``u(x & y | z) == u(x | z) * u(y | z)`` for every joint value, within ``tol``.

    Values of ``Z`` with zero utility are skipped.
    """
    X, Y, Z = _disjoint_sets(net, X, Y, Z)
    t = marginal_table(net, X + Y + Z)
    nx, ny = 2 ** len(X), 2 ** len(Y)
    t = t.reshape(nx, ny, -1)
    uz = t.sum(axis=(0, 1))
    live = uz > 0.0
    if not live.any():
        return True
    joint = t[:, :, live] / uz[live]
    prod = joint.sum(axis=1)[:, None, :] * joint.sum(axis=0)[None, :, :]
    return float(np.max(np.abs(joint - prod))) <= tol
