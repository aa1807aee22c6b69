"""Tabulated multiattribute utility functions and the classical independence deciders.

A :class:`TabulatedUtility` stores one real per state of a finite
:class:`AttributeSpace` as a dense numpy array, one axis per attribute.
Lotteries are compared by expected utility, and the independence hierarchy
(utility independence, singulary, mutual, additive) is decided exactly on
the table:

* ``Y`` is utility independent of ``Z`` iff every slice ``u(., z)`` over the
  ``Y``-assignments is a positive affine transform of one reference slice.
  Under expected utility that is the same as the conditional lottery
  orderings not depending on ``z``. Constant slices are compatible with
  anything.
* Additive independence holds iff every 2x2 interaction contrast
  ``u(a,b,c) - u(a0,b,c) - u(a,b0,c) + u(a0,b0,c)`` vanishes, i.e. iff the
  table is reproduced by its additive reconstruction around the first value
  of every domain.

Equality checks use ``1e-9 * max(1, max|u|)`` unless a tolerance is passed.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DecompositionError,
    NullConditioningError,
    ResourceError,
    SelfCheckError,
    ValidationError,
)
from .factors import DEFAULT_TOL, TioliFunction

__all__ = [
    "AttributeSpace",
    "TabulatedUtility",
    "Lottery",
    "Ordering",
    "AdditiveDecomposition",
    "AdditiveWitness",
    "IndependenceReport",
    "expected_utility",
    "prefers",
    "condition_lottery",
    "conditional_prefers",
    "restrict",
    "find_ui_violation",
    "is_utility_independent",
    "is_singularly_independent",
    "is_mutually_independent",
    "additive_witness",
    "is_additive_independent",
    "additive_decomposition",
    "is_tioli",
    "classify",
]

MAX_MUTUAL_ATTRIBUTES = 20


class AttributeSpace:
    """Ordered attributes, each with an ordered finite domain of at least two labels."""

    __slots__ = ("_attrs", "_index")

    def __init__(self, attributes):
        pairs = list(attributes.items() if isinstance(attributes, Mapping) else attributes)
        if not pairs:
            raise ValidationError("an attribute space needs at least one attribute")
        attrs = []
        for name, values in pairs:
            if not isinstance(name, str) or not name:
                raise ValidationError(f"attribute names must be nonempty strings, got {name!r}")
            values = tuple(values)
            if len(values) < 2:
                raise ValidationError(f"attribute {name!r} needs at least 2 values")
            if len(set(values)) != len(values):
                raise ValidationError(f"attribute {name!r} has duplicate values")
            attrs.append((name, values))
        names = [n for n, _ in attrs]
        if len(set(names)) != len(names):
            raise ValidationError("attribute names must be distinct")
        self._attrs = tuple(attrs)
        self._index = {n: i for i, n in enumerate(names)}

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self._attrs)

    @property
    def domains(self) -> tuple[tuple, ...]:
        return tuple(v for _, v in self._attrs)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(v) for _, v in self._attrs)

    @property
    def size(self) -> int:
        return math.prod(self.shape)

    def __len__(self):
        return len(self._attrs)

    def __iter__(self):
        return iter(self._attrs)

    def __eq__(self, other):
        return isinstance(other, AttributeSpace) and self._attrs == other._attrs

    def __hash__(self):
        return hash(self._attrs)

    def __repr__(self):
        return f"AttributeSpace({list(self._attrs)!r})"

    def axis(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ValidationError(f"unknown attribute {name!r}") from None

    def domain(self, name: str) -> tuple:
        return self._attrs[self.axis(name)][1]

    def value_index(self, name: str, value) -> int:
        dom = self.domain(name)
        try:
            return dom.index(value)
        except ValueError:
            raise ValidationError(f"{value!r} is not in the domain of {name!r}") from None

    def states(self):
        """All states in row-major (first attribute slowest) order."""
        return itertools.product(*self.domains)

    def state_index(self, state) -> tuple[int, ...]:
        if isinstance(state, Mapping):
            if set(state) != set(self.names):
                raise ValidationError(f"state must assign every attribute exactly once: {dict(state)!r}")
            state = tuple(state[n] for n in self.names)
        state = tuple(state)
        if len(state) != len(self._attrs):
            raise ValidationError(f"state {state!r} has {len(state)} values, expected {len(self._attrs)}")
        return tuple(self.value_index(n, v) for (n, _), v in zip(self._attrs, state))

    def is_boolean(self) -> bool:
        return all(len(v) == 2 for _, v in self._attrs)


class TabulatedUtility:
    """Explicit utility for every state of an :class:`AttributeSpace`."""

    __slots__ = ("space", "_values")

    def __init__(self, space: AttributeSpace, values):
        values = np.array(values, dtype=float)
        if values.shape != space.shape:
            raise ValidationError(f"table shape {values.shape} does not match space {space.shape}")
        if not np.all(np.isfinite(values)):
            raise ValidationError("utilities must be finite")
        values.setflags(write=False)
        self.space = space
        self._values = values

    @classmethod
    def from_entries(cls, space: AttributeSpace, entries) -> "TabulatedUtility":
        """Build from ``{state: utility}`` or ``[(state, utility), ...]``; must be total."""
        pairs = entries.items() if isinstance(entries, Mapping) else entries
        values = np.full(space.shape, np.nan)
        seen = set()
        for state, u in pairs:
            idx = space.state_index(state)
            if idx in seen:
                raise ValidationError(f"state {state!r} listed twice")
            seen.add(idx)
            values[idx] = float(u)
        if len(seen) != space.size:
            missing = next(s for s in space.states() if space.state_index(s) not in seen)
            raise ValidationError(
                f"table lists {len(seen)} of {space.size} states; first missing: {missing!r}"
            )
        return cls(space, values)

    @classmethod
    def from_function(cls, space: AttributeSpace, f) -> "TabulatedUtility":
        return cls(space, np.array([f(*s) for s in space.states()], dtype=float).reshape(space.shape))

    @property
    def values(self) -> np.ndarray:
        """Read-only array with one axis per attribute."""
        return self._values

    def __getitem__(self, state) -> float:
        return float(self._values[self.space.state_index(state)])

    def items(self):
        for s in self.space.states():
            yield s, float(self._values[self.space.state_index(s)])

    def __eq__(self, other):
        if not isinstance(other, TabulatedUtility):
            return NotImplemented
        return self.space == other.space and np.array_equal(self._values, other._values)

    def __repr__(self):
        return f"TabulatedUtility({self.space!r}, {self._values.tolist()!r})"

    def affine(self, a: float, b: float) -> "TabulatedUtility":
        """The table ``a + b * u``."""
        return TabulatedUtility(self.space, a + b * self._values)

    def default_tol(self) -> float:
        return DEFAULT_TOL * max(1.0, float(np.max(np.abs(self._values))))


def _tol(u: TabulatedUtility, tol):
    return u.default_tol() if tol is None else tol


class Lottery:
    """Probability distribution over states; unlisted states have probability 0."""

    __slots__ = ("_probs",)

    def __init__(self, probs, tol: float = DEFAULT_TOL):
        pairs = probs.items() if isinstance(probs, Mapping) else probs
        clean = {}
        for state, p in pairs:
            state = tuple(state)
            p = float(p)
            if not math.isfinite(p) or p < 0:
                raise ValidationError(f"probability of {state!r} must be a nonnegative number, got {p!r}")
            clean[state] = clean.get(state, 0.0) + p
        total = math.fsum(clean.values())
        if abs(total - 1.0) > tol:
            raise ValidationError(f"lottery probabilities sum to {total!r}, not 1")
        self._probs = clean

    @classmethod
    def uniform(cls, states: Iterable) -> "Lottery":
        states = [tuple(s) for s in states]
        return cls({s: 1.0 / len(states) for s in states})

    @classmethod
    def point(cls, state) -> "Lottery":
        return cls({tuple(state): 1.0})

    @classmethod
    def from_array(cls, space: AttributeSpace, array) -> "Lottery":
        array = np.asarray(array, dtype=float)
        return cls({s: float(array[space.state_index(s)]) for s in space.states() if array[space.state_index(s)] > 0})

    @property
    def probs(self) -> Mapping[tuple, float]:
        return MappingProxyType(self._probs)

    def __eq__(self, other):
        if not isinstance(other, Lottery):
            return NotImplemented
        a = {s: p for s, p in self._probs.items() if p}
        b = {s: p for s, p in other._probs.items() if p}
        return a == b

    def __repr__(self):
        return f"Lottery({self._probs!r})"

    def to_array(self, space: AttributeSpace) -> np.ndarray:
        out = np.zeros(space.shape)
        for state, p in self._probs.items():
            out[space.state_index(state)] += p
        return out

    def marginal(self, space: AttributeSpace, name: str) -> dict:
        arr = self.to_array(space)
        ax = space.axis(name)
        other = tuple(i for i in range(len(space)) if i != ax)
        m = arr.sum(axis=other)
        return dict(zip(space.domain(name), m.tolist()))


class Ordering(str, enum.Enum):
    FIRST = "first"
    SECOND = "second"
    INDIFFERENT = "indifferent"


def expected_utility(u: TabulatedUtility, p: Lottery) -> float:
    """``sum_s p(s) * u(s)``."""
    arr = p.to_array(u.space)
    return math.fsum((arr * u.values).ravel())


def _compare(e1, e2, tol):
    if abs(e1 - e2) <= tol:
        return Ordering.INDIFFERENT
    return Ordering.FIRST if e1 > e2 else Ordering.SECOND


def prefers(u: TabulatedUtility, p1: Lottery, p2: Lottery, tol: float = DEFAULT_TOL) -> Ordering:
    """Which lottery has the higher expected utility."""
    return _compare(expected_utility(u, p1), expected_utility(u, p2), tol)


def condition_lottery(space: AttributeSpace, p: Lottery, evidence: Mapping) -> Lottery:
    """Restrict ``p`` to the states matching ``evidence`` and renormalize."""
    arr = p.to_array(space)
    mask = np.ones(space.shape, dtype=bool)
    for name, value in evidence.items():
        ax, vi = space.axis(name), space.value_index(name, value)
        keep = np.zeros(space.shape[ax], dtype=bool)
        keep[vi] = True
        shape = [1] * len(space)
        shape[ax] = space.shape[ax]
        mask &= keep.reshape(shape)
    arr = np.where(mask, arr, 0.0)
    mass = math.fsum(arr.ravel())
    if mass <= 0:
        ev = ", ".join(f"{k}={v}" for k, v in evidence.items())
        raise NullConditioningError(f"evidence {ev} has probability 0 under the lottery")
    return Lottery.from_array(space, arr / mass)


def conditional_prefers(
    u: TabulatedUtility, p1: Lottery, p2: Lottery, evidence: Mapping, tol: float = DEFAULT_TOL
) -> Ordering:
    """Compare ``p1`` and ``p2`` after conditioning both on ``evidence``."""
    q1 = condition_lottery(u.space, p1, evidence)
    q2 = condition_lottery(u.space, p2, evidence)
    return prefers(u, q1, q2, tol)


def restrict(u: TabulatedUtility, fixed: Mapping) -> TabulatedUtility:
    """Fix some attributes to given values and drop them from the space."""
    idx = [slice(None)] * len(u.space)
    for name, value in fixed.items():
        idx[u.space.axis(name)] = u.space.value_index(name, value)
    rest = [(n, d) for n, d in u.space if n not in fixed]
    if not rest:
        raise ValidationError("cannot fix every attribute")
    return TabulatedUtility(AttributeSpace(rest), u.values[tuple(idx)])


def _partition(space: AttributeSpace, Y, Z):
    Y = [Y] if isinstance(Y, str) else list(Y)
    Z = [Z] if isinstance(Z, str) else list(Z)
    if not Y or not Z:
        raise ValidationError("Y and Z must be nonempty")
    for n in Y + Z:
        space.axis(n)
    if set(Y) & set(Z):
        raise ValidationError(f"Y and Z overlap on {sorted(set(Y) & set(Z))}")
    if set(Y) | set(Z) != set(space.names) or len(Y) + len(Z) != len(space):
        raise ValidationError(
            "Y and Z must partition the attributes; restrict() the table to fix the others"
        )
    return [space.axis(n) for n in Y], [space.axis(n) for n in Z]


def _slices(values: np.ndarray, y_axes, z_axes) -> np.ndarray:
    """Matrix with one column per Z-assignment and one row per Y-assignment."""
    moved = np.transpose(values, list(y_axes) + list(z_axes))
    ny = math.prod(values.shape[a] for a in y_axes)
    return moved.reshape(ny, -1)


def _affine_violation(cols: np.ndarray, tol: float, strict: bool = False):
    """Index pair (ref, bad) of slices not positive-affine related, else None.

    With ``strict``, a constant slice next to a nonconstant one is a violation
    (total indifference at one ``z`` but not at another).
    """
    spread = np.ptp(cols, axis=0)
    live = np.flatnonzero(spread > tol)
    if live.size == 0:
        return None
    ref = int(live[0])
    if strict and live.size < cols.shape[1]:
        return ref, int(np.flatnonzero(spread <= tol)[0])
    r = cols[:, ref]
    rc = r - r.mean()
    denom = float(rc @ rc)
    for j in live[1:]:
        s = cols[:, j]
        sc = s - s.mean()
        b = float(sc @ rc) / denom
        fit = s.mean() + b * rc
        if not b > 0 or float(np.max(np.abs(s - fit))) > tol:
            return ref, int(j)
    return None


def find_ui_violation(u: TabulatedUtility, Y, Z, tol: float | None = None, strict: bool = False):
    """Witness that ``Y`` is not utility independent of ``Z``, or ``None``.

    The witness is a pair of ``Z`` assignments (as dicts) whose slices over
    ``Y`` are not positive affine transforms of each other, so some pair of
    lotteries on ``Y`` is ranked differently under them. By default a
    constant slice is compatible with every other slice; ``strict=True``
    demands that either all slices or none be constant.
    """
    y_axes, z_axes = _partition(u.space, Y, Z)
    cols = _slices(u.values, y_axes, z_axes)
    hit = _affine_violation(cols, _tol(u, tol), strict)
    if hit is None:
        return None
    z_shape = [u.space.shape[a] for a in z_axes]
    names = [u.space.names[a] for a in z_axes]
    out = []
    for flat in hit:
        idx = np.unravel_index(flat, z_shape)
        out.append({n: u.space.domain(n)[i] for n, i in zip(names, idx)})
    return tuple(out)


def is_utility_independent(
    u: TabulatedUtility, Y, Z, tol: float | None = None, strict: bool = False
) -> bool:
    """Classical utility independence of attribute set ``Y`` from its complement ``Z``."""
    return find_ui_violation(u, Y, Z, tol, strict) is None


def _need_two(u):
    if len(u.space) < 2:
        raise ValidationError("independence between attributes needs at least 2 attributes")


def is_singularly_independent(u: TabulatedUtility, tol: float | None = None, strict: bool = False) -> bool:
    """Every single attribute is utility independent of all the others ("singulary")."""
    _need_two(u)
    names = u.space.names
    return all(
        is_utility_independent(u, [n], [m for m in names if m != n], tol, strict) for n in names
    )


def _proper_subsets(n):
    for mask in range(1, (1 << n) - 1):
        yield [i for i in range(n) if mask >> i & 1]


def is_mutually_independent(u: TabulatedUtility, tol: float | None = None, strict: bool = False) -> bool:
    """Every nonempty proper subset is utility independent of its complement."""
    _need_two(u)
    n = len(u.space)
    if n > MAX_MUTUAL_ATTRIBUTES:
        raise ResourceError(f"mutual independence check limited to {MAX_MUTUAL_ATTRIBUTES} attributes, got {n}")
    tol = _tol(u, tol)
    for ys in _proper_subsets(n):
        zs = [i for i in range(n) if i not in ys]
        if _affine_violation(_slices(u.values, ys, zs), tol, strict) is not None:
            return False
    return True


def _additive_reconstruction(values: np.ndarray) -> np.ndarray:
    ref = (0,) * values.ndim
    base = values[ref]
    out = np.full(values.shape, base)
    for ax in range(values.ndim):
        idx = [0] * values.ndim
        idx[ax] = slice(None)
        line = values[tuple(idx)] - base
        shape = [1] * values.ndim
        shape[ax] = values.shape[ax]
        out = out + line.reshape(shape)
    return out


@dataclass(frozen=True)
class AdditiveWitness:
    """Two lotteries with identical single-attribute marginals but different expected utility."""

    uniform: Lottery
    diagonal: Lottery
    eu_uniform: float
    eu_diagonal: float


def additive_witness(u: TabulatedUtility, tol: float | None = None) -> AdditiveWitness | None:
    """Witness lotteries against additive independence, or ``None`` if additive.

    Scans attribute pairs in order for the first 2x2 square (corners at the
    reference values and at ``(a, b)``, other attributes fixed) with nonzero
    interaction. The witness pits the uniform lottery on the four corners
    against the half/half lottery on the diagonal through the reference corner.
    """
    _need_two(u)
    tol = _tol(u, tol)
    v = u.values
    n = v.ndim
    if float(np.max(np.abs(v - _additive_reconstruction(v)))) <= tol:
        return None
    for i, j in itertools.combinations(range(n), 2):
        vi = np.take(v, [0], axis=i)
        vj = np.take(v, [0], axis=j)
        vij = np.take(vi, [0], axis=j)
        contrast = v - vi - vj + vij
        bad = np.argwhere(np.abs(contrast) > tol)
        if bad.size == 0:
            continue
        corner = tuple(int(k) for k in bad[0])
        ref = list(corner)
        ref[i] = 0
        ref[j] = 0
        mixed_i, mixed_j = list(corner), list(corner)
        mixed_i[j] = 0
        mixed_j[i] = 0
        label = lambda idx: tuple(d[k] for d, k in zip(u.space.domains, idx))
        corners = [label(ref), label(mixed_i), label(mixed_j), label(corner)]
        p1 = Lottery.uniform(corners)
        p2 = Lottery({label(corner): 0.5, label(ref): 0.5})
        return AdditiveWitness(p1, p2, expected_utility(u, p1), expected_utility(u, p2))
    raise SelfCheckError("additive reconstruction failed but no interaction contrast found")


def is_additive_independent(u: TabulatedUtility, tol: float | None = None) -> bool:
    """Lottery preferences depend only on single-attribute marginals."""
    return additive_witness(u, tol) is None


@dataclass(frozen=True)
class AdditiveDecomposition:
    """``u(x) = constant + sum_i value_functions[name_i][x_i]``.

    The per-attribute scaling constants are folded into the value functions.
    """

    space: AttributeSpace
    value_functions: Mapping[str, Mapping]
    constant: float

    def __call__(self, state) -> float:
        idx = self.space.state_index(state)
        return self.constant + math.fsum(
            self.value_functions[n][d[k]] for (n, d), k in zip(self.space, idx)
        )

    def to_table(self) -> TabulatedUtility:
        return TabulatedUtility.from_function(self.space, lambda *s: self(s))


def additive_decomposition(u: TabulatedUtility, tol: float | None = None) -> AdditiveDecomposition:
    """Additive value functions anchored at the first value of every domain.

    Raises
    ------
    DecompositionError
        If the table is not additive; ``.witness`` carries the lotteries.
    """
    witness = additive_witness(u, tol)
    if witness is not None:
        raise DecompositionError(
            f"table is not additive: EU {witness.eu_uniform!r} vs {witness.eu_diagonal!r} "
            "under equal marginals",
            witness,
        )
    v = u.values
    base = float(v[(0,) * v.ndim])
    fns = {}
    for ax, (name, dom) in enumerate(u.space):
        idx = [0] * v.ndim
        idx[ax] = slice(None)
        line = v[tuple(idx)] - base
        fns[name] = MappingProxyType(dict(zip(dom, line.tolist())))
    dec = AdditiveDecomposition(u.space, MappingProxyType(fns), base)
    if float(np.max(np.abs(dec.to_table().values - v))) > _tol(u, tol):
        raise SelfCheckError("additive decomposition does not reproduce the table")
    return dec


def is_tioli(u: TabulatedUtility, mode: str = "strict", tol: float | None = None) -> TioliFunction | None:
    """TIOLI weights ``k_i = u(e_i) - u(0)`` if the boolean table is additive.

    ``mode="strict"`` additionally requires ``u(0, ..., 0) == 0``;
    ``mode="up_to_affine"`` drops that constant. Domains are read as 0/1 in
    declared order.
    """
    if mode not in ("strict", "up_to_affine"):
        raise ValidationError(f"mode must be 'strict' or 'up_to_affine', got {mode!r}")
    if not u.space.is_boolean():
        raise ValidationError("TIOLI functions need boolean (two-valued) attributes")
    t = _tol(u, tol)
    v = u.values
    zero = float(v[(0,) * v.ndim])
    if mode == "strict" and abs(zero) > t:
        return None
    if len(u.space) > 1 and not is_additive_independent(u, tol):
        return None
    ks = {}
    for ax, name in enumerate(u.space.names):
        idx = [0] * v.ndim
        idx[ax] = 1
        ks[name] = float(v[tuple(idx)]) - zero
    return TioliFunction(ks)


@dataclass(frozen=True)
class IndependenceReport:
    """Outcome of every decider on one table.

    ``pairwise`` maps ``(Y, Z)`` name tuples to the utility-independence
    verdict, and ``ui_witnesses`` holds the offending pair of Z-assignments
    for each failed pair. ``tioli_strict`` / ``tioli_affine`` are ``None``
    when the table is not TIOLI in that mode (or not boolean, see
    ``tioli_applicable``).
    """

    singular: bool
    mutual: bool
    additive: bool
    tioli_strict: TioliFunction | None
    tioli_affine: TioliFunction | None
    tioli_applicable: bool
    pairwise: Mapping = field(default_factory=dict)
    ui_witnesses: Mapping = field(default_factory=dict)
    additive_witness: AdditiveWitness | None = None

    def __post_init__(self):
        if (self.additive and not self.mutual) or (self.mutual and not self.singular):
            raise SelfCheckError(
                f"implication chain broken: additive={self.additive} mutual={self.mutual} "
                f"singular={self.singular}"
            )


def classify(u: TabulatedUtility, pairs: Sequence | None = None, tol: float | None = None) -> IndependenceReport:
    """Run every decider. ``pairs`` defaults to each attribute against the rest."""
    _need_two(u)
    names = u.space.names
    if pairs is None:
        pairs = [((n,), tuple(m for m in names if m != n)) for n in names]
    pairwise, witnesses = {}, {}
    for Y, Z in pairs:
        key = (tuple([Y] if isinstance(Y, str) else Y), tuple([Z] if isinstance(Z, str) else Z))
        w = find_ui_violation(u, key[0], key[1], tol)
        pairwise[key] = w is None
        if w is not None:
            witnesses[key] = w
    aw = additive_witness(u, tol)
    boolean = u.space.is_boolean()
    return IndependenceReport(
        singular=is_singularly_independent(u, tol),
        mutual=is_mutually_independent(u, tol),
        additive=aw is None,
        tioli_strict=is_tioli(u, "strict", tol) if boolean else None,
        tioli_affine=is_tioli(u, "up_to_affine", tol) if boolean else None,
        tioli_applicable=boolean,
        pairwise=MappingProxyType(pairwise),
        ui_witnesses=MappingProxyType(witnesses),
        additive_witness=aw,
    )
