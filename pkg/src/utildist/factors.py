"""Utility distributions over factors, with subjective conditioning.

A utility distribution assigns nonnegative weights summing to one to a
finite universe of *factors*; a set of factors is worth the sum of its
members' weights. With that lift the structure is the same as a discrete
probability measure, so conditioning and independence read the same way::

    u(x | y) = u(x & y) / u(y)
    x independent of y  <=>  u(x | y) == u(x)

TIOLI ("take it or leave it") functions are the unnormalized form,
``u(x) = sum(k_i * x_i)`` over boolean attributes with weights of any sign;
:func:`normalize` turns one into a distribution plus the affine record that
maps back.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import DegenerateError, NullConditioningError, UnknownFactorError, ValidationError

__all__ = [
    "DEFAULT_TOL",
    "UtilityDistribution",
    "TioliFunction",
    "AffineRecord",
    "complement_label",
    "utility",
    "conditional_utility",
    "is_subjectively_independent",
    "normalize",
]

DEFAULT_TOL = 1e-9

FactorSet = frozenset


def complement_label(label: str) -> str:
    """Label given to the complement indicator of a polarity-flipped factor."""
    return "~" + label


def _check_labels(labels):
    for label in labels:
        if not isinstance(label, str) or not label:
            raise ValidationError(f"factor labels must be nonempty strings, got {label!r}")


class UtilityDistribution:
    """Normalized nonnegative weights over a finite set of factors.

    Parameters
    ----------
    weights : mapping or iterable of (label, weight) pairs
        Weight of each factor. Order is preserved for display.
    tol : float
        Allowed deviation of the weight sum from 1.
    """

    __slots__ = ("_weights",)

    def __init__(self, weights, tol: float = DEFAULT_TOL):
        pairs = list(weights.items() if isinstance(weights, Mapping) else weights)
        if not pairs:
            raise ValidationError("a utility distribution needs at least one factor")
        labels = [label for label, _ in pairs]
        _check_labels(labels)
        if len(set(labels)) != len(labels):
            dup = sorted({l for l in labels if labels.count(l) > 1})
            raise ValidationError(f"duplicate factor labels: {', '.join(dup)}")
        clean = {}
        for label, k in pairs:
            k = float(k)
            if not math.isfinite(k) or k < 0.0 or k > 1.0:
                raise ValidationError(f"weight of {label!r} must lie in [0, 1], got {k!r}")
            clean[label] = k
        total = math.fsum(clean.values())
        if abs(total - 1.0) > tol:
            raise ValidationError(f"weights must sum to 1 (got {total!r})")
        self._weights = clean

    @property
    def weights(self) -> Mapping[str, float]:
        return MappingProxyType(self._weights)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self._weights)

    def __getitem__(self, label: str) -> float:
        try:
            return self._weights[label]
        except KeyError:
            raise UnknownFactorError(label) from None

    def __contains__(self, label) -> bool:
        return label in self._weights

    def __iter__(self):
        return iter(self._weights)

    def __len__(self) -> int:
        return len(self._weights)

    def __eq__(self, other):
        if not isinstance(other, UtilityDistribution):
            return NotImplemented
        return list(self._weights.items()) == list(other._weights.items())

    def __hash__(self):
        return hash(tuple(self._weights.items()))

    def __repr__(self):
        body = ", ".join(f"{k}: {v!r}" for k, v in self._weights.items())
        return f"UtilityDistribution({{{body}}})"

    def factor_set(self, labels: Iterable[str]) -> frozenset[str]:
        """Validate ``labels`` against the universe and return them as a set."""
        if isinstance(labels, str):
            labels = [labels]
        s = frozenset(labels)
        for label in sorted(s):
            if label not in self._weights:
                raise UnknownFactorError(label)
        return s


def utility(dist: UtilityDistribution, s: Iterable[str]) -> float:
    """Utility of a factor set: the sum of its members' weights."""
    s = dist.factor_set(s)
    return math.fsum(dist[label] for label in s)


def conditional_utility(dist: UtilityDistribution, x: Iterable[str], y: Iterable[str]) -> float:
    """Subjective conditional utility ``u(x & y) / u(y)``.

    Raises
    ------
    NullConditioningError
        If ``u(y)`` is zero.
    """
    x, y = dist.factor_set(x), dist.factor_set(y)
    uy = utility(dist, y)
    if uy <= 0.0:
        raise NullConditioningError(
            f"cannot condition on factor set {{{', '.join(sorted(y))}}} of utility 0"
        )
    return utility(dist, x & y) / uy


def is_subjectively_independent(
    dist: UtilityDistribution, x: Iterable[str], y: Iterable[str], tol: float = DEFAULT_TOL
) -> bool:
    """True iff learning that all utility lies in ``y`` leaves ``u(x)`` unchanged."""
    if tol < 0:
        raise ValidationError("tol must be nonnegative")
    return abs(conditional_utility(dist, x, y) - utility(dist, x)) <= tol


@dataclass(frozen=True)
class TioliFunction:
    """Additive utility ``sum(k_i * x_i)`` over boolean factors; weights of any sign."""

    weights: Mapping[str, float]

    def __post_init__(self):
        pairs = list(self.weights.items())
        if not pairs:
            raise ValidationError("a TIOLI function needs at least one factor")
        _check_labels(k for k, _ in pairs)
        clean = {}
        for label, k in pairs:
            k = float(k)
            if not math.isfinite(k):
                raise ValidationError(f"weight of {label!r} is not finite")
            clean[label] = k
        object.__setattr__(self, "weights", MappingProxyType(clean))

    def __hash__(self):
        return hash(tuple(self.weights.items()))

    def __eq__(self, other):
        if not isinstance(other, TioliFunction):
            return NotImplemented
        return list(self.weights.items()) == list(other.weights.items())

    def __call__(self, present: Iterable[str]) -> float:
        """Utility of the assignment where exactly the factors in ``present`` are 1."""
        present = frozenset([present] if isinstance(present, str) else present)
        for label in sorted(present):
            if label not in self.weights:
                raise UnknownFactorError(label, "TIOLI function")
        return math.fsum(self.weights[l] for l in present)


@dataclass(frozen=True)
class AffineRecord:
    """Positive affine map from normalized factor mass back to raw utility.

    ``raw = offset + scale * normalized``. ``flipped`` lists original factors
    replaced by their complement indicator (see :func:`complement_label`).
    """

    scale: float
    flipped: frozenset = field(default_factory=frozenset)
    offset: float = 0.0

    def __post_init__(self):
        if not self.scale > 0:
            raise ValidationError(f"affine scale must be positive, got {self.scale!r}")
        object.__setattr__(self, "flipped", frozenset(self.flipped))

    def restore(self, normalized: float) -> float:
        return self.offset + self.scale * normalized

    def lift(self, present: Iterable[str], universe: Iterable[str]) -> frozenset[str]:
        """Factor set in the normalized distribution matching an original assignment.

        ``present`` names the original factors set to 1; ``universe`` is the
        original factor list.
        """
        present = frozenset(present)
        out = set()
        for label in universe:
            if label in self.flipped:
                if label not in present:
                    out.add(complement_label(label))
            elif label in present:
                out.add(label)
        return frozenset(out)


def normalize(t: TioliFunction) -> tuple[UtilityDistribution, AffineRecord]:
    """Translate and scale a TIOLI function into a utility distribution.

    A negative weight ``k`` on factor ``b`` is rewritten with
    ``k * b == k + |k| * (1 - b)``: the factor is replaced by its complement
    ``~b`` with weight ``|k|`` and the constant ``k`` moves to the offset.
    All magnitudes are then divided by their sum.

    Raises
    ------
    DegenerateError
        If every weight is zero.
    """
    total = math.fsum(abs(k) for k in t.weights.values())
    if total == 0.0:
        raise DegenerateError("all TIOLI weights are zero; nothing to normalize")
    flipped = frozenset(label for label, k in t.weights.items() if k < 0)
    taken = set(t.weights)
    out = {}
    for label, k in t.weights.items():
        if label in flipped:
            new = complement_label(label)
            if new in taken:
                raise ValidationError(f"complement label {new!r} collides with an existing factor")
            out[new] = -k / total
        else:
            out[label] = k / total
    offset = math.fsum(k for k in t.weights.values() if k < 0)
    return UtilityDistribution(out), AffineRecord(scale=total, flipped=flipped, offset=offset)
