"""Rewrite an arbitrary utility table as a utility distribution over factors.

Both constructions shift the table so its minimum is 0 and then give every
state a set of factors whose weights sum to its shifted utility:

``prefix_chain``
    one factor per step between consecutive distinct utility values, so a
    state takes every step up to its own value (at most as many factors as
    distinct values: the linear end).
``binary_factorization``
    factors weighted ``quantum * 2**j``; a state takes the set bits of
    ``shifted / quantum`` (``ceil(log2(M + 1))`` factors: the logarithmic end).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .errors import DegenerateError, NonQuantizableError, SelfCheckError, ValidationError
from .factors import AffineRecord, UtilityDistribution, utility
from .maut import TabulatedUtility

__all__ = ["FactorSpace", "prefix_chain", "binary_factorization", "infer_quantum"]

RECONSTRUCTION_TOL = 1e-9
MAX_DENOMINATOR = 10**6
# a rational match must be this close (relative) to count as exact; best
# approximations of irrationals with q <= 1e6 typically miss by ~1e-12
RATIONAL_MATCH_RTOL = 1e-14


@dataclass(frozen=True)
class FactorSpace:
    """A utility distribution plus the factor set each state maps to.

    ``raw_weights`` are the unnormalized factor weights, i.e.
    ``distribution[f] * affine.scale``.
    """

    distribution: UtilityDistribution
    state_map: Mapping[tuple, frozenset]
    affine: AffineRecord
    raw_weights: Mapping[str, float]

    def reconstruct(self, state) -> float:
        return self.affine.restore(utility(self.distribution, self.state_map[tuple(state)]))

    def max_error(self, u: TabulatedUtility) -> float:
        return max(abs(self.reconstruct(s) - v) for s, v in u.items())

    def check(self, u: TabulatedUtility, tol: float = RECONSTRUCTION_TOL):
        err = self.max_error(u)
        if err > tol * max(1.0, float(np.max(np.abs(u.values)))):
            raise SelfCheckError(f"factor space reconstructs the table with error {err!r}")
        return self


def _build(u, offset, raw, members) -> FactorSpace:
    total = math.fsum(raw.values())
    dist = UtilityDistribution({f: w / total for f, w in raw.items()})
    affine = AffineRecord(scale=total, offset=offset)
    state_map = MappingProxyType({s: frozenset(members(v)) for s, v in u.items()})
    return FactorSpace(dist, state_map, affine, MappingProxyType(dict(raw))).check(u)


def _shifted(u: TabulatedUtility):
    lo = float(np.min(u.values))
    if float(np.max(u.values)) - lo <= 0.0:
        raise DegenerateError("all utilities are equal; there is nothing to factor")
    return lo


def prefix_chain(u: TabulatedUtility) -> FactorSpace:
    """Factors ``f1..fm`` for the steps between the sorted distinct utilities."""
    lo = _shifted(u)
    levels = sorted({v - lo for _, v in u.items()} - {0.0})
    raw, prev = {}, 0.0
    for j, level in enumerate(levels, 1):
        raw[f"f{j}"] = level - prev
        prev = level
    rank = {level: j for j, level in enumerate(levels, 1)}
    names = list(raw)
    return _build(u, lo, raw, lambda v: names[: rank.get(v - lo, 0)])


def infer_quantum(values) -> Fraction:
    """Largest common divisor of nonnegative reals, by rational reconstruction.

    Raises
    ------
    NonQuantizableError
        If some value has no rational approximation with denominator at most
        ``10**6`` that matches it to within rounding error.
    """
    fracs = []
    for v in values:
        f = Fraction(v).limit_denominator(MAX_DENOMINATOR)
        if abs(float(f) - v) > RATIONAL_MATCH_RTOL * max(1.0, abs(v)):
            raise NonQuantizableError(
                f"utility difference {v!r} is not a ratio with denominator <= {MAX_DENOMINATOR}; "
                "use the prefix method instead"
            )
        fracs.append(f)
    fracs = [f for f in fracs if f]
    if not fracs:
        raise DegenerateError("all utilities are equal; there is nothing to factor")
    lcm = math.lcm(*(f.denominator for f in fracs))
    g = math.gcd(*(f.numerator * (lcm // f.denominator) for f in fracs))
    return Fraction(g, lcm)


def binary_factorization(u: TabulatedUtility, quantum: float | None = None) -> FactorSpace:
    """Factors ``b0..b{B-1}`` with raw weights ``quantum * 2**j``.

    ``quantum`` is inferred when omitted; when given, every shifted utility
    must be an integer multiple of it within ``1e-9``.
    """
    lo = _shifted(u)
    shifted = [v - lo for _, v in u.items()]
    if quantum is None:
        q = float(infer_quantum(shifted))
    else:
        q = float(quantum)
        if not (math.isfinite(q) and q > 0):
            raise ValidationError(f"quantum must be a positive number, got {quantum!r}")
    counts = {}
    for v in shifted:
        m = round(v / q)
        if abs(m * q - v) > RECONSTRUCTION_TOL * max(1.0, abs(v)):
            raise NonQuantizableError(
                f"utility difference {v!r} is not a multiple of quantum {q!r}; use the prefix method instead"
            )
        counts[v] = m
    top = max(counts.values())
    nbits = top.bit_length()
    raw = {f"b{j}": q * 2**j for j in range(nbits)}
    return _build(u, lo, raw, lambda v: [f"b{j}" for j in range(nbits) if counts[v - lo] >> j & 1])
