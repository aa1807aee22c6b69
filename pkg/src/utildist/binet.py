"""Simple bi-networks: a probability network and a utility network joined by bridges.

Each bridge pairs an event of the p-net with an event of the u-net. The two
networks are conditioned independently of each other, and the bridges only
combine their answers into an expected utility::

    EU = sum over bridges of P(p_event | p_evidence) * U(u_event | u_evidence)

The combination rule lives in :func:`aggregate_bridges` so a different
reading of the bridges can be swapped in without touching the queries.
Conditioning probabilities on utilities (or the reverse) is not supported.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .errors import NullConditioningError, ValidationError
from .unet import UEvent, UtilityNetwork, conditional_utility_query, marginal_utility

__all__ = [
    "ProbabilityNetwork",
    "Bridge",
    "BiNetwork",
    "probability",
    "bridge_terms",
    "aggregate_bridges",
    "expected_utility_query",
]


class ProbabilityNetwork(UtilityNetwork):
    """A Bayesian network over boolean variables; same engine, probability semantics."""

    kind = "probability"


def _event(e) -> UEvent:
    return e if isinstance(e, UEvent) else UEvent(e)


@dataclass(frozen=True)
class Bridge:
    """Unweighted link between a p-net event and a u-net event."""

    p_event: UEvent
    u_event: UEvent

    def __post_init__(self):
        object.__setattr__(self, "p_event", _event(self.p_event))
        object.__setattr__(self, "u_event", _event(self.u_event))


class BiNetwork:
    __slots__ = ("pnet", "unet", "bridges")

    def __init__(self, pnet: UtilityNetwork, unet: UtilityNetwork, bridges: Iterable):
        bridges = tuple(b if isinstance(b, Bridge) else Bridge(*b) for b in bridges)
        pnet.require_valid()
        unet.require_valid()
        for i, b in enumerate(bridges):
            for net, ev, side in ((pnet, b.p_event, "p-net"), (unet, b.u_event, "u-net")):
                try:
                    net.check_names(ev.scope)
                except ValidationError as exc:
                    raise ValidationError(f"bridge {i}: {side} endpoint: {exc}") from None
        self.pnet = pnet
        self.unet = unet
        self.bridges = bridges

    def __eq__(self, other):
        if not isinstance(other, BiNetwork):
            return NotImplemented
        return (self.pnet, self.unet, self.bridges) == (other.pnet, other.unet, other.bridges)

    def __repr__(self):
        return f"BiNetwork({self.pnet!r}, {self.unet!r}, {len(self.bridges)} bridges)"


def probability(pnet: UtilityNetwork, e, evidence=None) -> float:
    """``P(e)`` or ``P(e | evidence)`` in a probability network."""
    if evidence is None:
        return marginal_utility(pnet, e)
    return conditional_utility_query(pnet, e, evidence)


def _side(net, e, evidence, side):
    try:
        return probability(net, e, evidence)
    except NullConditioningError as exc:
        raise NullConditioningError(f"{side} evidence has measure 0: {exc}", side=side) from None


def bridge_terms(b: BiNetwork, p_evidence=None, u_evidence=None) -> list[tuple[float, float]]:
    """``(P, U)`` for every bridge, each side conditioned on its own evidence."""
    out = []
    for br in b.bridges:
        p = _side(b.pnet, br.p_event, p_evidence, "p-net")
        u = _side(b.unet, br.u_event, u_evidence, "u-net")
        out.append((p, u))
    if not b.bridges:
        # still surface null evidence when there is nothing to sum
        for net, ev, side in ((b.pnet, p_evidence, "p-net"), (b.unet, u_evidence, "u-net")):
            if ev is not None:
                _side(net, UEvent(), ev, side)
    return out


def aggregate_bridges(terms: Iterable[tuple[float, float]]) -> float:
    """Sum of ``P * U`` products."""
    return math.fsum(p * u for p, u in terms)


def expected_utility_query(b: BiNetwork, p_evidence=None, u_evidence=None) -> float:
    """Expected utility over the bridges after conditioning each net on its evidence.

    Raises
    ------
    NullConditioningError
        If either evidence event has measure 0; ``.side`` names the net.
    """
    return aggregate_bridges(bridge_terms(b, p_evidence, u_evidence))
