"""Topological ordering over the pivot's module graph.

Declaration order doubles as topological order by construction; this module
re-checks that claim against the edge set so downstream planning can rely
on it.
"""

from __future__ import annotations

from ..diagnostics import InvalidPivotError
from .types import INPUT, PivotNN


def topo_order(nn: PivotNN) -> list:
    """Return module names in execution order, asserting the stored order is
    a valid topological order of the edge set."""
    seen = set()
    for m in nn.modules:
        for src in m.inputs:
            if src != INPUT and src not in seen:
                raise InvalidPivotError(
                    f"module '{m.name}' consumes '{src}' before it is defined",
                    module=m.name)
        seen.add(m.name)
    return [m.name for m in nn.modules]


def edges(nn: PivotNN) -> list:
    """(producer, consumer) pairs, INPUT edges included."""
    out = []
    for m in nn.modules:
        for src in m.inputs:
            out.append((src, m.name))
    return out
