"""The default verification suite: a fixed battery of transitive instances.

Cycles, complete graphs, hypercubes, 2d and 3d tori at desk scale, and one
abelian Cayley graph, each with a singleton and a size-2 target, plus the
split cycle whose target cuts it into two tied components.
"""

from __future__ import annotations

from .graphs import parse_graph_spec

__all__ = ["DEFAULT_GRAPH_SPECS", "default_instances"]

DEFAULT_GRAPH_SPECS = [
    "cycle:n=4",
    "cycle:n=8",
    "cycle:n=101",
    "complete:n=2",
    "complete:n=3",
    "complete:n=4",
    "complete:n=5",
    "complete:n=6",
    "hypercube:k=3",
    "hypercube:k=4",
    "hypercube:k=5",
    "hypercube:k=6",
    "hypercube:k=7",
    "hypercube:k=8",
    "torus:d=2,m=8",
    "torus:d=2,m=16",
    "torus:d=2,m=32",
    "torus:d=3,m=4",
    "torus:d=3,m=8",
    "torus:d=3,m=12",
    "cayley:mods=24;gens=(1),(-1),(5),(-5)",
]

SPLIT_CYCLE_INSTANCE = ("cycle:n=8", "0,4")


def default_instances() -> list[tuple[str, str]]:
    """(graph spec, set spec) pairs: |A| = 1 and 2 per graph plus the split pair."""
    instances: list[tuple[str, str]] = []
    for spec in DEFAULT_GRAPH_SPECS:
        n = parse_graph_spec(spec).n
        instances.append((spec, "0"))
        if n > 2:
            instances.append((spec, f"0,{n // 3}"))
    instances.append(SPLIT_CYCLE_INSTANCE)
    return instances
