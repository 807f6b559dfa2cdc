"""Vertex-transitive graph families and their metric invariants.

Builders produce simple regular graphs (cycles, tori, hypercubes, complete
graphs, abelian Cayley graphs, edge-list files).  ``metric_profile`` computes
the ball-volume profile V(0..D) around an origin by BFS together with the
growth decomposition n = D^q R with integer q and 1 <= R < D.
"""

from __future__ import annotations

import itertools
import re
import warnings
from collections import deque
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Graph",
    "MetricProfile",
    "build_torus",
    "build_cycle",
    "build_hypercube",
    "build_complete",
    "build_cayley",
    "load_edge_list",
    "parse_graph_spec",
    "bfs_distances",
    "metric_profile",
]

MAX_VERTICES = 10**6


@dataclass(frozen=True)
class Graph:
    """A finite connected d-regular simple graph.

    Attributes
    ----------
    n : int
        Number of vertices (indexed 0..n-1).
    degree : int
        Common vertex degree.
    adjacency : ndarray, shape (n, degree)
        Sorted neighbor indices per vertex.
    family_tag : str
        Descriptive label (torus/cycle/hypercube/complete/cayley/file).
    """

    n: int
    degree: int
    adjacency: np.ndarray
    family_tag: str = "unknown"

    def __post_init__(self) -> None:
        adj = np.asarray(self.adjacency, dtype=np.int64)
        if self.n < 2:
            raise ValueError(f"need at least 2 vertices, got n={self.n}")
        if self.degree < 1:
            raise ValueError(f"degree must be positive, got {self.degree}")
        if adj.shape != (self.n, self.degree):
            raise ValueError(
                f"adjacency shape {adj.shape} inconsistent with n={self.n}, d={self.degree}"
            )
        if adj.min() < 0 or adj.max() >= self.n:
            raise ValueError("neighbor index out of range")
        rows = np.arange(self.n)[:, None]
        if np.any(adj == rows):
            raise ValueError("self-loops are not allowed")
        for v in range(self.n):
            row = adj[v]
            if len(set(row.tolist())) != self.degree:
                raise ValueError(f"vertex {v} has repeated neighbors")
        # symmetry: u in adj(v) <=> v in adj(u)
        edge_set = {(v, int(u)) for v in range(self.n) for u in adj[v]}
        for v, u in edge_set:
            if (u, v) not in edge_set:
                raise ValueError(f"adjacency not symmetric at edge ({v},{u})")
        if not self._connected(adj):
            raise ValueError("graph is not connected")
        adj = np.sort(adj, axis=1)
        adj.flags.writeable = False
        object.__setattr__(self, "adjacency", adj)

    def _connected(self, adj: np.ndarray) -> bool:
        seen = np.zeros(self.n, dtype=bool)
        seen[0] = True
        stack = [0]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if not seen[u]:
                    seen[u] = True
                    stack.append(int(u))
        return bool(seen.all())

    def neighbors(self, v: int) -> np.ndarray:
        return self.adjacency[v]


@dataclass(frozen=True)
class MetricProfile:
    """Diameter, ball volumes, and the growth decomposition of a graph.

    ``ball_volume[r]`` is the number of vertices at distance <= r from the
    origin.  When the diameter is at least 2, ``n = diameter**growth_q *
    growth_r`` with integer ``growth_q`` and ``1 <= growth_r < diameter``;
    diameter-1 graphs carry ``degenerate=True`` and no (q, R) pair.
    """

    diameter: int
    ball_volume: np.ndarray
    growth_q: int | None
    growth_r: float | None
    degenerate: bool = field(default=False)

    def __post_init__(self) -> None:
        vol = np.asarray(self.ball_volume, dtype=np.int64)
        if vol.shape != (self.diameter + 1,):
            raise ValueError("ball_volume must have length diameter+1")
        if vol[0] != 1 or np.any(np.diff(vol) < 0):
            raise ValueError("ball volumes must start at 1 and be nondecreasing")
        vol.flags.writeable = False
        object.__setattr__(self, "ball_volume", vol)

    @property
    def n(self) -> int:
        return int(self.ball_volume[-1])

    def volume(self, radius: float) -> int:
        """Volume of the ball of radius floor(radius), saturating at n."""
        r = int(np.floor(radius))
        if r < 0:
            raise ValueError("radius must be nonnegative")
        return int(self.ball_volume[min(r, self.diameter)])


def _from_edges(n: int, edges: set[tuple[int, int]], tag: str) -> Graph:
    """Assemble a Graph from a set of canonical (u < v) undirected edges."""
    neigh: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        neigh[u].append(v)
        neigh[v].append(u)
    degrees = {len(lst) for lst in neigh}
    if len(degrees) != 1:
        raise ValueError(f"graph is not regular: degrees {sorted(degrees)}")
    d = degrees.pop()
    if d == 0:
        raise ValueError("graph has isolated vertices")
    adj = np.array([sorted(lst) for lst in neigh], dtype=np.int64)
    return Graph(n=n, degree=d, adjacency=adj, family_tag=tag)


def build_torus(dim: int, side: int) -> Graph:
    """Nearest-neighbor torus on (Z/side Z)^dim.

    Degree is 2*dim for side >= 3.  For side = 2 the +1 and -1 steps
    coincide, and the simple graph has degree dim (it is the hypercube).
    """
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    if side < 2:
        raise ValueError(f"side must be >= 2, got {side}")
    n = side**dim
    if n > MAX_VERTICES:
        raise ValueError(f"torus with {n} vertices exceeds the {MAX_VERTICES} limit")

    strides = [side**k for k in range(dim)]

    def vid(coords: tuple[int, ...]) -> int:
        return sum(c * s for c, s in zip(coords, strides))

    edges: set[tuple[int, int]] = set()
    for coords in itertools.product(range(side), repeat=dim):
        v = vid(coords)
        for axis in range(dim):
            for step in (1, -1):
                w_coords = list(coords)
                w_coords[axis] = (w_coords[axis] + step) % side
                w = vid(tuple(w_coords))
                if w != v:
                    edges.add((min(v, w), max(v, w)))
    return _from_edges(n, edges, f"torus:d={dim},m={side}")


def build_cycle(n: int) -> Graph:
    """Cycle C_n; n = 2 degenerates to the single-edge graph K_2."""
    if n < 2:
        raise ValueError(f"cycle needs n >= 2, got {n}")
    edges = {(min(v, (v + 1) % n), max(v, (v + 1) % n)) for v in range(n)}
    return _from_edges(n, edges, f"cycle:n={n}")


def build_hypercube(dim: int) -> Graph:
    """Hypercube {0,1}^dim with bit-flip edges."""
    if dim < 1:
        raise ValueError(f"hypercube needs dim >= 1, got {dim}")
    n = 1 << dim
    if n > MAX_VERTICES:
        raise ValueError(f"hypercube with {n} vertices exceeds the {MAX_VERTICES} limit")
    edges = {(v, v ^ (1 << b)) for v in range(n) for b in range(dim) if v < v ^ (1 << b)}
    return _from_edges(n, edges, f"hypercube:k={dim}")


def build_complete(n: int) -> Graph:
    """Complete graph K_n."""
    if n < 2:
        raise ValueError(f"complete graph needs n >= 2, got {n}")
    edges = {(u, v) for u in range(n) for v in range(u + 1, n)}
    return _from_edges(n, edges, f"complete:n={n}")


def build_cayley(moduli: list[int], generators: list[tuple[int, ...]]) -> Graph:
    """Cayley graph of Z_{m1} x ... x Z_{mk} with the given connection set.

    The generator set must be symmetric (closed under negation mod the
    moduli), must not contain the identity, and must generate the group
    (otherwise the graph is disconnected and rejected).
    """
    if not moduli or any(m < 2 for m in moduli):
        raise ValueError("moduli must be a nonempty list of integers >= 2")
    if not generators:
        raise ValueError("generator set is empty")
    k = len(moduli)
    n = int(np.prod(moduli))
    if n > MAX_VERTICES:
        raise ValueError(f"group with {n} elements exceeds the {MAX_VERTICES} limit")

    def canon(g: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(int(c) % m for c, m in zip(g, moduli))

    gens = []
    for g in generators:
        if len(g) != k:
            raise ValueError(f"generator {g} has wrong arity (expected {k})")
        gens.append(canon(g))
    gen_set = set(gens)
    if canon(tuple(0 for _ in moduli)) in gen_set:
        raise ValueError("identity element is not a valid generator (self-loop)")
    for g in gen_set:
        if canon(tuple(-c for c in g)) not in gen_set:
            raise ValueError(f"generator set not symmetric: missing inverse of {g}")

    strides = [1] * k
    for i in range(k - 2, -1, -1):
        strides[i] = strides[i + 1] * moduli[i + 1]

    def vid(coords: tuple[int, ...]) -> int:
        return sum(c * s for c, s in zip(coords, strides))

    edges: set[tuple[int, int]] = set()
    for coords in itertools.product(*(range(m) for m in moduli)):
        v = vid(coords)
        for g in gen_set:
            w = vid(canon(tuple(c + a for c, a in zip(coords, g))))
            edges.add((min(v, w), max(v, w)))
    try:
        return _from_edges(n, edges, f"cayley:mods={','.join(map(str, moduli))}")
    except ValueError as exc:
        if "not connected" in str(exc):
            raise ValueError("generator set does not generate the group") from exc
        raise


def load_edge_list(path: str) -> Graph:
    """Read a graph from a whitespace-separated edge list.

    The first line is a header ``n d``; every following token pair is an
    undirected edge on 0-indexed vertices.  Only regularity is validated;
    vertex-transitivity of file input is not checked.
    """
    with open(path, encoding="utf-8") as fh:
        tokens = fh.read().split()
    if len(tokens) < 2:
        raise ValueError(f"{path}: missing 'n d' header")
    try:
        n, d = int(tokens[0]), int(tokens[1])
    except ValueError as exc:
        raise ValueError(f"{path}: malformed header {tokens[:2]!r}") from exc
    body = tokens[2:]
    if len(body) % 2 != 0:
        raise ValueError(f"{path}: odd number of edge endpoints")
    edges: set[tuple[int, int]] = set()
    for i in range(0, len(body), 2):
        try:
            u, v = int(body[i]), int(body[i + 1])
        except ValueError as exc:
            raise ValueError(f"{path}: non-integer edge token near {body[i]!r}") from exc
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"{path}: edge ({u},{v}) out of range for n={n}")
        if u == v:
            raise ValueError(f"{path}: self-loop at vertex {u}")
        edges.add((min(u, v), max(u, v)))
    g = _from_edges(n, edges, "file")
    if g.degree != d:
        raise ValueError(f"{path}: header degree {d} but graph is {g.degree}-regular")
    warnings.warn(
        f"{path}: file input is only checked for regularity, not vertex-transitivity",
        stacklevel=2,
    )
    return g


_CAYLEY_GEN_RE = re.compile(r"\(([^()]*)\)")


def parse_graph_spec(spec: str) -> Graph:
    """Build a graph from a CLI spec string.

    Accepted forms: ``torus:d=2,m=16``, ``cycle:n=8``, ``hypercube:k=3``,
    ``complete:n=5``, ``cayley:mods=4,4;gens=(1,0),(-1,0),(0,1),(0,-1)``,
    ``file:<path>``.
    """
    kind, sep, rest = spec.partition(":")
    if not sep:
        raise ValueError(f"graph spec {spec!r} is missing ':'")
    kind = kind.strip().lower()
    if kind == "file":
        return load_edge_list(rest.strip())
    if kind == "cayley":
        parts = dict(
            chunk.split("=", 1) for chunk in rest.split(";") if "=" in chunk
        )
        if "mods" not in parts or "gens" not in parts:
            raise ValueError(f"cayley spec {spec!r} needs mods=...;gens=...")
        moduli = [int(tok) for tok in parts["mods"].split(",") if tok.strip()]
        gens = []
        for grp in _CAYLEY_GEN_RE.findall(parts["gens"]):
            gens.append(tuple(int(tok) for tok in grp.split(",") if tok.strip()))
        if not gens:
            raise ValueError(f"cayley spec {spec!r} has no generators")
        return build_cayley(moduli, gens)

    kv: dict[str, int] = {}
    for chunk in rest.split(","):
        if not chunk.strip():
            continue
        key, eq, val = chunk.partition("=")
        if not eq:
            raise ValueError(f"bad parameter {chunk!r} in graph spec {spec!r}")
        try:
            kv[key.strip()] = int(val)
        except ValueError as exc:
            raise ValueError(f"non-integer value in graph spec {spec!r}") from exc
    try:
        if kind == "torus":
            return build_torus(dim=kv["d"], side=kv["m"])
        if kind == "cycle":
            return build_cycle(kv["n"])
        if kind == "hypercube":
            return build_hypercube(kv["k"])
        if kind == "complete":
            return build_complete(kv["n"])
    except KeyError as exc:
        raise ValueError(f"graph spec {spec!r} is missing parameter {exc}") from exc
    raise ValueError(f"unknown graph family {kind!r}")


def bfs_distances(g: Graph, origin: int) -> np.ndarray:
    """Graph distances from ``origin`` to every vertex."""
    if not (0 <= origin < g.n):
        raise ValueError(f"origin {origin} out of range")
    dist = np.full(g.n, -1, dtype=np.int64)
    dist[origin] = 0
    queue = deque([origin])
    while queue:
        v = queue.popleft()
        for u in g.adjacency[v]:
            if dist[u] < 0:
                dist[u] = dist[v] + 1
                queue.append(int(u))
    return dist


def metric_profile(g: Graph, origin: int = 0) -> MetricProfile:
    """BFS ball-volume profile and growth decomposition around ``origin``.

    For vertex-transitive input the eccentricity of the origin equals the
    diameter.  The decomposition n = D^q R uses the unique integer q with
    D^q <= n < D^{q+1}; the diameter-1 case is flagged degenerate.
    """
    dist = bfs_distances(g, origin)
    diameter = int(dist.max())
    volumes = np.cumsum(np.bincount(dist, minlength=diameter + 1))
    if diameter < 2:
        return MetricProfile(
            diameter=diameter,
            ball_volume=volumes,
            growth_q=None,
            growth_r=None,
            degenerate=True,
        )
    q = 0
    power = 1
    while power * diameter <= g.n:
        power *= diameter
        q += 1
    r = g.n / power
    return MetricProfile(
        diameter=diameter,
        ball_volume=volumes,
        growth_q=q,
        growth_r=r,
        degenerate=False,
    )
