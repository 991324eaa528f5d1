"""Immutable bitset graphs, generators, graph6 I/O and distance metrics.

Vertices are the integers ``0..n-1``. Vertex sets are Python ints used as
bitsets (bit ``v`` set means ``v`` is a member); helpers below convert between
masks and sorted vertex lists.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator
from dataclasses import dataclass

from .errors import DisconnectedGraphError, Graph6Error, GraphError

INFINITE_GIRTH = math.inf

MAX_VERTICES = 2000


def bits(mask: int) -> Iterator[int]:
    """Yield the members of a bitset in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def lowest(mask: int) -> int:
    """Lowest member of a nonempty bitset."""
    return (mask & -mask).bit_length() - 1


class Graph:
    """Simple undirected graph on ``0..n-1`` with per-vertex neighbor bitsets.

    Instances are immutable once built; derived metrics are cached lazily.
    """

    __slots__ = ("n", "adj", "name", "_cache")

    def __init__(self, n: int, adj: Iterable[int], name: str | None = None):
        adj = tuple(adj)
        if n < 1:
            raise GraphError("graph must have at least one vertex")
        if n > MAX_VERTICES:
            raise GraphError(f"graph has {n} vertices, limit is {MAX_VERTICES}")
        if len(adj) != n:
            raise GraphError("adjacency length does not match vertex count")
        full = (1 << n) - 1
        for v, nb in enumerate(adj):
            if nb & ~full:
                raise GraphError(f"vertex {v} has a neighbor out of range")
            if nb >> v & 1:
                raise GraphError(f"self-loop at vertex {v}")
            for w in bits(nb):
                if not adj[w] >> v & 1:
                    raise GraphError(f"asymmetric adjacency between {v} and {w}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "adj", adj)
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "_cache", {})

    def __setattr__(self, key, value):
        raise AttributeError("Graph is immutable")

    def __reduce__(self):
        return (Graph, (self.n, self.adj, self.name))

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, self.adj))

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<Graph{label} n={self.n} m={self.edge_count}>"

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @property
    def edge_count(self) -> int:
        return sum(nb.bit_count() for nb in self.adj) // 2

    def neighbors(self, v: int) -> list[int]:
        return list(bits(self.adj[v]))

    def closed(self, v: int) -> int:
        """Closed neighborhood N[v] as a bitset."""
        return self.adj[v] | 1 << v

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def has_edge(self, x: int, y: int) -> bool:
        return bool(self.adj[x] >> y & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(x, y) for x in range(self.n) for y in bits(self.adj[x] >> x + 1 << x + 1)]

    def closed_mask(self, mask: int) -> int:
        """Union of closed neighborhoods of the vertices in ``mask``."""
        out = mask
        for v in bits(mask):
            out |= self.adj[v]
        return out

    def dominates(self, mask: int, region: int | None = None) -> bool:
        """True when every vertex of ``region`` (default all) is in or next to ``mask``."""
        region = self.full if region is None else region
        return region & ~self.closed_mask(mask) == 0

    def is_independent(self, mask: int) -> bool:
        return all(not self.adj[v] & mask for v in bits(mask))

    def distances(self, u: int) -> list[int]:
        return _bfs_distances(self, u)

    def distance_matrix(self) -> list[list[int]]:
        cached = self._cache.get("dist")
        if cached is None:
            cached = [_bfs_distances(self, u) for u in range(self.n)]
            self._cache["dist"] = cached
        return cached

    def dist(self, x: int, y: int) -> int:
        return self.distance_matrix()[x][y]

    def shortest_path(self, source: int, target: int) -> list[int]:
        """Vertices of a shortest path; each hop takes the lowest-index neighbor one step closer."""
        d = self.distance_matrix()
        if d[source][target] < 0:
            raise DisconnectedGraphError(f"no path from {source} to {target}")
        path = [source]
        here = source
        while here != target:
            here = next(w for w in bits(self.adj[here]) if d[w][target] == d[here][target] - 1)
            path.append(here)
        return path

    def step_toward(self, source: int, target: int) -> int:
        """Next vertex on the canonical shortest path, or ``source`` when already there."""
        if source == target:
            return source
        d = self.distance_matrix()
        return next(w for w in bits(self.adj[source]) if d[w][target] == d[source][target] - 1)

    def induced(self, mask: int) -> tuple["Graph", list[int]]:
        """Induced subgraph relabelled to ``0..k-1`` plus the original labels."""
        verts = list(bits(mask))
        index = {v: i for i, v in enumerate(verts)}
        adj = []
        for v in verts:
            adj.append(to_mask(index[w] for w in bits(self.adj[v] & mask)))
        return Graph(len(verts), adj), verts


def build_graph(n: int, edges: Iterable[tuple[int, int]], name: str | None = None) -> Graph:
    """Build a graph from an edge list; duplicate edges collapse."""
    if n < 1:
        raise GraphError("graph must have at least one vertex")
    adj = [0] * n
    for x, y in edges:
        if not (0 <= x < n and 0 <= y < n):
            raise GraphError(f"edge ({x}, {y}) has an endpoint outside 0..{n - 1}")
        if x == y:
            raise GraphError(f"self-loop at vertex {x}")
        adj[x] |= 1 << y
        adj[y] |= 1 << x
    return Graph(n, adj, name)


# -- generators ---------------------------------------------------------------


def path(n: int) -> Graph:
    if n < 1:
        raise GraphError("path needs n >= 1")
    return build_graph(n, [(i, i + 1) for i in range(n - 1)], f"path:{n}")


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)], f"cycle:{n}")


def complete(n: int) -> Graph:
    if n < 1:
        raise GraphError("complete graph needs n >= 1")
    return build_graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)], f"complete:{n}")


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    return build_graph(10, outer + inner + spokes, "petersen")


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % p for p in range(2, math.isqrt(q) + 1))


def paley(q: int) -> Graph:
    """Paley graph on Z_q for a prime q = 1 mod 4."""
    if not _is_prime(q) or q % 4 != 1:
        raise GraphError(f"paley graph needs a prime q = 1 mod 4, got {q}")
    residues = {x * x % q for x in range(1, q)}
    edges = [(x, y) for x in range(q) for y in range(x + 1, q) if (y - x) % q in residues]
    return build_graph(q, edges, f"paley:{q}")


def hoffman_singleton() -> Graph:
    """Hoffman-Singleton graph from five pentagons and five pentagrams.

    Pentagon h occupies vertices ``5h..5h+4``, pentagram i occupies
    ``25+5i..25+5i+4``; vertex j of pentagon h meets vertex ``h*i+j mod 5``
    of pentagram i.
    """
    def pent(h, j):
        return 5 * h + j

    def gram(i, j):
        return 25 + 5 * i + j

    edges = []
    for h in range(5):
        for j in range(5):
            edges.append((pent(h, j), pent(h, (j + 1) % 5)))
            edges.append((gram(h, j), gram(h, (j + 2) % 5)))
            for i in range(5):
                edges.append((pent(h, j), gram(i, (h * i + j) % 5)))
    g = build_graph(50, edges, "hoffman-singleton")
    if any(g.degree(v) != 7 for v in range(50)) or girth(g) != 5:
        raise GraphError("Hoffman-Singleton construction failed its self-check")
    return g


GENERATORS = {
    "path": path,
    "cycle": cycle,
    "complete": complete,
    "petersen": petersen,
    "paley": paley,
    "hoffman-singleton": hoffman_singleton,
}


def from_generator(spec: str) -> Graph:
    """Build a named graph from ``name[:param]``, e.g. ``path:9`` or ``petersen``."""
    name, _, param = spec.partition(":")
    try:
        gen = GENERATORS[name]
    except KeyError:
        raise GraphError(f"unknown generator {name!r}") from None
    if param:
        try:
            return gen(int(param))
        except TypeError:
            raise GraphError(f"generator {name!r} takes no parameter") from None
        except ValueError as exc:
            if isinstance(exc, GraphError):
                raise
            raise GraphError(f"bad parameter {param!r} for {name!r}") from None
    try:
        return gen()
    except TypeError:
        raise GraphError(f"generator {name!r} needs a parameter") from None


# -- graph6 -------------------------------------------------------------------

GRAPH6_HEADER = ">>graph6<<"


def _decode_size(data: bytes) -> tuple[int, int]:
    if not data:
        raise Graph6Error("empty graph6 string")
    if data[0] != 126:
        return data[0] - 63, 1
    if len(data) >= 2 and data[1] == 126:
        if len(data) < 8:
            raise Graph6Error("truncated 8-byte length field")
        n = 0
        for b in data[2:8]:
            n = n << 6 | (b - 63)
        return n, 8
    if len(data) < 4:
        raise Graph6Error("truncated 4-byte length field")
    n = 0
    for b in data[1:4]:
        n = n << 6 | (b - 63)
    return n, 4


def parse_graph6(line: str | bytes) -> Graph:
    """Decode one graph6 line (an optional ``>>graph6<<`` prefix is accepted)."""
    data = line.encode("ascii", "replace") if isinstance(line, str) else bytes(line)
    data = data.strip()
    if data.startswith(GRAPH6_HEADER.encode()):
        data = data[len(GRAPH6_HEADER):]
    for b in data:
        if not 63 <= b <= 126:
            raise Graph6Error(f"byte {b!r} outside the printable range 63..126")
    n, offset = _decode_size(data)
    if n < 1:
        raise Graph6Error("graph6 encodes an empty graph")
    if n > MAX_VERTICES:
        raise Graph6Error(f"graph6 declares {n} vertices, limit is {MAX_VERTICES}")
    nbits = n * (n - 1) // 2
    body = data[offset:]
    expected = (nbits + 5) // 6
    if len(body) != expected:
        raise Graph6Error(f"expected {expected} edge bytes for n={n}, found {len(body)}")
    value = 0
    for b in body:
        value = value << 6 | (b - 63)
    pad = expected * 6 - nbits
    if value & ((1 << pad) - 1):
        raise Graph6Error("nonzero padding bits")
    value >>= pad
    adj = [0] * n
    k = nbits - 1
    for y in range(1, n):
        for x in range(y):
            if value >> k & 1:
                adj[x] |= 1 << y
                adj[y] |= 1 << x
            k -= 1
    return Graph(n, adj)


def encode_graph6(g: Graph) -> str:
    """Encode in canonical graph6 (no header, no newline)."""
    n = g.n
    if n <= 62:
        out = [n + 63]
    elif n <= 258047:
        out = [126] + [(n >> s & 63) + 63 for s in (12, 6, 0)]
    else:  # pragma: no cover - MAX_VERTICES keeps us well below this
        out = [126, 126] + [(n >> s & 63) + 63 for s in (30, 24, 18, 12, 6, 0)]
    chunk = 0
    filled = 0
    for y in range(1, n):
        row = g.adj[y]
        for x in range(y):
            chunk = chunk << 1 | (row >> x & 1)
            filled += 1
            if filled == 6:
                out.append(chunk + 63)
                chunk = filled = 0
    if filled:
        out.append((chunk << (6 - filled)) + 63)
    return bytes(out).decode("ascii")


def read_graph6_file(path) -> Iterator[tuple[int, Graph | Graph6Error, str]]:
    """Yield ``(line_number, graph_or_error, raw_line)`` for every nonblank line."""
    with open(path, "rb") as fh:
        for lineno, raw in enumerate(fh, 1):
            text = raw.strip()
            if not text:
                continue
            if text == GRAPH6_HEADER.encode():
                continue
            decoded = text.decode("ascii", "replace")
            try:
                yield lineno, parse_graph6(text), decoded
            except Graph6Error as exc:
                yield lineno, exc, decoded


# -- metrics ------------------------------------------------------------------


def _bfs_distances(g: Graph, u: int) -> list[int]:
    dist = [-1] * g.n
    dist[u] = 0
    frontier = 1 << u
    seen = frontier
    d = 0
    while frontier:
        d += 1
        nxt = 0
        for v in bits(frontier):
            nxt |= g.adj[v]
        nxt &= ~seen
        for v in bits(nxt):
            dist[v] = d
        seen |= nxt
        frontier = nxt
    return dist


def is_connected(g: Graph) -> bool:
    return min(g.distances(0)) >= 0


def require_connected(g: Graph) -> None:
    if not is_connected(g):
        raise DisconnectedGraphError("graph is not connected")


def eccentricity(g: Graph, u: int) -> int:
    require_connected(g)
    return max(g.distance_matrix()[u])


def diameter(g: Graph) -> int:
    require_connected(g)
    return max(max(row) for row in g.distance_matrix())


def min_degree(g: Graph) -> int:
    return min(g.degree(v) for v in range(g.n))


def max_degree(g: Graph) -> int:
    return max(g.degree(v) for v in range(g.n))


def girth(g: Graph) -> int | float:
    """Length of a shortest cycle, or ``INFINITE_GIRTH`` for a forest."""
    best = INFINITE_GIRTH
    for s in range(g.n):
        dist = [-1] * g.n
        parent = [-1] * g.n
        dist[s] = 0
        queue = [s]
        for x in queue:
            if 2 * dist[x] >= best:
                break
            for y in bits(g.adj[x]):
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    queue.append(y)
                elif parent[x] != y:
                    best = min(best, dist[x] + dist[y] + 1)
    return best


@dataclass(frozen=True)
class LayerDecomposition:
    """Distance layers ``N_0(u), N_1(u), ...`` from a base vertex, stored as bitsets."""

    base: int
    antipode: int
    layers: tuple[int, ...]

    @property
    def depth(self) -> int:
        """Index of the last layer (the base's eccentricity)."""
        return len(self.layers) - 1

    def layer(self, i: int) -> int:
        return self.layers[i] if 0 <= i < len(self.layers) else 0

    def at_least(self, i: int) -> int:
        """N_{>=i} as a bitset."""
        mask = 0
        for layer in self.layers[max(i, 0):]:
            mask |= layer
        return mask

    def span(self, lo: int, hi: int) -> int:
        """Union of layers ``lo..hi`` inclusive (out-of-range indices are empty)."""
        mask = 0
        for i in range(max(lo, 0), min(hi, self.depth) + 1):
            mask |= self.layers[i]
        return mask

    def level_of(self, v: int) -> int:
        for i, layer in enumerate(self.layers):
            if layer >> v & 1:
                return i
        raise ValueError(f"vertex {v} not in decomposition")

    def as_sets(self) -> list[set[int]]:
        return [set(bits(layer)) for layer in self.layers]


def distance_layers(g: Graph, u: int) -> LayerDecomposition:
    require_connected(g)
    dist = g.distance_matrix()[u]
    depth = max(dist)
    layers = [0] * (depth + 1)
    for v, d in enumerate(dist):
        layers[d] |= 1 << v
    return LayerDecomposition(u, lowest(layers[-1]), tuple(layers))


def diametral_layers(g: Graph) -> LayerDecomposition:
    """Layers from the lowest-index vertex whose eccentricity equals the diameter."""
    d = diameter(g)
    ecc = [max(row) for row in g.distance_matrix()]
    return distance_layers(g, ecc.index(d))
