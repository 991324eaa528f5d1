"""Exact independence and domination numbers with witnesses.

Both solvers are branch and bound over bitsets. Ties between optimal sets are
broken toward the lexicographically smallest sorted vertex list, which keeps
every downstream strategy reproducible.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field

from .errors import GraphError, InstanceTooLarge
from .graph import Graph, LayerDecomposition, bits, lowest, max_degree, to_mask

DEFAULT_VERTEX_CAP = 128


@dataclass(frozen=True)
class IndependentSetWitness:
    vertices: tuple[int, ...]
    size: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "size", len(self.vertices))

    @property
    def mask(self) -> int:
        return to_mask(self.vertices)


@dataclass(frozen=True)
class DominatingSetWitness:
    vertices: tuple[int, ...]
    lower_bound: int = 0
    size: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "size", len(self.vertices))

    @property
    def mask(self) -> int:
        return to_mask(self.vertices)


def _guard(count: int, cap: int | None) -> None:
    cap = DEFAULT_VERTEX_CAP if cap is None else cap
    if count > cap:
        raise InstanceTooLarge(f"instance has {count} vertices, exact solver cap is {cap}")


def _clique_cover_bound(adj: tuple[int, ...], cand: int, weight: list[int]) -> int:
    """Greedy clique cover of ``cand``; sum of the heaviest vertex per clique."""
    total = 0
    rest = cand
    while rest:
        v = lowest(rest)
        clique_ok = adj[v] & rest
        heaviest = weight[v]
        rest &= rest - 1
        while clique_ok:
            w = lowest(clique_ok)
            if weight[w] > heaviest:
                heaviest = weight[w]
            rest &= ~(1 << w)
            clique_ok &= adj[w]
        total += heaviest
    return total


def _max_weight_independent(g: Graph, domain: int, weight: list[int]) -> int:
    """Lexicographically first maximum-weight independent subset of ``domain``.

    Weights must be positive. Include-first branching over ascending vertex
    index visits equal-weight optima in lexicographic order, so pruning on
    ``bound <= best`` keeps the first optimum found.
    """
    adj = g.adj
    best_value = -1
    best_mask = 0
    limit = sys.getrecursionlimit()
    if limit < 4 * g.n + 100:
        sys.setrecursionlimit(4 * g.n + 100)

    def search(chosen: int, value: int, cand: int) -> None:
        nonlocal best_value, best_mask
        if not cand:
            if value > best_value:
                best_value, best_mask = value, chosen
            return
        if value + _clique_cover_bound(adj, cand, weight) <= best_value:
            return
        v = lowest(cand)
        bit = 1 << v
        search(chosen | bit, value + weight[v], cand & ~bit & ~adj[v])
        if adj[v] & cand:
            search(chosen, value, cand & ~bit)

    search(0, 0, domain)
    return best_mask


def independence_number(g: Graph, cap: int | None = None) -> tuple[int, IndependentSetWitness]:
    """alpha(G) with the lexicographically least maximum independent set."""
    _guard(g.n, cap)
    mask = _max_weight_independent(g, g.full, [1] * g.n)
    assert g.is_independent(mask)
    witness = IndependentSetWitness(tuple(bits(mask)))
    return witness.size, witness


def constrained_max_independent_set(
    g: Graph, domain, penalty_layer=(), cap: int | None = None
) -> IndependentSetWitness:
    """Maximum independent set of ``G[domain]`` minimizing its overlap with ``penalty_layer``.

    ``domain`` and ``penalty_layer`` may be bitsets or vertex iterables.
    """
    domain = domain if isinstance(domain, int) else to_mask(domain)
    penalty = penalty_layer if isinstance(penalty_layer, int) else to_mask(penalty_layer)
    if not domain:
        raise GraphError("constrained independent set needs a nonempty domain")
    _guard(domain.bit_count(), cap)
    scale = g.n + 1
    weight = [scale - (penalty >> v & 1) for v in range(g.n)]
    mask = _max_weight_independent(g, domain, weight)
    assert g.is_independent(mask) and mask & ~domain == 0
    return IndependentSetWitness(tuple(bits(mask)))


def _greedy_dominating(g: Graph) -> int:
    chosen = 0
    undominated = g.full
    while undominated:
        best = max(range(g.n), key=lambda v: ((g.closed(v) & undominated).bit_count(), -v))
        chosen |= 1 << best
        undominated &= ~g.closed(best)
    return chosen


def domination_number(g: Graph, cap: int | None = None) -> tuple[int, DominatingSetWitness]:
    """gamma(G) by branching on the undominated vertex with fewest dominators."""
    _guard(g.n, cap)
    n = g.n
    closed = [g.closed(v) for v in range(n)]
    lower = -(-n // (max_degree(g) + 1))
    incumbent = _greedy_dominating(g)
    best_size = incumbent.bit_count()
    best_mask = incumbent

    def search(chosen: int, size: int, undominated: int, allowed: int) -> bool:
        nonlocal best_size, best_mask
        if not undominated:
            if size < best_size:
                best_size, best_mask = size, chosen
            return best_size <= lower
        budget = best_size - 1 - size
        if budget <= 0:
            return False
        gain = 0
        for v in bits(allowed & g.closed_mask(undominated)):
            c = (closed[v] & undominated).bit_count()
            if c > gain:
                gain = c
        if gain == 0 or undominated.bit_count() > gain * budget:
            return False
        options = 0
        fewest = n + 1
        for x in bits(undominated):
            opts = closed[x] & allowed
            count = opts.bit_count()
            if count < fewest:
                options, fewest = opts, count
                if count <= 1:
                    break
        if fewest == 0:
            return False
        for v in bits(options):
            if search(chosen | 1 << v, size + 1, undominated & ~closed[v], allowed):
                return True
            allowed &= ~(1 << v)
        return False

    if best_size > lower:
        search(0, 0, g.full, g.full)
    assert g.dominates(best_mask)
    witness = DominatingSetWitness(tuple(bits(best_mask)), lower_bound=lower)
    return witness.size, witness


def maximal_independent_extension(g: Graph, domain, seed) -> int:
    """Greedily extend an independent ``seed`` to a maximal independent set of ``G[domain]``.

    Returns a bitset; vertices are tried in ascending order.
    """
    domain = domain if isinstance(domain, int) else to_mask(domain)
    seed = seed if isinstance(seed, int) else to_mask(seed)
    if not g.is_independent(seed):
        raise GraphError("seed set is not independent")
    chosen = seed
    free = domain & ~g.closed_mask(seed)
    while free:
        v = lowest(free)
        chosen |= 1 << v
        free &= ~g.closed(v)
    return chosen


@dataclass(frozen=True)
class Block:
    index: int
    vertices: int
    alpha: int


@dataclass(frozen=True)
class BlockScan:
    base: int
    blocks: tuple[Block, ...]
    argmax: int | None
    witness: IndependentSetWitness | None

    @property
    def best_alpha(self) -> int:
        return self.blocks[self.argmax].alpha if self.blocks else 0


def block_scan(g: Graph, layers: LayerDecomposition, cap: int | None = None) -> BlockScan:
    """alpha of every three-layer window ``N_i + N_{i+1} + N_{i+2}`` for ``0 <= i <= depth-2``."""
    blocks = []
    best = None
    witness = None
    for i in range(layers.depth - 1):
        mask = layers.span(i, i + 2)
        _guard(mask.bit_count(), cap)
        found = _max_weight_independent(g, mask, [1] * g.n)
        blocks.append(Block(i, mask, found.bit_count()))
        if best is None or blocks[-1].alpha > blocks[best].alpha:
            best = i
            witness = IndependentSetWitness(tuple(bits(found)))
    return BlockScan(layers.base, tuple(blocks), best, witness)
