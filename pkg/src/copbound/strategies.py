"""Constructive cop strategies built from distance layers, plus exhaustive validation.

Every strategy is a deterministic policy: an initial placement and a list of
relocation jobs ``(label, cop slot, target vertex)``. Jobs run one at a time,
each moving a single cop one edge per turn along a shortest path while every
other cop stays put. At any cop turn where some cop is within one edge of the
robber, that cop captures instead. The memory carried between turns is
``(plan_key, job_index)``; only the barrier-block strategy picks its plan
after seeing where the robber started.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import GraphError, IllegalMove, NotApplicable
from .game import capture_move
from .graph import (
    Graph,
    LayerDecomposition,
    bits,
    diametral_layers,
    lowest,
    require_connected,
    to_mask,
)
from .invariants import (
    block_scan,
    constrained_max_independent_set,
    domination_number,
    maximal_independent_extension,
)


@dataclass(frozen=True)
class Job:
    label: str
    slot: int
    target: int


class CopStrategy:
    """Deterministic cop policy; see the module docstring for the memory layout."""

    def __init__(self, graph: Graph, theorem: int | None, placement, plans: dict, info: dict | None = None):
        self.graph = graph
        self.theorem = theorem
        self.placement = tuple(placement)
        self.plans = {key: tuple(jobs) for key, jobs in plans.items()}
        self.info = info or {}
        self.initial_memory = (None, 0)

    @property
    def cop_count(self) -> int:
        return len(self.placement)

    def select_plan(self, robber: int):
        """Key of the plan to follow given the robber's position at the first cop turn."""
        return next(iter(self.plans))

    def step(self, cops: tuple, robber: int, memory):
        key, pos = memory
        if key is None:
            key = self.select_plan(robber)
        caught = capture_move(self.graph, tuple(cops), robber)
        if caught is not None:
            return caught, (key, pos)
        jobs = self.plans[key]
        while pos < len(jobs) and cops[jobs[pos].slot] == jobs[pos].target:
            pos += 1
        if pos == len(jobs):
            return tuple(cops), (key, pos)
        job = jobs[pos]
        moved = list(cops)
        moved[job.slot] = self.graph.step_toward(cops[job.slot], job.target)
        return tuple(moved), (key, pos)

    def phase_of(self, memory) -> str:
        key, pos = memory
        if key is None:
            return "place"
        jobs = self.plans[key]
        return jobs[pos].label if pos < len(jobs) else "hold"

    def __repr__(self):
        return f"<CopStrategy theorem={self.theorem} cops={self.cop_count}>"


class _BlockStrategy(CopStrategy):
    """Plan chosen from the block holding the robber at the first cop turn."""

    def select_plan(self, robber: int):
        plan = self.info["barrier_plan"]
        level = self.info["layers"].level_of(robber)
        return min(level // plan.width, plan.m - 1) + 1


def _layers_and_diameter(g: Graph) -> tuple[LayerDecomposition, int]:
    require_connected(g)
    layers = diametral_layers(g)
    return layers, layers.depth


# -- dominating set fallback ---------------------------------------------------


def dominating_set_strategy(g: Graph) -> CopStrategy:
    """gamma(G) stationary cops on a minimum dominating set; they capture on the first move."""
    require_connected(g)
    _, witness = domination_number(g)
    return CopStrategy(g, None, witness.vertices, {0: ()}, {"dominating_set": witness.vertices})


# -- alpha - 1 -----------------------------------------------------------------


def synth_alpha_minus_one(g: Graph) -> CopStrategy:
    """Cops on an independent set of ``N_{>=2}(u)`` with fewest vertices in ``N_3``; one walks to ``u``."""
    layers, d = _layers_and_diameter(g)
    if d < 4:
        raise NotApplicable(f"diameter {d} < 4")
    u = layers.base
    chosen = constrained_max_independent_set(g, layers.at_least(2), layers.layer(3))
    independent = chosen.mask
    far = independent & layers.at_least(4)
    mover = lowest(far) if far else lowest(independent & layers.layer(3))
    placement = chosen.vertices
    slot = placement.index(mover)
    info = {
        "layers": layers,
        "base": u,
        "antipode": layers.antipode,
        "diameter": d,
        "independent_set": placement,
        "mover": mover,
        "exchange_vertex": None if far else mover,
    }
    return CopStrategy(g, 1, placement, {0: [Job("relocate", slot, u)]}, info)


def exchange_claim_holds(g: Graph, strategy: CopStrategy) -> bool:
    """Every N_2-neighbor of the exchange vertex w has a neighbor in I minus w.

    Only meaningful when the diameter is 4 and I misses N_4; returns True
    when the claim does not apply.
    """
    w = strategy.info.get("exchange_vertex")
    if w is None:
        return True
    layers = strategy.info["layers"]
    others = to_mask(strategy.info["independent_set"]) & ~(1 << w)
    return all(g.adj[x] & others for x in bits(g.adj[w] & layers.layer(2)))


# -- sliding blocks ------------------------------------------------------------


def synth_sliding_blocks(g: Graph) -> CopStrategy:
    """alpha_j cops slide a maximal independent set through consecutive three-layer blocks."""
    layers, d = _layers_and_diameter(g)
    if d < 5:
        raise NotApplicable(f"diameter {d} < 5")
    scan = block_scan(g, layers)
    count = scan.best_alpha
    occupied = maximal_independent_extension(g, layers.span(0, 2), 0)
    start = list(bits(occupied))
    placement = start + [start[0]] * (count - len(start))
    positions = list(placement)
    dist = g.distance_matrix()
    jobs = []
    for i in range(d - 2):
        seed = occupied & layers.span(i + 1, i + 2)
        target = maximal_independent_extension(g, layers.span(i + 1, i + 3), seed)
        keep = set()
        for v in bits(seed):
            keep.add(min(s for s, p in enumerate(positions) if p == v))
        movable = [s for s in range(count) if s not in keep]
        label = f"slide:{i}"
        for t in bits(target & ~seed):
            slot = min(movable, key=lambda s: (dist[positions[s]][t], s))
            movable.remove(slot)
            jobs.append(Job(label, slot, t))
            positions[slot] = t
        for slot in movable:
            t = min(bits(target), key=lambda v: (dist[positions[slot]][v], v))
            jobs.append(Job(label, slot, t))
            positions[slot] = t
        occupied = target
    info = {
        "layers": layers,
        "base": layers.base,
        "antipode": layers.antipode,
        "diameter": d,
        "block_scan": scan,
        "final_occupied": tuple(bits(occupied)),
    }
    return CopStrategy(g, 2, placement, {0: jobs}, info)


# -- gamma - 1 -----------------------------------------------------------------


def synth_gamma_minus_one(g: Graph) -> CopStrategy:
    """Minimum dominating set minus its vertex w near u; a cop from ``N_{>=5}`` walks to w."""
    layers, d = _layers_and_diameter(g)
    if d < 6:
        raise NotApplicable(f"diameter {d} < 6")
    _, gamma_set = domination_number(g)
    dom = gamma_set.mask
    w = lowest(dom & layers.span(0, 1))
    rest = dom & ~(1 << w)
    far = rest & layers.at_least(5)
    assert far, "N_6 must be dominated by the remaining cops"
    mover = lowest(far)
    placement = tuple(bits(rest))
    info = {
        "layers": layers,
        "base": layers.base,
        "antipode": layers.antipode,
        "diameter": d,
        "dominating_set": gamma_set.vertices,
        "w": w,
        "mover": mover,
    }
    return CopStrategy(g, 3, placement, {0: [Job("relocate", placement.index(mover), w)]}, info)


# -- barrier blocks ------------------------------------------------------------


def barrier_parameters(d: int) -> tuple[int, int] | None:
    """Largest k >= 1 with ``m = d // (3k+3)`` and ``m - 2 >= k``; ``None`` if none exists."""
    best = None
    k = 1
    while 3 * k + 3 <= d:
        m = d // (3 * k + 3)
        if m - 2 >= k:
            best = (k, m)
        k += 1
    return best


@dataclass(frozen=True)
class BarrierPlan:
    k: int
    m: int
    blocks: tuple[int, ...]
    interiors: tuple[int, ...]
    barriers: tuple[int, ...]
    reserved: tuple[tuple[int, ...], ...]

    @property
    def width(self) -> int:
        return 3 * self.k + 3


def barrier_plan(layers: LayerDecomposition, dominating: int, k: int, m: int) -> BarrierPlan:
    width = 3 * k + 3
    blocks, interiors, reserved = [], [], []
    for i in range(1, m + 1):
        start = (i - 1) * width
        blocks.append(layers.span(start, start + width - 1))
        inner = layers.span(start + 2, start + width - 2)
        interiors.append(inner)
        pool = list(bits(inner & dominating))
        if len(pool) < k:
            raise GraphError(f"block {i} interior holds only {len(pool)} dominating vertices")
        reserved.append(tuple(pool[:k]))
    barriers = tuple(layers.span(t * width - 1, t * width + 1) for t in range(m + 1))
    return BarrierPlan(k, m, tuple(blocks), tuple(interiors), barriers, tuple(reserved))


def synth_barrier_blocks(g: Graph) -> CopStrategy:
    """Cops on a minimum dominating set minus k reserved vertices per block.

    Once the robber's block is known, one cop from each of k barrier triplets
    away from that block walks to a reserved vertex.
    """
    layers, d = _layers_and_diameter(g)
    params = barrier_parameters(d)
    if params is None:
        raise NotApplicable(f"diameter {d} admits no k with m - 2 >= k")
    k, m = params
    _, gamma_set = domination_number(g)
    dom = gamma_set.mask
    plan = barrier_plan(layers, dom, k, m)
    reserved = to_mask(v for group in plan.reserved for v in group)
    cops = dom & ~reserved
    placement = tuple(bits(cops))
    for t, barrier in enumerate(plan.barriers):
        assert cops & barrier, f"barrier triplet {t} holds no cop"
    dist = g.distance_matrix()
    plans = {}
    for i in range(1, m + 1):
        donors = [lowest(cops & plan.barriers[t]) for t in range(m + 1) if t not in (i - 1, i)][:k]
        targets = list(plan.reserved[i - 1])
        jobs = []
        for t in targets:
            donor = min(donors, key=lambda v: (dist[v][t], v))
            donors.remove(donor)
            jobs.append(Job(f"donate:{i}", placement.index(donor), t))
        plans[i] = jobs
    info = {
        "layers": layers,
        "base": layers.base,
        "antipode": layers.antipode,
        "diameter": d,
        "dominating_set": gamma_set.vertices,
        "barrier_plan": plan,
    }
    return _BlockStrategy(g, 4, placement, plans, info)


SYNTHESIZERS = {
    1: synth_alpha_minus_one,
    2: synth_sliding_blocks,
    3: synth_gamma_minus_one,
    4: synth_barrier_blocks,
}


def synthesize(g: Graph, theorem: int) -> CopStrategy:
    try:
        return SYNTHESIZERS[theorem](g)
    except KeyError:
        raise ValueError(f"theorem must be one of 1-4, got {theorem}") from None


def confinement_region(strategy: CopStrategy, robber_start: int) -> int | None:
    """Vertices the robber cannot leave once the strategy is placed, or ``None`` if unspecified."""
    layers = strategy.info.get("layers")
    if strategy.theorem == 1:
        return layers.span(0, 1)
    if strategy.theorem == 3:
        return layers.span(0, 2)
    if strategy.theorem == 4:
        plan = strategy.info["barrier_plan"]
        block = strategy.select_plan(robber_start)
        return plan.blocks[block - 1]
    return None


# -- validation ----------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    result: str  # "sound" | "unsound" | "inconclusive"
    max_capture_turns: int | None = None
    escape_witness: tuple[int, ...] = ()
    explored: int = 0
    values: dict = field(default=None, repr=False, compare=False)

    @property
    def sound(self) -> bool:
        return self.result == "sound"


_ESCAPE = float("inf")


def _explore(g: Graph, s: CopStrategy, budget: int):
    """Robber best-response values for every reachable cop-turn position.

    Returns ``(values, best_reply)`` or ``None`` when the budget runs out.
    Keys are ``(ordered cops, memory, robber)``; a value is the number of cop
    moves until capture, or infinity when the robber can loop forever.
    """
    values: dict = {}
    best_reply: dict = {}
    on_stack: set = set()
    closed = [tuple(bits(g.closed(v))) for v in range(g.n)]
    expanded = 0

    def expand(key):
        cops, memory, r = key
        if r in cops:
            return None, ()
        moved, mem2 = s.step(cops, r, memory)
        moved = tuple(moved)
        if len(moved) != len(cops):
            raise IllegalMove("strategy changed its cop count")
        for old, new in zip(cops, moved):
            if not (0 <= new < g.n) or not g.closed(old) >> new & 1:
                raise IllegalMove(f"strategy moved a cop {old} -> {new}", (cops, r))
        if r in moved:
            return moved, ()
        return moved, tuple((moved, mem2, x) for x in closed[r] if x not in moved)

    roots = [(s.placement, s.initial_memory, r) for r in range(g.n)]
    for root in roots:
        if root in values:
            continue
        stack = []
        moved, kids = expand(root)
        expanded += 1
        on_stack.add(root)
        stack.append([root, moved, kids, 0, 0 if root[2] in root[0] else 1, None])
        while stack:
            frame = stack[-1]
            key, moved, kids, idx, best, choice = frame
            if idx < len(kids):
                child = kids[idx]
                frame[3] += 1
                if child in values:
                    val = values[child] + 1
                elif child in on_stack:
                    val = _ESCAPE
                else:
                    expanded += 1
                    if expanded > budget:
                        return None
                    cm, ck = expand(child)
                    on_stack.add(child)
                    stack.append([child, cm, ck, 0, 0 if child[2] in child[0] else 1, None])
                    continue
                if val > best or choice is None and val >= best:
                    frame[4], frame[5] = val, child
                continue
            stack.pop()
            on_stack.discard(key)
            values[key] = best
            best_reply[key] = choice
            if stack:
                parent = stack[-1]
                val = best + 1
                if val > parent[4] or parent[5] is None and val >= parent[4]:
                    parent[4], parent[5] = val, key
    return values, best_reply


def validate_strategy(g: Graph, s: CopStrategy, turn_limit: int = 10_000, state_budget: int = 2_000_000) -> Verdict:
    """Exhaustive robber best response against the fixed strategy.

    Sound when every robber decision path ends in capture within
    ``turn_limit`` cop moves; Unsound carries the robber's positions along a
    longest (or endless) evasion.
    """
    for c in s.placement:
        if not 0 <= c < g.n:
            raise IllegalMove(f"cop placed on {c}, outside the graph")
    explored = _explore(g, s, state_budget)
    if explored is None:
        return Verdict("inconclusive", explored=state_budget)
    values, best_reply = explored
    roots = [(s.placement, s.initial_memory, r) for r in range(g.n)]
    root = max(roots, key=lambda key: (values[key], -key[2]))
    worst = values[root]
    if worst <= turn_limit:
        return Verdict("sound", int(worst), explored=len(values), values=values)
    witness = []
    seen = set()
    key = root
    while key is not None and key not in seen and len(witness) <= turn_limit + 1:
        seen.add(key)
        witness.append(key[2])
        key = best_reply.get(key)
    return Verdict("unsound", None, tuple(witness), explored=len(values), values=values)


class BestResponseRobber:
    """Robber policy replaying a validation's value table against its strategy.

    Ties prefer staying put, then the lowest vertex.
    """

    def __init__(self, strategy: CopStrategy, verdict: Verdict):
        if verdict.values is None:
            raise ValueError("verdict carries no value table")
        self.strategy = strategy
        self.values = verdict.values
        self._cops = None
        self._memory = None
        self._robber = None

    def place(self, cops) -> int:
        s = self.strategy
        self._cops, self._memory = s.placement, s.initial_memory
        n = s.graph.n
        r = max(range(n), key=lambda v: (self.values[(s.placement, s.initial_memory, v)], -v))
        self._robber = r
        return r

    def move(self, cops, robber: int) -> int:
        s = self.strategy
        moved, memory = s.step(self._cops, robber, self._memory)
        moved = tuple(moved)
        self._cops, self._memory = moved, memory

        def score(x):
            if x in moved:
                return (-1, 0, 0)
            return (self.values[(moved, memory, x)], x == robber, -x)

        r = max(bits(s.graph.closed(robber)), key=score)
        self._robber = r
        return r
