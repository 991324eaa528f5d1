"""Exact k-cop game solving by retrograde analysis, policies and playback.

Positions are ``(cops, robber, turn)`` with the cop multiset stored as a sorted
tuple. The solver computes, for every position, the number of cop moves until
capture under optimal play (or ``None`` when the robber escapes forever).
"""

from __future__ import annotations

import enum
import itertools
import math
import os
import random
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceeded, CopboundError, IllegalMove
from .graph import Graph, bits, max_degree, require_connected

DEFAULT_STATE_BUDGET = 50_000_000
BUDGET_ENV = "COPBOUND_STATE_BUDGET"

_INF = np.int32(1 << 30)


def default_state_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw:
        try:
            value = int(float(raw))
        except ValueError:
            raise CopboundError(f"{BUDGET_ENV} must be a number, got {raw!r}") from None
        if value > 0:
            return value
    return DEFAULT_STATE_BUDGET


class Turn(enum.Enum):
    COP = "cop"
    ROBBER = "robber"


@dataclass(frozen=True)
class GameState:
    cops: tuple[int, ...]
    robber: int
    turn: Turn

    @classmethod
    def make(cls, cops, robber, turn=Turn.COP) -> "GameState":
        return cls(tuple(sorted(cops)), robber, turn)

    @property
    def captured(self) -> bool:
        return self.robber in self.cops


def state_space_size(n: int, k: int) -> int:
    return math.comb(n + k - 1, k) * n * 2


def _successor_multisets(g: Graph, k: int, multisets, index):
    """CSR arrays (offsets, targets) of the multisets reachable in one cop move."""
    closed = [tuple(bits(g.closed(v))) for v in range(g.n)]
    memo: dict[tuple, set] = {(): {()}}

    def moves(cops: tuple) -> set:
        found = memo.get(cops)
        if found is None:
            head, rest = cops[0], cops[1:]
            tails = moves(rest)
            found = set()
            for x in closed[head]:
                for tail in tails:
                    found.add(tuple(sorted((x,) + tail)))
            if len(cops) < k:
                memo[cops] = found
        return found

    offsets = np.zeros(len(multisets) + 1, dtype=np.int64)
    chunks = []
    for i, cops in enumerate(multisets):
        targets = sorted(index[c] for c in moves(cops))
        chunks.append(np.asarray(targets, dtype=np.int64))
        offsets[i + 1] = offsets[i] + len(targets)
    return offsets, np.concatenate(chunks)


class SolutionTable:
    """Solved k-cop game on a connected graph.

    ``cop_time[i, r]`` is the optimal number of remaining cop moves until
    capture when cops stand on multiset ``i``, the robber on ``r`` and cops
    are to move; ``robber_time`` is the same with the robber to move.
    """

    def __init__(self, g: Graph, k: int, multisets, cop_time, robber_time, offsets, targets):
        self.graph = g
        self.k = k
        self.multisets = multisets
        self.index = {c: i for i, c in enumerate(multisets)}
        self.cop_time = cop_time
        self.robber_time = robber_time
        self._offsets = offsets
        self._targets = targets
        worst = cop_time.max(axis=1)
        best = int(worst.min())
        self.cops_win = best < _INF
        self.placement = multisets[int(worst.argmin())] if self.cops_win else None
        self.capture_time = best if self.cops_win else None

    @property
    def state_count(self) -> int:
        return self.cop_time.size * 2

    def successors(self, cops) -> list[tuple[int, ...]]:
        i = self.index[tuple(sorted(cops))]
        return [self.multisets[j] for j in self._targets[self._offsets[i]:self._offsets[i + 1]]]

    def _value(self, state: GameState) -> int:
        i = self.index[tuple(sorted(state.cops))]
        table = self.cop_time if state.turn is Turn.COP else self.robber_time
        return int(table[i, state.robber])

    def outcome(self, state: GameState) -> int | None:
        """Cop moves to capture under optimal play, or ``None`` for a robber win."""
        value = self._value(state)
        return None if value >= _INF else value

    def recompute(self, state: GameState) -> int | None:
        """One backward-induction step from the stored successor values."""
        g = self.graph
        cops = tuple(sorted(state.cops))
        r = state.robber
        if r in cops:
            return 0
        i = self.index[cops]
        if state.turn is Turn.COP:
            nxt = self._targets[self._offsets[i]:self._offsets[i + 1]]
            value = min(int(self.robber_time[j, r]) for j in nxt) + 1
        else:
            value = max(int(self.cop_time[i, x]) for x in bits(g.closed(r)))
        return None if value >= _INF else value

    def check_consistency(self, samples: int = 1000, seed: int = 0) -> int:
        """Spot-check ``samples`` random states; returns the number of mismatches."""
        rng = random.Random(seed)
        bad = 0
        for _ in range(samples):
            cops = self.multisets[rng.randrange(len(self.multisets))]
            state = GameState(cops, rng.randrange(self.graph.n), rng.choice([Turn.COP, Turn.ROBBER]))
            if self.outcome(state) != self.recompute(state):
                bad += 1
        return bad


def solve_k_cops(g: Graph, k: int, budget: int | None = None) -> SolutionTable:
    """Backward induction over every position of the k-cop game."""
    require_connected(g)
    if k < 1:
        raise CopboundError("need at least one cop")
    budget = default_state_budget() if budget is None else budget
    n = g.n
    states = state_space_size(n, k)
    if states > budget:
        raise BudgetExceeded(f"{states} states for k={k} on n={n} exceeds budget {budget}")
    count = math.comb(n + k - 1, k)
    fanout = min((max_degree(g) + 1) ** k, count)
    if count * fanout > 4 * budget:
        raise BudgetExceeded(f"~{count * fanout} cop transitions for k={k} exceeds budget")

    multisets = list(itertools.combinations_with_replacement(range(n), k))
    index = {c: i for i, c in enumerate(multisets)}
    offsets, targets = _successor_multisets(g, k, multisets, index)

    occupied = np.zeros((count, n), dtype=bool)
    for i, cops in enumerate(multisets):
        occupied[i, list(cops)] = True
    closed = [np.fromiter(bits(g.closed(v)), dtype=np.int64) for v in range(n)]

    cop_time = np.where(occupied, 0, _INF).astype(np.int32)
    robber_time = np.empty_like(cop_time)
    starts = offsets[:-1]
    # reduceat over edge slices, chunked to bound memory
    limit = max(1, 8_000_000 // n)
    bounds = []
    lo = 0
    while lo < count:
        hi = lo + 1
        while hi < count and offsets[hi + 1] - offsets[lo] <= limit:
            hi += 1
        bounds.append((lo, hi))
        lo = hi
    best = np.empty_like(cop_time)
    while True:
        for r in range(n):
            robber_time[:, r] = cop_time[:, closed[r]].max(axis=1)
        robber_time[occupied] = 0
        for lo, hi in bounds:
            seg = targets[offsets[lo]:offsets[hi]]
            best[lo:hi] = np.minimum.reduceat(robber_time[seg], starts[lo:hi] - offsets[lo], axis=0)
        updated = np.where(occupied, 0, np.minimum(best.astype(np.int64) + 1, _INF)).astype(np.int32)
        if np.array_equal(updated, cop_time):
            break
        cop_time = updated
    return SolutionTable(g, k, multisets, cop_time, robber_time, offsets, targets)


def cop_number(g: Graph, k_max: int | None = None, k_min: int = 1, budget: int | None = None) -> int:
    """Least k with a cop win, solving k = k_min, k_min+1, ...

    With ``k_max`` unset it defaults to gamma(G); reaching gamma(G) needs no
    solve because cops on a dominating set always win.
    """
    from .invariants import domination_number

    require_connected(g)
    gamma, _ = domination_number(g)
    if k_max is None:
        k_max = gamma
    if k_max < 1:
        raise CopboundError("k_max must be at least 1")
    for k in range(max(1, k_min), k_max + 1):
        if k >= gamma:
            return k
        if solve_k_cops(g, k, budget).cops_win:
            return k
    raise CopboundError(f"no cop win with at most {k_max} cops")


# -- policies -----------------------------------------------------------------


def _assign(g: Graph, current: tuple, target: tuple) -> tuple:
    """Order ``target`` so that cop ``i`` moves from ``current[i]`` by at most one edge."""
    k = len(current)
    match_of_target = [-1] * k

    def augment(i, seen):
        for j in range(k):
            if j in seen or not (g.closed(current[i]) >> target[j] & 1):
                continue
            seen.add(j)
            if match_of_target[j] < 0 or augment(match_of_target[j], seen):
                match_of_target[j] = i
                return True
        return False

    for i in range(k):
        if not augment(i, set()):
            raise IllegalMove(f"no legal assignment from {current} to {target}")
    out = [0] * k
    for j, i in enumerate(match_of_target):
        out[i] = target[j]
    return tuple(out)


def capture_move(g: Graph, cops: tuple, robber: int) -> tuple | None:
    """Move the lowest-slot cop within reach onto the robber, or ``None``."""
    for i, c in enumerate(cops):
        if g.closed(c) >> robber & 1:
            return cops[:i] + (robber,) + cops[i + 1:]
    return None


class OptimalCopPolicy:
    """Cop policy reading moves off a solved table; strictly decreases capture time."""

    def __init__(self, table: SolutionTable):
        if not table.cops_win:
            raise CopboundError("robber wins this table; there is no winning cop policy")
        self.table = table
        self.cop_count = table.k
        self.placement = table.placement
        self.initial_memory = None

    def step(self, cops: tuple, robber: int, memory=None):
        t = self.table
        if robber in cops:
            return tuple(cops), memory
        i = t.index[tuple(sorted(cops))]
        nxt = t._targets[t._offsets[i]:t._offsets[i + 1]]
        values = t.robber_time[nxt, robber]
        choice = t.multisets[int(nxt[int(values.argmin())])]
        return _assign(t.graph, tuple(cops), choice), memory

    def phase_of(self, memory):
        return None


class OptimalRobberPolicy:
    """Robber policy that stays in robber-win positions, else maximizes capture time."""

    def __init__(self, table: SolutionTable):
        self.table = table

    def place(self, cops) -> int:
        row = self.table.cop_time[self.table.index[tuple(sorted(cops))]]
        return int(row.argmax())

    def move(self, cops, robber: int) -> int:
        t = self.table
        row = t.cop_time[t.index[tuple(sorted(cops))]]
        options = list(bits(t.graph.closed(robber)))
        return max(options, key=lambda x: (int(row[x]), -x))


def optimal_cop_policy(table: SolutionTable) -> OptimalCopPolicy:
    return OptimalCopPolicy(table)


def optimal_robber_policy(table: SolutionTable) -> OptimalRobberPolicy:
    return OptimalRobberPolicy(table)


# -- playback -----------------------------------------------------------------


@dataclass(frozen=True)
class Captured:
    at_turn: int

    def line(self) -> str:
        return f"CAPTURED {self.at_turn}"


@dataclass(frozen=True)
class Escaped:
    turn_limit: int

    def line(self) -> str:
        return f"ESCAPED {self.turn_limit}"


@dataclass
class Transcript:
    states: list[GameState] = field(default_factory=list)
    phases: list = field(default_factory=list)
    result: Captured | Escaped | None = None

    @property
    def captured(self) -> bool:
        return isinstance(self.result, Captured)

    def to_text(self) -> str:
        lines = []
        for state, phase in zip(self.states, self.phases):
            line = f"{state.turn.value}; cops={','.join(map(str, state.cops))}; robber={state.robber}"
            if phase is not None:
                line += f"; phase={phase}"
            lines.append(line)
        lines.append(self.result.line())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Transcript":
        out = cls()
        for raw in text.strip().splitlines():
            raw = raw.strip()
            if raw.startswith("CAPTURED "):
                out.result = Captured(int(raw.split()[1]))
                continue
            if raw.startswith("ESCAPED "):
                out.result = Escaped(int(raw.split()[1]))
                continue
            fields = [part.strip() for part in raw.split(";")]
            turn = Turn(fields[0])
            values = dict(part.split("=", 1) for part in fields[1:])
            cops = tuple(int(x) for x in values["cops"].split(",") if x)
            out.states.append(GameState(cops, int(values["robber"]), turn))
            out.phases.append(values.get("phase"))
        return out


def _check_cop_move(g: Graph, before: tuple, after: tuple, robber: int) -> None:
    if len(after) != len(before):
        raise IllegalMove(f"cop count changed from {len(before)} to {len(after)}",
                          GameState.make(before, robber))
    for old, new in zip(before, after):
        if not (0 <= new < g.n) or not g.closed(old) >> new & 1:
            raise IllegalMove(f"cop moved {old} -> {new}", GameState.make(before, robber))


def play(g: Graph, cop_policy, robber_policy, turn_limit: int) -> Transcript:
    """Play out the game; ``at_turn`` counts cop moves made before capture."""
    cops = tuple(cop_policy.placement)
    for c in cops:
        if not 0 <= c < g.n:
            raise IllegalMove(f"cop placed on {c}, outside the graph")
    memory = getattr(cop_policy, "initial_memory", None)
    phase_of = getattr(cop_policy, "phase_of", lambda m: None)
    robber = robber_policy.place(tuple(sorted(cops)))
    if not 0 <= robber < g.n:
        raise IllegalMove(f"robber placed on {robber}, outside the graph")
    out = Transcript()

    def record(turn):
        out.states.append(GameState.make(cops, robber, turn))
        out.phases.append(phase_of(memory))

    record(Turn.COP)
    if robber in cops:
        out.result = Captured(0)
        return out
    for turn in range(1, turn_limit + 1):
        moved, memory = cop_policy.step(cops, robber, memory)
        moved = tuple(moved)
        _check_cop_move(g, cops, moved, robber)
        cops = moved
        record(Turn.ROBBER)
        if robber in cops:
            out.result = Captured(turn)
            return out
        nxt = robber_policy.move(tuple(sorted(cops)), robber)
        if not (0 <= nxt < g.n) or not g.closed(robber) >> nxt & 1:
            raise IllegalMove(f"robber moved {robber} -> {nxt}", GameState.make(cops, robber, Turn.ROBBER))
        robber = nxt
        record(Turn.COP)
        if robber in cops:
            out.result = Captured(turn)
            return out
    out.result = Escaped(turn_limit)
    return out
