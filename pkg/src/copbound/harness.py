"""Bound checking, equality certificates, corpus verification and extremal search.

Reports are JSON lines, one object per graph, followed by one summary object.
Per-graph records carry no timing data, so identical inputs give identical
records; only the summary's ``elapsed`` field varies between runs.
"""

from __future__ import annotations

import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .errors import BudgetExceeded, CopboundError, Graph6Error, NotApplicable
from .game import cop_number, solve_k_cops
from .graph import (
    INFINITE_GIRTH,
    Graph,
    diameter,
    diametral_layers,
    encode_graph6,
    girth,
    is_connected,
    min_degree,
    read_graph6_file,
)
from .invariants import block_scan, domination_number, independence_number
from .strategies import SYNTHESIZERS, barrier_parameters, validate_strategy

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_ERROR = 2


def aigner_fromme_lower_bound(g: Graph) -> int | None:
    """Minimum degree when the girth is at least 5 (forests included), else ``None``."""
    if girth(g) >= 5:
        return min_degree(g)
    return None


@dataclass
class Certificate:
    kind: str  # "girth-degree" | "exact-solve" | "interval"
    lower: int
    upper: int
    min_degree: int | None = None
    girth: int | None = None
    gamma_witness: tuple[int, ...] = ()
    solution: dict | None = None

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def cop_number(self) -> int | None:
        return self.lower if self.exact else None

    def to_dict(self) -> dict:
        out = asdict(self)
        out["gamma_witness"] = list(self.gamma_witness)
        out["concludes"] = {"copNumber": self.cop_number} if self.exact else {"lower": self.lower, "upper": self.upper}
        return out

    def describe(self) -> str:
        if self.kind == "girth-degree" and self.exact:
            return (f"c={self.lower} (girth {self.girth} >= 5 gives c >= min degree {self.min_degree}; "
                    f"dominating set of size {self.upper} gives c <= {self.upper})")
        if self.exact:
            return f"c={self.lower} (exact game solve)"
        return f"{self.lower} <= c <= {self.upper} (budget exhausted before an exact solve)"


def certify_equality(g: Graph, budget: int | None = None) -> Certificate:
    """Pin down c(G) by the girth/degree sandwich, falling back to exact solving."""
    if not is_connected(g):
        raise CopboundError("certify_equality needs a connected graph")
    gamma, witness = domination_number(g)
    lower = aigner_fromme_lower_bound(g)
    gir = girth(g)
    gir_out = None if gir == INFINITE_GIRTH else int(gir)
    if lower is not None and lower >= gamma:
        return Certificate("girth-degree", gamma, gamma, lower, gir_out, witness.vertices)
    start = max(1, lower or 1)
    try:
        c = cop_number(g, k_max=gamma, k_min=start, budget=budget)
    except BudgetExceeded:
        return Certificate("interval", start, gamma, lower, gir_out, witness.vertices)
    return Certificate("exact-solve", c, c, lower, gir_out, witness.vertices,
                       solution={"copNumber": c, "gamma": gamma})


def _cop_number_with_sandwich(g: Graph, gamma: int, budget: int | None) -> int | None:
    lower = aigner_fromme_lower_bound(g) or 1
    if lower >= gamma:
        return gamma
    try:
        return cop_number(g, k_max=gamma, k_min=lower, budget=budget)
    except BudgetExceeded:
        return None


@dataclass
class TheoremCheck:
    id: int
    applicable: bool
    bound: int | None
    satisfied: bool | None


@dataclass
class BoundReport:
    graph6: str
    n: int
    diameter: int
    alpha: int
    gamma: int
    cop_number: int | None
    theorems: list[TheoremCheck]
    d1: int | None = None
    d2: int | None = None
    barrier_k: int | None = None
    barrier_m: int | None = None
    certificates: list[dict] = field(default_factory=list)
    strategy_verdicts: list[dict] = field(default_factory=list)
    name: str | None = None
    line: int | None = None

    @property
    def violated(self) -> bool:
        if any(t.satisfied is False for t in self.theorems):
            return True
        return any(v["result"] == "unsound" or not v.get("ledger_ok", True) for v in self.strategy_verdicts)

    def to_dict(self) -> dict:
        out = {
            "graph6": self.graph6,
            "n": self.n,
            "diameter": self.diameter,
            "alpha": self.alpha,
            "gamma": self.gamma,
            "copNumber": self.cop_number,
            "theorems": [asdict(t) for t in self.theorems],
            "d1": self.d1,
            "d2": self.d2,
            "barrier": None if self.barrier_k is None else {"k": self.barrier_k, "m": self.barrier_m},
            "certificates": self.certificates,
            "strategyVerdicts": self.strategy_verdicts,
        }
        if self.name:
            out["name"] = self.name
        if self.line is not None:
            out["line"] = self.line
        return out


def theorem_bounds(d: int, alpha: int, gamma: int) -> list[tuple[int, bool, int | None]]:
    """``(theorem, applicable, bound)`` for the four inequalities at the given invariants."""
    params = barrier_parameters(d)
    thm4 = (4, False, None) if params is None else (4, True, gamma - params[0] * params[1])
    return [
        (1, d >= 4, alpha - 1 if d >= 4 else None),
        (2, True, alpha - (d - 3) // 2),
        (3, d >= 6, gamma - 1 if d >= 6 else None),
        thm4,
    ]


def check_bounds(g: Graph, budget: int | None = None, strategies: bool = False) -> BoundReport:
    """Exact D, alpha, gamma, c and the four diameter inequalities for one graph."""
    d = diameter(g)
    alpha, _ = independence_number(g)
    gamma, _ = domination_number(g)
    assert gamma <= alpha
    c = _cop_number_with_sandwich(g, gamma, budget)
    checks = []
    for thm, applicable, bound in theorem_bounds(d, alpha, gamma):
        satisfied = None if not applicable or c is None else c <= bound
        checks.append(TheoremCheck(thm, applicable, bound, satisfied))
    d1 = d2 = None
    if d >= 2:
        scan = block_scan(g, diametral_layers(g))
        d1, d2 = scan.argmax, d - 2 - scan.argmax
    params = barrier_parameters(d)
    report = BoundReport(
        encode_graph6(g), g.n, d, alpha, gamma, c, checks, d1, d2,
        params[0] if params else None, params[1] if params else None, name=g.name,
    )
    lower = aigner_fromme_lower_bound(g)
    if lower is not None:
        report.certificates.append({"kind": "girth-degree", "lower": lower, "upper": gamma,
                                    "concludes": {"copNumber": gamma} if lower >= gamma else None})
    if strategies:
        report.strategy_verdicts = strategy_verdicts(g, alpha, gamma, d)
    return report


def strategy_verdicts(g: Graph, alpha: int, gamma: int, d: int) -> list[dict]:
    """Synthesize and validate every applicable strategy; checks each cop-count ledger."""
    out = []
    for thm, synth in SYNTHESIZERS.items():
        try:
            s = synth(g)
        except NotApplicable:
            continue
        verdict = validate_strategy(g, s)
        if thm == 1:
            ledger = s.cop_count <= alpha - 1
        elif thm == 2:
            ledger = s.cop_count <= alpha - (d - 3) // 2
        elif thm == 3:
            ledger = s.cop_count == gamma - 1
        else:
            k = s.info["barrier_plan"].k
            ledger = s.cop_count <= gamma - k * k - 2 * k
        out.append({
            "theorem": thm,
            "cops": s.cop_count,
            "result": verdict.result,
            "maxCaptureTurns": verdict.max_capture_turns,
            "ledger_ok": ledger,
        })
    return out


# -- corpus verification ------------------------------------------------------


@dataclass
class CorpusReport:
    records: list[dict] = field(default_factory=list)
    graphs: int = 0
    violations: int = 0
    errors: int = 0
    elapsed: float = 0.0

    @property
    def exit_code(self) -> int:
        if self.violations:
            return EXIT_VIOLATION
        if self.errors:
            return EXIT_ERROR
        return EXIT_OK

    def summary(self) -> dict:
        return {"summary": {"graphs": self.graphs, "violations": self.violations,
                            "errors": self.errors, "elapsed": round(self.elapsed, 3)}}

    def to_jsonl(self) -> str:
        lines = [json.dumps(r, sort_keys=True) for r in self.records]
        lines.append(json.dumps(self.summary(), sort_keys=True))
        return "\n".join(lines) + "\n"


def _verify_one(item):
    lineno, g, raw, budget, strategies = item
    if isinstance(g, Graph6Error):
        return {"line": lineno, "input": raw, "error": f"parse error: {g}"}
    try:
        if not is_connected(g):
            return {"line": lineno, "input": raw, "error": "graph is not connected"}
        report = check_bounds(g, budget, strategies)
    except CopboundError as exc:
        return {"line": lineno, "input": raw, "error": str(exc)}
    report.line = lineno
    record = report.to_dict()
    record["violation"] = report.violated
    return record


def _pool_map(fn, items, jobs: int | None):
    jobs = jobs or os.cpu_count() or 1
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (jobs * 8))))


def verify_corpus(path, budget: int | None = None, strategies: bool = False, jobs: int | None = None) -> CorpusReport:
    """Check every graph of a graph6 file; parse failures are recorded and skipped."""
    started = time.perf_counter()
    items = [(lineno, g, raw, budget, strategies) for lineno, g, raw in read_graph6_file(path)]
    report = CorpusReport()
    for record in _pool_map(_verify_one, items, jobs):
        report.records.append(record)
        if "error" in record:
            report.errors += 1
            log.warning("line %s: %s", record["line"], record["error"])
            continue
        report.graphs += 1
        if record["violation"]:
            report.violations += 1
            log.error("violation on line %s (%s)", record["line"], record["graph6"])
    report.elapsed = time.perf_counter() - started
    return report


# -- extremal search ----------------------------------------------------------


@dataclass(frozen=True)
class Predicate:
    equality: str  # "alpha" or "gamma"
    min_value: int = 1
    min_diameter: int = 0
    max_diameter: int | None = None

    def __post_init__(self):
        if self.equality not in ("alpha", "gamma"):
            raise ValueError("equality must be 'alpha' or 'gamma'")


@dataclass
class SearchResult:
    witnesses: list[dict] = field(default_factory=list)
    examined: int = 0
    exhausted: bool = False
    watermark: int | None = None
    reason: str | None = None


def _search_one(item):
    index, g, predicate, budget = item
    if not is_connected(g):
        return index, None
    d = diameter(g)
    if d < predicate.min_diameter or (predicate.max_diameter is not None and d > predicate.max_diameter):
        return index, None
    gamma, _ = domination_number(g)
    if predicate.equality == "alpha":
        alpha, _ = independence_number(g)
        target = alpha
        # c <= gamma <= alpha, so c = alpha forces gamma = alpha
        if alpha != gamma or alpha < predicate.min_value:
            return index, None
    else:
        alpha = None
        target = gamma
        if gamma < predicate.min_value:
            return index, None
    lower = aigner_fromme_lower_bound(g)
    if target > 1 and not (lower is not None and lower >= target):
        try:
            if solve_k_cops(g, target - 1, budget).cops_win:
                return index, None
        except BudgetExceeded as exc:
            return index, exc
    if alpha is None:
        alpha, _ = independence_number(g)
    return index, {"graph6": encode_graph6(g), "name": g.name, "n": g.n, "diameter": d,
                   "alpha": alpha, "gamma": gamma, "copNumber": target}


def iter_source(source):
    """Graphs from a graph6 path or an iterable of graphs; parse errors are skipped."""
    if isinstance(source, (str, os.PathLike)):
        for lineno, g, _ in read_graph6_file(source):
            if isinstance(g, Graph6Error):
                log.warning("line %s skipped: %s", lineno, g)
                continue
            yield g
    else:
        yield from source


def search_extremal(source, predicate: Predicate, budget: int | None = None,
                    time_budget: float | None = None, jobs: int | None = 1) -> SearchResult:
    """Connected graphs with c = alpha (or c = gamma) meeting the value and diameter filters.

    Cheap filters (diameter, alpha vs gamma, the girth/degree bound) run
    before any game solve; c = target is confirmed by a robber win with
    ``target - 1`` cops.
    """
    started = time.perf_counter()
    graphs = list(iter_source(source))
    result = SearchResult()
    batch = max(1, (jobs or 1) * 16)
    for lo in range(0, len(graphs), batch):
        items = [(i, graphs[i], predicate, budget) for i in range(lo, min(lo + batch, len(graphs)))]
        for index, found in _pool_map(_search_one, items, jobs):
            if isinstance(found, BudgetExceeded):
                result.exhausted, result.watermark, result.reason = True, index, str(found)
                return result
            result.examined = index + 1
            if found is not None:
                result.witnesses.append(found)
        if time_budget is not None and time.perf_counter() - started > time_budget:
            if result.examined < len(graphs):
                result.exhausted, result.watermark, result.reason = True, result.examined, "time budget"
            return result
    return result
