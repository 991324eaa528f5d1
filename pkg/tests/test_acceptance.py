"""Acceptance criteria, one test each; every test appends a PASS/FAIL line
that the terminal summary prints under "acceptance criteria"."""

import math
import random
import time
from contextlib import contextmanager

from copbound.game import cop_number, solve_k_cops
from copbound.graph import (
    build_graph,
    cycle,
    diameter,
    diametral_layers,
    distance_layers,
    encode_graph6,
    girth,
    hoffman_singleton,
    min_degree,
    max_degree,
    paley,
    parse_graph6,
    path,
)
from copbound.harness import Predicate, aigner_fromme_lower_bound, certify_equality, search_extremal, verify_corpus
from copbound.invariants import constrained_max_independent_set, domination_number, independence_number
from copbound.strategies import synthesize, validate_strategy

from .conftest import CORPUS_LE7, random_connected, random_graph
from .oracles import brute_alpha, brute_gamma, brute_max_independent_sets


@contextmanager
def criterion(report, number, title, limit):
    started = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - started
        ok = ok and elapsed < limit
        report.append(f"[{'PASS' if ok else 'FAIL'}] {number}. {title} ({elapsed:.2f}s, limit {limit:g}s)")
    assert elapsed < limit, f"criterion {number} took {elapsed:.1f}s"


def test_1_path_formulas(acceptance_report):
    with criterion(acceptance_report, 1, "path formulas n=2..12", 5):
        for n in range(2, 13):
            g = path(n)
            assert cop_number(g) == 1
            assert independence_number(g)[0] == math.ceil(n / 2)
            assert domination_number(g)[0] == math.ceil(n / 3)
            assert diameter(g) == n - 1


def test_2_paley17(acceptance_report):
    with criterion(acceptance_report, 2, "Paley-17 c = alpha = 3", 120):
        g = paley(17)
        assert independence_number(g)[0] == 3
        assert not solve_k_cops(g, 2).cops_win
        assert solve_k_cops(g, 3).cops_win


def test_3_hoffman_singleton(acceptance_report, monkeypatch):
    import copbound.harness as harness

    def no_solve(*args, **kwargs):
        raise AssertionError("certificate must not call the game solver")

    with criterion(acceptance_report, 3, "Hoffman-Singleton c = 7 without a game solve", 600):
        g = hoffman_singleton()
        assert g.n == 50 and girth(g) == 5 and min_degree(g) == max_degree(g) == 7
        assert aigner_fromme_lower_bound(g) == 7
        gamma, witness = domination_number(g)
        assert gamma == 7 and witness.lower_bound == math.ceil(50 / 8) == 7
        assert g.dominates(witness.mask)
        monkeypatch.setattr(harness, "cop_number", no_solve)
        monkeypatch.setattr(harness, "solve_k_cops", no_solve)
        cert = certify_equality(g)
        assert cert.kind == "girth-degree" and cert.cop_number == 7


def test_4_corpus_verification(acceptance_report):
    with criterion(acceptance_report, 4, "zero bound violations on connected n <= 7", 1800):
        report = verify_corpus(CORPUS_LE7, strategies=True, jobs=1)
        assert report.graphs == 996 and report.errors == 0
        assert all(r["copNumber"] is not None for r in report.records)
        assert report.violations == 0


def _sample(seed, count, min_d):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        g = random_connected(rng, rng.randint(8, 16), rng.randint(0, 4))
        if diameter(g) >= min_d:
            out.append(g)
    return out


def test_5_strategy_soundness(acceptance_report):
    with criterion(acceptance_report, 5, "synthesized strategies sound, ledgers hold", 1800):
        cases = [(1, g) for g in _sample(51, 200, 4)]
        cases += [(2, g) for g in _sample(52, 200, 5)]
        cases += [(3, g) for g in _sample(53, 200, 6)]
        cases += [(4, path(n)) for n in range(19, 26)]
        unsound = 0
        for thm, g in cases:
            s = synthesize(g, thm)
            verdict = validate_strategy(g, s)
            unsound += not verdict.sound
            alpha, _ = independence_number(g)
            gamma, _ = domination_number(g)
            d = diameter(g)
            if thm == 1:
                assert s.cop_count <= alpha - 1
            elif thm == 2:
                assert s.cop_count <= alpha - (d - 3) // 2
            elif thm == 3:
                assert s.cop_count == gamma - 1
            else:
                k = s.info["barrier_plan"].k
                assert s.cop_count <= gamma - k * k - 2 * k
        assert unsound == 0


def test_6_diameter_gates(acceptance_report, corpus_le7):
    with criterion(acceptance_report, 6, "no c = alpha with D >= 4, no c = gamma with D >= 6", 1800):
        assert search_extremal(corpus_le7, Predicate("alpha", min_diameter=4)).witnesses == []
        assert search_extremal(corpus_le7, Predicate("gamma", min_diameter=6)).witnesses == []
        small = search_extremal(corpus_le7, Predicate("alpha", min_value=2, max_diameter=3))
        twos = [w for w in small.witnesses if w["alpha"] == 2]
        assert twos
        c4 = encode_graph6(cycle(4))
        assert c4 in {w["graph6"] for w in twos}
        assert cop_number(cycle(4)) == 2


def test_7_oracle_equivalence(acceptance_report, corpus_le7, sample_n8):
    with criterion(acceptance_report, 7, "branch and bound equals brute force, n <= 8", 1800):
        graphs = corpus_le7 + sample_n8
        assert len(sample_n8) >= 2000
        layer_instances = 0
        for g in graphs:
            assert independence_number(g)[0] == brute_alpha(g)
            assert domination_number(g)[0] == brute_gamma(g)
            layers = diametral_layers(g) if g.n > 1 else None
            if layers is None or layers.depth < 2:
                continue
            for base in range(g.n):
                lay = distance_layers(g, base)
                domain = lay.at_least(2)
                if not domain:
                    continue
                penalty = lay.layer(3) if lay.depth >= 3 else 0
                got = constrained_max_independent_set(g, domain, penalty)
                best = brute_max_independent_sets(g, list(_bits(domain)))
                assert got.size == len(best[0])
                overlap = min(sum(penalty >> v & 1 for v in s) for s in best)
                assert sum(penalty >> v & 1 for v in got.vertices) == overlap
                layer_instances += 1
        assert layer_instances > 1000


def _bits(mask):
    v = 0
    while mask:
        if mask & 1:
            yield v
        mask >>= 1
        v += 1


def test_8_graph6_round_trip(acceptance_report):
    with criterion(acceptance_report, 8, "graph6 round trip on 10^4 random graphs", 600):
        rng = random.Random(6)
        for _ in range(10_000):
            n = rng.randint(1, 12)
            g = random_graph(rng, n, rng.random())
            h = parse_graph6(encode_graph6(g))
            assert h.n == g.n and h.adj == g.adj
