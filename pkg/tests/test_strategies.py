import random

import pytest

from copbound.errors import IllegalMove, NotApplicable
from copbound.game import Captured, play
from copbound.graph import bits, build_graph, complete, cycle, diameter, path, to_mask
from copbound.invariants import domination_number, independence_number
from copbound.strategies import (
    BestResponseRobber,
    CopStrategy,
    Job,
    barrier_parameters,
    confinement_region,
    dominating_set_strategy,
    exchange_claim_holds,
    synth_alpha_minus_one,
    synth_barrier_blocks,
    synth_gamma_minus_one,
    synth_sliding_blocks,
    synthesize,
    validate_strategy,
)

from .conftest import random_connected


def graphs_with_diameter(seed, count, min_d, sizes=range(8, 17)):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.choice(list(sizes))
        g = random_connected(rng, n, rng.randint(0, 3))
        if diameter(g) >= min_d:
            out.append(g)
    return out


def best_response_transcript(g, s):
    verdict = validate_strategy(g, s)
    assert verdict.sound, verdict
    return play(g, s, BestResponseRobber(s, verdict), verdict.max_capture_turns + 5), verdict


# -- examples ------------------------------------------------------------------


def test_alpha_minus_one_path5():
    s = synth_alpha_minus_one(path(5))
    assert s.placement == (2, 4) and s.cop_count == 2
    assert s.info["mover"] == 4 and s.info["base"] == 0
    assert s.plans[0] == (Job("relocate", 1, 0),)
    assert validate_strategy(path(5), s).sound


def test_sliding_blocks_path8():
    s = synth_sliding_blocks(path(8))
    assert s.cop_count == 2
    assert validate_strategy(path(8), s).sound


@pytest.mark.parametrize("shift", range(12))
def test_sliding_blocks_cycle12_every_rotation(shift):
    g = build_graph(12, [((i + shift) % 12, (i + shift + 1) % 12) for i in range(12)])
    s = synth_sliding_blocks(g)
    alpha, _ = independence_number(g)
    assert s.cop_count <= alpha - (6 - 3) // 2
    assert validate_strategy(g, s).sound


def test_gamma_minus_one_path7():
    s = synth_gamma_minus_one(path(7))
    assert domination_number(path(7))[0] == 3 and s.cop_count == 2
    assert validate_strategy(path(7), s).sound


def test_barrier_blocks_path19():
    g = path(19)
    s = synth_barrier_blocks(g)
    plan = s.info["barrier_plan"]
    assert (plan.k, plan.m, plan.width) == (1, 3, 6)
    gamma, _ = domination_number(g)
    assert s.cop_count == gamma - 3 == 4
    assert validate_strategy(g, s).sound


@pytest.mark.parametrize("d,expected", [(17, None), (18, (1, 3)), (23, (1, 3)), (24, (1, 4)),
                                         (36, (2, 4)), (45, (2, 5)), (60, (3, 5))])
def test_barrier_parameters(d, expected):
    assert barrier_parameters(d) == expected


@pytest.mark.parametrize("synth,g", [
    (synth_alpha_minus_one, complete(4)),
    (synth_alpha_minus_one, cycle(7)),
    (synth_sliding_blocks, path(5)),
    (synth_gamma_minus_one, path(5)),
    (synth_gamma_minus_one, path(6)),
    (synth_barrier_blocks, path(10)),
    (synth_barrier_blocks, path(18)),
])
def test_not_applicable(synth, g):
    with pytest.raises(NotApplicable):
        synth(g)


def test_synthesize_rejects_unknown_theorem():
    with pytest.raises(ValueError):
        synthesize(path(5), 5)


# -- validator -----------------------------------------------------------------


def test_stationary_non_dominating_is_unsound():
    g = path(6)
    s = CopStrategy(g, None, (0,), {0: ()})
    verdict = validate_strategy(g, s)
    assert verdict.result == "unsound" and not verdict.sound
    assert verdict.escape_witness
    # the robber never comes within reach of the cop on 0
    assert all(g.dist(0, r) >= 2 for r in verdict.escape_witness)


def test_stationary_dominating_is_sound():
    g = cycle(6)
    s = dominating_set_strategy(g)
    assert s.cop_count == 2
    verdict = validate_strategy(g, s)
    assert verdict.sound and verdict.max_capture_turns == 1


def test_budget_one_is_inconclusive():
    verdict = validate_strategy(path(8), synth_sliding_blocks(path(8)), state_budget=1)
    assert verdict.result == "inconclusive"


def test_turn_limit_below_capture_time_is_unsound():
    g = path(19)
    s = synth_barrier_blocks(g)
    worst = validate_strategy(g, s).max_capture_turns
    assert worst > 1
    assert validate_strategy(g, s, turn_limit=worst - 1).result == "unsound"


def test_teleporting_strategy_is_illegal():
    g = path(6)
    s = CopStrategy(g, None, (0,), {0: (Job("jump", 0, 5),)})
    s.step = lambda cops, robber, memory: ((5,), memory)
    with pytest.raises(IllegalMove):
        validate_strategy(g, s)


def test_moves_are_single_edges_and_one_cop_at_a_time():
    g = path(22)
    for synth in (synth_alpha_minus_one, synth_sliding_blocks, synth_gamma_minus_one, synth_barrier_blocks):
        s = synth(g)
        tr, _ = best_response_transcript(g, s)
        cop_states = [st for st in tr.states if st.turn.value == "cop"]
        for a, b in zip(tr.states, tr.states[1:]):
            if a.turn.value == "cop" and b.turn.value == "robber":
                assert sum(x != y for x, y in zip(a.cops, b.cops)) <= 1
        assert cop_states


# -- structural claims ---------------------------------------------------------


def test_confinement_along_best_response_play():
    cases = [(1, g) for g in graphs_with_diameter(1, 30, 4)]
    cases += [(3, g) for g in graphs_with_diameter(3, 30, 6)]
    cases += [(4, path(n)) for n in (19, 22, 25)]
    for thm, g in cases:
        s = synthesize(g, thm)
        tr, _ = best_response_transcript(g, s)
        assert isinstance(tr.result, Captured)
        start = tr.states[0].robber
        region = confinement_region(s, start)
        if start in s.placement:
            continue
        for st in tr.states:
            if not st.captured:
                assert region >> st.robber & 1, (thm, st)


def test_exchange_claim_at_diameter_four():
    hits = 0
    for g in graphs_with_diameter(4, 200, 4, sizes=range(6, 12)):
        if diameter(g) != 4:
            continue
        s = synth_alpha_minus_one(g)
        if s.info["exchange_vertex"] is not None:
            hits += 1
        assert exchange_claim_holds(g, s)
    assert hits


def test_alpha_mover_far_when_diameter_at_least_five():
    for g in graphs_with_diameter(5, 60, 5):
        s = synth_alpha_minus_one(g)
        layers = s.info["layers"]
        assert layers.at_least(4) >> s.info["mover"] & 1


def test_gamma_mover_in_far_layers():
    for g in graphs_with_diameter(6, 60, 6):
        s = synth_gamma_minus_one(g)
        layers = s.info["layers"]
        assert layers.at_least(5) >> s.info["mover"] & 1
        assert layers.span(0, 1) >> s.info["w"] & 1


def test_barrier_occupancy_and_reserved_sets():
    for n in range(19, 40, 3):
        g = path(n)
        s = synth_barrier_blocks(g)
        plan = s.info["barrier_plan"]
        cops = to_mask(s.placement)
        assert plan.m - 2 >= plan.k
        for barrier in plan.barriers:
            assert cops & barrier
        for inner, group in zip(plan.interiors, plan.reserved):
            assert len(group) == plan.k
            assert to_mask(group) & ~inner == 0
            assert not cops & to_mask(group)
        assert sorted(list(bits(cops)) + [v for grp in plan.reserved for v in grp]) == \
            sorted(s.info["dominating_set"])


def test_ledgers_on_decorated_paths():
    rng = random.Random(7)
    for _ in range(20):
        spine = rng.randint(20, 24)
        edges = [(i, i + 1) for i in range(spine - 1)]
        n = spine
        for _ in range(rng.randint(0, 4)):
            edges.append((rng.randrange(1, spine - 1), n))
            n += 1
        g = build_graph(n, edges)
        alpha, _ = independence_number(g)
        gamma, _ = domination_number(g)
        d = diameter(g)
        s = synth_barrier_blocks(g)
        plan = s.info["barrier_plan"]
        assert s.cop_count == gamma - plan.k * plan.m <= gamma - plan.k ** 2 - 2 * plan.k
        assert synth_sliding_blocks(g).cop_count <= alpha - (d - 3) // 2
        assert validate_strategy(g, s).sound
