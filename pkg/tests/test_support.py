import random

import pytest

from helpers import random_complete_nfa, random_small_normalized
from popcontrol import gadgets
from popcontrol.nfa import build_nfa
from popcontrol.parity import population_control
from popcontrol.support import Player, post_max, reachable_supports, solve_infinite, support_arena_dot
from popcontrol.transfer import compatible_graphs, maximal_graph

FIXTURES = ["split", "chain:2", "chain:3", "drift", "leakmemory", "family_a:1"]


def brute_support_winner(nfa):
    """Greatest fixed point over all 2^Q supports, every compatible image."""
    n = nfa.n_states
    goal = 1 << nfa.target
    images = {
        s: [{g.im for g in compatible_graphs(nfa, s, a)} for a in range(nfa.n_letters)]
        for s in range(1, 1 << n)
    }
    win = {goal}
    while True:
        grown = win | {s for s, per in images.items() if any(nxt <= win for nxt in per)}
        if grown == win:
            break
        win = grown
    return Player.P1 if 1 << nfa.initial in win else Player.P2


def deterministic_two_state():
    return build_nfa(["q0", "f"], ["a"], [("q0", "a", "f"), ("f", "a", "f")], "q0", "f")


def test_examples():
    assert solve_infinite(gadgets.split()).winner is Player.P2
    assert solve_infinite(gadgets.leakmemory()).winner is Player.P2
    res = solve_infinite(deterministic_two_state())
    assert res.winner is Player.P1
    assert res.rank[1] == 1 and res.strategy == {1: 0}


@pytest.mark.parametrize("spec", FIXTURES)
def test_modes_agree_with_brute_force_on_fixtures(spec):
    nfa = gadgets.gadget_from_spec(spec)
    w = brute_support_winner(nfa) if nfa.n_states <= 7 else None
    assert solve_infinite(nfa, "maximal").winner is solve_infinite(nfa, "full").winner
    if w is not None:
        assert solve_infinite(nfa, "full").winner is w


def test_modes_agree_on_random():
    rng = random.Random(7)
    for _ in range(150):
        nfa = random_complete_nfa(rng, rng.randint(1, 5), rng.randint(1, 2))
        a = solve_infinite(nfa, "maximal").winner
        assert a is solve_infinite(nfa, "full").winner
        if nfa.n_states <= 3:
            assert a is brute_support_winner(nfa)


def test_strategy_decreases_rank():
    rng = random.Random(3)
    for _ in range(100):
        nfa = random_complete_nfa(rng, rng.randint(1, 4), 2)
        res = solve_infinite(nfa, "full")
        for s, a in res.strategy.items():
            assert all(res.rank.get(g.im, 10**9) < res.rank[s] for g in compatible_graphs(nfa, s, a))


def test_post_max_is_image_of_maximal_graph():
    nfa = gadgets.leakmemory()
    for s in reachable_supports(nfa):
        for a in range(nfa.n_letters):
            assert post_max(nfa, s, a) == maximal_graph(nfa, s, a).im


def test_infinite_win_implies_controllable():
    rng = random.Random(11)
    seen = 0
    for _ in range(200):
        nfa = random_small_normalized(rng)
        if solve_infinite(nfa).winner is Player.P1:
            seen += 1
            assert population_control(nfa, 1 << 20).controllable
    assert seen > 10


def test_unknown_mode():
    with pytest.raises(ValueError):
        solve_infinite(gadgets.split(), "fast")


def test_dot_export():
    dot = support_arena_dot(gadgets.split())
    assert dot.startswith("digraph support_arena {")
    assert 'label="{q0}"' in dot and "doublecircle" in dot
    assert dot == support_arena_dot(gadgets.split())
