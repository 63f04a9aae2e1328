import itertools
import math
import random

import pytest

from helpers import random_nfa, random_permutation, random_small_normalized
from popcontrol import gadgets
from popcontrol.errors import BudgetExceeded
from popcontrol.nfa import build_nfa, bits
from popcontrol.oracle import explore, find_cutoff, optimal_steps, winner_fixed_m
from popcontrol.support import Player


def brute_reach(nfa, m):
    """Value iteration over all configurations, successors by per-token choices.

    Returns the number of rounds after which the initial configuration is
    winning, or ``inf``.
    """
    n = nfa.n_states
    configs = [c for c in itertools.product(range(m + 1), repeat=n) if sum(c) == m]

    def successors(c, a):
        tokens = [q for q in range(n) for _ in range(c[q])]
        out = set()
        for choice in itertools.product(*(list(bits(nfa.succ(q, a))) for q in tokens)):
            nxt = [0] * n
            for r in choice:
                nxt[r] += 1
            out.add(tuple(nxt))
        return out

    moves = {c: [successors(c, a) for a in range(nfa.n_letters)] for c in configs}
    goal = tuple(m if q == nfa.target else 0 for q in range(n))
    start = tuple(m if q == nfa.initial else 0 for q in range(n))
    win = {goal}
    rounds = 0
    while start not in win:
        grown = win | {c for c in configs if any(s <= win for s in moves[c])}
        if grown == win:
            return math.inf
        win = grown
        rounds += 1
    return rounds


def test_examples():
    split = gadgets.split()
    assert all(winner_fixed_m(split, m) is Player.P1 for m in range(1, 7))
    c3 = gadgets.chain(3)
    assert winner_fixed_m(c3, 2) is Player.P1
    assert winner_fixed_m(c3, 3) is Player.P2
    path = build_nfa(["q0", "q1", "f"], ["a"], [("q0", "a", "q1"), ("q1", "a", "f"), ("f", "a", "f")], "q0", "f")
    assert winner_fixed_m(path, 1) is Player.P1
    assert optimal_steps(path, 1) == 2


def test_split_steps():
    split = gadgets.split()
    assert optimal_steps(split, 1) == 2
    assert optimal_steps(split, 4) == 6


def test_counter_survival():
    nfa = gadgets.counter(2)
    start = [1, 1, 0, 0, 0, 0]
    assert optimal_steps(nfa, 2, "survive", start=start) == 4


def test_unwinnable_reach_is_infinite():
    assert optimal_steps(gadgets.chain(2), 2) == math.inf


def test_survive_without_danger_is_infinite():
    assert optimal_steps(gadgets.split(), 2, "survive") == math.inf


def test_matches_brute_force():
    rng = random.Random(31)
    for _ in range(120):
        nfa = random_small_normalized(rng, 4, 2)
        for m in (1, 2, 3):
            expected = brute_reach(nfa, m)
            assert optimal_steps(nfa, m) == expected
            assert (winner_fixed_m(nfa, m) is Player.P1) == (expected != math.inf)


def test_monotone_in_m():
    rng = random.Random(37)
    for _ in range(80):
        nfa = random_small_normalized(rng, 4, 2)
        wins = [winner_fixed_m(nfa, m) is Player.P1 for m in range(1, 6)]
        assert wins == sorted(wins, reverse=True)


def test_permutation_invariance():
    rng = random.Random(41)
    for spec in ("split", "chain:3", "leakmemory"):
        nfa = gadgets.gadget_from_spec(spec)
        perm = random_permutation(rng, nfa.n_states)
        other = nfa.relabel(perm)
        for m in (1, 2, 3):
            assert winner_fixed_m(nfa, m) is winner_fixed_m(other, m)
            assert optimal_steps(nfa, m) == optimal_steps(other, m)


def test_find_cutoff():
    assert str(find_cutoff(gadgets.chain(2), 8)) == "CUTOFF 2"
    assert str(find_cutoff(gadgets.drift(), 4)) == "CUTOFF 1"
    res = find_cutoff(gadgets.split(), 3)
    assert res.status == "NOCUTOFF" and str(res) == "NOCUTOFF"
    assert str(find_cutoff(gadgets.split(), 3, decide=lambda nfa: False)) == "EXCEEDS 3"


def test_find_cutoff_budget():
    res = find_cutoff(gadgets.leakmemory(), 6, budget=200)
    assert res.status == "EXCEEDS" and res.m_max == 6


def test_explore_budget_and_errors():
    with pytest.raises(BudgetExceeded):
        explore(gadgets.split(), 8, budget=10)
    with pytest.raises(ValueError):
        winner_fixed_m(gadgets.split(), 0)
    with pytest.raises(ValueError):
        optimal_steps(gadgets.split(), 2, "hover")
    with pytest.raises(ValueError):
        explore(gadgets.split(), 2, start=[1, 0, 0, 0])


def test_explore_configs_sum_to_m():
    game = explore(gadgets.split(), 4)
    for code in game.configs:
        counts = game.decode(code)
        assert sum(counts) == 4 and game.encode(counts) == code


def test_yes_implies_p1_wider_instances():
    """Raw automata up to 3 states; normalization may add two sinks and a letter."""
    from popcontrol.parity import population_control

    rng = random.Random(43)
    decided = yes = 0
    for _ in range(40):
        nfa = random_nfa(rng)
        try:
            res = population_control(nfa, 150_000)
        except BudgetExceeded:
            continue
        decided += 1
        if res.controllable:
            yes += 1
            assert all(winner_fixed_m(nfa, m) is Player.P1 for m in range(1, 4))
    assert decided >= 30 and yes >= 3


@pytest.mark.parametrize("spec, ms", [("split", (1, 2, 3, 4)), ("chain:2", (1, 2)), ("chain:3", (2, 3)),
                                      ("leakmemory", (1, 2)), ("drift", (1, 2))])
def test_fixtures_match_brute_force(spec, ms):
    nfa = gadgets.gadget_from_spec(spec)
    for m in ms:
        assert optimal_steps(nfa, m) == brute_reach(nfa, m)


def predicted_family_cutoff(n):
    """n counter tokens plus the least split population needing more than 2^n - 1 steps."""
    safe = 2 ** n - 1
    k = 1
    while 2 * (k.bit_length() - 1) + 2 <= safe:
        k += 1
    return n + k


def test_family_cutoffs():
    for n, expected in ((1, 2), (2, 4), (3, 11)):
        assert predicted_family_cutoff(n) == expected
        assert str(find_cutoff(gadgets.family_a(n), 12)) == f"CUTOFF {expected}"
