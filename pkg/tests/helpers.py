"""Shared generators and brute-force oracles for the test suite."""

from __future__ import annotations

import itertools
import random

from popcontrol.nfa import Nfa, bits, build_nfa, normalize
from popcontrol.tracking import LassoPlay
from popcontrol.transfer import TransferGraph

# two transfer graphs over the drift automaton: G spreads q0, H spreads q1
G = TransferGraph.from_edges(2, [(0, 0), (0, 1), (1, 1)])
H = TransferGraph.from_edges(2, [(0, 0), (1, 0), (1, 1)])
FULL2 = TransferGraph.full(2)
ID2 = TransferGraph.identity(2)


def random_subset(rng: random.Random, mask: int) -> int:
    """Uniform non-empty submask of a non-empty ``mask``."""
    members = list(bits(mask))
    while True:
        pick = 0
        for q in members:
            if rng.random() < 0.5:
                pick |= 1 << q
        if pick:
            return pick


def random_raw_nfa(rng: random.Random, n: int, k: int, p_missing: float = 0.2) -> Nfa:
    """Random automaton on ``n`` states and ``k`` letters, possibly incomplete, target ``q{n-1}``."""
    states = [f"q{i}" for i in range(n)]
    letters = [chr(ord("a") + j) for j in range(k)]
    trans = []
    for q in range(n):
        for a in range(k):
            if rng.random() < p_missing:
                continue
            for r in bits(random_subset(rng, (1 << n) - 1)):
                trans.append((states[q], letters[a], states[r]))
    return build_nfa(states, letters, trans, states[0], states[-1])


def random_nfa(rng: random.Random, max_states: int = 3, max_letters: int = 2) -> Nfa:
    n = rng.randint(1, max_states)
    k = rng.randint(1, max_letters)
    return normalize(random_raw_nfa(rng, n, k))


def random_complete_nfa(rng: random.Random, n: int, k: int) -> Nfa:
    return random_raw_nfa(rng, n, k, p_missing=0.0)


def random_graph(rng: random.Random, nfa: Nfa, support: int, a: int) -> TransferGraph:
    rows = [0] * nfa.n_states
    for q in bits(support):
        rows[q] = random_subset(rng, nfa.succ(q, a))
    return TransferGraph(rows)


def random_lasso(rng: random.Random, nfa: Nfa, max_prefix: int = 4, max_loop: int = 4) -> LassoPlay:
    """Random walk from the initial support cut at the first repeated support.

    Walks are retried until prefix and loop fit their length caps.
    """
    while True:
        support = 1 << nfa.initial
        seen = {support: 0}
        steps = []
        for _ in range(max_prefix + max_loop):
            a = rng.randrange(nfa.n_letters)
            g = random_graph(rng, nfa, support, a)
            steps.append((a, g))
            support = g.im
            if support in seen:
                start = seen[support]
                return LassoPlay(tuple(steps[:start]), tuple(steps[start:]))
            seen[support] = len(steps)


def brute_max_entries(graphs) -> int:
    """Enumerate every accumulator ``T_0 .. T_k`` and count its entries."""
    supports = [graphs[0].dom] + [g.im for g in graphs]

    def subsets(mask):
        members = list(bits(mask))
        for r in range(len(members) + 1):
            for combo in itertools.combinations(members, r):
                yield sum(1 << q for q in combo)

    best = 0
    for seq in itertools.product(*(list(subsets(s)) for s in supports)):
        total = 0
        ok = True
        for j, g in enumerate(graphs):
            for s, t in g.edges():
                if seq[j] >> s & 1:
                    if not seq[j + 1] >> t & 1:
                        ok = False
                        break
                elif seq[j + 1] >> t & 1:
                    total += 1
            if not ok:
                break
        if ok:
            best = max(best, total)
    return best


def random_small_normalized(rng: random.Random, max_states: int = 3, max_letters: int = 2) -> Nfa:
    """Random automaton that has at most ``max_states`` states once normalized.

    The target is a sink, so normalization adds at most the losing sink.
    """
    while True:
        n = rng.randint(1, max_states)
        k = rng.randint(1, max_letters)
        raw = random_raw_nfa(rng, n, k)
        target = raw.target
        delta = tuple(
            tuple((1 << target) if q == target else row[q] for q in range(n)) for row in raw.delta
        )
        nfa = normalize(Nfa(raw.state_names, raw.alphabet_names, raw.initial, target, delta))
        if nfa.n_states <= max_states:
            return nfa


def random_permutation(rng: random.Random, n: int) -> list[int]:
    perm = list(range(n))
    rng.shuffle(perm)
    return perm
