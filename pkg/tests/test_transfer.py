import random

from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import FULL2, G, H, ID2, random_complete_nfa
from popcontrol.nfa import bits
from popcontrol.transfer import (
    TransferGraph,
    compatible_graphs,
    compose,
    count_compatible,
    is_compatible,
    leaks_at,
    maximal_graph,
    separated_pairs,
    separates,
)

N = 4


def graphs(n=N):
    return st.lists(st.integers(0, (1 << n) - 1), min_size=n, max_size=n).map(TransferGraph)


def test_compose_examples():
    assert compose(G, H) == FULL2
    assert compose(G, ID2) == G
    assert compose(TransferGraph.empty(2), H) == TransferGraph.empty(2)
    assert G @ H == FULL2


def test_leak_examples():
    assert leaks_at(G, H)
    assert not leaks_at(G, ID2)
    assert not leaks_at(FULL2, H)


def test_separation_examples():
    assert separates(G, 1, 0)
    assert not separates(G, 0, 1)
    assert separates(H, 0, 1)
    assert separated_pairs(FULL2) == 0


def brute_leak(g, h):
    n = len(g)
    gh = compose(g, h)
    return any(
        gh.has_edge(q, y) and h.has_edge(x, y) and not g.has_edge(q, x)
        for q in range(n) for x in range(n) for y in range(n)
    )


@settings(max_examples=300, deadline=None)
@given(graphs(), graphs(), graphs())
def test_compose_associative(a, b, c):
    assert compose(compose(a, b), c) == compose(a, compose(b, c))


@settings(max_examples=200, deadline=None)
@given(graphs())
def test_identity_neutral(g):
    ident = TransferGraph.identity(N)
    assert compose(g, ident) == g == compose(ident, g)


@settings(max_examples=300, deadline=None)
@given(graphs(), graphs())
def test_dom_im_inclusion(g, h):
    gh = compose(g, h)
    assert gh.dom & ~g.dom == 0
    assert gh.im & ~h.im == 0


@settings(max_examples=300, deadline=None)
@given(graphs(), graphs())
def test_leaks_at_matches_definition(g, h):
    assert leaks_at(g, h) == brute_leak(g, h)


@settings(max_examples=500, deadline=None)
@given(graphs(), graphs(), st.integers(0, N - 1), st.integers(0, N - 1))
def test_separation_with_common_successor_leaks(g, h, r, t):
    if separates(g, r, t) and h[r] & h[t]:
        assert leaks_at(g, h)


@settings(max_examples=200, deadline=None)
@given(graphs())
def test_separated_pairs_matches_separates(g):
    mask = separated_pairs(g)
    for r in range(N):
        for t in range(N):
            assert bool(mask >> (r * N + t) & 1) == separates(g, r, t)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.integers(1, 2))
def test_compatible_graphs_count_and_shape(seed, n, k):
    rng = random.Random(seed)
    nfa = random_complete_nfa(rng, n, k)
    support = rng.randrange(1, 1 << n)
    a = rng.randrange(k)
    listed = list(compatible_graphs(nfa, support, a))
    expected = 1
    for q in bits(support):
        expected *= (1 << nfa.succ(q, a).bit_count()) - 1
    assert len(listed) == len(set(listed)) == expected == count_compatible(nfa, support, a)
    assert all(g.dom == support and is_compatible(nfa, g, a) for g in listed)
    assert listed[-1] == maximal_graph(nfa, support, a)


def test_compatible_graphs_within_mask():
    from popcontrol.gadgets import chain

    nfa = chain(2)
    live = nfa.coreachable()
    q0, lose = nfa.state_index("q0"), nfa.state_index("☹")
    a1 = nfa.letter_index("a1")
    assert list(compatible_graphs(nfa, 1 << q0, a1, live)) == []
    full = list(compatible_graphs(nfa, 1 << q0, a1))
    assert full == [TransferGraph.from_edges(nfa.n_states, [(q0, lose)])]
