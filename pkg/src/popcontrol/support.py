"""The support arena and the infinite-population game.

Supports are non-empty state sets encoded as bitmasks. Player 1 picks a
letter, Player 2 picks a compatible transfer graph with the support as its
domain, and the image becomes the next support. Player 1 wants ``{f}``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum

from .nfa import Nfa
from .transfer import compatible_graphs


class Player(Enum):
    P1 = 1
    P2 = 2

    def __str__(self):
        return self.name


def post_max(nfa: Nfa, support: int, a: int) -> int:
    """Image of the largest compatible graph: every successor of every state."""
    return nfa.post(support, a)


@dataclass
class SupportResult:
    winner: Player
    strategy: dict[int, int] = field(default_factory=dict)  # support -> letter, on P1's winning supports
    rank: dict[int, int] = field(default_factory=dict)  # steps to {f} under best play


def reachable_supports(nfa: Nfa, mode: str = "full") -> dict[int, list[set[int]]]:
    """Forward-reachable supports from ``{q0}``, with per-letter successor supports."""
    start = 1 << nfa.initial
    arena: dict[int, list[set[int]]] = {}
    queue = deque([start])
    arena[start] = []
    while queue:
        s = queue.popleft()
        moves = []
        for a in range(nfa.n_letters):
            if mode == "maximal":
                nxt = {post_max(nfa, s, a)}
            else:
                nxt = {g.im for g in compatible_graphs(nfa, s, a)}
            moves.append(nxt)
            for t in sorted(nxt):
                if t not in arena:
                    arena[t] = []
                    queue.append(t)
        arena[s] = moves
    return arena


def solve_infinite(nfa: Nfa, mode: str = "maximal") -> SupportResult:
    """Winner of the support game with goal ``{f}``.

    ``mode="maximal"`` lets Player 2 always play the maximal graph, which is a
    graph search for Player 1. ``mode="full"`` ranges over every compatible
    graph and computes a reachability attractor. Both give the same winner.
    """
    if mode not in ("maximal", "full"):
        raise ValueError(f"unknown mode {mode!r}")
    arena = reachable_supports(nfa, mode)
    goal = 1 << nfa.target
    preds: dict[int, list[tuple[int, int]]] = {s: [] for s in arena}
    pending: dict[tuple[int, int], int] = {}
    for s, moves in arena.items():
        for a, nxt in enumerate(moves):
            pending[(s, a)] = len(nxt)
            for t in nxt:
                preds[t].append((s, a))

    rank: dict[int, int] = {}
    strategy: dict[int, int] = {}
    queue = deque()
    if goal in arena:
        rank[goal] = 0
        queue.append(goal)
    while queue:
        t = queue.popleft()
        for s, a in preds[t]:
            if s in rank:
                continue
            pending[(s, a)] -= 1
            if pending[(s, a)] == 0:
                rank[s] = rank[t] + 1
                queue.append(s)
    # lowest letter whose successors all have strictly smaller rank
    for s, r in rank.items():
        if s == goal:
            continue
        for a, nxt in enumerate(arena[s]):
            if all(t in rank and rank[t] < r for t in nxt):
                strategy[s] = a
                break
    start = 1 << nfa.initial
    winner = Player.P1 if start in rank else Player.P2
    return SupportResult(winner, strategy, rank)


def support_arena_dot(nfa: Nfa) -> str:
    """DOT of the reachable support arena; edges carry the letter and graph count."""
    arena = reachable_supports(nfa, "full")
    order = {s: i for i, s in enumerate(arena)}
    lines = ["digraph support_arena {", "  rankdir=LR;"]
    for s, i in order.items():
        shape = "doublecircle" if s == 1 << nfa.target else "ellipse"
        lines.append(f'  n{i} [label="{nfa.format_support(s)}", shape={shape}];')
    for s, moves in arena.items():
        for a, nxt in enumerate(moves):
            counts: dict[int, int] = {}
            for g in compatible_graphs(nfa, s, a):
                counts[g.im] = counts.get(g.im, 0) + 1
            for t in sorted(counts):
                lines.append(
                    f'  n{order[s]} -> n{order[t]} [label="{nfa.alphabet_names[a]}/{counts[t]}"];'
                )
    lines.append("}")
    return "\n".join(lines) + "\n"

