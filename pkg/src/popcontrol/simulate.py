"""Playing symbolic strategies on concrete populations.

Player 1 never counts tokens: it sees the support and the tracking list built
from the projected transfer graphs, and reads its letter off the strategy.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field

from .nfa import Nfa, bits
from .parity import SymbolicStrategy
from .tracking import TrackingList, update_list
from .transfer import TransferGraph, maximal_graph

Flows = dict  # dict[(src, dst)] -> token count


class InvalidMove(ValueError):
    pass


def support_of(counts) -> int:
    out = 0
    for q, c in enumerate(counts):
        if c:
            out |= 1 << q
    return out


def project_phi(before, flows: Flows, nfa: Nfa | None = None, letter: int | None = None):
    """Support of ``before`` and the transfer graph of edges used by at least one token."""
    n = len(before)
    moved = [0] * n
    rows = [0] * n
    for (s, t), k in flows.items():
        if k < 0:
            raise InvalidMove("negative token count")
        if k == 0:
            continue
        if nfa is not None and letter is not None and not nfa.succ(s, letter) >> t & 1:
            raise InvalidMove(f"move {s}->{t} is not a transition")
        moved[s] += k
        rows[s] |= 1 << t
    if list(moved) != list(before):
        raise InvalidMove("every token must move exactly once")
    return support_of(before), TransferGraph(rows)


def apply_flows(n: int, flows: Flows) -> tuple[int, ...]:
    after = [0] * n
    for (_, t), k in flows.items():
        after[t] += k
    return tuple(after)


def even_flows(before, graph: TransferGraph) -> Flows:
    """Spread each state's tokens as evenly as possible over its edges in ``graph``.

    Edges are taken in target order; when tokens run short the first edges
    get one each and the rest get none.
    """
    flows: Flows = {}
    for s, c in enumerate(before):
        if not c:
            continue
        targets = list(bits(graph[s]))
        share, extra = divmod(c, len(targets))
        for i, t in enumerate(targets):
            k = share + (1 if i < extra else 0)
            if k:
                flows[(s, t)] = k
    return flows


@dataclass
class Adversary:
    """Player 2 policy on concrete populations.

    ``even_split``: the graph chosen by a Player 2 symbolic strategy (the
    maximal graph where it is undefined) with tokens spread evenly.
    ``max_spread``: the maximal graph with tokens spread evenly.
    ``random``: every token picks a uniform successor, seeded.
    """

    kind: str
    strategy: SymbolicStrategy | None = None
    seed: int = 0
    _rng: random.Random | None = field(default=None, repr=False)

    @classmethod
    def even_split(cls, strategy: SymbolicStrategy | None) -> "Adversary":
        return cls("even_split", strategy)

    @classmethod
    def max_spread(cls) -> "Adversary":
        return cls("max_spread")

    @classmethod
    def random(cls, seed: int) -> "Adversary":
        return cls("random", seed=seed)

    @property
    def name(self) -> str:
        return f"random({self.seed})" if self.kind == "random" else self.kind

    def reset(self, seed: int | None = None) -> None:
        self._rng = random.Random(self.seed if seed is None else seed)

    def chosen_graph(self, nfa: Nfa, support: int, tracking: TrackingList, a: int) -> TransferGraph:
        if self.kind == "even_split" and self.strategy is not None:
            g = self.strategy.graph(support, tracking, a)
            if g is not None:
                return g
        return maximal_graph(nfa, support, a)

    def move(self, nfa: Nfa, before, tracking: TrackingList, a: int) -> Flows:
        if self.kind in ("even_split", "max_spread"):
            return even_flows(before, self.chosen_graph(nfa, support_of(before), tracking, a))
        if self.kind != "random":
            raise ValueError(f"unknown adversary {self.kind!r}")
        if self._rng is None:
            self.reset()
        flows: Flows = {}
        for s, c in enumerate(before):
            targets = list(bits(nfa.succ(s, a)))
            for _ in range(c):
                t = self._rng.choice(targets)
                flows[(s, t)] = flows.get((s, t), 0) + 1
        return flows


@dataclass(frozen=True)
class TraceStep:
    step: int
    letter: int
    before: tuple[int, ...]
    graph: TransferGraph


@dataclass
class MatchResult:
    won: bool
    steps: int
    trace: list[TraceStep]
    final: tuple[int, ...]

    @property
    def outcome(self) -> str:
        return f"WON {self.steps}" if self.won else "NOTWON"

    def format_trace(self, nfa: Nfa) -> str:
        """One line per step: ``step; letter; counts-before; graph-edges``."""
        lines = []
        for t in self.trace:
            counts = ",".join(str(c) for c in t.before)
            edges = ",".join(f"{nfa.state_names[q]}>{nfa.state_names[r]}" for q, r in t.graph.edges())
            lines.append(f"{t.step}; {nfa.alphabet_names[t.letter]}; {counts}; {edges}")
        return "\n".join(lines)


def initial_config(nfa: Nfa, m: int) -> tuple[int, ...]:
    counts = [0] * nfa.n_states
    counts[nfa.initial] = m
    return tuple(counts)


def run_match(nfa: Nfa, m: int, p1: SymbolicStrategy, adversary: Adversary,
              max_steps: int = 100, seed: int | None = None) -> MatchResult:
    """Play Player 1's symbolic strategy against ``adversary`` with ``m`` agents.

    Raises ``KeyError`` if the strategy is undefined at a reached memory state,
    which cannot happen when the strategy comes from a Player 1 win.
    """
    if m < 1:
        raise ValueError("population size must be >= 1")
    adversary.reset(seed)
    goal = 1 << nfa.target
    config = initial_config(nfa, m)
    tracking: TrackingList = ()
    trace: list[TraceStep] = []
    for step in range(max_steps + 1):
        support = support_of(config)
        if support == goal:
            return MatchResult(True, step, trace, config)
        if step == max_steps:
            break
        a = p1.letter(support, tracking)
        flows = adversary.move(nfa, config, tracking, a)
        _, graph = project_phi(config, flows, nfa, a)
        trace.append(TraceStep(step, a, config, graph))
        config = apply_flows(nfa.n_states, flows)
        tracking = update_list(tracking, graph)
    return MatchResult(False, max_steps, trace, config)


@dataclass
class Certificate:
    holds: bool
    explored: int
    closed: bool  # every reachable state expanded within the horizon
    counterexample: list[int] | None = None


def certify_adversary(nfa: Nfa, m: int, adversary: Adversary, max_steps: int = 100) -> Certificate:
    """Check a deterministic adversary against every Player 1 letter sequence.

    Breadth-first search over ``(configuration, tracking list)``; the
    certificate holds if no sequence of at most ``max_steps`` letters puts all
    tokens on the target.
    """
    if adversary.kind == "random":
        raise ValueError("certification needs a deterministic adversary")
    goal = 1 << nfa.target
    start = (initial_config(nfa, m), ())
    parent = {start: None}
    frontier = deque([(start, 0)])
    closed = True
    while frontier:
        state, depth = frontier.popleft()
        config, tracking = state
        if support_of(config) == goal:
            word = []
            while parent[state] is not None:
                state, a = parent[state]
                word.append(a)
            return Certificate(False, len(parent), False, word[::-1])
        if depth == max_steps:
            closed = False
            continue
        for a in range(nfa.n_letters):
            flows = adversary.move(nfa, config, tracking, a)
            _, graph = project_phi(config, flows, nfa, a)
            nxt = (apply_flows(nfa.n_states, flows), update_list(tracking, graph))
            if nxt not in parent:
                parent[nxt] = (state, a)
                frontier.append((nxt, depth + 1))
    return Certificate(True, len(parent), closed)
