"""Explicit solver for the game with a fixed number ``m`` of agents.

Configurations use the counting abstraction: a vector of token counts per
state summing to ``m``. Internally a configuration is packed into one integer
with base ``m + 1`` digits, so applying a move is integer addition.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .errors import BudgetExceeded
from .nfa import Nfa, bits
from .support import Player

DEFAULT_BUDGET = 5_000_000

Config = tuple  # tuple[int, ...] of per-state counts


def _compositions(total: int, parts: int):
    """All ways to write ``total`` as an ordered sum of ``parts`` non-negative ints."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


@dataclass
class ExplicitGame:
    """Forward-reachable part of the counting game."""

    nfa: Nfa
    m: int
    base: int
    configs: list[int] = field(default_factory=list)
    index: dict[int, int] = field(default_factory=dict)
    moves: list[list[list[int]] | None] = field(default_factory=list)  # None: not expanded

    def decode(self, code: int) -> Config:
        out = []
        for _ in range(self.nfa.n_states):
            code, c = divmod(code, self.base)
            out.append(c)
        return tuple(out)

    def encode(self, counts: Sequence[int]) -> int:
        code = 0
        for c in reversed(counts):
            code = code * self.base + c
        return code

    def predecessors(self):
        preds: list[list[tuple[int, int]]] = [[] for _ in self.configs]
        for c, per_letter in enumerate(self.moves):
            if per_letter is None:
                continue
            for a, succ in enumerate(per_letter):
                for s in succ:
                    preds[s].append((c, a))
        return preds


class _Stepper:
    """Successor configurations of a packed configuration under a letter."""

    def __init__(self, nfa: Nfa, base: int):
        self.nfa = nfa
        self.base = base
        self.powers = [base ** q for q in range(nfa.n_states)]
        self.spread = lru_cache(maxsize=None)(self._spread)

    def _spread(self, q: int, a: int, count: int) -> tuple[int, ...]:
        targets = list(bits(self.nfa.succ(q, a)))
        out = []
        for split in _compositions(count, len(targets)):
            out.append(sum(k * self.powers[r] for k, r in zip(split, targets)))
        return tuple(out)

    def successors(self, code: int, a: int) -> set[int]:
        partial = {0}
        q = 0
        base = self.base
        while code:
            code, c = divmod(code, base)
            if c:
                options = self.spread(q, a, c)
                partial = {x + y for x in partial for y in options}
            q += 1
        return partial


def explore(nfa: Nfa, m: int, start: Sequence[int] | None = None, frozen=None,
            budget: int = DEFAULT_BUDGET) -> ExplicitGame:
    """Build the reachable counting game; configurations satisfying ``frozen`` are not expanded."""
    if m < 1:
        raise ValueError("population size must be >= 1")
    game = ExplicitGame(nfa, m, m + 1)
    if start is None:
        counts = [0] * nfa.n_states
        counts[nfa.initial] = m
        start = counts
    if len(start) != nfa.n_states or sum(start) != m or min(start) < 0:
        raise ValueError("start configuration must be a count vector summing to m")
    stepper = _Stepper(nfa, game.base)
    first = game.encode(start)
    game.configs.append(first)
    game.index[first] = 0
    game.moves.append(None)
    queue = deque([0])
    size = 1
    while queue:
        c = queue.popleft()
        code = game.configs[c]
        if frozen is not None and frozen(code):
            continue
        per_letter = []
        for a in range(nfa.n_letters):
            succ = []
            for s in sorted(stepper.successors(code, a)):
                i = game.index.get(s)
                if i is None:
                    i = len(game.configs)
                    game.configs.append(s)
                    game.index[s] = i
                    game.moves.append(None)
                    queue.append(i)
                succ.append(i)
            per_letter.append(succ)
            size += 1
        game.moves[c] = per_letter
        size += 1
        if size > budget:
            raise BudgetExceeded(f"explicit game (m={m})", budget)
    return game


def _state_mask_test(nfa: Nfa, m: int, mask: int):
    """Predicate on packed configurations: some token sits in a state of ``mask``."""
    base = m + 1
    powers = [base ** q for q in bits(mask)]
    return lambda code: any(code // p % base for p in powers)


def _reach_ranks(game: ExplicitGame, goal: set[int]) -> dict[int, int]:
    """Player 1 attractor to ``goal`` with min-max step counts."""
    preds = game.predecessors()
    pending = {}
    rank = {c: 0 for c in goal}
    queue = deque(sorted(goal))
    while queue:
        u = queue.popleft()
        for c, a in preds[u]:
            if c in rank:
                continue
            key = (c, a)
            left = pending.get(key)
            if left is None:
                left = len(game.moves[c][a])
            left -= 1
            pending[key] = left
            if left == 0:
                rank[c] = rank[u] + 1
                queue.append(c)
    return rank


def _force_ranks(game: ExplicitGame, bad: set[int]) -> dict[int, int]:
    """Player 2 attractor to ``bad``: steps Player 2 needs under Player 1's best delay."""
    preds = game.predecessors()
    done_letters: set[tuple[int, int]] = set()
    pending: dict[int, int] = {}
    rank = {c: 0 for c in bad}
    queue = deque(sorted(bad))
    while queue:
        u = queue.popleft()
        for c, a in preds[u]:
            if c in rank or (c, a) in done_letters:
                continue
            done_letters.add((c, a))
            left = pending.get(c, game.nfa.n_letters) - 1
            pending[c] = left
            if left == 0:
                rank[c] = rank[u] + 1
                queue.append(c)
    return rank


def _reach_game(nfa: Nfa, m: int, start, budget: int):
    # tokens in states that cannot reach the target are lost for good
    is_dead = _state_mask_test(nfa, m, nfa.all_states & ~nfa.coreachable())
    target = m * (m + 1) ** nfa.target
    game = explore(nfa, m, start, frozen=lambda code: code == target or is_dead(code), budget=budget)
    goal = {game.index[target]} if target in game.index else set()
    return game, _reach_ranks(game, goal)


def winner_fixed_m(nfa: Nfa, m: int, budget: int = DEFAULT_BUDGET, start=None) -> Player:
    """Exact winner of the ``m``-agent game by backward attractor on reachable configurations."""
    game, rank = _reach_game(nfa, m, start, budget)
    return Player.P1 if 0 in rank else Player.P2


def optimal_steps(nfa: Nfa, m: int, objective: str = "reach", start=None, avoid: int | None = None,
                  budget: int = DEFAULT_BUDGET):
    """Optimal step counts in the ``m``-agent game.

    ``reach``: fewest steps within which Player 1 can force every token onto
    the target (``math.inf`` if he cannot). ``survive``: the step at which
    Player 2 can force a token into ``avoid`` (default: the losing sinks),
    with Player 1 delaying it as long as possible; ``math.inf`` if never.
    """
    if objective == "reach":
        game, rank = _reach_game(nfa, m, start, budget)
        return rank.get(0, math.inf)
    if objective != "survive":
        raise ValueError(f"unknown objective {objective!r}")
    if avoid is None:
        avoid = nfa.losing_sinks()
    is_bad = _state_mask_test(nfa, m, avoid)
    game = explore(nfa, m, start, frozen=is_bad, budget=budget)
    bad = {i for i, code in enumerate(game.configs) if is_bad(code)}
    return _force_ranks(game, bad).get(0, math.inf)


@dataclass(frozen=True)
class CutoffResult:
    """Outcome of a cut-off search: ``NOCUTOFF``, ``CUTOFF`` (with ``cutoff``) or ``EXCEEDS``."""

    status: str
    cutoff: int | None = None
    m_max: int | None = None
    last_decided: int | None = None

    def __str__(self):
        if self.status == "CUTOFF":
            return f"CUTOFF {self.cutoff}"
        if self.status == "EXCEEDS":
            return f"EXCEEDS {self.m_max}"
        return "NOCUTOFF"


def find_cutoff(nfa: Nfa, m_max: int, budget: int = DEFAULT_BUDGET, decide=None) -> CutoffResult:
    """Least ``m <= m_max`` at which Player 1 loses.

    Winning is downward closed in ``m``, so the first loss found by scanning
    upward is the cut-off. Without a loss up to ``m_max`` the parity-game
    verdict separates ``NOCUTOFF`` (controllable) from ``EXCEEDS``.
    ``decide`` overrides that verdict (a callable returning a bool).
    """
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    for m in range(1, m_max + 1):
        try:
            w = winner_fixed_m(nfa, m, budget)
        except BudgetExceeded:
            return CutoffResult("EXCEEDS", m_max=m_max, last_decided=m - 1)
        if w is Player.P2:
            return CutoffResult("CUTOFF", cutoff=m, m_max=m_max, last_decided=m)
    if decide is None:
        from .parity import population_control

        def decide(x):
            return population_control(x, budget).controllable

    try:
        yes = decide(nfa)
    except BudgetExceeded:
        return CutoffResult("EXCEEDS", m_max=m_max, last_decided=m_max)
    if yes:
        return CutoffResult("NOCUTOFF", m_max=m_max, last_decided=m_max)
    return CutoffResult("EXCEEDS", m_max=m_max, last_decided=m_max)
