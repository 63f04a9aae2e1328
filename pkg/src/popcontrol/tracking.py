"""Tracking lists, edge priorities, and capacity of ultimately periodic plays.

A tracking list is a tuple of transfer graphs. Updating it with a new graph
``G`` composes every level with ``G``, appends ``G``, then keeps a graph only
if it separates an ordered pair that no earlier graph in the list separates.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Sequence

from .nfa import Nfa, bits
from .transfer import TransferGraph, compose, is_compatible, leaks_at, separated_pairs

TrackingList = tuple  # tuple[TransferGraph, ...]


def _filter(candidates: Sequence[TransferGraph]) -> list[int]:
    """Positions of the candidates that survive the separation filter."""
    covered = 0
    kept = []
    for i, g in enumerate(candidates):
        sep = separated_pairs(g)
        if sep & ~covered:
            kept.append(i)
            covered |= sep
    return kept


def update_list(tracking: TrackingList, g: TransferGraph) -> TrackingList:
    candidates = [compose(h, g) for h in tracking]
    candidates.append(g)
    return tuple(candidates[i] for i in _filter(candidates))


def update_tracked(entries, g: TransferGraph, step: int):
    """Same update over ``(graph, tracked_index)`` pairs; ``g`` is the graph played at ``step``.

    A graph tracking index ``i`` after the update equals the composition of the
    graphs played at steps ``i+1 .. step``.
    """
    candidates = [(compose(h, g), i) for h, i in entries]
    candidates.append((g, step - 1))
    return tuple(candidates[i] for i in _filter([c[0] for c in candidates]))


def check_filter_invariant(tracking: TrackingList) -> bool:
    """Every level separates a pair that no lower level separates."""
    return len(_filter(tracking)) == len(tracking)


class PriorityStep(NamedTuple):
    priority: int
    tracking: TrackingList
    b: int


def transition_priority(tracking: TrackingList, g: TransferGraph, reached_target: bool, b: int) -> PriorityStep:
    """Priority of the parity-game edge that plays ``g`` from list ``tracking``.

    Priority 1 once the target support has been seen. Otherwise the minimum of
    ``2r+1`` for the lowest level ``r`` leaking at ``g`` and ``2r`` for the
    lowest level whose graph is not ``H_r·g`` after the update; both default
    to level ``len(tracking) + 1``.
    """
    new = update_list(tracking, g)
    if b or reached_target:
        return PriorityStep(1, new, 1)
    ell = len(tracking)
    p_leak = ell + 1
    for r, h in enumerate(tracking, 1):
        if leaks_at(h, g):
            p_leak = r
            break
    p_change = ell + 1
    for r, h in enumerate(tracking, 1):
        if r > len(new) or new[r - 1] != compose(h, g):
            p_change = r
            break
    return PriorityStep(min(2 * p_leak + 1, 2 * p_change), new, 0)


def max_priority(n_states: int) -> int:
    return 2 * n_states * n_states + 2


class CapacityVerdict(Enum):
    REACHES_TARGET = "ReachesTarget"
    FINITE = "FiniteCapacity"
    INFINITE = "InfiniteCapacity"

    def __str__(self):
        return self.value


class MalformedPlay(ValueError):
    pass


@dataclass(frozen=True)
class LassoPlay:
    """Ultimately periodic play ``prefix · loop^ω`` of ``(letter, graph)`` steps from ``{q0}``."""

    prefix: tuple
    loop: tuple

    def steps(self):
        return list(self.prefix) + list(self.loop)

    def validate(self, nfa: Nfa | None = None, start: int | None = None) -> None:
        if not self.loop:
            raise MalformedPlay("loop must be non-empty")
        if start is None:
            if nfa is None:
                start = self.steps()[0][1].dom
            else:
                start = 1 << nfa.initial
        support = start
        for k, (a, g) in enumerate(self.steps()):
            if g.dom != support:
                raise MalformedPlay(f"step {k}: graph domain does not match the current support")
            if nfa is not None and not is_compatible(nfa, g, a):
                raise MalformedPlay(f"step {k}: graph is not compatible with its letter")
            support = g.im
        if support != self.loop[0][1].dom:
            raise MalformedPlay("loop does not close: last image differs from first loop domain")


def classify_lasso(nfa: Nfa, play: LassoPlay) -> CapacityVerdict:
    """Run the (bit, support, tracking list) machine over the lasso.

    The loop is iterated until the machine state at loop phase 0 repeats; the
    play has infinite capacity iff the least priority on that cycle is odd.
    """
    play.validate(nfa)
    goal = 1 << nfa.target
    if 1 << nfa.initial == goal:
        return CapacityVerdict.REACHES_TARGET
    tracking: TrackingList = ()
    for _, g in play.prefix:
        if g.im == goal:
            return CapacityVerdict.REACHES_TARGET
        tracking = update_list(tracking, g)
    for _, g in play.loop:
        if g.im == goal:
            return CapacityVerdict.REACHES_TARGET

    seen: dict[TrackingList, int] = {}
    priorities: list[int] = []
    while tracking not in seen:
        seen[tracking] = len(priorities)
        for _, g in play.loop:
            p, tracking, _ = transition_priority(tracking, g, False, 0)
            priorities.append(p)
    cycle = priorities[seen[tracking]:]
    return CapacityVerdict.INFINITE if min(cycle) % 2 else CapacityVerdict.FINITE


def _submasks(mask: int):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def _post(g: TransferGraph, t: int) -> int:
    out = 0
    for s in bits(t):
        out |= g[s]
    return out


def _entries(g: TransferGraph, t: int, t_next: int) -> int:
    count = 0
    for s, row in enumerate(g):
        if row and not t >> s & 1:
            count += (row & t_next).bit_count()
    return count


def _accumulator_moves(g: TransferGraph, t: int, next_support: int):
    """Successor sets ``T'`` of ``t`` along ``g`` with their entry counts."""
    forced = _post(g, t)
    for extra in _submasks(next_support & ~forced):
        t_next = forced | extra
        yield t_next, _entries(g, t, t_next)


def max_entries(nfa: Nfa | None, graphs: Sequence[TransferGraph]) -> int:
    """Largest number of entries of an accumulator along a finite chained sequence.

    Longest-path dynamic programming over ``(position, T_j)``; membership at
    position 0 is free.
    """
    if not graphs:
        return 0
    support = graphs[0].dom
    best = {t: 0 for t in _submasks(support)}
    for g in graphs:
        nxt: dict[int, int] = {}
        for t, v in best.items():
            for t_next, w in _accumulator_moves(g, t, g.im):
                if nxt.get(t_next, -1) < v + w:
                    nxt[t_next] = v + w
        best = nxt
    return max(best.values())


def entry_cycle(play: LassoPlay) -> bool:
    """True iff some accumulator of the lasso has infinitely many entries.

    Builds the graph on ``(loop phase, T)`` with edges weighted by entry counts
    and looks for a cycle through a positive-weight edge. Every node is
    reachable (grow from the empty set), so the prefix does not matter.
    """
    loop = [g for _, g in play.loop]
    k = len(loop)
    succ: dict[tuple[int, int], list[tuple[tuple[int, int], int]]] = {}
    for phase, g in enumerate(loop):
        nphase = (phase + 1) % k
        for t in _submasks(g.dom):
            succ[(phase, t)] = [((nphase, t2), w) for t2, w in _accumulator_moves(g, t, g.im)]

    def reaches(src, dst) -> bool:
        stack = [src]
        seen = {src}
        while stack:
            u = stack.pop()
            if u == dst:
                return True
            for v, _ in succ[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return False

    for u, out in succ.items():
        for v, w in out:
            if w > 0 and reaches(v, u):
                return True
    return False
