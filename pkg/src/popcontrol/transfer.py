"""Transfer graphs: binary relations on states, stored as row bitmasks.

``G[q]`` is the set of states ``r`` with ``(q, r)`` in ``G``. Graphs are
tuples, hence immutable and hashable, and can key dictionaries directly.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterator

from .nfa import Nfa, bits


class TransferGraph(tuple):
    __slots__ = ()

    def __new__(cls, rows=()):
        return tuple.__new__(cls, rows)

    @classmethod
    def from_edges(cls, n: int, edges) -> "TransferGraph":
        rows = [0] * n
        for q, r in edges:
            if not (0 <= q < n and 0 <= r < n):
                raise ValueError(f"edge {(q, r)} out of range for {n} states")
            rows[q] |= 1 << r
        return cls(rows)

    @classmethod
    def identity(cls, n: int, support: int | None = None) -> "TransferGraph":
        if support is None:
            support = (1 << n) - 1
        return cls((1 << q) if support >> q & 1 else 0 for q in range(n))

    @classmethod
    def full(cls, n: int) -> "TransferGraph":
        return cls([(1 << n) - 1] * n)

    @classmethod
    def empty(cls, n: int) -> "TransferGraph":
        return cls([0] * n)

    @property
    def n(self) -> int:
        return len(self)

    @property
    def dom(self) -> int:
        out = 0
        for q, row in enumerate(self):
            if row:
                out |= 1 << q
        return out

    @property
    def im(self) -> int:
        out = 0
        for row in self:
            out |= row
        return out

    def has_edge(self, q: int, r: int) -> bool:
        return bool(self[q] >> r & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(q, r) for q, row in enumerate(self) for r in bits(row)]

    def n_edges(self) -> int:
        return sum(row.bit_count() for row in self)

    def __matmul__(self, other: "TransferGraph") -> "TransferGraph":
        return compose(self, other)

    def __repr__(self):
        return f"TransferGraph({self.edges()})"


@lru_cache(maxsize=1 << 18)
def compose(g: TransferGraph, h: TransferGraph) -> TransferGraph:
    """``(a, b)`` in the result iff ``(a, z)`` in ``g`` and ``(z, b)`` in ``h`` for some ``z``."""
    if len(g) != len(h):
        raise ValueError("transfer graphs over different state spaces")
    out = []
    for row in g:
        acc = 0
        while row:
            low = row & -row
            acc |= h[low.bit_length() - 1]
            row ^= low
        out.append(acc)
    return TransferGraph(out)


@lru_cache(maxsize=1 << 18)
def leaks_at(g: TransferGraph, h: TransferGraph) -> bool:
    """True iff some ``q, x, y`` has ``(q,y)`` in ``g·h``, ``(x,y)`` in ``h``, ``(q,x)`` not in ``g``."""
    if len(g) != len(h):
        raise ValueError("transfer graphs over different state spaces")
    n = len(g)
    full = (1 << n) - 1
    gh = compose(g, h)
    for q in range(n):
        reach = gh[q]
        if not reach:
            continue
        for x in bits(full & ~g[q]):
            if h[x] & reach:
                return True
    return False


def separates(g: TransferGraph, r: int, t: int) -> bool:
    """True iff some ``q`` has ``(q, r)`` in ``g`` but not ``(q, t)``."""
    return any(row >> r & 1 and not row >> t & 1 for row in g)


@lru_cache(maxsize=1 << 18)
def separated_pairs(g: TransferGraph) -> int:
    """Ordered pairs separated by ``g`` as a bitmask; pair ``(r, t)`` is bit ``r*n + t``."""
    n = len(g)
    full = (1 << n) - 1
    out = 0
    for row in g:
        missing = full & ~row
        if not missing:
            continue
        for r in bits(row):
            out |= missing << (r * n)
    return out


def pairs_of(mask: int, n: int) -> set[tuple[int, int]]:
    return {divmod(i, n) for i in bits(mask)}


def _nonempty_submasks(mask: int) -> list[int]:
    """Non-empty submasks of ``mask`` in increasing numeric order."""
    subs = []
    sub = mask
    while sub:
        subs.append(sub)
        sub = (sub - 1) & mask
    subs.reverse()
    return subs


def count_compatible(nfa: Nfa, support: int, a: int) -> int:
    total = 1
    for q in bits(support):
        total *= (1 << nfa.succ(q, a).bit_count()) - 1
    return total


def compatible_graphs(nfa: Nfa, support: int, a: int, within: int | None = None) -> Iterator[TransferGraph]:
    """Lazily enumerate graphs compatible with letter ``a`` whose domain is ``support``.

    Each state of the support independently picks a non-empty subset of its
    successors. Order: lexicographic over states in index order, subsets by
    increasing bitmask, so the maximal graph comes last. With ``within`` only
    successors in that mask are used (nothing is yielded if some state has none).
    """
    states = list(bits(support))
    keep = -1 if within is None else within
    choices = [_nonempty_submasks(nfa.succ(q, a) & keep) for q in states]
    n = nfa.n_states
    for pick in product(*choices):
        rows = [0] * n
        for q, m in zip(states, pick):
            rows[q] = m
        yield TransferGraph(rows)


def maximal_graph(nfa: Nfa, support: int, a: int) -> TransferGraph:
    row = nfa.delta[a]
    return TransferGraph(row[q] if support >> q & 1 else 0 for q in range(nfa.n_states))


def is_compatible(nfa: Nfa, g: TransferGraph, a: int) -> bool:
    row = nfa.delta[a]
    return all(not (m & ~row[q]) for q, m in enumerate(g))
