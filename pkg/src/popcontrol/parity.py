"""The parity game over (support, tracking list) and its solution.

Player 1 owns support nodes and picks a letter; Player 2 owns (support node,
letter) nodes and picks a compatible graph. Edge priorities are moved onto
interposed nodes, one per distinct (Player 2 node, successor, priority), so
that a standard node-priority Zielonka solver applies. Min-parity: Player 1
wins a play iff the least priority seen infinitely often is odd. Once the
target support is reached the play enters one absorbing sink of priority 1.
A move that puts a token on a state from which the target is unreachable
enters a second absorbing sink of priority 2: Player 2 wins from there by
playing functional graphs, which keep capacity bounded.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import BudgetExceeded
from .nfa import Nfa
from .support import Player
from .tracking import TrackingList, max_priority, transition_priority
from .transfer import TransferGraph, compatible_graphs, maximal_graph

DEFAULT_BUDGET = 1 << 22

P1_NODE, P2_NODE, AUX_NODE, SINK_NODE, LOSE_NODE = "p1", "p2", "aux", "sink", "lose"


@dataclass
class ParityGame:
    nfa: Nfa
    kind: list[str] = field(default_factory=list)
    owner: list[Player] = field(default_factory=list)
    priority: list[int] = field(default_factory=list)
    succ: list[list[int]] = field(default_factory=list)
    label: list[tuple] = field(default_factory=list)
    index: dict[tuple[int, TrackingList], int] = field(default_factory=dict)
    sink: int = -1
    lose: int = -1
    initial: int = -1
    preds: list[list[int]] | None = None

    def add_node(self, kind: str, owner: Player, priority: int, label) -> int:
        v = len(self.kind)
        self.kind.append(kind)
        self.owner.append(owner)
        self.priority.append(priority)
        self.succ.append([])
        self.label.append(label)
        return v

    def __len__(self):
        return len(self.kind)

    def pg_states(self) -> int:
        """Number of (b, S, L) states, counting each collapsed sink once."""
        return len(self.index) + (self.sink >= 0) + (self.lose >= 0)

    def edge_priorities(self):
        return [self.priority[v] for v, k in enumerate(self.kind) if k == AUX_NODE]

    def tracking_lists(self):
        return [lst for _, lst in self.index]


def build_parity_game(nfa: Nfa, budget: int = DEFAULT_BUDGET) -> ParityGame:
    """Explore the parity game forward from ``(0, {q0}, [])``.

    Node ids follow discovery order: letters in index order, graphs in
    enumeration order. Raises ``BudgetExceeded`` past ``budget`` nodes.
    """
    game = ParityGame(nfa)
    top = max_priority(nfa.n_states)
    goal = 1 << nfa.target
    live = nfa.coreachable()
    game.sink = game.add_node(SINK_NODE, Player.P1, 1, None)
    game.succ[game.sink].append(game.sink)
    if live != nfa.all_states:
        game.lose = game.add_node(LOSE_NODE, Player.P2, 2, None)
        game.succ[game.lose].append(game.lose)

    def p1_node(support: int, tracking: TrackingList) -> int:
        key = (support, tracking)
        v = game.index.get(key)
        if v is None:
            v = game.add_node(P1_NODE, Player.P1, top, key)
            game.index[key] = v
            queue.append(v)
        return v

    queue: deque[int] = deque()
    start = 1 << nfa.initial
    if start == goal:
        game.initial = game.sink
    elif start & ~live:
        game.initial = game.lose
    else:
        game.initial = p1_node(start, ())
    while queue:
        v = queue.popleft()
        support, tracking = game.label[v]
        for a in range(nfa.n_letters):
            w = game.add_node(P2_NODE, Player.P2, top, (v, a))
            game.succ[v].append(w)
            aux: dict[tuple[int, int], int] = {}

            def edge(target: int, prio: int, g: TransferGraph) -> None:
                if (target, prio) not in aux:
                    u = game.add_node(AUX_NODE, Player.P2, prio, (w, g))
                    game.succ[u].append(target)
                    game.succ[w].append(u)
                    aux[(target, prio)] = u

            for g in compatible_graphs(nfa, support, a, live):
                image = g.im
                if image == goal:
                    edge(game.sink, 1, g)
                else:
                    prio, new_list, _ = transition_priority(tracking, g, False, 0)
                    edge(p1_node(image, new_list), prio, g)
            if nfa.post(support, a) & ~live:
                edge(game.lose, 2, maximal_graph(nfa, support, a))
            if len(game) > budget:
                raise BudgetExceeded("parity game", budget)
    return game


def _attractor(game: ParityGame, nodes: set[int], target: set[int], player: Player):
    """Nodes of ``nodes`` from which ``player`` forces a visit to ``target``.

    Returns the attractor and, for ``player``'s attracted nodes outside
    ``target``, the lowest-id successor of strictly smaller attractor rank.
    """
    preds = game.preds
    rank = {v: 0 for v in target}
    queue = deque(sorted(target))
    remaining: dict[int, int] = {}
    while queue:
        u = queue.popleft()
        for v in preds[u]:
            if v not in nodes or v in rank:
                continue
            if game.owner[v] is player:
                rank[v] = rank[u] + 1
                queue.append(v)
            else:
                left = remaining.get(v)
                if left is None:
                    left = sum(1 for s in game.succ[v] if s in nodes)
                left -= 1
                remaining[v] = left
                if left == 0:
                    rank[v] = rank[u] + 1
                    queue.append(v)
    strategy = {}
    for v, r in rank.items():
        if r and game.owner[v] is player:
            strategy[v] = min(s for s in game.succ[v] if s in rank and rank[s] < r)
    return set(rank), strategy


def _opponent(p: Player) -> Player:
    return Player.P2 if p is Player.P1 else Player.P1


def _zielonka(game: ParityGame, nodes: set[int]):
    win = {Player.P1: set(), Player.P2: set()}
    strategy: dict[int, int] = {}
    while nodes:
        p = min(game.priority[v] for v in nodes)
        me = Player.P1 if p % 2 else Player.P2
        opp = _opponent(me)
        top = {v for v in nodes if game.priority[v] == p}
        attr, attr_strategy = _attractor(game, nodes, top, me)
        sub_win, sub_strategy = _zielonka(game, nodes - attr)
        if not sub_win[opp]:
            win[me] |= nodes
            for v in nodes - attr:
                if game.owner[v] is me:
                    strategy[v] = sub_strategy[v]
            strategy.update(attr_strategy)
            for v in top:
                if game.owner[v] is me:
                    strategy[v] = min(s for s in game.succ[v] if s in nodes)
            break
        back, back_strategy = _attractor(game, nodes, sub_win[opp], opp)
        win[opp] |= back
        for v in sub_win[opp]:
            if game.owner[v] is opp:
                strategy[v] = sub_strategy[v]
        strategy.update(back_strategy)
        nodes = nodes - back
    return win, strategy


@dataclass
class SymbolicStrategy:
    """Positional strategy on the parity game, read as finite memory.

    For Player 1: ``moves[(support, tracking)] = letter``. For Player 2:
    ``moves[(support, tracking, letter)] = graph``. Defined on the owner's
    whole winning region.
    """

    owner: Player
    moves: dict = field(default_factory=dict)

    def letter(self, support: int, tracking: TrackingList) -> int:
        try:
            return self.moves[(support, tracking)]
        except KeyError:
            raise KeyError("strategy undefined at the reached memory state") from None

    def graph(self, support: int, tracking: TrackingList, a: int) -> TransferGraph | None:
        return self.moves.get((support, tracking, a))

    def __len__(self):
        return len(self.moves)


@dataclass
class ParitySolution:
    game: ParityGame
    winner: Player
    regions: dict[Player, set[int]]
    node_strategy: dict[int, int]
    strategies: dict[Player, SymbolicStrategy]

    @property
    def strategy(self) -> SymbolicStrategy:
        return self.strategies[self.winner]


def _ensure_preds(game: ParityGame) -> None:
    if game.preds is None or len(game.preds) != len(game):
        preds: list[list[int]] = [[] for _ in range(len(game))]
        for v, out in enumerate(game.succ):
            for s in out:
                preds[s].append(v)
        game.preds = preds


def solve_parity(game: ParityGame, nodes: set[int] | None = None) -> ParitySolution:
    _ensure_preds(game)
    if nodes is None:
        nodes = set(range(len(game)))
    regions, node_strategy = _zielonka(game, set(nodes))
    winner = Player.P1 if game.initial in regions[Player.P1] else Player.P2
    p1 = SymbolicStrategy(Player.P1)
    p2 = SymbolicStrategy(Player.P2)
    for v, s in node_strategy.items():
        kind = game.kind[v]
        if kind == P1_NODE and v in regions[Player.P1]:
            p1.moves[game.label[v]] = game.label[s][1]
        elif kind == P2_NODE and v in regions[Player.P2]:
            parent, a = game.label[v]
            support, tracking = game.label[parent]
            p2.moves[(support, tracking, a)] = game.label[s][1]
    return ParitySolution(game, winner, regions, node_strategy, {Player.P1: p1, Player.P2: p2})


def restrict_to_strategy(solution: ParitySolution, player: Player) -> set[int]:
    """Nodes reachable from the initial node when ``player`` follows its strategy."""
    game = solution.game
    seen = {game.initial}
    stack = [game.initial]
    while stack:
        v = stack.pop()
        if game.owner[v] is player and v in solution.node_strategy and v in solution.regions[player]:
            out = [solution.node_strategy[v]]
        else:
            out = game.succ[v]
        for s in out:
            if s not in seen:
                seen.add(s)
                stack.append(s)
    return seen


def strategy_subgame(solution: ParitySolution, player: Player) -> ParityGame:
    """Copy of the game restricted to ``player``'s winning region with its strategy fixed."""
    game = solution.game
    region = solution.regions[player]
    sub = ParityGame(game.nfa, list(game.kind), list(game.owner), list(game.priority),
                     [list(s) for s in game.succ], list(game.label), dict(game.index),
                     game.sink, game.lose, game.initial)
    for v in range(len(game)):
        if v not in region:
            sub.succ[v] = []
        elif game.owner[v] is player and v in solution.node_strategy:
            sub.succ[v] = [solution.node_strategy[v]]
        else:
            sub.succ[v] = [s for s in game.succ[v] if s in region]
    sub.preds = None
    return sub


@dataclass
class PopulationControlResult:
    controllable: bool
    strategy: SymbolicStrategy
    solution: ParitySolution

    @property
    def verdict(self) -> str:
        return "YES" if self.controllable else "NO"


def population_control(nfa: Nfa, budget: int = DEFAULT_BUDGET) -> PopulationControlResult:
    """Decide whether Player 1 synchronizes every finite population into the target."""
    solution = solve_parity(build_parity_game(nfa, budget))
    yes = solution.winner is Player.P1
    return PopulationControlResult(yes, solution.strategy, solution)


def parity_game_dot(game: ParityGame) -> str:
    nfa = game.nfa
    lines = ["digraph parity_game {"]
    for v, kind in enumerate(game.kind):
        if kind == P1_NODE:
            support, tracking = game.label[v]
            text = f"b=0 S={nfa.format_support(support)} l={len(tracking)}"
            lines.append(f'  n{v} [label="{text}", shape=box];')
        elif kind == SINK_NODE:
            lines.append(f'  n{v} [label="b=1", shape=doublecircle];')
        elif kind == LOSE_NODE:
            lines.append(f'  n{v} [label="lost", shape=octagon];')
    for v, kind in enumerate(game.kind):
        if kind != P1_NODE:
            continue
        for w in game.succ[v]:
            a = nfa.alphabet_names[game.label[w][1]]
            for u in game.succ[w]:
                for t in game.succ[u]:
                    lines.append(f'  n{v} -> n{t} [label="{a}/{game.priority[u]}"];')
    if game.sink >= 0:
        lines.append(f'  n{game.sink} -> n{game.sink} [label="*/1"];')
    if game.lose >= 0:
        lines.append(f'  n{game.lose} -> n{game.lose} [label="*/2"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
