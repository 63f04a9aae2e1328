"""NFA representation, the text document format, and normalization.

States and letters are dense integer indices. The transition relation is
stored per letter as a tuple of successor bitmasks, one per state, so that
``nfa.delta[a][q]`` has bit ``r`` set iff ``(q, a, r)`` is a transition.

Document format::

    # comment
    states: q0 q1 f
    letters: a b
    initial: q0
    target: f
    q0 a q1
    q1 b f

Section values sit on the header line. Every other non-blank line is a
transition ``src letter dst``; repeated transition lines are harmless.
"""

from __future__ import annotations

from dataclasses import dataclass

LOSE = "☹"
WIN = "☺"
END_LETTER = "end"


class NfaError(ValueError):
    """Base class for malformed NFA input."""


class NfaSyntaxError(NfaError):
    pass


class NfaSemanticError(NfaError):
    pass


def bits(mask: int):
    """Yield the indices of set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Nfa:
    state_names: tuple[str, ...]
    alphabet_names: tuple[str, ...]
    initial: int
    target: int
    delta: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.state_names)
        if not 0 <= self.initial < n or not 0 <= self.target < n:
            raise NfaSemanticError("initial and target must be valid states")
        if len(self.delta) != len(self.alphabet_names):
            raise NfaSemanticError("one transition row per letter expected")
        for row in self.delta:
            if len(row) != n or any(m >> n for m in row):
                raise NfaSemanticError("transition row does not match state count")

    @property
    def n_states(self) -> int:
        return len(self.state_names)

    @property
    def n_letters(self) -> int:
        return len(self.alphabet_names)

    @property
    def all_states(self) -> int:
        return (1 << self.n_states) - 1

    def succ(self, q: int, a: int) -> int:
        return self.delta[a][q]

    def post(self, support: int, a: int) -> int:
        row = self.delta[a]
        out = 0
        for q in bits(support):
            out |= row[q]
        return out

    def transitions(self):
        """All ``(src, letter, dst)`` triples in letter-major order."""
        for a, row in enumerate(self.delta):
            for q, m in enumerate(row):
                for r in bits(m):
                    yield q, a, r

    def is_complete(self) -> bool:
        return all(m for row in self.delta for m in row)

    def is_sink(self, q: int) -> bool:
        return all(row[q] == 1 << q for row in self.delta)

    def losing_sinks(self) -> int:
        """Mask of sink states other than the target."""
        out = 0
        for q in range(self.n_states):
            if q != self.target and self.is_sink(q):
                out |= 1 << q
        return out

    def coreachable(self) -> int:
        """Mask of states from which some path leads to the target."""
        seen = 1 << self.target
        changed = True
        while changed:
            changed = False
            for q in range(self.n_states):
                if seen >> q & 1:
                    continue
                if any(row[q] & seen for row in self.delta):
                    seen |= 1 << q
                    changed = True
        return seen

    def state_index(self, name: str) -> int:
        try:
            return self.state_names.index(name)
        except ValueError:
            raise NfaSemanticError(f"unknown state {name!r}") from None

    def letter_index(self, name: str) -> int:
        try:
            return self.alphabet_names.index(name)
        except ValueError:
            raise NfaSemanticError(f"unknown letter {name!r}") from None

    def format_support(self, support: int) -> str:
        return "{" + ",".join(self.state_names[q] for q in bits(support)) + "}"

    def to_text(self) -> str:
        lines = [
            "states: " + " ".join(self.state_names),
            "letters: " + " ".join(self.alphabet_names),
            "initial: " + self.state_names[self.initial],
            "target: " + self.state_names[self.target],
        ]
        for q, a, r in self.transitions():
            lines.append(f"{self.state_names[q]} {self.alphabet_names[a]} {self.state_names[r]}")
        return "\n".join(lines) + "\n"

    def relabel(self, perm) -> "Nfa":
        """Rename state ``q`` to ``perm[q]``; ``perm`` is a permutation of range(n)."""
        n = self.n_states
        if sorted(perm) != list(range(n)):
            raise ValueError("not a permutation")
        names = [""] * n
        for q in range(n):
            names[perm[q]] = self.state_names[q]
        delta = []
        for row in self.delta:
            new = [0] * n
            for q in range(n):
                new[perm[q]] = sum(1 << perm[r] for r in bits(row[q]))
            delta.append(tuple(new))
        return Nfa(tuple(names), self.alphabet_names, perm[self.initial], perm[self.target], tuple(delta))


def build_nfa(states, letters, transitions, initial, target) -> Nfa:
    """Build an Nfa from names; ``transitions`` holds ``(src, letter, dst)`` name triples."""
    states = list(states)
    letters = list(letters)
    for kind, names in (("state", states), ("letter", letters)):
        if len(set(names)) != len(names):
            raise NfaSemanticError(f"duplicate {kind} name")
    s_idx = {s: i for i, s in enumerate(states)}
    l_idx = {a: i for i, a in enumerate(letters)}

    def lookup(table, name, kind):
        if name not in table:
            raise NfaSemanticError(f"unknown {kind} {name!r}")
        return table[name]

    delta = [[0] * len(states) for _ in letters]
    for src, letter, dst in transitions:
        q = lookup(s_idx, src, "state")
        a = lookup(l_idx, letter, "letter")
        r = lookup(s_idx, dst, "state")
        delta[a][q] |= 1 << r
    return Nfa(
        tuple(states),
        tuple(letters),
        lookup(s_idx, initial, "state"),
        lookup(s_idx, target, "state"),
        tuple(tuple(row) for row in delta),
    )


_SECTIONS = ("states", "letters", "initial", "target")


def parse_nfa(text: str) -> Nfa:
    """Parse an NFA document. The result is not normalized."""
    values: dict[str, list[str]] = {}
    transitions = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        key = head.strip()
        if sep and key in _SECTIONS:
            if key in values:
                raise NfaSyntaxError(f"line {lineno}: duplicate section {key!r}")
            values[key] = rest.split()
            continue
        if sep:
            raise NfaSyntaxError(f"line {lineno}: unknown section {key!r}")
        tokens = line.split()
        if len(tokens) != 3:
            raise NfaSyntaxError(f"line {lineno}: expected 'src letter dst', got {line!r}")
        transitions.append(tuple(tokens))

    for key in _SECTIONS:
        if key not in values:
            raise NfaSemanticError(f"missing section {key!r}")
    for key in ("initial", "target"):
        if len(values[key]) != 1:
            raise NfaSyntaxError(f"section {key!r} takes exactly one state")
    if not values["states"] or not values["letters"]:
        raise NfaSemanticError("states and letters must be non-empty")
    return build_nfa(values["states"], values["letters"], transitions, values["initial"][0], values["target"][0])


def _fresh(name: str, taken) -> str:
    out = name
    k = 1
    while out in taken:
        out = f"{name}{k}"
        k += 1
    return out


def normalize(nfa: Nfa) -> Nfa:
    """Complete ``nfa`` with a losing sink and make the target a sink.

    Missing ``(q, a)`` pairs go to a fresh losing sink. If the target is not a
    sink, a fresh winning sink becomes the target and a fresh letter moves the
    old target there and every other non-sink state to the losing sink.
    Returns ``nfa`` itself when nothing needs to change.
    """
    target_ok = nfa.is_sink(nfa.target)
    if nfa.is_complete() and target_ok:
        return nfa

    names = list(nfa.state_names)
    letters = list(nfa.alphabet_names)
    delta = [list(row) for row in nfa.delta]
    sinks = [q for q in range(nfa.n_states) if nfa.is_sink(q)]
    lose = None

    def lose_state():
        nonlocal lose
        if lose is None:
            lose = len(names)
            names.append(_fresh(LOSE, names))
            for row in delta:
                row.append(1 << lose)
        return lose

    for row in delta:
        for q in range(nfa.n_states):
            if not row[q]:
                row[q] = 1 << lose_state()

    target = nfa.target
    if not target_ok:
        lose_state()
        win = len(names)
        names.append(_fresh(WIN, names))
        for row in delta:
            row.append(1 << win)
        end = []
        for q in range(len(names)):
            if q == nfa.target or q == win:
                end.append(1 << win)
            elif q == lose or q in sinks:
                end.append(1 << q)
            else:
                end.append(1 << lose)
        letters.append(_fresh(END_LETTER, letters))
        delta.append(end)
        target = win
    return Nfa(tuple(names), tuple(letters), nfa.initial, target, tuple(tuple(r) for r in delta))
