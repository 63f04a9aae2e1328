"""Generators for the gadget NFAs used as fixtures.

Every generator returns a normalized NFA. Principal states come first and the
sink states (``☺``, ``☹``) are appended last so indices stay stable.
"""

from __future__ import annotations

from .nfa import LOSE, WIN, Nfa, build_nfa, normalize

KINDS = ("split", "chain", "drift", "leakmemory", "counter", "family_a")
_PARAMETRIC = ("chain", "counter", "family_a")

SPLIT_STATES = ("q0", "q1", "q2", "f")
SPLIT_LETTERS = ("a", "b", "δ")
SPLIT_TRANSITIONS = (
    ("q0", "δ", "q1"), ("q0", "δ", "q2"), ("q1", "δ", "q1"), ("q2", "δ", "q2"),
    ("q0", "a", "q0"), ("q0", "b", "q0"),
    ("q1", "a", "f"), ("q1", "b", "q0"),
    ("q2", "b", "f"), ("q2", "a", "q0"),
    ("f", "a", "f"), ("f", "b", "f"), ("f", "δ", "f"),
)


def split() -> Nfa:
    return normalize(build_nfa(SPLIT_STATES, SPLIT_LETTERS, SPLIT_TRANSITIONS, "q0", "f"))


def chain(k: int) -> Nfa:
    """``b`` spreads ``q0`` over ``q1..qk``; ``a_j`` wins from every ``q_i`` but ``q_j``."""
    _check_param("chain", k)
    qs = [f"q{i}" for i in range(1, k + 1)]
    states = ["q0", *qs, "f", LOSE]
    letters = ["b"] + [f"a{j}" for j in range(1, k + 1)]
    trans = []
    for q in qs:
        trans += [("q0", "b", q), (q, "b", "q0")]
        for j in range(1, k + 1):
            trans.append((q, f"a{j}", LOSE if q == f"q{j}" else "f"))
    for j in range(1, k + 1):
        trans.append(("q0", f"a{j}", LOSE))
    for a in letters:
        trans += [("f", a, "f"), (LOSE, a, LOSE)]
    return normalize(build_nfa(states, letters, trans, "q0", "f"))


def drift() -> Nfa:
    """Two states under a single letter that relates every pair; target ``q1``."""
    trans = [(p, "a", r) for p in ("q0", "q1") for r in ("q0", "q1")]
    return normalize(build_nfa(("q0", "q1"), ("a",), trans, "q0", "q1"))


def leakmemory() -> Nfa:
    """Player 1 needs memory: alternate ``a`` and ``b`` until ``q2`` is empty, then ``c``."""
    states = ("q0", "q1", "q2", "q3", "q4", "f", LOSE)
    letters = ("a", "b", "c")
    trans = [
        ("q1", "a", "q2"), ("q2", "a", "q1"), ("q3", "a", "q4"), ("q4", "a", "q3"),
        ("q1", "b", "q1"), ("q2", "b", "q3"), ("q3", "b", "q2"), ("q3", "b", "q4"), ("q4", "b", "q3"),
        ("q0", "c", "q1"), ("q0", "c", "q2"), ("q0", "c", "q3"), ("q0", "c", "q4"),
        ("q1", "c", "f"), ("q3", "c", "f"), ("q4", "c", "f"),
        ("q0", "a", LOSE), ("q0", "b", LOSE), ("q2", "c", LOSE),
    ]
    for a in letters:
        trans += [("f", a, "f"), (LOSE, a, LOSE)]
    return normalize(build_nfa(states, letters, trans, "q0", "f"))


def _counter_moves(n: int, i: int):
    """Counter-state moves of increment letter ``α_i`` (1-based) as name pairs."""
    moves = [(f"l{i}", f"h{i}"), (f"h{i}", LOSE)]
    for j in range(1, n + 1):
        if j < i:
            moves += [(f"h{j}", f"l{j}"), (f"l{j}", LOSE)]
        elif j > i:
            moves += [(f"l{j}", f"l{j}"), (f"h{j}", f"h{j}")]
    return moves


def counter(n: int) -> Nfa:
    """Binary counter over ``n`` bits: ``l_i``/``h_i`` hold bit ``i`` at 0/1.

    ``α_i`` sets bit ``i`` and clears the bits below it; it is safe only when
    bit ``i`` is 0 and every lower bit is 1. The target ``☺`` is unreachable;
    the gadget is meant to be played from a seeded configuration.
    """
    _check_param("counter", n)
    cstates = [f"l{i}" for i in range(1, n + 1)] + [f"h{i}" for i in range(1, n + 1)]
    letters = [f"α{i}" for i in range(1, n + 1)]
    trans = []
    for i in range(1, n + 1):
        trans += [(p, f"α{i}", r) for p, r in _counter_moves(n, i)]
    for a in letters:
        trans += [(WIN, a, WIN), (LOSE, a, LOSE)]
    return normalize(build_nfa([*cstates, WIN, LOSE], letters, trans, "l1", WIN))


def family_a(n: int) -> Nfa:
    """Disjoint union of the split gadget and an ``n``-bit counter under paired letters.

    ``init`` sends the start state to split ``q0`` and to every ``l_i``. Each
    paired letter ``x.α_i`` moves split states by ``x`` and counter states by
    ``α_i``. ``*`` sends split ``f`` and every counter state to the target ``☺``
    and the other split states to ``☹``. It has ``2n + 7`` states.
    """
    _check_param("family_a", n)
    cstates = [f"l{i}" for i in range(1, n + 1)] + [f"h{i}" for i in range(1, n + 1)]
    states = ["init", *SPLIT_STATES, *cstates, WIN, LOSE]
    paired = [(x, i) for x in SPLIT_LETTERS for i in range(1, n + 1)]
    letters = ["init"] + [f"{x}.α{i}" for x, i in paired] + ["*"]
    trans = [("init", "init", "q0")] + [("init", "init", f"l{i}") for i in range(1, n + 1)]
    trans += [(q, "init", LOSE) for q in [*SPLIT_STATES, *cstates]]
    for x, i in paired:
        name = f"{x}.α{i}"
        trans.append(("init", name, LOSE))
        trans += [(p, name, r) for p, a, r in SPLIT_TRANSITIONS if a == x]
        trans += [(p, name, r) for p, r in _counter_moves(n, i)]
    trans += [("init", "*", LOSE), ("f", "*", WIN)]
    trans += [(q, "*", LOSE) for q in ("q0", "q1", "q2")]
    trans += [(q, "*", WIN) for q in cstates]
    for a in letters:
        trans += [(WIN, a, WIN), (LOSE, a, LOSE)]
    return normalize(build_nfa(states, letters, trans, "init", WIN))


def _check_param(kind: str, k) -> None:
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"{kind} needs an integer parameter >= 1, got {k!r}")


def generate_gadget(kind: str, param: int | None = None) -> Nfa:
    if kind in _PARAMETRIC:
        if param is None:
            raise ValueError(f"{kind} needs a parameter")
        return {"chain": chain, "counter": counter, "family_a": family_a}[kind](param)
    if param is not None:
        raise ValueError(f"{kind} takes no parameter")
    if kind == "split":
        return split()
    if kind == "drift":
        return drift()
    if kind == "leakmemory":
        return leakmemory()
    raise ValueError(f"unknown gadget {kind!r}; expected one of {', '.join(KINDS)}")


def gadget_from_spec(spec: str) -> Nfa:
    """Parse ``split``, ``chain:3``, ``family_a:1`` and friends."""
    kind, sep, arg = spec.partition(":")
    if not sep:
        return generate_gadget(kind)
    try:
        value = int(arg)
    except ValueError:
        raise ValueError(f"bad gadget parameter in {spec!r}") from None
    return generate_gadget(kind, value)
