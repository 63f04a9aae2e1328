"""Command-line front end.

The first stdout line is always a verdict token so scripts can grep it.
Exit codes: 0 for a Player 1 outcome (YES, P1, NOCUTOFF, WON) or a plain
dump, 1 for the opposite, 2 for usage and input errors, 3 when a budget
runs out.
"""

from __future__ import annotations

import argparse
import sys

from . import oracle, parity
from .errors import BudgetExceeded
from .gadgets import gadget_from_spec
from .nfa import NfaError, normalize, parse_nfa
from .simulate import Adversary, certify_adversary, run_match
from .support import Player, solve_infinite, support_arena_dot

EXIT_P1, EXIT_P2, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("file", nargs="?", help="NFA document")
    p.add_argument("--gadget", help="built-in gadget: split, chain:K, drift, leakmemory, counter:N, family_a:N")
    p.add_argument("--budget", type=int, help="node cap for parity and explicit exploration")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="popcontrol", description="Population control for NFAs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _add_source(sub.add_parser("solve", help="decide control of every finite population"))
    p = sub.add_parser("solve-fixed-m", help="winner with exactly M agents")
    _add_source(p)
    p.add_argument("--m", type=int, required=True)
    p = sub.add_parser("cutoff", help="least population size Player 2 wins")
    _add_source(p)
    p.add_argument("--max-m", type=int, required=True)
    _add_source(sub.add_parser("infinite", help="winner of the support game"))
    p = sub.add_parser("simulate", help="play the synthesized strategy on M agents")
    _add_source(p)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--adversary", default="max_spread",
                   help="even_split, max_spread or random")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-steps", type=int, default=100)
    p = sub.add_parser("gadget", help="print a gadget as an NFA document")
    p.add_argument("kind")
    p = sub.add_parser("export", help="DOT export")
    _add_source(p)
    p.add_argument("--object", choices=("support", "parity"), required=True)
    p.add_argument("--format", choices=("dot",), default="dot")
    return parser


def _load(args):
    if (args.file is None) == (args.gadget is None):
        raise UsageError("give exactly one of FILE or --gadget")
    if args.gadget is not None:
        try:
            return gadget_from_spec(args.gadget)
        except ValueError as e:
            raise UsageError(str(e)) from None
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {args.file}: {e.strerror}") from None
    return normalize(parse_nfa(text))


def _budget(args, default):
    b = getattr(args, "budget", None)
    if b is None:
        return default
    if b < 1:
        raise UsageError("--budget must be positive")
    return b


def _positive(value, flag):
    if value < 1:
        raise UsageError(f"{flag} must be >= 1")
    return value


def _cmd_solve(args, out):
    nfa = _load(args)
    res = parity.population_control(nfa, _budget(args, parity.DEFAULT_BUDGET))
    game = res.solution.game
    out.append(res.verdict)
    out.append(f"pg-nodes {len(game)}")
    out.append(f"pg-states {game.pg_states()}")
    out.append(f"strategy-entries {len(res.strategy)}")
    if res.controllable:
        first = res.strategy.letter(1 << nfa.initial, ()) if game.initial != game.sink else None
        if first is not None:
            out.append(f"first-letter {nfa.alphabet_names[first]}")
    return EXIT_P1 if res.controllable else EXIT_P2


def _cmd_solve_fixed_m(args, out):
    nfa = _load(args)
    m = _positive(args.m, "--m")
    budget = _budget(args, oracle.DEFAULT_BUDGET)
    w = oracle.winner_fixed_m(nfa, m, budget)
    out.append(str(w))
    if w is Player.P1:
        out.append(f"steps {oracle.optimal_steps(nfa, m, 'reach', budget=budget)}")
    return EXIT_P1 if w is Player.P1 else EXIT_P2


def _cmd_cutoff(args, out):
    nfa = _load(args)
    m_max = _positive(args.max_m, "--max-m")
    res = oracle.find_cutoff(nfa, m_max, _budget(args, oracle.DEFAULT_BUDGET))
    out.append(str(res))
    out.append(f"decided-up-to {res.last_decided}")
    return EXIT_P1 if res.status == "NOCUTOFF" else EXIT_P2


def _cmd_infinite(args, out):
    nfa = _load(args)
    res = solve_infinite(nfa, "full")
    out.append(str(res.winner))
    if res.winner is Player.P1:
        out.append(f"steps {res.rank[1 << nfa.initial]}")
    return EXIT_P1 if res.winner is Player.P1 else EXIT_P2


def _adversary(name: str, seed: int, p2_strategy):
    if name == "even_split":
        return Adversary.even_split(p2_strategy)
    if name == "max_spread":
        return Adversary.max_spread()
    if name == "random":
        return Adversary.random(seed)
    raise UsageError(f"unknown adversary {name!r}; expected even_split, max_spread or random")


def _cmd_simulate(args, out):
    nfa = _load(args)
    m = _positive(args.m, "--m")
    steps = _positive(args.max_steps, "--max-steps")
    res = parity.population_control(nfa, _budget(args, parity.DEFAULT_BUDGET))
    p2 = res.solution.strategies[Player.P2]
    adv = _adversary(args.adversary, args.seed, p2)
    if res.controllable:
        match = run_match(nfa, m, res.strategy, adv, steps, args.seed)
        out.append(match.outcome)
        out.append(f"final {','.join(str(c) for c in match.final)}")
        trace = match.format_trace(nfa)
        if trace:
            out.append(trace)
        return EXIT_P1 if match.won else EXIT_P2
    if adv.kind == "random":
        raise UsageError("no Player 1 strategy on a NO instance; use even_split or max_spread")
    cert = certify_adversary(nfa, m, adv, steps)
    if cert.holds:
        out.append("NOTWON")
        out.append(f"certified {adv.name} against every letter sequence of length <= {steps}")
        out.append(f"explored {cert.explored} closed {str(cert.closed).lower()}")
        return EXIT_P2
    word = " ".join(nfa.alphabet_names[a] for a in cert.counterexample)
    out.append(f"WON {len(cert.counterexample)}")
    out.append(f"word {word}")
    return EXIT_P1


def _cmd_gadget(args, out):
    try:
        nfa = gadget_from_spec(args.kind)
    except ValueError as e:
        raise UsageError(str(e)) from None
    out.append(nfa.to_text().rstrip("\n"))
    return EXIT_P1


def _cmd_export(args, out):
    nfa = _load(args)
    if args.object == "support":
        out.append(support_arena_dot(nfa).rstrip("\n"))
    else:
        game = parity.build_parity_game(nfa, _budget(args, parity.DEFAULT_BUDGET))
        out.append(parity.parity_game_dot(game).rstrip("\n"))
    return EXIT_P1


COMMANDS = {
    "solve": _cmd_solve,
    "solve-fixed-m": _cmd_solve_fixed_m,
    "cutoff": _cmd_cutoff,
    "infinite": _cmd_infinite,
    "simulate": _cmd_simulate,
    "gadget": _cmd_gadget,
    "export": _cmd_export,
}


def run_cli(argv, err=None) -> tuple[int, str]:
    """Run one command; returns ``(exit_code, stdout_text)``. Diagnostics go to ``err``."""
    err = sys.stderr if err is None else err
    out: list[str] = []
    try:
        try:
            args = build_parser().parse_args(list(argv))
        except SystemExit as e:  # --help prints straight to stdout
            return (0 if not e.code else EXIT_USAGE), ""
        code = COMMANDS[args.command](args, out)
    except UsageError as e:
        print(f"popcontrol: {e}", file=err)
        return EXIT_USAGE, ""
    except NfaError as e:
        print(f"popcontrol: {e}", file=err)
        return EXIT_USAGE, ""
    except BudgetExceeded as e:
        print(f"popcontrol: {e}", file=err)
        return EXIT_BUDGET, ""
    return code, "\n".join(out) + "\n" if out else ""


def main(argv=None) -> int:
    code, text = run_cli(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
