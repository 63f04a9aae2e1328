"""Decide whether one broadcast controller can synchronize every finite population of an NFA."""

from .errors import BudgetExceeded
from .gadgets import chain, counter, drift, family_a, gadget_from_spec, generate_gadget, leakmemory, split
from .nfa import Nfa, NfaError, NfaSemanticError, NfaSyntaxError, build_nfa, normalize, parse_nfa
from .oracle import CutoffResult, find_cutoff, optimal_steps, winner_fixed_m
from .parity import (
    ParityGame,
    PopulationControlResult,
    SymbolicStrategy,
    build_parity_game,
    population_control,
    solve_parity,
)
from .simulate import Adversary, MatchResult, certify_adversary, project_phi, run_match
from .support import Player, solve_infinite
from .tracking import CapacityVerdict, LassoPlay, classify_lasso, entry_cycle, max_entries, update_list
from .transfer import TransferGraph, compatible_graphs, compose, leaks_at, separates

__version__ = "0.1.0"
