"""Probabilistic conditional preference networks over binary variables."""

__version__ = "0.1.0"

from .aggregation import (
    aggregate,
    as_pcpnet,
    condorcet_winners,
    find_condorcet,
    is_condorcet,
    swap_dominance_prob,
)
from .dominance import (
    change_profile,
    completion_dominance_exists,
    det_dominance,
    dominance_branchset,
    dominance_prob_fpt,
    greedy_completion,
)
from .errors import (
    CycleDetected,
    EmptyPopulation,
    IncompatibleStructure,
    IncompleteTable,
    NotAForest,
    NotASwapPair,
    ParseError,
    PCPNetError,
    SemanticError,
    StructureMismatch,
    TooLarge,
    TooLargeForOracle,
)
from .formulas import BranchSet, build_change, build_worsen, formula_entails, render, unroll_to_branchset
from .generate import generate
from .io import NetDocument, format_outcome, load_net, parse_net, parse_outcome, serialize_net
from .model import (
    CPNet,
    IncompleteCPNet,
    PCPNet,
    RuleSlot,
    Structure,
    net_probability,
    rule_slots,
    sample_net,
    sample_nets,
    validate_structure,
)
from .optimization import det_optimal, map_optimal, optimal_prob
from .oracle import (
    change_sequence_exists,
    compatible_nets,
    dominance_prob_oracle,
    entails_oracle,
    enumerate_completions,
    optimal_prob_oracle,
)
