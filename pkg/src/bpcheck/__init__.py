"""Model checking of stochastic multitype branching processes."""

from .errors import BpCheckError
from .parity import (
    Dpta,
    WordAutomaton,
    accept_probability,
    all_branches_hit,
    analyse,
    clean_set,
    good_probability,
    good_set,
    load_automaton,
    parse_automaton,
    lift_word_automaton,
    n_set,
    product,
    qualitative_good,
)
from .pps import (
    DEFAULT_SETTINGS,
    Enclosure,
    FixedPointSolver,
    Pps,
    SolverSettings,
    build_af_pps,
    compare,
    decide_one,
    decide_zero,
    kleene,
    newton,
)
from .process import (
    BranchingProcess,
    Rule,
    TreePrefix,
    load_process,
    parse_process,
    prefix_probability,
    reachable_types,
    validate,
)
from .pttl import Checker, format_formula, parse_formula, sat_set
from .sampling import Estimate, estimate_af, sample_prefix

__version__ = "0.1.0"
