"""Finite trace semantics and trace logic for semiring-weighted automata."""

from .automaton import (
    STOP,
    Automaton,
    AutomatonError,
    check_dist_law_axioms,
    dist_law,
    format_automaton,
    gamma,
    parse_automaton,
    random_automaton,
)
from .branching import (
    ProbabilityMode,
    Weighting,
    check_monad_and_strength_laws,
    double_strength,
    flatten,
    fmap,
    kleisli_compose,
    strength,
    unit,
    validate_probability,
)
from .logic import (
    Diam,
    Join,
    Scale,
    Tick,
    Zero,
    apply_axiom_once,
    depth,
    distinguish,
    evaluate,
    format_formula,
    normal_form,
    pairing,
    parse_formula,
    refute,
)
from .semiring import (
    BOOLEAN,
    MINPLUS,
    NAT,
    RATIONAL,
    Semiring,
    check_semiring_laws,
    fold_product,
    fold_sum,
    get_semiring,
)
from .trace import (
    TraceTable,
    brute_force_tr,
    embed,
    equiv_bounded,
    equiv_exact_boolean,
    equiv_exact_rational,
    project,
    tr,
    trace_report,
)

__version__ = "0.1.0"
