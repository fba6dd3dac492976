"""Interactive model-expansion assistant for observable environments.

A problem is split into environmental symbols (facts of the world, observed)
and decision symbols (chosen), governed by a theory of possible environments
and a theory of acceptable solutions.  The package keeps a session of
observations and decisions consistent, propagates consequences with the right
epistemic status, detects definite and contingent solutions, and computes
which symbols are still relevant.
"""

from .assistant import (
    AssertOutcome,
    Event,
    PropagationSplit,
    Role,
    Session,
    SizeGuardError,
    SolutionVerdict,
    StateReport,
    Status,
    SymbolReport,
    build_report,
    check_contingent,
    check_definite,
    minimal_definite_solutions,
    propagate_split,
    relevant_approx,
    relevant_exact,
    replay_events,
    solution_verdict,
)
from .bundled import (
    legislation_kb_text,
    load_legislation_kb,
    load_registration_kb,
    registration_kb_text,
)
from .engine import (
    BOTH,
    ENV_ONLY,
    Fact,
    FactNotBlockingError,
    NoModelsError,
    Residue,
    SolveState,
    StateInconsistentError,
    backbone,
    enumerate_models,
    is_consistent,
    retraction_candidates,
    simplify,
)
from .logic import (
    BoolDomain,
    EnumDomain,
    IntRange,
    Kind,
    KnowledgeBase,
    PartialStructure,
    Symbol,
    Vocabulary,
    count_expansions,
    evaluate,
    evaluate3,
    expansions,
)
from .parsing import ParseError, SourceSpan, parse_kb, parse_structure, serialize_kb, serialize_structure

__version__ = "0.1.0"
