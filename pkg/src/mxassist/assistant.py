"""Interactive-session semantics on top of the reasoning engine.

This module knows how to split propagated facts by their epistemic status
(safe, to be verified, decision consequence), when a state guarantees a
solution (definite/contingent), which symbols are still worth entering
(exact and approximate relevance), and how to run a session of asserts and
retracts that never leaves a consistent state.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Literal, Optional

from .engine import (
    BOTH,
    ENV_ONLY,
    Fact,
    NoModelsError,
    SolveState,
    StateInconsistentError,
    backbone,
    find_expansion,
    fold_formula,
    is_consistent,
    negate,
    retraction_candidates,
    simplify_theory,
)
from .logic import (
    Const,
    Domain,
    Kind,
    KnowledgeBase,
    Or,
    PartialStructure,
    Value,
    Vocabulary,
    formula_symbols,
)


class SizeGuardError(Exception):
    """Exact relevance was requested on a vocabulary too large to enumerate."""


class WrongRoleError(Exception):
    pass


class AlreadyInterpretedError(Exception):
    pass


class NotInterpretedError(Exception):
    pass


# ---------------------------------------------------------------------------
# Propagation split
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PropagationSplit:
    """New facts derived from a state, split by how they must be treated.

    ``obs_safe`` holds environmental facts that follow from the environment
    theory alone: they are certainly true and need no verification.
    ``obs_to_verify`` holds environmental facts that follow only when the
    solution theory is added: they are hypotheses of the current decisions and
    must be confirmed by observing.  ``dec_consequence`` holds forced decision
    values.
    """

    obs_safe: PartialStructure
    obs_to_verify: PartialStructure
    dec_consequence: PartialStructure

    def commit(self, state: SolveState) -> SolveState:
        """The state extended with everything that needs no verification."""
        return SolveState(
            state.obs.join(self.obs_safe), state.dec.join(self.dec_consequence)
        )

    def interpreted(self) -> frozenset[str]:
        return frozenset(
            self.obs_safe.interpreted()
            + self.obs_to_verify.interpreted()
            + self.dec_consequence.interpreted()
        )


def propagate_split(kb: KnowledgeBase, state: SolveState) -> PropagationSplit:
    """Propagate with the environment theory first, then with both theories."""
    try:
        env_expansion = backbone(kb, state.obs, ENV_ONLY)
    except NoModelsError:
        raise StateInconsistentError("observations contradict the environment theory") from None
    obs_safe = env_expansion.minus(state.obs).restrict_kind(Kind.ENV)
    base = state.obs.join(obs_safe).join(state.dec)
    try:
        full_expansion = backbone(kb, base, BOTH)
    except NoModelsError:
        raise StateInconsistentError("state is inconsistent with the theories") from None
    new = full_expansion.minus(base)
    return PropagationSplit(
        obs_safe=obs_safe,
        obs_to_verify=new.restrict_kind(Kind.ENV),
        dec_consequence=new.restrict_kind(Kind.DEC),
    )


# ---------------------------------------------------------------------------
# Definite and contingent solutions
# ---------------------------------------------------------------------------

def check_definite(
    kb: KnowledgeBase, state: SolveState
) -> tuple[bool, Optional[PartialStructure]]:
    """Whether every admissible completion of the state is a solution.

    Admissible means: the environmental part satisfies the environment theory
    (the decision part ranges freely).  Returns a violating total structure
    as counterexample when the answer is no.
    """
    if not kb.tsol:
        return True, None
    violated = functools.reduce(Or, [negate(s.formula) for s in kb.tsol])
    counterexample = find_expansion(
        kb.vocabulary,
        [s.formula for s in kb.tenv] + [violated],
        state.combined(),
    )
    if counterexample is None:
        return True, None
    return False, counterexample


def check_contingent(
    kb: KnowledgeBase, state: SolveState
) -> tuple[bool, Optional[PartialStructure]]:
    """Whether every admissible environment still admits some solution.

    Enumerates the environment completions that matter (those mentioned by
    the folded theories) and searches a decision completion for each; the
    first environment with no solution is returned as counterexample.
    """
    vocab = kb.vocabulary
    base = state.combined()
    folded_env = []
    for s in kb.tenv:
        g = fold_formula(s.formula, base)
        if g == Const(False):
            return True, None  # no admissible environment at all
        if g != Const(True):
            folded_env.append(g)
    folded_sol = []
    for s in kb.tsol:
        g = fold_formula(s.formula, base)
        if g != Const(True):
            folded_sol.append(g)

    touched = frozenset().union(
        *(formula_symbols(g) for g in folded_env + folded_sol)
    ) if (folded_env or folded_sol) else frozenset()
    env_vars = [
        s for s in vocab.symbols
        if s.kind is Kind.ENV and s.name in touched and s.name not in base
    ]

    for env_values in _iter_assignments(env_vars):
        env_struct = PartialStructure(vocab, env_values)
        if any(
            _fold_is_false(g, env_struct) for g in folded_env
        ):
            continue
        remaining = [fold_formula(g, env_struct) for g in folded_sol]
        if any(g == Const(False) for g in remaining):
            found = None
        else:
            active = [g for g in remaining if g != Const(True)]
            found = find_expansion(vocab, active, base.join(env_struct))
        if found is None:
            full_env = dict(state.obs.items())
            full_env.update(env_values)
            for sym in vocab.symbols:
                if sym.kind is Kind.ENV and sym.name not in full_env:
                    full_env[sym.name] = sym.domain.values()[0]
            return False, PartialStructure(vocab, full_env)
    return True, None


def _iter_assignments(symbols):
    if not symbols:
        yield {}
        return
    for combo in itertools.product(*(s.domain.values() for s in symbols)):
        yield {s.name: v for s, v in zip(symbols, combo)}


def _fold_is_false(formula, structure) -> bool:
    return fold_formula(formula, structure) == Const(False)


@dataclass(frozen=True)
class SolutionVerdict:
    definite: bool
    contingent: bool
    definite_counterexample: Optional[PartialStructure] = None
    contingent_counterexample: Optional[PartialStructure] = None


def solution_verdict(kb: KnowledgeBase, state: SolveState) -> SolutionVerdict:
    definite, def_ce = check_definite(kb, state)
    if definite:
        return SolutionVerdict(True, True, None, None)
    contingent, cont_ce = check_contingent(kb, state)
    return SolutionVerdict(False, contingent, def_ce, cont_ce)


# ---------------------------------------------------------------------------
# Relevance
# ---------------------------------------------------------------------------

DEFAULT_SYMBOL_GUARD = 16


def minimal_definite_solutions(
    kb: KnowledgeBase, state: SolveState, max_symbols: int = DEFAULT_SYMBOL_GUARD
) -> list[SolveState]:
    """All least-precise definite solutions expanding the state.

    Breadth-first layering over added facts: a state found definite is
    collected and never expanded, and states expanding an already-collected
    solution are dominated.  Only symbols occurring in the theories can occur
    in a minimal definite solution, so only those are branched on.
    """
    vocab = kb.vocabulary
    if len(vocab) > max_symbols:
        raise SizeGuardError(
            "exact mode unavailable: %d symbols exceed the guard of %d"
            % (len(vocab), max_symbols)
        )
    if not is_consistent(kb, state):
        raise StateInconsistentError("state admits no solution")

    theory_symbols: set[str] = set()
    for sentence in kb.sentences():
        theory_symbols |= sentence.symbols

    results: list[SolveState] = []
    visited: set[SolveState] = {state}
    frontier = [state]
    while frontier:
        next_frontier: list[SolveState] = []
        for st in frontier:
            if any(r.obs.leq_precise(st.obs) and r.dec.leq_precise(st.dec) for r in results):
                continue
            if check_definite(kb, st)[0]:
                results.append(st)
                continue
            interpreted = st.combined()
            for sym in vocab.symbols:
                if sym.name not in theory_symbols or sym.name in interpreted:
                    continue
                for value in sym.domain.values():
                    child = st.assign(sym.name, value)
                    if child in visited:
                        continue
                    visited.add(child)
                    if is_consistent(kb, child):
                        next_frontier.append(child)
        frontier = next_frontier
    results.sort(key=lambda s: _state_key(vocab, s))
    return results


def _state_key(vocab: Vocabulary, state: SolveState):
    return tuple(
        (vocab.index(name), _value_key(vocab[name].domain, value))
        for name, value in state.combined().items()
    )


def _value_key(domain: Domain, value: Value) -> int:
    return domain.values().index(value)


def relevant_exact(
    kb: KnowledgeBase, state: SolveState, max_symbols: int = DEFAULT_SYMBOL_GUARD
) -> frozenset[str]:
    """Symbols interpreted in at least one minimal definite solution."""
    relevant: set[str] = set()
    for solution in minimal_definite_solutions(kb, state, max_symbols):
        relevant.update(solution.combined().interpreted())
    return frozenset(relevant)


def relevant_approx(
    kb: KnowledgeBase, state: SolveState, split: Optional[PropagationSplit] = None
) -> frozenset[str]:
    """Over-approximation of the relevant symbols via propagation and residue.

    Seeds with: the literals of the state and its propagation, the
    goal-flagged symbols, and the symbols of the simplified non-definition
    sentences; then closes under the simplified definitions of symbols
    already in the set.

    The environment theory is simplified only under facts that are safe
    (observations and their environment-theory consequences); folding it
    under to-be-verified hypotheses can hide symbols that exact relevance
    still counts, which would break the over-approximation guarantee.
    """
    if split is None:
        split = propagate_split(kb, state)
    safe_env = state.obs.join(split.obs_safe)
    everything = (
        safe_env.join(split.obs_to_verify).join(state.dec).join(split.dec_consequence)
    )

    residue_env = simplify_theory(kb.tenv, safe_env, "env")
    residue_sol = simplify_theory(kb.tsol, everything, "sol")

    relevant: set[str] = set(everything.interpreted())
    relevant.update(kb.goals)
    definitions: list[tuple[str, frozenset[str]]] = []
    for entry in residue_env + residue_sol:
        if entry.is_definition and entry.defined_symbol is not None:
            definitions.append((entry.defined_symbol, entry.symbols))
        else:
            relevant |= entry.symbols

    changed = True
    while changed:
        changed = False
        for defined, symbols in definitions:
            if defined in relevant and not symbols <= relevant:
                relevant |= symbols
                changed = True
    return frozenset(relevant)


# ---------------------------------------------------------------------------
# Sessions
# ---------------------------------------------------------------------------

class Role(Enum):
    OBSERVATION = "observation"
    DECISION = "decision"


_ROLE_KIND = {Role.OBSERVATION: Kind.ENV, Role.DECISION: Kind.DEC}


@dataclass(frozen=True)
class Event:
    step: int
    action: Literal["assert", "retract"]
    role: Role
    symbol: str
    value: Optional[Value] = None


@dataclass(frozen=True)
class AssertOutcome:
    accepted: bool
    hints: tuple[tuple[Fact, ...], ...] = ()


class Session:
    """One user's interactive search; operations must be applied serially.

    Asserting a fact that would make the state inconsistent is refused: a
    decision outright, an observation with the minimal sets of decisions
    whose retraction would let it in.  Retracting a given fact always
    succeeds and keeps the state consistent.
    """

    def __init__(self, kb: KnowledgeBase):
        self.kb = kb
        self._state = SolveState.empty(kb.vocabulary)
        self._history: list[Event] = []
        self.satisfiable = is_consistent(kb, self._state)

    @property
    def state(self) -> SolveState:
        return self._state

    @property
    def history(self) -> tuple[Event, ...]:
        return tuple(self._history)

    def assert_fact(self, symbol: str, value: Value, role: Role) -> AssertOutcome:
        sym = self.kb.vocabulary[symbol]
        if sym.kind is not _ROLE_KIND[role]:
            raise WrongRoleError(
                "%s is %s; it cannot be entered as a %s"
                % (symbol, "environmental" if sym.kind is Kind.ENV else "a decision",
                   role.value)
            )
        if symbol in self._state.combined():
            raise AlreadyInterpretedError("%s already has a value; retract it first" % symbol)
        if not sym.domain.contains(value):
            raise ValueError(
                "value %r is outside the domain %s of %s" % (value, sym.domain.describe(), symbol)
            )
        if not self.satisfiable:
            raise StateInconsistentError("there is no solution to this problem")
        candidate = self._state.assign(symbol, value)
        if is_consistent(self.kb, candidate):
            self._state = candidate
            self._history.append(
                Event(len(self._history), "assert", role, symbol, value)
            )
            return AssertOutcome(True)
        if role is Role.DECISION:
            return AssertOutcome(False, ())
        hints = retraction_candidates(self.kb, self._state, Fact(symbol, value))
        return AssertOutcome(False, tuple(tuple(h) for h in hints))

    def retract(self, symbol: str) -> None:
        if symbol not in self._state.combined():
            raise NotInterpretedError("%s has no given value to retract" % symbol)
        role = Role.OBSERVATION if symbol in self._state.obs else Role.DECISION
        self._state = self._state.without(symbol)
        self._history.append(Event(len(self._history), "retract", role, symbol, None))

    def report(self, mode: Literal["exact", "approx"] = "approx") -> "StateReport":
        return build_report(
            self.kb, self._state, mode, len(self._history), self.satisfiable
        )


def replay_events(kb: KnowledgeBase, events: Iterable[Event]) -> SolveState:
    """Fold an event log into a state, checking consistency at every step."""
    state = SolveState.empty(kb.vocabulary)
    if not is_consistent(kb, state):
        raise StateInconsistentError("empty state inconsistent")
    for event in events:
        if event.action == "assert":
            assert event.value is not None
            state = state.assign(event.symbol, event.value)
        else:
            state = state.without(event.symbol)
        if not is_consistent(kb, state):
            raise StateInconsistentError("replay reached an inconsistent state at step %d" % event.step)
    return state


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

class Status(Enum):
    GIVEN_OBSERVATION = "given_observation"
    GIVEN_DECISION = "given_decision"
    SAFE_CONSEQUENCE = "safe_consequence"
    TO_VERIFY = "to_verify"
    DECISION_CONSEQUENCE = "decision_consequence"
    RELEVANT_UNKNOWN = "relevant_unknown"
    IRRELEVANT = "irrelevant"


@dataclass(frozen=True)
class SymbolReport:
    name: str
    kind: Kind
    domain: Domain
    status: Status
    value: Optional[Value] = None


@dataclass(frozen=True)
class StateReport:
    symbols: tuple[SymbolReport, ...]
    definite: bool
    contingent: bool
    history_length: int
    mode: str
    satisfiable: bool = True

    def status_of(self, name: str) -> Status:
        for entry in self.symbols:
            if entry.name == name:
                return entry.status
        raise KeyError(name)


def build_report(
    kb: KnowledgeBase,
    state: SolveState,
    mode: Literal["exact", "approx"],
    history_length: int = 0,
    satisfiable: bool = True,
) -> StateReport:
    """Status of every symbol plus the stop banners.

    The banners follow the stopping rules: definite once no relevant symbol
    lacks a value (counting safe and decision consequences as valued, but not
    to-be-verified hypotheses), contingent once no relevant environmental
    symbol lacks one.  Because approximate relevance may keep irrelevant
    symbols, a banner is only shown after the corresponding solution check
    confirms it on the state extended with its consequences.
    """
    vocab = kb.vocabulary
    if not satisfiable:
        entries = tuple(
            SymbolReport(s.name, s.kind, s.domain, Status.IRRELEVANT) for s in vocab.symbols
        )
        return StateReport(entries, False, False, history_length, mode, False)

    split = propagate_split(kb, state)
    committed = split.commit(state)
    if mode == "exact":
        relevant = relevant_exact(kb, state)
    else:
        relevant = relevant_approx(kb, state, split)

    committed_names = set(committed.combined().interpreted())
    criterion_definite = all(name in committed_names for name in relevant)
    criterion_contingent = all(
        name in committed.obs
        for name in relevant
        if vocab[name].kind is Kind.ENV
    )
    definite = criterion_definite and check_definite(kb, committed)[0]
    contingent = definite or (
        criterion_contingent and check_contingent(kb, committed)[0]
    )

    entries = []
    for sym in vocab.symbols:
        if sym.name in state.obs:
            entries.append(
                SymbolReport(sym.name, sym.kind, sym.domain,
                             Status.GIVEN_OBSERVATION, state.obs.value(sym.name))
            )
        elif sym.name in state.dec:
            entries.append(
                SymbolReport(sym.name, sym.kind, sym.domain,
                             Status.GIVEN_DECISION, state.dec.value(sym.name))
            )
        elif sym.name in split.obs_safe:
            entries.append(
                SymbolReport(sym.name, sym.kind, sym.domain,
                             Status.SAFE_CONSEQUENCE, split.obs_safe.value(sym.name))
            )
        elif sym.name in split.obs_to_verify:
            entries.append(
                SymbolReport(sym.name, sym.kind, sym.domain,
                             Status.TO_VERIFY, split.obs_to_verify.value(sym.name))
            )
        elif sym.name in split.dec_consequence:
            entries.append(
                SymbolReport(sym.name, sym.kind, sym.domain,
                             Status.DECISION_CONSEQUENCE, split.dec_consequence.value(sym.name))
            )
        elif sym.name in relevant:
            entries.append(
                SymbolReport(sym.name, sym.kind, sym.domain, Status.RELEVANT_UNKNOWN)
            )
        else:
            entries.append(SymbolReport(sym.name, sym.kind, sym.domain, Status.IRRELEVANT))
    return StateReport(tuple(entries), definite, contingent, history_length, mode, True)
