"""Reasoning services over finite domains.

The engine is a plain backtracking enumerator with three-valued pruning: a
branch is cut as soon as some sentence evaluates to false under the partial
assignment.  Desk-scale domains keep this exact and dependency-free.

On top of the search sit: model enumeration in canonical order, consistency,
optimal propagation (the backbone of a state), minimal retraction candidates
for blocked facts, and theory simplification into a residue.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Literal, NamedTuple, Optional

from .logic import (
    And,
    BoolAtom,
    Compare,
    Const,
    Formula,
    Iff,
    Implies,
    Kind,
    KnowledgeBase,
    Not,
    Or,
    PartialStructure,
    Sentence,
    Symbol,
    Value,
    Vocabulary,
    evaluate3,
    formula_symbols,
)

Scope = Literal["env", "both"]
ENV_ONLY: Scope = "env"
BOTH: Scope = "both"


class Fact(NamedTuple):
    name: str
    value: Value


class NoModelsError(Exception):
    """The structure admits no model of the selected theories."""


class StateInconsistentError(Exception):
    pass


class FactNotBlockingError(Exception):
    pass


@dataclass(frozen=True)
class SolveState:
    """Observations over environmental symbols paired with tentative decisions."""

    obs: PartialStructure
    dec: PartialStructure

    def __post_init__(self) -> None:
        vocab = self.obs.vocabulary
        if vocab != self.dec.vocabulary:
            raise ValueError("observation and decision structures disagree on the vocabulary")
        for name in self.obs.interpreted():
            if vocab[name].kind is not Kind.ENV:
                raise ValueError("%r is not environmental; it cannot be observed" % name)
        for name in self.dec.interpreted():
            if vocab[name].kind is not Kind.DEC:
                raise ValueError("%r is not a decision symbol" % name)

    @classmethod
    def empty(cls, vocab: Vocabulary) -> "SolveState":
        return cls(PartialStructure.empty(vocab), PartialStructure.empty(vocab))

    @property
    def vocabulary(self) -> Vocabulary:
        return self.obs.vocabulary

    def combined(self) -> PartialStructure:
        return self.obs.join(self.dec)

    def assign(self, name: str, value: Value) -> "SolveState":
        if self.vocabulary[name].kind is Kind.ENV:
            return SolveState(self.obs.assign(name, value), self.dec)
        return SolveState(self.obs, self.dec.assign(name, value))

    def without(self, name: str) -> "SolveState":
        if name in self.obs:
            return SolveState(self.obs.without(name), self.dec)
        return SolveState(self.obs, self.dec.without(name))


def _scope_sentences(kb: KnowledgeBase, which: Scope) -> tuple[Sentence, ...]:
    if which == ENV_ONLY:
        return kb.tenv
    if which == BOTH:
        return kb.sentences()
    raise ValueError("unknown theory scope %r" % (which,))


# ---------------------------------------------------------------------------
# Constant folding
# ---------------------------------------------------------------------------

def negate(formula: Formula) -> Formula:
    if isinstance(formula, Const):
        return Const(not formula.value)
    if isinstance(formula, Not):
        return formula.arg
    return Not(formula)


def fold_formula(formula: Formula, structure: PartialStructure) -> Formula:
    """Substitute interpreted symbols and fold constants.

    The result never mentions a symbol interpreted by ``structure``.
    """
    if isinstance(formula, BoolAtom):
        v = structure.get(formula.name)
        return formula if v is None else Const(bool(v))
    if isinstance(formula, Compare):
        v = structure.get(formula.name)
        if v is None:
            return formula
        return Const(evaluate3(formula, structure))  # fully determined comparison
    if isinstance(formula, Const):
        return formula
    if isinstance(formula, Not):
        return negate(fold_formula(formula.arg, structure))
    if isinstance(formula, And):
        a = fold_formula(formula.left, structure)
        if a == Const(False):
            return a
        b = fold_formula(formula.right, structure)
        if b == Const(False):
            return b
        if a == Const(True):
            return b
        if b == Const(True):
            return a
        return And(a, b)
    if isinstance(formula, Or):
        a = fold_formula(formula.left, structure)
        if a == Const(True):
            return a
        b = fold_formula(formula.right, structure)
        if b == Const(True):
            return b
        if a == Const(False):
            return b
        if b == Const(False):
            return a
        return Or(a, b)
    if isinstance(formula, Implies):
        a = fold_formula(formula.left, structure)
        if a == Const(False):
            return Const(True)
        b = fold_formula(formula.right, structure)
        if b == Const(True):
            return b
        if a == Const(True):
            return b
        if b == Const(False):
            return negate(a)
        return Implies(a, b)
    if isinstance(formula, Iff):
        a = fold_formula(formula.left, structure)
        b = fold_formula(formula.right, structure)
        if isinstance(a, Const):
            return b if a.value else negate(b)
        if isinstance(b, Const):
            return a if b.value else negate(a)
        return Iff(a, b)
    raise TypeError("not a formula: %r" % (formula,))


# ---------------------------------------------------------------------------
# Backtracking search
# ---------------------------------------------------------------------------

def _search(
    variables: list[Symbol],
    pending: list[tuple[Formula, frozenset[str]]],
    values: dict[str, Value],
    limit: int,
    results: list[dict[str, Value]],
    dynamic: bool,
) -> None:
    """DFS over ``variables``, values in declared order.

    ``pending`` holds formulas not yet certainly true; a branch dies when one
    becomes certainly false.  Every pending formula's symbols must be covered
    by ``values``'s keys plus ``variables``, so leaves are models.

    With ``dynamic`` the variable occurring in the most pending formulas is
    split first (ties broken canonically), which keeps refutations shallow;
    without it the given (canonical) order is kept, so leaves are produced in
    lexicographic order.
    """
    if not variables:
        results.append(dict(values))
        return
    if dynamic and pending:
        counts = {v.name: 0 for v in variables}
        for _, syms in pending:
            for name in syms:
                if name in counts:
                    counts[name] += 1
        pick = max(range(len(variables)), key=lambda i: (counts[variables[i].name], -i))
        sym = variables[pick]
        rest = variables[:pick] + variables[pick + 1 :]
    else:
        sym = variables[0]
        rest = variables[1:]
    for v in sym.domain.values():
        values[sym.name] = v
        ok = True
        narrowed = []
        for f, syms in pending:
            if sym.name in syms:
                r = evaluate3(f, values)  # duck-typed: dict.get suffices
                if r is False:
                    ok = False
                    break
                if r is None:
                    narrowed.append((f, syms))
            else:
                narrowed.append((f, syms))
        if ok:
            _search(rest, narrowed, values, limit, results, dynamic)
            if len(results) >= limit:
                break
    del values[sym.name]


def _prepare(
    formulas: Iterable[Formula], fixed: dict[str, Value]
) -> Optional[list[tuple[Formula, frozenset[str]]]]:
    """Initial pending list, or None when some formula is already false."""
    pending = []
    for f in formulas:
        r = evaluate3(f, fixed)
        if r is False:
            return None
        if r is None:
            pending.append((f, formula_symbols(f)))
    return pending


def _solve(
    vocab: Vocabulary,
    formulas: Iterable[Formula],
    base: PartialStructure,
    variables: list[Symbol],
    limit: int,
    dynamic: bool = True,
) -> list[dict[str, Value]]:
    fixed = dict(base.items())
    pending = _prepare(formulas, fixed)
    if pending is None:
        return []
    results: list[dict[str, Value]] = []
    _search(variables, pending, fixed, limit, results, dynamic)
    return results


def enumerate_models(
    kb: KnowledgeBase, state: SolveState, which: Scope = BOTH, limit: int = 1
) -> list[PartialStructure]:
    """Up to ``limit`` total structures expanding the state and satisfying the
    selected theories, in canonical lexicographic order."""
    if limit < 1:
        raise ValueError("limit must be at least 1")
    base = state.combined()
    vocab = kb.vocabulary
    variables = [s for s in vocab.symbols if s.name not in base]
    formulas = [s.formula for s in _scope_sentences(kb, which)]
    found = _solve(vocab, formulas, base, variables, limit, dynamic=False)
    return [PartialStructure(vocab, m) for m in found]


def is_consistent(kb: KnowledgeBase, state: SolveState) -> bool:
    """Whether some total expansion of the state satisfies both theories."""
    return find_expansion(kb.vocabulary, [s.formula for s in kb.sentences()], state.combined()) is not None


def find_expansion(
    vocab: Vocabulary, formulas: Iterable[Formula], base: PartialStructure
) -> Optional[PartialStructure]:
    """First total expansion of ``base`` satisfying ``formulas``, or None.

    Only symbols still mentioned after folding in ``base`` are searched; the
    remaining ones take their first domain value, which cannot affect truth.
    """
    folded = []
    needed: set[str] = set()
    for f in formulas:
        g = fold_formula(f, base)
        if g == Const(False):
            return None
        if g != Const(True):
            folded.append(g)
            needed |= formula_symbols(g)
    variables = [s for s in vocab.symbols if s.name in needed]
    found = _solve(vocab, folded, PartialStructure.empty(vocab), variables, 1)
    if not found:
        return None
    values = dict(base.items())
    values.update(found[0])
    for sym in vocab.symbols:
        if sym.name not in values:
            values[sym.name] = sym.domain.values()[0]
    return PartialStructure(vocab, values)


# ---------------------------------------------------------------------------
# Backbone (optimal propagation)
# ---------------------------------------------------------------------------

def backbone(kb: KnowledgeBase, base: PartialStructure, which: Scope = BOTH) -> PartialStructure:
    """The most precise expansion of ``base`` shared by all models.

    A symbol is pinned exactly when a single value remains possible among the
    models of the selected theories expanding ``base``.  Computed by one
    bounded search per still-possible value; every model found along the way
    narrows the other symbols' open values too.
    """
    vocab = kb.vocabulary
    folded: list[Formula] = []
    candidates: set[str] = set()
    for sentence in _scope_sentences(kb, which):
        g = fold_formula(sentence.formula, base)
        if g == Const(False):
            raise NoModelsError("no models: a sentence is already violated")
        if g != Const(True):
            folded.append(g)
            candidates |= formula_symbols(g)
    # Single-value domains are forced no matter what the theories say.
    forced: dict[str, Value] = {}
    for sym in vocab.symbols:
        if sym.name not in base and sym.domain.size == 1:
            forced[sym.name] = sym.domain.values()[0]
            candidates.discard(sym.name)

    variables = [s for s in vocab.symbols if s.name in candidates]
    first = _solve(vocab, folded, PartialStructure.empty(vocab), variables, 1)
    if not first:
        raise NoModelsError("no models expand the given structure")
    possible: dict[str, set[Value]] = {s.name: {first[0][s.name]} for s in variables}

    for sym in variables:
        for v in sym.domain.values():
            if v in possible[sym.name]:
                continue
            probe = _solve(
                vocab,
                folded,
                PartialStructure(vocab, {sym.name: v}),
                [s for s in variables if s.name != sym.name],
                1,
            )
            if probe:
                model = probe[0]
                model[sym.name] = v
                for other in variables:
                    possible[other.name].add(model[other.name])
    for sym in variables:
        if len(possible[sym.name]) == 1:
            forced[sym.name] = next(iter(possible[sym.name]))
    return base.join(PartialStructure(vocab, forced))


# ---------------------------------------------------------------------------
# Retraction candidates
# ---------------------------------------------------------------------------

def retraction_candidates(
    kb: KnowledgeBase, state: SolveState, blocked: Fact
) -> list[list[Fact]]:
    """All subset-minimal sets of decision facts whose removal lets ``blocked`` in.

    The decision sets are scanned smallest-first in canonical order, skipping
    supersets of sets already found, so the result is exactly the minimal
    ones; it is returned in lexicographic order of the retracted symbols.
    """
    if not is_consistent(kb, state):
        raise StateInconsistentError("state already inconsistent")
    blocked_state = state.assign(blocked.name, blocked.value)
    if is_consistent(kb, blocked_state):
        raise FactNotBlockingError("adding %s does not make the state inconsistent" % (blocked.name,))

    dec_facts = [Fact(n, v) for n, v in state.dec.items()]
    found_index_sets: list[frozenset[int]] = []
    results: list[tuple[tuple[int, ...], list[Fact]]] = []
    indices = range(len(dec_facts))
    for size in range(1, len(dec_facts) + 1):
        for combo in itertools.combinations(indices, size):
            combo_set = frozenset(combo)
            if any(prev <= combo_set for prev in found_index_sets):
                continue
            trimmed = state.dec
            for i in combo:
                trimmed = trimmed.without(dec_facts[i].name)
            candidate = SolveState(blocked_state.obs, trimmed) \
                if kb.vocabulary[blocked.name].kind is Kind.ENV \
                else SolveState(state.obs, trimmed.assign(blocked.name, blocked.value))
            if is_consistent(kb, candidate):
                found_index_sets.append(combo_set)
                results.append((combo, [dec_facts[i] for i in combo]))
    results.sort(key=lambda item: item[0])
    return [facts for _, facts in results]


# ---------------------------------------------------------------------------
# Residue
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ResidueSentence:
    formula: Formula
    theory: Literal["env", "sol"]
    index: int
    is_definition: bool
    defined_symbol: Optional[str]

    @property
    def is_false(self) -> bool:
        return self.formula == Const(False)

    @property
    def symbols(self) -> frozenset[str]:
        return formula_symbols(self.formula)


@dataclass(frozen=True)
class Residue:
    """What is left of the theories after substituting a structure's values.

    Sentences folding to true are dropped; sentences folding to false are kept
    and flagged, signalling that the structure contradicts the theories.
    """

    sentences: tuple[ResidueSentence, ...]

    @property
    def has_false(self) -> bool:
        return any(s.is_false for s in self.sentences)

    def symbols(self) -> frozenset[str]:
        out: set[str] = set()
        for s in self.sentences:
            out |= s.symbols
        return frozenset(out)


def simplify_theory(
    sentences: Iterable[Sentence], structure: PartialStructure, theory: Literal["env", "sol"]
) -> list[ResidueSentence]:
    out = []
    for i, sentence in enumerate(sentences):
        g = fold_formula(sentence.formula, structure)
        if g == Const(True):
            continue
        out.append(ResidueSentence(g, theory, i, sentence.is_definition, sentence.defined_symbol))
    return out


def simplify(kb: KnowledgeBase, structure: PartialStructure) -> Residue:
    """Fold every sentence of both theories under ``structure``."""
    entries = simplify_theory(kb.tenv, structure, "env")
    entries += simplify_theory(kb.tsol, structure, "sol")
    return Residue(tuple(entries))
