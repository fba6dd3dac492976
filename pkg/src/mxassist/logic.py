"""Finite-domain propositional logic with named constants.

Everything downstream (parsing, solving, the interactive assistant) is built
on the four notions defined here: vocabularies of typed symbols, partial
structures ordered by precision, formulas, and two- and three-valued
evaluation.  All objects are immutable after construction and safe to share.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Optional, Union

Value = Union[bool, int, str]

TRUE_TEXT = "true"
FALSE_TEXT = "false"


class Kind(Enum):
    """Whether a symbol describes the environment or a decision."""

    ENV = "env"
    DEC = "dec"


# ---------------------------------------------------------------------------
# Domains
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoolDomain:
    def values(self) -> tuple[Value, ...]:
        return (True, False)

    def contains(self, value: Value) -> bool:
        return isinstance(value, bool)

    @property
    def size(self) -> int:
        return 2

    def describe(self) -> str:
        return "Bool"


@dataclass(frozen=True)
class EnumDomain:
    names: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.names:
            raise ValueError("enumeration domain needs at least one value")
        if len(set(self.names)) != len(self.names):
            raise ValueError("enumeration values must be distinct: %r" % (self.names,))

    def values(self) -> tuple[Value, ...]:
        return self.names

    def contains(self, value: Value) -> bool:
        return isinstance(value, str) and value in self.names

    @property
    def size(self) -> int:
        return len(self.names)

    def describe(self) -> str:
        return "{%s}" % ", ".join(self.names)


@dataclass(frozen=True)
class IntRange:
    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError("empty integer range [%d..%d]" % (self.lo, self.hi))

    def values(self) -> tuple[Value, ...]:
        return tuple(range(self.lo, self.hi + 1))

    def contains(self, value: Value) -> bool:
        return isinstance(value, int) and not isinstance(value, bool) and self.lo <= value <= self.hi

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    def describe(self) -> str:
        return "Int[%d..%d]" % (self.lo, self.hi)


Domain = Union[BoolDomain, EnumDomain, IntRange]


def format_value(value: Value) -> str:
    if isinstance(value, bool):
        return TRUE_TEXT if value else FALSE_TEXT
    return str(value)


# ---------------------------------------------------------------------------
# Vocabulary
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Symbol:
    name: str
    kind: Kind
    domain: Domain
    goal: bool = False


class Vocabulary:
    """An ordered list of symbol declarations.

    Declaration order is the canonical symbol order used by every
    enumeration and tie-break in the package; domain value order is likewise
    the declared order.
    """

    def __init__(self, symbols: Iterable[Symbol]):
        self._symbols = tuple(symbols)
        self._by_name: dict[str, Symbol] = {}
        self._index: dict[str, int] = {}
        for i, sym in enumerate(self._symbols):
            if sym.name in self._by_name:
                raise ValueError("duplicate symbol name %r" % sym.name)
            self._by_name[sym.name] = sym
            self._index[sym.name] = i

    @property
    def symbols(self) -> tuple[Symbol, ...]:
        return self._symbols

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self._symbols)

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def __getitem__(self, name: str) -> Symbol:
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError("undeclared symbol %r" % name) from None

    def __len__(self) -> int:
        return len(self._symbols)

    def index(self, name: str) -> int:
        return self._index[name]

    def of_kind(self, kind: Kind) -> tuple[str, ...]:
        return tuple(s.name for s in self._symbols if s.kind is kind)

    @property
    def environmental(self) -> tuple[str, ...]:
        return self.of_kind(Kind.ENV)

    @property
    def decision(self) -> tuple[str, ...]:
        return self.of_kind(Kind.DEC)

    @property
    def goals(self) -> tuple[str, ...]:
        return tuple(s.name for s in self._symbols if s.goal)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Vocabulary) and self._symbols == other._symbols

    def __hash__(self) -> int:
        return hash(self._symbols)

    def __repr__(self) -> str:
        return "Vocabulary(%s)" % ", ".join(self.names)


# ---------------------------------------------------------------------------
# Partial structures
# ---------------------------------------------------------------------------

class VocabularyMismatch(ValueError):
    pass


class OverlapError(ValueError):
    def __init__(self, shared: tuple[str, ...]):
        super().__init__("structures overlap on: %s" % ", ".join(shared))
        self.shared = shared


class PartialStructure:
    """A partial assignment of domain values to symbols.

    Instances are immutable; ``assign``/``without``/``join`` return new
    structures.  Equality and hashing are by vocabulary and assignment, so
    structures can be collected in sets.
    """

    __slots__ = ("_vocab", "_values", "_key")

    def __init__(self, vocab: Vocabulary, values: Optional[dict[str, Value]] = None):
        self._vocab = vocab
        assignments: dict[str, Value] = {}
        for name, value in (values or {}).items():
            sym = vocab[name]
            if not sym.domain.contains(value):
                raise ValueError(
                    "value %s is outside the domain %s of %s"
                    % (format_value(value), sym.domain.describe(), name)
                )
            assignments[name] = value
        self._values = assignments
        self._key = tuple(sorted(assignments.items(), key=lambda kv: vocab.index(kv[0])))

    @classmethod
    def empty(cls, vocab: Vocabulary) -> "PartialStructure":
        return cls(vocab, {})

    @property
    def vocabulary(self) -> Vocabulary:
        return self._vocab

    def __contains__(self, name: str) -> bool:
        return name in self._values

    def __len__(self) -> int:
        return len(self._values)

    def value(self, name: str) -> Value:
        return self._values[name]

    def get(self, name: str) -> Optional[Value]:
        return self._values.get(name)

    def interpreted(self) -> tuple[str, ...]:
        """Interpreted symbol names in canonical order."""
        return tuple(name for name, _ in self._key)

    def items(self) -> tuple[tuple[str, Value], ...]:
        return self._key

    @property
    def is_total(self) -> bool:
        return len(self._values) == len(self._vocab)

    def assign(self, name: str, value: Value) -> "PartialStructure":
        if name in self._values:
            raise OverlapError((name,))
        new = dict(self._values)
        new[name] = value
        return PartialStructure(self._vocab, new)

    def without(self, name: str) -> "PartialStructure":
        new = dict(self._values)
        del new[name]
        return PartialStructure(self._vocab, new)

    def restrict_kind(self, kind: Kind) -> "PartialStructure":
        return PartialStructure(
            self._vocab,
            {n: v for n, v in self._values.items() if self._vocab[n].kind is kind},
        )

    def restrict(self, names: Iterable[str]) -> "PartialStructure":
        wanted = set(names)
        return PartialStructure(
            self._vocab, {n: v for n, v in self._values.items() if n in wanted}
        )

    def leq_precise(self, other: "PartialStructure") -> bool:
        """True iff ``other`` interprets every symbol of ``self`` with the same value."""
        if self._vocab != other._vocab:
            raise VocabularyMismatch("structures are over different vocabularies")
        if len(self._values) > len(other._values):
            return False
        return all(other._values.get(n, _MISSING) == v for n, v in self._values.items())

    def join(self, other: "PartialStructure") -> "PartialStructure":
        """Union of two disjoint structures."""
        if self._vocab != other._vocab:
            raise VocabularyMismatch("structures are over different vocabularies")
        shared = [n for n in self.interpreted() if n in other._values]
        if shared:
            raise OverlapError(tuple(shared))
        merged = dict(self._values)
        merged.update(other._values)
        return PartialStructure(self._vocab, merged)

    def minus(self, other: "PartialStructure") -> "PartialStructure":
        """Drop every symbol interpreted by ``other``."""
        return PartialStructure(
            self._vocab,
            {n: v for n, v in self._values.items() if n not in other._values},
        )

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, PartialStructure)
            and self._vocab == other._vocab
            and self._values == other._values
        )

    def __hash__(self) -> int:
        return hash((self._vocab, self._key))

    def __repr__(self) -> str:
        body = ", ".join("%s=%s" % (n, format_value(v)) for n, v in self._key)
        return "{%s}" % body


_MISSING = object()


def expansions(structure: PartialStructure) -> Iterator[PartialStructure]:
    """All total expansions, lexicographic in canonical symbol and value order."""
    vocab = structure.vocabulary
    free = [s for s in vocab.symbols if s.name not in structure]
    if not free:
        yield structure
        return
    base = dict(structure.items())
    for combo in itertools.product(*(s.domain.values() for s in free)):
        values = dict(base)
        for sym, value in zip(free, combo):
            values[sym.name] = value
        yield PartialStructure(vocab, values)


def count_expansions(structure: PartialStructure) -> int:
    n = 1
    for sym in structure.vocabulary.symbols:
        if sym.name not in structure:
            n *= sym.domain.size
    return n


# ---------------------------------------------------------------------------
# Formulas
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoolAtom:
    name: str


@dataclass(frozen=True)
class Compare:
    name: str
    op: str  # "=", "!=", "<", "<=", ">", ">="
    value: Value


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Const:
    value: bool


Formula = Union[BoolAtom, Compare, Not, And, Or, Implies, Iff, Const]

_COMPARATORS = {
    "=": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


def formula_symbols(formula: Formula) -> frozenset[str]:
    out: set[str] = set()
    stack = [formula]
    while stack:
        f = stack.pop()
        if isinstance(f, BoolAtom) or isinstance(f, Compare):
            out.add(f.name)
        elif isinstance(f, Not):
            stack.append(f.arg)
        elif isinstance(f, (And, Or, Implies, Iff)):
            stack.append(f.left)
            stack.append(f.right)
    return frozenset(out)


def evaluate(formula: Formula, total: PartialStructure) -> bool:
    """Two-valued evaluation; every symbol of the formula must be interpreted."""
    if isinstance(formula, BoolAtom):
        return bool(total.value(formula.name))
    if isinstance(formula, Compare):
        return _COMPARATORS[formula.op](total.value(formula.name), formula.value)
    if isinstance(formula, Not):
        return not evaluate(formula.arg, total)
    if isinstance(formula, And):
        return evaluate(formula.left, total) and evaluate(formula.right, total)
    if isinstance(formula, Or):
        return evaluate(formula.left, total) or evaluate(formula.right, total)
    if isinstance(formula, Implies):
        return (not evaluate(formula.left, total)) or evaluate(formula.right, total)
    if isinstance(formula, Iff):
        return evaluate(formula.left, total) == evaluate(formula.right, total)
    if isinstance(formula, Const):
        return formula.value
    raise TypeError("not a formula: %r" % (formula,))


def evaluate3(formula: Formula, partial: PartialStructure) -> Optional[bool]:
    """Strong-Kleene evaluation over a partial structure.

    Returns True/False only when every total expansion agrees (sound, not
    complete); None stands for unknown.
    """
    if isinstance(formula, BoolAtom):
        v = partial.get(formula.name)
        return None if v is None else bool(v)
    if isinstance(formula, Compare):
        v = partial.get(formula.name)
        return None if v is None else _COMPARATORS[formula.op](v, formula.value)
    if isinstance(formula, Not):
        v = evaluate3(formula.arg, partial)
        return None if v is None else not v
    if isinstance(formula, And):
        a = evaluate3(formula.left, partial)
        if a is False:
            return False
        b = evaluate3(formula.right, partial)
        if b is False:
            return False
        return True if (a is True and b is True) else None
    if isinstance(formula, Or):
        a = evaluate3(formula.left, partial)
        if a is True:
            return True
        b = evaluate3(formula.right, partial)
        if b is True:
            return True
        return False if (a is False and b is False) else None
    if isinstance(formula, Implies):
        a = evaluate3(formula.left, partial)
        if a is False:
            return True
        b = evaluate3(formula.right, partial)
        if b is True:
            return True
        return False if (a is True and b is False) else None
    if isinstance(formula, Iff):
        a = evaluate3(formula.left, partial)
        if a is None:
            return None
        b = evaluate3(formula.right, partial)
        if b is None:
            return None
        return a == b
    if isinstance(formula, Const):
        return formula.value
    raise TypeError("not a formula: %r" % (formula,))


# ---------------------------------------------------------------------------
# Theories and knowledge bases
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Sentence:
    formula: Formula
    is_definition: bool = False
    defined_symbol: Optional[str] = None
    symbols: frozenset[str] = field(default=frozenset(), compare=False)

    @classmethod
    def plain(cls, formula: Formula) -> "Sentence":
        return cls(formula, False, None, formula_symbols(formula))

    @classmethod
    def definition(cls, formula: Formula, defined_symbol: str) -> "Sentence":
        return cls(formula, True, defined_symbol, formula_symbols(formula))


class KnowledgeBase:
    """A vocabulary plus a theory of the environment and a theory of solutions.

    The environment theory may only mention environmental symbols; it holds in
    every environment the user can face.  The solution theory ranges over all
    symbols and states when a configuration is acceptable.
    """

    def __init__(self, vocab: Vocabulary, tenv: Iterable[Sentence], tsol: Iterable[Sentence]):
        self.vocabulary = vocab
        self.tenv = tuple(tenv)
        self.tsol = tuple(tsol)
        env_names = set(vocab.environmental)
        for sentence in self.tenv:
            for name in sentence.symbols:
                if name not in vocab:
                    raise ValueError("undeclared symbol %r in environment theory" % name)
                if name not in env_names:
                    raise ValueError(
                        "decision symbol %r may not occur in the environment theory" % name
                    )
        for sentence in self.tsol:
            for name in sentence.symbols:
                if name not in vocab:
                    raise ValueError("undeclared symbol %r in solution theory" % name)
        for sentence in self.tenv + self.tsol:
            if sentence.is_definition:
                _check_definition(sentence)

    def sentences(self) -> tuple[Sentence, ...]:
        return self.tenv + self.tsol

    @property
    def goals(self) -> tuple[str, ...]:
        return self.vocabulary.goals

    def __repr__(self) -> str:
        return "KnowledgeBase(%d symbols, %d+%d sentences)" % (
            len(self.vocabulary),
            len(self.tenv),
            len(self.tsol),
        )


def _check_definition(sentence: Sentence) -> None:
    f = sentence.formula
    if not isinstance(f, Iff) or not isinstance(f.left, (BoolAtom, Compare)):
        raise ValueError("a definition must be an equivalence with an atom on the left")
    if f.left.name != sentence.defined_symbol:
        raise ValueError(
            "definition is marked for %r but defines %r" % (sentence.defined_symbol, f.left.name)
        )
