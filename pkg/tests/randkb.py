"""Seeded random knowledge bases and states for the oracle suites.

The corpus deliberately contains no ``define`` sentences: definition-aware
approximate relevance intentionally drops defined atoms that the purely
equational reading counts as relevant, so definitions get their own targeted
tests instead of oracle comparison.
"""

from __future__ import annotations

import random

from mxassist.engine import SolveState
from mxassist.logic import (
    And,
    BoolAtom,
    BoolDomain,
    Compare,
    EnumDomain,
    Iff,
    Implies,
    IntRange,
    Kind,
    KnowledgeBase,
    Not,
    Or,
    Sentence,
    Symbol,
    Vocabulary,
)

import oracle


def _random_domain(rng: random.Random):
    roll = rng.random()
    if roll < 0.7:
        return BoolDomain()
    if roll < 0.85:
        k = rng.randint(2, 3)
        return EnumDomain(tuple("V%d" % i for i in range(k)))
    lo = rng.randint(0, 3)
    return IntRange(lo, lo + rng.randint(1, 2))


def random_vocabulary(rng: random.Random, max_symbols: int) -> Vocabulary:
    n = rng.randint(3, max_symbols)
    symbols = []
    for i in range(n):
        if i == 0:
            kind = Kind.ENV
        elif i == 1:
            kind = Kind.DEC
        else:
            kind = Kind.ENV if rng.random() < 0.5 else Kind.DEC
        symbols.append(
            Symbol("s%d" % i, kind, _random_domain(rng), goal=rng.random() < 0.1)
        )
    return Vocabulary(symbols)


def random_atom(rng: random.Random, vocab: Vocabulary, names):
    name = rng.choice(names)
    sym = vocab[name]
    if isinstance(sym.domain, BoolDomain):
        atom = BoolAtom(name)
        return Not(atom) if rng.random() < 0.3 else atom
    if isinstance(sym.domain, EnumDomain):
        op = rng.choice(["=", "!="])
    else:
        op = rng.choice(["=", "!=", "<", "<=", ">", ">="])
    return Compare(name, op, rng.choice(sym.domain.values()))


def random_formula(rng: random.Random, vocab: Vocabulary, names, depth: int):
    if depth <= 0 or rng.random() < 0.35:
        return random_atom(rng, vocab, names)
    ctor = rng.choice([And, Or, Implies, Iff, Not])
    if ctor is Not:
        return Not(random_formula(rng, vocab, names, depth - 1))
    return ctor(
        random_formula(rng, vocab, names, depth - 1),
        random_formula(rng, vocab, names, depth - 1),
    )


def random_kb(rng: random.Random, max_symbols: int = 9, max_sentences: int = 6) -> KnowledgeBase:
    """A random KB whose empty state is consistent; expansion count capped."""
    while True:
        vocab = random_vocabulary(rng, max_symbols)
        total = 1
        for sym in vocab.symbols:
            total *= sym.domain.size
        if total > 5000:
            continue
        env_names = list(vocab.environmental)
        tenv = []
        if env_names:
            for _ in range(rng.randint(0, 2)):
                tenv.append(Sentence.plain(random_formula(rng, vocab, env_names, 2)))
        tsol = []
        for _ in range(rng.randint(1, max(1, max_sentences - len(tenv)))):
            tsol.append(Sentence.plain(random_formula(rng, vocab, list(vocab.names), 2)))
        kb = KnowledgeBase(vocab, tenv, tsol)
        if oracle.has_model_brute(kb, SolveState.empty(vocab)):
            return kb


def random_state(
    rng: random.Random,
    kb: KnowledgeBase,
    keep_env: float = 0.4,
    keep_dec: float = 0.4,
) -> SolveState:
    """A random consistent state: a random sub-structure of a random model."""
    models = oracle.models_brute(kb, SolveState.empty(kb.vocabulary), "both")
    model = rng.choice(models)
    kind_of = {name: kb.vocabulary[name].kind for name in model.interpreted()}
    keep = [
        name
        for name in model.interpreted()
        if rng.random() < (keep_env if kind_of[name] is Kind.ENV else keep_dec)
    ]
    kept = model.restrict(keep)
    return SolveState(kept.restrict_kind(Kind.ENV), kept.restrict_kind(Kind.DEC))
