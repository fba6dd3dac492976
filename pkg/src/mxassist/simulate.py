"""Robot-driven data-entry experiment over a knowledge base.

Two protocols are compared on the same hidden environments:

* traditional: enter every environmental fact in random order (skipping the
  ones the environment theory already derives), then pick random still-valid
  decision values until the solution is total;
* guided: repeatedly fill one random symbol among the relevant ones
  (observations take their hidden value, decisions a random value that keeps
  the state consistent, blocked observations trigger a random hinted
  retraction) and stop as soon as the state plus its consequences is a
  definite solution.

All randomness is drawn from streams derived from (seed, instance, mode), so
a seed fully determines every run and both modes see the same environments.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Literal

from .assistant import check_definite, propagate_split, relevant_approx
from .engine import (
    BOTH,
    ENV_ONLY,
    Fact,
    SolveState,
    backbone,
    is_consistent,
    retraction_candidates,
)
from .logic import Kind, KnowledgeBase, PartialStructure, Value, evaluate

Mode = Literal["traditional", "guided"]


@dataclass(frozen=True)
class SimulationConfig:
    kb: KnowledgeBase
    instances: int
    seed: int
    mode: Mode
    step_cap: int = 200

    def __post_init__(self) -> None:
        if self.step_cap <= 0:
            raise ValueError("step cap must be positive")
        if self.instances <= 0:
            raise ValueError("instance count must be positive")


@dataclass(frozen=True)
class SimulationRow:
    instance: int
    mode: Mode
    entries: int
    retractions: int
    outcome: Literal["total", "definite", "failed"]


def _stream(seed: int, instance: int, label: str) -> random.Random:
    return random.Random("%d/%d/%s" % (seed, instance, label))


def draw_environment(kb: KnowledgeBase, rng: random.Random, max_tries: int = 100000) -> PartialStructure:
    """A random total environment satisfying the environment theory."""
    vocab = kb.vocabulary
    env_symbols = [vocab[name] for name in vocab.environmental]
    for _ in range(max_tries):
        values = {s.name: rng.choice(s.domain.values()) for s in env_symbols}
        candidate = PartialStructure(vocab, values)
        if all(evaluate(s.formula, candidate) for s in kb.tenv):
            return candidate
    raise RuntimeError("could not sample an admissible environment")


def possible_values(kb: KnowledgeBase, state: SolveState, name: str) -> list[Value]:
    sym = kb.vocabulary[name]
    return [v for v in sym.domain.values() if is_consistent(kb, state.assign(name, v))]


def run_traditional(
    kb: KnowledgeBase, hidden_env: PartialStructure, rng: random.Random,
    instance: int, step_cap: int,
) -> SimulationRow:
    vocab = kb.vocabulary
    entries = 0
    obs = PartialStructure.empty(vocab)
    order = list(vocab.environmental)
    rng.shuffle(order)
    for name in order:
        derived = backbone(kb, obs, ENV_ONLY)
        if name in derived:
            continue
        obs = obs.assign(name, hidden_env.value(name))
        entries += 1
    state = SolveState(obs, PartialStructure.empty(vocab))
    steps = 0
    while steps < step_cap:
        expansion = backbone(kb, state.combined(), BOTH)
        remaining = [n for n in vocab.decision if n not in expansion]
        if not remaining:
            return SimulationRow(instance, "traditional", entries, 0, "total")
        name = rng.choice(remaining)
        value = rng.choice(possible_values(kb, state, name))
        state = state.assign(name, value)
        entries += 1
        steps += 1
    return SimulationRow(instance, "traditional", entries, 0, "failed")


def run_guided(
    kb: KnowledgeBase, hidden_env: PartialStructure, rng: random.Random,
    instance: int, step_cap: int,
) -> SimulationRow:
    vocab = kb.vocabulary
    state = SolveState.empty(vocab)
    entries = 0
    retractions = 0
    for _ in range(step_cap):
        split = propagate_split(kb, state)
        committed = split.commit(state)
        if check_definite(kb, committed)[0]:
            return SimulationRow(instance, "guided", entries, retractions, "definite")
        relevant = relevant_approx(kb, state, split)
        committed_names = set(committed.combined().interpreted())
        pool = [n for n in vocab.names if n in relevant and n not in committed_names]
        # An empty pool would mean the stop criterion already fired.
        name = rng.choice(pool)
        if vocab[name].kind is Kind.ENV:
            value = hidden_env.value(name)
            while not is_consistent(kb, state.assign(name, value)):
                hints = retraction_candidates(kb, state, Fact(name, value))
                victims = sorted(
                    {fact for hint in hints for fact in hint},
                    key=lambda f: vocab.index(f.name),
                )
                victim = rng.choice(victims)
                state = state.without(victim.name)
                retractions += 1
            state = state.assign(name, value)
        else:
            value = rng.choice(possible_values(kb, state, name))
            state = state.assign(name, value)
        entries += 1
    return SimulationRow(instance, "guided", entries, retractions, "failed")


def run_simulation(config: SimulationConfig) -> list[SimulationRow]:
    rows = []
    for instance in range(1, config.instances + 1):
        hidden_env = draw_environment(config.kb, _stream(config.seed, instance, "env"))
        rng = _stream(config.seed, instance, config.mode)
        if config.mode == "traditional":
            rows.append(run_traditional(config.kb, hidden_env, rng, instance, config.step_cap))
        else:
            rows.append(run_guided(config.kb, hidden_env, rng, instance, config.step_cap))
    return rows


def mean_entries(rows: list[SimulationRow]) -> float:
    return sum(r.entries for r in rows) / len(rows) if rows else 0.0
