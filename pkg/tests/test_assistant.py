import random

import pytest

import oracle
import randkb
from conftest import make_state
from mxassist.assistant import (
    AlreadyInterpretedError,
    NotInterpretedError,
    Role,
    Session,
    SizeGuardError,
    Status,
    WrongRoleError,
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
from mxassist.engine import Fact, SolveState, StateInconsistentError, is_consistent
from mxassist.logic import Kind, PartialStructure
from mxassist.parsing import parse_kb


# -- propagation split ---------------------------------------------------------

def test_split_no_verification_needed(reg_kb):
    split = propagate_split(
        reg_kb, make_state(reg_kb, obs={"LowRent": False, "SocialHousing": False})
    )
    assert split.obs_safe == PartialStructure.empty(reg_kb.vocabulary)
    assert split.obs_to_verify == PartialStructure.empty(reg_kb.vocabulary)
    assert split.dec_consequence == PartialStructure(
        reg_kb.vocabulary, {"RegistrationType": "Other", "TaxRate": 10}
    )


def test_split_with_hypothesis_to_verify(reg_kb):
    split = propagate_split(reg_kb, make_state(reg_kb, dec={"TaxRate": 7}))
    assert split.obs_safe == PartialStructure.empty(reg_kb.vocabulary)
    assert split.obs_to_verify == PartialStructure(reg_kb.vocabulary, {"LowRent": True})
    assert split.dec_consequence == PartialStructure(
        reg_kb.vocabulary, {"RegistrationType": "Modest"}
    )


def test_split_with_safe_consequence(reg_kb):
    split = propagate_split(reg_kb, make_state(reg_kb, obs={"LowRent": False}))
    assert split.obs_safe == PartialStructure(reg_kb.vocabulary, {"SocialHousing": False})
    assert split.obs_to_verify == PartialStructure.empty(reg_kb.vocabulary)
    assert split.dec_consequence == PartialStructure(
        reg_kb.vocabulary, {"RegistrationType": "Other", "TaxRate": 10}
    )


def test_split_inconsistent_state_raises(reg_kb):
    with pytest.raises(StateInconsistentError):
        propagate_split(
            reg_kb,
            make_state(reg_kb, obs={"SocialHousing": False}, dec={"RegistrationType": "Social"}),
        )


def test_split_parts_disjoint_on_randoms():
    rng = random.Random(31)
    for _ in range(25):
        kb = randkb.random_kb(rng)
        state = randkb.random_state(rng, kb)
        split = propagate_split(kb, state)
        pieces = [state.obs, state.dec, split.obs_safe, split.obs_to_verify, split.dec_consequence]
        seen = set()
        for piece in pieces:
            names = set(piece.interpreted())
            assert not (names & seen)
            seen |= names
        for name in split.obs_safe.interpreted() + split.obs_to_verify.interpreted():
            assert kb.vocabulary[name].kind is Kind.ENV
        for name in split.dec_consequence.interpreted():
            assert kb.vocabulary[name].kind is Kind.DEC


def test_safe_facts_hold_in_every_admissible_environment():
    rng = random.Random(37)
    for _ in range(20):
        kb = randkb.random_kb(rng)
        state = randkb.random_state(rng, kb)
        split = propagate_split(kb, state)
        for env_total in oracle.expand_over(state.obs, kb.vocabulary.environmental):
            from mxassist.logic import evaluate

            if not all(evaluate(s.formula, env_total) for s in kb.tenv):
                continue
            for name in split.obs_safe.interpreted():
                assert env_total.value(name) == split.obs_safe.value(name)


# -- definite / contingent -------------------------------------------------------

def test_definite_examples(reg_kb):
    ok, _ = check_definite(
        reg_kb, make_state(reg_kb, dec={"RegistrationType": "Other", "TaxRate": 10})
    )
    assert ok

    ok, counterexample = check_definite(
        reg_kb, make_state(reg_kb, dec={"RegistrationType": "Other"})
    )
    assert not ok
    assert counterexample.value("TaxRate") != 10

    ok, _ = check_definite(
        reg_kb,
        make_state(reg_kb, obs={"LowRent": False}, dec={"TaxRate": 10, "RegistrationType": "Other"}),
    )
    assert ok


def test_contingent_examples(reg_kb):
    ok, _ = check_contingent(reg_kb, make_state(reg_kb, dec={"RegistrationType": "Other"}))
    assert ok

    ok, counterexample = check_contingent(reg_kb, make_state(reg_kb, dec={"TaxRate": 7}))
    assert not ok
    assert counterexample.value("LowRent") is False


def test_verdict_definite_implies_contingent_on_randoms():
    rng = random.Random(41)
    for _ in range(30):
        kb = randkb.random_kb(rng)
        state = randkb.random_state(rng, kb)
        verdict = solution_verdict(kb, state)
        if verdict.definite:
            assert verdict.contingent


def test_checks_match_oracle_on_randoms():
    rng = random.Random(43)
    for _ in range(30):
        kb = randkb.random_kb(rng)
        state = randkb.random_state(rng, kb)
        assert check_definite(kb, state)[0] == oracle.definite_brute(kb, state)
        assert check_contingent(kb, state)[0] == oracle.contingent_brute(kb, state)


# -- minimal definite solutions ---------------------------------------------------

def test_minimal_definite_low_rent_false(reg_kb):
    state = make_state(reg_kb, obs={"LowRent": False})
    solutions = minimal_definite_solutions(reg_kb, state)
    assert solutions == [
        SolveState(
            PartialStructure(reg_kb.vocabulary, {"LowRent": False}),
            PartialStructure(reg_kb.vocabulary, {"RegistrationType": "Other", "TaxRate": 10}),
        )
    ]


def test_minimal_definite_fixed_point(reg_kb):
    state = make_state(reg_kb, dec={"RegistrationType": "Other", "TaxRate": 10})
    assert minimal_definite_solutions(reg_kb, state) == [state]


def test_minimal_definite_from_empty(reg_kb):
    state = SolveState.empty(reg_kb.vocabulary)
    solutions = minimal_definite_solutions(reg_kb, state)
    vocab = reg_kb.vocabulary
    expected_members = [
        make_state(reg_kb, dec={"RegistrationType": "Other", "TaxRate": 10}),
        make_state(reg_kb, obs={"LowRent": True}, dec={"RegistrationType": "Modest", "TaxRate": 7}),
        make_state(
            reg_kb,
            obs={"SocialHousing": True, "LicensedSeller": True},
            dec={"RegistrationType": "Social", "TaxRate": 1},
        ),
    ]
    for member in expected_members:
        assert member in solutions
    assert set(solutions) == set(oracle.minimal_definite_brute(reg_kb, state))


def test_minimal_definite_matches_oracle_on_randoms():
    rng = random.Random(47)
    for _ in range(12):
        kb = randkb.random_kb(rng, max_symbols=6)
        state = randkb.random_state(rng, kb)
        got = set(minimal_definite_solutions(kb, state))
        assert got == set(oracle.minimal_definite_brute(kb, state))


def test_size_guard(leg_kb):
    with pytest.raises(SizeGuardError):
        minimal_definite_solutions(leg_kb, SolveState.empty(leg_kb.vocabulary))
    with pytest.raises(SizeGuardError):
        relevant_exact(leg_kb, SolveState.empty(leg_kb.vocabulary))


# -- relevance ---------------------------------------------------------------------

def test_relevant_exact_examples(reg_kb):
    state = make_state(reg_kb, obs={"LowRent": False})
    assert relevant_exact(reg_kb, state) == {"LowRent", "TaxRate", "RegistrationType"}

    assert relevant_exact(reg_kb, SolveState.empty(reg_kb.vocabulary)) == set(
        reg_kb.vocabulary.names
    )

    definite = make_state(reg_kb, dec={"RegistrationType": "Other", "TaxRate": 10})
    assert relevant_exact(reg_kb, definite) == {"RegistrationType", "TaxRate"}


def test_relevant_approx_examples(reg_kb):
    state = make_state(reg_kb, obs={"LowRent": False})
    assert relevant_approx(reg_kb, state) == {
        "SocialHousing", "LowRent", "TaxRate", "RegistrationType",
    }
    assert relevant_approx(reg_kb, SolveState.empty(reg_kb.vocabulary)) == set(
        reg_kb.vocabulary.names
    )


def test_relevance_includes_state_symbols_on_randoms():
    rng = random.Random(53)
    for _ in range(20):
        kb = randkb.random_kb(rng)
        state = randkb.random_state(rng, kb)
        interpreted = set(state.combined().interpreted())
        assert interpreted <= relevant_exact(kb, state)
        assert interpreted <= relevant_approx(kb, state)


def test_exact_relevance_within_approx_on_randoms():
    rng = random.Random(59)
    for _ in range(25):
        kb = randkb.random_kb(rng, max_symbols=7)
        state = randkb.random_state(rng, kb)
        assert relevant_exact(kb, state) <= relevant_approx(kb, state)


GOAL_KB = """
vocabulary {
  env G : Bool goal
  env A : Bool
  dec D : Bool
}
theory environment { }
theory solution { D <=> A. }
"""


def test_goal_symbols_seed_approximate_relevance():
    kb = parse_kb(GOAL_KB)
    state = SolveState.empty(kb.vocabulary)
    assert "G" in relevant_approx(kb, state)
    assert "G" not in relevant_exact(kb, state)


DEFINITION_KB = """
vocabulary {
  env A : Bool
  env C : Bool
  dec D : Bool
  dec Q : { Yes, No }
}
theory environment { }
theory solution {
  define D <=> A | C.
  Q = Yes => D.
}
"""


def test_definition_symbols_excluded_until_defined_atom_is_relevant():
    kb = parse_kb(DEFINITION_KB)
    state = make_state_dec(kb, {"Q": "No"})
    # Q=No discharges the only plain sentence; the definition alone must not
    # drag A, C or D in.
    assert relevant_approx(kb, state) == {"Q"}


def test_definition_closure_pulls_in_definiens():
    kb = parse_kb(DEFINITION_KB)
    state = make_state_dec(kb, {"Q": "Yes"})
    # Q=Yes forces D, so D is propagated-relevant and its simplified
    # definition (A | C) joins the relevant set.
    assert relevant_approx(kb, state) == {"Q", "D", "A", "C"}


def make_state_dec(kb, dec):
    return SolveState(
        PartialStructure.empty(kb.vocabulary), PartialStructure(kb.vocabulary, dec)
    )


def test_propositions_one_and_two_on_randoms():
    rng = random.Random(61)
    for _ in range(25):
        kb = randkb.random_kb(rng, max_symbols=7)
        state = randkb.random_state(rng, kb)
        relevant = relevant_exact(kb, state)
        interpreted = set(state.combined().interpreted())
        if relevant <= interpreted:
            assert check_definite(kb, state)[0]
        env_relevant = {n for n in relevant if kb.vocabulary[n].kind is Kind.ENV}
        if env_relevant <= set(state.obs.interpreted()):
            assert check_contingent(kb, state)[0]


# -- sessions -------------------------------------------------------------------

def test_session_walkthrough(reg_kb):
    session = Session(reg_kb)
    out = session.assert_fact("RegistrationType", "Social", Role.DECISION)
    assert out.accepted

    out = session.assert_fact("SocialHousing", False, Role.OBSERVATION)
    assert not out.accepted
    assert out.hints == ((Fact("RegistrationType", "Social"),),)
    assert "SocialHousing" not in session.state.combined()

    with pytest.raises(AlreadyInterpretedError):
        session.assert_fact("RegistrationType", "Modest", Role.DECISION)

    session.retract("RegistrationType")
    assert "RegistrationType" not in session.state.combined()

    out = session.assert_fact("SocialHousing", False, Role.OBSERVATION)
    assert out.accepted
    assert session.state.obs.value("SocialHousing") is False


def test_session_wrong_role(reg_kb):
    session = Session(reg_kb)
    with pytest.raises(WrongRoleError):
        session.assert_fact("SocialHousing", False, Role.DECISION)
    with pytest.raises(WrongRoleError):
        session.assert_fact("TaxRate", 10, Role.OBSERVATION)


def test_session_value_out_of_domain(reg_kb):
    session = Session(reg_kb)
    with pytest.raises(ValueError):
        session.assert_fact("TaxRate", 99, Role.DECISION)


def test_blocked_decision_gets_no_hints(reg_kb):
    session = Session(reg_kb)
    assert session.assert_fact("LowRent", False, Role.OBSERVATION).accepted
    out = session.assert_fact("RegistrationType", "Modest", Role.DECISION)
    assert not out.accepted
    assert out.hints == ()
    assert "RegistrationType" not in session.state.combined()


def test_retract_requires_given_fact(reg_kb):
    session = Session(reg_kb)
    with pytest.raises(NotInterpretedError):
        session.retract("LowRent")
    # Propagated values are not directly retractable either.
    assert session.assert_fact("TaxRate", 7, Role.DECISION).accepted
    with pytest.raises(NotInterpretedError):
        session.retract("RegistrationType")


def test_session_replay(reg_kb):
    session = Session(reg_kb)
    session.assert_fact("SocialHousing", True, Role.OBSERVATION)
    session.assert_fact("LicensedSeller", True, Role.OBSERVATION)
    session.assert_fact("RegistrationType", "Social", Role.DECISION)
    session.retract("LicensedSeller")
    replayed = replay_events(reg_kb, session.history)
    assert replayed == session.state
    assert set(session.state.combined().interpreted()) == {
        "SocialHousing", "RegistrationType",
    }


# -- reports ---------------------------------------------------------------------

def test_report_decision_consequences_and_definite_banner(reg_kb):
    session = Session(reg_kb)
    session.assert_fact("LowRent", False, Role.OBSERVATION)
    session.assert_fact("SocialHousing", False, Role.OBSERVATION)
    report = session.report("approx")
    assert report.status_of("RegistrationType") is Status.DECISION_CONSEQUENCE
    assert report.status_of("TaxRate") is Status.DECISION_CONSEQUENCE
    assert report.status_of("LicensedSeller") is Status.IRRELEVANT
    assert report.definite
    assert report.contingent
    assert report.history_length == 2


def test_report_to_verify_blocks_definite(reg_kb):
    session = Session(reg_kb)
    session.assert_fact("TaxRate", 7, Role.DECISION)
    report = session.report("approx")
    assert report.status_of("LowRent") is Status.TO_VERIFY
    assert report.status_of("RegistrationType") is Status.DECISION_CONSEQUENCE
    assert not report.definite
    assert not report.contingent


def test_report_empty_session(reg_kb):
    report = Session(reg_kb).report("approx")
    assert all(entry.status is Status.RELEVANT_UNKNOWN for entry in report.symbols)
    assert not report.definite
    assert not report.contingent


def test_report_exact_mode_matches_truth(reg_kb):
    rng = random.Random(67)
    for _ in range(15):
        kb = randkb.random_kb(rng, max_symbols=7)
        state = randkb.random_state(rng, kb)
        report = build_report(kb, state, "exact")
        split = propagate_split(kb, state)
        committed = split.commit(state)
        assert report.definite == check_definite(kb, committed)[0]
        if report.contingent:
            assert check_contingent(kb, committed)[0]


def test_report_approx_banner_never_wrong(reg_kb):
    rng = random.Random(71)
    for _ in range(15):
        kb = randkb.random_kb(rng, max_symbols=7)
        state = randkb.random_state(rng, kb)
        approx = build_report(kb, state, "approx")
        split = propagate_split(kb, state)
        committed = split.commit(state)
        if approx.definite:
            assert check_definite(kb, committed)[0]
        if approx.contingent:
            assert check_contingent(kb, committed)[0]


UNSAT_KB = """
vocabulary {
  env A : Bool
  dec D : Bool
}
theory environment { A. ~A. }
theory solution { D. }
"""


def test_unsatisfiable_session(reg_kb):
    kb = parse_kb(UNSAT_KB)
    session = Session(kb)
    assert not session.satisfiable
    report = session.report("approx")
    assert not report.satisfiable
    assert not report.definite
    with pytest.raises(StateInconsistentError):
        session.assert_fact("A", True, Role.OBSERVATION)


def test_session_states_remain_consistent_under_random_walks(reg_kb):
    rng = random.Random(73)
    for _ in range(10):
        kb = randkb.random_kb(rng)
        session = Session(kb)
        vocab = kb.vocabulary
        for _ in range(12):
            interpreted = session.state.combined()
            if interpreted and rng.random() < 0.3:
                session.retract(rng.choice(interpreted.interpreted()))
            else:
                free = [s for s in vocab.symbols if s.name not in interpreted]
                if not free:
                    continue
                sym = rng.choice(free)
                role = Role.OBSERVATION if sym.kind is Kind.ENV else Role.DECISION
                session.assert_fact(sym.name, rng.choice(sym.domain.values()), role)
            assert is_consistent(kb, session.state)
        assert replay_events(kb, session.history) == session.state


def test_to_verify_facts_are_not_entailed_by_environment_theory():
    # A hypothesis only lands in obs_to_verify when the environment theory
    # alone cannot force it, so some admissible environment disagrees.
    rng = random.Random(79)
    checked = 0
    for _ in range(40):
        kb = randkb.random_kb(rng)
        state = randkb.random_state(rng, kb)
        split = propagate_split(kb, state)
        if not split.obs_to_verify.interpreted():
            continue
        safe_obs = state.obs.join(split.obs_safe)
        from mxassist.logic import evaluate

        env_models = [
            e
            for e in oracle.expand_over(safe_obs, kb.vocabulary.environmental)
            if all(evaluate(s.formula, e) for s in kb.tenv)
        ]
        for name in split.obs_to_verify.interpreted():
            hoped = split.obs_to_verify.value(name)
            assert any(e.value(name) != hoped for e in env_models)
            checked += 1
    assert checked >= 5


def test_observation_blocked_by_environment_theory_alone(reg_kb):
    # No decision is to blame, so there is nothing to hint at; the entry is
    # simply refused (an admissible environment cannot look like this).
    session = Session(reg_kb)
    session.assert_fact("SocialHousing", True, Role.OBSERVATION)
    out = session.assert_fact("LowRent", False, Role.OBSERVATION)
    assert not out.accepted
    assert out.hints == ()
    assert "LowRent" not in session.state.combined()
