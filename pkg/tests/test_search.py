"""Given-clause saturation: selection, subsumption, budgets, goals."""

import re

import pytest

from cdkit.formulas import parse_formula, parse_problem
from cdkit.inference import ByAxiom, make_clause
from cdkit.proofs import check_proof
from cdkit.search import (
    GoalHit,
    Hint,
    LIMIT_REACHED,
    PROOF_FOUND,
    Resonator,
    SOS_EXHAUSTED,
    SearchState,
    SpecError,
    StrategyConfig,
    _back_subsume,
    ancestor_ids,
    ground_goal,
    priority,
    saturate,
    select_given,
)
from cdkit.terms import app, skeleton, var, weight

from conftest import to_oracle
import oracles

x, y, z = var("x"), var("y"), var("z")


def problem(text, name="t"):
    return parse_problem(text, name=name)


# ---------------------------------------------------------------------------
# the three-axiom sentential calculus run (session fixtures)

def test_reflexivity_run_outcome(luk3_result):
    assert luk3_result.outcome == PROOF_FOUND
    assert luk3_result.limit is None
    assert set(luk3_result.proofs) == {"refl"}


def test_reflexivity_proof_is_the_two_step_derivation(refl_proof):
    lines = [(s.id, str(s.justification.__class__.__name__), s.term)
             for s in refl_proof.steps]
    assert [s.id for s in refl_proof.steps] == [1, 2, 3, 4, 5]
    assert refl_proof.steps[3].term == \
        parse_formula("i(i(i(n(x),y),z),i(x,z))")
    assert refl_proof.steps[4].term == parse_formula("i(x,x)")
    cd_steps = [s for s in refl_proof.steps
                if s.justification.__class__.__name__ == "ByCd"]
    assert len(cd_steps) == 2


def test_no_single_step_derivation_exists(luk3_spec):
    """The two-step proof is optimal: breadth-first closure at depth 1
    never contains reflexivity."""
    axioms = [to_oracle(f.term) for f in luk3_spec.axioms]
    goal = to_oracle(luk3_spec.goals[0].term)
    assert not oracles.closure_derives(axioms, 1, goal)
    assert oracles.closure_derives(axioms, 2, goal)


def test_every_retained_clause_is_in_depth_closure(luk3_spec, luk3_result):
    """Soundness against the oracle: everything the loop retains is
    derivable in the oracle's breadth-first closure."""
    axioms = [to_oracle(f.term) for f in luk3_spec.axioms]
    levels = oracles.cd_closure(axioms, 3)
    pool = [t for level in levels for t in level]
    checked = 0
    for clause in luk3_result.clauses:
        if clause.justification.__class__.__name__ != "ByCd":
            continue
        checked += 1
        assert any(oracles.o_variant(to_oracle(clause.term), t)
                   for t in pool), clause
    assert checked == luk3_result.stats.retained


def test_stats_invariant(luk3_result):
    s = luk3_result.stats
    assert s.axioms == 3
    assert s.generated == s.retained + s.total_rejected()


def test_trace_vocabulary(luk3_result):
    shapes = (re.compile(r"given \d+$"),
              re.compile(r"kept \d+ \(\d+,\d+,\d+\)$"),
              re.compile(r"rejected (blocked|forbidden|too_many_vars|"
                         r"too_heavy|subsumed)$"),
              re.compile(r"goal [A-Za-z0-9_]+ by \d+$"))
    for line in luk3_result.trace:
        assert any(p.match(line) for p in shapes), line
    assert sum(1 for t in luk3_result.trace if t.startswith("given ")) == \
        luk3_result.stats.given


def test_active_clauses_form_subsumption_antichain(luk3_result):
    from cdkit.inference import subsumes
    active = luk3_result.active
    for a in active:
        for b in active:
            if a.id != b.id:
                assert not subsumes(a, b) or not subsumes(b, a)
                # stronger: no strict subsumption survives either way
                if subsumes(a, b):
                    assert subsumes(b, a)


def test_rerun_is_deterministic(luk3_spec, luk3_result):
    again = saturate(luk3_spec)
    assert again.trace == luk3_result.trace
    assert again.stats == luk3_result.stats
    assert again.proofs["refl"].steps == luk3_result.proofs["refl"].steps


# ---------------------------------------------------------------------------
# goal grounding and detection

def test_ground_goal_replaces_variables_with_fresh_constants():
    assert ground_goal(app("i", x, x)) == app("i", app("g1"), app("g1"))
    assert ground_goal(app("i", x, y)) == app("i", app("g1"), app("g2"))
    assert ground_goal(app("a")) == app("a")
    # grounding follows canonical variable order, not spelling
    assert ground_goal(app("i", z, z)) == app("i", app("g1"), app("g1"))


def test_goal_hit_accepts_more_general_conclusions():
    # a conclusion i(x,y) is more general than the goal i(x,x) and
    # therefore proves it
    spec = problem("axioms:\n  k: i(x,i(y,y)).\n  a: i(x,x).\n"
                   "goals:\n  g: i(y,y).\n")
    result = saturate(spec)
    assert result.outcome == PROOF_FOUND     # axiom a matches immediately
    assert result.proofs["g"].steps[-1].term == app("i", x, x)


def test_axiom_matching_goal_ends_before_any_given(luk3_spec):
    spec = problem("axioms:\n  a: i(x,x).\ngoals:\n  g: i(z,z).\n")
    result = saturate(spec)
    assert result.outcome == PROOF_FOUND
    assert result.stats.given == 0
    assert result.stats.generated == 0
    proof = result.proofs["g"]
    assert len(proof.steps) == 1
    assert check_proof(proof, spec).valid


def test_all_goals_collects_every_proof(luk3_spec):
    spec = problem(
        "axioms:\n"
        "  ax1: i(i(x,y),i(i(y,z),i(x,z))).\n"
        "  ax2: i(i(n(x),x),x).\n"
        "  ax3: i(x,i(n(x),y)).\n"
        "goals:\n"
        "  syl: i(i(i(n(x),y),z),i(x,z)).\n"
        "  refl: i(x,x).\n"
        "params:\n"
        "  max_weight = 16\n"
        "  max_given = 200\n")
    result = saturate(spec, all_goals=True)
    assert result.outcome == PROOF_FOUND
    assert set(result.proofs) == {"syl", "refl"}
    for name, proof in result.proofs.items():
        assert check_proof(proof, spec).valid, name


# ---------------------------------------------------------------------------
# budgets and outcomes

def test_sos_exhausts_when_nothing_detaches():
    spec = problem("axioms:\n  a: n(x).\ngoals:\n  g: i(x,x).\n")
    result = saturate(spec)
    assert result.outcome == SOS_EXHAUSTED
    assert result.limit is None
    assert result.stats.generated == 0


def test_max_given_limit(luk3_spec):
    from cdkit.formulas import override_spec
    tight = override_spec(luk3_spec, {"max_given": 1})
    result = saturate(tight)
    assert result.outcome == LIMIT_REACHED
    assert result.limit == "max_given"
    assert result.stats.given == 1


def test_max_retained_limit_preserves_stats_invariant(luk3_spec):
    from cdkit.formulas import override_spec
    tight = override_spec(luk3_spec, {"max_retained": 4})
    result = saturate(tight)
    assert result.outcome == LIMIT_REACHED
    assert result.limit == "max_retained"
    s = result.stats
    # deduced retentions hit the cap exactly (axioms are counted
    # separately), and the capping clause keeps the books balanced
    assert s.retained == 4
    assert s.generated == s.retained + s.total_rejected()


def test_axioms_bypass_retention_filters():
    # an axiom far over the weight limit still enters the search
    spec = problem("axioms:\n"
                   "  big: i(i(x,y),i(i(y,z),i(x,z))).\n"
                   "goals:\n  g: a.\n"
                   "params:\n  max_weight = 2\n  max_given = 10\n")
    result = saturate(spec)
    axiom_terms = [c.term for c in result.clauses
                   if c.justification.__class__.__name__ == "ByAxiom"]
    assert axiom_terms == [parse_formula("i(i(x,y),i(i(y,z),i(x,z)))")]
    # every deduction is over the limit, so nothing else is ever kept
    assert result.stats.retained == 0
    assert result.stats.rejected.get("too_heavy", 0) > 0


def test_validation_rejects_malformed_specs(luk3_spec):
    import dataclasses
    with pytest.raises(SpecError):
        saturate(dataclasses.replace(luk3_spec, axioms=()))
    with pytest.raises(SpecError):
        saturate(dataclasses.replace(luk3_spec, goals=()))
    clash = dataclasses.replace(
        luk3_spec, goals=(luk3_spec.axioms[0],))
    with pytest.raises(SpecError):
        saturate(clash)


# ---------------------------------------------------------------------------
# selection order

def seeded_state(weights):
    """A SearchState holding one clause per weight, ids 1.."""
    state = SearchState()
    for k, w in enumerate(weights, start=1):
        term = x
        for _ in range(w - 1):
            term = app("n", term)
        clause = make_clause(k, term, ByAxiom(f"c{k}"))
        assert clause.weight == w
        state.sos[clause.id] = clause
        state.keys[clause.id] = priority(clause, (), ())
    return state


def drain(state, ratio):
    strategy = StrategyConfig(pick_given_ratio=ratio)
    order = []
    while state.sos:
        order.append(select_given(state, strategy).id)
    return order


def test_pure_fifo_selects_by_id():
    assert drain(seeded_state([9, 1, 5, 7, 3]), -1) == [1, 2, 3, 4, 5]


def test_pure_priority_selects_by_weight_then_id():
    # weights: id1=9 id2=1 id3=5 id4=7 id5=3 -> 2,5,3,4,1
    assert drain(seeded_state([9, 1, 5, 7, 3]), 0) == [2, 5, 3, 4, 1]


def test_ratio_alternates_priority_with_fifo():
    # ratio 2: picks 1,2 by priority, pick 3 FIFO, picks 4,5 priority...
    assert drain(seeded_state([9, 1, 5, 7, 3]), 2) == [2, 5, 1, 3, 4]
    # ratio 1: priority, FIFO, priority, FIFO ...
    assert drain(seeded_state([9, 1, 5, 7, 3]), 1) == [2, 1, 5, 3, 4]


def test_priority_classes():
    bridge = parse_formula("i(i(i(n(x),y),z),i(x,z))")
    clause = make_clause(12, bridge, ByAxiom("b"))
    assert priority(clause, (), ()) == (2, 10, 12)
    reso = (Resonator(skeleton(bridge), 3),)
    assert priority(clause, reso, ()) == (1, 3, 12)
    # least matching resonator value wins
    reso2 = reso + (Resonator(skeleton(bridge), 1),)
    assert priority(clause, reso2, ()) == (1, 1, 12)
    hints = (Hint(bridge),)
    assert priority(clause, reso2, hints) == (0, 0, 12)
    # resonators match shape only, so variable identity is irrelevant
    other = make_clause(13, parse_formula("i(i(i(n(y),y),x),i(y,x))"),
                        ByAxiom("c"))
    assert priority(other, reso, ()) == (1, 3, 13)


def test_hints_pull_matching_deductions_forward(luk3_spec):
    import dataclasses
    bridge = parse_formula("i(i(i(n(x),y),z),i(x,z))")
    hinted = dataclasses.replace(luk3_spec, hints=(Hint(bridge),))
    result = saturate(hinted)
    assert result.outcome == PROOF_FOUND
    # the hinted shape is retained with top-priority class 0 ...
    kept = [line for line in result.trace if line.startswith("kept ")]
    hint_ids = [int(line.split()[1]) for line in kept if "(0,0," in line]
    assert hint_ids
    # ... and is selected as given before any heavier sibling
    bridge_id = hint_ids[0]
    given_ids = [int(line.split()[1]) for line in result.trace
                 if line.startswith("given ")]
    assert bridge_id in given_ids or \
        result.hits["refl"].clause_id >= bridge_id


# ---------------------------------------------------------------------------
# subsumption mechanics inside the loop

def test_forward_subsumption_rejects_instances(luk3_result):
    assert luk3_result.stats.rejected.get("subsumed", 0) >= 0
    # crafted: first retained clause generalizes later conclusions
    spec = problem("axioms:\n"
                   "  gen: i(x,i(y,x)).\n"
                   "  k2: i(z,i(i(a,b),z)).\n"
                   "goals:\n  g: c.\n"
                   "params:\n  max_given = 4\n")
    result = saturate(spec)
    assert result.stats.rejected.get("subsumed", 0) > 0


def test_back_subsumption_removes_strict_instances_only():
    state = SearchState()
    specific = make_clause(1, app("i", app("a"), app("a")), ByAxiom("s"))
    variant = make_clause(2, app("i", y, y), ByAxiom("v"))
    state.sos = {1: specific, 2: variant}
    state.keys = {1: priority(specific, (), ()), 2: priority(variant, (), ())}
    general = make_clause(3, app("i", x, x), ByAxiom("g"))
    state.sos[3] = general
    state.keys[3] = priority(general, (), ())
    _back_subsume(state, general)
    assert 1 not in state.sos            # strict instance: removed
    assert 2 in state.sos                # variant: kept
    assert 3 in state.sos                # never removes itself
    assert state.stats.back_subsumed == 1


# ---------------------------------------------------------------------------
# proof extraction

def test_extracted_proof_is_compactly_renumbered(luk3_result):
    proof = luk3_result.proofs["refl"]
    ids = [s.id for s in proof.steps]
    assert ids == list(range(1, len(ids) + 1))
    for step in proof.steps:
        just = step.justification
        if just.__class__.__name__ == "ByCd":
            assert just.major < step.id and just.minor < step.id


def test_ancestor_ids_walks_cd_parents():
    from cdkit.inference import ByCd
    archive = {
        1: make_clause(1, x, ByAxiom("a")),
        2: make_clause(2, y, ByAxiom("b")),
        3: make_clause(3, z, ByCd(1, 1)),
        4: make_clause(4, app("n", x), ByCd(3, 2)),
        5: make_clause(5, app("n", y), ByAxiom("c")),
    }
    assert ancestor_ids(archive, 4) == [1, 2, 3, 4]
    assert ancestor_ids(archive, 5) == [5]
