"""Given-clause saturation: set of support, selection strategies,
retention with subsumption, goal detection, and proof extraction.

The loop is fully deterministic.  Clauses are numbered in retention
order; pairing walks the usable list in ascending id with the given
clause tried as major first, then as minor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .inference import (
    ByAxiom,
    ByCd,
    Clause,
    REJECT_SUBSUMED,
    condensed_detachment,
    make_clause,
    matches_hint,
    passes_filters,
)
from .proofs import Proof, ProofStep
from .terms import (
    Application,
    Term,
    canonicalize,
    match,
    skeleton,
    substitute,
    variables,
    weight,
)

PROOF_FOUND = "proof_found"
SOS_EXHAUSTED = "sos_exhausted"
LIMIT_REACHED = "limit_reached"


class SpecError(ValueError):
    """A structurally invalid problem or campaign description."""


@dataclass(frozen=True)
class Resonator:
    """A formula shape whose rediscovery is prized.  Matching is exact
    skeleton equality; lower values select earlier."""

    shape: Term        # skeleton: variables collapsed to the * marker
    value: int


@dataclass(frozen=True)
class Hint:
    """A full formula whose (re)derivation is prized: matching
    conclusions (equal up to renaming) take top selection priority and,
    by default, exemption from the weight limit."""

    term: Term


@dataclass(frozen=True)
class StrategyConfig:
    """Given-clause selection and run budgets.

    pick_given_ratio -1 selects strictly first-in-first-out (breadth
    first); 0 selects purely by priority; r > 0 alternates r priority
    picks with one FIFO pick.
    """

    pick_given_ratio: int = 0
    max_given: int = 100000
    max_retained: int = 1000000


@dataclass
class SearchStats:
    axioms: int = 0
    generated: int = 0
    retained: int = 0
    given: int = 0
    back_subsumed: int = 0
    rejected: dict[str, int] = field(default_factory=dict)

    def reject(self, reason: str) -> None:
        self.rejected[reason] = self.rejected.get(reason, 0) + 1

    def total_rejected(self) -> int:
        return sum(self.rejected.values())


@dataclass(frozen=True)
class GoalHit:
    name: str
    term: Term          # grounded goal
    clause_id: int


@dataclass
class SearchState:
    """Mutable state of one saturation run.  sos and usable are
    disjoint; archive holds every clause ever retained (back-subsumed
    ones included) so proofs can always be extracted."""

    sos: dict[int, Clause] = field(default_factory=dict)
    usable: dict[int, Clause] = field(default_factory=dict)
    archive: dict[int, Clause] = field(default_factory=dict)
    keys: dict[int, tuple[int, int, int]] = field(default_factory=dict)
    goals: dict[str, Term] = field(default_factory=dict)
    hits: dict[str, GoalHit] = field(default_factory=dict)
    trace: list[str] = field(default_factory=list)
    stats: SearchStats = field(default_factory=SearchStats)
    selections: int = 0
    next_id: int = 1


@dataclass
class SearchResult:
    outcome: str                      # proof_found / sos_exhausted / limit_reached
    limit: str | None                 # which budget, when limit_reached
    proofs: dict[str, Proof]          # per proved goal
    hits: dict[str, GoalHit]
    stats: SearchStats
    trace: tuple[str, ...]
    clauses: tuple[Clause, ...]       # every clause ever retained
    active: tuple[Clause, ...]        # final sos + usable


def ground_goal(goal: Term) -> Term:
    """Replace each distinct goal variable with a fresh constant g1,
    g2, ... (identifiers outside the variable alphabet), in first
    occurrence order.  A clause proves the goal iff its term matches
    the grounded result."""
    goal = canonicalize(goal)
    mapping = {name: Application(f"g{k + 1}")
               for k, name in enumerate(variables(goal))}
    return substitute(goal, mapping)


def priority(clause: Clause, resonators: Iterable[Resonator],
             hints: Iterable[Hint]) -> tuple[int, int, int]:
    """Selection key, smaller first: (0, 0, id) for hint matches,
    (1, least matching resonator value, id) for skeleton matches,
    (2, weight, id) otherwise."""
    if matches_hint(clause.term, hints):
        return (0, 0, clause.id)
    shape = skeleton(clause.term)
    values = [r.value for r in resonators if r.shape == shape]
    if values:
        return (1, min(values), clause.id)
    return (2, clause.weight, clause.id)


def select_given(state: SearchState, strategy: StrategyConfig) -> Clause:
    """Pop the next given clause from sos into usable.

    With ratio r > 0, selections run r by priority then one by FIFO,
    repeating; -1 is pure FIFO and 0 pure priority.  FIFO means lowest
    id; priority means least key with ties by id.
    """
    r = strategy.pick_given_ratio
    state.selections += 1
    if r == -1:
        fifo = True
    elif r == 0:
        fifo = False
    else:
        fifo = state.selections % (r + 1) == 0
    if fifo:
        chosen = min(state.sos)
    else:
        chosen = min(state.sos, key=lambda cid: state.keys[cid])
    clause = state.sos.pop(chosen)
    state.usable[clause.id] = clause
    return clause


def _key_text(key: tuple[int, int, int]) -> str:
    return f"({key[0]},{key[1]},{key[2]})"


def _validate(spec) -> None:
    if not spec.axioms:
        raise SpecError("spec has no axioms")
    if not spec.goals:
        raise SpecError("spec has no goals")
    names = [f.name for f in spec.axioms] + [f.name for f in spec.goals]
    if len(names) != len(set(names)):
        raise SpecError("axiom and goal names must be unique")
    if spec.filters.max_weight < 1:
        raise SpecError("max_weight must be at least 1")
    if spec.strategy.pick_given_ratio < -1:
        raise SpecError("pick_given_ratio must be -1 or greater")


def _forward_subsumed(state: SearchState, term: Term, w: int) -> bool:
    for pool in (state.sos, state.usable):
        for clause in pool.values():
            if clause.weight <= w and match(clause.term, term) is not None:
                return True
    return False


def _back_subsume(state: SearchState, new: Clause) -> None:
    for pool in (state.sos, state.usable):
        victims = [cid for cid, clause in pool.items()
                   if cid != new.id and clause.weight >= new.weight
                   and match(new.term, clause.term) is not None
                   and match(clause.term, new.term) is None]
        for cid in victims:
            del pool[cid]
            state.keys.pop(cid, None)
            state.stats.back_subsumed += 1


def _check_goals(state: SearchState, clause: Clause, all_goals: bool) -> bool:
    """Record any new goal hits; return True when the stop condition is
    met (first hit by default, every goal with all_goals)."""
    for name, grounded in state.goals.items():
        if name in state.hits:
            continue
        if match(clause.term, grounded) is not None:
            state.hits[name] = GoalHit(name, grounded, clause.id)
            state.trace.append(f"goal {name} by {clause.id}")
            if not all_goals:
                return True
    return all_goals and len(state.hits) == len(state.goals)


def _retain(state: SearchState, term: Term, justification, spec) -> Clause:
    clause = make_clause(state.next_id, term, justification)
    state.next_id += 1
    state.sos[clause.id] = clause
    state.archive[clause.id] = clause
    state.keys[clause.id] = priority(clause, spec.resonators, spec.hints)
    state.trace.append(f"kept {clause.id} {_key_text(state.keys[clause.id])}")
    return clause


def saturate(spec, all_goals: bool = False) -> SearchResult:
    """Run the given-clause loop on a problem spec until a goal is hit
    (or all goals, with all_goals=True), the set of support empties, or
    a budget is exhausted.

    Axioms seed the set of support and bypass the retention filters;
    they are tested against the goals immediately.  Deduced conclusions
    face, in order: the filter chain, forward subsumption against
    retained clauses, then retention with back subsumption.
    """
    _validate(spec)
    state = SearchState()
    strategy = spec.strategy
    for named in spec.axioms:
        _retain(state, named.term, ByAxiom(named.name), spec)
        state.stats.axioms += 1
    for named in spec.goals:
        state.goals[named.name] = ground_goal(named.term)
    done = False
    for clause in list(state.sos.values()):
        if _check_goals(state, clause, all_goals):
            done = True
            break
    limit = None
    while not done:
        if not state.sos:
            break
        if state.stats.given >= strategy.max_given:
            limit = "max_given"
            break
        given = select_given(state, strategy)
        state.stats.given += 1
        state.trace.append(f"given {given.id}")
        for partner_id in sorted(state.usable):
            partner = state.usable.get(partner_id)
            if partner is None:      # removed by back subsumption mid-batch
                continue
            if partner_id == given.id:
                pairs = ((given, given),)
            else:
                pairs = ((given, partner), (partner, given))
            for major, minor in pairs:
                conclusion = condensed_detachment(major.term, minor.term,
                                                  spec.detachment_symbol)
                if conclusion is None:
                    continue
                state.stats.generated += 1
                rejection = passes_filters(conclusion, spec.filters, spec.hints)
                if rejection is not None:
                    state.stats.reject(rejection.reason)
                    state.trace.append(f"rejected {rejection.reason}")
                    continue
                if _forward_subsumed(state, conclusion, weight(conclusion)):
                    state.stats.reject(REJECT_SUBSUMED)
                    state.trace.append(f"rejected {REJECT_SUBSUMED}")
                    continue
                clause = _retain(state, conclusion,
                                 ByCd(major.id, minor.id), spec)
                state.stats.retained += 1
                _back_subsume(state, clause)
                if _check_goals(state, clause, all_goals):
                    done = True
                    break
                if state.stats.retained >= strategy.max_retained:
                    limit = "max_retained"
                    break
            if done or limit:
                break
        if limit:
            break
    if done:
        outcome = PROOF_FOUND
    elif limit:
        outcome = LIMIT_REACHED
    else:
        outcome = SOS_EXHAUSTED
    proofs = {name: extract_proof(state.archive, hit)
              for name, hit in state.hits.items()}
    active = tuple(state.archive[cid] for cid in sorted(
        set(state.sos) | set(state.usable)))
    return SearchResult(outcome=outcome, limit=limit, proofs=proofs,
                        hits=dict(state.hits), stats=state.stats,
                        trace=tuple(state.trace),
                        clauses=tuple(state.archive.values()),
                        active=active)


def extract_proof(archive, hit: GoalHit) -> Proof:
    """Ancestor closure of the hit clause, renumbered compactly from 1
    with parent references remapped."""
    if isinstance(archive, SearchState):
        archive = archive.archive
    return _proof_from_ancestors(archive, hit.clause_id, hit.name, hit.term)


def ancestor_ids(archive: Mapping[int, Clause], clause_id: int) -> list[int]:
    """Ids of the clause's ancestor closure (itself included), sorted
    ascending."""
    needed: set[int] = set()
    stack = [clause_id]
    while stack:
        cid = stack.pop()
        if cid in needed:
            continue
        needed.add(cid)
        just = archive[cid].justification
        if isinstance(just, ByCd):
            stack.append(just.major)
            stack.append(just.minor)
    return sorted(needed)


def _proof_from_ancestors(archive, clause_id, goal_name, goal_term) -> Proof:
    ordered = ancestor_ids(archive, clause_id)
    renumber = {old: k + 1 for k, old in enumerate(ordered)}
    steps = []
    for old in ordered:
        clause = archive[old]
        just = clause.justification
        if isinstance(just, ByCd):
            just = ByCd(renumber[just.major], renumber[just.minor])
        steps.append(ProofStep(renumber[old], clause.term, just))
    return Proof(tuple(steps), goal_name, goal_term)
