"""Proof objects, the independent proof checker, and the four proof
measures (length, richness, complexity, size).

check_proof recomputes every condensed-detachment step from its
parents; it never trusts search-time state, so a proof produced by any
route is verified the same way.
"""

from __future__ import annotations

from dataclasses import dataclass

from .inference import ByAxiom, ByCd, Justification, condensed_detachment
from .terms import Term, distinct_vars, is_variant, match, skeleton, weight


@dataclass(frozen=True)
class ProofStep:
    id: int
    term: Term
    justification: Justification


@dataclass(frozen=True)
class Proof:
    """A derivation ending in a step that matches the grounded goal."""

    steps: tuple[ProofStep, ...]
    goal_name: str
    goal_term: Term        # the grounded goal the final step matches


@dataclass(frozen=True)
class Metrics:
    """The four measures, taken over deduced (cd) steps only."""

    length: int        # number of cd steps
    richness: int      # max distinct variables in any cd step
    complexity: int    # max weight of any cd step
    size: int          # total weight of all cd steps


@dataclass(frozen=True)
class CheckResult:
    valid: bool
    step_id: int | None = None
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.valid


VALID = CheckResult(True)


def invalid(step_id: int, reason: str) -> CheckResult:
    return CheckResult(False, step_id, reason)


def check_proof(proof: Proof, spec) -> CheckResult:
    """Re-derive the proof from scratch against the spec.

    Verifies that every axiom step is a variant of a spec axiom of that
    name, that every cd step is a variant of the recomputed conclusion
    of its parents, and that the final step matches the grounded goal.
    Returns VALID or the first offending step with a reason: one of
    "bad axiom", "cd mismatch", "goal mismatch", "dangling parent",
    "bad step order".
    """
    from .search import ground_goal  # deferred: search imports this module

    axioms = {a.name: a.term for a in spec.axioms}
    goals = {g.name: g.term for g in spec.goals}
    seen: dict[int, Term] = {}
    previous = 0
    for step in proof.steps:
        if step.id <= previous:
            return invalid(step.id, "bad step order")
        previous = step.id
        just = step.justification
        if isinstance(just, ByAxiom):
            base = axioms.get(just.name)
            if base is None or not is_variant(step.term, base):
                return invalid(step.id, "bad axiom")
        else:
            if just.major not in seen or just.minor not in seen:
                return invalid(step.id, "dangling parent")
            expected = condensed_detachment(seen[just.major], seen[just.minor],
                                            spec.detachment_symbol)
            if expected is None or not is_variant(expected, step.term):
                return invalid(step.id, "cd mismatch")
        seen[step.id] = step.term
    if not proof.steps:
        return invalid(0, "goal mismatch")
    final = proof.steps[-1]
    goal = goals.get(proof.goal_name)
    if goal is None:
        return invalid(final.id, "goal mismatch")
    if match(final.term, ground_goal(goal)) is None:
        return invalid(final.id, "goal mismatch")
    return VALID


def metrics_of_steps(steps) -> Metrics:
    cd_terms = [s.term for s in steps if isinstance(s.justification, ByCd)]
    if not cd_terms:
        return Metrics(0, 0, 0, 0)
    weights = [weight(t) for t in cd_terms]
    return Metrics(length=len(cd_terms),
                   richness=max(distinct_vars(t) for t in cd_terms),
                   complexity=max(weights),
                   size=sum(weights))


def proof_metrics(proof: Proof) -> Metrics:
    """Measures over the proof's deduced steps; axiom steps contribute
    nothing.  A zero-step proof (goal matched by an axiom) measures
    (0, 0, 0, 0)."""
    return metrics_of_steps(proof.steps)


def steps_as_resonators(proof: Proof, value: int):
    """One resonator per distinct deduced-step skeleton, in first
    occurrence order, all at the given value."""
    from .search import Resonator  # deferred: search imports this module

    shapes: list[Term] = []
    for step in proof.steps:
        if not isinstance(step.justification, ByCd):
            continue
        shape = skeleton(step.term)
        if shape not in shapes:
            shapes.append(shape)
    return tuple(Resonator(shape, value) for shape in shapes)
