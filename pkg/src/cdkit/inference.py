"""Condensed detachment, unit subsumption, and the retention filters.

The only inference rule here is condensed detachment: from a major
premise i(alpha, beta) and a minor premise gamma, with sigma the most
general unifier of alpha and a renamed-apart copy of gamma, conclude
sigma applied to beta.  Conclusions are always canonicalized.
"""

from __future__ import annotations

from dataclasses import dataclass

from .terms import (
    Application,
    Term,
    canonicalize,
    contains_pattern,
    distinct_vars,
    is_variant,
    match,
    rename_apart,
    substitute,
    unify,
    weight,
)

DEFAULT_DETACHMENT_SYMBOL = "i"


@dataclass(frozen=True)
class ByAxiom:
    """Justification of an input clause, by axiom name."""
    name: str


@dataclass(frozen=True)
class ByCd:
    """Justification of a deduced clause: parent clause identifiers,
    major premise first."""
    major: int
    minor: int


Justification = ByAxiom | ByCd


@dataclass(frozen=True)
class Clause:
    """A retained unit formula with its cached measures.

    `id` is the retention number; `birth_order` records the global
    generation sequence at the time the clause was kept (equal to `id`
    for clauses retained in arrival order).
    """

    id: int
    term: Term            # canonical form
    justification: Justification
    weight: int
    vars: int
    birth_order: int


def make_clause(clause_id: int, term: Term, justification: Justification,
                birth_order: int | None = None) -> Clause:
    term = canonicalize(term)
    return Clause(clause_id, term, justification, weight(term),
                  distinct_vars(term),
                  clause_id if birth_order is None else birth_order)


def condensed_detachment(major: Term, minor: Term,
                         detachment_symbol: str = DEFAULT_DETACHMENT_SYMBOL,
                         ) -> Term | None:
    """The conclusion of condensed detachment, canonicalized, or None
    when the major is not a binary application of the detachment symbol
    or unification fails."""
    if not isinstance(major, Application) or major.symbol != detachment_symbol \
            or len(major.args) != 2:
        return None
    antecedent, consequent = major.args
    if isinstance(antecedent, Application) and isinstance(minor, Application) \
            and (antecedent.symbol != minor.symbol
                 or len(antecedent.args) != len(minor.args)):
        return None     # renaming preserves top symbols; unify must fail
    shifted = rename_apart(major, minor)
    sigma = unify(antecedent, shifted)
    if sigma is None:
        return None
    return canonicalize(substitute(consequent, sigma))


def subsumes(general: Clause, specific: Clause) -> bool:
    """Unit subsumption: the general clause's term matches (one-way)
    the specific clause's term."""
    return match(general.term, specific.term) is not None


# Rejection reasons, in the order the checks run.  "subsumed" is issued
# by the search loop rather than passes_filters but shares the
# vocabulary for reporting.
REJECT_BLOCKED = "blocked"
REJECT_FORBIDDEN = "forbidden"
REJECT_TOO_MANY_VARS = "too_many_vars"
REJECT_TOO_HEAVY = "too_heavy"
REJECT_SUBSUMED = "subsumed"
REJECT_REASONS = (REJECT_BLOCKED, REJECT_FORBIDDEN, REJECT_TOO_MANY_VARS,
                  REJECT_TOO_HEAVY, REJECT_SUBSUMED)


@dataclass(frozen=True)
class Rejection:
    reason: str
    detail: str = ""


@dataclass(frozen=True)
class FilterConfig:
    """Retention filters applied to deduced conclusions (never to input
    axioms)."""

    max_weight: int = 30
    max_distinct_vars: int | None = None      # None = unlimited
    forbidden_patterns: tuple[Term, ...] = ()
    blocked_lemmas: tuple[Term, ...] = ()
    hint_exempt_max_weight: bool = True


def matches_hint(t: Term, hints) -> bool:
    """A conclusion matches a hint when the two are equal up to
    variable renaming."""
    return any(is_variant(t, h.term) for h in hints)


def passes_filters(t: Term, filters: FilterConfig,
                   hints=()) -> Rejection | None:
    """None when t survives every retention filter, else the first
    rejection.  Check order is fixed: blocked, forbidden, variable
    count, weight."""
    for lemma in filters.blocked_lemmas:
        if is_variant(t, lemma):
            return Rejection(REJECT_BLOCKED)
    for pattern in filters.forbidden_patterns:
        if contains_pattern(t, pattern):
            return Rejection(REJECT_FORBIDDEN, f"contains {pattern!r}")
    if filters.max_distinct_vars is not None \
            and distinct_vars(t) > filters.max_distinct_vars:
        return Rejection(REJECT_TOO_MANY_VARS)
    if weight(t) > filters.max_weight:
        if filters.hint_exempt_max_weight and matches_hint(t, hints):
            return None
        return Rejection(REJECT_TOO_HEAVY)
    return None
