"""Multi-run proof refinement methodologies.

Four ways of driving the saturation core across several runs:

* lemma adjunction — prove members of a lemma pool, adjoin what was
  proved as extra axioms, feed their step skeletons back as resonators,
  repeat, then make one purged run from the original axioms alone.
  Only the purged run's proof counts.
* cramming — given a donor proof of one goal, treat its deduced steps
  as pseudo-axioms and search for the remaining goals under a tight
  weight cap, then splice the runs into one proof of the whole
  conjunction.  Ideal result: donor length + one step per extra goal.
* step blocking — re-run the search once per deduced step of a
  reference proof with that step's lemma blocked, keeping the best
  outcome.  The reference wins ties, so the answer is never worse.
* sweeps — a Cartesian grid of parameter overrides, one run per cell.

A plan file bundles one methodology with its inputs so the command
line can drive it.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import product
from pathlib import Path

from .formulas import (
    NamedFormula,
    PARAM_DEFAULTS,
    ParseError,
    ProblemSpec,
    SpecError,
    coerce_param,
    load_problem,
    load_proof,
    document_to_proof,
    override_spec,
    param_text,
    parse_formula,
)
from .inference import ByAxiom, ByCd, FilterConfig
from .proofs import (
    Metrics,
    Proof,
    ProofStep,
    check_proof,
    proof_metrics,
    steps_as_resonators,
)
from .search import (
    Hint,
    SearchStats,
    StrategyConfig,
    ancestor_ids,
    saturate,
)
from .terms import canonicalize, weight

DEPENDENT = "dependent"
NO_PROOF = "no proof within budget"


@dataclass(frozen=True)
class RunReport:
    """One row of a campaign: what changed, what happened, how big."""

    run: int
    delta: str
    outcome: str
    proof: Proof | None = None
    metrics: Metrics | None = None
    stats: SearchStats | None = None


@dataclass(frozen=True)
class LemmaAdjunction:
    pool: tuple = ()            # Terms or NamedFormulas; bare terms get
    resonator_value: int = 2    # auto-names lemma1, lemma2, ...
    max_rounds: int = 5


@dataclass(frozen=True)
class Cram:
    donor: Proof
    goals: tuple[NamedFormula, ...] | None = None   # None: the base's goals
    max_weight: int | None = None


@dataclass(frozen=True)
class BlockSteps:
    reference: Proof
    run_budget: int | None = None       # None: the plan's global budget
    resonator_value: int = 2


@dataclass(frozen=True)
class Sweep:
    grid: dict[str, tuple] = field(default_factory=dict)


Mode = LemmaAdjunction | Cram | BlockSteps | Sweep


@dataclass(frozen=True)
class CampaignPlan:
    base: ProblemSpec
    mode: Mode
    budget: int = 1000      # given-clause budget per run


@dataclass(frozen=True)
class CampaignResult:
    reports: tuple[RunReport, ...]
    proof: Proof | None


def _clamped(spec: ProblemSpec, budget: int) -> ProblemSpec:
    limit = min(spec.strategy.max_given, budget)
    return replace(spec, strategy=replace(spec.strategy, max_given=limit))


def _first_goal_proof(result, goals) -> Proof | None:
    for goal in goals:
        if goal.name in result.proofs:
            return result.proofs[goal.name]
    return None


def _report(run, delta, result, proof) -> RunReport:
    metrics = proof_metrics(proof) if proof is not None else None
    return RunReport(run, delta, result.outcome, proof, metrics, result.stats)


# ---------------------------------------------------------------------------
# lemma adjunction

def _named_pool(pool) -> tuple[NamedFormula, ...]:
    named = []
    for k, item in enumerate(pool, start=1):
        if isinstance(item, NamedFormula):
            named.append(item)
        else:
            named.append(NamedFormula(f"lemma{k}", canonicalize(item)))
    return tuple(named)


def lemma_adjunction(base: ProblemSpec, pool, budget: int = 1000,
                     resonator_value: int = 2, max_rounds: int = 5
                     ) -> list[RunReport]:
    """Rounds of proving pool lemmas and adjoining them, then a purged
    run.  The purged run is the last report; its proof is the result.
    An empty pool degenerates to the purged run alone.
    """
    pool = _named_pool(pool)
    taken = {f.name for f in base.axioms} | {f.name for f in base.goals}
    for lemma in pool:
        if lemma.name in taken:
            raise SpecError(f"lemma name {lemma.name!r} collides with the base problem")
        taken.add(lemma.name)
    if max_rounds < 1:
        raise SpecError("max_rounds must be at least 1")

    adjoined: list[NamedFormula] = []
    remaining = list(pool)
    resonators: list = list(base.resonators)
    shapes = {r.shape for r in resonators}
    reports: list[RunReport] = []
    rounds = max_rounds if pool else 0
    for rnd in range(1, rounds + 1):
        spec = replace(base,
                       axioms=base.axioms + tuple(adjoined),
                       goals=base.goals + tuple(remaining),
                       resonators=tuple(resonators))
        result = saturate(_clamped(spec, budget), all_goals=True)
        suffix = "+" + ",".join(f.name for f in adjoined) if adjoined else ""
        proof = _first_goal_proof(result, base.goals)
        reports.append(_report(rnd, f"round={rnd}{suffix}", result, proof))
        newly = [f for f in remaining if f.name in result.proofs]
        for lemma in newly:
            adjoined.append(lemma)
            for resonator in steps_as_resonators(result.proofs[lemma.name],
                                                 resonator_value):
                if resonator.shape not in shapes:
                    shapes.add(resonator.shape)
                    resonators.append(resonator)
        remaining = [f for f in remaining if f.name not in result.proofs]
        if all(g.name in result.proofs for g in base.goals):
            break
        if not newly:
            break
    purged = replace(base, resonators=tuple(resonators))
    result = saturate(_clamped(purged, budget), all_goals=True)
    proof = _first_goal_proof(result, base.goals)
    reports.append(_report(len(reports) + 1, "purged", result, proof))
    return reports


# ---------------------------------------------------------------------------
# cramming

def cram(base: ProblemSpec, donor: Proof, budget: int = 1000,
         max_weight: int | None = None, goals=None) -> Proof | None:
    """Extend a donor proof of one goal into a proof of every goal, or
    None if the remaining goals stay out of reach.

    The default weight cap is the heaviest remaining goal: the search
    may only keep formulas no bigger than what it still has to prove.
    `goals` restates the conjunction; by default it is the base's goals.
    """
    proof, _ = _cram_impl(base, donor, budget, max_weight, goals)
    return proof


def _cram_impl(base, donor, budget, max_weight, goals=None):
    if goals is not None:
        base = replace(base, goals=tuple(goals))
    verdict = check_proof(donor, base)
    if not verdict:
        raise SpecError(f"donor proof does not check: {verdict.reason}")
    remaining = tuple(g for g in base.goals if g.name != donor.goal_name)
    if not remaining:
        return donor, None
    donor_cd = [s for s in donor.steps if isinstance(s.justification, ByCd)]
    pseudo = tuple(NamedFormula(f"donor{s.id}", s.term) for s in donor_cd)
    if max_weight is None:
        max_weight = max(weight(g.term) for g in remaining)
    hints = tuple(Hint(canonicalize(g.term)) for g in remaining)
    spec = replace(base,
                   axioms=base.axioms + pseudo,
                   goals=remaining,
                   hints=base.hints + hints,
                   filters=replace(base.filters, max_weight=max_weight),
                   strategy=replace(base.strategy, pick_given_ratio=-1,
                                    max_given=min(base.strategy.max_given,
                                                  budget)))
    result = saturate(spec, all_goals=True)
    if any(g.name not in result.hits for g in remaining):
        return None, result
    return _splice(base, donor, donor_cd, result), result


def _splice(base, donor, donor_cd, result) -> Proof:
    """Graft the crammed run's new deductions onto the donor steps.

    Clauses that echo a donor step or a shared axiom collapse onto the
    donor's numbering; everything else is renumbered after it.
    """
    archive = {c.id: c for c in result.clauses}
    needed: set[int] = set()
    for hit in result.hits.values():
        needed.update(ancestor_ids(archive, hit.clause_id))
    pseudo_ids = {f"donor{s.id}": s.id for s in donor_cd}
    axiom_ids = {s.justification.name: s.id for s in donor.steps
                 if isinstance(s.justification, ByAxiom)}
    mapping: dict[int, int] = {}
    extra: list[ProofStep] = []
    next_id = max(s.id for s in donor.steps) + 1
    for cid in sorted(needed):
        clause = archive[cid]
        just = clause.justification
        if isinstance(just, ByAxiom) and just.name in pseudo_ids:
            mapping[cid] = pseudo_ids[just.name]
        elif isinstance(just, ByAxiom) and just.name in axiom_ids:
            mapping[cid] = axiom_ids[just.name]
        else:
            if isinstance(just, ByCd):
                just = ByCd(mapping[just.major], mapping[just.minor])
            extra.append(ProofStep(next_id, clause.term, just))
            mapping[cid] = next_id
            next_id += 1
    last = max(result.hits.values(), key=lambda h: h.clause_id)
    spliced = Proof(donor.steps + tuple(extra), last.name, last.term)
    verdict = check_proof(spliced, base)
    if not verdict:
        raise SpecError(f"spliced proof does not check: {verdict.reason}")
    return spliced


# ---------------------------------------------------------------------------
# step blocking

def block_steps_loop(base: ProblemSpec, reference: Proof, budget: int = 1000,
                     resonator_value: int = 2) -> Proof:
    """Try the search once per deduced step of the reference with that
    step blocked; return the best proof found, never one worse than
    the reference."""
    best, _ = _block_runs(base, reference, budget, resonator_value)
    return best


def _block_runs(base, reference, budget, resonator_value):
    verdict = check_proof(reference, base)
    if not verdict:
        raise SpecError(f"reference proof does not check: {verdict.reason}")
    goal = next(g for g in base.goals if g.name == reference.goal_name)
    guides = steps_as_resonators(reference, resonator_value)
    best = reference
    best_key = _improvement_key(reference)
    reports: list[RunReport] = []
    if budget <= 0:
        return best, reports
    cd_steps = [s for s in reference.steps
                if isinstance(s.justification, ByCd)]
    for run, step in enumerate(cd_steps, start=1):
        spec = replace(base,
                       goals=(goal,),
                       resonators=base.resonators + guides,
                       filters=replace(base.filters,
                                       blocked_lemmas=base.filters.blocked_lemmas
                                       + (step.term,)))
        result = saturate(_clamped(spec, budget))
        proof = result.proofs.get(goal.name)
        if proof is not None and not check_proof(proof, base):
            proof = None            # guard: a bad extraction never wins
        reports.append(_report(run, f"block={step.id}", result, proof))
        if proof is not None and _improvement_key(proof) < best_key:
            best, best_key = proof, _improvement_key(proof)
    return best, reports


def _improvement_key(proof: Proof) -> tuple[int, int]:
    m = proof_metrics(proof)
    return (m.length, m.size)


# ---------------------------------------------------------------------------
# parameter sweeps

def sweep(base: ProblemSpec, grid: dict, budget: int = 1000
          ) -> list[RunReport]:
    """One run per cell of the parameter grid, reported best first.

    Keys are swept in sorted order, values in the order given.  Reports
    are sorted by (proved, length, size) with run order breaking ties,
    so the head of the list is the strongest setting.
    """
    if not grid:
        raise SpecError("sweep grid is empty")
    for key in grid:
        if key not in PARAM_DEFAULTS:
            raise SpecError(f"unknown parameter {key!r}")
        if not tuple(grid[key]):
            raise SpecError(f"parameter {key!r} has no values to sweep")
    keys = sorted(grid)
    reports: list[RunReport] = []
    for run, combo in enumerate(product(*(tuple(grid[k]) for k in keys)),
                                start=1):
        overrides = dict(zip(keys, combo))
        spec = _clamped(override_spec(base, overrides), budget)
        result = saturate(spec)
        delta = ",".join(f"{k}={param_text(v)}" for k, v in
                         sorted(overrides.items()))
        proof = _first_goal_proof(result, base.goals)
        reports.append(_report(run, delta, result, proof))
    big = 10 ** 9
    reports.sort(key=lambda r: (0, r.metrics.length, r.metrics.size)
                 if r.proof is not None else (1, big, big))
    return reports


# ---------------------------------------------------------------------------
# dependence screening

@dataclass(frozen=True)
class DependenceEntry:
    name: str
    outcome: str            # "dependent" or "no proof within budget"
    proof: Proof | None


def dependence(members, budget: int = 1000,
               filters: FilterConfig | None = None,
               ratio: int = 0) -> tuple[DependenceEntry, ...]:
    """For each member of a candidate system, try deriving it from the
    others.  A proof shows dependence; a miss only means the budget ran
    out, never independence.
    """
    members = tuple(members)
    if len(members) < 2:
        raise SpecError("dependence screening needs at least two members")
    entries = []
    for member in members:
        others = tuple(f for f in members if f.name != member.name)
        spec = ProblemSpec(
            name="dependence",
            axioms=others,
            goals=(member,),
            filters=filters if filters is not None else FilterConfig(),
            strategy=StrategyConfig(pick_given_ratio=ratio, max_given=budget))
        result = saturate(spec)
        proof = result.proofs.get(member.name)
        outcome = DEPENDENT if proof is not None else NO_PROOF
        entries.append(DependenceEntry(member.name, outcome, proof))
    return tuple(entries)


# ---------------------------------------------------------------------------
# plan files

def _grid_line(line: str, grid: dict, lineno: int) -> None:
    key, sep, values = line.partition("=")
    key = key.strip()
    if not sep:
        raise ParseError("expected 'key = v1, v2, ...' in grid", lineno)
    if key in grid:
        raise ParseError(f"duplicate grid key {key!r}", lineno)
    try:
        grid[key] = tuple(coerce_param(key, item)
                          for item in values.split(","))
    except ParseError as exc:
        raise ParseError(str(exc), lineno) from None


def parse_grid(text: str) -> dict[str, tuple]:
    """Parse a sweep grid: one ``key = v1, v2, ...`` line per swept
    parameter, "%" comments allowed."""
    grid: dict[str, tuple] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("%", 1)[0].strip()
        if line:
            _grid_line(line, grid, lineno)
    if not grid:
        raise ParseError("grid names no parameters")
    return grid


_MODES = ("adjoin", "cram", "block", "sweep")
_PLAN_KEYS = {
    "adjoin": {"mode", "budget", "value", "max_rounds", "pool"},
    "cram": {"mode", "budget", "max_weight", "donor"},
    "block": {"mode", "budget", "value", "reference"},
    "sweep": {"mode", "budget"},
}


def parse_plan(text: str, base: ProblemSpec, root=".") -> CampaignPlan:
    """Parse a campaign plan.  Assignments come first, then at most one
    of the ``lemmas:`` / ``grid:`` sections::

        mode = block
        budget = 500
        reference = proofs/short.prf

    Donor, reference, and pool paths resolve against ``root``.
    """
    root = Path(root)
    fields: dict[str, str] = {}
    lemmas: list[NamedFormula] = []
    grid: dict[str, tuple] = {}
    section = None
    signature: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        if line in ("lemmas:", "grid:"):
            if section is not None:
                raise ParseError("a plan holds at most one section", lineno)
            section = line[:-1]
            continue
        if section == "lemmas":
            name, sep, rest = line.partition(":")
            name = name.strip()
            if not sep or not name:
                raise ParseError("expected 'name: formula.' in lemmas",
                                 lineno)
            rest = rest.strip()
            if not rest.endswith("."):
                raise ParseError("formula must end with '.'", lineno)
            lemmas.append(NamedFormula(
                name, canonicalize(parse_formula(rest, signature,
                                                 line=lineno))))
            continue
        if section == "grid":
            _grid_line(line, grid, lineno)
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep:
            raise ParseError("expected 'key = value'", lineno)
        if key in fields:
            raise ParseError(f"duplicate plan key {key!r}", lineno)
        fields[key] = value.strip()

    mode_name = fields.get("mode")
    if mode_name not in _MODES:
        raise ParseError(f"plan mode must be one of {', '.join(_MODES)}")
    allowed = _PLAN_KEYS[mode_name]
    for key in fields:
        if key not in allowed:
            raise ParseError(f"key {key!r} does not apply to mode {mode_name}")
    if lemmas and mode_name != "adjoin":
        raise ParseError("a lemmas: section only applies to mode adjoin")
    if grid and mode_name != "sweep":
        raise ParseError("a grid: section only applies to mode sweep")

    def integer(key: str, default: int, floor: int) -> int:
        if key not in fields:
            return default
        try:
            value = int(fields[key])
        except ValueError:
            raise ParseError(f"{key} expects an integer") from None
        if value < floor:
            raise ParseError(f"{key} must be at least {floor}")
        return value

    def proof_for(key: str) -> Proof:
        if key not in fields:
            raise ParseError(f"mode {mode_name} requires '{key} = <path>'")
        doc = load_proof(root / fields[key])
        return document_to_proof(doc, base)

    budget = integer("budget", 1000, 1)
    if mode_name == "adjoin":
        pool = list(lemmas)
        if "pool" in fields:
            pool.extend(load_problem(root / fields["pool"]).goals)
        if not pool:
            raise ParseError("mode adjoin requires a lemmas: section or a pool file")
        mode: Mode = LemmaAdjunction(tuple(pool),
                                     resonator_value=integer("value", 2, 0),
                                     max_rounds=integer("max_rounds", 5, 1))
    elif mode_name == "cram":
        max_weight = integer("max_weight", 0, 1) if "max_weight" in fields \
            else None
        mode = Cram(proof_for("donor"), max_weight=max_weight)
    elif mode_name == "block":
        mode = BlockSteps(proof_for("reference"),
                          resonator_value=integer("value", 2, 0))
    else:
        if not grid:
            raise ParseError("mode sweep requires a grid: section")
        mode = Sweep(dict(grid))
    return CampaignPlan(base, mode, budget)


def load_plan(path, base: ProblemSpec) -> CampaignPlan:
    p = Path(path)
    return parse_plan(p.read_text(), base, root=p.parent)


def run_plan(plan: CampaignPlan) -> CampaignResult:
    """Execute a plan and bundle its reports with the winning proof."""
    base, mode = plan.base, plan.mode
    if plan.budget < 1:
        raise SpecError("campaign budget must be at least 1")
    if isinstance(mode, LemmaAdjunction):
        reports = lemma_adjunction(base, mode.pool, plan.budget,
                                   mode.resonator_value, mode.max_rounds)
        return CampaignResult(tuple(reports), reports[-1].proof)
    if isinstance(mode, Cram):
        proof, result = _cram_impl(base, mode.donor, plan.budget,
                                   mode.max_weight, mode.goals)
        if result is None:
            report = RunReport(1, "cram", "proof_found", proof,
                               proof_metrics(proof), None)
        else:
            outcome = "proof_found" if proof is not None else result.outcome
            metrics = proof_metrics(proof) if proof is not None else None
            report = RunReport(1, "cram", outcome, proof, metrics,
                               result.stats)
        return CampaignResult((report,), proof)
    if isinstance(mode, BlockSteps):
        budget = plan.budget if mode.run_budget is None else mode.run_budget
        best, reports = _block_runs(base, mode.reference, budget,
                                    mode.resonator_value)
        return CampaignResult(tuple(reports), best)
    reports = sweep(base, mode.grid, plan.budget)
    return CampaignResult(tuple(reports), reports[0].proof if reports else None)
