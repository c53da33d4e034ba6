"""Command line driver.

Six commands: prove, check, metrics, shorten, cram, sweep.  Exit codes
are part of the contract: 0 success (prove succeeds only when every
goal was proved), 1 goal not reached or proof invalid, 2 usage, parse,
or file errors.  Commands compute everything before writing anything,
so a failing run never leaves half an output behind.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .campaign import (
    BlockSteps,
    CampaignPlan,
    Cram,
    Sweep,
    load_plan,
    parse_grid,
    run_plan,
)
from .formulas import (
    ParseError,
    ProblemSpec,
    SpecError,
    document_to_proof,
    load_problem,
    load_proof,
    parse_formula,
    coerce_param,
    override_spec,
    print_proof,
    proof_to_document,
    spec_params,
)
from .inference import REJECT_REASONS
from .proofs import check_proof, metrics_of_steps
from .report import render_report_figure, report_lines
from .search import saturate

_OVERRIDE_FLAGS = (
    ("max_weight", "--max-weight", "discard conclusions heavier than this"),
    ("pick_given_ratio", "--ratio",
     "FIFO/priority mix: -1 pure FIFO, 0 pure priority, r>0 one FIFO pick "
     "per r priority picks"),
    ("max_distinct_vars", "--max-vars",
     "discard conclusions with more distinct variables (or 'none')"),
    ("max_given", "--max-given", "stop after this many given clauses"),
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cdkit",
        description="Condensed detachment proof search and refinement.")
    sub = parser.add_subparsers(dest="command", required=True)

    prove = sub.add_parser("prove", help="search for proofs of a problem's goals")
    prove.add_argument("problem", help="problem file")
    for key, flag, help_text in _OVERRIDE_FLAGS:
        prove.add_argument(flag, dest=key, metavar="N", help=help_text)
    prove.add_argument("--forbid", action="append", default=[],
                       metavar="FORMULA",
                       help="also discard conclusions containing an instance "
                            "of this pattern (repeatable)")
    prove.add_argument("--block", action="append", default=[],
                       metavar="FORMULA",
                       help="also discard conclusions that are a variant of "
                            "this formula (repeatable)")
    prove.add_argument("--all-goals", action="store_true",
                       help="keep searching until every goal is proved")
    prove.add_argument("-o", "--output", metavar="PATH",
                       help="write the proof here; extra proved goals go to "
                            "PATH.<goal>")
    prove.add_argument("--trace", metavar="PATH",
                       help="write the search trace here")
    prove.add_argument("--stats", metavar="PATH",
                       help="write run statistics here")
    prove.add_argument("--kv", action="store_true",
                       help="statistics as one key=value line")
    prove.add_argument("-v", "--verbose", action="store_true",
                       help="echo the search trace to stderr")
    prove.add_argument("--seedless", action="store_true",
                       help="reserved; not yet available")
    prove.set_defaults(handler=_cmd_prove)

    check = sub.add_parser("check", help="validate a proof against a problem")
    check.add_argument("proof", help="proof file")
    check.add_argument("--against", required=True, metavar="PROBLEM",
                       help="problem file the proof must satisfy")
    check.set_defaults(handler=_cmd_check)

    metrics = sub.add_parser("metrics", help="measure a proof file")
    metrics.add_argument("proof", help="proof file")
    metrics.set_defaults(handler=_cmd_metrics)

    shorten = sub.add_parser("shorten",
                             help="refine a proof by blocking or cramming, "
                                  "or run a plan file")
    shorten.add_argument("problem", help="problem file")
    shorten.add_argument("--proof", metavar="PATH",
                         help="reference (block) or donor (cram) proof")
    shorten.add_argument("--mode", choices=("block", "cram"),
                         help="refinement mode for --proof")
    shorten.add_argument("--plan", metavar="PATH",
                         help="plan file instead of --proof/--mode "
                              "(covers adjoin and sweep too)")
    shorten.add_argument("--budget", metavar="N", default="1000",
                         help="given-clause budget per run (default 1000)")
    shorten.add_argument("--value", metavar="N", default="2",
                         help="resonator value for reference steps "
                              "(block; default 2)")
    shorten.add_argument("--max-weight", dest="max_weight", metavar="N",
                         help="weight cap for new conclusions (cram; "
                              "default: the heaviest remaining goal)")
    _campaign_outputs(shorten)
    shorten.set_defaults(handler=_cmd_shorten)

    cram = sub.add_parser("cram", help="extend a donor proof to every goal")
    cram.add_argument("problem", help="problem file")
    cram.add_argument("--proof", required=True, metavar="PATH",
                      help="donor proof file")
    cram.add_argument("--budget", metavar="N", default="1000",
                      help="given-clause budget (default 1000)")
    cram.add_argument("--max-weight", dest="max_weight", metavar="N",
                      help="weight cap for new conclusions (default: the "
                           "heaviest remaining goal)")
    _campaign_outputs(cram)
    cram.set_defaults(handler=_cmd_cram)

    sweep = sub.add_parser("sweep", help="run a grid of parameter overrides")
    sweep.add_argument("problem", help="problem file")
    sweep.add_argument("--grid", required=True, metavar="PATH",
                       help="grid file: one 'key = v1, v2, ...' line per "
                            "swept parameter")
    sweep.add_argument("--budget", metavar="N", default="1000",
                       help="given-clause budget per run (default 1000)")
    _campaign_outputs(sweep)
    sweep.set_defaults(handler=_cmd_sweep)
    return parser


def _campaign_outputs(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("-o", "--output", metavar="PATH",
                     help="write the winning proof here")
    sub.add_argument("--report", metavar="PATH",
                     help="write the run report here instead of stdout")
    sub.add_argument("--plot", metavar="PATH",
                     help="also render the report as a bar chart image")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.handler(args)
    except ParseError as exc:
        print(f"cdkit: {exc}", file=sys.stderr)
        return 2
    except SpecError as exc:
        print(f"cdkit: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cdkit: {exc}", file=sys.stderr)
        return 2


# ---------------------------------------------------------------------------
# prove

def _effective_spec(args, spec: ProblemSpec) -> ProblemSpec:
    overrides = {}
    for key, _, _ in _OVERRIDE_FLAGS:
        raw = getattr(args, key)
        if raw is not None:
            overrides[key] = coerce_param(key, raw)
    if overrides:
        spec = override_spec(spec, overrides)
    if args.forbid or args.block:
        signature: dict[str, int] = {}
        forbid = tuple(parse_formula(f, signature) for f in args.forbid)
        block = tuple(parse_formula(f, signature) for f in args.block)
        spec = replace(spec, filters=replace(
            spec.filters,
            forbidden_patterns=spec.filters.forbidden_patterns + forbid,
            blocked_lemmas=spec.filters.blocked_lemmas + block))
    return spec


def _stats_text(result, kv: bool) -> str:
    stats = result.stats
    pairs = [("axioms", stats.axioms), ("generated", stats.generated),
             ("retained", stats.retained), ("given", stats.given),
             ("back_subsumed", stats.back_subsumed)]
    pairs += [(f"rejected_{reason}", stats.rejected.get(reason, 0))
              for reason in REJECT_REASONS]
    pairs.append(("outcome", result.outcome))
    if kv:
        return " ".join(f"{k}={v}" for k, v in pairs) + "\n"
    return "".join(f"{k} {v}\n" for k, v in pairs)


def _cmd_prove(args) -> int:
    if args.seedless:
        print("cdkit: --seedless is reserved and not yet available",
              file=sys.stderr)
        return 2
    spec = _effective_spec(args, load_problem(args.problem))
    result = saturate(spec, all_goals=args.all_goals)

    params = spec_params(spec)
    documents = []          # (suffix, text) in goal order, proved only
    unproved = []
    for goal in spec.goals:
        proof = result.proofs.get(goal.name)
        if proof is None:
            unproved.append(goal.name)
            continue
        doc = proof_to_document(proof, spec.name, params)
        documents.append((goal.name, print_proof(doc)))
    trace_text = "".join(line + "\n" for line in result.trace)
    stats_text = _stats_text(result, args.kv)

    if args.verbose:
        sys.stderr.write(trace_text)
    if args.trace:
        Path(args.trace).write_text(trace_text)
    if args.stats:
        Path(args.stats).write_text(stats_text)
    if args.output:
        for k, (name, text) in enumerate(documents):
            path = args.output if k == 0 else f"{args.output}.{name}"
            Path(path).write_text(text)
    else:
        for _, text in documents:
            sys.stdout.write(text)
    if unproved:
        print(f"cdkit: unproved goals: {', '.join(unproved)} "
              f"({result.outcome})", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------
# check and metrics

def _cmd_check(args) -> int:
    doc = load_proof(args.proof)
    spec = load_problem(args.against)
    try:
        proof = document_to_proof(doc, spec)
    except SpecError as exc:
        print(f"invalid: {exc}")
        return 1
    verdict = check_proof(proof, spec)
    if verdict:
        print("valid")
        return 0
    if verdict.step_id is not None:
        print(f"invalid at step {verdict.step_id}: {verdict.reason}")
    else:
        print(f"invalid: {verdict.reason}")
    return 1


def _cmd_metrics(args) -> int:
    doc = load_proof(args.proof)
    m = metrics_of_steps(doc.steps)
    print(f"length={m.length} richness={m.richness} "
          f"complexity={m.complexity} size={m.size}")
    return 0


# ---------------------------------------------------------------------------
# campaigns

def _non_negative_int(flag: str, text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise ParseError(f"{flag} expects an integer, got {text!r}") from None
    if value < 0:
        raise ParseError(f"{flag} must be non-negative")
    return value


def _finish_campaign(args, base: ProblemSpec, result) -> int:
    text = report_lines(result.reports)
    proof_text = None
    if result.proof is not None:
        doc = proof_to_document(result.proof, base.name, spec_params(base))
        proof_text = print_proof(doc)

    if args.report:
        Path(args.report).write_text(text)
    else:
        sys.stdout.write(text)
    if args.output and proof_text is not None:
        Path(args.output).write_text(proof_text)
    if args.plot:
        render_report_figure(result.reports, args.plot, title=base.name)
    return 0 if result.proof is not None else 1


def _cmd_shorten(args) -> int:
    base = load_problem(args.problem)
    if args.plan is not None:
        if args.proof or args.mode:
            raise ParseError("--plan replaces --proof/--mode; give one or "
                             "the other")
        plan = load_plan(args.plan, base)
        return _finish_campaign(args, base, run_plan(plan))
    if args.proof is None or args.mode is None:
        raise ParseError("shorten needs --proof PATH with --mode block|cram "
                         "(or a --plan file)")
    budget = coerce_param("max_given", args.budget)
    reference = document_to_proof(load_proof(args.proof), base)
    if args.mode == "cram":
        max_weight = None
        if args.max_weight is not None:
            max_weight = coerce_param("max_weight", args.max_weight)
        mode: Cram | BlockSteps = Cram(reference, max_weight=max_weight)
    else:
        mode = BlockSteps(reference, resonator_value=_non_negative_int(
            "--value", args.value))
    plan = CampaignPlan(base, mode, budget)
    return _finish_campaign(args, base, run_plan(plan))


def _cmd_cram(args) -> int:
    base = load_problem(args.problem)
    donor = document_to_proof(load_proof(args.proof), base)
    budget = coerce_param("max_given", args.budget)
    max_weight = None
    if args.max_weight is not None:
        max_weight = coerce_param("max_weight", args.max_weight)
    plan = CampaignPlan(base, Cram(donor, max_weight=max_weight), budget)
    return _finish_campaign(args, base, run_plan(plan))


def _cmd_sweep(args) -> int:
    base = load_problem(args.problem)
    grid = parse_grid(Path(args.grid).read_text())
    budget = coerce_param("max_given", args.budget)
    plan = CampaignPlan(base, Sweep(grid), budget)
    return _finish_campaign(args, base, run_plan(plan))


if __name__ == "__main__":
    raise SystemExit(main())
