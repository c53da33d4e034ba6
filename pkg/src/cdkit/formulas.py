"""Problem, formula, and proof file syntax.

Formulas are prefix applications, e.g. ``i(i(x,y),z)``, with a small
infix table accepted on input and normalized away: binary ``v ^ + =``
and prefix ``~``.  ``=`` is an ordinary binary symbol here (measured,
never reasoned about).  A top-level predicate wrapper ``P(...)`` is
accepted and stripped; output never prints it.  ``%`` starts a comment.

Problem files are line oriented::

    axioms:
      ax1: i(i(x,y),i(i(y,z),i(x,z))).
    goals:
      refl: i(x,x).
    resonators:
      2: i(x,i(y,x)).
    hints:
      i(x,x).
    forbid:
      n(n(x)).
    block:
      i(x,i(y,x)).
    params:
      max_weight = 30

Sections appear in that relative order; only axioms and goals are
required.  Proof files carry a ``problem:`` header, ``param k=v``
echoes, numbered steps, and a final goal line; printing them is byte
deterministic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

from .inference import ByAxiom, ByCd, FilterConfig
from .proofs import Proof, ProofStep
from .search import Hint, Resonator, SpecError, StrategyConfig, ground_goal
from .terms import (
    Application,
    SKELETON_MARK,
    Term,
    Variable,
    canonicalize,
    is_variable_name,
    skeleton,
    term_text,
)


class ParseError(ValueError):
    """Malformed formula, problem, proof, or plan text."""

    def __init__(self, message: str, line: int | None = None,
                 column: int | None = None):
        if line is not None:
            where = f"line {line}" + ("" if column is None else f", column {column}")
            message = f"{where}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column


# SpecError lives beside the engine's spec validation in search and is
# re-exported here because file loading raises it too.

# ---------------------------------------------------------------------------
# formula text -> Term

_IDENT_RE = re.compile(r"[A-Za-z0-9_]+")
_NAME_RE = re.compile(r"[A-Za-z0-9_]+\Z")
_PUNCT = "(),.*~^+="
_INFIX = {"=": 10, "v": 20, "^": 20, "+": 20}


class _Tokens:
    def __init__(self, text: str, line: int = 1):
        self.items: list[tuple[str, str, int, int]] = []
        self._scan(text, line)
        self.pos = 0

    def _scan(self, text: str, line: int) -> None:
        col, i = 1, 0
        while i < len(text):
            ch = text[i]
            if ch == "\n":
                line += 1
                col = 1
                i += 1
            elif ch in " \t\r":
                col += 1
                i += 1
            elif ch == "%":
                while i < len(text) and text[i] != "\n":
                    i += 1
            elif ch in _PUNCT:
                self.items.append((ch, ch, line, col))
                col += 1
                i += 1
            else:
                m = _IDENT_RE.match(text, i)
                if not m:
                    raise ParseError(f"unexpected character {ch!r}", line, col)
                self.items.append(("ident", m.group(), line, col))
                col += len(m.group())
                i = m.end()
        self.items.append(("eof", "", line, col))

    def peek(self, ahead: int = 0):
        return self.items[min(self.pos + ahead, len(self.items) - 1)]

    def next(self):
        item = self.items[self.pos]
        if item[0] != "eof":
            self.pos += 1
        return item


class _FormulaParser:
    """Precedence-climbing parser over _Tokens, recording symbol
    arities in a shared signature table."""

    def __init__(self, tokens: _Tokens, signature: dict[str, int]):
        self.tokens = tokens
        self.signature = signature

    def expect(self, kind: str, what: str):
        item = self.tokens.next()
        if item[0] != kind:
            raise ParseError(f"expected {what}, found {item[1] or 'end of input'!r}",
                             item[2], item[3])
        return item

    def record(self, symbol: str, arity: int, line: int, col: int) -> None:
        if symbol == SKELETON_MARK:
            return
        known = self.signature.setdefault(symbol, arity)
        if known != arity:
            raise ParseError(
                f"symbol {symbol!r} used with arity {arity} but previously {known}",
                line, col)

    def expression(self, min_prec: int = 0) -> Term:
        left = self.primary()
        while True:
            kind, text, line, col = self.tokens.peek()
            if kind in ("=", "+", "^"):
                symbol = text
            elif kind == "ident" and text == "v":
                symbol = "v"
            else:
                break
            prec = _INFIX[symbol]
            if prec < min_prec:
                break
            self.tokens.next()
            right = self.expression(prec + 1)
            self.record(symbol, 2, line, col)
            left = Application(symbol, (left, right))
        return left

    def primary(self) -> Term:
        kind, text, line, col = self.tokens.next()
        if kind == "~":
            arg = self.primary()
            self.record("~", 1, line, col)
            return Application("~", (arg,))
        if kind == "(":
            inner = self.expression(0)
            self.expect(")", "')'")
            return inner
        if kind == "*":
            return Application(SKELETON_MARK)
        if kind in ("=", "+", "^") and self.tokens.peek()[0] == "(":
            args = self.arguments()
            if len(args) != 2:
                raise ParseError(f"{text!r} takes 2 arguments, got {len(args)}",
                                 line, col)
            self.record(text, 2, line, col)
            return Application(text, args)
        if kind == "ident":
            if self.tokens.peek()[0] == "(":
                args = self.arguments()
                self.record(text, len(args), line, col)
                return Application(text, args)
            if is_variable_name(text):
                return Variable(text)
            self.record(text, 0, line, col)
            return Application(text)
        raise ParseError(f"expected a formula, found {text or 'end of input'!r}",
                         line, col)

    def arguments(self) -> tuple[Term, ...]:
        self.expect("(", "'('")
        args = [self.expression(0)]
        while self.tokens.peek()[0] == ",":
            self.tokens.next()
            args.append(self.expression(0))
        self.expect(")", "')' or ','")
        return tuple(args)


def parse_formula(text: str, signature: dict[str, int] | None = None,
                  line: int = 1) -> Term:
    """Parse one formula; an optional trailing period is consumed.

    `signature` accumulates symbol arities across calls so a whole
    problem can be checked for consistency; symbols must keep one arity
    throughout.
    """
    sig = {} if signature is None else signature
    tokens = _Tokens(text, line)
    parser = _FormulaParser(tokens, sig)
    term = parser.expression(0)
    if tokens.peek()[0] == ".":
        tokens.next()
    parser.expect("eof", "end of formula")
    if isinstance(term, Application) and term.symbol == "P" \
            and len(term.args) == 1:
        term = term.args[0]     # predicate wrapper is cosmetic
    return term


def print_formula(t: Term) -> str:
    """Canonical prefix text: f(a,b), no whitespace, no wrapper.
    parse_formula(print_formula(t)) == t."""
    return term_text(t)


# ---------------------------------------------------------------------------
# problem files

@dataclass(frozen=True)
class NamedFormula:
    name: str
    term: Term


@dataclass(frozen=True)
class ProblemSpec:
    """Everything a saturation run needs: the axioms and goals plus the
    full strategy surface."""

    name: str
    axioms: tuple[NamedFormula, ...]
    goals: tuple[NamedFormula, ...]
    filters: FilterConfig
    strategy: StrategyConfig
    resonators: tuple[Resonator, ...] = ()
    hints: tuple[Hint, ...] = ()
    detachment_symbol: str = "i"


PARAM_DEFAULTS: dict[str, object] = {
    "max_weight": 30,
    "max_distinct_vars": None,
    "pick_given_ratio": 0,
    "max_given": 100000,
    "max_retained": 1000000,
    "detachment_symbol": "i",
    "hint_exempt_max_weight": True,
}

_SECTIONS = ("axioms", "goals", "resonators", "hints", "forbid", "block",
             "params")


def coerce_param(key: str, text: str):
    """Parse a parameter value from its file or command-line spelling,
    validating range."""
    if key not in PARAM_DEFAULTS:
        raise ParseError(f"unknown parameter {key!r}")
    text = text.strip()
    if key == "detachment_symbol":
        if not _NAME_RE.match(text) or is_variable_name(text):
            raise ParseError(f"bad detachment symbol {text!r}")
        return text
    if key == "hint_exempt_max_weight":
        if text not in ("true", "false"):
            raise ParseError(f"{key} must be true or false, got {text!r}")
        return text == "true"
    if key == "max_distinct_vars" and text == "none":
        return None
    try:
        value = int(text)
    except ValueError:
        raise ParseError(f"{key} expects an integer, got {text!r}") from None
    floor = {"max_weight": 1, "pick_given_ratio": -1, "max_given": 0,
             "max_retained": 1, "max_distinct_vars": 0}[key]
    if value < floor:
        raise ParseError(f"{key} must be at least {floor}, got {value}")
    return value


def _build_spec(name, axioms, goals, resonators, hints, forbid, block,
                params) -> ProblemSpec:
    merged = dict(PARAM_DEFAULTS)
    merged.update(params)
    filters = FilterConfig(
        max_weight=merged["max_weight"],
        max_distinct_vars=merged["max_distinct_vars"],
        forbidden_patterns=tuple(forbid),
        blocked_lemmas=tuple(block),
        hint_exempt_max_weight=merged["hint_exempt_max_weight"])
    strategy = StrategyConfig(
        pick_given_ratio=merged["pick_given_ratio"],
        max_given=merged["max_given"],
        max_retained=merged["max_retained"])
    return ProblemSpec(name=name, axioms=tuple(axioms), goals=tuple(goals),
                       filters=filters, strategy=strategy,
                       resonators=tuple(resonators), hints=tuple(hints),
                       detachment_symbol=merged["detachment_symbol"])


def parse_problem(text: str, name: str = "problem") -> ProblemSpec:
    """Parse a problem file into a ProblemSpec with defaults filled in.

    Requires at least one axiom and one goal, unique names, sections in
    order, and consistent symbol arities across the whole file.
    """
    signature: dict[str, int] = {}
    axioms: list[NamedFormula] = []
    goals: list[NamedFormula] = []
    resonators: list[Resonator] = []
    hints: list[Hint] = []
    forbid: list[Term] = []
    block: list[Term] = []
    params: dict[str, object] = {}
    section = None
    section_index = -1

    def formula(fragment: str, lineno: int) -> Term:
        fragment = fragment.strip()
        if not fragment.endswith("."):
            raise ParseError("formula must end with '.'", lineno)
        return parse_formula(fragment, signature, line=lineno)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        if line.endswith(":") and line[:-1].strip() in _SECTIONS:
            header = line[:-1].strip()
            idx = _SECTIONS.index(header)
            if idx <= section_index:
                raise ParseError(f"section {header!r} out of order or repeated",
                                 lineno)
            section_index = idx
            section = header
            continue
        if section is None:
            raise ParseError("expected a section header such as 'axioms:'",
                             lineno)
        if section in ("axioms", "goals"):
            nm, sep, rest = line.partition(":")
            nm = nm.strip()
            if not sep or not _NAME_RE.match(nm):
                raise ParseError(f"expected 'name: formula.' in {section}",
                                 lineno)
            entry = NamedFormula(nm, formula(rest, lineno))
            (axioms if section == "axioms" else goals).append(entry)
        elif section == "resonators":
            val, sep, rest = line.partition(":")
            if not sep:
                raise ParseError("expected 'value: formula.'", lineno)
            try:
                value = int(val.strip())
            except ValueError:
                raise ParseError(f"bad resonator value {val.strip()!r}",
                                 lineno) from None
            if value < 0:
                raise ParseError("resonator value must be non-negative", lineno)
            resonators.append(Resonator(skeleton(formula(rest, lineno)), value))
        elif section == "hints":
            hints.append(Hint(canonicalize(formula(line, lineno))))
        elif section == "forbid":
            forbid.append(formula(line, lineno))
        elif section == "block":
            block.append(formula(line, lineno))
        else:   # params
            key, sep, value = line.partition("=")
            if not sep:
                raise ParseError("expected 'key = value'", lineno)
            key = key.strip()
            if key not in PARAM_DEFAULTS:
                raise ParseError(f"unknown parameter {key!r}", lineno)
            if key in params:
                raise ParseError(f"duplicate parameter {key!r}", lineno)
            try:
                params[key] = coerce_param(key, value)
            except ParseError as exc:
                raise ParseError(str(exc), lineno) from None
    if not axioms:
        raise ParseError("missing axiom: at least one is required")
    if not goals:
        raise ParseError("missing goal: at least one is required")
    names = [f.name for f in axioms] + [f.name for f in goals]
    dupes = {n for n in names if names.count(n) > 1}
    if dupes:
        raise ParseError(f"duplicate name {sorted(dupes)[0]!r}")
    return _build_spec(name, axioms, goals, resonators, hints, forbid, block,
                       params)


def load_problem(path) -> ProblemSpec:
    from pathlib import Path

    p = Path(path)
    return parse_problem(p.read_text(), name=p.stem)


def override_spec(spec: ProblemSpec, overrides) -> ProblemSpec:
    """A copy of the spec with parameter overrides applied.  Keys must
    be known parameter names, values already coerced."""
    filters = spec.filters
    strategy = spec.strategy
    symbol = spec.detachment_symbol
    for key, value in overrides.items():
        if key not in PARAM_DEFAULTS:
            raise SpecError(f"unknown parameter {key!r}")
        if key in ("max_weight", "max_distinct_vars", "hint_exempt_max_weight"):
            filters = replace(filters, **{key: value})
        elif key == "detachment_symbol":
            symbol = value
        else:
            strategy = replace(strategy, **{key: value})
    return replace(spec, filters=filters, strategy=strategy,
                   detachment_symbol=symbol)


def param_text(value) -> str:
    """File and report spelling of a parameter value."""
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def spec_params(spec: ProblemSpec) -> tuple[tuple[str, str], ...]:
    """The effective parameters of a spec as printable (key, value)
    pairs in canonical order — the proof header echo."""
    values = {
        "max_weight": spec.filters.max_weight,
        "max_distinct_vars": spec.filters.max_distinct_vars,
        "pick_given_ratio": spec.strategy.pick_given_ratio,
        "max_given": spec.strategy.max_given,
        "max_retained": spec.strategy.max_retained,
        "detachment_symbol": spec.detachment_symbol,
        "hint_exempt_max_weight": spec.filters.hint_exempt_max_weight,
    }
    return tuple((key, param_text(values[key])) for key in PARAM_DEFAULTS)


# ---------------------------------------------------------------------------
# proof files

@dataclass(frozen=True)
class ProofDocument:
    """A proof file: header, steps, and the goal line."""

    problem: str
    params: tuple[tuple[str, str], ...]
    steps: tuple[ProofStep, ...]
    goal_id: int
    goal_name: str


_STEP_RE = re.compile(
    r"(\d+) \[(axiom|cd|goal) ([A-Za-z0-9_]+|\d+,\d+)\] (.+)\Z")


def parse_proof(text: str) -> ProofDocument:
    """Parse one proof document.  Step identifiers must strictly
    increase and cd parents must reference earlier steps."""
    problem = None
    params: list[tuple[str, str]] = []
    steps: list[ProofStep] = []
    goal: tuple[int, str] | None = None
    signature: dict[str, int] = {}
    seen: set[int] = set()
    previous = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        if goal is not None:
            raise ParseError("content after the goal line", lineno)
        if problem is None:
            if not line.startswith("problem:"):
                raise ParseError("expected 'problem: <name>' header", lineno)
            problem = line[len("problem:"):].strip()
            if not _NAME_RE.match(problem):
                raise ParseError(f"bad problem name {problem!r}", lineno)
            continue
        if line.startswith("param "):
            if steps:
                raise ParseError("param line after proof steps", lineno)
            key, sep, value = line[len("param "):].partition("=")
            if not sep:
                raise ParseError("expected 'param key=value'", lineno)
            params.append((key.strip(), value.strip()))
            continue
        m = _STEP_RE.match(line)
        if not m:
            raise ParseError("expected a numbered proof step", lineno)
        step_id = int(m.group(1))
        kind, ref, body = m.group(2), m.group(3), m.group(4)
        if step_id <= previous:
            raise ParseError(f"non-monotone step identifier {step_id}", lineno)
        previous = step_id
        if kind == "goal":
            if not _NAME_RE.match(ref):
                raise ParseError(f"bad goal name {ref!r}", lineno)
            if body != "matched.":
                raise ParseError("goal line must read '[goal <name>] matched.'",
                                 lineno)
            goal = (step_id, ref)
            continue
        if not body.endswith("."):
            raise ParseError("formula must end with '.'", lineno)
        term = parse_formula(body, signature, line=lineno)
        if kind == "axiom":
            if not _NAME_RE.match(ref) or "," in ref:
                raise ParseError(f"bad axiom name {ref!r}", lineno)
            justification = ByAxiom(ref)
        else:
            major_text, _, minor_text = ref.partition(",")
            try:
                major, minor = int(major_text), int(minor_text)
            except ValueError:
                raise ParseError(f"bad cd parents {ref!r}", lineno) from None
            if major not in seen or minor not in seen:
                raise ParseError(
                    f"dangling parent reference in step {step_id}", lineno)
            justification = ByCd(major, minor)
        steps.append(ProofStep(step_id, term, justification))
        seen.add(step_id)
    if problem is None:
        raise ParseError("missing 'problem:' header")
    if goal is None:
        raise ParseError("missing goal line")
    return ProofDocument(problem, tuple(params), tuple(steps),
                         goal_id=goal[0], goal_name=goal[1])


def _step_line(step: ProofStep) -> str:
    just = step.justification
    if isinstance(just, ByAxiom):
        middle = f"[axiom {just.name}]"
    else:
        middle = f"[cd {just.major},{just.minor}]"
    return f"{step.id} {middle} {print_formula(step.term)}."


def print_proof(doc: ProofDocument) -> str:
    """Byte-deterministic rendering; parse_proof inverts it."""
    lines = [f"problem: {doc.problem}"]
    lines.extend(f"param {key}={value}" for key, value in doc.params)
    lines.extend(_step_line(step) for step in doc.steps)
    lines.append(f"{doc.goal_id} [goal {doc.goal_name}] matched.")
    return "\n".join(lines) + "\n"


def load_proof(path) -> ProofDocument:
    from pathlib import Path

    return parse_proof(Path(path).read_text())


def document_to_proof(doc: ProofDocument, spec: ProblemSpec) -> Proof:
    """Attach a parsed document to a spec's goal, grounding it."""
    for goal in spec.goals:
        if goal.name == doc.goal_name:
            return Proof(doc.steps, doc.goal_name, ground_goal(goal.term))
    raise SpecError(f"proof names unknown goal {doc.goal_name!r}")


def proof_to_document(proof: Proof, problem_name: str,
                      params: tuple[tuple[str, str], ...] = ()
                      ) -> ProofDocument:
    goal_id = proof.steps[-1].id + 1 if proof.steps else 1
    return ProofDocument(problem_name, tuple(params), proof.steps,
                         goal_id=goal_id, goal_name=proof.goal_name)
