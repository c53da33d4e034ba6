"""Immutable first-order terms with unification, matching, and the
symbol-count measures the search strategies key on.

An identifier names a variable iff its first character is one of
``u v w x y z``; anything else is a constant or function symbol.  So
``x`` and ``v7`` are variables while ``a``, ``n`` and ``g1`` are not.
Terms are frozen values with structural equality; every operation
returns a new term.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping

VARIABLE_LEADS = "uvwxyz"
SKELETON_MARK = "*"


def term_text(t: "Term") -> str:
    """Compact prefix rendering, e.g. ``i(i(x,y),z)``."""
    if isinstance(t, Variable):
        return t.name
    if not t.args:
        return t.symbol
    return f"{t.symbol}({','.join(term_text(a) for a in t.args)})"


@dataclass(frozen=True)
class Variable:
    name: str

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Application:
    symbol: str
    args: tuple["Term", ...] = ()

    def __repr__(self) -> str:
        return term_text(self)


Term = Variable | Application

# Substitutions map variable names to terms.  The ones produced by
# unify() and match() are idempotent and never bind a name to itself.
Substitution = dict[str, Term]


def var(name: str) -> Variable:
    return Variable(name)


def app(symbol: str, *args: Term) -> Application:
    return Application(symbol, tuple(args))


def is_variable_name(name: str) -> bool:
    return bool(name) and name[0] in VARIABLE_LEADS


def weight(t: Term) -> int:
    """Symbol count: one per variable occurrence plus one per
    function/constant symbol occurrence."""
    total = 0
    stack = [t]
    while stack:
        node = stack.pop()
        total += 1
        if isinstance(node, Application):
            stack.extend(node.args)
    return total


def variables(t: Term) -> tuple[str, ...]:
    """Variable names in first-occurrence, depth-first left-to-right
    order (the order canonical renaming assigns new names in)."""
    seen: list[str] = []
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Variable):
            if node.name not in seen:
                seen.append(node.name)
        else:
            stack.extend(reversed(node.args))
    return tuple(seen)


def distinct_vars(t: Term) -> int:
    return len(variables(t))


def subterms(t: Term) -> Iterator[Term]:
    stack = [t]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Application):
            stack.extend(reversed(node.args))


def substitute(t: Term, sub: Mapping[str, Term]) -> Term:
    """Simultaneous substitution (no capture chasing: images are not
    re-substituted)."""
    if isinstance(t, Variable):
        return sub.get(t.name, t)
    if not t.args:
        return t
    return Application(t.symbol, tuple(substitute(a, sub) for a in t.args))


_CANONICAL = "xyzuvw"


def canonical_name(index: int) -> str:
    return _CANONICAL[index] if index < 6 else f"v{index}"


def canonicalize(t: Term) -> Term:
    """Rename variables to x, y, z, u, v, w, v6, v7, ... in order of
    first occurrence.  Idempotent."""
    mapping = {name: Variable(canonical_name(k))
               for k, name in enumerate(variables(t))}
    return substitute(t, mapping)


def skeleton(t: Term) -> Term:
    """Replace every variable with the ``*`` marker, keeping the symbol
    structure.  The result contains no variables, so its weight equals
    the original's."""
    if isinstance(t, Variable):
        return Application(SKELETON_MARK)
    return Application(t.symbol, tuple(skeleton(a) for a in t.args))


def _walk(t: Term, sub: Substitution) -> Term:
    while isinstance(t, Variable) and t.name in sub:
        t = sub[t.name]
    return t


def _occurs(name: str, t: Term, sub: Substitution) -> bool:
    stack = [t]
    while stack:
        node = _walk(stack.pop(), sub)
        if isinstance(node, Variable):
            if node.name == name:
                return True
        else:
            stack.extend(node.args)
    return False


def _resolve(sub: Substitution) -> Substitution:
    # Fully apply the substitution to its own images.  Acyclic thanks
    # to the occurs check, so plain recursion terminates.
    def deep(t: Term) -> Term:
        if isinstance(t, Variable):
            return deep(sub[t.name]) if t.name in sub else t
        return Application(t.symbol, tuple(deep(a) for a in t.args))

    out: Substitution = {}
    for name, image in sub.items():
        image = deep(image)
        if not (isinstance(image, Variable) and image.name == name):
            out[name] = image
    return out


def unify(s: Term, t: Term) -> Substitution | None:
    """Most general unifier of s and t, or None.

    The result is idempotent, contains no self-bindings, and binds only
    variables occurring in the inputs.  Uses the occurs check, so
    unify(x, n(x)) fails.
    """
    sub: Substitution = {}
    todo = [(s, t)]
    while todo:
        a, b = todo.pop()
        a = _walk(a, sub)
        b = _walk(b, sub)
        if a == b:
            continue
        if isinstance(a, Variable):
            if _occurs(a.name, b, sub):
                return None
            sub[a.name] = b
        elif isinstance(b, Variable):
            if _occurs(b.name, a, sub):
                return None
            sub[b.name] = a
        else:
            if a.symbol != b.symbol or len(a.args) != len(b.args):
                return None
            todo.extend(zip(a.args, b.args))
    return _resolve(sub)


def match(pattern: Term, instance: Term) -> Substitution | None:
    """One-way matching: a substitution over the pattern's variables
    with substitute(pattern, sub) == instance, or None.  Variables of
    the instance are treated as constants."""
    sub: Substitution = {}
    todo = [(pattern, instance)]
    while todo:
        p, i = todo.pop()
        if isinstance(p, Variable):
            bound = sub.get(p.name)
            if bound is None:
                sub[p.name] = i
            elif bound != i:
                return None
        else:
            if isinstance(i, Variable) or p.symbol != i.symbol \
                    or len(p.args) != len(i.args):
                return None
            todo.extend(zip(p.args, i.args))
    # drop identity bindings recorded along the way
    return {name: image for name, image in sub.items()
            if not (isinstance(image, Variable) and image.name == name)}


def is_variant(s: Term, t: Term) -> bool:
    """True iff s and t are equal up to variable renaming (they match
    one another in both directions)."""
    return match(s, t) is not None and match(t, s) is not None


def contains_pattern(t: Term, pattern: Term) -> bool:
    """True iff any subterm of t is an instance of the pattern."""
    return any(match(pattern, node) is not None for node in subterms(t))


def _fresh_names(used: set[str]) -> Iterator[str]:
    k = 6
    while True:
        name = f"v{k}"
        if name not in used:
            yield name
        k += 1


def rename_apart(keep: Term, shift: Term) -> Term:
    """A variant of `shift` sharing no variable names with `keep`.
    Returns `shift` unchanged when there is no overlap."""
    avoid = set(variables(keep))
    names = variables(shift)
    if avoid.isdisjoint(names):
        return shift
    fresh = _fresh_names(avoid | set(names))
    return substitute(shift, {name: Variable(next(fresh)) for name in names})
