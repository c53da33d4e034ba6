"""Term layer: measurement, canonical forms, unification, matching."""

import random

from hypothesis import given, strategies as st

from cdkit.terms import (
    Application,
    Variable,
    app,
    canonical_name,
    canonicalize,
    contains_pattern,
    distinct_vars,
    is_variable_name,
    is_variant,
    match,
    rename_apart,
    skeleton,
    substitute,
    subterms,
    unify,
    var,
    variables,
    weight,
)

from conftest import from_oracle, random_term, to_oracle
import oracles

x, y, z, u = var("x"), var("y"), var("z"), var("u")


def terms_strategy():
    leaves = st.sampled_from([var("x"), var("y"), var("z"), app("a")])
    return st.recursive(
        leaves,
        lambda inner: st.one_of(
            st.tuples(inner, inner).map(lambda p: app("i", *p)),
            inner.map(lambda t: app("n", t))),
        max_leaves=12)


def test_variable_convention():
    for name in ("u", "v", "w", "x", "y", "z", "v6", "v7", "v16", "x1"):
        assert is_variable_name(name)
    for name in ("a", "b1", "n", "i", "e", "g1", "P", "D"):
        assert not is_variable_name(name)


def test_weight_examples():
    assert weight(x) == 1
    assert weight(app("i", x, x)) == 3
    assert weight(app("a")) == 1
    # each application node counts once, so i(n(x),y) weighs 4
    assert weight(app("i", app("n", x), y)) == 4


def test_variables_first_occurrence_left_to_right():
    t = app("i", app("i", y, x), app("n", z))
    assert variables(t) == ("y", "x", "z")
    assert distinct_vars(t) == 3
    assert distinct_vars(app("i", x, x)) == 1


def test_skeleton_collapses_variables():
    assert skeleton(app("i", x, app("i", y, x))) == \
        app("i", app("*"), app("i", app("*"), app("*")))
    assert skeleton(app("n", app("n", x))) == app("n", app("n", app("*")))
    assert skeleton(app("i", x, x)) == skeleton(app("i", y, z))


def test_canonical_name_sequence():
    assert [canonical_name(k) for k in range(8)] == \
        ["x", "y", "z", "u", "v", "w", "v6", "v7"]


def test_canonicalize_examples():
    b1 = Variable("b1")     # any name is legal at the term level
    assert canonicalize(app("i", b1, b1)) == app("i", x, x)
    assert canonicalize(app("i", var("q1"), app("i", var("r1"), var("q1")))) \
        == app("i", x, app("i", y, x))


def test_canonicalize_is_idempotent_and_variant():
    rng = random.Random(101)
    for _ in range(300):
        t = random_term(rng, depth=4)
        c = canonicalize(t)
        assert canonicalize(c) == c
        assert is_variant(t, c)
        # exact expected form: first-occurrence renaming onto the
        # canonical name sequence, computed with oracle machinery
        order = oracles.o_vars(to_oracle(t))
        wanted = oracles.o_subst(
            to_oracle(t),
            {name: canonical_name(k) for k, name in enumerate(order)})
        assert to_oracle(c) == wanted


def test_substitution_is_simultaneous():
    swap = {"x": y, "y": x}
    assert substitute(app("i", x, y), swap) == app("i", y, x)
    assert substitute(x, {}) == x
    assert substitute(app("i", x, x), {"x": app("i", y, z)}) == \
        app("i", app("i", y, z), app("i", y, z))


def test_unify_examples():
    assert unify(x, app("i", y, z)) == {"x": app("i", y, z)}
    assert unify(x, app("n", x)) is None
    assert unify(app("i", x, y), app("i", app("n", z), z)) == \
        {"x": app("n", z), "y": z}
    assert unify(app("i", x, x), app("n", y)) is None


def test_unify_produces_idempotent_unifier():
    rng = random.Random(102)
    hits = 0
    for _ in range(400):
        s = random_term(rng, depth=3)
        t = random_term(rng, depth=3)
        sigma = unify(s, t)
        against = oracles.o_unify(to_oracle(s), to_oracle(t))
        assert (sigma is None) == (against is None)
        if sigma is None:
            continue
        hits += 1
        left, right = substitute(s, sigma), substitute(t, sigma)
        assert left == right
        assert substitute(left, sigma) == left      # idempotent
        for name, bound in sigma.items():
            assert bound != Variable(name)
    assert hits > 40


@given(terms_strategy(), terms_strategy())
def test_unify_agrees_with_oracle(s, t):
    sigma = unify(s, t)
    against = oracles.o_unify(to_oracle(s), to_oracle(t))
    assert (sigma is None) == (against is None)
    if sigma is not None:
        ours = canonicalize(substitute(s, sigma))
        theirs = from_oracle(oracles.o_subst(to_oracle(s), against))
        assert is_variant(ours, theirs)


def test_match_examples():
    a = app("a")
    assert match(app("i", x, y), app("i", app("n", a), a)) == \
        {"x": app("n", a), "y": a}
    assert match(app("i", app("n", a), a), app("i", x, y)) is None
    assert match(x, x) == {}


def test_match_requires_consistent_bindings():
    # x must not silently bind to itself on one side and n(a) on the other
    assert match(app("i", x, x), app("i", x, app("n", app("a")))) is None
    assert match(app("i", x, x), app("i", y, y)) == {"x": y}


@given(terms_strategy())
def test_match_recovers_constructed_instances(pattern):
    grounding = {name: app("i", app("a"), var(name))
                 for name in variables(pattern)}
    instance = substitute(pattern, grounding)
    sigma = match(pattern, instance)
    assert sigma is not None
    assert substitute(pattern, sigma) == instance


def test_is_variant():
    assert is_variant(app("i", x, y), app("i", y, x))
    assert not is_variant(app("i", x, x), app("i", x, y))
    assert is_variant(app("i", x, x), app("i", z, z))


def test_contains_pattern():
    dn = app("n", app("n", z))
    assert contains_pattern(app("i", app("n", app("n", x)), y), dn)
    assert not contains_pattern(app("i", app("n", x), y), dn)
    a, b = app("a"), app("b")
    assert contains_pattern(app("i", app("i", a, a), b), app("i", z, z))


def test_subterms_preorder():
    t = app("i", x, app("n", y))
    assert tuple(subterms(t)) == (t, x, app("n", y), y)


def test_rename_apart():
    keep = app("i", x, y)
    assert rename_apart(keep, app("i", app("a"), app("b"))) == \
        app("i", app("a"), app("b"))
    shifted = rename_apart(keep, app("i", x, z))
    assert is_variant(shifted, app("i", x, z))
    assert not (set(variables(shifted)) & set(variables(keep)))


def test_weight_matches_oracle_on_random_terms():
    rng = random.Random(103)
    for _ in range(200):
        t = random_term(rng, depth=4)
        assert weight(t) == oracles.o_weight(to_oracle(t))
        assert distinct_vars(t) == len(oracles.o_vars(to_oracle(t)))
