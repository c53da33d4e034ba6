"""Shared fixtures: the warmup problem, its known proof, and bridges
between package terms and the independent oracle's tuple terms."""

import random

import pytest

from cdkit.formulas import load_problem
from cdkit.search import saturate
from cdkit.terms import Application, Term, Variable

import oracles


def to_oracle(t: Term):
    """Package term -> oracle tuple term (variables are plain strings)."""
    if isinstance(t, Variable):
        return t.name
    return (t.symbol,) + tuple(to_oracle(a) for a in t.args)


def from_oracle(o) -> Term:
    if isinstance(o, str):
        return Variable(o)
    return Application(o[0], tuple(from_oracle(a) for a in o[1:]))


def random_term(rng: random.Random, depth: int = 3,
                var_names=("x", "y", "z")) -> Term:
    """A random term over the signature {i/2, n/1} plus one constant."""
    if depth == 0 or rng.random() < 0.35:
        if rng.random() < 0.85:
            return Variable(rng.choice(var_names))
        return Application("a")
    if rng.random() < 0.7:
        return Application("i", (random_term(rng, depth - 1, var_names),
                                 random_term(rng, depth - 1, var_names)))
    return Application("n", (random_term(rng, depth - 1, var_names),))


@pytest.fixture(scope="session")
def luk3_spec():
    import pathlib

    return load_problem(pathlib.Path(__file__).parent.parent
                        / "problems" / "luk3.p")


@pytest.fixture(scope="session")
def luk3_result(luk3_spec):
    return saturate(luk3_spec)


@pytest.fixture(scope="session")
def refl_proof(luk3_result):
    return luk3_result.proofs["refl"]
