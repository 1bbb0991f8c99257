"""Shared random generators for the property tests."""

import random

from lammu.syntax import Abs, App, Mu, Term, Var
from lammu.typelang import (Arrow, Bottom, Inter, Top, TVar, TypeExpr, Union,
                            well_formed)

ATOMS = (TVar("A"), TVar("B"), TVar("C"), Top, Bottom)


def random_type(rng: random.Random, depth: int = 3) -> TypeExpr:
    """An arbitrary type tree; not necessarily well formed for any language."""
    if depth == 0 or rng.random() < 0.35:
        return rng.choice(ATOMS)
    r = rng.random()
    if r < 0.45:
        return Arrow(random_type(rng, depth - 1), random_type(rng, depth - 1))
    parts = tuple(random_type(rng, depth - 1)
                  for _ in range(rng.choice((0, 2, 2, 3))))
    return Inter(parts) if r < 0.72 else Union(parts)


def random_iu_type(rng: random.Random, depth: int = 3) -> TypeExpr:
    """Rejection-sample until the tree is in the intersection-union language."""
    while True:
        t = random_type(rng, depth)
        if well_formed(t, "iu"):
            return t


def random_term(rng: random.Random, depth: int = 4,
                term_vars: tuple[str, ...] = ("u", "v"),
                names: tuple[str, ...] = ()) -> Term:
    if depth == 0 or (rng.random() < 0.3 and term_vars):
        return Var(rng.choice(term_vars))
    r = rng.random()
    if r < 0.35:
        x = f"x{rng.randrange(8)}"
        return Abs(x, random_term(rng, depth - 1, term_vars + (x,), names))
    if r < 0.7:
        return App(random_term(rng, depth - 1, term_vars, names),
                   random_term(rng, depth - 1, term_vars, names))
    a = f"a{rng.randrange(8)}"
    b = rng.choice(names + (a, a))
    return Mu(a, b, random_term(rng, depth - 1, term_vars, names + (a,)))


def random_pure_term(rng: random.Random, depth: int = 4,
                     term_vars: tuple[str, ...] = ("u", "v")) -> Term:
    """A random term with no control structures."""
    if depth == 0 or (rng.random() < 0.3 and term_vars):
        return Var(rng.choice(term_vars))
    if rng.random() < 0.55:
        x = f"x{rng.randrange(8)}"
        return Abs(x, random_pure_term(rng, depth - 1, term_vars + (x,)))
    return App(random_pure_term(rng, depth - 1, term_vars),
               random_pure_term(rng, depth - 1, term_vars))
