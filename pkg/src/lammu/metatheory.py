"""Executable metatheory: typed-term generation and derivation transformations.

The suites exercise the two substitution lemmas, subject reduction and subject
expansion over randomly generated derivations.  Every case runs a constructive
transformation that rebuilds the derivation of the transformed term node by
node (these must always succeed), and a sampled bounded-search cross-check
(misses there only count against the search budget, not against the theory).

Generated derivations follow the convention that every binder is globally
fresh, so substitution never needs to rename on the fly and the rebuilt
derivations match the reduction output syntactically.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .iu import (Derivation, Judgment, SearchBudget, check_derivation, derive,
                 inter_elim, weaken)
from .reduction import (redexes, step, subst_structural, subst_term, subterm_at)
from .syntax import Abs, App, Mu, Term, Var, alpha_eq, free_term_vars
from .typelang import (Arrow, Bottom, Inter, TVar, Top, TypeExpr, Union,
                       canonicalize, inter_parts, is_strict, subtype,
                       type_equiv, union_parts)


class ConstructionMiss(Exception):
    """A derivation transformation hit a shape it cannot rebuild."""


# -- the type pool and base environments --------------------------------------

_F1, _F2 = TVar("F1"), TVar("F2")
_ARROW1 = Arrow(_F1, _F2)
_ARROW2 = Arrow(_F2, _F1)
_ARROW3 = canonicalize(Arrow(Inter((_F1, _F2)), _F1))
_UNION1 = canonicalize(Union((_F1, _F2)))
_UNION2 = canonicalize(Union((_F1, _ARROW1)))
_ARROW4 = canonicalize(Arrow(_F1, _UNION1))

STRICT_POOL = (_F1, _F2, _ARROW1, _ARROW2, _ARROW3, _ARROW4, _UNION1, _UNION2)
INTER_POOL = STRICT_POOL + (Top,
                            canonicalize(Inter((_F1, _F2))),
                            canonicalize(Inter((_F1, _ARROW1))))


def base_environments() -> tuple[dict[str, TypeExpr], dict[str, TypeExpr]]:
    """A left environment with a variable for every pool type (so every goal
    has a lookup fallback) and a right environment with a few names."""
    gamma: dict[str, TypeExpr] = {}
    for i, t in enumerate(STRICT_POOL, start=1):
        gamma[f"v{i}"] = t
    gamma["w1"] = canonicalize(Inter((_F1, _F2)))
    gamma["w2"] = canonicalize(Inter((_F1, _ARROW1)))
    delta = {"k1": _UNION1, "k2": _ARROW1, "k3": _F1}
    return gamma, delta


@dataclass
class GenConfig:
    max_fuel: int = 4
    redex_bias: float = 0.45
    attempts: int = 40


# -- small constructions ------------------------------------------------------

def top_typed(gamma: dict, term: Term, delta: dict) -> Derivation:
    """Any term gets the empty intersection."""
    return Derivation("InterI", Judgment(dict(gamma), term, Top, dict(delta)))


def var_typed(gamma: dict, ty: TypeExpr, delta: dict) -> Derivation | None:
    """A variable derivation at ``ty``, if some environment entry covers it."""
    want = inter_parts(ty) if isinstance(ty, Inter) else (ty,)
    for x, entry in gamma.items():
        comps = inter_parts(entry)
        if all(p in comps for p in want):
            j = Judgment(dict(gamma), Var(x), ty, dict(delta))
            if isinstance(ty, Inter):
                prems = tuple(
                    Derivation("InterE", Judgment(dict(gamma), Var(x), p, dict(delta)))
                    for p in ty.parts)
                return Derivation("InterI", j, prems)
            return Derivation("InterE", j)
    if ty == Top and gamma:
        return top_typed(gamma, Var(next(iter(gamma))), delta)
    return None


def project(d: Derivation, ty: TypeExpr) -> Derivation:
    """Narrow a derivation to the component ``ty`` of its conclusion."""
    have = d.conclusion.ty
    if have == ty:
        return d
    if isinstance(have, Inter) and ty in have.parts:
        return inter_elim(d, have.parts.index(ty))
    raise ConstructionMiss(f"cannot project {ty!r} out of {have!r}")


def _weaken_to(d: Derivation, gamma: dict, delta: dict) -> Derivation:
    return weaken(d, gamma, delta)


# -- generator ----------------------------------------------------------------

class Generator:
    """Builds random derivations over the fixed pool, goal first."""

    def __init__(self, rng: random.Random, config: GenConfig | None = None):
        self.rng = rng
        self.config = config or GenConfig()
        self.counter = 0

    def fresh_var(self) -> str:
        self.counter += 1
        return f"x{self.counter}"

    def fresh_name(self) -> str:
        self.counter += 1
        return f"n{self.counter}"

    def judgment(self, gamma: dict, delta: dict, goal: TypeExpr | None = None,
                 fuel: int | None = None) -> Derivation | None:
        goal = goal if goal is not None else self.rng.choice(INTER_POOL)
        fuel = fuel if fuel is not None else self.config.max_fuel
        return self.gen(dict(gamma), dict(delta), canonicalize(goal), fuel)

    def gen(self, gamma: dict, delta: dict, goal: TypeExpr,
            fuel: int) -> Derivation | None:
        if isinstance(goal, Inter):
            # all premises of an intersection introduction must type the same
            # term, so fall back to a variable that covers every component
            return var_typed(gamma, goal, delta)

        options = ["var"]
        if fuel > 0:
            options += ["mu_self", "mu_named"]
            if isinstance(goal, Arrow):
                options.append("abs")
            options.append("app")
            if self.rng.random() < self.config.redex_bias:
                options += ["beta_redex", "mu_redex", "renaming_redex"]
        self.rng.shuffle(options)
        for opt in options:
            d = getattr(self, "_gen_" + opt)(gamma, delta, goal, fuel)
            if d is not None:
                return d
        return None

    def _gen_var(self, gamma, delta, goal, fuel):
        candidates = [x for x, t in gamma.items() if goal in inter_parts(t)]
        if not candidates:
            return None
        x = self.rng.choice(candidates)
        return Derivation("InterE", Judgment(dict(gamma), Var(x), goal, dict(delta)))

    def _gen_abs(self, gamma, delta, goal, fuel):
        if not isinstance(goal, Arrow):
            return None
        x = self.fresh_var()
        p = self.gen({**gamma, x: goal.left}, delta, goal.right, fuel - 1)
        if p is None:
            return None
        return Derivation("ArrowI",
                          Judgment(dict(gamma), Abs(x, p.conclusion.term),
                                   goal, dict(delta)), (p,))

    def _gen_app(self, gamma, delta, goal, fuel):
        witness = self.rng.choice(INTER_POOL)
        fp = self.gen(gamma, delta, Arrow(witness, goal), fuel - 1)
        if fp is None:
            return None
        ap = self.gen(gamma, delta, witness, fuel - 1)
        if ap is None:
            return None
        term = App(fp.conclusion.term, ap.conclusion.term)
        return Derivation("ArrowE",
                          Judgment(dict(gamma), term, goal, dict(delta)), (fp, ap))

    def _mu_premise_types(self, target: TypeExpr) -> list[TypeExpr]:
        out = [t for t in union_parts(target) if t != Bottom]
        if target != Bottom:
            out.append(target)
        return out

    def _gen_mu_self(self, gamma, delta, goal, fuel):
        choices = self._mu_premise_types(goal)
        if not choices:
            return None
        a = self.fresh_name()
        t = self.rng.choice(choices)
        p = self.gen(gamma, {**delta, a: goal}, t, fuel - 1)
        if p is None:
            return None
        return Derivation("UnionE_self",
                          Judgment(dict(gamma), Mu(a, a, p.conclusion.term),
                                   goal, dict(delta)), (p,))

    def _gen_mu_named(self, gamma, delta, goal, fuel):
        if not delta:
            return None
        b = self.rng.choice(sorted(delta))
        choices = self._mu_premise_types(delta[b])
        if not choices:
            return None
        a = self.fresh_name()
        t = self.rng.choice(choices)
        p = self.gen(gamma, {**delta, a: goal}, t, fuel - 1)
        if p is None:
            return None
        return Derivation("UnionE_named",
                          Judgment(dict(gamma), Mu(a, b, p.conclusion.term),
                                   goal, dict(delta)), (p,))

    def _gen_beta_redex(self, gamma, delta, goal, fuel):
        witness = self.rng.choice(INTER_POOL)
        x = self.fresh_var()
        body = self.gen({**gamma, x: witness}, delta, goal, fuel - 1)
        if body is None:
            return None
        arg = self.gen(gamma, delta, witness, fuel - 1)
        if arg is None:
            return None
        fun = Derivation("ArrowI",
                         Judgment(dict(gamma), Abs(x, body.conclusion.term),
                                  Arrow(witness, goal), dict(delta)), (body,))
        term = App(fun.conclusion.term, arg.conclusion.term)
        return Derivation("ArrowE",
                          Judgment(dict(gamma), term, goal, dict(delta)), (fun, arg))

    def _gen_mu_redex(self, gamma, delta, goal, fuel):
        witness = self.rng.choice(INTER_POOL)
        fp = None
        for maker in (self._gen_mu_self, self._gen_mu_named):
            fp = maker(gamma, delta, Arrow(witness, goal), fuel - 1)
            if fp is not None:
                break
        if fp is None:
            return None
        ap = self.gen(gamma, delta, witness, fuel - 1)
        if ap is None:
            return None
        term = App(fp.conclusion.term, ap.conclusion.term)
        return Derivation("ArrowE",
                          Judgment(dict(gamma), term, goal, dict(delta)), (fp, ap))

    def _gen_renaming_redex(self, gamma, delta, goal, fuel):
        a = self.fresh_name()
        d2 = {**delta, a: goal}
        inner = None
        for maker in (self._gen_mu_named, self._gen_mu_self):
            choices = self._mu_premise_types(goal)
            if not choices:
                break
            t = self.rng.choice(choices)
            inner = maker(gamma, d2, t, fuel - 1)
            if inner is not None:
                break
        if inner is None:
            return None
        t = inner.conclusion.ty
        if not subtype(t, goal):
            return None
        return Derivation("UnionE_self",
                          Judgment(dict(gamma), Mu(a, a, inner.conclusion.term),
                                   goal, dict(delta)), (inner,))


def gen_typed_judgment(rng: random.Random,
                       config: GenConfig | None = None) -> Derivation:
    """A random checked derivation over the base environments."""
    gen = Generator(rng, config)
    gamma, delta = base_environments()
    for _ in range(gen.config.attempts):
        d = gen.judgment(gamma, delta)
        if d is not None:
            return d
    raise ConstructionMiss("generator exhausted its attempts")


# -- term substitution lemma --------------------------------------------------

def subst_derivation(dM: Derivation, x: str, dN: Derivation) -> Derivation:
    """From G,x:C |- M : A | D and G |- N : C | D build G |- M[N/x] : A | D."""
    n_term = dN.conclusion.term

    def go(d: Derivation) -> Derivation:
        j = d.conclusion
        gamma = {y: t for y, t in j.gamma.items() if y != x}
        term = subst_term(j.term, x, n_term)
        if d.rule == "InterE" and isinstance(j.term, Var) and j.term.name == x:
            out = project(dN, j.ty)
            return _weaken_to(out, gamma, dict(j.delta))
        if isinstance(j.term, Abs) and j.term.var == x:
            raise ConstructionMiss("binder shadows the substituted variable")
        prems = tuple(go(p) for p in d.premises)
        return Derivation(d.rule, Judgment(gamma, term, j.ty, dict(j.delta)),
                          prems, dict(d.side))

    return go(dM)


# -- structural substitution lemma --------------------------------------------

def struct_subst_derivation(dM: Derivation, alpha: str,
                            arg_for: dict[TypeExpr, Derivation], g: str,
                            new_union: TypeExpr) -> Derivation:
    """From G |- M : C | a:U(Ai->Bi),D and G |- N : Ai | D for each i, build
    G |- M[N.g/a] : C | g:U(Bi),D.

    ``arg_for`` maps each arrow of the union to a derivation of N at its
    source; ``new_union`` is the union of the targets."""
    some = next(iter(arg_for.values()))
    n_term = some.conclusion.term

    def match_arg(arrow: Arrow) -> Derivation:
        for a, dn in arg_for.items():
            if subtype(arrow, a) and subtype(a, arrow):
                return dn
        raise ConstructionMiss("premise arrow matches no argument derivation")

    def fix_delta(delta: dict) -> dict:
        out = {b: t for b, t in delta.items() if b != alpha}
        out[g] = new_union
        return out

    def go(d: Derivation) -> Derivation:
        j = d.conclusion
        term = subst_structural(j.term, alpha, n_term, g)
        delta = fix_delta(j.delta)
        if isinstance(j.term, Mu) and j.term.bound == alpha:
            raise ConstructionMiss("binder shadows the substituted name")
        if d.rule == "UnionE_named" and j.term.named == alpha:
            body = go(d.premises[0])
            parts = union_parts(body.conclusion.ty)
            if not parts or not all(isinstance(p, Arrow) for p in parts):
                raise ConstructionMiss("premise below the freed name is not a"
                                       " nonempty union of arrows")
            inner_gamma = dict(body.conclusion.gamma)
            inner_delta = dict(body.conclusion.delta)
            args = tuple(
                _weaken_to(match_arg(p), inner_gamma, inner_delta) for p in parts)
            app_ty = canonicalize(Union(tuple(p.right for p in parts)))
            app_term = App(body.conclusion.term, n_term)
            app = Derivation("ArrowE",
                             Judgment(inner_gamma, app_term, app_ty, inner_delta),
                             (body, *args))
            return Derivation("UnionE_named",
                              Judgment(dict(j.gamma), term, j.ty, delta), (app,))
        prems = tuple(go(p) for p in d.premises)
        return Derivation(d.rule, Judgment(dict(j.gamma), term, j.ty, delta),
                          prems, dict(d.side))

    return go(dM)


# -- renaming a free name inside a derivation ---------------------------------

def rename_name_derivation(d: Derivation, g: str, b: str) -> Derivation:
    """Retarget every context switch aimed at ``g`` to ``b``, dropping ``g``
    from the environments.  Sound whenever ``g``'s type lies below ``b``'s."""
    from .reduction import rename_name

    def go(d: Derivation) -> Derivation:
        j = d.conclusion
        if isinstance(j.term, Mu) and j.term.bound == g:
            raise ConstructionMiss("binder shadows the renamed name")
        delta = {a: t for a, t in j.delta.items() if a != g}
        term = rename_name(j.term, g, b)
        prems = tuple(go(p) for p in d.premises)
        rule = d.rule
        if isinstance(j.term, Mu) and j.term.named == g:
            rule = "UnionE_self" if b == j.term.bound else "UnionE_named"
        return Derivation(rule, Judgment(dict(j.gamma), term, j.ty, delta),
                          prems, dict(d.side))

    return go(d)


def rename_var_derivation(d: Derivation, y: str, x: str) -> Derivation:
    """Give the free variable ``y`` the new name ``x`` (keeping y's binding
    around unused, so environments only grow)."""

    def go(d: Derivation) -> Derivation:
        j = d.conclusion
        if y not in j.gamma:
            raise ConstructionMiss(f"{y} is not in the environment")
        gamma = {**j.gamma, x: j.gamma[y]}
        term = subst_term(j.term, y, Var(x))
        prems = tuple(go(p) for p in d.premises)
        return Derivation(d.rule, Judgment(gamma, term, j.ty, dict(j.delta)),
                          prems, dict(d.side))

    return go(d)


# -- subject reduction, constructively ----------------------------------------

def _unwrap(d: Derivation) -> Derivation:
    while d.rule in ("Thin", "Weaken"):
        d = d.premises[0]
    return d


def _sr_local_beta(d: Derivation, expected: Term) -> Derivation:
    j = d.conclusion
    node = _unwrap(d)
    if node.rule != "ArrowE" or not isinstance(j.term.fun, Abs):
        raise ConstructionMiss("not an application of an abstraction")
    fun = _unwrap(node.premises[0])
    if fun.rule != "ArrowI" or len(node.premises) != 2:
        raise ConstructionMiss("the function premise is not a single arrow")
    out = subst_derivation(fun.premises[0], j.term.fun.var, node.premises[1])
    if not type_equiv(out.conclusion.ty, j.ty):
        raise ConstructionMiss("contractum type drifted")
    if out.conclusion.ty != j.ty:
        out = Derivation(out.rule,
                         Judgment(out.conclusion.gamma, out.conclusion.term,
                                  j.ty, out.conclusion.delta),
                         out.premises, dict(out.side))
    return out


def _sr_local_mu(d: Derivation, expected: Term) -> Derivation:
    j = d.conclusion
    node = _unwrap(d)
    if node.rule != "ArrowE" or not isinstance(j.term.fun, Mu):
        raise ConstructionMiss("not an application of a context switch")
    fun = _unwrap(node.premises[0])
    if fun.rule not in ("UnionE_named", "UnionE_self"):
        raise ConstructionMiss("the function premise is not a context switch node")
    red = j.term.fun
    fparts = union_parts(fun.conclusion.ty)
    arg_for = {}
    for arrow, ap in zip(fparts, node.premises[1:]):
        arg_for[arrow] = ap
    g = expected.bound
    body = fun.premises[0]
    new_delta = {**j.delta, g: j.ty}
    if red.named == red.bound:
        hat = struct_subst_derivation(body, red.bound, arg_for, g, j.ty)
        parts = union_parts(hat.conclusion.ty)
        if not parts or not all(isinstance(p, Arrow) for p in parts):
            raise ConstructionMiss("self-named premise is not a union of arrows")
        inner_gamma = dict(hat.conclusion.gamma)
        inner_delta = dict(hat.conclusion.delta)

        def match(arrow):
            for a, dn in arg_for.items():
                if subtype(arrow, a) and subtype(a, arrow):
                    return _weaken_to(dn, inner_gamma, inner_delta)
            raise ConstructionMiss("arrow matches no argument premise")

        args = tuple(match(p) for p in parts)
        app_ty = canonicalize(Union(tuple(p.right for p in parts)))
        app_term = App(hat.conclusion.term, j.term.arg)
        app = Derivation("ArrowE",
                         Judgment(inner_gamma, app_term, app_ty, inner_delta),
                         (hat, *args))
        term = Mu(g, g, app_term)
        return Derivation("UnionE_self",
                          Judgment(dict(j.gamma), term, j.ty, dict(j.delta)), (app,))
    hat = struct_subst_derivation(body, red.bound, arg_for, g, j.ty)
    term = Mu(g, red.named, hat.conclusion.term)
    return Derivation("UnionE_named",
                      Judgment(dict(j.gamma), term, j.ty, dict(j.delta)), (hat,))


def _sr_local_renaming(d: Derivation, expected: Term) -> Derivation:
    j = d.conclusion
    node = _unwrap(d)
    if node.rule not in ("UnionE_named", "UnionE_self"):
        raise ConstructionMiss("not a context switch node")
    inner = _unwrap(node.premises[0])
    if inner.rule not in ("UnionE_named", "UnionE_self"):
        raise ConstructionMiss("the body is not a context switch node")
    outer_term, inner_term = j.term, j.term.body
    renamed = rename_name_derivation(inner.premises[0],
                                     inner_term.bound, outer_term.named)
    new_named = expected.named
    rule = "UnionE_self" if new_named == expected.bound else "UnionE_named"
    return Derivation(rule, Judgment(dict(j.gamma), expected, j.ty,
                                     dict(j.delta)), (renamed,))


_SR_LOCAL = {"beta": _sr_local_beta, "mu": _sr_local_mu,
             "renaming": _sr_local_renaming}


def sr_step(d: Derivation, pos: tuple[int, ...], rule: str) -> Derivation:
    """Rebuild ``d`` after contracting the redex at ``pos``."""
    whole = step(d.conclusion.term, pos, rule)
    expected = subterm_at(whole, pos)
    local = _SR_LOCAL[rule]

    def go(d: Derivation, pos: tuple[int, ...]) -> Derivation:
        if not pos:
            return local(d, expected)
        j = d.conclusion
        i, rest = pos[0], pos[1:]
        if d.rule in ("Thin", "Weaken", "InterI"):
            prems = tuple(go(p, pos) for p in d.premises)
            term = prems[0].conclusion.term if prems else j.term
            return Derivation(d.rule, Judgment(dict(j.gamma), term, j.ty,
                                               dict(j.delta)), prems, dict(d.side))
        if d.rule == "ArrowI" and i == 0:
            p = go(d.premises[0], rest)
            term = Abs(j.term.var, p.conclusion.term)
        elif d.rule in ("UnionE_named", "UnionE_self") and i == 0:
            p = go(d.premises[0], rest)
            term = Mu(j.term.bound, j.term.named, p.conclusion.term)
            return Derivation(d.rule, Judgment(dict(j.gamma), term, j.ty,
                                               dict(j.delta)), (p,), dict(d.side))
        elif d.rule == "ArrowE" and i == 0:
            p = go(d.premises[0], rest)
            term = App(p.conclusion.term, j.term.arg)
            return Derivation(d.rule, Judgment(dict(j.gamma), term, j.ty,
                                               dict(j.delta)),
                              (p, *d.premises[1:]), dict(d.side))
        elif d.rule == "ArrowE" and i == 1:
            aps = tuple(go(p, rest) for p in d.premises[1:])
            term = App(j.term.fun, aps[0].conclusion.term)
            return Derivation(d.rule, Judgment(dict(j.gamma), term, j.ty,
                                               dict(j.delta)),
                              (d.premises[0], *aps), dict(d.side))
        else:
            raise ConstructionMiss(f"no premise {i} under rule {d.rule}")
        return Derivation(d.rule, Judgment(dict(j.gamma), term, j.ty,
                                           dict(j.delta)), (p,), dict(d.side))

    out = go(d, pos)
    if out.conclusion.term != whole:
        raise ConstructionMiss("rebuilt term differs from the reduction output")
    return out


# -- subject expansion, constructively ----------------------------------------

_TOP_ARGS = (Abs("q0", App(Var("q0"), Var("q0"))), Var("v1"))


def se_beta_vacuous(d: Derivation, rng: random.Random,
                    fresh: str) -> tuple[Derivation, Derivation, str]:
    """Wrap M as (\\x.M)Q with x unused; Q only needs the empty intersection."""
    j = d.conclusion
    q = rng.choice(_TOP_ARGS)
    inner = _weaken_to(d, {**j.gamma, fresh: Top}, dict(j.delta))
    fun_ty = Arrow(Top, j.ty)
    fun = Derivation("ArrowI", Judgment(dict(j.gamma), Abs(fresh, j.term),
                                        fun_ty, dict(j.delta)), (inner,))
    arg = top_typed(j.gamma, q, j.delta)
    term = App(fun.conclusion.term, q)
    exp = Derivation("ArrowE", Judgment(dict(j.gamma), term, j.ty,
                                        dict(j.delta)), (fun, arg))
    return exp, d, "beta"


def se_beta_var(d: Derivation, y: str,
                fresh: str) -> tuple[Derivation, Derivation, str]:
    """Wrap M as (\\x.M[x/y])y, abstracting a used free variable."""
    j = d.conclusion
    c = j.gamma[y]
    renamed = rename_var_derivation(d, y, fresh)
    fun = Derivation("ArrowI",
                     Judgment(dict(j.gamma), Abs(fresh, renamed.conclusion.term),
                              Arrow(c, j.ty), dict(j.delta)), (renamed,))
    arg = var_typed(j.gamma, c, j.delta)
    if arg is None or arg.conclusion.term != Var(y):
        arg = _var_at(j.gamma, y, c, j.delta)
    term = App(fun.conclusion.term, Var(y))
    exp = Derivation("ArrowE", Judgment(dict(j.gamma), term, j.ty,
                                        dict(j.delta)), (fun, arg))
    return exp, d, "beta"


def _var_at(gamma: dict, y: str, c: TypeExpr, delta: dict) -> Derivation:
    j = Judgment(dict(gamma), Var(y), c, dict(delta))
    if isinstance(c, Inter):
        prems = tuple(
            Derivation("InterE", Judgment(dict(gamma), Var(y), p, dict(delta)))
        for p in c.parts)
        return Derivation("InterI", j, prems)
    return Derivation("InterE", j)


def se_mu_named(d: Derivation, rng: random.Random, alpha: str,
                gname: str) -> tuple[Derivation, Derivation, str]:
    """Wrap M as (mu a.[b]M)Q with a unused; reduces to mu g.[b]M."""
    j = d.conclusion
    s = j.ty
    if isinstance(s, Inter):
        raise ConstructionMiss("needs a strict premise type")
    beta = next((b for b, w in sorted(j.delta.items()) if subtype(s, w)), None)
    delta = dict(j.delta)
    if beta is None:
        beta = "e" + alpha
        delta[beta] = s
    b_goal = _F1
    fun_ty = Arrow(Top, b_goal)
    inner = _weaken_to(d, dict(j.gamma), {**delta, alpha: fun_ty})
    fun = Derivation("UnionE_named",
                     Judgment(dict(j.gamma), Mu(alpha, beta, j.term), fun_ty,
                              dict(delta)), (inner,))
    q = rng.choice(_TOP_ARGS)
    arg = top_typed(j.gamma, q, delta)
    term = App(fun.conclusion.term, q)
    exp = Derivation("ArrowE", Judgment(dict(j.gamma), term, b_goal,
                                        dict(delta)), (fun, arg))
    red_inner = _weaken_to(d, dict(j.gamma), {**delta, gname: b_goal})
    red = Derivation("UnionE_named",
                     Judgment(dict(j.gamma), Mu(gname, beta, j.term), b_goal,
                              dict(delta)), (red_inner,))
    return exp, red, "mu"


def se_mu_self(d: Derivation, alpha: str, gname: str,
               arg: Derivation) -> tuple[Derivation, Derivation, str]:
    """Wrap an arrow-typed M as (mu a.[a]M)Q; reduces to mu g.[g](M Q)."""
    j = d.conclusion
    if not isinstance(j.ty, Arrow):
        raise ConstructionMiss("needs an arrow-typed subject")
    u = j.ty
    inner = _weaken_to(d, dict(j.gamma), {**j.delta, alpha: u})
    fun = Derivation("UnionE_self",
                     Judgment(dict(j.gamma), Mu(alpha, alpha, j.term), u,
                              dict(j.delta)), (inner,))
    arg0 = _weaken_to(arg, dict(j.gamma), dict(j.delta))
    term = App(fun.conclusion.term, arg0.conclusion.term)
    exp = Derivation("ArrowE", Judgment(dict(j.gamma), term, u.right,
                                        dict(j.delta)), (fun, arg0))
    d2 = {**j.delta, gname: u.right}
    app = Derivation("ArrowE",
                     Judgment(dict(j.gamma),
                              App(j.term, arg0.conclusion.term), u.right, d2),
                     (_weaken_to(d, dict(j.gamma), d2),
                      _weaken_to(arg, dict(j.gamma), d2)))
    red = Derivation("UnionE_self",
                     Judgment(dict(j.gamma), Mu(gname, gname, app.conclusion.term),
                              u.right, dict(j.delta)), (app,))
    return exp, red, "mu"


def se_renaming(d: Derivation, alpha: str,
                gname: str) -> tuple[Derivation, Derivation, str]:
    """Wrap M as mu a.[b](mu g.[b]M) with g unused; renames to mu a.[b]M."""
    j = d.conclusion
    s = j.ty
    if isinstance(s, Inter):
        raise ConstructionMiss("needs a strict premise type")
    beta = next((b for b, w in sorted(j.delta.items()) if subtype(s, w)), None)
    delta = dict(j.delta)
    if beta is None:
        beta = "e" + alpha
        delta[beta] = s
    b_goal = _F1
    d_in = {**delta, alpha: b_goal}
    inner_body = _weaken_to(d, dict(j.gamma), {**d_in, gname: s})
    inner = Derivation("UnionE_named",
                       Judgment(dict(j.gamma), Mu(gname, beta, j.term), s,
                                dict(d_in)), (inner_body,))
    exp = Derivation("UnionE_named",
                     Judgment(dict(j.gamma),
                              Mu(alpha, beta, inner.conclusion.term), b_goal,
                              dict(delta)), (inner,))
    red_inner = _weaken_to(d, dict(j.gamma), dict(d_in))
    red = Derivation("UnionE_named",
                     Judgment(dict(j.gamma), Mu(alpha, beta, j.term), b_goal,
                              dict(delta)), (red_inner,))
    return exp, red, "renaming"


# -- suites -------------------------------------------------------------------

@dataclass
class SuiteReport:
    name: str
    run: int = 0
    fail: int = 0
    budget_miss: int = 0
    failures: list[str] = field(default_factory=list)

    def record_failure(self, message: str) -> None:
        self.fail += 1
        if len(self.failures) < 20:
            self.failures.append(message)

    def summary(self) -> str:
        return (f"SUITE {self.name} RUN {self.run} FAIL {self.fail} "
                f"BUDGET_MISS {self.budget_miss}")

    def render(self) -> str:
        lines = [f"  case: {m}" for m in self.failures]
        lines.append(self.summary())
        return "\n".join(lines)


def _search_check(report: SuiteReport, j: Judgment,
                  budget: SearchBudget | None) -> None:
    b = SearchBudget(max_depth=budget.max_depth if budget else 9,
                     max_width=budget.max_width if budget else 4)
    found = derive(j.gamma, j.term, j.ty, j.delta, b)
    if found is None:
        report.budget_miss += 1


def suite_term_subst(seed: int = 0, cases: int = 300,
                     budget: SearchBudget | None = None,
                     search_every: int = 1) -> SuiteReport:
    """G,x:C |- M : A | D and G |- N : C | D give G |- M[N/x] : A | D."""
    rng = random.Random(seed)
    report = SuiteReport("term-subst")
    gamma0, delta0 = base_environments()
    while report.run < cases:
        gen = Generator(rng)
        c = rng.choice(INTER_POOL)
        dN = gen.judgment(gamma0, delta0, goal=c)
        if dN is None:
            continue
        x = "s" + gen.fresh_var()
        dM = gen.judgment({**gamma0, x: c}, delta0)
        if dM is None:
            continue
        report.run += 1
        try:
            out = subst_derivation(dM, x, dN)
            check_derivation(out)
            want = subst_term(dM.conclusion.term, x, dN.conclusion.term)
            if out.conclusion.term != want:
                raise ConstructionMiss("substituted term mismatch")
            if not type_equiv(out.conclusion.ty, dM.conclusion.ty):
                raise ConstructionMiss("type not preserved")
        except Exception as e:
            report.record_failure(f"term-subst: {e}")
            continue
        if report.run % search_every == 0:
            _search_check(report, out.conclusion, budget)
    return report


def suite_struct_subst(seed: int = 0, cases: int = 300,
                       budget: SearchBudget | None = None,
                       search_every: int = 1) -> SuiteReport:
    """G |- M : C | a:U(Ai->Bi),D and G |- N : Ai | D give
    G |- M[N.g/a] : C | g:U(Bi),D."""
    rng = random.Random(seed)
    report = SuiteReport("struct-subst")
    gamma0, delta0 = base_environments()
    u_alpha = canonicalize(Union((_ARROW1, _ARROW2)))
    new_union = canonicalize(Union((_F2, _F1)))
    while report.run < cases:
        gen = Generator(rng)
        alpha = "a" + gen.fresh_name()
        dM = gen.judgment(gamma0, {**delta0, alpha: u_alpha})
        if dM is None:
            continue
        # a single N must take every arrow source, so use the variable whose
        # entry intersects them all
        lefts = [a.left for a in union_parts(u_alpha)]
        n_var = next(x for x, t in gamma0.items()
                     if all(left in inter_parts(t) for left in lefts))
        arg_for = {arrow: _var_at(gamma0, n_var, arrow.left, delta0)
                   for arrow in union_parts(u_alpha)}
        report.run += 1
        g = "g" + gen.fresh_name()
        try:
            out = struct_subst_derivation(dM, alpha, arg_for, g, new_union)
            check_derivation(out)
            n_term = next(iter(arg_for.values())).conclusion.term
            want = subst_structural(dM.conclusion.term, alpha, n_term, g)
            if out.conclusion.term != want:
                raise ConstructionMiss("substituted term mismatch")
        except Exception as e:
            report.record_failure(f"struct-subst: {e}")
            continue
        if report.run % search_every == 0:
            _search_check(report, out.conclusion, budget)
    return report


def suite_subject_reduction(seed: int = 0, cases: int = 500,
                            budget: SearchBudget | None = None,
                            search_every: int = 5) -> SuiteReport:
    """Every beta, mu or renaming step preserves the derived judgment."""
    rng = random.Random(seed)
    report = SuiteReport("subject-reduction")
    enabled = {"beta", "mu", "renaming"}
    while report.run < cases:
        d = gen_typed_judgment(rng)
        rs = redexes(d.conclusion.term, enabled)
        if not rs:
            continue
        report.run += 1
        failed = False
        for pos, rule in rs:
            try:
                out = sr_step(d, pos, rule)
                check_derivation(out)
            except Exception as e:
                report.record_failure(f"{rule} at {pos}: {e}")
                failed = True
                break
        if not failed and report.run % search_every == 0:
            pos, rule = rs[0]
            j = d.conclusion
            reduced = step(j.term, pos, rule)
            _search_check(report, Judgment(j.gamma, reduced, j.ty, j.delta), budget)
    return report


def suite_subject_expansion(seed: int = 0, cases: int = 500,
                            budget: SearchBudget | None = None,
                            search_every: int = 5) -> SuiteReport:
    """Every beta, mu or renaming expansion preserves the derived judgment."""
    rng = random.Random(seed)
    report = SuiteReport("subject-expansion")
    gamma0, delta0 = base_environments()
    while report.run < cases:
        gen = Generator(rng)
        goal = rng.choice(STRICT_POOL)
        d = gen.judgment(gamma0, delta0, goal=goal)
        if d is None:
            continue
        flavors = ["beta_vacuous", "mu_named", "renaming"]
        used = sorted(free_term_vars(d.conclusion.term) & set(gamma0))
        if used:
            flavors.append("beta_var")
        if isinstance(goal, Arrow):
            flavors.append("mu_self")
        flavor = rng.choice(flavors)
        report.run += 1
        try:
            if flavor == "beta_vacuous":
                exp, red, rule = se_beta_vacuous(d, rng, "b" + gen.fresh_var())
            elif flavor == "beta_var":
                exp, red, rule = se_beta_var(d, rng.choice(used),
                                             "b" + gen.fresh_var())
            elif flavor == "mu_named":
                exp, red, rule = se_mu_named(d, rng, "m" + gen.fresh_name(),
                                             "g" + gen.fresh_name())
            elif flavor == "mu_self":
                arg = var_typed(gamma0, goal.left, delta0)
                if arg is None:
                    raise ConstructionMiss("no variable for the arrow source")
                exp, red, rule = se_mu_self(d, "m" + gen.fresh_name(),
                                            "g" + gen.fresh_name(), arg)
            else:
                exp, red, rule = se_renaming(d, "m" + gen.fresh_name(),
                                             "g" + gen.fresh_name())
            check_derivation(exp)
            check_derivation(red)
            stepped = step(exp.conclusion.term, (), rule)
            if not alpha_eq(stepped, red.conclusion.term):
                raise ConstructionMiss("expansion does not reduce to the subject")
            if not type_equiv(exp.conclusion.ty, red.conclusion.ty):
                raise ConstructionMiss("type not preserved by expansion")
        except Exception as e:
            report.record_failure(f"{flavor}: {e}")
            continue
        if report.run % search_every == 0:
            _search_check(report, exp.conclusion, budget)
    return report


# -- the erasing counterexample -----------------------------------------------

def demo_erasing_failure() -> dict:
    """The erasing rule breaks subject reduction in this system.

    With x:A1 the term mu a.[a]x takes the union A1 u A2, the erasing step
    rewrites it to plain x, and a variable can only take components of its
    environment entry (and intersections of them), never a wider union.
    """
    a1, a2 = TVar("A1"), TVar("A2")
    u = canonicalize(Union((a1, a2)))
    gamma = {"x": a1}
    term = Mu("a", "a", Var("x"))
    before = Derivation(
        "UnionE_self", Judgment(dict(gamma), term, u, {}),
        (Derivation("InterE", Judgment(dict(gamma), Var("x"), a1, {"a": u})),))
    check_derivation(before)
    rs = redexes(term, {"erasing"})
    reduced = step(term, rs[0][0], rs[0][1])
    found = derive(gamma, reduced, u, {}, SearchBudget(max_depth=8))

    def var_takes(entry: TypeExpr, ty: TypeExpr) -> bool:
        # the only rules that fit a bare variable are projection and
        # intersection introduction, so derivable types are intersections
        # of components of the entry
        if isinstance(ty, Inter):
            return all(var_takes(entry, p) for p in ty.parts)
        return ty in inter_parts(entry)

    return {
        "judgment_before": before.conclusion,
        "derivation_before": before,
        "step": rs[0],
        "term_after": reduced,
        "search_found_after": found is not None,
        "derivable_after": var_takes(a1, u),
    }
