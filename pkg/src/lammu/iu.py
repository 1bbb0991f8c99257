"""Intersection-union typing: derivation checker, inversion and bounded search.

Derivations are explicit trees over six rules:

* ``InterE``       variable lookup, projecting one component of its environment type
* ``InterI``       intersection introduction (n components, n != 1)
* ``ArrowI``       abstraction
* ``ArrowE``       application against a union of arrows (n >= 1 branches)
* ``UnionE_named`` context switch ``mu a.[b] M`` targeting an environment name b
* ``UnionE_self``  context switch ``mu b.[b] M`` targeting its own bound name

plus the admissible wrappers ``Thin`` (restrict environments to the free
variables and names) and ``Weaken`` (strengthen the left environment, widen
the right one).  Types in a node are compared up to the equivalence induced by
the preorder, except variable lookup, which projects components as written.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations, product

from .syntax import Abs, App, Mu, Term, Var, free_names, free_term_vars
from .typelang import (Arrow, Bottom, Inter, Top, TypeExpr, Union,
                       canonicalize, env_leq_left, env_leq_right, inter_parts,
                       is_strict, subexpressions, subtype, type_equiv,
                       union_parts, well_formed)

RULES = ("InterE", "InterI", "ArrowI", "ArrowE",
         "UnionE_named", "UnionE_self", "Thin", "Weaken")


@dataclass
class Judgment:
    gamma: dict[str, TypeExpr]
    term: Term
    ty: TypeExpr
    delta: dict[str, TypeExpr]


@dataclass
class Derivation:
    rule: str
    conclusion: Judgment
    premises: tuple["Derivation", ...] = ()
    side: dict = field(default_factory=dict)


class InvalidNode(Exception):
    def __init__(self, path: tuple[int, ...], reason: str):
        loc = ".".join(map(str, path)) if path else "root"
        super().__init__(f"invalid node at {loc}: {reason}")
        self.path = path
        self.reason = reason


class EmptyInversion(Exception):
    pass


class PreconditionViolation(Exception):
    pass


class NotPureLambda(Exception):
    pass


def _env_equiv(a: dict[str, TypeExpr], b: dict[str, TypeExpr]) -> bool:
    return set(a) == set(b) and all(type_equiv(a[k], b[k]) for k in a)


def _check_node(d: Derivation, path: tuple[int, ...]) -> None:
    j = d.conclusion

    def bad(reason: str):
        raise InvalidNode(path, reason)

    for t in [j.ty, *j.gamma.values(), *j.delta.values()]:
        if not well_formed(t, "iu"):
            bad("type outside the intersection-union language")
    for t in j.delta.values():
        if isinstance(t, Inter):
            bad("right environment entries must be strict")

    if d.rule == "InterE":
        if not isinstance(j.term, Var):
            bad("variable lookup applies to variables only")
        if d.premises:
            bad("variable lookup takes no premises")
        if j.term.name not in j.gamma:
            bad(f"variable {j.term.name} not in environment")
        if j.ty not in inter_parts(j.gamma[j.term.name]):
            bad("type is not a component of the environment entry")
        return

    if d.rule == "InterI":
        parts = j.ty.parts if isinstance(j.ty, Inter) else None
        if parts is None:
            bad("conclusion must be an intersection")
        if len(parts) == 1:
            bad("intersection introduction excludes exactly one premise")
        if len(d.premises) != len(parts):
            bad("one premise per component required")
        for p, t in zip(d.premises, parts):
            if not is_strict(t):
                bad("intersection components must be strict")
            if not type_equiv(p.conclusion.ty, t):
                bad("premise type does not match its component")
            if p.conclusion.term != j.term:
                bad("premises must type the same term")
            if not (_env_equiv(p.conclusion.gamma, j.gamma)
                    and _env_equiv(p.conclusion.delta, j.delta)):
                bad("premises must share the conclusion environments")
        return

    if d.rule == "ArrowI":
        if not isinstance(j.term, Abs):
            bad("arrow introduction applies to abstractions")
        if not isinstance(j.ty, Arrow):
            bad("conclusion must be an arrow")
        if len(d.premises) != 1:
            bad("arrow introduction takes one premise")
        p = d.premises[0].conclusion
        want_gamma = {**j.gamma, j.term.var: j.ty.left}
        if p.term != j.term.body:
            bad("premise must type the body")
        if not type_equiv(p.ty, j.ty.right):
            bad("premise type must be the arrow target")
        if not (_env_equiv(p.gamma, want_gamma) and _env_equiv(p.delta, j.delta)):
            bad("premise environment must bind the abstracted variable")
        return

    if d.rule == "ArrowE":
        if not isinstance(j.term, App):
            bad("arrow elimination applies to applications")
        if len(d.premises) < 2:
            bad("arrow elimination needs a function premise and n >= 1 argument premises")
        fprem = d.premises[0].conclusion
        if fprem.term != j.term.fun:
            bad("first premise must type the function")
        fparts = union_parts(fprem.ty)
        if not fparts or not all(isinstance(p, Arrow) for p in fparts):
            bad("function premise must carry a union of arrows")
        if len(d.premises) != len(fparts) + 1:
            bad("one argument premise per union branch required")
        for arrow, ap in zip(fparts, d.premises[1:]):
            a = ap.conclusion
            if a.term != j.term.arg:
                bad("argument premises must type the argument")
            if not type_equiv(a.ty, arrow.left):
                bad("argument premise does not match the arrow source")
        rights = Union(tuple(p.right for p in fparts))
        if not type_equiv(j.ty, rights):
            bad("conclusion must be the union of the arrow targets")
        for p in d.premises:
            c = p.conclusion
            if not (_env_equiv(c.gamma, j.gamma) and _env_equiv(c.delta, j.delta)):
                bad("premises must share the conclusion environments")
        return

    if d.rule in ("UnionE_named", "UnionE_self"):
        if not isinstance(j.term, Mu):
            bad("union elimination applies to context switches")
        if len(d.premises) != 1:
            bad("union elimination takes one premise")
        p = d.premises[0].conclusion
        if p.term != j.term.body:
            bad("premise must type the body")
        if isinstance(j.ty, Inter):
            bad("union elimination concludes a strict type")
        if d.rule == "UnionE_named":
            if j.term.named == j.term.bound:
                bad("the named slot refers to the bound name; use the self variant")
            if j.term.named not in j.delta:
                bad(f"name {j.term.named} not in environment")
            target = j.delta[j.term.named]
            bound_ty = j.ty
        else:
            if j.term.named != j.term.bound:
                bad("the named slot differs from the bound name; use the named variant")
            target = j.ty
            bound_ty = j.ty
        if not (_env_equiv(p.gamma, j.gamma)
                and _env_equiv(p.delta, {**j.delta, j.term.bound: bound_ty})):
            bad("premise environment must bind the freed name")
        if not subtype(p.ty, target):
            bad("premise type must lie below the target union")
        return

    if d.rule == "Thin":
        if len(d.premises) != 1:
            bad("thinning takes one premise")
        p = d.premises[0].conclusion
        fv, fn = free_term_vars(j.term), free_names(j.term)
        want_g = {x: t for x, t in p.gamma.items() if x in fv}
        want_d = {a: t for a, t in p.delta.items() if a in fn}
        if p.term != j.term or not type_equiv(p.ty, j.ty):
            bad("thinning preserves the term and type")
        if not (_env_equiv(j.gamma, want_g) and _env_equiv(j.delta, want_d)):
            bad("environments must be restricted to the free variables and names")
        return

    if d.rule == "Weaken":
        if len(d.premises) != 1:
            bad("weakening takes one premise")
        p = d.premises[0].conclusion
        if p.term != j.term or not type_equiv(p.ty, j.ty):
            bad("weakening preserves the term and type")
        if not env_leq_left(j.gamma, p.gamma):
            bad("conclusion left environment must lie below the premise's")
        if not env_leq_right(p.delta, j.delta):
            bad("premise right environment must lie below the conclusion's")
        return

    bad(f"unknown rule {d.rule!r}")


def check_derivation(d: Derivation) -> None:
    """Validate every node; raises InvalidNode at the first violation."""

    def walk(d: Derivation, path: tuple[int, ...]) -> None:
        _check_node(d, path)
        for i, p in enumerate(d.premises):
            walk(p, path + (i,))

    walk(d, ())


def invert(j: Judgment) -> list[Judgment]:
    """Premise judgments forced by the term shape, when fully determined.

    Raises EmptyInversion when no derivation of ``j`` can exist for shape
    reasons.  For applications and context switches the premises involve
    witness types the judgment does not determine, so the result is empty.
    """
    ty = canonicalize(j.ty)
    if isinstance(j.term, Var):
        if j.term.name not in j.gamma:
            raise EmptyInversion(f"variable {j.term.name} not in environment")
        if not subtype(j.gamma[j.term.name], ty):
            raise EmptyInversion("environment entry does not cover the type")
        return []
    if isinstance(j.term, Abs):
        prems = []
        for part in inter_parts(ty):
            if not isinstance(part, Arrow):
                raise EmptyInversion("an abstraction only gets intersections of arrows")
            prems.append(Judgment({**j.gamma, j.term.var: part.left},
                                  j.term.body, part.right, j.delta))
        return prems
    if isinstance(j.term, App):
        if ty != Top and not all(not isinstance(p, Inter) for p in union_parts(ty)):
            raise EmptyInversion("an application gets a union of strict types")
        return []
    if isinstance(j.term, Mu):
        if j.term.named != j.term.bound and j.term.named not in j.delta:
            raise EmptyInversion(f"name {j.term.named} not in environment")
        return []
    raise TypeError(f"not a term: {j.term!r}")


# -- admissible constructions -------------------------------------------------

def inter_elim(d: Derivation, i: int) -> Derivation:
    """Project component ``i`` out of a derivation concluding an intersection."""
    if d.rule in ("Thin", "Weaken"):
        inner = inter_elim(d.premises[0], i)
        j = d.conclusion
        return Derivation(d.rule, Judgment(j.gamma, j.term, inner.conclusion.ty,
                                           j.delta), (inner,), dict(d.side))
    ty = d.conclusion.ty
    if not isinstance(ty, Inter):
        if i == 0:
            return d
        raise PreconditionViolation("conclusion is not an intersection")
    if not 0 <= i < len(ty.parts):
        raise PreconditionViolation(f"no component {i}")
    if d.rule != "InterI":
        raise PreconditionViolation("intersection without an introduction node")
    return d.premises[i]


def thin(d: Derivation) -> Derivation:
    j = d.conclusion
    fv, fn = free_term_vars(j.term), free_names(j.term)
    g = {x: t for x, t in j.gamma.items() if x in fv}
    dl = {a: t for a, t in j.delta.items() if a in fn}
    if g == j.gamma and dl == j.delta:
        return d
    return Derivation("Thin", Judgment(g, j.term, j.ty, dl), (d,))


def weaken(d: Derivation, gamma: dict[str, TypeExpr],
           delta: dict[str, TypeExpr]) -> Derivation:
    j = d.conclusion
    if not env_leq_left(gamma, j.gamma):
        raise PreconditionViolation("new left environment is not below the old one")
    if not env_leq_right(j.delta, delta):
        raise PreconditionViolation("old right environment is not below the new one")
    if gamma == j.gamma and delta == j.delta:
        return d
    return Derivation("Weaken", Judgment(dict(gamma), j.term, j.ty, dict(delta)), (d,))


# -- bounded search -----------------------------------------------------------

@dataclass
class SearchBudget:
    max_depth: int = 8
    max_width: int = 4
    max_nodes: int = 200_000
    exhausted: bool = False
    nodes: int = 0


def _universe(gamma, ty, delta) -> list[TypeExpr]:
    seen: dict[TypeExpr, None] = {Top: None, Bottom: None}
    for t in [ty, *gamma.values(), *delta.values()]:
        for s in subexpressions(canonicalize(t)):
            seen.setdefault(canonicalize(s), None)
    return list(seen)


class _Searcher:
    def __init__(self, universe: list[TypeExpr], budget: SearchBudget):
        self.budget = budget
        self.strict = [t for t in universe if is_strict(t)]
        witnesses = [t for t in universe if well_formed(t, "iu")]
        if budget.max_width >= 2:
            for pair in combinations([t for t in self.strict if t != Bottom], 2):
                if len(witnesses) >= 32:
                    break
                witnesses.append(canonicalize(Inter(pair)))
        self.witnesses = witnesses[:32]
        self.memo: dict[tuple, tuple[int, Derivation | None]] = {}

    def goal(self, gamma: dict[str, TypeExpr], term: Term, ty: TypeExpr,
             delta: dict[str, TypeExpr], depth: int) -> Derivation | None:
        key = (frozenset(gamma.items()), term, ty, frozenset(delta.items()))
        if key in self.memo:
            d0, res = self.memo[key]
            if res is not None or d0 >= depth:
                return res
        res = self._attempt(gamma, term, ty, delta, depth)
        self.memo[key] = (depth, res)
        return res

    def _attempt(self, gamma, term, ty, delta, depth) -> Derivation | None:
        if depth <= 0:
            self.budget.exhausted = True
            return None
        self.budget.nodes += 1
        if self.budget.nodes > self.budget.max_nodes:
            self.budget.exhausted = True
            return None
        j = Judgment(gamma, term, ty, delta)

        if isinstance(ty, Inter):
            prems = []
            for part in ty.parts:
                p = self.goal(gamma, term, part, delta, depth - 1)
                if p is None:
                    return None
                prems.append(p)
            return Derivation("InterI", j, tuple(prems))

        if isinstance(term, Var):
            if term.name in gamma and ty in inter_parts(gamma[term.name]):
                return Derivation("InterE", j)
            return None

        if isinstance(term, Abs):
            if not isinstance(ty, Arrow):
                return None
            g2 = {**gamma, term.var: ty.left}
            p = self.goal(g2, term.body, ty.right, delta, depth - 1)
            if p is None:
                return None
            return Derivation("ArrowI", j, (p,))

        if isinstance(term, App):
            return self._app(j, depth)

        if isinstance(term, Mu):
            return self._mu(j, depth)

        return None

    def _app(self, j: Judgment, depth: int) -> Derivation | None:
        decomps = [(j.ty,)]
        if isinstance(j.ty, Union) and len(j.ty.parts) > 1:
            decomps.append(j.ty.parts)
        for bs in decomps:
            d = self._app_branches(j, bs, depth)
            if d is not None:
                return d
        return None

    def _fun_candidates(self, j: Judgment, bs):
        """Candidate function-premise types, keyed on the function's shape.

        A variable only derives components of its environment entry, and an
        abstraction only derives arrows, so enumerating arbitrary witness
        arrows there is wasted work.
        """
        fun = j.term.fun
        if isinstance(fun, Var):
            entry = j.gamma.get(fun.name)
            if entry is None:
                return
            for c in inter_parts(entry):
                parts = union_parts(c)
                if (parts and all(isinstance(p, Arrow) for p in parts)
                        and type_equiv(Union(tuple(p.right for p in parts)),
                                       j.ty)):
                    yield canonicalize(c)
            return
        if isinstance(fun, Abs):
            if len(bs) == 1:
                for w in self.witnesses:
                    yield canonicalize(Arrow(w, bs[0]))
            return
        for ws in product(self.witnesses, repeat=len(bs)):
            fun_ty = canonicalize(Union(tuple(Arrow(w, b)
                                              for w, b in zip(ws, bs))))
            if len(union_parts(fun_ty)) == len(bs):
                yield fun_ty

    def _app_branches(self, j: Judgment, bs, depth: int) -> Derivation | None:
        if not bs or any(isinstance(b, (Inter,)) for b in bs):
            return None
        for fun_ty in self._fun_candidates(j, bs):
            fp = self.goal(j.gamma, j.term.fun, fun_ty, j.delta, depth - 1)
            if fp is None:
                continue
            fparts = union_parts(fp.conclusion.ty)
            aps = []
            for arrow in fparts:
                ap = self.goal(j.gamma, j.term.arg, canonicalize(arrow.left),
                               j.delta, depth - 1)
                if ap is None:
                    break
                aps.append(ap)
            if len(aps) == len(fparts):
                return Derivation("ArrowE", j, (fp, *aps))
        return None

    def _mu(self, j: Judgment, depth: int) -> Derivation | None:
        m = j.term
        if m.named == m.bound:
            rule, target = "UnionE_self", j.ty
        else:
            if m.named not in j.delta:
                return None
            rule, target = "UnionE_named", j.delta[m.named]
        d2 = {**j.delta, m.bound: j.ty}
        candidates = dict.fromkeys([target, *union_parts(target), *self.strict])
        for t in candidates:
            if not is_strict(t) or not subtype(t, target):
                continue
            p = self.goal(j.gamma, m.body, t, d2, depth - 1)
            if p is not None:
                return Derivation(rule, j, (p,))
        return None


def derive(gamma: dict[str, TypeExpr], term: Term, ty: TypeExpr,
           delta: dict[str, TypeExpr],
           budget: SearchBudget | None = None) -> Derivation | None:
    """Bounded goal-directed proof search; all types are canonicalized first.

    Returns None when nothing is found within the budget; ``budget.exhausted``
    tells whether the depth limit pruned any branch.
    """
    budget = budget if budget is not None else SearchBudget()
    gamma = {x: canonicalize(t) for x, t in gamma.items()}
    delta = {a: canonicalize(t) for a, t in delta.items()}
    ty = canonicalize(ty)
    searcher = _Searcher(_universe(gamma, ty, delta), budget)
    return searcher.goal(gamma, term, ty, delta, budget.max_depth)


def check_strict(gamma: dict[str, TypeExpr], term: Term, ty: TypeExpr,
                 budget: SearchBudget | None = None) -> Derivation | None:
    """Search in the union-free fragment: pure lambda terms, strict types."""

    def pure(m: Term) -> bool:
        if isinstance(m, Mu):
            return False
        if isinstance(m, Abs):
            return pure(m.body)
        if isinstance(m, App):
            return pure(m.fun) and pure(m.arg)
        return True

    if not pure(term):
        raise NotPureLambda("the union-free fragment has no context switches")
    for t in [ty, *gamma.values()]:
        if not well_formed(t, "strict"):
            raise NotPureLambda("the union-free fragment uses strict types only")
    return derive(gamma, term, ty, {}, budget)


# -- certificates -------------------------------------------------------------

def derivation_to_json(d: Derivation) -> str:
    from .grammar import print_judgment, print_type

    def enc(d: Derivation) -> dict:
        j = d.conclusion
        side = {k: (print_type(v) if isinstance(v, TypeExpr) else v)
                for k, v in d.side.items()}
        out = {"rule": d.rule,
               "judgment": print_judgment(j.gamma, j.term, j.ty, j.delta),
               "premises": [enc(p) for p in d.premises]}
        if side:
            out["side"] = side
        return out

    return json.dumps(enc(d), indent=2)


def derivation_from_json(text: str) -> Derivation:
    from .grammar import parse_judgment

    def dec(obj: dict) -> Derivation:
        gamma, term, ty, delta = parse_judgment(obj["judgment"])
        return Derivation(obj["rule"], Judgment(gamma, term, ty, delta),
                          tuple(dec(p) for p in obj.get("premises", [])),
                          dict(obj.get("side", {})))

    return dec(json.loads(text))


# -- embedding the simple system ----------------------------------------------

def embed_simple(sd) -> Derivation:
    """Rebuild a simple-system derivation in the intersection-union system.

    Curry types are already well formed here (``bot`` is the empty union), so
    types carry over verbatim; each rule maps to its n = 1 counterpart.
    """
    j = sd.judgment
    out = Judgment(dict(j.gamma), j.term, j.ty, dict(j.delta))
    if sd.rule == "Ax":
        return Derivation("InterE", out)
    if sd.rule == "->I":
        return Derivation("ArrowI", out, (embed_simple(sd.premises[0]),))
    if sd.rule == "->E":
        return Derivation("ArrowE", out, tuple(embed_simple(p) for p in sd.premises))
    if sd.rule == "mu":
        m = j.term
        rule = "UnionE_self" if m.named == m.bound else "UnionE_named"
        return Derivation(rule, out, (embed_simple(sd.premises[0]),))
    raise ValueError(f"unknown simple rule {sd.rule!r}")
