import random

from lammu.iu import check_derivation, derive
from lammu.metatheory import (base_environments,
                              demo_erasing_failure, gen_typed_judgment,
                              se_beta_vacuous, sr_step, subst_derivation,
                              suite_struct_subst, suite_subject_expansion,
                              suite_subject_reduction, suite_term_subst,
                              top_typed, var_typed)
from lammu.reduction import redexes, step, subst_term
from lammu.syntax import Var, alpha_eq
from lammu.typelang import Top, TVar, Union, type_equiv

A1, A2 = TVar("A1"), TVar("A2")


class TestGenerator:
    def test_generated_derivations_check(self):
        rng = random.Random(42)
        for _ in range(30):
            d = gen_typed_judgment(rng)
            check_derivation(d)

    def test_deterministic_per_seed(self):
        a = gen_typed_judgment(random.Random(9)).conclusion
        b = gen_typed_judgment(random.Random(9)).conclusion
        assert a.term == b.term and type_equiv(a.ty, b.ty)

    def test_base_environment_helpers(self):
        gamma, delta = base_environments()
        d = top_typed(gamma, Var("v1"), delta)
        check_derivation(d)
        assert d.conclusion.ty == Top
        for ty in gamma.values():
            w = var_typed(gamma, ty, delta)
            assert w is not None
            check_derivation(w)


class TestTransforms:
    def test_substitution_preserves_the_typing(self):
        rng = random.Random(4)
        gamma, delta = base_environments()
        from lammu.metatheory import INTER_POOL, Generator
        for _ in range(20):
            gen = Generator(rng)
            c = rng.choice(INTER_POOL)
            dN = gen.judgment(gamma, delta, goal=c)
            if dN is None:
                continue
            x = "s" + gen.fresh_var()
            dM = gen.judgment({**gamma, x: c}, delta)
            if dM is None:
                continue
            out = subst_derivation(dM, x, dN)
            check_derivation(out)
            want = subst_term(dM.conclusion.term, x, dN.conclusion.term)
            assert out.conclusion.term == want

    def test_sr_step_preserves_term_and_type(self):
        rng = random.Random(8)
        checked = 0
        while checked < 20:
            d = gen_typed_judgment(rng)
            rs = redexes(d.conclusion.term, {"beta", "mu", "renaming"})
            if not rs:
                continue
            pos, rule = rs[0]
            out = sr_step(d, pos, rule)
            check_derivation(out)
            assert out.conclusion.term == step(d.conclusion.term, pos, rule)
            assert type_equiv(out.conclusion.ty, d.conclusion.ty)
            checked += 1

    def test_beta_expansion(self):
        rng = random.Random(5)
        gamma, delta = base_environments()
        d = var_typed(gamma, gamma["v1"], delta)
        exp, red, rule = se_beta_vacuous(d, rng, "fresh0")
        check_derivation(exp)
        assert rule == "beta"
        assert alpha_eq(step(exp.conclusion.term, (), rule),
                        red.conclusion.term)


class TestSuites:
    def test_term_subst_small(self):
        report = suite_term_subst(seed=3, cases=40)
        assert report.run == 40
        assert report.fail == 0

    def test_struct_subst_small(self):
        report = suite_struct_subst(seed=3, cases=40)
        assert report.run == 40
        assert report.fail == 0

    def test_subject_reduction_small(self):
        report = suite_subject_reduction(seed=3, cases=60)
        assert report.fail == 0

    def test_subject_expansion_small(self):
        report = suite_subject_expansion(seed=3, cases=60)
        assert report.fail == 0

    def test_report_rendering(self):
        report = suite_term_subst(seed=1, cases=5)
        assert report.summary() == "SUITE term-subst RUN 5 FAIL 0 BUDGET_MISS 0"
        assert report.summary() in report.render()


class TestErasingDemo:
    def test_counterexample(self):
        rep = demo_erasing_failure()
        before = rep["derivation_before"]
        check_derivation(before)
        j = rep["judgment_before"]
        assert type_equiv(j.ty, Union((A1, A2)))
        assert rep["step"][1] == "erasing"
        assert rep["term_after"] == Var("x")
        assert not rep["derivable_after"]
        assert not rep["search_found_after"]
        assert derive(j.gamma, rep["term_after"], j.ty, j.delta) is None
