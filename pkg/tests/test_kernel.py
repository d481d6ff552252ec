import pytest

import satkit.syntax as sx
import satkit.template as tp
from satkit.corpus import (
    axiom_instances, base_corpus, commute_or_proof, mprop_entries,
    neq_from_hypotheses, omega_demo_proof,
)
from satkit.elements import Sym, std, sym
from satkit.kernel import (
    KernelError, M_FREE_POLICY, M_POLICY, Proof, RulePolicy, Sequent,
    Uniform, check, match_instance, seq, vee,
)
from satkit.skolem import quantseq, table_of


def c(n):
    return sx.const(std(n))


def v(i):
    return sx.Var(i)


e, n, o = sx.Eq, sx.Not, sx.Or
ZERO_EQ = e(sx.ZERO, sx.ZERO)
ONE_EQ = e(sx.Succ(sx.ZERO), sx.Succ(sx.ZERO))


class TestSequents:
    def test_set_semantics(self):
        assert seq(ZERO_EQ, ZERO_EQ) == seq(ZERO_EQ)

    def test_open_sentence_rejected(self):
        with pytest.raises(KernelError):
            seq(e(v(0), sx.ZERO))

    def test_abbreviation_rejected(self):
        with pytest.raises(KernelError):
            seq(sx.And(ZERO_EQ, ZERO_EQ))

    def test_canonical_disjunction_is_code_ordered(self):
        d = vee({ZERO_EQ, ONE_EQ, n(ZERO_EQ)})
        assert isinstance(d, sx.Or)
        assert vee({ONE_EQ, n(ZERO_EQ), ZERO_EQ}) == d
        assert vee(()) == sx.FALSUM


class TestFigureTrees:
    def test_commutativity_proof_checks_with_height(self):
        p = commute_or_proof(ZERO_EQ, ONE_EQ)
        rep = check(p, M_POLICY)
        assert rep.ok and rep.height == 6

    def test_hypothesis_proof_checks(self):
        t = sx.Add(sx.Succ(sx.ZERO), sx.Succ(sx.ZERO))
        r = sx.Mul(c(2), c(3))
        hyps = {e(t, c(2)), e(r, c(6))}
        p = neq_from_hypotheses(t, r, std(2), std(6))
        rep = check(p, RulePolicy(extra_axioms=hyps.__contains__))
        assert rep.ok

    def test_hypothesis_proof_fails_without_oracle(self):
        t = sx.Add(sx.Succ(sx.ZERO), sx.Succ(sx.ZERO))
        p = neq_from_hypotheses(t, c(9), std(2), std(9))
        rep = check(p, M_POLICY)
        assert not rep.ok

    def test_omega_demo_never_completes(self):
        rep = check(omega_demo_proof(), M_POLICY)
        assert not rep.ok
        assert "complete" in (rep.first_error() or "")


class TestAxiomMatching:
    def test_all_axiom_instances(self):
        for entry in axiom_instances():
            assert check(entry.proof, entry.policy).ok, entry.name

    def test_axiom2_needs_distinct_elements(self):
        bad = Proof(seq(n(e(c(3), c(3)))), "axiom2")
        assert not check(bad, M_POLICY).ok

    def test_axiom9_ground_arithmetic(self):
        good = Proof(seq(e(sx.Succ(c(4)), c(5))), "axiom9")
        bad = Proof(seq(e(sx.Succ(c(4)), c(6))), "axiom9")
        assert check(good, M_POLICY).ok
        assert not check(bad, M_POLICY).ok

    def test_axiom9_symbolic(self):
        a = sym("a")
        good = Proof(seq(e(sx.Succ(sx.const(a)), sx.const(Sym("a", a.coeff, 1)))),
                     "axiom9")
        assert check(good, M_POLICY).ok

    def test_axiom12_excluded_in_free_mode(self):
        p = Proof(seq(sx.Ex(0, e(sx.Succ(sx.ZERO), v(0)))), "axiom12")
        assert check(p, M_POLICY).ok
        assert not check(p, M_FREE_POLICY).ok

    def test_free_proofs_check_in_full_logic(self):
        for entry in base_corpus():
            rep_free = check(entry.proof, RulePolicy(
                logic="m-free", extra_axioms=entry.policy.extra_axioms))
            if rep_free.ok:
                rep_full = check(entry.proof, RulePolicy(
                    logic="m", extra_axioms=entry.policy.extra_axioms))
                assert rep_full.ok


class TestRuleArity:
    def test_cut_with_one_premise(self):
        ax = Proof(seq(ZERO_EQ), "axiom3")
        bad = Proof(seq(ZERO_EQ), "cut", (ax,))
        rep = check(bad, M_POLICY)
        assert not rep.ok and "two premises" in rep.first_error()

    def test_weak_cannot_add_two(self):
        ax = Proof(seq(ZERO_EQ), "axiom3")
        bad = Proof(seq(ZERO_EQ, ONE_EQ, n(n(ZERO_EQ))), "weak", (ax,))
        assert not check(bad, M_POLICY).ok

    def test_corrupted_node_rejected(self):
        p = commute_or_proof(ZERO_EQ, ONE_EQ)
        bad = Proof(seq(o(ONE_EQ, ZERO_EQ)), p.rule, p.premises, p.uniform)
        assert not check(bad, M_POLICY).ok


class TestExistentialRules:
    def test_witness_inference(self):
        body = e(v(0), c(3))
        p = Proof(seq(sx.Ex(0, body)), "ex-i",
                  (Proof(seq(e(c(3), c(3))), "axiom3"),))
        assert check(p, M_POLICY).ok  # witness found by matching

    def test_wrong_instance_rejected(self):
        body = e(v(0), c(3))
        p = Proof(seq(sx.Ex(0, body)), "ex-i",
                  (Proof(seq(e(c(4), c(4))), "axiom3"),))
        assert not check(p, M_POLICY).ok

    def test_match_instance_consistency(self):
        body = e(sx.Add(v(0), v(0)), c(4))
        assert match_instance(body, 0, e(sx.Add(c(2), c(2)), c(4))) == [std(2)]
        assert match_instance(body, 0, e(sx.Add(c(2), c(3)), c(4))) is None

    def test_m_rule_requires_fresh_parameter(self):
        base = "p"
        inst = n(e(sx.Succ(sx.const(Sym(base))), sx.ZERO))
        schema = Proof(seq(inst), "axiomL")
        target = n(sx.Ex(0, e(sx.Succ(v(0)), sx.ZERO)))
        # conclusion mentioning the parameter base is rejected
        poisoned = Proof(
            Sequent(frozenset((target, e(sx.const(Sym(base)), sx.const(Sym(base)))))),
            "m-rule", (), Uniform((base,), schema, ((std(0),),)))
        rep = check(poisoned, RulePolicy(extra_axioms=lambda f: True))
        assert not rep.ok and "fresh" in rep.first_error()

    def test_m_rule_sampling_catches_bad_instance(self):
        # schema claims c_p != c_17, which fails at the sample p := 17
        base = "p"
        schema = Proof(seq(n(e(sx.const(Sym(base)), c(17)))), "axiom2")
        target = n(sx.Ex(0, e(v(0), c(17))))
        node = Proof(seq(target), "m-rule", (),
                     Uniform((base,), schema, ((std(17),),)))
        rep = check(node, M_POLICY)
        assert not rep.ok

    def test_m_rule_structural_parametricity_catches_bad_axiom2(self):
        # even without the witnessing sample, the parametric check rejects
        base = "p"
        schema = Proof(seq(n(e(sx.const(Sym(base)), c(17)))), "axiom2")
        target = n(sx.Ex(0, e(v(0), c(17))))
        node = Proof(seq(target), "m-rule", (),
                     Uniform((base,), schema, ((std(0),), (std(1),))))
        assert not check(node, M_POLICY).ok

    def test_unsampled_uniform_rejected(self):
        base = "p"
        schema = Proof(seq(n(e(sx.Succ(sx.const(Sym(base))), sx.ZERO))), "axiomL")
        target = n(sx.Ex(0, e(sx.Succ(v(0)), sx.ZERO)))
        node = Proof(seq(target), "m-rule", (), Uniform((base,), schema, ()))
        rep = check(node, RulePolicy(extra_axioms=lambda f: True))
        assert not rep.ok and "unsampled" in rep.first_error().lower()


class TestExtendedRules:
    def test_prop_rule(self):
        for entry in mprop_entries():
            assert check(entry.proof, entry.policy).ok, entry.name

    def test_prop_rule_needs_policy_flag(self):
        entry = mprop_entries()[0]
        assert not check(entry.proof, M_POLICY).ok

    def test_block_instantiation(self):
        # exists v0 v1 v2 (v0 + v1 = v2) instantiated by a coded triple
        body = e(sx.Add(v(0), v(1)), v(2))
        target = sx.Ex(0, sx.Ex(1, sx.Ex(2, body)))
        inst = e(sx.Add(c(2), c(3)), c(5))
        prem = Proof(seq(inst), "axiomL")
        node = Proof(seq(target), "i-ex-inf", (prem,),
                     info={"block": (0, 1, 2), "tuple": (std(2), std(3), std(5))})
        pol = RulePolicy(allow_inf=True, extra_axioms={inst}.__contains__)
        assert check(node, pol).ok

    def test_block_arity_mismatch(self):
        body = e(sx.Add(v(0), v(1)), v(2))
        target = sx.Ex(0, sx.Ex(1, sx.Ex(2, body)))
        inst = e(sx.Add(c(2), c(3)), c(5))
        prem = Proof(seq(inst), "axiomL")
        node = Proof(seq(target), "i-ex-inf", (prem,),
                     info={"block": (0, 1, 2), "tuple": (std(2), std(3))})
        pol = RulePolicy(allow_inf=True, extra_axioms={inst}.__contains__)
        rep = check(node, pol)
        assert not rep.ok and "arity" in rep.first_error()

    def test_m_inf_block_schema(self):
        # not exists v0 v1 (Sc(v0 + v1) = 0) via a two-parameter schema
        body = e(sx.Succ(sx.Add(v(0), v(1))), sx.ZERO)
        target = n(sx.Ex(0, sx.Ex(1, body)))
        pa, pb = Sym("pa"), Sym("pb")
        inst = n(e(sx.Succ(sx.Add(sx.const(pa), sx.const(pb))), sx.ZERO))
        schema = Proof(seq(inst), "axiomL")
        node = Proof(seq(target), "m-inf", (),
                     Uniform(("pa", "pb"), schema, ((std(0), std(0)), (std(2), std(5)))),
                     info={"block": (0, 1)})
        pol = RulePolicy(allow_inf=True, extra_axioms=lambda f: True)
        assert check(node, pol).ok

    def test_skolem_rule(self):
        q = quantseq(("A", 0), ("E", 1))
        phi = e(v(1), sx.Succ(v(0)))
        table = table_of({(k,): (k + 1,) for k in range(3)})
        samples = ((0,), (1,), (2,))
        from satkit.skolem import apply_skolem, build_prefixed
        target = build_prefixed(q, phi)
        prems = tuple(
            Proof(seq(apply_skolem(phi, q, table, a)), "axiomL") for a in samples)
        node = Proof(seq(target), "skolem", prems,
                     info={"skolem": {"q": q, "table": table, "phi": phi,
                                      "samples": samples}})
        pol = RulePolicy(allow_skolem=True, extra_axioms=lambda f: True)
        assert check(node, pol).ok

    def test_pred_rule_quantifier_axiom(self):
        from satkit.propcalc import CertLine, PropCertificate, imp
        exists = sx.Ex(0, e(v(0), c(2)))
        inst = e(c(2), c(2))
        prem = Proof(seq(inst), "axiom3")
        cert = PropCertificate((
            CertLine(inst, ("hyp",)),
            CertLine(imp(inst, exists), ("ax-fo",)),
            CertLine(exists, ("mp", 1, 0)),
        ))
        node = Proof(seq(exists), "pred", (prem,), info={"prop": {"cert": cert}})
        rep = check(node, RulePolicy(allow_pred=True))
        assert rep.ok
        # the same certificate is rejected in the propositional rule
        node2 = Proof(seq(exists), "prop", (prem,), info={"prop": {"cert": cert}})
        assert not check(node2, RulePolicy(allow_prop=True)).ok


class TestDerivedCalculus:
    def test_structural_rules_map_to_certified_steps(self):
        from satkit.transform import to_certified_calculus
        for entry in base_corpus():
            pol = RulePolicy(allow_prop=True,
                             extra_axioms=entry.policy.extra_axioms)
            converted = to_certified_calculus(entry.proof)
            rep = check(converted, pol)
            assert rep.ok, (entry.name, rep.first_error())
            assert converted.conclusion == entry.proof.conclusion

    def test_inconsistency_assembly_and_explosion(self):
        # from proofs of a sentence and its negation, a proof of the empty
        # set by cut; from the empty set, any sentence by weakening
        phi = ZERO_EQ
        lam = {n(phi)}
        pol = RulePolicy(extra_axioms=lam.__contains__)
        p_pos = Proof(seq(phi), "axiom3")
        p_neg = Proof(seq(n(phi)), "axiomL")
        empty = Proof(Sequent(frozenset()), "cut", (p_pos, p_neg))
        rep = check(empty, pol)
        assert rep.ok
        anything = Proof(seq(e(c(5), c(6))), "weak", (empty,))
        assert check(anything, pol).ok


class TestTemplateLogic:
    def test_template_axioms(self):
        boxed = tp.TemplForm(ZERO_EQ)
        a1 = Proof(Sequent(frozenset((boxed, n(boxed)))), "axiom1")
        assert check(a1, RulePolicy(logic="template")).ok
        t = tp.TemplTerm(sx.Succ(sx.ZERO))
        a3 = Proof(Sequent(frozenset((e(t, t),))), "axiom3")
        assert check(a3, RulePolicy(logic="template")).ok
        a12 = Proof(Sequent(frozenset((sx.Ex(0, e(t, v(0))),))), "axiom12")
        assert check(a12, RulePolicy(logic="template")).ok
        assert not check(a12, RulePolicy(logic="template-free")).ok

    def test_ground_logic_rejects_templates(self):
        boxed = tp.TemplForm(ZERO_EQ)
        a1 = Proof(Sequent(frozenset((boxed, n(boxed)))), "axiom1")
        assert not check(a1, M_POLICY).ok
