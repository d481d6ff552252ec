from itertools import product

import pytest

import satkit.syntax as sx
import satkit.template as tp
from satkit.congruence import build_quotient, subterm_closure
from satkit.corpus import (
    base_corpus, commute_or_proof, template_tautology_corpus,
)
from satkit.eldiag import prove_eldiag
from satkit.elements import Std, Sym, std, sym
from satkit.ground_model import FALSE, TRUE, UNKNOWN, eval_tr
from satkit.kernel import (
    M_POLICY, Proof, Sequent, TEMPLATE_POLICY, check, seq,
)
from satkit.semantics import (
    BadWitnessParams, OracleUndecided, SoundnessViolation,
    TStructure, audit_soundness, check_fragment, delta_structure,
    fragment_structure, free_tower, gallery, ground_truth_structure,
    henkin_extend, models, quotient_witness, sc_tower, structure_oracle,
    tr_sigma, val_t,
)
from satkit.translate import translate_proof

e, n, o = sx.Eq, sx.Not, sx.Or


def c(k):
    return sx.const(std(k))


def dict_structure(truths, values=None, name="adhoc", **kw):
    values = values or {}
    return TStructure(
        name,
        lambda f: f in truths,
        lambda t: values.get(t, Std(0)),
        **kw,
    )


class TestValuation:
    def test_boxed_term_reads_the_map(self):
        t = sx.Succ(sx.ZERO)
        s = dict_structure(set(), {t: std(9)})
        assert val_t(s, tp.TemplTerm(t)) == std(9)

    def test_homomorphism_clause(self):
        t = sx.Succ(sx.ZERO)
        s = dict_structure(set(), {t: std(9)})
        assert val_t(s, sx.Succ(tp.TemplTerm(t))) == std(10)
        assert val_t(s, sx.Add(tp.TemplTerm(t), c(4))) == std(13)


class TestModels:
    def test_boxed_formula_reads_the_oracle(self):
        phi = e(sx.ZERO, sx.ZERO)
        s = dict_structure({phi})
        assert models(s, tp.TemplForm(phi)) is TRUE
        assert models(s, tp.TemplForm(n(phi))) is FALSE

    def test_left_disjunct_wins_regardless_of_oracle(self):
        psi = e(c(5), c(6))
        s = dict_structure(set())
        f = o(e(sx.ZERO, sx.ZERO), tp.TemplForm(psi))
        assert models(s, f) is TRUE

    def test_exists_finds_standard_witness(self):
        s = dict_structure(set())
        f = sx.Ex(0, e(sx.Var(0), c(3)))
        assert models(s, f, fuel=8) is TRUE

    def test_exists_generic_refutation(self):
        s = dict_structure(set())
        f = sx.Ex(0, e(sx.Succ(sx.Var(0)), sx.ZERO))
        assert models(s, f, fuel=8) is FALSE

    def test_exists_unknown_on_exhaustion(self):
        s = dict_structure(set())
        f = sx.Ex(0, e(sx.Mul(sx.Var(0), sx.Var(0)), c(49)))
        assert models(s, f, fuel=3) is UNKNOWN


class TestGallery:
    def test_delta_structure_depth_eight(self):
        a = sym("a")
        t = delta_structure(a)
        target = sx.delta(a)
        steps = [sx.delta(Sym("a", a.coeff, -k)) for k in range(9)]
        for k in range(9):
            approx = tp.apply_to_object(tp.ApproxChain(tuple(steps[:k])), target)
            assert models(t, approx, fuel=4) is TRUE

    def test_delta_structure_requires_symbolic_index(self):
        with pytest.raises(BadWitnessParams):
            delta_structure(std(4))

    def test_sc_tower_valuations(self):
        for family in ("num", "addtower"):
            h, a = sym("h"), sym("a")
            t = sc_tower(family, h, a)
            root = sx.SymTermRef(family, h)
            for k in range(11):
                chain = tp.ApproxChain(tuple(
                    sx.SymTermRef(family, Sym("h", h.coeff, -j)) for j in range(k)))
                assert val_t(t, tp.apply_to_object(chain, root)) == a
            target = e(root, sx.const(a))
            assert models(t, tp.TemplForm(target)) is TRUE

    def test_multiplication_tower_rejected(self):
        with pytest.raises(BadWitnessParams):
            sc_tower("multower", sym("h"), sym("a"))

    def test_prime_counterexample_desk_instance(self):
        # a multiplication-bearing tower instantiated at desk scale is
        # refuted outright for a prime target
        t = sx.Mul(sx.Succ(sx.Succ(c(1))), sx.Succ(sx.Succ(sx.ZERO)))  # 3 * 2
        target = e(t, c(7))
        p = prove_eldiag(target)
        assert p.conclusion.sentences == {n(target)}
        assert check(p, M_POLICY).ok

    def test_tr_sigma_oracle(self):
        s = tr_sigma(1)
        assert models(s, tp.TemplForm(e(c(2), c(2)))) is TRUE
        assert models(s, tp.TemplForm(e(c(2), c(3)))) is FALSE
        exists = sx.Ex(0, e(sx.Var(0), c(3)))
        assert models(s, tp.TemplForm(exists)) is TRUE

    def test_quotient_witness_values_through_canonical_map(self):
        lhs = sx.Add(sx.Succ(sx.ZERO), sx.Succ(sx.ZERO))
        uni = subterm_closure([lhs, c(2), c(1)])
        q = build_quotient([(lhs, c(2)), (sx.Succ(sx.ZERO), c(1))], uni)
        assert q.injective_on_constants and q.surjective_on_universe
        s = quotient_witness(q)
        assert val_t(s, tp.TemplTerm(lhs)) == std(2)
        assert models(s, tp.TemplForm(e(lhs, c(2)))) is TRUE

    def test_quotient_witness_requires_bijection(self):
        lhs = sx.Add(sx.Succ(sx.ZERO), sx.Succ(sx.ZERO))
        uni = subterm_closure([lhs, c(2), c(1)])
        q = build_quotient([(lhs, c(2))], uni)  # Sc(0) is never named
        assert not q.surjective_on_universe
        with pytest.raises(BadWitnessParams):
            quotient_witness(q)

    def test_free_tower_negated_existential(self):
        a, b = sym("a"), sym("b")
        t = free_tower(a, b)
        assert not t.supports_axiom12
        target = n(sx.Ex(0, e(sx.numeral(a), sx.Var(0))))
        base_chain = [target, target.body, e(sx.numeral(a), sx.Var(0)), sx.Var(0)]
        for k in range(7):
            steps = base_chain + [sx.numeral(Sym("a", a.coeff, -j)) for j in range(k)]
            f = tp.normalize(tp.ApproxChain(tuple(steps)))
            approx = tp.apply_to_object(f, target)
            assert models(t, approx, fuel=6) is TRUE

    def test_gallery_front_door(self):
        assert gallery("delta", a=sym("a")).name.startswith("delta")
        with pytest.raises(BadWitnessParams):
            gallery("unknown-witness")


class TestAudit:
    def _structures(self):
        return [
            delta_structure(sym("a")),
            sc_tower("num", sym("h"), sym("a")),
            tr_sigma(1),
            ground_truth_structure(),
            free_tower(sym("a"), sym("b")),
        ]

    def test_matrix_never_false(self):
        entries = base_corpus()
        structures = self._structures()
        audited = 0
        for entry in entries:
            res = translate_proof(entry.proof, entry.policy)
            for s in structures:
                report = audit_soundness(res.proof, s, fuel=8)
                if report.applicable:
                    audited += 1
                    assert not report.verdict.is_false()
        assert audited >= len(entries)  # at least one structure per proof

    def test_axiom_leaf_true_everywhere(self):
        p = Proof(seq(e(sx.Succ(c(4)), c(5))), "axiom9")
        res = translate_proof(p, M_POLICY)
        for s in self._structures():
            report = audit_soundness(res.proof, s, fuel=8)
            if report.applicable:
                assert report.verdict is TRUE

    def test_corrupted_proof_rejected_before_audit(self):
        p = commute_or_proof(e(sx.ZERO, sx.ZERO), e(c(2), c(2)))
        res = translate_proof(p, M_POLICY)
        bad = Proof(Sequent(frozenset((tp.TemplForm(e(c(1), c(2))),))),
                    res.proof.rule, res.proof.premises, res.proof.uniform)
        assert not check(bad, TEMPLATE_POLICY).ok

    def test_soundness_violation_raises(self):
        # a deliberately wrong conclusion evaluated directly
        lie = Proof(Sequent(frozenset((e(sx.ZERO, sx.Succ(sx.ZERO)),))), "axiom3")
        with pytest.raises(SoundnessViolation):
            audit_soundness(lie, ground_truth_structure(), fuel=4)


class TestCompletenessSmoke:
    def test_tautologies_true_in_all_small_structures_and_proved(self):
        corpus = template_tautology_corpus(100)
        assert len(corpus) == 100
        for item in corpus:
            # enumerate every structure over the finite template universe
            for bits in product((False, True), repeat=len(item.atoms)):
                truths = {a for a, b in zip(item.atoms, bits) if b}
                s = dict_structure(truths)
                assert models(s, item.formula, fuel=4) is TRUE
            rep = check(item.proof, TEMPLATE_POLICY)
            assert rep.ok, item.name
            assert item.proof.conclusion.sentences == {item.formula}


class TestHenkin:
    def test_ground_truth_fragment(self):
        enum = []
        for k in range(12):
            enum.append(e(sx.numeral(std(k % 4)), sx.numeral(std(k % 3))))
        enum.append(sx.Ex(0, e(sx.Var(0), c(3))))
        enum.append(n(e(sx.ZERO, sx.Succ(sx.ZERO))))
        frag = henkin_extend([], enum, budget=16)
        rep = check_fragment(frag)
        assert rep.passed, rep.failures
        for f in enum:
            want = eval_tr(f, "s1", 32) is TRUE
            assert frag.decided[f] == want

    def test_existential_gets_witness(self):
        exists = sx.Ex(0, e(sx.Var(0), c(3)))
        frag = henkin_extend([], [exists], budget=8)
        assert frag.decided[exists]
        assert frag.witnesses[exists] == std(3)
        inst = e(c(3), c(3))
        assert frag.decided[inst]

    def test_delta_family_accepted(self):
        a = sym("a")
        lam = [sx.delta(a)]
        enum = [sx.delta(Sym("a", a.coeff, -k)) for k in range(1, 7)]
        frag = henkin_extend(lam, enum,
                             oracle=structure_oracle(delta_structure(a)))
        for f in enum:
            assert frag.decided[f] is True
        assert frag.consistent_pairing()
        rep = check_fragment(frag)
        assert rep.passed, rep.failures

    def test_delta_family_with_mixed_enumeration(self):
        a = sym("a")
        lam = [sx.delta(a)]
        enum = [sx.delta(Sym("a", a.coeff, -k)) for k in range(1, 7)]
        enum += [e(sx.ZERO, sx.ZERO), e(c(1), c(2))]
        oracle = structure_oracle(delta_structure(a, with_ground_truth=True))
        frag = henkin_extend(lam, enum, oracle=oracle)
        assert all(frag.decided[f] for f in enum[:-2])
        assert frag.decided[e(sx.ZERO, sx.ZERO)] is True
        assert frag.decided[e(c(1), c(2))] is False
        rep = check_fragment(frag)
        assert rep.passed, rep.failures

    def test_oracle_undecided_halts(self):
        # an oracle that cannot certify either branch
        def mute(sentences):
            return False

        with pytest.raises(OracleUndecided):
            henkin_extend([], [e(sx.ZERO, sx.ZERO)], oracle=mute)

    def test_fragment_induces_structure(self):
        enum = [e(sx.numeral(std(k)), sx.numeral(std(k))) for k in range(4)]
        enum += [e(sx.Add(c(1), c(1)), c(2)), n(e(c(1), c(2)))]
        frag = henkin_extend([], enum, budget=8)
        s = fragment_structure(frag)
        for f, value in frag.decided.items():
            boxed = tp.TemplForm(f)
            assert models(s, boxed, fuel=8) is (TRUE if value else FALSE)
            # every chain image of an accepted member stays true
            if value:
                full = tp.full_depth_approx([f], 2)
                assert models(s, tp.apply_to_object(full, f), fuel=8) is not FALSE
