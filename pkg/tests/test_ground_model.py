import random

import pytest

import satkit.syntax as sx
from satkit.elements import std
from satkit.ground_model import (
    FALSE, TRUE, UNKNOWN, OpenTerm, WrongClass, check_class, decide_delta0,
    eval_tr, is_delta0, is_sigma, match_bounded_exists, val,
)
from generators import direct_eval, random_bounded_sentence, random_term


def c(n):
    return sx.const(std(n))


class TestVal:
    def test_product(self):
        t = sx.Mul(sx.numeral(std(2)), sx.numeral(std(3)))
        assert val(t) == std(6)

    def test_constant_plus_one(self):
        assert val(sx.Add(c(7), sx.Succ(sx.ZERO))) == std(8)

    def test_numeral_loop(self):
        for k in range(0, 1001, 7):
            assert val(sx.numeral(std(k))) == std(k)
        assert val(sx.numeral(std(1000))) == std(1000)

    def test_open_term_rejected(self):
        with pytest.raises(OpenTerm):
            val(sx.Add(sx.Var(0), sx.ZERO))

    def test_homomorphism_clauses(self):
        rng = random.Random(2)
        for _ in range(1000):
            t = random_term(rng, 3, closed=True)
            r = random_term(rng, 2, closed=True)
            assert val(sx.Succ(t)) == std(val(t).n + 1)
            assert val(sx.Add(t, r)) == std(val(t).n + val(r).n)
            assert val(sx.Mul(t, r)) == std(val(t).n * val(r).n)


class TestClassChecker:
    def test_atomic(self):
        assert check_class(sx.Eq(c(1), c(1)), "at")
        assert not check_class(sx.Not(sx.Eq(c(1), c(1))), "at")

    def test_bounded_pattern_recognized(self):
        f = sx.expand_abbreviation(
            sx.BEx(0, c(10), sx.Eq(sx.Mul(sx.Var(0), sx.Var(0)), c(49))))
        m = match_bounded_exists(f)
        assert m is not None and m[0] == 0
        assert is_delta0(f)

    def test_bare_exists_is_not_delta0(self):
        f = sx.Ex(0, sx.Eq(sx.Var(0), c(3)))
        assert not is_delta0(f)
        assert is_sigma(f, 1)

    def test_wrong_class_raises(self):
        f = sx.Ex(0, sx.Eq(sx.Var(0), c(3)))
        with pytest.raises(WrongClass):
            eval_tr(f, "d0")


class TestEvalTr:
    def test_atomic_truth(self):
        f = sx.Eq(sx.Add(sx.Succ(sx.ZERO), sx.Succ(sx.ZERO)),
                  sx.Succ(sx.Succ(sx.ZERO)))
        assert eval_tr(f, "at") is TRUE

    def test_bounded_search_finds_witness(self):
        f = sx.expand_abbreviation(
            sx.BEx(0, c(10), sx.Eq(sx.Mul(sx.Var(0), sx.Var(0)), c(49))))
        assert eval_tr(f, "d0") is TRUE

    def test_fuel_exhaustion_is_unknown(self):
        f = sx.Ex(0, sx.Eq(sx.Mul(sx.Var(0), sx.Var(0)), c(50)))
        assert eval_tr(f, "s1", fuel=10) is UNKNOWN
        # direct knowledge: 50 is not a square, so no fuel suffices
        assert all(n * n != 50 for n in range(50))

    def test_delta0_never_unknown(self):
        rng = random.Random(4)
        for _ in range(300):
            ext = random_bounded_sentence(rng, 3, max_const=30, max_bound=10)
            prim = sx.expand_abbreviation(ext)
            assert not eval_tr(prim, "d0", 0).is_unknown()

    def test_agrees_with_independent_oracle(self):
        rng = random.Random(6)
        for _ in range(1000):
            ext = random_bounded_sentence(rng, 3, max_const=50, max_bound=20)
            prim = sx.expand_abbreviation(ext)
            got = eval_tr(prim, "d0", 0)
            want = direct_eval(ext, {})
            assert got is (TRUE if want else FALSE)

    def test_decide_delta0(self):
        assert decide_delta0(sx.Eq(sx.ZERO, sx.ZERO))
        assert not decide_delta0(sx.Eq(sx.ZERO, sx.Succ(sx.ZERO)))
