import random

import pytest

import satkit.syntax as sx
from satkit.elements import std
from satkit.ground_model import eval_tr
from satkit.skolem import (
    ArityMismatch, GridMiss, QuantSeq, apply_skolem, build_prefixed,
    count_exists, count_forall, f_q, find_skolem_table, g_exists, g_forall,
    is_skolem_operator, quantseq, table_of,
)

e = sx.Eq


def c(k):
    return sx.const(std(k))


def v(i):
    return sx.Var(i)


# independent positional-scan oracle, written against the informal reading


def scan_f_q(items, j):
    """Universals strictly before the j-th existential (all of them when
    fewer than j existentials occur)."""
    if j <= 0:
        return 0
    seen_e = 0
    count_a = 0
    for kind, _ in items:
        if kind == "E":
            seen_e += 1
            if seen_e == j:
                return count_a
        else:
            count_a += 1
    return count_a


def scan_g(items, kind, x):
    hits = [i for k, i in items if k == kind]
    return hits[x] if x < len(hits) else 0


def random_quantseq(rng, max_len=8, max_var=4):
    return QuantSeq(tuple(
        (rng.choice("AE"), rng.randrange(max_var))
        for _ in range(rng.randrange(max_len + 1))))


class TestPositionalFunctions:
    def test_single_exists(self):
        q = quantseq(("E", 0))
        assert count_exists(q) == 1
        assert f_q(q, 1) == 0

    def test_forall_then_exists(self):
        q = quantseq(("A", 0), ("E", 1))
        assert f_q(q, 1) == 1

    def test_trailing_forall_not_counted(self):
        q = quantseq(("A", 0), ("E", 1), ("A", 0))
        assert f_q(q, 1) == 1

    def test_agrees_with_scan_oracle(self):
        rng = random.Random(71)
        for _ in range(1000):
            q = random_quantseq(rng)
            for j in range(0, len(q) + 2):
                assert f_q(q, j) == scan_f_q(q.items, j)
                assert g_forall(q, j) == scan_g(q.items, "A", j)
                assert g_exists(q, j) == scan_g(q.items, "E", j)
            assert count_exists(q) == sum(1 for k, _ in q.items if k == "E")


class TestOperatorCheck:
    def test_constant_table(self):
        q = quantseq(("A", 0), ("E", 1))
        t = table_of({(k,): (7,) for k in range(4)})
        assert is_skolem_operator(t, q)

    def test_copy_table(self):
        q = quantseq(("A", 0), ("E", 1))
        t = table_of({(k,): (k,) for k in range(4)})
        assert is_skolem_operator(t, q)

    def test_exists_first_admits_no_dependence(self):
        # the first output may not read any input coordinate
        q = quantseq(("E", 0), ("A", 1))
        t = table_of({(0,): (0,), (1,): (1,)})
        assert not is_skolem_operator(t, q)
        const = table_of({(0,): (5,), (1,): (5,)})
        assert is_skolem_operator(const, q)

    def test_arity_mismatch(self):
        q = quantseq(("A", 0), ("E", 1))
        t = table_of({(0,): (1, 2)})
        with pytest.raises(ArityMismatch):
            is_skolem_operator(t, q)


class TestApplySkolem:
    def test_copy_instance(self):
        q = quantseq(("A", 0), ("E", 1))
        t = table_of({(5,): (5,)})
        got = apply_skolem(e(v(0), v(1)), q, t, (5,))
        assert got == e(c(5), c(5))

    def test_rebinding_resolves_to_second_forall(self):
        q = quantseq(("A", 0), ("E", 1), ("A", 0))
        t = table_of({(x, y): (9,) for x in range(3) for y in range(3)})
        got = apply_skolem(e(v(0), v(1)), q, t, (1, 2))
        assert got == e(c(2), c(9))  # the later binder carries v0

    def test_grid_miss(self):
        q = quantseq(("A", 0), ("E", 1))
        t = table_of({(0,): (0,)})
        with pytest.raises(GridMiss):
            apply_skolem(e(v(0), v(1)), q, t, (3,))

    def test_closedness(self):
        rng = random.Random(73)
        for _ in range(200):
            q = random_quantseq(rng, max_len=6, max_var=3)
            bound = {i for _, i in q.items}
            if not bound:
                continue
            pool = sorted(bound)
            body = e(sx.Add(v(rng.choice(pool)), c(rng.randrange(4))),
                     v(rng.choice(pool)))
            table = table_of({
                key: tuple(rng.randrange(5) for _ in range(count_exists(q)))
                for key in {tuple(rng.randrange(3) for _ in range(count_forall(q)))
                            for _ in range(4)}})
            try:
                got = apply_skolem(body, q, table, next(iter(table.inputs())))
            except GridMiss:
                continue
            assert sx.is_closed(got)

    def test_prefixed_sentence_shape(self):
        q = quantseq(("A", 0), ("E", 1))
        f = build_prefixed(q, e(v(0), v(1)))
        assert f == sx.Not(sx.Ex(0, sx.Not(sx.Ex(1, e(v(0), v(1))))))


class TestWitnessSearch:
    def test_finds_tables_for_true_forall_exists(self):
        rng = random.Random(79)

        def truth(sentence):
            return eval_tr(sentence, "d0", 64).is_true()

        q = quantseq(("A", 0), ("E", 1))
        found = 0
        for _ in range(50):
            k = rng.randrange(0, 6)
            # for every x below the grid there is y with x + k = y
            phi = e(sx.Add(v(0), c(k)), v(1))
            table = find_skolem_table(phi, q, grid=6, search=16, truth=truth)
            assert table is not None
            assert is_skolem_operator(table, q)
            for key in table.inputs():
                assert truth(apply_skolem(phi, q, table, key))
            found += 1
        assert found == 50
