"""Constructive proofs of true ground sentences (and refutations of false
ones) in the infinitary calculus.

Equalities are proved by evaluating both sides down to their naming
constants through the compatibility and ground-arithmetic axioms;
disequalities run the same evaluation into the distinct-constants axiom.
A false existential becomes a uniform schema over a fresh parameter, so
its refutation must be structurally uniform in the witness; sentences
whose refutation would need case analysis on the parameter are rejected
rather than approximated.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import count

from . import syntax as sx
from .elements import Element, ElementError, Std, Sym, add, mul, never_equal_under, succ
from .kernel import DEFAULT_SAMPLES, Proof, Sequent, Uniform
from .transform import weak_to


class EldiagError(Exception):
    pass


class FuelExhausted(EldiagError):
    pass


class NotUniform(FuelExhausted):
    """The sentence is undecided: either the witness search ran out of
    fuel or its truth is not uniform in an active parameter."""


def _single(phi: sx.Formula) -> Sequent:
    return Sequent(frozenset((phi,)))


def _cut(gamma: frozenset, f: sx.Formula, p_with: Proof, p_without: Proof) -> Proof:
    left = weak_to(p_with, gamma | {f})
    right = weak_to(p_without, gamma | {sx.Not(f)})
    return Proof(Sequent(gamma), "cut", (left, right))


@dataclass
class _Prover:
    fuel: int
    samples: tuple[Element, ...]
    names: "count"

    def __post_init__(self):
        self._decided: dict = {}

    # -- term evaluation (parameters ride through as affine elements)

    def val(self, t: sx.Term) -> Element:
        if isinstance(t, sx.Zero):
            return Std(0)
        if isinstance(t, sx.Const):
            return t.elem
        if isinstance(t, sx.Succ):
            return succ(self.val(t.arg))
        if isinstance(t, sx.Add):
            return add(self.val(t.left), self.val(t.right))
        if isinstance(t, sx.Mul):
            return mul(self.val(t.left), self.val(t.right))
        raise EldiagError(f"no ground value for {t!r}")

    # -- uniform three-valued decision under the active parameters

    def decide(self, phi: sx.Formula, params: frozenset) -> str:
        """"T"/"F" when uniform over all parameter instantiations, else "U"."""
        key = (phi, params)
        hit = self._decided.get(key)
        if hit is None:
            hit = self._decide(phi, params)
            self._decided[key] = hit
        return hit

    def _decide(self, phi: sx.Formula, params: frozenset) -> str:
        if isinstance(phi, sx.Eq):
            try:
                a, b = self.val(phi.left), self.val(phi.right)
            except ElementError:
                return "U"
            if a == b:
                return "T"
            if all(never_equal_under(base, a, b) for base in list(params) + [None]):
                return "F"
            return "U"
        if isinstance(phi, sx.Not):
            inner = self.decide(phi.body, params)
            return {"T": "F", "F": "T", "U": "U"}[inner]
        if isinstance(phi, sx.Or):
            l, r = self.decide(phi.left, params), self.decide(phi.right, params)
            if "T" in (l, r):
                return "T"
            if l == r == "F":
                return "F"
            return "U"
        if isinstance(phi, sx.Ex):
            for e in self._witness_candidates(phi.body):
                inst = sx.substitute(phi.body, sx.const(e), phi.index)
                if self.decide(inst, params) == "T":
                    return "T"
            base = self._fresh_base()
            generic = sx.substitute(phi.body, sx.const(Sym(base)), phi.index)
            if self.decide(generic, params | {base}) == "F":
                return "F"
            return "U"
        raise EldiagError(f"decide: non-primitive sentence {phi!r}")

    def _witness_candidates(self, body: sx.Formula):
        seen = set()
        for o in sx.subobjects(body):
            e = None
            if isinstance(o, sx.Zero):
                e = Std(0)
            elif isinstance(o, sx.Const):
                e = o.elem
            if e is not None and e not in seen:
                seen.add(e)
                yield e
        for n in range(self.fuel + 1):
            e = Std(n)
            if e not in seen:
                yield e

    def _fresh_base(self) -> str:
        return f"q{next(self.names)}"

    # -- equality toolkit

    def sym_eq(self, p: Proof, t: sx.Term, r: sx.Term) -> Proof:
        """{t=r} to {r=t}."""
        ax4 = Proof(_single_pair(sx.Not(sx.Eq(t, r)), sx.Eq(r, t)), "axiom4")
        return _cut(frozenset((sx.Eq(r, t),)), sx.Eq(t, r), p, ax4)

    def trans_eq(self, p_tr: Proof, p_rs: Proof,
                 t: sx.Term, r: sx.Term, s: sx.Term) -> Proof:
        """{t=r} and {r=s} to {t=s}."""
        ax5 = Proof(
            Sequent(frozenset((sx.Not(sx.Eq(t, r)), sx.Not(sx.Eq(r, s)), sx.Eq(t, s)))),
            "axiom5")
        step = _cut(frozenset((sx.Not(sx.Eq(t, r)), sx.Eq(t, s))), sx.Eq(r, s), p_rs, ax5)
        return _cut(frozenset((sx.Eq(t, s),)), sx.Eq(t, r), p_tr, step)

    def prove_named(self, t: sx.Term) -> tuple[Element, Proof]:
        """The value a of t together with a proof of {t = c_a}."""
        if isinstance(t, sx.Zero):
            return Std(0), Proof(_single(sx.Eq(sx.ZERO, sx.ZERO)), "axiom3")
        if isinstance(t, sx.Const):
            return t.elem, Proof(_single(sx.Eq(t, t)), "axiom3")
        if isinstance(t, sx.Succ):
            b, pb = self.prove_named(t.arg)
            a = succ(b)
            cb, ca = sx.const(b), sx.const(a)
            mid = sx.Eq(sx.Succ(t.arg), sx.Succ(cb))
            ax6 = Proof(_single_pair(sx.Not(sx.Eq(t.arg, cb)), mid), "axiom6")
            named = _cut(frozenset((mid,)), sx.Eq(t.arg, cb), pb, ax6)
            ax9 = Proof(_single(sx.Eq(sx.Succ(cb), ca)), "axiom9")
            return a, self.trans_eq(named, ax9, t, sx.Succ(cb), ca)
        if isinstance(t, (sx.Add, sx.Mul)):
            op = sx.Add if isinstance(t, sx.Add) else sx.Mul
            b, pb = self.prove_named(t.left)
            d, pd = self.prove_named(t.right)
            a = add(b, d) if op is sx.Add else mul(b, d)
            cb, cd, ca = sx.const(b), sx.const(d), sx.const(a)
            mid = sx.Eq(t, op(cb, cd))
            compat = "axiom7" if op is sx.Add else "axiom8"
            ax = Proof(Sequent(frozenset((
                sx.Not(sx.Eq(t.left, cb)), sx.Not(sx.Eq(t.right, cd)), mid))), compat)
            s1 = _cut(frozenset((sx.Not(sx.Eq(t.right, cd)), mid)), sx.Eq(t.left, cb), pb, ax)
            named = _cut(frozenset((mid,)), sx.Eq(t.right, cd), pd, s1)
            ground = "axiom10" if op is sx.Add else "axiom11"
            axg = Proof(_single(sx.Eq(op(cb, cd), ca)), ground)
            return a, self.trans_eq(named, axg, t, op(cb, cd), ca)
        raise EldiagError(f"cannot name {t!r}")

    def prove_eq(self, t: sx.Term, r: sx.Term) -> Proof:
        a, pt = self.prove_named(t)
        b, pr = self.prove_named(r)
        if a != b:
            raise EldiagError("prove_eq on unequal sides")
        ca = sx.const(a)
        flipped = self.sym_eq(pr, r, ca)
        return self.trans_eq(pt, flipped, t, ca, r)

    def refute_eq(self, t: sx.Term, r: sx.Term) -> Proof:
        a, pt = self.prove_named(t)
        b, pr = self.prove_named(r)
        ca, cb = sx.const(a), sx.const(b)
        goal = sx.Not(sx.Eq(t, r))
        c_at = self.sym_eq(pt, t, ca)
        ax5a = Proof(Sequent(frozenset((
            sx.Not(sx.Eq(ca, t)), goal, sx.Eq(ca, r)))), "axiom5")
        d1 = _cut(frozenset((goal, sx.Eq(ca, r))), sx.Eq(ca, t), c_at, ax5a)
        ax5b = Proof(Sequent(frozenset((
            sx.Not(sx.Eq(ca, r)), sx.Not(sx.Eq(r, cb)), sx.Eq(ca, cb)))), "axiom5")
        d2 = _cut(frozenset((sx.Not(sx.Eq(ca, r)), sx.Eq(ca, cb))), sx.Eq(r, cb), pr, ax5b)
        d3 = _cut(frozenset((goal, sx.Eq(ca, cb))), sx.Eq(ca, r), d1, d2)
        ax2 = Proof(_single(sx.Not(sx.Eq(ca, cb))), "axiom2")
        return _cut(frozenset((goal,)), sx.Eq(ca, cb), d3, ax2)

    # -- sentences

    def prove(self, phi: sx.Formula, params: frozenset) -> Proof:
        verdict = self.decide(phi, params)
        if verdict == "U":
            raise NotUniform(f"cannot decide {phi!r} uniformly within fuel")
        if verdict == "T":
            return self._prove_true(phi, params)
        return self._prove_false(phi, params)

    def _prove_true(self, phi: sx.Formula, params: frozenset) -> Proof:
        if isinstance(phi, sx.Eq):
            return self.prove_eq(phi.left, phi.right)
        if isinstance(phi, sx.Not):
            return self._prove_false(phi.body, params)
        if isinstance(phi, sx.Or):
            if self.decide(phi.left, params) == "T":
                sub = self._prove_true(phi.left, params)
                return Proof(_single(phi), "or-i1", (sub,))
            sub = self._prove_true(phi.right, params)
            return Proof(_single(phi), "or-i2", (sub,))
        if isinstance(phi, sx.Ex):
            for e in self._witness_candidates(phi.body):
                inst = sx.substitute(phi.body, sx.const(e), phi.index)
                if self.decide(inst, params) == "T":
                    sub = self._prove_true(inst, params)
                    return Proof(_single(phi), "ex-i", (sub,), info={"witness": e})
            raise FuelExhausted(f"no witness for {phi!r} within fuel")
        raise EldiagError(f"prove: non-primitive sentence {phi!r}")

    def _prove_false(self, phi: sx.Formula, params: frozenset) -> Proof:
        """A proof of {not phi}."""
        if isinstance(phi, sx.Eq):
            return self.refute_eq(phi.left, phi.right)
        if isinstance(phi, sx.Not):
            sub = self._prove_true(phi.body, params)
            return Proof(_single(sx.Not(phi)), "neg-i", (sub,))
        if isinstance(phi, sx.Or):
            l = self._prove_false(phi.left, params)
            r = self._prove_false(phi.right, params)
            return Proof(_single(sx.Not(phi)), "or-i3", (l, r))
        if isinstance(phi, sx.Ex):
            base = self._fresh_base()
            generic = sx.substitute(phi.body, sx.const(Sym(base)), phi.index)
            schema = self._prove_false(generic, params | {base})
            uni = Uniform((base,), schema, tuple((e,) for e in self.samples))
            return Proof(_single(sx.Not(phi)), "m-rule", (), uni)
        raise EldiagError(f"refute: non-primitive sentence {phi!r}")


def _single_pair(a: sx.Formula, b: sx.Formula) -> Sequent:
    return Sequent(frozenset((a, b)))


def prove_eldiag(phi: sx.Formula, fuel: int = 200,
                 samples: tuple[Element, ...] = DEFAULT_SAMPLES) -> Proof:
    """A checked proof of {phi} when phi is true, of {not phi} when false.

    phi must be a closed primitive sentence that the ground model decides;
    existential witnesses are searched within fuel, and false existentials
    are discharged by a uniform schema over a fresh parameter.
    """
    if not sx.is_closed(phi):
        raise EldiagError("only sentences have diagram proofs")
    if not sx.is_primitive(phi):
        raise EldiagError("expand abbreviations before proving")
    prover = _Prover(fuel=fuel, samples=samples, names=count())
    return prover.prove(phi, frozenset())
