"""The recursive length bound and the proof translation into template logic.

Every finite-height proof in the ground calculus maps to a template-logic
proof of an approximation of its conclusion. The chain produced at each
node is the uniform union of the children's chains with the node's own
unfolding targets; the recursive bound

    G(1) = 9,   G(n+1) = (n+2) * (2**G(n) - 1) + 2

dominates the chain length of a proof checked at height n-1. G(3) is
an exact bignum; beyond that only lazy comparison is feasible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import syntax as sx
from . import template as tp
from .kernel import (
    AXIOM_TAGS, CheckReport, Proof, RulePolicy, Sequent, Uniform,
    check, match_axiom,
)
from .elements import Sym


class TranslateError(Exception):
    pass


class UncheckedInput(TranslateError):
    pass


class NonFiniteHeight(TranslateError):
    pass


class UnsupportedRule(TranslateError):
    pass


# ---------------------------------------------------------------------------
# the bound


_G_CACHE: dict[int, int] = {1: 9}
G_EXACT_LIMIT = 3  # beyond this the values do not fit in memory


def g_bound(n: int, force: bool = False) -> int:
    """Exact value of the recurrence; refuses n > 3 unless forced."""
    if n < 1:
        raise TranslateError("the bound starts at 1")
    if n > G_EXACT_LIMIT and not force:
        raise TranslateError(
            f"g_bound({n}) does not fit in memory; pass force to try anyway")
    top = max(_G_CACHE)
    while top < n:
        g = _G_CACHE[top]
        _G_CACHE[top + 1] = (top + 2) * (2 ** g - 1) + 2
        top += 1
    return _G_CACHE[n]


def g_bound_at_least(n: int, m: int) -> bool:
    """Decide m <= G(n) without materializing the tower."""
    if n < 1:
        raise TranslateError("the bound starts at 1")
    g = 9  # G(1)
    for k in range(1, n):
        if g >= m.bit_length():
            # G(k+1) >= 2**g - 1 >= m, and G is monotone from there on
            return True
        g = (k + 2) * (2 ** g - 1) + 2
    return m <= g


# ---------------------------------------------------------------------------
# lifting a template proof through a chain


def lift(q: Proof, f: tp.ApproxChain) -> Proof:
    """Apply a chain to every sequent of a template proof.

    Approximating functions preserve template axioms and commute with every
    rule, so the image of a checked proof checks.
    """
    concl = Sequent(frozenset(tp.apply_chain(f, g) for g in q.conclusion))
    prems = tuple(lift(p, f) for p in q.premises)
    uni = None
    if q.uniform is not None:
        uni = Uniform(q.uniform.params, lift(q.uniform.schema, f), q.uniform.sampled)
    return Proof(concl, q.rule, prems, uni, dict(q.info))


def chain_image(f: tp.ApproxChain, sentences) -> frozenset:
    return frozenset(tp.apply_to_object(f, g) for g in sentences)


# ---------------------------------------------------------------------------
# per-axiom unfolding targets


def _axiom_steps(tag: str, parts: dict, sentences: frozenset) -> list[sx.Obj]:
    n = sx.Not
    e = sx.Eq
    if tag == "axiom1":
        return [n(parts["phi"])]
    if tag == "axiom2":
        ca, cb = sx.const(parts["a"]), sx.const(parts["b"])
        return [n(e(ca, cb)), e(ca, cb), ca]
    if tag == "axiom3":
        t = parts["t"]
        return [e(t, t)]
    if tag == "axiom4":
        t, r = parts["t"], parts["r"]
        return [n(e(t, r)), e(t, r), e(r, t)]
    if tag == "axiom5":
        t, r, s = parts["t"], parts["r"], parts["s"]
        return [n(e(t, r)), n(e(r, s)), e(t, r), e(r, s), e(t, s)]
    if tag == "axiom6":
        t, t2 = parts["t"], parts["t2"]
        return [n(e(t, t2)), e(t, t2), parts["eq"], sx.Succ(t), sx.Succ(t2)]
    if tag in ("axiom7", "axiom8"):
        t, r, t2, r2 = parts["t"], parts["r"], parts["t2"], parts["r2"]
        eq = parts["eq"]
        return [n(e(t, t2)), e(t, t2), n(e(r, r2)), e(r, r2),
                eq, eq.left, eq.right]
    if tag == "axiom9":
        ca, cb = sx.const(parts["a"]), sx.const(parts["b"])
        return [e(sx.Succ(ca), cb), sx.Succ(ca), ca]
    if tag in ("axiom10", "axiom11"):
        ca, cb = sx.const(parts["a"]), sx.const(parts["b"])
        cc = sx.const(parts["c"])
        head = sx.Add if tag == "axiom10" else sx.Mul
        return [e(head(ca, cb), cc), head(ca, cb), ca]
    if tag == "axiom12":
        t = parts["t"]
        return [sx.Ex(0, e(t, sx.Var(0))), e(t, sx.Var(0)), sx.Var(0)]
    raise TranslateError(f"no unfolding recipe for {tag}")


# ---------------------------------------------------------------------------
# translation


@dataclass
class NodeTrace:
    rule: str
    chain_len: int
    child_lens: tuple[int, ...]
    premise_size: int = 0


@dataclass
class TranslationResult:
    chain: tp.ApproxChain
    proof: Proof
    height: int
    traces: list[NodeTrace] = field(default_factory=list)

    def bound_level(self) -> int:
        # the bound indexes proofs by strict height: level h+1 covers height h
        return self.height + 1


def _decomposition(p: Proof, policy: RulePolicy, params: frozenset):
    """Re-run the rule match to recover the active formula decomposition."""
    c = p.conclusion.sentences
    tag = p.rule
    if tag in AXIOM_TAGS:
        if tag == "axiomL":
            return {}
        parts = match_axiom(tag, c, policy, params)
        if parts is None:
            raise UncheckedInput(f"{tag} no longer matches its conclusion")
        return parts
    if tag in ("or-i1", "or-i2"):
        pc = p.premises[0].conclusion.sentences
        for d in c:
            if isinstance(d, sx.Or):
                part = d.left if tag == "or-i1" else d.right
                if pc in ((c - {d}) | {part}, c | {part}):
                    return {"d": d}
    if tag == "or-i3":
        p0 = p.premises[0].conclusion.sentences
        p1 = p.premises[1].conclusion.sentences
        for d in c:
            if isinstance(d, sx.Not) and isinstance(d.body, sx.Or):
                for gamma in (c - {d}, c):
                    if p0 == gamma | {sx.Not(d.body.left)} and \
                            p1 == gamma | {sx.Not(d.body.right)}:
                        return {"d": d}
    if tag == "neg-i":
        pc = p.premises[0].conclusion.sentences
        for d in c:
            if isinstance(d, sx.Not) and isinstance(d.body, sx.Not):
                if pc in ((c - {d}) | {d.body.body}, c | {d.body.body}):
                    return {"d": d}
    if tag == "cut":
        p0 = p.premises[0].conclusion.sentences
        p1 = p.premises[1].conclusion.sentences
        extra = p0 - c
        for f in (list(extra) if extra else list(p0)):
            if p0 == c | {f} and p1 == c | {sx.Not(f)}:
                return {"f": f}
    if tag == "ex-i":
        pc = p.premises[0].conclusion.sentences
        from .kernel import match_instance
        hint = p.info.get("witness")
        for d in c:
            if not isinstance(d, sx.Ex):
                continue
            for gamma in (c - {d}, c):
                extras = pc - gamma
                for psi in (list(extras) if extras else list(pc)):
                    if pc != gamma | {psi}:
                        continue
                    if hint is not None:
                        if tp.templ_substitute(d.body, hint, d.index) == psi:
                            return {"d": d, "witness": hint}
                    else:
                        ws = match_instance(d.body, d.index, psi)
                        if ws is not None:
                            return {"d": d, "witness": ws[0] if ws else None}
    if tag == "m-rule":
        base = p.uniform.params[0]
        pc = p.uniform.schema.conclusion.sentences
        for d in c:
            if isinstance(d, sx.Not) and isinstance(d.body, sx.Ex):
                inst = sx.Not(tp.templ_substitute(d.body.body, Sym(base), d.body.index))
                for gamma in (c - {d}, c):
                    if pc == gamma | {inst}:
                        return {"d": d, "inst": inst}
    raise UncheckedInput(f"cannot recover the {tag} decomposition")


class _Translator:
    def __init__(self, policy: RulePolicy):
        self.policy = policy
        self.traces: list[NodeTrace] = []

    def run(self, p: Proof, params: frozenset = frozenset()):
        tag = p.rule
        c = p.conclusion.sentences
        if tag in ("prop", "i-ex-inf", "m-inf", "skolem", "pred"):
            raise UnsupportedRule(f"{tag} proofs have no template translation here")

        if tag in AXIOM_TAGS:
            if tag == "axiomL":
                f = tp.ApproxChain(())
                (phi,) = c
                q = Proof(Sequent(frozenset((tp.templ(phi),))), "axiomL")
                self.traces.append(NodeTrace(tag, 0, ()))
                return f, q
            parts = _decomposition(p, self.policy, params)
            f = tp.normalize(tp.chain(*_axiom_steps(tag, parts, c)))
            q = Proof(Sequent(chain_image(f, c)), tag)
            self.traces.append(NodeTrace(tag, len(f), ()))
            return f, q

        if tag == "weak":
            f0, q0 = self.run(p.premises[0], params)
            q = Proof(Sequent(chain_image(f0, c)), "weak", (q0,))
            self.traces.append(NodeTrace(tag, len(f0), (len(f0),)))
            return f0, q

        if tag in ("or-i1", "or-i2"):
            d = _decomposition(p, self.policy, params)["d"]
            f0, q0 = self.run(p.premises[0], params)
            f = tp.uniform_union([f0, tp.chain(d)])
            q0 = lift(q0, f)
            self._expect(q0, chain_image(f, p.premises[0].conclusion.sentences))
            q = Proof(Sequent(chain_image(f, c)), tag, (q0,))
            self.traces.append(NodeTrace(tag, len(f), (len(f0),)))
            return f, q

        if tag == "or-i3":
            d = _decomposition(p, self.policy, params)["d"]
            f0, q0 = self.run(p.premises[0], params)
            f1, q1 = self.run(p.premises[1], params)
            disj = d.body
            f = tp.uniform_union([
                f0, f1,
                tp.chain(disj, d, sx.Not(disj.left), sx.Not(disj.right)),
            ])
            q0, q1 = lift(q0, f), lift(q1, f)
            self._expect(q0, chain_image(f, p.premises[0].conclusion.sentences))
            self._expect(q1, chain_image(f, p.premises[1].conclusion.sentences))
            q = Proof(Sequent(chain_image(f, c)), tag, (q0, q1))
            self.traces.append(NodeTrace(tag, len(f), (len(f0), len(f1))))
            return f, q

        if tag == "neg-i":
            d = _decomposition(p, self.policy, params)["d"]
            f0, q0 = self.run(p.premises[0], params)
            f = tp.uniform_union([f0, tp.chain(d.body, d)])
            q0 = lift(q0, f)
            self._expect(q0, chain_image(f, p.premises[0].conclusion.sentences))
            q = Proof(Sequent(chain_image(f, c)), tag, (q0,))
            self.traces.append(NodeTrace(tag, len(f), (len(f0),)))
            return f, q

        if tag == "cut":
            cf = _decomposition(p, self.policy, params)["f"]
            f0, q0 = self.run(p.premises[0], params)
            f1, q1 = self.run(p.premises[1], params)
            f = tp.uniform_union([f0, f1, tp.chain(sx.Not(cf))])
            q0, q1 = lift(q0, f), lift(q1, f)
            self._expect(q0, chain_image(f, p.premises[0].conclusion.sentences))
            self._expect(q1, chain_image(f, p.premises[1].conclusion.sentences))
            q = Proof(Sequent(chain_image(f, c)), tag, (q0, q1))
            self.traces.append(NodeTrace(tag, len(f), (len(f0), len(f1))))
            return f, q

        if tag == "ex-i":
            dec = _decomposition(p, self.policy, params)
            d = dec["d"]
            f0, q0 = self.run(p.premises[0], params)
            f = tp.uniform_union([f0, tp.chain(d)])
            q0 = lift(q0, f)
            self._expect(q0, chain_image(f, p.premises[0].conclusion.sentences))
            # the substitution-commutation identity used by the rule image
            w = dec.get("witness")
            if w is not None:
                lhs = tp.apply_to_object(f, tp.templ_substitute(d.body, w, d.index))
                rhs_base = tp.apply_to_object(f, d.body)
                if lhs != tp.templ_substitute(rhs_base, w, d.index):
                    raise TranslateError("substitution does not commute with the chain")
            info = {} if w is None else {"witness": w}
            q = Proof(Sequent(chain_image(f, c)), tag, (q0,), info=info)
            self.traces.append(NodeTrace(tag, len(f), (len(f0),)))
            return f, q

        if tag == "m-rule":
            dec = _decomposition(p, self.policy, params)
            d = dec["d"]
            base = p.uniform.params[0]
            schema = p.uniform.schema
            f0, q0 = self.run(schema, params | {base})
            prem_sentences = list(schema.conclusion.sentences)
            f_uniform = tp.full_depth_approx(prem_sentences, max(len(f0), 1))
            f = tp.uniform_union([
                f_uniform, tp.chain(d.body, d),
            ])
            q0 = lift(q0, f)
            self._expect(q0, chain_image(f, schema.conclusion.sentences))
            uni = Uniform((base,), q0, p.uniform.sampled)
            q = Proof(Sequent(chain_image(f, c)), tag, (), uni)
            self.traces.append(NodeTrace(
                tag, len(f), (len(f0),), premise_size=len(prem_sentences)))
            return f, q

        raise UnsupportedRule(f"unknown rule {tag}")

    @staticmethod
    def _expect(q: Proof, want: frozenset):
        if q.conclusion.sentences != want:
            raise TranslateError(
                "chain union failed to absorb a child chain; "
                "the canonical normal order should prevent this")


def translate_proof(p: Proof, policy: RulePolicy = RulePolicy()) -> TranslationResult:
    """Translate a checked finite-height proof into template logic.

    Returns the approximating chain F and a template proof of F applied to
    the conclusion's template symbols, with len(F) <= G(height + 1).
    """
    report: CheckReport = check(p, policy)
    if not report.ok:
        raise UncheckedInput(report.first_error() or "input proof does not check")
    tr = _Translator(policy)
    f, q = tr.run(p)
    return TranslationResult(chain=f, proof=q, height=report.height, traces=tr.traces)
