"""Derived proof transformations: the hypothesis/negation equivalences.

Each transformation rewrites a checked proof into a checked proof of the
equivalent form: hypotheses move into the sequent as negated disjuncts,
a disjunction splits into its parts, and double negations round-trip.
"""

from __future__ import annotations

from . import syntax as sx
from .kernel import Proof, Sequent, Uniform


class NotApplicable(Exception):
    pass


def axiom1(phi: sx.Formula) -> Proof:
    return Proof(Sequent.of(phi, sx.Not(phi)), "axiom1")


def hypothesis(phi: sx.Formula) -> Proof:
    return Proof(Sequent.of(phi), "axiomL")


def weak_to(p: Proof, target: frozenset) -> Proof:
    """Chain of single weakenings from p's conclusion up to target."""
    have = p.conclusion.sentences
    if not have <= target:
        raise NotApplicable("weakening cannot drop sentences")
    for f in sorted(target - have, key=repr):
        have = have | {f}
        p = Proof(Sequent(have), "weak", (p,))
    return p


def _map_add_negation(p: Proof, phi: sx.Formula) -> Proof:
    """Add not(phi) to every sequent; hypothesis leaves citing phi become
    instances of the excluded-middle axiom, other leaves are re-weakened."""
    nphi = sx.Not(phi)
    new_concl = Sequent(p.conclusion.sentences | {nphi})
    if p.rule == "axiomL" and p.conclusion.sentences == frozenset((phi,)):
        return Proof(Sequent(frozenset((phi, nphi))), "axiom1")
    if not p.premises and p.uniform is None:
        if nphi in p.conclusion.sentences:
            return p
        return Proof(new_concl, "weak", (p,))
    prems = tuple(_map_add_negation(q, phi) for q in p.premises)
    uni = None
    if p.uniform is not None:
        uni = Uniform(p.uniform.params,
                      _map_add_negation(p.uniform.schema, phi),
                      p.uniform.sampled)
    return Proof(new_concl, p.rule, prems, uni, dict(p.info))


def move_hypotheses(p: Proof, hyps: list[sx.Formula]) -> Proof:
    """From a proof of Gamma using the hypotheses, a proof of
    Gamma plus their negations that no longer cites them."""
    for phi in hyps:
        p = _map_add_negation(p, phi)
    return p


def discharge_negation(p: Proof, phi: sx.Formula) -> Proof:
    """From a proof of Gamma, not(phi), a proof of Gamma citing phi."""
    nphi = sx.Not(phi)
    if nphi not in p.conclusion.sentences:
        raise NotApplicable("the negated sentence is not in the conclusion")
    gamma = p.conclusion.sentences - {nphi}
    left = weak_to(hypothesis(phi), gamma | {phi})
    return Proof(Sequent(gamma), "cut", (left, p))


def or_split(p: Proof, disjunction: sx.Or) -> Proof:
    """From Gamma, f or g to Gamma, f, g."""
    if disjunction not in p.conclusion.sentences:
        raise NotApplicable("conclusion lacks the disjunction")
    f, g = disjunction.left, disjunction.right
    gamma = (p.conclusion.sentences - {disjunction}) | {f, g}
    up = weak_to(p, gamma | {disjunction})
    nleft = weak_to(axiom1(f), gamma | {sx.Not(f)})
    nright = weak_to(axiom1(g), gamma | {sx.Not(g)})
    refuted = Proof(Sequent(gamma | {sx.Not(disjunction)}), "or-i3", (nleft, nright))
    return Proof(Sequent(gamma), "cut", (up, refuted))


def or_join(p: Proof, f: sx.Formula, g: sx.Formula) -> Proof:
    """From Gamma, f, g to Gamma, f or g."""
    c = p.conclusion.sentences
    if f not in c or g not in c:
        raise NotApplicable("conclusion lacks both disjuncts")
    d = sx.Or(f, g)
    mid = Proof(Sequent((c - {f}) | {d}), "or-i1", (p,))
    return Proof(Sequent((c - {f, g}) | {d}), "or-i2", (mid,))


def double_neg_intro(p: Proof, phi: sx.Formula) -> Proof:
    """From Gamma, phi to Gamma, not not phi."""
    c = p.conclusion.sentences
    if phi not in c:
        raise NotApplicable("conclusion lacks the sentence")
    return Proof(Sequent((c - {phi}) | {sx.Not(sx.Not(phi))}), "neg-i", (p,))


def double_neg_elim(p: Proof, phi: sx.Formula) -> Proof:
    """From Gamma, not not phi to Gamma, phi."""
    nn = sx.Not(sx.Not(phi))
    c = p.conclusion.sentences
    if nn not in c:
        raise NotApplicable("conclusion lacks the double negation")
    gamma = (c - {nn}) | {phi}
    up = weak_to(p, gamma | {nn})
    ax = weak_to(axiom1(phi), gamma | {sx.Not(phi)})
    return Proof(Sequent(gamma), "cut", (ax, up))


def to_certified_calculus(p: Proof) -> Proof:
    """Replace every structural rule by one certified step.

    Weakening, the disjunction rules, double negation and cut are all
    derivable from the single certificate rule; the compilation is
    deterministic, no proof search is involved. Quantifier rules persist.
    """
    from .kernel import vee
    from .propcalc import cut_cert, split_negation_cert, weakening_cert
    structural = {"weak", "or-i1", "or-i2", "or-i3", "neg-i", "cut"}
    prems = tuple(to_certified_calculus(q) for q in p.premises)
    uni = None
    if p.uniform is not None:
        uni = Uniform(p.uniform.params,
                      to_certified_calculus(p.uniform.schema),
                      p.uniform.sampled)
    if p.rule not in structural:
        return Proof(p.conclusion, p.rule, prems, uni, dict(p.info))
    goal = vee(p.conclusion.sentences)
    hyps = [vee(q.conclusion.sentences) for q in p.premises]
    if p.rule in ("weak", "or-i1", "or-i2", "neg-i"):
        cert = weakening_cert(hyps[0], goal)
    elif p.rule == "cut":
        pivot = _cut_pivot(p)
        cert = cut_cert(hyps[0], hyps[1], pivot, goal)
    else:  # or-i3
        d = _or3_pivot(p)
        cert = split_negation_cert(hyps[0], hyps[1],
                                   d.body.left, d.body.right, goal)
    return Proof(p.conclusion, "prop", prems, None, {"prop": {"cert": cert}})


def _cut_pivot(p: Proof) -> sx.Formula:
    c = p.conclusion.sentences
    p0 = p.premises[0].conclusion.sentences
    p1 = p.premises[1].conclusion.sentences
    extra = p0 - c
    for f in (list(extra) if extra else list(p0)):
        if p0 == c | {f} and p1 == c | {sx.Not(f)}:
            return f
    raise NotApplicable("premises are not a cut pair")


def _or3_pivot(p: Proof) -> sx.Not:
    c = p.conclusion.sentences
    p0 = p.premises[0].conclusion.sentences
    p1 = p.premises[1].conclusion.sentences
    for d in c:
        if isinstance(d, sx.Not) and isinstance(d.body, sx.Or):
            for gamma in (c - {d}, c):
                if p0 == gamma | {sx.Not(d.body.left)} and \
                        p1 == gamma | {sx.Not(d.body.right)}:
                    return d
    raise NotApplicable("premises do not split a negated disjunction")


def transform(kind: str, p: Proof, **args) -> Proof:
    if kind == "move_hypotheses":
        return move_hypotheses(p, args["hyps"])
    if kind == "or_split":
        if "disjunction" in args:
            return or_split(p, args["disjunction"])
        return or_join(p, args["f"], args["g"])
    if kind == "double_neg":
        if args.get("direction", "intro") == "intro":
            return double_neg_intro(p, args["phi"])
        return double_neg_elim(p, args["phi"])
    raise NotApplicable(f"unknown transformation {kind!r}")
