"""Checkable proof trees for the infinitary sequent systems.

A proof derives a finite set of closed sentences, read disjunctively.
The one genuinely infinitary rule (one premise per ground-model element)
is carried as a uniform schema: a single subproof over a fresh parameter
that occurs only in constant position, checked structurally and then
re-checked at a sample of instantiations. Non-uniform premise families
can be stored as finite truncations for demonstration, but never check.

Rule tags: axiom1..axiom12, axiomL, weak, or-i1, or-i2, or-i3, neg-i,
cut, ex-i, m-rule, and the extensions prop, i-ex-inf, m-inf, skolem, pred.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from . import syntax as sx
from . import template as tp
from .coding import NotEncodable, godel_encode
from .elements import Element, ElementError, Std, Sym, add, mul, never_equal_under, subst_base, succ

AXIOM_TAGS = tuple(f"axiom{i}" for i in range(1, 13)) + ("axiomL",)
RULE_TAGS = AXIOM_TAGS + (
    "weak", "or-i1", "or-i2", "or-i3", "neg-i", "cut", "ex-i", "m-rule",
    "prop", "i-ex-inf", "m-inf", "skolem", "pred",
)

DEFAULT_SAMPLES: tuple[Element, ...] = (
    Std(0), Std(1), Std(2), Std(17), Sym("sample"),
)


class KernelError(Exception):
    pass


@dataclass(frozen=True)
class Sequent:
    sentences: frozenset

    @staticmethod
    def of(*formulas: sx.Formula) -> "Sequent":
        for f in formulas:
            if isinstance(f, sx.Term):
                raise KernelError("sequents hold sentences, not terms")
            try:
                tp.has_templates(f)  # walks the tree; rejects abbreviations
            except tp.TemplateError:
                raise KernelError(f"abbreviation in a sequent: {f!r}") from None
            if not tp.t_is_closed(f):
                raise KernelError(f"open sentence in a sequent: {f!r}")
        return Sequent(frozenset(formulas))

    def union(self, *formulas: sx.Formula) -> "Sequent":
        return Sequent(self.sentences | frozenset(formulas))

    def without(self, f: sx.Formula) -> "Sequent":
        return Sequent(self.sentences - {f})

    def __contains__(self, f) -> bool:
        return f in self.sentences

    def __iter__(self):
        return iter(self.sentences)

    def __len__(self) -> int:
        return len(self.sentences)


def seq(*formulas: sx.Formula) -> Sequent:
    return Sequent.of(*formulas)


@dataclass(frozen=True)
class Uniform:
    params: tuple[str, ...]
    schema: "Proof"
    sampled: tuple[tuple[Element, ...], ...]


@dataclass
class Proof:
    conclusion: Sequent
    rule: str
    premises: tuple["Proof", ...] = ()
    uniform: Optional[Uniform] = None
    info: dict = field(default_factory=dict)


@dataclass(frozen=True)
class RulePolicy:
    logic: str = "m"  # m | m-free | template | template-free
    extra_axioms: Optional[Callable[[sx.Formula], bool]] = None
    allow_prop: bool = False
    allow_inf: bool = False
    allow_skolem: bool = False
    allow_pred: bool = False

    @property
    def template(self) -> bool:
        return self.logic.startswith("template")

    @property
    def axiom12_allowed(self) -> bool:
        return not self.logic.endswith("-free")


@dataclass
class CheckError:
    path: tuple
    reason: str

    def __str__(self):
        where = "/".join(str(p) for p in self.path) or "root"
        return f"{where}: {self.reason}"


@dataclass
class CheckReport:
    ok: bool
    height: Optional[int]
    errors: list[CheckError]

    def first_error(self) -> Optional[str]:
        return str(self.errors[0]) if self.errors else None


# ---------------------------------------------------------------------------
# canonical disjunctions


def _vee_key(f: sx.Formula):
    try:
        return (0, godel_encode(f).code)
    except NotEncodable:
        return (1, repr(f))


def vee(sentences) -> sx.Formula:
    """Canonical disjunction of a finite set, ordered by code; empty is 0 != 0."""
    items = sorted(set(sentences), key=_vee_key)
    if not items:
        return sx.FALSUM
    out = items[-1]
    for f in reversed(items[:-1]):
        out = sx.Or(f, out)
    return out


# ---------------------------------------------------------------------------
# element plumbing for schemas


def _const_elem(t) -> Optional[Element]:
    if isinstance(t, sx.Zero):
        return Std(0)
    if isinstance(t, sx.Const):
        return t.elem
    return None


def bases_of(x) -> frozenset[str]:
    out: set[str] = set()

    def go(y):
        if isinstance(y, (tp.TemplTerm, tp.TemplForm)):
            go(y.obj)
        elif isinstance(y, sx.Const):
            if isinstance(y.elem, Sym):
                out.add(y.elem.base)
        elif isinstance(y, (sx.SymTermRef, sx.SymFormulaRef)):
            if isinstance(y.index, Sym):
                out.add(y.index.base)
            if getattr(y, "payload", None) is not None:
                go(y.payload)
        elif isinstance(y, sx.Succ):
            go(y.arg)
        elif isinstance(y, (sx.Add, sx.Mul, sx.Eq, sx.Or)):
            go(y.left)
            go(y.right)
        elif isinstance(y, sx.Not):
            go(y.body)
        elif isinstance(y, sx.Ex):
            go(y.body)

    go(x)
    return frozenset(out)


def subst_elem_in_obj(x, base: str, value: Element):
    """Instantiate a parameter base inside every element slot of an object."""
    if isinstance(x, tp.TemplTerm):
        return tp.TemplTerm(subst_elem_in_obj(x.obj, base, value))
    if isinstance(x, tp.TemplForm):
        return tp.TemplForm(subst_elem_in_obj(x.obj, base, value))
    if isinstance(x, sx.Const):
        return sx.const(subst_base(x.elem, base, value))
    if isinstance(x, (sx.Zero, sx.Var)):
        return x
    if isinstance(x, sx.SymTermRef):
        idx = subst_base(x.index, base, value)
        if isinstance(idx, Std):
            return sx.numeral(idx) if x.family == "num" else sx.addtower(idx)
        return sx.SymTermRef(x.family, idx)
    if isinstance(x, sx.SymFormulaRef):
        idx = subst_base(x.index, base, value)
        payload = None if x.payload is None else subst_elem_in_obj(x.payload, base, value)
        if isinstance(idx, Std):
            return sx.delta(idx) if x.family == "delta" else sx.epsilon(idx, payload)
        return sx.SymFormulaRef(x.family, idx, payload)
    if isinstance(x, sx.Succ):
        return sx.Succ(subst_elem_in_obj(x.arg, base, value))
    if isinstance(x, (sx.Add, sx.Mul, sx.Eq, sx.Or)):
        return type(x)(subst_elem_in_obj(x.left, base, value),
                       subst_elem_in_obj(x.right, base, value))
    if isinstance(x, sx.Not):
        return sx.Not(subst_elem_in_obj(x.body, base, value))
    if isinstance(x, sx.Ex):
        return sx.Ex(x.index, subst_elem_in_obj(x.body, base, value))
    raise KernelError(f"cannot instantiate inside {x!r}")


def subst_param_proof(p: Proof, base: str, value: Element) -> Proof:
    concl = Sequent(frozenset(subst_elem_in_obj(f, base, value) for f in p.conclusion))
    prems = tuple(subst_param_proof(q, base, value) for q in p.premises)
    uni = None
    if p.uniform is not None:
        uni = Uniform(p.uniform.params,
                      subst_param_proof(p.uniform.schema, base, value),
                      p.uniform.sampled)
    info = dict(p.info)
    if "witness" in info:
        info["witness"] = subst_base(info["witness"], base, value)
    if "prop" in info:
        pre_hyps = [vee(q.conclusion.sentences) for q in p.premises]
        post_hyps = [vee(q.conclusion.sentences) for q in prems]
        info["prop"] = {"cert": _subst_certificate(
            info["prop"]["cert"], base, value,
            dict(zip(pre_hyps, post_hyps)),
            vee(concl.sentences))}
    if "skolem" in info:
        sk = dict(info["skolem"])
        sk["phi"] = subst_elem_in_obj(sk["phi"], base, value)
        info["skolem"] = sk
    return Proof(concl, p.rule, prems, uni, info)


def _subst_certificate(cert, base: str, value: Element,
                       hyp_map: dict, goal):
    """Replay a certificate under parameter instantiation.

    Substitution can disturb the code-canonical disjunction orderings, so
    hypothesis lines are re-derived from the instantiated canonical forms
    and the final line is regrouped onto the instantiated goal.
    """
    from .propcalc import CertBuilder, PropError
    b = CertBuilder()
    remap: dict[int, int] = {}
    for i, line in enumerate(cert.lines):
        f2 = subst_elem_in_obj(line.formula, base, value)
        tag = line.just[0]
        if tag == "hyp":
            pre = line.formula
            canon = None
            for old, new in hyp_map.items():
                if old == pre:
                    canon = new
                    break
            if canon is None or canon == f2:
                remap[i] = b.hyp(f2 if canon is None else canon)
            else:
                j = b.hyp(canon)
                k = b.tree_implication(canon, f2)
                remap[i] = b.mp(k, j)
        elif tag == "ax":
            _, scheme, form, args = line.just
            new_args = tuple(subst_elem_in_obj(a, base, value) for a in args)
            remap[i] = b.ax(scheme, form, new_args)
        elif tag == "ax-fo":
            remap[i] = b._emit(f2, ("ax-fo",))
        elif tag == "mp":
            _, j, k = line.just
            remap[i] = b.mp(remap[j], remap[k])
        else:
            raise PropError(f"cannot instantiate justification {tag!r}")
    last = remap[len(cert.lines) - 1]
    if b.lines[last].formula != goal:
        k = b.tree_implication(b.lines[last].formula, goal)
        b.mp(k, last)
    return b.certificate(goal)


# ---------------------------------------------------------------------------
# axiom matchers; each returns a parts dict or None


def _closed_term(t, policy: RulePolicy) -> bool:
    return isinstance(t, sx.Term) and tp.t_is_closed(t)


def match_axiom1(s: frozenset):
    for f in s:
        if isinstance(f, sx.Not) and f.body in s and s == {f.body, f}:
            return {"phi": f.body}
    return None


def match_axiom2(s: frozenset, params: frozenset):
    if len(s) != 1:
        return None
    (f,) = s
    if not (isinstance(f, sx.Not) and isinstance(f.body, sx.Eq)):
        return None
    a, b = _const_elem(f.body.left), _const_elem(f.body.right)
    if a is None or b is None:
        return None
    # the disequality must survive every instantiation of an active parameter
    for base in list(params) + [None]:
        if not never_equal_under(base, a, b):
            return None
    return {"a": a, "b": b}


def match_axiom3(s: frozenset, policy: RulePolicy):
    if len(s) != 1:
        return None
    (f,) = s
    if isinstance(f, sx.Eq) and f.left == f.right and _closed_term(f.left, policy):
        return {"t": f.left}
    return None


def match_axiom4(s: frozenset, policy: RulePolicy):
    for f in s:
        if isinstance(f, sx.Not) and isinstance(f.body, sx.Eq):
            t, r = f.body.left, f.body.right
            if not (_closed_term(t, policy) and _closed_term(r, policy)):
                continue
            if s == {f, sx.Eq(r, t)}:
                return {"t": t, "r": r}
    return None


def match_axiom5(s: frozenset, policy: RulePolicy):
    negs = [f for f in s if isinstance(f, sx.Not) and isinstance(f.body, sx.Eq)]
    for f1 in negs:
        for f2 in negs:
            t, r = f1.body.left, f1.body.right
            r2, u = f2.body.left, f2.body.right
            if r2 != r:
                continue
            if not all(_closed_term(x, policy) for x in (t, r, u)):
                continue
            if s == {f1, f2, sx.Eq(t, u)}:
                return {"t": t, "r": r, "s": u}
    return None


def _match_compat(s: frozenset, policy: RulePolicy, head):
    # axiom6/7/8 share the shape {t != t', r != r', h(t,r) = h(t',r')}
    for f in s:
        if not (isinstance(f, sx.Eq) and isinstance(f.left, head) and isinstance(f.right, head)):
            continue
        if head is sx.Succ:
            t, tp_, pairs = f.left.arg, f.right.arg, None
            n1 = sx.Not(sx.Eq(t, tp_))
            if s == {n1, f} and _closed_term(t, policy) and _closed_term(tp_, policy):
                return {"t": t, "t2": tp_, "eq": f}
            continue
        t, r = f.left.left, f.left.right
        t2, r2 = f.right.left, f.right.right
        n1, n2 = sx.Not(sx.Eq(t, t2)), sx.Not(sx.Eq(r, r2))
        if s == {n1, n2, f} and all(_closed_term(x, policy) for x in (t, r, t2, r2)):
            return {"t": t, "r": r, "t2": t2, "r2": r2, "eq": f}
    return None


def _match_ground_op(s: frozenset, params: frozenset, op: str):
    if len(s) != 1:
        return None
    (f,) = s
    if not isinstance(f, sx.Eq):
        return None
    w = _const_elem(f.right)
    if w is None:
        return None
    try:
        if op == "sc":
            if not isinstance(f.left, sx.Succ):
                return None
            u = _const_elem(f.left.arg)
            if u is None or succ(u) != w:
                return None
            return {"a": u, "b": w}
        head = sx.Add if op == "+" else sx.Mul
        if not isinstance(f.left, head):
            return None
        u, v = _const_elem(f.left.left), _const_elem(f.left.right)
        if u is None or v is None:
            return None
        got = add(u, v) if op == "+" else mul(u, v)
        if got != w:
            return None
        return {"a": u, "b": v, "c": w}
    except ElementError:
        return None


def match_axiom12(s: frozenset, policy: RulePolicy):
    if len(s) != 1:
        return None
    (f,) = s
    if (isinstance(f, sx.Ex) and f.index == 0 and isinstance(f.body, sx.Eq)
            and f.body.right == sx.Var(0) and _closed_term(f.body.left, policy)):
        return {"t": f.body.left}
    return None


def match_axiom(tag: str, s: frozenset, policy: RulePolicy, params: frozenset):
    if tag == "axiom1":
        return match_axiom1(s)
    if tag == "axiom2":
        return match_axiom2(s, params)
    if tag == "axiom3":
        return match_axiom3(s, policy)
    if tag == "axiom4":
        return match_axiom4(s, policy)
    if tag == "axiom5":
        return match_axiom5(s, policy)
    if tag == "axiom6":
        return _match_compat(s, policy, sx.Succ)
    if tag == "axiom7":
        return _match_compat(s, policy, sx.Add)
    if tag == "axiom8":
        return _match_compat(s, policy, sx.Mul)
    if tag == "axiom9":
        return _match_ground_op(s, params, "sc")
    if tag == "axiom10":
        return _match_ground_op(s, params, "+")
    if tag == "axiom11":
        return _match_ground_op(s, params, "*")
    if tag == "axiom12":
        if not policy.axiom12_allowed:
            return None
        return match_axiom12(s, policy)
    return None


# ---------------------------------------------------------------------------
# instance matching for the quantifier rules


def match_instance(f, i: int, psi) -> Optional[list[Element]]:
    """Witnesses a with templ_substitute(f, a, i) == psi; None when impossible.

    An empty candidate list means any element works (v_i is not free).
    """
    if i not in tp.t_free_vars(f):
        return [] if f == psi else None
    found: list[Element] = []

    class No(Exception):
        pass

    def walk(a, b, shadowed: bool):
        if shadowed:
            if a != b:
                raise No
            return
        if isinstance(a, sx.Var) and a.index == i:
            e = _const_elem(b)
            if e is None:
                raise No
            found.append(e)
            return
        if isinstance(a, (tp.TemplTerm, tp.TemplForm)):
            if type(a) is not type(b):
                raise No
            walk(a.obj, b.obj, shadowed)
            return
        if type(a) is not type(b):
            raise No
        if isinstance(a, (sx.Zero, sx.Const, sx.Var, sx.SymTermRef, sx.SymFormulaRef)):
            if a != b:
                raise No
            return
        if isinstance(a, sx.Succ):
            walk(a.arg, b.arg, shadowed)
        elif isinstance(a, (sx.Add, sx.Mul, sx.Eq, sx.Or)):
            walk(a.left, b.left, shadowed)
            walk(a.right, b.right, shadowed)
        elif isinstance(a, sx.Not):
            walk(a.body, b.body, shadowed)
        elif isinstance(a, sx.Ex):
            if a.index != b.index:
                raise No
            walk(a.body, b.body, shadowed or a.index == i)
        else:
            raise No

    try:
        walk(f, psi, False)
    except No:
        return None
    if not found:
        return None
    first = found[0]
    if any(e != first for e in found):
        return None
    return [first]


# ---------------------------------------------------------------------------
# the checker


class _Checker:
    def __init__(self, policy: RulePolicy):
        self.policy = policy
        self.errors: list[CheckError] = []

    def fail(self, path, reason: str):
        self.errors.append(CheckError(tuple(path), reason))

    def check(self, p: Proof, path=(), params: frozenset = frozenset()) -> Optional[int]:
        """Returns the height when the subtree checks, else None."""
        pol = self.policy
        c = p.conclusion.sentences
        for f in c:
            if not tp.t_is_closed(f):
                self.fail(path, f"open sentence {f!r}")
                return None
            if pol.template:
                if not sx.is_primitive(f) and not self._template_ok(f):
                    self.fail(path, f"ill-formed template sentence {f!r}")
                    return None
            else:
                if tp.has_templates(f):
                    self.fail(path, "template symbol in a ground-logic proof")
                    return None
                if not sx.is_primitive(f):
                    self.fail(path, f"abbreviation {f!r} in a sequent")
                    return None

        if p.rule not in RULE_TAGS:
            self.fail(path, f"unknown rule tag {p.rule!r}")
            return None

        if p.rule in AXIOM_TAGS:
            return self._check_axiom(p, path, params)

        handler = getattr(self, "_rule_" + p.rule.replace("-", "_"), None)
        if handler is None:
            self.fail(path, f"no handler for {p.rule}")
            return None
        return handler(p, path, params)

    @staticmethod
    def _template_ok(f) -> bool:
        try:
            tp.has_templates(f)
            return True
        except tp.TemplateError:
            return False

    # -- axioms

    def _check_axiom(self, p: Proof, path, params) -> Optional[int]:
        if p.premises or p.uniform:
            self.fail(path, f"{p.rule} takes no premises")
            return None
        c = p.conclusion.sentences
        if p.rule == "axiomL":
            if self.policy.extra_axioms is None:
                self.fail(path, "no extra-axiom oracle in this policy")
                return None
            if len(c) != 1 or not self.policy.extra_axioms(next(iter(c))):
                self.fail(path, "sentence is not an accepted extra axiom")
                return None
            return 0
        if p.rule == "axiom12" and not self.policy.axiom12_allowed:
            self.fail(path, "axiom12 is not available in the free calculus")
            return None
        if match_axiom(p.rule, c, self.policy, params) is None:
            self.fail(path, f"conclusion does not instantiate {p.rule}")
            return None
        return 0

    # -- structural rules

    def _one_premise(self, p: Proof, path) -> Optional[Proof]:
        if len(p.premises) != 1 or p.uniform is not None:
            self.fail(path, f"{p.rule} takes exactly one premise")
            return None
        return p.premises[0]

    def _two_premises(self, p: Proof, path):
        if len(p.premises) != 2 or p.uniform is not None:
            self.fail(path, f"{p.rule} takes exactly two premises")
            return None
        return p.premises

    def _rule_weak(self, p, path, params):
        q = self._one_premise(p, path)
        if q is None:
            return None
        c, pc = p.conclusion.sentences, q.conclusion.sentences
        if not pc <= c or len(c - pc) > 1:
            self.fail(path, "weakening adds exactly one sentence")
            return None
        h = self.check(q, path + (0,), params)
        return None if h is None else h + 1

    def _or_intro(self, p, path, params, pick):
        q = self._one_premise(p, path)
        if q is None:
            return None
        c, pc = p.conclusion.sentences, q.conclusion.sentences
        for d in c:
            if isinstance(d, sx.Or):
                part = pick(d)
                if pc in ((c - {d}) | {part}, c | {part}):
                    h = self.check(q, path + (0,), params)
                    return None if h is None else h + 1
        self.fail(path, "no disjunction in the conclusion matches the premise")
        return None

    def _rule_or_i1(self, p, path, params):
        return self._or_intro(p, path, params, lambda d: d.left)

    def _rule_or_i2(self, p, path, params):
        return self._or_intro(p, path, params, lambda d: d.right)

    def _rule_or_i3(self, p, path, params):
        prems = self._two_premises(p, path)
        if prems is None:
            return None
        c = p.conclusion.sentences
        p0, p1 = prems[0].conclusion.sentences, prems[1].conclusion.sentences
        for d in c:
            if isinstance(d, sx.Not) and isinstance(d.body, sx.Or):
                nf, ng = sx.Not(d.body.left), sx.Not(d.body.right)
                for gamma in (c - {d}, c):
                    if p0 == gamma | {nf} and p1 == gamma | {ng}:
                        h0 = self.check(prems[0], path + (0,), params)
                        h1 = self.check(prems[1], path + (1,), params)
                        if h0 is None or h1 is None:
                            return None
                        return max(h0, h1) + 1
        self.fail(path, "premises do not split a negated disjunction")
        return None

    def _rule_neg_i(self, p, path, params):
        q = self._one_premise(p, path)
        if q is None:
            return None
        c, pc = p.conclusion.sentences, q.conclusion.sentences
        for d in c:
            if isinstance(d, sx.Not) and isinstance(d.body, sx.Not):
                if pc in ((c - {d}) | {d.body.body}, c | {d.body.body}):
                    h = self.check(q, path + (0,), params)
                    return None if h is None else h + 1
        self.fail(path, "no double negation matches the premise")
        return None

    def _rule_cut(self, p, path, params):
        prems = self._two_premises(p, path)
        if prems is None:
            return None
        c = p.conclusion.sentences
        p0, p1 = prems[0].conclusion.sentences, prems[1].conclusion.sentences
        extra = p0 - c
        candidates = list(extra) if extra else list(p0)
        for f in candidates:
            if p0 == c | {f} and p1 == c | {sx.Not(f)}:
                h0 = self.check(prems[0], path + (0,), params)
                h1 = self.check(prems[1], path + (1,), params)
                if h0 is None or h1 is None:
                    return None
                return max(h0, h1) + 1
        self.fail(path, "premises are not a cut pair over the conclusion")
        return None

    def _rule_ex_i(self, p, path, params):
        q = self._one_premise(p, path)
        if q is None:
            return None
        c, pc = p.conclusion.sentences, q.conclusion.sentences
        hint = p.info.get("witness")
        for d in c:
            if not isinstance(d, sx.Ex):
                continue
            for gamma in (c - {d}, c):
                extras = pc - gamma
                candidates = list(extras) if extras else list(pc)
                for psi in candidates:
                    if pc != gamma | {psi}:
                        continue
                    if hint is not None:
                        if tp.templ_substitute(d.body, hint, d.index) != psi:
                            continue
                    elif match_instance(d.body, d.index, psi) is None:
                        continue
                    h = self.check(q, path + (0,), params)
                    return None if h is None else h + 1
        self.fail(path, "premise is not an instance of an existential in the conclusion")
        return None

    def _rule_m_rule(self, p, path, params):
        if p.premises:
            self.fail(path, "non-uniform premise family never checks as complete")
            return None
        u = p.uniform
        if u is None:
            self.fail(path, "m-rule needs a uniform premise schema")
            return None
        if len(u.params) != 1:
            self.fail(path, "m-rule binds exactly one parameter")
            return None
        if not u.sampled:
            self.fail(path, "unsampled uniform schema")
            return None
        if any(len(t) != 1 for t in u.sampled):
            self.fail(path, "m-rule samples are single elements")
            return None
        base = u.params[0]
        c = p.conclusion.sentences
        used = frozenset().union(*(bases_of(f) for f in c)) if c else frozenset()
        if base in used or base in params:
            self.fail(path, f"parameter {base} is not fresh")
            return None
        pc = u.schema.conclusion.sentences
        pivot = Sym(base)
        for d in c:
            if not (isinstance(d, sx.Not) and isinstance(d.body, sx.Ex)):
                continue
            inst = sx.Not(tp.templ_substitute(d.body.body, pivot, d.body.index))
            for gamma in (c - {d}, c):
                if pc == gamma | {inst}:
                    h = self.check(u.schema, path + ("u",), params | {base})
                    if h is None:
                        return None
                    for k, (e,) in enumerate(u.sampled):
                        instp = subst_param_proof(u.schema, base, e)
                        hk = self.check(instp, path + ("s", k), params)
                        if hk is None:
                            return None
                    return h + 1
        self.fail(path, "schema conclusion does not instantiate a negated existential")
        return None

    # -- extensions

    def _certified_rule(self, p, path, params, first_order: bool):
        # prop/pred share the shape: the conclusion's canonical disjunction
        # must be certified from the premises' canonical disjunctions
        from .propcalc import check_certificate
        side = p.info.get("prop")
        if side is None:
            self.fail(path, f"{p.rule} node carries no certificate")
            return None
        cert = side["cert"]
        hyps = {vee(q.conclusion.sentences) for q in p.premises}
        goal = vee(p.conclusion.sentences)
        if not cert.lines or cert.lines[-1].formula != goal:
            self.fail(path, "certificate does not end with the conclusion disjunction")
            return None
        if not check_certificate(cert, hyps.__contains__, first_order=first_order):
            self.fail(path, "certificate rejected")
            return None
        heights = []
        for i, q in enumerate(p.premises):
            h = self.check(q, path + (i,), params)
            if h is None:
                return None
            heights.append(h)
        return (max(heights) if heights else 0) + 1

    def _rule_prop(self, p, path, params):
        if not self.policy.allow_prop:
            self.fail(path, "prop rule disabled by policy")
            return None
        return self._certified_rule(p, path, params, first_order=False)

    def _block_exists(self, d, block):
        body = d
        for i in block:
            if not (isinstance(body, sx.Ex) and body.index == i):
                return None
            body = body.body
        return body

    def _rule_i_ex_inf(self, p, path, params):
        if not self.policy.allow_inf:
            self.fail(path, "infinite instantiation rules disabled by policy")
            return None
        q = self._one_premise(p, path)
        if q is None:
            return None
        block = p.info.get("block")
        values = p.info.get("tuple")
        if not block or values is None:
            self.fail(path, "block rule needs block indices and a value tuple")
            return None
        if len(set(block)) != len(block) or len(values) != len(block):
            self.fail(path, "block arity mismatch")
            return None
        c, pc = p.conclusion.sentences, q.conclusion.sentences
        assign = sx.VarAssignment.of(dict(zip(block, values)))
        for d in c:
            body = self._block_exists(d, block)
            if body is None:
                continue
            inst = sx.multi_substitute(body, assign)
            for gamma in (c - {d}, c):
                if pc == gamma | {inst}:
                    h = self.check(q, path + (0,), params)
                    return None if h is None else h + 1
        self.fail(path, "premise is not a block instance of the conclusion")
        return None

    def _rule_m_inf(self, p, path, params):
        if not self.policy.allow_inf:
            self.fail(path, "infinite instantiation rules disabled by policy")
            return None
        if p.premises:
            self.fail(path, "non-uniform premise family never checks as complete")
            return None
        u = p.uniform
        block = p.info.get("block")
        if u is None or not block:
            self.fail(path, "m-inf needs a uniform schema and block indices")
            return None
        if len(u.params) != len(block) or len(set(block)) != len(block):
            self.fail(path, "block arity mismatch")
            return None
        if not u.sampled:
            self.fail(path, "unsampled uniform schema")
            return None
        if any(len(t) != len(block) for t in u.sampled):
            self.fail(path, "block arity mismatch")
            return None
        c = p.conclusion.sentences
        used = frozenset().union(*(bases_of(f) for f in c)) if c else frozenset()
        for b in u.params:
            if b in used or b in params:
                self.fail(path, f"parameter {b} is not fresh")
                return None
        assign = sx.VarAssignment.of({i: Sym(b) for i, b in zip(block, u.params)})
        pc = u.schema.conclusion.sentences
        for d in c:
            if not (isinstance(d, sx.Not)):
                continue
            body = self._block_exists(d.body, block)
            if body is None:
                continue
            inst = sx.Not(sx.multi_substitute(body, assign))
            for gamma in (c - {d}, c):
                if pc == gamma | {inst}:
                    h = self.check(u.schema, path + ("u",), params | set(u.params))
                    if h is None:
                        return None
                    for k, values in enumerate(u.sampled):
                        instp = u.schema
                        for b, e in zip(u.params, values):
                            instp = subst_param_proof(instp, b, e)
                        hk = self.check(instp, path + ("s", k), params)
                        if hk is None:
                            return None
                    return h + 1
        self.fail(path, "schema conclusion is not a block instance")
        return None

    def _rule_skolem(self, p, path, params):
        from .skolem import apply_skolem, build_prefixed, is_skolem_operator
        if not self.policy.allow_skolem:
            self.fail(path, "skolem rule disabled by policy")
            return None
        info = p.info.get("skolem")
        if info is None:
            self.fail(path, "skolem node carries no operator data")
            return None
        q, table, phi, samples = info["q"], info["table"], info["phi"], info["samples"]
        if not is_skolem_operator(table, q):
            self.fail(path, "the table is not a Skolem operator for this prefix")
            return None
        if len(samples) != len(p.premises):
            self.fail(path, "one premise per sampled input is required")
            return None
        d = build_prefixed(q, phi)
        c = p.conclusion.sentences
        if d not in c:
            self.fail(path, "conclusion lacks the prefixed sentence")
            return None
        heights = []
        for i, (qp, a) in enumerate(zip(p.premises, samples)):
            want = apply_skolem(phi, q, table, a)
            for gamma in (c - {d}, c):
                if qp.conclusion.sentences == gamma | {want}:
                    break
            else:
                self.fail(path, f"premise {i} is not the Skolem instance at {a}")
                return None
            h = self.check(qp, path + (i,), params)
            if h is None:
                return None
            heights.append(h)
        return (max(heights) if heights else 0) + 1

    def _rule_pred(self, p, path, params):
        if not self.policy.allow_pred:
            self.fail(path, "pred rule disabled by policy")
            return None
        return self._certified_rule(p, path, params, first_order=True)


def check(p: Proof, policy: RulePolicy = RulePolicy()) -> CheckReport:
    ck = _Checker(policy)
    h = ck.check(p)
    return CheckReport(ok=h is not None and not ck.errors, height=h, errors=ck.errors)


M_POLICY = RulePolicy(logic="m")
M_FREE_POLICY = RulePolicy(logic="m-free")
TEMPLATE_POLICY = RulePolicy(logic="template")


def template_policy_for(lam_oracle) -> RulePolicy:
    """Template logic whose extra axioms are the approximations of an oracle set."""
    return RulePolicy(
        logic="template",
        extra_axioms=lambda f: tp.apprx_member(f, lam_oracle),
    )
