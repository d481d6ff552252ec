"""Template structures, their satisfaction relation, soundness audits,
the witness gallery, and finite-stage maximal-consistent fragments.

A structure is a truth oracle for boxed formulas plus a valuation of boxed
terms. Satisfaction of an existential searches the standard prefix up to
the fuel plus the structure's declared symbolic elements; when that fails,
a generic-element refutation may still decide the quantifier negatively,
otherwise the result is Unknown. Free structures may value terms outside
the ground model; their outside bases are excluded from quantifier range.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from . import syntax as sx
from . import template as tp
from .congruence import QuotientStructure, build_quotient, subterm_closure
from .elements import Element, ElementError, Std, Sym, half, succ
from .ground_model import (
    FALSE, TRUE, UNKNOWN, TruthValue, eval_tr, of_bool, tv_not, tv_or, val,
)
from .kernel import Proof

_GENERIC = "generic"


class SemanticsError(Exception):
    pass


class BadWitnessParams(SemanticsError):
    pass


class SoundnessViolation(SemanticsError):
    pass


class OracleUndecided(SemanticsError):
    def __init__(self, sentence, fragment):
        super().__init__(f"oracle undecided on {sentence!r}")
        self.sentence = sentence
        self.fragment = fragment


@dataclass
class TStructure:
    name: str
    t_set: Callable[[sx.Formula], bool]
    t_val: Callable[[sx.Term], Element]
    kind: str = "standard"
    domain_syms: tuple[Element, ...] = ()
    outside_bases: frozenset[str] = frozenset()

    @property
    def supports_axiom12(self) -> bool:
        return self.kind != "free"


def val_t(t_struct: TStructure, t: sx.Term) -> Element:
    """Valuation of a closed template term; a homomorphism outside boxes."""
    if isinstance(t, tp.TemplTerm):
        return t_struct.t_val(t.obj)
    if isinstance(t, sx.SymTermRef):
        return t_struct.t_val(t)
    if isinstance(t, sx.Zero):
        return Std(0)
    if isinstance(t, sx.Const):
        return t.elem
    if isinstance(t, sx.Succ):
        return succ(val_t(t_struct, t.arg))
    if isinstance(t, sx.Add):
        from .elements import add
        return add(val_t(t_struct, t.left), val_t(t_struct, t.right))
    if isinstance(t, sx.Mul):
        from .elements import mul
        return mul(val_t(t_struct, t.left), val_t(t_struct, t.right))
    raise SemanticsError(f"no valuation for {t!r}")


def _eq_truth(t_struct: TStructure, u: Element, w: Element,
              generics: frozenset[str]) -> TruthValue:
    if u == w:
        return TRUE
    if not generics:
        return FALSE
    # a generic base ranges over the whole ground model; decide whether the
    # two affine forms can collide at any in-model value
    for g in generics:
        for a, b in ((u, w), (w, u)):
            if isinstance(a, Sym) and a.base == g:
                if _hits_in_model(t_struct, a, g, b, generics):
                    return UNKNOWN
    return FALSE


def _hits_in_model(t_struct: TStructure, a: Sym, g: str, target: Element,
                   generics: frozenset[str]) -> bool:
    from .elements import affine_hits
    if isinstance(target, Sym) and target.base in t_struct.outside_bases:
        return False  # the target lives outside the model
    if isinstance(target, Sym) and target.base in generics and target.base != g:
        return True  # two independent generics can always collide
    return affine_hits(a, g, target)


def models(t_struct: TStructure, gamma, fuel: int = 32,
           _generics: frozenset[str] = frozenset()) -> TruthValue:
    """Three-valued satisfaction; Unknown only from quantifier exhaustion."""
    if isinstance(gamma, tp.TemplForm):
        try:
            return of_bool(bool(t_struct.t_set(gamma.obj)))
        except Exception:
            return UNKNOWN
    if isinstance(gamma, sx.Eq):
        try:
            u = val_t(t_struct, gamma.left)
            w = val_t(t_struct, gamma.right)
        except ElementError:
            return UNKNOWN
        return _eq_truth(t_struct, u, w, _generics)
    if isinstance(gamma, sx.Not):
        return tv_not(models(t_struct, gamma.body, fuel, _generics))
    if isinstance(gamma, sx.Or):
        return tv_or(models(t_struct, gamma.left, fuel, _generics),
                     models(t_struct, gamma.right, fuel, _generics))
    if isinstance(gamma, sx.Ex):
        candidates: list[Element] = [Std(n) for n in range(fuel + 1)]
        candidates.extend(t_struct.domain_syms)
        candidates.extend(_candidate_elems(t_struct, gamma.body))
        seen: set = set()
        candidates = [e for e in candidates if not (e in seen or seen.add(e))]
        unknown = False
        for e in candidates:
            r = models(t_struct, tp.templ_substitute(gamma.body, e, gamma.index),
                       fuel, _generics)
            if r is TRUE:
                return TRUE
            if r is UNKNOWN:
                unknown = True
        # generic refutation: a fresh model element falsifying the body
        gbase = f"{_GENERIC}{len(_generics)}"
        inst = tp.templ_substitute(gamma.body, Sym(gbase), gamma.index)
        r = models(t_struct, inst, fuel, _generics | {gbase})
        if r is FALSE and not unknown:
            return FALSE
        return UNKNOWN
    raise SemanticsError(f"cannot evaluate {gamma!r}")


def _candidate_elems(t_struct: TStructure, body) -> list[Element]:
    """Values of the closed boxed terms inside a quantifier body; these are
    the witnesses a structure can actually name."""
    out: list[Element] = []

    def go(x):
        if isinstance(x, tp.TemplTerm):
            try:
                out.append(val_t(t_struct, x))
            except ElementError:
                pass
            return
        if isinstance(x, tp.TemplForm):
            return
        if isinstance(x, (sx.Zero, sx.Const, sx.Var, sx.SymTermRef, sx.SymFormulaRef)):
            if isinstance(x, sx.SymTermRef):
                try:
                    out.append(val_t(t_struct, x))
                except ElementError:
                    pass
            return
        if isinstance(x, sx.Eq):
            for side in (x.left, x.right):
                try:
                    out.append(val_t(t_struct, side))
                except (ElementError, SemanticsError):
                    pass
            go(x.left)
            go(x.right)
        elif isinstance(x, sx.Succ):
            go(x.arg)
        elif isinstance(x, (sx.Add, sx.Mul, sx.Or)):
            go(x.left)
            go(x.right)
        elif isinstance(x, sx.Not):
            go(x.body)
        elif isinstance(x, sx.Ex):
            go(x.body)

    go(body)
    return [e for e in out if not (isinstance(e, Sym) and e.base in t_struct.outside_bases)]


# ---------------------------------------------------------------------------
# soundness audit


@dataclass
class AuditReport:
    verdict: TruthValue
    applicable: bool
    note: str = ""


def _collect_extra_axioms(q: Proof) -> list:
    out = []
    if q.rule == "axiomL":
        out.extend(q.conclusion.sentences)
    for p in q.premises:
        out.extend(_collect_extra_axioms(p))
    if q.uniform is not None:
        out.extend(_collect_extra_axioms(q.uniform.schema))
    return out


def uses_axiom12(q: Proof) -> bool:
    if q.rule == "axiom12":
        return True
    if any(uses_axiom12(p) for p in q.premises):
        return True
    return q.uniform is not None and uses_axiom12(q.uniform.schema)


def audit_soundness(q: Proof, t_struct: TStructure, fuel: int = 32) -> AuditReport:
    """Evaluate the conclusion's disjunction; False is a kernel bug.

    The audit applies only when every extra-axiom leaf is true in the
    structure and the structure supports the existence axiom if used.
    """
    if uses_axiom12(q) and not t_struct.supports_axiom12:
        return AuditReport(UNKNOWN, applicable=False, note="existence axiom unsupported")
    for lam in _collect_extra_axioms(q):
        if models(t_struct, lam, fuel) is not TRUE:
            return AuditReport(UNKNOWN, applicable=False, note="hypothesis not true here")
    disj: Optional[sx.Formula] = None
    for f in sorted(q.conclusion.sentences, key=repr):
        disj = f if disj is None else sx.Or(disj, f)
    if disj is None:
        disj = sx.FALSUM
    verdict = models(t_struct, disj, fuel)
    if verdict is FALSE:
        raise SoundnessViolation(f"checked conclusion false in {t_struct.name}")
    return AuditReport(verdict, applicable=True)


# ---------------------------------------------------------------------------
# the witness gallery


def delta_structure(a: Element, with_ground_truth: bool = False) -> TStructure:
    """Every cofinite stage of the disjunction tower over 0 != 0 is true.

    With with_ground_truth the oracle also holds the decidably true
    sentences, so the structure certifies mixed enumerations and not just
    the tower family itself.
    """
    if not isinstance(a, Sym):
        raise BadWitnessParams("the tower index must be symbolic")

    def family(phi: sx.Formula) -> bool:
        return (isinstance(phi, sx.SymFormulaRef) and phi.family == "delta"
                and isinstance(phi.index, Sym) and phi.index.base == a.base
                and phi.index.coeff == a.coeff and phi.index.offset <= a.offset)

    if not with_ground_truth:
        return TStructure(f"delta({a})", family, lambda t: Std(0))
    truth = ground_truth_structure()
    return TStructure(
        f"delta({a})+truth",
        lambda phi: family(phi) or truth.t_set(phi),
        truth.t_val,
    )


def _tower_value(root_index: Sym, family: str, a: Sym, t: sx.Term) -> Element:
    if isinstance(t, sx.SymTermRef) and t.family == family:
        idx = t.index
        if (isinstance(idx, Sym) and idx.base == root_index.base
                and idx.coeff == root_index.coeff and idx.offset <= root_index.offset):
            k = root_index.offset - idx.offset
            if family == "num":
                return Sym(a.base, a.coeff, a.offset - k)
            v: Element = a
            for _ in range(k):
                v = half(v)
            return v
    if isinstance(t, sx.Const):
        return t.elem
    if isinstance(t, sx.Zero):
        return Std(0)
    return Std(0)


def sc_tower(family: str, height: Element, a: Element) -> TStructure:
    """A tower with no constants or multiplications at finite depth whose
    every approximation is valued at the target element."""
    if family not in ("num", "addtower"):
        raise BadWitnessParams(
            "towers with constants or multiplications at finite depth are "
            "refutable and carry no witness structure")
    if not isinstance(height, Sym) or not isinstance(a, Sym):
        raise BadWitnessParams("tower height and target must be symbolic")
    root = sx.SymTermRef(family, height)
    target = sx.Eq(root, sx.const(a))

    def t_set(phi: sx.Formula) -> bool:
        return phi == target

    return TStructure(
        f"sc_tower({family},{height},{a})",
        t_set,
        lambda t: _tower_value(height, family, a, t),
        domain_syms=(a,),
    )


def tr_sigma(k: int, fuel: int = 32) -> TStructure:
    """Truth for the bounded/existential classes as the template oracle."""

    def t_set(phi: sx.Formula) -> bool:
        for cls in ("d0", f"s{k}") if k else ("d0",):
            try:
                return eval_tr(phi, cls, fuel) is TRUE
            except Exception:
                continue
        return False

    def t_val(t: sx.Term) -> Element:
        try:
            return val(t)
        except Exception:
            return Std(0)

    return TStructure(f"tr_sigma({k})", t_set, t_val)


def quotient_witness(q: QuotientStructure) -> TStructure:
    """Terms valued through the canonical map of a well-defined quotient."""
    if not (q.injective_on_constants and q.surjective_on_universe):
        raise BadWitnessParams("the canonical map must be a bijection here")
    const_of: dict[sx.Term, Element] = {}
    for t in q.universe:
        root = q.find(t)
        if root not in const_of:
            for member in q.universe:
                if q.find(member) == root:
                    if isinstance(member, sx.Zero):
                        const_of[root] = Std(0)
                        break
                    if isinstance(member, sx.Const):
                        const_of[root] = member.elem
                        break

    def t_val(t: sx.Term) -> Element:
        if t in q.parent:
            e = const_of.get(q.find(t))
            if e is not None:
                return e
        return Std(0)

    def t_set(phi: sx.Formula) -> bool:
        return (isinstance(phi, sx.Eq) and phi.left in q.parent
                and phi.right in q.parent and q.same_class(phi.left, phi.right))

    return TStructure("quotient", t_set, t_val)


def free_tower(a: Element, b: Element) -> TStructure:
    """The numeral tower at a valued outside the model: num(a-k) goes to b-k."""
    if not isinstance(a, Sym) or not isinstance(b, Sym):
        raise BadWitnessParams("both indices must be symbolic")
    if a.base == b.base:
        raise BadWitnessParams("the outside value needs its own base")

    def t_val(t: sx.Term) -> Element:
        if isinstance(t, sx.SymTermRef) and t.family == "num":
            idx = t.index
            if (isinstance(idx, Sym) and idx.base == a.base
                    and idx.coeff == a.coeff and idx.offset <= a.offset):
                k = a.offset - idx.offset
                return Sym(b.base, b.coeff, b.offset - k)
        if isinstance(t, sx.Const):
            return t.elem
        return Std(0)

    return TStructure(
        f"free_tower({a},{b})",
        lambda phi: False,
        t_val,
        kind="free",
        outside_bases=frozenset((b.base,)),
    )


def gallery(name: str, **params) -> TStructure:
    if name == "delta":
        return delta_structure(params["a"])
    if name == "sc-tower":
        return sc_tower(params.get("family", "num"), params["height"], params["a"])
    if name == "tr-sigma":
        return tr_sigma(params.get("k", 0), params.get("fuel", 32))
    if name == "quotient":
        return quotient_witness(params["quotient"])
    if name == "free-tower":
        return free_tower(params["a"], params["b"])
    raise BadWitnessParams(f"unknown witness structure {name!r}")


# ---------------------------------------------------------------------------
# finite-stage maximal-consistent fragments


@dataclass
class SatFragment:
    decided: dict
    stage_log: list = field(default_factory=list)
    witnesses: dict = field(default_factory=dict)

    def holds(self, phi: sx.Formula) -> Optional[bool]:
        return self.decided.get(phi)

    def accepted(self) -> list[sx.Formula]:
        return [f for f, v in self.decided.items() if v]

    def consistent_pairing(self) -> bool:
        for f, v in self.decided.items():
            if isinstance(f, sx.Not) and f.body in self.decided:
                if v == self.decided[f.body]:
                    return False
        return True


def structure_oracle(t_struct: TStructure, fuel: int = 32, depth: int = 2):
    """Certify a finite set by making every member true in the structure.

    Truth of the boxed sentence alone is not enough: the branch is only
    certified when its approximations up to the probe depth hold as well,
    since a consistent set must keep every unfolding true.
    """

    def oracle(sentences: Iterable[sx.Formula]) -> bool:
        for f in sentences:
            if models(t_struct, _boxed(f), fuel) is not TRUE:
                return False
            for k in range(1, depth + 1):
                chain = tp.full_depth_approx([f], k)
                image = tp.apply_to_object(chain, f)
                if models(t_struct, image, fuel) is FALSE:
                    return False
        return True

    return oracle


def _boxed(phi: sx.Formula):
    # evaluate the propositional face structurally, boxing at the leaves
    if isinstance(phi, sx.Not):
        return sx.Not(_boxed(phi.body))
    if isinstance(phi, sx.Or):
        return sx.Or(_boxed(phi.left), _boxed(phi.right))
    return tp.TemplForm(phi)


def ground_truth_structure(fuel: int = 64) -> TStructure:
    def t_set(phi: sx.Formula) -> bool:
        for cls in ("d0", "s1", "s2"):
            try:
                return eval_tr(phi, cls, fuel) is TRUE
            except Exception:
                continue
        return False

    def t_val(t: sx.Term) -> Element:
        try:
            return val(t)
        except Exception:
            return Std(0)

    return TStructure("ground-truth", t_set, t_val)


def henkin_extend(lam: list[sx.Formula], enumeration: list[sx.Formula],
                  oracle=None, budget: int = 32) -> SatFragment:
    """Finite-stage variant of the maximal-consistent construction.

    Each enumerated sentence is decided by whichever side the oracle
    certifies; an accepted existential immediately receives an accepted
    witness instance. The oracle certifies finite sets (by default against
    ground truth); an uncertifiable pair halts with OracleUndecided.
    """
    if oracle is None:
        oracle = structure_oracle(ground_truth_structure())
    frag = SatFragment(decided={})
    current: list[sx.Formula] = []
    for f in lam:
        frag.decided[f] = True
        current.append(f)
        frag.stage_log.append(("axiom", f, True))

    def accept(phi: sx.Formula, value: bool):
        frag.decided[phi] = value
        current.append(phi if value else sx.Not(phi))
        if isinstance(phi, sx.Not):
            frag.decided.setdefault(phi.body, not value)
        frag.stage_log.append(("decide", phi, value))

    for phi in enumeration:
        if phi in frag.decided:
            frag.stage_log.append(("repeat", phi, frag.decided[phi]))
            continue
        if oracle(current + [phi]):
            accept(phi, True)
        elif oracle(current + [sx.Not(phi)]):
            accept(phi, False)
        else:
            raise OracleUndecided(phi, frag)
        if frag.decided[phi] and isinstance(phi, sx.Ex):
            found = None
            for n in range(budget + 1):
                inst = sx.substitute(phi.body, sx.const(Std(n)), phi.index)
                if oracle(current + [inst]):
                    found = (Std(n), inst)
                    break
            if found is None:
                raise OracleUndecided(phi, frag)
            frag.witnesses[phi] = found[0]
            if found[1] not in frag.decided:
                accept(found[1], True)
    return frag


@dataclass
class ComplianceReport:
    passed: bool
    failures: list[str] = field(default_factory=list)
    quotient: Optional[QuotientStructure] = None


def check_fragment(frag: SatFragment) -> ComplianceReport:
    """Clause compliance of a fragment, restricted to what it decided."""
    failures: list[str] = []

    # negation: a sentence and its negation are decided oppositely
    for f, v in frag.decided.items():
        if isinstance(f, sx.Not) and f.body in frag.decided:
            if v == frag.decided[f.body]:
                failures.append(f"negation clause fails at {f!r}")

    # disjunction: truth of a decided disjunction matches its decided parts
    for f, v in frag.decided.items():
        if isinstance(f, sx.Or):
            lv, rv = frag.decided.get(f.left), frag.decided.get(f.right)
            if lv is not None and rv is not None and v != (lv or rv):
                failures.append(f"disjunction clause fails at {f!r}")

    # existentials: accepted iff some accepted instance
    from .kernel import match_instance
    for f, v in frag.decided.items():
        if not isinstance(f, sx.Ex):
            continue
        has_instance = any(
            w and match_instance(f.body, f.index, g) is not None
            for g, w in frag.decided.items() if not isinstance(g, sx.Ex)
        )
        if v and not has_instance:
            failures.append(f"accepted existential without witness: {f!r}")
        if not v and has_instance:
            failures.append(f"rejected existential with accepted instance: {f!r}")

    # term clauses through the quotient of accepted equations
    eqs = []
    denied = []
    terms: list[sx.Term] = []
    for f, v in frag.decided.items():
        atom = None
        if isinstance(f, sx.Eq):
            atom, truth = f, v
        elif isinstance(f, sx.Not) and isinstance(f.body, sx.Eq):
            atom, truth = f.body, not v
        if atom is None or not sx.is_closed(atom):
            continue
        try:
            _reject_nonstandard(atom)
        except SemanticsError:
            continue
        (eqs if truth else denied).append((atom.left, atom.right))
        terms.extend((atom.left, atom.right))
    quotient = None
    if terms:
        universe = subterm_closure(terms)
        for e in {elem for t in universe for elem in _consts_of(t)}:
            universe.append(sx.const(e))
        universe = list(dict.fromkeys(universe))
        quotient = build_quotient(eqs, universe)
        if not quotient.injective_on_constants:
            failures.append("distinct constants identified by accepted equations")
        for t, r in denied:
            if quotient.same_class(t, r):
                failures.append(f"equation both accepted and denied: {t!r} = {r!r}")
    return ComplianceReport(passed=not failures, failures=failures, quotient=quotient)


def _consts_of(t: sx.Term):
    for o in sx.subobjects(t):
        if isinstance(o, sx.Const):
            yield o.elem
        elif isinstance(o, sx.Zero):
            yield Std(0)


def _reject_nonstandard(f) -> None:
    for o in sx.subobjects(f):
        if isinstance(o, (sx.SymTermRef, sx.SymFormulaRef)):
            raise SemanticsError("nonstandard family member")


def fragment_structure(frag: SatFragment) -> TStructure:
    """The structure reading boxed truth exactly as the fragment decided."""
    report = check_fragment(frag)
    q = report.quotient

    def t_set(phi: sx.Formula) -> bool:
        v = frag.decided.get(phi)
        if v is not None:
            return v
        if isinstance(phi, sx.Not):
            v = frag.decided.get(phi.body)
            return (not v) if v is not None else False
        return False

    def t_val(t: sx.Term) -> Element:
        if q is not None and t in q.parent:
            root = q.find(t)
            for member in q.universe:
                if q.find(member) == root:
                    if isinstance(member, sx.Zero):
                        return Std(0)
                    if isinstance(member, sx.Const):
                        return member.elem
        try:
            return val(t)
        except Exception:
            return Std(0)

    return TStructure("fragment", t_set, t_val)
