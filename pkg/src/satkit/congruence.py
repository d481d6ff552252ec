"""Congruence of formulas by coded constant substitution, and term quotients.

Two objects are congruent when both arise from one pattern by simultaneous
substitution of constants for variables. Because substitution is
simultaneous, occurrence consistency is the whole difficulty: a pattern
variable names the same replacement everywhere it occurs. The decision
procedure is a constrained anti-unification over the zipped leaves, with
fresh pattern variables allocated above every index in either input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import syntax as sx
from .elements import Element, Std


class CongruenceError(Exception):
    pass


class KindMismatch(CongruenceError):
    pass


class IllDefined(CongruenceError):
    pass


@dataclass(frozen=True)
class Generalization:
    pattern: sx.Obj
    left: sx.VarAssignment
    right: sx.VarAssignment


_LEAVES = (sx.Zero, sx.Const, sx.Var, sx.SymTermRef, sx.SymFormulaRef)


def _as_const(x: sx.Obj) -> Optional[Element]:
    if isinstance(x, sx.Zero):
        return Std(0)
    if isinstance(x, sx.Const):
        return x.elem
    return None


class _NotCongruent(Exception):
    pass


class _Builder:
    # Tables map a forced pattern-variable index to its replacement on each
    # side; None records "must stay untouched". Conflicting demands at two
    # occurrences are exactly the simultaneous-substitution failures.
    def __init__(self, fresh_base: int):
        self.fresh = fresh_base
        self.left: dict[int, Optional[Element]] = {}
        self.right: dict[int, Optional[Element]] = {}

    @staticmethod
    def _constrain(table: dict[int, Optional[Element]], i: int, value: Optional[Element]):
        if i in table:
            if table[i] != value:
                raise _NotCongruent
        else:
            table[i] = value

    def keep_var(self, i: int, lv: Optional[Element], rv: Optional[Element]):
        self._constrain(self.left, i, lv)
        self._constrain(self.right, i, rv)

    def fresh_var(self, lv: Element, rv: Element) -> sx.Var:
        v = self.fresh
        self.fresh += 1
        self.left[v] = lv
        self.right[v] = rv
        return sx.Var(v)

    def assignments(self) -> tuple[sx.VarAssignment, sx.VarAssignment]:
        return (
            sx.VarAssignment.of({i: v for i, v in self.left.items() if v is not None}),
            sx.VarAssignment.of({i: v for i, v in self.right.items() if v is not None}),
        )


def _max_index(x: sx.Obj) -> int:
    top = -1
    for o in sx.subobjects(x):
        if isinstance(o, sx.Var):
            top = max(top, o.index)
        elif isinstance(o, (sx.Ex, sx.All, sx.BEx, sx.BAll)):
            top = max(top, o.index)
    return top


def _zip(x: sx.Obj, y: sx.Obj, b: _Builder, shadow: frozenset[int]) -> sx.Obj:
    if isinstance(x, _LEAVES) or isinstance(y, _LEAVES):
        xv, yv = _as_const(x), _as_const(y)
        if isinstance(x, sx.Var) and isinstance(y, sx.Var):
            if x.index != y.index:
                raise _NotCongruent
            # bound occurrences are untouched by substitution: no constraint
            if x.index not in shadow:
                b.keep_var(x.index, None, None)
            return x
        if isinstance(x, sx.Var) and yv is not None:
            if x.index in shadow:
                raise _NotCongruent
            b.keep_var(x.index, None, yv)
            return x
        if isinstance(y, sx.Var) and xv is not None:
            if y.index in shadow:
                raise _NotCongruent
            b.keep_var(y.index, xv, None)
            return y
        if xv is not None and yv is not None:
            if xv == yv:
                return sx.const(xv)
            return b.fresh_var(xv, yv)
        # symbolic family references are opaque leaves: congruent iff equal
        if x == y and isinstance(x, (sx.SymTermRef, sx.SymFormulaRef)):
            return x
        raise _NotCongruent
    if type(x) is not type(y):
        raise _NotCongruent
    if isinstance(x, sx.Succ):
        return sx.Succ(_zip(x.arg, y.arg, b, shadow))
    if isinstance(x, (sx.Add, sx.Mul, sx.Eq, sx.Or)):
        return type(x)(_zip(x.left, y.left, b, shadow),
                       _zip(x.right, y.right, b, shadow))
    if isinstance(x, sx.Not):
        return sx.Not(_zip(x.body, y.body, b, shadow))
    if isinstance(x, sx.Ex):
        if x.index != y.index:
            raise _NotCongruent
        return sx.Ex(x.index, _zip(x.body, y.body, b, shadow | {x.index}))
    raise CongruenceError(f"congruence over non-primitive node {x!r}")


def generalize(x: sx.Obj, y: sx.Obj) -> Optional[Generalization]:
    """Anti-unify; None when the inputs are not congruent.

    The pattern reproduces both inputs under its two assignments:
    multi_substitute(pattern, left) == x and likewise for right.
    """
    if isinstance(x, sx.Term) != isinstance(y, sx.Term):
        raise KindMismatch("cannot relate a term and a formula")
    fresh_base = max(_max_index(x), _max_index(y)) + 1
    b = _Builder(fresh_base)
    try:
        pattern = _zip(x, y, b, frozenset())
    except _NotCongruent:
        return None
    left, right = b.assignments()
    return Generalization(pattern, left, right)


def is_congruent(x: sx.Obj, y: sx.Obj) -> bool:
    try:
        return generalize(x, y) is not None
    except KindMismatch:
        return False


def skeleton_congruent(x: sx.Obj, y: sx.Obj) -> bool:
    """The equivalence closure of pattern-relatedness.

    Pattern-relatedness itself is not transitive at the leaves (a variable
    relates to every constant, a constant to every variable, yet distinct
    variables never relate); its closure identifies any two leaves, i.e.
    two objects relate exactly when their constructor skeletons and binder
    indices agree. Approximating steps act on these closure classes: that
    is what keeps unfolding stable under constant substitution, which the
    substitution-commutation law requires.
    """
    if isinstance(x, sx.Term) != isinstance(y, sx.Term):
        return False
    if isinstance(x, _LEAVES) or isinstance(y, _LEAVES):
        if isinstance(x, (sx.SymTermRef, sx.SymFormulaRef)) or \
                isinstance(y, (sx.SymTermRef, sx.SymFormulaRef)):
            return x == y
        return isinstance(x, _LEAVES) and isinstance(y, _LEAVES)
    if type(x) is not type(y):
        return False
    if isinstance(x, sx.Succ):
        return skeleton_congruent(x.arg, y.arg)
    if isinstance(x, (sx.Add, sx.Mul, sx.Eq, sx.Or)):
        return skeleton_congruent(x.left, y.left) and \
            skeleton_congruent(x.right, y.right)
    if isinstance(x, sx.Not):
        return skeleton_congruent(x.body, y.body)
    if isinstance(x, sx.Ex):
        return x.index == y.index and skeleton_congruent(x.body, y.body)
    raise CongruenceError(f"congruence over non-primitive node {x!r}")


# ---------------------------------------------------------------------------
# quotient of closed terms by a set of ground equations


@dataclass
class QuotientStructure:
    universe: tuple[sx.Term, ...]
    parent: dict[sx.Term, sx.Term]
    op_tables: dict[str, dict[tuple, sx.Term]]
    injective_on_constants: bool
    surjective_on_universe: bool

    def find(self, t: sx.Term) -> sx.Term:
        root = t
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[t] != root:
            self.parent[t], t = root, self.parent[t]
        return root

    def same_class(self, t: sx.Term, r: sx.Term) -> bool:
        return self.find(t) == self.find(r)

    def classes(self) -> list[frozenset[sx.Term]]:
        groups: dict[sx.Term, set[sx.Term]] = {}
        for t in self.universe:
            groups.setdefault(self.find(t), set()).add(t)
        return [frozenset(g) for g in groups.values()]


def _term_key(t: sx.Term):
    if isinstance(t, sx.Zero):
        return ("zero",)
    if isinstance(t, sx.Succ):
        return ("sc", t.arg)
    if isinstance(t, sx.Add):
        return ("+", t.left, t.right)
    if isinstance(t, sx.Mul):
        return ("*", t.left, t.right)
    return None


def build_quotient(
    equations: list[tuple[sx.Term, sx.Term]],
    universe: list[sx.Term],
    require_injective: bool = False,
) -> QuotientStructure:
    """Congruence closure of ground equations over a subterm-closed universe.

    Functionality of Sc, + and * is enforced: equal-class arguments force
    equal-class results wherever both results lie in the universe. With
    require_injective the closure must not merge two distinct standard
    constants (the canonical-map injectivity demanded of term quotients);
    violations raise IllDefined.
    """
    uni = list(dict.fromkeys(universe))
    uniset = set(uni)
    for t, r in equations:
        for side in (t, r):
            if side not in uniset:
                raise CongruenceError("universe must contain the equations' terms")
            for sub in sx.subobjects(side):
                if isinstance(sub, sx.Term) and sub not in uniset:
                    raise CongruenceError("universe must be closed under subterms")
            if not sx.is_closed(side):
                raise CongruenceError("quotients are over closed terms")

    parent = {t: t for t in uni}

    def find(t: sx.Term) -> sx.Term:
        while parent[t] != t:
            parent[t] = parent[parent[t]]
            t = parent[t]
        return t

    def union(a: sx.Term, b: sx.Term) -> bool:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
        return True

    for t, r in equations:
        union(t, r)

    # congruence propagation to fixpoint (worklist-free; desk-scale sizes)
    changed = True
    while changed:
        changed = False
        sig: dict[tuple, sx.Term] = {}
        for t in uni:
            key = _term_key(t)
            if key is None:
                continue
            canon = (key[0],) + tuple(find(a) for a in key[1:])
            other = sig.get(canon)
            if other is None:
                sig[canon] = t
            elif union(t, other):
                changed = True

    injective = True
    const_classes: dict[sx.Term, Element] = {}
    for t in uni:
        e = _as_const(t)
        if e is None:
            continue
        root = find(t)
        seen = const_classes.get(root)
        if seen is not None and seen != e:
            injective = False
            if require_injective:
                raise IllDefined(f"closure identifies the constants {seen} and {e}")
        const_classes[root] = e

    surjective = all(find(t) in const_classes for t in uni)

    tables: dict[str, dict[tuple, sx.Term]] = {"sc": {}, "+": {}, "*": {}}
    for t in uni:
        key = _term_key(t)
        if key is None or key[0] == "zero":
            continue
        args = tuple(find(a) for a in key[1:])
        tables[key[0]][args] = find(t)

    return QuotientStructure(
        universe=tuple(uni),
        parent=parent,
        op_tables=tables,
        injective_on_constants=injective,
        surjective_on_universe=surjective,
    )


def subterm_closure(terms: list[sx.Term]) -> list[sx.Term]:
    out: list[sx.Term] = []
    seen = set()
    for t in terms:
        for sub in sx.subobjects(t):
            if sub not in seen and isinstance(sub, sx.Term):
                seen.add(sub)
                out.append(sub)
    return out
