"""Evaluation over the standard model: term values and partial truth.

Truth evaluation is stratified by formula class. Atomic and bounded
(delta-0) sentences are decided outright; sentences with unbounded
quantifiers are searched with explicit fuel and may come back Unknown.
Unknown is a first-class outcome and is never coerced to a boolean.
"""

from __future__ import annotations

from . import syntax as sx
from .elements import Element, Std, add, mul, succ


class EvalError(Exception):
    pass


class OpenTerm(EvalError):
    pass


class WrongClass(EvalError):
    pass


class TruthValue:
    """Three-valued outcome; Unknown marks fuel exhaustion only."""

    __slots__ = ("tag",)

    def __init__(self, tag: str):
        self.tag = tag

    def __repr__(self):
        return self.tag

    def __eq__(self, other):
        return isinstance(other, TruthValue) and self.tag == other.tag

    def __hash__(self):
        return hash(self.tag)

    def is_true(self) -> bool:
        return self.tag == "True"

    def is_false(self) -> bool:
        return self.tag == "False"

    def is_unknown(self) -> bool:
        return self.tag == "Unknown"


TRUE = TruthValue("True")
FALSE = TruthValue("False")
UNKNOWN = TruthValue("Unknown")


def tv_not(a: TruthValue) -> TruthValue:
    if a is TRUE:
        return FALSE
    if a is FALSE:
        return TRUE
    return UNKNOWN


def tv_or(a: TruthValue, b: TruthValue) -> TruthValue:
    if a is TRUE or b is TRUE:
        return TRUE
    if a is FALSE and b is FALSE:
        return FALSE
    return UNKNOWN


def of_bool(b: bool) -> TruthValue:
    return TRUE if b else FALSE


# ---------------------------------------------------------------------------
# term valuation


def val(t: sx.Term) -> Element:
    """Value of a closed term; a homomorphism on Sc, + and *."""
    # successor towers can be deep; peel them iteratively
    succs = 0
    while isinstance(t, sx.Succ):
        succs += 1
        t = t.arg
    if isinstance(t, sx.Zero):
        base: Element = Std(0)
    elif isinstance(t, sx.Const):
        base = t.elem
    elif isinstance(t, sx.Var):
        raise OpenTerm(f"v{t.index} is free")
    elif isinstance(t, sx.Add):
        base = add(val(t.left), val(t.right))
    elif isinstance(t, sx.Mul):
        base = mul(val(t.left), val(t.right))
    else:
        raise EvalError(f"val: no standard value for {t!r}")
    for _ in range(succs):
        base = succ(base)
    return base


# ---------------------------------------------------------------------------
# formula classes

# The bounded-quantifier recognizer matches exactly the shape produced by
# expanding "exists v_i < t":  Ex(i, not(not(v_i < t) or not(body))) with
# the < expansion Ex(j, not(v_j = 0 or not(v_i + v_j = t))).


def _match_lt(f: sx.Formula) -> tuple[sx.Term, sx.Term] | None:
    if not (isinstance(f, sx.Ex) and isinstance(f.body, sx.Not)):
        return None
    j = f.index
    disj = f.body.body
    if not (isinstance(disj, sx.Or) and isinstance(disj.left, sx.Eq)):
        return None
    if disj.left != sx.Eq(sx.Var(j), sx.ZERO):
        return None
    if not (isinstance(disj.right, sx.Not) and isinstance(disj.right.body, sx.Eq)):
        return None
    eq = disj.right.body
    if not (isinstance(eq.left, sx.Add) and eq.left.right == sx.Var(j)):
        return None
    x, y = eq.left.left, eq.right
    if j in sx.free_vars(x) or j in sx.free_vars(y):
        return None
    return x, y


def match_bounded_exists(f: sx.Formula) -> tuple[int, sx.Term, sx.Formula] | None:
    """Recognize Ex(i, guard and body) with guard the expansion of v_i < t."""
    if not (isinstance(f, sx.Ex) and isinstance(f.body, sx.Not)):
        return None
    disj = f.body.body
    if not (isinstance(disj, sx.Or) and isinstance(disj.left, sx.Not)
            and isinstance(disj.right, sx.Not)):
        return None
    lt = _match_lt(disj.left.body)
    if lt is None or lt[0] != sx.Var(f.index):
        return None
    bound = lt[1]
    if f.index in sx.free_vars(bound):
        return None
    return f.index, bound, disj.right.body


def is_atomic(f: sx.Formula) -> bool:
    return isinstance(f, sx.Eq)


def is_delta0(f: sx.Formula) -> bool:
    if isinstance(f, sx.Eq):
        return True
    if isinstance(f, sx.Not):
        return is_delta0(f.body)
    if isinstance(f, sx.Or):
        return is_delta0(f.left) and is_delta0(f.right)
    if isinstance(f, sx.Ex):
        m = match_bounded_exists(f)
        return m is not None and is_delta0(m[2])
    return False


def _strip_exists_block(f: sx.Formula) -> sx.Formula:
    while isinstance(f, sx.Ex) and match_bounded_exists(f) is None:
        f = f.body
    return f


def _strip_forall_block(f: sx.Formula) -> sx.Formula:
    # a universal is the primitive shape not(exists v_i not(...))
    while (isinstance(f, sx.Not) and isinstance(f.body, sx.Ex)
           and match_bounded_exists(f.body) is None
           and isinstance(f.body.body, sx.Not)):
        f = f.body.body.body
    return f


def is_sigma(f: sx.Formula, k: int) -> bool:
    if k == 0:
        return is_delta0(f)
    return is_pi(_strip_exists_block(f), k - 1)


def is_pi(f: sx.Formula, k: int) -> bool:
    if k == 0:
        return is_delta0(f)
    return is_sigma(_strip_forall_block(f), k - 1)


def check_class(f: sx.Formula, cls: str) -> bool:
    """cls is one of "at", "d0", "s<k>", "p<k>"."""
    if cls == "at":
        return is_atomic(f)
    if cls == "d0":
        return is_delta0(f)
    if cls.startswith("s"):
        return is_sigma(f, int(cls[1:]))
    if cls.startswith("p"):
        return is_pi(f, int(cls[1:]))
    raise WrongClass(f"unknown class {cls!r}")


# ---------------------------------------------------------------------------
# truth evaluation


def _eval(f: sx.Formula, fuel: int) -> TruthValue:
    if isinstance(f, sx.Eq):
        return of_bool(val(f.left) == val(f.right))
    if isinstance(f, sx.Not):
        return tv_not(_eval(f.body, fuel))
    if isinstance(f, sx.Or):
        return tv_or(_eval(f.left, fuel), _eval(f.right, fuel))
    if isinstance(f, sx.Ex):
        m = match_bounded_exists(f)
        if m is not None:
            i, bound, body = m
            b = val(bound)
            if not isinstance(b, Std):
                raise EvalError("symbolic bound in a bounded search")
            out: TruthValue = FALSE
            for z in range(b.n):
                r = _eval(sx.substitute(body, sx.const(Std(z)), i), fuel)
                if r is TRUE:
                    return TRUE
                out = tv_or(out, r)
            return out
        # unbounded search: witnesses in 0..fuel, Unknown on exhaustion
        for a in range(fuel + 1):
            r = _eval(sx.substitute(f.body, sx.const(Std(a)), f.index), fuel)
            if r is TRUE:
                return TRUE
        return UNKNOWN
    raise EvalError(f"eval: non-primitive formula {f!r}")


def eval_tr(f: sx.Formula, cls: str = "d0", fuel: int = 64) -> TruthValue:
    """Partial truth for a closed sentence of the stated class.

    Atomic and delta-0 sentences never come back Unknown; classes with
    unbounded quantifiers return Unknown once the witness search runs out
    of fuel. Whenever True or False is returned it agrees with direct
    evaluation over the standard model.
    """
    if not sx.is_closed(f):
        raise OpenTerm("truth evaluation needs a sentence")
    if not check_class(f, cls):
        raise WrongClass(f"formula is not in class {cls}")
    return _eval(f, fuel)


def decide_delta0(f: sx.Formula) -> bool:
    r = eval_tr(f, "d0", 0)
    assert not r.is_unknown()
    return r.is_true()
