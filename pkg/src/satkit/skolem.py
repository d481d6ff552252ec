"""Quantifier-prefix coding and Skolem operators.

A prefix is a finite sequence of quantifiers, possibly rebinding the same
variable. The positional functions follow the coded recursions exactly:
f_Q(j) counts the universal quantifiers preceding the j-th existential,
count_exists totals the existentials, and g_forall/g_exists give the
variable bound by the (x+1)-st quantifier of each kind. A Skolem table
supplies the existential slots; its j-th output may depend only on input
coordinates below f_Q(j+1), which is checked pairwise over the table grid.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional

from . import syntax as sx
from .elements import Std


class SkolemError(Exception):
    pass


class ArityMismatch(SkolemError):
    pass


class GridMiss(SkolemError):
    pass


@dataclass(frozen=True)
class QuantSeq:
    items: tuple[tuple[str, int], ...]  # ("A"|"E", variable index)

    def __post_init__(self):
        for kind, i in self.items:
            if kind not in ("A", "E") or i < 0:
                raise SkolemError(f"bad quantifier {(kind, i)!r}")

    def __len__(self):
        return len(self.items)


def quantseq(*items: tuple[str, int]) -> QuantSeq:
    return QuantSeq(tuple(items))


def f_q(q: QuantSeq, j: int) -> int:
    """The coded recursion: universals crossed before the j-th existential."""
    if j <= 0:
        return 0
    items, y, acc = q.items, j, 0
    for kind, _ in items:
        if y == 0:
            break
        if kind == "E":
            y -= 1
        else:
            acc += 1
    return acc


def count_exists(q: QuantSeq) -> int:
    return sum(1 for kind, _ in q.items if kind == "E")


def count_forall(q: QuantSeq) -> int:
    return sum(1 for kind, _ in q.items if kind == "A")


def _g(q: QuantSeq, x: int, kind: str) -> int:
    y = x
    for k, i in q.items:
        if k == kind:
            if y == 0:
                return i
            y -= 1
    return 0


def g_forall(q: QuantSeq, x: int) -> int:
    return _g(q, x, "A")


def g_exists(q: QuantSeq, x: int) -> int:
    return _g(q, x, "E")


@dataclass(frozen=True)
class SkolemTable:
    """Finite grid from universal-input tuples to existential-output tuples."""

    mapping: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]

    def lookup(self, key: tuple[int, ...]) -> tuple[int, ...]:
        for k, v in self.mapping:
            if k == key:
                return v
        raise GridMiss(f"input {key} is outside the table grid")

    def inputs(self):
        return [k for k, _ in self.mapping]


def table_of(mapping: dict) -> SkolemTable:
    return SkolemTable(tuple(sorted((tuple(k), tuple(v)) for k, v in mapping.items())))


def is_skolem_operator(table: SkolemTable, q: QuantSeq) -> bool:
    """Dependence check: output j agrees on inputs agreeing below f_Q(j+1)."""
    n_out = count_exists(q)
    rows = table.mapping
    for _, out in rows:
        if len(out) != n_out:
            raise ArityMismatch(f"outputs must have arity {n_out}")
    for (x, fx), (y, fy) in product(rows, rows):
        for j in range(n_out):
            cutoff = f_q(q, j + 1)
            if x[:cutoff] == y[:cutoff] and fx[j] != fy[j]:
                return False
    return True


def _proj(t: tuple[int, ...], i: int) -> int:
    return t[i] if 0 <= i < len(t) else 0


def apply_skolem(phi: sx.Formula, q: QuantSeq, table: SkolemTable,
                 a: tuple[int, ...]) -> sx.Formula:
    """The sentence obtained by feeding the prefix from the tuple a.

    Each variable resolves to its innermost binder in the prefix (the
    greatest-position rule for rebound variables): a universal slot reads
    the input tuple, an existential slot the table's output at a.
    """
    free = sx.free_vars(phi)
    bound = {i for _, i in q.items}
    if not free <= bound:
        raise SkolemError("the prefixed formula must be a sentence")
    out = table.lookup(tuple(a[:count_forall(q)]) if len(a) >= count_forall(q)
                       else tuple(a) + (0,) * (count_forall(q) - len(a)))
    assign: dict[int, Std] = {}
    slots = {"A": 0, "E": 0}
    for kind, i in q.items:
        slot = slots[kind]
        slots[kind] += 1
        value = _proj(tuple(a), slot) if kind == "A" else _proj(out, slot)
        assign[i] = Std(value)  # later binders overwrite earlier ones
    keep = {i: e for i, e in assign.items() if i in free}
    return sx.multi_substitute(phi, sx.VarAssignment.of(keep))


def build_prefixed(q: QuantSeq, phi: sx.Formula) -> sx.Formula:
    """The sentence Q phi, universals spelled not-exists-not."""
    out = phi
    for kind, i in reversed(q.items):
        if kind == "E":
            out = sx.Ex(i, out)
        else:
            out = sx.Not(sx.Ex(i, sx.Not(out)))
    return out


def find_skolem_table(phi: sx.Formula, q: QuantSeq, grid: int,
                      search: int, truth) -> Optional[SkolemTable]:
    """Grid search for a witness table making every instance true.

    truth decides closed sentences; inputs range over tuples below grid,
    outputs are searched below search coordinatewise.
    """
    n_in, n_out = count_forall(q), count_exists(q)
    mapping = {}
    for key in product(range(grid), repeat=n_in):
        hit = None
        for out in product(range(search), repeat=n_out):
            candidate = table_of({key: out})
            inst = apply_skolem(phi, q, candidate, key)
            if truth(inst):
                hit = out
                break
        if hit is None:
            return None
        mapping[key] = hit
    table = table_of(mapping)
    if not is_skolem_operator(table, q):
        return None
    return table
