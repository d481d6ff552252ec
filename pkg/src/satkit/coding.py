"""Arithmetization: finite sequences, finite sets, and the symbol codec.

Sequences are digit strings in little-endian base 4 over the digit alphabet
{1, 2, 3}: each entry is written as its binary expansion least-significant
bit first (bit 0 -> digit 1, bit 1 -> digit 2) followed by the terminator
digit 3. Every digit is nonzero, so any contiguous substring of a code is
numerically at most the whole code; projections therefore never exceed the
sequence code.

Symbol strings use the same positional idea in base 16 with all symbol
codes >= 1, so a subformula's code never exceeds its host's. Unbounded
constant and variable indices ride behind an escape symbol as base-4 digit
runs closed by a terminator symbol.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import syntax as sx
from .elements import Std


class CodingError(Exception):
    pass


class InvalidCode(CodingError):
    pass


class NotWellFormed(CodingError):
    pass


class NotEncodable(CodingError):
    """Symbolic constants and lazy families have no standard code."""


# ---------------------------------------------------------------------------
# finite sequences


@dataclass(frozen=True)
class SeqCode:
    code: int

    def __post_init__(self):
        if self.code < 0:
            raise InvalidCode("sequence codes are naturals")


def _seq_digits(code: int) -> list[int]:
    # base 4 is two bits per digit; go through the binary string for
    # linear-time conversion on large codes
    if code == 0:
        return []
    bits = bin(code)[2:]
    if len(bits) % 2:
        bits = "0" + bits
    return [int(bits[i - 2:i], 2) for i in range(len(bits), 0, -2)]


def _entry_digits(n: int) -> list[int]:
    ds = []
    while n:
        n, b = divmod(n, 2)
        ds.append(b + 1)
    ds.append(3)
    return ds


def _digits_to_int(digits: list[int], bits_per: int) -> int:
    if not digits:
        return 0
    chunks = [format(d, f"0{bits_per}b") for d in reversed(digits)]
    return int("".join(chunks), 2)


def seq_encode(items: list[int]) -> SeqCode:
    digits: list[int] = []
    for n in items:
        if n < 0:
            raise CodingError("sequence entries are naturals")
        digits.extend(_entry_digits(n))
    return SeqCode(_digits_to_int(digits, 2))


def seq_decode(s: SeqCode) -> list[int]:
    digits = _seq_digits(s.code)
    if s.code and digits[-1] != 3:
        raise InvalidCode(f"{s.code} is not a sequence code")
    items: list[int] = []
    bits: list[int] = []
    for d in digits:
        if d == 0:
            raise InvalidCode(f"{s.code} has a zero digit")
        if d == 3:
            if bits and bits[-1] == 0:
                raise InvalidCode(f"{s.code} has a non-canonical entry")
            items.append(sum(b << i for i, b in enumerate(bits)))
            bits = []
        else:
            bits.append(d - 1)
    return items


def seq_len(s: SeqCode) -> int:
    return sum(1 for d in _seq_digits(s.code) if d == 3)


def proj(s: SeqCode, i: int) -> int:
    """[x]_i with the least-z clause: out-of-range projections are 0."""
    items = seq_decode(s)
    if 0 <= i < len(items):
        return items[i]
    return 0


def seq_concat(a: SeqCode, b: SeqCode) -> SeqCode:
    return seq_encode(seq_decode(a) + seq_decode(b))


def seq_restrict(s: SeqCode, n: int) -> SeqCode:
    return seq_encode(seq_decode(s)[:n])


def is_seq_code(code: int) -> bool:
    try:
        seq_decode(SeqCode(code))
        return True
    except InvalidCode:
        return False


# ---------------------------------------------------------------------------
# finite sets (characteristic bitsets: x in y iff bit x of y)


@dataclass(frozen=True)
class SetCode:
    code: int

    def __post_init__(self):
        if self.code < 0:
            raise InvalidCode("set codes are naturals")


EMPTY_SET = SetCode(0)


def set_member(x: int, s: SetCode) -> bool:
    return x >= 0 and (s.code >> x) & 1 == 1


def set_singleton(x: int) -> SetCode:
    if x < 0:
        raise CodingError("set members are naturals")
    return SetCode(1 << x)


def set_union(a: SetCode, b: SetCode) -> SetCode:
    return SetCode(a.code | b.code)


def set_intersection(a: SetCode, b: SetCode) -> SetCode:
    return SetCode(a.code & b.code)


def set_difference(a: SetCode, b: SetCode) -> SetCode:
    return SetCode(a.code & ~b.code)


def set_members(s: SetCode) -> frozenset[int]:
    out, code, i = set(), s.code, 0
    while code:
        if code & 1:
            out.add(i)
        code >>= 1
        i += 1
    return frozenset(out)


def set_of(members: frozenset[int] | set[int]) -> SetCode:
    code = 0
    for m in members:
        code |= 1 << m
    return SetCode(code)


# ---------------------------------------------------------------------------
# symbol codec for terms and formulas

BASE = 16

SYM_ZERO = 1
SYM_SC = 2
SYM_ADD = 3
SYM_MUL = 4
SYM_EQ = 5
SYM_NOT = 6
SYM_OR = 7
SYM_EXISTS = 8
SYM_CONST = 9
SYM_VAR = 10
SYM_ENDIDX = 11
DIGIT_CODES = (12, 13, 14, 15)  # base-4 index digits

SYMBOL_NAMES = {
    SYM_ZERO: "0",
    SYM_SC: "Sc",
    SYM_ADD: "+",
    SYM_MUL: "*",
    SYM_EQ: "=",
    SYM_NOT: "not",
    SYM_OR: "or",
    SYM_EXISTS: "exists",
    SYM_CONST: "const",
    SYM_VAR: "var",
    SYM_ENDIDX: "end",
    12: "d0",
    13: "d1",
    14: "d2",
    15: "d3",
}


@dataclass(frozen=True)
class GodelCode:
    code: int

    def __post_init__(self):
        if self.code < 0:
            raise InvalidCode("codes are naturals")

    def __le__(self, other: "GodelCode") -> bool:
        return self.code <= other.code


def _index_symbols(n: int) -> list[int]:
    syms = []
    while n:
        n, d = divmod(n, 4)
        syms.append(DIGIT_CODES[d])
    syms.append(SYM_ENDIDX)
    return syms


def _emit(x: sx.Obj, out: list[int]) -> None:
    if isinstance(x, sx.Zero):
        out.append(SYM_ZERO)
    elif isinstance(x, sx.Const):
        if not isinstance(x.elem, Std):
            raise NotEncodable(f"constant {x.elem} has no standard code")
        out.append(SYM_CONST)
        out.extend(_index_symbols(x.elem.n))
    elif isinstance(x, sx.Var):
        out.append(SYM_VAR)
        out.extend(_index_symbols(x.index))
    elif isinstance(x, sx.Succ):
        out.append(SYM_SC)
        _emit(x.arg, out)
    elif isinstance(x, sx.Add):
        out.append(SYM_ADD)
        _emit(x.left, out)
        _emit(x.right, out)
    elif isinstance(x, sx.Mul):
        out.append(SYM_MUL)
        _emit(x.left, out)
        _emit(x.right, out)
    elif isinstance(x, sx.Eq):
        out.append(SYM_EQ)
        _emit(x.left, out)
        _emit(x.right, out)
    elif isinstance(x, sx.Not):
        out.append(SYM_NOT)
        _emit(x.body, out)
    elif isinstance(x, sx.Or):
        out.append(SYM_OR)
        _emit(x.left, out)
        _emit(x.right, out)
    elif isinstance(x, sx.Ex):
        out.append(SYM_EXISTS)
        out.extend(_index_symbols(x.index))
        _emit(x.body, out)
    elif isinstance(x, (sx.SymTermRef, sx.SymFormulaRef)):
        raise NotEncodable(f"family reference {x!r} has no standard code")
    else:
        raise NotEncodable(f"abbreviation {x!r} must be expanded before coding")


def godel_encode(x: sx.Obj) -> GodelCode:
    out: list[int] = []
    _emit(x, out)
    return GodelCode(_digits_to_int(out, 4))


class _Reader:
    def __init__(self, symbols: list[int]):
        self.symbols = symbols
        self.pos = 0

    def take(self) -> int:
        if self.pos >= len(self.symbols):
            raise NotWellFormed("truncated code")
        s = self.symbols[self.pos]
        self.pos += 1
        return s

    def read_index(self) -> int:
        digits = []
        while True:
            s = self.take()
            if s == SYM_ENDIDX:
                break
            if s not in DIGIT_CODES:
                raise NotWellFormed(f"symbol {s} inside an index run")
            digits.append(DIGIT_CODES.index(s))
        if digits and digits[-1] == 0:
            raise NotWellFormed("non-canonical index digits")
        return sum(d * 4 ** i for i, d in enumerate(digits))

    def read_term(self) -> sx.Term:
        s = self.take()
        if s == SYM_ZERO:
            return sx.ZERO
        if s == SYM_CONST:
            return sx.const(Std(self.read_index()))
        if s == SYM_VAR:
            return sx.Var(self.read_index())
        if s == SYM_SC:
            return sx.Succ(self.read_term())
        if s == SYM_ADD:
            return sx.Add(self.read_term(), self.read_term())
        if s == SYM_MUL:
            return sx.Mul(self.read_term(), self.read_term())
        raise NotWellFormed(f"symbol {s} cannot start a term")

    def read_formula(self) -> sx.Formula:
        s = self.take()
        if s == SYM_EQ:
            return sx.Eq(self.read_term(), self.read_term())
        if s == SYM_NOT:
            return sx.Not(self.read_formula())
        if s == SYM_OR:
            return sx.Or(self.read_formula(), self.read_formula())
        if s == SYM_EXISTS:
            i = self.read_index()
            return sx.Ex(i, self.read_formula())
        raise NotWellFormed(f"symbol {s} cannot start a formula")


def _symbols_of(code: int) -> list[int]:
    if code == 0:
        return []
    bits = bin(code)[2:]
    pad = (-len(bits)) % 4
    bits = "0" * pad + bits
    syms = [int(bits[i - 4:i], 2) for i in range(len(bits), 0, -4)]
    if any(s == 0 for s in syms):
        raise NotWellFormed("zero symbol inside a code")
    return syms


def godel_decode(g: GodelCode) -> sx.Obj:
    """Inverse of godel_encode; rejects everything outside its image."""
    syms = _symbols_of(g.code)
    if not syms:
        raise NotWellFormed("the empty code names nothing")
    reader = _Reader(syms)
    if syms[0] in (SYM_EQ, SYM_NOT, SYM_OR, SYM_EXISTS):
        out: sx.Obj = reader.read_formula()
    else:
        out = reader.read_term()
    if reader.pos != len(syms):
        raise NotWellFormed("trailing symbols after a complete object")
    return out


def is_valid_code(code: int) -> bool:
    try:
        godel_decode(GodelCode(code))
        return True
    except CodingError:
        return False


def encoding_manifest() -> dict:
    """The frozen codec parameters; byte-exact codes require these."""
    return {
        "version": 1,
        "base": BASE,
        "symbols": {name: code for code, name in SYMBOL_NAMES.items()},
        "index_digit_base": 4,
        "index_digit_codes": list(DIGIT_CODES),
        "index_terminator": SYM_ENDIDX,
        "order": "little-endian positional",
        "sequence_digit_base": 4,
        "sequence_entry_digits": {"bit0": 1, "bit1": 2, "terminator": 3},
    }
