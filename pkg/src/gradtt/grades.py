"""Modality structures: finite, table-driven ordered semirings with an ``nr`` function.

A grade is represented by its printed name (``"0"``, ``"1"``, ``"w"``, ``"1?"``,
or a lattice element name).  Every operation is a table lookup, so law checking
is plain exhaustion over the carrier.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

Grade = str
UsageCtx = tuple  # tuple[Grade, ...]; position i holds the grade of de Bruijn index i
SubstMatrix = tuple  # tuple[UsageCtx, ...]; row i is the context of sigma(i)


class ModalityError(ValueError):
    pass


class DivisionError(ArithmeticError):
    pass


_ALIASES = {"ω": "w", "omega": "w", "𝟘": "0", "𝟙": "1"}


@dataclass(frozen=True, eq=False)
class Modality:
    name: str
    carrier: tuple[Grade, ...]
    add_table: Mapping[tuple[Grade, Grade], Grade] = field(repr=False)
    mul_table: Mapping[tuple[Grade, Grade], Grade] = field(repr=False)
    meet_table: Mapping[tuple[Grade, Grade], Grade] = field(repr=False)
    nr_table: Mapping[tuple[Grade, Grade, Grade, Grade, Grade], Grade] = field(repr=False)
    zero: Grade
    one: Grade
    aliases: Mapping[str, Grade] = field(default_factory=dict, repr=False)

    # --- scalar operations -------------------------------------------------

    def add(self, p: Grade, q: Grade) -> Grade:
        return self.add_table[p, q]

    def mul(self, p: Grade, q: Grade) -> Grade:
        return self.mul_table[p, q]

    def meet(self, p: Grade, q: Grade) -> Grade:
        return self.meet_table[p, q]

    def nr(self, p: Grade, r: Grade, qz: Grade, qs: Grade, qn: Grade) -> Grade:
        return self.nr_table[p, r, qz, qs, qn]

    def le(self, p: Grade, q: Grade) -> bool:
        # the order is always derived from meet
        return self.meet_table[p, q] == p

    def sum(self, grades: Iterable[Grade]) -> Grade:
        acc = self.zero
        for g in grades:
            acc = self.add(acc, g)
        return acc

    def parse_grade(self, text: str) -> Grade:
        g = self.aliases.get(text, _ALIASES.get(text, text))
        if g not in self.carrier:
            raise ModalityError(f"grade {text!r} is not in the carrier of {self.name} {list(self.carrier)}")
        return g

    def with_nr(self, nr: Callable[..., Grade] | Mapping, name: str | None = None) -> "Modality":
        table = nr if isinstance(nr, Mapping) else _tabulate5(self.carrier, nr)
        return Modality(name or self.name, self.carrier, self.add_table, self.mul_table,
                        self.meet_table, dict(table), self.zero, self.one, self.aliases)

    # --- derived properties --------------------------------------------------

    @cached_property
    def maximal(self) -> tuple[Grade, ...]:
        return tuple(g for g in self.carrier
                     if not any(h != g and self.le(g, h) for h in self.carrier))

    @cached_property
    def zero_is_greatest(self) -> bool:
        return all(self.le(g, self.zero) for g in self.carrier)

    @cached_property
    def has_well_behaved_zero(self) -> bool:
        return all(r.ok for r in check_well_behaved_zero(self))

    @cached_property
    def _division(self) -> dict[Grade, dict[Grade, Grade]]:
        return _division_tables(self)

    @property
    def supports_division_by(self) -> frozenset[Grade]:
        return frozenset(self._division)

    def divide(self, p: Grade, q: Grade) -> Grade:
        """Least ``r`` with ``p <= q * r``; only defined for divisors with a Galois connection."""
        try:
            return self._division[q][p]
        except KeyError:
            raise DivisionError(f"{self.name} does not support division by {q}") from None

    def __str__(self) -> str:
        return self.name


def _tabulate2(carrier: Sequence[Grade], fn) -> dict:
    return {(a, b): fn(a, b) for a in carrier for b in carrier}


def _tabulate5(carrier: Sequence[Grade], fn) -> dict:
    return {args: fn(*args) for args in itertools.product(carrier, repeat=5)}


def _from_rows(carrier: Sequence[Grade], rows: Sequence[Sequence[Grade]]) -> dict:
    return {(a, b): rows[i][j] for i, a in enumerate(carrier) for j, b in enumerate(carrier)}


def _meet_nr(m: Modality):
    return lambda p, r, qz, qs, qn: m.meet(m.meet(qz, qs), qn)


# ---------------------------------------------------------------------------
# Built-in instances

def erasure() -> Modality:
    c = ("0", "w")
    add = _from_rows(c, [["0", "w"], ["w", "w"]])
    mul = _from_rows(c, [["0", "0"], ["0", "w"]])
    meet = _from_rows(c, [["0", "w"], ["w", "w"]])
    m = Modality("erasure", c, add, mul, meet, {}, "0", "w", {"1": "w"})
    return m.with_nr(_meet_nr(m))


def _zero_one_many(name: str, meet_rows) -> Modality:
    c = ("0", "1", "w")
    add = _from_rows(c, [["0", "1", "w"], ["1", "w", "w"], ["w", "w", "w"]])
    mul = _from_rows(c, [["0", "0", "0"], ["0", "1", "w"], ["0", "w", "w"]])
    meet = _from_rows(c, meet_rows)
    return Modality(name, c, add, mul, meet, {}, "0", "1")


def _zero_one_many_nr(m: Modality):
    """Case split on the recursive-call grade; shared by affine, linear and linear-or-affine."""
    one, w = m.one, "w"

    def nr(p, r, qz, qs, qn):
        if r == m.zero:
            succ = m.add(m.mul(m.meet(one, p), qn), qs)
            return m.meet(succ, m.add(qn, qz))
        if r == one:
            return m.add(m.add(m.mul(m.add(one, p), qn), m.mul(w, qs)), qz)
        if r == "1?":
            return m.add(m.add(m.mul(m.add("1?", p), qn), m.mul(w, qs)), m.mul("1?", qz))
        return m.mul(w, m.add(m.add(qn, qs), qz))

    return nr


def affine() -> Modality:
    m = _zero_one_many("affine", [["0", "1", "w"], ["1", "1", "w"], ["w", "w", "w"]])
    return m.with_nr(_zero_one_many_nr(m))


def linear() -> Modality:
    m = _zero_one_many("linear", [["0", "w", "w"], ["w", "1", "w"], ["w", "w", "w"]])
    return m.with_nr(_zero_one_many_nr(m))


def linear_bad_nr() -> Modality:
    """Linear types with the greatest lawful nr, built from a natrec-star operator.

    It is lawful but assigns ``w`` to both arguments of addition and ``1`` to
    ``x + x``.
    """
    m = linear()
    w = "w"

    def star(p, q, r):
        if r == "0":
            return m.meet(p, q)
        if r == "1":
            return m.add(p, m.mul(w, q))
        return m.mul(w, m.meet(p, q))

    def nr(p, r, qz, qs, qn):
        return star(m.meet(qz, qn), m.add(qs, m.mul(p, qn)), r)

    return m.with_nr(nr, name="linear/bad-nr")


def linear_or_affine() -> Modality:
    c = ("0", "1", "1?", "w")
    add = _from_rows(c, [["0", "1", "1?", "w"], ["1", "w", "w", "w"],
                         ["1?", "w", "w", "w"], ["w", "w", "w", "w"]])
    mul = _from_rows(c, [["0", "0", "0", "0"], ["0", "1", "1?", "w"],
                         ["0", "1?", "1?", "w"], ["0", "w", "w", "w"]])
    meet = _from_rows(c, [["0", "1?", "1?", "w"], ["1?", "1", "1?", "w"],
                          ["1?", "1?", "1?", "w"], ["w", "w", "w", "w"]])
    m = Modality("linear-or-affine", c, add, mul, meet, {}, "0", "1")
    return m.with_nr(_zero_one_many_nr(m))


def trivial() -> Modality:
    c = ("0",)
    op = {("0", "0"): "0"}
    return Modality("trivial", c, op, op, op, {("0",) * 5: "0"}, "0", "0", {"1": "0", "w": "0"})


# ---------------------------------------------------------------------------
# Bounded distributive lattices

def parse_lattice_spec(text: str) -> tuple[list[str], str | None, str | None, list[tuple[str, str]]]:
    elems: list[str] = []
    bot = top = None
    covers: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.replace(";", "\n").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word, *args = line.split()
        if word == "elem" and args:
            elems.extend(args)
        elif word == "bot" and len(args) == 1:
            bot = args[0]
        elif word == "top" and len(args) == 1:
            top = args[0]
        elif word == "cover" and len(args) == 2:
            covers.append((args[0], args[1]))
        else:
            raise ModalityError(f"lattice spec line {lineno}: cannot parse {raw.strip()!r}")
    return elems, bot, top, covers


def lattice(spec: str, name: str = "lattice") -> Modality:
    """Information-flow style instance: + is meet, * is join, 0 is top, 1 is bottom."""
    elems, bot, top, covers = parse_lattice_spec(spec)
    if not elems:
        raise ModalityError("lattice spec declares no elements")
    if len(set(elems)) != len(elems):
        raise ModalityError("lattice spec repeats an element")
    for a, b in covers:
        if a not in elems or b not in elems or a == b:
            raise ModalityError(f"bad cover {a} {b}")
    below = {a: {a} for a in elems}  # below[b] = all a with a <= b
    changed = True
    while changed:
        changed = False
        for a, b in covers:
            new = below[a] - below[b]
            if new:
                below[b] |= new
                changed = True
    for a in elems:
        for b in elems:
            if a != b and a in below[b] and b in below[a]:
                raise ModalityError(f"cover relation has a cycle through {a} and {b}")

    def leq(a, b):
        return a in below[b]

    def bound(a, b, lower: bool):
        cands = [c for c in elems if (leq(c, a) and leq(c, b)) if lower] if lower else \
                [c for c in elems if leq(a, c) and leq(b, c)]
        best = [c for c in cands if all((leq(d, c) if lower else leq(c, d)) for d in cands)]
        if len(best) != 1:
            raise ModalityError(f"{a} and {b} have no {'meet' if lower else 'join'}")
        return best[0]

    meet = _tabulate2(elems, lambda a, b: bound(a, b, True))
    join = _tabulate2(elems, lambda a, b: bound(a, b, False))
    bots = [a for a in elems if all(leq(a, b) for b in elems)]
    tops = [a for a in elems if all(leq(b, a) for b in elems)]
    if not bots or not tops:
        raise ModalityError("lattice is not bounded")
    if bot is not None and bot != bots[0]:
        raise ModalityError(f"declared bottom {bot} is not the least element")
    if top is not None and top != tops[0]:
        raise ModalityError(f"declared top {top} is not the greatest element")
    m = Modality(name, tuple(elems), meet, join, meet, {}, tops[0], bots[0])
    return m.with_nr(_meet_nr(m))


INFORMATION_FLOW_SPEC = "elem L M H\nbot L\ntop H\ncover L M\ncover M H\n"


def information_flow() -> Modality:
    return lattice(INFORMATION_FLOW_SPEC, name="L<=M<=H")


_BUILTINS: dict[str, Callable[[], Modality]] = {
    "erasure": erasure,
    "affine": affine,
    "linear": linear,
    "linear-bad-nr": linear_bad_nr,
    "linear-or-affine": linear_or_affine,
    "trivial": trivial,
    "information-flow": information_flow,
}

INSTANCE_NAMES = tuple(_BUILTINS)


def make_instance(name: str) -> Modality:
    """Build a modality by id: a built-in name or ``lattice:<path or inline spec>``."""
    if name in _BUILTINS:
        return _BUILTINS[name]()
    if name.startswith("lattice:"):
        arg = name[len("lattice:"):]
        if "\n" in arg or ";" in arg:
            return lattice(arg)
        path = Path(arg)
        if not path.is_file():
            raise ModalityError(f"lattice spec file {arg!r} not found")
        return lattice(path.read_text(encoding="utf-8"), name=f"lattice:{path.stem}")
    raise ModalityError(f"unknown modality {name!r}; expected one of {', '.join(_BUILTINS)} or lattice:<spec>")


# ---------------------------------------------------------------------------
# Law checking

@dataclass(frozen=True)
class LawResult:
    law: str
    ok: bool
    witness: tuple | None = None

    def __str__(self) -> str:
        status = "pass" if self.ok else f"FAIL witness={self.witness}"
        return f"{self.law}: {status}"


def _law(name: str, cases: Iterable[tuple], holds: Callable[..., bool]) -> LawResult:
    for case in cases:
        if not holds(*case):
            return LawResult(name, False, case)
    return LawResult(name, True)


def _nr_laws(m: Modality, nr) -> list[LawResult]:
    C = m.carrier
    le, add, mul = m.le, m.add, m.mul
    c2, c5 = list(itertools.product(C, repeat=2)), list(itertools.product(C, repeat=5))

    def step(p, r, z, s, n):
        x = nr(p, r, z, s, n)
        return le(x, add(add(s, mul(p, n)), mul(r, x)))

    def mono_cases():
        # monotone in each of the last three arguments separately, over all pairs a <= b
        for p, r, a, b, x, y in itertools.product(C, repeat=6):
            if le(a, b):
                yield p, r, (a, x, y), (b, x, y)
                yield p, r, (x, a, y), (x, b, y)
                yield p, r, (x, y, a), (x, y, b)

    return [
        _law("nr-base", c5, lambda p, r, z, s, n: not le(n, m.zero) or le(nr(p, r, z, s, n), z)),
        _law("nr-step", c5, step),
        _law("nr-monotone", mono_cases(), lambda p, r, u, v: le(nr(p, r, *u), nr(p, r, *v))),
        _law("nr-sub-distributive", itertools.product(C, repeat=6),
             lambda p, r, z, s, n, q: le(mul(nr(p, r, z, s, n), q),
                                         nr(p, r, mul(z, q), mul(s, q), mul(n, q)))),
        _law("nr-sub-interchange", itertools.product(C, repeat=8),
             lambda p, r, z, s, n, z2, s2, n2: le(add(nr(p, r, z, s, n), nr(p, r, z2, s2, n2)),
                                                  nr(p, r, add(z, z2), add(s, s2), add(n, n2)))),
    ] if c2 else []


def check_laws(m: Modality) -> list[LawResult]:
    """Exhaustively verify every modality-structure axiom over the carrier."""
    C = m.carrier
    add, mul, meet, le = m.add, m.mul, m.meet, m.le
    c1 = [(a,) for a in C]
    c2 = list(itertools.product(C, repeat=2))
    c3 = list(itertools.product(C, repeat=3))
    results = [
        _law("zero-in-carrier", [(m.zero, m.one)], lambda z, o: z in C and o in C),
        _law("add-commutative", c2, lambda a, b: add(a, b) == add(b, a)),
        _law("add-associative", c3, lambda a, b, c: add(add(a, b), c) == add(a, add(b, c))),
        _law("add-identity", c1, lambda a: add(m.zero, a) == a),
        _law("mul-associative", c3, lambda a, b, c: mul(mul(a, b), c) == mul(a, mul(b, c))),
        _law("mul-identity", c1, lambda a: mul(m.one, a) == a and mul(a, m.one) == a),
        _law("mul-zero", c1, lambda a: mul(m.zero, a) == m.zero and mul(a, m.zero) == m.zero),
        _law("mul-distrib-add", c3, lambda a, b, c: mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
             and mul(add(b, c), a) == add(mul(b, a), mul(c, a))),
        _law("meet-commutative", c2, lambda a, b: meet(a, b) == meet(b, a)),
        _law("meet-associative", c3, lambda a, b, c: meet(meet(a, b), c) == meet(a, meet(b, c))),
        _law("meet-idempotent", c1, lambda a: meet(a, a) == a),
        _law("mul-distrib-meet", c3, lambda a, b, c: mul(a, meet(b, c)) == meet(mul(a, b), mul(a, c))
             and mul(meet(b, c), a) == meet(mul(b, a), mul(c, a))),
        _law("add-distrib-meet", c3, lambda a, b, c: add(a, meet(b, c)) == meet(add(a, b), add(a, c))),
        _law("add-monotone", c3, lambda a, b, c: not le(a, b) or le(add(a, c), add(b, c))),
        _law("mul-monotone", c3, lambda a, b, c: not le(a, b) or (le(mul(a, c), mul(b, c))
                                                                   and le(mul(c, a), mul(c, b)))),
    ]
    return results + _nr_laws(m, m.nr)


def check_well_behaved_zero(m: Modality) -> list[LawResult]:
    C, z = m.carrier, m.zero
    c2 = list(itertools.product(C, repeat=2))
    return [
        _law("add-positive", c2, lambda a, b: m.add(a, b) != z or (a == z and b == z)),
        _law("meet-positive", c2, lambda a, b: m.meet(a, b) != z or (a == z and b == z)),
        _law("nr-positive", itertools.product(C, repeat=5),
             lambda p, r, qz, qs, qn: m.nr(p, r, qz, qs, qn) != z or qz == qs == qn == z),
        _law("zero-product", c2, lambda a, b: m.mul(a, b) != z or a == z or b == z),
        _law("zero-ne-one", [(z, m.one)], lambda a, b: a != b),
    ]


# ---------------------------------------------------------------------------
# Enumeration of lawful nr functions

class CarrierTooLarge(ModalityError):
    pass


def _nr_block_solutions(m: Modality, p: Grade, r: Grade, limit: int,
                        positive: bool) -> list[dict]:
    """All lawful choices of ``nr(p, r, -, -, -)`` (up to ``limit``), by backtracking.

    Every nr axiom fixes ``p`` and ``r``, so blocks are independent.
    """
    C = m.carrier
    le, add, mul = m.le, m.add, m.mul
    keys = list(itertools.product(C, repeat=3))
    pos = {k: i for i, k in enumerate(keys)}

    domains = []
    for z, s, n in keys:
        dom = []
        for x in C:
            if le(n, m.zero) and not le(x, z):
                continue
            if positive and x == m.zero and (z, s, n) != (m.zero,) * 3:
                continue
            if not le(x, add(add(s, mul(p, n)), mul(r, x))):
                continue
            dom.append(x)
        domains.append(dom)

    # binary/ternary constraints, attached to the latest-assigned variable they mention
    checks: list[list[Callable[[list], bool]]] = [[] for _ in keys]

    def attach(idxs, fn):
        checks[max(idxs)].append(fn)

    for k in keys:
        for j in range(3):
            for b in C:
                if b != k[j] and le(k[j], b):
                    k2 = k[:j] + (b,) + k[j + 1:]
                    i1, i2 = pos[k], pos[k2]
                    attach((i1, i2), lambda v, i1=i1, i2=i2: le(v[i1], v[i2]))
        for q in C:
            kq = tuple(mul(x, q) for x in k)
            i1, i2 = pos[k], pos[kq]
            attach((i1, i2), lambda v, i1=i1, i2=i2, q=q: le(mul(v[i1], q), v[i2]))
        for k2 in keys:
            ks = tuple(add(a, b) for a, b in zip(k, k2))
            i1, i2, i3 = pos[k], pos[k2], pos[ks]
            attach((i1, i2, i3), lambda v, i1=i1, i2=i2, i3=i3: le(add(v[i1], v[i2]), v[i3]))

    sols: list[dict] = []
    vals: list = [None] * len(keys)

    def go(i):
        if len(sols) >= limit:
            return
        if i == len(keys):
            sols.append({(p, r) + k: vals[j] for j, k in enumerate(keys)})
            return
        for x in domains[i]:
            vals[i] = x
            if all(c(vals) for c in checks[i]):
                go(i + 1)
        vals[i] = None

    go(0)
    return sols


def zero_is_well_behaved_without_nr(m: Modality) -> bool:
    """Every well-behaved-zero clause except the one about nr holds."""
    return all(r.ok for r in check_well_behaved_zero(m) if r.law != "nr-positive")


def lawful_nr_tables(m: Modality, limit: int = 2, max_carrier: int = 4,
                     positive: bool | None = None) -> list[dict]:
    """Up to ``limit`` distinct lawful nr tables for ``m`` (``m.nr`` is ignored).

    ``positive`` additionally demands that nr be positive in its last three
    arguments.  By default this is demanded exactly when the rest of the
    structure already has a well-behaved zero, so that the candidate tables
    preserve that property.
    """
    if len(m.carrier) > max_carrier:
        raise CarrierTooLarge(f"carrier of size {len(m.carrier)} exceeds bound {max_carrier}")
    if positive is None:
        positive = zero_is_well_behaved_without_nr(m)
    blocks = [_nr_block_solutions(m, p, r, limit, positive) for p in m.carrier for r in m.carrier]
    if any(not b for b in blocks):
        return []
    tables = []
    for choice in itertools.product(*blocks):
        table: dict = {}
        for part in choice:
            table.update(part)
        tables.append(table)
        if len(tables) >= limit:
            break
    return tables


def nr_unique_check(m: Modality, max_carrier: int = 4, positive: bool | None = None) -> bool:
    """True iff exactly one lawful nr function exists and it is ``m.nr``."""
    tables = lawful_nr_tables(m, limit=2, max_carrier=max_carrier, positive=positive)
    return len(tables) == 1 and tables[0] == dict(m.nr_table)


# ---------------------------------------------------------------------------
# Division

def _division_tables(m: Modality) -> dict[Grade, dict[Grade, Grade]]:
    out = {}
    for q in m.carrier:
        table = {}
        for p in m.carrier:
            ok = [r for r in m.carrier if m.le(p, m.mul(q, r))]
            least = [r for r in ok if all(m.le(r, s) for s in ok)]
            if len(least) != 1:
                break
            table[p] = least[0]
        else:
            galois = all(m.le(table[p], r) == m.le(p, m.mul(q, r))
                         for p in m.carrier for r in m.carrier)
            if galois:
                out[q] = table
    return out


def divide(m: Modality, p: Grade, q: Grade) -> Grade:
    return m.divide(p, q)


def division_laws(m: Modality) -> list[LawResult]:
    """The five division laws, each over every divisor ``m`` supports."""
    C, z, o = m.carrier, m.zero, m.one
    D = [a for a in C if a in m.supports_division_by]
    zp = all(m.mul(a, b) != z or a == z or b == z for a in C for b in C)
    res = []
    if o in D:
        res.append(_law("p/1 = p", [(a,) for a in C], lambda a: m.divide(a, o) == a))
    if z in D:
        res.append(_law("p/0 = 1", [(a,) for a in C], lambda a: m.divide(a, z) == o))
    res.append(_law("p/p = 1", [(a,) for a in D], lambda a: m.divide(a, a) == o))
    res.append(_law("1/p = 1", [(a,) for a in D], lambda a: m.divide(o, a) == o))
    if zp:
        res.append(_law("0/p = 0", [(a,) for a in D if a != z], lambda a: m.divide(z, a) == z))
    return res


# ---------------------------------------------------------------------------
# Usage contexts: pointwise operations and substitution matrices

def zeros(m: Modality, n: int) -> UsageCtx:
    return (m.zero,) * n


def unit_vector(m: Modality, n: int, i: int) -> UsageCtx:
    return tuple(m.one if j == i else m.zero for j in range(n))


def _same_len(*ctxs):
    n = len(ctxs[0])
    for c in ctxs[1:]:
        if len(c) != n:
            raise ValueError(f"usage context length mismatch: {[len(x) for x in ctxs]}")


def ctx_add(m: Modality, g: UsageCtx, d: UsageCtx) -> UsageCtx:
    _same_len(g, d)
    return tuple(m.add(a, b) for a, b in zip(g, d))


def ctx_scale(m: Modality, p: Grade, g: UsageCtx) -> UsageCtx:
    return tuple(m.mul(p, a) for a in g)


def ctx_meet(m: Modality, g: UsageCtx, d: UsageCtx) -> UsageCtx:
    _same_len(g, d)
    return tuple(m.meet(a, b) for a, b in zip(g, d))


def ctx_nr(m: Modality, p: Grade, r: Grade, gz: UsageCtx, gs: UsageCtx, gn: UsageCtx) -> UsageCtx:
    _same_len(gz, gs, gn)
    return tuple(m.nr(p, r, a, b, c) for a, b, c in zip(gz, gs, gn))


def ctx_le(m: Modality, g: UsageCtx, d: UsageCtx) -> bool:
    _same_len(g, d)
    return all(m.le(a, b) for a, b in zip(g, d))


def matrix_apply(m: Modality, g: UsageCtx, psi: SubstMatrix) -> UsageCtx:
    """``g Psi = sum_i g(i) * row_i``."""
    if len(g) != len(psi):
        raise ValueError(f"context of length {len(g)} against a matrix with {len(psi)} rows")
    if not psi:
        raise ValueError("cannot infer the width of an empty matrix; use matrix_apply_n")
    return matrix_apply_n(m, g, psi, len(psi[0]))


def matrix_apply_n(m: Modality, g: UsageCtx, psi: SubstMatrix, width: int) -> UsageCtx:
    if len(g) != len(psi):
        raise ValueError(f"context of length {len(g)} against a matrix with {len(psi)} rows")
    acc = zeros(m, width)
    for gi, row in zip(g, psi):
        acc = ctx_add(m, acc, ctx_scale(m, gi, row))
    return acc


def render_ctx(g: UsageCtx, names: Sequence[str] | None = None) -> str:
    """Render right-to-left, index 0 rightmost: ``[x2↦w, x1↦0, x0↦1]``."""
    n = len(g)
    parts = []
    for i in reversed(range(n)):
        label = names[i] if names is not None else f"x{i}"
        parts.append(f"{label}↦{g[i]}")
    return "[" + ", ".join(parts) + "]"
