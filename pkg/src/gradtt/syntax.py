"""Well-scoped de Bruijn syntax for the source and target languages.

Both languages share one traversal scheme: every node class lists its
subterm fields together with the number of variables each one binds
(``CHILDREN``).  Weakening and substitution are written once against that
table, so adding a term former only needs a new dataclass.

Variable 0 is the most recently bound variable.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from functools import lru_cache
from typing import Callable, ClassVar, Iterator, Union

STRONG = "&"
WEAK = "@"
KINDS = (STRONG, WEAK)


class Node:
    """Base for all AST nodes.  ``CHILDREN`` maps subterm fields to binder counts."""

    CHILDREN: ClassVar[tuple[tuple[str, int], ...]] = ()

    def children(self) -> Iterator[tuple[str, int, "Node"]]:
        for name, binds in self.CHILDREN:
            yield name, binds, getattr(self, name)


def _node(cls):
    cls = dataclass(frozen=True, slots=True)(cls)
    return cls


# ---------------------------------------------------------------------------
# Source terms


class Term(Node):
    __slots__ = ()


@_node
class U(Term):
    pass


@_node
class Nat(Term):
    pass


@_node
class Empty(Term):
    pass


@_node
class Unit(Term):
    kind: str


@_node
class Pi(Term):
    p: str
    q: str
    dom: Term
    cod: Term
    CHILDREN = (("dom", 0), ("cod", 1))


@_node
class Sigma(Term):
    kind: str
    p: str
    q: str
    fst_ty: Term
    snd_ty: Term
    CHILDREN = (("fst_ty", 0), ("snd_ty", 1))


@_node
class Var(Term):
    index: int


@_node
class Lam(Term):
    p: str
    body: Term
    CHILDREN = (("body", 1),)


@_node
class App(Term):
    fun: Term
    p: str
    arg: Term
    CHILDREN = (("fun", 0), ("arg", 0))


@_node
class Pair(Term):
    kind: str
    p: str
    left: Term
    right: Term
    CHILDREN = (("left", 0), ("right", 0))


@_node
class Fst(Term):
    p: str
    arg: Term
    CHILDREN = (("arg", 0),)


@_node
class Snd(Term):
    p: str
    arg: Term
    CHILDREN = (("arg", 0),)


@_node
class Prodrec(Term):
    r: str
    p: str
    q: str
    motive: Term
    scrut: Term
    body: Term
    CHILDREN = (("motive", 1), ("scrut", 0), ("body", 2))


@_node
class Zero(Term):
    pass


@_node
class Suc(Term):
    arg: Term
    CHILDREN = (("arg", 0),)


@_node
class Natrec(Term):
    p: str
    q: str
    r: str
    motive: Term
    zero_case: Term
    suc_case: Term
    scrut: Term
    CHILDREN = (("motive", 1), ("zero_case", 0), ("suc_case", 2), ("scrut", 0))


@_node
class Emptyrec(Term):
    p: str
    motive: Term
    scrut: Term
    CHILDREN = (("motive", 0), ("scrut", 0))


@_node
class Star(Term):
    kind: str


@_node
class Unitrec(Term):
    p: str
    q: str
    motive: Term
    scrut: Term
    body: Term
    CHILDREN = (("motive", 1), ("scrut", 0), ("body", 0))


@_node
class Ann(Term):
    """Type ascription ``(t : A)``; computationally it is just ``t``."""

    term: Term
    type: Term
    CHILDREN = (("term", 0), ("type", 0))


TYPE_FORMERS = (U, Nat, Empty, Unit, Pi, Sigma)


def numeral(n: int) -> Term:
    t: Term = Zero()
    for _ in range(n):
        t = Suc(t)
    return t


# ---------------------------------------------------------------------------
# Target terms


class TTerm(Node):
    __slots__ = ()


@_node
class TVar(TTerm):
    index: int


@_node
class TLam(TTerm):
    body: TTerm
    CHILDREN = (("body", 1),)


@_node
class TApp(TTerm):
    fun: TTerm
    arg: TTerm
    CHILDREN = (("fun", 0), ("arg", 0))


@_node
class TPair(TTerm):
    left: TTerm
    right: TTerm
    CHILDREN = (("left", 0), ("right", 0))


@_node
class TFst(TTerm):
    arg: TTerm
    CHILDREN = (("arg", 0),)


@_node
class TSnd(TTerm):
    arg: TTerm
    CHILDREN = (("arg", 0),)


@_node
class TProdrec(TTerm):
    scrut: TTerm
    body: TTerm
    CHILDREN = (("scrut", 0), ("body", 2))


@_node
class TZero(TTerm):
    pass


@_node
class TSuc(TTerm):
    arg: TTerm
    CHILDREN = (("arg", 0),)


@_node
class TNatrec(TTerm):
    zero_case: TTerm
    suc_case: TTerm
    scrut: TTerm
    CHILDREN = (("zero_case", 0), ("suc_case", 2), ("scrut", 0))


@_node
class TStar(TTerm):
    pass


@_node
class TUnitrec(TTerm):
    scrut: TTerm
    body: TTerm
    CHILDREN = (("scrut", 0), ("body", 0))


@_node
class TUndef(TTerm):
    """The undefined value ``↯`` standing in for erased arguments."""


AnyTerm = Union[Term, TTerm]


# ---------------------------------------------------------------------------
# Generic traversal


@lru_cache(maxsize=None)
def _field_names(cls) -> tuple[str, ...]:
    return tuple(f.name for f in fields(cls))


def map_children(t: Node, fn: Callable[[Node, int], Node]) -> Node:
    """Rebuild ``t`` with ``fn(child, binders)`` applied to each subterm."""
    if not t.CHILDREN:
        return t
    kids = dict((name, binds) for name, binds in t.CHILDREN)
    args = []
    for name in _field_names(type(t)):
        v = getattr(t, name)
        args.append(fn(v, kids[name]) if name in kids else v)
    return type(t)(*args)


def _var_index(t: Node) -> int | None:
    if isinstance(t, (Var, TVar)):
        return t.index
    return None


def _mk_var(like: Node, i: int) -> Node:
    return TVar(i) if isinstance(like, TTerm) else Var(i)


# ---------------------------------------------------------------------------
# Weakenings


@dataclass(frozen=True)
class Id:
    pass


@dataclass(frozen=True)
class Step:
    inner: "Weakening"


@dataclass(frozen=True)
class Lift:
    inner: "Weakening"


Weakening = Union[Id, Step, Lift]


def wk_var(rho: Weakening, i: int) -> int:
    match rho:
        case Id():
            return i
        case Step(inner):
            return wk_var(inner, i) + 1
        case Lift(inner):
            return 0 if i == 0 else wk_var(inner, i - 1) + 1
    raise TypeError(rho)


def rename(t: Node, fn: Callable[[int], int], depth: int = 0) -> Node:
    """Apply ``fn`` to every free variable of ``t`` (indices relative to the outside)."""
    i = _var_index(t)
    if i is not None:
        return t if i < depth else _mk_var(t, fn(i - depth) + depth)
    return map_children(t, lambda c, b: rename(c, fn, depth + b))


def wk(rho: Weakening, t: Node) -> Node:
    if isinstance(rho, Id):
        return t
    return rename(t, lambda i: wk_var(rho, i))


def shift(t: Node, n: int = 1, cutoff: int = 0) -> Node:
    """Weaken by ``n`` fresh variables inserted below index ``cutoff``."""
    if n == 0:
        return t
    return rename(t, lambda i: i + n, cutoff) if cutoff else _shift(t, n, 0)


def _shift(t: Node, n: int, depth: int) -> Node:
    i = _var_index(t)
    if i is not None:
        return t if i < depth else _mk_var(t, i + n)
    if not t.CHILDREN:
        return t
    return map_children(t, lambda c, b: _shift(c, n, depth + b))


# ---------------------------------------------------------------------------
# Substitutions


@dataclass(frozen=True)
class Subst:
    """``sigma(i) = terms[i]`` for ``i < len(terms)``, else ``var(wk_var(rest, i - len(terms)))``."""

    terms: tuple = ()
    rest: Weakening = Id()

    def __call__(self, i: int) -> Node:
        if i < len(self.terms):
            return self.terms[i]
        return Var(wk_var(self.rest, i - len(self.terms)))

    @staticmethod
    def identity() -> "Subst":
        return Subst()

    def cons(self, t: Node) -> "Subst":
        return Subst((t,) + self.terms, self.rest)

    def head(self) -> Node:
        return self(0)

    def tail(self) -> "Subst":
        if self.terms:
            return Subst(self.terms[1:], self.rest)
        return Subst((), _tail_wk(self.rest))

    def lift(self) -> "Subst":
        return Subst((Var(0),) + tuple(shift(t) for t in self.terms), Step(self.rest))

    def entries(self, n: int) -> list[Node]:
        """``sigma(0), ..., sigma(n-1)``."""
        return [self(i) for i in range(n)]


def _tail_wk(rho: Weakening) -> Weakening:
    # tail of a weakening viewed as a substitution: i |-> rho(i + 1)
    match rho:
        case Id():
            return Step(Id())
        case Step(inner):
            return Step(_tail_wk(inner))
        case Lift(inner):
            return Step(inner)
    raise TypeError(rho)


def subst(sigma: Subst | Callable[[int], Node], t: Node) -> Node:
    return _subst(t, sigma, 0)


def _subst(t: Node, sigma, depth: int) -> Node:
    i = _var_index(t)
    if i is not None:
        if i < depth:
            return t
        u = sigma(i - depth)
        if isinstance(t, TTerm) and isinstance(u, Var):
            u = TVar(u.index)
        return _shift(u, depth, 0) if depth else u
    if not t.CHILDREN:
        return t
    return map_children(t, lambda c, b: _subst(c, sigma, depth + b))


def subst_top(t: Node, *args: Node) -> Node:
    """Instantiate the ``len(args)`` innermost variables of ``t``.

    The last argument replaces variable 0, so ``subst_top(s, n, ih)`` maps
    ``#1 -> n`` and ``#0 -> ih`` and lowers the remaining indices.
    """
    k = len(args)
    rev = args[::-1]

    def sigma(i: int) -> Node:
        if i < k:
            return rev[i]
        return _mk_var(t, i - k)

    return _subst(t, sigma, 0)


def subst_lifted(t: Node, replacement: Node, binders: int) -> Node:
    """Replace variable 0 of ``t`` by ``replacement`` while adding ``binders`` fresh
    variables below it; the other variables are shifted accordingly.

    ``replacement`` lives in the extended scope.  Used to build motives such
    as ``A[suc #1]`` over ``Γ, m : ℕ, ih : A``.
    """

    def sigma(i: int) -> Node:
        if i == 0:
            return replacement
        return _mk_var(t, i - 1 + binders)

    return _subst(t, sigma, 0)


# ---------------------------------------------------------------------------
# Inspection helpers


def free_vars(t: Node, depth: int = 0) -> set[int]:
    i = _var_index(t)
    if i is not None:
        return {i - depth} if i >= depth else set()
    out: set[int] = set()
    for _, b, c in t.children():
        out |= free_vars(c, depth + b)
    return out


def occurs(i: int, t: Node) -> bool:
    return i in free_vars(t)


def is_closed(t: Node) -> bool:
    return not free_vars(t)


def well_scoped(t: Node, n: int) -> bool:
    return all(i < n for i in free_vars(t))


def size(t: Node) -> int:
    return 1 + sum(size(c) for _, _, c in t.children())


def subterms(t: Node) -> Iterator[Node]:
    yield t
    for _, _, c in t.children():
        yield from subterms(c)


def grade_annotations(t: Term) -> Iterator[str]:
    """All grade annotations occurring in ``t``."""
    for s in subterms(t):
        for name in ("p", "q", "r"):
            g = getattr(s, name, None)
            if isinstance(g, str):
                yield g


def strip_ann(t: Term) -> Term:
    """Remove every ascription node."""
    if isinstance(t, Ann):
        return strip_ann(t.term)
    return map_children(t, lambda c, _: strip_ann(c))


def pi_chain(*doms: tuple[str, str, Term], cod: Term) -> Term:
    """Nested ``Pi`` with the given ``(p, q, domain)`` triples, outermost first."""
    for p, q, d in reversed(doms):
        cod = Pi(p, q, d, cod)
    return cod


def apps(f: Term, *args: tuple[str, Term]) -> Term:
    for p, a in args:
        f = App(f, p, a)
    return f


def lams(body: Term, *ps: str) -> Term:
    """``lams(t, p1, p2)`` is ``lam[p1] lam[p2] t``."""
    for p in reversed(ps):
        body = Lam(p, body)
    return body


def map_grades(t: Term, fn: Callable[[str], str]) -> Term:
    """Rename every grade annotation (used to move terms between instances)."""
    t = map_children(t, lambda c, _: map_grades(c, fn))
    changes = {n: fn(getattr(t, n)) for n in ("p", "q", "r")
               if isinstance(getattr(t, n, None), str)}
    if not changes:
        return t
    args = [changes.get(n, getattr(t, n)) for n in _field_names(type(t))]
    return type(t)(*args)
