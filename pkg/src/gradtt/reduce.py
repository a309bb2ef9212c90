"""Weak-head reduction of source terms and numeral readback.

Reduction ignores types: the typed side conditions of the declarative
relation never influence which redex fires, so they are treated as
invariants of well-typed input rather than checked here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .config import DEFAULT_FUEL
from .syntax import (STRONG, TYPE_FORMERS, WEAK, Ann, App, Emptyrec, Fst, Lam, Natrec, Pair, Pi,
                     Prodrec, Sigma, Snd, Star, Suc, Term, Unitrec, Var, Zero, subst_top)


class OutOfFuel(RuntimeError):
    def __init__(self, fuel: int):
        super().__init__(f"no weak head normal form within {fuel} steps")
        self.fuel = fuel


@dataclass(frozen=True)
class Stepped:
    term: Term


@dataclass(frozen=True)
class Whnf:
    """``kind`` is one of lam, pair, zero, suc, star, type-former, neutral, stuck."""

    kind: str
    head: int | None = None  # blocking variable of a neutral


StepResult = Union[Stepped, Whnf]


def _eliminated(t: Term) -> Term | None:
    """The head/scrutinee position of an eliminator, if ``t`` is one."""
    match t:
        case App(fun=f):
            return f
        case Fst(arg=a) | Snd(arg=a):
            return a
        case Prodrec(scrut=s) | Natrec(scrut=s) | Emptyrec(scrut=s) | Unitrec(scrut=s):
            return s
    return None


def _replace_head(t: Term, new: Term) -> Term:
    match t:
        case App(_, p, u):
            return App(new, p, u)
        case Fst(p, _):
            return Fst(p, new)
        case Snd(p, _):
            return Snd(p, new)
        case Prodrec(r, p, q, A, _, u):
            return Prodrec(r, p, q, A, new, u)
        case Natrec(p, q, r, A, z, s, _):
            return Natrec(p, q, r, A, z, s, new)
        case Emptyrec(p, A, _):
            return Emptyrec(p, A, new)
        case Unitrec(p, q, A, _, u):
            return Unitrec(p, q, A, new, u)
    raise TypeError(t)


def _value(t: Term) -> tuple[Term, Term | None]:
    """Split an ascribed introduction ``(v : A)`` into ``v`` and ``A``."""
    if isinstance(t, Ann):
        return t.term, t.type
    return t, None


def _ann(t: Term, A: Term | None) -> Term:
    return t if A is None else Ann(t, A)


def ascribe_argument(u: Term, A: Term | None) -> Term:
    """``u`` ascribed with ``A`` if ``u`` is a λ or a pair (which cannot be inferred).

    Substituting a bare introduction into an inferable position, such as the
    scrutinee of an eliminator, would leave a term the bidirectional checker
    cannot type; the ascription has no effect on usage or extraction.
    """
    return Ann(u, A) if A is not None and isinstance(u, (Lam, Pair)) else u


def _type_whnf(A: Term | None, former: type) -> Term | None:
    if A is None:
        return None
    try:
        A = whnf(A, _TYPE_FUEL)
    except OutOfFuel:
        return None
    return A if isinstance(A, former) else None


_TYPE_FUEL = 10_000


def _contract(t: Term) -> Term | None:
    """Fire the head redex of ``t`` if its eliminated position is a matching constructor.

    Reducts keep the type information that was present in the redex: an
    ascribed function or pair passes its (instantiated) component types on,
    and the recursors ascribe their result with the instantiated motive, so
    that every reduct of a checkable term stays checkable.
    """
    match t:
        case App(f, p2, u):
            lam, A = _value(f)
            if isinstance(lam, Lam) and lam.p == p2:
                pi = _type_whnf(A, Pi)
                if pi is None:
                    return subst_top(lam.body, u)
                return Ann(subst_top(lam.body, ascribe_argument(u, pi.dom)), subst_top(pi.cod, u))
        case Fst(p1, v) | Snd(p1, v):
            pair, A = _value(v)
            if isinstance(pair, Pair) and pair.kind == STRONG and pair.p == p1:
                sig = _type_whnf(A, Sigma)
                if isinstance(t, Fst):
                    return _ann(pair.left, None if sig is None else sig.fst_ty)
                return _ann(pair.right, None if sig is None else subst_top(sig.snd_ty, pair.left))
        case Prodrec(_, p1, _, A, v, u):
            pair, S = _value(v)
            if isinstance(pair, Pair) and pair.kind == WEAK and pair.p == p1:
                sig = _type_whnf(S, Sigma)
                a, b = pair.left, pair.right
                if sig is not None:
                    a, b = Ann(a, sig.fst_ty), Ann(b, subst_top(sig.snd_ty, pair.left))
                return Ann(subst_top(u, a, b), subst_top(A, pair))
        case Natrec(_, _, _, A, z, _, Zero()):
            return Ann(z, subst_top(A, Zero()))
        case Natrec(_, _, _, A, _, s, Suc(n)):
            return Ann(subst_top(s, n, _replace_head(t, n)), subst_top(A, Suc(n)))
        case Unitrec(_, _, A, Star(k), u) if k == WEAK:
            return Ann(u, subst_top(A, Star(WEAK)))
    return None


_INTRO_KINDS = {Lam: "lam", Pair: "pair"}


def whnf_step(t: Term) -> StepResult:
    """One step of weak-head reduction, or a description of the normal form.

    An ascription is dropped unless it decorates a function or a pair: an
    ascribed λ or pair is itself a weak head normal form.
    """
    if isinstance(t, Ann):
        inner = t.term
        if isinstance(inner, Ann):
            return Stepped(Ann(inner.term, t.type))
        kind = _INTRO_KINDS.get(type(inner))
        if kind is not None:
            return Whnf(kind)
        return Stepped(inner)
    head = _eliminated(t)
    if head is None:
        match t:
            case Lam():
                return Whnf("lam")
            case Pair():
                return Whnf("pair")
            case Zero():
                return Whnf("zero")
            case Suc():
                return Whnf("suc")
            case Star():
                return Whnf("star")
            case Var(i):
                return Whnf("neutral", i)
        if isinstance(t, TYPE_FORMERS):
            return Whnf("type-former")
        raise TypeError(f"not a source term: {t!r}")
    reduct = _contract(t)
    if reduct is not None:
        return Stepped(reduct)
    inner = whnf_step(head)
    match inner:
        case Stepped(h):
            return Stepped(_replace_head(t, h))
        case Whnf("neutral", i):
            return Whnf("neutral", i)
    # a constructor in eliminated position that does not match: ill-typed input
    return Whnf("stuck")


def whnf(t: Term, fuel: int = DEFAULT_FUEL) -> Term:
    for _ in range(fuel):
        match whnf_step(t):
            case Stepped(u):
                t = u
            case Whnf():
                return t
    if isinstance(whnf_step(t), Whnf):
        return t
    raise OutOfFuel(fuel)


def whnf_kind(t: Term) -> Whnf:
    r = whnf_step(t)
    if isinstance(r, Stepped):
        raise ValueError("term is not in weak head normal form")
    return r


@dataclass(frozen=True)
class Numeral:
    value: int


@dataclass(frozen=True)
class Stuck:
    """Readback stopped at a non-numeral weak head normal form."""

    kind: str
    head: int | None
    term: Term


@dataclass(frozen=True)
class Timeout:
    fuel: int


Readback = Union[Numeral, Stuck, Timeout]


def read_numeral(t: Term, fuel: int = DEFAULT_FUEL) -> Readback:
    """Reduce to whnf, continuing under ``suc``; count the successors."""
    count = 0
    remaining = fuel
    while True:
        while True:
            if remaining <= 0:
                return Timeout(fuel)
            r = whnf_step(t)
            if isinstance(r, Whnf):
                break
            t = r.term
            remaining -= 1
        match t:
            case Zero():
                return Numeral(count)
            case Suc(n):
                count += 1
                t = n
            case _:
                return Stuck(r.kind, r.head, t)


def reduction_steps(t: Term, fuel: int = DEFAULT_FUEL) -> list[Term]:
    """The whnf reduction sequence starting at ``t`` (inclusive)."""
    out = [t]
    for _ in range(fuel):
        r = whnf_step(t)
        if isinstance(r, Whnf):
            return out
        t = r.term
        out.append(t)
    raise OutOfFuel(fuel)
