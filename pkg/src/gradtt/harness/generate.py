"""Seeded, type-directed generation of well-typed terms.

Generation picks a target type first and then builds an inhabitant, mixing
introduction forms with eliminators applied to freshly built
introductions, so that the produced terms contain plenty of redexes.  Types
are kept closed and non-dependent except for the polymorphic identity,
which exercises a dependent Π-type.

Usage is not tracked while generating; callers filter with the usage
checker.  The generator only *biases* towards well-resourced output: it
prefers the least grade of the instance (which every binder accepts) and
keeps erased-only context variables out of relevant positions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from ..config import Config
from ..syntax import (STRONG, WEAK, Ann, App, Empty, Emptyrec, Fst, Lam, Nat, Natrec, Pair, Pi,
                      Prodrec, Sigma, Snd, Star, Suc, Term, U, Unit, Unitrec, Var, Zero, numeral)
from ..typecheck import Checker, Ctx, TypingError


@dataclass(frozen=True)
class Hyp:
    """A context entry: its (closed) type and whether relevant positions may use it."""

    type: Term
    relevant: bool = True


# Relative frequencies of the generation strategies for non-leaf positions.
_STRATEGY_WEIGHTS = {"intro": 3, "app": 3, "natrec": 2, "prodrec": 2, "proj": 1, "unitrec": 1,
                     "ann": 1, "poly": 1}


class Generator:
    def __init__(self, config: Config, seed: int, max_numeral: int = 3,
                 allow_strong_star: bool | None = None, allow_empty: bool = True):
        self.config = config
        self.m = config.modality
        self.moded = config.moded
        self.rng = random.Random(seed)
        self.max_numeral = max_numeral
        C = self.m.carrier
        self.least = [g for g in C if all(self.m.le(g, h) for h in C)] or list(C)
        self.below_zero = [g for g in C if self.m.le(g, self.m.zero)]
        self.allow_strong_star = self.m.zero_is_greatest if allow_strong_star is None else allow_strong_star
        self.allow_empty = allow_empty
        self.checker = Checker(config)

    # --- grades ------------------------------------------------------------------------

    def grade(self) -> str:
        r = self.rng.random()
        if r < 0.45:
            return self.rng.choice(self.least)
        if r < 0.6:
            return self.m.zero
        return self.rng.choice(self.m.carrier)

    def q_grade(self) -> str:
        return self.rng.choice(self.below_zero)

    def sigma_p(self) -> str:
        return self.grade() if self.moded else self.m.one

    # --- types -------------------------------------------------------------------------

    def rand_type(self, depth: int = 1) -> Term:
        r = self.rng.random()
        if depth <= 0 or r < 0.5:
            return Nat()
        if r < 0.58:
            return Unit(WEAK)
        if r < 0.64 and self.allow_strong_star:
            return Unit(STRONG)
        if r < 0.82:
            dom = Empty() if self.allow_empty and self.rng.random() < 0.1 else self.rand_type(depth - 1)
            return Pi(self.grade(), self.q_grade(), dom, self.rand_type(depth - 1))
        k = self.rng.choice((STRONG, WEAK))
        return Sigma(k, self.sigma_p(), self.q_grade(), self.rand_type(depth - 1), self.rand_type(depth - 1))

    def small_type_term(self) -> Term:
        """A closed type usable as a term of type U."""
        return self.rng.choice([Nat(), Nat(), Unit(WEAK), Pi(self.grade(), self.q_grade(), Nat(), Nat())])

    # --- terms ---------------------------------------------------------------------------

    def term(self, ctx: list[Hyp], T: Term, depth: int, relevant: bool = True) -> Term:
        rng = self.rng
        usable = [i for i, h in enumerate(reversed(ctx)) if h.type == T and (h.relevant or not relevant)]
        if usable and rng.random() < (0.3 if depth <= 0 else 0.12):
            return Var(rng.choice(usable))
        if depth <= 0:
            leaf = self.intro_leaf(ctx, T, relevant)
            if leaf is not None:
                return leaf
            if usable:
                return Var(rng.choice(usable))
        strategies, weights = list(_STRATEGY_WEIGHTS), list(_STRATEGY_WEIGHTS.values())
        if self.empty_var(ctx, relevant) is not None:
            strategies.append("emptyrec")
            weights.append(1)
        for _ in range(8):
            s = rng.choices(strategies, weights)[0]
            t = getattr(self, f"gen_{s}")(ctx, T, max(depth - 1, 0), relevant)
            if t is not None:
                return t
        leaf = self.intro_leaf(ctx, T, relevant)
        if leaf is not None:
            return leaf
        if usable:
            return Var(rng.choice(usable))
        raise _NoInhabitant(T)

    def empty_var(self, ctx: list[Hyp], relevant: bool) -> int | None:
        for i, h in enumerate(reversed(ctx)):
            if isinstance(h.type, Empty):
                return i
        return None

    def intro_leaf(self, ctx: list[Hyp], T: Term, relevant: bool) -> Term | None:
        match T:
            case Nat():
                return numeral(self.rng.randint(0, self.max_numeral))
            case Unit(k):
                return Star(k)
            case U():
                return self.small_type_term()
            case Pi(p, _, A, B):
                return Lam(p, self.term(ctx + [Hyp(A)], B, 0, relevant))
            case Sigma(k, p, _, A, B):
                return Pair(k, p, self.term(ctx, A, 0, relevant and p != self.m.zero),
                            self.term(ctx, B, 0, relevant))
        return None

    def gen_intro(self, ctx, T, d, rel):
        match T:
            case Nat():
                r = self.rng.random()
                if r < 0.15:
                    return Zero()
                if r < 0.35:
                    return numeral(self.rng.randint(1, self.max_numeral))
                return Suc(self.term(ctx, Nat(), d, rel))
            case Pi(p, _, A, B):
                return Lam(p, self.term(ctx + [Hyp(A)], B, d, rel))
            case Sigma(k, p, _, A, B):
                return Pair(k, p, self.term(ctx, A, d, rel and p != self.m.zero), self.term(ctx, B, d, rel))
        return self.intro_leaf(ctx, T, rel)

    def gen_app(self, ctx, T, d, rel):
        A = self.rand_type(1)
        p, q = self.grade(), self.q_grade()
        fty = Pi(p, q, A, T)
        if self.rng.random() < 0.7:
            f = Ann(Lam(p, self.term(ctx + [Hyp(A)], T, d, rel)), fty)
        else:
            f = self.term(ctx, fty, d, rel)
        return App(f, p, self.term(ctx, A, d, rel and p != self.m.zero))

    def gen_natrec(self, ctx, T, d, rel):
        p, r, q = self.grade(), self.grade(), self.q_grade()
        z = self.term(ctx, T, d, rel)
        s = self.term(ctx + [Hyp(Nat()), Hyp(T)], T, max(d - 1, 0), rel)
        if self.rng.random() < 0.6:
            n = numeral(self.rng.randint(0, self.max_numeral))
        else:
            n = self.term(ctx, Nat(), min(d, 1), rel)
        return Natrec(p, q, r, T, z, s, n)

    def gen_prodrec(self, ctx, T, d, rel):
        A, B = self.rand_type(0), self.rand_type(0)
        r, q, p = self.grade(), self.q_grade(), self.sigma_p()
        sty = Sigma(WEAK, p, self.q_grade(), A, B)
        scrut = self.term(ctx, sty, d, rel and r != self.m.zero)
        body = self.term(ctx + [Hyp(A), Hyp(B)], T, d, rel)
        return Prodrec(r, p, q, T, scrut, body)

    def gen_proj(self, ctx, T, d, rel):
        X = self.rand_type(0)
        p = self.sigma_p()
        if self.rng.random() < 0.5:
            return Fst(p, self.term(ctx, Sigma(STRONG, p, self.q_grade(), T, X), d, rel))
        return Snd(p, self.term(ctx, Sigma(STRONG, p, self.q_grade(), X, T), d, rel))

    def gen_unitrec(self, ctx, T, d, rel):
        p, q = self.grade(), self.q_grade()
        return Unitrec(p, q, T, self.term(ctx, Unit(WEAK), d, rel and p != self.m.zero), self.term(ctx, T, d, rel))

    def gen_ann(self, ctx, T, d, rel):
        return Ann(self.term(ctx, T, d, rel), T)

    def gen_poly(self, ctx, T, d, rel):
        """``id @[0] T @[p] t`` with the polymorphic identity at grade ``p``."""
        p, q1, q2 = self.grade(), self.q_grade(), self.q_grade()
        zero = self.m.zero
        idty = Pi(zero, q1, U(), Pi(p, q2, Var(0), Var(1)))
        ident = Ann(Lam(zero, Lam(p, Var(0))), idty)
        try:
            ty_term = self._type_as_term(T)
        except ValueError:
            return None
        return App(App(ident, zero, ty_term), p, self.term(ctx, T, d, rel and p != zero))

    def _type_as_term(self, T: Term) -> Term:
        if isinstance(T, U):
            raise ValueError("U is not a member of U")
        return T

    def gen_emptyrec(self, ctx, T, d, rel):
        i = self.empty_var(ctx, rel)
        if i is None:
            return None
        return Emptyrec(self.grade(), T, Var(i))

    # --- checked entry points -----------------------------------------------------------------

    def well_typed(self, ctx: list[Hyp], T: Term, depth: int, relevant: bool = True,
                   attempts: int = 50) -> Term:
        tctx = Ctx(tuple(h.type for h in ctx))
        for _ in range(attempts):
            try:
                t = self.term(ctx, T, depth, relevant)
            except _NoInhabitant:
                continue
            try:
                self.checker.check(tctx, t, T)
            except TypingError:
                continue
            return t
        raise RuntimeError(f"could not generate a well-typed inhabitant of {T!r}")

    def context(self, n: int, relevant: bool = True, types: list[Term] | None = None) -> list[Hyp]:
        pool = types or [Nat(), Nat(), Unit(WEAK), Pi(self.grade(), self.q_grade(), Nat(), Nat()),
                         Sigma(WEAK, self.sigma_p(), self.q_grade(), Nat(), Nat())]
        return [Hyp(self.rng.choice(pool), relevant) for _ in range(n)]


class _NoInhabitant(Exception):
    pass
