"""Bidirectional type checking with whnf-directed, type-directed conversion.

Introduction forms (``lam``, pairs) are checked against a type; everything
else is inferred.  Redexes whose head is an introduction form therefore
need an ascription ``(t : A)`` to be inferable.

Conversion uses η for Π, strong Σ and the strong unit type; neutral terms are
compared head-and-spine with equal grade annotations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, TypeVar

from .config import Config
from .reduce import OutOfFuel, whnf
from .syntax import (STRONG, WEAK, Ann, App, Empty, Emptyrec, Fst, Lam, Nat, Natrec, Pair, Pi,
                     Prodrec, Sigma, Snd, Star, Suc, Term, U, Unit, Unitrec, Var, Zero, shift,
                     subst_lifted, subst_top)

T = TypeVar("T")

ERROR_KINDS = ("mismatch", "not-a-function", "not-a-pair", "illegal-projection", "universe",
               "unbound", "grade-annotation-mismatch", "restriction-violation", "not-inferable",
               "not-a-type", "fuel")


class TypingError(Exception):
    def __init__(self, kind: str, message: str, expected: Term | None = None,
                 actual: Term | None = None, path: tuple[str, ...] = ()):
        super().__init__(message)
        assert kind in ERROR_KINDS, kind
        self.kind = kind
        self.message = message
        self.expected = expected
        self.actual = actual
        self.path = path

    def __str__(self) -> str:
        where = "/".join(self.path) or "<root>"
        return f"{self.kind} at {where}: {self.message}"


@dataclass(frozen=True)
class Ctx:
    """A typing context; ``types[-1]`` is the type of variable 0."""

    types: tuple[Term, ...] = ()

    def extend(self, *tys: Term) -> "Ctx":
        return Ctx(self.types + tys)

    def lookup(self, i: int) -> Term:
        if not 0 <= i < len(self.types):
            raise TypingError("unbound", f"variable #{i} is not in scope (context has {len(self.types)} entries)")
        return shift(self.types[-1 - i], i + 1)

    def __len__(self) -> int:
        return len(self.types)


EMPTY = Ctx()


def _at(name: str, fn: Callable[..., T], *args) -> T:
    try:
        return fn(*args)
    except TypingError as e:
        e.path = (name,) + e.path
        raise


class Checker:
    def __init__(self, config: Config):
        self.config = config
        self.m = config.modality
        self.r = config.restrictions
        self.fuel = config.fuel

    # --- helpers ---------------------------------------------------------------

    def whnf(self, t: Term) -> Term:
        """Weak head normal form, without the ascription an ascribed λ or pair keeps."""
        try:
            t = whnf(t, self.fuel)
        except OutOfFuel as e:
            raise TypingError("fuel", str(e), actual=t) from None
        return t.term if isinstance(t, Ann) else t

    def _grade(self, g: str, what: str) -> None:
        if g not in self.m.carrier:
            raise TypingError("grade-annotation-mismatch",
                              f"{what} grade {g!r} is not in the carrier of {self.m.name}")

    def _sigma_grade(self, p: str, what: str) -> None:
        self._grade(p, what)
        if not self.config.moded and p != self.m.one:
            raise TypingError("restriction-violation",
                              f"{what} carries first-component grade {p}; the plain system requires {self.m.one}")

    def _pisigma(self, p: str, q: str) -> None:
        self._grade(p, "binder")
        self._grade(q, "binder")
        if not self.r.pisigma_ok(p, q):
            raise TypingError("restriction-violation", f"Π/Σ grades {p},{q} must be equal in this configuration")

    # --- contexts and types ---------------------------------------------------------

    def check_ctx(self, ctx: Ctx) -> None:
        for i, ty in enumerate(ctx.types):
            _at(f"ctx[{i}]", self.check_type, Ctx(ctx.types[:i]), ty)

    def check_type(self, ctx: Ctx, A: Term) -> None:
        match A:
            case U() | Nat() | Empty():
                return
            case Unit(k):
                self._kind(k)
            case Pi(p, q, D, C):
                self._pisigma(p, q)
                _at("dom", self.check_type, ctx, D)
                _at("cod", self.check_type, ctx.extend(D), C)
            case Sigma(k, p, q, F, G):
                self._kind(k)
                self._pisigma(p, q)
                self._sigma_grade(p, "Σ-type")
                _at("fst_ty", self.check_type, ctx, F)
                _at("snd_ty", self.check_type, ctx.extend(F), G)
            case _:
                ty = self.infer(ctx, A)
                if not isinstance(self.whnf(ty), U):
                    raise TypingError("not-a-type", "expected a type", expected=U(), actual=ty)

    @staticmethod
    def _kind(k: str) -> None:
        if k not in (STRONG, WEAK):
            raise TypingError("mismatch", f"unknown kind {k!r}")

    # --- inference ----------------------------------------------------------------

    def infer(self, ctx: Ctx, t: Term) -> Term:
        match t:
            case Var(i):
                return ctx.lookup(i)
            case U():
                raise TypingError("universe", "the universe U is not itself a member of U", actual=t)
            case Nat() | Empty():
                return U()
            case Unit(k):
                self._kind(k)
                return U()
            case Pi(p, q, D, C):
                self._pisigma(p, q)
                _at("dom", self.check, ctx, D, U())
                _at("cod", self.check, ctx.extend(D), C, U())
                return U()
            case Sigma(k, p, q, F, G):
                self._kind(k)
                self._pisigma(p, q)
                self._sigma_grade(p, "Σ-type")
                _at("fst_ty", self.check, ctx, F, U())
                _at("snd_ty", self.check, ctx.extend(F), G, U())
                return U()
            case Zero():
                return Nat()
            case Suc(n):
                _at("arg", self.check, ctx, n, Nat())
                return Nat()
            case Star(k):
                self._kind(k)
                return Unit(k)
            case Ann(u, A):
                _at("type", self.check_type, ctx, A)
                _at("term", self.check, ctx, u, A)
                return A
            case App(f, p, u):
                self._grade(p, "application")
                fty = self.whnf(_at("fun", self.infer, ctx, f))
                if not isinstance(fty, Pi):
                    raise TypingError("not-a-function", "applied term is not a function", actual=fty)
                if fty.p != p:
                    raise TypingError("grade-annotation-mismatch",
                                      f"application grade {p} does not match function grade {fty.p}",
                                      expected=fty, actual=t)
                _at("arg", self.check, ctx, u, fty.dom)
                return subst_top(fty.cod, u)
            case Fst(p, u) | Snd(p, u):
                sty = self._strong_sigma(ctx, t, p, u)
                if isinstance(t, Fst):
                    return sty.fst_ty
                return subst_top(sty.snd_ty, Fst(p, u))
            case Prodrec(r, p, q, A, s, u):
                for g, what in ((r, "prodrec"), (q, "prodrec motive")):
                    self._grade(g, what)
                self._sigma_grade(p, "prodrec")
                sty = self.whnf(_at("scrut", self.infer, ctx, s))
                if not isinstance(sty, Sigma):
                    raise TypingError("not-a-pair", "prodrec scrutinee is not a pair", actual=sty)
                if sty.kind != WEAK:
                    raise TypingError("illegal-projection", "prodrec only eliminates weak Σ-types", actual=sty)
                if sty.p != p:
                    raise TypingError("grade-annotation-mismatch",
                                      f"prodrec grade {p} does not match Σ grade {sty.p}", expected=sty, actual=t)
                _at("motive", self.check_type, ctx.extend(sty), A)
                want = subst_lifted(A, Pair(WEAK, p, Var(1), Var(0)), 2)
                _at("body", self.check, ctx.extend(sty.fst_ty, sty.snd_ty), u, want)
                return subst_top(A, s)
            case Natrec(p, q, r, A, z, s, n):
                for g in (p, q, r):
                    self._grade(g, "natrec")
                _at("motive", self.check_type, ctx.extend(Nat()), A)
                _at("zero_case", self.check, ctx, z, subst_top(A, Zero()))
                want = subst_lifted(A, Suc(Var(1)), 2)
                _at("suc_case", self.check, ctx.extend(Nat(), A), s, want)
                _at("scrut", self.check, ctx, n, Nat())
                return subst_top(A, n)
            case Emptyrec(p, A, s):
                self._grade(p, "emptyrec")
                _at("motive", self.check_type, ctx, A)
                _at("scrut", self.check, ctx, s, Empty())
                return A
            case Unitrec(p, q, A, s, u):
                self._grade(p, "unitrec")
                self._grade(q, "unitrec motive")
                _at("motive", self.check_type, ctx.extend(Unit(WEAK)), A)
                _at("scrut", self.check, ctx, s, Unit(WEAK))
                _at("body", self.check, ctx, u, subst_top(A, Star(WEAK)))
                return subst_top(A, s)
            case Lam() | Pair():
                raise TypingError("not-inferable",
                                  f"cannot infer a type for {type(t).__name__.lower()}; add an ascription",
                                  actual=t)
        raise TypingError("mismatch", f"not a source term: {t!r}")

    def _strong_sigma(self, ctx: Ctx, t: Term, p: str, u: Term) -> Sigma:
        self._sigma_grade(p, "projection")
        sty = self.whnf(_at("arg", self.infer, ctx, u))
        if not isinstance(sty, Sigma):
            raise TypingError("not-a-pair", "projection from a non-pair", actual=sty)
        if sty.kind != STRONG:
            raise TypingError("illegal-projection", "projections only apply to strong Σ-types", actual=sty)
        if sty.p != p:
            raise TypingError("grade-annotation-mismatch",
                              f"projection grade {p} does not match Σ grade {sty.p}", expected=sty, actual=t)
        return sty

    # --- checking ---------------------------------------------------------------------

    def check(self, ctx: Ctx, t: Term, A: Term) -> None:
        match t:
            case Lam(p, body):
                self._grade(p, "lambda")
                ty = self.whnf(A)
                if not isinstance(ty, Pi):
                    raise TypingError("mismatch", "a lambda needs a function type", expected=A, actual=t)
                if ty.p != p:
                    raise TypingError("grade-annotation-mismatch",
                                      f"lambda grade {p} does not match function grade {ty.p}", expected=ty, actual=t)
                _at("body", self.check, ctx.extend(ty.dom), body, ty.cod)
            case Pair(k, p, a, b):
                self._kind(k)
                self._sigma_grade(p, "pair")
                ty = self.whnf(A)
                if not isinstance(ty, Sigma) or ty.kind != k:
                    raise TypingError("mismatch", f"a {k}-pair needs a {k}-Σ type", expected=A, actual=t)
                if ty.p != p:
                    raise TypingError("grade-annotation-mismatch",
                                      f"pair grade {p} does not match Σ grade {ty.p}", expected=ty, actual=t)
                _at("left", self.check, ctx, a, ty.fst_ty)
                _at("right", self.check, ctx, b, subst_top(ty.snd_ty, a))
            case _:
                got = self.infer(ctx, t)
                if not self.conv_type(ctx, got, A):
                    raise TypingError("mismatch", "inferred type does not match the expected type",
                                      expected=A, actual=got)

    # --- conversion -----------------------------------------------------------------

    def conv_type(self, ctx: Ctx, A: Term, B: Term) -> bool:
        A, B = self.whnf(A), self.whnf(B)
        match A, B:
            case (U(), U()) | (Nat(), Nat()) | (Empty(), Empty()):
                return True
            case Unit(k1), Unit(k2):
                return k1 == k2
            case Pi(p1, q1, D1, C1), Pi(p2, q2, D2, C2):
                return ((p1, q1) == (p2, q2) and self.conv_type(ctx, D1, D2)
                        and self.conv_type(ctx.extend(D1), C1, C2))
            case Sigma(k1, p1, q1, F1, G1), Sigma(k2, p2, q2, F2, G2):
                return ((k1, p1, q1) == (k2, p2, q2) and self.conv_type(ctx, F1, F2)
                        and self.conv_type(ctx.extend(F1), G1, G2))
        return self._neutral_eq(ctx, A, B)

    def conv_term(self, ctx: Ctx, t: Term, u: Term, A: Term) -> bool:
        ty = self.whnf(A)
        match ty:
            case Pi(p, _, D, C):
                x = Var(0)
                return self.conv_term(ctx.extend(D), App(shift(t), p, x), App(shift(u), p, x), C)
            case Sigma(k, p, _, F, G) if k == STRONG:
                if not self.conv_term(ctx, Fst(p, t), Fst(p, u), F):
                    return False
                return self.conv_term(ctx, Snd(p, t), Snd(p, u), subst_top(G, Fst(p, t)))
            case Unit(k) if k == STRONG:
                return True
            case U():
                return self.conv_type(ctx, t, u)
        t, u = self.whnf(t), self.whnf(u)
        match ty, t, u:
            case Nat(), Zero(), Zero():
                return True
            case Nat(), Suc(a), Suc(b):
                return self.conv_term(ctx, a, b, Nat())
            case Sigma(_, p, _, F, G), Pair(_, p1, a1, b1), Pair(_, p2, a2, b2):
                return (p1 == p2 and self.conv_term(ctx, a1, a2, F)
                        and self.conv_term(ctx, b1, b2, subst_top(G, a1)))
            case Unit(), Star(), Star():
                return True
        return self._neutral_eq(ctx, t, u)

    def _neutral_eq(self, ctx: Ctx, t: Term, u: Term) -> bool:
        try:
            return self.conv_neutral(ctx, t, u) is not None
        except TypingError:
            return False

    def conv_neutral(self, ctx: Ctx, t: Term, u: Term) -> Term | None:
        """Compare two neutral whnfs; return the common type, or None if they differ."""
        match t, u:
            case Var(i), Var(j):
                return ctx.lookup(i) if i == j else None
            case App(f, p1, a), App(g, p2, b):
                if p1 != p2:
                    return None
                fty = self._neutral_type(ctx, f, g, Pi)
                if fty is None or not self.conv_term(ctx, a, b, fty.dom):
                    return None
                return subst_top(fty.cod, a)
            case (Fst(p1, a), Fst(p2, b)) | (Snd(p1, a), Snd(p2, b)):
                if p1 != p2:
                    return None
                sty = self._neutral_type(ctx, a, b, Sigma)
                if sty is None:
                    return None
                return sty.fst_ty if isinstance(t, Fst) else subst_top(sty.snd_ty, Fst(p1, a))
            case Natrec(p1, q1, r1, A1, z1, s1, n1), Natrec(p2, q2, r2, A2, z2, s2, n2):
                if (p1, q1, r1) != (p2, q2, r2):
                    return None
                if not self.conv_type(ctx.extend(Nat()), A1, A2):
                    return None
                if not self.conv_term(ctx, z1, z2, subst_top(A1, Zero())):
                    return None
                if not self.conv_term(ctx.extend(Nat(), A1), s1, s2, subst_lifted(A1, Suc(Var(1)), 2)):
                    return None
                nty = self.conv_neutral(ctx, n1, n2)
                return None if nty is None else subst_top(A1, n1)
            case Prodrec(r1, p1, q1, A1, s1, u1), Prodrec(r2, p2, q2, A2, s2, u2):
                if (r1, p1, q1) != (r2, p2, q2):
                    return None
                sty = self._neutral_type(ctx, s1, s2, Sigma)
                if sty is None or not self.conv_type(ctx.extend(sty), A1, A2):
                    return None
                want = subst_lifted(A1, Pair(WEAK, p1, Var(1), Var(0)), 2)
                if not self.conv_term(ctx.extend(sty.fst_ty, sty.snd_ty), u1, u2, want):
                    return None
                return subst_top(A1, s1)
            case Emptyrec(p1, A1, s1), Emptyrec(p2, A2, s2):
                if p1 != p2 or not self.conv_type(ctx, A1, A2):
                    return None
                return A1 if self.conv_neutral(ctx, s1, s2) is not None else None
            case Unitrec(p1, q1, A1, s1, u1), Unitrec(p2, q2, A2, s2, u2):
                if (p1, q1) != (p2, q2) or not self.conv_type(ctx.extend(Unit(WEAK)), A1, A2):
                    return None
                if self.conv_neutral(ctx, s1, s2) is None:
                    return None
                if not self.conv_term(ctx, u1, u2, subst_top(A1, Star(WEAK))):
                    return None
                return subst_top(A1, s1)
        return None

    def _neutral_type(self, ctx: Ctx, a: Term, b: Term, former: type):
        ty = self.conv_neutral(ctx, a, b)
        if ty is None:
            return None
        ty = self.whnf(ty)
        return ty if isinstance(ty, former) else None


# --- functional interface -------------------------------------------------------------


def check_type(config: Config, ctx: Ctx, A: Term) -> None:
    Checker(config).check_type(ctx, A)


def infer_type(config: Config, ctx: Ctx, t: Term) -> Term:
    return Checker(config).infer(ctx, t)


def check_term(config: Config, ctx: Ctx, t: Term, A: Term) -> None:
    Checker(config).check(ctx, t, A)


def conv(config: Config, ctx: Ctx, a: Term, b: Term, at: Term | None = None) -> bool:
    """Definitional equality of types (``at is None``) or of terms at type ``at``."""
    c = Checker(config)
    return c.conv_type(ctx, a, b) if at is None else c.conv_term(ctx, a, b, at)
