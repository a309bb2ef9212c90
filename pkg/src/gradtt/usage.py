"""Usage (grade) assignment: inference and checking, plain and moded.

Two independent routes are provided.

*Inference* follows the syntax-directed table: it reads the grade
annotations and produces one context, without looking at side conditions.

*Checking* computes the full set of contexts under which a term is
well-resourced.  Every usage rule combines contexts pointwise, so that set is
a product of downward-closed sets of grades, one per variable.  Each factor
is stored as the antichain of its maximal grades; rule premises that
constrain a bound variable become membership tests on that factor.  This
decides ``γ ▸ t`` exactly, including for the strong unit element (valid
under every context), and it does not rely on the inference table, so the
two routes can be compared against each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, TypeVar

from .config import Config, Restrictions
from .grades import (Grade, Modality, UsageCtx, ctx_add, ctx_le, ctx_meet, ctx_nr, ctx_scale,
                     render_ctx, unit_vector, zeros)
from .syntax import (STRONG, Ann, App, Empty, Emptyrec, Fst, Lam, Nat, Natrec, Pair, Pi, Prodrec,
                     Sigma, Snd, Star, Subst, Suc, Term, U, Unit, Unitrec, Var, Zero)

T = TypeVar("T")

ZERO_M = "0M"
ONE_M = "1M"
MODES = (ZERO_M, ONE_M)


def mode_grade(m: Modality, mode: str) -> Grade:
    """``⌜mode⌝``: 0 for the erased mode, 1 for the run-time mode."""
    return m.zero if mode == ZERO_M else m.one


def grade_mode(m: Modality, p: Grade) -> str:
    """``⌞p⌟``: the erased mode exactly for the zero grade."""
    return ZERO_M if p == m.zero else ONE_M


def mode_mul(m: Modality, mode: str, p: Grade) -> str:
    """``mode · p``: erased if either factor is."""
    return ZERO_M if mode == ZERO_M else grade_mode(m, p)


USAGE_ERROR_KINDS = ("var-over-use", "subsumption-failure", "restriction",
                     "star-strong-not-inferable", "projection-mode", "scope")


class UsageError(Exception):
    def __init__(self, kind: str, message: str, path: tuple[str, ...] = (),
                 index: int | None = None, grades: tuple = ()):
        super().__init__(message)
        assert kind in USAGE_ERROR_KINDS, kind
        self.kind = kind
        self.message = message
        self.path = path
        self.index = index
        self.grades = grades

    def __str__(self) -> str:
        where = "/".join(self.path) or "<root>"
        return f"{self.kind} at {where}: {self.message}"


def _at(name: str, fn: Callable[..., T], *args) -> T:
    try:
        return fn(*args)
    except UsageError as e:
        e.path = (name,) + e.path
        raise


# ---------------------------------------------------------------------------
# Inference


def _tail(g: UsageCtx, k: int = 1) -> UsageCtx:
    return g[k:]


def infer_usage_plain(m: Modality, t: Term, n: int) -> UsageCtx:
    """The inferred usage context of ``t`` in a scope of ``n`` variables."""
    return _Infer(m, moded=False).go(t, n, ONE_M)


def infer_usage_moded(m: Modality, mode: str, t: Term, n: int) -> UsageCtx:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    return _Infer(m, moded=True).go(t, n, mode)


def infer_usage(config: Config, t: Term, n: int, mode: str = ONE_M) -> UsageCtx:
    if config.moded:
        return infer_usage_moded(config.modality, mode, t, n)
    return infer_usage_plain(config.modality, t, n)


class _Infer:
    def __init__(self, m: Modality, moded: bool):
        self.m = m
        self.moded = moded

    def sub(self, mode: str, p: Grade) -> str:
        return mode_mul(self.m, mode, p) if self.moded else ONE_M

    def go(self, t: Term, n: int, mode: str) -> UsageCtx:
        m = self.m
        z = zeros(m, n)
        match t:
            case U() | Nat() | Empty() | Unit() | Zero():
                return z
            case Star(k):
                if k != STRONG:
                    return z
                if m.zero_is_greatest:
                    return z
                raise UsageError("star-strong-not-inferable",
                                 f"no principal context for the strong unit element: 0 is not the greatest grade of {m.name}")
            case Var(i):
                if not 0 <= i < n:
                    raise UsageError("scope", f"variable #{i} out of scope {n}")
                return ctx_scale(m, mode_grade(m, mode), unit_vector(m, n, i))
            case Lam(_, body):
                return _tail(_at("body", self.go, body, n + 1, mode))
            case App(f, p, u):
                return ctx_add(m, _at("fun", self.go, f, n, mode),
                               ctx_scale(m, p, _at("arg", self.go, u, n, self.sub(mode, p))))
            case Pi(p, _, A, B) | Sigma(_, p, _, A, B):
                return ctx_add(m, ctx_scale(m, p, _at("dom" if isinstance(t, Pi) else "fst_ty", self.go,
                                                      A, n, self.sub(mode, p))),
                               _tail(_at("cod" if isinstance(t, Pi) else "snd_ty", self.go, B, n + 1, mode)))
            case Pair(k, p, a, b):
                left = ctx_scale(m, p, _at("left", self.go, a, n, self.sub(mode, p)))
                right = _at("right", self.go, b, n, mode)
                return ctx_add(m, left, right) if k != STRONG else ctx_meet(m, left, right)
            case Fst(_, a) | Snd(_, a):
                return _at("arg", self.go, a, n, mode)
            case Suc(a):
                return _at("arg", self.go, a, n, mode)
            case Prodrec(r, _, _, _, s, u):
                return ctx_add(m, ctx_scale(m, r, _at("scrut", self.go, s, n, self.sub(mode, r))),
                               _tail(_at("body", self.go, u, n + 2, mode), 2))
            case Natrec(p, _, r, _, zc, sc, nc):
                return ctx_nr(m, p, r, _at("zero_case", self.go, zc, n, mode),
                              _tail(_at("suc_case", self.go, sc, n + 2, mode), 2),
                              _at("scrut", self.go, nc, n, mode))
            case Emptyrec(p, _, s):
                return ctx_scale(m, p, _at("scrut", self.go, s, n, self.sub(mode, p)))
            case Unitrec(p, _, _, s, u):
                return ctx_add(m, ctx_scale(m, p, _at("scrut", self.go, s, n, self.sub(mode, p))),
                               _at("body", self.go, u, n, mode))
            case Ann(a, _):
                return _at("term", self.go, a, n, mode)
        raise TypeError(f"not a source term: {t!r}")


# ---------------------------------------------------------------------------
# Checking via per-variable antichains

Antichain = frozenset  # of maximal grades
Valid = tuple  # tuple[Antichain, ...], index 0 = variable 0


@dataclass(frozen=True)
class _Ops:
    """Antichain arithmetic for one modality (cached per instance)."""

    m: Modality

    def maxima(self, gs) -> Antichain:
        gs = set(gs)
        return frozenset(g for g in gs if not any(h != g and self.m.le(g, h) for h in gs))

    def member(self, g: Grade, a: Antichain) -> bool:
        return any(self.m.le(g, x) for x in a)


@lru_cache(maxsize=64)
def _ops(m: Modality) -> _Ops:
    return _Ops(m)


class _Check:
    def __init__(self, config: Config, moded: bool):
        self.config = config
        self.m = config.modality
        self.r: Restrictions = config.restrictions
        self.moded = moded
        self.ops = _ops(self.m)
        self._maxima = lru_cache(maxsize=None)(self.ops.maxima)

    # vector operations over antichains
    def zero(self, n: int) -> Valid:
        z = frozenset({self.m.zero})
        return (z,) * n

    def add(self, a: Valid, b: Valid) -> Valid:
        m, mx = self.m, self._maxima
        return tuple(mx(frozenset(m.add(x, y) for x in ai for y in bi)) for ai, bi in zip(a, b))

    def meet(self, a: Valid, b: Valid) -> Valid:
        m, mx = self.m, self._maxima
        return tuple(mx(frozenset(m.meet(x, y) for x in ai for y in bi)) for ai, bi in zip(a, b))

    def scale(self, p: Grade, a: Valid) -> Valid:
        m, mx = self.m, self._maxima
        return tuple(mx(frozenset(m.mul(p, x) for x in ai)) for ai in a)

    def nr(self, p: Grade, r: Grade, a: Valid, b: Valid, c: Valid) -> Valid:
        m, mx = self.m, self._maxima
        return tuple(mx(frozenset(m.nr(p, r, x, y, w) for x in ai for y in bi for w in ci))
                     for ai, bi, ci in zip(a, b, c))

    def sub(self, mode: str, p: Grade) -> str:
        return mode_mul(self.m, mode, p) if self.moded else ONE_M

    def bound(self, v: Valid, idx: int, g: Grade, what: str) -> None:
        if not self.ops.member(g, v[idx]):
            raise UsageError("var-over-use",
                             f"{what} is declared at grade {g}, but the body needs it at most "
                             f"{' or '.join(sorted(v[idx]))}",
                             index=idx, grades=(g, tuple(sorted(v[idx]))))

    def motive(self, A: Term, n: int, q: Grade, field: str = "motive") -> None:
        """Motive premise: ``η, q ▸ A`` (plain) or ``η, 0 ▸[0M] A`` (moded)."""
        if self.moded:
            v = _at(field, self.go, A, n + 1, ZERO_M)
            self.bound(v, 0, self.m.zero, "motive variable")
        else:
            v = _at(field, self.go, A, n + 1, ONE_M)
            self.bound(v, 0, q, "motive variable")

    def go(self, t: Term, n: int, mode: str) -> Valid:
        m = self.m
        one = mode_grade(m, mode)
        match t:
            case U() | Nat() | Empty() | Unit() | Zero():
                return self.zero(n)
            case Star(k):
                if k == STRONG:
                    return (frozenset(m.maximal),) * n
                return self.zero(n)
            case Var(i):
                if not 0 <= i < n:
                    raise UsageError("scope", f"variable #{i} out of scope {n}")
                z = frozenset({m.zero})
                return tuple(frozenset({one}) if j == i else z for j in range(n))
            case Lam(p, body):
                v = _at("body", self.go, body, n + 1, mode)
                self.bound(v, 0, m.mul(one, p), "lambda-bound variable")
                return v[1:]
            case App(f, p, u):
                return self.add(_at("fun", self.go, f, n, mode),
                                self.scale(p, _at("arg", self.go, u, n, self.sub(mode, p))))
            case Pi(p, q, A, B) | Sigma(_, p, q, A, B):
                pi = isinstance(t, Pi)
                va = _at("dom" if pi else "fst_ty", self.go, A, n, self.sub(mode, p))
                vb = _at("cod" if pi else "snd_ty", self.go, B, n + 1, mode)
                self.bound(vb, 0, m.mul(one, q), "codomain variable")
                return self.add(self.scale(p, va), vb[1:])
            case Pair(k, p, a, b):
                left = self.scale(p, _at("left", self.go, a, n, self.sub(mode, p)))
                right = _at("right", self.go, b, n, mode)
                return self.add(left, right) if k != STRONG else self.meet(left, right)
            case Fst(p, a):
                if self.moded and not m.le(mode_grade(m, mode_mul(m, mode, p)), one):
                    raise UsageError("projection-mode",
                                     f"first projection with grade {p} is only allowed in the erased mode",
                                     grades=(p, mode))
                return _at("arg", self.go, a, n, mode)
            case Snd(_, a) | Suc(a):
                return _at("arg", self.go, a, n, mode)
            case Prodrec(r, p, q, A, s, u):
                if not self.r.prodrec_ok(m, r):
                    raise UsageError("restriction", f"prodrec with grade {r} is not allowed (erased matches are off)",
                                     grades=(r,))
                vu = _at("body", self.go, u, n + 2, mode)
                self.bound(vu, 1, m.mul(m.mul(one, r), p), "first pattern variable")
                self.bound(vu, 0, m.mul(one, r), "second pattern variable")
                self.motive(A, n, q)
                vs = _at("scrut", self.go, s, n, self.sub(mode, r))
                return self.add(self.scale(r, vs), vu[2:])
            case Natrec(p, q, r, A, zc, sc, nc):
                vz = _at("zero_case", self.go, zc, n, mode)
                vs = _at("suc_case", self.go, sc, n + 2, mode)
                self.bound(vs, 1, m.mul(one, p), "predecessor variable")
                self.bound(vs, 0, m.mul(one, r), "recursive-call variable")
                vn = _at("scrut", self.go, nc, n, mode)
                self.motive(A, n, q)
                return self.nr(p, r, vz, vs[2:], vn)
            case Emptyrec(p, A, s):
                if not self.r.emptyrec_ok(m, p):
                    raise UsageError("restriction", f"emptyrec with grade {p} is not allowed", grades=(p,))
                _at("motive", self.go, A, n, ZERO_M if self.moded else ONE_M)
                return self.scale(p, _at("scrut", self.go, s, n, self.sub(mode, p)))
            case Unitrec(p, q, A, s, u):
                if not self.r.unitrec_ok(m, p):
                    raise UsageError("restriction", f"unitrec with grade {p} is not allowed (erased matches are off)",
                                     grades=(p,))
                self.motive(A, n, q)
                vs = _at("scrut", self.go, s, n, self.sub(mode, p))
                return self.add(self.scale(p, vs), _at("body", self.go, u, n, mode))
            case Ann(a, _):
                return _at("term", self.go, a, n, mode)
        raise TypeError(f"not a source term: {t!r}")


def valid_contexts(config: Config, t: Term, n: int, mode: str | None = None) -> Valid:
    """Per-variable antichains of maximal grades describing every ``γ`` with ``γ ▸ t``.

    Raises :class:`UsageError` if no context at all makes ``t`` well-resourced.
    """
    moded = config.moded if mode is None else True
    return _Check(config, moded).go(t, n, mode or ONE_M)


def _check(config: Config, gamma: UsageCtx, t: Term, mode: str | None) -> None:
    v = valid_contexts(config, t, len(gamma), mode)
    m = config.modality
    for i, (g, a) in enumerate(zip(gamma, v)):
        if g not in m.carrier:
            raise UsageError("scope", f"grade {g!r} is not in the carrier of {m.name}")
        if not _ops(m).member(g, a):
            raise UsageError("subsumption-failure",
                             f"variable #{i} is given grade {g}, but the term needs it at most {' or '.join(sorted(a))}",
                             index=i, grades=(g, tuple(sorted(a))))


def check_usage_plain(config: Config, gamma: UsageCtx, t: Term) -> None:
    _check(config.with_(moded=False) if config.moded else config, gamma, t, None)


def check_usage_moded(config: Config, gamma: UsageCtx, mode: str, t: Term) -> None:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    _check(config, gamma, t, mode)


def check_usage(config: Config, gamma: UsageCtx, t: Term, mode: str = ONE_M) -> None:
    if config.moded:
        check_usage_moded(config, gamma, mode, t)
    else:
        check_usage_plain(config, gamma, t)


def accepts(config: Config, gamma: UsageCtx, t: Term, mode: str = ONE_M) -> bool:
    try:
        check_usage(config, gamma, t, mode)
        return True
    except UsageError:
        return False


def well_resourced(config: Config, t: Term, n: int, mode: str = ONE_M) -> bool:
    """Does some context make ``t`` well-resourced?"""
    try:
        valid_contexts(config, t, n, mode if config.moded else None)
        return True
    except UsageError:
        return False


# ---------------------------------------------------------------------------
# Substitution matrices


def infer_subst_matrix(m: Modality, sigma: Subst, n_src: int, n_tgt: int) -> tuple:
    """Row ``i`` is the inferred context of ``sigma(i)`` in the target scope."""
    return tuple(infer_usage_plain(m, sigma(i), n_tgt) for i in range(n_src))


def subst_matrix_valid(config: Config, sigma: Subst, psi: tuple, n_tgt: int) -> bool:
    return all(accepts(config, row, sigma(i)) for i, row in enumerate(psi))


def dominated(m: Modality, gamma: UsageCtx, delta: UsageCtx) -> bool:
    return ctx_le(m, gamma, delta)


def describe(gamma: UsageCtx, names=None) -> str:
    return render_ctx(gamma, names)
