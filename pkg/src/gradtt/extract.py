"""Extraction to the untyped target language, and target-language evaluation.

Erased content is dropped: types and erased lambdas/applications vanish or
become the dummy value ``↯`` (strict) / the looping term (non-strict).
The target evaluator implements both call-by-name and call-by-value weak
head reduction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Union

from .config import DEFAULT_FUEL
from .reduce import Numeral, Readback, Stuck, Timeout
from .syntax import (TYPE_FORMERS, Ann, App, Emptyrec, Fst, Lam, Natrec, Pair,
                     Prodrec, Snd, Star, Suc, TApp, Term, TFst, TLam, TNatrec, TPair, TProdrec,
                     TSnd, TStar, TSuc, TTerm, TUndef, TUnitrec, TVar, TZero, Unitrec, Var, Zero,
                     subst_top)

_OMEGA = TLam(TApp(TVar(0), TVar(0)))
LOOP: TTerm = TApp(_OMEGA, _OMEGA)
UNDEF: TTerm = TUndef()


def erase(t: Term, strict: bool = False, moded: bool = False, zero: str = "0") -> TTerm:
    """Extract ``t``.  ``zero`` names the erased grade of the active modality."""
    return _Eraser(strict, moded, zero).go(t)


@dataclass(frozen=True)
class _Eraser:
    strict: bool
    moded: bool
    zero: str

    def dummy(self) -> TTerm:
        return UNDEF if self.strict else LOOP

    def go(self, t: Term) -> TTerm:
        z = self.zero
        match t:
            case Var(i):
                return TVar(i)
            case Lam(p, body):
                b = self.go(body)
                if p == z and not self.strict:
                    return subst_top(b, LOOP)
                return TLam(b)
            case App(f, p, u):
                ef = self.go(f)
                if p == z:
                    return TApp(ef, UNDEF) if self.strict else ef
                return TApp(ef, self.go(u))
            case Pair(_, p, a, b):
                if self.moded and p == z:
                    return self.go(b)
                ea, eb = self.go(a), self.go(b)
                if self.strict:
                    return TApp(TApp(TLam(TLam(TPair(TVar(1), TVar(0)))), ea), eb)
                return TPair(ea, eb)
            case Fst(p, a):
                if self.moded and p == z:
                    return LOOP
                return TFst(self.go(a))
            case Snd(p, a):
                if self.moded and p == z:
                    return self.go(a)
                return TSnd(self.go(a))
            case Prodrec(r, p, _, _, s, u):
                eu = self.go(u)
                if r == z:
                    return subst_top(eu, LOOP, LOOP)
                if self.moded and p == z:
                    return TApp(subst_top(TLam(eu), LOOP), self.go(s))
                return TProdrec(self.go(s), eu)
            case Zero():
                return TZero()
            case Suc(a):
                ea = self.go(a)
                if self.strict:
                    return TApp(TLam(TSuc(TVar(0))), ea)
                return TSuc(ea)
            case Natrec(_, _, _, _, zc, sc, nc):
                return TNatrec(self.go(zc), self.go(sc), self.go(nc))
            case Emptyrec():
                return LOOP
            case Star():
                return TStar()
            case Unitrec(p, _, _, s, u):
                if p == z:
                    return self.go(u)
                return TUnitrec(self.go(s), self.go(u))
            case Ann(a, _):
                return self.go(a)
        if isinstance(t, TYPE_FORMERS):
            return self.dummy()
        raise TypeError(f"not a source term: {t!r}")


# ---------------------------------------------------------------------------
# Target reduction

VALUES = (TLam, TPair, TZero, TSuc, TStar, TUndef)


def is_value(v: TTerm) -> bool:
    return isinstance(v, VALUES)


@dataclass(frozen=True)
class TStepped:
    term: TTerm


@dataclass(frozen=True)
class TValue:
    pass


@dataclass(frozen=True)
class TStuck:
    reason: str


TStep = Union[TStepped, TValue, TStuck]


def target_step(v: TTerm, strict: bool = False) -> TStep:
    """One weak-head step; ``strict`` selects call-by-value application."""
    if is_value(v):
        return TValue()
    match v:
        case TVar(i):
            return TStuck(f"free variable #{i}")
        case TApp(f, a):
            if not is_value(f):
                return _congr(target_step(f, strict), lambda x: TApp(x, a))
            if strict and not is_value(a):
                return _congr(target_step(a, strict), lambda x: TApp(f, x))
            if isinstance(f, TLam):
                return TStepped(subst_top(f.body, a))
            return TStuck(f"application of a non-function value {type(f).__name__}")
        case TFst(a) | TSnd(a):
            if isinstance(a, TPair):
                return TStepped(a.left if isinstance(v, TFst) else a.right)
            if is_value(a):
                return TStuck(f"projection from {type(a).__name__}")
            rebuild = TFst if isinstance(v, TFst) else TSnd
            return _congr(target_step(a, strict), rebuild)
        case TProdrec(s, body):
            if isinstance(s, TPair):
                return TStepped(subst_top(body, s.left, s.right))
            if is_value(s):
                return TStuck(f"prodrec on {type(s).__name__}")
            return _congr(target_step(s, strict), lambda x: TProdrec(x, body))
        case TNatrec(zc, sc, n):
            if isinstance(n, TZero):
                return TStepped(zc)
            if isinstance(n, TSuc):
                return TStepped(subst_top(sc, n.arg, TNatrec(zc, sc, n.arg)))
            if is_value(n):
                return TStuck(f"natrec on {type(n).__name__}")
            return _congr(target_step(n, strict), lambda x: TNatrec(zc, sc, x))
        case TUnitrec(s, body):
            if isinstance(s, TStar):
                return TStepped(body)
            if is_value(s):
                return TStuck(f"unitrec on {type(s).__name__}")
            return _congr(target_step(s, strict), lambda x: TUnitrec(x, body))
    raise TypeError(f"not a target term: {v!r}")


def _congr(r: TStep, rebuild) -> TStep:
    if isinstance(r, TStepped):
        return TStepped(rebuild(r.term))
    return r


@dataclass(frozen=True)
class Evaluated:
    value: TTerm
    steps: int


def target_eval(v: TTerm, strict: bool = False, fuel: int = DEFAULT_FUEL) -> Evaluated | Stuck | Timeout:
    steps = 0
    while True:
        r = target_step(v, strict)
        match r:
            case TValue():
                return Evaluated(v, steps)
            case TStuck(reason):
                return Stuck(reason, None, v)
        if steps >= fuel:
            return Timeout(fuel)
        nxt = r.term
        if nxt == v:  # a term that steps to itself diverges
            return Timeout(fuel)
        v = nxt
        steps += 1


def _syntactic_numeral(v: TTerm) -> int | None:
    n = 0
    while isinstance(v, TSuc):
        n += 1
        v = v.arg
    return n if isinstance(v, TZero) else None


def target_read_numeral(v: TTerm, strict: bool = False, fuel: int = DEFAULT_FUEL) -> Readback:
    """Evaluate to a numeral.

    Non-strictly, evaluation continues under ``suc``.  Strictly, a ``suc``
    value must already wrap a numeral.
    """
    count = 0
    remaining = fuel
    while True:
        r = target_eval(v, strict, remaining)
        if not isinstance(r, Evaluated):
            return r if isinstance(r, Stuck) else Timeout(fuel)
        remaining -= r.steps
        val = r.value
        match val:
            case TZero():
                return Numeral(count)
            case TSuc(inner):
                if strict:
                    k = _syntactic_numeral(inner)
                    if k is None:
                        return Stuck("suc of a non-numeral", None, val)
                    return Numeral(count + 1 + k)
                count += 1
                v = inner
            case _:
                return Stuck(f"non-numeral value {type(val).__name__}", None, val)


# ---------------------------------------------------------------------------
# Printing and serialisation

_NAMES = {TVar: "var", TLam: "lam", TApp: "app", TPair: "pair", TFst: "fst", TSnd: "snd",
          TProdrec: "prodrec", TZero: "zero", TSuc: "suc", TNatrec: "natrec", TStar: "star",
          TUnitrec: "unitrec", TUndef: "undefined"}


def to_json(v: TTerm) -> dict[str, Any]:
    """AST dump with stable field names: ``node``, ``children`` and, for variables, ``index``."""
    out: dict[str, Any] = {"node": _NAMES[type(v)]}
    if isinstance(v, TVar):
        out["index"] = v.index
    out["children"] = [to_json(c) for _, _, c in v.children()]
    return out


def dumps(v: TTerm) -> str:
    return json.dumps(to_json(v), ensure_ascii=False)


def pretty_target(v: TTerm) -> str:
    """Render in a small λ-syntax: ``#i``, ``(\\. t)``, ``(f a)``, ``!`` for ``↯``."""
    if v == LOOP:
        return "loop"
    match v:
        case TVar(i):
            return f"#{i}"
        case TLam(b):
            return f"(\\. {pretty_target(b)})"
        case TApp(f, a):
            return f"({pretty_target(f)} {pretty_target(a)})"
        case TPair(a, b):
            return f"<{pretty_target(a)}, {pretty_target(b)}>"
        case TFst(a):
            return f"(fst {pretty_target(a)})"
        case TSnd(a):
            return f"(snd {pretty_target(a)})"
        case TProdrec(a, b):
            return f"(prodrec {pretty_target(a)} {pretty_target(b)})"
        case TZero():
            return "zero"
        case TSuc(a):
            return f"(suc {pretty_target(a)})"
        case TNatrec(z, s, n):
            return f"(natrec {pretty_target(z)} {pretty_target(s)} {pretty_target(n)})"
        case TStar():
            return "star"
        case TUnitrec(a, b):
            return f"(unitrec {pretty_target(a)} {pretty_target(b)})"
        case TUndef():
            return "!"
    raise TypeError(v)

