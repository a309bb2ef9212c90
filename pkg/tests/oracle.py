"""Independent reference implementations used as test oracles.

``Oracle.valid`` computes the *whole* set of usage contexts accepted by the
plain usage rules, represented by its maximal elements (contexts, not
per-variable grades), straight from the declarative rules together with
subsumption.  It shares no code with the checker or with inference.
"""

from __future__ import annotations

import itertools

from gradtt.syntax import (STRONG, Ann, App, Empty, Emptyrec, Fst, Lam, Nat, Natrec, Pair, Pi,
                           Prodrec, Sigma, Snd, Star, Suc, U, Unit, Unitrec, Var, Zero)


class Oracle:
    def __init__(self, m, erased_matches=True, emptyrec_zero=True):
        self.m = m
        self.erased_matches = erased_matches
        self.emptyrec_zero = emptyrec_zero

    # context-level helpers, written out directly on tuples
    def le(self, g, d):
        return all(self.m.meet_table[a, b] == a for a, b in zip(g, d))

    def maxima(self, gs):
        gs = set(gs)
        return frozenset(g for g in gs if not any(h != g and self.le(g, h) for h in gs))

    def plus(self, g, d):
        return tuple(self.m.add_table[a, b] for a, b in zip(g, d))

    def times(self, p, g):
        return tuple(self.m.mul_table[p, a] for a in g)

    def wedge(self, g, d):
        return tuple(self.m.meet_table[a, b] for a, b in zip(g, d))

    def zero(self, n):
        return (self.m.zero,) * n

    def bind(self, body_set, grades):
        """Contexts γ with γ·grades accepted (grades listed innermost first)."""
        k = len(grades)
        out = set()
        for mu in body_set:
            if all(self.m.meet_table[g, mu[j]] == g for j, g in enumerate(grades)):
                out.add(mu[k:])
        return self.maxima(out)

    def motive_ok(self, A, n, q):
        return bool(self.bind(self.valid(A, n + 1), (q,)))

    def valid(self, t, n):
        """Maximal contexts γ (index 0 = variable 0) with γ ▸ t; empty if none."""
        m = self.m
        match t:
            case U() | Nat() | Empty() | Unit() | Zero():
                return frozenset({self.zero(n)})
            case Star(k):
                if k == STRONG:
                    return self.maxima(itertools.product(m.carrier, repeat=n))
                return frozenset({self.zero(n)})
            case Var(i):
                return frozenset({tuple(m.one if j == i else m.zero for j in range(n))})
            case Lam(p, b):
                return self.bind(self.valid(b, n + 1), (p,))
            case App(f, p, u):
                return self.maxima(self.plus(a, self.times(p, b))
                                   for a in self.valid(f, n) for b in self.valid(u, n))
            case Pi(p, q, A, B):
                return self.maxima(self.plus(self.times(p, a), b)
                                   for a in self.valid(A, n) for b in self.bind(self.valid(B, n + 1), (q,)))
            case Sigma(_, _, q, A, B):
                return self.maxima(self.plus(a, b)
                                   for a in self.valid(A, n) for b in self.bind(self.valid(B, n + 1), (q,)))
            case Pair(k, _, a, b):
                op = self.wedge if k == STRONG else self.plus
                return self.maxima(op(x, y) for x in self.valid(a, n) for y in self.valid(b, n))
            case Fst(_, a) | Snd(_, a) | Suc(a) | Ann(a, _):
                return self.valid(a, n)
            case Prodrec(r, _, q, A, s, u):
                if r == m.zero and not self.erased_matches:
                    return frozenset()
                if not self.motive_ok(A, n, q):
                    return frozenset()
                us = self.bind(self.valid(u, n + 2), (r, r))
                return self.maxima(self.plus(self.times(r, a), b) for a in self.valid(s, n) for b in us)
            case Natrec(p, q, r, A, z, s, k):
                if not self.motive_ok(A, n, q):
                    return frozenset()
                ss = self.bind(self.valid(s, n + 2), (r, p))
                return self.maxima(
                    tuple(m.nr_table[p, r, a, b, c] for a, b, c in zip(gz, gs, gn))
                    for gz in self.valid(z, n) for gs in ss for gn in self.valid(k, n))
            case Emptyrec(p, _, s):
                if p == m.zero and not self.emptyrec_zero:
                    return frozenset()
                return self.maxima(self.times(p, a) for a in self.valid(s, n))
            case Unitrec(p, q, A, s, u):
                if p == m.zero and not self.erased_matches:
                    return frozenset()
                if not self.motive_ok(A, n, q):
                    return frozenset()
                return self.maxima(self.plus(self.times(p, a), b)
                                   for a in self.valid(s, n) for b in self.valid(u, n))
        raise TypeError(t)

    def accepts(self, gamma, t):
        return any(self.le(gamma, mu) for mu in self.valid(t, len(gamma)))


def _lin_add(a, b):
    if a == "0":
        return b
    if b == "0":
        return a
    return "w"


def _lin_mul(a, b):
    if a == "0" or b == "0":
        return "0"
    if a == "1":
        return b
    if b == "1":
        return a
    return "w"


def _lin_meet(a, b):
    return a if a == b else "w"


def linear_nr(p, r, z, s, n):
    """The linear-types nr written out from its closed form, with private arithmetic."""
    add, mul, meet = _lin_add, _lin_mul, _lin_meet
    if r == "0":
        return meet(add(mul(meet("1", p), n), s), add(n, z))
    if r == "1":
        return add(add(mul(add("1", p), n), mul("w", s)), z)
    return mul("w", add(add(n, s), z))


def erasure_nr(p, r, z, s, n):
    """For erasure, the only lawful nr is the meet of the last three arguments."""
    return "0" if z == s == n == "0" else "w"


def oracle_divide(m, p, q):
    """The least ``r`` with ``p <= q*r``, found by brute force from the raw tables."""
    le = lambda a, b: m.meet_table[a, b] == a
    cands = [r for r in m.carrier if le(p, m.mul_table[q, r])]
    least = [r for r in cands if all(le(r, s) for s in cands)]
    return least[0] if least else None
