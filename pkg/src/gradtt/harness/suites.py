"""Property suites over generated and named programs.

Every suite returns a :class:`SuiteReport` of per-case verdicts.  Cases
are pure functions of ``(config, seed, index)``, so a suite's outcome does
not depend on how many worker processes ran it.
"""

from __future__ import annotations

import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable

from ..config import Config, make_config
from ..extract import LOOP, UNDEF, erase, target_read_numeral
from ..frontend import pretty
from ..grades import (Modality, check_laws, check_well_behaved_zero, ctx_le, division_laws,
                      lawful_nr_tables, make_instance, matrix_apply_n, nr_unique_check, render_ctx)
from ..pipeline import run
from ..reduce import Numeral, Stuck, Whnf, ascribe_argument, read_numeral, whnf_step
from ..syntax import (App, Emptyrec, Fst, Nat, Natrec, Pair, Prodrec, Sigma, Snd, Subst, Term, TApp, TLam,
                      TProdrec, TSnd, TVar, TZero, Unitrec, Var, Zero, free_vars, numeral, subst,
                      subst_top, subterms)
from ..typecheck import Checker, Ctx, TypingError
from ..usage import (ONE_M, ZERO_M, UsageError, accepts, infer_subst_matrix, infer_usage,
                     valid_contexts)
from .corpus import EXAMPLES, example
from .generate import Generator, Hyp

PASS, FAIL, SKIP = "pass", "fail", "skip"


@dataclass(frozen=True)
class CaseResult:
    suite: str
    case: str
    verdict: str
    witness: str | None = None
    detail: dict = field(default_factory=dict)


@dataclass
class SuiteReport:
    suite: str
    cases: list[CaseResult]
    stats: dict = field(default_factory=dict)

    @property
    def failures(self) -> list[CaseResult]:
        return [c for c in self.cases if c.verdict == FAIL]

    @property
    def passed(self) -> bool:
        return not self.failures

    def count(self, verdict: str) -> int:
        return sum(c.verdict == verdict for c in self.cases)

    def summary(self) -> str:
        extra = "".join(f" {k}={v}" for k, v in self.stats.items())
        return (f"{self.suite}: {self.count(PASS)} passed, {self.count(FAIL)} failed, "
                f"{self.count(SKIP)} skipped{extra}")

    def to_text(self, verbose: bool = False) -> str:
        lines = []
        for c in self.cases:
            if verbose or c.verdict == FAIL:
                w = f"  witness: {c.witness}" if c.witness else ""
                lines.append(f"[{c.verdict.upper()}] {c.suite}/{c.case}{w}")
        lines.append(self.summary())
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {"suite": self.suite, "passed": self.passed, "stats": self.stats,
                "cases": [{"suite": c.suite, "case": c.case, "verdict": c.verdict,
                           "witness": c.witness, **({"detail": c.detail} if c.detail else {})}
                          for c in self.cases]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), ensure_ascii=False, indent=2)


CaseFn = Callable[[Config, int, int], list[CaseResult]]


def _case_chunk(args) -> list[CaseResult]:
    fn, config, seed, indices = args
    out: list[CaseResult] = []
    for i in indices:
        out.extend(fn(config, seed, i))
    return out


def run_cases(fn: CaseFn, config: Config, seed: int, indices: Iterable[int], jobs: int = 1) -> list[CaseResult]:
    """Run ``fn`` for each index, optionally across ``jobs`` processes, preserving order."""
    indices = list(indices)
    if jobs <= 1 or len(indices) < 2 * jobs:
        return _case_chunk((fn, config, seed, indices))
    size = -(-len(indices) // (jobs * 4))
    chunks = [(fn, config, seed, indices[k:k + size]) for k in range(0, len(indices), size)]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return [c for part in ex.map(_case_chunk, chunks) for c in part]


def _rng(seed: int, i: int, salt: str) -> random.Random:
    return random.Random(f"{salt}:{seed}:{i}")


def _gen(config: Config, seed: int, i: int, salt: str, attempt: int = 0, **kw) -> Generator:
    sub = _rng(seed, i, f"{salt}/{attempt}").getrandbits(48)
    return Generator(config, sub, **kw)


def _show(t: Term, ctx: list[Hyp] | None = None) -> str:
    names = [f"v{k}" for k in range(len(ctx or []))]
    return pretty(t, names)


# ---------------------------------------------------------------------------
# Erasure soundness


def _sound_program(config: Config, seed: int, i: int, salt: str, n_ctx: int,
                   depth: int = 3) -> tuple[list[Hyp], Term] | None:
    """A well-typed ℕ-program with ``0 ▸ t`` in an all-erased context.

    As for :func:`_open_term`, programs containing an eliminator are preferred.
    """
    m = config.modality
    fallback = None
    for attempt in range(40):
        g = _gen(config, seed, i, salt, attempt)
        ctx = g.context(n_ctx, relevant=False)
        try:
            t = g.well_typed(ctx, Nat(), depth)
        except RuntimeError:
            continue
        if accepts(config, (m.zero,) * n_ctx, t):
            if _has_eliminator(t):
                return ctx, t
            fallback = fallback or (ctx, t)
    return fallback


def _soundness_case(config: Config, seed: int, i: int, *, n_ctx: int, salt: str) -> list[CaseResult]:
    found = _sound_program(config, seed, i, salt, n_ctx)
    name = f"{salt}-{i}"
    if found is None:
        return [CaseResult("soundness", name, SKIP, None, {"reason": "no program generated"})]
    ctx, t = found
    r = run(config, t)
    detail = {"source": _readback(r.source), "cbn": _readback(r.cbn), "cbv": _readback(r.cbv)}
    if r.agree:
        return [CaseResult("soundness", name, PASS, None, detail)]
    return [CaseResult("soundness", name, FAIL, _show(t, ctx), detail)]


def _readback(r) -> str:
    return str(r.value) if isinstance(r, Numeral) else ("stuck" if isinstance(r, Stuck) else "timeout")


def _closed_case(config, seed, i):
    return _soundness_case(config, seed, i, n_ctx=0, salt="closed")


def _open_case(config, seed, i):
    return _soundness_case(config, seed, i, n_ctx=1 + i % 3, salt="open")


def soundness(config: Config, n_closed: int = 300, n_open: int = 200, seed: int | None = None,
              jobs: int = 1) -> SuiteReport:
    """Source, call-by-name and call-by-value extraction agree on every numeral.

    Open programs are only meaningful without erased matches, so they run
    under a configuration with erased matches disabled.
    """
    seed = config.seed if seed is None else seed
    cases = run_cases(_closed_case, config, seed, range(n_closed), jobs)
    open_cfg = config.with_(restrictions=_no_erased(config))
    cases += run_cases(_open_case, open_cfg, seed, range(n_open), jobs)
    closed = sum(c.case.startswith("closed") and c.verdict != SKIP for c in cases)
    opened = sum(c.case.startswith("open") and c.verdict != SKIP for c in cases)
    return SuiteReport("soundness", cases, {"closed": closed, "open": opened})


def _no_erased(config: Config):
    return replace(config.restrictions, erased_matches=False)


# ---------------------------------------------------------------------------
# Subject reduction (types and usage)


def _open_term(config: Config, seed: int, i: int, salt: str, depth: int = 3,
               need_inferable: bool = True) -> tuple[list[Hyp], Term, Term] | None:
    """A well-typed, well-resourced term in a small context with relevant variables.

    Candidates containing an eliminator are preferred, since they exercise
    the interesting usage rules; the first acceptable candidate is the
    fallback.
    """
    fallback = None
    for attempt in range(40):
        g = _gen(config, seed, i, salt, attempt)
        n = g.rng.randint(0, 3)
        ctx = g.context(n, relevant=True)
        T = g.rand_type(1) if g.rng.random() < 0.4 else Nat()
        try:
            t = g.well_typed(ctx, T, depth)
        except RuntimeError:
            continue
        try:
            valid_contexts(config, t, n)
            if need_inferable:
                infer_usage(config, t, n)
        except UsageError:
            continue
        if _has_eliminator(t):
            return ctx, T, t
        fallback = fallback or (ctx, T, t)
    return fallback


_ELIMINATORS = (App, Fst, Snd, Prodrec, Natrec, Unitrec, Emptyrec)


def _has_eliminator(t: Term) -> bool:
    return any(isinstance(s, _ELIMINATORS) for s in subterms(t))


def _preservation_case(config: Config, seed: int, i: int) -> list[CaseResult]:
    found = _open_term(config, seed, i, "preservation")
    if found is None:
        return [CaseResult("preservation", f"term-{i}", SKIP)]
    ctx, T, t = found
    tctx = Ctx(tuple(h.type for h in ctx))
    checker = Checker(config)
    gamma = infer_usage(config, t, len(ctx))
    out = []
    cur, k = t, 0
    while k < 200:
        r = whnf_step(cur)
        if isinstance(r, Whnf):
            break
        nxt = r.term
        name = f"term-{i}/step-{k}"
        problems = []
        if not accepts(config, gamma, nxt):
            problems.append(f"usage {render_ctx(gamma)} no longer accepted")
        try:
            checker.check(tctx, nxt, T)
        except TypingError as e:
            problems.append(f"type not preserved: {e}")
        if problems:
            out.append(CaseResult("preservation", name, FAIL,
                                  f"{_show(cur, ctx)} ~> {_show(nxt, ctx)}", {"problems": problems}))
            break
        out.append(CaseResult("preservation", name, PASS))
        cur, k = nxt, k + 1
    return out


def preservation(config: Config, min_steps: int = 500, seed: int | None = None, jobs: int = 1,
                 batch: int = 200) -> SuiteReport:
    """Every weak-head step keeps the term's type and its inferred usage context."""
    seed = config.seed if seed is None else seed
    cases: list[CaseResult] = []
    start = 0
    while sum(c.verdict != SKIP for c in cases) < min_steps and start < 50 * batch:
        cases += run_cases(_preservation_case, config, seed, range(start, start + batch), jobs)
        start += batch
    return SuiteReport("preservation", cases, {"steps": sum(c.verdict != SKIP for c in cases)})


# ---------------------------------------------------------------------------
# Substitution


def _substitution_case(config: Config, seed: int, i: int) -> list[CaseResult]:
    m = config.modality
    for attempt in range(40):
        g = _gen(config, seed, i, "subst", attempt)
        n = g.rng.randint(0, 2)
        ctx = g.context(n, relevant=True)
        A = g.rand_type(1)
        T = Nat() if g.rng.random() < 0.6 else g.rand_type(1)
        try:
            body = g.well_typed(ctx + [Hyp(A)], T, 3)
            arg = g.well_typed(ctx, A, 2)
            gamma = infer_usage(config, body, n + 1)
            infer_usage(config, arg, n)
            valid_contexts(config, arg, n)
        except (RuntimeError, UsageError):
            continue
        if not accepts(config, gamma, body) or not accepts(config, infer_usage(config, arg, n), arg):
            continue
        sigma = Subst((ascribe_argument(arg, A),))
        psi = infer_subst_matrix(m, sigma, n + 1, n)
        result = subst(sigma, body)
        rng = _rng(seed, i, "subst-gammas")
        gammas = [gamma] + _accepted_samples(config, body, n + 1, rng, 5)
        for gm in gammas:
            target = matrix_apply_n(m, gm, psi, n)
            if not accepts(config, target, result):
                return [CaseResult("substitution", f"beta-{i}", FAIL,
                                   f"{_show(body, ctx + [Hyp(A)])} [#0 := {_show(arg, ctx)}]",
                                   {"gamma": render_ctx(gm), "gamma_psi": render_ctx(target)})]
        try:
            Checker(config).check(Ctx(tuple(h.type for h in ctx)), result, T)
        except TypingError as e:
            return [CaseResult("substitution", f"beta-{i}", FAIL, _show(result, ctx), {"typing": str(e)})]
        return [CaseResult("substitution", f"beta-{i}", PASS, None, {"contexts": len(gammas)})]
    return [CaseResult("substitution", f"beta-{i}", SKIP)]


def substitution(config: Config, n: int = 250, seed: int | None = None, jobs: int = 1) -> SuiteReport:
    """``γ ▸ t`` and a well-resourced ``u`` give ``γΨ ▸ t[u]`` with Ψ the inferred matrix."""
    seed = config.seed if seed is None else seed
    cases = run_cases(_substitution_case, config, seed, range(n), jobs)
    return SuiteReport("substitution", cases, {"instances": sum(c.verdict != SKIP for c in cases)})


# ---------------------------------------------------------------------------
# Principality


def _accepted_samples(config: Config, t: Term, n: int, rng: random.Random, count: int,
                      valid=None, max_draws: int | None = None) -> list[tuple[str, ...]]:
    """Contexts accepted by the checker: half uniform draws, half drawn beneath the valid antichains."""
    m = config.modality
    valid = valid if valid is not None else valid_contexts(config, t, n)
    below = [[g for g in m.carrier if any(m.le(g, x) for x in a)] for a in valid]
    out = []
    draws = 0
    limit = max_draws or 50 * count
    while len(out) < count and draws < limit:
        draws += 1
        if rng.random() < 0.5:
            cand = tuple(rng.choice(m.carrier) for _ in range(n))
        else:
            cand = tuple(rng.choice(b) for b in below)
        if accepts(config, cand, t):
            out.append(cand)
    return out


def _principality_case(config: Config, seed: int, i: int, samples: int = 200) -> list[CaseResult]:
    m = config.modality
    found = _open_term(config, seed, i, "principality")
    if found is None:
        return [CaseResult("principality", f"term-{i}", SKIP)]
    ctx, _, t = found
    n = len(ctx)
    inferred = infer_usage(config, t, n)
    if not accepts(config, inferred, t):
        return [CaseResult("principality", f"term-{i}", FAIL, _show(t, ctx),
                           {"inferred": render_ctx(inferred), "problem": "inferred context rejected"})]
    rng = _rng(seed, i, "principality-samples")
    valid = valid_contexts(config, t, n)
    checked = 0
    draws = 0
    while checked < samples and draws < 100 * samples:
        draws += 1
        cand = (tuple(rng.choice(m.carrier) for _ in range(n)) if rng.random() < 0.5
                else tuple(rng.choice([g for g in m.carrier if any(m.le(g, x) for x in a)]) for a in valid))
        member = _member(m, cand, valid)
        if draws <= 10 and member != accepts(config, cand, t):
            return [CaseResult("principality", f"term-{i}", FAIL, _show(t, ctx),
                               {"context": render_ctx(cand), "problem": "antichain test disagrees with checker"})]
        if not member:
            continue
        checked += 1
        if not ctx_le(m, cand, inferred):
            return [CaseResult("principality", f"term-{i}", FAIL, _show(t, ctx),
                               {"inferred": render_ctx(inferred), "accepted": render_ctx(cand)})]
    return [CaseResult("principality", f"term-{i}", PASS, None, {"contexts": checked})]


def _member(m: Modality, gamma, valid) -> bool:
    """Exactly the acceptance test of the usage checker, with the antichains precomputed."""
    return all(any(m.le(g, x) for x in a) for g, a in zip(gamma, valid))


def principality(config: Config, n_terms: int = 1000, samples: int = 200, seed: int | None = None,
                 jobs: int = 1) -> SuiteReport:
    """The inferred context is accepted and dominates every accepted context."""
    seed = config.seed if seed is None else seed
    cases = run_cases(_principality_case, config, seed, range(n_terms), jobs)
    return SuiteReport("principality", cases, {"terms": sum(c.verdict != SKIP for c in cases)})


# ---------------------------------------------------------------------------
# Grade laws


INSTANCES_FOR_LAWS = ("erasure", "affine", "linear", "linear-or-affine", "trivial", "information-flow")


def laws(instances: Iterable[str] = INSTANCES_FOR_LAWS) -> SuiteReport:
    """Modality laws, the well-behaved-zero conditions, nr uniqueness and division."""
    cases = []
    for name in instances:
        m = make_instance(name)
        for r in check_laws(m):
            cases.append(CaseResult("laws", f"{name}/{r.law}", PASS if r.ok else FAIL, _wit(r.witness)))
        wbz = check_well_behaved_zero(m)
        ok = all(r.ok for r in wbz)
        if name == "trivial":
            cases.append(CaseResult("laws", f"{name}/well-behaved-zero-fails", PASS if not ok else FAIL,
                                    None if not ok else "trivial instance unexpectedly has a well-behaved zero"))
        else:
            for r in wbz:
                cases.append(CaseResult("laws", f"{name}/{r.law}", PASS if r.ok else FAIL, _wit(r.witness)))
    erasure = make_instance("erasure")
    cases.append(CaseResult("laws", "erasure/nr-unique", PASS if nr_unique_check(erasure) else FAIL))
    tables = lawful_nr_tables(make_instance("linear"), limit=2)
    cases.append(CaseResult("laws", "linear/nr-not-unique", PASS if len(tables) >= 2 else FAIL,
                            None, {"tables_found": len(tables)}))
    flow = make_instance("information-flow")
    for r in division_laws(flow):
        cases.append(CaseResult("laws", f"information-flow/division/{r.law}", PASS if r.ok else FAIL,
                                _wit(r.witness)))
    return SuiteReport("laws", cases)


def _wit(w) -> str | None:
    return None if w is None else repr(w)


# ---------------------------------------------------------------------------
# Non-interference


def _noninterference_case(config: Config, seed: int, i: int, pairs: int = 3) -> list[CaseResult]:
    m = config.modality
    for attempt in range(60):
        g = _gen(config, seed, i, "noninterference", attempt)
        ctx = [Hyp(Nat(), relevant=False)]
        try:
            t = g.well_typed(ctx, Nat(), 3)
        except RuntimeError:
            continue
        if not accepts(config, (m.zero,), t) or 0 not in free_vars(t):
            continue
        rng = _rng(seed, i, "noninterference-values")
        seen = {}
        for _ in range(pairs + 1):
            k = rng.randint(0, 6)
            closed = subst_top(t, numeral(k))
            seen[k] = (_readback(read_numeral(closed, config.fuel)),
                       _readback(run(config, closed).cbv))
        outcomes = set(seen.values())
        src, cbv = next(iter(outcomes))
        if len(outcomes) == 1 and src.isdigit() and src == cbv:
            return [CaseResult("noninterference", f"program-{i}", PASS, None,
                               {"values": sorted(seen), "result": next(iter(outcomes))[0]})]
        return [CaseResult("noninterference", f"program-{i}", FAIL, _show(t, ctx), {"outcomes": repr(seen)})]
    return [CaseResult("noninterference", f"program-{i}", SKIP)]


def noninterference(config: Config | None = None, n: int = 80, seed: int | None = None,
                    jobs: int = 1) -> SuiteReport:
    """Programs with a high-security (zero-graded) input compute the same numeral for every input."""
    config = config or make_config("information-flow")
    seed = config.seed if seed is None else seed
    cases = run_cases(_noninterference_case, config, seed, range(n), jobs)
    return SuiteReport("noninterference", cases, {"programs": sum(c.verdict != SKIP for c in cases)})


# ---------------------------------------------------------------------------
# The erased-match counterexample


def counterexample() -> SuiteReport:
    """An erased match on an open pair: rejected without erased matches, stuck in the source."""
    e = example("counterexample")
    t, ty = e.parsed()
    ctx = Ctx(e.parsed_ctx())
    cases = []
    on = make_config(e.modality)
    off = make_config(e.modality, erased_matches=False)
    cases.append(_verdict("accepted-with-erased-matches", accepts(on, ("0",), t)))
    cases.append(_verdict("rejected-without-erased-matches", not accepts(off, ("0",), t)))
    try:
        Checker(on).check(ctx, t, ty)
        typed = True
    except TypingError:
        typed = False
    cases.append(_verdict("well-typed", typed))
    src = read_numeral(t, on.fuel)
    cases.append(_verdict("source-stuck", isinstance(src, Stuck), _readback(src)))
    for strict in (False, True):
        out = target_read_numeral(erase(t, strict=strict), strict, on.fuel)
        cases.append(_verdict(f"extraction-{'cbv' if strict else 'cbn'}-is-0",
                              isinstance(out, Numeral) and out.value == 0, _readback(out)))
    return SuiteReport("counterexample", [CaseResult("counterexample", n, v, w) for n, v, w in cases])


def _verdict(name: str, ok: bool, witness: str | None = None) -> tuple[str, str, str | None]:
    return name, PASS if ok else FAIL, None if ok else witness


# ---------------------------------------------------------------------------
# Named examples


def examples() -> SuiteReport:
    """Typing, inferred usage and run results of the named examples."""
    cases = []
    for e in EXAMPLES:
        cfg = make_config(e.modality, nr=e.nr)
        t, ty = e.parsed()
        ctx = Ctx(e.parsed_ctx())
        checker = Checker(cfg)
        try:
            checker.check_ctx(ctx)
            checker.check_type(ctx, ty)
            checker.check(ctx, t, ty)
        except TypingError as err:
            cases.append(CaseResult("examples", f"{e.name}/typing", FAIL, str(err)))
            continue
        cases.append(CaseResult("examples", f"{e.name}/typing", PASS))
        if e.usage is not None:
            got = infer_usage(cfg, t, len(ctx))
            ok = got == e.usage_index_order() and accepts(cfg, got, t)
            cases.append(CaseResult("examples", f"{e.name}/usage", PASS if ok else FAIL,
                                    None if ok else render_ctx(got, e.index_names)))
        if e.value is not None:
            r = run(cfg, t)
            ok = r.agree and r.source.value == e.value
            cases.append(CaseResult("examples", f"{e.name}/run", PASS if ok else FAIL,
                                    None if ok else r.render()))
    for strict, expected in ((False, ID_ZERO_NONSTRICT), (True, ID_ZERO_STRICT)):
        t, _ = example("id-zero").parsed()
        got = erase(t, strict=strict)
        cases.append(CaseResult("examples", f"id-zero/erase-{'strict' if strict else 'non-strict'}",
                                PASS if got == expected else FAIL, None if got == expected else repr(got)))
    return SuiteReport("examples", cases)


ID_ZERO_NONSTRICT = TApp(TLam(TVar(0)), TZero())
ID_ZERO_STRICT = TApp(TApp(TLam(TLam(TVar(0))), UNDEF), TZero())


# ---------------------------------------------------------------------------
# Moded usage


def _moded_case(config: Config, seed: int, i: int) -> list[CaseResult]:
    found = _sound_program(config, seed, i, "moded", 0, depth=3)
    if found is None:
        return [CaseResult("moded", f"program-{i}", SKIP)]
    ctx, t = found
    r = run(config, t)
    detail = {"source": _readback(r.source), "cbn": _readback(r.cbn), "cbv": _readback(r.cbv)}
    return [CaseResult("moded", f"program-{i}", PASS if r.agree else FAIL,
                       None if r.agree else _show(t, ctx), detail)]


def moded(config: Config | None = None, n: int = 300, seed: int | None = None, jobs: int = 1) -> SuiteReport:
    """Moded checking: projection restrictions, extraction shapes and soundness."""
    config = config or make_config("linear", moded=True)
    if not config.moded:
        config = config.with_(moded=True)
    seed = config.seed if seed is None else seed
    m = config.modality
    z = m.zero
    cases = []
    ctx1 = Ctx((Sigma("&", z, z, Nat(), Nat()),))
    proj = Fst(z, Var(0))
    cases.append(CaseResult("moded", "fst-erased/rejected-at-1M",
                            PASS if not accepts(config, (z,), proj, ONE_M) else FAIL))
    cases.append(CaseResult("moded", "fst-erased/accepted-at-0M",
                            PASS if accepts(config, (z,), proj, ZERO_M) else FAIL))
    try:
        Checker(config).infer(ctx1, proj)
        cases.append(CaseResult("moded", "fst-erased/well-typed", PASS))
    except TypingError as e:
        cases.append(CaseResult("moded", "fst-erased/well-typed", FAIL, str(e)))
    for name, ok, witness in moded_erase_examples(m):
        cases.append(CaseResult("moded", f"erase/{name}", PASS if ok else FAIL, witness))
    cases += run_cases(_moded_case, config, seed, range(n), jobs)
    return SuiteReport("moded", cases, {"programs": sum(c.case.startswith("program") and c.verdict != SKIP
                                                        for c in cases)})


def moded_erase_examples(m: Modality) -> list[tuple[str, bool, str | None]]:
    """The moded extraction rules for erased pairs, projections and matches."""
    z, one = m.zero, m.one
    a, b = numeral(1), numeral(2)
    checks = [
        ("pair-erased-first", Pair("&", z, a, b), erase(b, moded=True, zero=z)),
        ("pair-relevant", Pair("&", one, a, b), erase(Pair("&", one, a, b), moded=False, zero=z)),
        ("fst-erased", Fst(z, Var(0)), LOOP),
        ("snd-erased", Snd(z, Var(0)), TVar(0)),
        ("snd-relevant", Snd(one, Var(0)), TSnd(TVar(0))),
        ("prodrec-erased-first", Prodrec(one, z, z, Nat(), Var(0), Var(0)),
         TApp(subst_top(TLam(TVar(0)), LOOP), TVar(0))),
        ("prodrec-relevant", Prodrec(one, one, z, Nat(), Var(0), Var(1)), TProdrec(TVar(0), TVar(1))),
        ("prodrec-erased", Prodrec(z, one, z, Nat(), Var(0), Zero()), TZero()),
    ]
    out = []
    for name, src, expected in checks:
        got = erase(src, moded=True, zero=z)
        out.append((name, got == expected, None if got == expected else f"{got!r} != {expected!r}"))
    return out


# ---------------------------------------------------------------------------

SUITES = ("examples", "laws", "soundness", "preservation", "substitution", "principality",
          "noninterference", "counterexample", "moded")


def run_suite(name: str, config: Config, jobs: int = 1, scale: float = 1.0) -> SuiteReport:
    """Run a suite by name; ``scale`` multiplies the number of generated cases."""
    k = lambda n: max(1, int(n * scale))  # noqa: E731
    match name:
        case "examples":
            return examples()
        case "laws":
            return laws()
        case "soundness":
            return soundness(config, k(300), k(200), jobs=jobs)
        case "preservation":
            return preservation(config, k(500), jobs=jobs)
        case "substitution":
            return substitution(config, k(250), jobs=jobs)
        case "principality":
            return principality(config, k(1000), jobs=jobs)
        case "noninterference":
            cfg = config if config.modality.name == "L<=M<=H" else make_config(
                "information-flow", fuel=config.fuel, seed=config.seed)
            return noninterference(cfg, k(80), jobs=jobs)
        case "counterexample":
            return counterexample()
        case "moded":
            cfg = config.with_(moded=True) if config.modality.has_well_behaved_zero else make_config(
                "linear", moded=True, fuel=config.fuel, seed=config.seed)
            return moded(cfg, k(300), jobs=jobs)
    raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
