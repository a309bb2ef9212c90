import pytest
from hypothesis import given, settings, strategies as st

from gradtt.config import make_config
from gradtt.frontend import parse_term
from gradtt.harness.corpus import EXAMPLES, example
from gradtt.harness.generate import Generator
from gradtt.reduce import (Numeral, OutOfFuel, Stepped, Stuck, Timeout, Whnf, read_numeral,
                           reduction_steps, whnf, whnf_step)
from gradtt.syntax import Ann, Lam, Nat, Pi, Var, Zero, numeral
from gradtt.typecheck import Checker, Ctx
from gradtt.usage import UsageError, check_usage, infer_usage


@pytest.mark.parametrize("ex", [e for e in EXAMPLES if e.value is not None], ids=lambda e: e.name)
def test_corpus_values(ex):
    t, _ = ex.parsed()
    assert read_numeral(t) == Numeral(ex.value)


def test_beta_keeps_the_instantiated_codomain():
    t = parse_term("(\\[w] x. x : Pi[w,0] (x : Nat) -> Nat) @[w] 2")
    assert whnf_step(t) == Stepped(Ann(numeral(2), Nat()))


def test_ascribed_introductions_are_whnfs():
    lam = Ann(Lam("w", Var(0)), Pi("w", "0", Nat(), Nat()))
    assert whnf_step(lam) == Whnf("lam")
    assert whnf_step(Ann(Zero(), Nat())) == Stepped(Zero())
    assert whnf_step(Ann(Ann(Zero(), Nat()), Nat())) == Stepped(Ann(Zero(), Nat()))


def test_neutral_and_stuck_terms():
    assert whnf_step(Var(3)) == Whnf("neutral", 3)
    t = parse_term("natrec[0,0,1] (m. Nat) zero (m r. suc r) n", "linear", ["n"])
    assert whnf_step(t) == Whnf("neutral", 0)
    assert isinstance(read_numeral(t), Stuck)


def test_counterexample_is_stuck_in_the_source():
    t, _ = example("counterexample").parsed()
    r = read_numeral(t)
    assert isinstance(r, Stuck) and r.kind == "neutral" and r.head == 0


def test_weak_unit_eliminator_computes_only_on_star():
    t, _ = example("unitrec-weak").parsed()
    assert read_numeral(t) == Numeral(3)
    u = parse_term("unitrec[1,0] (x. Nat) u 2", "linear", ["u"])
    assert whnf_step(u) == Whnf("neutral", 0)


def test_fuel():
    t = parse_term("natrec[0,0,w] (n. Nat) zero (m r. suc (suc r)) 40", "erasure")
    assert read_numeral(t) == Numeral(80)
    assert read_numeral(t, fuel=5) == Timeout(5)
    with pytest.raises(OutOfFuel):
        reduction_steps(t, fuel=2)
    assert whnf(t) != t


def _closed(name, seed):
    config = make_config(name)
    g = Generator(config, seed)
    for _ in range(10):
        try:
            t = g.well_typed([], Nat(), 3)
        except RuntimeError:
            continue
        try:
            check_usage(config, (), t)
        except UsageError:
            continue
        return config, t
    return None


@settings(max_examples=40)
@given(name=st.sampled_from(["erasure", "linear", "affine", "information-flow"]), seed=st.integers(0, 10**9))
def test_every_reduct_stays_typed_and_well_resourced(name, seed):
    found = _closed(name, seed)
    if found is None:
        return
    config, t = found
    checker = Checker(config)
    for u in reduction_steps(t):
        checker.check(Ctx(), u, Nat())
        check_usage(config, (), u)


@settings(max_examples=40)
@given(name=st.sampled_from(["erasure", "linear", "affine", "information-flow"]), seed=st.integers(0, 10**9))
def test_closed_naturals_evaluate_to_numerals(name, seed):
    found = _closed(name, seed)
    if found is None:
        return
    _, t = found
    assert isinstance(read_numeral(t), Numeral)


@settings(max_examples=30)
@given(seed=st.integers(0, 10**9))
def test_open_reducts_keep_the_same_usage(seed):
    config = make_config("linear")
    g = Generator(config, seed)
    ctx = g.context(2)
    try:
        t = g.well_typed(ctx, Nat(), 3)
    except RuntimeError:
        return
    try:
        gamma = infer_usage(config, t, 2)
        check_usage(config, gamma, t)
    except UsageError:
        return
    steps = reduction_steps(t)
    for u in steps[1:]:
        check_usage(config, gamma, u)


def test_beta_ascribes_introduction_arguments():
    # the pair lands in scrutinee position, where a bare pair could not be inferred
    t = parse_term("(\\[w] p. prodrec[w,w,0] (z. Nat) p (a b. a) : "
                   "Pi[w,0] (p : Sig@[w,0] (a : Nat) ** Nat) -> Nat) @[w] (1 ,@[w] 2)")
    config = make_config("erasure")
    (reduct,) = reduction_steps(t)[1:2]
    Checker(config).check(Ctx(), reduct, Nat())
    assert read_numeral(t) == Numeral(1)
    # inferable arguments are substituted as they are
    u = parse_term("(\\[w] x. suc x : Pi[w,0] (x : Nat) -> Nat) @[w] 2")
    assert whnf_step(u) == Stepped(Ann(numeral(3), Nat()))
