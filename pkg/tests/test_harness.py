import pytest

from gradtt import pipeline
from gradtt.config import make_config
from gradtt.extract import erase as real_erase
from gradtt.harness import suites
from gradtt.harness.corpus import EXAMPLES, example
from gradtt.harness.generate import Generator, Hyp
from gradtt.syntax import Nat, Suc, TSuc
from gradtt.typecheck import Checker, Ctx
from gradtt.usage import infer_usage

INSTANCES = ["erasure", "affine", "linear", "linear-or-affine", "information-flow"]


@pytest.mark.parametrize("name", INSTANCES)
@pytest.mark.parametrize("suite", ["soundness", "preservation", "substitution", "principality"])
def test_generated_suites_pass_at_small_scale(name, suite):
    report = suites.run_suite(suite, make_config(name), scale=0.05)
    assert report.passed, report.to_text()
    assert report.count(suites.PASS) > 0


@pytest.mark.parametrize("suite", ["examples", "laws", "counterexample"])
def test_fixed_suites_pass(suite):
    report = suites.run_suite(suite, make_config("erasure"))
    assert report.passed, report.to_text()


def test_noninterference_and_moded_suites():
    assert suites.noninterference(n=10).passed
    report = suites.moded(n=20)
    assert report.passed, report.to_text()
    names = {c.case for c in report.cases}
    assert {"fst-erased/rejected-at-1M", "fst-erased/accepted-at-0M"} <= names


def test_results_do_not_depend_on_job_count():
    config = make_config("linear")
    one = suites.soundness(config, n_closed=12, n_open=8, jobs=1)
    two = suites.soundness(config, n_closed=12, n_open=8, jobs=2)
    assert one.cases == two.cases


def test_unknown_suite():
    with pytest.raises(KeyError):
        suites.run_suite("nonsense", make_config("erasure"))


def test_report_rendering():
    report = suites.counterexample()
    assert report.summary().startswith("counterexample: 6 passed, 0 failed")
    assert report.to_json()["passed"] is True
    assert "[PASS]" in report.to_text(verbose=True)


def test_soundness_suite_catches_a_broken_extraction(monkeypatch):
    def off_by_one(t, strict=False, moded=False, zero="0"):
        v = real_erase(t, strict, moded, zero)
        return TSuc(v) if not strict and isinstance(t, Suc) else v

    monkeypatch.setattr(pipeline, "erase", off_by_one)
    report = suites.soundness(make_config("erasure"), n_closed=60, n_open=0)
    assert not report.passed


def test_examples_suite_catches_a_wrong_expectation(monkeypatch):
    broken = [e if e.name != "plus-linear" else
              type(e)(**{**e.__dict__, "usage": ("w", "w")}) for e in EXAMPLES]
    monkeypatch.setattr(suites, "EXAMPLES", tuple(broken))
    report = suites.examples()
    assert [c.case for c in report.failures] == ["plus-linear/usage"]


@pytest.mark.parametrize("name", INSTANCES)
def test_generator_output_is_well_typed(name):
    config = make_config(name)
    checker = Checker(config)
    for seed in range(25):
        g = Generator(config, seed)
        ctx = g.context(2)
        T = g.rand_type(1)
        t = g.well_typed(ctx, T, 3)
        checker.check(Ctx(tuple(h.type for h in ctx)), t, T)


def test_generator_is_deterministic():
    config = make_config("linear")
    a = Generator(config, 7).well_typed([], Nat(), 4)
    b = Generator(config, 7).well_typed([], Nat(), 4)
    assert a == b


@pytest.mark.parametrize("name", INSTANCES)
def test_irrelevant_hypotheses_stay_out_of_relevant_positions(name):
    config = make_config(name)
    for seed in range(30):
        g = Generator(config, seed)
        t = g.well_typed([Hyp(Nat(), relevant=False)], Nat(), 3)
        # any relevant occurrence would force a grade other than zero
        assert infer_usage(config, t, 1) == (config.modality.zero,)


def test_corpus_lookup():
    assert example("plus23").value == 5
    with pytest.raises(KeyError):
        example("missing")
