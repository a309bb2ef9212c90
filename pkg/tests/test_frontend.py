from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from gradtt.config import make_config
from gradtt.frontend import ParseError, parse, parse_term, pretty, tokenize
from gradtt.harness.generate import Generator
from gradtt.syntax import (STRONG, WEAK, Ann, App, Lam, Nat, Natrec, Pair, Pi, Sigma, Suc, U,
                           Unit, Var, Zero, numeral)

DEMOS = Path(__file__).resolve().parent.parent / "demos"


def test_lambda_and_application():
    t = parse_term("(\\[w] x. x : Pi[w,0] (x : Nat) -> Nat) @[w] 2", "erasure")
    assert t == App(Ann(Lam("w", Var(0)), Pi("w", "0", Nat(), Nat())), "w", numeral(2))


def test_names_are_outermost_first():
    t = parse_term("k", "linear", ["k", "n"])
    assert t == Var(1)
    assert parse_term("n", "linear", ["k", "n"]) == Var(0)


def test_dependent_pi_binds_in_codomain():
    t = parse_term("Pi[0,0] (A : U) -> Pi[w,0] (x : A) -> A", "erasure")
    assert t == Pi("0", "0", U(), Pi("w", "0", Var(0), Var(1)))


def test_natrec_binders():
    t = parse_term("natrec[0,0,1] (m. Nat) k (m r. suc r) n", "linear", ["k", "n"])
    assert t == Natrec("0", "0", "1", Nat(), Var(1), Suc(Var(0)), Var(0))


def test_sigma_and_pairs():
    t = parse_term("Sig@[1,0] (a : Nat) ** Unit&", "linear")
    assert t == Sigma(WEAK, "1", "0", Nat(), Unit(STRONG))
    assert parse_term("(1 ,&[1] zero)", "linear") == Pair(STRONG, "1", numeral(1), Zero())


def test_grade_spellings():
    assert parse_term("\\[ω] x. x", "erasure") == Lam("w", Var(0))
    assert parse_term("\\[1] x. x", "erasure") == Lam("w", Var(0))
    assert parse_term("\\[1?] x. x", "linear-or-affine") == Lam("1?", Var(0))
    assert parse_term("\\[M] x. x", "information-flow") == Lam("M", Var(0))


def test_file_with_definitions_and_pragmas():
    f = parse((DEMOS / "plus.gtt").read_text(), source="plus.gtt")
    assert f.names() == ["plus", "plus23"]
    assert f.pragmas == {"modality": "linear"}
    assert f.modality.name == "linear"
    # later definitions see earlier ones inlined
    assert isinstance(f.get("plus23").body, App)


def test_binder_names_are_recorded():
    f = parse((DEMOS / "plus.gtt").read_text())
    lam = f.get("plus").body
    assert f.binder_name(lam, "?") == "k"
    assert f.binder_name(lam.body, "?") == "n"
    assert f.binder_name(Lam("1", Var(0)), "fallback") == "fallback"


def test_pragma_bad_nr_selects_alternative_table():
    f = parse("%modality linear\n%nr bad\ndef x : Nat := zero\n")
    assert f.modality.name == "linear/bad-nr"


@pytest.mark.parametrize("text, line, col", [
    ("def x : Nat := y\n", 1, 16),
    ("def x : Nat :=\n  \\[q] y. y\n", 2, 5),
    ("def x : Nat := zero\ndef x : Nat := zero\n", 2, 5),
    ("def x : Nat := (zero\n", 2, 1),
    ("def x : Nat := $\n", 1, 16),
    ("%flavour strawberry\n", 1, 1),
    ("%modality\n", 1, 1),
])
def test_parse_errors_have_positions(text, line, col):
    with pytest.raises(ParseError) as info:
        parse(text, source="bad.gtt")
    assert (info.value.line, info.value.col) == (line, col)
    assert str(info.value).startswith(f"bad.gtt:{line}:{col}:")


def test_unknown_modality_pragma_is_a_parse_error():
    with pytest.raises(ParseError):
        parse("%modality quantum\ndef x : Nat := zero\n")


def test_comments_and_spans():
    toks = tokenize("-- hello\nzero -- trailing\n")
    assert [(t.kind, t.text, t.line, t.col) for t in toks] == [("kw", "zero", 2, 1), ("eof", "", 3, 1)]
    f = parse("def x : Nat :=\n  suc zero\n")
    span = f.span_of(f.get("x").body, ("arg",))
    assert (span.line, span.col) == (2, 7)


def test_pretty_printing():
    assert pretty(numeral(3)) == "3"
    assert pretty(Lam("1", Var(0))) == "\\[1] x0. x0"
    assert pretty(Var(0), ["k", "n"]) == "n"


@settings(max_examples=80)
@given(name=st.sampled_from(["erasure", "linear", "affine", "information-flow"]),
       seed=st.integers(0, 10**9))
def test_pretty_then_parse_round_trips(name, seed):
    config = make_config(name)
    g = Generator(config, seed)
    ctx = g.context(g.rng.randint(0, 2))
    try:
        t = g.well_typed(ctx, g.rand_type(1), 3)
    except RuntimeError:
        return
    names = [f"v{i}" for i in range(len(ctx))]
    assert parse_term(pretty(t, names), name, names) == t
