import itertools

import pytest
from hypothesis import given, strategies as st

from gradtt.grades import (INFORMATION_FLOW_SPEC, INSTANCE_NAMES, CarrierTooLarge, DivisionError,
                           ModalityError, check_laws, check_well_behaved_zero, ctx_add, ctx_le,
                           ctx_meet, ctx_nr, ctx_scale, division_laws, lattice, lawful_nr_tables,
                           make_instance, matrix_apply, matrix_apply_n, nr_unique_check,
                           parse_lattice_spec, render_ctx, unit_vector, zeros)

from oracle import erasure_nr, linear_nr, oracle_divide

LAWFUL = ["erasure", "affine", "linear", "linear-bad-nr", "linear-or-affine", "trivial", "information-flow"]
WELL_BEHAVED = ["erasure", "affine", "linear", "linear-bad-nr", "linear-or-affine", "information-flow"]


@pytest.mark.parametrize("name", LAWFUL)
def test_instances_satisfy_every_law(name):
    failures = [r for r in check_laws(make_instance(name)) if not r.ok]
    assert failures == []


@pytest.mark.parametrize("name", WELL_BEHAVED)
def test_instances_have_well_behaved_zero(name):
    m = make_instance(name)
    assert all(r.ok for r in check_well_behaved_zero(m))
    assert m.has_well_behaved_zero


def test_trivial_zero_is_not_well_behaved():
    m = make_instance("trivial")
    results = {r.law: r for r in check_well_behaved_zero(m)}
    assert not results["zero-ne-one"].ok
    assert results["zero-ne-one"].witness == ("0", "0")
    assert not m.has_well_behaved_zero


def test_order_is_derived_from_meet():
    m = make_instance("linear")
    assert m.le("w", "0") and m.le("w", "1")
    assert not m.le("0", "1") and not m.le("1", "0")
    e = make_instance("erasure")
    assert e.le("w", "0") and not e.le("0", "w")
    assert e.zero_is_greatest
    assert not m.zero_is_greatest


def test_affine_order():
    m = make_instance("affine")
    assert m.le("1", "0") and m.le("w", "1")
    assert m.zero_is_greatest


def test_erasure_nr_matches_oracle():
    m = make_instance("erasure")
    for args in itertools.product(m.carrier, repeat=5):
        assert m.nr(*args) == erasure_nr(*args)


def test_linear_nr_matches_closed_form():
    m = make_instance("linear")
    for args in itertools.product(m.carrier, repeat=5):
        assert m.nr(*args) == linear_nr(*args), args


def test_bad_nr_differs_on_plus():
    good, bad = make_instance("linear"), make_instance("linear-bad-nr")
    # plus: z = k (1), s = ih only so qs = 0, n (1), with p = 0 and r = 1
    assert good.nr("0", "1", "1", "0", "0") == "1"
    assert good.nr("0", "1", "0", "0", "1") == "1"
    assert bad.nr("0", "1", "1", "0", "0") == "w"
    assert bad.nr("0", "1", "0", "0", "1") == "w"


def test_erasure_nr_is_unique():
    assert nr_unique_check(make_instance("erasure"))


def test_linear_nr_is_not_unique():
    tables = lawful_nr_tables(make_instance("linear"), limit=2)
    assert len(tables) >= 2
    assert tables[0] != tables[1]


def test_nr_search_tables_are_lawful():
    m = make_instance("linear")
    for table in lawful_nr_tables(m, limit=3):
        assert all(r.ok for r in check_laws(m.with_nr(table)))


def test_nr_search_respects_carrier_bound():
    with pytest.raises(CarrierTooLarge):
        lawful_nr_tables(make_instance("linear-or-affine"), max_carrier=3)


def test_division_on_information_flow():
    m = make_instance("information-flow")
    laws = division_laws(m)
    assert len(laws) == 5
    assert all(r.ok for r in laws)
    assert m.divide("H", "M") == "H"
    assert m.divide("M", "M") == "L"
    assert m.divide("H", "H") == "L"


@pytest.mark.parametrize("name", LAWFUL)
def test_division_matches_brute_force(name):
    m = make_instance(name)
    for q in m.supports_division_by:
        for p in m.carrier:
            assert m.divide(p, q) == oracle_divide(m, p, q)


def test_affine_division_where_one_is_not_least():
    # w <= 1 <= 0, so dividing can land below 1
    m = make_instance("affine")
    assert m.divide("1", "0") == "w" and m.divide("w", "w") == "w" and m.divide("1", "w") == "0"
    assert {r.law for r in division_laws(m) if not r.ok} == {"p/0 = 1", "p/p = 1", "1/p = 1"}


def test_division_laws_hold_where_one_is_least():
    for name in ["erasure", "linear", "linear-or-affine", "trivial", "information-flow"]:
        assert all(r.ok for r in division_laws(make_instance(name))), name


def test_division_undefined_raises():
    with pytest.raises(DivisionError):
        make_instance("linear").divide("1", "w")
    assert make_instance("affine").divide("1", "w") == "0"


def test_lattice_spec_parsing():
    elems, bot, top, covers = parse_lattice_spec(INFORMATION_FLOW_SPEC)
    assert elems == ["L", "M", "H"] and bot == "L" and top == "H"
    assert covers == [("L", "M"), ("M", "H")]
    diamond = lattice("elem B X Y T; cover B X; cover B Y; cover X T; cover Y T")
    assert diamond.zero == "T" and diamond.one == "B"
    assert diamond.meet("X", "Y") == "B"
    assert all(r.ok for r in check_laws(diamond))


@pytest.mark.parametrize("spec", ["", "elem A B", "elem A B; cover A B; cover B A", "frobnicate A"])
def test_bad_lattice_specs(spec):
    with pytest.raises(ModalityError):
        lattice(spec)


def test_lattice_from_file(tmp_path):
    path = tmp_path / "three.lat"
    path.write_text(INFORMATION_FLOW_SPEC)
    m = make_instance(f"lattice:{path}")
    assert m.carrier == ("L", "M", "H")


def test_unknown_instance():
    with pytest.raises(ModalityError):
        make_instance("quantum")
    with pytest.raises(ModalityError):
        make_instance("lattice:/nonexistent/path")


def test_grade_aliases():
    e = make_instance("erasure")
    assert e.parse_grade("ω") == "w" and e.parse_grade("omega") == "w" and e.parse_grade("1") == "w"
    with pytest.raises(ModalityError):
        make_instance("linear").parse_grade("1?")
    assert make_instance("linear-or-affine").parse_grade("1?") == "1?"


def test_render_ctx_is_right_to_left():
    assert render_ctx(("1", "0", "w")) == "[x2↦w, x1↦0, x0↦1]"
    assert render_ctx(("1", "w"), ["n", "k"]) == "[k↦w, n↦1]"


def test_all_instance_names_build():
    for name in INSTANCE_NAMES:
        assert make_instance(name).carrier


# --- context algebra, property-based ----------------------------------------------

def _ctx_strategy(m, n):
    return st.tuples(*[st.sampled_from(m.carrier)] * n)


@given(data=st.data(), name=st.sampled_from(LAWFUL), n=st.integers(0, 4))
def test_context_operations_are_pointwise_and_lawful(data, name, n):
    m = make_instance(name)
    g = data.draw(_ctx_strategy(m, n))
    d = data.draw(_ctx_strategy(m, n))
    e = data.draw(_ctx_strategy(m, n))
    p = data.draw(st.sampled_from(m.carrier))
    assert ctx_add(m, g, d) == ctx_add(m, d, g)
    assert ctx_add(m, zeros(m, n), g) == g
    assert ctx_le(m, ctx_meet(m, g, d), g)
    assert ctx_scale(m, m.one, g) == g
    assert ctx_scale(m, p, ctx_add(m, g, d)) == ctx_add(m, ctx_scale(m, p, g), ctx_scale(m, p, d))
    r = data.draw(st.sampled_from(m.carrier))
    chi = ctx_nr(m, p, r, g, d, e)
    if ctx_le(m, e, zeros(m, n)):
        assert ctx_le(m, chi, g)


@given(data=st.data(), name=st.sampled_from(LAWFUL))
def test_matrix_application(data, name):
    m = make_instance(name)
    n_src, n_tgt = data.draw(st.integers(1, 3)), data.draw(st.integers(0, 3))
    psi = tuple(data.draw(_ctx_strategy(m, n_tgt)) for _ in range(n_src))
    g = data.draw(_ctx_strategy(m, n_src))
    out = matrix_apply_n(m, g, psi, n_tgt)
    manual = zeros(m, n_tgt)
    for gi, row in zip(g, psi):
        manual = ctx_add(m, manual, ctx_scale(m, gi, row))
    assert out == manual
    ident = tuple(unit_vector(m, n_src, i) for i in range(n_src))
    assert matrix_apply(m, g, ident) == g
