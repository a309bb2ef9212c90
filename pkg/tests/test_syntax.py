from hypothesis import given, strategies as st

from gradtt.syntax import (STRONG, WEAK, Ann, App, Fst, Id, Lam, Lift, Nat, Natrec, Pair, Pi,
                           Prodrec, Sigma, Snd, Star, Step, Subst, Suc, TApp, TLam, TVar,
                           Unitrec, Var, Zero, free_vars, is_closed, numeral, rename, shift, size,
                           subst, subst_lifted, subst_top, wk, wk_var, well_scoped)

GRADES = st.sampled_from(["0", "1", "w"])


def terms(max_leaves=12):
    """Raw, possibly ill-typed source terms; variables may be free."""
    leaves = st.one_of(st.builds(Var, st.integers(0, 4)), st.builds(Zero), st.just(Nat()),
                       st.builds(Star, st.sampled_from([STRONG, WEAK])))

    def extend(sub):
        return st.one_of(
            st.builds(Lam, GRADES, sub),
            st.builds(App, sub, GRADES, sub),
            st.builds(Pi, GRADES, GRADES, sub, sub),
            st.builds(Sigma, st.sampled_from([STRONG, WEAK]), GRADES, GRADES, sub, sub),
            st.builds(Pair, st.sampled_from([STRONG, WEAK]), GRADES, sub, sub),
            st.builds(Fst, GRADES, sub),
            st.builds(Snd, GRADES, sub),
            st.builds(Suc, sub),
            st.builds(Prodrec, GRADES, GRADES, GRADES, sub, sub, sub),
            st.builds(Natrec, GRADES, GRADES, GRADES, sub, sub, sub, sub),
            st.builds(Unitrec, GRADES, GRADES, sub, sub, sub),
            st.builds(Ann, sub, sub),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


def weakenings():
    return st.recursive(st.just(Id()), lambda sub: st.one_of(st.builds(Step, sub), st.builds(Lift, sub)),
                        max_leaves=5)


@given(terms())
def test_identity_substitution(t):
    assert subst(Subst.identity(), t) == t


@given(terms(), st.integers(0, 3))
def test_shift_then_instantiate_is_identity(t, k):
    lifted = shift(t, k)
    assert subst_top(lifted, *[Zero()] * k) == t


@given(terms())
def test_closed_instantiation_lowers_free_variables(t):
    out = subst_top(t, Zero())
    assert all(i + 1 in free_vars(t) for i in free_vars(out))


@given(terms(), st.integers(0, 3), st.integers(0, 3))
def test_shifts_compose(t, a, b):
    assert shift(shift(t, a), b) == shift(t, a + b)


@given(terms(), weakenings(), weakenings())
def test_weakening_matches_pointwise_renaming(t, rho, eta):
    assert wk(rho, t) == rename(t, lambda i: wk_var(rho, i))
    assert wk(rho, wk(eta, t)) == rename(t, lambda i: wk_var(rho, wk_var(eta, i)))


@given(terms(), terms(), terms())
def test_substitution_composes(t, u, v):
    """Instantiating two variables at once equals doing it one at a time."""
    both = subst_top(t, u, v)
    one_by_one = subst_top(subst_top(t, shift(v)), u)
    assert both == one_by_one


@given(terms())
def test_subst_lifted(t):
    assert subst_lifted(t, Var(0), 1) == t
    # the natrec successor motive: x := suc m over two fresh variables m, ih
    expected = subst(lambda i: Suc(Var(1)) if i == 0 else Var(i + 1), t)
    assert subst_lifted(t, Suc(Var(1)), 2) == expected


@given(terms())
def test_scope_helpers(t):
    n = max(free_vars(t), default=-1) + 1
    assert well_scoped(t, n)
    assert is_closed(t) == (n == 0)
    assert size(t) >= 1


def test_subst_cons_tail_and_lift():
    s = Subst((numeral(1), numeral(2)))
    assert s(0) == numeral(1) and s(1) == numeral(2) and s(2) == Var(0)
    assert s.tail()(0) == numeral(2)
    assert s.cons(Zero())(0) == Zero()
    assert s.lift()(0) == Var(0) and s.lift()(1) == numeral(1) and s.lift()(3) == Var(1)
    assert Subst().tail()(0) == Var(1)


def test_substitution_under_binders():
    t = Lam("1", App(Var(0), "1", Var(1)))
    assert subst_top(t, Var(5)) == Lam("1", App(Var(0), "1", Var(6)))


def test_target_terms_share_the_traversal():
    t = TLam(TApp(TVar(0), TVar(1)))
    assert shift(t) == TLam(TApp(TVar(0), TVar(2)))
    assert subst_top(t, Var(3)) == TLam(TApp(TVar(0), TVar(4)))


def test_numeral():
    assert numeral(2) == Suc(Suc(Zero()))
    assert numeral(0) == Zero()
