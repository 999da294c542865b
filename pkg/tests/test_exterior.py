"""Engine laws for the symbolic exterior calculus."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lbfkit import exterior
from lbfkit.exterior import (
    AlgebraMismatchError,
    Form,
    MissingRuleError,
    ScalarExpr,
    TangentSymbol,
    UnboundAtomError,
    ZERO,
    ext_d,
    equals,
    eval_numeric,
    interior,
    standard_rules,
    wedge,
    wedge_all,
    wedge_power,
)

from conftest import (
    DUALS,
    make_algebras,
    random_form,
    random_homogeneous,
    random_scalar,
    random_tangent,
)


# ---------------------------------------------------------------------------
# scalar layer


def test_scalar_arithmetic_is_exact():
    third = ScalarExpr.const(Fraction(1, 3))
    assert third + third + third == ScalarExpr.const(1)
    a = ScalarExpr.atom("f")
    assert (a + 1) * (a - 1) == a * a - 1


def test_scalar_power_and_monomial_inverse():
    a = ScalarExpr.atom("mu", 2) * 4
    assert a ** 0 == ScalarExpr.const(1)
    assert a ** 2 == ScalarExpr.atom("mu", 4) * 16
    inv = a ** -1
    assert a * inv == ScalarExpr.const(1)


def test_scalar_negative_power_rejects_sums():
    with pytest.raises(ValueError):
        (ScalarExpr.atom("f") + 1) ** -1


def test_substitute_and_evaluate_agree():
    expr = ScalarExpr.atom("f") * ScalarExpr.atom("r1", 2) + Fraction(1, 2)
    subbed = expr.substitute({"f": Fraction(3), "r1": Fraction(2)})
    assert subbed == ScalarExpr.const(Fraction(25, 2))
    assert eval_numeric(expr, {"f": 3.0, "r1": 2.0}) == 12.5


def test_evaluate_names_the_unbound_atom():
    expr = ScalarExpr.atom("sigma") + ScalarExpr.atom("t")
    with pytest.raises(UnboundAtomError, match="sigma"):
        expr.evaluate({"t": 1.0})


def test_chain_rule_depth_and_missing_rule():
    rules = standard_rules()
    expr = ScalarExpr.atom("f")
    for _ in range(exterior.CHAIN_DEPTH):
        expr = expr.diff("r1", rules)
    with pytest.raises(MissingRuleError):
        for _ in range(4):
            expr = expr.diff("r1", rules)


def test_mu_is_constant_in_r2():
    rules = standard_rules()
    assert ScalarExpr.atom("mu").diff("r2", rules).is_zero()
    assert ScalarExpr.atom("mu").diff("r1", rules) == ScalarExpr.atom("mup")


@given(st.data())
@settings(max_examples=200, deadline=None)
def test_scalar_ring_laws(data):
    seed = data.draw(st.integers(0, 2**32 - 1))
    rng = random.Random(seed)
    a, b, c = (random_scalar(rng) for _ in range(3))
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + ZERO == a
    assert (a - a).is_zero()


# ---------------------------------------------------------------------------
# algebra layer


def test_known_expansion_of_the_primitive_derivative():
    alg = exterior.disk_bundle_algebra(2)
    r = ScalarExpr.atom("r")
    one_form = wedge(Form.scalar(alg, 1 + r * r),
                     Form.gen(alg, "alpha") + Form.gen(alg, "dtheta"))
    d = ext_d(one_form)
    expected = (
        wedge(Form.gen(alg, "dr", 2 * r), Form.gen(alg, "alpha") + Form.gen(alg, "dtheta"))
        + Form.gen(alg, "dalpha", 1 + r * r)
    )
    assert equals(d, expected)


def test_odd_generator_squares_to_zero():
    alg = exterior.double_disk_algebra(2)
    a = Form.gen(alg, "alpha")
    assert wedge(a, a).is_zero()


def test_even_generator_power_cap():
    # dalpha caps at n - 1, so the n-th power dies and the (n-1)-th does not
    for n in (2, 3):
        alg = exterior.disk_bundle_algebra(n)
        da = Form.gen(alg, "dalpha")
        assert not wedge_power(da, n - 1).is_zero()
        assert wedge_power(da, n).is_zero()


def test_algebra_mismatch_raises():
    a2 = exterior.disk_bundle_algebra(2)
    a3 = exterior.disk_bundle_algebra(3)
    with pytest.raises(AlgebraMismatchError):
        wedge(Form.gen(a2, "dr"), Form.gen(a3, "dr"))


def test_interior_pairings():
    alg = exterior.disk_bundle_algebra(2)
    reeb = TangentSymbol(alg, {"reeb": 1})
    d_r = TangentSymbol(alg, {"d_r": 1})
    assert equals(interior(reeb, Form.gen(alg, "alpha")), Form.scalar(alg, 1))
    assert interior(reeb, Form.gen(alg, "dr")).is_zero()
    assert equals(interior(d_r, Form.gen(alg, "dr")), Form.scalar(alg, 1))
    # even generators contract to zero against every dual
    assert interior(reeb, Form.gen(alg, "dalpha")).is_zero()


def test_tangent_symbol_rejects_unknown_dual():
    alg = exterior.disk_bundle_algebra(2)
    with pytest.raises(AlgebraMismatchError):
        TangentSymbol(alg, {"d_bogus": 1})


def test_wedge_all_needs_an_argument():
    with pytest.raises(ValueError):
        wedge_all()


# ---------------------------------------------------------------------------
# randomized laws (bulk runs live in the acceptance suite)


def _degree(form: Form) -> int:
    degs = form.degrees()
    return next(iter(degs)) if degs else 0


def test_d_squared_vanishes_randomized(rng):
    algebras = make_algebras(2) | {k + "3": a for k, a in make_algebras(3).items()}
    for _ in range(120):
        alg = rng.choice(list(algebras.values()))
        form = random_form(alg, rng)
        assert ext_d(ext_d(form)).is_zero()


def test_graded_commutativity_randomized(rng):
    algebras = make_algebras(2)
    for _ in range(150):
        kind = rng.choice(list(algebras))
        alg = algebras[kind]
        a = random_homogeneous(alg, rng)
        b = random_homogeneous(alg, rng)
        sign = (-1) ** (_degree(a) * _degree(b))
        assert equals(wedge(a, b), wedge(b, a).scale(sign))


def test_wedge_associativity_randomized(rng):
    algebras = make_algebras(3)
    for _ in range(100):
        alg = rng.choice(list(algebras.values()))
        a, b, c = (random_form(alg, rng, 2) for _ in range(3))
        assert equals(wedge(wedge(a, b), c), wedge(a, wedge(b, c)))


def test_leibniz_rule_randomized(rng):
    algebras = make_algebras(2)
    for _ in range(100):
        kind = rng.choice(list(algebras))
        alg = algebras[kind]
        a = random_homogeneous(alg, rng)
        b = random_form(alg, rng, 2)
        sign = (-1) ** _degree(a)
        lhs = ext_d(wedge(a, b))
        rhs = wedge(ext_d(a), b) + wedge(a, ext_d(b)).scale(sign)
        assert equals(lhs, rhs)


def test_interior_is_a_graded_derivation_randomized(rng):
    algebras = make_algebras(2)
    for _ in range(150):
        kind = rng.choice(list(algebras))
        alg = algebras[kind]
        v = random_tangent(alg, kind, rng)
        a = random_homogeneous(alg, rng)
        b = random_form(alg, rng, 2)
        sign = (-1) ** _degree(a)
        lhs = interior(v, wedge(a, b))
        rhs = wedge(interior(v, a), b) + wedge(a, interior(v, b)).scale(sign)
        assert equals(lhs, rhs)


def test_interior_squares_to_zero_on_basis_duals(rng):
    # iota_v twice along a single dual direction kills every form
    algebras = make_algebras(2)
    for _ in range(60):
        kind = rng.choice(list(algebras))
        alg = algebras[kind]
        dual = rng.choice(DUALS[kind])
        v = TangentSymbol(alg, {dual: 1})
        form = random_form(alg, rng)
        assert interior(v, interior(v, form)).is_zero()
