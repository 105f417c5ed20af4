import pytest
from gmpy2 import mpq

from galois40.groebner import (GB_VARS, THETA_ORDER, BudgetExceeded, CertificateNotFound,
                               buchberger, certify_primitive_element, find_ac_free, find_b_linear,
                               is_reduced, reduce, s_polynomial, theta_ideal, verify_groebner)
from galois40.poly import MonomialOrder, polys

V, (x, y, z) = polys("x y z")
LEX = MonomialOrder.lex(V)


def test_theta_ideal_generators():
    f, g, h, j = theta_ideal()
    a, c, v, b, u, t, s = GB_VARS.gens()
    assert f == 8 * a - 162 * b + 5 * c - s
    assert g.coeff((0, 1, 0, 0, 0, 0, 0)) == mpq(91, 2)
    assert g.coeff((1, 1, 0, 0, 0, 0, 0)) == mpq(7, 2)
    assert g.coeff((0, 2, 0, 0, 0, 0, 0)) == mpq(11, 8)
    assert h + u == b * (8 + 2 * a - c) ** 2
    assert j.coeff((0, 0, 0, 3, 0, 0, 0)) == -68024448
    assert j.coeff((0, 0, 1, 0, 0, 0, 0)) == -1


def test_s_polynomial_examples():
    p = x**2 * y - z
    assert s_polynomial(p, p, LEX) == 0
    sp = s_polynomial(x, y, LEX)
    assert reduce(sp, [x, y], LEX) == 0
    with pytest.raises(ValueError):
        s_polynomial(V.zero(), x, LEX)


def test_reduce_examples():
    f = x**2 - y
    assert reduce(f, [f], LEX) == 0
    assert reduce(V.zero(), [x, y], LEX) == 0
    r = reduce(x**3 + z, [x**2 - y], LEX)
    assert r == x * y + z


def test_small_bases():
    gb = buchberger([x - 1, y - x], LEX)
    assert set(map(str, gb.polys)) == {str(x - 1), str(y - 1)}
    gb2 = buchberger([x**2, x * y], LEX)
    assert set(map(str, gb2.polys)) == {str(x**2), str(x * y)}
    assert is_reduced(gb2) and verify_groebner(gb2) == []


def test_textbook_example_and_uniqueness():
    # twisted cubic: <y - x^2, z - x^3> under lex x > y > z
    gens = [y - x**2, z - x**3]
    gb = buchberger(gens, LEX)
    again = buchberger(list(reversed(gens)) + [gens[0] * z], LEX)
    assert [str(p) for p in gb] == [str(p) for p in again]
    assert verify_groebner(gb) == [] and is_reduced(gb)
    # y^3 - z^2 lies in the ideal
    assert gb.contains(y**3 - z**2)
    assert all(p.leading_term(LEX)[1] == 1 for p in gb)


def test_grlex_order():
    order = MonomialOrder.grlex(V)
    gb = buchberger([x**2 + y, x * y - 1], order)
    assert verify_groebner(gb) == []
    assert gb.contains(x**2 + y) and gb.contains(x * y - 1)
    assert not gb.contains(x + 1)


def test_budget_guard():
    with pytest.raises(BudgetExceeded):
        buchberger(theta_ideal(), THETA_ORDER, max_reductions=3)


def test_find_ac_free_small_cases():
    a, c, v, b, u, t, s = GB_VARS.gens()
    assert find_ac_free([a]) == []
    assert find_ac_free([b - u]) == [b - u]


def test_b_linear_found_trivially():
    a, c, v, b, u, t, s = GB_VARS.gens()
    gb = buchberger([b - s], THETA_ORDER)
    lin, pair, note = find_b_linear(gb)
    assert lin == b - s and pair == (0, 0)
    with pytest.raises(CertificateNotFound):
        certify_primitive_element(gb)


# -- the basis of the primitive-element ideal (slow, shared fixture) --------------

@pytest.mark.slow
def test_theta_basis_structure(theta_gb):
    # the reduced basis is unique: 17 elements, 6 of them free of a and c
    assert len(theta_gb) == 17
    assert len(find_ac_free(theta_gb)) == 6
    assert is_reduced(theta_gb)
    assert all(p.leading_term(THETA_ORDER)[1] == 1 for p in theta_gb)
    a = GB_VARS.var("a")
    assert theta_gb.polys[-1].leading_term(THETA_ORDER)[0] == a.leading_term(THETA_ORDER)[0]


@pytest.mark.slow
def test_theta_basis_contains_generators(theta_gb):
    for p in theta_ideal():
        assert theta_gb.reduce(p) == 0


@pytest.mark.slow
def test_theta_basis_s_pairs_vanish(theta_gb):
    assert verify_groebner(theta_gb) == []


@pytest.mark.slow
def test_elimination_property(theta_gb):
    free = find_ac_free(theta_gb)
    prod = theta_gb.reduce(free[0] * free[1] + free[2])
    assert not ({"a", "c"} & set(prod.variables()))
    s = GB_VARS.var("s")
    assert theta_gb.reduce(s) == s


@pytest.mark.slow
def test_primitive_element_certificate(theta_gb, certificate):
    cert = certificate
    assert cert.success
    assert cert.b_linear.degree("b") == 1
    assert set(cert.b_coefficient.variables()) <= {"s", "t", "u", "v"}
    assert theta_gb.reduce(cert.b_coefficient) != 0
    assert cert.c_linear.degree("c") == 1 and "a" not in cert.c_linear.variables()
    assert all(n != "a" and n != "c" for n in cert.b_linear.variables())
    # back-substitution: a = (s + 162 b - 5 c)/8 makes f vanish identically
    a, c, v, b, u, t, s = GB_VARS.gens()
    f = theta_ideal()[0]
    assert f.substitute({"a": cert.a_expression, "c": c, "v": v, "b": b, "u": u, "t": t,
                         "s": s}) == 0
