import random
from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from galois40.galois_id import (NOT_SQUAREFREE, BadPrime, SurveyError, degree_pattern,
                                discriminant, frobenius_survey, gcd_p, is_minus3_times_square,
                                mulmod_p, parse_point, powmod_p, random_points, reduce_mod_p,
                                resultant_q, specialize, sylvester_det, uv_derivative)
from galois40.permgroup import is_even, psp_cycle_types

# Univariate polynomials are little-endian coefficient lists: [c0, c1, ..., cn].


def mul(a, b, p=None):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return [c % p for c in out] if p else out


def test_quadratic_discriminants():
    assert discriminant([-1, 0, 1]) == 4
    assert discriminant([1, 0, 1]) == -4
    b, c = 3, 7
    assert discriminant([c, b, 1]) == b * b - 4 * c


def test_cubic_discriminant_formula():
    # X^3 + aX + b  ->  -4a^3 - 27b^2
    for a, b in [(1, 1), (-3, 2), (0, 1), (5, -7)]:
        assert discriminant([b, a, 0, 1]) == -4 * a ** 3 - 27 * b ** 2


def test_discriminant_rejects_constants():
    with pytest.raises(ValueError):
        discriminant([5])
    with pytest.raises(ValueError):
        discriminant([])


def test_square_class_witnesses():
    assert is_minus3_times_square(-12) == (True, 2)
    assert is_minus3_times_square(-27) == (True, 3)
    assert is_minus3_times_square(mpq(-3, 4)) == (True, mpq(1, 2))
    assert is_minus3_times_square(12) == (False, None)
    assert is_minus3_times_square(-6) == (False, None)
    with pytest.raises(ValueError):
        is_minus3_times_square(0)


def test_minus3_times_random_rational_squares():
    rng = random.Random(11)
    for _ in range(1000):
        q = mpq(rng.randint(-10**12, 10**12) or 1, rng.randint(1, 10**9))
        ok, w = is_minus3_times_square(-3 * q * q)
        assert ok and w == abs(q)


small_poly = st.lists(st.integers(-20, 20), min_size=2, max_size=9).filter(lambda f: f[-1] != 0)


@settings(max_examples=300, deadline=None)
@given(small_poly, small_poly)
def test_resultant_matches_sylvester_determinant(a, b):
    assert resultant_q(a, b) == sylvester_det(a, b)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=6), min_size=2, max_size=9)
       .filter(lambda f: f[-1] != 0))
def test_discriminant_is_invariant_under_x_to_minus_x(f):
    f = [mpq(Fraction(c)) for c in f]
    g = [c if k % 2 == 0 else -c for k, c in enumerate(f)]
    assert discriminant(f) == discriminant(g)


def test_discriminant_vanishes_on_repeated_roots():
    f = mul(mul([1, 1], [1, 1]), [-2, 0, 1])
    assert discriminant(f) == 0


def test_reduce_mod_p():
    assert reduce_mod_p([-1, 0, 1], 3) == [2, 0, 1]
    # leading coefficient 19683 = 3^9 vanishes mod 3: degree drops
    assert len(reduce_mod_p([1, 2, 19683], 3)) - 1 < 2
    assert len(reduce_mod_p([1, 2, 19683], 1009)) - 1 == 2
    with pytest.raises(BadPrime):
        reduce_mod_p([mpq(1, 3), 1], 3)


def _is_irreducible(f, p):
    """Rabin's test, written out independently of the DDF loop."""
    n = len(f) - 1
    x = [0, 1]

    def frob_power(k):
        h = x
        for _ in range(k):
            h = powmod_p(h, p, f, p)
        return h

    def minus_x(h):
        h = list(h) + [0] * max(0, 2 - len(h))
        h[1] = (h[1] - 1) % p
        while h and not h[-1]:
            h.pop()
        return h

    if minus_x(frob_power(n)):
        return False
    for q in {q for q in range(2, n + 1) if n % q == 0 and all(q % r for r in range(2, q))}:
        g = gcd_p(f, minus_x(frob_power(n // q)), p)
        if len(g) > 1:
            return False
    return True


def test_synthetic_pattern_with_known_factors():
    p = 5  # X^2 + X + 1 is irreducible mod 5
    rng = random.Random(3)
    while True:
        big = [rng.randrange(p) for _ in range(36)] + [1]
        if _is_irreducible(big, p):
            break
    f = mul(mul(mul([0, 1], [1, 1], p), [1, 1, 1], p), big, p)
    assert degree_pattern(f, p) == (36, 2, 1, 1)


def test_pattern_of_split_polynomial():
    p = 101
    f = [1]
    for r in range(7):
        f = mul(f, [p - r, 1], p)
    assert degree_pattern(f, p) == (1,) * 7


def test_not_squarefree_is_reported():
    p = 7
    f = mul(mul([1, 1], [1, 1], p), [3, 0, 1], p)
    assert degree_pattern(f, p) == NOT_SQUAREFREE


def test_mulmod_and_powmod_agree():
    p = 1009
    f = [3, 1, 0, 5, 1]
    a = [2, 7, 1]
    acc = [1]
    for _ in range(13):
        acc = mulmod_p(acc, a, f, p)
    assert acc == powmod_p(a, 13, f, p)


def test_parse_point():
    assert parse_point("1,1,1") == (1, 1, 1)
    assert parse_point("1/2, -3, 4/5") == (mpq(1, 2), -3, mpq(4, 5))
    with pytest.raises(ValueError):
        parse_point("1,a,2")


def test_random_points_are_reproducible():
    assert random_points(5, seed=2) == random_points(5, seed=2)
    assert random_points(5, seed=2) != random_points(5, seed=3)


def test_specialization_keeps_degree_40(appendix_F):
    f = specialize(appendix_F, (1, 1, 1))
    assert len(f) == 41 and f[-1] == 19683
    with pytest.raises(ValueError):
        specialize(appendix_F, (1, 1))


def test_discriminant_at_111_is_minus3_square(appendix_F):
    d = discriminant(specialize(appendix_F, (1, 1, 1)))
    ok, n = is_minus3_times_square(d)
    assert ok
    assert d == -3 * n * n


def test_discriminant_class_at_random_points(appendix_F):
    checked = 0
    for pt in random_points(12, seed=1):
        d = discriminant(specialize(appendix_F, pt))
        if d:
            assert is_minus3_times_square(d)[0], pt
            checked += 1
    assert checked >= 10


def test_first_good_split_prime_pattern_lies_in_psp(appendix_F):
    rep = frobenius_survey(appendix_F, (1, 1, 1), prime_count=6, prime_floor=1009)
    first = next(s for s in rep.squarefree_samples if s.residue == 1)
    assert first.pattern in psp_cycle_types()


def test_survey_invariants_at_111(survey_111):
    rep = survey_111
    assert len(rep.samples) == 300
    for s in rep.squarefree_samples:
        assert sum(s.pattern) == 40
        assert s.parity_ok
        assert is_even(s.pattern) == (s.legendre == 1)
        assert s.p >= 1009 and s.p != 3
    assert rep.violations() == []
    assert rep.residue1_outside_psp() == []
    assert rep.residue2_outside_psp()
    # -3 is a square mod p exactly when p = 1 mod 3
    assert all((s.legendre == 1) == (s.residue == 1) for s in rep.squarefree_samples)


def test_specialization_at_111_is_reducible_so_fixed_points_average_three(survey_111):
    # F(1,1,1;X) splits as 1 + 12 + 27 over Q: every pattern has a fixed point
    rep = survey_111
    assert all(1 in s.pattern for s in rep.squarefree_samples)
    assert 2.4 <= rep.mean_fixed_points() <= 3.6


def test_generic_point_has_transitive_signature(appendix_F):
    rep = frobenius_survey(appendix_F, (2, 3, 5), prime_count=300, prime_floor=1009)
    assert rep.violations() == []
    assert rep.parity_failures() == []
    assert 0.7 <= rep.mean_fixed_points() <= 1.3
    assert rep.passed()


def test_survey_errors(appendix_F):
    with pytest.raises(SurveyError):
        frobenius_survey(appendix_F, (1, 1, 1), prime_count=0)


def test_derivative():
    assert uv_derivative([5, 3, 0, 2]) == [3, 0, 6]
