import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from klooster.etaseries import b_p, deligne_ok, eta_product_qexp
from klooster.modarith import is_odd_prime, primes_between

N = 400
SERIES = eta_product_qexp(N)


def naive_qexp(n_max):
    # plain polynomial multiplication, one factor (1 - q^(dn)) at a time
    coeff = [0] * (n_max + 1)
    coeff[1] = 1
    for d in (1, 2, 3, 6):
        for m in range(1, n_max // d + 1):
            for _ in range(2):
                step = d * m
                new = coeff[:]
                for i in range(step, n_max + 1):
                    new[i] -= coeff[i - step]
                coeff = new
    return coeff[1:]


def test_first_coefficients():
    assert [SERIES[n] for n in range(1, 13)] == [1, -2, -3, 4, 6, 6, -16, -8, 9, -12, 12, -12]


def test_matches_naive_product():
    assert list(eta_product_qexp(60).coeff) == naive_qexp(60)


def test_known_prime_coefficients():
    assert [b_p(p, SERIES) for p in (11, 13, 17, 19, 23)] == [12, 38, -126, 20, 168]


@settings(max_examples=60)
@given(st.integers(1, N), st.integers(1, N))
def test_multiplicative(m, n):
    if m * n > N or math.gcd(m, n) != 1:
        return
    assert SERIES[m * n] == SERIES[m] * SERIES[n]


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 19])
def test_hecke_at_prime_squares(p):
    # weight 4: a(p^2) = a(p)^2 - p^3 at good primes
    assert SERIES[p * p] == SERIES[p] ** 2 - p**3


def test_bad_primes():
    assert SERIES[4] == SERIES[2] ** 2 and SERIES[9] == SERIES[3] ** 2


def test_deligne_bound():
    for p in primes_between(5, N):
        assert abs(SERIES[p]) < 2 * p**1.5
        assert deligne_ok(SERIES, p)


def test_b_p_domain():
    with pytest.raises(ValueError):
        b_p(7, SERIES)
    with pytest.raises(ValueError):
        b_p(401, SERIES)


def test_index_range():
    with pytest.raises(IndexError):
        SERIES[0]
    with pytest.raises(IndexError):
        SERIES[N + 1]
    assert list(SERIES.rows())[:2] == [(1, 1), (2, -2)]
