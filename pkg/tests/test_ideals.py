"""Number fields, field elements, fractional ideals, and factorization."""

import math
import random
import re
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from primeideals import residues, zx
from primeideals.ff import DomainError
from primeideals.ideals import (FieldElement, NumberField, UnfactorableError,
                                factor_integer, ideal_create)


@pytest.fixture(scope="module")
def gauss():
    return NumberField([1, 0, 1])


@pytest.fixture(scope="module")
def cubic():
    return NumberField([-1, -1, 0, 1])


def _random_element(K, rng, size=9):
    n = len(K.f) - 1
    num = [rng.randint(-size, size) for _ in range(rng.randint(1, n))]
    if not any(num):
        num[0] = 1
    return K.element(num, rng.randint(1, 6))


# ---------------------------------------------------------------------------
# number-field construction and element arithmetic


def test_field_requires_monic_integral():
    with pytest.raises(DomainError):
        NumberField([1, 0, 2])
    with pytest.raises(DomainError):
        NumberField([Fraction(1, 2), 0, 1])
    with pytest.raises(DomainError):
        NumberField([1])  # constant


def test_element_coercion(gauss):
    assert gauss.element(3) == gauss.element([3])
    assert gauss.element(Fraction(3, 4)) == gauss.element([3], 4)
    w = gauss.w
    assert w * w == gauss.element(-1)
    assert (w + 1) - 1 == w


def test_element_normalization(gauss):
    a = gauss.element([2, 4], 6)
    assert a.den == 3 and a.num == [1, 2]
    b = gauss.element([1, 0], -2)
    assert b.den == 2 and b.num == [-1]


def test_element_inverse_and_division(gauss, cubic):
    rng = random.Random(3)
    for K in (gauss, cubic):
        for _ in range(25):
            a = _random_element(K, rng)
            if a.is_zero():
                continue
            assert a * a.inverse() == K.one
            b = _random_element(K, rng)
            if not b.is_zero():
                assert (a / b) * b == a
    with pytest.raises(ZeroDivisionError):
        gauss.zero.inverse()


def test_norm_multiplicative(gauss, cubic):
    rng = random.Random(17)
    for K in (gauss, cubic):
        for _ in range(25):
            a = _random_element(K, rng)
            b = _random_element(K, rng)
            assert (a * b).norm() == a.norm() * b.norm()


def test_norm_of_rational(cubic):
    n = len(cubic.f) - 1
    assert cubic.element(Fraction(5, 2)).norm() == Fraction(5, 2) ** n


def test_norm_against_resultant(gauss):
    # N(a + bw) = a^2 + b^2 in the Gaussian field
    rng = random.Random(23)
    for _ in range(20):
        a, b = rng.randint(-30, 30), rng.randint(-30, 30)
        assert gauss.element([a, b]).norm() == a * a + b * b


def test_element_pow(gauss):
    w = gauss.w
    assert w ** 4 == gauss.one
    assert w ** -1 == -w
    assert (1 + w) ** 2 == 2 * w


# ---------------------------------------------------------------------------
# integer factorization helper


def test_factor_integer_small():
    assert factor_integer(720) == [(2, 4), (3, 2), (5, 1)]
    assert factor_integer(1) == []
    assert factor_integer(-12) == [(2, 2), (3, 1)]


def test_factor_integer_unfactorable_and_hints():
    p = 1000000000039
    q = 7000000000000037
    with pytest.raises(UnfactorableError) as info:
        factor_integer(p * q)
    assert info.value.composite == p * q
    assert factor_integer(p * q, hints=[p]) == [(p, 1), (q, 1)]
    assert factor_integer(p * q, hints=[p, q]) == [(p, 1), (q, 1)]


def test_factor_integer_rejects_composite_hint():
    with pytest.raises(DomainError):
        factor_integer(100, hints=[10])


# ---------------------------------------------------------------------------
# prime decomposition and handles


def test_factor_prime_caching(gauss):
    a = gauss.factor_prime(5)
    b = gauss.factor_prime(5)
    assert a is b
    assert all(P.parent is gauss for P in a)


def test_prime_handle_invariants(gauss):
    ps = gauss.factor_prime(5)
    assert [P.position for P in ps] == [1, 2]
    for P in ps:
        assert (P.e, P.f) == (1, 1)
        assert P.norm() == 5
        assert P.as_ideal().is_prime()
        assert repr(P) == "P(5,%d)" % P.position


def test_prime_norm_is_p_to_f(cubic):
    for p in (2, 3, 5, 23):
        for P in cubic.factor_prime(p):
            assert P.norm() == P.p ** P.f


# ---------------------------------------------------------------------------
# factorization strings


_FACTOR_RE = re.compile(
    r"^(1|P\(\d+,\d+\)(\^-?\d+)?(\*P\(\d+,\d+\)(\^-?\d+)?)*)$")


def test_factorization_string_grammar(gauss, cubic):
    rng = random.Random(41)
    for K in (gauss, cubic):
        for _ in range(15):
            a = _random_element(K, rng)
            if a.is_zero():
                continue
            I = K.ideal(a)
            I.factorization()
            s = I.factorization_string
            assert _FACTOR_RE.match(s), s
            assert "^1*" not in s and not s.endswith("^1")


def test_factorization_string_sorted(gauss):
    I = gauss.ideal(30)  # 2*3*5: ramified, inert, split
    I.factorization()
    s = I.factorization_string
    assert s == "P(2,1)^2*P(3,1)*P(5,1)*P(5,2)"


def test_unit_ideal_string(gauss):
    I = gauss.ideal(1)
    assert I.factorization() == []
    assert I.factorization_string == "1"
    assert I.is_unit_ideal()


# ---------------------------------------------------------------------------
# ideal arithmetic: group laws on exponent vectors


def _exponents(I):
    return {(P.p, P.position): e for P, e in I.factorization()}


@st.composite
def _exponent_vectors(draw):
    keys = draw(st.lists(st.sampled_from([(2, 1), (3, 1), (5, 1), (5, 2)]),
                         min_size=1, max_size=4, unique=True))
    return {k: draw(st.integers(min_value=-4, max_value=4)) for k in keys}


def _ideal_from_exponents(K, vec):
    I = K.ideal(1)
    primes = {(P.p, P.position): P
              for p in (2, 3, 5) for P in K.factor_prime(p)}
    for k, e in vec.items():
        if e:
            I = I * primes[k].as_ideal() ** e
    return I


@settings(max_examples=40, deadline=None)
@given(_exponent_vectors(), _exponent_vectors(),
       st.integers(min_value=-3, max_value=3))
def test_ideal_group_laws(va, vb, k):
    K = test_ideal_group_laws.K
    A = _ideal_from_exponents(K, va)
    B = _ideal_from_exponents(K, vb)
    ea, eb = _exponents(A), _exponents(B)
    assert _exponents(A * B) == {q: v for q in set(ea) | set(eb)
                                 if (v := ea.get(q, 0) + eb.get(q, 0))}
    assert _exponents(A / B) == {q: v for q in set(ea) | set(eb)
                                 if (v := ea.get(q, 0) - eb.get(q, 0))}
    assert _exponents(A ** k) == {q: v * k for q, v in ea.items() if k}
    assert (A * B) / B == A
    assert _exponents(A / A) == {}


def _attach_field():
    test_ideal_group_laws.K = NumberField([1, 0, 1])


_attach_field()


def test_ideal_sum_is_pointwise_min(gauss):
    P1, P2 = (P.as_ideal() for P in gauss.factor_prime(5))
    A = P1 ** 3 * P2
    B = P1 * P2 ** 2
    assert _exponents(A + B) == {(5, 1): 1, (5, 2): 1}
    assert (A + B).is_integral()


def test_ideal_sum_from_generators(gauss):
    # (2+w) + (2-w) generate the unit ideal: the two primes over 5 are coprime
    I = gauss.ideal([gauss.element([2, 1]), gauss.element([2, -1])])
    assert _exponents(I) == {}


def test_principal_ideal_of_prime(gauss, cubic):
    for K, p in ((gauss, 2), (gauss, 3), (gauss, 5), (cubic, 23)):
        vec = _exponents(K.ideal(p))
        assert vec == {(p, P.position): P.e for P in K.factor_prime(p)}


def test_ideal_norm_multiplicative(gauss):
    rng = random.Random(59)
    for _ in range(10):
        a = _random_element(gauss, rng)
        b = _random_element(gauss, rng)
        if a.is_zero() or b.is_zero():
            continue
        A, B = gauss.ideal(a), gauss.ideal(b)
        assert (A * B).norm() == A.norm() * B.norm()
        assert A.norm() == abs(a.norm())


def test_fractional_ideal_norm(gauss):
    I = gauss.ideal(Fraction(1, 5))
    assert I.norm() == Fraction(1, 25)
    assert not I.is_integral()


def test_subset_and_radical(gauss):
    P1, P2 = (P.as_ideal() for P in gauss.factor_prime(5))
    assert (P1 ** 2).subset(P1)
    assert not P1.subset(P1 ** 2)
    I = P1 * P2 ** 3 * gauss.ideal(2)
    assert I.rational_radical() == [2, 5]


def test_zero_ideal(gauss):
    Z = gauss.ideal(0)
    assert Z.is_zero()
    with pytest.raises(DomainError):
        Z.factorization()


# ---------------------------------------------------------------------------
# factorization correctness against norms and valuations


def test_factorization_matches_valuations(gauss, cubic):
    rng = random.Random(67)
    for K in (gauss, cubic):
        for _ in range(10):
            a = _random_element(K, rng)
            if a.is_zero():
                continue
            I = K.ideal(a)
            for P, e in I.factorization():
                assert residues.p_valuation(a, P) == e
            # the norm of the factorization equals the element norm
            assert I.norm() == abs(a.norm())


def test_unfactorable_ideal_norm_with_hints(gauss):
    p = 1000000000039  # 3 mod 4: inert in the Gaussian field
    q = 7000000000000037  # 1 mod 4: split
    I = gauss.ideal(p * q)
    with pytest.raises(UnfactorableError):
        I.factorization()
    fac = I.factorization(hints=[p, q])
    assert sorted((P.p, P.f, e) for P, e in fac) == \
        [(p, 2, 1), (q, 1, 1), (q, 1, 1)]


# ---------------------------------------------------------------------------
# two-element representations


def test_two_element_prime(gauss):
    for p in (2, 3, 5):
        for P in gauss.factor_prime(p):
            N, beta = P.as_ideal().two_element()
            assert N == p
            for Q in gauss.factor_prime(p):
                want = 1 if Q is P else 0
                got = min(residues.p_valuation(gauss.element(N), Q),
                          residues.p_valuation(beta, Q))
                assert got == want


def test_two_element_composite(gauss):
    P1, P2 = gauss.factor_prime(5)
    I = P1.as_ideal() ** 2 * P2.as_ideal()
    N, beta = I.two_element(mutate=True)
    assert N == 25
    assert min(residues.p_valuation(gauss.element(N), P1),
               residues.p_valuation(beta, P1)) == 2
    assert min(residues.p_valuation(gauss.element(N), P2),
               residues.p_valuation(beta, P2)) == 1
    assert I.integer_generator == N and I.generator == beta


def test_two_element_rejects_fractional(gauss):
    P1, _ = gauss.factor_prime(5)
    with pytest.raises(DomainError):
        (P1.as_ideal() ** -1).two_element()


def test_arithmetic_on_two_element_output(gauss):
    # recover the factorization from the pair alone
    P1, P2 = gauss.factor_prime(5)
    I = P1.as_ideal() ** 2 * P2.as_ideal()
    N, beta = I.two_element()
    J = gauss.ideal([gauss.element(N), beta])
    assert _exponents(J) == _exponents(I)
