"""Valuations, residue fields, reduction/lifting, separators, and CRT."""

import math
import random
from fractions import Fraction

import pytest

from primeideals import ff, residues, zx
from primeideals.ff import DomainError
from primeideals.ideals import NumberField

INF = residues.INFINITY


# ---------------------------------------------------------------------------
# fixtures: small fields with varied splitting behaviour


@pytest.fixture(scope="module")
def gauss():
    """x^2 + 1: ramified at 2, inert at 3, split at 5."""
    return NumberField([1, 0, 1])


@pytest.fixture(scope="module")
def cubic():
    """x^3 - x - 1 (discriminant -23)."""
    return NumberField([-1, -1, 0, 1])


@pytest.fixture(scope="module")
def wild():
    """x^4 + 2x + 2, Eisenstein at 2 (totally ramified)."""
    return NumberField([2, 2, 0, 0, 1])


def _random_element(K, rng, size=9):
    n = len(K.f) - 1
    num = [rng.randint(-size, size) for _ in range(rng.randint(1, n))]
    if not any(num):
        num[0] = 1
    return K.element(num)


def _fixture_primes(gauss, cubic, wild):
    out = []
    for K, ps in ((gauss, (2, 3, 5)), (cubic, (2, 3, 5, 23)), (wild, (2, 3))):
        for p in ps:
            out.extend(K.factor_prime(p))
    return out


# ---------------------------------------------------------------------------
# valuation axioms


def test_valuation_of_zero_and_one(gauss):
    P = gauss.factor_prime(5)[0]
    assert residues.p_valuation(gauss.zero, P) == INF
    assert residues.p_valuation(gauss.one, P) == 0
    assert residues.p_valuation(0, P) == INF
    assert residues.p_valuation(Fraction(1), P) == 0


def test_valuation_of_p_is_ramification_index(gauss, cubic, wild):
    for P in _fixture_primes(gauss, cubic, wild):
        assert residues.p_valuation(P.parent.element(P.p), P) == P.e
        assert residues.p_valuation(Fraction(P.p), P) == P.e


def test_valuation_rational_consistency(gauss):
    P2, P3 = gauss.factor_prime(2)[0], gauss.factor_prime(3)[0]
    assert residues.p_valuation(Fraction(8, 3), P2) == 3 * P2.e
    assert residues.p_valuation(Fraction(8, 3), P3) == -P3.e
    assert residues.p_valuation(gauss.element(Fraction(8, 3)), P2) == 3 * P2.e


def test_valuation_axioms_random_pairs(gauss, cubic, wild):
    rng = random.Random(71)
    primes = _fixture_primes(gauss, cubic, wild)
    for _ in range(60):
        P = rng.choice(primes)
        K = P.parent
        a = _random_element(K, rng)
        b = _random_element(K, rng)
        va = residues.p_valuation(a, P)
        vb = residues.p_valuation(b, P)
        assert residues.p_valuation(a * b, P) == va + vb
        s = a + b
        vs = residues.p_valuation(s, P)
        assert vs >= min(va, vb)
        if va != vb:
            assert vs == min(va, vb)


def test_valuation_of_inverse(gauss):
    rng = random.Random(5)
    P = gauss.factor_prime(5)[0]
    for _ in range(20):
        a = _random_element(gauss, rng)
        v = residues.p_valuation(a, P)
        assert residues.p_valuation(a.inverse(), P) == -v


def test_sum_ef_equals_degree(gauss, cubic, wild):
    for K, ps in ((gauss, (2, 3, 5)), (cubic, (2, 3, 5, 23)),
                  (wild, (2, 3))):
        n = len(K.f) - 1
        for p in ps:
            assert sum(P.e * P.f for P in K.factor_prime(p)) == n


# ---------------------------------------------------------------------------
# residue fields, reduction, lifting


def test_residue_field_cardinality(gauss, cubic, wild):
    for P in _fixture_primes(gauss, cubic, wild):
        tower = residues.residue_field(P)
        assert tower.levels[-1].field.d == P.f
        assert tower.p == P.p


def test_reduce_requires_integrality(gauss):
    P = gauss.factor_prime(2)[0]
    half = gauss.element([1], 2)
    with pytest.raises(DomainError):
        residues.reduce_mod(half, P)


def test_reduce_positive_valuation_is_zero(gauss):
    P = gauss.factor_prime(2)[0]
    w = gauss.w
    assert residues.p_valuation(w + 1, P) > 0
    z = residues.reduce_mod(w + 1, P)
    F = residues.residue_field(P).levels[-1].field
    assert F.is_zero(z.flat)


def test_reduce_allows_foreign_denominator(gauss):
    # reduction is at the localization: denominators prime to p are units
    P5a = gauss.factor_prime(5)[0]
    a = gauss.element([1, 3], 7)  # (1 + 3w)/7, integral at every prime over 5
    z = residues.reduce_mod(a, P5a)
    b = residues.lift(z, P5a)
    assert residues.p_valuation(a - b, P5a) > 0


def test_reduce_lift_roundtrip(gauss, cubic, wild):
    rng = random.Random(9)
    for P in _fixture_primes(gauss, cubic, wild):
        F = residues.residue_field(P).levels[-1].field
        for _ in range(8):
            flat = F.elt([rng.randrange(P.p) for _ in range(F.d)])
            z = residues._residue_element(P, flat)
            a = residues.lift(z, P)
            # the lift is integral at every prime over p
            for Q in P.parent.prime_ideals[P.p]:
                assert residues.p_valuation(a, Q) >= 0
            back = residues.reduce_mod(a, P)
            assert back.flat == flat


def test_reduce_is_ring_morphism(gauss, cubic, wild):
    rng = random.Random(13)
    primes = _fixture_primes(gauss, cubic, wild)
    for _ in range(60):
        P = rng.choice(primes)
        K = P.parent
        a = _random_element(K, rng)
        b = _random_element(K, rng)
        ra = residues.reduce_mod(a, P)
        rb = residues.reduce_mod(b, P)
        assert residues.reduce_mod(a + b, P) == ra + rb
        assert residues.reduce_mod(a * b, P) == ra * rb


def test_reduce_of_integers_matches_mod_p(gauss):
    P = gauss.factor_prime(3)[0]  # inert, residue field F_9
    for n in range(-5, 6):
        z = residues.reduce_mod(gauss.element(n), P)
        w = residues.reduce_mod(gauss.element(n % 3), P)
        assert z == w


# ---------------------------------------------------------------------------
# separators and uniformizers


def test_separator_contract(gauss, cubic):
    for K, p in ((gauss, 5), (cubic, 5), (cubic, 23)):
        primes = K.factor_prime(p)
        if len(primes) < 2:
            continue
        for P in primes:
            eps = residues.separator(P, 4)
            assert residues.p_valuation(eps - 1, P) >= 4
            for Q in primes:
                if Q is not P:
                    assert residues.p_valuation(eps, Q) >= 4


def test_separator_single_prime_is_one(wild):
    (P,) = wild.factor_prime(2)
    assert residues.separator(P, 10) == wild.one


def test_generator_contract(gauss, cubic, wild):
    for P in _fixture_primes(gauss, cubic, wild):
        g = P.generator
        assert residues.p_valuation(g, P) == 1
        for Q in P.parent.prime_ideals[P.p]:
            if Q is not P:
                assert residues.p_valuation(g, Q) == 0


# ---------------------------------------------------------------------------
# CRT


def test_crt_split_prime(gauss):
    P1, P2 = gauss.factor_prime(5)
    a = residues.crt([gauss.element(1), gauss.element(2)],
                     [P1.as_ideal() ** 2, P2.as_ideal() ** 3])
    assert residues.p_valuation(a - 1, P1) >= 2
    assert residues.p_valuation(a - 2, P2) >= 3


def test_crt_mixed_primes(cubic):
    primes5 = cubic.factor_prime(5)
    primes23 = cubic.factor_prime(23)
    ideals = [primes5[0].as_ideal(), primes23[0].as_ideal() ** 2]
    targets = [cubic.w, cubic.element(7)]
    a = residues.crt(targets, ideals)
    assert residues.p_valuation(a - cubic.w, primes5[0]) >= 1
    assert residues.p_valuation(a - 7, primes23[0]) >= 2


def test_crt_random_instances(gauss, cubic, wild):
    rng = random.Random(37)
    fields = [(gauss, (2, 3, 5)), (cubic, (2, 3, 5, 23)), (wild, (2, 3))]
    for _ in range(25):
        K, ps = rng.choice(fields)
        pool = [P for p in ps for P in K.factor_prime(p)]
        rng.shuffle(pool)
        chosen = pool[: rng.randint(1, min(4, len(pool)))]
        ideals = [P.as_ideal() ** rng.randint(1, 3) for P in chosen]
        targets = [_random_element(K, rng, size=4) for _ in chosen]
        # targets must be integral at the corresponding primes
        targets = [t if residues.p_valuation(t, P) >= 0 else K.one
                   for t, P in zip(targets, chosen)]
        a = residues.crt(targets, ideals)
        for t, I, P in zip(targets, ideals, chosen):
            bound = dict((Q.position, e) for Q, e in I.factorization())
            assert residues.p_valuation(a - t, P) >= bound[P.position]


def test_crt_rejects_repeated_primes(gauss):
    P1, P2 = gauss.factor_prime(5)
    with pytest.raises(DomainError):
        residues.crt([gauss.one, gauss.zero],
                     [P1.as_ideal(), P1.as_ideal() ** 2])


def test_crt_rejects_fractional_moduli(gauss):
    P1, P2 = gauss.factor_prime(5)
    with pytest.raises(DomainError):
        residues.crt([gauss.one], [P1.as_ideal() ** -1])


# ---------------------------------------------------------------------------
# Hensel lifting through the residue machinery


def test_hensel_square_root(gauss):
    """Newton iteration x <- (x + a/x)/2 in the completion at a split prime:
    the valuation of x^2 - a must strictly increase at every step."""
    K = gauss
    P = K.factor_prime(5)[0]
    a = K.element(-1)  # w^2 = -1, so -1 is a square at any prime over 5
    z = residues.reduce_mod(a, P)
    # square root in the residue field by brute force
    F = residues.residue_field(P).levels[-1].field
    root = None
    for c in range(P.p ** P.f):
        cand = F.from_int(c)
        if F.mul(cand, cand) == z.flat:
            root = cand
            break
    assert root is not None
    x = residues.lift(residues._residue_element(P, root), P)
    last = residues.p_valuation(x * x - a, P)
    assert last >= 1
    for _ in range(6):
        x = (x + a / x) / 2
        v = residues.p_valuation(x * x - a, P)
        assert v > last
        last = v
