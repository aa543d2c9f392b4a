"""Number fields, their elements, and fractional-ideal arithmetic.

A :class:`NumberField` is Q(w) for a root w of a monic integral polynomial;
elements are stored as integer polynomials in w over a positive integer
denominator.  Ideals are handles that carry generators and/or a signed
factorization over prime-ideal handles; products and quotients work purely
on the factorizations, only ``factorization()`` triggers the gcd-of-norms
computation.  The prime-ideal data comes straight from the decomposition
engine and feeds the valuation machinery in :mod:`primeideals.residues`.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction

from . import montes, zx
from .ff import DomainError


class UnfactorableError(RuntimeError):
    """An integer beyond the factoring budget blocks the computation.

    ``composite`` holds the residual composite; callers may factor it
    externally and pass the result back as a hint.
    """

    def __init__(self, composite, message=None):
        self.composite = composite
        super().__init__(message or
                         "unfactorable norm: cannot factor composite %d "
                         "within budget; supply its factorization as a hint"
                         % composite)


_FACTOR_TRIAL_LIMIT = 10 ** 6
_FACTOR_FULL_LIMIT = 10 ** 18


def factor_integer(n, hints=None):
    """Factor |n| into primes, [(p, e)] sorted by p.

    ``hints`` is an iterable of known prime divisors (from --factor-hint).
    Raises :class:`UnfactorableError` when a composite cofactor survives
    trial division, Pollard rho/p-1 and the hints.
    """
    import sympy

    n = abs(int(n))
    if n == 0:
        raise DomainError("cannot factor zero")
    out = {}
    for q in sorted(set(int(h) for h in hints or [])):
        if q < 2 or not sympy.isprime(q):
            raise DomainError("factor hint %d is not prime" % q)
        while n % q == 0:
            n //= q
            out[q] = out.get(q, 0) + 1
    if n > 1:
        partial = sympy.factorint(n, limit=_FACTOR_TRIAL_LIMIT,
                                  use_rho=False, use_pm1=False)
        for q, e in partial.items():
            q = int(q)
            if sympy.isprime(q):
                out[q] = out.get(q, 0) + e
            elif q < _FACTOR_FULL_LIMIT:
                # small enough that a full factorization is guaranteed cheap
                for q2, e2 in sympy.factorint(q).items():
                    out[int(q2)] = out.get(int(q2), 0) + int(e2) * e
            else:
                raise UnfactorableError(q)
    return sorted(out.items())


class FieldElement:
    """num(w)/den with num an integer polynomial of degree < deg K, den > 0."""

    __slots__ = ("parent", "num", "den")

    def __init__(self, parent, num, den=1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        num = zx.trim([int(c) for c in num])
        den = int(den)
        if den < 0:
            num, den = zx.scale(num, -1), -den
        if len(num) > parent.degree:
            num = zx.divmod_monic(num, parent.f)[1]
        g = math.gcd(zx.content(num), den)
        if g > 1:
            num = [c // g for c in num]
            den //= g
        self.parent = parent
        self.num = num
        self.den = den

    # -- constructors ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.parent is not self.parent:
                raise DomainError("elements of different number fields")
            return other
        return self.parent.element(other)

    # -- predicates --------------------------------------------------------

    def is_zero(self):
        return not self.num

    def is_rational(self):
        return len(self.num) <= 1

    def as_rational(self):
        if not self.is_rational():
            raise DomainError("element is not rational")
        return Fraction(self.num[0] if self.num else 0, self.den)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        num = zx.add(zx.scale(self.num, o.den), zx.scale(o.num, self.den))
        return FieldElement(self.parent, num, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.parent, zx.scale(self.num, -1), self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        return FieldElement(self.parent, zx.mul(self.num, o.num),
                            self.den * o.den)

    __rmul__ = __mul__

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            return self.inverse() ** (-n)
        out = self.parent.one
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def inverse(self):
        """Exact inverse in K via the extended Euclidean algorithm over Q."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        f = [Fraction(c) for c in self.parent.f]
        a = [Fraction(c, self.den) for c in self.num]
        # invariant: s * self ≡ r (mod f)
        r0, r1 = f, a
        s0, s1 = [], [Fraction(1)]
        while True:
            r1 = _qx_trim(r1)
            if len(r1) == 1:
                inv = 1 / r1[0]
                coeffs = [c * inv for c in _qx_trim(s1)]
                den = math.lcm(*(c.denominator for c in coeffs)) if coeffs else 1
                return FieldElement(self.parent,
                                    [int(c * den) for c in coeffs], den)
            q, r = _qx_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _qx_sub(s0, _qx_mul(q, s1))

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (DomainError, TypeError, ValueError):
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((tuple(self.num), self.den))

    def norm(self):
        """Field norm N(self) as an exact rational."""
        if self.is_zero():
            return Fraction(0)
        n = self.parent.degree
        res = zx.resultant(self.parent.f, self.num)
        return Fraction(res, self.den ** n)

    def __repr__(self):
        s = zx.render(self.num, "w")
        if self.den == 1:
            return s
        return "(%s)/%d" % (s, self.den)


def _qx_trim(a):
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def _qx_sub(a, b):
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return _qx_trim([x - y for x, y in zip(a, b)])


def _qx_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _qx_trim(out)


def _qx_divmod(a, b):
    b = _qx_trim(b)
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    inv = 1 / b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] * inv
        if c:
            q[i] = c
            for j, y in enumerate(b):
                a[i + j] -= c * y
    return q, _qx_trim(a)


class PrimeIdealHandle:
    """A prime ideal P over p, wrapping the terminal type from the engine."""

    def __init__(self, parent, prime_data):
        self.parent = parent
        self.data = prime_data
        self.p = prime_data.p
        self.e = prime_data.e
        self.f = prime_data.f
        self.position = prime_data.position
        self.type = prime_data.type
        self._frame = None      # filled by residues
        self._generator = None
        self._lock = threading.RLock()

    @property
    def phi_p(self):
        return self.data.phi_p

    @property
    def generator(self):
        """A uniformizer: v_self = 1 and valuation 0 at the sibling primes."""
        if self._generator is None:
            from . import residues
            with self._lock:
                if self._generator is None:
                    self._generator = residues.make_generator(self)
        return self._generator

    def norm(self):
        return self.p ** self.f

    def as_ideal(self):
        return IdealHandle(self.parent, factorization=[(self, 1)])

    def __repr__(self):
        return "P(%d,%d)" % (self.p, self.position)


class NumberField:
    """Q(w) for a root w of a monic integral polynomial, plus its caches."""

    def __init__(self, f):
        coeffs = []
        for c in f:
            c = Fraction(c)
            if c.denominator != 1:
                raise DomainError(
                    "defining polynomial must have integer coefficients")
            coeffs.append(int(c))
        f = zx.trim(coeffs)
        if zx.degree(f) < 1 or not zx.is_monic(f):
            raise DomainError("defining polynomial must be monic of degree >= 1")
        self.f = f
        self.degree = zx.degree(f)
        self.factorized_primes = []
        self.prime_ideals = {}
        self.local_index = {}
        self.p_integral_bases = {}
        self.integral_basis_cache = None
        self.discriminant_cache = None
        self._lock = threading.Lock()
        self.zero = FieldElement(self, [])
        self.one = FieldElement(self, [1])
        self.w = FieldElement(self, [0, 1])

    def element(self, value, den=1):
        """Coerce an int, Fraction, coefficient list or element into K."""
        if isinstance(value, FieldElement):
            if value.parent is not self:
                raise DomainError("element of a different number field")
            return value if den == 1 else FieldElement(self, value.num,
                                                       value.den * den)
        if isinstance(value, Fraction):
            return FieldElement(self, [value.numerator],
                                value.denominator * den)
        if isinstance(value, (list, tuple)):
            return FieldElement(self, list(value), den)
        return FieldElement(self, [int(value)], den)

    def factor_prime(self, p, verbosity=0, trace=None):
        """Decompose p in Z_K (cached)."""
        p = int(p)
        if p in self.prime_ideals:
            return self.prime_ideals[p]
        result = montes.montes_decompose(self.f, p, verbosity=verbosity,
                                         trace=trace)
        handles = [PrimeIdealHandle(self, P) for P in result.primes]
        with self._lock:
            if p not in self.prime_ideals:
                self.prime_ideals[p] = handles
                self.local_index[p] = result.local_index
                self.factorized_primes.append(p)
        return self.prime_ideals[p]

    def ideal(self, gens):
        return ideal_create(self, gens)

    def __repr__(self):
        return "NumberField(%s)" % zx.render(self.f)


class IdealHandle:
    """A fractional ideal: generators and/or a signed prime factorization."""

    def __init__(self, parent, generators=None, factorization=None):
        self.parent = parent
        self.generators = generators
        self._factorization = None
        self.factorization_string = None
        self.integer_generator = None
        self.generator = None
        if factorization is not None:
            self._set_factorization(factorization)

    def _set_factorization(self, fac):
        fac = sorted(((P, int(e)) for P, e in fac if e),
                     key=lambda t: (t[0].p, t[0].position))
        self._factorization = fac
        self.factorization_string = "*".join(
            "%r^%d" % (P, e) if e != 1 else repr(P) for P, e in fac) or "1"

    # -- state predicates --------------------------------------------------

    def is_zero(self):
        return self.generators is not None and \
            all(g.is_zero() for g in self.generators)

    def is_unit_ideal(self):
        return self.factorization() == []

    def is_integral(self):
        return all(e >= 0 for _, e in self.factorization())

    def is_prime(self):
        fac = self.factorization()
        return len(fac) == 1 and fac[0][1] == 1

    # -- factorization -----------------------------------------------------

    def factorization(self, hints=None):
        """The complete signed factorization [(PrimeIdealHandle, exponent)].

        Computed by the gcd-of-norms strategy: factor the gcd of the
        generator norms (denominators handled separately), decompose each
        prime of it, and take the min of the generator valuations at every
        prime ideal over those primes.
        """
        if self._factorization is not None:
            return self._factorization
        if self.is_zero():
            raise DomainError("the zero ideal has no factorization")
        from . import residues
        K = self.parent
        gens = [g for g in self.generators if not g.is_zero()]
        norm_gcd = 0
        den_lcm = 1
        for g in gens:
            nm = g.norm()
            norm_gcd = math.gcd(norm_gcd, nm.numerator)
            den_lcm = math.lcm(den_lcm, g.den)
        rational_primes = set(p for p, _ in factor_integer(norm_gcd, hints)) \
            if norm_gcd != 1 else set()
        if den_lcm != 1:
            rational_primes.update(p for p, _ in
                                   factor_integer(den_lcm, hints))
        fac = []
        for p in sorted(rational_primes):
            for P in K.factor_prime(p):
                v = min(residues.p_valuation(g, P) for g in gens)
                if v:
                    fac.append((P, v))
        self._set_factorization(fac)
        return self._factorization

    # -- arithmetic --------------------------------------------------------

    def _check_parent(self, other):
        if not isinstance(other, IdealHandle):
            other = ideal_create(self.parent, other)
        if other.parent is not self.parent:
            raise DomainError("ideals of different number fields")
        return other

    def __add__(self, other):
        """Ideal gcd: join the generator lists; combine cached factorizations
        by pointwise min when both are known."""
        other = self._check_parent(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        out = IdealHandle(self.parent)
        if self.generators is not None and other.generators is not None:
            out.generators = list(self.generators) + list(other.generators)
        if self._factorization is not None and \
                other._factorization is not None:
            out._set_factorization(_merge(self._factorization,
                                          other._factorization, min))
        if out.generators is None and out._factorization is None:
            out.generators = [g for I in (self, other)
                              for g in _gens_of(I)]
        return out

    def __mul__(self, other):
        other = self._check_parent(other)
        fac = _merge(self.factorization(), other.factorization(),
                     lambda a, b: a + b)
        return IdealHandle(self.parent, factorization=fac)

    def __truediv__(self, other):
        other = self._check_parent(other)
        if other.is_zero():
            raise DomainError("division by the zero ideal")
        fac = _merge(self.factorization(), other.factorization(),
                     lambda a, b: a - b)
        return IdealHandle(self.parent, factorization=fac)

    def __pow__(self, n):
        n = int(n)
        fac = [(P, e * n) for P, e in self.factorization()]
        return IdealHandle(self.parent, factorization=fac)

    def __eq__(self, other):
        if not isinstance(other, IdealHandle):
            return NotImplemented
        if self.parent is not other.parent:
            raise DomainError("ideals of different number fields")
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        return self.factorization() == other.factorization()

    def __hash__(self):
        return hash(tuple((P.p, P.position, e)
                          for P, e in self.factorization()))

    def subset(self, other):
        """Containment self ⊆ other: v_P(self) >= v_P(other) everywhere."""
        other = self._check_parent(other)
        mine = dict(((P.p, P.position), e) for P, e in self.factorization())
        for P, e in other.factorization():
            if mine.get((P.p, P.position), 0) < e:
                return False
        return True

    # -- invariants --------------------------------------------------------

    def norm(self):
        out = Fraction(1)
        for P, e in self.factorization():
            out *= Fraction(P.p) ** (P.f * e)
        return out

    def rational_radical(self):
        return sorted(set(P.p for P, _ in self.factorization()))

    def two_element(self, mutate=False):
        """(N, beta) generating the ideal: min(v_Q(N), v_Q(beta)) = v_Q(self)
        at every prime Q dividing N or in the support."""
        from . import residues
        N, beta = residues.two_element(self)
        if mutate:
            self.integer_generator = N
            self.generator = beta
        return N, beta

    def __repr__(self):
        if self._factorization is not None:
            return self.factorization_string
        return "Ideal(%s)" % ", ".join(repr(g) for g in self.generators)


def _gens_of(I):
    if I.generators is not None:
        return I.generators
    N, beta = I.two_element()
    return [I.parent.element(Fraction(N)), beta]


def _merge(fa, fb, op):
    da = {(P.p, P.position): (P, e) for P, e in fa}
    db = {(P.p, P.position): (P, e) for P, e in fb}
    out = []
    for k in sorted(set(da) | set(db)):
        P = (da.get(k) or db.get(k))[0]
        ea = da.get(k, (P, 0))[1]
        eb = db.get(k, (P, 0))[1]
        out.append((P, op(ea, eb)))
    return out


def ideal_create(K, gens):
    """Spec operation: an ideal of K from one generator or a sequence."""
    if isinstance(gens, (FieldElement, int, Fraction)):
        gens = [gens]
    gens = list(gens)
    if not gens:
        raise DomainError("an ideal needs at least one generator")
    return IdealHandle(K, generators=[K.element(g) for g in gens])
