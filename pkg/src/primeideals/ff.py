"""Finite fields: fast F_p[x], extension fields, and field towers.

Three layers:

* a fast dense polynomial layer over F_p (coefficient lists of ints in
  [0, p)), including complete factorization -- squarefree decomposition,
  distinct-degree splitting and Cantor-Zassenhaus equal-degree splitting.
  Multiplication reuses the Kronecker packing from :mod:`primeideals.zx`.
* :class:`FlatField` -- GF(p^d) presented as F_p[t]/(m) with a deterministic
  minimal-lex modulus m; elements are tuples of ints.  Generic polynomial
  arithmetic and factorization over any such field.
* :class:`FFTower` -- successive extensions F_p = F(0) < F(1) < ... where
  level i+1 is defined by a monic irreducible psi over level i with named
  generator z_i.  Every level is backed by a FlatField of the same
  cardinality; ``flatten``/``section`` realize the isomorphism both ways.

All random choices (equal-degree splitting, canonical roots) come from a
PRNG seeded by the input data, so results are reproducible.
"""

from __future__ import annotations

import math
import random

import gmpy2

from . import zx


class DomainError(ValueError):
    """Invalid input to a number-theoretic operation."""


# ---------------------------------------------------------------------------
# fast arithmetic in F_p[x]


def gf_trim(f):
    while f and not f[-1]:
        f.pop()
    return f


def gf_monic(f, p):
    lc = f[-1]
    if lc == 1:
        return list(f)
    inv = pow(lc, -1, p)
    return [c * inv % p for c in f]


def gf_divmod(f, g, p):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    lc = g[-1]
    if lc != 1:
        inv = pow(lc, -1, p)
        gm = [c * inv % p for c in g]
        q, r = zx.divmod_monic_mod(f, gm, p)
        q = [c * inv % p for c in q]
        gf_trim(q)
        return q, r
    return zx.divmod_monic_mod(f, g, p)


def gf_gcd(f, g, p):
    a = [c % p for c in f]
    b = [c % p for c in g]
    gf_trim(a)
    gf_trim(b)
    while b:
        a, b = b, gf_divmod(a, b, p)[1]
    return gf_monic(a, p) if a else []


class GFpMod:
    """Arithmetic in F_p[x]/(f) for monic f, with a cached Newton inverse."""

    def __init__(self, f, p):
        assert f and f[-1] == 1
        self.p = p
        self.f = list(f)
        self.n = len(f) - 1
        self._inv = None

    def _rev_inv(self):
        if self._inv is None:
            rev = list(reversed(self.f))
            self._inv = zx._series_inv(rev, max(self.n, 1), self.p)
        return self._inv

    def rem(self, t):
        n, p = self.n, self.p
        if len(t) <= n:
            return list(t)
        if n <= 16:
            return zx.divmod_monic_mod(t, self.f, p)[1]
        k = len(t) - n
        trev = list(reversed(t))
        qrev = zx.mul_mod(trev[:k], self._rev_inv()[:k], p)[:k]
        qrev += [0] * (k - len(qrev))
        q = list(reversed(qrev))
        r = zx.sub(t[:n], zx.mul_mod(q, self.f, p)[:n])
        return gf_trim([c % p for c in r])

    def mul(self, a, b):
        return self.rem(zx.mul_mod(a, b, self.p))

    def pow(self, a, e):
        out = [1]
        b = self.rem(a)
        while e:
            if e & 1:
                out = self.mul(out, b)
            e >>= 1
            if e:
                b = self.mul(b, b)
        return out

    def compose(self, g, h):
        """g(h) mod f.

        Horner for small g; otherwise Brent-Kung baby/giant steps, which
        needs only about 2*sqrt(deg g) modular multiplications plus cheap
        scalar combinations.
        """
        p = self.p
        g = gf_trim([c % p for c in g])
        if len(g) <= 48:
            out = []
            for c in reversed(g):
                out = self.mul(out, h)
                if c:
                    if out:
                        out[0] = (out[0] + c) % p
                    else:
                        out = [c]
                    out = gf_trim(out)
            return out
        b = math.isqrt(len(g) - 1) + 1
        hp = [[1], self.rem(h)]
        for _ in range(2, b + 1):
            hp.append(self.mul(hp[-1], hp[1]))
        hb = hp[b]
        out = []
        for j in reversed(range(0, len(g), b)):
            out = self.mul(out, hb)
            acc = list(out) + [0] * (self.n - len(out))
            for i, c in enumerate(g[j:j + b]):
                if c:
                    hpi = hp[i]
                    for idx in range(len(hpi)):
                        acc[idx] += c * hpi[idx]
            out = gf_trim([c % p for c in acc])
        return out

    def frobenius_apply(self, a, i):
        """a^(p^i) mod f, i.e. the i-th Frobenius applied to a."""
        return self.compose(a, self.frobenius_power(i))

    def pow_norm_half(self, a, d):
        """a^((p^d - 1)/2) mod f for odd p.

        Writes the exponent as ((p^d-1)/(p-1)) * ((p-1)/2); the first part
        is a Frobenius norm chain (log d compositions) instead of a p^d-th
        powering, which matters when p^d is astronomically large.
        """
        # t_k = a^(1 + p + ... + p^(k-1));  t_{j+k} = t_j * t_k^(p^j)
        t = {1: self.rem(a)}

        def norm(k):
            if k not in t:
                j = k >> 1
                lo, hi = norm(j), norm(k - j)
                t[k] = self.mul(lo, self.frobenius_apply(hi, j))
            return t[k]

        return self.pow(norm(d), (self.p - 1) // 2)

    def frobenius_power(self, i):
        """x^(p^i) mod f, via a binary ladder of modular compositions
        (x^(p^(a+b)) = u_a(u_b)); far cheaper than p^i-th powering when
        p is large.  Results are cached on the context."""
        if not hasattr(self, "_frob"):
            self._frob = {0: [0, 1]}
        cache = self._frob
        if i not in cache:
            if i == 1:
                cache[1] = self.pow([0, 1], self.p)
            elif i % 2 == 0:
                u = self.frobenius_power(i // 2)
                cache[i] = self.compose(u, u)
            else:
                cache[i] = self.compose(self.frobenius_power(i - 1),
                                        self.frobenius_power(1))
        return cache[i]


def _gf_pth_root(f, p):
    # f = g(x^p) over F_p  =>  g's coefficients are f's at multiples of p
    return [f[i] for i in range(0, len(f), p)]


def gf_squarefree(f, p):
    """[(g_i, m_i)] with f = lc * prod g_i^{m_i}, g_i monic squarefree coprime."""
    f = gf_monic(f, p)
    out = []
    df = gf_trim([(i * f[i]) % p for i in range(1, len(f))])
    c = gf_gcd(f, df, p) if df else list(f)
    w = gf_divmod(f, c, p)[0]
    i = 1
    while len(w) > 1:
        y = gf_gcd(w, c, p)
        fac = gf_divmod(w, y, p)[0]
        if len(fac) > 1:
            out.append((fac, i))
        w = y
        c = gf_divmod(c, y, p)[0]
        i += 1
    if len(c) > 1:
        for g, m in gf_squarefree(_gf_pth_root(c, p), p):
            out.append((g, m * p))
    return out


def _gf_ddf(f, p):
    """Distinct-degree splitting of monic squarefree f: [(product, degree)]."""
    out = []
    ctx = GFpMod(f, p)
    h = ctx.pow([0, 1], p)
    i = 1
    rem = list(f)
    hi = list(h)
    while len(rem) - 1 >= 2 * i:
        # hi = x^(p^i) mod f
        diff = zx.sub(hi, [0, 1])
        g = gf_gcd(rem, [c % p for c in diff], p)
        if len(g) > 1:
            out.append((g, i))
            rem = gf_divmod(rem, g, p)[0]
        i += 1
        if len(rem) == 1:
            break
        hi = ctx.pow(hi, p)
    if len(rem) > 1:
        out.append((rem, len(rem) - 1))
    return out


def _gf_edf(f, d, p, rng):
    """Split monic squarefree f (all factors of degree d) into irreducibles."""
    n = len(f) - 1
    if n == d:
        return [f]
    ctx = GFpMod(f, p)
    while True:
        r = [rng.randrange(p) for _ in range(n)]
        gf_trim(r)
        if len(r) <= 0:
            continue
        if p == 2:
            t = list(r)
            acc = list(r)
            for _ in range(d - 1):
                t = ctx.mul(t, t)
                acc = gf_trim([(a + b) % 2 for a, b in
                               zip(acc + [0] * len(t), t + [0] * len(acc))])
            g = gf_gcd(f, acc, p)
        else:
            if d * int(p).bit_length() > 4096:
                w = ctx.pow_norm_half(r, d)
            else:
                w = ctx.pow(r, (p ** d - 1) // 2)
            w = zx.sub(w, [1])
            g = gf_gcd(f, [c % p for c in w], p)
        if 0 < len(g) - 1 < n:
            other = gf_divmod(f, g, p)[0]
            return _gf_edf(g, d, p, rng) + _gf_edf(other, d, p, rng)


def _gf_factor_squarefree(g, p, rng):
    """Irreducible factors (each once) of monic squarefree g over F_p.

    Detects decimated polynomials g = h(x^k): then every irreducible factor
    lying over a degree-d factor of h has degree d*s for some s | k, so the
    distinct-degree stage only needs Frobenius powers at those few degrees,
    reached by modular composition instead of one p-th powering per degree.
    """
    out = []
    if not g[0]:
        out.append([0, 1])
        g = gf_trim(g[1:])
    if len(g) <= 1:
        return out
    k = 0
    for i in range(1, len(g)):
        if g[i]:
            k = math.gcd(k, i)
    if k >= 2 and k % p and len(g) > 40:
        h = [g[i] for i in range(0, len(g), k)]
        for H in _gf_factor_squarefree(h, p, rng):
            out.extend(_gf_factor_decimated(H, k, p, rng))
        return out
    for part, d in _gf_ddf(g, p):
        out.extend(_gf_edf(part, d, p, rng))
    return out


def _gf_factor_decimated(H, k, p, rng):
    """Irreducible factors of H(x^k) for H monic irreducible, H(0) != 0, p ∤ k."""
    d = len(H) - 1
    F = [0] * (d * k + 1)
    for i, c in enumerate(H):
        F[i * k] = c
    if len(F) <= 40:
        out = []
        for part, dd in _gf_ddf(F, p):
            out.extend(_gf_edf(part, dd, p, rng))
        return out
    # A root b of a factor generates a field containing F_p(b^k) = F_{p^d},
    # so every factor degree is a multiple of d.  Scan i = d, 2d, ... with
    # x^(p^(i+d)) obtained from x^(p^i) by one modular composition with
    # x^(p^d); this replaces d consecutive p-th powerings per step.
    ctx = GFpMod(F, p)
    ud = ctx.frobenius_power(d)
    cur = ud
    rem = F
    out = []
    i = d
    while 2 * i <= len(rem) - 1:
        g = gf_gcd(rem, zx.sub(cur, [0, 1]), p)
        if len(g) > 1:
            out.extend(_gf_edf(g, i, p, rng))
            rem = gf_divmod(rem, g, p)[0]
            if len(rem) == 1:
                break
            if 2 * (len(rem) - 1) < ctx.n:
                # rem | F, so everything stays valid after reducing mod rem
                ctx = GFpMod(gf_monic(rem, p), p)
                ud = gf_divmod(ud, rem, p)[1]
                cur = gf_divmod(cur, rem, p)[1]
        i += d
        if 2 * i <= len(rem) - 1:
            cur = ctx.compose(cur, ud)
    if len(rem) > 1:
        out.append(gf_monic(rem, p))
    return out


def factor_mod_p(f, p):
    """Factor f mod p into monic irreducibles.

    Returns a list of ``(factor, multiplicity)`` pairs, factors as coefficient
    lists over F_p, sorted lexicographically on (degree, coefficient vector).
    """
    if not f:
        raise DomainError("cannot factor the zero polynomial")
    if p < 2 or not gmpy2.is_prime(p):
        raise DomainError("modulus %d is not prime" % p)
    fb = [c % p for c in f]
    gf_trim(fb)
    if not fb:
        raise DomainError("polynomial vanishes mod %d" % p)
    if len(fb) == 1:
        return []
    rng = random.Random("factor_mod_p:%d:%s" % (p, fb))
    out = []
    for g, m in gf_squarefree(fb, p):
        for irr in _gf_factor_squarefree(g, p, rng):
            out.append((irr, m))
    out.sort(key=lambda t: (len(t[0]), t[0]))
    return out


def gf_is_irreducible(f, p):
    if len(f) - 1 < 1:
        return False
    if len(f) - 1 == 1:
        return True
    fm = gf_monic([c % p for c in f], p)
    ctx = GFpMod(fm, p)
    n = len(fm) - 1
    h = ctx.frobenius_power(n)
    if gf_trim([c % p for c in zx.sub(h, [0, 1])]):
        return False
    for ell in sorted({q for q, _ in _factor_small(n)}):
        h = ctx.frobenius_power(n // ell)
        g = gf_gcd(fm, [c % p for c in zx.sub(h, [0, 1])], p)
        if len(g) > 1:
            return False
    return True


def _factor_small(n):
    out = []
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        if e:
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def min_lex_irreducible(p, d):
    """The first monic irreducible of degree d over F_p in base-p counting order."""
    if d == 1:
        return [0, 1]
    k = 0
    while True:
        coeffs = []
        t = k
        for _ in range(d):
            coeffs.append(t % p)
            t //= p
        f = coeffs + [1]
        if f[0] != 0 and gf_is_irreducible(f, p):
            return f
        k += 1


# ---------------------------------------------------------------------------
# flat extension fields GF(p^d)


class FlatField:
    """GF(p^d) as F_p[t]/(modulus); elements are tuples of ints in [0, p)."""

    def __init__(self, p, modulus):
        self.p = p
        self.modulus = list(modulus)
        self.d = len(modulus) - 1
        self.q = p ** self.d
        self.zero = (0,) * self.d
        self.one = tuple([1] + [0] * (self.d - 1))
        self.gen = tuple([0, 1] + [0] * (self.d - 2)) if self.d >= 2 else (0,)
        self._ctx = GFpMod(self.modulus, p)

    @classmethod
    def of_degree(cls, p, d, _cache={}):
        key = (p, d)
        if key not in _cache:
            _cache[key] = cls(p, min_lex_irreducible(p, d))
        return _cache[key]

    def __repr__(self):
        return "GF(%d^%d)" % (self.p, self.d)

    def __eq__(self, other):
        return (isinstance(other, FlatField)
                and (self.p, self.modulus) == (other.p, other.modulus))

    def __hash__(self):
        return hash((self.p, tuple(self.modulus)))

    def elt(self, coeffs):
        c = list(coeffs)[: self.d]
        c += [0] * (self.d - len(c))
        return tuple(x % self.p for x in c)

    def from_int(self, n):
        return self.elt([n % self.p])

    def is_zero(self, a):
        return not any(a)

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def mul(self, a, b):
        if self.d == 1:
            return ((a[0] * b[0]) % self.p,)
        t = self._ctx.mul(gf_trim(list(a)), gf_trim(list(b)))
        return self.elt(t)

    def pow(self, a, e):
        if e < 0:
            return self.pow(self.inv(a), -e)
        out = self.one
        b = a
        while e:
            if e & 1:
                out = self.mul(out, b)
            e >>= 1
            if e:
                b = self.mul(b, b)
        return out

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero in %r" % self)
        if self.d == 1:
            return (pow(a[0], -1, self.p),)
        # extended Euclid in F_p[t]
        p = self.p
        r0, r1 = self.modulus, gf_trim(list(a))
        s0, s1 = [], [1]
        while r1:
            q, r = gf_divmod(r0, r1, p)
            r0, r1 = r1, r
            s0, s1 = s1, gf_trim([c % p for c in zx.sub(s0, zx.mul_mod(q, s1, p))])
        lc = pow(r0[-1], -1, p)
        return self.elt([c * lc % p for c in s0])

    def random(self, rng):
        return tuple(rng.randrange(self.p) for _ in range(self.d))

    def frobenius_inv(self, a):
        """p-th root (inverse Frobenius)."""
        return self.pow(a, self.p ** (self.d - 1)) if self.d > 1 else a


# ---------------------------------------------------------------------------
# generic polynomials over a FlatField  (lists of field elements, ascending)


def fq_trim(F, f):
    while f and F.is_zero(f[-1]):
        f.pop()
    return f


def fq_add(F, f, g):
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = F.add(out[i], c)
    return fq_trim(F, out)


def fq_sub(F, f, g):
    out = list(f)
    out += [F.zero] * (len(g) - len(out))
    for i, c in enumerate(g):
        out[i] = F.sub(out[i], c)
    return fq_trim(F, out)


def fq_smul(F, f, a):
    if F.is_zero(a):
        return []
    return [F.mul(c, a) for c in f]


def fq_mul(F, f, g):
    if not f or not g:
        return []
    out = [F.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if F.is_zero(a):
            continue
        for j, b in enumerate(g):
            out[i + j] = F.add(out[i + j], F.mul(a, b))
    return fq_trim(F, out)


def fq_divmod(F, f, g):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    inv = F.inv(g[-1])
    r = list(f)
    dg = len(g) - 1
    q = [F.zero] * max(0, len(r) - dg)
    for i in range(len(r) - 1, dg - 1, -1):
        c = F.mul(r[i], inv)
        if F.is_zero(c):
            continue
        q[i - dg] = c
        for j in range(dg + 1):
            r[i - dg + j] = F.sub(r[i - dg + j], F.mul(c, g[j]))
    return fq_trim(F, q), fq_trim(F, r[:dg])


def fq_monic(F, f):
    if not f or f[-1] == F.one:
        return list(f)
    return fq_smul(F, f, F.inv(f[-1]))


def fq_gcd(F, f, g):
    a, b = list(f), list(g)
    while b:
        a, b = b, fq_divmod(F, a, b)[1]
    return fq_monic(F, a)


def fq_powmod(F, f, e, mod):
    out = [F.one]
    b = fq_divmod(F, f, mod)[1]
    while e:
        if e & 1:
            out = fq_divmod(F, fq_mul(F, out, b), mod)[1]
        e >>= 1
        if e:
            b = fq_divmod(F, fq_mul(F, b, b), mod)[1]
    return out


def fq_eval(F, f, a):
    out = F.zero
    for c in reversed(f):
        out = F.add(F.mul(out, a), c)
    return out


def _fq_derivative(F, f):
    out = []
    for i in range(1, len(f)):
        out.append(F.mul(f[i], F.from_int(i)))
    return fq_trim(F, out)


def _fq_pth_root(F, f):
    p = F.p
    return [F.frobenius_inv(f[i]) for i in range(0, len(f), p)]


def fq_squarefree(F, f):
    f = fq_monic(F, f)
    out = []
    df = _fq_derivative(F, f)
    c = fq_gcd(F, f, df) if df else list(f)
    w = fq_divmod(F, f, c)[0]
    i = 1
    while len(w) > 1:
        y = fq_gcd(F, w, c)
        fac = fq_divmod(F, w, y)[0]
        if len(fac) > 1:
            out.append((fac, i))
        w = y
        c = fq_divmod(F, c, y)[0]
        i += 1
    if len(c) > 1:
        for g, m in fq_squarefree(F, _fq_pth_root(F, c)):
            out.append((g, m * F.p))
    return out


def _fq_edf(F, f, d, rng):
    n = len(f) - 1
    if n == d:
        return [f]
    xpoly = [F.zero, F.one]
    while True:
        r = [F.random(rng) for _ in range(n)]
        fq_trim(F, r)
        if not r:
            continue
        if F.p == 2:
            k = F.d * d
            t = list(r)
            acc = list(r)
            for _ in range(k - 1):
                t = fq_divmod(F, fq_mul(F, t, t), f)[1]
                acc = fq_add(F, acc, t)
            g = fq_gcd(F, f, acc)
        else:
            w = fq_powmod(F, r, (F.q ** d - 1) // 2, f)
            w = fq_sub(F, w, [F.one])
            g = fq_gcd(F, f, w)
        if 0 < len(g) - 1 < n:
            other = fq_divmod(F, f, g)[0]
            return _fq_edf(F, g, d, rng) + _fq_edf(F, other, d, rng)


def fq_factor(F, f):
    """Factor a nonconstant polynomial over F into monic irreducibles.

    Returns [(factor, multiplicity)], deterministically sorted.
    """
    if not f:
        raise DomainError("cannot factor the zero polynomial")
    if len(f) == 1:
        return []
    rng = random.Random("fq_factor:%d:%d:%s" % (F.p, F.d, f))
    out = []
    for g, m in fq_squarefree(F, f):
        # distinct-degree
        ctx_mod = list(g)
        h = fq_powmod(F, [F.zero, F.one], F.q, ctx_mod)
        hi = list(h)
        rem = list(g)
        i = 1
        while len(rem) - 1 >= 2 * i:
            diff = fq_sub(F, hi, [F.zero, F.one])
            gg = fq_gcd(F, rem, diff)
            if len(gg) > 1:
                for irr in _fq_edf(F, gg, i, rng):
                    out.append((irr, m))
                rem = fq_divmod(F, rem, gg)[0]
            i += 1
            if len(rem) == 1:
                break
            hi = fq_powmod(F, hi, F.q, ctx_mod)
        if len(rem) > 1:
            out.append((rem, m))
    out.sort(key=lambda t: (len(t[0]), t[0]))
    return out


def fq_roots(F, f):
    """Roots in F of a nonzero polynomial over F, sorted."""
    roots = []
    for g, _ in fq_factor(F, f):
        if len(g) == 2:
            roots.append(F.neg(g[0]))
    return sorted(roots)


def fq_is_irreducible(F, f):
    if len(f) - 1 < 1:
        return False
    fac = fq_factor(F, f)
    return len(fac) == 1 and fac[0][1] == 1 and len(fac[0][0]) == len(f)


# ---------------------------------------------------------------------------
# towers


class TowerLevel:
    """One step F(i) < F(i+1) of a tower, backed by an absolute FlatField."""

    def __init__(self, tower, index, field, prev=None, psi=None):
        self.tower = tower
        self.index = index
        self.field = field
        self.prev = prev
        self.psi = psi  # list of prev.field elements, monic irreducible
        self._z = None  # canonical root of psi in self.field
        self._embed_gen = None  # image of prev.field.gen in self.field
        self._section = None

    @property
    def degree_over_prev(self):
        return len(self.psi) - 1 if self.psi else 1

    @property
    def z(self):
        self._setup()
        return self._z

    def _setup(self):
        if self._z is not None or self.prev is None:
            return
        F, E = self.prev.field, self.field
        # embed F into E: canonical root of F.modulus
        if F.d == 1:
            self._embed_gen = E.zero
        elif F.modulus == E.modulus:
            self._embed_gen = E.gen  # same representation: identity embedding
        else:
            mod_in_E = [E.from_int(c) for c in F.modulus]
            self._embed_gen = fq_roots(E, mod_in_E)[0]
        psi_in_E = [self.embed(c) for c in self.psi]
        if len(psi_in_E) == 2:
            self._z = E.neg(E.mul(psi_in_E[0], E.inv(psi_in_E[1])))
        elif F.d == 1 and all(c == E.from_int(c[0]) for c in psi_in_E) and \
                [c[0] for c in psi_in_E] == E.modulus:
            self._z = E.gen  # the field was built with psi as its modulus
        else:
            self._z = fq_roots(E, psi_in_E)[0]

    def embed(self, a):
        """Map an element of the previous level's flat field into this one."""
        if self._embed_gen is None:
            self._setup()
        E = self.field
        out = E.zero
        g = self._embed_gen
        for c in reversed(a):
            out = E.add(E.mul(out, g), E.from_int(c))
        return out

    def _section_matrix(self):
        if self._section is None:
            self._setup()
            F, E, p = self.prev.field, self.field, self.field.p
            e = self.degree_over_prev
            cols = []
            zpow = E.one
            for j in range(e):
                tpow = E.one
                for k in range(F.d):
                    cols.append(E.mul(zpow, tpow))
                    if k + 1 < F.d:
                        tpow = E.mul(tpow, self._embed_gen)
                zpow = E.mul(zpow, self.z)
            # solve: invert the matrix whose columns are `cols` over F_p
            n = E.d
            mat = [[cols[j][i] for j in range(n)] + [1 if i == k else 0 for k in range(n)]
                   for i in range(n)]
            for col in range(n):
                piv = next(r for r in range(col, n) if mat[r][col] % p)
                mat[col], mat[piv] = mat[piv], mat[col]
                inv = pow(mat[col][col], -1, p)
                mat[col] = [x * inv % p for x in mat[col]]
                for r in range(n):
                    if r != col and mat[r][col]:
                        c = mat[r][col]
                        mat[r] = [(x - c * y) % p for x, y in zip(mat[r], mat[col])]
            self._section = [row[n:] for row in mat]
        return self._section

    def decompose(self, a):
        """Coordinates of ``a`` over the previous level: [c_0..c_{e-1}],
        prev-field elements with a = sum embed(c_j) * z^j."""
        self._setup()
        F = self.prev.field
        inv = self._section_matrix()
        p = self.field.p
        coords = [sum(inv[i][k] * a[k] for k in range(len(a))) % p
                  for i in range(len(inv))]
        e = self.degree_over_prev
        out = []
        for j in range(e):
            out.append(F.elt(coords[j * F.d:(j + 1) * F.d]))
        return out

    def compose(self, coeffs):
        """Inverse of :meth:`decompose`."""
        self._setup()
        E = self.field
        out = E.zero
        for c in reversed(coeffs):
            out = E.add(E.mul(out, self.z), self.embed(c))
        return out


class FFTower:
    """A tower of finite-field extensions over F_p with generators z0, z1, ..."""

    def __init__(self, p):
        if p < 2 or not gmpy2.is_prime(p):
            raise DomainError("characteristic %d is not prime" % p)
        self.p = p
        base = TowerLevel(self, 0, FlatField.of_degree(p, 1))
        self.levels = [base]

    def top(self):
        return self.levels[-1]

    def extend(self, psi):
        """Extend the tower by a monic irreducible psi over the current top level.

        ``psi`` is a list of top-level flat elements.  Returns the new level.
        """
        topF = self.top().field
        if not psi or psi[-1] != topF.one:
            raise DomainError("defining polynomial must be monic")
        if len(psi) - 1 >= 2 and not fq_is_irreducible(topF, list(psi)):
            raise DomainError("defining polynomial must be irreducible")
        d = topF.d * (len(psi) - 1)
        level = TowerLevel(self, len(self.levels), FlatField.of_degree(self.p, d),
                           prev=self.top(), psi=list(psi))
        self.levels.append(level)
        return level

    def cardinality(self, i=None):
        lvl = self.levels[-1 if i is None else i]
        return lvl.field.q


class TowerElement:
    """An element of a tower level, as a coordinate vector over the level below."""

    def __init__(self, tower, level, flat):
        self.tower = tower
        self.level = level
        self.flat = flat  # element of tower.levels[level].field

    def _lift(self, other):
        if isinstance(other, TowerElement):
            if other.tower is not self.tower or other.level != self.level:
                raise DomainError("elements live at different tower levels")
            return other.flat
        return self.tower.levels[self.level].field.from_int(int(other))

    def _make(self, flat):
        return TowerElement(self.tower, self.level, flat)

    def __add__(self, other):
        return self._make(self.tower.levels[self.level].field.add(self.flat, self._lift(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return self._make(self.tower.levels[self.level].field.sub(self.flat, self._lift(other)))

    def __mul__(self, other):
        return self._make(self.tower.levels[self.level].field.mul(self.flat, self._lift(other)))

    __rmul__ = __mul__

    def __pow__(self, e):
        return self._make(self.tower.levels[self.level].field.pow(self.flat, e))

    def inverse(self):
        return self._make(self.tower.levels[self.level].field.inv(self.flat))

    def __eq__(self, other):
        try:
            return self.flat == self._lift(other)
        except DomainError:
            return NotImplemented

    def __hash__(self):
        return hash((self.level, self.flat))

    def coordinates(self):
        """Coordinate vector over the previous level (prime-field ints at level 0)."""
        lvl = self.tower.levels[self.level]
        if lvl.prev is None:
            return [self.flat[0]]
        return lvl.decompose(self.flat)

    def __repr__(self):
        return render_tower_element(self.tower.levels, self.level, self.flat)


def tower_extend(tower, psi):
    """Spec operation: extend a tower level by a monic irreducible psi."""
    return tower.extend(psi)


def tower_flatten(x):
    """Flat single-extension image of a TowerElement, plus the inverse section."""
    lvl = x.tower.levels[x.level]
    return x.flat, (lambda flat: TowerElement(x.tower, x.level, flat))


def render_tower_element(levels, level, flat):
    """Print a tower element in generator form, e.g. "2*z1^7 + 2*z1^6 + 1"."""
    lvl = levels[level]
    if lvl.prev is None:
        return str(flat[0])
    gen = "z%d" % (level - 1)
    coords = lvl.decompose(flat)
    parts = []
    for j in range(len(coords) - 1, -1, -1):
        c = coords[j]
        if not any(c):
            continue
        inner = render_tower_element(levels, level - 1, c)
        if j == 0:
            parts.append(inner)
            continue
        zj = gen if j == 1 else "%s^%d" % (gen, j)
        if inner == "1":
            parts.append(zj)
        elif ("+" in inner or "-" in inner or "*" in inner) and level - 1 >= 1:
            parts.append("(%s)*%s" % (inner, zj))
        else:
            parts.append("%s*%s" % (inner, zj))
    return " + ".join(parts) if parts else "0"
