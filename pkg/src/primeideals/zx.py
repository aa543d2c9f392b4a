"""Exact univariate polynomial arithmetic over the integers.

Polynomials are lists of Python ints in ascending degree order with no
trailing zeros (the zero polynomial is the empty list).  This module is the
arithmetic backbone of the whole package: everything above it (Newton
polygons, the decomposition engine, ideal arithmetic) works with these lists.

Two performance-critical primitives live here:

* ``mul`` / ``mul_mod`` -- Kronecker-substitution multiplication: the
  coefficient vector is packed into a single big integer (``gmpy2.pack``) so
  the product is one GMP multiplication.
* ``divmod_monic_mod`` -- division by a monic polynomial with coefficients
  truncated mod ``M`` via Newton iteration on the reversed series, used for
  phi-adic expansions of large polynomials.
"""

from __future__ import annotations

import ast
from fractions import Fraction

import gmpy2
from gmpy2 import mpz


# ---------------------------------------------------------------------------
# basic structure


def trim(c):
    """Remove trailing zeros in place and return the list."""
    while c and not c[-1]:
        c.pop()
    return c


def degree(f):
    """Degree of f, or -1 for the zero polynomial."""
    return len(f) - 1


def is_monic(f):
    return bool(f) and f[-1] == 1


def constant(c):
    return [c] if c else []


X = [0, 1]


def add(f, g):
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] += c
    return trim(out)


def neg(f):
    return [-c for c in f]


def sub(f, g):
    out = list(f)
    if len(out) < len(g):
        out += [0] * (len(g) - len(out))
    for i, c in enumerate(g):
        out[i] -= c
    return trim(out)


def scale(f, a):
    if not a:
        return []
    return [c * a for c in f]


def shift(f, k):
    """Multiply by x^k."""
    if not f:
        return []
    return [0] * k + list(f)


# ---------------------------------------------------------------------------
# multiplication

_SCHOOLBOOK_CUTOFF = 24


def _mul_schoolbook(f, g):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if not a:
            continue
        for j, b in enumerate(g):
            out[i + j] += a * b
    return trim(out)


def _kron_bits(f, g):
    mf = max(abs(c) for c in f)
    mg = max(abs(c) for c in g)
    n = min(len(f), len(g))
    return (mf * mg * n).bit_length() + 2


def _pack(f, bits):
    return gmpy2.pack([mpz(c) for c in f], bits)


def _unpack(v, bits, n):
    out = gmpy2.unpack(v, bits)
    out = [int(c) for c in out]
    del out[n:]
    return out


def _mul_kron(f, g):
    bits = _kron_bits(f, g)
    fp = [c if c > 0 else 0 for c in f]
    fn = [-c if c < 0 else 0 for c in f]
    gp = [c if c > 0 else 0 for c in g]
    gn = [-c if c < 0 else 0 for c in g]
    n = len(f) + len(g) - 1
    acc = [0] * n
    for a, sa in ((fp, 1), (fn, -1)):
        if not any(a):
            continue
        pa = _pack(a, bits)
        for b, sb in ((gp, 1), (gn, -1)):
            if not any(b):
                continue
            prod = _unpack(pa * _pack(b, bits), bits, n)
            s = sa * sb
            for i, c in enumerate(prod):
                acc[i] += s * c
    return trim(acc)


def mul(f, g):
    if not f or not g:
        return []
    if min(len(f), len(g)) <= _SCHOOLBOOK_CUTOFF:
        return _mul_schoolbook(f, g)
    return _mul_kron(f, g)


def _red_mod(coeffs, M):
    if M & (M - 1) == 0:
        mask = M - 1  # power of two: bitmask is much cheaper than division
        return [c & mask for c in coeffs]
    return [c % M for c in coeffs]


def mul_mod(f, g, M):
    """Product with coefficients reduced into [0, M)."""
    if not f or not g:
        return []
    f = _red_mod(f, M)
    g = _red_mod(g, M)
    trim(f)
    trim(g)
    if not f or not g:
        return []
    if min(len(f), len(g)) <= _SCHOOLBOOK_CUTOFF:
        return trim(_red_mod(_mul_schoolbook(f, g), M))
    bits = ((M - 1) * (M - 1) * min(len(f), len(g))).bit_length() + 1
    n = len(f) + len(g) - 1
    out = _unpack(_pack(f, bits) * _pack(g, bits), bits, n)
    return trim(_red_mod(out, M))


def pow_int(f, k):
    """f**k over Z by repeated squaring."""
    out = [1]
    b = list(f)
    while k:
        if k & 1:
            out = mul(out, b)
        k >>= 1
        if k:
            b = mul(b, b)
    return out


def pow_mod(f, k, M):
    out = [1]
    b = f
    while k:
        if k & 1:
            out = mul_mod(out, b, M)
        k >>= 1
        if k:
            b = mul_mod(b, b, M)
    return out


# ---------------------------------------------------------------------------
# division by monic polynomials


def divmod_monic(f, phi):
    """Exact (q, r) with f = q*phi + r, deg r < deg phi; phi monic."""
    if not is_monic(phi):
        raise ValueError("divisor must be monic")
    d = degree(phi)
    if d == 0:
        return list(f), []
    f = trim(list(f))
    n = degree(f)
    k = n - d + 1
    if k <= 0:
        return [], f
    hf = max(abs(c) for c in f)
    hp = max(abs(c) for c in phi)
    if k <= 24 or d <= 24 or \
            k * d * (hf.bit_length() + hp.bit_length()) <= 1 << 24:
        return _divmod_schoolbook(f, phi, d)
    # Newton division mod 2^B with symmetric lift, verified and retried
    # with doubled precision until the remainder degree drops below d
    B = hf.bit_length() + hp.bit_length() + 64
    frev = f[::-1]
    prev = phi[::-1]
    while True:
        M = 1 << B
        qrev = mul_mod(frev[:k], _series_inv(prev[:k], k, M), M)[:k]
        qrev += [0] * (k - len(qrev))
        half = M >> 1
        q = trim([c - M if c > half else c for c in reversed(qrev)])
        r = trim(sub(f, mul(q, phi)))
        if degree(r) < d:
            return q, r
        B *= 2


def _divmod_schoolbook(f, phi, d):
    r = list(f)
    q = [0] * max(0, len(r) - d)
    for i in range(len(r) - 1, d - 1, -1):
        c = r[i]
        if not c:
            continue
        q[i - d] = c
        r[i] = 0
        for j in range(d):
            r[i - d + j] -= c * phi[j]
    return trim(q), trim(r)


def _series_inv(a, k, M):
    """Inverse of a mod (x^k, M); requires a[0] invertible mod M."""
    inv0 = int(gmpy2.invert(a[0], M))
    g = [inv0]
    prec = 1
    while prec < k:
        prec = min(2 * prec, k)
        t = mul_mod(a[:prec], g, M)[:prec]
        # g <- g*(2 - a*g)
        t = [(-c) % M for c in t]
        t[0] = (t[0] + 2) % M
        g = mul_mod(g, t, M)[:prec]
    return trim([c % M for c in g])


def divmod_monic_mod(f, phi, M):
    """(q, r) with f = q*phi + r mod M; phi monic.  Newton division."""
    d = degree(phi)
    n = degree(f)
    if n < d:
        return [], [c % M for c in f]
    if d == 0:
        return [c % M for c in f], []
    k = n - d + 1
    if k <= 16 or d <= 16:
        q, r = divmod_monic([c % M for c in f], phi)
        return trim([c % M for c in q]), trim([c % M for c in r])
    frev = list(reversed(f))
    prev = list(reversed(phi))
    qrev = mul_mod(frev[:k], _series_inv(prev, k, M), M)[:k]
    qrev += [0] * (k - len(qrev))
    q = list(reversed(qrev))
    r = sub([c % M for c in f[: d]], mul_mod(q, phi, M)[:d])
    r = trim([c % M for c in r])
    q = trim([c % M for c in q])
    return q, r


def phi_expansion(f, phi):
    """Coefficients [a_0, .., a_m] with f = sum a_i phi^i, deg a_i < deg phi.

    Exact over the integers.  ``phi`` must be monic of degree >= 1.
    """
    if not is_monic(phi) or degree(phi) < 1:
        raise ValueError("phi must be monic of degree >= 1")
    out = []
    r = list(f)
    if not r:
        return [[]]
    while r:
        r, a = divmod_monic(r, phi)
        out.append(a)
    return out


def phi_expansion_mod(f, phi, M):
    """phi-adic expansion with all coefficients reduced mod M."""
    if not is_monic(phi) or degree(phi) < 1:
        raise ValueError("phi must be monic of degree >= 1")
    out = []
    r = [c % M for c in f]
    trim(r)
    if not r:
        return [[]]
    while r:
        r, a = divmod_monic_mod(r, phi, M)
        out.append(a)
    return out


# ---------------------------------------------------------------------------
# misc


def eval_at(f, x):
    out = 0
    for c in reversed(f):
        out = out * x + c
    return out


def derivative(f):
    return trim([i * c for i, c in enumerate(f) if i >= 1])


def content(f):
    g = 0
    for c in f:
        g = gmpy2.gcd(g, c)
        if g == 1:
            return 1
    return int(g)


def val_p(n, p):
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of zero")
    return int(gmpy2.remove(mpz(n), mpz(p))[1])


def reduce_mod_p(f, p):
    return trim([c % p for c in f])


def compose(f, g):
    """f(g(x)), exact."""
    out = []
    for c in reversed(f):
        out = add(mul(out, g), constant(c))
    return out


# ---------------------------------------------------------------------------
# resultants (small degrees; used by ideal norms and discriminants)


def _resultant_mod(f, g, p):
    """Resultant of f, g modulo an odd prime p (f, g nonzero mod p)."""
    a = [c % p for c in f]
    b = [c % p for c in g]
    trim(a)
    trim(b)
    if not a or not b:
        return 0
    res = 1
    while True:
        da, db = len(a) - 1, len(b) - 1
        if db == 0:
            return res * pow(b[0], da, p) % p
        # a = q*b + r mod p
        lb = b[-1]
        linv = pow(lb, p - 2, p)
        r = list(a)
        for i in range(da, db - 1, -1):
            c = r[i] * linv % p
            if c:
                for j in range(db + 1):
                    r[i - db + j] = (r[i - db + j] - c * b[j]) % p
        trim(r)
        if not r:
            return 0
        dr = len(r) - 1
        res = res * pow(lb, da - dr, p) % p
        if (da * db) & 1:
            res = p - res
        a, b = b, r


def resultant(f, g):
    """Resultant over Z by CRT over word-size primes."""
    if not f or not g:
        return 0
    if degree(f) == 0:
        return f[0] ** degree(g)
    if degree(g) == 0:
        return g[0] ** degree(f)
    # Hadamard-style bound
    import math

    nf = math.isqrt(sum(int(c * c) for c in f)) + 1
    ng = math.isqrt(sum(int(c * c) for c in g)) + 1
    bound = 2 * (nf ** degree(g)) * (ng ** degree(f))
    M = 1
    res = 0
    p = (1 << 61) - 1
    while M <= bound:
        p = int(gmpy2.next_prime(p))
        if f[-1] % p == 0 or g[-1] % p == 0:
            continue
        rp = _resultant_mod(f, g, p)
        if M == 1:
            res, M = rp, p
        else:
            # combine res mod M with rp mod p
            h = (rp - res) * int(gmpy2.invert(M, p)) % p
            res += M * h
            M *= p
    if res > M // 2:
        res -= M
    return res


def discriminant(f):
    """Discriminant of f over Z."""
    n = degree(f)
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    r = resultant(f, derivative(f))
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    # disc = sign * res / lc
    return sign * (r // f[-1])


# ---------------------------------------------------------------------------
# text format


def render(f, var="x"):
    """Plain text form, descending powers: "x^4 + 4*x^3 + 8*x^2 + 8*x + 7"."""
    if not f:
        return "0"
    parts = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if not c:
            continue
        if i == 0:
            term = str(abs(c))
        else:
            xi = var if i == 1 else "%s^%d" % (var, i)
            term = xi if abs(c) == 1 else "%d*%s" % (abs(c), xi)
        if not parts:
            parts.append(term if c > 0 else "-" + term)
        else:
            parts.append(("+ " if c > 0 else "- ") + term)
    return " ".join(parts)


_ALLOWED_NODES = (
    ast.Expression,
    ast.BinOp,
    ast.UnaryOp,
    ast.Add,
    ast.Sub,
    ast.Mult,
    ast.Pow,
    ast.USub,
    ast.UAdd,
    ast.Constant,
    ast.Name,
    ast.Load,
)


def _from_node(node, var):
    if isinstance(node, ast.Expression):
        return _from_node(node.body, var)
    if isinstance(node, ast.Constant):
        if not isinstance(node.value, int):
            raise ValueError("only integer coefficients are supported")
        return constant(node.value)
    if isinstance(node, ast.Name):
        if node.id != var:
            raise ValueError("unknown variable %r" % node.id)
        return list(X)
    if isinstance(node, ast.UnaryOp):
        v = _from_node(node.operand, var)
        return neg(v) if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            base = _from_node(node.left, var)
            if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                raise ValueError("exponent must be a literal integer")
            k = node.right.value
            if k < 0:
                raise ValueError("negative exponent")
            out = [1]
            for _ in range(k):
                out = mul(out, base)
            return out
        a = _from_node(node.left, var)
        b = _from_node(node.right, var)
        if isinstance(node.op, ast.Add):
            return add(a, b)
        if isinstance(node.op, ast.Sub):
            return sub(a, b)
        if isinstance(node.op, ast.Mult):
            return mul(a, b)
    raise ValueError("unsupported syntax in polynomial expression")


def parse(text, var="x"):
    """Parse an integer polynomial expression such as "x^1000 + 2^50*x^50"."""
    try:
        tree = ast.parse(text.replace("^", "**").strip(), mode="eval")
    except SyntaxError as exc:
        raise ValueError("cannot parse polynomial: %s" % exc) from None
    for node in ast.walk(tree):
        if not isinstance(node, _ALLOWED_NODES):
            raise ValueError("unsupported syntax: %s" % type(node).__name__)
    return _from_node(tree, var)
