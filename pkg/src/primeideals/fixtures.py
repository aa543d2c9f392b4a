"""Named fixture polynomials used by the test-suite and the CLI.

``division_polynomial`` implements the standard recurrence for the n-th
division polynomial of an elliptic curve in Weierstrass form; the
``div17`` fixture rescales the 17-division polynomial of
y^2 = x^3 + 3x^2 + 3x into a monic integral polynomial of degree 144.
"""

from __future__ import annotations

from . import zx
from .ff import DomainError


def b_invariants(a1, a2, a3, a4, a6):
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = (a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3
          - a4 * a4)
    return b2, b4, b6, b8


def division_polynomial(a_invariants, n):
    """The n-th division polynomial in x alone (n odd), or the cofactor of
    psi_2 (n even), via the doubling recurrences."""
    if n < 1:
        raise DomainError("division polynomial index must be positive")
    b2, b4, b6, b8 = b_invariants(*a_invariants)
    # B = psi_2^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    B = [b6, 2 * b4, b2, 4]
    cache = {
        0: [],
        1: [1],
        2: [1],
        3: [b8, 3 * b6, 3 * b4, b2, 3],
        4: [b4 * b8 - b6 * b6, b2 * b8 - b4 * b6, 10 * b8, 10 * b6,
            5 * b4, b2, 2],
    }

    def f(k):
        if k not in cache:
            m, r = divmod(k, 2)
            if r:
                a = zx.mul(f(m + 2), zx.pow_int(f(m), 3))
                b = zx.mul(f(m - 1), zx.pow_int(f(m + 1), 3))
                B2 = zx.mul(B, B)
                if m % 2 == 0:
                    cache[k] = zx.sub(zx.mul(B2, a), b)
                else:
                    cache[k] = zx.sub(a, zx.mul(B2, b))
            else:
                inner = zx.sub(zx.mul(f(m + 2), zx.mul(f(m - 1), f(m - 1))),
                               zx.mul(f(m - 2), zx.mul(f(m + 1), f(m + 1))))
                cache[k] = zx.mul(f(m), inner)
        return cache[k]

    return f(n)


def rescale_monic(f, c):
    """c^(n-1) * f(x/c) for integer c: monic when f has leading
    coefficient c."""
    n = zx.degree(f)
    if f[-1] != c:
        raise DomainError("rescaled polynomial is not monic")
    return [f[i] * c ** (n - 1 - i) for i in range(n)] + [1]


def intro_polynomial():
    """x^100 - x^75 + x^50 + 2^500."""
    f = [0] * 100 + [1]
    f[75] = -1
    f[50] = 1
    f[0] = 2 ** 500
    return f


def deg1000_polynomial():
    """x^1000 + 2^50 x^50 + 2^60."""
    f = [0] * 1000 + [1]
    f[50] = 2 ** 50
    f[0] = 2 ** 60
    return f


def div17_polynomial():
    """Monic degree-144 rescaling of the 17-division polynomial of the
    curve y^2 = x^3 + 3x^2 + 3x."""
    psi = division_polynomial((0, 3, 0, 3, 0), 17)
    return rescale_monic(psi, 17)


def modular6_polynomial():
    """A sextic field generated by a weight-0 modular function; the
    coefficients are a transcription of a published example."""
    return [
        -92217203874207784163935379997152082331434364841943058919508374716416,
        290013995562379500498435975003716024800114593761580810240,
        9757628454131691442128845013041495838774263808,
        -11405115067164354385292006554337280,
        -198007918566571424544768,
        57080822040,
        1,
    ]


def family_polynomial(n, r):
    """x^n + r^(n-1) x - r^n."""
    f = [0] * n + [1]
    f[1] = r ** (n - 1)
    f[0] = -(r ** n)
    return f


NAMED = {
    "intro": intro_polynomial,
    "deg1000": deg1000_polynomial,
    "div17": div17_polynomial,
    "modular6": modular6_polynomial,
}


def by_name(name):
    try:
        return NAMED[name]()
    except KeyError:
        raise DomainError("unknown fixture %r (have: %s)" %
                          (name, ", ".join(sorted(NAMED))))
